#include "mfcz/signal_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace mfcz {

ParseError::ParseError(std::size_t row, const std::string& what)
    : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& field, std::size_t row) {
  if (field.empty()) throw ParseError(row, "empty field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError(row, "not a finite number: '" + field + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& field, std::size_t row) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(field.c_str(), &end, 10);
  if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE) {
    throw ParseError(row, "not an integer: '" + field + "'");
  }
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Fn>
void with_input(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  fn(in);
}

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  fn(out);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

SampledSignal read_signal_csv(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ++row;
  const auto header = split(line);
  if (header.size() != 3 || header[0] != "x" || header[1] != "re" || header[2] != "im") {
    throw ParseError(row, "header must be 'x,re,im'");
  }
  std::vector<double> xs;
  std::vector<Complex> samples;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != 3) throw ParseError(row, "expected 3 fields");
    const double x = parse_double(fields[0], row);
    if (!xs.empty() && !(x > xs.back())) throw ParseError(row, "x must be strictly increasing");
    xs.push_back(x);
    samples.emplace_back(parse_double(fields[1], row), parse_double(fields[2], row));
  }
  if (xs.size() < 2) throw ParseError(row, "need at least two samples to infer the grid spacing");
  const double x0 = xs.front();
  const double dx = (xs.back() - x0) / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double expected = x0 + static_cast<double>(i) * dx;
    if (std::abs(xs[i] - expected) > 1e-9 * dx) {
      throw ParseError(i + 2, "grid is not uniform (x = " + fmt(xs[i]) + ", expected " + fmt(expected) + ")");
    }
  }
  return SampledSignal(std::move(samples), x0, dx);
}

SampledSignal read_signal_csv(const std::string& path) {
  SampledSignal out = SampledSignal::zeros(1, 0.0, 1.0);
  with_input(path, [&](std::istream& in) { out = read_signal_csv(in); });
  return out;
}

void write_signal_csv(std::ostream& out, const SampledSignal& f) {
  out << "x,re,im\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    out << fmt(f.x(i)) << ',' << fmt(f[i].real()) << ',' << fmt(f[i].imag()) << '\n';
  }
}

void write_signal_csv(const std::string& path, const SampledSignal& f) {
  with_output(path, [&](std::ostream& out) { write_signal_csv(out, f); });
}

VectorSequence read_sequence_csv(std::istream& in) {
  std::string line;
  std::size_t row = 1;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "k") throw ParseError(row, "header must start with 'k,'");
  const bool complex_values = header[1].size() > 3 && header[1].ends_with("_re");
  const std::size_t columns = header.size() - 1;
  if (complex_values && columns % 2 != 0) throw ParseError(row, "complex header needs _re/_im pairs");
  const std::size_t dim = complex_values ? columns / 2 : columns;

  std::vector<std::int64_t> keys;
  std::vector<Complex> values;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) throw ParseError(row, "wrong number of fields");
    const std::int64_t k = parse_int(fields[0], row);
    if (!keys.empty() && k <= keys.back()) throw ParseError(row, "keys must be strictly increasing");
    keys.push_back(k);
    for (std::size_t t = 0; t < dim; ++t) {
      if (complex_values) {
        values.emplace_back(parse_double(fields[1 + 2 * t], row), parse_double(fields[2 + 2 * t], row));
      } else {
        values.emplace_back(parse_double(fields[1 + t], row), 0.0);
      }
    }
  }
  if (keys.empty()) throw ParseError(row, "no data rows");
  return VectorSequence(std::move(keys), std::move(values), dim);
}

VectorSequence read_sequence_csv(const std::string& path) {
  std::vector<Complex> one{Complex{}};
  VectorSequence out({0}, one, 1);
  with_input(path, [&](std::istream& in) { out = read_sequence_csv(in); });
  return out;
}

void write_sequence_csv(std::ostream& out, const VectorSequence& s) {
  bool complex_values = false;
  for (const Complex& v : s.values()) complex_values = complex_values || v.imag() != 0.0;
  out << 'k';
  for (std::size_t t = 1; t <= s.dim(); ++t) {
    if (complex_values) {
      out << ",v" << t << "_re,v" << t << "_im";
    } else {
      out << ",v" << t;
    }
  }
  out << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << s.keys()[i];
    for (const Complex& v : s.value(i)) {
      out << ',' << fmt(v.real());
      if (complex_values) out << ',' << fmt(v.imag());
    }
    out << '\n';
  }
}

void write_sequence_csv(const std::string& path, const VectorSequence& s) {
  with_output(path, [&](std::ostream& out) { write_sequence_csv(out, s); });
}

}  // namespace mfcz
