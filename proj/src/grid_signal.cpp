#include "mfcz/grid_signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fft.hpp"

namespace mfcz {

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
  if (!(a_ < b_) || !std::isfinite(a_) || !std::isfinite(b_)) {
    std::ostringstream msg;
    msg << "Interval: need finite a < b, got [" << a_ << ", " << b_ << ")";
    throw std::invalid_argument(msg.str());
  }
}

Interval Interval::dilate(double c) const {
  const double half = 0.5 * c * length();
  return {center() - half, center() + half};
}

double DyadicInterval::length() const { return std::ldexp(1.0, k); }

Interval DyadicInterval::interval() const {
  const double len = length();
  return {len * static_cast<double>(n), len * static_cast<double>(n + 1)};
}

DyadicInterval DyadicInterval::containing(double x, int k) {
  return {k, static_cast<std::int64_t>(std::floor(std::ldexp(x, -k)))};
}

FrequencySet::FrequencySet(std::vector<double> xi) : xi_(std::move(xi)) {
  if (xi_.empty()) throw std::invalid_argument("FrequencySet: need at least one frequency");
  for (std::size_t j = 0; j < xi_.size(); ++j) {
    if (!std::isfinite(xi_[j])) throw std::invalid_argument("FrequencySet: non-finite frequency");
    if (j > 0 && !(xi_[j] - xi_[j - 1] >= kMinGap)) {
      std::ostringstream msg;
      msg << "FrequencySet: frequencies must be strictly increasing with gap >= " << kMinGap
          << " (position " << j << ": " << xi_[j - 1] << ", " << xi_[j] << ")";
      throw std::invalid_argument(msg.str());
    }
  }
}

double FrequencySet::min_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < xi_.size(); ++j) gap = std::min(gap, xi_[j] - xi_[j - 1]);
  return gap;
}

double FrequencySet::max_abs() const {
  return std::max(std::abs(xi_.front()), std::abs(xi_.back()));
}

FrequencySet FrequencySet::scaled(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("FrequencySet::scaled: need s > 0");
  std::vector<double> out(xi_);
  for (double& v : out) v *= s;
  return FrequencySet(std::move(out));
}

FrequencySet FrequencySet::shifted(double t) const {
  std::vector<double> out(xi_);
  for (double& v : out) v += t;
  return FrequencySet(std::move(out));
}

SampledSignal::SampledSignal(std::vector<Complex> samples, double x0, double dx)
    : samples_(std::move(samples)), x0_(x0), dx_(dx) {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::invalid_argument("SampledSignal: need dx > 0");
  if (!std::isfinite(x0)) throw std::invalid_argument("SampledSignal: non-finite x0");
  if (samples_.empty()) throw std::invalid_argument("SampledSignal: need at least one sample");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i].real()) || !std::isfinite(samples_[i].imag())) {
      std::ostringstream msg;
      msg << "SampledSignal: non-finite sample at index " << i;
      throw std::invalid_argument(msg.str());
    }
  }
}

SampledSignal SampledSignal::zeros(std::size_t n, double x0, double dx) {
  return SampledSignal(std::vector<Complex>(n), x0, dx);
}

std::pair<std::size_t, std::size_t> SampledSignal::index_range(const Interval& J) const {
  constexpr double snap = 1e-9;
  const double n = static_cast<double>(samples_.size());
  auto first_at_or_after = [&](double t) {
    const double u = std::ceil((t - x0_) / dx_ - snap);
    return static_cast<std::size_t>(std::clamp(u, 0.0, n));
  };
  const std::size_t lo = first_at_or_after(J.a);
  const std::size_t hi = first_at_or_after(J.b);
  return {lo, std::max(lo, hi)};
}

SampledSignal SampledSignal::with_samples(std::vector<Complex> samples) const {
  if (samples.size() != samples_.size()) {
    throw std::invalid_argument("SampledSignal::with_samples: size mismatch");
  }
  return SampledSignal(std::move(samples), x0_, dx_);
}

namespace {

void require_same_grid(const SampledSignal& f, const SampledSignal& g) {
  if (f.size() != g.size() || f.x0() != g.x0() || f.dx() != g.dx()) {
    throw std::invalid_argument("SampledSignal: grids differ");
  }
}

}  // namespace

SampledSignal SampledSignal::operator+(const SampledSignal& other) const {
  require_same_grid(*this, other);
  std::vector<Complex> out(samples_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.samples_[i];
  return SampledSignal(std::move(out), x0_, dx_);
}

SampledSignal SampledSignal::operator-(const SampledSignal& other) const {
  require_same_grid(*this, other);
  std::vector<Complex> out(samples_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= other.samples_[i];
  return SampledSignal(std::move(out), x0_, dx_);
}

SampledSignal SampledSignal::operator*(Complex s) const {
  std::vector<Complex> out(samples_);
  for (auto& v : out) v *= s;
  return SampledSignal(std::move(out), x0_, dx_);
}

Complex integrate(const SampledSignal& f, const Interval& J) {
  const auto [lo, hi] = f.index_range(J);
  Complex sum{0.0, 0.0};
  for (std::size_t i = lo; i < hi; ++i) sum += f[i];
  return sum * f.dx();
}

double norm(const SampledSignal& f, const Interval& J, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm: need p >= 1");
  const auto [lo, hi] = f.index_range(J);
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(f[i]));
    return m;
  }
  double sum = 0.0;
  if (p == 1.0) {
    for (std::size_t i = lo; i < hi; ++i) sum += std::abs(f[i]);
    return sum * f.dx();
  }
  if (p == 2.0) {
    for (std::size_t i = lo; i < hi; ++i) sum += std::norm(f[i]);
    return std::sqrt(sum * f.dx());
  }
  for (std::size_t i = lo; i < hi; ++i) sum += std::pow(std::abs(f[i]), p);
  return std::pow(sum * f.dx(), 1.0 / p);
}

double norm(const SampledSignal& f, double p) { return norm(f, f.domain(), p); }

SampledSignal restrict_to(const SampledSignal& f, const Interval& J) {
  const auto [lo, hi] = f.index_range(J);
  std::vector<Complex> out(f.size());
  std::copy(f.samples().begin() + static_cast<std::ptrdiff_t>(lo),
            f.samples().begin() + static_cast<std::ptrdiff_t>(hi),
            out.begin() + static_cast<std::ptrdiff_t>(lo));
  return f.with_samples(std::move(out));
}

double bin_frequency(std::size_t m, std::size_t n, double dx) {
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  auto signed_m = static_cast<std::ptrdiff_t>(m);
  if (signed_m >= static_cast<std::ptrdiff_t>(n) - half) signed_m -= static_cast<std::ptrdiff_t>(n);
  return static_cast<double>(signed_m) / (static_cast<double>(n) * dx);
}

std::vector<Complex> dft(const SampledSignal& f) {
  std::vector<Complex> data(f.samples().begin(), f.samples().end());
  detail::fft_inplace(data, false);
  const std::size_t n = data.size();
  for (std::size_t m = 0; m < n; ++m) {
    const double nu = bin_frequency(m, n, f.dx());
    data[m] *= f.dx() * std::polar(1.0, -kTwoPi * nu * f.x0());
  }
  return data;
}

SampledSignal idft(std::span<const Complex> spectrum, double x0, double dx) {
  std::vector<Complex> data(spectrum.begin(), spectrum.end());
  const std::size_t n = data.size();
  const double weight = 1.0 / (static_cast<double>(n) * dx);
  for (std::size_t m = 0; m < n; ++m) {
    const double nu = bin_frequency(m, n, dx);
    data[m] *= weight * std::polar(1.0, kTwoPi * nu * x0);
  }
  detail::fft_inplace(data, true);
  return SampledSignal(std::move(data), x0, dx);
}

std::vector<SampledSignal> apply_multipliers(const SampledSignal& f,
                                             std::span<const Symbol> symbols) {
  std::vector<Complex> spectrum(f.samples().begin(), f.samples().end());
  detail::fft_inplace(spectrum, false);
  const std::size_t n = spectrum.size();
  std::vector<double> freqs(n);
  for (std::size_t m = 0; m < n; ++m) freqs[m] = bin_frequency(m, n, f.dx());

  std::vector<SampledSignal> out;
  out.reserve(symbols.size());
  std::vector<Complex> work(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (const Symbol& symbol : symbols) {
    for (std::size_t m = 0; m < n; ++m) work[m] = spectrum[m] * symbol(freqs[m]) * inv_n;
    detail::fft_inplace(work, true);
    out.emplace_back(work, f.x0(), f.dx());
  }
  return out;
}

SampledSignal apply_multiplier(const SampledSignal& f, const Symbol& symbol) {
  return std::move(apply_multipliers(f, std::span<const Symbol>(&symbol, 1)).front());
}

}  // namespace mfcz
