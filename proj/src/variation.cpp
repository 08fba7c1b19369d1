#include "mfcz/variation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mfcz {

VectorSequence::VectorSequence(std::vector<std::int64_t> keys, std::vector<Complex> values,
                               std::size_t dim)
    : keys_(std::move(keys)), values_(std::move(values)), dim_(dim) {
  if (dim_ == 0) throw std::invalid_argument("VectorSequence: dim must be >= 1");
  if (values_.size() != keys_.size() * dim_) {
    throw std::invalid_argument("VectorSequence: values size must be keys.size() * dim");
  }
  for (std::size_t i = 1; i < keys_.size(); ++i) {
    if (keys_[i] <= keys_[i - 1]) {
      throw std::invalid_argument("VectorSequence: keys must be strictly increasing");
    }
  }
  for (const Complex& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("VectorSequence: non-finite entry");
    }
  }
}

VectorSequence VectorSequence::scalar(std::span<const double> values, std::int64_t first_key) {
  std::vector<std::int64_t> keys(values.size());
  std::vector<Complex> vals(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    keys[i] = first_key + static_cast<std::int64_t>(i);
    vals[i] = values[i];
  }
  return VectorSequence(std::move(keys), std::move(vals), 1);
}

VectorSequence VectorSequence::scalar(std::span<const Complex> values, std::int64_t first_key) {
  std::vector<std::int64_t> keys(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) keys[i] = first_key + static_cast<std::int64_t>(i);
  return VectorSequence(std::move(keys), std::vector<Complex>(values.begin(), values.end()), 1);
}

double VectorSequence::norm_at(std::size_t i) const {
  double s = 0.0;
  for (const Complex& v : value(i)) s += std::norm(v);
  return std::sqrt(s);
}

double VectorSequence::distance(std::size_t i, std::size_t j) const {
  const auto a = value(i);
  const auto b = value(j);
  if (dim_ == 1) return std::abs(a[0] - b[0]);
  double s = 0.0;
  for (std::size_t t = 0; t < dim_; ++t) s += std::norm(a[t] - b[t]);
  return std::sqrt(s);
}

double VectorSequence::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) d = std::max(d, distance(i, j));
  return d;
}

double VectorSequence::min_distinct_distance() const {
  double d = kInf;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) {
      const auto a = value(i);
      const auto b = value(j);
      if (std::equal(a.begin(), a.end(), b.begin())) continue;
      d = std::min(d, distance(i, j));
    }
  }
  return d;
}

namespace {

void require_r(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("variation: need r > 0");
}

// Maximum-weight increasing path with edge weight dist(i, j)^r. Every
// admissible subsequence k_0 < ... < k_M is a path, and conversely.
template <typename Dist>
double tilde_variation_impl(std::size_t n, double r, Dist&& dist) {
  if (n == 0) throw std::invalid_argument("variation: empty sequence");
  require_r(r);
  if (std::isinf(r)) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m = std::max(m, dist(i, j));
    return m;
  }
  std::vector<double> best(n, 0.0);
  double top = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    double b = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      const double d = dist(i, j);
      const double w = (r == 1.0) ? d : (r == 2.0 ? d * d : std::pow(d, r));
      b = std::max(b, best[i] + w);
    }
    best[j] = b;
    top = std::max(top, b);
  }
  if (r == 1.0) return top;
  if (r == 2.0) return std::sqrt(top);
  return std::pow(top, 1.0 / r);
}

}  // namespace

double tilde_variation(const VectorSequence& s, double r) {
  return tilde_variation_impl(s.size(), r, [&](std::size_t i, std::size_t j) { return s.distance(i, j); });
}

double variation(const VectorSequence& s, double r) {
  double sup = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) sup = std::max(sup, s.norm_at(i));
  return sup + tilde_variation(s, r);
}

double tilde_variation(std::span<const Complex> values, double r) {
  return tilde_variation_impl(values.size(), r,
                              [&](std::size_t i, std::size_t j) { return std::abs(values[j] - values[i]); });
}

double variation(std::span<const Complex> values, double r) {
  double sup = 0.0;
  for (const Complex& v : values) sup = std::max(sup, std::abs(v));
  return sup + tilde_variation(values, r);
}

double tilde_variation_bruteforce(const VectorSequence& s, double r) {
  const std::size_t n = s.size();
  if (n == 0) throw std::invalid_argument("variation: empty sequence");
  require_r(r);
  if (n > kBruteforceMaxLength) {
    std::ostringstream msg;
    msg << "tilde_variation_bruteforce: length " << n << " exceeds " << kBruteforceMaxLength;
    throw std::invalid_argument(msg.str());
  }
  double best = 0.0;
  std::vector<std::size_t> chosen;
  chosen.reserve(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    chosen.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) chosen.push_back(i);
    if (chosen.size() < 2) continue;
    double total = 0.0;
    for (std::size_t t = 1; t < chosen.size(); ++t) {
      const double d = s.distance(chosen[t - 1], chosen[t]);
      total = std::isinf(r) ? std::max(total, d) : total + std::pow(d, r);
    }
    best = std::max(best, total);
  }
  return std::isinf(r) ? best : std::pow(best, 1.0 / r);
}

JumpCover jump_cover(const VectorSequence& s, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("jump_cover: need lambda > 0");
  if (s.size() == 0) throw std::invalid_argument("jump_cover: empty sequence");
  JumpCover cover;
  cover.lambda = lambda;
  std::size_t anchor = 0;
  cover.positions.push_back(anchor);
  for (std::size_t j = 1; j < s.size(); ++j) {
    // Closed ball: a value at distance exactly lambda stays inside.
    if (s.distance(anchor, j) > lambda) {
      anchor = j;
      cover.positions.push_back(j);
    }
  }
  cover.indices.reserve(cover.positions.size());
  for (std::size_t p : cover.positions) cover.indices.push_back(s.keys()[p]);
  return cover;
}

ParentTable parent_table(const VectorSequence& s, double lambda0) {
  if (s.size() == 0) throw std::invalid_argument("parent_table: empty sequence");
  const double min_dist = s.min_distinct_distance();
  if (!(lambda0 > 0.0) || !(lambda0 < min_dist)) {
    std::ostringstream msg;
    msg << "parent_table: need 0 < lambda0 < " << min_dist
        << " (minimal distance between distinct values), got " << lambda0;
    throw std::invalid_argument(msg.str());
  }
  const double diam = s.diameter();
  int n_max = 0;
  while (std::ldexp(lambda0, n_max) < diam) ++n_max;

  ParentTable table;
  table.lambda0 = lambda0;
  table.n_max = n_max;
  table.keys.assign(s.keys().begin(), s.keys().end());
  table.rows.resize(static_cast<std::size_t>(n_max + 2));

  std::vector<std::size_t>& identity = table.rows[0];
  identity.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) identity[i] = i;

  for (int n = 0; n <= n_max; ++n) {
    const JumpCover cover = jump_cover(s, std::ldexp(lambda0, n));
    const auto& prev = table.rows[static_cast<std::size_t>(n)];
    auto& row = table.rows[static_cast<std::size_t>(n + 1)];
    row.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      // The unique anchor l(2^n lambda0, m) <= rho(n-1, k) < l(2^n lambda0, m+1).
      auto it = std::upper_bound(cover.positions.begin(), cover.positions.end(), prev[i]);
      row[i] = *std::prev(it);
    }
  }
  return table;
}

double telescoping_residual(const VectorSequence& s, const ParentTable& table) {
  double worst = 0.0;
  const std::size_t d = s.dim();
  std::vector<Complex> acc(d);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto first = s.value(0);
    std::copy(first.begin(), first.end(), acc.begin());
    for (int n = 0; n < table.n_max; ++n) {
      const auto a = s.value(table.parent_position(n, i));
      const auto b = s.value(table.parent_position(n + 1, i));
      for (std::size_t t = 0; t < d; ++t) acc[t] += a[t] - b[t];
    }
    const auto target = s.value(i);
    for (std::size_t t = 0; t < d; ++t) worst = std::max(worst, std::abs(acc[t] - target[t]));
  }
  return worst;
}

IndexBlock rm_block(std::int64_t l, int m) {
  if (l < 0 || m < 0 || m > 61) throw std::invalid_argument("rm_block: need l >= 0 and 0 <= m <= 61");
  if (((l >> m) & 1) == 0) return {0, 0};
  const std::int64_t parent_lo = (l >> (m + 1)) << (m + 1);
  return {parent_lo, parent_lo + (std::int64_t{1} << m)};
}

}  // namespace mfcz
