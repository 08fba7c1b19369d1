#include "mfcz/multifreq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace mfcz {

namespace {

double jet_derivative(double t, int order) {
  if (!(t > 0.0 && t < 1.0)) return 0.0;
  const double u0 = t * (1.0 - t);
  const double u1 = 1.0 - 2.0 * t;
  const double u2 = -1.0;
  std::array<double, MotherSymbol::kMaxOrder + 1> w{};
  std::array<double, MotherSymbol::kMaxOrder + 1> e{};
  w[0] = 1.0 / u0;
  e[0] = std::exp(4.0 - w[0]);
  if (e[0] == 0.0) return 0.0;
  for (int n = 1; n <= order; ++n) {
    double acc = u1 * w[n - 1];
    if (n >= 2) acc += u2 * w[n - 2];
    w[n] = -acc / u0;
  }
  // h = 4 - w, e = exp(h): n e_n = sum_{k=1}^n k h_k e_{n-k}.
  double factorial = 1.0;
  for (int n = 1; n <= order; ++n) {
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) acc += k * (-w[k]) * e[n - k];
    e[n] = acc / n;
    factorial *= n;
  }
  return factorial * e[order];
}

// Maximizes |m^{(order)}| on (0, 1/2] by a grid search and golden-section
// refinement.
std::pair<double, double> locate_sup(int order) {
  if (order == 0) return {1.0, 0.5};
  constexpr int kCells = 8192;
  const double h = 1.0 / kCells;
  int best = 1;
  double best_value = 0.0;
  for (int i = 1; i <= kCells / 2; ++i) {
    const double v = std::abs(jet_derivative(i * h, order));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  auto f = [order](double t) { return std::abs(jet_derivative(t, order)); };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = (best - 1) * h;
  double b = std::min(0.5 + h, (best + 1) * h);
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  const double t = 0.5 * (a + b);
  const double v = f(t);
  if (v >= best_value) return {v, t};
  return {best_value, best * h};
}

struct SupTable {
  std::array<double, MotherSymbol::kMaxOrder + 1> sup{};
  std::array<double, MotherSymbol::kMaxOrder + 1> arg{};
  SupTable() {
    for (int M = 0; M <= MotherSymbol::kMaxOrder; ++M) std::tie(sup[M], arg[M]) = locate_sup(M);
  }
};

const SupTable& sup_table() {
  static const SupTable table;
  return table;
}

void check_order(int order) {
  if (order < 0 || order > MotherSymbol::kMaxOrder) {
    throw std::invalid_argument("derivative order must be in [0, " + std::to_string(MotherSymbol::kMaxOrder) + "]");
  }
}

double log2_floor_exact(double v, bool ceil_instead) {
  // Exact for the power-of-two products that occur on dyadic grids.
  int e = static_cast<int>(std::floor(std::log2(v)));
  while (std::ldexp(1.0, e + 1) <= v) ++e;
  while (std::ldexp(1.0, e) > v) --e;
  if (ceil_instead && std::ldexp(1.0, e) < v) ++e;
  return e;
}

std::vector<std::int64_t> occupied_cells(const FrequencySet& X, int k) {
  std::vector<std::int64_t> cells;
  cells.reserve(X.size());
  for (double xi : X.values()) cells.push_back(static_cast<std::int64_t>(std::floor(std::ldexp(xi, -k))));
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

Symbol delta_symbol(const FrequencySet& X, int k, const MultiplierFamily& fam) {
  return [cells = occupied_cells(X, k), k, &fam](double nu) -> Complex {
    const double scaled = std::ldexp(nu, -k);
    const double n = std::floor(scaled);
    if (!std::binary_search(cells.begin(), cells.end(), static_cast<std::int64_t>(n))) return 0.0;
    return fam.mother().value(scaled - n);
  };
}

void check_grid(const FrequencySet& xi, std::size_t grid) {
  if (static_cast<double>(grid) < 4.0 * (1.0 + xi.max_abs())) {
    std::ostringstream msg;
    msg << "grid of " << grid << " points is too coarse for max |xi| = " << xi.max_abs()
        << "; need at least 4 (1 + max |xi|)";
    throw std::invalid_argument(msg.str());
  }
}

// Calls visit(values) with the scalar sequence k -> sum_j c_{k,j} e(xi_j y)
// at every node y = i / grid.
template <typename Visit>
void sweep_nodes(const VectorSequence& c, const FrequencySet& xi, std::size_t grid, Visit&& visit) {
  if (c.dim() != xi.size()) throw std::invalid_argument("sequence dimension must equal the number of frequencies");
  std::vector<Complex> e(xi.size());
  std::vector<Complex> values(c.size());
  for (std::size_t i = 0; i < grid; ++i) {
    const double y = static_cast<double>(i) / static_cast<double>(grid);
    for (std::size_t j = 0; j < xi.size(); ++j) e[j] = std::polar(1.0, kTwoPi * xi[j] * y);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const auto row = c.value(k);
      Complex acc;
      for (std::size_t j = 0; j < xi.size(); ++j) acc += row[j] * e[j];
      values[k] = acc;
    }
    visit(std::span<const Complex>(values));
  }
}

void check_unit_gap(const FrequencySet& xi) {
  if (xi.size() > 1 && xi.min_gap() < 1.0) {
    throw std::invalid_argument("frequencies must be separated by at least 1");
  }
}

}  // namespace

MotherSymbol::MotherSymbol() {
  const SupTable& table = sup_table();
  sup_ = table.sup;
  argsup_ = table.arg;
}

double MotherSymbol::derivative(double t, int order) const {
  check_order(order);
  return jet_derivative(t, order);
}

double MotherSymbol::sup_derivative(int order) const {
  check_order(order);
  return sup_[static_cast<std::size_t>(order)];
}

double MotherSymbol::argsup(int order) const {
  check_order(order);
  return argsup_[static_cast<std::size_t>(order)];
}

double MultiplierFamily::phi_hat(const DyadicInterval& omega, double xi) const {
  const double t = std::ldexp(xi, -omega.k) - static_cast<double>(omega.n);
  if (!(t > 0.0 && t < 1.0)) return 0.0;
  return mother_.value(t);
}

double MultiplierFamily::cell_position(double xi, int k) {
  const double scaled = std::ldexp(xi, -k);
  return scaled - std::floor(scaled);
}

bool KRange::valid_for(double length, double dx) const {
  if (lo > hi) return false;
  return std::ldexp(length, lo) >= 8.0 * (1.0 - 1e-12) && std::ldexp(dx, hi) <= 0.5 * (1.0 + 1e-12);
}

void KRange::validate(const SampledSignal& f) const {
  if (!valid_for(f.length(), f.dx())) {
    const KRange w = widest(f);
    std::ostringstream msg;
    msg << "k range " << lo << ":" << hi << " is not valid for this grid (valid scales are " << w.lo << ":" << w.hi
        << ")";
    throw std::invalid_argument(msg.str());
  }
}

KRange KRange::widest(const SampledSignal& f) {
  KRange out;
  out.lo = static_cast<int>(log2_floor_exact(8.0 / f.length(), true));
  out.hi = static_cast<int>(log2_floor_exact(0.5 / f.dx(), false));
  if (out.lo > out.hi) throw std::invalid_argument("grid too small for any scale: need at least 16 points");
  return out;
}

double SmoothingKernel::hat(double xi) const {
  const double s = 1.0 - xi * xi;
  if (!(s > 0.0)) return 0.0;
  return std::exp(1.0 - 1.0 / s);
}

SampledSignal delta_k(const SampledSignal& f, const FrequencySet& X, int k, const MultiplierFamily& fam) {
  KRange{k, k}.validate(f);
  return apply_multiplier(f, delta_symbol(X, k, fam));
}

std::vector<SampledSignal> delta_all(const SampledSignal& f, const FrequencySet& X, const KRange& ks,
                                     const MultiplierFamily& fam) {
  ks.validate(f);
  std::vector<Symbol> symbols;
  for (int k = ks.lo; k <= ks.hi; ++k) symbols.push_back(delta_symbol(X, k, fam));
  return apply_multipliers(f, symbols);
}

SampledSignal calV(const SampledSignal& f, const FrequencySet& X, const KRange& ks, double q,
                   const MultiplierFamily& fam) {
  const std::vector<SampledSignal> deltas = delta_all(f, X, ks, fam);
  std::vector<Complex> out(f.size());
  std::vector<Complex> seq(deltas.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t k = 0; k < deltas.size(); ++k) seq[k] = deltas[k][i];
    out[i] = variation(std::span<const Complex>(seq), q);
  }
  return f.with_samples(std::move(out));
}

double symbol_variation(double xi, const KRange& ks, double r, const MultiplierFamily& fam) {
  if (ks.lo > ks.hi) throw std::invalid_argument("empty k range");
  std::vector<Complex> seq;
  for (int k = ks.lo; k <= ks.hi; ++k) seq.emplace_back(fam.mother().value(MultiplierFamily::cell_position(xi, k)));
  return variation(std::span<const Complex>(seq), r);
}

double orthsums_ratio(std::span<const Complex> d, const FrequencySet& xi, std::size_t grid) {
  if (d.size() != xi.size()) throw std::invalid_argument("coefficient count must equal the number of frequencies");
  check_grid(xi, grid);
  double d2 = 0.0;
  for (const Complex& v : d) d2 += std::norm(v);
  if (d2 == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double y = static_cast<double>(i) / static_cast<double>(grid);
    Complex s;
    for (std::size_t j = 0; j < d.size(); ++j) s += d[j] * std::polar(1.0, kTwoPi * xi[j] * y);
    acc += std::norm(s);
  }
  return std::sqrt(acc / static_cast<double>(grid) / d2);
}

double vets_lhs(const VectorSequence& c, const FrequencySet& xi, double q, std::size_t grid) {
  check_grid(xi, grid);
  double acc = 0.0;
  sweep_nodes(c, xi, grid, [&](std::span<const Complex> seq) {
    const double v = variation(seq, q);
    acc += v * v;
  });
  return std::sqrt(acc / static_cast<double>(grid));
}

double mets_lhs(const VectorSequence& c, const FrequencySet& xi, std::size_t grid) {
  check_grid(xi, grid);
  double acc = 0.0;
  sweep_nodes(c, xi, grid, [&](std::span<const Complex> seq) {
    double v = 0.0;
    for (const Complex& s : seq) v = std::max(v, std::abs(s));
    acc += v * v;
  });
  return std::sqrt(acc / static_cast<double>(grid));
}

double vets_ratio(const VectorSequence& c, const FrequencySet& xi, double r, double q, std::size_t grid) {
  if (!(2.0 < r && r < q)) throw std::invalid_argument("need 2 < r < q");
  check_unit_gap(xi);
  const double lhs = vets_lhs(c, xi, q, grid);
  const double n = static_cast<double>(xi.size());
  const double rhs = std::pow(n, (0.5 - 1.0 / r) * q / (q - 2.0)) * variation(c, r);
  return rhs > 0.0 ? lhs / rhs : 0.0;
}

double mets_ratio(const VectorSequence& c, const FrequencySet& xi, double r, std::size_t grid) {
  if (!(r > 2.0)) throw std::invalid_argument("need r > 2");
  check_unit_gap(xi);
  const double lhs = mets_lhs(c, xi, grid);
  const double rhs = std::pow(static_cast<double>(xi.size()), 0.5 - 1.0 / r) * variation(c, r);
  return rhs > 0.0 ? lhs / rhs : 0.0;
}

double lepingle_ratio(const SampledSignal& g, const KRange& ks, double r, const SmoothingKernel& kernel) {
  ks.validate(g);
  const double g2 = norm(g, 2.0);
  if (g2 == 0.0) return 0.0;
  std::vector<Symbol> symbols;
  for (int k = ks.lo; k <= ks.hi; ++k) {
    symbols.push_back([k, kernel](double nu) -> Complex { return kernel.hat_scaled(k, nu); });
  }
  const std::vector<SampledSignal> smoothed = apply_multipliers(g, symbols);
  std::vector<Complex> seq(smoothed.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t k = 0; k < smoothed.size(); ++k) seq[k] = smoothed[k][i];
    const double v = variation(std::span<const Complex>(seq), r);
    acc += v * v;
  }
  return std::sqrt(acc * g.dx()) / g2;
}

std::vector<WeakTypeRow> weak_type_rows(const SampledSignal& Vf, double f_l1, std::size_t N,
                                        std::span<const double> lambdas) {
  std::vector<double> values(Vf.size());
  for (std::size_t i = 0; i < Vf.size(); ++i) values[i] = Vf[i].real();
  std::sort(values.begin(), values.end());
  std::vector<WeakTypeRow> rows;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw std::invalid_argument("weak-type levels must be positive");
    const auto above = values.end() - std::upper_bound(values.begin(), values.end(), lambda);
    WeakTypeRow row{lambda, static_cast<double>(above) * Vf.dx(), 0.0};
    if (f_l1 > 0.0) row.value = lambda * row.measure / (std::sqrt(static_cast<double>(N)) * f_l1);
    rows.push_back(row);
  }
  return rows;
}

std::vector<WeakTypeRow> weak_type_scan(const SampledSignal& f, const FrequencySet& X, const KRange& ks,
                                        double q, std::span<const double> lambdas,
                                        const MultiplierFamily& fam) {
  return weak_type_rows(calV(f, X, ks, q, fam), norm(f, 1.0), X.size(), lambdas);
}

}  // namespace mfcz
