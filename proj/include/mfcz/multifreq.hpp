#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "mfcz/grid_signal.hpp"
#include "mfcz/variation.hpp"

namespace mfcz {

/// m(t) = exp(4 - 1/(t(1-t))) on (0,1), zero elsewhere; m(1/2) = 1.
class MotherSymbol {
 public:
  static constexpr int kMaxOrder = 6;

  MotherSymbol();

  double value(double t) const { return derivative(t, 0); }
  /// m^{(order)}(t) for 0 <= order <= kMaxOrder, from the Taylor jet of
  /// exp(4 - 1/u), u = t(1-t).
  double derivative(double t, int order) const;
  /// sup_t |m^{(order)}(t)|.
  double sup_derivative(int order) const;
  /// A point where the sup is attained (the one in (0, 1/2] for order >= 1).
  double argsup(int order) const;

 private:
  std::array<double, kMaxOrder + 1> sup_{};
  std::array<double, kMaxOrder + 1> argsup_{};
};

/// phi_hat_omega(xi) = m((xi - 2^k n) / 2^k) for omega = [2^k n, 2^k (n+1)).
class MultiplierFamily {
 public:
  MultiplierFamily() = default;

  const MotherSymbol& mother() const { return mother_; }
  double phi_hat(const DyadicInterval& omega, double xi) const;
  /// D_M = sup over omega and xi of |omega|^M |phi_hat_omega^{(M)}(xi)|.
  double D(int M) const { return mother_.sup_derivative(M); }
  /// Position of xi inside its dyadic cell of length 2^k, in [0, 1).
  static double cell_position(double xi, int k);

 private:
  MotherSymbol mother_;
};

/// Scales k_lo ..= k_hi.
struct KRange {
  int lo{0};
  int hi{0};

  std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
  /// At least 8 DFT bins in the smallest cell and no cell wider than the
  /// Nyquist bandwidth, for a grid of the given length and spacing.
  bool valid_for(double length, double dx) const;
  void validate(const SampledSignal& f) const;
  /// The widest valid range for f's grid.
  static KRange widest(const SampledSignal& f);
};

/// psi_hat(xi) = exp(1 - 1/(1 - xi^2)) on (-1, 1), zero elsewhere.
struct SmoothingKernel {
  double hat(double xi) const;
  double hat_scaled(int k, double xi) const { return hat(std::ldexp(xi, -k)); }
};

/// Delta_k f: the multiplier sum over the cells omega of length 2^k meeting X.
SampledSignal delta_k(const SampledSignal& f, const FrequencySet& X, int k, const MultiplierFamily& fam);

/// Delta_k f for every k in ks, sharing one forward transform.
std::vector<SampledSignal> delta_all(const SampledSignal& f, const FrequencySet& X, const KRange& ks,
                                     const MultiplierFamily& fam);

/// Pointwise V^q over k in ks of Delta_k f(x). Real valued.
SampledSignal calV(const SampledSignal& f, const FrequencySet& X, const KRange& ks, double q,
                   const MultiplierFamily& fam);

/// V^r over k in ks of the sequence m(cell_position(xi, k)).
double symbol_variation(double xi, const KRange& ks, double r, const MultiplierFamily& fam);

/// ||sum_j d_j exp(2 pi i xi_j y)||_{L^2[0,1)} / ||d||, rectangle rule on
/// `grid` points.
double orthsums_ratio(std::span<const Complex> d, const FrequencySet& xi, std::size_t grid);

/// ||V^q_k(sum_j c_{k,j} e_j(y))||_{L^2_y} / (N^{(1/2-1/r) q/(q-2)} V^r(c)).
/// Requires 2 < r < q, c.dim() == N and frequency gap >= 1.
double vets_ratio(const VectorSequence& c, const FrequencySet& xi, double r, double q, std::size_t grid);

/// Same with V^q_k replaced by sup_k and the power N^{1/2-1/r}. Requires r > 2.
double mets_ratio(const VectorSequence& c, const FrequencySet& xi, double r, std::size_t grid);

/// Left-hand sides of the two ratios above, for direct comparison.
double vets_lhs(const VectorSequence& c, const FrequencySet& xi, double q, std::size_t grid);
double mets_lhs(const VectorSequence& c, const FrequencySet& xi, std::size_t grid);

/// ||V^r_k(psi_k * g)||_2 / ||g||_2.
double lepingle_ratio(const SampledSignal& g, const KRange& ks, double r, const SmoothingKernel& kernel);

struct WeakTypeRow {
  double lambda{0.0};
  double measure{0.0};  // |{calV f > lambda}|
  double value{0.0};    // lambda * measure / (N^{1/2} ||f||_1)
};

std::vector<WeakTypeRow> weak_type_scan(const SampledSignal& f, const FrequencySet& X, const KRange& ks,
                                        double q, std::span<const double> lambdas,
                                        const MultiplierFamily& fam);

/// Same rows from a precomputed calV f.
std::vector<WeakTypeRow> weak_type_rows(const SampledSignal& Vf, double f_l1, std::size_t N,
                                        std::span<const double> lambdas);

}  // namespace mfcz
