#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace mfcz {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Half-open interval [a, b).
struct Interval {
  double a{0.0};
  double b{1.0};

  Interval() = default;
  Interval(double a_, double b_);

  double length() const { return b - a; }
  double center() const { return 0.5 * (a + b); }
  bool contains(double x) const { return a <= x && x < b; }

  /// Same center, length scaled by c.
  Interval dilate(double c) const;
};

/// [2^k n, 2^k (n+1)).
struct DyadicInterval {
  int k{0};
  std::int64_t n{0};

  double length() const;
  Interval interval() const;
  static DyadicInterval containing(double x, int k);
};

/// Strictly increasing real frequencies. Frequencies are in cycles per unit
/// length: the pure frequency xi is the function exp(2 pi i xi x).
class FrequencySet {
 public:
  /// Minimal admissible gap between consecutive frequencies.
  static constexpr double kMinGap = 1e-9;

  explicit FrequencySet(std::vector<double> xi);

  std::size_t size() const { return xi_.size(); }
  double operator[](std::size_t j) const { return xi_[j]; }
  std::span<const double> values() const { return xi_; }
  double min_gap() const;
  double max_abs() const;

  /// The set with every frequency multiplied by s > 0.
  FrequencySet scaled(double s) const;
  FrequencySet shifted(double t) const;

 private:
  std::vector<double> xi_;
};

/// Complex samples at x_i = x0 + i dx, i = 0 .. size()-1. The signal is zero
/// outside [x0, x0 + size() dx) for quadrature and periodic for DFT work.
class SampledSignal {
 public:
  SampledSignal(std::vector<Complex> samples, double x0, double dx);

  static SampledSignal zeros(std::size_t n, double x0, double dx);

  std::size_t size() const { return samples_.size(); }
  double x0() const { return x0_; }
  double dx() const { return dx_; }
  double x(std::size_t i) const { return x0_ + static_cast<double>(i) * dx_; }
  double length() const { return static_cast<double>(samples_.size()) * dx_; }
  Interval domain() const { return {x0_, x0_ + length()}; }

  std::span<const Complex> samples() const { return samples_; }
  const Complex& operator[](std::size_t i) const { return samples_[i]; }

  /// Indices [lo, hi) of grid points lying in J. Endpoints within 1e-9 cells
  /// of a grid point snap to it.
  std::pair<std::size_t, std::size_t> index_range(const Interval& J) const;

  /// Same grid, new samples.
  SampledSignal with_samples(std::vector<Complex> samples) const;

  SampledSignal operator+(const SampledSignal& other) const;
  SampledSignal operator-(const SampledSignal& other) const;
  SampledSignal operator*(Complex s) const;

 private:
  std::vector<Complex> samples_;
  double x0_;
  double dx_;
};

/// Left-endpoint Riemann sum of f over J.
Complex integrate(const SampledSignal& f, const Interval& J);

/// L^p(J) norm of f; p = infinity gives the max over grid points in J.
double norm(const SampledSignal& f, const Interval& J, double p);
double norm(const SampledSignal& f, double p);

/// f times the indicator of J, on the same grid.
SampledSignal restrict_to(const SampledSignal& f, const Interval& J);

/// A multiplier symbol evaluated at a physical frequency (cycles per unit).
using Symbol = std::function<Complex(double)>;

/// Frequency of DFT bin m for an n-point grid of spacing dx. Bins are in the
/// natural FFT order and map onto [-n/2, n/2) / (n dx).
double bin_frequency(std::size_t m, std::size_t n, double dx);

/// Discrete approximation of the continuous Fourier transform,
///   F(nu_m) = dx * sum_i f(x_i) exp(-2 pi i nu_m x_i),
/// returned in natural FFT bin order.
std::vector<Complex> dft(const SampledSignal& f);

/// Inverse of dft() onto the grid (x0, dx).
SampledSignal idft(std::span<const Complex> spectrum, double x0, double dx);

/// Inverse DFT of symbol(nu_m) * DFT(f)(nu_m).
SampledSignal apply_multiplier(const SampledSignal& f, const Symbol& symbol);

/// Several multipliers sharing one forward transform.
std::vector<SampledSignal> apply_multipliers(const SampledSignal& f,
                                             std::span<const Symbol> symbols);

}  // namespace mfcz
