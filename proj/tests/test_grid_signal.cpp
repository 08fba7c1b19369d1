#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mfcz/experiments.hpp"
#include "mfcz/grid_signal.hpp"

using namespace mfcz;

namespace {

SampledSignal constant(std::size_t n, double x0, double dx, Complex v) {
  return SampledSignal(std::vector<Complex>(n, v), x0, dx);
}

SampledSignal mode(std::size_t n, double nu) {
  std::vector<Complex> s(n);
  const double dx = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = std::polar(1.0, kTwoPi * nu * static_cast<double>(i) * dx);
  return SampledSignal(std::move(s), 0.0, dx);
}

SampledSignal noise(Rng& rng, std::size_t n) {
  std::vector<Complex> s(n);
  for (auto& v : s) v = {rng.normal(), rng.normal()};
  return SampledSignal(std::move(s), -0.5, 1.0 / static_cast<double>(n));
}

double rel_diff(const SampledSignal& a, const SampledSignal& b) {
  return norm(a - b, 2.0) / norm(b, 2.0);
}

}  // namespace

TEST_CASE("construction rejects bad grids") {
  CHECK_THROWS_AS(SampledSignal({}, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SampledSignal({Complex(1.0)}, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SampledSignal({Complex(NAN)}, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Interval(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FrequencySet({1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(FrequencySet({1.0, 1.0 + 1e-12}), std::invalid_argument);
  CHECK_THROWS_AS(FrequencySet(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("interval dilation and dyadic intervals") {
  const Interval I(1.0, 2.0);
  CHECK(I.dilate(3.0).a == 0.0);
  CHECK(I.dilate(3.0).b == 3.0);
  const DyadicInterval w{-3, 5};
  CHECK(w.length() == 0.125);
  CHECK(w.interval().a == 0.625);
  const DyadicInterval c = DyadicInterval::containing(-0.3, -2);
  CHECK(c.n == -2);
  CHECK(c.interval().contains(-0.3));
}

TEST_CASE("integrate") {
  const double dx = 1.0 / 256;
  CHECK(integrate(constant(256, 0.0, dx, 1.0), Interval(0.0, 1.0)) == Complex(1.0));
  CHECK(integrate(constant(256, 0.0, dx, 3.0), Interval(5.0, 6.0)) == Complex(0.0));
  CHECK(std::abs(integrate(mode(256, 1.0), Interval(0.0, 1.0))) < 1e-12);
  CHECK(integrate(constant(256, 0.0, dx, 1.0), Interval(0.25, 0.5)) == Complex(0.25));
}

TEST_CASE("norms") {
  const double dx = 1.0 / 64;
  const SampledSignal one = constant(64, 0.0, dx, 1.0);
  CHECK(norm(one, 1.0) == 1.0);
  CHECK(norm(one, kInf) == 1.0);
  std::vector<Complex> s(128, 1.0);
  for (std::size_t i = 64; i < 128; ++i) s[i] = 2.0;
  const SampledSignal step(s, 0.0, dx);
  CHECK(norm(step, Interval(0.0, 2.0), 2.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK_THROWS_AS(norm(one, 0.5), std::invalid_argument);
}

TEST_CASE("restrict") {
  Rng rng(11);
  const SampledSignal f = noise(rng, 512);
  const SampledSignal same = restrict_to(f, f.domain());
  CHECK(rel_diff(same, f) == 0.0);
  CHECK(norm(restrict_to(f, Interval(3.0, 4.0)), 2.0) == 0.0);
  const Interval J(-0.2, 0.1);
  const SampledSignal r = restrict_to(f, J);
  CHECK(norm(r, 1.0) == doctest::Approx(norm(f, J, 1.0)).epsilon(1e-14));
  CHECK(rel_diff(restrict_to(r, J), r) == 0.0);
  for (double p : {1.0, 2.0, 3.5, kInf}) CHECK(norm(r, p) <= norm(f, p));
}

TEST_CASE("dft round trip and Plancherel") {
  Rng rng(12);
  for (int g = 8; g <= 14; ++g) {
    const SampledSignal f = noise(rng, std::size_t{1} << g);
    const std::vector<Complex> F = dft(f);
    CHECK(rel_diff(idft(F, f.x0(), f.dx()), f) < 1e-10);
    double energy = 0.0;
    for (const Complex& v : F) energy += std::norm(v);
    energy /= f.length();
    CHECK(std::sqrt(energy) == doctest::Approx(norm(f, 2.0)).epsilon(1e-10));
  }
}

TEST_CASE("dft on a non power-of-two grid") {
  Rng rng(13);
  const SampledSignal f = noise(rng, 17 * 64);
  CHECK(rel_diff(idft(dft(f), f.x0(), f.dx()), f) < 1e-10);
}

TEST_CASE("dft approximates the continuous transform") {
  // Gaussian exp(-pi x^2) is its own transform.
  const std::size_t n = 4096;
  const double dx = 16.0 / n;
  std::vector<Complex> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = -8.0 + dx * static_cast<double>(i);
    s[i] = std::exp(-std::numbers::pi * x * x);
  }
  const SampledSignal f(s, -8.0, dx);
  const std::vector<Complex> F = dft(f);
  for (std::size_t m : {std::size_t{0}, std::size_t{3}, std::size_t{16}, n - 5}) {
    const double nu = bin_frequency(m, n, dx);
    CHECK(std::abs(F[m] - std::exp(-std::numbers::pi * nu * nu)) < 1e-12);
  }
}

TEST_CASE("apply_multiplier") {
  Rng rng(14);
  const SampledSignal f = noise(rng, 1024);
  CHECK(rel_diff(apply_multiplier(f, [](double) { return Complex(1.0); }), f) < 1e-10);
  CHECK(norm(apply_multiplier(f, [](double) { return Complex(0.0); }), 2.0) == 0.0);

  const auto symbol = [](double nu) { return Complex(std::cos(nu / 7.0), nu / 300.0); };
  for (double nu : {0.0, 5.0, -37.0, 200.0}) {
    const SampledSignal m = mode(1024, nu);
    CHECK(rel_diff(apply_multiplier(m, symbol), m * symbol(nu)) < 1e-10);
  }

  const SampledSignal h = noise(rng, 1024);
  const Complex a(0.3, -1.2), b(2.0, 0.5);
  const SampledSignal lhs = apply_multiplier(f * a + h * b, symbol);
  const SampledSignal rhs = apply_multiplier(f, symbol) * a + apply_multiplier(h, symbol) * b;
  CHECK(rel_diff(lhs, rhs) < 1e-10);

  const std::vector<Symbol> both{symbol, [](double nu) { return Complex(nu > 0 ? 1.0 : 0.0); }};
  const std::vector<SampledSignal> out = apply_multipliers(f, both);
  REQUIRE(out.size() == 2);
  CHECK(rel_diff(out[0], apply_multiplier(f, symbol)) < 1e-14);
}
