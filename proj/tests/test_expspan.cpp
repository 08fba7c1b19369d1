#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "mfcz/experiments.hpp"
#include "mfcz/expspan.hpp"

using namespace mfcz;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson rule for int_J exp(2 pi i d y) dy.
Complex simpson_exp(const Interval& J, double d, std::size_t panels) {
  const double h = J.length() / static_cast<double>(panels);
  Complex sum = 0.0;
  for (std::size_t i = 0; i <= panels; ++i) {
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * std::polar(1.0, kTwoPi * d * (J.a + h * static_cast<double>(i)));
  }
  return sum * (h / 3.0);
}

SampledSignal indicator_on(const Interval& support, double x0, std::size_t n, double dx) {
  std::vector<Complex> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x0 + dx * static_cast<double>(i);
    s[i] = support.contains(x) ? 1.0 : 0.0;
  }
  return SampledSignal(std::move(s), x0, dx);
}

double l2(const SampledSignal& f, const Interval& J) { return norm(f, J, 2.0); }

}  // namespace

TEST_CASE("gram examples") {
  const CMatrix one = gram(Interval(0.3, 2.0), FrequencySet({4.2}));
  CHECK(one.rows() == 1);
  CHECK(std::abs(one(0, 0) - 1.7) < 1e-15);

  const CMatrix B = gram(Interval(0.0, 3.0), FrequencySet({0.0, 1.0 / 3.0}));
  CHECK(std::abs(B(0, 0) - 3.0) < 1e-14);
  CHECK(std::abs(B(1, 1) - 3.0) < 1e-14);
  CHECK(std::abs(B(0, 1)) < 1e-14);
  CHECK(std::abs(B(1, 0)) < 1e-14);
}

TEST_CASE("closed-form gram against Simpson quadrature") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    const FrequencySet xi = random_frequencies(rng, 2 + rng.index(7), -64.0, 64.0, 0.1);
    const double a = rng.uniform(-3.0, 3.0);
    const Interval J(a, a + rng.uniform(0.1, 3.0));
    const CMatrix B = gram(J, xi);
    CHECK((B - B.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t j = 0; j < xi.size(); ++j) {
      for (std::size_t l = 0; l < xi.size(); ++l) {
        const Complex q = simpson_exp(J, xi[j] - xi[l], std::size_t{1} << 16);
        CHECK(std::abs(B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) - q) < 1e-8);
      }
    }
  }
}

TEST_CASE("grid gram equals the explicit rectangle sum") {
  Rng rng(32);
  for (int t = 0; t < 20; ++t) {
    const FrequencySet xi = random_frequencies(rng, 2 + rng.index(7), -64.0, 64.0, 0.5);
    const double dx = std::ldexp(1.0, -10 - static_cast<int>(rng.index(3)));
    const double x0 = -1.0;
    const double a = x0 + dx * static_cast<double>(rng.index(1000));
    const Interval J(a, a + dx * static_cast<double>(1 + rng.index(900)));
    const CMatrix B = gram_on_grid(J, xi, x0, dx);
    const std::size_t lo = static_cast<std::size_t>(std::llround((J.a - x0) / dx));
    const std::size_t hi = static_cast<std::size_t>(std::llround((J.b - x0) / dx));
    double worst = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
      for (std::size_t l = 0; l < xi.size(); ++l) {
        Complex sum = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
          sum += std::polar(dx, kTwoPi * (xi[j] - xi[l]) * (x0 + dx * static_cast<double>(i)));
        }
        worst = std::max(worst, std::abs(B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) - sum));
      }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("moments examples") {
  const double dx = 1.0 / 1024;
  const SampledSignal zero = SampledSignal::zeros(4096, 0.0, dx);
  CHECK(moments(zero, Interval(0.0, 4.0), FrequencySet({0.0, 2.5})).cwiseAbs().maxCoeff() == 0.0);

  const SampledSignal f = indicator_on(Interval(1.0, 2.0), 0.0, 3072, dx);
  CHECK(std::abs(moments(f, Interval(1.0, 2.0), FrequencySet({0.0}))(0) - 1.0) < 1e-15);

  // Rectangle rule versus the antiderivative: error O(dx).
  const Complex m = moments(f, Interval(1.0, 2.0), FrequencySet({1.0 / 3.0}))(0);
  CHECK(std::abs(m - Complex(-3.0 * std::sqrt(3.0) / (2.0 * kPi), 0.0)) < 2.0 * dx);

  Rng rng(33);
  std::vector<Complex> s(3072);
  for (auto& v : s) v = {rng.normal(), rng.normal()};
  const SampledSignal h(s, 0.0, dx);
  const Interval J(0.5, 2.75);
  const CVector mh = moments(h, J, random_frequencies(rng, 6, 0.0, 64.0, 1.0));
  CHECK(mh.cwiseAbs().maxCoeff() <= norm(h, J, 1.0));
}

TEST_CASE("riesz projection examples") {
  const double dx = 1.0 / 512;
  const SampledSignal zero = SampledSignal::zeros(1536, -1.5, dx);
  const Projection p0 = riesz_project(zero, Interval(-1.5, 1.5), FrequencySet({0.0, 3.0}));
  CHECK(norm(p0.g, 2.0) == 0.0);

  Rng rng(34);
  std::vector<Complex> s(1536, 0.0);
  for (std::size_t i = 512; i < 1024; ++i) s[i] = {rng.normal(), rng.normal()};
  const SampledSignal f_I(s, -1.5, dx);
  const Interval J(-1.5, 1.5);
  const Projection p1 = riesz_project(f_I, J, FrequencySet({0.0}));
  const Complex mean = integrate(f_I, J) / 3.0;
  for (std::size_t i = 0; i < p1.g.size(); ++i) CHECK(std::abs(p1.g[i] - mean) < 1e-14);
}

TEST_CASE("riesz projection against a dense least-squares oracle") {
  const std::size_t n = std::size_t{1} << 13;
  const double dx = 3.0 / static_cast<double>(n);
  const Interval J(0.0, 3.0);
  const FrequencySet xi({0.0, 1.0 / 3.0});
  const SampledSignal f_I = indicator_on(Interval(1.0, 2.0), 0.0, n, dx);
  const Projection p = riesz_project(f_I, J, xi);

  // Minimal-norm solution of A g = m with A_{ji} = dx exp(2 pi i xi_j y_i).
  Eigen::MatrixXcd A(2, static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < 2; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      A(j, static_cast<Eigen::Index>(i)) = std::polar(dx, kTwoPi * xi[static_cast<std::size_t>(j)] * f_I.x(i));
    }
  }
  CVector fv(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) fv(static_cast<Eigen::Index>(i)) = f_I[i];
  const CVector m = A * fv;
  const CVector g = A.completeOrthogonalDecomposition().solve(m);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(g(static_cast<Eigen::Index>(i)) - p.g[i]));
  CHECK(worst < 1e-10);

  // Continuous answer: c = (1/3, m/3), ||g|| about 0.7492.
  const double mc = -3.0 * std::sqrt(3.0) / (2.0 * kPi);
  CHECK(std::abs(p.coefficients(0) - 1.0 / 3.0) < 1e-3);
  CHECK(std::abs(p.coefficients(1) - mc / 3.0) < 1e-3);
  CHECK(l2(p.g, J) == doctest::Approx(std::sqrt(3.0 * (1.0 / 9.0 + mc * mc / 9.0))).epsilon(1e-3));
  CHECK(l2(p.g, J) <= std::sqrt(2.0));
}

TEST_CASE("riesz projection properties") {
  Rng rng(35);
  const double dx = 1.0 / 256;
  for (int t = 0; t < 60; ++t) {
    const std::size_t N = 1 + rng.index(8);
    const FrequencySet xi = random_frequencies(rng, N, 0.0, 32.0, 0.0);
    const std::size_t cells = std::size_t{1} << (4 + rng.index(4));
    const double len = dx * static_cast<double>(cells);
    const Interval I(0.0, len);
    const Interval J = I.dilate(3.0);
    const std::size_t n = 3 * cells;
    std::vector<Complex> s(n, 0.0);
    for (std::size_t i = cells; i < 2 * cells; ++i) s[i] = {rng.normal(), rng.normal()};
    const SampledSignal f_I(s, J.a, dx);
    const Projection p = riesz_project(f_I, J, xi);

    const double bound = std::sqrt(static_cast<double>(N) / len) * norm(f_I, 1.0);
    CHECK(l2(p.g, J) <= bound * (1.0 + 1e-12));

    const SampledSignal b = f_I - p.g;
    const CVector mb = moments(b, J, xi);
    CHECK(mb.cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + norm(f_I, 1.0)));

    // Minimality: g is orthogonal to every function with vanishing moments,
    // e.g. the moment-free part of a random perturbation.
    std::vector<Complex> hs(n);
    for (auto& v : hs) v = {rng.normal(), rng.normal()};
    const SampledSignal h(hs, J.a, dx);
    const SampledSignal h0 = h - riesz_project(h, J, xi).g;
    Complex inner = 0.0;
    for (std::size_t i = 0; i < n; ++i) inner += std::conj(p.g[i]) * h0[i] * dx;
    CHECK(std::abs(inner) <= 1e-8 * l2(p.g, J) * l2(h0, J) + 1e-300);
    CHECK(l2(p.g + h0 * Complex(1e-3), J) >= l2(p.g, J));
  }
}

TEST_CASE("near-coincident frequencies are regularized") {
  const double dx = 1.0 / 256;
  std::vector<Complex> s(768, 0.0);
  for (std::size_t i = 256; i < 512; ++i) s[i] = 1.0;
  const SampledSignal f_I(s, 0.0, dx);
  const Projection p = riesz_project(f_I, Interval(0.0, 3.0), FrequencySet({1.0, 1.0 + 1e-8}));
  CHECK(p.regularized);
  CHECK(p.condition > kMaxGramCondition);
  CHECK(p.moment_residual < 1e-6);
}

TEST_CASE("borwein erdelyi ratio") {
  CHECK(be_ratio(Interval(-3.0, 5.0), FrequencySet({17.25}), 128).ratio == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(be_ratio(Interval(1.0, 2.0), FrequencySet({0.0, 1.0 / 3.0}), 256).ratio ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK_THROWS(be_ratio(Interval(0.0, 1.0), FrequencySet({0.0}), 63));

  Rng rng(36);
  for (int t = 0; t < 10; ++t) {
    const FrequencySet xi = random_frequencies(rng, 1 + rng.index(8), 0.0, 16.0, 0.0);
    const Interval I(0.0, 1.0);
    const double base = be_ratio(I, xi, 1024).ratio;
    CHECK(base <= 1.0 + 1e-6);
    for (double sc : {2.0, 0.25}) {
      const Interval sI(I.a * sc, I.b * sc);
      CHECK(be_ratio(sI, xi.scaled(1.0 / sc), 1024).ratio == doctest::Approx(base).epsilon(1e-10));
    }
  }
}
