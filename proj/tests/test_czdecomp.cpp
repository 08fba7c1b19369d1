#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "mfcz/czdecomp.hpp"
#include "mfcz/experiments.hpp"

using namespace mfcz;

namespace {

SampledSignal indicator(double x0, std::size_t n, double dx, const Interval& support) {
  std::vector<Complex> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = support.contains(x0 + dx * static_cast<double>(i)) ? 1.0 : 0.0;
  return SampledSignal(std::move(s), x0, dx);
}

CellSet cells_from(std::vector<std::uint8_t> mask) {
  CellSet E;
  E.cells = std::move(mask);
  E.count = static_cast<std::size_t>(std::count(E.cells.begin(), E.cells.end(), 1));
  return E;
}

// Brute-force dyadic-window maximal function: every window of 2^j cells
// containing each cell, averaged directly.
std::vector<double> brute_maximal(const SampledSignal& f) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t w = 1; w <= n; w *= 2) {
    for (std::size_t s = 0; s + w <= n; ++s) {
      double sum = 0.0;
      for (std::size_t i = s; i < s + w; ++i) sum += std::abs(f[i]);
      const double avg = sum / static_cast<double>(w);
      for (std::size_t i = s; i < s + w; ++i) out[i] = std::max(out[i], avg);
    }
  }
  return out;
}

// Every aligned dyadic I (in cells) with I and each cell meeting 6I in E,
// whose parent is not admissible.
std::vector<CellInterval> brute_intervals(const std::vector<bool>& E) {
  const std::size_t n = E.size();
  const auto admissible = [&](std::size_t first, std::size_t w) {
    const double lo = std::floor(static_cast<double>(first) - 2.5 * static_cast<double>(w));
    const double hi = std::ceil(static_cast<double>(first) + 3.5 * static_cast<double>(w));
    if (lo < 0.0 || hi > static_cast<double>(n)) return false;
    for (auto i = static_cast<std::size_t>(lo); i < static_cast<std::size_t>(hi); ++i) {
      if (!E[i]) return false;
    }
    return true;
  };
  std::vector<CellInterval> out;
  for (int s = 0; (std::size_t{1} << s) <= n; ++s) {
    const std::size_t w = std::size_t{1} << s;
    for (std::size_t first = 0; first + w <= n; first += w) {
      if (!admissible(first, w)) continue;
      const std::size_t parent = first - first % (2 * w);
      if (2 * w <= n && parent + 2 * w <= n && admissible(parent, 2 * w)) continue;
      out.push_back({first, s});
    }
  }
  std::sort(out.begin(), out.end(), [](const CellInterval& a, const CellInterval& b) { return a.first < b.first; });
  return out;
}

// Whole pipeline from scratch: brute maximal function, brute interval
// selection, minimal-norm moment matching by a dense least-squares solve.
SampledSignal brute_good_part(const SampledSignal& f, const FrequencySet& xi, double lambda) {
  const SampledSignal fp = pad_signal(f);
  const std::vector<double> Mf = brute_maximal(fp);
  const double threshold = lambda / std::sqrt(static_cast<double>(xi.size()));
  std::vector<bool> E(fp.size());
  for (std::size_t i = 0; i < fp.size(); ++i) E[i] = Mf[i] > threshold;
  std::vector<Complex> g(fp.samples().begin(), fp.samples().end());
  for (const CellInterval& I : brute_intervals(E)) {
    const std::size_t w = I.cells();
    const std::size_t lo = I.first - w;
    const std::size_t n3 = 3 * w;
    Eigen::MatrixXcd A(static_cast<Eigen::Index>(xi.size()), static_cast<Eigen::Index>(n3));
    Eigen::VectorXcd fI = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n3));
    for (std::size_t i = 0; i < n3; ++i) {
      for (std::size_t j = 0; j < xi.size(); ++j) {
        A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
            std::polar(fp.dx(), kTwoPi * xi[j] * fp.x(lo + i));
      }
      if (i >= w && i < 2 * w) fI(static_cast<Eigen::Index>(i)) = fp[lo + i];
    }
    const Eigen::VectorXcd gI = A.completeOrthogonalDecomposition().solve(A * fI);
    for (std::size_t i = 0; i < n3; ++i) g[lo + i] -= fI(static_cast<Eigen::Index>(i)) - gI(static_cast<Eigen::Index>(i));
  }
  return fp.with_samples(std::move(g));
}

}  // namespace

TEST_CASE("padding") {
  const SampledSignal f = indicator(0.0, 16, 1.0 / 16, Interval(0.0, 1.0));
  const SampledSignal p = pad_signal(f);
  CHECK(p.size() == 17 * 16);
  CHECK(p.x0() == -8.0);
  CHECK(norm(p, 1.0) == norm(f, 1.0));
}

TEST_CASE("maximal function examples") {
  const double dx = 1.0 / 64;
  const SampledSignal f = pad_signal(indicator(0.0, 64, dx, Interval(0.0, 1.0)), 2);
  const SampledSignal Mf = hl_maximal(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (Interval(0.0, 1.0).contains(f.x(i))) CHECK(Mf[i].real() == doctest::Approx(1.0).epsilon(1e-15));
  }
  const auto at2 = f.index_range(Interval(2.0, 2.0 + dx)).first;
  CHECK(Mf[at2].real() >= 0.25);
  CHECK(Mf[at2].real() <= 0.5);

  CHECK(norm(hl_maximal(SampledSignal::zeros(128, 0.0, dx)), kInf) == 0.0);

  Rng rng(41);
  std::vector<Complex> s(300);
  for (auto& v : s) v = {rng.normal(), rng.normal()};
  const SampledSignal h(s, 0.0, dx);
  const SampledSignal Mh = hl_maximal(h);
  const std::vector<double> oracle = brute_maximal(h);
  for (std::size_t i = 0; i < h.size(); ++i) CHECK(Mh[i].real() == doctest::Approx(oracle[i]).epsilon(1e-12));
}

TEST_CASE("level sets") {
  const double dx = 1.0 / 64;
  const SampledSignal f = pad_signal(indicator(0.0, 64, dx, Interval(0.0, 1.0)), 2);
  const SampledSignal Mf = hl_maximal(f);
  CHECK(level_set(Mf, 1.0 + 1e-12).count == 0);
  std::size_t positive = 0;
  for (std::size_t i = 0; i < Mf.size(); ++i) positive += Mf[i].real() > 0.0;
  CHECK(level_set(Mf, 1e-300).count == positive);
  const std::vector<double> oracle = brute_maximal(f);
  const auto expected = static_cast<std::size_t>(std::count_if(oracle.begin(), oracle.end(), [](double v) { return v > 0.5; }));
  const CellSet E = level_set(Mf, 0.5);
  CHECK(E.count == expected);
  CHECK(E.measure() == doctest::Approx(static_cast<double>(expected) * dx));
  CHECK_THROWS(level_set(Mf, 0.0));
}

TEST_CASE("dilated cell ranges") {
  const CellRange r = dilate_cells({8, 2}, 3.0, 100);
  CHECK(r.lo == 4);
  CHECK(r.hi == 16);
  CHECK(!r.clipped);
  const CellRange s = dilate_cells({4, 0}, 6.0, 100);
  CHECK(s.lo == 1);
  CHECK(s.hi == 8);
  CHECK(dilate_cells({0, 1}, 6.0, 100).clipped);
}

TEST_CASE("maximal dyadic intervals") {
  CHECK(maximal_dyadic_intervals(cells_from(std::vector<std::uint8_t>(64, 0))).intervals.empty());

  std::vector<std::uint8_t> mask(256, 0);
  std::fill(mask.begin() + 64, mask.begin() + 128, 1);
  const DyadicSelection sel = maximal_dyadic_intervals(cells_from(mask));
  std::size_t covered = 0;
  for (const CellInterval& I : sel.cells) covered += I.cells();
  CHECK(3 * covered >= 2 * 64);

  Rng rng(42);
  for (int t = 0; t < 40; ++t) {
    std::vector<std::uint8_t> m(512, 0);
    for (int runs = 0; runs < 6; ++runs) {
      const std::size_t a = rng.index(480);
      std::fill(m.begin() + static_cast<std::ptrdiff_t>(a), m.begin() + static_cast<std::ptrdiff_t>(a + 1 + rng.index(30)), 1);
    }
    const DyadicSelection got = maximal_dyadic_intervals(cells_from(m));
    std::vector<bool> E(m.begin(), m.end());
    const std::vector<CellInterval> want = brute_intervals(E);
    REQUIRE(got.cells.size() == want.size());
    std::size_t covered_cells = 0;
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(got.cells[i].first == want[i].first);
      CHECK(got.cells[i].scale == want[i].scale);
      if (i > 0) CHECK(got.cells[i - 1].end() <= got.cells[i].first);
      covered_cells += want[i].cells();
    }
    const auto in_E = static_cast<double>(std::count(m.begin(), m.end(), 1));
    CHECK(got.uncovered_measure == doctest::Approx(in_E - static_cast<double>(covered_cells)));
  }
}

TEST_CASE("decomposition trivial cases") {
  const double dx = 1.0 / 128;
  const SampledSignal f = indicator(0.0, 128, dx, Interval(0.25, 0.5));
  const FrequencySet xi({0.0, 2.0, 5.5, 9.0});
  const double max_Mf = norm(hl_maximal(pad_signal(f)), kInf);
  const CzOutput out = cz_decompose(f, xi, 2.0 * max_Mf * 1.01);
  CHECK(out.pieces.empty());
  CHECK(norm(out.g - pad_signal(f), kInf) == 0.0);
  CHECK(out.diagnostics.r_cover == 0.0);
  CHECK(out.diagnostics.moment_residual_max == 0.0);
  const double lambda = out.lambda;
  CHECK(out.diagnostics.r_good == doctest::Approx(std::pow(norm(f, 2.0), 2) / (norm(f, 1.0) * 2.0 * lambda)));
  CHECK(out.diagnostics.exact_ok());

  const CzOutput zero = cz_decompose(SampledSignal::zeros(64, 0.0, dx), xi, 1.0);
  CHECK(zero.pieces.empty());
  CHECK(norm(zero.g, kInf) == 0.0);
  CHECK(zero.diagnostics.exact_ok());

  CHECK_THROWS(cz_decompose(f, xi, 0.0));
  CHECK_THROWS(cz_decompose(f, xi, -1.0));
}

TEST_CASE("decomposition matches the brute-force pipeline") {
  Rng rng(43);
  const std::size_t n = 256;
  const double dx = 1.0 / static_cast<double>(n);
  std::vector<Complex> s(n);
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = -0.5 + dx * static_cast<double>(i);
    s[i] = std::exp(-0.5 * std::pow(x / 0.0625, 2));
    mass += s[i].real() * dx;
  }
  for (auto& v : s) v /= mass;
  const SampledSignal f(s, -0.5, dx);
  const FrequencySet xi = random_frequencies(rng, 4, 0.0, 16.0, 1.0);
  const CzOutput out = cz_decompose(f, xi, 1.0);
  REQUIRE(!out.pieces.empty());
  CHECK(out.diagnostics.exact_ok());

  bool covers_origin = false;
  for (const CzPiece& p : out.pieces) covers_origin = covers_origin || p.I.contains(0.0);
  CHECK(covers_origin);

  const SampledSignal oracle = brute_good_part(f, xi, 1.0);
  CHECK(norm(out.g - oracle, kInf) <= 1e-6 * norm(oracle, kInf));
}

TEST_CASE("decomposition invariants on random mixtures") {
  Rng rng(44);
  for (int t = 0; t < 12; ++t) {
    const SampledSignal f = random_bump_mixture(rng, 10, 1 + rng.index(4), 40.0);
    const FrequencySet xi = random_frequencies(rng, 1 + rng.index(8), 0.0, 64.0, 1.0);
    const double lambda = norm(f, 1.0) * std::ldexp(1.0, static_cast<int>(rng.index(4)));
    const CzOutput out = cz_decompose(f, xi, lambda);
    const CzDiagnostics& d = out.diagnostics;
    CHECK(d.exact_ok());
    CHECK(d.reconstruction_error <= kReconstructionTolerance);
    CHECK(d.moment_residual_max <= kMomentTolerance);
    CHECK(d.overlap_max <= 4);
    for (const CzPiece& p : out.pieces) {
      if (norm(p.f_I, 1.0) == 0.0) CHECK(norm(p.b_I, 1.0) == 0.0);
      CHECK(p.I3.length() == doctest::Approx(3.0 * p.I.length()));
    }

    const CzDiagnostics again = verify_bounds(out, f);
    CHECK(again.r_cover == d.r_cover);
    CHECK(again.r_good == d.r_good);
  }
}

TEST_CASE("verify_bounds names a perturbed piece") {
  Rng rng(45);
  const SampledSignal f = random_bump_mixture(rng, 10, 3, 20.0);
  CzOutput out = cz_decompose(f, FrequencySet({1.0, 4.0, 9.0}), norm(f, 1.0));
  REQUIRE(!out.pieces.empty());
  CzPiece& p = out.pieces.front();
  std::vector<Complex> b(p.b_I.samples().begin(), p.b_I.samples().end());
  const auto mid = p.b_I.index_range(p.I).first;
  b[mid] += 1e-3 * (1.0 + norm(p.f_I, kInf));
  p.b_I = p.b_I.with_samples(std::move(b));
  const CzDiagnostics d = verify_bounds(out, f);
  CHECK(!d.exact_ok());
  CHECK(std::any_of(d.violations.begin(), d.violations.end(),
                    [](const std::string& v) { return v.rfind("moment-residual", 0) == 0; }));
}
