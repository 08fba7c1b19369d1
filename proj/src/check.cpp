#include "mfcz/check.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "mfcz/czdecomp.hpp"
#include "mfcz/expspan.hpp"
#include "mfcz/experiments.hpp"
#include "mfcz/signal_io.hpp"
#include "mfcz/variation.hpp"

namespace mfcz {

namespace {

std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

using Property = std::function<bool(Rng&, std::ostringstream&)>;

class Suite {
 public:
  explicit Suite(std::uint64_t seed) : seed_(seed) {}

  void run(const std::string& name, const Property& body) {
    PropertyResult res;
    res.name = name;
    res.seed = derive_seed(seed_, name_hash(name));
    Rng rng(res.seed);
    std::ostringstream detail;
    try {
      res.pass = body(rng, detail);
    } catch (const std::exception& e) {
      res.pass = false;
      detail << "exception: " << e.what();
    }
    res.detail = detail.str();
    results_.push_back(std::move(res));
  }

  std::vector<PropertyResult> take() { return std::move(results_); }

 private:
  std::uint64_t seed_;
  std::vector<PropertyResult> results_;
};

// Values are continuous normals, or small integers for a third of the
// sequences so that ties and repeats occur.
VectorSequence random_sequence(Rng& rng, std::size_t len, std::size_t dim, bool allow_ties = true) {
  const bool integral = allow_ties && rng.index(3) == 0;
  std::vector<std::int64_t> keys;
  std::int64_t k = static_cast<std::int64_t>(rng.index(5)) - 2;
  std::vector<Complex> values;
  for (std::size_t i = 0; i < len; ++i) {
    keys.push_back(k);
    k += 1 + static_cast<std::int64_t>(rng.index(3));
    for (std::size_t d = 0; d < dim; ++d) {
      if (integral) {
        values.emplace_back(static_cast<double>(rng.index(4)), 0.0);
      } else {
        values.emplace_back(rng.normal(), dim > 1 ? rng.normal() : 0.0);
      }
    }
  }
  return VectorSequence(std::move(keys), std::move(values), dim);
}

SampledSignal random_signal(Rng& rng, std::size_t n, double x0, double dx) {
  std::vector<Complex> s(n);
  for (Complex& v : s) v = Complex(rng.normal(), rng.normal());
  return SampledSignal(std::move(s), x0, dx);
}

double max_abs_diff(const SampledSignal& a, const SampledSignal& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const SampledSignal& a) { return norm(a, kInf); }

void variation_properties(Suite& suite) {
  suite.run("variation/dp-oracle", [](Rng& rng, std::ostringstream& detail) {
    const double rs[] = {1.0, 1.5, 2.0, 3.0, kInf};
    for (int t = 0; t < 200; ++t) {
      const VectorSequence s = random_sequence(rng, 1 + rng.index(10), t % 2 ? 3 : 1);
      for (double r : rs) {
        const double dp = tilde_variation(s, r);
        const double bf = tilde_variation_bruteforce(s, r);
        if (std::abs(dp - bf) > 1e-12 * (1.0 + bf)) {
          detail << "case " << t << " r=" << r << ": dp " << dp << " vs enumeration " << bf;
          return false;
        }
      }
    }
    detail << "200 sequences, r in {1, 1.5, 2, 3, inf}";
    return true;
  });

  suite.run("variation/monotone-in-r", [](Rng& rng, std::ostringstream& detail) {
    const double rs[] = {1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 5.0, kInf};
    for (int t = 0; t < 200; ++t) {
      const VectorSequence s = random_sequence(rng, 1 + rng.index(12), t % 2 ? 3 : 1);
      double prev = kInf;
      for (double r : rs) {
        const double v = tilde_variation(s, r);
        if (v > prev * (1.0 + 1e-12)) {
          detail << "case " << t << ": increases at r=" << r;
          return false;
        }
        prev = v;
      }
    }
    detail << "200 sequences";
    return true;
  });

  suite.run("variation/jump-cover", [](Rng& rng, std::ostringstream& detail) {
    for (int t = 0; t < 1000; ++t) {
      const VectorSequence s = random_sequence(rng, 1 + rng.index(20), 1 + rng.index(3));
      const double diam = s.diameter();
      const double lambda = diam > 0.0 ? diam * rng.uniform(0.02, 1.2) : rng.uniform(0.1, 1.0);
      const double r = rng.uniform(0.5, 6.0);
      const JumpCover cover = jump_cover(s, lambda);
      const double lhs = lambda * std::pow(static_cast<double>(cover.count() - 1), 1.0 / r);
      const double V = variation(s, r);
      if (lhs > V * (1.0 + 1e-12)) {
        detail << "case " << t << ": lambda (L-1)^(1/r) = " << lhs << " > V^r = " << V;
        return false;
      }
      if (cover.positions.empty() || cover.positions.front() != 0) {
        detail << "case " << t << ": cover does not start at the first key";
        return false;
      }
      for (std::size_t a = 0; a < cover.count(); ++a) {
        const std::size_t from = cover.positions[a];
        const std::size_t to = a + 1 < cover.count() ? cover.positions[a + 1] : s.size();
        for (std::size_t i = from + 1; i < to; ++i) {
          if (s.distance(from, i) > lambda) {
            detail << "case " << t << ": position " << i << " left the ball but was skipped";
            return false;
          }
        }
        if (to < s.size() && !(s.distance(from, to) > lambda)) {
          detail << "case " << t << ": anchor " << to << " did not leave the ball";
          return false;
        }
      }
    }
    detail << "1000 (sequence, lambda, r) triples";
    return true;
  });

  suite.run("variation/parent-table", [](Rng& rng, std::ostringstream& detail) {
    for (int t = 0; t < 200; ++t) {
      const VectorSequence s = random_sequence(rng, 2 + rng.index(15), t % 2 ? 3 : 1, false);
      const double lambda0 = s.min_distinct_distance() * rng.uniform(0.1, 0.99);
      const ParentTable table = parent_table(s, lambda0);
      double scale = 1.0;
      for (std::size_t i = 0; i < s.size(); ++i) scale = std::max(scale, s.norm_at(i));
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (table.parent_position(-1, i) != i || table.parent_position(table.n_max, i) != 0) {
          detail << "case " << t << ": boundary rows wrong at position " << i;
          return false;
        }
      }
      for (int n = -1; n <= table.n_max; ++n) {
        for (std::size_t i = 0; i < s.size(); ++i) {
          const std::size_t p = table.parent_position(n, i);
          if (p > i || (i > 0 && p < table.parent_position(n, i - 1))) {
            detail << "case " << t << ": rho(" << n << ", .) not monotone at " << i;
            return false;
          }
          if (n < table.n_max) {
            const double d = s.distance(p, table.parent_position(n + 1, i));
            if (!(d < std::ldexp(lambda0, n + 1))) {
              detail << "case " << t << ": distance " << d << " at n=" << n << " not below 2^(n+1) lambda0";
              return false;
            }
          }
        }
      }
      const double res = telescoping_residual(s, table);
      if (res > 1e-12 * scale) {
        detail << "case " << t << ": telescoping residual " << res;
        return false;
      }
    }
    detail << "200 sequences";
    return true;
  });

  suite.run("variation/rm-block", [](Rng&, std::ostringstream& detail) {
    constexpr int M = 10;
    std::vector<int> hits;
    for (std::int64_t l = 0; l < (1 << M); ++l) {
      hits.assign(static_cast<std::size_t>(l), 0);
      for (int m = 0; m < M; ++m) {
        const IndexBlock b = rm_block(l, m);
        for (std::int64_t i = b.lo; i < b.hi; ++i) {
          if (i < 0 || i >= l) {
            detail << "l=" << l << " m=" << m << ": block leaves [0, l)";
            return false;
          }
          ++hits[static_cast<std::size_t>(i)];
        }
      }
      if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) {
        detail << "l=" << l << ": blocks are not a disjoint cover of [0, l)";
        return false;
      }
    }
    detail << "all l < 2^10";
    return true;
  });
}

void grid_properties(Suite& suite) {
  suite.run("grid/dft-roundtrip", [](Rng& rng, std::ostringstream& detail) {
    for (int g = 8; g <= 14; ++g) {
      const std::size_t n = std::size_t{1} << g;
      const SampledSignal f = random_signal(rng, n, rng.uniform(-1.0, 1.0), 1.0 / static_cast<double>(n));
      const std::vector<Complex> F = dft(f);
      const SampledSignal back = idft(F, f.x0(), f.dx());
      const double err = norm(back - f, 2.0) / norm(f, 2.0);
      if (err > 1e-10) {
        detail << "2^" << g << " points: relative error " << err;
        return false;
      }
    }
    detail << "grids 2^8 .. 2^14";
    return true;
  });

  suite.run("grid/plancherel", [](Rng& rng, std::ostringstream& detail) {
    for (int g = 8; g <= 14; ++g) {
      const std::size_t n = std::size_t{1} << g;
      const double dx = rng.uniform(0.5, 2.0) / static_cast<double>(n);
      const SampledSignal f = random_signal(rng, n, rng.uniform(-1.0, 1.0), dx);
      double spectral = 0.0;
      for (const Complex& c : dft(f)) spectral += std::norm(c);
      spectral /= static_cast<double>(n) * dx;
      const double spatial = std::pow(norm(f, 2.0), 2);
      if (std::abs(spectral - spatial) > 1e-10 * spatial) {
        detail << "2^" << g << " points: " << spatial << " vs " << spectral;
        return false;
      }
    }
    detail << "grids 2^8 .. 2^14";
    return true;
  });

  suite.run("grid/restrict", [](Rng& rng, std::ostringstream& detail) {
    for (int t = 0; t < 50; ++t) {
      const SampledSignal f = random_signal(rng, 256, 0.0, 1.0 / 256.0);
      const double a = rng.uniform(-0.2, 0.9);
      const Interval J(a, a + rng.uniform(0.01, 0.6));
      const SampledSignal once = restrict_to(f, J);
      const SampledSignal twice = restrict_to(once, J);
      if (max_abs_diff(once, twice) != 0.0) {
        detail << "case " << t << ": not idempotent";
        return false;
      }
      for (double p : {1.0, 1.5, 2.0, 4.0, kInf}) {
        if (norm(once, p) > norm(f, p) * (1.0 + 1e-15)) {
          detail << "case " << t << ": not contractive in L^" << p;
          return false;
        }
      }
    }
    detail << "50 cases, p in {1, 1.5, 2, 4, inf}";
    return true;
  });

  suite.run("grid/multiplier-linearity", [](Rng& rng, std::ostringstream& detail) {
    for (int t = 0; t < 20; ++t) {
      const std::size_t n = std::size_t{1} << (8 + rng.index(5));
      const double dx = 1.0 / static_cast<double>(n);
      const SampledSignal f = random_signal(rng, n, 0.0, dx);
      const SampledSignal g = random_signal(rng, n, 0.0, dx);
      const Complex alpha(rng.normal(), rng.normal());
      const Complex beta(rng.normal(), rng.normal());
      const double width = rng.uniform(5.0, 200.0);
      const Symbol symbol = [width](double nu) { return Complex(std::exp(-nu * nu / (width * width)), nu / width); };
      const SampledSignal lhs = apply_multiplier(f * alpha + g * beta, symbol);
      const SampledSignal rhs = apply_multiplier(f, symbol) * alpha + apply_multiplier(g, symbol) * beta;
      const double err = norm(lhs - rhs, 2.0) / norm(rhs, 2.0);
      if (err > 1e-10) {
        detail << "case " << t << ": relative error " << err;
        return false;
      }
    }
    detail << "20 cases";
    return true;
  });
}

void expspan_properties(Suite& suite) {
  suite.run("expspan/be-ratio", [](Rng& rng, std::ostringstream& detail) {
    const double sizes[] = {0.25, 1.0, 8.0};
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const FrequencySet xi = random_frequencies(rng, 1 + rng.index(16), 0.0, 64.0, 0.0);
      const double a = rng.uniform(-2.0, 2.0);
      const Interval I(a, a + sizes[t % 3]);
      const BeResult be = be_ratio(I, xi, 4096);
      worst = std::max(worst, be.ratio);
      if (be.ratio > 1.0 + 1e-6) {
        detail << "case " << t << ": ratio " << be.ratio << " with N=" << xi.size();
        return false;
      }
    }
    const BeResult one = be_ratio(Interval(0.0, 1.0), FrequencySet({rng.uniform(0.0, 64.0)}), 4096);
    if (std::abs(one.ratio - 1.0 / std::sqrt(3.0)) > 1e-6) {
      detail << "N=1 ratio " << one.ratio;
      return false;
    }
    detail << "100 cases, max ratio " << worst;
    return true;
  });

  // f_I random on I, zero on the rest of 3I, on a grid fine enough for the
  // frequencies.
  struct ProjectionCase {
    SampledSignal f{SampledSignal::zeros(1, 0.0, 1.0)};
    Interval I, J;
    FrequencySet xi{std::vector<double>{0.0}};
  };
  auto projection_case = [](Rng& rng) {
    const double sizes[] = {0.25, 1.0, 8.0};
    const double len = sizes[rng.index(3)];
    const std::size_t cells = 64 * static_cast<std::size_t>(std::max(1.0, len * 8.0));
    const double dx = len / static_cast<double>(cells);
    const double a = dx * std::floor(rng.uniform(-2.0, 2.0) / dx);
    ProjectionCase c;
    c.I = Interval(a, a + len);
    c.J = Interval(a - len, a + 2.0 * len);
    std::vector<Complex> s(3 * cells);
    for (std::size_t i = cells; i < 2 * cells; ++i) s[i] = Complex(rng.normal(), rng.normal()) * rng.uniform();
    c.f = SampledSignal(std::move(s), a - len, dx);
    c.xi = random_frequencies(rng, 1 + rng.index(8), 0.0, 64.0, 1.0);
    return c;
  };

  suite.run("expspan/projection-bound", [projection_case](Rng& rng, std::ostringstream& detail) {
    for (int t = 0; t < 200; ++t) {
      const ProjectionCase c = projection_case(rng);
      const Projection p = riesz_project(c.f, c.J, c.xi);
      const double bound = std::sqrt(static_cast<double>(c.xi.size()) / c.I.length()) * norm(c.f, 1.0);
      const double lhs = norm(p.g, c.J, 2.0);
      if (lhs > bound * (1.0 + 1e-6)) {
        detail << "case " << t << ": ||g_I|| = " << lhs << " > " << bound;
        return false;
      }
    }
    detail << "200 cases";
    return true;
  });

  suite.run("expspan/moments-vanish", [projection_case](Rng& rng, std::ostringstream& detail) {
    for (int t = 0; t < 200; ++t) {
      const ProjectionCase c = projection_case(rng);
      const Projection p = riesz_project(c.f, c.J, c.xi);
      const CVector m = moments(c.f - p.g, c.J, c.xi);
      const double r = m.cwiseAbs().maxCoeff() / (1.0 + norm(c.f, 1.0));
      if (r > 1e-8) {
        detail << "case " << t << ": residual " << r;
        return false;
      }
    }
    detail << "200 cases";
    return true;
  });

  suite.run("expspan/projection-minimal", [projection_case](Rng& rng, std::ostringstream& detail) {
    for (int t = 0; t < 50; ++t) {
      const ProjectionCase c = projection_case(rng);
      const Projection p = riesz_project(c.f, c.J, c.xi);
      // h has all moments zero: h is orthogonal to the span containing g.
      const SampledSignal u = restrict_to(random_signal(rng, c.f.size(), c.f.x0(), c.f.dx()), c.J);
      const SampledSignal h = u - riesz_project(u, c.J, c.xi).g;
      Complex inner;
      for (std::size_t i = 0; i < h.size(); ++i) inner += p.g[i] * std::conj(h[i]);
      inner *= c.f.dx();
      const double gn = norm(p.g, 2.0);
      const double hn = norm(h, 2.0);
      if (std::abs(inner) > 1e-8 * (gn * hn + 1e-300) || norm(p.g + h, 2.0) < gn * (1.0 - 1e-12)) {
        detail << "case " << t << ": <g, h> = " << std::abs(inner);
        return false;
      }
    }
    detail << "50 cases";
    return true;
  });
}

void cz_properties(Suite& suite, const CheckOptions& options) {
  const int grid = options.grid_log2;
  const bool fault = options.inject_fault;
  suite.run("cz/exact-invariants", [grid, fault](Rng& rng, std::ostringstream& detail) {
    const std::vector<CorpusEntry> corpus = cz_corpus(rng.bits(), 8, grid);
    std::size_t runs = 0;
    bool injected = false;
    for (const CorpusEntry& e : corpus) {
      for (std::size_t N : {1, 4, 16}) {
        CzOutput out = cz_decompose(e.f, e.frequencies(N), e.lambda);
        ++runs;
        if (fault && !injected && !out.pieces.empty()) {
          CzPiece& piece = out.pieces[rng.index(out.pieces.size())];
          std::vector<Complex> b(piece.b_I.samples().begin(), piece.b_I.samples().end());
          const std::size_t i = piece.cells.cells() + rng.index(piece.cells.cells());
          b[i] += 1.0 + norm(piece.b_I, kInf);
          piece.b_I = piece.b_I.with_samples(std::move(b));
          out.diagnostics = verify_bounds(out, e.f);
          injected = true;
        }
        if (!out.diagnostics.exact_ok()) {
          detail << "signal seed " << e.seed << " N=" << N << ":";
          for (const std::string& v : out.diagnostics.violations) detail << " [" << v << "]";
          return false;
        }
      }
    }
    detail << runs << " decompositions";
    return true;
  });

  suite.run("cz/overlap", [grid](Rng& rng, std::ostringstream& detail) {
    const std::vector<CorpusEntry> corpus = cz_corpus(rng.bits(), 8, grid);
    std::size_t worst = 0;
    for (const CorpusEntry& e : corpus) {
      for (std::size_t N : {1, 4, 16}) {
        worst = std::max(worst, cz_decompose(e.f, e.frequencies(N), e.lambda).diagnostics.overlap_max);
      }
    }
    detail << "max overlap of the 3I: " << worst;
    return worst <= 4;
  });

  suite.run("cz/scaling-covariance", [grid](Rng& rng, std::ostringstream& detail) {
    const std::vector<CorpusEntry> corpus = cz_corpus(rng.bits(), 3, grid);
    for (const CorpusEntry& e : corpus) {
      const FrequencySet xi = e.frequencies(4);
      const CzOutput a = cz_decompose(e.f, xi, e.lambda);
      const SampledSignal f2(std::vector<Complex>(e.f.samples().begin(), e.f.samples().end()), e.f.x0() / 2.0,
                             e.f.dx() / 2.0);
      const CzOutput b = cz_decompose(f2, xi.scaled(2.0), e.lambda);
      if (a.pieces.size() != b.pieces.size()) {
        detail << "signal seed " << e.seed << ": " << a.pieces.size() << " vs " << b.pieces.size() << " pieces";
        return false;
      }
      for (std::size_t p = 0; p < a.pieces.size(); ++p) {
        if (std::abs(a.pieces[p].I.a / 2.0 - b.pieces[p].I.a) > 1e-12 ||
            std::abs(a.pieces[p].I.b / 2.0 - b.pieces[p].I.b) > 1e-12) {
          detail << "signal seed " << e.seed << ": interval " << p << " does not scale";
          return false;
        }
      }
      // Rounding differences are amplified by the Gram condition numbers.
      double condition = 1.0;
      for (const CzPiece& p : a.pieces) condition = std::max(condition, p.condition);
      const double err = max_abs_diff(a.g, b.g) / std::max(1e-300, max_abs(e.f));
      if (err > 1e-10 + 1e-14 * condition) {
        detail << "signal seed " << e.seed << ": good parts differ by " << err << " (condition " << condition << ")";
        return false;
      }
    }
    detail << "3 signals, s = 2";
    return true;
  });
}

void multifreq_properties(Suite& suite) {
  suite.run("multifreq/support", [](Rng& rng, std::ostringstream& detail) {
    const MultiplierFamily fam;
    for (int t = 0; t < 10000; ++t) {
      const DyadicInterval omega{static_cast<int>(rng.index(11)) - 5, static_cast<std::int64_t>(rng.index(41)) - 20};
      const Interval w = omega.interval();
      double xi = 0.0;
      switch (rng.index(4)) {
        case 0: xi = w.a; break;
        case 1: xi = w.b; break;
        case 2: xi = w.a - rng.uniform(0.0, 3.0) * w.length(); break;
        default: xi = w.b + rng.uniform(0.0, 3.0) * w.length(); break;
      }
      if (fam.phi_hat(omega, xi) != 0.0) {
        detail << "omega=(" << omega.k << "," << omega.n << ") xi=" << xi;
        return false;
      }
    }
    detail << "10^4 (omega, xi) pairs";
    return true;
  });

  suite.run("multifreq/dm-scale-invariance", [](Rng& rng, std::ostringstream& detail) {
    const MultiplierFamily fam;
    for (int M = 0; M <= 4; ++M) {
      const DyadicInterval omega{static_cast<int>(rng.index(7)) - 3, static_cast<std::int64_t>(rng.index(21)) - 10};
      const double fd = finite_difference_sup(fam, omega, M);
      const double rel = std::abs(fd - fam.D(M)) / fam.D(M);
      if (rel > 1e-6) {
        detail << "M=" << M << ": differences give " << fd << ", D_M = " << fam.D(M);
        return false;
      }
    }
    detail << "M = 0 .. 4";
    return true;
  });

  suite.run("multifreq/disjoint-supports", [](Rng& rng, std::ostringstream& detail) {
    const MultiplierFamily fam;
    for (int t = 0; t < 3; ++t) {
      const SampledSignal f = random_signal(rng, 4096, 0.0, 1.0 / 4096.0);
      const KRange widest = KRange::widest(f);
      const int k = std::max(widest.lo, 5) + static_cast<int>(rng.index(static_cast<std::size_t>(widest.hi - std::max(widest.lo, 5) + 1)));
      const std::int64_t cells = std::int64_t{4096} >> k;
      std::vector<Symbol> symbols;
      for (std::int64_t n = -cells / 2; n < cells / 2 + 1; ++n) {
        symbols.push_back([&fam, k, n](double nu) -> Complex { return fam.phi_hat({k, n}, nu); });
      }
      double total = 0.0;
      for (const SampledSignal& piece : apply_multipliers(f, symbols)) total += std::pow(norm(piece, 2.0), 2);
      const double bound = std::pow(fam.D(0) * norm(f, 2.0), 2);
      if (total > bound * (1.0 + 1e-8)) {
        detail << "k=" << k << ": " << total << " > " << bound;
        return false;
      }
    }
    detail << "3 signals";
    return true;
  });

  suite.run("multifreq/calV-homogeneous", [](Rng& rng, std::ostringstream& detail) {
    const MultiplierFamily fam;
    for (int t = 0; t < 3; ++t) {
      const SampledSignal f = random_bump_mixture(rng, 12, 3, 200.0);
      const FrequencySet X = random_frequencies(rng, 4, -200.0, 200.0, 1.0);
      const KRange ks = KRange::widest(f);
      const Complex alpha = rng.uniform(0.1, 5.0) * rng.unit_phase();
      const SampledSignal v = calV(f, X, ks, 4.0, fam);
      const SampledSignal va = calV(f * alpha, X, ks, 4.0, fam);
      const double err = max_abs_diff(va, v * std::abs(alpha)) / (std::abs(alpha) * max_abs(v));
      if (err > 1e-10) {
        detail << "case " << t << ": relative error " << err;
        return false;
      }
    }
    detail << "3 cases";
    return true;
  });

  suite.run("multifreq/calV-modulation", [](Rng& rng, std::ostringstream& detail) {
    const MultiplierFamily fam;
    const std::size_t n = 4096;
    const double dx = 1.0 / static_cast<double>(n);
    const KRange ks{3, 7};
    const double eta = 128.0;
    for (int t = 0; t < 3; ++t) {
      std::vector<Complex> spectrum(n);
      for (std::size_t m = 0; m < n; ++m) {
        if (std::abs(bin_frequency(m, n, dx)) <= 1000.0) spectrum[m] = Complex(rng.normal(), rng.normal());
      }
      const SampledSignal f = idft(spectrum, 0.0, dx);
      std::vector<Complex> mod(n);
      for (std::size_t i = 0; i < n; ++i) mod[i] = f[i] * std::polar(1.0, kTwoPi * eta * f.x(i));
      const FrequencySet X = random_frequencies(rng, 4, -900.0, 900.0, 1.0);
      const SampledSignal v = calV(f, X, ks, 4.0, fam);
      const SampledSignal vm = calV(f.with_samples(std::move(mod)), X.shifted(eta), ks, 4.0, fam);
      const double err = max_abs_diff(v, vm) / max_abs(v);
      if (err > 1e-10) {
        detail << "case " << t << ": relative error " << err;
        return false;
      }
    }
    detail << "3 band-limited signals, shift 2^7";
    return true;
  });

  suite.run("multifreq/mets-below-vets", [](Rng& rng, std::ostringstream& detail) {
    for (int t = 0; t < 50; ++t) {
      const std::size_t N = std::size_t{1} << rng.index(4);
      const FrequencySet xi = random_frequencies(rng, N, 0.0, 64.0, 1.0);
      const VectorSequence c = random_sequence(rng, 3 + rng.index(10), N, false);
      const double m = mets_lhs(c, xi, 512);
      const double v = vets_lhs(c, xi, 4.0, 512);
      if (m > v * (1.0 + 1e-12)) {
        detail << "case " << t << ": " << m << " > " << v;
        return false;
      }
    }
    detail << "50 cases";
    return true;
  });

  suite.run("multifreq/orthsums-exact", [](Rng& rng, std::ostringstream& detail) {
    for (int t = 0; t < 50; ++t) {
      std::vector<double> freqs;
      for (int v = -50; v <= 50; ++v) {
        if (rng.index(8) == 0) freqs.push_back(v);
      }
      if (freqs.empty()) freqs.push_back(0.0);
      std::vector<Complex> d(freqs.size());
      for (Complex& v : d) v = Complex(rng.normal(), rng.normal());
      const double r = orthsums_ratio(d, FrequencySet(freqs), 512);
      if (std::abs(r - 1.0) > 1e-10) {
        detail << "case " << t << ": ratio " << r;
        return false;
      }
    }
    detail << "50 integer frequency sets";
    return true;
  });
}

void io_properties(Suite& suite) {
  suite.run("io/round-trip", [](Rng& rng, std::ostringstream& detail) {
    for (int t = 0; t < 10; ++t) {
      const SampledSignal f = random_signal(rng, 16 + rng.index(200), rng.uniform(-3.0, 3.0), rng.uniform(1e-3, 1.0));
      std::stringstream ss;
      write_signal_csv(ss, f);
      const SampledSignal g = read_signal_csv(ss);
      if (g.size() != f.size() || std::abs(g.dx() - f.dx()) > 1e-12 * f.dx() || max_abs_diff(f, g) > 1e-12 * max_abs(f)) {
        detail << "signal case " << t;
        return false;
      }
      const VectorSequence s = random_sequence(rng, 1 + rng.index(20), 1 + rng.index(3), false);
      std::stringstream ss2;
      write_sequence_csv(ss2, s);
      const VectorSequence s2 = read_sequence_csv(ss2);
      if (s2.size() != s.size() || s2.dim() != s.dim() || !std::equal(s.keys().begin(), s.keys().end(), s2.keys().begin())) {
        detail << "sequence case " << t << ": shape";
        return false;
      }
      for (std::size_t i = 0; i < s.values().size(); ++i) {
        if (std::abs(s.values()[i] - s2.values()[i]) > 1e-12 * (1.0 + std::abs(s.values()[i]))) {
          detail << "sequence case " << t << ": values";
          return false;
        }
      }
    }
    detail << "10 signals, 10 sequences";
    return true;
  });
}

}  // namespace

std::vector<PropertyResult> run_property_suite(std::uint64_t seed, const CheckOptions& options) {
  Suite suite(seed);
  grid_properties(suite);
  variation_properties(suite);
  expspan_properties(suite);
  cz_properties(suite, options);
  multifreq_properties(suite);
  io_properties(suite);
  return suite.take();
}

double finite_difference_sup(const MultiplierFamily& fam, const DyadicInterval& omega, int M) {
  if (M < 0 || M > 4) throw std::invalid_argument("finite differences are implemented for M <= 4");
  const Interval w = omega.interval();
  const double len = w.length();
  auto phi = [&](double xi) { return fam.phi_hat(omega, xi); };
  auto stencil = [&](double xi, double h) {
    const double m2 = phi(xi - 2 * h), m1 = phi(xi - h), p1 = phi(xi + h), p2 = phi(xi + 2 * h);
    switch (M) {
      case 1: return (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h);
      case 2: return (-m2 + 16 * m1 - 30 * phi(xi) + 16 * p1 - p2) / (12 * h * h);
      case 3: return (-m2 + 2 * m1 - 2 * p1 + p2) / (2 * h * h * h);
      default: return (m2 - 4 * m1 + 6 * phi(xi) - 4 * p1 + p2) / (h * h * h * h);
    }
  };
  const double h = len * 0x1.0p-10;
  const double order = M <= 2 ? 4.0 : 2.0;
  auto scaled = [&](double xi) {
    if (M == 0) return std::abs(phi(xi));
    const double coarse = stencil(xi, h);
    const double fine = stencil(xi, h / 2);
    const double extrapolated = fine + (fine - coarse) / (std::exp2(order) - 1.0);
    return std::pow(len, M) * std::abs(extrapolated);
  };
  constexpr std::size_t kPoints = std::size_t{1} << 14;
  std::vector<double> y(kPoints + 1);
  std::size_t best = 1;
  for (std::size_t i = 1; i < kPoints; ++i) {
    y[i] = scaled(w.a + len * static_cast<double>(i) / static_cast<double>(kPoints));
    if (y[i] > y[best]) best = i;
  }
  if (best == 1 || best + 1 >= kPoints) return y[best];
  const double y0 = y[best - 1], y1 = y[best], y2 = y[best + 1];
  const double curvature = y0 - 2 * y1 + y2;
  return curvature < 0.0 ? y1 - (y0 - y2) * (y0 - y2) / (8 * curvature) : y1;
}

HarnessMaxima run_harnesses(std::uint64_t seed) {
  HarnessMaxima h;
  Rng rng(derive_seed(seed, name_hash("harness/orthsums")));
  for (int t = 0; t < 100; ++t) {
    const FrequencySet xi = random_frequencies(rng, 2 + rng.index(15), 0.0, 64.0, 1.0);
    std::vector<Complex> d(xi.size());
    for (Complex& v : d) v = Complex(rng.normal(), rng.normal());
    h.orthsums = std::max(h.orthsums, orthsums_ratio(d, xi, 1024));
  }

  rng = Rng(derive_seed(seed, name_hash("harness/vets")));
  const std::size_t Ns[] = {2, 4, 8};
  for (int t = 0; t < 100; ++t) {
    const std::size_t N = Ns[t % 3];
    const FrequencySet xi = random_frequencies(rng, N, 0.0, 64.0, 1.0);
    const std::size_t len = 4 + rng.index(9);
    std::vector<std::int64_t> keys(len);
    std::vector<Complex> values(len * N);
    for (std::size_t k = 0; k < len; ++k) {
      keys[k] = static_cast<std::int64_t>(k);
      for (std::size_t j = 0; j < N; ++j) {
        const Complex step(rng.normal(), rng.normal());
        values[k * N + j] = (k > 0 ? values[(k - 1) * N + j] : Complex{}) + step;
      }
    }
    const VectorSequence c(std::move(keys), std::move(values), N);
    h.vets = std::max(h.vets, vets_ratio(c, xi, 2.5, 4.0, 512));
    h.mets = std::max(h.mets, mets_ratio(c, xi, 2.5, 512));
    if (mets_lhs(c, xi, 512) > vets_lhs(c, xi, 4.0, 512) * (1.0 + 1e-12)) ++h.mets_above_vets;
  }

  rng = Rng(derive_seed(seed, name_hash("harness/lepingle")));
  const SmoothingKernel kernel;
  for (int t = 0; t < 50; ++t) {
    const SampledSignal g = random_bump_mixture(rng, 12, 1 + rng.index(4), 200.0);
    h.lepingle = std::max(h.lepingle, lepingle_ratio(g, KRange::widest(g), 2.5, kernel));
  }
  return h;
}

Json calibrate(std::uint64_t seed, double headroom) {
  const HarnessMaxima h = run_harnesses(seed);
  const std::vector<CorpusEntry> corpus = cz_corpus(seed);
  const CzCorpusResult cz = run_cz_corpus(corpus, kCorpusNs);
  WeakScanOptions wopts;
  wopts.seed = seed;
  const WeakScanResult weak = weak_scan(wopts);

  Json measured;
  measured["orthsums"] = h.orthsums;
  measured["vets"] = h.vets;
  measured["mets"] = h.mets;
  measured["lepingle"] = h.lepingle;
  measured["r_cover"] = cz.max_r_cover;
  measured["r_good"] = cz.max_r_good;
  measured["r_fI"] = cz.max_r_fI;
  measured["r_proj"] = cz.max_r_proj;
  measured["r_proj_sharp"] = cz.max_r_proj_sharp;
  measured["overlap"] = cz.max_overlap;
  measured["weak_Q"] = weak.Q_max;

  Json constants;
  for (const auto& [key, value] : measured.items()) {
    constants[key] = key == "overlap" ? Json(4) : Json(headroom * value.get<double>());
  }

  const CorpusEntry& e = corpus[kFixtureSignal];
  const CzOutput fixture = cz_decompose(e.f, e.frequencies(kFixtureN), e.lambda);

  Json j;
  j["seed"] = seed;
  j["headroom"] = headroom;
  j["measured"] = std::move(measured);
  j["constants"] = std::move(constants);
  j["fixture"] = {{"signal", kFixtureSignal}, {"N", kFixtureN}, {"output", cz_to_json(fixture)}};
  j["scan_runtime_budget_seconds"] = 300;
  return j;
}

}  // namespace mfcz
