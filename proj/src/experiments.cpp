#include "mfcz/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mfcz {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ b);
}

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(kTwoPi * u2);
  return radius * std::cos(kTwoPi * u2);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::index: empty range");
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

Complex Rng::unit_phase() { return std::polar(1.0, kTwoPi * uniform()); }

FrequencySet random_frequencies(Rng& rng, std::size_t N, double lo, double hi, double min_gap) {
  const double span = hi - lo - static_cast<double>(N == 0 ? 0 : N - 1) * min_gap;
  if (N == 0 || span < 0.0) throw std::invalid_argument("random_frequencies: range too short for the gap");
  std::vector<double> u(N);
  for (double& v : u) v = rng.uniform(0.0, span);
  std::sort(u.begin(), u.end());
  for (std::size_t i = 0; i < N; ++i) u[i] += lo + static_cast<double>(i) * min_gap;
  return FrequencySet(std::move(u));
}

SampledSignal random_bump_mixture(Rng& rng, int grid_log2, std::size_t components, double max_modulation) {
  const std::size_t n = std::size_t{1} << grid_log2;
  const double dx = 1.0 / static_cast<double>(n);
  std::vector<Complex> samples(n);
  for (std::size_t c = 0; c < components; ++c) {
    const Complex amp = (0.5 + rng.uniform()) * rng.unit_phase();
    const double center = rng.uniform(0.3, 0.7);
    const double sigma = std::exp2(rng.uniform(-7.0, -4.0));
    const double nu = rng.uniform() < 0.5 ? rng.uniform(-max_modulation, max_modulation) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) * dx;
      const double z = (x - center) / sigma;
      samples[i] += amp * std::exp(-0.5 * z * z) * std::polar(1.0, kTwoPi * nu * x);
    }
  }
  return SampledSignal(std::move(samples), 0.0, dx);
}

std::optional<SlopeFit> loglog_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("loglog_fit: size mismatch");
  if (x.size() < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) return std::nullopt;
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  const double n = static_cast<double>(x.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) return std::nullopt;
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

FrequencySet CorpusEntry::frequencies(std::size_t N) const {
  if (N == 0 || N > pool.size()) throw std::invalid_argument("corpus entries carry 1 to 16 frequencies");
  std::vector<double> xi(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(N));
  std::sort(xi.begin(), xi.end());
  return FrequencySet(std::move(xi));
}

std::vector<CorpusEntry> cz_corpus(std::uint64_t seed, std::size_t count, int grid_log2) {
  std::vector<CorpusEntry> corpus;
  for (std::size_t i = 0; i < count; ++i) {
    CorpusEntry e;
    e.seed = derive_seed(seed, i);
    Rng rng(e.seed);
    e.f = random_bump_mixture(rng, grid_log2, 1 + rng.index(4), 48.0);
    const FrequencySet xi = random_frequencies(rng, kCorpusMaxN, 0.0, 64.0, 1.0);
    e.pool.assign(xi.values().begin(), xi.values().end());
    for (std::size_t j = e.pool.size() - 1; j > 0; --j) std::swap(e.pool[j], e.pool[rng.index(j + 1)]);
    e.lambda = norm(e.f, 1.0) * std::exp2(rng.uniform(0.0, 4.0));
    corpus.push_back(std::move(e));
  }
  return corpus;
}

namespace {

std::vector<double> as_doubles(std::span<const std::size_t> v) { return {v.begin(), v.end()}; }

}  // namespace

CzCorpusResult run_cz_corpus(const std::vector<CorpusEntry>& corpus, std::span<const std::size_t> Ns,
                             unsigned threads) {
  CzCorpusResult res;
  res.Ns.assign(Ns.begin(), Ns.end());
  res.rows.resize(corpus.size() * Ns.size());
  parallel_for(res.rows.size(), threads, [&](std::size_t task) {
    const std::size_t s = task / Ns.size();
    const std::size_t N = Ns[task % Ns.size()];
    const CorpusEntry& e = corpus[s];
    const CzOutput out = cz_decompose(e.f, e.frequencies(N), e.lambda);
    CzCorpusRow row;
    row.signal = s;
    row.N = N;
    row.lambda = e.lambda;
    row.pieces = out.pieces.size();
    row.diagnostics = out.diagnostics;
    const double sqrt_n = std::sqrt(static_cast<double>(N));
    row.cover = out.diagnostics.r_cover * sqrt_n;
    row.good = out.diagnostics.r_good * sqrt_n;
    res.rows[task] = std::move(row);
  });

  res.cover_max.assign(Ns.size(), 0.0);
  res.good_max.assign(Ns.size(), 0.0);
  for (std::size_t task = 0; task < res.rows.size(); ++task) {
    const CzCorpusRow& row = res.rows[task];
    const CzDiagnostics& d = row.diagnostics;
    const std::size_t n = task % Ns.size();
    res.cover_max[n] = std::max(res.cover_max[n], row.cover);
    res.good_max[n] = std::max(res.good_max[n], row.good);
    res.violations += d.violations.size();
    res.max_r_cover = std::max(res.max_r_cover, d.r_cover);
    res.max_r_good = std::max(res.max_r_good, d.r_good);
    res.max_r_fI = std::max(res.max_r_fI, d.r_fI);
    res.max_r_proj = std::max(res.max_r_proj, d.r_proj);
    res.max_r_proj_sharp = std::max(res.max_r_proj_sharp, d.r_proj_sharp);
    res.max_moment_residual = std::max(res.max_moment_residual, d.moment_residual_max);
    res.max_reconstruction_error = std::max(res.max_reconstruction_error, d.reconstruction_error);
    res.max_overlap = std::max(res.max_overlap, d.overlap_max);
  }
  const std::vector<double> x = as_doubles(Ns);
  res.cover_fit = loglog_fit(x, res.cover_max);
  res.good_fit = loglog_fit(x, res.good_max);
  return res;
}

ScaleFactor operator_scale(const FrequencySet& X, const KRange& ks, double r, int M, const MultiplierFamily& fam) {
  ScaleFactor s;
  s.DM = fam.D(M);
  for (double xi : X.values()) s.sup_symbol_variation = std::max(s.sup_symbol_variation, symbol_variation(xi, ks, r, fam));
  s.A = (1.0 + std::log(static_cast<double>(X.size()))) * (s.DM + s.sup_symbol_variation);
  return s;
}

void validate_scan_options(const ScanOptions& opts) {
  if (!(2.0 < opts.r && opts.r < opts.q)) throw std::invalid_argument("need 2 < r < q");
  if (opts.trials < 5) throw std::invalid_argument("need at least 5 trials per N");
  if (opts.Ns.empty()) throw std::invalid_argument("need at least one N");
  for (std::size_t i = 0; i < opts.Ns.size(); ++i) {
    if (opts.Ns[i] == 0) throw std::invalid_argument("N must be positive");
    if (i > 0 && opts.Ns[i] <= opts.Ns[i - 1]) throw std::invalid_argument("N values must be strictly ascending");
  }
  if (opts.grid_log2 < 6 || opts.grid_log2 > 22) throw std::invalid_argument("grid must be 2^6 .. 2^22 points");
  if (opts.M < 0 || opts.M > MotherSymbol::kMaxOrder) throw std::invalid_argument("derivative order out of range");
}

ScanResult scaling_scan(const ScanOptions& opts) {
  validate_scan_options(opts);
  const MultiplierFamily fam;
  ScanResult res;
  res.M = opts.M;
  res.exponent = (0.5 - 1.0 / opts.r) * opts.q / (opts.q - 2.0);
  res.exponent_budget = res.exponent + 0.35;
  res.rows.resize(opts.Ns.size() * opts.trials);

  const double band = std::ldexp(1.0, opts.grid_log2 - 4);
  parallel_for(res.rows.size(), opts.threads, [&](std::size_t task) {
    const std::size_t N = opts.Ns[task / opts.trials];
    const std::size_t trial = task % opts.trials;
    ScanRow row;
    row.N = N;
    row.trial = trial;
    row.seed = derive_seed(opts.seed, N, trial);
    Rng rng(row.seed);
    const FrequencySet X = random_frequencies(rng, N, -band, band, 1.0);

    const std::size_t n = std::size_t{1} << opts.grid_log2;
    const double dx = 1.0 / static_cast<double>(n);
    std::vector<Complex> samples(n);
    for (double xi : X.values()) {
      const Complex amp = Complex(rng.normal(), rng.normal());
      const double center = rng.uniform(0.25, 0.75);
      const double sigma = std::exp2(rng.uniform(-6.0, -3.0));
      const double nu = xi + rng.uniform(-2.0, 2.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) * dx;
        const double z = (x - center) / sigma;
        samples[i] += amp * std::exp(-0.5 * z * z) * std::polar(1.0, kTwoPi * nu * x);
      }
    }
    const SampledSignal f(std::move(samples), 0.0, dx);
    const KRange ks = opts.ks.value_or(KRange::widest(f));
    const ScaleFactor scale = operator_scale(X, ks, opts.r, opts.M, fam);
    row.A = scale.A;
    row.D0 = fam.D(0);
    row.D1 = fam.D(1);
    row.sup_symbol_variation = scale.sup_symbol_variation;
    row.S = norm(calV(f, X, ks, opts.q, fam), 2.0) / (scale.A * norm(f, 2.0));
    res.rows[task] = row;
  });

  res.S_max.assign(opts.Ns.size(), 0.0);
  for (std::size_t task = 0; task < res.rows.size(); ++task) {
    double& m = res.S_max[task / opts.trials];
    m = std::max(m, res.rows[task].S);
  }
  res.fit = loglog_fit(as_doubles(opts.Ns), res.S_max);
  res.pass = !res.fit || res.fit->slope <= res.exponent_budget;
  return res;
}

WeakScanResult weak_scan(const WeakScanOptions& opts) {
  if (!(2.0 < opts.r && opts.r < opts.q)) throw std::invalid_argument("need 2 < r < q");
  if (opts.levels < 1) throw std::invalid_argument("need at least one level");
  for (std::size_t N : opts.Ns) {
    if (N == 0 || N > kCorpusMaxN) throw std::invalid_argument("weak scan N must be in 1..16");
  }
  const MultiplierFamily fam;
  const std::vector<CorpusEntry> corpus = cz_corpus(opts.seed, opts.signals, opts.grid_log2);
  const std::size_t levels = static_cast<std::size_t>(opts.levels);
  const std::size_t per_task = levels;
  WeakScanResult res;
  res.rows.resize(opts.Ns.size() * corpus.size() * per_task);

  parallel_for(opts.Ns.size() * corpus.size(), opts.threads, [&](std::size_t task) {
    const std::size_t N = opts.Ns[task / corpus.size()];
    const std::size_t s = task % corpus.size();
    const CorpusEntry& e = corpus[s];
    const FrequencySet X = e.frequencies(N);
    const KRange ks = KRange::widest(e.f);
    const SampledSignal Vf = calV(e.f, X, ks, opts.q, fam);
    const ScaleFactor scale = operator_scale(X, ks, opts.r, opts.M, fam);
    double vmax = 0.0;
    for (const Complex& v : Vf.samples()) vmax = std::max(vmax, v.real());
    std::vector<double> lambdas(levels);
    for (std::size_t j = 0; j < levels; ++j) lambdas[j] = vmax * std::exp2(-0.5 * static_cast<double>(j));
    if (vmax == 0.0) std::fill(lambdas.begin(), lambdas.end(), 1.0);
    const double f_l1 = norm(e.f, 1.0);
    const auto rows = weak_type_rows(Vf, f_l1, N, lambdas);
    for (std::size_t j = 0; j < levels; ++j) {
      WeakScanRow row;
      row.N = N;
      row.signal = s;
      row.lambda = rows[j].lambda;
      row.measure = rows[j].measure;
      row.A = scale.A;
      row.W = f_l1 > 0.0 ? row.lambda * row.measure / (f_l1 * scale.A) : 0.0;
      row.Q = row.W / std::sqrt(static_cast<double>(N));
      res.rows[task * per_task + j] = row;
    }
  });

  res.W_max.assign(opts.Ns.size(), 0.0);
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const WeakScanRow& row = res.rows[i];
    double& w = res.W_max[i / (corpus.size() * per_task)];
    w = std::max(w, row.W);
    res.Q_max = std::max(res.Q_max, row.Q);
  }
  res.fit = loglog_fit(as_doubles(opts.Ns), res.W_max);
  res.pass = !res.fit || res.fit->slope <= res.exponent_budget;
  return res;
}

}  // namespace mfcz
