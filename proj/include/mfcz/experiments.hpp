#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mfcz/czdecomp.hpp"
#include "mfcz/grid_signal.hpp"
#include "mfcz/multifreq.hpp"

namespace mfcz {

/// SplitMix64 mixing of (base, a, b) into a fresh seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/// Portable random source: mt19937_64 bits, with the floating-point
/// transforms done here so results do not depend on the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform on {0, .., n-1}.
  std::size_t index(std::size_t n);
  Complex unit_phase();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// N frequencies in [lo, hi] with consecutive gaps >= min_gap.
FrequencySet random_frequencies(Rng& rng, std::size_t N, double lo, double hi, double min_gap);

/// A mixture of Gaussian bumps, about half of them modulated, on [0, 1)
/// with 2^grid_log2 points.
SampledSignal random_bump_mixture(Rng& rng, int grid_log2, std::size_t components, double max_modulation);

/// Least-squares fit of log y against log x.
struct SlopeFit {
  double slope{0.0};
  double intercept{0.0};
};
std::optional<SlopeFit> loglog_fit(std::span<const double> x, std::span<const double> y);

/// Runs body(i) for i < n on up to `threads` workers (0 = hardware).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

// ---------------------------------------------------------------------------
// Seeded corpus for the decomposition.

inline constexpr std::uint64_t kCorpusSeed = 20240611;
inline constexpr std::size_t kCorpusSize = 50;
inline constexpr std::size_t kCorpusMaxN = 16;
inline const std::vector<std::size_t> kCorpusNs{1, 2, 4, 8, 16};

struct CorpusEntry {
  std::uint64_t seed{0};
  SampledSignal f{SampledSignal::zeros(1, 0.0, 1.0)};
  std::vector<double> pool;  // kCorpusMaxN frequencies in random order
  double lambda{0.0};        // fixed across N

  /// The first N pool frequencies, sorted.
  FrequencySet frequencies(std::size_t N) const;
};

std::vector<CorpusEntry> cz_corpus(std::uint64_t seed = kCorpusSeed, std::size_t count = kCorpusSize,
                                   int grid_log2 = 14);

struct CzCorpusRow {
  std::size_t signal{0};
  std::size_t N{0};
  double lambda{0.0};
  std::size_t pieces{0};
  double cover{0.0};  // (sum |I|) lambda / ||f||_1
  double good{0.0};   // ||g||_2^2 / (||f||_1 lambda)
  CzDiagnostics diagnostics;
};

struct CzCorpusResult {
  std::vector<CzCorpusRow> rows;
  std::vector<std::size_t> Ns;
  std::vector<double> cover_max;  // per N
  std::vector<double> good_max;   // per N
  std::optional<SlopeFit> cover_fit;
  std::optional<SlopeFit> good_fit;
  std::size_t violations{0};
  double max_r_cover{0.0}, max_r_good{0.0}, max_r_fI{0.0}, max_r_proj{0.0}, max_r_proj_sharp{0.0};
  double max_moment_residual{0.0}, max_reconstruction_error{0.0};
  std::size_t max_overlap{0};
};

CzCorpusResult run_cz_corpus(const std::vector<CorpusEntry>& corpus, std::span<const std::size_t> Ns,
                             unsigned threads = 0);

// ---------------------------------------------------------------------------
// Operator scans.

/// (1 + log N)(D_M + max_j symbol_variation(xi_j)).
struct ScaleFactor {
  double A{0.0};
  double DM{0.0};
  double sup_symbol_variation{0.0};
};
ScaleFactor operator_scale(const FrequencySet& X, const KRange& ks, double r, int M, const MultiplierFamily& fam);

struct ScanOptions {
  std::vector<std::size_t> Ns{2, 4, 8, 16, 32};
  std::size_t trials{20};
  double q{4.0};
  double r{2.5};
  std::uint64_t seed{1};
  int grid_log2{14};
  std::optional<KRange> ks;
  int M{1};
  unsigned threads{0};
};

struct ScanRow {
  std::size_t N{0};
  std::size_t trial{0};
  std::uint64_t seed{0};
  double S{0.0};
  double A{0.0};
  double D0{0.0};
  double D1{0.0};
  double sup_symbol_variation{0.0};
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::vector<double> S_max;  // per N
  std::optional<SlopeFit> fit;
  double exponent{0.0};        // (1/2 - 1/r) q / (q - 2)
  double exponent_budget{0.0}; // exponent + 0.35
  bool pass{true};
  int M{1};
};

/// Throws std::invalid_argument on 2 < r < q, trials >= 5 or Ns order
/// violations.
void validate_scan_options(const ScanOptions& opts);

ScanResult scaling_scan(const ScanOptions& opts);

struct WeakScanOptions {
  std::vector<std::size_t> Ns{1, 2, 4, 8, 16};
  std::size_t signals{kCorpusSize};
  double q{4.0};
  double r{2.5};
  std::uint64_t seed{kCorpusSeed};
  int grid_log2{14};
  int levels{16};  // lambda = max(calV f) 2^{-j/2}, j < levels
  int M{1};
  unsigned threads{0};
};

struct WeakScanRow {
  std::size_t N{0};
  std::size_t signal{0};
  double lambda{0.0};
  double measure{0.0};
  double A{0.0};
  double W{0.0};  // lambda |{calV f > lambda}| / (||f||_1 A)
  double Q{0.0};  // W / N^{1/2}
};

struct WeakScanResult {
  std::vector<WeakScanRow> rows;
  std::vector<double> W_max;  // per N
  double Q_max{0.0};
  std::optional<SlopeFit> fit;
  double exponent_budget{0.85};
  bool pass{true};
};

WeakScanResult weak_scan(const WeakScanOptions& opts);

}  // namespace mfcz
