#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfcz/multifreq.hpp"
#include "mfcz/report.hpp"

namespace mfcz {

struct PropertyResult {
  std::string name;
  bool pass{true};
  std::string detail;
  std::uint64_t seed{0};
};

struct CheckOptions {
  /// Perturb one sample of one b_I before re-verifying the decomposition.
  bool inject_fault{false};
  /// Grid for the decomposition properties.
  int grid_log2{12};
};

/// Every module invariant on generated inputs. Each property derives its own
/// seed from `seed`, reported for reproduction.
std::vector<PropertyResult> run_property_suite(std::uint64_t seed, const CheckOptions& options = {});

/// sup over a 2^14-point grid on omega of |omega|^M |phi_hat_omega^{(M)}|,
/// derivatives by 5-point differences with one Richardson step.
double finite_difference_sup(const MultiplierFamily& fam, const DyadicInterval& omega, int M);

/// Largest ratios seen by the measurement harnesses on seeded inputs.
struct HarnessMaxima {
  double orthsums{0.0};
  double vets{0.0};
  double mets{0.0};
  double lepingle{0.0};
  std::size_t mets_above_vets{0};  // cases with mets LHS > vets LHS
};

/// orthsums: 100 cases, vets and mets: 100 cases with N in {2, 4, 8},
/// r = 2.5, q = 4; lepingle: 50 signals on a 2^12 grid.
HarnessMaxima run_harnesses(std::uint64_t seed);

/// Measured maxima over the harnesses, the decomposition corpus and the
/// weak-type scan, the constants (measured times headroom) and the
/// diagnostics of a fixture decomposition.
Json calibrate(std::uint64_t seed, double headroom = 1.5);

/// Corpus entry and N used for the fixture decomposition.
inline constexpr std::size_t kFixtureSignal = 0;
inline constexpr std::size_t kFixtureN = 4;

}  // namespace mfcz
