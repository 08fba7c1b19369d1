#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mfcz/expspan.hpp"
#include "mfcz/grid_signal.hpp"

namespace mfcz {

/// Zero padding applied on each side of the input before decomposition, in
/// multiples of the input length.
inline constexpr std::size_t kCzPadFactor = 8;

/// f extended by zeros: factor * length on each side, same spacing.
SampledSignal pad_signal(const SampledSignal& f, std::size_t factor = kCzPadFactor);

/// Uncentered maximal function over windows of 2^j cells (all j with
/// 2^j <= size) at every grid offset, applied to |f|. Within a factor 2 of the
/// full uncentered maximal function.
SampledSignal hl_maximal(const SampledSignal& f);

/// A union of grid cells [x0 + i dx, x0 + (i+1) dx).
struct CellSet {
  double x0{0.0};
  double dx{1.0};
  std::vector<std::uint8_t> cells;
  std::size_t count{0};

  double measure() const { return static_cast<double>(count) * dx; }
  bool contains(std::size_t i) const { return i < cells.size() && cells[i] != 0; }
};

/// Cells where Mf > threshold (strict).
CellSet level_set(const SampledSignal& Mf, double threshold);

/// A dyadic interval of 2^scale cells starting at cell `first`, aligned so that
/// first is a multiple of 2^scale.
struct CellInterval {
  std::size_t first{0};
  int scale{0};

  std::size_t cells() const { return std::size_t{1} << scale; }
  std::size_t end() const { return first + cells(); }
};

struct DyadicSelection {
  std::vector<CellInterval> cells;   // ordered by first cell
  std::vector<Interval> intervals;   // the same intervals in x coordinates
  double uncovered_measure{0.0};     // |E minus union of the intervals|
};

/// Cells covered by cI for the cell interval I (every cell meeting cI),
/// clipped to [0, total). Returns [lo, hi) and whether clipping occurred.
struct CellRange {
  std::size_t lo{0};
  std::size_t hi{0};
  bool clipped{false};
};
CellRange dilate_cells(const CellInterval& I, double c, std::size_t total);

/// Maximal dyadic intervals I (aligned to the grid origin) with I and 6I
/// inside E. Pairwise disjoint.
DyadicSelection maximal_dyadic_intervals(const CellSet& E);

struct CzPiece {
  CellInterval cells;        // I on the padded grid
  Interval I;
  Interval I3;               // 3I
  SampledSignal f_I;         // on the grid points of 3I, zero outside I
  SampledSignal g_I;         // on the grid points of 3I
  SampledSignal b_I;         // f_I - g_I
  std::size_t offset{0};     // padded-grid index of the first sample of 3I
  double condition{1.0};
  bool regularized{false};
};

struct CzDiagnostics {
  double r_cover{0.0};             // (sum |I|) lambda / (N^{1/2} ||f||_1)
  double r_good{0.0};              // ||g||_2^2 / (||f||_1 N^{1/2} lambda)
  double r_fI{0.0};                // max ||f_I||_1 / (|I| lambda)
  double r_proj{0.0};              // max ||f_I - b_I||_2 / (|I|^{1/2} lambda N^{1/2})
  double r_proj_sharp{0.0};        // max ||f_I - b_I||_2 / (|I|^{1/2} lambda)
  double moment_residual_max{0.0}; // max |int b_I e_j| / (1 + ||f_I||_1)
  double reconstruction_error{0.0};
  double uncovered_measure{0.0};
  std::size_t overlap_max{0};      // max number of 3I containing a cell
  std::size_t regularized_pieces{0};
  std::vector<std::string> violations;

  bool exact_ok() const { return violations.empty(); }
};

struct CzOutput {
  double lambda{0.0};
  FrequencySet xi{std::vector<double>{0.0}};
  std::vector<CzPiece> pieces;
  SampledSignal g{SampledSignal::zeros(1, 0.0, 1.0)};  // on the padded grid
  CellSet E;
  DyadicSelection selection;
  CzDiagnostics diagnostics;
};

/// Tolerances for the exact invariants checked by verify_bounds.
inline constexpr double kReconstructionTolerance = 1e-12;
inline constexpr double kMomentTolerance = 1e-8;

/// f = g + sum_I b_I at height lambda for the frequencies xi.
CzOutput cz_decompose(const SampledSignal& f, const FrequencySet& xi, double lambda);

/// Recomputes every diagnostic ratio and checks the exact invariants
/// (reconstruction, disjointness, support in 3I, 6I inside E, vanishing
/// moments); violations are listed by name.
CzDiagnostics verify_bounds(const CzOutput& out, const SampledSignal& f);

}  // namespace mfcz
