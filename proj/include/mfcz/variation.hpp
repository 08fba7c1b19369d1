#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mfcz/grid_signal.hpp"

namespace mfcz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A finite sequence k -> c_k in C^d with strictly increasing integer keys,
/// normed by the l^2 norm on C^d.
class VectorSequence {
 public:
  /// values is row-major: entry (i, j) is values[i * dim + j].
  VectorSequence(std::vector<std::int64_t> keys, std::vector<Complex> values, std::size_t dim);

  /// Scalar sequence with keys first_key, first_key + 1, ...
  static VectorSequence scalar(std::span<const double> values, std::int64_t first_key = 1);
  static VectorSequence scalar(std::span<const Complex> values, std::int64_t first_key = 1);

  std::size_t size() const { return keys_.size(); }
  std::size_t dim() const { return dim_; }
  std::span<const std::int64_t> keys() const { return keys_; }
  std::span<const Complex> values() const { return values_; }
  std::span<const Complex> value(std::size_t i) const {
    return std::span<const Complex>(values_).subspan(i * dim_, dim_);
  }

  double norm_at(std::size_t i) const;
  double distance(std::size_t i, std::size_t j) const;

  /// max_{i,j} |c_i - c_j|.
  double diameter() const;
  /// min |c_i - c_j| over pairs with c_i != c_j; +inf if all values coincide.
  double min_distinct_distance() const;

 private:
  std::vector<std::int64_t> keys_;
  std::vector<Complex> values_;
  std::size_t dim_;
};

/// sup over increasing subsequences of (sum |c_{k_j} - c_{k_{j-1}}|^r)^{1/r};
/// r = kInf gives the largest pairwise gap. Exact, O(M^2) pair evaluations.
double tilde_variation(const VectorSequence& s, double r);

/// sup_k |c_k| + tilde_variation(s, r).
double variation(const VectorSequence& s, double r);

// Scalar fast paths used by the pointwise operators.
double tilde_variation(std::span<const Complex> values, double r);
double variation(std::span<const Complex> values, double r);

/// Exhaustive enumeration over all increasing subsequences. M <= 14.
double tilde_variation_bruteforce(const VectorSequence& s, double r);
inline constexpr std::size_t kBruteforceMaxLength = 14;

/// Greedy lambda-jump cover: anchors at the first key, then repeatedly at the
/// first later key whose value lies outside the closed lambda-ball around the
/// current anchor.
struct JumpCover {
  double lambda{0.0};
  std::vector<std::size_t> positions;   // 0-based positions in the sequence
  std::vector<std::int64_t> indices;    // the corresponding keys
  std::size_t count() const { return positions.size(); }
};

JumpCover jump_cover(const VectorSequence& s, double lambda);

/// rho(n, k) for n = -1 .. n_max, where row n is built from the jump cover at
/// scale 2^n lambda0 (rows n >= 0) and rho(-1, k) = k.
struct ParentTable {
  double lambda0{0.0};
  int n_max{0};
  // rows[n + 1][i] is the position rho(n, position i).
  std::vector<std::vector<std::size_t>> rows;
  std::vector<std::int64_t> keys;

  std::size_t parent_position(int n, std::size_t position) const {
    return rows[static_cast<std::size_t>(n + 1)][position];
  }
  std::int64_t parent_key(int n, std::size_t position) const {
    return keys[parent_position(n, position)];
  }
};

/// Requires 0 < lambda0 < s.min_distinct_distance().
ParentTable parent_table(const VectorSequence& s, double lambda0);

/// max over positions and components of
///   |c_k - (c_first + sum_{n=0}^{n_max-1} (c_{rho(n,k)} - c_{rho(n+1,k)}))|.
double telescoping_residual(const VectorSequence& s, const ParentTable& table);

/// Half-open integer range [lo, hi).
struct IndexBlock {
  std::int64_t lo{0};
  std::int64_t hi{0};
  bool empty() const { return hi <= lo; }
  std::int64_t size() const { return empty() ? 0 : hi - lo; }
  bool operator==(const IndexBlock&) const = default;
};

/// Empty if l lies in the left child of the dyadic interval of length
/// 2^{m+1} containing l; otherwise that left child.
IndexBlock rm_block(std::int64_t l, int m);

}  // namespace mfcz
