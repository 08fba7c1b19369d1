#pragma once

#include <Eigen/Dense>

#include "mfcz/grid_signal.hpp"

namespace mfcz {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Condition number above which Hermitian solves fall back to a truncated
/// eigendecomposition, and the relative eigenvalue cutoff used there.
inline constexpr double kMaxGramCondition = 1e12;
inline constexpr double kEigenCutoff = 1e-12;

/// B_{jl} = int_J exp(2 pi i (xi_j - xi_l) y) dy, in closed form.
CMatrix gram(const Interval& J, const FrequencySet& xi);

/// The same inner products under the left-endpoint rule on the grid points
/// of (x0, dx) lying in J, summed in closed form (Dirichlet kernel). This is
/// the Gram matrix that makes rectangle-rule moments match exactly.
CMatrix gram_on_grid(const Interval& J, const FrequencySet& xi, double x0, double dx);

/// m_j = int_J f(y) exp(2 pi i xi_j y) dy by the rectangle rule.
CVector moments(const SampledSignal& f, const Interval& J, const FrequencySet& xi);

/// Solution of a Hermitian positive semidefinite system B c = m.
struct HermitianSolve {
  CVector x;
  double condition{1.0};
  bool regularized{false};
};

/// Cholesky when cond(B) <= kMaxGramCondition, otherwise the pseudo-inverse
/// with eigenvalues below kEigenCutoff * max eigenvalue discarded.
HermitianSolve solve_hermitian(const CMatrix& B, const CVector& rhs);

struct Projection {
  SampledSignal g;             // on the grid of the input, zero outside J
  CVector coefficients;        // g(y) = sum_l c_l exp(-2 pi i xi_l y) on J
  double condition{1.0};
  bool regularized{false};
  double moment_residual{0.0}; // max_j |m_j(g) - m_j(f)| / ||f_I||_{L^1(J)}
};

/// Minimal-norm element of span{exp(-2 pi i xi_l y)} on J whose moments
/// against every exp(2 pi i xi_j y) over J match those of f_I. When the grid
/// Gram is too ill-conditioned for Cholesky, g is taken as the minimal-norm
/// solution of the sampled moment equations (complete orthogonal
/// decomposition) and the result is flagged regularized.
Projection riesz_project(const SampledSignal& f_I, const Interval& J, const FrequencySet& xi);

struct BeResult {
  double ratio{0.0};
  double argmax{0.0};
  double condition{1.0};
  bool regularized{false};
};

/// max over eval_points equispaced x in I of the reproducing-kernel bound
/// sup_v |v(x)| / ||v||_{L^2(3I)} over the span, times sqrt(|I| / N).
BeResult be_ratio(const Interval& I, const FrequencySet& xi, int eval_points);

}  // namespace mfcz
