#include "mfcz/expspan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mfcz {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

void require_resolvable(const Interval& J, const FrequencySet& xi) {
  if (xi.min_gap() * J.length() < 1e-9) {
    std::ostringstream msg;
    msg << "frequencies closer than 1e-9/|J| (gap " << xi.min_gap() << ", |J| = " << J.length()
        << ") are not resolvable on J";
    throw std::invalid_argument(msg.str());
  }
}

// sin(x)/x with the removable singularity filled in.
double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// Calls visit(i, exp(2 pi i xi y_i)) for y_i = y0 + i dx, i < n, by repeated
// rotation, re-anchored every 64 steps.
template <typename Visit>
void exp_sweep(double xi, double y0, double dx, std::size_t n, Visit&& visit) {
  const Complex step = std::polar(1.0, kTwoPi * xi * dx);
  Complex e;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) {
      e = std::polar(1.0, kTwoPi * xi * (y0 + static_cast<double>(i) * dx));
    } else {
      e *= step;
    }
    visit(i, e);
  }
}

}  // namespace

CMatrix gram(const Interval& J, const FrequencySet& xi) {
  require_resolvable(J, xi);
  const std::size_t n = xi.size();
  const double len = J.length();
  const double c = J.center();
  CMatrix B(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = len;
    for (std::size_t l = j + 1; l < n; ++l) {
      const double delta = xi[j] - xi[l];
      const Complex v = std::polar(len * sinc(kPi * delta * len), kTwoPi * delta * c);
      B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = v;
      B(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = std::conj(v);
    }
  }
  return B;
}

CMatrix gram_on_grid(const Interval& J, const FrequencySet& xi, double x0, double dx) {
  require_resolvable(J, xi);
  if (!(dx > 0.0)) throw std::invalid_argument("gram_on_grid: need dx > 0");
  const double lo = std::ceil((J.a - x0) / dx - 1e-9);
  const double hi = std::ceil((J.b - x0) / dx - 1e-9);
  const double count = std::max(0.0, hi - lo);
  const double y0 = x0 + lo * dx;
  const std::size_t n = xi.size();
  CMatrix B(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = count * dx;
    for (std::size_t l = j + 1; l < n; ++l) {
      const double delta = xi[j] - xi[l];
      const double theta = kPi * delta * dx;
      const double s = std::sin(theta);
      Complex v;
      if (std::abs(s) < 1e-6 && std::abs(theta) > 1.0) {
        // delta is (nearly) aliased onto a multiple of 1/dx: sum directly.
        const auto terms = static_cast<std::size_t>(count);
        exp_sweep(delta, y0, dx, terms, [&](std::size_t, Complex e) { v += e; });
        v *= dx;
      } else {
        const double amplitude = std::abs(theta) < 1e-300 ? count : std::sin(count * theta) / s;
        v = std::polar(dx * amplitude, kTwoPi * delta * (y0 + 0.5 * (count - 1.0) * dx));
      }
      B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = v;
      B(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = std::conj(v);
    }
  }
  return B;
}

CVector moments(const SampledSignal& f, const Interval& J, const FrequencySet& xi) {
  const auto [lo, hi] = f.index_range(J);
  CVector m = CVector::Zero(static_cast<Eigen::Index>(xi.size()));
  const auto samples = f.samples();
  for (std::size_t j = 0; j < xi.size(); ++j) {
    Complex acc;
    exp_sweep(xi[j], f.x(lo), f.dx(), hi - lo,
              [&](std::size_t i, Complex e) { acc += samples[lo + i] * e; });
    m(static_cast<Eigen::Index>(j)) = acc * f.dx();
  }
  return m;
}

HermitianSolve solve_hermitian(const CMatrix& B, const CVector& rhs) {
  HermitianSolve out;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(B);
  if (eig.info() != Eigen::Success) throw std::runtime_error("solve_hermitian: eigensolver failed");
  const auto& mu = eig.eigenvalues();
  const double mu_max = mu.maxCoeff();
  const double mu_min = mu.minCoeff();
  out.condition = (mu_min > 0.0) ? mu_max / mu_min : std::numeric_limits<double>::infinity();
  if (out.condition <= kMaxGramCondition) {
    Eigen::LLT<CMatrix> llt(B);
    if (llt.info() == Eigen::Success) {
      out.x = llt.solve(rhs);
      return out;
    }
  }
  out.regularized = true;
  const CMatrix& U = eig.eigenvectors();
  CVector proj = U.adjoint() * rhs;
  for (Eigen::Index k = 0; k < proj.size(); ++k) {
    proj(k) = (mu(k) > kEigenCutoff * mu_max) ? proj(k) / mu(k) : Complex{};
  }
  out.x = U * proj;
  return out;
}

Projection riesz_project(const SampledSignal& f_I, const Interval& J, const FrequencySet& xi) {
  const auto [lo, hi] = f_I.index_range(J);
  const CVector m = moments(f_I, J, xi);
  const CMatrix B = gram_on_grid(J, xi, f_I.x0(), f_I.dx());
  std::vector<Complex> g(f_I.size());
  CVector c = CVector::Zero(static_cast<Eigen::Index>(xi.size()));
  double condition = 1.0;
  bool regularized = false;
  if (hi > lo && m.cwiseAbs().maxCoeff() > 0.0) {
    const HermitianSolve sol = solve_hermitian(B, m);
    c = sol.x;
    condition = sol.condition;
    regularized = sol.regularized;
    if (!regularized) {
      for (std::size_t l = 0; l < xi.size(); ++l) {
        const Complex cl = c(static_cast<Eigen::Index>(l));
        exp_sweep(-xi[l], f_I.x(lo), f_I.dx(), hi - lo, [&](std::size_t i, Complex e) { g[lo + i] += cl * e; });
      }
    } else {
      // Work with the sampled exponentials themselves, whose condition is
      // the square root of the Gram's: g is the minimal-norm solution of
      // dx E g = m, and c the least-squares coefficients of g.
      const auto rows = static_cast<Eigen::Index>(xi.size());
      const auto cols = static_cast<Eigen::Index>(hi - lo);
      CMatrix E(rows, cols);
      for (Eigen::Index j = 0; j < rows; ++j) {
        exp_sweep(xi[static_cast<std::size_t>(j)], f_I.x(lo), f_I.dx(), hi - lo,
                  [&](std::size_t i, Complex e) { E(j, static_cast<Eigen::Index>(i)) = e; });
      }
      const CVector gv = E.completeOrthogonalDecomposition().solve(m / f_I.dx());
      for (Eigen::Index i = 0; i < cols; ++i) g[lo + static_cast<std::size_t>(i)] = gv(i);
      c = E.adjoint().completeOrthogonalDecomposition().solve(gv);
    }
  }
  Projection out{f_I.with_samples(std::move(g)), c, condition, regularized, 0.0};
  const CVector mg = moments(out.g, J, xi);
  const double scale = norm(f_I, J, 1.0);
  const double diff = (mg - m).cwiseAbs().maxCoeff();
  out.moment_residual = scale > 0.0 ? diff / scale : diff;
  return out;
}

BeResult be_ratio(const Interval& I, const FrequencySet& xi, int eval_points) {
  if (eval_points < 64) throw std::invalid_argument("be_ratio: need eval_points >= 64");
  const Interval J = I.dilate(3.0);
  const CMatrix B = gram(J, xi);
  const auto n = static_cast<Eigen::Index>(xi.size());

  BeResult out;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(B);
  const auto& mu = eig.eigenvalues();
  const double mu_max = mu.maxCoeff();
  out.condition = mu.minCoeff() > 0.0 ? mu_max / mu.minCoeff() : std::numeric_limits<double>::infinity();
  Eigen::LLT<CMatrix> llt;
  if (out.condition <= kMaxGramCondition) {
    llt.compute(B);
    out.regularized = llt.info() != Eigen::Success;
  } else {
    out.regularized = true;
  }

  // For v = sum c_l exp(-2 pi i xi_l y): |v(x)|^2 <= K(x) ||v||^2 with
  // K(x) = e^T B^{-1} conj(e), e_l = exp(-2 pi i xi_l x).
  CVector ebar(n);
  const double scale = I.length() / static_cast<double>(xi.size());
  for (int i = 0; i < eval_points; ++i) {
    const double x = I.a + I.length() * static_cast<double>(i) / static_cast<double>(eval_points);
    for (Eigen::Index l = 0; l < n; ++l) ebar(l) = std::polar(1.0, kTwoPi * xi[static_cast<std::size_t>(l)] * x);
    double kernel = 0.0;
    if (!out.regularized) {
      kernel = llt.matrixL().solve(ebar).squaredNorm();
    } else {
      const CVector proj = eig.eigenvectors().adjoint() * ebar;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (mu(k) > kEigenCutoff * mu_max) kernel += std::norm(proj(k)) / mu(k);
      }
    }
    const double ratio = std::sqrt(kernel * scale);
    if (ratio > out.ratio) {
      out.ratio = ratio;
      out.argmax = x;
    }
  }
  return out;
}

}  // namespace mfcz
