#include "mfcz/czdecomp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace mfcz {

SampledSignal pad_signal(const SampledSignal& f, std::size_t factor) {
  const std::size_t pad = factor * f.size();
  std::vector<Complex> out(f.size() + 2 * pad);
  std::copy(f.samples().begin(), f.samples().end(), out.begin() + static_cast<std::ptrdiff_t>(pad));
  return SampledSignal(std::move(out), f.x0() - static_cast<double>(pad) * f.dx(), f.dx());
}

SampledSignal hl_maximal(const SampledSignal& f) {
  const std::size_t n = f.size();
  std::vector<long double> prefix(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + std::abs(f[i]);

  std::vector<double> best(n, 0.0);
  std::vector<double> avg(n);
  std::deque<std::size_t> window;
  for (std::size_t w = 1; w <= n; w *= 2) {
    const std::size_t starts = n - w + 1;
    for (std::size_t s = 0; s < starts; ++s) {
      avg[s] = static_cast<double>((prefix[s + w] - prefix[s]) / static_cast<long double>(w));
    }
    // Sliding maximum of avg[s] over the starts s in [i - w + 1, i] that exist.
    window.clear();
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
      while (next < starts && next <= i) {
        while (!window.empty() && avg[window.back()] <= avg[next]) window.pop_back();
        window.push_back(next++);
      }
      while (!window.empty() && window.front() + w <= i) window.pop_front();
      if (!window.empty()) best[i] = std::max(best[i], avg[window.front()]);
    }
  }
  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = best[i];
  return f.with_samples(std::move(out));
}

CellSet level_set(const SampledSignal& Mf, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("level_set: need threshold > 0");
  CellSet E;
  E.x0 = Mf.x0();
  E.dx = Mf.dx();
  E.cells.assign(Mf.size(), 0);
  for (std::size_t i = 0; i < Mf.size(); ++i) {
    if (Mf[i].real() > threshold) {
      E.cells[i] = 1;
      ++E.count;
    }
  }
  return E;
}

CellRange dilate_cells(const CellInterval& I, double c, std::size_t total) {
  const double w = static_cast<double>(I.cells());
  const double s = static_cast<double>(I.first);
  const double lo = std::floor(s + 0.5 * w * (1.0 - c));
  const double hi = std::ceil(s + 0.5 * w * (1.0 + c));
  CellRange r;
  r.clipped = lo < 0.0 || hi > static_cast<double>(total);
  r.lo = static_cast<std::size_t>(std::max(0.0, lo));
  r.hi = static_cast<std::size_t>(std::min(static_cast<double>(total), hi));
  return r;
}

namespace {

class DyadicSelector {
 public:
  explicit DyadicSelector(const CellSet& E) : E_(E), total_(E.cells.size()), prefix_(total_ + 1, 0) {
    for (std::size_t i = 0; i < total_; ++i) prefix_[i + 1] = prefix_[i] + E.cells[i];
  }

  std::vector<CellInterval> run() {
    std::vector<CellInterval> out;
    if (total_ == 0 || E_.count == 0) return out;
    int top = 0;
    while ((std::size_t{2} << top) <= total_) ++top;
    for (std::size_t s = 0; s < total_; s += std::size_t{1} << top) descend({s, top}, out);
    return out;
  }

 private:
  std::size_t count(std::size_t lo, std::size_t hi) const {
    hi = std::min(hi, total_);
    return lo < hi ? prefix_[hi] - prefix_[lo] : 0;
  }

  bool admissible(const CellInterval& I) const {
    if (I.end() > total_ || count(I.first, I.end()) != I.cells()) return false;
    const CellRange six = dilate_cells(I, 6.0, total_);
    return !six.clipped && count(six.lo, six.hi) == six.hi - six.lo;
  }

  void descend(const CellInterval& I, std::vector<CellInterval>& out) const {
    if (I.first >= total_ || count(I.first, I.end()) == 0) return;
    if (admissible(I)) {
      out.push_back(I);
      return;
    }
    if (I.scale == 0) return;
    const std::size_t half = std::size_t{1} << (I.scale - 1);
    descend({I.first, I.scale - 1}, out);
    descend({I.first + half, I.scale - 1}, out);
  }

  const CellSet& E_;
  std::size_t total_;
  std::vector<std::size_t> prefix_;
};

Interval cell_interval(double x0, double dx, std::size_t lo, std::size_t hi) {
  return {x0 + static_cast<double>(lo) * dx, x0 + static_cast<double>(hi) * dx};
}

}  // namespace

DyadicSelection maximal_dyadic_intervals(const CellSet& E) {
  DyadicSelection sel;
  sel.cells = DyadicSelector(E).run();
  std::vector<std::uint8_t> covered(E.cells.size(), 0);
  for (const CellInterval& I : sel.cells) {
    sel.intervals.push_back(cell_interval(E.x0, E.dx, I.first, I.end()));
    std::fill(covered.begin() + static_cast<std::ptrdiff_t>(I.first),
              covered.begin() + static_cast<std::ptrdiff_t>(I.end()), 1);
  }
  std::size_t uncovered = 0;
  for (std::size_t i = 0; i < E.cells.size(); ++i) uncovered += (E.cells[i] && !covered[i]) ? 1 : 0;
  sel.uncovered_measure = static_cast<double>(uncovered) * E.dx;
  return sel;
}

CzOutput cz_decompose(const SampledSignal& f, const FrequencySet& xi, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("cz_decompose: need lambda > 0");
  const SampledSignal fp = pad_signal(f);
  const double threshold = lambda / std::sqrt(static_cast<double>(xi.size()));

  CzOutput out;
  out.lambda = lambda;
  out.xi = xi;
  out.E = level_set(hl_maximal(fp), threshold);
  out.selection = maximal_dyadic_intervals(out.E);

  std::vector<Complex> g(fp.samples().begin(), fp.samples().end());
  for (const CellInterval& cells : out.selection.cells) {
    const std::size_t w = cells.cells();
    const std::size_t offset = cells.first - w;  // 6I inside the grid, so 3I is too
    std::vector<Complex> window(3 * w);
    std::copy(fp.samples().begin() + static_cast<std::ptrdiff_t>(cells.first),
              fp.samples().begin() + static_cast<std::ptrdiff_t>(cells.end()),
              window.begin() + static_cast<std::ptrdiff_t>(w));

    CzPiece piece{cells,
                  cell_interval(fp.x0(), fp.dx(), cells.first, cells.end()),
                  cell_interval(fp.x0(), fp.dx(), offset, offset + 3 * w),
                  SampledSignal(std::move(window), fp.x(offset), fp.dx()),
                  SampledSignal::zeros(1, 0.0, 1.0),
                  SampledSignal::zeros(1, 0.0, 1.0),
                  offset,
                  1.0,
                  false};
    Projection proj = riesz_project(piece.f_I, piece.I3, xi);
    piece.g_I = std::move(proj.g);
    piece.b_I = piece.f_I - piece.g_I;
    piece.condition = proj.condition;
    piece.regularized = proj.regularized;
    for (std::size_t i = 0; i < 3 * w; ++i) g[offset + i] -= piece.b_I[i];
    out.pieces.push_back(std::move(piece));
  }
  out.g = fp.with_samples(std::move(g));
  out.diagnostics = verify_bounds(out, f);
  return out;
}

CzDiagnostics verify_bounds(const CzOutput& out, const SampledSignal& f) {
  CzDiagnostics d;
  const SampledSignal fp = pad_signal(f);
  if (out.g.size() != fp.size() || out.g.dx() != fp.dx() || out.g.x0() != fp.x0()) {
    d.violations.push_back("grid: g is not on the padded grid of f");
    return d;
  }
  const std::size_t total = fp.size();
  const double sqrt_n = std::sqrt(static_cast<double>(out.xi.size()));
  const double lambda = out.lambda;
  const double f_l1 = norm(f, 1.0);

  auto violate = [&](const std::string& name, const std::string& detail) {
    d.violations.push_back(name + ": " + detail);
  };

  // Reconstruction g + sum b_I = f, sample-wise.
  std::vector<Complex> sum(out.g.samples().begin(), out.g.samples().end());
  std::vector<double> scale(total);
  for (std::size_t i = 0; i < total; ++i) scale[i] = std::abs(fp[i]) + std::abs(out.g[i]);
  std::vector<int> overlap_delta(total + 1, 0);

  double sum_lengths = 0.0;
  std::size_t prev_end = 0;
  for (std::size_t p = 0; p < out.pieces.size(); ++p) {
    const CzPiece& piece = out.pieces[p];
    const CellInterval& I = piece.cells;
    const std::size_t w = I.cells();
    std::ostringstream where;
    where << "piece " << p << " [" << piece.I.a << ", " << piece.I.b << ")";

    if (p > 0 && I.first < prev_end) violate("disjointness", where.str() + " overlaps its predecessor");
    prev_end = std::max(prev_end, I.end());

    const CellRange three = dilate_cells(I, 3.0, total);
    const bool shaped = !three.clipped && piece.offset == three.lo && piece.b_I.size() == 3 * w &&
                        piece.f_I.size() == 3 * w && piece.g_I.size() == 3 * w &&
                        piece.b_I.x0() == fp.x(piece.offset) && piece.b_I.dx() == fp.dx();
    if (!shaped) {
      violate("support-in-3I", where.str() + " b_I is not carried by the grid points of 3I");
      continue;
    }

    const CellRange six = dilate_cells(I, 6.0, total);
    bool six_in_e = !six.clipped;
    for (std::size_t i = six.lo; six_in_e && i < six.hi; ++i) six_in_e = out.E.contains(i);
    if (!six_in_e) violate("6I-in-E", where.str());

    double restriction_err = 0.0;
    double identity_err = 0.0;
    double piece_scale = 0.0;
    for (std::size_t i = 0; i < 3 * w; ++i) {
      const std::size_t gi = piece.offset + i;
      const bool inside = gi >= I.first && gi < I.end();
      restriction_err = std::max(restriction_err, std::abs(piece.f_I[i] - (inside ? fp[gi] : Complex{})));
      identity_err = std::max(identity_err, std::abs(piece.b_I[i] - (piece.f_I[i] - piece.g_I[i])));
      piece_scale = std::max(piece_scale, std::abs(piece.f_I[i]) + std::abs(piece.g_I[i]));
      sum[gi] += piece.b_I[i];
      scale[gi] += std::abs(piece.b_I[i]);
    }
    if (restriction_err != 0.0) violate("f_I-restriction", where.str());
    if (identity_err > kReconstructionTolerance * piece_scale) violate("b_I-identity", where.str());

    const double fI_l1 = norm(piece.f_I, 1.0);
    const CVector m = moments(piece.b_I, piece.I3, out.xi);
    const double residual = m.cwiseAbs().maxCoeff() / (1.0 + fI_l1);
    d.moment_residual_max = std::max(d.moment_residual_max, residual);
    if (residual > kMomentTolerance) {
      std::ostringstream msg;
      msg << where.str() << " residual " << residual;
      violate("moment-residual", msg.str());
    }

    const double len = piece.I.length();
    const double g_l2 = norm(piece.g_I, 2.0);
    sum_lengths += len;
    d.r_fI = std::max(d.r_fI, fI_l1 / (len * lambda));
    d.r_proj = std::max(d.r_proj, g_l2 / (std::sqrt(len) * lambda * sqrt_n));
    d.r_proj_sharp = std::max(d.r_proj_sharp, g_l2 / (std::sqrt(len) * lambda));
    d.regularized_pieces += piece.regularized ? 1 : 0;
    overlap_delta[three.lo] += 1;
    overlap_delta[three.hi] -= 1;
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double err = std::abs(sum[i] - fp[i]);
    if (err > kReconstructionTolerance * scale[i]) worst = std::max(worst, err / scale[i]);
    else if (scale[i] > 0.0) worst = std::max(worst, err / scale[i]);
  }
  d.reconstruction_error = worst;
  if (worst > kReconstructionTolerance) {
    std::ostringstream msg;
    msg << "relative error " << worst;
    violate("reconstruction", msg.str());
  }

  int running = 0;
  for (std::size_t i = 0; i < total; ++i) {
    running += overlap_delta[i];
    d.overlap_max = std::max(d.overlap_max, static_cast<std::size_t>(running));
  }

  d.uncovered_measure = out.selection.uncovered_measure;
  if (f_l1 > 0.0) {
    d.r_cover = sum_lengths * lambda / (sqrt_n * f_l1);
    const double g_l2 = norm(out.g, 2.0);
    d.r_good = g_l2 * g_l2 / (f_l1 * sqrt_n * lambda);
  }
  return d;
}

}  // namespace mfcz
