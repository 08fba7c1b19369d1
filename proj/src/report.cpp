#include "mfcz/report.hpp"

#include <cstdio>
#include <ostream>

namespace mfcz {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json diagnostics_to_json(const CzDiagnostics& d) {
  Json j;
  j["r_cover"] = d.r_cover;
  j["r_good"] = d.r_good;
  j["r_fI"] = d.r_fI;
  j["r_proj"] = d.r_proj;
  j["r_proj_sharp"] = d.r_proj_sharp;
  j["moment_residual_max"] = d.moment_residual_max;
  j["overlap_max"] = d.overlap_max;
  j["reconstruction_error"] = d.reconstruction_error;
  j["uncovered_measure"] = d.uncovered_measure;
  j["regularized_pieces"] = d.regularized_pieces;
  j["violations"] = d.violations;
  return j;
}

Json cz_to_json(const CzOutput& out) {
  Json j;
  j["lambda"] = out.lambda;
  j["N"] = out.xi.size();
  j["xi"] = std::vector<double>(out.xi.values().begin(), out.xi.values().end());
  j["E_measure"] = out.E.measure();
  Json intervals = Json::array();
  for (const CzPiece& p : out.pieces) {
    intervals.push_back({{"a", p.I.a}, {"b", p.I.b}, {"regularized", p.regularized}});
  }
  j["intervals"] = std::move(intervals);
  j["diagnostics"] = diagnostics_to_json(out.diagnostics);
  return j;
}

void write_scan_csv(std::ostream& out, const ScanResult& res) {
  out << "N,trial,seed,S,A,D0,D1,sup_symbol_variation\n";
  for (const ScanRow& r : res.rows) {
    out << r.N << ',' << r.trial << ',' << r.seed << ',' << format_double(r.S) << ',' << format_double(r.A) << ','
        << format_double(r.D0) << ',' << format_double(r.D1) << ',' << format_double(r.sup_symbol_variation) << '\n';
  }
}

namespace {

void put_fit(Json& j, const std::optional<SlopeFit>& fit) {
  if (fit) {
    j["slope"] = fit->slope;
    j["intercept"] = fit->intercept;
  } else {
    j["slope"] = nullptr;
    j["intercept"] = nullptr;
  }
}

}  // namespace

Json scan_fit_json(const ScanResult& res) {
  Json j;
  put_fit(j, res.fit);
  j["exponent_budget"] = res.exponent_budget;
  j["pass"] = res.pass;
  j["exponent"] = res.exponent;
  j["M"] = res.M;
  j["S_max"] = res.S_max;
  return j;
}

void write_weak_scan_csv(std::ostream& out, const WeakScanResult& res) {
  out << "N,signal,lambda,measure,A,W,Q\n";
  for (const WeakScanRow& r : res.rows) {
    out << r.N << ',' << r.signal << ',' << format_double(r.lambda) << ',' << format_double(r.measure) << ','
        << format_double(r.A) << ',' << format_double(r.W) << ',' << format_double(r.Q) << '\n';
  }
}

Json weak_fit_json(const WeakScanResult& res) {
  Json j;
  put_fit(j, res.fit);
  j["exponent_budget"] = res.exponent_budget;
  j["pass"] = res.pass;
  j["Q_max"] = res.Q_max;
  j["W_max"] = res.W_max;
  return j;
}

}  // namespace mfcz
