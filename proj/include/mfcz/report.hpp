#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "mfcz/czdecomp.hpp"
#include "mfcz/experiments.hpp"

namespace mfcz {

using Json = nlohmann::ordered_json;

/// {lambda, N, xi, E_measure, intervals: [{a, b, regularized}], diagnostics}.
Json cz_to_json(const CzOutput& out);
Json diagnostics_to_json(const CzDiagnostics& d);

/// N,trial,seed,S,A,D0,D1,sup_symbol_variation
void write_scan_csv(std::ostream& out, const ScanResult& res);
/// {slope, intercept, exponent_budget, pass, ...}; slope and intercept are
/// null for a single N.
Json scan_fit_json(const ScanResult& res);

/// N,signal,lambda,measure,A,W,Q
void write_weak_scan_csv(std::ostream& out, const WeakScanResult& res);
Json weak_fit_json(const WeakScanResult& res);

/// %.17g
std::string format_double(double v);

}  // namespace mfcz
