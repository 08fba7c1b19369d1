// mfcz: command line front end.
//
// Exit codes: 0 success, 1 usage or malformed input, 2 invariant violation
// (or a scan whose fitted slope exceeds its budget).

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfcz/check.hpp"
#include "mfcz/czdecomp.hpp"
#include "mfcz/expspan.hpp"
#include "mfcz/experiments.hpp"
#include "mfcz/report.hpp"
#include "mfcz/signal_io.hpp"
#include "mfcz/variation.hpp"

namespace {

using namespace mfcz;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string signal;
  std::string sequence;
  std::string xi;
  std::string Ns;
  std::string krange;
  std::string out;
  std::string fit_out;
  std::string format = "json";
  std::string mode = "vmt";
  double lambda = 0.0;
  double q = 4.0;
  double r = 2.5;
  double a = 0.0;
  double b = 1.0;
  std::size_t trials = 20;
  std::size_t signals = kCorpusSize;
  std::uint64_t seed = 1;
  std::size_t grid = std::size_t{1} << 14;
  int M = 1;
  int eval_points = 4096;
  bool inject_fault = false;
  bool lambda_given = false;
};

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError(what + ": not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw UsageError(what + ": not a finite number: '" + s + "'");
  return v;
}

std::vector<double> parse_xi(const std::string& s) {
  if (s.empty()) throw UsageError("--xi: need a comma separated list of frequencies");
  std::vector<double> xi;
  for (const std::string& item : split_list(s, ',')) xi.push_back(to_double(item, "--xi"));
  for (std::size_t i = 1; i < xi.size(); ++i) {
    if (!(xi[i] > xi[i - 1])) throw UsageError("--xi: frequencies must be strictly increasing");
  }
  return xi;
}

std::vector<std::size_t> parse_Ns(const std::string& s) {
  std::vector<std::size_t> Ns;
  for (const std::string& item : split_list(s, ',')) {
    const double v = to_double(item, "--N");
    if (v < 1 || v != std::floor(v)) throw UsageError("--N: entries must be positive integers");
    Ns.push_back(static_cast<std::size_t>(v));
  }
  if (Ns.empty()) throw UsageError("--N: empty list");
  return Ns;
}

std::optional<KRange> parse_krange(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto parts = split_list(s, ':');
  if (parts.size() != 2) throw UsageError("--krange: expected lo:hi");
  const double lo = to_double(parts[0], "--krange");
  const double hi = to_double(parts[1], "--krange");
  if (lo != std::floor(lo) || hi != std::floor(hi) || lo > hi) throw UsageError("--krange: need integers lo <= hi");
  return KRange{static_cast<int>(lo), static_cast<int>(hi)};
}

int grid_log2(std::size_t grid) {
  if (grid < 64 || (grid & (grid - 1)) != 0) throw UsageError("--grid: must be a power of two >= 64");
  int g = 0;
  while ((std::size_t{1} << g) < grid) ++g;
  return g;
}

// Runs fn with the requested output stream: the file at `path`, or stdout.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  fn(out);
}

// The fit summary goes to --fit, else to stdout unless the table is there.
void write_fit(const RunConfig& cfg, const Json& fit) {
  if (!cfg.fit_out.empty() || !cfg.out.empty()) {
    with_output(cfg.fit_out, [&](std::ostream& os) { os << fit.dump(2) << '\n'; });
  } else {
    std::cerr << fit.dump(2) << '\n';
  }
}

int cmd_cz(const RunConfig& cfg) {
  if (cfg.signal.empty()) throw UsageError("cz: --signal is required");
  if (!cfg.lambda_given || !(cfg.lambda > 0.0)) throw UsageError("cz: --lambda must be given and positive");
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format: json or csv");
  const FrequencySet xi(parse_xi(cfg.xi));
  const SampledSignal f = read_signal_csv(cfg.signal);
  const CzOutput out = cz_decompose(f, xi, cfg.lambda);
  with_output(cfg.out, [&](std::ostream& os) {
    if (cfg.format == "csv") {
      write_signal_csv(os, out.g);
    } else {
      os << cz_to_json(out).dump(2) << '\n';
    }
  });
  if (!out.diagnostics.exact_ok()) {
    for (const std::string& v : out.diagnostics.violations) std::cerr << "invariant violated: " << v << '\n';
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format: json or csv");
  const int g = grid_log2(cfg.grid);
  if (cfg.mode == "vmt") {
    ScanOptions opts;
    if (!cfg.Ns.empty()) opts.Ns = parse_Ns(cfg.Ns);
    opts.trials = cfg.trials;
    opts.q = cfg.q;
    opts.r = cfg.r;
    opts.seed = cfg.seed;
    opts.grid_log2 = g;
    opts.ks = parse_krange(cfg.krange);
    opts.M = cfg.M;
    try {
      validate_scan_options(opts);
      if (opts.ks) opts.ks->validate(SampledSignal::zeros(cfg.grid, 0.0, 1.0 / static_cast<double>(cfg.grid)));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const ScanResult res = scaling_scan(opts);
    const Json fit = scan_fit_json(res);
    if (cfg.format == "csv") {
      with_output(cfg.out, [&](std::ostream& os) { write_scan_csv(os, res); });
      write_fit(cfg, fit);
    } else {
      with_output(cfg.out, [&](std::ostream& os) { os << fit.dump(2) << '\n'; });
    }
    std::cerr << "exponent budget " << res.exponent_budget << ", slope "
              << (res.fit ? format_double(res.fit->slope) : std::string("undefined")) << '\n';
    return res.pass ? kExitOk : kExitViolation;
  }
  if (cfg.mode == "weak") {
    WeakScanOptions opts;
    if (!cfg.Ns.empty()) opts.Ns = parse_Ns(cfg.Ns);
    opts.signals = cfg.signals;
    opts.q = cfg.q;
    opts.r = cfg.r;
    opts.seed = cfg.seed;
    opts.grid_log2 = g;
    opts.M = cfg.M;
    if (!(2.0 < opts.r && opts.r < opts.q)) throw UsageError("need 2 < r < q");
    for (std::size_t N : opts.Ns) {
      if (N > kCorpusMaxN) throw UsageError("--N: weak scan supports N <= 16");
    }
    if (opts.signals == 0) throw UsageError("--signals: need at least one signal");
    const WeakScanResult res = weak_scan(opts);
    const Json fit = weak_fit_json(res);
    if (cfg.format == "csv") {
      with_output(cfg.out, [&](std::ostream& os) { write_weak_scan_csv(os, res); });
      write_fit(cfg, fit);
    } else {
      with_output(cfg.out, [&](std::ostream& os) { os << fit.dump(2) << '\n'; });
    }
    std::cerr << "exponent budget " << res.exponent_budget << ", slope "
              << (res.fit ? format_double(res.fit->slope) : std::string("undefined")) << '\n';
    return res.pass ? kExitOk : kExitViolation;
  }
  throw UsageError("--mode: vmt or weak");
}

int cmd_check(const RunConfig& cfg) {
  CheckOptions opts;
  opts.inject_fault = cfg.inject_fault;
  opts.grid_log2 = grid_log2(cfg.grid);
  if (opts.grid_log2 > 16) throw UsageError("check: --grid at most 65536");
  const std::vector<PropertyResult> results = run_property_suite(cfg.seed, opts);
  bool ok = true;
  for (const PropertyResult& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (seed " << r.seed << "): " << r.detail << '\n';
    ok = ok && r.pass;
  }
  return ok ? kExitOk : kExitViolation;
}

int cmd_variation(const RunConfig& cfg) {
  if (cfg.sequence.empty()) throw UsageError("variation: --sequence is required");
  if (!(cfg.r > 0.0)) throw UsageError("--r must be positive");
  const VectorSequence s = read_sequence_csv(cfg.sequence);
  Json j;
  j["r"] = cfg.r;
  j["tilde_variation"] = tilde_variation(s, cfg.r);
  j["variation"] = variation(s, cfg.r);
  if (cfg.lambda_given) {
    if (!(cfg.lambda > 0.0)) throw UsageError("--lambda must be positive");
    const JumpCover cover = jump_cover(s, cfg.lambda);
    j["jump_cover"] = {{"lambda", cfg.lambda}, {"indices", cover.indices}, {"count", cover.count()}};
  }
  with_output(cfg.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kExitOk;
}

int cmd_be(const RunConfig& cfg) {
  if (!(cfg.b > cfg.a)) throw UsageError("be: need a < b");
  if (cfg.eval_points < 64) throw UsageError("--eval-points: at least 64");
  const BeResult be = be_ratio(Interval(cfg.a, cfg.b), FrequencySet(parse_xi(cfg.xi)), cfg.eval_points);
  Json j;
  j["ratio"] = be.ratio;
  j["argmax"] = be.argmax;
  j["condition"] = be.condition;
  j["regularized"] = be.regularized;
  with_output(cfg.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return be.ratio <= 1.0 + 1e-6 ? kExitOk : kExitViolation;
}

int cmd_calibrate(const RunConfig& cfg) {
  const Json j = calibrate(cfg.seed);
  with_output(cfg.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-frequency Calderon-Zygmund decomposition and variational operator toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "Output path (default stdout)"); };

  CLI::App* cz = app.add_subcommand("cz", "Decompose a signal at height lambda");
  cz->add_option("--signal", cfg.signal, "Signal CSV (x,re,im)")->required();
  cz->add_option("--xi", cfg.xi, "Comma separated frequencies")->required();
  cz->add_option("--lambda", cfg.lambda, "Height lambda > 0")->required();
  cz->add_option("--format", cfg.format, "json (decomposition) or csv (good part g)");
  add_out(cz);

  CLI::App* scan = app.add_subcommand("scan", "Operator scaling or weak-type scan");
  scan->add_option("--mode", cfg.mode, "vmt or weak");
  scan->add_option("--N", cfg.Ns, "Comma separated N values");
  scan->add_option("--trials", cfg.trials, "Trials per N (vmt)");
  scan->add_option("--signals", cfg.signals, "Corpus signals (weak)");
  scan->add_option("--q", cfg.q, "Variation exponent q");
  scan->add_option("--r", cfg.r, "Symbol variation exponent r, 2 < r < q");
  scan->add_option("--seed", cfg.seed, "Base seed");
  scan->add_option("--grid", cfg.grid, "Grid points on [0,1), a power of two");
  scan->add_option("--krange", cfg.krange, "Scales lo:hi (default: widest valid)");
  scan->add_option("--M", cfg.M, "Derivative order in the scale factor");
  scan->add_option("--format", cfg.format, "csv (table, fit on stdout) or json (fit only)")->default_str("csv");
  scan->add_option("--fit", cfg.fit_out, "Fit JSON path when --out holds the table");
  add_out(scan);

  CLI::App* check = app.add_subcommand("check", "Run the invariant suite");
  check->add_option("--seed", cfg.seed, "Base seed");
  check->add_option("--grid", cfg.grid, "Grid for the decomposition properties");
  check->add_flag("--inject-fault", cfg.inject_fault, "Perturb one b_I sample before verification");

  CLI::App* var = app.add_subcommand("variation", "Variation norms of a sequence");
  var->add_option("--sequence", cfg.sequence, "Sequence CSV")->required();
  var->add_option("--r", cfg.r, "Exponent r > 0");
  var->add_option("--lambda", cfg.lambda, "Also report the lambda-jump cover");
  add_out(var);

  CLI::App* be = app.add_subcommand("be", "Reproducing-kernel ratio on an interval");
  be->add_option("--xi", cfg.xi, "Comma separated frequencies")->required();
  be->add_option("--a", cfg.a, "Left end of I");
  be->add_option("--b", cfg.b, "Right end of I");
  be->add_option("--eval-points", cfg.eval_points, "Evaluation points");
  add_out(be);

  CLI::App* cal = app.add_subcommand("calibrate", "Measure the harness constants");
  cal->add_option("--seed", cfg.seed, "Seed")->default_val(kCorpusSeed);
  add_out(cal);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  cfg.lambda_given = (cz->parsed() && cz->count("--lambda") > 0) || (var->parsed() && var->count("--lambda") > 0);
  if (scan->parsed() && scan->count("--format") == 0) cfg.format = "csv";

  try {
    if (cz->parsed()) return cmd_cz(cfg);
    if (scan->parsed()) return cmd_scan(cfg);
    if (check->parsed()) return cmd_check(cfg);
    if (var->parsed()) return cmd_variation(cfg);
    if (be->parsed()) return cmd_be(cfg);
    if (cal->parsed()) return cmd_calibrate(cfg);
  } catch (const mfcz::ParseError& e) {
    std::cerr << "malformed input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
