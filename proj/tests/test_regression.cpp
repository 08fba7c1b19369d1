#include <fstream>
#include <string>

#include "doctest.h"
#include "mfcz/check.hpp"
#include "mfcz/experiments.hpp"
#include "mfcz/report.hpp"

using namespace mfcz;

namespace {

const Json& calibration() {
  static const Json j = [] {
    std::ifstream in(std::string(MFCZ_FIXTURE_DIR) + "/calibration.json");
    REQUIRE(in.good());
    return Json::parse(in);
  }();
  return j;
}

}  // namespace

TEST_CASE("fixture decomposition matches the frozen calibration") {
  const Json& cal = calibration();
  const std::vector<CorpusEntry> corpus = cz_corpus(cal["seed"].get<std::uint64_t>(), kFixtureSignal + 1);
  const CorpusEntry& e = corpus[kFixtureSignal];
  const CzOutput out = cz_decompose(e.f, e.frequencies(kFixtureN), e.lambda);
  const Json now = cz_to_json(out);
  const Json& frozen = cal["fixture"]["output"];

  CHECK(now["N"] == frozen["N"]);
  CHECK(now["lambda"].get<double>() == doctest::Approx(frozen["lambda"].get<double>()).epsilon(1e-9));
  CHECK(now["intervals"].size() == frozen["intervals"].size());
  for (const auto& [key, value] : frozen["diagnostics"].items()) {
    CAPTURE(key);
    if (value.is_number_float()) {
      const double want = value.get<double>();
      const double got = now["diagnostics"][key].get<double>();
      if (key == "reconstruction_error" || key == "moment_residual_max") {
        CHECK(got <= std::max(1e-12, 10.0 * want));
      } else {
        CHECK(got == doctest::Approx(want).epsilon(1e-9).scale(1e-12));
      }
    } else {
      CHECK(now["diagnostics"][key] == value);
    }
  }
}

TEST_CASE("harness maxima on a fresh seed stay under the frozen constants") {
  const Json& c = calibration()["constants"];
  const HarnessMaxima h = run_harnesses(987654321);
  CHECK(h.orthsums <= c["orthsums"].get<double>());
  CHECK(h.vets <= c["vets"].get<double>());
  CHECK(h.mets <= c["mets"].get<double>());
  CHECK(h.lepingle <= c["lepingle"].get<double>());
  CHECK(h.mets_above_vets == 0);
}

TEST_CASE("decomposition ratios on a fresh corpus stay under the frozen constants") {
  const Json& c = calibration()["constants"];
  const CzCorpusResult res = run_cz_corpus(cz_corpus(424242, 12), kCorpusNs);
  CHECK(res.violations == 0);
  CHECK(res.max_r_cover <= c["r_cover"].get<double>());
  CHECK(res.max_r_good <= c["r_good"].get<double>());
  CHECK(res.max_r_fI <= c["r_fI"].get<double>());
  CHECK(res.max_r_proj <= c["r_proj"].get<double>());
  CHECK(res.max_overlap <= c["overlap"].get<std::size_t>());
}

TEST_CASE("decomposition json layout") {
  Rng rng(71);
  const SampledSignal f = random_bump_mixture(rng, 10, 2, 10.0);
  const CzOutput out = cz_decompose(f, FrequencySet({0.0, 2.0}), norm(f, 1.0));
  const Json j = cz_to_json(out);
  for (const char* key : {"lambda", "N", "xi", "E_measure", "intervals", "diagnostics"}) CHECK(j.contains(key));
  CHECK(j["intervals"].size() == out.pieces.size());
  for (const Json& iv : j["intervals"]) {
    CHECK(iv["a"].get<double>() < iv["b"].get<double>());
    CHECK(iv["regularized"].is_boolean());
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
}
