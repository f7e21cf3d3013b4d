#include <catch2/catch_amalgamated.hpp>

#include "snw/json_io.hpp"

using namespace snw;

namespace {

WitnessCandidate wtilde_candidate(int d, int k) {
  WitnessCandidate cand;
  cand.d = d;
  cand.k_target = k;
  cand.op = build_Wtilde(d);
  cand.mask = linear_mask(d);
  cand.threshold_C = -ck_threshold(d, k);
  return cand;
}

}  // namespace

TEST_CASE("witness JSON round trip is exact") {
  for (int d : {3, 4, 7}) {
    const WitnessCandidate cand = wtilde_candidate(d, 2);
    const nlohmann::json j = witness_to_json(cand);
    const WitnessCandidate back = witness_from_json(j);

    REQUIRE(back.d == cand.d);
    REQUIRE(back.k_target == cand.k_target);
    REQUIRE(back.threshold_C == cand.threshold_C);
    REQUIRE(back.mask.indices() == cand.mask.indices());
    ComplexMatrix diff = back.op.mat();
    diff -= cand.op.mat();
    REQUIRE(diff.max_abs() <= 1e-15);

    // Serialize -> parse text -> load: still exact.
    const WitnessCandidate back2 = witness_from_json(nlohmann::json::parse(j.dump()));
    ComplexMatrix diff2 = back2.op.mat();
    diff2 -= cand.op.mat();
    REQUIRE(diff2.max_abs() <= 1e-15);
  }
}

TEST_CASE("rational coefficients carry exact fractions") {
  const nlohmann::json j = witness_to_json(wtilde_candidate(4, 1));
  bool found_minus_half = false, found_half = false;
  for (const auto& e : j.at("coefficients")) {
    if (!e.contains("re_num")) continue;
    REQUIRE(e.at("re_den").get<int>() == 4);
    const long long num = e.at("re_num").get<long long>();
    if (e.at("i") == 0 && e.at("j") == 0 && e.at("k") == 1 && e.at("l") == 1) {
      REQUIRE(num == -2);  // -2/d
      found_minus_half = true;
    }
    if (e.at("i") == 0 && e.at("j") == 0 && e.at("k") == 0 && e.at("l") == 0) {
      REQUIRE(num == 2);  // 1 - 2/d = 2/4
      found_half = true;
    }
  }
  REQUIRE(found_minus_half);
  REQUIRE(found_half);
}

TEST_CASE("certificate JSON round trip") {
  CertificateReport rep;
  rep.d = 4;
  rep.k = 3;
  rep.proven_bound = -0.8660254;
  rep.conjectured_bound = -0.8660251;
  rep.method = CertifyMethod::symmetric_closed_form;
  rep.status = CertifyStatus::proved;
  rep.gap = rep.conjectured_bound - rep.proven_bound;

  const CertificateReport back = certificate_from_json(certificate_to_json(rep));
  REQUIRE(back.d == rep.d);
  REQUIRE(back.k == rep.k);
  REQUIRE(back.proven_bound == rep.proven_bound);
  REQUIRE(back.conjectured_bound == rep.conjectured_bound);
  REQUIRE(back.method == rep.method);
  REQUIRE(back.status == rep.status);
  REQUIRE(back.gap == rep.gap);

  // Witness files embed the certificate.
  const nlohmann::json j = witness_to_json(wtilde_candidate(4, 3), &rep);
  REQUIRE(j.contains("certificate"));
  REQUIRE(j["certificate"]["status"] == "proved");
}

TEST_CASE("malformed witness files are rejected") {
  const nlohmann::json good = witness_to_json(wtilde_candidate(3, 1));

  nlohmann::json bad_index = good;
  bad_index["coefficients"][0]["i"] = 7;
  REQUIRE_THROWS(witness_from_json(bad_index));

  // Dropping one off-diagonal entry breaks both Hermiticity and closure.
  nlohmann::json bad_closure = good;
  auto& arr = bad_closure["coefficients"];
  for (size_t idx = 0; idx < arr.size(); ++idx) {
    const auto& e = arr[idx];
    if (e["i"] == 0 && e["j"] == 0 && e["k"] == 1 && e["l"] == 1) {
      arr.erase(idx);
      break;
    }
  }
  REQUIRE_THROWS(witness_from_json(bad_closure));

  nlohmann::json missing = good;
  missing.erase("d");
  REQUIRE_THROWS(witness_from_json(missing));

  nlohmann::json dup = good;
  dup["coefficients"].push_back(dup["coefficients"][0]);
  REQUIRE_THROWS(witness_from_json(dup));
}

TEST_CASE("forge trace serialization shape") {
  ForgeTrace trace;
  trace.records.push_back({-1.0, 1.0, 0.0, 2, "feasible", 0.1, -0.4});
  trace.records.push_back({-1.0, 0.0, -0.5, 3, "infeasible", -0.05,
                           std::numeric_limits<double>::quiet_NaN()});
  const nlohmann::json j = forge_trace_to_json(trace);
  REQUIRE(j.at("iterations").size() == 2);
  REQUIRE(j["iterations"][0]["seesaw_value"].get<double>() == -0.4);
  REQUIRE(j["iterations"][1]["seesaw_value"].is_null());
}
