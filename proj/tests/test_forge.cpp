#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "snw/forge.hpp"

using namespace snw;

namespace {

ForgeOptions base_options(int d, int k) {
  ForgeOptions o;
  o.d = d;
  o.k = k;
  o.target = phi_plus(d);
  o.mask = linear_mask(d);
  o.seesaw.restarts = 25;
  o.seesaw.seed = 17;
  return o;
}

void check_candidate(const ForgeResult& res, int d) {
  // Pinned target value, unit spectral ball, support inside the mask.
  REQUIRE(expectation(res.candidate.op, phi_plus(d)) == Catch::Approx(-1.0).margin(1e-7));
  REQUIRE(res.candidate.op.min_eigenvalue() >= -1.0 - 1e-7);
  REQUIRE(res.candidate.op.max_eigenvalue() <= 1.0 + 1e-7);
  for (int r = 0; r < d * d; ++r)
    for (int c = 0; c < d * d; ++c) {
      if (std::abs(res.candidate.op(r, c)) == 0.0) continue;
      REQUIRE(res.candidate.mask.contains({r / d, r % d, c / d, c % d}));
    }
}

}  // namespace

TEST_CASE("forge d = 3, k = 1 produces a valid separability candidate") {
  const ForgeOptions opts = base_options(3, 1);
  const ForgeResult res = forge_witness(opts);
  check_candidate(res, 3);
  REQUIRE(res.candidate.threshold_C > -1.0);
  REQUIRE(res.candidate.threshold_C < 0.0);

  // The see-saw minimum over product states respects the achieved threshold.
  SeesawOptions sopts = opts.seesaw;
  sopts.restarts = 40;
  const SeesawResult sr = min_overlap_rank_k(res.candidate.op, 1, sopts);
  REQUIRE(sr.best_value >= res.candidate.threshold_C - 5e-3);

  // Trace records a real bisection.
  REQUIRE(res.trace.records.size() >= 5);
  bool saw_feasible = false, saw_infeasible = false;
  for (const auto& rec : res.trace.records) {
    if (rec.sdp_status == "feasible") saw_feasible = true;
    if (rec.sdp_status != "feasible") saw_infeasible = true;
  }
  REQUIRE(saw_feasible);
  REQUIRE(saw_infeasible);

  // Shifted form evaluates to 0 at the threshold direction.
  const HermitianOperator shifted = res.shifted_witness;
  REQUIRE(expectation(shifted, phi_plus(3)) < 0.0);
}

TEST_CASE("forge d = 3, k = 2 beats k = 1 (larger feasible set)") {
  const ForgeResult r1 = forge_witness(base_options(3, 1));
  const ForgeResult r2 = forge_witness(base_options(3, 2));
  check_candidate(r2, 3);
  // Bounding a larger set is harder: the achievable threshold drops.
  REQUIRE(r2.candidate.threshold_C <= r1.candidate.threshold_C + 1e-6);
}

TEST_CASE("forge input validation") {
  ForgeOptions o = base_options(3, 1);
  o.k = 0;
  REQUIRE_THROWS(forge_witness(o));
  o = base_options(3, 1);
  o.mask = linear_mask(4);
  REQUIRE_THROWS(forge_witness(o));
  o = base_options(3, 1);
  o.c_bisect_tol = 0.0;
  REQUIRE_THROWS(forge_witness(o));
}

TEST_CASE("inner loop rejects thresholds that are too ambitious") {
  // At C = 0.9 no Hermitian operator in the unit ball can both satisfy
  // <phi+|W|phi+> = -1 and stay >= 0.9 on product states near |00>.
  ForgeOptions opts = base_options(3, 1);
  std::vector<PureState> cuts;
  cuts.push_back(basis_state(3, 0, 0));
  cuts.push_back(basis_state(3, 1, 1));
  cuts.push_back(basis_state(3, 2, 2));
  const InnerLoopResult r = inner_loop(0.9, cuts, opts);
  REQUIRE(r.status == InnerLoopStatus::infeasible);
}
