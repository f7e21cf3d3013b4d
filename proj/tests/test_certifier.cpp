#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "snw/certify.hpp"
#include "snw/seesaw.hpp"

using namespace snw;

TEST_CASE("closed-form spectrum matches the dense oracle") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 3 + static_cast<int>(rng() % 5);  // 3..7
    const int k = 1 + static_cast<int>(rng() % d);
    const DualAnsatzPoint pt{u(rng), u(rng)};
    const ClosedFormSpectrum s = closed_form_eigenvalues(d, k, pt);

    std::vector<double> expected;
    for (const auto& [v, mult] : s.sectors)
      for (int m = 0; m < mult; ++m) expected.push_back(v);
    std::sort(expected.begin(), expected.end());
    REQUIRE(static_cast<int>(expected.size()) == d * d);

    const EigResult dense = hermitian_eig(dual_ansatz_operator(d, k, pt).mat());
    for (int i = 0; i < d * d; ++i)
      REQUIRE(dense.values[i] == Catch::Approx(expected[i]).margin(1e-8));
  }
}

TEST_CASE("symmetric closed-form bound equals the conjectured threshold") {
  for (int d = 4; d <= 11; ++d)
    for (int k = 3; k <= d; ++k) {
      const SymmetricBound sb = symmetric_bound(d, k);
      REQUIRE(sb.bound == Catch::Approx(-ck_threshold(d, k)).margin(1e-10));
      // The certified operator is PSD after subtracting the bound.
      HermitianOperator shifted = dual_ansatz_operator(d, k, sb.point);
      shifted -= sb.bound * HermitianOperator::identity(d * d);
      REQUIRE(shifted.min_eigenvalue() >= -1e-8);
    }
  REQUIRE_THROWS(symmetric_bound(4, 2));
  REQUIRE_THROWS(symmetric_bound(3, 3));
}

TEST_CASE("quartic bounds reproduce the published relaxation values") {
  // The two-parameter ansatz is short of the relaxation optimum at d = 4,
  // k = 1, where the dual SDP takes over (published value 0.530).
  const QuarticBound q41 = quartic_bound(4, 1);
  REQUIRE(q41.used_sdp_fallback);
  REQUIRE(q41.bound == Catch::Approx(-0.5303).margin(5e-4));
  REQUIRE(quartic_bound(4, 2).bound == Catch::Approx(-0.71526).margin(5e-4));
  REQUIRE(quartic_bound(7, 1).bound == Catch::Approx(-0.73353).margin(1e-4));
  REQUIRE(quartic_bound(7, 2).bound == Catch::Approx(-0.77278).margin(1e-4));
  REQUIRE(quartic_bound(11, 1).bound == Catch::Approx(-0.82507).margin(1e-4));
  REQUIRE(quartic_bound(11, 2).bound == Catch::Approx(-0.83951).margin(1e-4));
  REQUIRE_FALSE(quartic_bound(11, 2).used_sdp_fallback);
  REQUIRE_THROWS(quartic_bound(4, 3));
}

TEST_CASE("quartic bound is a certificate: operator minus bound is PSD") {
  for (int d : {7, 11}) {
    for (int k : {1, 2}) {
      const QuarticBound qb = quartic_bound(d, k);
      REQUIRE_FALSE(qb.used_sdp_fallback);
      HermitianOperator shifted = dual_ansatz_operator(d, k, qb.point);
      shifted -= qb.bound * HermitianOperator::identity(d * d);
      REQUIRE(shifted.min_eigenvalue() >= -1e-8);
    }
  }
}

TEST_CASE("primal and dual SDP bounds agree at d = 3") {
  const HermitianOperator w = build_Wtilde(3);
  for (int k = 1; k <= 2; ++k) {
    const double primal = primal_bound_sdp(w, k);
    const DualBound dual = dual_bound_sdp(w, k);
    REQUIRE(std::abs(primal - dual.y_star) < 1e-5);
    REQUIRE(dual.s_star.min_eigenvalue() >= -1e-8);
    // Rigor: W - (1 (x) R)(S) - y 1 must be PSD at the returned point.
    HermitianOperator slack = w;
    slack -= one_tensor_R(dual.s_star, 1.0 / k);
    slack -= dual.y_star * HermitianOperator::identity(9);
    REQUIRE(slack.min_eigenvalue() >= -1e-8);
  }
}

TEST_CASE("certify dispatches and reports a coherent certificate") {
  const HermitianOperator w4 = build_Wtilde(4);
  SeesawOptions sopts;
  sopts.restarts = 25;
  sopts.seed = 21;

  const double conj3 = min_overlap_rank_k(w4, 3, sopts).best_value;
  const CertificateReport rep3 = certify(w4, 3, conj3);
  REQUIRE(rep3.method == CertifyMethod::symmetric_closed_form);
  REQUIRE(rep3.proven_bound == Catch::Approx(-ck_threshold(4, 3)).margin(1e-9));
  REQUIRE(rep3.gap >= -1e-9);
  REQUIRE(rep3.gap < 1e-5);

  const double conj1 = min_overlap_rank_k(w4, 1, sopts).best_value;
  const CertificateReport rep1 = certify(w4, 1, conj1);
  REQUIRE(rep1.method == CertifyMethod::full_sdp);  // ansatz is short at d = 4, k = 1
  REQUIRE(rep1.proven_bound == Catch::Approx(-0.530).margin(5e-4));
  REQUIRE(rep1.gap > 1e-3);  // strict relaxation gap at k = 1

  // Arbitrary operators route to the full SDP, with a dimension guard.
  const HermitianOperator ws = standard_witness(3, 1);
  const CertificateReport reps = certify(ws, 1, 0.0);
  REQUIRE(reps.method == CertifyMethod::full_sdp);
  REQUIRE(reps.proven_bound <= 1e-6);
  CertifyOptions tight;
  tight.max_full_sdp_d = 2;
  REQUIRE_THROWS(certify(ws, 1, 0.0, tight));
}
