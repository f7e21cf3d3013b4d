#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "snw/linalg.hpp"
#include "snw/quantum.hpp"

using namespace snw;

namespace {

ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = g(rng);
    for (int j = i + 1; j < n; ++j) {
      const cplx v(g(rng), g(rng));
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("hermitian_eig reconstructs the matrix") {
  std::mt19937_64 rng(7);
  for (int n : {2, 5, 16, 49}) {
    const ComplexMatrix a = random_hermitian(n, rng);
    const EigResult e = hermitian_eig(a);
    REQUIRE(static_cast<int>(e.values.size()) == n);
    for (int i = 0; i + 1 < n; ++i) REQUIRE(e.values[i] <= e.values[i + 1] + 1e-12);

    // V diag(values) V^dag == A
    ComplexMatrix vd = e.vectors;
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) vd(r, c) *= e.values[c];
    ComplexMatrix rec = vd * e.vectors.adjoint();
    rec -= a;
    REQUIRE(rec.max_abs() < 1e-9 * std::max(1.0, a.max_abs()));

    ComplexMatrix gram = e.vectors.adjoint() * e.vectors;
    gram -= ComplexMatrix::identity(n);
    REQUIRE(gram.max_abs() < 1e-10);
  }
}

TEST_CASE("hermitian_eig on a known 2x2") {
  ComplexMatrix a(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = -1.0;
  a(0, 1) = cplx(0.0, 2.0);
  a(1, 0) = cplx(0.0, -2.0);
  const EigResult e = hermitian_eig(a);  // eigenvalues +-sqrt(5)
  REQUIRE(e.values[0] == Catch::Approx(-std::sqrt(5.0)).margin(1e-12));
  REQUIRE(e.values[1] == Catch::Approx(std::sqrt(5.0)).margin(1e-12));
}

TEST_CASE("svd factorizes and orders singular values") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n : {3, 7}) {
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
    const SvdResult s = svd(a);
    for (int i = 0; i + 1 < n; ++i) REQUIRE(s.sigma[i] >= s.sigma[i + 1] - 1e-12);
    ComplexMatrix us = s.u;
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) us(r, c) *= s.sigma[c];
    ComplexMatrix rec = us * s.v.adjoint();
    rec -= a;
    REQUIRE(rec.max_abs() < 1e-9);
  }
}

TEST_CASE("svd resolves tiny singular values accurately") {
  // diag(1, 1e-7, 1e-12) conjugated by phases stays exact to ~1e-15 relative.
  ComplexMatrix a(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = cplx(0.0, 1e-7);
  a(2, 2) = -1e-12;
  const SvdResult s = svd(a);
  REQUIRE(s.sigma[0] == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(s.sigma[1] == Catch::Approx(1e-7).epsilon(1e-9));
  REQUIRE(s.sigma[2] == Catch::Approx(1e-12).epsilon(1e-6));
}

TEST_CASE("cholesky solves and inverts") {
  std::mt19937_64 rng(3);
  const int n = 10;
  ComplexMatrix b = random_hermitian(n, rng);
  ComplexMatrix a = b * b.adjoint();
  for (int i = 0; i < n; ++i) a(i, i) += 0.5;
  ComplexMatrix l;
  REQUIRE(cholesky(a, l));
  ComplexMatrix ll = l * l.adjoint();
  ll -= a;
  REQUIRE(ll.max_abs() < 1e-10 * a.max_abs());
  ComplexMatrix inv = hpd_inverse(l);
  ComplexMatrix id = inv * a;
  id -= ComplexMatrix::identity(n);
  REQUIRE(id.max_abs() < 1e-8);

  ComplexMatrix neg = ComplexMatrix::identity(2);
  neg(1, 1) = -1.0;
  ComplexMatrix l2;
  REQUIRE_FALSE(cholesky(neg, l2));
}

TEST_CASE("partial trace and kron are adjoint bookkeeping") {
  const int d = 3;
  std::mt19937_64 rng(5);
  const DensityMatrix rho = random_density(d, rng);
  const HermitianOperator marg = partial_trace_B(rho.op, d);
  REQUIRE(marg.trace() == Catch::Approx(1.0).margin(1e-12));

  // Tr[(X (x) 1) rho] == Tr[X Tr_B(rho)]
  const ComplexMatrix x = random_hermitian(d, rng);
  const HermitianOperator xi(kron(x, ComplexMatrix::identity(d)));
  const double lhs = expectation(xi, rho);
  const double rhs = real_inner(x, marg.mat());
  REQUIRE(lhs == Catch::Approx(rhs).margin(1e-12));
}

TEST_CASE("schmidt decomposition of known states") {
  const int d = 4;
  const SchmidtDecomposition dec = schmidt_decompose(phi_plus(d));
  REQUIRE(dec.rank() == d);
  for (double c : dec.coefficients) REQUIRE(c == Catch::Approx(0.5).margin(1e-12));

  REQUIRE(schmidt_decompose(basis_state(d, 1, 2)).rank() == 1);

  std::mt19937_64 rng(17);
  for (int k = 1; k <= d; ++k) {
    const PureState psi = random_schmidt_rank_state(d, k, rng);
    REQUIRE(schmidt_decompose(psi).rank() <= k);
  }
}

TEST_CASE("density matrix validation") {
  const int d = 3;
  REQUIRE_THROWS(DensityMatrix::from_operator(d, HermitianOperator::identity(d * d)));
  HermitianOperator bad = HermitianOperator::zero(d * d);
  bad.set(0, 0, 2.0);
  bad.set(1, 1, -1.0);
  REQUIRE_THROWS(DensityMatrix::from_operator(d, bad));
  const DensityMatrix mixed =
      DensityMatrix::from_operator(d, HermitianOperator::identity(d * d) * (1.0 / (d * d)));
  REQUIRE(mixed.op.trace() == Catch::Approx(1.0));
}

TEST_CASE("pure states normalize and reject garbage") {
  std::vector<cplx> a(9, 0.0);
  a[0] = 3.0;
  a[4] = 4.0;
  const PureState s = PureState::from_amplitudes(3, a);
  REQUIRE(s.norm() == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(std::abs(s.amp[0]) == Catch::Approx(0.6).margin(1e-12));
  REQUIRE_THROWS(PureState::from_amplitudes(3, std::vector<cplx>(9, 0.0)));
  REQUIRE_THROWS(PureState::from_amplitudes(2, std::vector<cplx>(9, 1.0)));
}
