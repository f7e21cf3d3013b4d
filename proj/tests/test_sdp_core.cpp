#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "snw/lmi.hpp"
#include "snw/quantum.hpp"

using namespace snw;

namespace {

LMIBlock scalar_block(double f0, std::vector<std::pair<int, double>> terms) {
  LMIBlock b;
  b.f0 = ComplexMatrix(1, 1);
  b.f0(0, 0) = f0;
  for (auto [vi, v] : terms) {
    ComplexMatrix t(1, 1);
    t(0, 0) = v;
    b.terms.emplace_back(vi, std::move(t));
  }
  return b;
}

}  // namespace

TEST_CASE("scalar LP: maximize x subject to x <= 1/2") {
  LMIProblem p;
  p.num_vars = 1;
  p.sense = LMISense::maximize;
  p.objective = {1.0};
  p.blocks.push_back(scalar_block(0.5, {{0, -1.0}}));
  p.blocks.push_back(scalar_block(10.0, {{0, 1.0}}));  // x >= -10 keeps it bounded

  const LMISolution s = solve(p);
  REQUIRE(s.status == LMIStatus::optimal);
  REQUIRE(s.objective_value == Catch::Approx(0.5).margin(1e-6));
  REQUIRE(s.duality_gap < 1e-2);  // conservative estimate, not the true gap
}

TEST_CASE("eigenvalue LP: max y with A - y1 >= 0 gives lambda_min") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = 6;
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = g(rng);
    for (int j = i + 1; j < n; ++j) {
      const cplx v(g(rng), g(rng));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
  const double lmin = hermitian_eig(a).values.front();

  LMIProblem p;
  p.num_vars = 1;
  p.sense = LMISense::maximize;
  p.objective = {1.0};
  LMIBlock b;
  b.f0 = a;
  ComplexMatrix mi = ComplexMatrix::identity(n);
  mi *= cplx(-1.0, 0.0);
  b.terms.emplace_back(0, std::move(mi));
  p.blocks.push_back(std::move(b));

  const LMISolution s = solve(p);
  REQUIRE(s.status == LMIStatus::optimal);
  REQUIRE(s.objective_value == Catch::Approx(lmin).margin(1e-6));
  // Strict feasibility of the iterate: the bound is rigorous.
  ComplexMatrix f = a;
  for (int i = 0; i < n; ++i) f(i, i) -= s.x_star[0];
  REQUIRE(hermitian_eig(f).values.front() > -1e-9);
}

TEST_CASE("phase 1 detects infeasibility and feasibility") {
  LMIProblem bad;
  bad.num_vars = 1;
  bad.sense = LMISense::feasibility;
  bad.blocks.push_back(scalar_block(-1.0, {{0, 1.0}}));  // x >= 1
  bad.blocks.push_back(scalar_block(-1.0, {{0, -1.0}})); // x <= -1
  REQUIRE(phase1_feasible(bad).status == LMIStatus::infeasible);

  LMIProblem ok = bad;
  ok.blocks[1] = scalar_block(3.0, {{0, -1.0}});  // 1 <= x <= 3
  const LMISolution s = phase1_feasible(ok);
  REQUIRE(s.status == LMIStatus::feasible);
  REQUIRE(s.x_star[0] >= 1.0 - 1e-8);
  REQUIRE(s.x_star[0] <= 3.0 + 1e-8);
}

TEST_CASE("equality constraints are honored") {
  // max x0 + x1 with x0 + x1 + x2 = 1, all in [0, 1]; optimum 1.
  LMIProblem p;
  p.num_vars = 3;
  p.sense = LMISense::maximize;
  p.objective = {1.0, 1.0, 0.0};
  for (int v = 0; v < 3; ++v) {
    p.blocks.push_back(scalar_block(0.0, {{v, 1.0}}));
    p.blocks.push_back(scalar_block(1.0, {{v, -1.0}}));
  }
  p.equalities.emplace_back(std::vector<double>{1.0, 1.0, 1.0}, 1.0);

  const LMISolution s = solve(p);
  REQUIRE(s.status == LMIStatus::optimal);
  REQUIRE(s.objective_value == Catch::Approx(1.0).margin(1e-5));
  REQUIRE(s.x_star[0] + s.x_star[1] + s.x_star[2] == Catch::Approx(1.0).margin(1e-9));

  // Inconsistent equalities are flagged without touching the barrier.
  LMIProblem bad = p;
  bad.equalities.emplace_back(std::vector<double>{1.0, 1.0, 1.0}, 2.0);
  REQUIRE(phase1_feasible(bad).status == LMIStatus::infeasible);
}

TEST_CASE("matrix SDP with known optimum") {
  // max tr(C X) over X >= 0, tr X = 1 equals lambda_max(C).
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = 4;
  ComplexMatrix c(n, n);
  for (int i = 0; i < n; ++i) {
    c(i, i) = g(rng);
    for (int j = i + 1; j < n; ++j) {
      const cplx v(g(rng), g(rng));
      c(i, j) = v;
      c(j, i) = std::conj(v);
    }
  }
  const double lmax = hermitian_eig(c).values.back();

  // Hermitian parameterization of X.
  std::vector<ComplexMatrix> basis;
  for (int i = 0; i < n; ++i) {
    ComplexMatrix e(n, n);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ComplexMatrix er(n, n), ei(n, n);
      er(i, j) = er(j, i) = 1.0;
      ei(i, j) = cplx(0.0, 1.0);
      ei(j, i) = cplx(0.0, -1.0);
      basis.push_back(er);
      basis.push_back(ei);
    }

  LMIProblem p;
  p.num_vars = static_cast<int>(basis.size());
  p.sense = LMISense::maximize;
  p.objective.resize(p.num_vars);
  LMIBlock psd;
  psd.f0 = ComplexMatrix(n, n);
  std::vector<double> tr(p.num_vars, 0.0);
  for (int v = 0; v < p.num_vars; ++v) {
    p.objective[v] = real_inner(c, basis[v]);
    tr[v] = basis[v].trace().real();
    psd.terms.emplace_back(v, basis[v]);
  }
  p.blocks.push_back(std::move(psd));
  p.equalities.emplace_back(std::move(tr), 1.0);

  const LMISolution s = solve(p);
  REQUIRE(s.status == LMIStatus::optimal);
  REQUIRE(s.objective_value == Catch::Approx(lmax).margin(1e-5));
}
