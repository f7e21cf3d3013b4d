#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snw/lmi.hpp"
#include "snw/quantum.hpp"
#include "snw/seesaw.hpp"
#include "snw/witness.hpp"

namespace snw {

struct ForgeOptions {
  int d = 0;
  int k = 0;
  PureState target;                          // |psi_0>
  std::optional<DensityMatrix> mixed_target; // overrides target when set
  CoefficientMask mask;
  double c_bisect_tol = 1e-3;
  double cut_violation_tol = 1e-6;
  int max_outer_iters = 200;
  bool retain_cuts_across_levels = true;
  SeesawOptions seesaw;
  LMIOptions lmi;
};

struct ForgeIterationRecord {
  double c_min, c_max, c;
  int num_cuts;
  std::string sdp_status;
  double sdp_margin;
  double seesaw_value;  // NaN when the SDP was infeasible
};

struct ForgeTrace {
  std::vector<ForgeIterationRecord> records;
};

struct ForgeResult {
  WitnessCandidate candidate;           // W-tilde^(inf) with the achieved C
  HermitianOperator shifted_witness;    // proper-witness form of the candidate
  ForgeTrace trace;
  std::vector<PureState> cut_states;
  bool certified = false;               // certification is a separate step
};

namespace detail {

// Decision-variable layout over a conjugation-closed mask: one real variable
// per diagonal coefficient, (re, im) per off-diagonal conjugate pair.
// Masked-out coefficients are not variables at all.
struct MaskVariables {
  int d = 0;
  int num_vars = 0;
  std::vector<HermitianOperator> basis;  // one Hermitian basis operator per variable

  explicit MaskVariables(const CoefficientMask& mask) : d(mask.d()) {
    const int n = d * d;
    for (const auto& q : mask.indices()) {
      const int r = q[0] * d + q[1];
      const int c = q[2] * d + q[3];
      if (r > c) continue;  // conjugate partner handles it
      ComplexMatrix e(n, n);
      if (r == c) {
        e(r, r) = 1.0;
        basis.emplace_back(e);
      } else {
        e(r, c) = 1.0;
        e(c, r) = 1.0;
        basis.emplace_back(e);
        ComplexMatrix ei(n, n);
        ei(r, c) = cplx(0.0, 1.0);
        ei(c, r) = cplx(0.0, -1.0);
        basis.emplace_back(ei);
      }
    }
    num_vars = static_cast<int>(basis.size());
  }

  HermitianOperator assemble(const std::vector<double>& x) const {
    ComplexMatrix w(d * d, d * d);
    for (int v = 0; v < num_vars; ++v) {
      if (x[v] == 0.0) continue;
      w += basis[v].mat() * cplx(x[v], 0.0);
    }
    return HermitianOperator(w);
  }
};

// Orthonormal vectors spanning the target support (pure: just the state) and
// an orthonormal basis of the complement. Normalization Tr(W rho0) = -1 with
// |W| <= 1 forces W = -1 on the support, so the unit-ball blocks are imposed
// on the complement where a strict interior exists.
struct TargetSplit {
  std::vector<std::vector<cplx>> support;
  ComplexMatrix complement;  // n2 x (n2 - m), orthonormal columns
};

inline TargetSplit split_target(const ForgeOptions& opts) {
  const int n2 = opts.d * opts.d;
  TargetSplit ts;
  if (opts.mixed_target) {
    const EigResult e = hermitian_eig(opts.mixed_target->op.mat());
    for (int c = 0; c < n2; ++c) {
      if (e.values[c] < 1e-10) continue;
      std::vector<cplx> v(n2);
      for (int r = 0; r < n2; ++r) v[r] = e.vectors(r, c);
      ts.support.push_back(std::move(v));
    }
  } else {
    ts.support.push_back(opts.target.amp);
  }

  // Modified Gram-Schmidt of the identity columns against the support.
  std::vector<std::vector<cplx>> ortho = ts.support;
  for (int col = 0; col < n2; ++col) {
    std::vector<cplx> v(n2, 0.0);
    v[col] = 1.0;
    for (const auto& u : ortho) {
      cplx proj = 0.0;
      for (int r = 0; r < n2; ++r) proj += std::conj(u[r]) * v[r];
      for (int r = 0; r < n2; ++r) v[r] -= proj * u[r];
    }
    double nrm = 0.0;
    for (const auto& x : v) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-6) continue;
    for (auto& x : v) x /= nrm;
    ortho.push_back(std::move(v));
  }
  const int m = static_cast<int>(ts.support.size());
  ts.complement = ComplexMatrix(n2, n2 - m);
  for (int c = m; c < static_cast<int>(ortho.size()); ++c)
    for (int r = 0; r < n2; ++r) ts.complement(r, c - m) = ortho[c][r];
  if (static_cast<int>(ortho.size()) != n2)
    throw std::runtime_error("split_target: complement basis construction failed");
  return ts;
}

}  // namespace detail

enum class InnerLoopStatus { converged, infeasible };

struct InnerLoopResult {
  InnerLoopStatus status;
  std::optional<HermitianOperator> witness;
};

// One run of the constrained feasibility SDP / see-saw alternation at fixed C.
// New violated-cut states are appended to `cuts`, which persists at the caller.
inline InnerLoopResult inner_loop(double c_threshold, std::vector<PureState>& cuts,
                                  const ForgeOptions& opts, ForgeTrace* trace = nullptr,
                                  double c_min = -1.0, double c_max = 1.0) {
  if (c_threshold <= -1.0 - 1e-12 || c_threshold > 1.0)
    throw std::invalid_argument("inner_loop: C must lie in (-1, 1]");
  const detail::MaskVariables vars(opts.mask);
  const int n2 = opts.d * opts.d;
  const detail::TargetSplit ts = detail::split_target(opts);
  const ComplexMatrix& q = ts.complement;
  const int nc = q.cols();

  // Projected coefficient matrices Q^dag B_v Q, computed once.
  std::vector<ComplexMatrix> projected;
  projected.reserve(vars.num_vars);
  for (int v = 0; v < vars.num_vars; ++v)
    projected.push_back(q.adjoint() * (vars.basis[v].mat() * q));

  for (int iter = 0; iter < opts.max_outer_iters; ++iter) {
    LMIProblem prob;
    prob.num_vars = vars.num_vars;
    prob.sense = LMISense::feasibility;

    LMIBlock upper;  // Q^dag (1 - W) Q >= 0
    upper.f0 = ComplexMatrix::identity(nc);
    LMIBlock lower;  // Q^dag (1 + W) Q >= 0
    lower.f0 = ComplexMatrix::identity(nc);
    for (int v = 0; v < vars.num_vars; ++v) {
      upper.terms.emplace_back(v, projected[v] * cplx(-1.0, 0.0));
      lower.terms.emplace_back(v, projected[v]);
    }
    prob.blocks.push_back(std::move(upper));
    prob.blocks.push_back(std::move(lower));

    for (const auto& phi : cuts) {
      LMIBlock cut;  // <phi|W|phi> - C >= 0
      cut.f0 = ComplexMatrix(1, 1);
      cut.f0(0, 0) = -c_threshold;
      for (int v = 0; v < vars.num_vars; ++v) {
        const double a = expectation(vars.basis[v], phi);
        if (a == 0.0) continue;
        ComplexMatrix t(1, 1);
        t(0, 0) = a;
        cut.terms.emplace_back(v, std::move(t));
      }
      prob.blocks.push_back(std::move(cut));
    }

    // Target normalization: W s = -s on every support vector (equivalent to
    // <psi0|W|psi0> = -1, resp. Tr(W rho0) = -1, inside the unit ball).
    for (const auto& s : ts.support) {
      std::vector<std::vector<cplx>> bs(vars.num_vars, std::vector<cplx>(n2, 0.0));
      for (int v = 0; v < vars.num_vars; ++v) {
        const ComplexMatrix& b = vars.basis[v].mat();
        for (int r = 0; r < n2; ++r) {
          cplx acc = 0.0;
          for (int c = 0; c < n2; ++c) acc += b(r, c) * s[c];
          bs[v][r] = acc;
        }
      }
      for (int r = 0; r < n2; ++r) {
        std::vector<double> re(vars.num_vars), im(vars.num_vars);
        for (int v = 0; v < vars.num_vars; ++v) {
          re[v] = bs[v][r].real();
          im[v] = bs[v][r].imag();
        }
        prob.equalities.emplace_back(std::move(re), -s[r].real());
        prob.equalities.emplace_back(std::move(im), -s[r].imag());
      }
    }

    const LMISolution sol = phase1_feasible(prob, opts.lmi);
    // An iteration-capped solve that nevertheless reached a clearly positive
    // margin still certifies feasibility of this C level.
    const bool feasible = sol.status == LMIStatus::feasible ||
                          (sol.status == LMIStatus::max_iters &&
                           sol.phase1_margin > opts.lmi.feas_tol);
    // Marginal results are treated as infeasible: biases C downward, keeps
    // the final candidate certifiable.
    if (!feasible) {
      if (trace)
        trace->records.push_back({c_min, c_max, c_threshold, static_cast<int>(cuts.size()),
                                  sol.status == LMIStatus::marginal ? "marginal" : "infeasible",
                                  sol.phase1_margin, std::numeric_limits<double>::quiet_NaN()});
      return {InnerLoopStatus::infeasible, std::nullopt};
    }

    HermitianOperator w = vars.assemble(sol.x_star);
    SeesawOptions sopts = opts.seesaw;
    sopts.seed = opts.seesaw.seed + 1000003ULL * (iter + 1);
    const SeesawResult sr = min_overlap_rank_k(w, opts.k, sopts);
    if (trace)
      trace->records.push_back({c_min, c_max, c_threshold, static_cast<int>(cuts.size()),
                                "feasible", sol.phase1_margin, sr.best_value});

    if (sr.best_value < c_threshold - opts.cut_violation_tol) {
      cuts.push_back(sr.best_state);
      continue;
    }
    return {InnerLoopStatus::converged, w};
  }
  throw std::runtime_error("inner_loop: max_outer_iters exceeded without convergence");
}

// Divide-and-conquer over the threshold C: bisect [-1, 1], keeping the last
// operator from a converged inner loop.
inline ForgeResult forge_witness(const ForgeOptions& opts) {
  if (opts.d < 2 || opts.k < 1 || opts.k > opts.d) throw std::invalid_argument("forge_witness: bad d/k");
  if (opts.mask.d() != opts.d) throw std::invalid_argument("forge_witness: mask dimension mismatch");
  if (!(opts.c_bisect_tol > 0.0)) throw std::invalid_argument("forge_witness: c_bisect_tol must be > 0");

  double c_min = -1.0, c_max = 1.0;
  std::vector<PureState> cuts;
  ForgeTrace trace;
  std::optional<HermitianOperator> best;

  while (c_max - c_min > opts.c_bisect_tol) {
    const double c = 0.5 * (c_min + c_max);
    if (!opts.retain_cuts_across_levels) cuts.clear();
    const InnerLoopResult r = inner_loop(c, cuts, opts, &trace, c_min, c_max);
    if (r.status == InnerLoopStatus::converged) {
      c_min = c;
      best = r.witness;
    } else {
      c_max = c;
    }
  }

  if (!best) {
    // Every midpoint was infeasible; C slightly above -1 is always feasible.
    const double c = -1.0 + 0.5 * opts.c_bisect_tol;
    if (!opts.retain_cuts_across_levels) cuts.clear();
    const InnerLoopResult r = inner_loop(c, cuts, opts, &trace, c_min, c_max);
    if (r.status != InnerLoopStatus::converged)
      throw std::runtime_error("forge_witness: no feasible threshold found");
    c_min = c;
    best = r.witness;
  }

  ForgeResult res;
  res.candidate = WitnessCandidate{opts.d, opts.k, *best, opts.mask, c_min};
  res.shifted_witness = shift_to_witness(res.candidate);
  res.trace = std::move(trace);
  res.cut_states = std::move(cuts);
  return res;
}

}  // namespace snw
