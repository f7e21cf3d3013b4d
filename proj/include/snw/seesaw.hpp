#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "snw/quantum.hpp"

namespace snw {

struct SeesawOptions {
  int restarts = 50;
  int max_cycles = 200;
  double conv_tol = 1e-9;
  std::uint64_t seed = 1;
};

struct SeesawResult {
  PureState best_state;
  double best_value = 0.0;
  int cycles_used = 0;   // cycles of the winning restart
  int restarts = 0;
  bool converged = false;
  bool monotone = true;  // objective never increased across half-steps
};

namespace detail {

// Rank-k ansatz |phi> = sum_i a_i (x) b_i with unnormalized local vectors.
struct Ansatz {
  int d, k;
  std::vector<std::vector<cplx>> a, b;  // k vectors of length d each
};

inline std::vector<cplx> assemble(const Ansatz& s) {
  std::vector<cplx> amp(static_cast<size_t>(s.d) * s.d, 0.0);
  for (int t = 0; t < s.k; ++t)
    for (int i = 0; i < s.d; ++i)
      for (int j = 0; j < s.d; ++j) amp[static_cast<size_t>(i) * s.d + j] += s.a[t][i] * s.b[t][j];
  return amp;
}

// One half-step: with the "other" side fixed, the optimum over the free side
// is the smallest generalized eigenvector of (T^dag W T, T^dag T), where T
// maps stacked free coefficients to the assembled state. Returns the new
// normalized objective value, or NaN when the fixed side is rank deficient.
// `optimize_a` selects which side is free.
inline double half_step(const HermitianOperator& w, Ansatz& s, bool optimize_a) {
  const int d = s.d, k = s.k;
  const int nv = d * k;
  // Columns of T: index (t, r) -> e_r (x) b_t   (a side free)
  //               index (t, r) -> a_t (x) e_r   (b side free)
  ComplexMatrix tmat(d * d, nv);
  const auto& fixed = optimize_a ? s.b : s.a;
  for (int t = 0; t < k; ++t)
    for (int r = 0; r < d; ++r) {
      const int col = t * d + r;
      for (int x = 0; x < d; ++x) {
        if (optimize_a)
          tmat(r * d + x, col) = fixed[t][x];
        else
          tmat(x * d + r, col) = fixed[t][x];
      }
    }

  ComplexMatrix th = tmat.adjoint();
  ComplexMatrix gram = th * tmat;
  ComplexMatrix m1 = th * (w.mat() * tmat);

  // Whitening with a small ridge when the Gram matrix is near singular.
  const double gscale = std::max(gram.trace().real() / nv, 1e-300);
  ComplexMatrix l;
  ComplexMatrix gr = gram;
  if (!cholesky(gr, l)) {
    for (int i = 0; i < nv; ++i) gr(i, i) += 1e-12 * gscale;
    if (!cholesky(gr, l)) return std::numeric_limits<double>::quiet_NaN();
  }
  ComplexMatrix white = forward_solve(l, forward_solve(l, m1).adjoint()).adjoint();
  EigResult eig = hermitian_eig(white);
  ComplexMatrix u(nv, 1);
  for (int i = 0; i < nv; ++i) u(i, 0) = eig.vectors(i, 0);
  ComplexMatrix coeffs = backward_solve(l, u);

  auto& free_side = optimize_a ? s.a : s.b;
  for (int t = 0; t < k; ++t)
    for (int r = 0; r < d; ++r) free_side[t][r] = coeffs(t * d + r, 0);
  return eig.values.front();
}

}  // namespace detail

// Minimize <phi|W|phi> over pure states of Schmidt rank <= k by alternating
// exact half-steps. Result is an upper bound on the true minimum (local
// optimality only); best value over all restarts is returned.
inline SeesawResult min_overlap_rank_k(const HermitianOperator& w, int k,
                                       const SeesawOptions& opts = {}) {
  const int dsq = w.dim();
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dsq))));
  if (d * d != dsq) throw std::invalid_argument("min_overlap_rank_k: operator dim is not d^2");
  if (k < 1 || k > d) throw std::invalid_argument("min_overlap_rank_k: k out of range");

  SeesawResult best;
  best.best_value = std::numeric_limits<double>::infinity();
  int good_restarts = 0;

  for (int r = 0; r < opts.restarts; ++r) {
    std::mt19937_64 rng(opts.seed + 0x9e3779b97f4a7c15ULL * (r + 1));
    std::normal_distribution<double> g(0.0, 1.0);
    detail::Ansatz s;
    s.d = d;
    s.k = k;
    s.a.assign(k, std::vector<cplx>(d));
    s.b.assign(k, std::vector<cplx>(d));
    bool degenerate = false;

    // A degenerate draw (rank-deficient Gram) is re-randomized a few times
    // before the restart is abandoned.
    for (int attempt = 0; attempt < 5; ++attempt) {
      for (int t = 0; t < k; ++t)
        for (int i = 0; i < d; ++i) {
          s.a[t][i] = cplx(g(rng), g(rng));
          s.b[t][i] = cplx(g(rng), g(rng));
        }
      double prev = std::numeric_limits<double>::infinity();
      bool converged = false;
      bool monotone = true;
      int cycle = 0;
      degenerate = false;
      for (; cycle < opts.max_cycles; ++cycle) {
        const double va = detail::half_step(w, s, true);
        const double vb = detail::half_step(w, s, false);
        if (std::isnan(va) || std::isnan(vb)) {
          degenerate = true;
          break;
        }
        if (va > prev + 1e-9 || vb > va + 1e-9) monotone = false;
        if (prev - vb < opts.conv_tol) {
          prev = vb;
          converged = true;
          break;
        }
        prev = vb;
      }
      if (degenerate) continue;

      ++good_restarts;
      if (prev < best.best_value) {
        best.best_value = prev;
        best.best_state = PureState::from_amplitudes(d, detail::assemble(s));
        best.cycles_used = cycle + 1;
        best.converged = converged;
      }
      best.monotone = best.monotone && monotone;
      break;
    }
  }

  if (good_restarts == 0) throw std::runtime_error("min_overlap_rank_k: all restarts degenerate");
  best.restarts = good_restarts;
  best.best_value = expectation(w, best.best_state);
  return best;
}

}  // namespace snw
