#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "snw/linalg.hpp"

namespace snw {

// Affine Hermitian-matrix constraint F0 + sum_i x_i F_i >= 0.
struct LMIBlock {
  ComplexMatrix f0;
  std::vector<std::pair<int, ComplexMatrix>> terms;  // (variable index, coefficient matrix)

  int dim() const { return f0.rows(); }
};

enum class LMISense { maximize, feasibility };

struct LMIProblem {
  int num_vars = 0;
  std::vector<LMIBlock> blocks;
  // a . x = rhs
  std::vector<std::pair<std::vector<double>, double>> equalities;
  std::vector<double> objective;  // c, used when sense == maximize
  LMISense sense = LMISense::maximize;
};

enum class LMIStatus { optimal, feasible, marginal, infeasible, max_iters };

struct LMIOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-7;
  int max_iters = 200;
  // Phase-1 box |x_i| <= phase1_box. The margin objective ignores x, so
  // unbounded feasible directions would otherwise let the centering iterates
  // diverge. Problems whose only feasible points exceed the box are reported
  // infeasible.
  double phase1_box = 1e4;
};

struct LMISolution {
  std::vector<double> x_star;
  double objective_value = 0.0;
  std::vector<ComplexMatrix> dual_certificate;  // one PSD matrix per block
  double duality_gap = 0.0;
  LMIStatus status = LMIStatus::infeasible;
  double phase1_margin = 0.0;  // optimal t of the max-margin problem
  int newton_iters = 0;
};

namespace detail {

// Eliminates equality constraints by Gauss-Jordan substitution, producing the
// affine parameterization x = x0 + N z over the free variables.
struct EqualityReduction {
  bool consistent = true;
  std::vector<double> x0;
  std::vector<int> free_vars;             // original index of each reduced variable
  // row r: x_{pivot[r]} = pivot_rhs[r] - sum_f pivot_coef[r][f] * z_f
  std::vector<int> pivots;
  std::vector<std::vector<double>> pivot_coef;  // indexed by reduced variable
  std::vector<double> pivot_rhs;
};

inline EqualityReduction reduce_equalities(const LMIProblem& p) {
  const int n = p.num_vars;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (const auto& [a, b] : p.equalities) {
    if (static_cast<int>(a.size()) != n) throw std::invalid_argument("equality length mismatch");
    rows.push_back(a);
    rhs.push_back(b);
  }

  EqualityReduction red;
  std::vector<bool> is_pivot(n, false);
  const int m = static_cast<int>(rows.size());
  std::vector<int> pivot_of_row(m, -1);
  for (int r = 0; r < m; ++r) {
    int piv = -1;
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      if (is_pivot[j]) continue;
      if (std::abs(rows[r][j]) > best) {
        best = std::abs(rows[r][j]);
        piv = j;
      }
    }
    if (best < 1e-12) {
      if (std::abs(rhs[r]) > 1e-9) red.consistent = false;  // 0 = nonzero
      continue;                                             // dependent row
    }
    const double inv = 1.0 / rows[r][piv];
    for (int j = 0; j < n; ++j) rows[r][j] *= inv;
    rhs[r] *= inv;
    for (int r2 = 0; r2 < m; ++r2) {
      if (r2 == r) continue;
      const double f = rows[r2][piv];
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) rows[r2][j] -= f * rows[r][j];
      rhs[r2] -= f * rhs[r];
    }
    is_pivot[piv] = true;
    pivot_of_row[r] = piv;
  }
  if (!red.consistent) return red;

  for (int j = 0; j < n; ++j)
    if (!is_pivot[j]) red.free_vars.push_back(j);

  red.x0.assign(n, 0.0);
  const int nf = static_cast<int>(red.free_vars.size());
  for (int r = 0; r < m; ++r) {
    if (pivot_of_row[r] < 0) continue;
    red.pivots.push_back(pivot_of_row[r]);
    red.pivot_rhs.push_back(rhs[r]);
    std::vector<double> coef(nf);
    for (int f = 0; f < nf; ++f) coef[f] = rows[r][red.free_vars[f]];
    red.pivot_coef.push_back(std::move(coef));
    red.x0[pivot_of_row[r]] = rhs[r];
  }
  return red;
}

inline std::vector<double> expand_solution(const EqualityReduction& red, const std::vector<double>& z) {
  std::vector<double> x = red.x0;
  for (size_t f = 0; f < red.free_vars.size(); ++f) x[red.free_vars[f]] = z[f];
  for (size_t r = 0; r < red.pivots.size(); ++r) {
    double v = red.pivot_rhs[r];
    for (size_t f = 0; f < z.size(); ++f) v -= red.pivot_coef[r][f] * z[f];
    x[red.pivots[r]] = v;
  }
  return x;
}

// Blocks rewritten over the free variables.
struct ReducedBlock {
  ComplexMatrix f0;
  std::vector<std::pair<int, ComplexMatrix>> terms;  // reduced variable index
  int dim() const { return f0.rows(); }
};

inline std::vector<ReducedBlock> reduce_blocks(const LMIProblem& p, const EqualityReduction& red) {
  const int nf = static_cast<int>(red.free_vars.size());
  std::vector<int> reduced_index(p.num_vars, -1);
  for (int f = 0; f < nf; ++f) reduced_index[red.free_vars[f]] = f;
  std::vector<int> pivot_row(p.num_vars, -1);
  for (size_t r = 0; r < red.pivots.size(); ++r) pivot_row[red.pivots[r]] = static_cast<int>(r);

  std::vector<ReducedBlock> out;
  for (const auto& blk : p.blocks) {
    ReducedBlock rb;
    rb.f0 = blk.f0;
    std::vector<ComplexMatrix> acc(nf);
    std::vector<bool> used(nf, false);
    for (const auto& [vi, fi] : blk.terms) {
      if (pivot_row[vi] >= 0) {
        const int r = pivot_row[vi];
        rb.f0 += cplx(red.pivot_rhs[r], 0.0) * fi;
        for (int f = 0; f < nf; ++f) {
          const double cRf = -red.pivot_coef[r][f];
          if (cRf == 0.0) continue;
          if (!used[f]) {
            acc[f] = ComplexMatrix(blk.dim(), blk.dim());
            used[f] = true;
          }
          acc[f] += cplx(cRf, 0.0) * fi;
        }
      } else {
        const int f = reduced_index[vi];
        if (!used[f]) {
          acc[f] = ComplexMatrix(blk.dim(), blk.dim());
          used[f] = true;
        }
        acc[f] += fi;
      }
    }
    for (int f = 0; f < nf; ++f)
      if (used[f] && acc[f].max_abs() > 0.0) rb.terms.emplace_back(f, std::move(acc[f]));
    out.push_back(std::move(rb));
  }
  return out;
}

inline ComplexMatrix eval_block(const ReducedBlock& blk, const std::vector<double>& z) {
  ComplexMatrix f = blk.f0;
  auto& fd = f.data();
  for (const auto& [vi, fi] : blk.terms) {
    const double w = z[vi];
    if (w == 0.0) continue;
    const auto& sd = fi.data();
    for (size_t t = 0; t < fd.size(); ++t) fd[t] += w * sd[t];
  }
  return f;
}

// Solve H d = -g for real symmetric positive definite H (stored in a
// ComplexMatrix with zero imaginary parts), with escalating ridge fallback.
inline std::vector<double> solve_newton(ComplexMatrix h, const std::vector<double>& g) {
  const int n = h.rows();
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(h(i, i).real()));
  if (scale == 0.0) scale = 1.0;
  ComplexMatrix l;
  double ridge = 0.0;
  for (int attempt = 0; attempt < 20; ++attempt) {
    ComplexMatrix hr = h;
    if (ridge > 0.0)
      for (int i = 0; i < n; ++i) hr(i, i) += ridge * scale;
    if (cholesky(hr, l)) break;
    ridge = ridge == 0.0 ? 1e-14 : ridge * 100.0;
    if (attempt == 19) throw std::runtime_error("LMI solver: Newton system not positive definite");
  }
  ComplexMatrix b(n, 1);
  for (int i = 0; i < n; ++i) b(i, 0) = -g[i];
  ComplexMatrix d = backward_solve(l, forward_solve(l, b));
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = d(i, 0).real();
  return out;
}

struct BarrierResult {
  std::vector<double> z;
  double mu_final = 0.0;
  std::vector<ComplexMatrix> duals;  // mu * F^{-1} per block
  int newton_iters = 0;
  bool hit_iter_cap = false;
  double dual_residual = 0.0;  // max_i |c_i + <F_i, Z>|
};

// Log-det barrier path following: maximize c.z subject to all blocks PSD,
// starting from a strictly feasible z0.
inline BarrierResult barrier_maximize(const std::vector<ReducedBlock>& blocks,
                                      const std::vector<double>& c, std::vector<double> z,
                                      const LMIOptions& opts) {
  const int n = static_cast<int>(z.size());
  double nu = 0.0;
  for (const auto& b : blocks) nu += b.dim();
  nu = std::max(nu, 1.0);

  auto factorize = [&](const std::vector<double>& zz, std::vector<ComplexMatrix>& ls) -> bool {
    ls.clear();
    for (const auto& b : blocks) {
      ComplexMatrix l;
      if (!cholesky(eval_block(b, zz), l)) return false;
      ls.push_back(std::move(l));
    }
    return true;
  };

  auto log_det_sum = [&](const std::vector<ComplexMatrix>& ls) {
    double s = 0.0;
    for (const auto& l : ls)
      for (int i = 0; i < l.rows(); ++i) s += std::log(l(i, i).real());
    return 2.0 * s;
  };

  std::vector<ComplexMatrix> ls;
  if (!factorize(z, ls)) throw std::runtime_error("barrier_maximize: start point not strictly feasible");

  // Triplet form of every term matrix. All terms arising here are sparse
  // (elementary Hermitian basis elements and reduction-map images), which
  // turns the Hessian entries tr(F^{-1} F_a F^{-1} F_b) into short sums over
  // entries of F^{-1}.
  struct Triplet {
    int r, c;
    cplx v;
  };
  std::vector<std::vector<std::vector<Triplet>>> trips(blocks.size());
  for (size_t bi = 0; bi < blocks.size(); ++bi) {
    trips[bi].resize(blocks[bi].terms.size());
    for (size_t ti = 0; ti < blocks[bi].terms.size(); ++ti) {
      const ComplexMatrix& fi = blocks[bi].terms[ti].second;
      for (int r = 0; r < fi.rows(); ++r)
        for (int cc = 0; cc < fi.cols(); ++cc)
          if (fi(r, cc) != cplx(0.0, 0.0)) trips[bi][ti].push_back({r, cc, fi(r, cc)});
    }
  }

  double cz0 = 0.0;
  for (int i = 0; i < n; ++i) cz0 += c[i] * z[i];
  double mu = std::max(1.0, std::abs(cz0) / nu);
  const double mu_end = std::max(opts.gap_tol / (2.0 * nu), 1e-12);
  const double theta = 0.8;

  BarrierResult res;
  bool done = false;
  while (!done) {
    const bool final_stage = mu <= mu_end * (1.0 + 1e-12);
    const double ctol = final_stage ? 1e-6 : 0.01;
    // Center at this mu.
    for (int center_it = 0;; ++center_it) {
      if (res.newton_iters >= opts.max_iters) {
        res.hit_iter_cap = true;
        break;
      }
      // Gradient and Hessian of phi = -c.z - mu * sum log det F(z).
      std::vector<double> g(n);
      for (int i = 0; i < n; ++i) g[i] = -c[i];
      ComplexMatrix h(n, n);
      for (size_t bi = 0; bi < blocks.size(); ++bi) {
        const auto& blk = blocks[bi];
        const ComplexMatrix finv = hpd_inverse(ls[bi]);
        const auto& bt = trips[bi];
        for (size_t a = 0; a < blk.terms.size(); ++a) {
          double ga = 0.0;
          for (const auto& t : bt[a]) ga += (t.v * finv(t.c, t.r)).real();
          g[blk.terms[a].first] -= mu * ga;
          for (size_t b = a; b < blk.terms.size(); ++b) {
            // tr(F^{-1} F_a F^{-1} F_b) over the triplet expansions.
            cplx s = 0.0;
            for (const auto& ta : bt[a])
              for (const auto& tb : bt[b]) s += ta.v * tb.v * finv(tb.c, ta.r) * finv(ta.c, tb.r);
            const int ia = blk.terms[a].first, ib = blk.terms[b].first;
            h(ia, ib) += mu * s.real();
            if (ia != ib) h(ib, ia) += mu * s.real();
          }
        }
      }

      std::vector<double> dz = solve_newton(h, g);
      double gd = 0.0;
      for (int i = 0; i < n; ++i) gd += g[i] * dz[i];
      const double decrement2 = -gd;  // = dz' H dz for the exact solve
      if (decrement2 <= ctol * ctol) break;
      ++res.newton_iters;

      double phi0 = 0.0;
      for (int i = 0; i < n; ++i) phi0 += c[i] * z[i];
      phi0 = -phi0 - mu * log_det_sum(ls);

      double alpha = 1.0;
      std::vector<ComplexMatrix> ls_try;
      std::vector<double> z_try(n);
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        for (int i = 0; i < n; ++i) z_try[i] = z[i] + alpha * dz[i];
        if (factorize(z_try, ls_try)) {
          double phi1 = 0.0;
          for (int i = 0; i < n; ++i) phi1 += c[i] * z_try[i];
          phi1 = -phi1 - mu * log_det_sum(ls_try);
          if (phi1 <= phi0 + 0.25 * alpha * gd) {
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!accepted) break;  // stalled; numerical floor reached
      z = z_try;
      ls = std::move(ls_try);
    }
    if (res.hit_iter_cap) break;
    if (final_stage)
      done = true;
    else
      mu = std::max(mu * theta, mu_end);
  }

  res.z = z;
  res.mu_final = mu;
  std::vector<double> resid(n, 0.0);
  for (int i = 0; i < n; ++i) resid[i] = c[i];
  for (size_t bi = 0; bi < blocks.size(); ++bi) {
    ComplexMatrix zdual = hpd_inverse(ls[bi]);
    zdual *= cplx(mu, 0.0);
    for (const auto& [vi, fi] : blocks[bi].terms) resid[vi] += real_inner(zdual, fi);
    res.duals.push_back(std::move(zdual));
  }
  for (int i = 0; i < n; ++i) res.dual_residual = std::max(res.dual_residual, std::abs(resid[i]));
  return res;
}

}  // namespace detail

// Max-margin phase-1: maximize t subject to F_j(x) >= t*I and t <= 1.
// Always strictly feasible, so it doubles as the infeasibility detector.
inline LMISolution phase1_feasible(const LMIProblem& problem, const LMIOptions& opts = {}) {
  detail::EqualityReduction red = detail::reduce_equalities(problem);
  LMISolution sol;
  if (!red.consistent) {
    sol.status = LMIStatus::infeasible;
    return sol;
  }
  std::vector<detail::ReducedBlock> blocks = detail::reduce_blocks(problem, red);
  const int nf = static_cast<int>(red.free_vars.size());
  const int tvar = nf;

  std::vector<detail::ReducedBlock> ext = blocks;
  for (auto& b : ext) {
    ComplexMatrix mi = ComplexMatrix::identity(b.dim());
    mi *= cplx(-1.0, 0.0);
    b.terms.emplace_back(tvar, std::move(mi));
  }
  {
    detail::ReducedBlock cap;  // 1 - t >= 0 keeps the margin problem bounded
    cap.f0 = ComplexMatrix(1, 1);
    cap.f0(0, 0) = 1.0;
    ComplexMatrix mt(1, 1);
    mt(0, 0) = -1.0;
    cap.terms.emplace_back(tvar, std::move(mt));
    ext.push_back(std::move(cap));
  }
  for (int f = 0; f < nf; ++f) {
    for (double sgn : {1.0, -1.0}) {
      detail::ReducedBlock box;  // phase1_box -+ z_f >= 0
      box.f0 = ComplexMatrix(1, 1);
      box.f0(0, 0) = opts.phase1_box;
      ComplexMatrix mt(1, 1);
      mt(0, 0) = -sgn;
      box.terms.emplace_back(f, std::move(mt));
      ext.push_back(std::move(box));
    }
  }

  std::vector<double> z0(nf + 1, 0.0);
  double tmin = 1.0;
  for (const auto& b : blocks) {
    EigResult e = hermitian_eig(detail::eval_block(b, z0));
    tmin = std::min(tmin, e.values.front());
  }
  z0[tvar] = tmin - 1.0;

  std::vector<double> c(nf + 1, 0.0);
  c[tvar] = 1.0;
  detail::BarrierResult br = detail::barrier_maximize(ext, c, z0, opts);

  sol.phase1_margin = br.z[tvar];
  std::vector<double> z(br.z.begin(), br.z.begin() + nf);
  sol.x_star = detail::expand_solution(red, z);
  sol.newton_iters = br.newton_iters;
  sol.dual_certificate.assign(br.duals.begin(), br.duals.begin() + blocks.size());
  double nu = 1.0;
  for (const auto& b : ext) nu += b.dim();
  sol.duality_gap = br.mu_final * nu + br.dual_residual;
  if (br.hit_iter_cap) {
    sol.status = LMIStatus::max_iters;
  } else if (sol.phase1_margin > opts.feas_tol) {
    sol.status = LMIStatus::feasible;
  } else if (sol.phase1_margin < -opts.feas_tol) {
    sol.status = LMIStatus::infeasible;
  } else {
    sol.status = LMIStatus::marginal;
  }
  sol.objective_value = sol.phase1_margin;
  return sol;
}

inline LMISolution solve(const LMIProblem& problem, const LMIOptions& opts = {}) {
  LMISolution p1 = phase1_feasible(problem, opts);
  if (problem.sense == LMISense::feasibility) return p1;
  if (p1.status != LMIStatus::feasible) return p1;

  detail::EqualityReduction red = detail::reduce_equalities(problem);
  std::vector<detail::ReducedBlock> blocks = detail::reduce_blocks(problem, red);
  const int nf = static_cast<int>(red.free_vars.size());

  if (static_cast<int>(problem.objective.size()) != problem.num_vars)
    throw std::invalid_argument("solve: objective length mismatch");
  // Reduced objective c'. Offset comes from the particular solution and
  // pivot substitutions.
  std::vector<double> c(nf, 0.0);
  double offset = 0.0;
  for (int i = 0; i < problem.num_vars; ++i) offset += problem.objective[i] * red.x0[i];
  std::vector<int> pivot_row(problem.num_vars, -1);
  for (size_t r = 0; r < red.pivots.size(); ++r) pivot_row[red.pivots[r]] = static_cast<int>(r);
  for (int f = 0; f < nf; ++f) c[f] = problem.objective[red.free_vars[f]];
  for (size_t r = 0; r < red.pivots.size(); ++r) {
    const double cp = problem.objective[red.pivots[r]];
    if (cp == 0.0) continue;
    for (int f = 0; f < nf; ++f) c[f] -= cp * red.pivot_coef[r][f];
  }

  // Strictly feasible start from phase 1.
  std::vector<double> z0(nf);
  for (int f = 0; f < nf; ++f) z0[f] = p1.x_star[red.free_vars[f]];

  detail::BarrierResult br = detail::barrier_maximize(blocks, c, z0, opts);

  LMISolution sol;
  sol.x_star = detail::expand_solution(red, br.z);
  double cz = offset;
  for (int f = 0; f < nf; ++f) cz += c[f] * br.z[f];
  sol.objective_value = cz;
  sol.dual_certificate = br.duals;
  double nu = 0.0;
  for (const auto& b : blocks) nu += b.dim();
  sol.duality_gap = br.mu_final * std::max(nu, 1.0) + br.dual_residual;
  sol.newton_iters = p1.newton_iters + br.newton_iters;
  sol.phase1_margin = p1.phase1_margin;
  sol.status = br.hit_iter_cap ? LMIStatus::max_iters : LMIStatus::optimal;
  return sol;
}

}  // namespace snw
