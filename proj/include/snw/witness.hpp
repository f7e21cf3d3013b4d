#pragma once

#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "snw/quantum.hpp"

namespace snw {

// Index quadruple (i,j,k,l) of a witness coefficient W_{ijkl} |ij><kl|.
using IndexQuad = std::array<int, 4>;

// Set of experimentally accessible coefficient indices, closed under
// Hermitian conjugation.
class CoefficientMask {
 public:
  CoefficientMask() : d_(0) {}
  CoefficientMask(int d, std::set<IndexQuad> indices) : d_(d), indices_(std::move(indices)) {
    for (const auto& q : indices_) {
      for (int v : q)
        if (v < 0 || v >= d) throw std::invalid_argument("CoefficientMask: index out of range");
      if (!indices_.count(IndexQuad{q[2], q[3], q[0], q[1]}))
        throw std::invalid_argument("CoefficientMask: not closed under conjugation");
    }
  }

  int d() const { return d_; }
  const std::set<IndexQuad>& indices() const { return indices_; }
  bool contains(const IndexQuad& q) const { return indices_.count(q) > 0; }
  size_t size() const { return indices_.size(); }

 private:
  int d_;
  std::set<IndexQuad> indices_;
};

// The O(d)-sized mask used throughout: diagonal-to-diagonal couplings with
// |00> plus the local diagonals.
inline CoefficientMask linear_mask(int d) {
  if (d < 2) throw std::invalid_argument("linear_mask: d >= 2 required");
  std::set<IndexQuad> m;
  for (int j = 0; j < d; ++j) m.insert({0, 0, j, j});
  for (int j = 1; j < d; ++j) {
    m.insert({j, j, 0, 0});
    m.insert({0, j, 0, j});
    m.insert({j, 0, j, 0});
    m.insert({j, j, j, j});
  }
  return CoefficientMask(d, std::move(m));
}

inline CoefficientMask full_mask(int d) {
  std::set<IndexQuad> m;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) m.insert({i, j, k, l});
  return CoefficientMask(d, std::move(m));
}

// 1_{d^2} - (d/k) |phi+><phi+|: negative on states with Schmidt number > k.
inline HermitianOperator standard_witness(int d, int k) {
  if (k < 1 || k > d) throw std::invalid_argument("standard_witness: k out of range");
  HermitianOperator w = HermitianOperator::identity(d * d);
  w -= (static_cast<double>(d) / k) * projector(phi_plus(d));
  return w;
}

// R_p(X) = Tr(X) 1_d - p X.
inline HermitianOperator reduction_map_apply(const HermitianOperator& x, double p) {
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("reduction_map_apply: p in (0,1] required");
  HermitianOperator r = HermitianOperator::identity(x.dim());
  r *= x.trace();
  r -= p * x;
  return r;
}

// (1 (x) R_p)(X) = Tr_B(X) (x) 1_d - p X for X on the d x d bipartite space.
inline HermitianOperator one_tensor_R(const HermitianOperator& op, double p) {
  const int dsq = op.dim();
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dsq))));
  if (d * d != dsq) throw std::invalid_argument("one_tensor_R: dim is not a perfect square");
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("one_tensor_R: p in (0,1] required");
  const HermitianOperator marg = partial_trace_B(op, d);
  ComplexMatrix r = kron(marg.mat(), ComplexMatrix::identity(d));
  r -= op.mat() * cplx(p, 0.0);
  return HermitianOperator(r);
}

// The sparse witness candidate supported on linear_mask(d); detects |phi+>
// at value -1.
inline HermitianOperator build_Wtilde(int d) {
  if (d < 3) throw std::invalid_argument("build_Wtilde: d >= 3 required");
  ComplexMatrix w(d * d, d * d);
  const double c = 1.0 - 2.0 / d;
  auto idx = [d](int i, int j) { return i * d + j; };
  w(idx(0, 0), idx(0, 0)) = c;
  for (int i = 1; i < d; ++i) {
    if (d == 3) {
      w(idx(0, i), idx(0, i)) = 1.0;
      w(idx(i, 0), idx(i, 0)) = 1.0;
    }
    w(idx(0, 0), idx(i, i)) = -2.0 / d;
    w(idx(i, i), idx(0, 0)) = -2.0 / d;
    w(idx(i, i), idx(i, i)) = -c;
  }
  return HermitianOperator(w);
}

// |C|_k = sqrt((d^2 - 4d + 4k) / d^2), the conjectured optimal threshold.
inline double ck_threshold(int d, int k) {
  if (d < 3 || k < 1 || k > d) throw std::invalid_argument("ck_threshold: need d >= 3, 1 <= k <= d");
  const double radicand = static_cast<double>(d) * d - 4.0 * d + 4.0 * k;
  if (radicand < 0.0) throw std::runtime_error("ck_threshold: negative radicand");
  return std::sqrt(radicand) / d;
}

// alpha |00> + sqrt((1-alpha^2)/(k-1)) sum_{i=1}^{k-1} |ii>; the family the
// numerical minimization lands on. k = 1 degenerates to |00>.
inline PureState family_state(double alpha, int k, int d) {
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("family_state: alpha in [0,1]");
  if (k < 1 || k > d) throw std::invalid_argument("family_state: k out of range");
  std::vector<cplx> a(static_cast<size_t>(d) * d, 0.0);
  if (k == 1) {
    a[0] = 1.0;
  } else {
    a[0] = alpha;
    const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha) / (k - 1));
    for (int i = 1; i < k; ++i) a[static_cast<size_t>(i) * d + i] = beta;
  }
  return PureState::from_amplitudes(d, std::move(a));
}

struct FamilyMinimum {
  double alpha_star;
  double value;
};

// Closed-form minimizer of <phi_k(alpha)| Wtilde |phi_k(alpha)> for k >= 2:
// the overlap is A cos(2 theta) - B sin(2 theta) with alpha = cos(theta).
inline FamilyMinimum family_min_overlap(int k, int d) {
  if (d < 3) throw std::invalid_argument("family_min_overlap: d >= 3 required");
  if (k < 2 || k > d)
    throw std::invalid_argument("family_min_overlap: k >= 2 required (k = 1 has no family minimum)");
  const double a = (d - 2.0) / d;
  const double b = 2.0 * std::sqrt(static_cast<double>(k - 1)) / d;
  const double r = std::sqrt(a * a + b * b);
  // Minimum -r is attained at cos(2 theta) = -A/r, sin(2 theta) = B/r,
  // with theta in [0, pi/2] so that alpha = cos(theta) lies in [0, 1].
  const double two_theta = std::atan2(b / r, -a / r);
  const double alpha = std::min(1.0, std::max(0.0, std::cos(0.5 * two_theta)));
  return FamilyMinimum{alpha, -r};
}

// Candidate witness: sparse operator + the achieved signed threshold C.
struct WitnessCandidate {
  int d = 0;
  int k_target = 0;
  HermitianOperator op;
  CoefficientMask mask;
  double threshold_C = 0.0;  // signed; published tables quote the magnitude |C|
};

// W_k = (1/(1+C)) W - (C/(1+C)) 1.
inline HermitianOperator shift_to_witness(const HermitianOperator& w, double threshold_C) {
  if (threshold_C <= -1.0 + 1e-12 || threshold_C > 1.0)
    throw std::invalid_argument("shift_to_witness: C must lie in (-1, 1]");
  HermitianOperator out = w;
  out *= 1.0 / (1.0 + threshold_C);
  HermitianOperator id = HermitianOperator::identity(w.dim());
  id *= threshold_C / (1.0 + threshold_C);
  out -= id;
  return out;
}

inline HermitianOperator shift_to_witness(const WitnessCandidate& cand) {
  return shift_to_witness(cand.op, cand.threshold_C);
}

}  // namespace snw
