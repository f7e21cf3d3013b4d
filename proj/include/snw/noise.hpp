#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "snw/quantum.hpp"
#include "snw/witness.hpp"

namespace snw {

// rho(eps) = (1 - eps) |phi+><phi+| + eps 1/d^2.
inline DensityMatrix noisy_state(int d, double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("noisy_state: eps in [0,1]");
  ComplexMatrix m = projector(phi_plus(d)).mat() * cplx(1.0 - epsilon, 0.0);
  m += ComplexMatrix::identity(d * d) * cplx(epsilon / (d * d), 0.0);
  return DensityMatrix::from_operator(d, HermitianOperator(m));
}

struct CriticalEpsilon {
  double epsilon = 1.0;  // clamped into [0, 1]
  bool crossed = false;  // true iff the witness value crosses the threshold
  double value_at_0 = 0.0, value_at_1 = 0.0;
};

// Tr(W rho(eps)) is affine in eps; the detection boundary is its root against
// the threshold.
inline CriticalEpsilon critical_epsilon(const HermitianOperator& w, double threshold, int d) {
  if (w.dim() != d * d) throw std::invalid_argument("critical_epsilon: dim mismatch");
  CriticalEpsilon out;
  out.value_at_0 = expectation(w, DensityMatrix::from_pure(phi_plus(d)));
  out.value_at_1 = w.trace() / (d * d);
  const double denom = out.value_at_1 - out.value_at_0;
  if (std::abs(denom) < 1e-300) {
    out.crossed = false;
    out.epsilon = out.value_at_0 < threshold ? 1.0 : 0.0;
    return out;
  }
  const double eps = (threshold - out.value_at_0) / denom;
  out.crossed = eps > 0.0 && eps < 1.0 && out.value_at_0 < threshold;
  out.epsilon = std::min(1.0, std::max(0.0, eps));
  return out;
}

// Closed forms for the isotropic-noise boundary.
inline double critical_epsilon_standard(int d, int k) {
  if (k < 1 || k > d) throw std::invalid_argument("critical_epsilon_standard: k out of range");
  return static_cast<double>(d) * (d - k) / (static_cast<double>(d) * d - 1.0);
}

inline double critical_epsilon_wtilde(int d, double abs_c) {
  if (d < 4) throw std::invalid_argument("critical_epsilon_wtilde: d >= 4 required");
  const double v1 = -std::pow(d - 2.0, 2) / std::pow(static_cast<double>(d), 3);
  return (-abs_c - (-1.0)) / (v1 - (-1.0));
}

struct NoiseCurvePoint {
  double epsilon;
  double value;
  bool detects;  // value < threshold
};

inline std::vector<NoiseCurvePoint> sweep(const HermitianOperator& w, double threshold, int d,
                                          int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("sweep: grid_points >= 2 required");
  const double v0 = expectation(w, DensityMatrix::from_pure(phi_plus(d)));
  const double v1 = w.trace() / (d * d);
  std::vector<NoiseCurvePoint> pts;
  pts.reserve(grid_points);
  for (int g = 0; g < grid_points; ++g) {
    const double eps = static_cast<double>(g) / (grid_points - 1);
    const double v = (1.0 - eps) * v0 + eps * v1;
    pts.push_back({eps, v, v < threshold});
  }
  return pts;
}

struct NoiseTableRow {
  int d, k;
  double epsilon;
  double value_standard, value_wtilde;
  bool detect_standard, detect_wtilde;
  std::string threshold_mode;
};

// Per-k robustness comparison: the standard witness against W-tilde with its
// Schmidt-number-(k+1) threshold. `wtilde_thresholds[k-1]` is the signed
// threshold C for each k in 1..d-1; `mode` labels how it was obtained.
inline std::vector<NoiseTableRow> noise_table(int d, int grid_points,
                                              const std::vector<double>& wtilde_thresholds,
                                              const std::string& mode) {
  if (static_cast<int>(wtilde_thresholds.size()) != d - 1)
    throw std::invalid_argument("noise_table: need one W-tilde threshold per k in 1..d-1");
  const HermitianOperator wt = build_Wtilde(d);
  std::vector<NoiseTableRow> rows;
  for (int k = 1; k < d; ++k) {
    const HermitianOperator ws = standard_witness(d, k);
    const auto curve_s = sweep(ws, 0.0, d, grid_points);
    const auto curve_t = sweep(wt, wtilde_thresholds[k - 1], d, grid_points);
    for (int g = 0; g < grid_points; ++g)
      rows.push_back({d, k, curve_s[g].epsilon, curve_s[g].value, curve_t[g].value,
                      curve_s[g].detects, curve_t[g].detects, mode});
  }
  return rows;
}

inline std::string noise_table_to_csv(const std::vector<NoiseTableRow>& rows) {
  std::ostringstream os;
  os << "d,k,epsilon,value_standard,value_wtilde,detect_standard,detect_wtilde,threshold_mode\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.d << ',' << r.k << ',' << r.epsilon << ',' << r.value_standard << ','
       << r.value_wtilde << ',' << (r.detect_standard ? 1 : 0) << ',' << (r.detect_wtilde ? 1 : 0)
       << ',' << r.threshold_mode << '\n';
  return os.str();
}

}  // namespace snw
