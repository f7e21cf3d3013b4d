#pragma once

#include <cmath>
#include <complex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "snw/quantum.hpp"

namespace snw {

// One quantum-pulse-gate setting: mode indices plus beam-splitter amplitudes
// and phases for the two parties.
struct MeasurementSetting {
  int m = 0, n = 0, p = 0, q = 0;
  double c_a = 1.0, c_b = 1.0;
  double phi_a = 0.0, phi_b = 0.0;
  std::string purpose;
};

// Amplitudes {0, 1/sqrt2, 1} and phases {0, pi/2} are the set quoted for the
// hardware; the reconstruction identities additionally use pi and 3pi/2.
inline bool within_quoted_hardware(const MeasurementSetting& s) {
  auto amp_ok = [](double c) {
    return std::abs(c) < 1e-12 || std::abs(c - 1.0) < 1e-12 || std::abs(c - M_SQRT1_2) < 1e-12;
  };
  auto phase_ok = [](double p) { return std::abs(p) < 1e-12 || std::abs(p - M_PI_2) < 1e-12; };
  return amp_ok(s.c_a) && amp_ok(s.c_b) && phase_ok(s.phi_a) && phase_ok(s.phi_b);
}

// The linear functional A of the pulse-gate measurement, evaluated exactly on
// the density-matrix elements C_{ijkl} = <ij|rho|kl>.
inline double simulate_A(const DensityMatrix& rho, const MeasurementSetting& s) {
  const int d = rho.local_dim;
  for (int idx : {s.m, s.n, s.p, s.q})
    if (idx < 0 || idx >= d) throw std::invalid_argument("simulate_A: mode index out of range");
  auto C = [&](int i, int j, int k, int l) -> cplx { return rho.op(i * d + j, k * d + l); };

  const double ca = s.c_a, cb = s.c_b;
  const double sa = std::sqrt(std::max(0.0, 1.0 - ca * ca));
  const double sb = std::sqrt(std::max(0.0, 1.0 - cb * cb));
  const cplx ea = std::polar(1.0, s.phi_a);
  const cplx eb = std::polar(1.0, s.phi_b);

  double v = ca * ca * cb * cb * C(s.m, s.p, s.m, s.p).real() +
             sa * sa * sb * sb * C(s.n, s.q, s.n, s.q).real() +
             ca * ca * sb * sb * C(s.m, s.q, s.m, s.q).real() +
             sa * sa * cb * cb * C(s.n, s.p, s.n, s.p).real();
  cplx cross = ea * (ca * sa) * (cb * cb * C(s.m, s.p, s.n, s.p) + sb * sb * C(s.m, s.q, s.n, s.q)) +
               eb * (cb * sb) * (ca * ca * C(s.m, s.p, s.m, s.q) + sa * sa * C(s.n, s.p, s.n, s.q)) +
               (ca * sa * cb * sb) *
                   (ea * eb * C(s.m, s.p, s.n, s.q) + ea * std::conj(eb) * C(s.m, s.q, s.n, s.p));
  return v + 2.0 * cross.real();
}

// C_{iijj} from the printed eight-setting combination at c = 1/sqrt2.
inline cplx reconstruct_Ciijj(const DensityMatrix& rho, int i, int j) {
  if (i == j)
    throw std::invalid_argument("reconstruct_Ciijj: i == j (use a diagonal setting directly)");
  auto A = [&](int m, int n, int p, int q, double pa, double pb) {
    return simulate_A(rho, MeasurementSetting{m, n, p, q, M_SQRT1_2, M_SQRT1_2, pa, pb, ""});
  };
  const double re = 0.5 * (A(i, j, j, i, 0, 0) + A(i, j, j, i, M_PI, M_PI) -
                           A(i, j, i, j, M_PI_2, M_PI_2) -
                           A(i, j, i, j, 3 * M_PI_2, 3 * M_PI_2));
  const double im = 0.5 * (-A(i, j, j, i, M_PI_2, 0) - A(i, j, j, i, 3 * M_PI_2, M_PI) +
                           A(i, j, i, j, M_PI, M_PI_2) + A(i, j, i, j, 0, 3 * M_PI_2));
  return cplx(re, im);
}

enum class PlanType { standard, forged };

struct MeasurementPlan {
  PlanType type = PlanType::standard;
  int d = 0;
  std::vector<MeasurementSetting> settings;
  // Elements the plan can deliver: C_{ii ii} diagonals and Re C_{iijj} pairs.
  std::vector<int> diagonal_modes;
  std::vector<std::pair<int, int>> real_part_pairs;  // (i, j), i < j

  // The printed counting convention: no cross-element setting reuse.
  int quoted_setting_count() const { return static_cast<int>(settings.size()); }

  int distinct_setting_count() const {
    std::set<std::tuple<int, int, int, int, double, double, double, double>> u;
    for (const auto& s : settings) u.insert({s.m, s.n, s.p, s.q, s.c_a, s.c_b, s.phi_a, s.phi_b});
    return static_cast<int>(u.size());
  }
};

namespace detail {

inline void add_diagonal_setting(MeasurementPlan& plan, int i) {
  MeasurementSetting s;
  s.m = s.p = i;
  s.n = s.q = i;
  s.c_a = s.c_b = 1.0;
  s.purpose = "C_" + std::to_string(i) + std::to_string(i) + std::to_string(i) + std::to_string(i);
  plan.settings.push_back(std::move(s));
  plan.diagonal_modes.push_back(i);
}

inline void add_real_part_settings(MeasurementPlan& plan, int i, int j) {
  const std::string tag = "Re C_" + std::to_string(i) + std::to_string(i) + std::to_string(j) +
                          std::to_string(j);
  auto add = [&](int m, int n, int p, int q, double pa, double pb) {
    plan.settings.push_back(MeasurementSetting{m, n, p, q, M_SQRT1_2, M_SQRT1_2, pa, pb, tag});
  };
  add(i, j, j, i, 0, 0);
  add(i, j, j, i, M_PI, M_PI);
  add(i, j, i, j, M_PI_2, M_PI_2);
  add(i, j, i, j, 3 * M_PI_2, 3 * M_PI_2);
  plan.real_part_pairs.emplace_back(i, j);
}

}  // namespace detail

// d diagonals + 4 settings per Re C_{iijj}, i < j: 2d^2 - d settings.
inline MeasurementPlan plan_standard(int d) {
  if (d < 2) throw std::invalid_argument("plan_standard: d >= 2 required");
  MeasurementPlan plan;
  plan.type = PlanType::standard;
  plan.d = d;
  for (int i = 0; i < d; ++i) detail::add_diagonal_setting(plan, i);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) detail::add_real_part_settings(plan, i, j);
  return plan;
}

// d diagonals + 4 settings per Re C_{00ii}, i >= 1: 5d - 4 settings.
inline MeasurementPlan plan_forged(int d) {
  if (d < 4)
    throw std::invalid_argument(
        "plan_forged: d >= 4 required; for d = 3 the witness carries extra diagonal terms and the "
        "5d-4 counting does not apply");
  MeasurementPlan plan;
  plan.type = PlanType::forged;
  plan.d = d;
  for (int i = 0; i < d; ++i) detail::add_diagonal_setting(plan, i);
  for (int i = 1; i < d; ++i) detail::add_real_part_settings(plan, 0, i);
  return plan;
}

inline std::string plan_to_csv(const MeasurementPlan& plan) {
  std::ostringstream os;
  os << "m,n,p,q,cA,cB,phiA,phiB,purpose\n";
  os.precision(17);
  for (const auto& s : plan.settings)
    os << s.m << ',' << s.n << ',' << s.p << ',' << s.q << ',' << s.c_a << ',' << s.c_b << ','
       << s.phi_a << ',' << s.phi_b << ',' << s.purpose << '\n';
  return os.str();
}

// Tr(W rho) from simulated pulse-gate measurements only. The identity
// component of W is handled through Tr(rho) = 1, as in the fidelity
// evaluation; everything else must be covered by the plan.
inline double evaluate_from_measurements(const DensityMatrix& rho, const HermitianOperator& w,
                                         const MeasurementPlan& plan) {
  const int d = rho.local_dim;
  if (w.dim() != d * d) throw std::invalid_argument("evaluate_from_measurements: dim mismatch");
  if (plan.d != d) throw std::invalid_argument("evaluate_from_measurements: plan dimension mismatch");

  std::set<int> diag(plan.diagonal_modes.begin(), plan.diagonal_modes.end());
  std::set<std::pair<int, int>> pairs;
  for (auto [i, j] : plan.real_part_pairs) pairs.insert({std::min(i, j), std::max(i, j)});

  // Identify the uniform diagonal offset lambda on entries the plan cannot
  // measure directly.
  bool have_lambda = false;
  double lambda = 0.0;
  std::vector<std::string> missing;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const int r = i * d + j;
      const double v = w(r, r).real();
      const bool covered = (i == j) && diag.count(i);
      if (covered) continue;
      if (!have_lambda) {
        lambda = v;
        have_lambda = true;
      } else if (std::abs(v - lambda) > 1e-12) {
        missing.push_back("(" + std::to_string(i) + "," + std::to_string(j) + "," +
                          std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }

  double total = have_lambda ? lambda : 0.0;  // lambda * Tr(rho)

  for (int i = 0; i < d; ++i) {
    const int r = i * d + i;
    const double coeff = w(r, r).real() - (have_lambda ? lambda : 0.0);
    if (coeff == 0.0) continue;
    if (!diag.count(i)) {
      missing.push_back("(" + std::to_string(i) + "," + std::to_string(i) + "," +
                        std::to_string(i) + "," + std::to_string(i) + ")");
      continue;
    }
    MeasurementSetting s;
    s.m = s.p = i;
    s.n = s.q = i;
    total += coeff * simulate_A(rho, s);
  }

  for (int r = 0; r < d * d; ++r)
    for (int c = r + 1; c < d * d; ++c) {
      const cplx wc = w(r, c);
      if (std::abs(wc) == 0.0) continue;
      const int i1 = r / d, j1 = r % d, i2 = c / d, j2 = c % d;
      const bool diagonal_pair = (i1 == j1) && (i2 == j2) && i1 != i2;
      const int lo = std::min(i1, i2), hi = std::max(i1, i2);
      if (!diagonal_pair || !pairs.count({lo, hi})) {
        missing.push_back("(" + std::to_string(i1) + "," + std::to_string(j1) + "," +
                          std::to_string(i2) + "," + std::to_string(j2) + ")");
        continue;
      }
      // Element C_{i1 i1 i2 i2}; reconstruct with the measured orientation.
      const cplx celem = reconstruct_Ciijj(rho, lo, hi);
      const cplx c_rc = (i1 == lo) ? celem : std::conj(celem);
      // W(r,c) C(c,r) + conj: 2 Re[W(r,c) conj(C(r,c))].
      total += 2.0 * (wc * std::conj(c_rc)).real();
    }

  if (!missing.empty()) {
    std::string msg = "evaluate_from_measurements: support not covered by plan:";
    for (const auto& s : missing) msg += " " + s;
    throw std::invalid_argument(msg);
  }
  return total;
}

}  // namespace snw
