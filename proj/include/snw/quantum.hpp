#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "snw/linalg.hpp"

namespace snw {

// Hermitian operator on a Hilbert space of dimension dim(). Construction
// symmetrizes the input so the stored matrix is exactly Hermitian.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  explicit HermitianOperator(const ComplexMatrix& m, double herm_tol = 1e-9) {
    if (m.rows() != m.cols()) throw std::invalid_argument("HermitianOperator: non-square matrix");
    if (!m.all_finite()) throw std::invalid_argument("HermitianOperator: non-finite entries");
    const double scale = std::max(1.0, m.max_abs());
    mat_ = m;
    for (int i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, i).imag()) > herm_tol * scale)
        throw std::invalid_argument("HermitianOperator: non-real diagonal");
      mat_(i, i) = cplx(m(i, i).real(), 0.0);
      for (int j = i + 1; j < m.cols(); ++j) {
        if (std::abs(m(i, j) - std::conj(m(j, i))) > herm_tol * scale)
          throw std::invalid_argument("HermitianOperator: input not Hermitian");
        const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
        mat_(i, j) = v;
        mat_(j, i) = std::conj(v);
      }
    }
  }

  static HermitianOperator zero(int dim) { return HermitianOperator(ComplexMatrix(dim, dim)); }
  static HermitianOperator identity(int dim) { return HermitianOperator(ComplexMatrix::identity(dim)); }

  int dim() const { return mat_.rows(); }
  const ComplexMatrix& mat() const { return mat_; }
  const cplx& operator()(int i, int j) const { return mat_(i, j); }

  void set(int i, int j, cplx v) {
    if (i == j) {
      mat_(i, i) = cplx(v.real(), 0.0);
    } else {
      mat_(i, j) = v;
      mat_(j, i) = std::conj(v);
    }
  }

  HermitianOperator& operator+=(const HermitianOperator& o) {
    mat_ += o.mat_;
    return *this;
  }
  HermitianOperator& operator-=(const HermitianOperator& o) {
    mat_ -= o.mat_;
    return *this;
  }
  HermitianOperator& operator*=(double s) {
    mat_ *= cplx(s, 0.0);
    return *this;
  }
  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }

  double trace() const { return mat_.trace().real(); }
  double min_eigenvalue() const { return hermitian_eig(mat_).values.front(); }
  double max_eigenvalue() const { return hermitian_eig(mat_).values.back(); }

 private:
  ComplexMatrix mat_;
};

// Normalized pure state of a bipartite d x d system (amplitudes of length d^2,
// index (i,j) -> i*d + j).
struct PureState {
  int local_dim = 0;
  std::vector<cplx> amp;

  static PureState from_amplitudes(int d, std::vector<cplx> a) {
    if (static_cast<int>(a.size()) != d * d)
      throw std::invalid_argument("PureState: amplitude length must be d^2");
    double n2 = 0.0;
    for (const auto& v : a) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::invalid_argument("PureState: non-finite amplitude");
      n2 += std::norm(v);
    }
    const double n = std::sqrt(n2);
    if (n < 1e-300) throw std::invalid_argument("PureState: zero vector");
    for (auto& v : a) v /= n;
    return PureState{d, std::move(a)};
  }

  double norm() const {
    double s = 0.0;
    for (const auto& v : amp) s += std::norm(v);
    return std::sqrt(s);
  }
};

inline PureState phi_plus(int d) {
  std::vector<cplx> a(static_cast<size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) a[static_cast<size_t>(i) * d + i] = 1.0;
  return PureState::from_amplitudes(d, std::move(a));
}

inline PureState basis_state(int d, int i, int j) {
  std::vector<cplx> a(static_cast<size_t>(d) * d, 0.0);
  a[static_cast<size_t>(i) * d + j] = 1.0;
  return PureState::from_amplitudes(d, std::move(a));
}

inline HermitianOperator projector(const PureState& psi) {
  const int n = static_cast<int>(psi.amp.size());
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = psi.amp[i] * std::conj(psi.amp[j]);
  return HermitianOperator(m);
}

struct DensityMatrix {
  int local_dim = 0;
  HermitianOperator op;

  static DensityMatrix from_operator(int d, const HermitianOperator& o,
                                     double trace_tol = 1e-10, double psd_tol = 1e-10) {
    if (o.dim() != d * d) throw std::invalid_argument("DensityMatrix: operator dim must be d^2");
    if (std::abs(o.trace() - 1.0) > trace_tol)
      throw std::invalid_argument("DensityMatrix: trace not 1");
    if (o.min_eigenvalue() < -psd_tol)
      throw std::invalid_argument("DensityMatrix: not positive semidefinite");
    return DensityMatrix{d, o};
  }

  static DensityMatrix from_pure(const PureState& psi) {
    return DensityMatrix{psi.local_dim, projector(psi)};
  }
};

inline double expectation(const HermitianOperator& op, const PureState& psi) {
  if (op.dim() != static_cast<int>(psi.amp.size()))
    throw std::invalid_argument("expectation: dimension mismatch");
  cplx v = 0.0;
  for (int i = 0; i < op.dim(); ++i) {
    cplx row = 0.0;
    for (int j = 0; j < op.dim(); ++j) row += op(i, j) * psi.amp[j];
    v += std::conj(psi.amp[i]) * row;
  }
  if (std::abs(v.imag()) > 1e-9)
    throw std::runtime_error("expectation: imaginary residue " + std::to_string(v.imag()));
  return v.real();
}

inline double expectation(const HermitianOperator& op, const DensityMatrix& rho) {
  if (op.dim() != rho.op.dim()) throw std::invalid_argument("expectation: dimension mismatch");
  cplx v = 0.0;
  for (int i = 0; i < op.dim(); ++i)
    for (int j = 0; j < op.dim(); ++j) v += op(i, j) * rho.op(j, i);
  if (std::abs(v.imag()) > 1e-9)
    throw std::runtime_error("expectation: imaginary residue " + std::to_string(v.imag()));
  return v.real();
}

// Tr_B over the second factor: (Tr_B op)_{ik} = sum_j op_{ij,kj}.
inline HermitianOperator partial_trace_B(const HermitianOperator& op, int d) {
  if (op.dim() != d * d) throw std::invalid_argument("partial_trace_B: dim is not d^2");
  ComplexMatrix r(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      cplx s = 0.0;
      for (int j = 0; j < d; ++j) s += op(i * d + j, k * d + j);
      r(i, k) = s;
    }
  return HermitianOperator(r);
}

struct SchmidtDecomposition {
  std::vector<double> coefficients;   // nonincreasing, all retained singular values
  ComplexMatrix basis_a;              // columns
  ComplexMatrix basis_b;              // columns
  double rank_tol = 1e-9;

  int rank() const {
    int r = 0;
    for (double c : coefficients)
      if (c > rank_tol) ++r;
    return r;
  }
};

inline SchmidtDecomposition schmidt_decompose(const PureState& psi, double rank_tol = 1e-9) {
  const int d = psi.local_dim;
  ComplexMatrix c(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) c(i, j) = psi.amp[static_cast<size_t>(i) * d + j];
  SvdResult s = svd(c);
  SchmidtDecomposition dec;
  dec.rank_tol = rank_tol;
  dec.coefficients = s.sigma;
  dec.basis_a = s.u;
  // |psi> = sum_k sigma_k |u_k> (x) |conj(v_k)>.
  dec.basis_b = ComplexMatrix(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) dec.basis_b(i, k) = std::conj(s.v(i, k));
  return dec;
}

inline PureState random_pure_state(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> a(static_cast<size_t>(d) * d);
  for (auto& v : a) v = cplx(g(rng), g(rng));
  return PureState::from_amplitudes(d, std::move(a));
}

inline PureState random_pure_state(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_pure_state(d, rng);
}

inline DensityMatrix random_density(int d, std::mt19937_64& rng, int num_mix = 0) {
  if (num_mix <= 0) num_mix = d * d;
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::vector<double> w(num_mix);
  double tot = 0.0;
  for (auto& x : w) {
    x = gamma(rng);
    tot += x;
  }
  ComplexMatrix m(d * d, d * d);
  for (int s = 0; s < num_mix; ++s) {
    const PureState psi = random_pure_state(d, rng);
    const double p = w[s] / tot;
    for (int i = 0; i < d * d; ++i)
      for (int j = 0; j < d * d; ++j) m(i, j) += p * psi.amp[i] * std::conj(psi.amp[j]);
  }
  return DensityMatrix::from_operator(d, HermitianOperator(m));
}

inline DensityMatrix random_density(int d, std::uint64_t seed, int num_mix) {
  std::mt19937_64 rng(seed);
  return random_density(d, rng, num_mix);
}

inline DensityMatrix random_density(int d, std::uint64_t seed) {
  return random_density(d, seed, 0);
}

// Random pure state of Schmidt rank <= k, built as sum_i a_i (x) b_i.
inline PureState random_schmidt_rank_state(int d, int k, std::mt19937_64& rng) {
  if (k < 1 || k > d) throw std::invalid_argument("random_schmidt_rank_state: k out of range");
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> a(static_cast<size_t>(d) * d, 0.0);
  for (int t = 0; t < k; ++t) {
    std::vector<cplx> u(d), w(d);
    for (auto& x : u) x = cplx(g(rng), g(rng));
    for (auto& x : w) x = cplx(g(rng), g(rng));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a[static_cast<size_t>(i) * d + j] += u[i] * w[j];
  }
  return PureState::from_amplitudes(d, std::move(a));
}

}  // namespace snw
