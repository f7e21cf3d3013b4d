#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace snw {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Dimensions here are tiny (<= 256),
// so everything is O(n^3) without blocking.
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  }

  static ComplexMatrix identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const cplx& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  const std::vector<cplx>& data() const { return a_; }
  std::vector<cplx>& data() { return a_; }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same_shape(o);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    check_same_shape(o);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    ComplexMatrix r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
      for (int k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx(0.0)) continue;
        for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    }
    return r;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const {
    for (const auto& v : a_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

 private:
  void check_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  int rows_, cols_;
  std::vector<cplx> a_;
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx(0.0)) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

// Re Tr(A B), valid inner product on Hermitian pairs.
inline double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) throw std::invalid_argument("real_inner shape mismatch");
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s += (a(i, j) * b(j, i)).real();
  return s;
}

struct EigResult {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns, orthonormal
};

// Cyclic Jacobi for complex Hermitian matrices. Robust and adequate for the
// dimensions here (<= 256).
inline EigResult hermitian_eig(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_eig: non-square input");
  if (!h.all_finite()) throw std::invalid_argument("hermitian_eig: non-finite entries");
  const int n = h.rows();
  ComplexMatrix a = h;
  // Enforce exact hermiticity of the working copy.
  for (int i = 0; i < n; ++i) {
    a(i, i) = cplx(a(i, i).real(), 0.0);
    for (int j = i + 1; j < n; ++j) {
      const cplx m = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = m;
      a(j, i) = std::conj(m);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(a.max_abs(), 1e-300);
  const double tol = 1e-15 * scale;
  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= tol) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double m = std::abs(apq);
        if (m <= tol * 1e-2) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const cplx phase = apq / m;
        const double tau = (aqq - app) / (2.0 * m);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cplx s = phase * (t * c);

        // A <- J^dag A J with J = [[c, s], [-conj(s), c]] in the (p,q) plane.
        for (int r = 0; r < n; ++r) {
          const cplx arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - std::conj(s) * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (int cI = 0; cI < n; ++cI) {
          const cplx apc = a(p, cI), aqc = a(q, cI);
          a(p, cI) = c * apc - s * aqc;
          a(q, cI) = std::conj(s) * apc + c * aqc;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = cplx(a(p, p).real(), 0.0);
        a(q, q) = cplx(a(q, q).real(), 0.0);
        for (int r = 0; r < n; ++r) {
          const cplx vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp - std::conj(s) * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] < diag[y]; });

  EigResult res;
  res.values.resize(n);
  res.vectors = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    res.values[k] = diag[order[k]];
    for (int r = 0; r < n; ++r) res.vectors(r, k) = v(r, order[k]);
  }
  return res;
}

// Cholesky factorization A = L L^dag for Hermitian positive definite A.
// Returns false when a non-positive pivot is met.
inline bool cholesky(const ComplexMatrix& a, ComplexMatrix& l) {
  const int n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("cholesky: non-square input");
  l = ComplexMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (int k = 0; k < n; ++k) {
      if (k >= j) break;
      d -= std::norm(l(j, k));
    }
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      cplx s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return true;
}

// Solve L X = B (L lower triangular), in place over columns of B.
inline ComplexMatrix forward_solve(const ComplexMatrix& l, ComplexMatrix b) {
  const int n = l.rows();
  for (int c = 0; c < b.cols(); ++c) {
    for (int i = 0; i < n; ++i) {
      cplx s = b(i, c);
      for (int k = 0; k < i; ++k) s -= l(i, k) * b(k, c);
      b(i, c) = s / l(i, i);
    }
  }
  return b;
}

// Solve L^dag X = B.
inline ComplexMatrix backward_solve(const ComplexMatrix& l, ComplexMatrix b) {
  const int n = l.rows();
  for (int c = 0; c < b.cols(); ++c) {
    for (int i = n - 1; i >= 0; --i) {
      cplx s = b(i, c);
      for (int k = i + 1; k < n; ++k) s -= std::conj(l(k, i)) * b(k, c);
      b(i, c) = s / l(i, i);
    }
  }
  return b;
}

// Inverse of Hermitian positive definite A from its Cholesky factor.
inline ComplexMatrix hpd_inverse(const ComplexMatrix& l) {
  const int n = l.rows();
  ComplexMatrix inv = backward_solve(l, forward_solve(l, ComplexMatrix::identity(n)));
  // Symmetrize away round-off.
  for (int i = 0; i < n; ++i) {
    inv(i, i) = cplx(inv(i, i).real(), 0.0);
    for (int j = i + 1; j < n; ++j) {
      const cplx m = 0.5 * (inv(i, j) + std::conj(inv(j, i)));
      inv(i, j) = m;
      inv(j, i) = std::conj(m);
    }
  }
  return inv;
}

struct SvdResult {
  ComplexMatrix u;             // columns
  ComplexMatrix v;             // columns, A = U diag(sigma) V^dag
  std::vector<double> sigma;   // descending, >= 0
};

// One-sided (Hestenes) Jacobi SVD; gives small singular values accurately,
// which matters for Schmidt-rank detection.
inline SvdResult svd(const ComplexMatrix& a0) {
  ComplexMatrix a = a0;
  const int nrows = a.rows(), ncols = a.cols();
  ComplexMatrix v = ComplexMatrix::identity(ncols);
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < ncols; ++p) {
      for (int q = p + 1; q < ncols; ++q) {
        double hpp = 0.0, hqq = 0.0;
        cplx hpq = 0.0;
        for (int r = 0; r < nrows; ++r) {
          hpp += std::norm(a(r, p));
          hqq += std::norm(a(r, q));
          hpq += std::conj(a(r, p)) * a(r, q);
        }
        const double m = std::abs(hpq);
        if (m <= 1e-30 || m <= 1e-16 * std::sqrt(hpp * hqq)) continue;
        rotated = true;
        const cplx phase = hpq / m;
        const double tau = (hqq - hpp) / (2.0 * m);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cplx s = phase * (t * c);
        for (int r = 0; r < nrows; ++r) {
          const cplx arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - std::conj(s) * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (int r = 0; r < ncols; ++r) {
          const cplx vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp - std::conj(s) * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sig(ncols);
  for (int c = 0; c < ncols; ++c) {
    double s = 0.0;
    for (int r = 0; r < nrows; ++r) s += std::norm(a(r, c));
    sig[c] = std::sqrt(s);
  }
  std::vector<int> order(ncols);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return sig[x] > sig[y]; });

  SvdResult res;
  res.sigma.resize(ncols);
  res.u = ComplexMatrix(nrows, ncols);
  res.v = ComplexMatrix(ncols, ncols);
  for (int k = 0; k < ncols; ++k) {
    const int c = order[k];
    res.sigma[k] = sig[c];
    const double inv = sig[c] > 1e-280 ? 1.0 / sig[c] : 0.0;
    for (int r = 0; r < nrows; ++r) res.u(r, k) = a(r, c) * inv;
    for (int r = 0; r < ncols; ++r) res.v(r, k) = v(r, c);
  }
  return res;
}

}  // namespace snw
