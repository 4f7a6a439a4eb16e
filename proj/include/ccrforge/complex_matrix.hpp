#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccrforge/tolerances.hpp"

namespace ccrforge::numkernel {

using cplx = std::complex<double>;

// Dense complex square matrix, row-major storage. The tag records what the
// matrix represents (basis, units) and travels through reports untouched.
class ComplexMatrix {
 public:
  ComplexMatrix() : n_(0) {}

  explicit ComplexMatrix(int n, cplx fill = cplx(0.0, 0.0)) : n_(n) {
    if (n <= 0) throw std::invalid_argument("ComplexMatrix: dimension must be positive");
    a_.assign(static_cast<std::size_t>(n) * n, fill);
  }

  static ComplexMatrix identity(int n) {
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = cplx(1.0, 0.0);
    return m;
  }

  int dim() const { return n_; }

  cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const cplx& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  std::string tag;

  double max_abs() const {
    double m = 0.0;
    for (const cplx& z : a_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cplx& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  // max over (i,j) of |M[i][j] - conj(M[j][i])|
  double hermiticity_defect() const {
    double d = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j)
        d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
  }

  bool is_hermitian(double scale = tol::hermitian_scale) const {
    return hermiticity_defect() <= scale * (1.0 + max_abs());
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  std::vector<cplx> diagonal() const {
    std::vector<cplx> d(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) d[static_cast<std::size_t>(i)] = (*this)(i, i);
    return d;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same_dim(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    check_same_dim(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }

  ComplexMatrix& operator*=(cplx s) {
    for (cplx& z : a_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

 private:
  void check_same_dim(const ComplexMatrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
  }

  int n_;
  std::vector<cplx> a_;
};

inline ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int n = a.dim();
  if (b.dim() != n) throw std::invalid_argument("multiply: dimension mismatch");
  ComplexMatrix c(n);
  // i-k-j loop order keeps the inner loop contiguous in both b and c.
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0, 0.0)) continue;
      for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

inline std::vector<cplx> apply(const ComplexMatrix& m, const std::vector<cplx>& v) {
  const int n = m.dim();
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("apply: dimension mismatch");
  std::vector<cplx> r(static_cast<std::size_t>(n), cplx(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    cplx s(0.0, 0.0);
    for (int j = 0; j < n; ++j) s += m(i, j) * v[static_cast<std::size_t>(j)];
    r[static_cast<std::size_t>(i)] = s;
  }
  return r;
}

inline double max_entry_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int n = a.dim();
  if (b.dim() != n) throw std::invalid_argument("max_entry_diff: dimension mismatch");
  double d = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

inline cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: dimension mismatch");
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace ccrforge::numkernel
