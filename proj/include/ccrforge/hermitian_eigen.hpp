#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ccrforge/complex_matrix.hpp"
#include "ccrforge/tolerances.hpp"

namespace ccrforge::numkernel {

// Eigenvalues ascending; eigenvectors(i, j) is component i of eigenvector j.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

namespace detail {

// One complex Jacobi rotation annihilating A[p][q]. The rotation is the
// product of a phase that makes the pivot real and the standard symmetric
// 2x2 rotation, so the working matrix stays Hermitian throughout.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, int p, int q) {
  const cplx apq = a(p, q);
  const double abs_apq = std::abs(apq);
  if (abs_apq == 0.0) return;

  const cplx phase = apq / abs_apq;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * abs_apq);

  // Smaller-magnitude root of t^2 + 2 theta t - 1 = 0 keeps rotations small.
  double t;
  if (theta >= 0.0)
    t = 1.0 / (theta + std::sqrt(1.0 + theta * theta));
  else
    t = -1.0 / (-theta + std::sqrt(1.0 + theta * theta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const int n = a.dim();
  // Columns p,q of A and V: G[p][p]=c, G[p][q]=s, G[q][p]=-s conj(phase),
  // G[q][q]=c conj(phase); then rows p,q of A with G^dagger from the left.
  for (int i = 0; i < n; ++i) {
    const cplx aip = a(i, p);
    const cplx aiq = a(i, q);
    a(i, p) = c * aip - s * std::conj(phase) * aiq;
    a(i, q) = s * aip + c * std::conj(phase) * aiq;
    const cplx vip = v(i, p);
    const cplx viq = v(i, q);
    v(i, p) = c * vip - s * std::conj(phase) * viq;
    v(i, q) = s * vip + c * std::conj(phase) * viq;
  }
  for (int j = 0; j < n; ++j) {
    const cplx apj = a(p, j);
    const cplx aqj = a(q, j);
    a(p, j) = c * apj - s * phase * aqj;
    a(q, j) = s * apj + c * phase * aqj;
  }
  // The pivot is annihilated by construction; pin it to avoid residue.
  a(p, q) = cplx(0.0, 0.0);
  a(q, p) = cplx(0.0, 0.0);
  a(p, p) = cplx(a(p, p).real(), 0.0);
  a(q, q) = cplx(a(q, q).real(), 0.0);
}

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  const int n = a.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

// Cyclic complex Jacobi diagonalization. Deterministic: fixed sweep order and
// a fixed tie-breaking / phase convention make repeated calls bit-identical.
// Eigenvalues ascending; each eigenvector is normalized and its
// largest-magnitude component is made real and positive.
inline EigenDecomposition hermitian_eigen(const ComplexMatrix& m) {
  const int n = m.dim();
  if (n == 0) throw std::invalid_argument("hermitian_eigen: empty matrix");

  const double scale = 1.0 + m.max_abs();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double d = std::abs(m(i, j) - std::conj(m(j, i)));
      if (d > tol::hermitian_scale * scale) {
        std::ostringstream msg;
        msg << "hermitian_eigen: matrix not hermitian, entries (" << i << "," << j
            << ") and (" << j << "," << i << ") differ by " << d;
        throw std::invalid_argument(msg.str());
      }
    }
  }

  ComplexMatrix a = m;
  // Work on an exactly Hermitian copy so rotation updates cannot drift.
  for (int i = 0; i < n; ++i) {
    a(i, i) = cplx(a(i, i).real(), 0.0);
    for (int j = i + 1; j < n; ++j) a(j, i) = std::conj(a(i, j));
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double fro = std::max(a.frobenius_norm(), 1e-300);
  const int max_sweeps = 100;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (detail::off_diagonal_norm(a) <= 1e-14 * fro) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
  }
  if (!converged && detail::off_diagonal_norm(a) > 1e-12 * fro)
    throw std::runtime_error("hermitian_eigen: jacobi sweep limit reached without convergence");

  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&a](int x, int y) { return a(x, x).real() < a(y, y).real(); });

  EigenDecomposition out;
  out.eigenvalues.resize(static_cast<std::size_t>(n));
  out.eigenvectors = ComplexMatrix(n);
  for (int j = 0; j < n; ++j) {
    const int src = idx[static_cast<std::size_t>(j)];
    out.eigenvalues[static_cast<std::size_t>(j)] = a(src, src).real();

    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += std::norm(v(i, src));
    nrm = std::sqrt(nrm);

    int imax = 0;
    double amax = -1.0;
    for (int i = 0; i < n; ++i) {
      const double mag = std::abs(v(i, src));
      if (mag > amax) {
        amax = mag;
        imax = i;
      }
    }
    cplx phase(1.0, 0.0);
    if (amax > 0.0) phase = std::conj(v(imax, src)) / amax;
    for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, src) * phase / nrm;
  }
  return out;
}

// max_j ||M v_j - lambda_j v_j|| over the decomposition, for diagnostics.
inline double eigen_residual(const ComplexMatrix& m, const EigenDecomposition& ed) {
  const int n = m.dim();
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    std::vector<cplx> vj(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) vj[static_cast<std::size_t>(i)] = ed.eigenvectors(i, j);
    std::vector<cplx> mv = numkernel::apply(m, vj);
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      s += std::norm(mv[static_cast<std::size_t>(i)] -
                     ed.eigenvalues[static_cast<std::size_t>(j)] * vj[static_cast<std::size_t>(i)]);
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

}  // namespace ccrforge::numkernel
