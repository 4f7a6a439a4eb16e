#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "ccrforge/complex_matrix.hpp"
#include "ccrforge/hermitian_eigen.hpp"

namespace ccrforge::numkernel {

// exp(-i t M) for Hermitian M, assembled from a spectral decomposition.
inline ComplexMatrix unitary_evolution(const EigenDecomposition& ed, double t) {
  const int n = ed.eigenvectors.dim();
  std::vector<cplx> ph(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double a = -t * ed.eigenvalues[static_cast<std::size_t>(k)];
    ph[static_cast<std::size_t>(k)] = cplx(std::cos(a), std::sin(a));
  }
  ComplexMatrix u(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx s(0.0, 0.0);
      for (int k = 0; k < n; ++k)
        s += ed.eigenvectors(i, k) * ph[static_cast<std::size_t>(k)] * std::conj(ed.eigenvectors(j, k));
      u(i, j) = s;
    }
  return u;
}

inline ComplexMatrix unitary_evolution(const ComplexMatrix& m, double t) {
  return unitary_evolution(hermitian_eigen(m), t);
}

// Evolve a single state vector: coefficients of exp(-i t M) psi.
inline std::vector<cplx> evolve_state(const EigenDecomposition& ed, double t,
                                      const std::vector<cplx>& psi) {
  const int n = ed.eigenvectors.dim();
  // Project onto the eigenbasis, apply phases, map back.
  std::vector<cplx> c(static_cast<std::size_t>(n), cplx(0.0, 0.0));
  for (int k = 0; k < n; ++k) {
    cplx s(0.0, 0.0);
    for (int i = 0; i < n; ++i) s += std::conj(ed.eigenvectors(i, k)) * psi[static_cast<std::size_t>(i)];
    const double a = -t * ed.eigenvalues[static_cast<std::size_t>(k)];
    c[static_cast<std::size_t>(k)] = s * cplx(std::cos(a), std::sin(a));
  }
  std::vector<cplx> out(static_cast<std::size_t>(n), cplx(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    cplx s(0.0, 0.0);
    for (int k = 0; k < n; ++k) s += ed.eigenvectors(i, k) * c[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

}  // namespace ccrforge::numkernel
