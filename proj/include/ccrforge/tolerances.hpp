#pragma once

// Central tolerance record. Every numerical gate in the library reads from
// here so that reports can echo the exact thresholds in force.

namespace ccrforge::tol {

// Algebraic identities (commutators, unitarity, orthonormality).
inline constexpr double algebraic = 1e-12;

// Eigen-reconstruction V diag(lambda) V^dagger vs input, relative to max|M|.
inline constexpr double reconstruction = 1e-10;

// Hermiticity gate: max|M[i][j] - conj(M[j][i])| <= hermitian_scale * (1 + max|M|).
inline constexpr double hermitian_scale = 1e-12;

// Gauss-Legendre weight-sum check, relative to (b - a).
inline constexpr double quadrature_weight = 1e-13;

// Spectra with min gap below degeneracy_rel * max|E| are treated as degenerate.
inline constexpr double degeneracy_rel = 1e-9;

// Hermiticity bound for constructed time operators.
inline constexpr double time_operator_hermitian = 1e-10;

// Zero-sum defect allowed in dense-domain samples, relative to the norm.
inline constexpr double zero_sum = 1e-13;

// Eigenpair residual bound for arrival spectra.
inline constexpr double arrival_eigen_residual = 1e-9;

// Probability bookkeeping in collapse series.
inline constexpr double probability = 1e-8;

}  // namespace ccrforge::tol
