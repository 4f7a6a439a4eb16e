#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ccrforge/complex_matrix.hpp"
#include "ccrforge/confined_system.hpp"
#include "ccrforge/domain_vector.hpp"
#include "ccrforge/gauss_legendre.hpp"
#include "ccrforge/hermitian_eigen.hpp"
#include "ccrforge/time_operators.hpp"
#include "ccrforge/tolerances.hpp"
#include "ccrforge/unitary_evolution.hpp"

namespace ccrforge::ccrlab {

using confined::SystemConfig;
using numkernel::ComplexMatrix;
using numkernel::cplx;

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return numkernel::multiply(a, b) - numkernel::multiply(b, a);
}

namespace detail {

// Uniform double in [0,1) from the top 53 bits of the generator output.
// Spelled out rather than taken from std::uniform_real_distribution, whose
// output is implementation-defined and would break cross-toolchain goldens.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Random coefficient vector supported on |k| <= support with coefficient sum
// exactly adjusted to zero, then normalized. Zero-sum vectors satisfy the
// commutation relation with the characteristic time operator identically in
// the truncation, so these are the dense-domain test states.
inline DomainVector dense_domain_sample(int K, int support, std::uint64_t seed) {
  if (K < 1) throw std::invalid_argument("dense_domain_sample: K must be at least 1");
  if (support < 1 || support > K)
    throw std::invalid_argument("dense_domain_sample: support must lie in 1..K");

  std::mt19937_64 gen(seed);
  DomainVector v;
  v.K = K;
  v.tag = DomainVector::Tag::dense_zero_sum;
  v.coefficients.assign(static_cast<std::size_t>(2 * K + 1), cplx(0.0, 0.0));

  for (int k = -support; k <= support; ++k) {
    const double re = 2.0 * detail::uniform01(gen) - 1.0;
    const double im = 2.0 * detail::uniform01(gen) - 1.0;
    v.coefficients[static_cast<std::size_t>(k + K)] = cplx(re, im);
  }
  // Fold the total into the last supported coefficient to make the sum zero.
  v.coefficients[static_cast<std::size_t>(support + K)] -= v.coefficient_sum();

  const double nrm = v.norm();
  if (nrm < 1e-12) throw std::runtime_error("dense_domain_sample: degenerate draw, vector vanished");
  for (cplx& c : v.coefficients) c /= nrm;
  return v;
}

// Expansion of the bump phi(q) = d/dq (q^2 - l^2)^m over the momentum basis,
// normalized. The integrand oscillates ~K+1 times across the box at the edge
// of the truncation, so the quadrature uses enough equal panels to keep a few
// nodes per oscillation regardless of K.
inline DomainVector bump_domain_sample(int m, const SystemConfig& cfg, int quad_order = 64) {
  confined::validate_config(cfg);
  if (m < 2) throw std::invalid_argument("bump_domain_sample: m must be at least 2");
  if (quad_order < 8) throw std::invalid_argument("bump_domain_sample: quad_order below 8");

  const int panels =
      static_cast<int>(std::ceil(2.0 * (cfg.K + 1) * std::numbers::pi / quad_order));
  const numkernel::QuadratureRule rule =
      numkernel::composite_gauss_legendre(quad_order, std::max(1, panels), -cfg.l, cfg.l);

  auto bump = [&](double q) {
    return 2.0 * m * q * std::pow(q * q - cfg.l * cfg.l, m - 1);
  };

  DomainVector v;
  v.K = cfg.K;
  v.tag = DomainVector::Tag::closed_bump;
  v.coefficients.reserve(static_cast<std::size_t>(2 * cfg.K + 1));
  for (int k = -cfg.K; k <= cfg.K; ++k) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights[i] * std::conj(confined::basis_function(k, rule.nodes[i], cfg)) *
             bump(rule.nodes[i]);
    v.coefficients.push_back(acc);
  }

  const double nrm = v.norm();
  if (nrm < 1e-12) throw std::runtime_error("bump_domain_sample: expansion vanished");
  for (cplx& c : v.coefficients) c /= nrm;
  return v;
}

// Relative residual ||(TH - HT) phi - i phi|| / ||phi||, evaluated with
// matrix-vector products only.
inline double ccr_residual(const ComplexMatrix& t, const ComplexMatrix& h,
                           const std::vector<cplx>& phi) {
  const double nrm = numkernel::norm2(phi);
  if (nrm < 1e-300) throw std::invalid_argument("ccr_residual: zero test vector");

  const std::vector<cplx> th = numkernel::apply(t, numkernel::apply(h, phi));
  const std::vector<cplx> ht = numkernel::apply(h, numkernel::apply(t, phi));
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const cplx r = th[i] - ht[i] - cplx(0.0, 1.0) * phi[i];
    s += std::norm(r);
  }
  return std::sqrt(s) / nrm;
}

inline double ccr_residual(const ComplexMatrix& t, const ComplexMatrix& h,
                           const DomainVector& phi) {
  return ccr_residual(t, h, phi.coefficients);
}

// Structure of D = [T_c, H] - i 1 in finite truncation. The exact finite-rank
// identity gives D = -i J with J the all-ones matrix, so D has spectral norm
// N, a one-dimensional range, and annihilates every zero-sum vector.
struct DefectReport {
  int dim = 0;
  double max_entry_deviation = 0.0;  // max |D[i][j] + i|
  double spectral_norm = 0.0;
  double second_singular = 0.0;
  double expected_norm = 0.0;  // N
  bool rank_one = false;
};

inline DefectReport commutator_defect(const ComplexMatrix& t_c, const ComplexMatrix& h) {
  const int n = t_c.dim();
  if (h.dim() != n) throw std::invalid_argument("commutator_defect: dimension mismatch");

  std::vector<double> energies(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(h(i, j)) > 1e-12)
        throw std::invalid_argument("commutator_defect: H must be diagonal in this basis");
    energies[static_cast<std::size_t>(i)] = h(i, i).real();
  }

  const ComplexMatrix reference = timeops::build_characteristic_time(energies);
  if (numkernel::max_entry_diff(t_c, reference) > 1e-10 * (1.0 + reference.max_abs()))
    throw std::invalid_argument(
        "commutator_defect: T does not match the characteristic construction from H's diagonal");

  ComplexMatrix d = commutator(t_c, h);
  for (int i = 0; i < n; ++i) d(i, i) -= cplx(0.0, 1.0);

  DefectReport rep;
  rep.dim = n;
  rep.expected_norm = static_cast<double>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      rep.max_entry_deviation = std::max(rep.max_entry_deviation, std::abs(d(i, j) + cplx(0.0, 1.0)));

  // D is -i times a real symmetric matrix up to roundoff, so the singular
  // values of D are the absolute eigenvalues of the Hermitian part of i D.
  ComplexMatrix id = d;
  id *= cplx(0.0, 1.0);
  ComplexMatrix herm(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) herm(i, j) = 0.5 * (id(i, j) + std::conj(id(j, i)));
  const numkernel::EigenDecomposition ed = numkernel::hermitian_eigen(herm);
  std::vector<double> mags;
  mags.reserve(ed.eigenvalues.size());
  for (double x : ed.eigenvalues) mags.push_back(std::abs(x));
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  rep.spectral_norm = mags.empty() ? 0.0 : mags[0];
  rep.second_singular = mags.size() > 1 ? mags[1] : 0.0;
  rep.rank_one = rep.second_singular <= 1e-10 * rep.expected_norm;
  return rep;
}

// Numerical probe of the energy-shift argument: if conjugating H with
// U = exp(-i eps T) shifted the spectrum, U applied to an eigenstate would
// land on (or near) a single eigenstate at the shifted energy. The report
// records how far reality is from that picture.
struct PauliReport {
  double epsilon = 0.0;
  int state_index = 0;
  double base_energy = 0.0;
  double shifted_energy = 0.0;    // base_energy + epsilon, the claimed value
  double mean_energy_after = 0.0; // <U e, H U e>, the measured value
  std::vector<double> overlaps;  // |<e_j, U e_index>|^2 in storage order
  double largest_overlap = 0.0;
  double second_largest_overlap = 0.0;
  double overlap_cut = 1e-3;
  int overlaps_above_cut = 0;
  double eigenpair_residual = 0.0;   // ||H U e - shifted_energy U e||
  double time_eigen_residual = 0.0;  // worst ||T v - tau v|| over T's eigenpairs
  double time_eigenvalue_min = 0.0;
  double time_eigenvalue_max = 0.0;
  double spectrum_deviation = 0.0;   // max |sorted spec(U* H U) - sorted spec(H)|
  double ground_energy_before = 0.0;
  double ground_energy_after = 0.0;
};

inline PauliReport pauli_falsifier(const ComplexMatrix& t, const ComplexMatrix& h, double epsilon,
                                   int state_index) {
  const int n = t.dim();
  if (h.dim() != n) throw std::invalid_argument("pauli_falsifier: dimension mismatch");
  if (state_index < 0 || state_index >= n)
    throw std::invalid_argument("pauli_falsifier: state index out of range");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(h(i, j)) > 1e-12)
        throw std::invalid_argument("pauli_falsifier: H must be diagonal in this basis");

  PauliReport rep;
  rep.epsilon = epsilon;
  rep.state_index = state_index;
  rep.base_energy = h(state_index, state_index).real();
  rep.shifted_energy = rep.base_energy + epsilon;

  const numkernel::EigenDecomposition ted = numkernel::hermitian_eigen(t);
  rep.time_eigen_residual = numkernel::eigen_residual(t, ted);
  rep.time_eigenvalue_min = ted.eigenvalues.front();
  rep.time_eigenvalue_max = ted.eigenvalues.back();

  const ComplexMatrix u = numkernel::unitary_evolution(ted, epsilon);

  std::vector<cplx> psi(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) psi[static_cast<std::size_t>(i)] = u(i, state_index);

  rep.overlaps.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    rep.overlaps[static_cast<std::size_t>(i)] = std::norm(psi[static_cast<std::size_t>(i)]);
  rep.mean_energy_after = 0.0;
  for (int i = 0; i < n; ++i)
    rep.mean_energy_after += h(i, i).real() * rep.overlaps[static_cast<std::size_t>(i)];
  std::vector<double> sorted = rep.overlaps;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  rep.largest_overlap = sorted[0];
  rep.second_largest_overlap = sorted.size() > 1 ? sorted[1] : 0.0;
  for (double w : rep.overlaps)
    if (w > rep.overlap_cut) ++rep.overlaps_above_cut;

  double s = 0.0;
  for (int i = 0; i < n; ++i)
    s += std::norm(h(i, i) * psi[static_cast<std::size_t>(i)] - rep.shifted_energy * psi[static_cast<std::size_t>(i)]);
  rep.eigenpair_residual = std::sqrt(s);

  const ComplexMatrix h_conj = numkernel::multiply(u.adjoint(), numkernel::multiply(h, u));
  const numkernel::EigenDecomposition hed = numkernel::hermitian_eigen(h_conj);
  std::vector<double> before(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) before[static_cast<std::size_t>(i)] = h(i, i).real();
  std::sort(before.begin(), before.end());
  rep.spectrum_deviation = 0.0;
  for (int i = 0; i < n; ++i)
    rep.spectrum_deviation = std::max(
        rep.spectrum_deviation,
        std::abs(before[static_cast<std::size_t>(i)] - hed.eigenvalues[static_cast<std::size_t>(i)]));
  rep.ground_energy_before = before.front();
  rep.ground_energy_after = hed.eigenvalues.front();
  return rep;
}

// Report assembled by the verification experiments: which operator pair was
// tested, the per-vector residuals, the residual-vs-K series, and which
// canonical domain the samples came from.
struct CommutatorReport {
  std::string pair_label;
  std::vector<double> residuals;
  std::vector<std::pair<int, double>> truncation_series;  // (K, residual)
  DomainVector::Tag domain = DomainVector::Tag::none;
  double orthogonality_defect = 0.0;  // samples against the excluded direction
};

}  // namespace ccrforge::ccrlab
