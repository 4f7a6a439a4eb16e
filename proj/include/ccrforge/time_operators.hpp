#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccrforge/complex_matrix.hpp"
#include "ccrforge/confined_system.hpp"
#include "ccrforge/gauss_legendre.hpp"
#include "ccrforge/parallel.hpp"
#include "ccrforge/tolerances.hpp"

namespace ccrforge::timeops {

using confined::SystemConfig;
using numkernel::ComplexMatrix;
using numkernel::cplx;

// Characteristic time operator over a nondegenerate energy list:
// T[k][k'] = i / (E_k - E_k') off the diagonal, 0 on it. Hermitian because
// swapping k,k' flips the sign of the denominator.
inline ComplexMatrix build_characteristic_time(const std::vector<double>& energies) {
  const int n = static_cast<int>(energies.size());
  if (n < 2) throw std::invalid_argument("build_characteristic_time: need at least two levels");

  double emax = 0.0;
  for (double e : energies) emax = std::max(emax, std::abs(e));
  const double gap_floor = tol::degeneracy_rel * std::max(emax, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(energies[static_cast<std::size_t>(i)] - energies[static_cast<std::size_t>(j)]) < gap_floor) {
        std::ostringstream msg;
        msg << "build_characteristic_time: degenerate pair, levels " << i << " and " << j
            << " with E = " << energies[static_cast<std::size_t>(i)] << " and "
            << energies[static_cast<std::size_t>(j)];
        throw std::invalid_argument(msg.str());
      }

  ComplexMatrix t(n);
  t.tag = "characteristic time, energy basis";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      t(i, j) = cplx(0.0, 1.0) / (energies[static_cast<std::size_t>(i)] - energies[static_cast<std::size_t>(j)]);
    }
  return t;
}

// Position-representation kernel of the confined passage-time operator:
//   <q|T|q'> = mu (q + q') / (4 sin gamma) *
//              (exp(i gamma) H(q - q') + exp(-i gamma) H(q' - q)),
// with the step H taking the symmetric value 1/2 on the diagonal. Undefined at
// gamma = 0 where sin gamma vanishes.
inline cplx toa_kernel(double q, double q2, const SystemConfig& cfg) {
  confined::validate_config(cfg);
  if (cfg.gamma == 0.0)
    throw std::invalid_argument("toa_kernel: gamma = 0 has no kernel (sin gamma = 0)");
  if (!(std::abs(q) <= cfg.l) || !(std::abs(q2) <= cfg.l))
    throw std::invalid_argument("toa_kernel: arguments outside the box");

  const double hp = q > q2 ? 1.0 : (q < q2 ? 0.0 : 0.5);
  const double hm = 1.0 - hp;
  const cplx eg(std::cos(cfg.gamma), std::sin(cfg.gamma));
  const cplx pref = cfg.mu * (q + q2) / (4.0 * std::sin(cfg.gamma));
  return pref * (eg * hp + std::conj(eg) * hm);
}

enum class ToaMethod { kernel, product };

inline std::string method_name(ToaMethod m) {
  return m == ToaMethod::kernel ? "kernel" : "product";
}

// A constructed time-operator matrix plus the provenance a report needs.
// `matrix` holds the passage form T; the arrival-time convention is the
// global sign flip exposed by arrival_operator().
struct TimeOperatorBuild {
  ComplexMatrix matrix;
  SystemConfig config;
  std::string construction;
  int quad_order = 0;
};

inline ComplexMatrix arrival_operator(const TimeOperatorBuild& build) {
  ComplexMatrix t = build.matrix;
  t *= cplx(-1.0, 0.0);
  t.tag = "arrival time, momentum basis";
  return t;
}

// Momentum-basis matrix of the passage-time operator T, by either route:
//  - kernel: Galerkin elements <phi_k| T |phi_k'> by double quadrature. The
//    kernel jumps across q = q', so for each outer node the inner integral is
//    split there and each smooth triangle gets its own rule.
//  - product: exact elements of (mu/2)(Q P^-1 + P^-1 Q), i.e.
//    (mu/2) Q[k][k'] (1/p_k + 1/p_k'), using the closed-form Q.
// Both are Hermitian up to quadrature error; the kernel route converges to
// the product route as quad_order grows.
inline TimeOperatorBuild build_toa_matrix(const SystemConfig& cfg, ToaMethod method,
                                          int quad_order = 64) {
  confined::validate_config(cfg);
  if (cfg.gamma == 0.0)
    throw std::invalid_argument("build_toa_matrix: gamma = 0 is outside the construction");
  if (method == ToaMethod::kernel && quad_order < 8)
    throw std::invalid_argument("build_toa_matrix: quad_order below 8 cannot resolve the kernel");

  const int n = 2 * cfg.K + 1;
  TimeOperatorBuild build;
  build.config = cfg;
  build.construction = method_name(method);
  build.quad_order = method == ToaMethod::kernel ? quad_order : 0;
  build.matrix = ComplexMatrix(n);
  build.matrix.tag = "passage time, momentum basis";

  if (method == ToaMethod::product) {
    const confined::ConfinedSystem sys = confined::build_system(cfg);
    for (int i = 0; i < n; ++i) {
      const double pi_inv = 1.0 / sys.spectrum.rows[static_cast<std::size_t>(i)].momentum;
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double pj_inv = 1.0 / sys.spectrum.rows[static_cast<std::size_t>(j)].momentum;
        build.matrix(i, j) = 0.5 * cfg.mu * sys.Q(i, j) * (pi_inv + pj_inv);
      }
    }
    return build;
  }

  const numkernel::QuadratureRule outer = numkernel::gauss_legendre(quad_order, -cfg.l, cfg.l);
  const std::size_t na = outer.nodes.size();

  // inner[a][j] = integral over q' of K(q_a, q') phi_j(q'), shared by every row.
  std::vector<std::vector<cplx>> inner(na, std::vector<cplx>(static_cast<std::size_t>(n), cplx(0.0, 0.0)));
  for (std::size_t a = 0; a < na; ++a) {
    const double q = outer.nodes[a];
    auto accumulate = [&](const numkernel::QuadratureRule& rule) {
      for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
        const double x = rule.nodes[b];
        const cplx kv = rule.weights[b] * toa_kernel(q, x, cfg);
        for (int j = 0; j < n; ++j)
          inner[a][static_cast<std::size_t>(j)] += kv * confined::basis_function(j - cfg.K, x, cfg);
      }
    };
    if (q > -cfg.l) accumulate(numkernel::gauss_legendre(quad_order, -cfg.l, q));
    if (q < cfg.l) accumulate(numkernel::gauss_legendre(quad_order, q, cfg.l));
  }

  // Rows are independent; each writes only its own preallocated entries.
  ComplexMatrix& t = build.matrix;
  numkernel::parallel_for(0, n, [&](int i) {
    for (std::size_t a = 0; a < na; ++a) {
      const cplx bra = outer.weights[a] * std::conj(confined::basis_function(i - cfg.K, outer.nodes[a], cfg));
      for (int j = 0; j < n; ++j) t(i, j) += bra * inner[a][static_cast<std::size_t>(j)];
    }
  });
  return build;
}

// Fraction of the spectrum below a magnitude cut, for tracking how truncated
// spectra crowd toward zero as K grows (the compact-operator signature).
inline double small_eigenvalue_fraction(const std::vector<double>& eigenvalues, double cut) {
  if (eigenvalues.empty()) return 0.0;
  int below = 0;
  for (double x : eigenvalues)
    if (std::abs(x) < cut) ++below;
  return static_cast<double>(below) / static_cast<double>(eigenvalues.size());
}

}  // namespace ccrforge::timeops
