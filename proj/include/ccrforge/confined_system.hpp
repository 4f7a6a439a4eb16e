#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ccrforge/complex_matrix.hpp"
#include "ccrforge/domain_vector.hpp"
#include "ccrforge/tolerances.hpp"

namespace ccrforge::confined {

using numkernel::ComplexMatrix;
using numkernel::cplx;

// Particle in a box of half-width l on (-l, l), mass mu, with the twisted
// boundary condition phi(-l) = exp(-2 i gamma) phi(l). Units with hbar = 1.
// gamma = 0 is excluded: the spectrum is doubly degenerate there and none of
// the time-operator constructions are defined.
struct SystemConfig {
  double l = 1.0;
  double mu = 1.0;
  double gamma = std::numbers::pi / 4.0;
  int K = 16;
};

inline void validate_config(const SystemConfig& cfg) {
  if (!(cfg.l > 0.0)) throw std::invalid_argument("SystemConfig: l must be positive");
  if (!(cfg.mu > 0.0)) throw std::invalid_argument("SystemConfig: mu must be positive");
  if (!(std::abs(cfg.gamma) < std::numbers::pi))
    throw std::invalid_argument("SystemConfig: gamma must satisfy |gamma| < pi");
  if (cfg.K < 1) throw std::invalid_argument("SystemConfig: K must be at least 1");
}

// Bijection between the physical momentum label k in -K..K and the storage
// index 0..2K used by every matrix in the truncation.
struct BasisIndexMap {
  int K = 0;

  int size() const { return 2 * K + 1; }

  int to_index(int k) const {
    if (k < -K || k > K) {
      std::ostringstream msg;
      msg << "BasisIndexMap: k = " << k << " outside -" << K << ".." << K;
      throw std::out_of_range(msg.str());
    }
    return k + K;
  }

  int to_k(int index) const {
    if (index < 0 || index >= size()) {
      std::ostringstream msg;
      msg << "BasisIndexMap: index = " << index << " outside 0.." << size() - 1;
      throw std::out_of_range(msg.str());
    }
    return index - K;
  }
};

struct SpectrumRecord {
  int k = 0;
  double momentum = 0.0;
  double energy = 0.0;
};

// Spectrum rows in storage order (k = -K first).
struct SpectrumTable {
  std::vector<SpectrumRecord> rows;

  std::vector<double> energies() const {
    std::vector<double> e;
    e.reserve(rows.size());
    for (const SpectrumRecord& r : rows) e.push_back(r.energy);
    return e;
  }
};

struct ConfinedSystem {
  SystemConfig config;
  BasisIndexMap index_map;
  SpectrumTable spectrum;
  ComplexMatrix H;  // diagonal, energies E_k = p_k^2 / (2 mu)
  ComplexMatrix P;  // diagonal, momenta p_k = (gamma + k pi) / l
  ComplexMatrix Q;  // position operator in the momentum basis
};

// Momentum eigenfunction phi_k(q) = (2l)^(-1/2) exp(i (gamma + k pi) q / l).
inline cplx basis_function(int k, double q, const SystemConfig& cfg) {
  validate_config(cfg);
  if (!(std::abs(q) <= cfg.l))
    throw std::invalid_argument("basis_function: q outside the box");
  const double phase = (cfg.gamma + k * std::numbers::pi) * q / cfg.l;
  return cplx(std::cos(phase), std::sin(phase)) / std::sqrt(2.0 * cfg.l);
}

// Momentum-basis matrices of H, P and Q. The position matrix is independent
// of gamma: Q[k][k'] = -i l (-1)^(k'-k) / (pi (k'-k)) off the diagonal and 0
// on it, which is the closed form of <phi_k| q |phi_k'>.
inline ConfinedSystem build_system(const SystemConfig& cfg) {
  validate_config(cfg);

  ConfinedSystem sys;
  sys.config = cfg;
  sys.index_map.K = cfg.K;
  const int n = sys.index_map.size();

  sys.spectrum.rows.reserve(static_cast<std::size_t>(n));
  for (int k = -cfg.K; k <= cfg.K; ++k) {
    SpectrumRecord r;
    r.k = k;
    r.momentum = (cfg.gamma + k * std::numbers::pi) / cfg.l;
    r.energy = r.momentum * r.momentum / (2.0 * cfg.mu);
    sys.spectrum.rows.push_back(r);
  }

  sys.H = ComplexMatrix(n);
  sys.H.tag = "energy, momentum basis";
  sys.P = ComplexMatrix(n);
  sys.P.tag = "momentum, momentum basis";
  sys.Q = ComplexMatrix(n);
  sys.Q.tag = "position, momentum basis";

  for (int i = 0; i < n; ++i) {
    sys.H(i, i) = sys.spectrum.rows[static_cast<std::size_t>(i)].energy;
    sys.P(i, i) = sys.spectrum.rows[static_cast<std::size_t>(i)].momentum;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int diff = j - i;
      const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
      sys.Q(i, j) = cplx(0.0, -1.0) * cfg.l * sign / (std::numbers::pi * diff);
    }
  }
  return sys;
}

// Expansion coefficients of the constant function 1 over the basis:
// c_k = <phi_k, 1> = sqrt(2l) (-1)^k sin(gamma) / (gamma + k pi). The full
// Parseval sum is ||1||^2 = 2l; the truncated tail mass is the caller's
// concern. States orthogonal to this vector integrate to zero over the box.
inline ccrlab::DomainVector constant_coefficients(const SystemConfig& cfg) {
  validate_config(cfg);
  if (cfg.gamma == 0.0)
    throw std::invalid_argument("constant_coefficients: gamma = 0 leaves the constant outside the basis span");
  ccrlab::DomainVector v;
  v.K = cfg.K;
  v.coefficients.reserve(static_cast<std::size_t>(2 * cfg.K + 1));
  const double s = std::sin(cfg.gamma);
  for (int k = -cfg.K; k <= cfg.K; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    v.coefficients.push_back(cplx(std::sqrt(2.0 * cfg.l) * sign * s / (cfg.gamma + k * std::numbers::pi), 0.0));
  }
  return v;
}

// Minimal spectral gap scan. The characteristic-time construction divides by
// E_k - E_k', so a degenerate pair is a hard error and the message must name
// the pair. Degeneracy occurs exactly at gamma = 0 (E_k = E_-k) and at
// 2 gamma / pi equal to a nonzero integer (pairs with k + k' = -2 gamma / pi).
inline void require_nondegenerate(const SpectrumTable& table) {
  const std::size_t n = table.rows.size();
  double emax = 0.0;
  for (const SpectrumRecord& r : table.rows) emax = std::max(emax, std::abs(r.energy));
  const double gap_floor = tol::degeneracy_rel * std::max(emax, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gap = std::abs(table.rows[i].energy - table.rows[j].energy);
      if (gap < gap_floor) {
        std::ostringstream msg;
        msg << "degenerate spectrum: E(k=" << table.rows[i].k << ") = " << table.rows[i].energy
            << " and E(k=" << table.rows[j].k << ") = " << table.rows[j].energy
            << " differ by " << gap << ", below the gap floor " << gap_floor;
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

}  // namespace ccrforge::confined
