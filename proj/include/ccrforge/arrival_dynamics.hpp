#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ccrforge/complex_matrix.hpp"
#include "ccrforge/confined_system.hpp"
#include "ccrforge/hermitian_eigen.hpp"
#include "ccrforge/parallel.hpp"
#include "ccrforge/tolerances.hpp"
#include "ccrforge/unitary_evolution.hpp"

namespace ccrforge::arrival {

using confined::SystemConfig;
using numkernel::ComplexMatrix;
using numkernel::cplx;

// One eigenstate of the arrival-time matrix: eigenvalue tau and the momentum
// basis coefficients of the eigenvector.
struct ArrivalEigenstate {
  double tau = 0.0;
  std::vector<cplx> coefficients;
};

// Full spectrum of the arrival operator, ascending in tau, with the worst
// eigenpair residual recorded. The truncated spectrum is symmetric about 0:
// conjugating the coefficients of a tau eigenvector yields a -tau one.
struct ArrivalSpectrum {
  std::vector<ArrivalEigenstate> states;
  double eigen_residual = 0.0;
};

inline ArrivalSpectrum toa_spectrum(const ComplexMatrix& t_arrival) {
  const numkernel::EigenDecomposition ed = numkernel::hermitian_eigen(t_arrival);
  ArrivalSpectrum spec;
  spec.eigen_residual = numkernel::eigen_residual(t_arrival, ed);
  const int n = t_arrival.dim();
  spec.states.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    ArrivalEigenstate s;
    s.tau = ed.eigenvalues[static_cast<std::size_t>(j)];
    s.coefficients.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s.coefficients[static_cast<std::size_t>(i)] = ed.eigenvectors(i, j);
    spec.states.push_back(std::move(s));
  }
  return spec;
}

// Storage index of the median positive-tau state (plus an optional offset
// within the positive block). Throws when no positive eigenvalue exists.
inline int median_positive_index(const ArrivalSpectrum& spec, int offset = 0) {
  const int n = static_cast<int>(spec.states.size());
  int first_positive = n;
  for (int i = 0; i < n; ++i)
    if (spec.states[static_cast<std::size_t>(i)].tau > 0.0) {
      first_positive = i;
      break;
    }
  if (first_positive == n) throw std::runtime_error("median_positive_index: no positive eigenvalue");
  const int count = n - first_positive;
  const int idx = first_positive + count / 2 + offset;
  if (idx < first_positive || idx >= n)
    throw std::out_of_range("median_positive_index: offset leaves the positive block");
  return idx;
}

// Time evolution of an arrival eigenstate watched in position space:
// probability mass inside |q| <= w and the position mean, on a uniform grid,
// with the density snapshots kept for pairing checks.
struct CollapseSeries {
  std::vector<double> times;
  std::vector<double> mass_w;        // integral of |psi|^2 over |q| <= w
  std::vector<double> q_mean;        // integral of q |psi|^2
  std::vector<double> total_mass;    // integral over the whole box, bookkeeping
  std::vector<double> position_grid;
  std::vector<std::vector<double>> density;  // density[t index][grid index]
  double w = 0.0;
};

namespace detail {

// Composite Simpson weights on a uniform grid with an odd point count.
inline std::vector<double> simpson_weights(int points, double h) {
  if (points < 3 || points % 2 == 0)
    throw std::invalid_argument("simpson_weights: need an odd point count of at least 3");
  std::vector<double> w(static_cast<std::size_t>(points), 0.0);
  for (int i = 0; i < points; ++i) {
    double c = (i == 0 || i == points - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[static_cast<std::size_t>(i)] = c * h / 3.0;
  }
  return w;
}

}  // namespace detail

// Evolve `state` under the diagonal Hamiltonian of `cfg`'s system and record
// the density on a grid of `grid_points` positions at each requested time.
// grid_points must be odd (Simpson) and of the form 4m+1 so that the window
// |q| <= w = l/4-style sub-ranges land on grid nodes when w divides l evenly.
inline CollapseSeries collapse_series(const ArrivalEigenstate& state, const SystemConfig& cfg,
                                      const std::vector<double>& times, double w,
                                      int grid_points = 513) {
  confined::validate_config(cfg);
  if (!(w > 0.0) || w > cfg.l)
    throw std::invalid_argument("collapse_series: window must satisfy 0 < w <= l");
  if (grid_points < 5 || grid_points % 2 == 0)
    throw std::invalid_argument("collapse_series: grid_points must be odd and at least 5");
  const int n = 2 * cfg.K + 1;
  if (static_cast<int>(state.coefficients.size()) != n)
    throw std::invalid_argument("collapse_series: coefficient count does not match K");

  CollapseSeries out;
  out.w = w;
  out.times = times;
  out.position_grid.resize(static_cast<std::size_t>(grid_points));
  const double h = 2.0 * cfg.l / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i)
    out.position_grid[static_cast<std::size_t>(i)] = -cfg.l + i * h;

  // Basis values on the grid, reused for every time step.
  std::vector<std::vector<cplx>> basis(static_cast<std::size_t>(n),
                                       std::vector<cplx>(static_cast<std::size_t>(grid_points)));
  for (int k = -cfg.K; k <= cfg.K; ++k)
    for (int g = 0; g < grid_points; ++g)
      basis[static_cast<std::size_t>(k + cfg.K)][static_cast<std::size_t>(g)] =
          confined::basis_function(k, out.position_grid[static_cast<std::size_t>(g)], cfg);

  const confined::ConfinedSystem sys = confined::build_system(cfg);
  const std::vector<double> sw = detail::simpson_weights(grid_points, h);

  const std::size_t nt = times.size();
  out.mass_w.assign(nt, 0.0);
  out.q_mean.assign(nt, 0.0);
  out.total_mass.assign(nt, 0.0);
  out.density.assign(nt, std::vector<double>(static_cast<std::size_t>(grid_points), 0.0));

  numkernel::parallel_for(0, static_cast<int>(nt), [&](int ti) {
    const double t = times[static_cast<std::size_t>(ti)];
    // H is diagonal in this basis; evolution is a phase per coefficient.
    std::vector<cplx> coeff(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double a = -sys.spectrum.rows[static_cast<std::size_t>(i)].energy * t;
      coeff[static_cast<std::size_t>(i)] =
          state.coefficients[static_cast<std::size_t>(i)] * cplx(std::cos(a), std::sin(a));
    }

    std::vector<double>& dens = out.density[static_cast<std::size_t>(ti)];
    for (int g = 0; g < grid_points; ++g) {
      cplx psi(0.0, 0.0);
      for (int i = 0; i < n; ++i)
        psi += coeff[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(g)];
      dens[static_cast<std::size_t>(g)] = std::norm(psi);
    }

    double inside = 0.0;
    double total = 0.0;
    double qbar = 0.0;
    for (int g = 0; g < grid_points; ++g) {
      const double q = out.position_grid[static_cast<std::size_t>(g)];
      const double wd = sw[static_cast<std::size_t>(g)] * dens[static_cast<std::size_t>(g)];
      total += wd;
      qbar += q * wd;
    }
    // Window integral on the sub-grid spanned by |q| <= w, with its own
    // Simpson weights so the window edge does not pick up partial panels.
    int g_lo = 0;
    while (g_lo < grid_points && out.position_grid[static_cast<std::size_t>(g_lo)] < -w - 1e-12 * cfg.l) ++g_lo;
    int g_hi = grid_points - 1;
    while (g_hi >= 0 && out.position_grid[static_cast<std::size_t>(g_hi)] > w + 1e-12 * cfg.l) --g_hi;
    int span = g_hi - g_lo + 1;
    if (span >= 3) {
      if (span % 2 == 0) {
        --g_hi;
        --span;
      }
      const std::vector<double> wiw = detail::simpson_weights(span, h);
      for (int g = g_lo; g <= g_hi; ++g)
        inside += wiw[static_cast<std::size_t>(g - g_lo)] * dens[static_cast<std::size_t>(g)];
    }
    out.mass_w[static_cast<std::size_t>(ti)] = inside;
    out.total_mass[static_cast<std::size_t>(ti)] = total;
    out.q_mean[static_cast<std::size_t>(ti)] = qbar;
  });
  return out;
}

}  // namespace ccrforge::arrival
