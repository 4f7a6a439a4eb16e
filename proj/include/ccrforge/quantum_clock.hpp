#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ccrforge/complex_matrix.hpp"
#include "ccrforge/tolerances.hpp"

namespace ccrforge::qclock {

using numkernel::ComplexMatrix;
using numkernel::cplx;

// A two-level compression of a time operator and its Hamiltonian. Levels are
// addressed by storage index into the energy basis; omega = E_a - E_b is the
// transition frequency of the pair.
struct TwoLevelClock {
  int index_a = 0;
  int index_b = 0;
  double energy_a = 0.0;
  double energy_b = 0.0;
  double omega = 0.0;
  ComplexMatrix T2;  // 2x2 compression of T onto span{e_a, e_b}
  ComplexMatrix H2;  // diag(E_a, E_b)
};

// Compress T and diagonal H onto the pair (index_a, index_b). The pair must
// be nondegenerate; the clock runs on the inverse of the gap.
inline TwoLevelClock project_two_level(const ComplexMatrix& t, const ComplexMatrix& h,
                                       int index_a, int index_b) {
  const int n = t.dim();
  if (h.dim() != n) throw std::invalid_argument("project_two_level: dimension mismatch");
  if (index_a < 0 || index_a >= n || index_b < 0 || index_b >= n)
    throw std::invalid_argument("project_two_level: level index out of range");
  if (index_a == index_b) throw std::invalid_argument("project_two_level: levels must differ");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(h(i, j)) > 1e-12)
        throw std::invalid_argument("project_two_level: H must be diagonal in this basis");

  TwoLevelClock clk;
  clk.index_a = index_a;
  clk.index_b = index_b;
  clk.energy_a = h(index_a, index_a).real();
  clk.energy_b = h(index_b, index_b).real();
  clk.omega = clk.energy_a - clk.energy_b;
  if (std::abs(clk.omega) < 1e-12 * (1.0 + std::abs(clk.energy_a)))
    throw std::invalid_argument("project_two_level: degenerate pair, omega vanishes");

  clk.T2 = ComplexMatrix(2);
  clk.T2(0, 0) = t(index_a, index_a);
  clk.T2(0, 1) = t(index_a, index_b);
  clk.T2(1, 0) = t(index_b, index_a);
  clk.T2(1, 1) = t(index_b, index_b);
  clk.T2.tag = "two-level compression";
  clk.H2 = ComplexMatrix(2);
  clk.H2(0, 0) = clk.energy_a;
  clk.H2(1, 1) = clk.energy_b;
  clk.H2.tag = "two-level energies";
  return clk;
}

// One row of the clock comparison: closed-form expectation and
// uncertainty-product values against their matrix-mechanics counterparts,
// all on the initial state (e_a - e_b)/sqrt(2).
struct ClockSample {
  double t = 0.0;
  double expect_closed = 0.0;
  double expect_numeric = 0.0;
  double product_closed = 0.0;
  double product_numeric = 0.0;
};

// Evolve (e_a - e_b)/sqrt(2) under diag(E_a, E_b), evaluate <T> and the
// uncertainty product dT * dH numerically, and pair each value with its
// closed form: <T>(t) = sin(omega t)/omega, dT dH = |cos(omega t)|/2.
inline std::vector<ClockSample> clock_series(const TwoLevelClock& clk,
                                             const std::vector<double>& times) {
  std::vector<ClockSample> out;
  out.reserve(times.size());

  const ComplexMatrix t2_sq = numkernel::multiply(clk.T2, clk.T2);
  const double e_mean = 0.5 * (clk.energy_a + clk.energy_b);
  const double e2_mean = 0.5 * (clk.energy_a * clk.energy_a + clk.energy_b * clk.energy_b);
  const double dh = std::sqrt(std::max(0.0, e2_mean - e_mean * e_mean));

  for (double t : times) {
    ClockSample s;
    s.t = t;
    s.expect_closed = std::sin(clk.omega * t) / clk.omega;
    s.product_closed = 0.5 * std::abs(std::cos(clk.omega * t));

    const cplx a = cplx(std::cos(-clk.energy_a * t), std::sin(-clk.energy_a * t)) / std::sqrt(2.0);
    const cplx b = -cplx(std::cos(-clk.energy_b * t), std::sin(-clk.energy_b * t)) / std::sqrt(2.0);
    const std::vector<cplx> phi = {a, b};
    const cplx t_mean = numkernel::inner(phi, numkernel::apply(clk.T2, phi));
    const cplx t2_mean = numkernel::inner(phi, numkernel::apply(t2_sq, phi));
    s.expect_numeric = t_mean.real();
    const double var_t = std::max(0.0, t2_mean.real() - t_mean.real() * t_mean.real());
    s.product_numeric = std::sqrt(var_t) * dh;
    out.push_back(s);
  }
  return out;
}

// t reduced modulo the clock period 2 pi / |omega|: t = tau + n * period with
// tau in [0, period).
struct WrappedTime {
  long long n = 0;
  double tau = 0.0;
  double period = 0.0;
};

inline WrappedTime wrap_time(double t, double omega) {
  if (omega == 0.0) throw std::invalid_argument("wrap_time: omega must be nonzero");
  WrappedTime w;
  w.period = 2.0 * std::numbers::pi / std::abs(omega);
  double n = std::floor(t / w.period);
  double tau = t - n * w.period;
  if (tau >= w.period) {
    tau -= w.period;
    n += 1.0;
  }
  if (tau < 0.0) {
    tau += w.period;
    n -= 1.0;
  }
  w.n = static_cast<long long>(n);
  w.tau = tau;
  return w;
}

}  // namespace ccrforge::qclock
