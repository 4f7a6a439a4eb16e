#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ccrforge/tolerances.hpp"

namespace ccrforge::numkernel {

// Nodes and weights of an n-point Gauss-Legendre rule, affinely mapped from
// the canonical interval (-1,1) onto (a,b). Exact for polynomials of degree
// 2n-1 on (a,b).
struct QuadratureRule {
  int order = 0;
  double a = -1.0;
  double b = 1.0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Roots of the Legendre polynomial P_n by Newton iteration from the Chebyshev
// initial guess; weights from the standard derivative formula. Only the lower
// half of the roots is iterated, the rest follows by symmetry.
inline QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 2) throw std::invalid_argument("gauss_legendre: order must be at least 2");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre: interval must satisfy a < b");

  QuadratureRule rule;
  rule.order = order;
  rule.a = a;
  rule.b = b;
  rule.nodes.assign(static_cast<std::size_t>(order), 0.0);
  rule.weights.assign(static_cast<std::size_t>(order), 0.0);

  const int m = (order + 1) / 2;
  const double mid = 0.5 * (b + a);
  const double half = 0.5 * (b - a);

  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Recurrence (j+1) P_{j+1} = (2j+1) z P_j - j P_{j-1} up to P_order.
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = order * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    const std::size_t lo = static_cast<std::size_t>(i);
    const std::size_t hi = static_cast<std::size_t>(order - 1 - i);
    rule.nodes[lo] = mid - half * z;
    rule.nodes[hi] = mid + half * z;
    rule.weights[lo] = 2.0 * half / ((1.0 - z * z) * pp * pp);
    rule.weights[hi] = rule.weights[lo];
  }
  return rule;
}

template <class F>
auto integrate(const QuadratureRule& rule, F&& f) {
  using R = decltype(f(0.0));
  R acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

// Composite rule: `panels` equal subintervals of (a,b), an order-point rule on
// each. Used where the integrand oscillates faster than one panel can resolve.
inline QuadratureRule composite_gauss_legendre(int order, int panels, double a, double b) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels must be positive");
  QuadratureRule rule;
  rule.order = order * panels;
  rule.a = a;
  rule.b = b;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const QuadratureRule piece = gauss_legendre(order, a + p * h, a + (p + 1) * h);
    rule.nodes.insert(rule.nodes.end(), piece.nodes.begin(), piece.nodes.end());
    rule.weights.insert(rule.weights.end(), piece.weights.begin(), piece.weights.end());
  }
  return rule;
}

}  // namespace ccrforge::numkernel
