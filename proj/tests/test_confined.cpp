#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "ccrforge/confined_system.hpp"
#include "ccrforge/gauss_legendre.hpp"
#include "ccrforge/tolerances.hpp"

using namespace ccrforge;
using confined::SystemConfig;
using numkernel::cplx;
using Catch::Matchers::ContainsSubstring;

namespace {

const double pi = std::numbers::pi;

SystemConfig make_cfg(double gamma, int K) {
  SystemConfig cfg;
  cfg.l = 1.0;
  cfg.mu = 1.0;
  cfg.gamma = gamma;
  cfg.K = K;
  return cfg;
}

// Independent oracle for matrix elements of the position operator:
// <phi_k| q |phi_k'> by quadrature against the basis functions themselves.
cplx position_element_by_quadrature(int k, int k2, const SystemConfig& cfg) {
  const auto rule = numkernel::gauss_legendre(64, -cfg.l, cfg.l);
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double q = rule.nodes[i];
    acc += rule.weights[i] * std::conj(confined::basis_function(k, q, cfg)) * q *
           confined::basis_function(k2, q, cfg);
  }
  return acc;
}

}  // namespace

TEST_CASE("build_system produces the analytic spectrum") {
  const auto sys = confined::build_system(make_cfg(pi / 4.0, 2));
  REQUIRE(sys.spectrum.rows.size() == 5);

  const auto& r0 = sys.spectrum.rows[static_cast<std::size_t>(sys.index_map.to_index(0))];
  CHECK(r0.k == 0);
  CHECK_THAT(r0.momentum, Catch::Matchers::WithinAbs(pi / 4.0, 1e-15));
  CHECK_THAT(r0.energy, Catch::Matchers::WithinAbs(pi * pi / 32.0, 1e-15));

  const auto& r1 = sys.spectrum.rows[static_cast<std::size_t>(sys.index_map.to_index(1))];
  CHECK_THAT(r1.momentum, Catch::Matchers::WithinAbs(5.0 * pi / 4.0, 1e-15));
  CHECK_THAT(r1.energy, Catch::Matchers::WithinAbs(25.0 * pi * pi / 32.0, 1e-13));

  // H = P^2 / (2 mu) entrywise, both diagonal.
  for (int i = 0; i < 5; ++i) {
    const double p = sys.P(i, i).real();
    CHECK_THAT(sys.H(i, i).real(), Catch::Matchers::WithinAbs(p * p / 2.0, 1e-13));
    for (int j = 0; j < 5; ++j)
      if (i != j) {
        CHECK(sys.H(i, j) == cplx(0.0, 0.0));
        CHECK(sys.P(i, j) == cplx(0.0, 0.0));
      }
  }
}

TEST_CASE("position matrix has the closed-form entries and is gamma independent") {
  const auto cfg = make_cfg(pi / 4.0, 2);
  const auto sys = confined::build_system(cfg);

  for (int i = 0; i < 5; ++i) CHECK(sys.Q(i, i) == cplx(0.0, 0.0));
  // k = 0, k' = 1: -i l (-1)^1 / pi = i / pi.
  const cplx q01 = sys.Q(sys.index_map.to_index(0), sys.index_map.to_index(1));
  CHECK(std::abs(q01 - cplx(0.0, 1.0 / pi)) < 1e-15);
  CHECK(sys.Q.is_hermitian());

  const auto other = confined::build_system(make_cfg(1.1, 2));
  CHECK(numkernel::max_entry_diff(sys.Q, other.Q) == 0.0);
}

TEST_CASE("position matrix agrees with direct quadrature of the defining integral") {
  const auto cfg = make_cfg(0.6, 2);
  const auto sys = confined::build_system(cfg);
  for (int k = -2; k <= 2; ++k)
    for (int k2 = -2; k2 <= 2; ++k2) {
      const cplx expect = position_element_by_quadrature(k, k2, cfg);
      const cplx got = sys.Q(sys.index_map.to_index(k), sys.index_map.to_index(k2));
      INFO("k = " << k << " k' = " << k2);
      CHECK(std::abs(got - expect) < 1e-10);
    }
}

TEST_CASE("basis functions carry the twisted boundary condition") {
  const auto cfg = make_cfg(0.9, 3);
  CHECK(std::abs(confined::basis_function(2, 0.0, cfg) - cplx(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);

  for (int k = -3; k <= 3; ++k) {
    const cplx lo = confined::basis_function(k, -cfg.l, cfg);
    const cplx hi = confined::basis_function(k, cfg.l, cfg);
    const cplx twist(std::cos(2.0 * cfg.gamma), -std::sin(2.0 * cfg.gamma));
    CHECK(std::abs(lo - twist * hi) < 1e-14);
  }
  CHECK_THROWS_AS(confined::basis_function(0, 1.5, cfg), std::invalid_argument);
}

TEST_CASE("basis functions are orthonormal under quadrature") {
  const auto cfg = make_cfg(pi / 4.0, 3);
  const auto rule = numkernel::gauss_legendre(64, -cfg.l, cfg.l);
  for (int j = -3; j <= 3; ++j)
    for (int k = -3; k <= 3; ++k) {
      cplx acc(0.0, 0.0);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * std::conj(confined::basis_function(j, rule.nodes[i], cfg)) *
               confined::basis_function(k, rule.nodes[i], cfg);
      const cplx expect = j == k ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
      CHECK(std::abs(acc - expect) < 1e-12);
    }
}

TEST_CASE("constant_coefficients match direct quadrature and Parseval") {
  const auto cfg = make_cfg(pi / 4.0, 100);
  const auto c = confined::constant_coefficients(cfg);
  REQUIRE(c.size() == 201);

  // Oracle: c_k = <phi_k, 1> by quadrature, checked on the low modes.
  const auto rule = numkernel::gauss_legendre(64, -cfg.l, cfg.l);
  for (int k = -5; k <= 5; ++k) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights[i] * std::conj(confined::basis_function(k, rule.nodes[i], cfg));
    CHECK(std::abs(c.coefficients[static_cast<std::size_t>(k + 100)] - acc) < 1e-12);
  }

  // Tail decay ~ 1/k and the Parseval sum approaching ||1||^2 = 2l from below.
  double sum = 0.0;
  for (const cplx& z : c.coefficients) sum += std::norm(z);
  CHECK(sum < 2.0 * cfg.l);
  CHECK(2.0 * cfg.l - sum < 0.01);
  const double c50 = std::abs(c.coefficients[static_cast<std::size_t>(50 + 100)]);
  CHECK(c50 * 50.0 * pi < std::sqrt(2.0 * cfg.l) + 1e-9);

  CHECK_THROWS_AS(confined::constant_coefficients(make_cfg(0.0, 4)), std::invalid_argument);
}

TEST_CASE("degeneracy scan accepts generic gamma and names degenerate pairs") {
  CHECK_NOTHROW(confined::require_nondegenerate(confined::build_system(make_cfg(pi / 4.0, 8)).spectrum));

  // gamma = pi/2 pairs k with -(k+1); the scan reports the first such pair.
  const auto half = confined::build_system(make_cfg(pi / 2.0, 2)).spectrum;
  CHECK_THROWS_WITH(confined::require_nondegenerate(half),
                    ContainsSubstring("k=-2") && ContainsSubstring("k=1"));

  // gamma = 0 is doubly degenerate in +-k.
  const auto zero = confined::build_system(make_cfg(0.0, 2)).spectrum;
  CHECK_THROWS_WITH(confined::require_nondegenerate(zero),
                    ContainsSubstring("k=-2") && ContainsSubstring("k=2"));
}

TEST_CASE("config validation rejects out-of-range parameters") {
  CHECK_THROWS_AS(confined::validate_config(make_cfg(pi, 4)), std::invalid_argument);
  CHECK_THROWS_AS(confined::validate_config(make_cfg(0.5, 0)), std::invalid_argument);
  SystemConfig bad = make_cfg(0.5, 4);
  bad.l = -1.0;
  CHECK_THROWS_AS(confined::validate_config(bad), std::invalid_argument);
  bad = make_cfg(0.5, 4);
  bad.mu = 0.0;
  CHECK_THROWS_AS(confined::validate_config(bad), std::invalid_argument);
}

TEST_CASE("index map is a bijection with checked bounds") {
  confined::BasisIndexMap map{3};
  CHECK(map.size() == 7);
  for (int k = -3; k <= 3; ++k) CHECK(map.to_k(map.to_index(k)) == k);
  CHECK(map.to_index(-3) == 0);
  CHECK(map.to_index(3) == 6);
  CHECK_THROWS_AS(map.to_index(4), std::out_of_range);
  CHECK_THROWS_AS(map.to_k(7), std::out_of_range);
}
