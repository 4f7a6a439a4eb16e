#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ccrforge/confined_system.hpp"
#include "ccrforge/quantum_clock.hpp"
#include "ccrforge/time_operators.hpp"

using namespace ccrforge;
using confined::SystemConfig;
using numkernel::ComplexMatrix;
using numkernel::cplx;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

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

ComplexMatrix diag_matrix(const std::vector<double>& d) {
  ComplexMatrix m(static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

}  // namespace

TEST_CASE("two-level compression of the hand spectrum") {
  const auto h = diag_matrix({1.0, 2.0});
  const auto t = timeops::build_characteristic_time({1.0, 2.0});
  const auto clk = qclock::project_two_level(t, h, 0, 1);

  CHECK(clk.energy_a == 1.0);
  CHECK(clk.energy_b == 2.0);
  CHECK(clk.omega == -1.0);
  CHECK(std::abs(clk.T2(0, 1) - cplx(0.0, -1.0)) < 1e-15);
  CHECK(std::abs(clk.T2(1, 0) - cplx(0.0, 1.0)) < 1e-15);
  CHECK(clk.T2(0, 0) == cplx(0.0, 0.0));
  CHECK(std::abs(clk.H2(0, 0) - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(clk.H2(1, 1) - cplx(2.0, 0.0)) < 1e-15);
}

TEST_CASE("two-level compression squares to the inverse gap") {
  const auto sys = confined::build_system(make_cfg(pi / 4.0, 2));
  const auto t = timeops::build_characteristic_time(sys.spectrum.energies());
  const auto clk = qclock::project_two_level(t, sys.H, sys.index_map.to_index(0),
                                             sys.index_map.to_index(1));
  CHECK_THAT(clk.omega, WithinAbs(-3.0 * pi * pi / 4.0, 1e-12));

  const auto sq = numkernel::multiply(clk.T2, clk.T2);
  const double inv = 1.0 / (clk.omega * clk.omega);
  CHECK(std::abs(sq(0, 0) - cplx(inv, 0.0)) < 1e-15);
  CHECK(std::abs(sq(1, 1) - cplx(inv, 0.0)) < 1e-15);
  CHECK(std::abs(sq(0, 1)) < 1e-18);
}

TEST_CASE("clock series hits the closed form at the quarter period") {
  const auto sys = confined::build_system(make_cfg(pi / 4.0, 2));
  const auto t = timeops::build_characteristic_time(sys.spectrum.energies());
  const auto clk = qclock::project_two_level(t, sys.H, sys.index_map.to_index(0),
                                             sys.index_map.to_index(1));
  const double w = std::abs(clk.omega);
  const auto series = qclock::clock_series(clk, {0.0, pi / (2.0 * w)});

  REQUIRE(series.size() == 2);
  CHECK(series[0].expect_closed == 0.0);
  CHECK(std::abs(series[0].expect_numeric) < 1e-13);
  CHECK_THAT(series[0].product_closed, WithinAbs(0.5, 1e-15));
  CHECK_THAT(series[0].product_numeric, WithinAbs(0.5, 1e-13));

  CHECK_THAT(series[1].expect_closed, WithinAbs(1.0 / w, 1e-14));
  CHECK_THAT(series[1].expect_numeric, WithinAbs(1.0 / w, 1e-13));
  CHECK(series[1].product_closed < 1e-13);
  // The variance cancels to rounding noise here, so the numeric product only
  // reaches the square root of that noise.
  CHECK(series[1].product_numeric < 1e-6);
}

TEST_CASE("numeric clock evolution tracks the closed form over several periods") {
  const auto sys = confined::build_system(make_cfg(pi / 4.0, 4));
  const auto t = timeops::build_characteristic_time(sys.spectrum.energies());
  for (const auto [ka, kb] : {std::pair{0, 1}, std::pair{-1, 2}}) {
    const auto clk = qclock::project_two_level(t, sys.H, sys.index_map.to_index(ka),
                                               sys.index_map.to_index(kb));
    const double period = 2.0 * pi / std::abs(clk.omega);
    const auto series = qclock::clock_series(clk, linspace(0.0, 3.0 * period, 400));
    double worst_expect = 0.0;
    double worst_product = 0.0;
    for (const auto& s : series) {
      worst_expect = std::max(worst_expect, std::abs(s.expect_numeric - s.expect_closed));
      worst_product = std::max(worst_product, std::abs(s.product_numeric - s.product_closed));
    }
    INFO("pair (" << ka << ", " << kb << ")");
    CHECK(worst_expect < 1e-12);
    CHECK(worst_product < 1e-12);
  }
}

TEST_CASE("clock periodicity in the wrapped time coordinate") {
  const double omega = 2.0;
  const double period = pi;

  auto w = qclock::wrap_time(2.5 * period, omega);
  CHECK(w.n == 2);
  CHECK_THAT(w.tau, WithinAbs(0.5 * period, 1e-12));
  CHECK_THAT(w.period, WithinAbs(period, 1e-15));

  w = qclock::wrap_time(-0.5 * period, omega);
  CHECK(w.n == -1);
  CHECK_THAT(w.tau, WithinAbs(0.5 * period, 1e-12));

  for (double t : {0.0, 0.3, period, 2.0 * period - 1e-9, 17.25, -4.125}) {
    w = qclock::wrap_time(t, omega);
    CHECK(w.tau >= 0.0);
    CHECK(w.tau < w.period);
    CHECK_THAT(w.n * w.period + w.tau, WithinAbs(t, 1e-12));
  }

  CHECK_THROWS_AS(qclock::wrap_time(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("two-level projection rejects unusable pairs") {
  const auto h = diag_matrix({1.0, 2.0, 2.0});
  const auto t = timeops::build_characteristic_time({1.0, 2.0, 4.0});

  CHECK_THROWS_AS(qclock::project_two_level(t, h, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(qclock::project_two_level(t, h, 0, 3), std::invalid_argument);
  CHECK_THROWS_WITH(qclock::project_two_level(t, h, 1, 2), ContainsSubstring("omega"));

  auto bad = h;
  bad(0, 1) = cplx(0.1, 0.0);
  bad(1, 0) = cplx(0.1, 0.0);
  CHECK_THROWS_AS(qclock::project_two_level(t, bad, 0, 1), std::invalid_argument);
}
