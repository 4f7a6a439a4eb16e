#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ccrforge/ccr_lab.hpp"
#include "ccrforge/confined_system.hpp"
#include "ccrforge/time_operators.hpp"
#include "test_util.hpp"

using namespace ccrforge;
using confined::SystemConfig;
using numkernel::ComplexMatrix;
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

ComplexMatrix pauli_matrix(char axis) {
  ComplexMatrix m(2);
  switch (axis) {
    case 'x':
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 'y':
      m(0, 1) = cplx(0.0, -1.0);
      m(1, 0) = cplx(0.0, 1.0);
      break;
    default:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

}  // namespace

TEST_CASE("commutator of the spin matrices") {
  const auto c = ccrlab::commutator(pauli_matrix('x'), pauli_matrix('y'));
  const auto expect = cplx(0.0, 2.0) * pauli_matrix('z');
  CHECK(numkernel::max_entry_diff(c, expect) < 1e-15);
}

TEST_CASE("dense domain samples are normalized zero-sum vectors on the support window") {
  const auto v = ccrlab::dense_domain_sample(16, 8, 7);
  CHECK(v.K == 16);
  CHECK(v.tag == ccrlab::DomainVector::Tag::dense_zero_sum);
  CHECK(std::abs(v.norm() - 1.0) < 1e-14);
  CHECK(std::abs(v.coefficient_sum()) < tol::zero_sum);
  for (int k = -16; k <= 16; ++k) {
    if (std::abs(k) <= 8) continue;
    CHECK(v.coefficients[static_cast<std::size_t>(k + 16)] == cplx(0.0, 0.0));
  }
}

TEST_CASE("dense domain samples are seed deterministic") {
  const auto a = ccrlab::dense_domain_sample(12, 6, 3);
  const auto b = ccrlab::dense_domain_sample(12, 6, 3);
  const auto c = ccrlab::dense_domain_sample(12, 6, 4);
  REQUIRE(a.coefficients.size() == b.coefficients.size());
  for (std::size_t i = 0; i < a.coefficients.size(); ++i)
    CHECK(a.coefficients[i] == b.coefficients[i]);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.coefficients.size(); ++i)
    diff = std::max(diff, std::abs(a.coefficients[i] - c.coefficients[i]));
  CHECK(diff > 1e-3);
}

TEST_CASE("dense domain sample rejects bad shapes") {
  CHECK_THROWS_AS(ccrlab::dense_domain_sample(0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(ccrlab::dense_domain_sample(8, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ccrlab::dense_domain_sample(8, 9, 1), std::invalid_argument);
}

TEST_CASE("bump domain samples are normalized and decay fast") {
  const auto cfg = make_cfg(pi / 4.0, 32);
  const auto v = ccrlab::bump_domain_sample(4, cfg);
  CHECK(v.tag == ccrlab::DomainVector::Tag::closed_bump);
  CHECK(std::abs(v.norm() - 1.0) < 1e-12);
  double peak = 0.0;
  for (const auto& c : v.coefficients) peak = std::max(peak, std::abs(c));
  const double edge = std::max(std::abs(v.coefficients.front()), std::abs(v.coefficients.back()));
  CHECK(edge < 1e-3 * peak);
}

TEST_CASE("bump domain samples lose overlap with the constant function as K grows") {
  double prev = 1.0;
  for (int K : {32, 64}) {
    const auto cfg = make_cfg(pi / 4.0, K);
    const auto v = ccrlab::bump_domain_sample(4, cfg);
    const auto c = confined::constant_coefficients(cfg);
    const double defect = std::abs(numkernel::inner(c.coefficients, v.coefficients)) / c.norm();
    INFO("K = " << K << " defect = " << defect);
    CHECK(defect < 1e-5);
    CHECK(defect < prev);
    prev = defect;
  }
}

TEST_CASE("bump domain sample rejects bad shapes") {
  const auto cfg = make_cfg(pi / 4.0, 8);
  CHECK_THROWS_AS(ccrlab::bump_domain_sample(1, cfg), std::invalid_argument);
  CHECK_THROWS_AS(ccrlab::bump_domain_sample(4, cfg, 4), std::invalid_argument);
  CHECK_NOTHROW(ccrlab::bump_domain_sample(2, cfg));
}

TEST_CASE("ccr residual vanishes on zero-sum vectors") {
  const auto sys = confined::build_system(make_cfg(pi / 4.0, 16));
  const auto t = timeops::build_characteristic_time(sys.spectrum.energies());
  for (unsigned long seed : {1ul, 2ul, 3ul}) {
    const auto v = ccrlab::dense_domain_sample(16, 8, seed);
    CHECK(ccrlab::ccr_residual(t, sys.H, v) < tol::algebraic);
  }
}

TEST_CASE("ccr residual on a basis vector matches the brute-force commutator") {
  const auto sys = confined::build_system(make_cfg(pi / 4.0, 4));
  const auto t = timeops::build_characteristic_time(sys.spectrum.energies());
  std::vector<cplx> e0(9, cplx(0.0, 0.0));
  e0[0] = 1.0;

  // Direct dense evaluation of [T, H] e0 - i e0.
  const auto c = ccrlab::commutator(t, sys.H);
  auto r = numkernel::apply(c, e0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= cplx(0.0, 1.0) * e0[i];
  const double oracle = numkernel::norm2(r);

  const double res = ccrlab::ccr_residual(t, sys.H, e0);
  CHECK(std::abs(res - oracle) < 1e-13);
  // The defect column has one unit entry per row, so the norm is sqrt(N) = 3.
  CHECK_THAT(res, Catch::Matchers::WithinAbs(3.0, 1e-10));
}

TEST_CASE("ccr residual rejects the zero vector") {
  const auto sys = confined::build_system(make_cfg(pi / 4.0, 2));
  const auto t = timeops::build_characteristic_time(sys.spectrum.energies());
  const std::vector<cplx> zero(5, cplx(0.0, 0.0));
  CHECK_THROWS_AS(ccrlab::ccr_residual(t, sys.H, zero), std::invalid_argument);
}

TEST_CASE("commutator defect is the rank-one all-ones deviation") {
  const auto sys = confined::build_system(make_cfg(pi / 4.0, 2));
  const auto t = timeops::build_characteristic_time(sys.spectrum.energies());
  const auto report = ccrlab::commutator_defect(t, sys.H);
  CHECK(report.dim == 5);
  CHECK(report.expected_norm == 5.0);
  CHECK(report.max_entry_deviation < 1e-13);
  CHECK(std::abs(report.spectral_norm - 5.0) < 5.0 * tol::reconstruction);
  CHECK(report.second_singular < 1e-12);
  CHECK(report.rank_one);
}

TEST_CASE("commutator defect rejects mismatched operator pairs") {
  const auto sys = confined::build_system(make_cfg(pi / 4.0, 2));
  auto t = timeops::build_characteristic_time(sys.spectrum.energies());
  t(0, 1) += cplx(1e-6, 0.0);
  t(1, 0) += cplx(1e-6, 0.0);
  CHECK_THROWS_WITH(ccrlab::commutator_defect(t, sys.H), ContainsSubstring("characteristic"));

  const auto good = timeops::build_characteristic_time(sys.spectrum.energies());
  auto h = sys.H;
  h(0, 1) = cplx(0.2, 0.0);
  h(1, 0) = cplx(0.2, 0.0);
  CHECK_THROWS_AS(ccrlab::commutator_defect(good, h), std::invalid_argument);
}

TEST_CASE("energy shift probe conserves probability and the spectrum") {
  const auto sys = confined::build_system(make_cfg(pi / 4.0, 8));
  const auto t = timeops::build_characteristic_time(sys.spectrum.energies());
  const auto report = ccrlab::pauli_falsifier(t, sys.H, 1.0, 8);

  CHECK(report.epsilon == 1.0);
  CHECK(report.state_index == 8);
  CHECK(std::abs(report.base_energy - sys.H(8, 8).real()) < 1e-15);
  double total = 0.0;
  double largest = 0.0;
  int above = 0;
  for (double w : report.overlaps) {
    total += w;
    largest = std::max(largest, w);
    if (w > report.overlap_cut) ++above;
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
  CHECK(largest == report.largest_overlap);
  CHECK(above == report.overlaps_above_cut);
  CHECK(report.second_largest_overlap <= report.largest_overlap);

  const auto energies = sys.spectrum.energies();
  const double emin = *std::min_element(energies.begin(), energies.end());
  const double emax = *std::max_element(energies.begin(), energies.end());
  CHECK(report.spectrum_deviation < 1e-12 * (1.0 + emax));
  CHECK(std::abs(report.ground_energy_after - report.ground_energy_before) < 1e-12 * (1.0 + emax));
  CHECK(report.time_eigen_residual < 1e-12);
  CHECK(report.time_eigenvalue_min <= report.time_eigenvalue_max);

  // The measured mean energy is a convex combination of the spectrum.  The
  // conjugated state is far from an eigenstate at the claimed shifted energy:
  // the shift lands as spreading over the spectrum, not as a translation of it.
  CHECK(report.mean_energy_after >= emin - 1e-12);
  CHECK(report.mean_energy_after <= emax + 1e-12);
  CHECK(std::abs(report.mean_energy_after - report.base_energy - report.epsilon) > 1e-2);
  CHECK(report.eigenpair_residual > 1.0);
  CHECK(report.overlaps_above_cut >= 2);
}

TEST_CASE("energy shift probe at zero step is the identity conjugation") {
  const auto sys = confined::build_system(make_cfg(pi / 4.0, 4));
  const auto t = timeops::build_characteristic_time(sys.spectrum.energies());
  const auto report = ccrlab::pauli_falsifier(t, sys.H, 0.0, 4);
  CHECK(report.largest_overlap > 1.0 - 1e-12);
  CHECK(report.overlaps_above_cut == 1);
  CHECK(std::abs(report.shifted_energy - report.base_energy) < 1e-10);
  CHECK(std::abs(report.mean_energy_after - report.base_energy) < 1e-10);
  CHECK(report.eigenpair_residual < 1e-10);
}

TEST_CASE("energy shift probe rejects bad state indices") {
  const auto sys = confined::build_system(make_cfg(pi / 4.0, 2));
  const auto t = timeops::build_characteristic_time(sys.spectrum.energies());
  CHECK_THROWS_AS(ccrlab::pauli_falsifier(t, sys.H, 1.0, -1), std::invalid_argument);
  CHECK_THROWS_AS(ccrlab::pauli_falsifier(t, sys.H, 1.0, 5), std::invalid_argument);
}
