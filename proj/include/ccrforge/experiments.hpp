#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccrforge/arrival_dynamics.hpp"
#include "ccrforge/ccr_lab.hpp"
#include "ccrforge/confined_system.hpp"
#include "ccrforge/experiment_config.hpp"
#include "ccrforge/quantum_clock.hpp"
#include "ccrforge/time_operators.hpp"
#include "ccrforge/tolerances.hpp"
#include "ccrforge/version.hpp"

namespace ccrforge::cli {

// Everything one run produces. CSV payloads are prebuilt strings so the
// writer stage is a plain byte dump; report serialization is the single
// json -> text path in serialize_report.
struct RunOutput {
  nlohmann::json report;
  std::vector<std::pair<std::string, std::string>> csv_files;
  bool assertion_failed = false;
  std::string assertion_message;
};

inline std::string format_float(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// CSV with a mandatory header, LF endings and 17-significant-digit floats.
class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out_ += ',';
      out_ += columns[i];
    }
    out_ += '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ += ',';
      out_ += format_float(values[i]);
    }
    out_ += '\n';
  }

  std::string str() const { return out_; }

 private:
  std::string out_;
};

inline std::string serialize_report(const nlohmann::json& report) {
  return report.dump(2) + "\n";
}

namespace detail {

inline nlohmann::json system_json(const confined::SystemConfig& s) {
  return nlohmann::json{{"K", s.K}, {"gamma", s.gamma}, {"l", s.l}, {"mu", s.mu}};
}

inline std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> t(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    t[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return t;
}

inline nlohmann::json base_report(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["artifact"] = "ccr-forge";
  j["version"] = version_string;
  j["experiment"] = experiment_name(cfg.experiment);
  j["config"] = nlohmann::json{{"system", system_json(cfg.system)}};
  return j;
}

}  // namespace detail

inline RunOutput run_verify_dense(const ExperimentConfig& cfg) {
  RunOutput out;
  out.report = detail::base_report(cfg);
  out.report["config"]["K_series"] = cfg.k_series;
  out.report["config"]["seeds"] = cfg.seeds;
  out.report["config"]["residual_bound"] = cfg.residual_bound;

  CsvBuilder csv({"K", "residual"});
  nlohmann::json per_k = nlohmann::json::array();
  double overall = 0.0;
  double zero_sum_defect = 0.0;

  for (int k_cut : cfg.k_series) {
    confined::SystemConfig sc = cfg.system;
    sc.K = k_cut;
    const confined::ConfinedSystem sys = confined::build_system(sc);
    confined::require_nondegenerate(sys.spectrum);
    const numkernel::ComplexMatrix t_c = timeops::build_characteristic_time(sys.spectrum.energies());

    const int support = cfg.support != 0 ? cfg.support : std::max(1, k_cut / 2);
    std::vector<double> residuals;
    residuals.reserve(cfg.seeds.size());
    for (std::uint64_t seed : cfg.seeds) {
      const ccrlab::DomainVector v = ccrlab::dense_domain_sample(k_cut, support, seed);
      zero_sum_defect = std::max(zero_sum_defect, std::abs(v.coefficient_sum()));
      residuals.push_back(ccrlab::ccr_residual(t_c, sys.H, v));
    }
    const double worst = *std::max_element(residuals.begin(), residuals.end());
    overall = std::max(overall, worst);
    csv.row({static_cast<double>(k_cut), worst});
    per_k.push_back(nlohmann::json{
        {"K", k_cut}, {"support", support}, {"residuals", residuals}, {"max_residual", worst}});
  }

  out.report["results"] = nlohmann::json{
      {"pair_label", "[T_c, H] on zero-sum states"},
      {"domain", "dense_zero_sum"},
      {"per_K", per_k},
      {"max_residual", overall},
      {"zero_sum_defect", zero_sum_defect},
  };
  out.report["tolerances"] =
      nlohmann::json{{"residual_bound", cfg.residual_bound}, {"degeneracy_rel", tol::degeneracy_rel}};
  out.csv_files.emplace_back("residual_series.csv", csv.str());

  if (overall > cfg.residual_bound) {
    out.assertion_failed = true;
    out.assertion_message = "max residual " + format_float(overall) + " exceeds bound " +
                            format_float(cfg.residual_bound);
  }
  out.report["assertion"] = nlohmann::json{{"passed", !out.assertion_failed},
                                           {"detail", out.assertion_message}};
  return out;
}

inline RunOutput run_verify_closed(const ExperimentConfig& cfg) {
  RunOutput out;
  out.report = detail::base_report(cfg);
  out.report["config"]["K_series"] = cfg.k_series;
  out.report["config"]["bump_m"] = cfg.bump_m;
  out.report["config"]["quad_order"] = cfg.quad_order;
  out.report["config"]["residual_bound"] = cfg.residual_bound;

  CsvBuilder csv({"K", "residual"});
  nlohmann::json per_k = nlohmann::json::array();
  std::vector<double> residuals;
  double ortho = 0.0;

  for (int k_cut : cfg.k_series) {
    confined::SystemConfig sc = cfg.system;
    sc.K = k_cut;
    const confined::ConfinedSystem sys = confined::build_system(sc);
    confined::require_nondegenerate(sys.spectrum);
    const timeops::TimeOperatorBuild build =
        timeops::build_toa_matrix(sc, timeops::ToaMethod::product);
    const ccrlab::DomainVector b = ccrlab::bump_domain_sample(cfg.bump_m, sc, cfg.quad_order);

    const ccrlab::DomainVector c = confined::constant_coefficients(sc);
    const double overlap = std::abs(numkernel::inner(c.coefficients, b.coefficients)) / c.norm();
    ortho = std::max(ortho, overlap);

    const double r = ccrlab::ccr_residual(build.matrix, sys.H, b);
    residuals.push_back(r);
    csv.row({static_cast<double>(k_cut), r});
    per_k.push_back(nlohmann::json{{"K", k_cut}, {"residual", r}, {"constant_overlap", overlap}});
  }

  bool monotone = true;
  for (std::size_t i = 1; i < residuals.size(); ++i)
    if (!(residuals[i] < residuals[i - 1])) monotone = false;

  out.report["results"] = nlohmann::json{
      {"pair_label", "[T, H] on boundary-flat states"},
      {"domain", "closed_bump"},
      {"construction", "product"},
      {"per_K", per_k},
      {"final_residual", residuals.back()},
      {"monotone_decreasing", monotone},
      {"constant_overlap_max", ortho},
  };
  out.report["tolerances"] = nlohmann::json{{"residual_bound", cfg.residual_bound}};
  out.csv_files.emplace_back("residual_series.csv", csv.str());

  if (residuals.back() > cfg.residual_bound) {
    out.assertion_failed = true;
    out.assertion_message = "final residual " + format_float(residuals.back()) +
                            " exceeds bound " + format_float(cfg.residual_bound);
  }
  out.report["assertion"] = nlohmann::json{{"passed", !out.assertion_failed},
                                           {"detail", out.assertion_message}};
  return out;
}

inline RunOutput run_defect(const ExperimentConfig& cfg) {
  RunOutput out;
  out.report = detail::base_report(cfg);
  out.report["config"]["K_series"] = cfg.k_series;

  nlohmann::json per_k = nlohmann::json::array();
  for (int k_cut : cfg.k_series) {
    confined::SystemConfig sc = cfg.system;
    sc.K = k_cut;
    const confined::ConfinedSystem sys = confined::build_system(sc);
    confined::require_nondegenerate(sys.spectrum);
    const numkernel::ComplexMatrix t_c = timeops::build_characteristic_time(sys.spectrum.energies());
    const ccrlab::DefectReport rep = ccrlab::commutator_defect(t_c, sys.H);
    per_k.push_back(nlohmann::json{
        {"K", k_cut},
        {"dim", rep.dim},
        {"max_entry_deviation", rep.max_entry_deviation},
        {"spectral_norm", rep.spectral_norm},
        {"expected_norm", rep.expected_norm},
        {"second_singular", rep.second_singular},
        {"rank_one", rep.rank_one},
    });
  }

  out.report["results"] = nlohmann::json{{"pair_label", "[T_c, H] - i"}, {"per_K", per_k}};
  out.report["tolerances"] = nlohmann::json{{"algebraic", tol::algebraic}};
  out.report["assertion"] = nlohmann::json{{"passed", true}, {"detail", ""}};
  return out;
}

inline RunOutput run_falsify_pauli(const ExperimentConfig& cfg) {
  RunOutput out;
  out.report = detail::base_report(cfg);
  out.report["config"]["epsilon"] = cfg.epsilon;
  out.report["config"]["eigenindex"] = cfg.eigenindex;

  const confined::ConfinedSystem sys = confined::build_system(cfg.system);
  confined::require_nondegenerate(sys.spectrum);
  const numkernel::ComplexMatrix t_c = timeops::build_characteristic_time(sys.spectrum.energies());
  const int idx = sys.index_map.to_index(cfg.eigenindex);
  const ccrlab::PauliReport rep = ccrlab::pauli_falsifier(t_c, sys.H, cfg.epsilon, idx);

  out.report["results"] = nlohmann::json{
      {"state_index", rep.state_index},
      {"state_label_k", cfg.eigenindex},
      {"base_energy", rep.base_energy},
      {"shifted_energy", rep.shifted_energy},
      {"mean_energy_after", rep.mean_energy_after},
      {"overlaps", rep.overlaps},
      {"largest_overlap", rep.largest_overlap},
      {"second_largest_overlap", rep.second_largest_overlap},
      {"overlap_cut", rep.overlap_cut},
      {"overlaps_above_cut", rep.overlaps_above_cut},
      {"eigenpair_residual", rep.eigenpair_residual},
      {"time_eigen_residual", rep.time_eigen_residual},
      {"time_eigenvalue_min", rep.time_eigenvalue_min},
      {"time_eigenvalue_max", rep.time_eigenvalue_max},
      {"spectrum_deviation", rep.spectrum_deviation},
      {"ground_energy_before", rep.ground_energy_before},
      {"ground_energy_after", rep.ground_energy_after},
  };
  out.report["tolerances"] = nlohmann::json{{"algebraic", tol::algebraic}};
  out.report["assertion"] = nlohmann::json{{"passed", true}, {"detail", ""}};
  return out;
}

inline RunOutput run_clock(const ExperimentConfig& cfg) {
  RunOutput out;
  out.report = detail::base_report(cfg);
  out.report["config"]["pair"] = cfg.pair;
  out.report["config"]["periods"] = cfg.periods;
  out.report["config"]["time_points"] = cfg.time_points;

  const confined::ConfinedSystem sys = confined::build_system(cfg.system);
  confined::require_nondegenerate(sys.spectrum);
  const numkernel::ComplexMatrix t_c = timeops::build_characteristic_time(sys.spectrum.energies());
  const qclock::TwoLevelClock clk = qclock::project_two_level(
      t_c, sys.H, sys.index_map.to_index(cfg.pair[0]), sys.index_map.to_index(cfg.pair[1]));

  const double period = 2.0 * std::numbers::pi / std::abs(clk.omega);
  const std::vector<double> times = detail::linspace(0.0, cfg.periods * period, cfg.time_points);
  const std::vector<qclock::ClockSample> samples = qclock::clock_series(clk, times);

  CsvBuilder csv({"t", "expect_closed", "expect_numeric", "product_closed", "product_numeric"});
  double worst_expect = 0.0;
  double worst_product = 0.0;
  for (const qclock::ClockSample& s : samples) {
    csv.row({s.t, s.expect_closed, s.expect_numeric, s.product_closed, s.product_numeric});
    worst_expect = std::max(worst_expect, std::abs(s.expect_closed - s.expect_numeric));
    worst_product = std::max(worst_product, std::abs(s.product_closed - s.product_numeric));
  }

  const qclock::WrappedTime wrap = qclock::wrap_time(times.back(), clk.omega);
  out.report["results"] = nlohmann::json{
      {"omega", clk.omega},
      {"period", period},
      {"amplitude", 1.0 / std::abs(clk.omega)},
      {"max_expect_deviation", worst_expect},
      {"max_product_deviation", worst_product},
      {"wrap_of_last_sample", {{"n", wrap.n}, {"tau", wrap.tau}, {"period", wrap.period}}},
  };
  out.report["tolerances"] = nlohmann::json{{"algebraic", tol::algebraic}};
  out.csv_files.emplace_back("clock_series.csv", csv.str());
  out.report["assertion"] = nlohmann::json{{"passed", true}, {"detail", ""}};
  return out;
}

inline RunOutput run_arrival(const ExperimentConfig& cfg) {
  RunOutput out;
  out.report = detail::base_report(cfg);
  out.report["config"]["w"] = cfg.w;
  out.report["config"]["grid_points"] = cfg.grid_points;
  out.report["config"]["time_points"] = cfg.time_points;
  out.report["config"]["state_offset"] = cfg.state_offset;

  const timeops::TimeOperatorBuild build =
      timeops::build_toa_matrix(cfg.system, timeops::ToaMethod::product);
  const numkernel::ComplexMatrix t_arr = timeops::arrival_operator(build);
  const arrival::ArrivalSpectrum spec = arrival::toa_spectrum(t_arr);

  const int n = static_cast<int>(spec.states.size());
  double symmetry_defect = 0.0;
  for (int j = 0; j < n; ++j)
    symmetry_defect = std::max(symmetry_defect,
                               std::abs(spec.states[static_cast<std::size_t>(j)].tau +
                                        spec.states[static_cast<std::size_t>(n - 1 - j)].tau));

  const int idx = arrival::median_positive_index(spec, cfg.state_offset);
  const arrival::ArrivalEigenstate& state = spec.states[static_cast<std::size_t>(idx)];
  const double t_max = cfg.t_max > 0.0 ? cfg.t_max : 2.0 * state.tau;
  const std::vector<double> times = detail::linspace(0.0, t_max, cfg.time_points);

  const arrival::CollapseSeries series =
      arrival::collapse_series(state, cfg.system, times, cfg.w, cfg.grid_points);

  // Time-reversal partner: conjugated coefficients give the -tau eigenstate
  // and its density at (q, t) must match the original at (-q, -t).
  arrival::ArrivalEigenstate partner;
  partner.tau = -state.tau;
  partner.coefficients.reserve(state.coefficients.size());
  for (const numkernel::cplx& c : state.coefficients) partner.coefficients.push_back(std::conj(c));
  std::vector<double> neg_times;
  neg_times.reserve(times.size());
  for (double t : times) neg_times.push_back(-t);
  const arrival::CollapseSeries partner_series =
      arrival::collapse_series(partner, cfg.system, neg_times, cfg.w, cfg.grid_points);

  double reversal_deviation = 0.0;
  for (std::size_t ti = 0; ti < times.size(); ++ti)
    for (int g = 0; g < cfg.grid_points; ++g)
      reversal_deviation = std::max(
          reversal_deviation,
          std::abs(series.density[ti][static_cast<std::size_t>(g)] -
                   partner_series.density[ti][static_cast<std::size_t>(cfg.grid_points - 1 - g)]));

  std::size_t peak = 0;
  for (std::size_t i = 1; i < series.mass_w.size(); ++i)
    if (series.mass_w[i] > series.mass_w[peak]) peak = i;
  double drift = 0.0;
  for (double m : series.total_mass) drift = std::max(drift, std::abs(m - series.total_mass.front()));

  // q mean at the sample nearest the eigenvalue, for the centering record.
  std::size_t near_tau = 0;
  for (std::size_t i = 1; i < times.size(); ++i)
    if (std::abs(times[i] - state.tau) < std::abs(times[near_tau] - state.tau)) near_tau = i;

  CsvBuilder csv({"t", "mass_w", "q_mean"});
  for (std::size_t i = 0; i < times.size(); ++i)
    csv.row({series.times[i], series.mass_w[i], series.q_mean[i]});

  out.report["results"] = nlohmann::json{
      {"state_index", idx},
      {"tau", state.tau},
      {"t_max", t_max},
      {"eigen_residual", spec.eigen_residual},
      {"spectrum_symmetry_defect", symmetry_defect},
      {"initial_mass_w", series.mass_w.front()},
      {"peak_mass_w", series.mass_w[peak]},
      {"peak_time", series.times[peak]},
      {"first_moment_near_tau", series.q_mean[near_tau]},
      {"first_moment_sample_time", series.times[near_tau]},
      {"total_mass_drift", drift},
      {"reversal_deviation", reversal_deviation},
  };
  out.report["tolerances"] = nlohmann::json{{"arrival_eigen_residual", tol::arrival_eigen_residual},
                                            {"probability", tol::probability}};
  out.csv_files.emplace_back("collapse_series.csv", csv.str());
  out.report["assertion"] = nlohmann::json{{"passed", true}, {"detail", ""}};
  return out;
}

inline RunOutput run_crosscheck_toa(const ExperimentConfig& cfg) {
  RunOutput out;
  out.report = detail::base_report(cfg);
  out.report["config"]["quad_orders"] = cfg.quad_orders;

  const timeops::TimeOperatorBuild product =
      timeops::build_toa_matrix(cfg.system, timeops::ToaMethod::product);

  nlohmann::json per_order = nlohmann::json::array();
  std::vector<double> diffs;
  for (int order : cfg.quad_orders) {
    const timeops::TimeOperatorBuild kernel =
        timeops::build_toa_matrix(cfg.system, timeops::ToaMethod::kernel, order);
    const double diff = numkernel::max_entry_diff(kernel.matrix, product.matrix);
    diffs.push_back(diff);
    per_order.push_back(nlohmann::json{{"quad_order", order}, {"max_entry_diff", diff}});
  }
  bool monotone = true;
  for (std::size_t i = 1; i < diffs.size(); ++i)
    if (!(diffs[i] < diffs[i - 1])) monotone = false;

  const confined::BasisIndexMap map{cfg.system.K};
  const numkernel::cplx probe = product.matrix(map.to_index(0), map.to_index(1));
  out.report["results"] = nlohmann::json{
      {"per_order", per_order},
      {"monotone_decreasing", monotone},
      {"final_max_entry_diff", diffs.back()},
      {"product_element_k0_k1", {{"re", probe.real()}, {"im", probe.imag()}}},
  };
  out.report["tolerances"] = nlohmann::json{{"reconstruction", tol::reconstruction}};
  out.report["assertion"] = nlohmann::json{{"passed", true}, {"detail", ""}};
  return out;
}

inline RunOutput run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::verify_dense: return run_verify_dense(cfg);
    case Experiment::verify_closed: return run_verify_closed(cfg);
    case Experiment::defect: return run_defect(cfg);
    case Experiment::falsify_pauli: return run_falsify_pauli(cfg);
    case Experiment::clock: return run_clock(cfg);
    case Experiment::arrival: return run_arrival(cfg);
    case Experiment::crosscheck_toa: return run_crosscheck_toa(cfg);
  }
  throw std::logic_error("run_experiment: unhandled experiment");
}

}  // namespace ccrforge::cli
