#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dfrc/objective.hpp"
#include "dfrc/outer.hpp"
#include "dfrc/rng.hpp"

using namespace dfrc;

namespace {

void check_feasible(const WaveformMatrix& x, const Scenario& sc,
                    ConstraintMode mode, bool use_mui) {
  const auto& cfg = sc.cfg;
  if (use_mui)
    CHECK(mui_energy(x, sc.comm) <= cfg.mui_budget * (1.0 + 1e-6));
  if (mode == ConstraintMode::kEnergy) {
    CHECK(x.total_energy() <= cfg.transmit_energy * (1.0 + 1e-9));
  } else {
    for (int n = 0; n < cfg.n_tx; ++n) {
      CHECK(x.samples.col(n).squaredNorm() ==
            doctest::Approx(cfg.transmit_energy / cfg.n_tx).epsilon(1e-9));
      CHECK(papr_of_column(x.samples.col(n)) <=
            cfg.papr_limit * (1.0 + 1e-9));
    }
  }
}

void check_monotone(const SolverReport& rep) {
  for (std::size_t i = 1; i < rep.objective_trace.size(); ++i)
    CHECK(rep.objective_trace[i] >= rep.objective_trace[i - 1] - 1e-9);
}

}  // namespace

TEST_CASE("make_scenario") {
  const ScenarioConfig cfg = small_scenario_config();
  const Scenario a = make_scenario(cfg);
  const Scenario b = make_scenario(cfg);
  CHECK((a.comm.channel - b.comm.channel).norm() == 0.0);
  CHECK((a.comm.symbols - b.comm.symbols).norm() == 0.0);
  CHECK((a.x0.samples - b.x0.samples).norm() == 0.0);
  CHECK(a.comm.channel.rows() == cfg.n_users);
  CHECK(a.comm.channel.cols() == cfg.n_tx);
  CHECK(a.x0.total_energy() ==
        doctest::Approx(cfg.transmit_energy).epsilon(1e-12));
  ScenarioConfig other = cfg;
  other.rng_seed = cfg.rng_seed + 1;
  CHECK((make_scenario(other).comm.channel - a.comm.channel).norm() > 0.0);
}

TEST_CASE("restore_feasibility") {
  const ScenarioConfig cfg = small_scenario_config();
  const Scenario sc = make_scenario(cfg);
  Rng rng(17);
  CxMatrix m(cfg.code_length, cfg.n_tx);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m(i) = 2.0 * rng.complex_gaussian();
  const WaveformMatrix bad{m};

  SUBCASE("energy mode") {
    const WaveformMatrix x =
        restore_feasibility(bad, sc.comm, cfg, ConstraintMode::kEnergy, true);
    check_feasible(x, sc, ConstraintMode::kEnergy, true);
  }
  SUBCASE("papr mode") {
    const WaveformMatrix x =
        restore_feasibility(bad, sc.comm, cfg, ConstraintMode::kPapr, true);
    check_feasible(x, sc, ConstraintMode::kPapr, true);
  }
  SUBCASE("without the MUI constraint only the set projection acts") {
    const WaveformMatrix x =
        restore_feasibility(bad, sc.comm, cfg, ConstraintMode::kEnergy,
                            false);
    CHECK(x.total_energy() <= cfg.transmit_energy * (1.0 + 1e-12));
  }
}

TEST_CASE("mm_design") {
  const ScenarioConfig cfg = small_scenario_config();
  const Scenario sc = make_scenario(cfg);
  const DesignOptions opts;

  const SolverReport admm_rep =
      mm_design(sc, InnerSolverKind::kAdmm, ConstraintMode::kEnergy, opts);
  const SolverReport sdr_rep =
      mm_design(sc, InnerSolverKind::kSdr, ConstraintMode::kEnergy, opts);

  SUBCASE("monotone trace, feasible output, convergence") {
    for (const SolverReport* rep : {&admm_rep, &sdr_rep}) {
      check_monotone(*rep);
      CHECK(rep->converged);
      check_feasible(rep->final_waveform, sc, ConstraintMode::kEnergy, true);
      CHECK(rep->objective_trace.back() > rep->objective_trace.front());
    }
  }
  SUBCASE("inner solvers agree") {
    const double a = admm_rep.objective_trace.back();
    const double b = sdr_rep.objective_trace.back();
    CHECK(std::abs(a - b) <= 1e-3 * std::max(std::abs(a), std::abs(b)));
  }
  SUBCASE("PAPR mode is feasible and no better than energy mode") {
    const SolverReport papr_rep =
        mm_design(sc, InnerSolverKind::kAdmm, ConstraintMode::kPapr, opts);
    check_monotone(papr_rep);
    check_feasible(papr_rep.final_waveform, sc, ConstraintMode::kPapr, true);
    CHECK(papr_rep.objective_trace.back() <=
          admm_rep.objective_trace.back() + 1e-9);
  }
  SUBCASE("SDR inner rejects PAPR mode") {
    CHECK_THROWS(mm_design(sc, InnerSolverKind::kSdr, ConstraintMode::kPapr,
                           opts));
  }
}

TEST_CASE("radar_only_design dominates and matches the inactive-budget case") {
  ScenarioConfig cfg = small_scenario_config();
  const Scenario sc = make_scenario(cfg);
  const DesignOptions opts;

  const SolverReport radar =
      radar_only_design(sc, ConstraintMode::kEnergy, opts);
  check_monotone(radar);
  CHECK_FALSE(radar.mui_applicable);

  const SolverReport constrained =
      mm_design(sc, InnerSolverKind::kAdmm, ConstraintMode::kEnergy, opts);
  CHECK(radar.objective_trace.back() >=
        constrained.objective_trace.back() - 1e-9);

  // an unattainably loose MUI budget leaves the radar problem unchanged
  ScenarioConfig loose = cfg;
  loose.mui_budget = 10.0 * sc.comm.symbols.squaredNorm() + 10.0;
  const Scenario sc_loose = make_scenario(loose);
  const SolverReport free_rep =
      mm_design(sc_loose, InnerSolverKind::kAdmm, ConstraintMode::kEnergy,
                opts);
  // both runs stop on the same relative-change rule, so they agree only up
  // to that tolerance
  const double a = free_rep.objective_trace.back();
  const double b = radar.objective_trace.back();
  CHECK(std::abs(a - b) <= 1e-3 * std::max(1.0, std::abs(b)));
}

TEST_CASE("admm_design") {
  const ScenarioConfig cfg = small_scenario_config();
  const Scenario sc = make_scenario(cfg);
  const DesignOptions opts;

  SUBCASE("energy mode beats or matches MM and lands feasible") {
    const SolverReport rep = admm_design(sc, ConstraintMode::kEnergy, opts);
    check_feasible(rep.final_waveform, sc, ConstraintMode::kEnergy, true);
    const SolverReport mm =
        mm_design(sc, InnerSolverKind::kAdmm, ConstraintMode::kEnergy, opts);
    CHECK(rep.objective_trace.back() >= mm.objective_trace.back() - 1e-2);
    CHECK(rep.converged);
  }
  SUBCASE("papr mode with rho = 1 forces constant modulus") {
    ScenarioConfig cm = cfg;
    cm.papr_limit = 1.0;
    const Scenario sc_cm = make_scenario(cm);
    const SolverReport rep = admm_design(sc_cm, ConstraintMode::kPapr, opts);
    const double per = cm.transmit_energy / cm.n_tx;
    for (int n = 0; n < cm.n_tx; ++n) {
      CHECK(rep.final_waveform.samples.col(n).squaredNorm() ==
            doctest::Approx(per).epsilon(1e-9));
      CHECK(papr_of_column(rep.final_waveform.samples.col(n)) <=
            1.0 + 1e-9);
    }
    // constant modulus can make the interference ball unreachable, so only
    // the per-antenna set is required here
    check_feasible(rep.final_waveform, sc_cm, ConstraintMode::kPapr, false);
  }
}

TEST_CASE("inner_mm_x_update ascends the composite") {
  const ScenarioConfig cfg = small_scenario_config();
  const Scenario sc = make_scenario(cfg);
  DesignOptions opts;
  opts.outer_penalty = 1.0;

  Rng rng(23);
  CxMatrix u(cfg.code_length, cfg.n_users), lam(cfg.code_length, cfg.n_users);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    u(i) = 0.01 * rng.complex_gaussian();
    lam(i) = 0.01 * rng.complex_gaussian();
  }
  const double before =
      outer_admm_composite(sc.x0, u, lam, sc, opts.outer_penalty);
  const WaveformMatrix x =
      inner_mm_x_update(sc.x0, u, lam, sc, ConstraintMode::kEnergy, opts);
  const double after = outer_admm_composite(x, u, lam, sc, opts.outer_penalty);
  CHECK(after >= before - 1e-9);
  CHECK(x.total_energy() <= cfg.transmit_energy * (1.0 + 1e-9));
}
