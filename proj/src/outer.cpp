#include "dfrc/outer.hpp"

#include <chrono>

#include "dfrc/papr.hpp"
#include "dfrc/rng.hpp"
#include <cmath>
#include <stdexcept>

namespace dfrc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

CxVector symbols_vec(const CommScenario& comm) {
  const CxMatrix st = comm.symbols.transpose();
  return Eigen::Map<const CxVector>(st.data(), st.size());
}

}  // namespace

Scenario make_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  Scenario sc;
  sc.cfg = cfg;
  sc.target = default_rician_target(cfg.n_tx, cfg.n_rx);
  sc.comm.channel = generate_channel(cfg.n_users, cfg.n_tx,
                                     Rng::substream(cfg.rng_seed, 1).integer());
  sc.comm.symbols =
      generate_qpsk(cfg.n_users, cfg.code_length, cfg.symbol_energy,
                    Rng::substream(cfg.rng_seed, 2).integer());
  sc.comm.mui_budget = cfg.mui_budget;
  sc.comm.per_user_noise = RealVector::Ones(cfg.n_users);
  sc.ctx = make_objective_context(sc.target, cfg.noise_power, cfg.n_rx,
                                  cfg.code_length);
  sc.x0 = quasi_orthogonal_waveforms(cfg.code_length, cfg.n_tx,
                                     cfg.transmit_energy,
                                     Rng::substream(cfg.rng_seed, 3).integer());
  return sc;
}

PaprSet papr_set_from_config(const ScenarioConfig& cfg) {
  PaprSet set;
  set.per_antenna_energy = cfg.transmit_energy / cfg.n_tx;
  set.papr_limit = cfg.papr_limit;
  set.code_length = cfg.code_length;
  return set;
}

WaveformMatrix restore_feasibility(const WaveformMatrix& x,
                                   const CommScenario& comm,
                                   const ScenarioConfig& cfg,
                                   ConstraintMode mode, bool use_mui,
                                   int max_sweeps) {
  const double pt = cfg.transmit_energy;
  const double eps = comm.mui_budget;
  const PaprSet set = papr_set_from_config(cfg);

  CxMatrix xm = x.samples;

  Eigen::LLT<CxMatrix> hh_llt;
  if (use_mui)
    hh_llt.compute(comm.channel * comm.channel.adjoint());

  auto mui_of = [&](const CxMatrix& m) {
    return (comm.channel * m.transpose() - comm.symbols).squaredNorm();
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (use_mui) {
      // exact landing on the MUI ball via the minimum-norm correction
      CxMatrix v = xm * comm.channel.transpose() -
                   comm.symbols.transpose();  // L x M
      const double n2 = v.squaredNorm();
      if (n2 > eps) {
        const CxMatrix w = (std::sqrt(eps / n2) *
                            (1.0 - 1e-12) - 1.0) * v;  // target - current
        // minimum-norm lift: solve (H H^H) U^T = W^T, correction = U conj(H)
        const CxMatrix u =
            hh_llt.solve(CxMatrix(w.transpose())).transpose();  // L x M
        xm += u * comm.channel.conjugate();
      }
    }
    // end each sweep on the exact constraint-set projection
    if (mode == ConstraintMode::kEnergy) {
      const double e = xm.squaredNorm();
      if (e > pt) xm *= std::sqrt(pt / e);
    } else {
      for (int n = 0; n < cfg.n_tx; ++n)
        xm.col(n) = papr_project(xm.col(n), set);
    }
    if (!use_mui || mui_of(xm) <= eps * (1.0 + 1e-8)) break;
  }
  return WaveformMatrix{xm};
}

namespace {

/// Single surrogate-maximization step without MUI coupling (radar-only).
CxVector radar_only_step(const Surrogate& surr, double budget,
                         ConstraintMode mode, const PaprSet& set,
                         const CxVector& x_cur, double mm_tol) {
  if (mode == ConstraintMode::kEnergy)
    return solve_norm_ball_quadratic(-surr.quad, -surr.lin, budget).x;
  PaprQpOptions opts;
  opts.tol = mm_tol;
  return solve_papr_qp(-surr.quad, -surr.lin, set, x_cur, opts);
}

}  // namespace

SolverReport mm_design_impl(const Scenario& scenario, InnerSolverKind inner,
                            ConstraintMode constraint,
                            const DesignOptions& options, bool use_mui) {
  const auto& cfg = scenario.cfg;
  if (constraint == ConstraintMode::kPapr && inner == InnerSolverKind::kSdr)
    throw std::invalid_argument(
        "mm_design: the SDR inner solver has no PAPR variant");

  const auto t0 = Clock::now();
  const SelectionMatrix gs =
      selection_matrix(cfg.n_tx, cfg.n_rx, cfg.code_length);
  const PaprSet set = papr_set_from_config(cfg);

  SolverReport report;
  report.constraint_mode = constraint;
  report.mui_applicable = use_mui;

  WaveformMatrix x = restore_feasibility(scenario.x0, scenario.comm, cfg,
                                         constraint, use_mui);
  double d_cur = relative_entropy(x, scenario.ctx);
  report.objective_trace.push_back(d_cur);
  report.mui_trace.push_back(use_mui ? mui_energy(x, scenario.comm) : -1.0);
  report.residual_trace.emplace_back(0.0, 0.0);
  report.time_trace.push_back(seconds_since(t0));

  InnerAdmmOptions inner_opts = options.inner;
  inner_opts.constraint = constraint == ConstraintMode::kPapr
                              ? InnerConstraint::kPapr
                              : InnerConstraint::kEnergy;
  inner_opts.papr = set;
  inner_opts.mm_tol = options.xi2;

  SdrResult sdr_state;  // warm start across MM iterations
  bool have_sdr_state = false;

  for (int k = 0; k < options.max_outer; ++k) {
    const Surrogate surr = surrogate_at(x, scenario.target, scenario.ctx, gs);
    CxVector cand;
    std::pair<double, double> residuals{0.0, 0.0};

    if (!use_mui) {
      cand = radar_only_step(surr, cfg.transmit_energy, constraint, set,
                             vec(x.samples), options.xi2);
    } else if (inner == InnerSolverKind::kAdmm) {
      const InnerAdmmState st = admm_qcqp(surr, scenario.comm,
                                          cfg.transmit_energy, vec(x.samples),
                                          inner_opts);
      cand = st.x;
      residuals = {st.primal_residual, st.dual_residual};
    } else {
      const HomogenizedProblem hp =
          homogenize(surr, scenario.comm, cfg.transmit_energy, cfg.mui_budget,
                     cfg.code_length);
      sdr_state = solve_sdr(hp, options.sdr,
                            have_sdr_state ? &sdr_state : nullptr);
      have_sdr_state = true;
      residuals = {sdr_state.primal_residual, sdr_state.dual_residual};
      cand = rank_one_extract(sdr_state.xhat, hp);
    }

    WaveformMatrix x_cand{unvec(cand, cfg.code_length, cfg.n_tx)};
    x_cand = restore_feasibility(x_cand, scenario.comm, cfg, constraint,
                                 use_mui);
    const double d_cand = relative_entropy(x_cand, scenario.ctx);
    if (d_cand < d_cur) {  // stationary up to inner-solver noise
      report.converged = true;
      break;
    }

    x = x_cand;
    const double d_prev = d_cur;
    d_cur = d_cand;
    report.objective_trace.push_back(d_cur);
    report.mui_trace.push_back(use_mui ? mui_energy(x, scenario.comm) : -1.0);
    report.residual_trace.push_back(residuals);
    report.time_trace.push_back(seconds_since(t0));
    report.iterations = k + 1;

    const double rel = std::abs(d_cur) > 1e-12
                           ? std::abs(d_cur - d_prev) / std::abs(d_cur)
                           : std::abs(d_cur - d_prev);
    if (rel < options.xi1) {
      report.converged = true;
      break;
    }
  }

  report.final_waveform = x;
  report.wall_time = seconds_since(t0);
  return report;
}

SolverReport mm_design(const Scenario& scenario, InnerSolverKind inner,
                       ConstraintMode constraint,
                       const DesignOptions& options) {
  return mm_design_impl(scenario, inner, constraint, options, true);
}

SolverReport radar_only_design(const Scenario& scenario,
                               ConstraintMode constraint,
                               const DesignOptions& options) {
  return mm_design_impl(scenario, InnerSolverKind::kAdmm, constraint, options,
                        false);
}

double outer_admm_composite(const WaveformMatrix& x, const CxMatrix& u,
                            const CxMatrix& lambda, const Scenario& scenario,
                            double penalty) {
  const double d = relative_entropy(x, scenario.ctx);
  const CxMatrix gap = u - x.samples * scenario.comm.channel.transpose() +
                       scenario.comm.symbols.transpose() + lambda;
  return d - 0.5 * penalty * gap.squaredNorm();
}

WaveformMatrix inner_mm_x_update(const WaveformMatrix& x_current,
                                 const CxMatrix& u, const CxMatrix& lambda,
                                 const Scenario& scenario,
                                 ConstraintMode constraint,
                                 const DesignOptions& options) {
  const auto& cfg = scenario.cfg;
  const SelectionMatrix gs =
      selection_matrix(cfg.n_tx, cfg.n_rx, cfg.code_length);
  const PaprSet set = papr_set_from_config(cfg);
  const double nu = options.outer_penalty;
  const CxMatrix gram = channel_gram(scenario.comm.channel, cfg.code_length);

  const CxVector s = symbols_vec(scenario.comm);
  const CxVector uv = Eigen::Map<const CxVector>(u.data(), u.size());
  const CxVector lv = Eigen::Map<const CxVector>(lambda.data(), lambda.size());
  const CxVector coupling = channel_apply_adjoint(
      scenario.comm.channel, uv + s + lv, cfg.code_length);

  WaveformMatrix x = x_current;
  double val = outer_admm_composite(x, u, lambda, scenario, nu);
  for (int k = 0; k < options.inner_mm_budget; ++k) {
    const Surrogate surr = surrogate_at(x, scenario.target, scenario.ctx, gs);
    const CxMatrix a_mat = surr.quad - 0.5 * nu * gram;
    const CxVector a_vec = surr.lin + 0.5 * nu * coupling;

    CxVector next;
    if (constraint == ConstraintMode::kEnergy) {
      next = solve_norm_ball_quadratic(-a_mat, -a_vec, cfg.transmit_energy).x;
    } else {
      PaprQpOptions popts;
      popts.tol = options.xi2;
      next = solve_papr_qp(-a_mat, -a_vec, set, vec(x.samples), popts);
    }
    WaveformMatrix x_next{unvec(next, cfg.code_length, cfg.n_tx)};
    const double v_next = outer_admm_composite(x_next, u, lambda, scenario, nu);
    if (v_next < val) break;
    x = x_next;
    const double rel = std::abs(v_next) > 1e-12
                           ? std::abs(v_next - val) / std::abs(v_next)
                           : std::abs(v_next - val);
    val = v_next;
    if (rel < options.xi2) break;
  }
  return x;
}

SolverReport admm_design(const Scenario& scenario, ConstraintMode constraint,
                         const DesignOptions& options) {
  const auto& cfg = scenario.cfg;
  const auto t0 = Clock::now();
  const double eps = cfg.mui_budget;

  SolverReport report;
  report.constraint_mode = constraint;

  DesignOptions opts = options;
  WaveformMatrix x = scenario.x0;

  // U_0: MUI residual of X_0 pulled into the epsilon ball
  CxMatrix u = x.samples * scenario.comm.channel.transpose() -
               scenario.comm.symbols.transpose();
  {
    const double n2 = u.squaredNorm();
    if (n2 > eps) u *= std::sqrt(eps / n2);
  }
  CxMatrix lambda = CxMatrix::Zero(cfg.code_length, cfg.n_users);

  double nu = options.outer_penalty;
  for (int m = 0; m < options.max_outer_admm; ++m) {
    opts.outer_penalty = nu;
    const CxMatrix x_prev = x.samples;
    x = inner_mm_x_update(x, u, lambda, scenario, constraint, opts);

    const CxMatrix v = x.samples * scenario.comm.channel.transpose() -
                       scenario.comm.symbols.transpose() - lambda;
    const double vn2 = v.squaredNorm();
    u = vn2 > eps ? CxMatrix(std::sqrt(eps / vn2) * v) : v;
    lambda += u - x.samples * scenario.comm.channel.transpose() +
              scenario.comm.symbols.transpose();

    const double primal =
        (x.samples * scenario.comm.channel.transpose() - u -
         scenario.comm.symbols.transpose())
            .norm();
    const double dual = (x.samples - x_prev).norm();

    report.objective_trace.push_back(relative_entropy(x, scenario.ctx));
    report.mui_trace.push_back(mui_energy(x, scenario.comm));
    report.residual_trace.emplace_back(primal, dual);
    report.time_trace.push_back(seconds_since(t0));
    report.iterations = m + 1;

    if (primal <= options.outer_eps_primal && dual <= options.outer_eps_dual) {
      report.converged = true;
      break;
    }
    if (options.adapt_outer_penalty && m > 0 && m % 25 == 24) {
      double new_nu = nu;
      if (primal > 10.0 * nu * dual)
        new_nu = nu * 2.0;
      else if (nu * dual > 10.0 * primal)
        new_nu = nu * 0.5;
      if (new_nu != nu) {
        lambda *= nu / new_nu;
        nu = new_nu;
      }
    }
  }

  report.final_waveform =
      restore_feasibility(x, scenario.comm, cfg, constraint, true);
  report.wall_time = seconds_since(t0);
  return report;
}

}  // namespace dfrc
