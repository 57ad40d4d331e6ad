#ifndef DFRC_OUTER_HPP
#define DFRC_OUTER_HPP

#include <utility>
#include <vector>

#include "dfrc/minorize.hpp"
#include "dfrc/model.hpp"
#include "dfrc/objective.hpp"
#include "dfrc/qcqp.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

/// Bundled immutable scenario: target statistics, channel, symbols, and the
/// quasi-orthogonal starting waveform, all derived from one config.
struct Scenario {
  ScenarioConfig cfg;
  RicianTarget target;
  CommScenario comm;
  ObjectiveContext ctx;
  WaveformMatrix x0;
};

Scenario make_scenario(const ScenarioConfig& cfg);

enum class InnerSolverKind { kSdr, kAdmm };
enum class ConstraintMode { kEnergy, kPapr };

struct DesignOptions {
  double xi1 = 1e-4;  // outer MM relative-entropy stop
  double xi2 = 1e-4;  // inner MM stop
  int max_outer = 200;
  int max_outer_admm = 400;
  int inner_mm_budget = 20;  // surrogate iterations per outer-ADMM x-update
  double outer_penalty = 1.0;
  bool adapt_outer_penalty = true;
  double outer_eps_primal = 1e-6;
  double outer_eps_dual = 1e-3;
  InnerAdmmOptions inner;
  SdrOptions sdr;
};

struct SolverReport {
  std::vector<double> objective_trace;  // relative entropy per outer iteration
  std::vector<double> mui_trace;
  std::vector<std::pair<double, double>> residual_trace;
  std::vector<double> time_trace;  // elapsed seconds at each outer iteration
  WaveformMatrix final_waveform;
  int iterations = 0;
  double wall_time = 0.0;
  bool converged = false;
  ConstraintMode constraint_mode = ConstraintMode::kEnergy;
  bool mui_applicable = true;
};

PaprSet papr_set_from_config(const ScenarioConfig& cfg);

/// Pull a candidate back onto the constraint sets (MUI ball and energy ball,
/// or MUI ball and per-antenna PAPR set) by alternating exact projections.
WaveformMatrix restore_feasibility(const WaveformMatrix& x,
                                   const CommScenario& comm,
                                   const ScenarioConfig& cfg,
                                   ConstraintMode mode, bool use_mui,
                                   int max_sweeps = 400);

/// MM outer loop over the per-iteration QCQP (inner = SDR or ADMM).
SolverReport mm_design(const Scenario& scenario, InnerSolverKind inner,
                       ConstraintMode constraint, const DesignOptions& options);

/// Direct outer ADMM with an MM inner x-update.
SolverReport admm_design(const Scenario& scenario, ConstraintMode constraint,
                         const DesignOptions& options);

/// One x-update of the outer ADMM: ascends relative entropy minus the scaled
/// penalty on U - X H^T + S^T + Lambda subject to the waveform constraint.
WaveformMatrix inner_mm_x_update(const WaveformMatrix& x_current,
                                 const CxMatrix& u, const CxMatrix& lambda,
                                 const Scenario& scenario,
                                 ConstraintMode constraint,
                                 const DesignOptions& options);

/// MM design with the MUI constraint removed.
SolverReport radar_only_design(const Scenario& scenario,
                               ConstraintMode constraint,
                               const DesignOptions& options);

/// Composite objective of the outer-ADMM x-subproblem (for ascent checks).
double outer_admm_composite(const WaveformMatrix& x, const CxMatrix& u,
                            const CxMatrix& lambda, const Scenario& scenario,
                            double penalty);

}  // namespace dfrc

#endif  // DFRC_OUTER_HPP
