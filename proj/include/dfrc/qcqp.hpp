#ifndef DFRC_QCQP_HPP
#define DFRC_QCQP_HPP

#include <optional>
#include <vector>

#include "dfrc/minorize.hpp"
#include "dfrc/model.hpp"
#include "dfrc/papr.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

// ---------------------------------------------------------------------------
// Norm-ball constrained quadratic minimization
// ---------------------------------------------------------------------------

struct NormBallResult {
  CxVector x;
  double nu = 0.0;        // energy multiplier
  bool hard_case = false;
};

/// Minimizer of x^H B x + 2 Re(x^H b) over ||x||^2 <= budget, reusing one
/// eigendecomposition of B across many right-hand sides.
class NormBallSolver {
 public:
  explicit NormBallSolver(const CxMatrix& b_matrix);

  NormBallResult solve(const CxVector& b, double budget) const;

  double min_eigenvalue() const { return evals_.minCoeff(); }

 private:
  CxMatrix evecs_;
  RealVector evals_;
};

NormBallResult solve_norm_ball_quadratic(const CxMatrix& b_matrix,
                                         const CxVector& b, double budget);

/// p if ||p||^2 <= radius_sq, else scaled to the boundary.
CxVector project_ball(const CxVector& p, double radius_sq);

// ---------------------------------------------------------------------------
// Channel lifting helpers (H tilde = H kron I_L, never materialized in the
// solvers; products go through L x N_T / L x M reshapes)
// ---------------------------------------------------------------------------

/// H tilde x = vec(X H^T), x = vec(X) with X of shape L x N_T.
CxVector channel_apply(const CxMatrix& h, const CxVector& x, int code_length);

/// H tilde^H v = vec(V conj(H)), v = vec(V) with V of shape L x M.
CxVector channel_apply_adjoint(const CxMatrix& h, const CxVector& v,
                               int code_length);

/// Dense (H^H H) kron I_L.
CxMatrix channel_gram(const CxMatrix& h, int code_length);

/// Smallest achievable MUI energy subject to ||x||^2 <= budget; used as a
/// feasibility probe for the epsilon constraint.
double min_mui_energy(const CommScenario& comm, int code_length, double budget);

// ---------------------------------------------------------------------------
// Inner ADMM for the per-MM-iteration QCQP
// ---------------------------------------------------------------------------

enum class InnerConstraint { kEnergy, kPapr };

struct InnerAdmmOptions {
  double mu = 1.0;
  bool adapt_penalty = true;
  double eps_primal = 1e-6;
  double eps_dual = 1e-3;
  int max_iter = 30000;
  InnerConstraint constraint = InnerConstraint::kEnergy;
  PaprSet papr;  // used when constraint == kPapr
  double mm_tol = 1e-4;  // inner MM tolerance for the PAPR x-update
};

struct InnerAdmmState {
  CxVector x;
  CxVector z;       // auxiliary MUI residual, ||z||^2 <= eps
  CxVector lambda;  // scaled dual
  double mu = 1.0;
  double nu = 0.0;  // energy multiplier of the last x-update
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// ADMM for max x^H M_k x + 2Re(x^H m_k) subject to the MUI
/// ball and the energy (or PAPR) constraint set. x0 seeds the iteration.
InnerAdmmState admm_qcqp(const Surrogate& surrogate, const CommScenario& comm,
                         double budget, const CxVector& x0,
                         const InnerAdmmOptions& options);

// ---------------------------------------------------------------------------
// SDR path
// ---------------------------------------------------------------------------

struct HomogenizedProblem {
  CxMatrix quad_hat;  // (n+1) x (n+1), embeds M_k and m_k
  CxMatrix mui_hat;   // (n+1) x (n+1), embeds the MUI quadratic
  CxMatrix j0;        // homogenization-slot selector
  CxMatrix j1;        // waveform-slot selector
  double budget = 0.0;
  double mui_budget = 0.0;

  Eigen::Index dim() const { return quad_hat.rows(); }
};

HomogenizedProblem homogenize(const Surrogate& surrogate,
                              const CommScenario& comm, double budget,
                              double mui_budget, int code_length);

struct SdrOptions {
  double tol = 1e-7;
  int max_iter = 50000;
  double rho = 1.0;
  bool adapt_rho = true;
};

struct SdrResult {
  CxMatrix xhat;  // PSD solution of the relaxation
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  // warm-start state: dual multipliers (energy, MUI) and splitting iterates
  double lambda_energy = -1.0;  // < 0 means unset
  double lambda_mui = -1.0;
  CxMatrix z;
  CxMatrix w;
};

SdrResult solve_sdr(const HomogenizedProblem& hp, const SdrOptions& options,
                    const SdrResult* warm_start = nullptr);

/// Find y with y^H A_i y = tr(A_i Xhat) for every supplied Hermitian form.
/// Exact for rank-one Xhat; otherwise a damped Gauss-Newton search over the
/// range-space coefficients with multiple starts.
CxVector rank_one_extract_vector(const CxMatrix& xhat,
                                 const std::vector<const CxMatrix*>& forms,
                                 std::uint64_t seed = 7);

/// Recover x from the homogenized solution (divides out the t slot).
CxVector rank_one_extract(const CxMatrix& xhat, const HomogenizedProblem& hp);

}  // namespace dfrc

#endif  // DFRC_QCQP_HPP
