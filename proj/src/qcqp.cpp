#include "dfrc/qcqp.hpp"

#include <cmath>
#include <stdexcept>

#include "dfrc/rng.hpp"

namespace dfrc {

// ---------------------------------------------------------------------------
// Norm-ball quadratic
// ---------------------------------------------------------------------------

NormBallSolver::NormBallSolver(const CxMatrix& b_matrix) {
  Eigen::SelfAdjointEigenSolver<CxMatrix> eig(
      0.5 * (b_matrix + b_matrix.adjoint()));
  evecs_ = eig.eigenvectors();
  evals_ = eig.eigenvalues();
}

NormBallResult NormBallSolver::solve(const CxVector& b, double budget) const {
  if (budget <= 0.0)
    throw std::invalid_argument("norm_ball: budget must be > 0");
  const Eigen::Index n = evals_.size();
  const CxVector beta = evecs_.adjoint() * b;
  const double lmin = evals_.minCoeff();
  const double scale = std::max(1.0, evals_.cwiseAbs().maxCoeff());

  NormBallResult res;

  // interior candidate when B is positive definite
  if (lmin > 1e-14 * scale) {
    CxVector coef = -beta.cwiseQuotient(evals_.cast<Complex>());
    if (coef.squaredNorm() <= budget) {
      res.x = evecs_ * coef;
      res.nu = 0.0;
      return res;
    }
  }

  const double nu_floor = std::max(0.0, -lmin);
  auto norm_sq_at = [&](double nu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = evals_(i) + nu;
      s += std::norm(beta(i)) / (d * d);
    }
    return s;
  };

  // hard case: b has no component on the bottom eigenspace and the boundary
  // equation has no root above nu_floor
  const double probe = nu_floor + 1e-12 * scale + 1e-300;
  if (norm_sq_at(probe) < budget) {
    res.hard_case = true;
    res.nu = nu_floor;
    CxVector coef = CxVector::Zero(n);
    double partial = 0.0;
    Eigen::Index bottom = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = evals_(i) + nu_floor;
      if (d > 1e-10 * scale) {
        coef(i) = -beta(i) / d;
        partial += std::norm(coef(i));
      } else {
        bottom = i;
      }
    }
    const double tau = std::sqrt(std::max(budget - partial, 0.0));
    coef(bottom) += tau;
    res.x = evecs_ * coef;
    return res;
  }

  // safeguarded Newton with bisection on phi(nu) = ||x(nu)||^2 - budget
  double lo = probe;
  double hi = std::max(1.0, 2.0 * probe);
  while (norm_sq_at(hi) > budget) hi *= 2.0;
  double nu = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double phi = 0.0, dphi = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = evals_(i) + nu;
      const double t = std::norm(beta(i)) / (d * d);
      phi += t;
      dphi += -2.0 * t / d;
    }
    if (phi > budget)
      lo = nu;
    else
      hi = nu;
    if (std::abs(phi - budget) <= 1e-13 * budget) break;
    double next = nu - (phi - budget) / dphi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - nu) <= 1e-16 * std::max(1.0, nu)) {
      nu = next;
      break;
    }
    nu = next;
  }
  res.nu = nu;
  CxVector coef(n);
  for (Eigen::Index i = 0; i < n; ++i) coef(i) = -beta(i) / (evals_(i) + nu);
  res.x = evecs_ * coef;
  return res;
}

NormBallResult solve_norm_ball_quadratic(const CxMatrix& b_matrix,
                                         const CxVector& b, double budget) {
  return NormBallSolver(b_matrix).solve(b, budget);
}

CxVector project_ball(const CxVector& p, double radius_sq) {
  if (radius_sq < 0.0)
    throw std::invalid_argument("project_ball: radius_sq must be >= 0");
  const double n2 = p.squaredNorm();
  if (n2 <= radius_sq) return p;
  return p * std::sqrt(radius_sq / n2);
}

// ---------------------------------------------------------------------------
// Channel lifting
// ---------------------------------------------------------------------------

CxVector channel_apply(const CxMatrix& h, const CxVector& x, int code_length) {
  const int n_tx = static_cast<int>(h.cols());
  Eigen::Map<const CxMatrix> xm(x.data(), code_length, n_tx);
  CxMatrix y = xm * h.transpose();  // L x M
  return Eigen::Map<CxVector>(y.data(), y.size());
}

CxVector channel_apply_adjoint(const CxMatrix& h, const CxVector& v,
                               int code_length) {
  const int m = static_cast<int>(h.rows());
  Eigen::Map<const CxMatrix> vm(v.data(), code_length, m);
  CxMatrix y = vm * h.conjugate();  // L x N_T
  return Eigen::Map<CxVector>(y.data(), y.size());
}

CxMatrix channel_gram(const CxMatrix& h, int code_length) {
  const int n_tx = static_cast<int>(h.cols());
  const CxMatrix hh = h.adjoint() * h;
  CxMatrix g = CxMatrix::Zero(static_cast<Eigen::Index>(n_tx) * code_length,
                              static_cast<Eigen::Index>(n_tx) * code_length);
  for (int i = 0; i < n_tx; ++i)
    for (int j = 0; j < n_tx; ++j)
      g.block(static_cast<Eigen::Index>(i) * code_length,
              static_cast<Eigen::Index>(j) * code_length, code_length,
              code_length) =
          hh(i, j) * CxMatrix::Identity(code_length, code_length);
  return g;
}

double min_mui_energy(const CommScenario& comm, int code_length,
                      double budget) {
  const CxMatrix gram = channel_gram(comm.channel, code_length);
  const CxMatrix st = comm.symbols.transpose();
  const CxVector s = Eigen::Map<const CxVector>(st.data(), st.size());
  const CxVector hs = channel_apply_adjoint(comm.channel, s, code_length);
  const NormBallResult r = solve_norm_ball_quadratic(gram, -hs, budget);
  const CxVector resid = channel_apply(comm.channel, r.x, code_length) - s;
  return resid.squaredNorm();
}

// ---------------------------------------------------------------------------
// Inner ADMM for the per-iteration QCQP
// ---------------------------------------------------------------------------

InnerAdmmState admm_qcqp(const Surrogate& surrogate, const CommScenario& comm,
                         double budget, const CxVector& x0,
                         const InnerAdmmOptions& options) {
  const int l = static_cast<int>(x0.size() / comm.channel.cols());
  const double eps = comm.mui_budget;
  const CxMatrix& h = comm.channel;
  const CxMatrix st = comm.symbols.transpose();
  const CxVector s = Eigen::Map<const CxVector>(st.data(), st.size());
  const CxMatrix gram = channel_gram(h, l);

  double mu = options.mu;
  auto build_b = [&](double penalty) -> CxMatrix {
    return -surrogate.quad + 0.5 * penalty * gram;
  };

  CxMatrix b_mat = build_b(mu);
  std::optional<NormBallSolver> ball;
  if (options.constraint == InnerConstraint::kEnergy) ball.emplace(b_mat);

  InnerAdmmState st_out;
  st_out.x = x0;
  st_out.z = project_ball(channel_apply(h, x0, l) - s, eps);
  st_out.lambda = CxVector::Zero(s.size());
  st_out.mu = mu;

  PaprQpOptions papr_opts;
  papr_opts.tol = options.mm_tol;

  for (int it = 0; it < options.max_iter; ++it) {
    const CxVector b_vec =
        -surrogate.lin -
        0.5 * mu *
            channel_apply_adjoint(h, st_out.z + s + st_out.lambda, l);

    CxVector x_prev = st_out.x;
    if (options.constraint == InnerConstraint::kEnergy) {
      NormBallResult nb = ball->solve(b_vec, budget);
      st_out.x = nb.x;
      st_out.nu = nb.nu;
    } else {
      st_out.x = solve_papr_qp(b_mat, b_vec, options.papr, st_out.x, papr_opts);
    }

    const CxVector hx = channel_apply(h, st_out.x, l);
    const CxVector p = hx - s - st_out.lambda;
    st_out.z = project_ball(p, eps);
    st_out.lambda += st_out.z - hx + s;

    st_out.primal_residual = (hx - s - st_out.z).norm();
    st_out.dual_residual = (st_out.x - x_prev).norm();
    st_out.iterations = it + 1;
    if (st_out.primal_residual <= options.eps_primal &&
        st_out.dual_residual <= options.eps_dual) {
      st_out.converged = true;
      break;
    }

    if (options.adapt_penalty && it > 0 && it % 50 == 0 && it < 2000) {
      double new_mu = mu;
      if (st_out.primal_residual > 10.0 * mu * st_out.dual_residual)
        new_mu = mu * 2.0;
      else if (mu * st_out.dual_residual > 10.0 * st_out.primal_residual)
        new_mu = mu * 0.5;
      if (new_mu != mu) {
        st_out.lambda *= mu / new_mu;
        mu = new_mu;
        b_mat = build_b(mu);
        if (options.constraint == InnerConstraint::kEnergy)
          ball.emplace(b_mat);
      }
    }
  }
  st_out.mu = mu;
  return st_out;
}

// ---------------------------------------------------------------------------
// Homogenization and SDR
// ---------------------------------------------------------------------------

HomogenizedProblem homogenize(const Surrogate& surrogate,
                              const CommScenario& comm, double budget,
                              double mui_budget, int code_length) {
  const Eigen::Index n = surrogate.lin.size();
  const CxMatrix st = comm.symbols.transpose();
  const CxVector s = Eigen::Map<const CxVector>(st.data(), st.size());
  const CxVector hs = channel_apply_adjoint(comm.channel, s, code_length);

  HomogenizedProblem hp;
  hp.budget = budget;
  hp.mui_budget = mui_budget;

  hp.quad_hat = CxMatrix::Zero(n + 1, n + 1);
  hp.quad_hat.topLeftCorner(n, n) = surrogate.quad;
  hp.quad_hat.topRightCorner(n, 1) = surrogate.lin;
  hp.quad_hat.bottomLeftCorner(1, n) = surrogate.lin.adjoint();

  hp.mui_hat = CxMatrix::Zero(n + 1, n + 1);
  hp.mui_hat.topLeftCorner(n, n) = channel_gram(comm.channel, code_length);
  hp.mui_hat.topRightCorner(n, 1) = -hs;
  hp.mui_hat.bottomLeftCorner(1, n) = -hs.adjoint();
  hp.mui_hat(n, n) = s.squaredNorm();

  hp.j1 = CxMatrix::Zero(n + 1, n + 1);
  hp.j1.topLeftCorner(n, n).setIdentity();
  hp.j0 = CxMatrix::Zero(n + 1, n + 1);
  hp.j0(n, n) = 1.0;
  return hp;
}

namespace {

double herm_inner(const CxMatrix& a, const CxMatrix& b) {
  return a.cwiseProduct(b.conjugate()).sum().real();
}

// Frobenius projection of y onto { tr(J0 X) = 1, tr(J1 X) <= P_t,
// tr(Hhat X) <= eps } over Hermitian matrices, by active-set enumeration.
CxMatrix project_affine(const CxMatrix& y, const HomogenizedProblem& hp,
                        const Eigen::Matrix3d& gram3) {
  const CxMatrix* mats[3] = {&hp.j0, &hp.j1, &hp.mui_hat};
  const double targets[3] = {1.0, hp.budget, hp.mui_budget};
  Eigen::Vector3d vals;
  for (int i = 0; i < 3; ++i) vals(i) = herm_inner(*mats[i], y);

  // candidate active sets always include the equality (index 0)
  const std::vector<std::vector<int>> sets = {{0}, {0, 1}, {0, 2}, {0, 1, 2}};
  for (const auto& act : sets) {
    const int k = static_cast<int>(act.size());
    Eigen::MatrixXd g(k, k);
    Eigen::VectorXd rhs(k);
    for (int i = 0; i < k; ++i) {
      rhs(i) = vals(act[i]) - targets[act[i]];
      for (int j = 0; j < k; ++j) g(i, j) = gram3(act[i], act[j]);
    }
    Eigen::VectorXd c = g.ldlt().solve(rhs);
    // multipliers for inequality constraints must push inward
    bool ok = true;
    for (int i = 1; i < k; ++i)
      if (c(i) < -1e-12) ok = false;
    if (!ok) continue;
    CxMatrix x = y;
    for (int i = 0; i < k; ++i) x -= c(i) * (*mats[act[i]]);
    // inactive inequalities must hold
    bool feas = true;
    for (int idx : {1, 2}) {
      bool active = false;
      for (int a : act)
        if (a == idx) active = true;
      if (!active && herm_inner(*mats[idx], x) > targets[idx] + 1e-9 *
                         std::max(1.0, std::abs(targets[idx])))
        feas = false;
    }
    if (feas) return x;
  }
  // fall back to the fully active system
  {
    Eigen::Vector3d rhs;
    for (int i = 0; i < 3; ++i) rhs(i) = vals(i) - targets[i];
    Eigen::Vector3d c = gram3.ldlt().solve(rhs);
    CxMatrix x = y;
    for (int i = 0; i < 3; ++i) x -= c(i) * (*mats[i]);
    return x;
  }
}

CxMatrix psd_project(const CxMatrix& y) {
  Eigen::SelfAdjointEigenSolver<CxMatrix> eig(0.5 * (y + y.adjoint()));
  RealVector vals = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().adjoint();
}

/// Dual solver for the homogenized SDP. The maximization objective M_k is
/// negative semidefinite, so the relaxation is tight and its dual collapses to
/// a smooth 2-D convex program over the energy and MUI multipliers:
///   g(l1, l2) = c^H B^-1 c + l1 P_t + l2 (eps - ||s||^2),
///   B = l1 I + l2 G - M (PD for l1 > 0),  c = m + l2 H~^H s,
/// with gradient (P_t - ||x*||^2, eps - ||H~ x* - s||^2) at x* = B^-1 c.
/// Projected Newton with backtracking; returns false when the instance is not
/// concave (B fails to factor) so the caller can fall back to the splitting.
bool solve_sdr_dual(const HomogenizedProblem& hp, const SdrResult* warm_start,
                    SdrResult* out) {
  const Eigen::Index n = hp.dim() - 1;
  const CxMatrix m_mat = hp.quad_hat.topLeftCorner(n, n);
  const CxVector m_vec = hp.quad_hat.topRightCorner(n, 1);
  const CxMatrix g_mat = hp.mui_hat.topLeftCorner(n, n);
  const CxVector hs = -hp.mui_hat.topRightCorner(n, 1);
  const double s_sq = hp.mui_hat(n, n).real();

  double l1 = 1.0, l2 = 1.0;
  if (warm_start && warm_start->lambda_energy >= 0.0) {
    l1 = std::max(warm_start->lambda_energy, 1e-12);
    l2 = std::max(warm_start->lambda_mui, 0.0);
  }

  Eigen::LLT<CxMatrix> llt;
  CxVector x;
  double value = 0.0, grad1 = 0.0, grad2 = 0.0;
  auto evaluate = [&](double a1, double a2) -> bool {
    const CxMatrix b_mat =
        a1 * CxMatrix::Identity(n, n) + a2 * g_mat - m_mat;
    llt.compute(b_mat);
    if (llt.info() != Eigen::Success) return false;
    const CxVector c = m_vec + a2 * hs;
    x = llt.solve(c);
    value = x.dot(c).real() + a1 * hp.budget + a2 * (hp.mui_budget - s_sq);
    grad1 = hp.budget - x.squaredNorm();
    grad2 = hp.mui_budget -
            (x.dot(g_mat * x).real() - 2.0 * x.dot(hs).real() + s_sq);
    return true;
  };
  if (!evaluate(l1, l2)) return false;

  const int max_newton = 200;
  int it = 0;
  for (; it < max_newton; ++it) {
    // KKT check: primal feasibility plus complementary slackness
    const bool feas1 = grad1 >= -1e-10 * std::max(1.0, hp.budget);
    const bool feas2 = grad2 >= -1e-8 * std::max(hp.mui_budget, 1e-15);
    const double gap = l1 * std::abs(grad1) + l2 * std::abs(grad2);
    if (feas1 && feas2 && gap <= 1e-9 * std::max(1.0, std::abs(value))) break;

    // Hessian of g from two extra solves
    const CxVector bx = llt.solve(x);
    const CxVector gr = g_mat * x - hs;  // H~^H (H~ x - s)
    const CxVector bg = llt.solve(gr);
    Eigen::Matrix2d hess;
    hess(0, 0) = 2.0 * x.dot(bx).real();
    hess(0, 1) = hess(1, 0) = 2.0 * gr.dot(bx).real();
    hess(1, 1) = 2.0 * gr.dot(bg).real();
    Eigen::Vector2d grad(grad1, grad2);

    // freeze coordinates pinned at zero that the gradient pushes negative
    const bool fix1 = l1 <= 0.0 && grad1 > 0.0;
    const bool fix2 = l2 <= 0.0 && grad2 > 0.0;
    Eigen::Vector2d step = Eigen::Vector2d::Zero();
    if (fix1 && fix2) break;
    if (fix1) {
      step(1) = -grad2 / std::max(hess(1, 1), 1e-300);
    } else if (fix2) {
      step(0) = -grad1 / std::max(hess(0, 0), 1e-300);
    } else {
      Eigen::Matrix2d h = hess;
      h.diagonal().array() += 1e-14 * std::max(1.0, hess.trace());
      step = -h.ldlt().solve(grad);
    }

    const double prev = value;
    double alpha = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt, alpha *= 0.5) {
      const double t1 = std::max(0.0, l1 + alpha * step(0));
      const double t2 = std::max(0.0, l2 + alpha * step(1));
      if (t1 == l1 && t2 == l2) break;
      if (!evaluate(t1, t2)) continue;  // left the PD region, shrink
      if (value <= prev + 1e-15 * std::max(1.0, std::abs(prev))) {
        l1 = t1;
        l2 = t2;
        moved = true;
        break;
      }
    }
    if (!moved) {
      if (!evaluate(l1, l2)) return false;  // restore state at (l1, l2)
      break;
    }
  }

  // primal recovery: rank-one lift of [x*; 1]
  CxVector y(n + 1);
  y.head(n) = x;
  y(n) = 1.0;
  out->xhat = y * y.adjoint();
  out->objective = herm_inner(hp.quad_hat, out->xhat);
  out->primal_residual = std::max(0.0, -grad1) + std::max(0.0, -grad2);
  out->dual_residual = l1 * std::abs(grad1) + l2 * std::abs(grad2);
  out->iterations = it + 1;
  out->converged = it < max_newton;
  out->lambda_energy = l1;
  out->lambda_mui = l2;
  out->z = out->xhat;
  out->w = CxMatrix::Zero(n + 1, n + 1);
  return out->converged;
}

}  // namespace

SdrResult solve_sdr(const HomogenizedProblem& hp, const SdrOptions& options,
                    const SdrResult* warm_start) {
  const Eigen::Index d = hp.dim();
  {
    // quick feasibility probe for the MUI budget
    const Eigen::Index n = d - 1;
    const CxMatrix gram = hp.mui_hat.topLeftCorner(n, n);
    const CxVector b = hp.mui_hat.topRightCorner(n, 1);
    const NormBallResult r = solve_norm_ball_quadratic(gram, b, hp.budget);
    const double best =
        r.x.dot(gram * r.x).real() + 2.0 * r.x.dot(b).real() +
        hp.mui_hat(n, n).real();
    if (best > hp.mui_budget * (1.0 + 1e-6) + 1e-12)
      throw std::runtime_error(
          "solve_sdr: MUI budget infeasible for the given symbols/energy");
  }

  {
    SdrResult dual;
    if (solve_sdr_dual(hp, warm_start, &dual)) return dual;
  }

  Eigen::Matrix3d gram3;
  const CxMatrix* mats[3] = {&hp.j0, &hp.j1, &hp.mui_hat};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gram3(i, j) = herm_inner(*mats[i], *mats[j]);

  double rho = options.rho;
  SdrResult res;
  res.z = (warm_start && warm_start->z.size())
              ? warm_start->z
              : CxMatrix(hp.j0);  // feasible seed: t-slot only
  res.w = (warm_start && warm_start->w.size())
              ? warm_start->w
              : CxMatrix(CxMatrix::Zero(d, d));

  CxMatrix x;
  for (int it = 0; it < options.max_iter; ++it) {
    x = project_affine(res.z - res.w + hp.quad_hat / rho, hp, gram3);
    const CxMatrix z_prev = res.z;
    res.z = psd_project(x + res.w);
    res.w += x - res.z;

    res.primal_residual = (x - res.z).norm();
    res.dual_residual = rho * (res.z - z_prev).norm();
    res.iterations = it + 1;
    const double ref = std::max(1.0, res.z.norm());
    if (res.primal_residual <= options.tol * ref &&
        res.dual_residual <= options.tol * ref) {
      res.converged = true;
      break;
    }
    if (options.adapt_rho && it % 20 == 19) {
      if (res.primal_residual > 10.0 * res.dual_residual) {
        rho *= 2.0;
        res.w *= 0.5;
      } else if (res.dual_residual > 10.0 * res.primal_residual) {
        rho *= 0.5;
        res.w *= 2.0;
      }
    }
  }
  res.xhat = psd_project(0.5 * (x + res.z));
  res.objective = herm_inner(hp.quad_hat, res.xhat);
  return res;
}

// ---------------------------------------------------------------------------
// Rank-one extraction
// ---------------------------------------------------------------------------

CxVector rank_one_extract_vector(const CxMatrix& xhat,
                                 const std::vector<const CxMatrix*>& forms,
                                 std::uint64_t seed) {
  Eigen::SelfAdjointEigenSolver<CxMatrix> eig(0.5 * (xhat + xhat.adjoint()));
  const RealVector vals = eig.eigenvalues();
  const double lmax = vals.maxCoeff();
  if (lmax <= 0.0)
    throw std::runtime_error("rank_one_extract: input is not PSD");

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) > 1e-12 * lmax) keep.push_back(i);
  const int r = static_cast<int>(keep.size());

  CxMatrix p(xhat.rows(), r);
  for (int i = 0; i < r; ++i)
    p.col(i) = eig.eigenvectors().col(keep[i]) * std::sqrt(vals(keep[i]));

  // near rank-one: the principal component already carries the traces
  double second = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) < lmax && vals(i) > second) second = vals(i);
  if (r == 1 || second / lmax < 1e-6) {
    Eigen::Index imax = 0;
    vals.maxCoeff(&imax);
    return eig.eigenvectors().col(imax) * std::sqrt(lmax);
  }

  // Gauss-Newton on c: c^H G_i c = tr(A_i Xhat), y = P c
  const int nf = static_cast<int>(forms.size());
  std::vector<CxMatrix> g(nf);
  Eigen::VectorXd targets(nf);
  for (int i = 0; i < nf; ++i) {
    g[i] = p.adjoint() * (*forms[i]) * p;
    g[i] = 0.5 * (g[i] + g[i].adjoint()).eval();
    targets(i) = herm_inner(*forms[i], xhat);
  }
  const double tol = 1e-12 * std::max(1.0, targets.cwiseAbs().maxCoeff());

  Rng rng(seed);
  for (int start = 0; start < 60; ++start) {
    CxVector c(r);
    if (start == 0)
      c.setOnes();
    else
      for (int i = 0; i < r; ++i) c(i) = rng.unit_phase();
    for (int it = 0; it < 300; ++it) {
      Eigen::VectorXd f(nf);
      Eigen::MatrixXd jac(nf, 2 * r);
      for (int i = 0; i < nf; ++i) {
        const CxVector gc = g[i] * c;
        f(i) = c.dot(gc).real() - targets(i);
        for (int k = 0; k < r; ++k) {
          jac(i, k) = 2.0 * gc(k).real();
          jac(i, r + k) = 2.0 * gc(k).imag();
        }
      }
      if (f.cwiseAbs().maxCoeff() < tol) {
        return p * c;
      }
      Eigen::MatrixXd jjt = jac * jac.transpose();
      jjt.diagonal().array() += 1e-12 * std::max(1.0, jjt.trace());
      const Eigen::VectorXd lam = jjt.ldlt().solve(f);
      const Eigen::VectorXd step = jac.transpose() * lam;
      for (int k = 0; k < r; ++k)
        c(k) -= Complex(step(k), step(r + k));
    }
  }
  throw std::runtime_error(
      "rank_one_extract: no vector matching all trace forms was found");
}

CxVector rank_one_extract(const CxMatrix& xhat, const HomogenizedProblem& hp) {
  const std::vector<const CxMatrix*> forms = {&hp.quad_hat, &hp.j1, &hp.j0,
                                              &hp.mui_hat};
  const CxVector y = rank_one_extract_vector(xhat, forms);
  const Eigen::Index n = hp.dim() - 1;
  const Complex u = y(n);
  if (std::abs(u) < 1e-10)
    throw std::runtime_error("rank_one_extract: degenerate homogenization slot");
  return y.head(n) / u;
}

}  // namespace dfrc
