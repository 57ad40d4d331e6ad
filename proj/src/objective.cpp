#include "dfrc/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace dfrc {

ObjectiveContext make_objective_context(const RicianTarget& target,
                                        double noise_power, int n_rx,
                                        int code_length) {
  if (noise_power <= 0.0)
    throw std::invalid_argument("objective: noise_power must be > 0");
  return ObjectiveContext{target, noise_power, n_rx, code_length};
}

CxMatrix lifted_waveform(const WaveformMatrix& x, int n_rx) {
  const int l = x.code_length();
  const int nt = x.n_tx();
  CxMatrix out = CxMatrix::Zero(n_rx * l, n_rx * nt);
  for (int r = 0; r < n_rx; ++r)
    out.block(r * l, r * nt, l, nt) = x.samples;
  return out;
}

CxVector lifted_apply(const WaveformMatrix& x, int n_rx, const CxVector& g) {
  const int nt = x.n_tx();
  const int l = x.code_length();
  if (g.size() != static_cast<Eigen::Index>(nt) * n_rx)
    throw std::invalid_argument("lifted_apply: size mismatch");
  Eigen::Map<const CxMatrix> gm(g.data(), nt, n_rx);
  CxMatrix y = x.samples * gm;  // L x N_R
  return Eigen::Map<CxVector>(y.data(), y.size());
}

CxMatrix covariance_r1(const WaveformMatrix& x, const ObjectiveContext& ctx) {
  const CxMatrix xt = lifted_waveform(x, ctx.n_rx);
  CxMatrix r1 = xt * ctx.target.covariance * xt.adjoint();
  r1 = 0.5 * (r1 + r1.adjoint()).eval();
  r1.diagonal().array() += ctx.noise_power;
  return r1;
}

double relative_entropy(const WaveformMatrix& x, const ObjectiveContext& ctx) {
  const int n = ctx.n_rl();
  const double s2 = ctx.noise_power;
  const CxMatrix r1 = covariance_r1(x, ctx);
  Eigen::LLT<CxMatrix> llt(r1);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("relative_entropy: R_1 not positive definite");

  double logdet = 0.0;
  const auto& lfac = llt.matrixLLT();
  for (int i = 0; i < n; ++i) logdet += 2.0 * std::log(lfac(i, i).real());

  const CxVector q = lifted_apply(x, ctx.n_rx, ctx.target.mean_response);
  // tr(R_1^{-1} (q q^H + s2 I)) = ||L^{-1} q||^2 + s2 tr(R_1^{-1})
  CxVector lq = llt.matrixL().solve(q);
  CxMatrix linv = llt.matrixL().solve(CxMatrix::Identity(n, n));
  const double trace_term = lq.squaredNorm() + s2 * linv.squaredNorm();

  return logdet + trace_term - static_cast<double>(n) * (1.0 + std::log(s2));
}

double mui_energy(const WaveformMatrix& x, const CommScenario& comm) {
  return (comm.channel * x.samples.transpose() - comm.symbols).squaredNorm();
}

double papr_of_column(const CxVector& x) {
  const double total = x.squaredNorm();
  if (total <= 0.0)
    throw std::invalid_argument("papr_of_column: zero vector");
  const double peak = x.cwiseAbs2().maxCoeff();
  return peak * static_cast<double>(x.size()) / total;
}

}  // namespace dfrc
