#include "dfrc/minorize.hpp"

#include <stdexcept>

namespace dfrc {

SelectionMatrix selection_matrix(int n_tx, int n_rx, int code_length) {
  if (n_tx < 1 || n_rx < 1 || code_length < 1)
    throw std::invalid_argument("selection_matrix: sizes must be >= 1");
  return SelectionMatrix{n_tx, n_rx, code_length};
}

CxVector SelectionMatrix::lift(const CxVector& x) const {
  if (x.size() != cols())
    throw std::invalid_argument("SelectionMatrix::lift: size mismatch");
  const int l = code_length;
  const Eigen::Index n_rl = static_cast<Eigen::Index>(n_rx) * l;
  CxVector out = CxVector::Zero(rows());
  for (int r = 0; r < n_rx; ++r)
    for (int n = 0; n < n_tx; ++n)
      out.segment((static_cast<Eigen::Index>(r) * n_tx + n) * n_rl + r * l, l) =
          x.segment(static_cast<Eigen::Index>(n) * l, l);
  return out;
}

CxVector SelectionMatrix::adjoint(const CxVector& v) const {
  if (v.size() != rows())
    throw std::invalid_argument("SelectionMatrix::adjoint: size mismatch");
  const int l = code_length;
  const Eigen::Index n_rl = static_cast<Eigen::Index>(n_rx) * l;
  CxVector out = CxVector::Zero(cols());
  for (int r = 0; r < n_rx; ++r)
    for (int n = 0; n < n_tx; ++n)
      out.segment(static_cast<Eigen::Index>(n) * l, l) +=
          v.segment((static_cast<Eigen::Index>(r) * n_tx + n) * n_rl + r * l, l);
  return out;
}

CxMatrix SelectionMatrix::dense() const {
  CxMatrix g = CxMatrix::Zero(rows(), cols());
  for (Eigen::Index c = 0; c < cols(); ++c) {
    CxVector e = CxVector::Zero(cols());
    e(c) = 1.0;
    g.col(c) = lift(e);
  }
  return g;
}

GradientBlocks gradient_blocks(const WaveformMatrix& x_k,
                               const RicianTarget& target,
                               double noise_power) {
  const double s2 = noise_power;
  const int n_rx = static_cast<int>(
      target.covariance.rows() / x_k.n_tx());
  const CxMatrix xt = lifted_waveform(x_k, n_rx);
  const CxMatrix w = xt * target.covariance_sqrt;  // N_RL x N_TR

  const Eigen::Index n_tr = w.cols();
  CxMatrix gram = CxMatrix::Identity(n_tr, n_tr);
  gram.noalias() += w.adjoint() * w / s2;  // E C^{-1} E^H

  Eigen::LLT<CxMatrix> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("gradient_blocks: singular Gram block");
  const CxMatrix wk = llt.solve(w.adjoint()).adjoint();  // W K

  GradientBlocks out;
  out.t11 = -gram;
  out.t12 = w.adjoint() / s2;
  out.t22 = -(wk * w.adjoint()) / (s2 * s2);
  out.t22 = 0.5 * (out.t22 + out.t22.adjoint()).eval();
  return out;
}

Surrogate surrogate_at(const WaveformMatrix& x_k, const RicianTarget& target,
                       const ObjectiveContext& ctx, const SelectionMatrix& gs) {
  const double s2 = ctx.noise_power;
  const int n_rx = ctx.n_rx;
  const int l = ctx.code_length;
  const int n_tx = x_k.n_tx();
  const int n_rl = n_rx * l;

  const CxMatrix xt = lifted_waveform(x_k, n_rx);
  const CxVector q = lifted_apply(x_k, n_rx, target.mean_response);

  CxMatrix r1 = covariance_r1(x_k, ctx);
  Eigen::LLT<CxMatrix> llt(r1);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("surrogate_at: R_1 not positive definite");
  const CxMatrix r1inv = llt.solve(CxMatrix::Identity(n_rl, n_rl));
  const CxVector r1inv_q = llt.solve(q);

  // T22 = R_1^{-1} - I/s2 (block-elimination form of the gradient)
  CxMatrix qmat = r1inv;
  qmat.diagonal().array() -= 1.0 / s2;
  qmat.noalias() -= r1inv_q * r1inv_q.adjoint();
  qmat.noalias() -= r1inv * r1inv;
  qmat = 0.5 * (qmat + qmat.adjoint()).eval();

  // P_k = Xtilde R_G / s2 + R_1^{-1} q g_d^H
  CxMatrix p = xt * target.covariance / s2;
  p.noalias() += r1inv_q * target.mean_response.adjoint();

  Surrogate s;
  s.lin = CxVector::Zero(static_cast<Eigen::Index>(n_tx) * l);
  for (int r = 0; r < n_rx; ++r) {
    const auto pb = p.block(r * l, static_cast<Eigen::Index>(r) * n_tx, l, n_tx);
    for (int n = 0; n < n_tx; ++n)
      s.lin.segment(static_cast<Eigen::Index>(n) * l, l) += pb.col(n);
  }

  // M_k[(n,l),(n',l')] = sum_{r,r'} conj(R_G[(r,n),(r',n')]) Q[(r,l),(r',l')]
  const Eigen::Index dim = static_cast<Eigen::Index>(n_tx) * l;
  s.quad = CxMatrix::Zero(dim, dim);
  const CxMatrix& rg = target.covariance;
  for (int r = 0; r < n_rx; ++r)
    for (int rp = 0; rp < n_rx; ++rp) {
      const auto qb = qmat.block(r * l, rp * l, l, l);
      for (int n = 0; n < n_tx; ++n)
        for (int np = n; np < n_tx; ++np) {
          const Complex c = std::conj(rg(r * n_tx + n, rp * n_tx + np));
          if (c == Complex(0.0, 0.0)) continue;
          s.quad.block(static_cast<Eigen::Index>(n) * l,
                       static_cast<Eigen::Index>(np) * l, l, l)
              .noalias() += c * qb;
        }
    }
  for (int n = 0; n < n_tx; ++n)
    for (int np = n + 1; np < n_tx; ++np)
      s.quad.block(static_cast<Eigen::Index>(np) * l,
                   static_cast<Eigen::Index>(n) * l, l, l) =
          s.quad
              .block(static_cast<Eigen::Index>(n) * l,
                     static_cast<Eigen::Index>(np) * l, l, l)
              .adjoint();
  s.quad = 0.5 * (s.quad + s.quad.adjoint()).eval();

  s.anchor_objective = relative_entropy(x_k, ctx);
  (void)gs;  // selection structure is folded into the index bookkeeping above
  return s;
}

}  // namespace dfrc
