#ifndef DFRC_MINORIZE_HPP
#define DFRC_MINORIZE_HPP

#include "dfrc/model.hpp"
#include "dfrc/objective.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

/// Selection structure G_s with vec(I_{N_R} kron X) = G_s vec(X).
/// Rows in the support carry exactly one unit entry; G_s^H G_s = N_R I.
/// Applied implicitly; dense() exists for small-scale checks.
struct SelectionMatrix {
  int n_tx = 0;
  int n_rx = 0;
  int code_length = 0;

  Eigen::Index rows() const {
    return static_cast<Eigen::Index>(n_rx) * n_rx * n_tx * code_length;
  }
  Eigen::Index cols() const {
    return static_cast<Eigen::Index>(n_tx) * code_length;
  }

  CxVector lift(const CxVector& x) const;     // G_s x
  CxVector adjoint(const CxVector& v) const;  // G_s^H v
  CxMatrix dense() const;
};

SelectionMatrix selection_matrix(int n_tx, int n_rx, int code_length);

/// Partition blocks of the gradient of log det(E C^{-1} E^H) at C_k.
struct GradientBlocks {
  CxMatrix t11;  // N_TR x N_TR
  CxMatrix t12;  // N_TR x N_RL
  CxMatrix t22;  // N_RL x N_RL
};

GradientBlocks gradient_blocks(const WaveformMatrix& x_k,
                               const RicianTarget& target,
                               double noise_power = 1.0);

/// Quadratic minorizer of the relative entropy at X_k, in vec(X) coordinates:
/// s(x) = x^H quad x + 2 Re(x^H lin) (+ constant).
struct Surrogate {
  CxMatrix quad;            // M_k, Hermitian, N_T L x N_T L
  CxVector lin;             // m_k, N_T L
  double anchor_objective;  // relative entropy at X_k

  double value(const CxVector& x) const {
    return (x.dot(quad * x)).real() + 2.0 * x.dot(lin).real();
  }
};

Surrogate surrogate_at(const WaveformMatrix& x_k, const RicianTarget& target,
                       const ObjectiveContext& ctx, const SelectionMatrix& gs);

/// vec(X) <-> matrix helpers (column-major).
inline CxVector vec(const CxMatrix& m) {
  return Eigen::Map<const CxVector>(m.data(), m.size());
}
inline CxMatrix unvec(const CxVector& v, int rows, int cols) {
  return Eigen::Map<const CxMatrix>(v.data(), rows, cols);
}

}  // namespace dfrc

#endif  // DFRC_MINORIZE_HPP
