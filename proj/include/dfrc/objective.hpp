#ifndef DFRC_OBJECTIVE_HPP
#define DFRC_OBJECTIVE_HPP

#include "dfrc/model.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

/// Everything needed to evaluate the detection objective for one target.
struct ObjectiveContext {
  RicianTarget target;
  double noise_power = 1.0;  // sigma^2 at the radar receiver
  int n_rx = 0;
  int code_length = 0;

  int n_rl() const { return n_rx * code_length; }
};

ObjectiveContext make_objective_context(const RicianTarget& target,
                                        double noise_power, int n_rx,
                                        int code_length);

/// I_{N_R} kron X.
CxMatrix lifted_waveform(const WaveformMatrix& x, int n_rx);

/// Apply the lifted waveform to the stacked target response without forming
/// the Kronecker product: returns vec(X * G) where g = vec(G).
CxVector lifted_apply(const WaveformMatrix& x, int n_rx, const CxVector& g);

/// R_1 = Xtilde R_G Xtilde^H + sigma^2 I.
CxMatrix covariance_r1(const WaveformMatrix& x, const ObjectiveContext& ctx);

/// Relative entropy D(P_0 || P_1) of the detection problem; >= 0.
double relative_entropy(const WaveformMatrix& x, const ObjectiveContext& ctx);

/// || H X^T - S ||_F^2.
double mui_energy(const WaveformMatrix& x, const CommScenario& comm);

/// Peak-to-average-power ratio of one code sequence; in [1, L].
double papr_of_column(const CxVector& x);

}  // namespace dfrc

#endif  // DFRC_OBJECTIVE_HPP
