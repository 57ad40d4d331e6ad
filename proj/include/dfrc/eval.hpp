#ifndef DFRC_EVAL_HPP
#define DFRC_EVAL_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "dfrc/model.hpp"
#include "dfrc/objective.hpp"
#include "dfrc/outer.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

/// Likelihood-ratio detector, precomputed for repeated evaluation:
/// t(y) = y^H (sigma^-2 I - R_1^-1) y + 2 Re[y^H R_1^-1 Xtilde g_d].
struct DetectorStatistic {
  CxMatrix weight;  // sigma^-2 I - R_1^-1
  CxVector match;   // R_1^-1 Xtilde g_d

  double operator()(const CxVector& y) const {
    return y.dot(weight * y).real() + 2.0 * y.dot(match).real();
  }
};

DetectorStatistic make_detector(const WaveformMatrix& x,
                                const ObjectiveContext& ctx);

double detector_statistic(const CxVector& y, const WaveformMatrix& x,
                          const ObjectiveContext& ctx);

struct RocCurve {
  RealVector pfa_grid;
  RealVector pd;
  long trials = 0;
  std::uint64_t seed = 0;
  bool low_exceedance = false;  // fewer than 100 null samples above a threshold
};

/// Empirical ROC: thresholds from null-hypothesis sample quantiles, detection
/// probability from alternative-hypothesis exceedance. Trials are generated in
/// fixed-size blocks with per-block substreams, so the result is bit-for-bit
/// identical for any worker count.
RocCurve monte_carlo_roc(const WaveformMatrix& x, const ObjectiveContext& ctx,
                         const RealVector& pfa_grid, long trials,
                         std::uint64_t seed, int n_jobs = 1);

using WaveformDesigner = std::function<WaveformMatrix(const Scenario&)>;

/// Redesign the waveform for independent channel draws and average the
/// detection probability pointwise.
RocCurve roc_over_channels(const ScenarioConfig& cfg,
                           const WaveformDesigner& designer, int n_channels,
                           const RealVector& pfa_grid, long trials,
                           std::uint64_t seed, int n_jobs = 1,
                           std::vector<RocCurve>* per_channel = nullptr);

struct BerCurve {
  RealVector snr_grid_db;
  RealVector ber;
  long trials = 0;
  std::uint64_t seed = 0;
};

/// QPSK bit error rate of the received signal H X^T + noise against the
/// intended symbols, per-user noise power e_c / SNR. Gray mapping makes a bit
/// error one sign mismatch in the real or imaginary part.
BerCurve ber(const WaveformMatrix& x, const CommScenario& comm,
             const RealVector& snr_grid_db, long trials, std::uint64_t seed);

/// Paired comparison with common noise draws: mean of the per-trial BER
/// difference (a minus b) and its standard error at one SNR point.
void ber_paired(const WaveformMatrix& xa, const WaveformMatrix& xb,
                const CommScenario& comm, double snr_db, long trials,
                std::uint64_t seed, double* mean_diff, double* std_error);

/// Sum over users of the per-slot average log2(1 + SINR), treating residual
/// multi-user interference as additive noise.
double sum_rate(const WaveformMatrix& x, const CommScenario& comm,
                const RealVector& sigma_z_sq);

/// Noiseless received constellation H X^T (M x L).
CxMatrix constellation_points(const WaveformMatrix& x, const CxMatrix& h);

}  // namespace dfrc

#endif  // DFRC_EVAL_HPP
