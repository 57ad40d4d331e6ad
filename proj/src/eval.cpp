#include "dfrc/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>

#include "dfrc/rng.hpp"

namespace dfrc {

DetectorStatistic make_detector(const WaveformMatrix& x,
                                const ObjectiveContext& ctx) {
  const int dim = ctx.n_rl();
  const CxMatrix r1 = covariance_r1(x, ctx);
  const Eigen::LLT<CxMatrix> llt(r1);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("make_detector: R1 not positive definite");
  const CxMatrix r1_inv = llt.solve(CxMatrix::Identity(dim, dim));

  DetectorStatistic det;
  det.weight = CxMatrix::Identity(dim, dim) / ctx.noise_power - r1_inv;
  det.match = r1_inv * lifted_apply(x, ctx.n_rx, ctx.target.mean_response);
  return det;
}

double detector_statistic(const CxVector& y, const WaveformMatrix& x,
                          const ObjectiveContext& ctx) {
  return make_detector(x, ctx)(y);
}

namespace {

constexpr long kBlockSize = 4096;

// statistic plus a uniform tie-breaker, so degenerate statistics (X = 0 makes
// every sample identical) still realize the nominal false-alarm rate
using Sample = std::pair<double, double>;

/// Run `body(block_index, block_rng_index)` over ceil(trials/kBlockSize)
/// blocks on n_jobs threads; block boundaries are fixed so the merged result
/// does not depend on the worker count.
template <typename Body>
void run_blocks(long trials, int n_jobs, Body body) {
  const long n_blocks = (trials + kBlockSize - 1) / kBlockSize;
  n_jobs = std::max(1, n_jobs);
  if (n_jobs == 1) {
    for (long blk = 0; blk < n_blocks; ++blk) body(blk);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&] {
    for (;;) {
      const long blk = next.fetch_add(1);
      if (blk >= n_blocks) return;
      body(blk);
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < n_jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

CxVector complex_gaussian_vector(Rng& rng, int dim) {
  CxVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
  return v;
}

}  // namespace

RocCurve monte_carlo_roc(const WaveformMatrix& x, const ObjectiveContext& ctx,
                         const RealVector& pfa_grid, long trials,
                         std::uint64_t seed, int n_jobs) {
  if (trials < 1) throw std::invalid_argument("monte_carlo_roc: trials < 1");
  const DetectorStatistic det = make_detector(x, ctx);
  const int dim = ctx.n_rl();
  const double sigma = std::sqrt(ctx.noise_power);
  const CxVector& gd = ctx.target.mean_response;
  const CxMatrix& rg_sqrt = ctx.target.covariance_sqrt;

  std::vector<Sample> t0(trials), t1(trials);
  run_blocks(trials, n_jobs, [&](long blk) {
    Rng rng0 = Rng::substream(seed, 2 * static_cast<std::uint64_t>(blk));
    Rng rng1 = Rng::substream(seed, 2 * static_cast<std::uint64_t>(blk) + 1);
    const long lo = blk * kBlockSize;
    const long hi = std::min(trials, lo + kBlockSize);
    for (long t = lo; t < hi; ++t) {
      const CxVector n0 = sigma * complex_gaussian_vector(rng0, dim);
      t0[t] = {det(n0), rng0.uniform()};

      const CxVector g =
          gd + rg_sqrt * complex_gaussian_vector(rng1, gd.size());
      const CxVector y1 = lifted_apply(x, ctx.n_rx, g) +
                          sigma * complex_gaussian_vector(rng1, dim);
      t1[t] = {det(y1), rng1.uniform()};
    }
  });

  std::sort(t0.begin(), t0.end());

  RocCurve curve;
  curve.pfa_grid = pfa_grid;
  curve.pd = RealVector::Zero(pfa_grid.size());
  curve.trials = trials;
  curve.seed = seed;
  const double inf = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < pfa_grid.size(); ++i) {
    const double pfa = pfa_grid(i);
    if (pfa <= 0.0 || pfa > 1.0)
      throw std::invalid_argument("monte_carlo_roc: pfa outside (0, 1]");
    const long k = std::min<long>(trials, std::llround(pfa * trials));
    if (k < 100) curve.low_exceedance = true;
    Sample threshold{-inf, -inf};  // k == trials: below every sample
    if (k < trials) threshold = t0[trials - k - 1];
    long hits = 0;
    for (const Sample& s : t1)
      if (s > threshold) ++hits;
    curve.pd(i) = static_cast<double>(hits) / static_cast<double>(trials);
  }
  return curve;
}

RocCurve roc_over_channels(const ScenarioConfig& cfg,
                           const WaveformDesigner& designer, int n_channels,
                           const RealVector& pfa_grid, long trials,
                           std::uint64_t seed, int n_jobs,
                           std::vector<RocCurve>* per_channel) {
  if (n_channels < 1)
    throw std::invalid_argument("roc_over_channels: n_channels < 1");
  RocCurve avg;
  avg.pfa_grid = pfa_grid;
  avg.pd = RealVector::Zero(pfa_grid.size());
  avg.trials = trials;
  avg.seed = seed;
  if (per_channel) per_channel->clear();
  for (int c = 0; c < n_channels; ++c) {
    ScenarioConfig cfg_c = cfg;
    cfg_c.rng_seed = Rng::substream(seed, 500 + static_cast<std::uint64_t>(c))
                         .integer();
    const Scenario scenario = make_scenario(cfg_c);
    const WaveformMatrix x = designer(scenario);
    const RocCurve curve = monte_carlo_roc(
        x, scenario.ctx, pfa_grid, trials,
        Rng::substream(seed, 1000 + static_cast<std::uint64_t>(c)).integer(),
        n_jobs);
    avg.pd += curve.pd;
    avg.low_exceedance = avg.low_exceedance || curve.low_exceedance;
    if (per_channel) per_channel->push_back(curve);
  }
  avg.pd /= static_cast<double>(n_channels);
  return avg;
}

namespace {

/// Gray-mapped QPSK bit errors of a received point against the sent symbol:
/// one error per sign mismatch in the real or imaginary part.
inline int qpsk_bit_errors(Complex received, Complex sent) {
  int e = 0;
  if ((received.real() >= 0.0) != (sent.real() >= 0.0)) ++e;
  if ((received.imag() >= 0.0) != (sent.imag() >= 0.0)) ++e;
  return e;
}

long count_trial_errors(const CxMatrix& noiseless, const CxMatrix& symbols,
                        double sigma_z, Rng& rng) {
  long errors = 0;
  // column-major walk to keep the draw order independent of the waveform
  for (Eigen::Index c = 0; c < noiseless.cols(); ++c)
    for (Eigen::Index r = 0; r < noiseless.rows(); ++r) {
      const Complex z = sigma_z * rng.complex_gaussian();
      errors += qpsk_bit_errors(noiseless(r, c) + z, symbols(r, c));
    }
  return errors;
}

}  // namespace

BerCurve ber(const WaveformMatrix& x, const CommScenario& comm,
             const RealVector& snr_grid_db, long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("ber: trials < 1");
  const CxMatrix noiseless = constellation_points(x, comm.channel);
  const CxMatrix& s = comm.symbols;
  const double e_c = s.squaredNorm() / static_cast<double>(s.size());
  const long bits_per_trial = 2 * s.size();

  BerCurve curve;
  curve.snr_grid_db = snr_grid_db;
  curve.ber = RealVector::Zero(snr_grid_db.size());
  curve.trials = trials;
  curve.seed = seed;
  for (Eigen::Index i = 0; i < snr_grid_db.size(); ++i) {
    const double snr = std::pow(10.0, snr_grid_db(i) / 10.0);
    const double sigma_z = std::sqrt(e_c / snr);
    long errors = 0;
    const long n_blocks = (trials + kBlockSize - 1) / kBlockSize;
    for (long blk = 0; blk < n_blocks; ++blk) {
      Rng rng = Rng::substream(
          seed, static_cast<std::uint64_t>(i) * 100003 +
                    static_cast<std::uint64_t>(blk));
      const long lo = blk * kBlockSize;
      const long hi = std::min(trials, lo + kBlockSize);
      for (long t = lo; t < hi; ++t)
        errors += count_trial_errors(noiseless, s, sigma_z, rng);
    }
    curve.ber(i) = static_cast<double>(errors) /
                   static_cast<double>(bits_per_trial * trials);
  }
  return curve;
}

void ber_paired(const WaveformMatrix& xa, const WaveformMatrix& xb,
                const CommScenario& comm, double snr_db, long trials,
                std::uint64_t seed, double* mean_diff, double* std_error) {
  if (trials < 2) throw std::invalid_argument("ber_paired: trials < 2");
  const CxMatrix ca = constellation_points(xa, comm.channel);
  const CxMatrix cb = constellation_points(xb, comm.channel);
  const CxMatrix& s = comm.symbols;
  const double e_c = s.squaredNorm() / static_cast<double>(s.size());
  const double snr = std::pow(10.0, snr_db / 10.0);
  const double sigma_z = std::sqrt(e_c / snr);
  const double bits_per_trial = 2.0 * static_cast<double>(s.size());

  double sum = 0.0, sum_sq = 0.0;
  const long n_blocks = (trials + kBlockSize - 1) / kBlockSize;
  for (long blk = 0; blk < n_blocks; ++blk) {
    const long lo = blk * kBlockSize;
    const long hi = std::min(trials, lo + kBlockSize);
    for (long t = lo; t < hi; ++t) {
      // identical noise for both waveforms: re-seed per trial
      Rng rng_a = Rng::substream(seed, static_cast<std::uint64_t>(t));
      Rng rng_b = Rng::substream(seed, static_cast<std::uint64_t>(t));
      const long ea = count_trial_errors(ca, s, sigma_z, rng_a);
      const long eb = count_trial_errors(cb, s, sigma_z, rng_b);
      const double d = static_cast<double>(ea - eb) / bits_per_trial;
      sum += d;
      sum_sq += d * d;
    }
  }
  const double n = static_cast<double>(trials);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  if (mean_diff) *mean_diff = mean;
  if (std_error) *std_error = std::sqrt(var / n);
}

double sum_rate(const WaveformMatrix& x, const CommScenario& comm,
                const RealVector& sigma_z_sq) {
  const CxMatrix residual = constellation_points(x, comm.channel) - comm.symbols;
  if (sigma_z_sq.size() != comm.symbols.rows())
    throw std::invalid_argument("sum_rate: per-user noise size mismatch");
  const double l = static_cast<double>(comm.symbols.cols());
  double rate = 0.0;
  for (Eigen::Index m = 0; m < comm.symbols.rows(); ++m)
    for (Eigen::Index i = 0; i < comm.symbols.cols(); ++i) {
      const double sinr = std::norm(comm.symbols(m, i)) /
                          (std::norm(residual(m, i)) + sigma_z_sq(m));
      rate += std::log2(1.0 + sinr) / l;
    }
  return rate;
}

CxMatrix constellation_points(const WaveformMatrix& x, const CxMatrix& h) {
  return h * x.samples.transpose();
}

}  // namespace dfrc
