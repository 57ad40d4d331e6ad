#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dfrc/eval.hpp"
#include "dfrc/model.hpp"
#include "dfrc/objective.hpp"
#include "dfrc/outer.hpp"
#include "dfrc/rng.hpp"

using namespace dfrc;

namespace {

WaveformMatrix random_waveform(int l, int n_tx, double energy,
                               std::uint64_t seed) {
  Rng rng(seed);
  CxMatrix m(l, n_tx);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.complex_gaussian();
  m *= std::sqrt(energy / m.squaredNorm());
  return WaveformMatrix{m};
}

/// Waveform hitting the symbols exactly (zero residual interference).
WaveformMatrix zero_mui_waveform(const CommScenario& comm, int l) {
  const CxMatrix xt =
      comm.channel.completeOrthogonalDecomposition().pseudoInverse() *
      comm.symbols;
  return WaveformMatrix{xt.transpose()};
}

}  // namespace

TEST_CASE("detector_statistic") {
  const RicianTarget target = default_rician_target(4, 4);
  const ObjectiveContext ctx = make_objective_context(target, 1.0, 4, 8);
  const WaveformMatrix x = random_waveform(8, 4, 1.0, 1);

  SUBCASE("zero observation gives zero") {
    CHECK(detector_statistic(CxVector::Zero(32), x, ctx) == 0.0);
  }
  SUBCASE("degenerate at zero waveform") {
    const WaveformMatrix x0{CxMatrix::Zero(8, 4)};
    Rng rng(2);
    for (int t = 0; t < 10; ++t) {
      CxVector y(32);
      for (int i = 0; i < 32; ++i) y(i) = rng.complex_gaussian();
      CHECK(std::abs(detector_statistic(y, x0, ctx)) < 1e-12);
    }
  }
  SUBCASE("two-path evaluation agrees") {
    const CxMatrix r1 = covariance_r1(x, ctx);
    const Eigen::LLT<CxMatrix> llt(r1);
    const CxVector q = lifted_apply(x, 4, target.mean_response);
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
      CxVector y(32);
      for (int i = 0; i < 32; ++i) y(i) = rng.complex_gaussian();
      const double via_solves =
          y.squaredNorm() / ctx.noise_power - y.dot(llt.solve(y)).real() +
          2.0 * y.dot(llt.solve(q)).real();
      const double direct = detector_statistic(y, x, ctx);
      CHECK(std::abs(direct - via_solves) <=
            1e-9 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("monte_carlo_roc") {
  const RicianTarget target = default_rician_target(4, 4);
  const ObjectiveContext ctx = make_objective_context(target, 1.0, 4, 8);
  const WaveformMatrix x = random_waveform(8, 4, 1.0, 4);
  RealVector pfa(4);
  pfa << 0.01, 0.1, 0.3, 1.0;
  const long trials = 20000;

  SUBCASE("pfa = 1 detects everything; pd monotone in pfa") {
    const RocCurve c = monte_carlo_roc(x, ctx, pfa, trials, 5);
    CHECK(c.pd(3) == 1.0);
    for (int i = 1; i < 4; ++i) CHECK(c.pd(i) >= c.pd(i - 1));
    CHECK(c.pd(2) > 0.0);
  }
  SUBCASE("zero waveform gives pd equal to pfa within 3 sigma") {
    const WaveformMatrix x0{CxMatrix::Zero(8, 4)};
    const RocCurve c = monte_carlo_roc(x0, ctx, pfa, trials, 6);
    for (int i = 0; i < 4; ++i) {
      const double sigma =
          std::sqrt(pfa(i) * (1.0 - pfa(i)) / static_cast<double>(trials));
      CHECK(std::abs(c.pd(i) - pfa(i)) <= 3.0 * sigma + 1e-12);
    }
  }
  SUBCASE("bit-for-bit reproducible and independent of the worker count") {
    const RocCurve a = monte_carlo_roc(x, ctx, pfa, trials, 7, 1);
    const RocCurve b = monte_carlo_roc(x, ctx, pfa, trials, 7, 4);
    CHECK((a.pd - b.pd).norm() == 0.0);
    const RocCurve c = monte_carlo_roc(x, ctx, pfa, trials, 8, 1);
    CHECK((a.pd - c.pd).norm() > 0.0);
  }
  SUBCASE("low-exceedance warning flag") {
    RealVector tiny(1);
    tiny << 1e-3;
    CHECK(monte_carlo_roc(x, ctx, tiny, 5000, 9).low_exceedance);
    RealVector ample(1);
    ample << 0.5;
    CHECK_FALSE(monte_carlo_roc(x, ctx, ample, 5000, 9).low_exceedance);
  }
}

TEST_CASE("roc_over_channels") {
  ScenarioConfig cfg = small_scenario_config();
  RealVector pfa(2);
  pfa << 0.1, 0.5;
  const long trials = 4000;
  const WaveformDesigner designer = [](const Scenario& sc) {
    return restore_feasibility(sc.x0, sc.comm, sc.cfg,
                               ConstraintMode::kEnergy, true);
  };

  SUBCASE("one channel reduces to a single curve") {
    std::vector<RocCurve> per;
    const RocCurve avg =
        roc_over_channels(cfg, designer, 1, pfa, trials, 11, 1, &per);
    REQUIRE(per.size() == 1);
    CHECK((avg.pd - per[0].pd).norm() == 0.0);
  }
  SUBCASE("average lies in the per-channel envelope") {
    std::vector<RocCurve> per;
    const RocCurve avg =
        roc_over_channels(cfg, designer, 4, pfa, trials, 12, 1, &per);
    for (int i = 0; i < 2; ++i) {
      double lo = 1.0, hi = 0.0;
      for (const RocCurve& c : per) {
        lo = std::min(lo, c.pd(i));
        hi = std::max(hi, c.pd(i));
      }
      CHECK(avg.pd(i) >= lo - 1e-12);
      CHECK(avg.pd(i) <= hi + 1e-12);
    }
  }
}

TEST_CASE("ber") {
  CommScenario comm;
  comm.channel = generate_channel(2, 4, 13);
  comm.symbols = generate_qpsk(2, 8, 0.1, 14);
  comm.mui_budget = 1e-6;
  RealVector snr(2);
  snr << 0.0, 10.0;

  SUBCASE("zero waveform decodes at chance level") {
    const BerCurve c =
        ber(WaveformMatrix{CxMatrix::Zero(8, 4)}, comm, snr, 20000, 15);
    const double sigma = std::sqrt(0.25 / (2.0 * 16 * 20000.0));
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(c.ber(i) - 0.5) <= 3.0 * sigma + 1e-3);
  }
  SUBCASE("zero MUI at extreme SNR decodes perfectly") {
    RealVector high(1);
    high << 200.0;
    const BerCurve c = ber(zero_mui_waveform(comm, 8), comm, high, 2000, 16);
    CHECK(c.ber(0) == 0.0);
  }
  SUBCASE("reproducible and decreasing in SNR") {
    const WaveformMatrix x = zero_mui_waveform(comm, 8);
    const BerCurve a = ber(x, comm, snr, 5000, 17);
    const BerCurve b = ber(x, comm, snr, 5000, 17);
    CHECK((a.ber - b.ber).norm() == 0.0);
    CHECK(a.ber(1) <= a.ber(0));
  }
  SUBCASE("paired comparison of identical waveforms is exactly zero") {
    const WaveformMatrix x = random_waveform(8, 4, 1.0, 18);
    double diff = 1.0, se = 1.0;
    ber_paired(x, x, comm, 10.0, 2000, 19, &diff, &se);
    CHECK(diff == 0.0);
    CHECK(se == 0.0);
  }
}

TEST_CASE("sum_rate") {
  CommScenario comm;
  comm.channel = generate_channel(3, 5, 20);
  comm.symbols = generate_qpsk(3, 8, 0.1, 21);
  const WaveformMatrix x = zero_mui_waveform(comm, 8);

  SUBCASE("zero MUI at equal SNR collapses to the log formula") {
    const double gamma = 10.0;
    const RealVector noise = RealVector::Constant(3, 0.1 / gamma);
    CHECK(sum_rate(x, comm, noise) ==
          doctest::Approx(3.0 * std::log2(1.0 + gamma)).epsilon(1e-10));
  }
  SUBCASE("rate vanishes as the noise grows") {
    CHECK(sum_rate(x, comm, RealVector::Constant(3, 1e12)) < 1e-9);
  }
  SUBCASE("residual interference lowers the rate") {
    const WaveformMatrix y = random_waveform(8, 5, 1.0, 22);
    const RealVector noise = RealVector::Constant(3, 0.01);
    CHECK(sum_rate(y, comm, noise) < sum_rate(x, comm, noise));
  }
}

TEST_CASE("constellation_points") {
  CommScenario comm;
  comm.channel = generate_channel(2, 4, 23);
  comm.symbols = generate_qpsk(2, 6, 0.1, 24);
  SUBCASE("zero waveform maps to the origin") {
    CHECK(constellation_points(WaveformMatrix{CxMatrix::Zero(6, 4)},
                               comm.channel)
              .norm() == 0.0);
  }
  SUBCASE("zero-MUI design reproduces the symbols") {
    const CxMatrix pts =
        constellation_points(zero_mui_waveform(comm, 6), comm.channel);
    CHECK((pts - comm.symbols).norm() < 1e-10);
  }
}
