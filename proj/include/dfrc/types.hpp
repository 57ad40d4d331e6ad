#ifndef DFRC_TYPES_HPP
#define DFRC_TYPES_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

namespace dfrc {

using Complex = std::complex<double>;
using CxMatrix = Eigen::MatrixXcd;
using CxVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Scenario parameters for a MIMO dual-function radar-communication setup.
struct ScenarioConfig {
  int n_tx = 12;
  int n_rx = 12;
  int code_length = 10;
  double transmit_energy = 1.0;
  double noise_power = 1.0;
  int n_users = 4;
  double mui_budget = 1e-6;
  double symbol_energy = 0.1;
  double papr_limit = 2.0;
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (n_tx < 1 || n_rx < 1 || code_length < 1 || n_users < 1)
      throw std::invalid_argument("scenario: all counts must be >= 1");
    if (transmit_energy < 0.0 || symbol_energy < 0.0 || mui_budget < 0.0)
      throw std::invalid_argument("scenario: energies must be >= 0");
    if (noise_power <= 0.0)
      throw std::invalid_argument("scenario: noise_power must be > 0");
    if (papr_limit < 1.0 || papr_limit > static_cast<double>(code_length))
      throw std::invalid_argument("scenario: papr_limit must lie in [1, code_length]");
  }
};

/// Reduced-size preset for fast runs.
inline ScenarioConfig small_scenario_config() {
  ScenarioConfig cfg;
  cfg.n_tx = 4;
  cfg.n_rx = 4;
  cfg.code_length = 8;
  cfg.n_users = 2;
  return cfg;
}

}  // namespace dfrc

#endif  // DFRC_TYPES_HPP
