#ifndef DFRC_MODEL_HPP
#define DFRC_MODEL_HPP

#include <cstdint>
#include <vector>

#include "dfrc/types.hpp"

namespace dfrc {

/// One scatterer: weight is an amplitude for deterministic scatterers and a
/// variance for random ones; angle in degrees.
struct Scatterer {
  double weight;
  double angle_deg;
};

/// Rician target statistics: mean response g_d and Hermitian PSD covariance
/// R_G of the stacked target channel, with a cached PSD square root.
struct RicianTarget {
  CxVector mean_response;   // N_T * N_R
  CxMatrix covariance;      // (N_T*N_R) x (N_T*N_R)
  CxMatrix covariance_sqrt; // Hermitian PSD square root
};

/// Communication-side scenario: channel, desired symbols, MUI budget.
struct CommScenario {
  CxMatrix channel;          // M x N_T
  CxMatrix symbols;          // M x L
  double mui_budget = 0.0;
  RealVector per_user_noise; // sigma^2_{z,m}, length M
};

/// L x N_T transmit code matrix.
struct WaveformMatrix {
  CxMatrix samples;

  int code_length() const { return static_cast<int>(samples.rows()); }
  int n_tx() const { return static_cast<int>(samples.cols()); }
  double total_energy() const { return samples.squaredNorm(); }
};

/// Half-wavelength ULA steering vector, element k = exp(j*pi*k*sin(theta)).
CxVector steering_vector(double theta_deg, int n_elements);

/// Assemble g_d and R_G from deterministic and random scatterer lists.
RicianTarget build_rician_target(const std::vector<Scatterer>& deterministic,
                                 const std::vector<Scatterer>& random,
                                 int n_tx, int n_rx);

/// M x L QPSK symbols, every entry drawn from {±1±j}*sqrt(symbol_energy/2).
CxMatrix generate_qpsk(int n_users, int code_length, double symbol_energy,
                       std::uint64_t seed);

/// M x N_T flat-fading channel, i.i.d. CN(0, 1).
CxMatrix generate_channel(int n_users, int n_tx, std::uint64_t seed);

/// Unit-modulus random-phase codes scaled to total energy = transmit_energy.
WaveformMatrix quasi_orthogonal_waveforms(int code_length, int n_tx,
                                          double transmit_energy,
                                          std::uint64_t seed);

/// Default target of the experiments: one deterministic scatterer at 15 deg
/// with amplitude sqrt(3/2) plus 30 random scatterers of variance 0.05 on an
/// even DOA grid from -60 to 56 deg.
RicianTarget default_rician_target(int n_tx, int n_rx);

/// Evenly spaced DOA grid used for the diffuse component.
std::vector<Scatterer> default_random_scatterers();

}  // namespace dfrc

#endif  // DFRC_MODEL_HPP
