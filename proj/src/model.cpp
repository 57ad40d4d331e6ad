#include "dfrc/model.hpp"

#include <cmath>
#include <stdexcept>

#include "dfrc/rng.hpp"

namespace dfrc {

CxVector steering_vector(double theta_deg, int n_elements) {
  if (n_elements < 1)
    throw std::invalid_argument("steering_vector: n_elements must be >= 1");
  const double s = std::sin(theta_deg * M_PI / 180.0);
  CxVector a(n_elements);
  for (int k = 0; k < n_elements; ++k) {
    const double phase = M_PI * static_cast<double>(k) * s;
    a(k) = Complex(std::cos(phase), std::sin(phase));
  }
  return a;
}

namespace {

CxVector kron_vec(const CxVector& outer, const CxVector& inner) {
  CxVector v(outer.size() * inner.size());
  for (Eigen::Index i = 0; i < outer.size(); ++i)
    v.segment(i * inner.size(), inner.size()) = outer(i) * inner;
  return v;
}

CxMatrix hermitian_psd_sqrt(const CxMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CxMatrix> eig(m);
  RealVector vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * vals.asDiagonal() *
         eig.eigenvectors().adjoint();
}

}  // namespace

RicianTarget build_rician_target(const std::vector<Scatterer>& deterministic,
                                 const std::vector<Scatterer>& random,
                                 int n_tx, int n_rx) {
  const int n = n_tx * n_rx;
  RicianTarget t;
  t.mean_response = CxVector::Zero(n);
  t.covariance = CxMatrix::Zero(n, n);

  for (const auto& sc : deterministic) {
    if (std::isnan(sc.weight))
      throw std::invalid_argument("build_rician_target: NaN amplitude");
    const CxVector a = steering_vector(sc.angle_deg, n_tx);
    const CxVector b = steering_vector(sc.angle_deg, n_rx);
    t.mean_response += sc.weight * kron_vec(b, a);
  }
  for (const auto& sc : random) {
    if (std::isnan(sc.weight) || sc.weight < 0.0)
      throw std::invalid_argument("build_rician_target: variance must be >= 0");
    const CxVector a = steering_vector(sc.angle_deg, n_tx);
    const CxVector b = steering_vector(sc.angle_deg, n_rx);
    const CxVector v = kron_vec(b, a);
    t.covariance.noalias() += sc.weight * (v * v.adjoint());
  }
  // enforce exact Hermitian symmetry before the eigendecomposition
  t.covariance = 0.5 * (t.covariance + t.covariance.adjoint()).eval();
  t.covariance_sqrt = hermitian_psd_sqrt(t.covariance);
  return t;
}

CxMatrix generate_qpsk(int n_users, int code_length, double symbol_energy,
                       std::uint64_t seed) {
  if (symbol_energy < 0.0)
    throw std::invalid_argument("generate_qpsk: symbol_energy must be >= 0");
  const double amp = std::sqrt(symbol_energy / 2.0);
  Rng rng(seed);
  CxMatrix s(n_users, code_length);
  for (int m = 0; m < n_users; ++m)
    for (int l = 0; l < code_length; ++l) {
      const double re = rng.uniform() < 0.5 ? -1.0 : 1.0;
      const double im = rng.uniform() < 0.5 ? -1.0 : 1.0;
      s(m, l) = amp * Complex(re, im);
    }
  return s;
}

CxMatrix generate_channel(int n_users, int n_tx, std::uint64_t seed) {
  Rng rng(seed);
  CxMatrix h(n_users, n_tx);
  for (int m = 0; m < n_users; ++m)
    for (int n = 0; n < n_tx; ++n) h(m, n) = rng.complex_gaussian();
  return h;
}

WaveformMatrix quasi_orthogonal_waveforms(int code_length, int n_tx,
                                          double transmit_energy,
                                          std::uint64_t seed) {
  Rng rng(seed);
  CxMatrix x(code_length, n_tx);
  for (int n = 0; n < n_tx; ++n)
    for (int l = 0; l < code_length; ++l) x(l, n) = rng.unit_phase();
  x *= std::sqrt(transmit_energy / static_cast<double>(code_length * n_tx));
  return WaveformMatrix{x};
}

std::vector<Scatterer> default_random_scatterers() {
  std::vector<Scatterer> list;
  list.reserve(30);
  for (int k = 0; k < 30; ++k)
    list.push_back({0.05, -60.0 + 4.0 * static_cast<double>(k)});
  return list;
}

RicianTarget default_rician_target(int n_tx, int n_rx) {
  const std::vector<Scatterer> det = {{std::sqrt(1.5), 15.0}};
  return build_rician_target(det, default_random_scatterers(), n_tx, n_rx);
}

}  // namespace dfrc
