#include "dfrc/papr.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dfrc {

CxVector papr_project(const CxVector& c, const PaprSet& set, bool* degenerate) {
  const int l = set.code_length;
  if (c.size() != l) throw std::invalid_argument("papr_project: length mismatch");
  const double energy = set.per_antenna_energy;
  const double cap = std::sqrt(set.peak_cap_sq());
  if (degenerate) *degenerate = false;

  RealVector mag = c.cwiseAbs();
  if (mag.maxCoeff() <= 0.0) {
    if (degenerate) *degenerate = true;
    return CxVector::Constant(l, Complex(std::sqrt(energy / l), 0.0));
  }

  // clip-and-renormalize; the clip set only grows, so at most L passes
  std::vector<bool> clipped(l, false);
  RealVector out_mag = RealVector::Zero(l);
  for (int pass = 0; pass < l + 1; ++pass) {
    double clipped_energy = 0.0;
    double free_sq = 0.0;
    for (int i = 0; i < l; ++i) {
      if (clipped[i])
        clipped_energy += cap * cap;
      else
        free_sq += mag(i) * mag(i);
    }
    const double residual = energy - clipped_energy;
    if (free_sq <= 0.0 || residual <= 0.0) {
      // remaining energy must be spread over entries with zero magnitude
      int n_free = 0;
      for (int i = 0; i < l; ++i)
        if (!clipped[i]) ++n_free;
      const double fill =
          n_free > 0 ? std::sqrt(std::max(residual, 0.0) / n_free) : 0.0;
      for (int i = 0; i < l; ++i) out_mag(i) = clipped[i] ? cap : fill;
      break;
    }
    const double scale = std::sqrt(residual / free_sq);
    bool grew = false;
    for (int i = 0; i < l; ++i) {
      if (clipped[i]) continue;
      if (scale * mag(i) > cap) {
        clipped[i] = true;
        grew = true;
      }
    }
    if (!grew) {
      for (int i = 0; i < l; ++i) out_mag(i) = clipped[i] ? cap : scale * mag(i);
      break;
    }
  }

  CxVector x(l);
  for (int i = 0; i < l; ++i) {
    const Complex phase = mag(i) > 0.0 ? c(i) / mag(i) : Complex(1.0, 0.0);
    x(i) = out_mag(i) * phase;
  }
  return x;
}

namespace {

// Largest (signed) eigenvalue of a Hermitian matrix. Power iteration alone
// finds the largest-magnitude eigenvalue, so iterate on the Gershgorin-shifted
// matrix B + sI, which is positive semidefinite.
double largest_eigenvalue(const CxMatrix& b, int iters) {
  const double shift = b.cwiseAbs().rowwise().sum().maxCoeff();
  CxVector v(b.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = Complex(1.0, 0.1 * static_cast<double>(i % 7));
  v.normalize();
  double lambda = 0.0;
  for (int i = 0; i < iters; ++i) {
    CxVector w = b * v + shift * v;
    const double n = w.norm();
    if (n <= 1e-300) return -shift;
    v = w / n;
    const double next = v.dot(b * v).real();
    if (std::abs(next - lambda) < 1e-10 * std::max(1.0, std::abs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace

CxVector solve_papr_qp(const CxMatrix& b_matrix, const CxVector& b,
                       const PaprSet& set, const CxVector& x0,
                       const PaprQpOptions& options) {
  const int l = set.code_length;
  const Eigen::Index dim = b.size();
  if (dim % l != 0)
    throw std::invalid_argument("solve_papr_qp: size not a multiple of L");
  const int n_blocks = static_cast<int>(dim / l);

  // any lambda >= lambda_max(B) keeps the descent guarantee; pad the power
  // iteration estimate a little
  const double lambda = largest_eigenvalue(b_matrix, options.power_iters) +
                        1e-8 * b_matrix.norm() + 1e-12;

  auto objective = [&](const CxVector& x) {
    return x.dot(b_matrix * x).real() + 2.0 * x.dot(b).real();
  };

  CxVector x = x0;
  double prev = objective(x);
  for (int it = 0; it < options.max_iter; ++it) {
    CxVector c = -(b + b_matrix * x - lambda * x);
    CxVector next(dim);
    for (int nb = 0; nb < n_blocks; ++nb)
      next.segment(static_cast<Eigen::Index>(nb) * l, l) =
          papr_project(c.segment(static_cast<Eigen::Index>(nb) * l, l), set);
    const double val = objective(next);
    if (val > prev + 1e-12 * std::max(1.0, std::abs(prev))) break;  // stalled
    x = next;
    if (std::abs(prev - val) <
        options.tol * std::max(1.0, std::abs(val)))
      { prev = val; break; }
    prev = val;
  }
  return x;
}

}  // namespace dfrc
