#ifndef DFRC_PAPR_HPP
#define DFRC_PAPR_HPP

#include "dfrc/types.hpp"

namespace dfrc {

/// Per-antenna constraint set: fixed energy and bounded peak power.
struct PaprSet {
  double per_antenna_energy = 0.0;  // P_t / N_T
  double papr_limit = 1.0;          // rho in [1, L]
  int code_length = 0;

  double peak_cap_sq() const {
    return papr_limit * per_antenna_energy / static_cast<double>(code_length);
  }
};

/// Euclidean projection of c onto { ||x||^2 = E, max_l |x_l|^2 <= rho E / L }.
/// Phases are kept; magnitudes are clipped at the peak cap and the free set
/// is rescaled to meet the energy equality.
CxVector papr_project(const CxVector& c, const PaprSet& set,
                      bool* degenerate = nullptr);

struct PaprQpOptions {
  double tol = 1e-4;    // relative objective change
  int max_iter = 500;
  int power_iters = 50;
};

/// Minimize x^H B x + 2 Re(x^H b) over the per-antenna PAPR set (x holds the
/// N_T per-antenna blocks stacked), by majorizing the quadratic at lambda_max
/// and projecting each block. Objective is non-increasing across iterations.
CxVector solve_papr_qp(const CxMatrix& b_matrix, const CxVector& b,
                       const PaprSet& set, const CxVector& x0,
                       const PaprQpOptions& options = {});

}  // namespace dfrc

#endif  // DFRC_PAPR_HPP
