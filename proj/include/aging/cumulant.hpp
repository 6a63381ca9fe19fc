#pragma once

#include "aging/fixed_points.hpp"
#include "aging/ode.hpp"
#include "aging/params.hpp"

namespace aging {

/// Collective moments with second-order pair correlations retained:
///   Q = (1/N) sum_j s+j s-j,            A = (1/N) sum_j s+j,
///   B = (1/N) sum_{j != k} s+j s-k,      C = (1/N) sum_{j != k} s+j s+k s-k,
///   D = (1/N) sum_{j != k} s+j s+k,      E = (1/N) sum_{j != k} n_j n_k.
/// B and E are Hermitian, hence real.
struct CumulantState {
  double q = 0.0;
  cplx a{};
  double b = 0.0;
  cplx c{};
  cplx d{};
  double e = 0.0;
};

struct CumulantDerivative {
  CumulantState rate;  // time derivative of every moment
  // Imaginary parts of the dB/dt and dE/dt expressions before projection.
  double imag_residual = 0.0;

  double max_norm() const noexcept;
};

struct CumulantResult {
  CumulantState steady;
  double nbar = 0.0;
  double max_imag_drift = 0.0;
  IntegrationOutcome outcome;
};

/// Throws RequiresZeroV when the dissipative coupling is nonzero; the closure
/// is only derived for V = 0.
CumulantDerivative cumulant_rhs(const CumulantState& state, const ModelParams& params, double p);

CumulantResult integrate_cumulant(const ModelParams& params, double p, const CumulantState& init,
                                  const IntegrationControls& controls = {});

}  // namespace aging
