#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "aging/fixed_points.hpp"
#include "aging/ode.hpp"
#include "aging/params.hpp"

namespace aging {

/// Mean excited population <Q> and mean raising-operator expectation <A>.
/// The conjugate variable <A>* is implied.
struct CollectiveState {
  double q = 0.5;
  cplx a{0.5, 0.0};
};

struct CollectiveDerivative {
  double dq = 0.0;
  cplx da{};

  double max_norm() const noexcept;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<CollectiveState> states;
  CollectiveState final_state;
  std::optional<CollectiveState> steady;  // set iff converged
  IntegrationOutcome outcome;

  bool converged() const noexcept { return outcome.converged(); }
  /// Final mean population; equals steady->q when converged.
  double nbar() const noexcept { return final_state.q; }
};

CollectiveDerivative collective_rhs(const CollectiveState& state, const ModelParams& params,
                                    double p);

Trajectory integrate_to_steady(const ModelParams& params, double p, const CollectiveState& init,
                               const IntegrationControls& controls = {});

/// Jacobian of the flow in the complex coordinates (<Q>, <A>, <A>*).
Eigen::Matrix3cd linearization(const CollectiveState& state, const ModelParams& params,
                               double p);

/// Jacobian in the real coordinates (q, Re a, Im a).
Eigen::Matrix3d real_jacobian(const CollectiveState& state, const ModelParams& params, double p);

inline constexpr double kStabilityMargin = 1e-9;

/// Eigenvalues are sorted by decreasing real part.
StabilityReport stability(const ModelParams& params, double p, const FixedPoint& fp);

/// solve_fixed_points followed by a stability report on every point.
FixedPointSet classify_fixed_points(const ModelParams& params, double p);

}  // namespace aging
