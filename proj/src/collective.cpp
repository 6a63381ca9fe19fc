#include "aging/collective.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace aging {

namespace {

constexpr cplx kI{0.0, 1.0};

CollectiveState unpack(const std::vector<double>& x) { return {x[0], cplx(x[1], x[2])}; }

}  // namespace

double CollectiveDerivative::max_norm() const noexcept {
  return std::max({std::abs(dq), std::abs(da.real()), std::abs(da.imag())});
}

CollectiveDerivative collective_rhs(const CollectiveState& s, const ModelParams& params, double p) {
  const double big_n = params.n_qubits;
  const double g = params.coherent_coupling;
  const double v = params.dissipative_coupling;
  const double kappa = params.kappa;
  const double omega = params.drive;

  CollectiveDerivative d;
  d.dq = omega * s.a.imag() - params.population_decay() * s.q + 2.0 * kappa * (1.0 - p) +
         4.0 * v * std::norm(s.a);
  const double frequency = params.shifted_detuning() + 8.0 * g * big_n * s.q;
  d.da = kI * frequency * s.a + kI * (0.5 * omega) * (1.0 - 2.0 * s.q) -
         (kappa + 4.0 * v * s.q) * s.a;
  return d;
}

Trajectory integrate_to_steady(const ModelParams& params, double p, const CollectiveState& init,
                               const IntegrationControls& controls) {
  auto system = [&](const std::vector<double>& x, std::vector<double>& dxdt, double) {
    const auto d = collective_rhs(unpack(x), params, p);
    dxdt[0] = d.dq;
    dxdt[1] = d.da.real();
    dxdt[2] = d.da.imag();
  };
  Trajectory traj;
  std::vector<double> x{init.q, init.a.real(), init.a.imag()};
  traj.outcome = run_to_steady(system, x, controls, ResidualNorm::Max,
                               [&](double t, const std::vector<double>& s, double) {
                                 if (!controls.record) return;
                                 traj.times.push_back(t);
                                 traj.states.push_back(unpack(s));
                               });
  traj.final_state = unpack(x);
  if (traj.outcome.converged()) traj.steady = traj.final_state;
  return traj;
}

Eigen::Matrix3cd linearization(const CollectiveState& s, const ModelParams& params, double /*p*/) {
  const double big_n = params.n_qubits;
  const double g = params.coherent_coupling;
  const double v = params.dissipative_coupling;
  const double kappa = params.kappa;
  const double omega = params.drive;
  const double shifted = params.shifted_detuning();
  const cplx coupling = kI * 8.0 * g * big_n;  // i 8gN

  Eigen::Matrix3cd m;
  m(0, 0) = -params.population_decay();
  m(0, 1) = -kI * (0.5 * omega) + 4.0 * v * std::conj(s.a);
  m(0, 2) = kI * (0.5 * omega) + 4.0 * v * s.a;
  m(1, 0) = -kI * omega + (coupling - 4.0 * v) * s.a;
  m(1, 1) = kI * shifted - kappa + (coupling - 4.0 * v) * s.q;
  m(1, 2) = 0.0;
  m(2, 0) = kI * omega - (coupling + 4.0 * v) * std::conj(s.a);
  m(2, 1) = 0.0;
  m(2, 2) = -kI * shifted - kappa - (coupling + 4.0 * v) * s.q;
  return m;
}

Eigen::Matrix3d real_jacobian(const CollectiveState& s, const ModelParams& params, double /*p*/) {
  const double gn8 = 8.0 * params.coherent_coupling * params.n_qubits;
  const double v = params.dissipative_coupling;
  const double omega = params.drive;
  const double x = s.a.real();
  const double y = s.a.imag();
  const double damping = params.kappa + 4.0 * v * s.q;
  const double frequency = params.shifted_detuning() + gn8 * s.q;

  Eigen::Matrix3d j;
  j << -params.population_decay(), 8.0 * v * x, omega + 8.0 * v * y,
      -4.0 * v * x - gn8 * y, -damping, -frequency,
      gn8 * x - 4.0 * v * y - omega, frequency, -damping;
  return j;
}

StabilityReport stability(const ModelParams& params, double p, const FixedPoint& fp) {
  const Eigen::Matrix3cd m = linearization({fp.nbar, fp.coherence}, params, p);
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(m, /*computeEigenvectors=*/false);

  StabilityReport report;
  for (int i = 0; i < 3; ++i) report.eigenvalues[i] = solver.eigenvalues()(i);
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](const cplx& l, const cplx& r) {
              if (l.real() != r.real()) return l.real() > r.real();
              return l.imag() > r.imag();
            });
  report.max_real_part = report.eigenvalues[0].real();
  if (!std::isfinite(report.max_real_part) || report.max_real_part > kStabilityMargin) {
    report.classification = StabilityClass::Unstable;
  } else if (report.max_real_part < -kStabilityMargin) {
    report.classification = StabilityClass::Stable;
  } else {
    report.classification = StabilityClass::Marginal;
  }
  return report;
}

FixedPointSet classify_fixed_points(const ModelParams& params, double p) {
  FixedPointSet set = solve_fixed_points(params, p);
  for (auto& fp : set.points) fp.stability = stability(params, p, fp);
  return set;
}

}  // namespace aging
