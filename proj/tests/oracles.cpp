#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

std::vector<double> companion_real_roots(double a, double b, double c, double d,
                                         double imag_tol) {
  Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
  companion(0, 0) = -b / a;
  companion(0, 1) = -c / a;
  companion(0, 2) = -d / a;
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
  std::vector<double> roots;
  for (int k = 0; k < 3; ++k) {
    const cplx z = solver.eigenvalues()(k);
    if (std::abs(z.imag()) < imag_tol * std::max(1.0, std::abs(z))) roots.push_back(z.real());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

Eigen::Vector3d collective_flow(const Eigen::Vector3d& x, const aging::ModelParams& prm,
                                double p) {
  const double n = prm.n_qubits;
  const double q = x(0);
  const cplx a(x(1), x(2));
  const cplx i(0.0, 1.0);
  const double dq = prm.drive * a.imag() -
                    (2.0 * prm.kappa + 4.0 * prm.dissipative_coupling * (n - 1.0) / n) * q +
                    2.0 * prm.kappa * (1.0 - p) + 4.0 * prm.dissipative_coupling * std::norm(a);
  const cplx da =
      i * (prm.detuning - 4.0 * prm.coherent_coupling * (n - 1.0) +
           8.0 * prm.coherent_coupling * n * q) * a +
      i * prm.drive / 2.0 * (1.0 - 2.0 * q) - (prm.kappa + 4.0 * prm.dissipative_coupling * q) * a;
  return {dq, da.real(), da.imag()};
}

Eigen::Matrix3d fd_jacobian(const Eigen::Vector3d& x, const aging::ModelParams& params, double p,
                            double h) {
  Eigen::Matrix3d jac;
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d up = x, down = x;
    up(k) += h;
    down(k) -= h;
    jac.col(k) = (collective_flow(up, params, p) - collective_flow(down, params, p)) / (2.0 * h);
  }
  return jac;
}

void meanfield_brute_force(const std::vector<double>& w, const std::vector<cplx>& q,
                           int n_active, const aging::ModelParams& prm, std::vector<double>& dw,
                           std::vector<cplx>& dq) {
  const int n = static_cast<int>(w.size());
  const double nn = n;
  const double v = prm.dissipative_coupling;
  const cplx i(0.0, 1.0);
  dw.assign(n, 0.0);
  dq.assign(n, cplx{});
  for (int j = 0; j < n; ++j) {
    double field = 0.0;
    cplx pair_q{};
    cplx pair_q_conj{};
    cplx damp{};
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      field += 2.0 * w[k] - 1.0;
      pair_q += q[k];
      pair_q_conj += std::conj(q[k]);
      damp += w[j] * q[k];
    }
    const double gain = j < n_active ? 2.0 * prm.kappa : 0.0;
    dw[j] = prm.drive * q[j].imag() - (2.0 * prm.kappa + 4.0 * v * (nn - 1.0) / nn) * w[j] + gain +
            (2.0 * v / nn * (q[j] * pair_q_conj + std::conj(q[j]) * pair_q)).real();
    dq[j] = i * (prm.detuning + 4.0 * prm.coherent_coupling * field) * q[j] +
            i * prm.drive / 2.0 * (1.0 - 2.0 * w[j]) - prm.kappa * q[j] - 4.0 * v / nn * damp -
            2.0 * v * (nn - 1.0) / nn * q[j] + 2.0 * v / nn * pair_q;
  }
}

TwoQubitModel two_qubit_model(const aging::ModelParams& prm) {
  using M = Eigen::Matrix4cd;
  // Lowering operators: |1 b1> -> |0 b1> on qubit 0, |b0 1> -> |b0 0> on qubit 1.
  M s0 = M::Zero();
  s0(0, 2) = 1.0;
  s0(1, 3) = 1.0;
  M s1 = M::Zero();
  s1(0, 1) = 1.0;
  s1(2, 3) = 1.0;
  // sigma_z = +1 on excited.
  const Eigen::Vector4d z0(-1, -1, 1, 1);
  const Eigen::Vector4d z1(-1, 1, -1, 1);

  TwoQubitModel model;
  M h = M::Zero();
  for (int k = 0; k < 4; ++k) {
    // Both orderings of the single pair carry g.
    h(k, k) = prm.detuning / 2.0 * (z0(k) + z1(k)) + 2.0 * prm.coherent_coupling * z0(k) * z1(k);
  }
  h += prm.drive / 2.0 * (s0 + s0.adjoint() + s1 + s1.adjoint());
  model.hamiltonian = h;
  model.jumps.emplace_back(s0.adjoint(), prm.kappa);  // qubit 0 pumped
  model.jumps.emplace_back(s1, prm.kappa);            // qubit 1 decays
  // (V/N) D[s0 - s1] + (V/N) D[s1 - s0].
  model.jumps.emplace_back(s0 - s1, 2.0 * prm.dissipative_coupling / 2.0);
  return model;
}

Eigen::Matrix4cd two_qubit_rhs(const TwoQubitModel& model, const Eigen::Matrix4cd& rho) {
  const cplx i(0.0, 1.0);
  Eigen::Matrix4cd out = -i * (model.hamiltonian * rho - rho * model.hamiltonian);
  for (const auto& [l, gamma] : model.jumps) {
    const Eigen::Matrix4cd ld = l.adjoint();
    out += gamma * (2.0 * l * rho * ld - ld * l * rho - rho * ld * l);
  }
  return out;
}

std::vector<double> two_qubit_nbar(const aging::ModelParams& params, double t_end, double dt) {
  const auto model = two_qubit_model(params);
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Identity() / 4.0;
  auto nbar = [](const Eigen::Matrix4cd& r) {
    // Excitations per basis state: 0, 1, 1, 2.
    return 0.5 * (r(1, 1).real() + r(2, 2).real() + 2.0 * r(3, 3).real());
  };
  std::vector<double> out{nbar(rho)};
  const int per_unit = static_cast<int>(std::lround(1.0 / dt));
  for (int unit = 1; unit <= static_cast<int>(t_end); ++unit) {
    for (int s = 0; s < per_unit; ++s) {
      const Eigen::Matrix4cd k1 = two_qubit_rhs(model, rho);
      const Eigen::Matrix4cd k2 = two_qubit_rhs(model, rho + 0.5 * dt * k1);
      const Eigen::Matrix4cd k3 = two_qubit_rhs(model, rho + 0.5 * dt * k2);
      const Eigen::Matrix4cd k4 = two_qubit_rhs(model, rho + dt * k3);
      rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.push_back(nbar(rho));
  }
  return out;
}

aging::ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  aging::ModelParams prm;
  prm.n_qubits = 1 + static_cast<int>(u(rng) * 200);
  prm.detuning = -5.0 + 10.0 * u(rng);
  prm.drive = 5.0 * u(rng);
  prm.coherent_coupling = -0.1 + 0.2 * u(rng);
  prm.dissipative_coupling = u(rng);
  prm.kappa = 0.5 + 1.5 * u(rng);
  prm.inactive_ratio = u(rng);
  return prm;
}

}  // namespace oracle
