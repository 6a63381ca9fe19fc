#include "aging/cumulant.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "aging/errors.hpp"

namespace aging {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_zero_v(const ModelParams& params) {
  if (params.dissipative_coupling != 0.0) {
    throw Error(ErrorKind::RequiresZeroV,
                fmt::format("the correlated (cumulant) equations need V = 0, got V={}",
                            params.dissipative_coupling));
  }
}

// Packed as q, Re a, Im a, b, Re c, Im c, Re d, Im d, e.
CumulantState unpack(const std::vector<double>& x) {
  return {x[0], cplx(x[1], x[2]), x[3], cplx(x[4], x[5]), cplx(x[6], x[7]), x[8]};
}

void pack(const CumulantState& s, std::vector<double>& x) {
  x = {s.q, s.a.real(), s.a.imag(), s.b, s.c.real(), s.c.imag(), s.d.real(), s.d.imag(), s.e};
}

}  // namespace

double CumulantDerivative::max_norm() const noexcept {
  const auto& r = rate;
  return std::max({std::abs(r.q), std::abs(r.a.real()), std::abs(r.a.imag()), std::abs(r.b),
                   std::abs(r.c.real()), std::abs(r.c.imag()), std::abs(r.d.real()),
                   std::abs(r.d.imag()), std::abs(r.e)});
}

CumulantDerivative cumulant_rhs(const CumulantState& s, const ModelParams& params, double p) {
  require_zero_v(params);
  const double big_n = params.n_qubits;
  const double kappa = params.kappa;
  const double delta = params.detuning;
  const double g = params.coherent_coupling;
  const double omega = params.drive;
  const double active = 1.0 - p;

  const cplx a = s.a;
  const cplx c = s.c;
  const cplx d = s.d;
  const double q = s.q;
  const cplx b(s.b, 0.0);
  const cplx e(s.e, 0.0);
  const double shifted_sz = 2.0 * big_n * q - big_n + 2.0;  // 2NQ - N + 2

  const cplx dq = omega * a.imag() - 2.0 * kappa * q + 2.0 * kappa * active;
  const cplx da = kI * (0.5 * omega) * (1.0 - 2.0 * q) +
                  (kI * delta - kI * 4.0 * g * (big_n - 1.0) - kappa) * a + kI * 8.0 * g * c;
  const cplx db = kI * omega * (c - std::conj(c)) -
                  kI * (0.5 * omega * (big_n - 1.0)) * (a - std::conj(a)) - 2.0 * kappa * b;
  // The 2NQ<C> term appears twice in the closed system; kept as written.
  const cplx dc = kI * (0.5 * omega * (big_n - 1.0)) * q + 2.0 * kappa * big_n * active * a +
                  kI * (0.5 * omega) * b - kI * (0.5 * omega) * d - kI * omega * e +
                  (kI * delta + kI * 4.0 * g - 3.0 * kappa) * c +
                  kI * 4.0 * g *
                      (c * shifted_sz + 2.0 * big_n * q * c + 2.0 * big_n * a * e -
                       4.0 * big_n * big_n * a * q * q);
  const cplx dd = kI * omega * (big_n - 1.0) * a - 2.0 * kI * omega * c +
                  (2.0 * kI * delta - 2.0 * kappa) * d +
                  kI * 8.0 * g *
                      (d * shifted_sz + 4.0 * big_n * a * c - 4.0 * big_n * big_n * a * a * q);
  const cplx de = 4.0 * kappa * big_n * active * q - kI * omega * (c - std::conj(c)) -
                  4.0 * kappa * e;

  CumulantDerivative out;
  out.rate = {dq.real(), da, db.real(), dc, dd, de.real()};
  out.imag_residual = std::max(std::abs(db.imag()), std::abs(de.imag()));
  return out;
}

CumulantResult integrate_cumulant(const ModelParams& params, double p, const CumulantState& init,
                                  const IntegrationControls& controls) {
  validate(params);
  validate_ratio(p);
  require_zero_v(params);

  CumulantResult result;
  auto system = [&](const std::vector<double>& x, std::vector<double>& dxdt, double) {
    const auto d = cumulant_rhs(unpack(x), params, p);
    const auto& r = d.rate;
    result.max_imag_drift = std::max(result.max_imag_drift, d.imag_residual);
    dxdt[0] = r.q;
    dxdt[1] = r.a.real();
    dxdt[2] = r.a.imag();
    dxdt[3] = r.b;
    dxdt[4] = r.c.real();
    dxdt[5] = r.c.imag();
    dxdt[6] = r.d.real();
    dxdt[7] = r.d.imag();
    dxdt[8] = r.e;
  };
  std::vector<double> x;
  pack(init, x);
  result.outcome = run_to_steady(system, x, controls, ResidualNorm::Max,
                                 [](double, const std::vector<double>&, double) {});
  result.steady = unpack(x);
  result.nbar = result.steady.q;
  return result;
}

}  // namespace aging
