#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>

#include "aging/errors.hpp"

namespace aging {

enum class StepperKind { Adaptive, Fixed };

enum class StopReason { Converged, MaxTime, LimitCycle };

const char* to_string(StopReason reason) noexcept;

/// Settings shared by every steady-state integration in the library.
struct IntegrationControls {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  double steady_tol = 1e-9;  // residual threshold on the right-hand side
  double t_max = 500.0;      // units of 1/kappa
  double report_interval = 1.0;
  double initial_step = 1e-2;
  StepperKind stepper = StepperKind::Adaptive;
  double fixed_step = 1e-3;
  bool record = true;  // keep states at every report point
};

/// Throws Error(InvalidArgument) on nonsensical controls.
void validate(const IntegrationControls& controls);

struct IntegrationOutcome {
  double t_final = 0.0;
  double residual = 0.0;
  StopReason reason = StopReason::MaxTime;
  std::size_t steps = 0;

  bool converged() const noexcept { return reason == StopReason::Converged; }
};

enum class ResidualNorm { Max, Euclidean };

namespace detail {

inline double residual_norm(const std::vector<double>& v, ResidualNorm kind) {
  double acc = 0.0;
  if (kind == ResidualNorm::Max) {
    for (double e : v) acc = std::max(acc, std::abs(e));
    return acc;
  }
  for (double e : v) acc += e * e;
  return std::sqrt(acc);
}

inline bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double e) { return std::isfinite(e); });
}

// Non-decaying residual over the trailing window at t_max reads as a
// sustained oscillation rather than slow convergence.
inline StopReason classify_unconverged(const std::deque<double>& window) {
  if (window.size() < 2) return StopReason::MaxTime;
  const double first = window.front();
  const double last = window.back();
  return (last >= 0.5 * first) ? StopReason::LimitCycle : StopReason::MaxTime;
}

}  // namespace detail

/// Integrates x' = f(x) from t = 0 until the residual |f(x)| stays below
/// steady_tol at two consecutive report points, or t_max is reached.
///
/// `system(x, dxdt, t)` follows the odeint calling convention. `observe(t, x,
/// residual)` runs at t = 0 and at every report point; it may throw to abort.
template <class System, class Observer>
IntegrationOutcome run_to_steady(System&& system, std::vector<double>& x,
                                 const IntegrationControls& controls, ResidualNorm norm,
                                 Observer&& observe) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;

  validate(controls);
  if (!detail::all_finite(x)) throw Error(ErrorKind::InvalidArgument, "initial state is not finite");
  std::vector<double> dxdt(x.size());
  auto residual_at = [&](double t) {
    system(static_cast<const State&>(x), dxdt, t);
    return detail::residual_norm(dxdt, norm);
  };

  IntegrationOutcome out;
  double t = 0.0;
  double residual = residual_at(t);
  observe(t, static_cast<const State&>(x), residual);
  bool below_before = residual < controls.steady_tol;

  const auto window_len = static_cast<std::size_t>(
      std::max(2.0, std::ceil(0.1 * controls.t_max / controls.report_interval)));
  std::deque<double> window;

  auto controlled = odeint::make_controlled(controls.abs_tol, controls.rel_tol,
                                            odeint::runge_kutta_dopri5<State>());
  odeint::runge_kutta4<State> fixed;
  double dt = controls.stepper == StepperKind::Adaptive ? controls.initial_step
                                                        : controls.fixed_step;
  auto sys = [&system](const State& s, State& ds, double tt) { system(s, ds, tt); };

  int report_index = 0;
  while (t < controls.t_max) {
    ++report_index;
    const double t_report =
        std::min(controls.t_max, report_index * controls.report_interval);
    const double eps = 1e-12 * std::max(1.0, t_report);
    while (t_report - t > eps) {
      const bool capped = dt > t_report - t;
      double h = capped ? t_report - t : dt;
      if (controls.stepper == StepperKind::Fixed) {
        fixed.do_step(sys, x, t, h);
        t += h;
        ++out.steps;
        continue;
      }
      const auto result = controlled.try_step(sys, x, t, h);
      if (result == odeint::success) {
        ++out.steps;
        if (!capped || h < dt) dt = h;
      } else {
        dt = h;
        if (dt < 1e-14) {
          throw Error(ErrorKind::NonFinite, "step size underflow during integration");
        }
      }
    }
    t = t_report;
    if (!detail::all_finite(x)) {
      throw Error(ErrorKind::NonFinite,
                  "integration left the finite range at t=" + std::to_string(t));
    }
    residual = residual_at(t);
    observe(t, static_cast<const State&>(x), residual);
    window.push_back(residual);
    if (window.size() > window_len) window.pop_front();

    const bool below = residual < controls.steady_tol;
    if (below && below_before) {
      out.reason = StopReason::Converged;
      out.t_final = t;
      out.residual = residual;
      return out;
    }
    below_before = below;
  }
  out.t_final = t;
  out.residual = residual;
  out.reason = detail::classify_unconverged(window);
  return out;
}

}  // namespace aging
