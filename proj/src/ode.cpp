#include "aging/ode.hpp"

#include <fmt/format.h>

namespace aging {

const char* to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::MaxTime: return "max_time";
    case StopReason::LimitCycle: return "limit_cycle";
  }
  return "?";
}

void validate(const IntegrationControls& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (!(c.abs_tol > 0.0)) fail(fmt::format("abs_tol must be > 0, got {}", c.abs_tol));
  if (!(c.rel_tol > 0.0)) fail(fmt::format("rel_tol must be > 0, got {}", c.rel_tol));
  if (!(c.steady_tol > 0.0)) fail(fmt::format("steady_tol must be > 0, got {}", c.steady_tol));
  if (!(c.t_max > 0.0)) fail(fmt::format("t_max must be > 0, got {}", c.t_max));
  if (!(c.report_interval > 0.0))
    fail(fmt::format("report_interval must be > 0, got {}", c.report_interval));
  if (!(c.initial_step > 0.0)) fail(fmt::format("initial_step must be > 0, got {}", c.initial_step));
  if (c.stepper == StepperKind::Fixed && !(c.fixed_step > 0.0))
    fail(fmt::format("fixed_step must be > 0, got {}", c.fixed_step));
}

}  // namespace aging
