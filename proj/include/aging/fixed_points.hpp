#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "aging/params.hpp"

namespace aging {

using cplx = std::complex<double>;

/// Coefficients of the steady-state cubic a x^3 + b x^2 + c x + d = 0 in the
/// mean population x = <Q>, together with its depressed form
/// y^3 + n y + m = 0 (x = y - b/3a) and discriminant (m/2)^2 + (n/3)^3.
struct CubicCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  // NaN when degenerate.
  double m = 0.0;
  double n = 0.0;
  double discriminant = 0.0;
  bool degenerate = false;  // a == 0; the cubic collapses to quadratic/linear

  double evaluate(double x) const noexcept { return ((a * x + b) * x + c) * x + d; }
  double derivative(double x) const noexcept { return (3.0 * a * x + 2.0 * b) * x + c; }
  double scale() const noexcept;
};

enum class StabilityClass { Stable, Marginal, Unstable };

/// Linearization spectrum of the collective flow at a fixed point.
struct StabilityReport {
  std::array<cplx, 3> eigenvalues{};
  double max_real_part = 0.0;
  StabilityClass classification = StabilityClass::Unstable;

  bool stable() const noexcept { return classification == StabilityClass::Stable; }
};

/// One real root of the steady-state cubic.
struct FixedPoint {
  double nbar = 0.0;
  cplx coherence{};  // steady <A> paired with nbar
  /// Branch index in the Cardano ordering: 1 is the upper branch, 2 the
  /// lower branch and 3 the middle branch when three real roots exist.
  int branch = 1;
  int multiplicity = 1;
  bool physical = true;  // 0 <= nbar <= 1
  std::optional<StabilityReport> stability;
};

enum class Region { I, II, III };

const char* to_string(Region region) noexcept;

struct FixedPointSet {
  Region region = Region::I;
  CubicCoeffs coeffs;
  std::vector<FixedPoint> points;  // ordered by branch index

  /// Fixed point on the given branch, or nullptr.
  const FixedPoint* branch(int index) const noexcept;
};

CubicCoeffs cubic_coefficients(const ModelParams& params, double p);

/// Sign of the discriminant alone; cheaper than solving.
inline bool has_three_real_roots(const CubicCoeffs& coeffs) noexcept {
  return !coeffs.degenerate && coeffs.discriminant < 0.0;
}

/// Real roots of the steady-state cubic via Cardano's formulas (or the
/// quadratic/linear reduction when a = 0), each paired with its coherence.
/// The result carries no stability information; see classify_fixed_points.
FixedPointSet solve_fixed_points(const ModelParams& params, double p);

/// Raw Cardano evaluation in complex arithmetic: returns the three candidate
/// roots (branch order) before the real-root filter.
std::array<cplx, 3> cardano_roots(const CubicCoeffs& coeffs);

/// Steady <A> for a given <Q>; throws DegenerateDenominator when singular.
cplx steady_coherence(const ModelParams& params, double p, double nbar);

inline constexpr double kRealRootTolerance = 1e-9;
inline constexpr double kRootMergeTolerance = 1e-9;

}  // namespace aging
