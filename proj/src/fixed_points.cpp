#include "aging/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "aging/errors.hpp"

namespace aging {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Newton polish on the cubic; only accepted while the residual shrinks.
double polish_root(const CubicCoeffs& k, double x) {
  double fx = std::abs(k.evaluate(x));
  for (int it = 0; it < 4 && fx > 0.0; ++it) {
    const double slope = k.derivative(x);
    if (slope == 0.0) break;
    const double next = x - k.evaluate(x) / slope;
    const double fnext = std::abs(k.evaluate(next));
    if (!(fnext < fx)) break;
    x = next;
    fx = fnext;
  }
  return x;
}

std::vector<double> reduced_roots(const CubicCoeffs& k) {
  std::vector<double> roots;
  if (k.b != 0.0) {
    const double disc = k.c * k.c - 4.0 * k.b * k.d;
    if (disc < 0.0) return roots;
    const double s = std::sqrt(disc);
    // Numerically stable quadratic formula.
    const double q = -0.5 * (k.c + std::copysign(s, k.c));
    if (q != 0.0) {
      roots.push_back(q / k.b);
      roots.push_back(k.d / q);
    } else {
      roots.push_back(0.0);
      roots.push_back(0.0);
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
  }
  if (k.c != 0.0) {
    roots.push_back(-k.d / k.c);
    return roots;
  }
  throw Error(ErrorKind::NoFixedPoint,
              "steady-state polynomial is identically constant; no fixed point");
}

Region classify_region(const ModelParams& params, double p, const CubicCoeffs& k) {
  if (has_three_real_roots(k)) return Region::II;
  // One root: region III when the bistable window lies below p.
  constexpr int kScan = 1000;
  for (int i = 0; i < kScan; ++i) {
    const double q = p * i / kScan;
    if (has_three_real_roots(cubic_coefficients(params, q))) return Region::III;
  }
  return Region::I;
}

}  // namespace

double CubicCoeffs::scale() const noexcept {
  return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

const char* to_string(Region region) noexcept {
  switch (region) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
  }
  return "?";
}

const FixedPoint* FixedPointSet::branch(int index) const noexcept {
  for (const auto& fp : points)
    if (fp.branch == index) return &fp;
  return nullptr;
}

CubicCoeffs cubic_coefficients(const ModelParams& params, double p) {
  const double kappa = params.kappa;
  const double big_n = params.n_qubits;
  const double g = params.coherent_coupling;
  const double v = params.dissipative_coupling;
  const double omega2 = params.drive * params.drive;
  const double decay = params.population_decay();
  const double shifted = params.shifted_detuning();
  const double active = 1.0 - p;

  // (Delta' + 8gN x)^2 + (kappa + 4V x)^2 expanded in x.
  const double quad = 64.0 * g * g * big_n * big_n + 16.0 * v * v;
  const double lin = 16.0 * g * big_n * shifted + 8.0 * kappa * v;
  const double cst = shifted * shifted + kappa * kappa;

  CubicCoeffs k;
  k.a = decay * quad;
  k.b = decay * lin - 2.0 * kappa * quad * active;
  k.c = decay * cst - 2.0 * kappa * lin * active + omega2 * (kappa + 2.0 * v);
  k.d = -0.5 * omega2 * (kappa + 2.0 * v) - 2.0 * kappa * cst * active;

  if (k.a == 0.0) {
    k.degenerate = true;
    k.m = k.n = k.discriminant = kNaN;
    return k;
  }
  const double ba = k.b / k.a;
  k.m = k.d / k.a - k.b * k.c / (3.0 * k.a * k.a) + (2.0 / 27.0) * ba * ba * ba;
  k.n = k.c / k.a - ba * ba / 3.0;
  const double half_m = 0.5 * k.m;
  const double third_n = k.n / 3.0;
  k.discriminant = half_m * half_m + third_n * third_n * third_n;
  return k;
}

std::array<cplx, 3> cardano_roots(const CubicCoeffs& k) {
  const cplx omega(-0.5, 0.5 * std::sqrt(3.0));
  const cplx omega2 = std::conj(omega);
  const double shift = k.b / (3.0 * k.a);
  cplx alpha, beta;
  if (k.discriminant >= 0.0) {
    const double s = std::sqrt(k.discriminant);
    alpha = std::cbrt(-0.5 * k.m + s);
    beta = std::cbrt(-0.5 * k.m - s);
  } else {
    const cplx s(0.0, std::sqrt(-k.discriminant));
    alpha = std::pow(cplx(-0.5 * k.m) + s, 1.0 / 3.0);
    beta = std::pow(cplx(-0.5 * k.m) - s, 1.0 / 3.0);
  }
  return {alpha + beta - shift, omega * alpha + omega2 * beta - shift,
          omega2 * alpha + omega * beta - shift};
}

FixedPointSet solve_fixed_points(const ModelParams& params, double p) {
  FixedPointSet set;
  set.coeffs = cubic_coefficients(params, p);
  const CubicCoeffs& k = set.coeffs;

  std::vector<std::pair<double, int>> candidates;  // (nbar, branch)
  if (k.degenerate) {
    const auto roots = reduced_roots(k);
    for (std::size_t i = 0; i < roots.size(); ++i)
      candidates.emplace_back(roots[i], static_cast<int>(i) + 1);
  } else {
    const auto roots = cardano_roots(k);
    for (int i = 0; i < 3; ++i) {
      if (std::abs(roots[i].imag()) < kRealRootTolerance)
        candidates.emplace_back(polish_root(k, roots[i].real()), i + 1);
    }
  }

  for (const auto& [nbar, branch] : candidates) {
    auto dup = std::find_if(set.points.begin(), set.points.end(), [&](const FixedPoint& fp) {
      return std::abs(fp.nbar - nbar) < kRootMergeTolerance;
    });
    if (dup != set.points.end()) {
      ++dup->multiplicity;
      continue;
    }
    FixedPoint fp;
    fp.nbar = nbar;
    fp.branch = branch;
    fp.physical = nbar >= 0.0 && nbar <= 1.0;
    try {
      fp.coherence = steady_coherence(params, p, nbar);
    } catch (const Error&) {
      // Only reachable for unphysical roots (nbar = -kappa/4V).
      fp.coherence = cplx(kNaN, kNaN);
    }
    set.points.push_back(fp);
  }
  set.region = k.degenerate ? Region::I : classify_region(params, p, k);
  return set;
}

cplx steady_coherence(const ModelParams& params, double /*p*/, double nbar) {
  const cplx i(0.0, 1.0);
  const double big_n = params.n_qubits;
  const double g = params.coherent_coupling;
  const double v = params.dissipative_coupling;
  const cplx numerator = i * params.drive * (2.0 * nbar - 1.0);
  const cplx denominator = 2.0 * i * params.detuning - 8.0 * i * g * (big_n - 1.0) -
                           2.0 * params.kappa + (16.0 * i * g * big_n - 8.0 * v) * nbar;
  if (std::abs(denominator) <= 1e-12) {
    throw Error(ErrorKind::DegenerateDenominator,
                fmt::format("steady coherence is singular at nbar={} ({})", nbar, describe(params)));
  }
  return numerator / denominator;
}

}  // namespace aging
