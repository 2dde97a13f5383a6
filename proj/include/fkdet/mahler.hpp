#pragma once

#include <cstdint>
#include <complex>
#include <vector>

#include "fkdet/ring.hpp"

namespace fkdet {

/// log M(f) of a one-variable Laurent polynomial with exact coefficients,
/// log|lead| + sum log max(1, |root|).
double mahler_jensen(const RingElement& f);

/// Roots with multiplicity of a one-variable polynomial (lowest degree first),
/// after removing the factor x^k.
std::vector<std::complex<double>> polynomial_roots(const std::vector<Rational>& coeffs);

struct QuadratureOptions {
  int start_n = 16;         // points per axis at the first level (d <= 2)
  int max_n = 4096;         // refinement cap per axis (d <= 2)
  double target = 1e-10;    // stop once successive levels differ below this
  std::uint64_t seed = 0;   // randomized quasi Monte Carlo for d >= 3
  int replicas = 16;
  std::size_t max_points = std::size_t{1} << 20;  // per replica, d >= 3
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;        // difference of the last two levels, or CLT bar
  int levels = 0;
  int points_per_axis = 0;   // d <= 2
  std::size_t samples = 0;   // total symbol evaluations at the last level
  bool converged = false;
};

/// Integral of log|f| over the torus for f over an untwisted Z^d.
QuadratureResult mahler_quadrature(const RingElement& f, const QuadratureOptions& opts = {});

}  // namespace fkdet
