#include "ddclock/couplings.hpp"

#include <cmath>
#include <string>

#include "ddclock/errors.hpp"

namespace ddclock {

namespace {

// Below this scaled distance the bracket cos/xi^2 - sin/xi^3 is taken from its
// Taylor series; direct evaluation loses about -2*log10(xi) digits.
constexpr double kSeriesThreshold = 0.1;

// sin(x)/x
double sinc_series(double x) {
  const double x2 = x * x;
  return 1.0 + x2 * (-1.0 / 6.0 +
                     x2 * (1.0 / 120.0 +
                           x2 * (-1.0 / 5040.0 + x2 * (1.0 / 362880.0 + x2 * (-1.0 / 39916800.0)))));
}

// cos(x)/x^2 - sin(x)/x^3 = sum_{n>=1} (-1)^n 2n/(2n+1)! x^(2n-2)
double bracket_series(double x) {
  const double x2 = x * x;
  return -1.0 / 3.0 +
         x2 * (1.0 / 30.0 +
               x2 * (-1.0 / 840.0 +
                     x2 * (1.0 / 45360.0 + x2 * (-1.0 / 3991680.0 + x2 * (1.0 / 518918400.0)))));
}

void require_positive(double xi, const char* what) {
  if (!(xi > 0.0) || !std::isfinite(xi)) {
    throw DomainError(std::string(what) + ": scaled distance must be finite and > 0, got " +
                      std::to_string(xi));
  }
}

}  // namespace

DipoleOrientation::DipoleOrientation(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DomainError("dipole orientation must be a finite non-zero vector");
  }
  e_ = v * (1.0 / n);
}

double f_kernel(double xi, double cos2) {
  const double alpha = 1.0 - cos2;
  const double beta = 1.0 - 3.0 * cos2;
  if (xi < kSeriesThreshold) {
    return alpha * sinc_series(xi) + beta * bracket_series(xi);
  }
  const double s = std::sin(xi);
  const double c = std::cos(xi);
  const double inv = 1.0 / xi;
  return alpha * s * inv + beta * (c - s * inv) * inv * inv;
}

double g_kernel(double xi, double cos2) {
  const double alpha = 1.0 - cos2;
  const double beta = 1.0 - 3.0 * cos2;
  const double s = std::sin(xi);
  const double c = std::cos(xi);
  const double inv = 1.0 / xi;
  return -alpha * c * inv + beta * (s + c * inv) * inv * inv;
}

PairCoupling coupling_from_trig(double xi, double sin_xi, double cos_xi, double cos2) {
  const double alpha = 1.0 - cos2;
  const double beta = 1.0 - 3.0 * cos2;
  const double inv = 1.0 / xi;
  const double g = -alpha * cos_xi * inv + beta * (sin_xi + cos_xi * inv) * inv * inv;
  double f;
  if (xi < kSeriesThreshold) {
    f = alpha * sinc_series(xi) + beta * bracket_series(xi);
  } else {
    f = alpha * sin_xi * inv + beta * (cos_xi - sin_xi * inv) * inv * inv;
  }
  return {0.75 * g, 1.5 * f};
}

double f_function(double xi, double theta) {
  require_positive(xi, "f_function");
  const double c = std::cos(theta);
  return f_kernel(xi, c * c);
}

double g_function(double xi, double theta) {
  require_positive(xi, "g_function");
  const double c = std::cos(theta);
  return g_kernel(xi, c * c);
}

PairCoupling coupling_at(double r, double cos2) {
  const double xi = kTwoPi * r;
  return {0.75 * g_kernel(xi, cos2), 1.5 * f_kernel(xi, cos2)};
}

PairCoupling pair_coupling(const Vec3& ri, const Vec3& rj, const DipoleOrientation& e) {
  const Vec3 sep = ri - rj;
  const double r = norm(sep);
  if (!(r > 0.0)) {
    throw DomainError("pair_coupling: coincident positions");
  }
  const double c = dot(e.vector(), sep) / r;
  return coupling_at(r, c * c);
}

}  // namespace ddclock
