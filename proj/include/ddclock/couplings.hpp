#pragma once

// Free-space dipole-dipole couplings between two identical two-level atoms.
//
// Units: distances in transition wavelengths, rates in single-atom decay
// rates. The scaled separation is xi = 2*pi*r.

#include <numbers>

#include "ddclock/vec3.hpp"

namespace ddclock {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Common dipole orientation of all atoms. Always a unit vector.
class DipoleOrientation {
 public:
  /// Normalizes `v`; throws DomainError for a zero or non-finite vector.
  explicit DipoleOrientation(const Vec3& v);

  const Vec3& vector() const { return e_; }

  bool operator==(const DipoleOrientation&) const = default;

 private:
  Vec3 e_;
};

/// Coherent exchange rate `omega` and collective decay rate `gamma` of a pair.
struct PairCoupling {
  double omega = 0.0;
  double gamma = 0.0;
};

/// Dissipative kernel: alpha*sin(xi)/xi + beta*(cos(xi)/xi^2 - sin(xi)/xi^3),
/// alpha = 1 - cos^2(theta), beta = 1 - 3 cos^2(theta). Requires xi > 0.
double f_function(double xi, double theta);

/// Dispersive kernel: -alpha*cos(xi)/xi + beta*(sin(xi)/xi^2 + cos(xi)/xi^3).
double g_function(double xi, double theta);

// The same kernels parameterized by cos^2(theta); these are what the
// summation kernels call. No domain checks.
double f_kernel(double xi, double cos2);
double g_kernel(double xi, double cos2);

/// Kernels evaluated from precomputed sin(xi), cos(xi). Falls back to the
/// series form of F below the cancellation threshold.
PairCoupling coupling_from_trig(double xi, double sin_xi, double cos_xi, double cos2);

/// (3/4) G and (3/2) F at separation `r` (wavelengths) and angle cos^2.
PairCoupling coupling_at(double r, double cos2);

/// Pair coupling between atoms at `ri` and `rj`. Symmetric in (ri, rj).
/// Throws DomainError for coincident positions.
PairCoupling pair_coupling(const Vec3& ri, const Vec3& rj, const DipoleOrientation& e);

}  // namespace ddclock
