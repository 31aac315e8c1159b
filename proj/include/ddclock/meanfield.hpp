#pragma once

// First-order (product state) mean-field dynamics of the Pauli expectations.
//
// Conventions: sigma^+ = |e><g|, sx = <sigma^+ + sigma^->, sy = <-i sigma^+ + i sigma^->,
// sz = <|e><e| - |g><g|>. Rates in units of gamma, time in 1/gamma.

#include <cmath>
#include <span>
#include <vector>

#include "ddclock/couplings.hpp"
#include "ddclock/integrator.hpp"
#include "ddclock/vec3.hpp"

namespace ddclock {

struct Bloch {
  double x = 0.0;
  double y = 0.0;
  double z = -1.0;

  bool operator==(const Bloch&) const = default;
};

/// One Bloch vector per atom.
using BlochState = std::vector<Bloch>;

inline double transverse(const Bloch& s) { return std::hypot(s.x, s.y); }

/// Throws DomainError when |s| > 1 + tol or a component is not finite.
void check_bloch(const Bloch& s, double tol = 1e-9);

/// Identical-atom equations
///   sx' =  W sy sz - (1 - G sz) sx / 2
///   sy' = -W sx sz - (1 - G sz) sy / 2
///   sz' = -(1 + sz) - G (sx^2 + sy^2) / 2
/// with W = omega_eff, G = gamma_eff. Feed the rotated couplings to get the
/// phase-gradient version. Returns one state per entry of `times`.
std::vector<Bloch> evolve_symmetric(double omega_eff, double gamma_eff, const Bloch& init,
                                    std::span<const double> times, const IntegratorSpec& spec = {});

/// Per-atom equations for arbitrary positions (N <= 10^4):
///   x_k' =  By z_k - x_k/2 + Gx z_k/2
///   y_k' = -Bx z_k - y_k/2 + Gy z_k/2
///   z_k' =  Bx y_k - By x_k - (1 + z_k) - (Gx x_k + Gy y_k)/2
/// where Bx = sum_j Omega_kj x_j, Gx = sum_j Gamma_kj x_j (j != k), etc.
/// Excitation phases enter through `init` (see ramsey_init).
/// Returns trajectories indexed [time][atom].
std::vector<BlochState> evolve_general(std::span<const Vec3> positions, const DipoleOrientation& polarization,
                                       const BlochState& init, std::span<const double> times,
                                       const IntegratorSpec& spec = {});

/// Bloch vectors of (|g> + e^{i phi_k}|e>)/sqrt(2): (cos phi_k, -sin phi_k, 0).
BlochState ramsey_init(std::span<const double> phases);

/// Largest atom count accepted by evolve_general.
inline constexpr std::size_t kMaxMeanFieldAtoms = 10000;

}  // namespace ddclock
