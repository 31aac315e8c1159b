#pragma once

// Idealized Ramsey sequence on the identical-atom mean-field model:
// instantaneous pi/2 pulse about y, free evolution at detuning delta for a
// delay T, second pi/2 pulse, readout of sz.
//
// The pulse maps (x, y, z) -> (-z, y, x), so the ground state goes to
// (1, 0, 0) and the readout equals sx(T). During the free evolution the
// transverse length A and sz do not depend on delta or omega_eff, and the
// azimuth obeys phi' = delta - omega_eff * sz. Hence
//   S(delta, T) = A(T) cos(delta T - omega_eff Z(T)),  Z(T) = int_0^T sz dt,
// and one integration of (A, sz, Z) per coupling pair covers the whole
// detuning grid.

#include <cstddef>
#include <span>
#include <vector>

#include "ddclock/integrator.hpp"

namespace ddclock {

struct RamseyConfig {
  double omega_eff = 0.0;
  double gamma_eff = 0.0;
  std::vector<double> detunings;  // strictly ascending
  std::vector<double> delays;     // strictly ascending, >= 0
  IntegratorSpec integrator;
};

/// Detuning-independent part of the free evolution at each delay.
struct RamseyEnvelope {
  std::vector<double> delays;
  std::vector<double> amplitude;     // A(T)
  std::vector<double> population;    // sz(T)
  std::vector<double> integrated_z;  // Z(T)
};

RamseyEnvelope ramsey_envelope(double omega_eff, double gamma_eff, std::span<const double> delays,
                               const IntegratorSpec& spec = {});

struct RamseyResult {
  double omega_eff = 0.0;
  double gamma_eff = 0.0;
  std::vector<double> detunings;
  std::vector<double> delays;
  /// Row-major over (delay, detuning).
  std::vector<double> signal;
  /// Azimuth of the Bloch vector before the second pulse (not wrapped).
  std::vector<double> phase;
  RamseyEnvelope envelope;

  std::span<const double> signal_row(std::size_t i_delay) const;
  std::span<const double> phase_row(std::size_t i_delay) const;
};

/// Throws DomainError for empty or non-ascending grids.
RamseyResult ramsey_signal(const RamseyConfig& cfg);

/// Detuning of the central fringe maximum. The search starts at the grid
/// point whose phase is closest to zero (closest to delta = 0 when `phase` is
/// empty), climbs to the local maximum and refines it with a parabola
/// through three points. Positive result = maximum at positive detuning.
/// Throws DomainError when the maximum sits on the grid edge.
double fringe_shift(std::span<const double> detunings, std::span<const double> signal,
                    std::span<const double> phase = {});

/// |dS/d delta| at the first zero crossing above the central maximum. The
/// root is bisected on the cubic through the four surrounding grid points
/// and the slope is that cubic's derivative. Throws DomainError when the grid
/// has no crossing there.
double zero_crossing_slope(std::span<const double> detunings, std::span<const double> signal,
                           std::span<const double> phase = {});

struct FringeSummary {
  double omega_eff = 0.0;
  double gamma_eff = 0.0;
  double delay = 0.0;
  double shift = 0.0;
  double slope = 0.0;
};

/// Shift and slope for every delay of a result. Delays equal to 0 are skipped.
std::vector<FringeSummary> summarize(const RamseyResult& result);

/// Detuning grid that resolves fringes of period 2 pi / T with
/// `points_per_fringe` samples and spans the possible central-fringe range
/// |delta| <= |omega_eff| plus two periods on each side.
std::vector<double> fringe_grid(double omega_eff, double delay, std::size_t points_per_fringe = 256);

/// Shift and slope at each delay, each on its own fringe_grid.
std::vector<FringeSummary> fringe_scan(double omega_eff, double gamma_eff, std::span<const double> delays,
                                       const IntegratorSpec& spec = {}, std::size_t points_per_fringe = 256);

struct MaxSlope {
  double omega_eff = 0.0;
  double gamma_eff = 0.0;
  double best_delay = 0.0;
  double best_slope = 0.0;
};

/// Largest zero-crossing slope over `delays`.
MaxSlope max_slope(double omega_eff, double gamma_eff, std::span<const double> delays,
                   const IntegratorSpec& spec = {}, std::size_t points_per_fringe = 256);

}  // namespace ddclock
