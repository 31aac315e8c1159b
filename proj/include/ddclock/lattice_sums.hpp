#pragma once

// Effective couplings felt by one atom: sums of pair couplings over all
// partners, weighted by the excitation-phase differences.
//
// Two routes are provided. Explicit mode sums over a position list. Shell
// mode walks a centered lattice shell by shell, visiting one representative
// per orbit of the lattice point group (restricted to operations that keep
// the polarization axis and the phase wave unchanged) and weighting it by the
// orbit size. Both accumulate with compensated summation in a fixed order.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ddclock/couplings.hpp"
#include "ddclock/geometry.hpp"

namespace ddclock {

/// Sums around one reference atom k (rates in units of gamma):
///   omega_eff = sum_j Omega_kj, gamma_eff = sum_j Gamma_kj,
///   omega_cos/sin = sum_j Omega_kj cos/sin(phi_k - phi_j), same for gamma,
///   omega_eff_rot = omega_cos - gamma_sin / 2,
///   gamma_eff_rot = gamma_cos + 2 omega_sin.
struct EffectiveCouplings {
  double omega_eff = 0.0;
  double gamma_eff = 0.0;
  double omega_cos = 0.0;
  double omega_sin = 0.0;
  double gamma_cos = 0.0;
  double gamma_sin = 0.0;
  double omega_eff_rot = 0.0;
  double gamma_eff_rot = 0.0;
  std::int64_t n_terms = 0;
  /// Shell mode: magnitude of the outermost shell's contribution. This is a
  /// heuristic for a conditionally convergent series. Zero in explicit mode.
  double est_error = 0.0;
};

enum class SumMode { explicit_sum, shell };

struct SumPlan {
  SumMode mode = SumMode::shell;
  /// When set, shell mode doubles the shell radius (starting at 32, capped
  /// by the geometry counts) until successive totals agree to this relative
  /// tolerance.
  std::optional<double> rel_tol;
};

/// Effective couplings of every atom. O(N^2), parallel over atoms.
/// Throws DomainError for fewer than two atoms or coincident positions.
std::vector<EffectiveCouplings> effective_explicit(std::span<const Vec3> positions,
                                                   const DipoleOrientation& polarization,
                                                   std::span<const double> phases);

/// Effective couplings of atom `k` only. O(N).
EffectiveCouplings effective_for_site(std::span<const Vec3> positions, const DipoleOrientation& polarization,
                                      std::span<const double> phases, std::size_t k);

/// Effective couplings of the central site of a chain, square, hexagonal or
/// cubic lattice, summed shell by shell. In shell mode the lattice is the
/// symmetric window of radius counts[a] / 2 around the reference site, so an
/// even count n gives n partners along that axis. Sine components vanish
/// identically because the window is inversion symmetric.
EffectiveCouplings effective_shell(const Geometry& geom, const PhaseProfile& phases, const SumPlan& plan = {});

/// True when d lies within 1e-6 of an integer, where the 1/xi tails add
/// coherently and the chain and planar sums diverge.
bool near_integer_spacing(double d);

struct SweepRow {
  double d = 0.0;
  double delta_phi = 0.0;
  EffectiveCouplings values;
  bool diverged = false;
};

/// One row per spacing of `d_grid` (strictly ascending, positive). Exact
/// integers are moved up by 1e-6. Polygons use vertex 0 as the reference
/// atom; lattices follow `plan`.
std::vector<SweepRow> sweep_distance(const Geometry& templ, std::span<const double> d_grid,
                                     const PhaseProfile& phases, const SumPlan& plan = {});

struct PhaseMap {
  std::vector<double> d_grid;
  std::vector<double> delta_phi_grid;
  /// Row-major over (delta_phi, d): rows[i_phi * d_grid.size() + i_d].
  std::vector<SweepRow> rows;
  /// Points (d, delta_phi) where omega_eff_rot changes sign along d, by linear
  /// interpolation. Sign changes across a lattice resonance are skipped.
  std::vector<std::pair<double, double>> zero_contour;
};

PhaseMap sweep_phase_map(const Geometry& chain_templ, std::span<const double> d_grid,
                         std::span<const double> delta_phi_grid, const SumPlan& plan = {});

/// Innermost site of an L x L x L cubic lattice (L odd) versus spacing.
std::vector<SweepRow> cubic_innermost(std::int64_t side, std::span<const double> d_grid,
                                      const DipoleOrientation& polarization, const SumPlan& plan = {});

/// Number of symmetry operations used by shell mode for this configuration.
std::size_t shell_symmetry_order(const Geometry& geom, const PhaseProfile& phases);

}  // namespace ddclock
