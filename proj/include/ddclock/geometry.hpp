#pragma once

// Atom configurations and excitation-phase profiles.
//
// Lattices are centered on the origin site; for a count n along an axis the
// integer site indices run over [-(n-1)/2, n - 1 - (n-1)/2] (C++ division),
// so odd counts are symmetric about the origin.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddclock/couplings.hpp"
#include "ddclock/vec3.hpp"

namespace ddclock {

enum class LatticeKind { polygon, chain, square, hexagonal, cubic };

std::string_view to_string(LatticeKind kind);
/// Throws ConfigError for an unknown name.
LatticeKind lattice_kind_from_string(std::string_view name);

/// Sites allowed in explicit-position mode.
inline constexpr std::int64_t kMaxExplicitSites = 10'000'000;

/// Atom arrangement.
///
/// counts: polygon {N}; chain {N}; square {nx, ny}; cubic {nx, ny, nz};
/// hexagonal {nx, ny} for a parallelogram patch spanned by the two primitive
/// vectors, or {rings} for a hexagon-shaped patch of 1 + 3 R (R + 1) sites.
/// `spacing` is the polygon side or the nearest-neighbour distance.
struct Geometry {
  LatticeKind kind = LatticeKind::chain;
  double spacing = 1.0;
  std::vector<std::int64_t> counts{1};
  DipoleOrientation polarization{Vec3{0.0, 0.0, 1.0}};

  static Geometry polygon(std::int64_t n, double d);
  static Geometry chain(std::int64_t n, double d);
  static Geometry square(std::int64_t nx, std::int64_t ny, double d);
  static Geometry hexagonal(std::int64_t nx, std::int64_t ny, double d);
  static Geometry hexagon_patch(std::int64_t rings, double d);
  static Geometry cubic(std::int64_t nx, std::int64_t ny, std::int64_t nz, double d);

  /// Same arrangement at a different spacing.
  Geometry with_spacing(double d) const;

  bool is_hexagon_patch() const { return kind == LatticeKind::hexagonal && counts.size() == 1; }

  /// Throws ConfigError on invalid spacing or counts.
  void validate() const;

  std::int64_t site_count() const;
};

/// Polarization perpendicular to the chain axis or the lattice plane; along z
/// for the cubic lattice. Every kind therefore defaults to +z.
DipoleOrientation default_polarization(LatticeKind kind);

/// Primitive lattice vectors (columns) for lattice kinds, in units of spacing.
/// Unused axes are still filled in so the matrix is invertible.
std::array<Vec3, 3> lattice_basis(LatticeKind kind);

/// Per-axis half extents {lo, hi} of integer indices for box-shaped domains.
struct IndexRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};
std::array<IndexRange, 3> index_ranges(const Geometry& geom);

/// Explicit site positions (wavelength units). Throws CapacityError beyond
/// kMaxExplicitSites.
std::vector<Vec3> positions(const Geometry& geom);

/// Index in positions() of the origin (innermost) site. Polygons return 0.
std::size_t center_site(const Geometry& geom);

/// Excitation phase profile: phi = delta_phi * (direction . r) / spacing for
/// lattices (a plane wave advancing delta_phi per lattice step along
/// `direction`); phi_k = delta_phi * k for polygon vertex k.
struct PhaseProfile {
  double delta_phi = 0.0;
  Vec3 direction{1.0, 0.0, 0.0};
};

/// Wraps an angle into (-pi, pi].
double wrap_phase(double phi);

/// delta_phi * (j - 1), wrapped. `j` counts sites from 1.
double phase_at(const PhaseProfile& profile, std::int64_t j);

/// Phases for every site of positions(geom), wrapped to (-pi, pi].
std::vector<double> site_phases(const Geometry& geom, const PhaseProfile& profile);

}  // namespace ddclock
