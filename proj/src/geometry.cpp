#include "ddclock/geometry.hpp"

#include <cmath>
#include <numbers>

#include "ddclock/errors.hpp"

namespace ddclock {

namespace {

constexpr double kSqrt3Half = 0.8660254037844386;

IndexRange centered_range(std::int64_t n) {
  const std::int64_t lo = -((n - 1) / 2);
  return {lo, lo + n - 1};
}

}  // namespace

std::string_view to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::polygon: return "polygon";
    case LatticeKind::chain: return "chain";
    case LatticeKind::square: return "square";
    case LatticeKind::hexagonal: return "hexagonal";
    case LatticeKind::cubic: return "cubic";
  }
  return "unknown";
}

LatticeKind lattice_kind_from_string(std::string_view name) {
  for (auto k : {LatticeKind::polygon, LatticeKind::chain, LatticeKind::square,
                 LatticeKind::hexagonal, LatticeKind::cubic}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown geometry kind '" + std::string(name) + "'");
}

DipoleOrientation default_polarization(LatticeKind) { return DipoleOrientation(Vec3{0.0, 0.0, 1.0}); }

Geometry Geometry::polygon(std::int64_t n, double d) {
  return {LatticeKind::polygon, d, {n}, default_polarization(LatticeKind::polygon)};
}
Geometry Geometry::chain(std::int64_t n, double d) {
  return {LatticeKind::chain, d, {n}, default_polarization(LatticeKind::chain)};
}
Geometry Geometry::square(std::int64_t nx, std::int64_t ny, double d) {
  return {LatticeKind::square, d, {nx, ny}, default_polarization(LatticeKind::square)};
}
Geometry Geometry::hexagonal(std::int64_t nx, std::int64_t ny, double d) {
  return {LatticeKind::hexagonal, d, {nx, ny}, default_polarization(LatticeKind::hexagonal)};
}
Geometry Geometry::hexagon_patch(std::int64_t rings, double d) {
  return {LatticeKind::hexagonal, d, {rings}, default_polarization(LatticeKind::hexagonal)};
}
Geometry Geometry::cubic(std::int64_t nx, std::int64_t ny, std::int64_t nz, double d) {
  return {LatticeKind::cubic, d, {nx, ny, nz}, default_polarization(LatticeKind::cubic)};
}

Geometry Geometry::with_spacing(double d) const {
  Geometry g = *this;
  g.spacing = d;
  return g;
}

void Geometry::validate() const {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw ConfigError("spacing must be finite and > 0");
  }
  std::size_t expected = 0;
  switch (kind) {
    case LatticeKind::polygon:
    case LatticeKind::chain: expected = 1; break;
    case LatticeKind::square: expected = 2; break;
    case LatticeKind::cubic: expected = 3; break;
    case LatticeKind::hexagonal:
      if (counts.size() != 1 && counts.size() != 2) {
        throw ConfigError("hexagonal geometry takes {rings} or {nx, ny}");
      }
      expected = counts.size();
      break;
  }
  if (counts.size() != expected) {
    throw ConfigError(std::string(to_string(kind)) + " geometry takes " + std::to_string(expected) +
                      " count(s), got " + std::to_string(counts.size()));
  }
  if (is_hexagon_patch()) {
    if (counts[0] < 0) throw ConfigError("hexagon patch rings must be >= 0");
    return;
  }
  for (auto c : counts) {
    if (c < 1) throw ConfigError("counts must be >= 1");
  }
  if (kind == LatticeKind::polygon && counts[0] < 2) {
    throw ConfigError("polygon needs at least 2 vertices");
  }
}

std::int64_t Geometry::site_count() const {
  if (is_hexagon_patch()) {
    const std::int64_t r = counts[0];
    return 1 + 3 * r * (r + 1);
  }
  std::int64_t n = 1;
  for (auto c : counts) n *= c;
  return n;
}

std::array<Vec3, 3> lattice_basis(LatticeKind kind) {
  if (kind == LatticeKind::hexagonal) {
    return {Vec3{1.0, 0.0, 0.0}, Vec3{0.5, kSqrt3Half, 0.0}, Vec3{0.0, 0.0, 1.0}};
  }
  return {Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}, Vec3{0.0, 0.0, 1.0}};
}

std::array<IndexRange, 3> index_ranges(const Geometry& geom) {
  std::array<IndexRange, 3> r{};
  if (geom.is_hexagon_patch()) {
    r[0] = r[1] = {-geom.counts[0], geom.counts[0]};
    return r;
  }
  if (geom.kind == LatticeKind::polygon) return r;
  for (std::size_t a = 0; a < geom.counts.size(); ++a) r[a] = centered_range(geom.counts[a]);
  return r;
}

std::vector<Vec3> positions(const Geometry& geom) {
  geom.validate();
  const std::int64_t n = geom.site_count();
  if (n > kMaxExplicitSites) {
    throw CapacityError("explicit geometry with " + std::to_string(n) + " sites exceeds the cap of " +
                        std::to_string(kMaxExplicitSites) + "; use shell summation");
  }
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(n));
  const double d = geom.spacing;

  if (geom.kind == LatticeKind::polygon) {
    const auto count = geom.counts[0];
    const double radius = d / (2.0 * std::sin(std::numbers::pi / static_cast<double>(count)));
    for (std::int64_t k = 0; k < count; ++k) {
      const double angle = kTwoPi * static_cast<double>(k) / static_cast<double>(count);
      out.push_back({radius * std::cos(angle), radius * std::sin(angle), 0.0});
    }
    return out;
  }

  const auto basis = lattice_basis(geom.kind);
  auto site = [&](std::int64_t i, std::int64_t j, std::int64_t k) {
    return (basis[0] * static_cast<double>(i) + basis[1] * static_cast<double>(j) +
            basis[2] * static_cast<double>(k)) *
           d;
  };

  if (geom.is_hexagon_patch()) {
    const std::int64_t rings = geom.counts[0];
    for (std::int64_t j = -rings; j <= rings; ++j) {
      const std::int64_t lo = std::max(-rings, -rings - j);
      const std::int64_t hi = std::min(rings, rings - j);
      for (std::int64_t i = lo; i <= hi; ++i) out.push_back(site(i, j, 0));
    }
    return out;
  }

  const auto r = index_ranges(geom);
  for (std::int64_t k = r[2].lo; k <= r[2].hi; ++k) {
    for (std::int64_t j = r[1].lo; j <= r[1].hi; ++j) {
      for (std::int64_t i = r[0].lo; i <= r[0].hi; ++i) out.push_back(site(i, j, k));
    }
  }
  return out;
}

std::size_t center_site(const Geometry& geom) {
  geom.validate();
  if (geom.kind == LatticeKind::polygon) return 0;
  if (geom.is_hexagon_patch()) {
    // rows j = -R..-1 hold (2R+1-|j|) sites each; the origin is the middle of row 0
    const std::int64_t rings = geom.counts[0];
    std::int64_t before = 0;
    for (std::int64_t j = -rings; j < 0; ++j) before += 2 * rings + 1 + j;
    return static_cast<std::size_t>(before + rings);
  }
  const auto r = index_ranges(geom);
  const std::int64_t nx = r[0].hi - r[0].lo + 1;
  const std::int64_t ny = r[1].hi - r[1].lo + 1;
  return static_cast<std::size_t>((-r[2].lo) * nx * ny + (-r[1].lo) * nx + (-r[0].lo));
}

double wrap_phase(double phi) {
  double w = std::remainder(phi, kTwoPi);
  if (w <= -std::numbers::pi) w += kTwoPi;
  return w;
}

double phase_at(const PhaseProfile& profile, std::int64_t j) {
  return wrap_phase(profile.delta_phi * static_cast<double>(j - 1));
}

std::vector<double> site_phases(const Geometry& geom, const PhaseProfile& profile) {
  if (geom.kind == LatticeKind::polygon) {
    std::vector<double> out(static_cast<std::size_t>(geom.counts[0]));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = phase_at(profile, static_cast<std::int64_t>(k) + 1);
    return out;
  }
  const double len = norm(profile.direction);
  if (!(len > 0.0) || !std::isfinite(len)) throw DomainError("phase direction must be a finite non-zero vector");
  const Vec3 dir = profile.direction * (1.0 / len);
  const auto pos = positions(geom);
  std::vector<double> out;
  out.reserve(pos.size());
  for (const auto& p : pos) {
    out.push_back(wrap_phase(profile.delta_phi * dot(dir, p) / geom.spacing));
  }
  return out;
}

}  // namespace ddclock
