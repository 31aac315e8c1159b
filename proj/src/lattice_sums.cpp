#include "ddclock/lattice_sums.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddclock/errors.hpp"
#include "ddclock/summation.hpp"
#include "shell_classes.hpp"

namespace ddclock {

namespace {

using detail::ShellClass;
using detail::ShellEnumerator;

// Block count depends only on the number of shells, never on the thread count.
constexpr std::int64_t kMaxBlocks = 1024;
// Chain kernel: exact sin/cos every this many shells, rotation in between.
constexpr std::int64_t kReseedInterval = 64;
// Largest class table cached across the rows of a sweep.
constexpr double kTableClassCap = 1.6e7;

struct Accumulator {
  CompensatedSum omega, gamma, omega_cos, omega_sin, gamma_cos, gamma_sin;
  std::int64_t terms = 0;

  void add(const PairCoupling& pc, double cos_phase, double sin_phase, double weight) {
    const double om = weight * pc.omega;
    const double ga = weight * pc.gamma;
    omega.add(om);
    gamma.add(ga);
    omega_cos.add(om * cos_phase);
    gamma_cos.add(ga * cos_phase);
    if (sin_phase != 0.0) {
      omega_sin.add(om * sin_phase);
      gamma_sin.add(ga * sin_phase);
    }
    terms += static_cast<std::int64_t>(weight);
  }

  void merge(const Accumulator& o) {
    omega.merge(o.omega);
    gamma.merge(o.gamma);
    omega_cos.merge(o.omega_cos);
    omega_sin.merge(o.omega_sin);
    gamma_cos.merge(o.gamma_cos);
    gamma_sin.merge(o.gamma_sin);
    terms += o.terms;
  }
};

struct BlockResult {
  Accumulator acc;
  CompensatedSum last_omega;
  CompensatedSum last_gamma;
};

EffectiveCouplings finalize(const Accumulator& a, double est_error) {
  EffectiveCouplings e;
  e.omega_eff = a.omega.value();
  e.gamma_eff = a.gamma.value();
  e.omega_cos = a.omega_cos.value();
  e.omega_sin = a.omega_sin.value();
  e.gamma_cos = a.gamma_cos.value();
  e.gamma_sin = a.gamma_sin.value();
  e.omega_eff_rot = e.omega_cos - 0.5 * e.gamma_sin;
  e.gamma_eff_rot = e.gamma_cos + 2.0 * e.omega_sin;
  e.n_terms = a.terms;
  e.est_error = est_error;
  return e;
}

struct ShellBlock {
  std::int64_t first = 1;
  std::int64_t last = 0;
};

std::vector<ShellBlock> shell_blocks(std::int64_t shells) {
  const std::int64_t nb = std::min(shells, kMaxBlocks);
  std::vector<ShellBlock> blocks;
  blocks.reserve(static_cast<std::size_t>(std::max<std::int64_t>(nb, 0)));
  for (std::int64_t b = 0; b < nb; ++b) {
    blocks.push_back({1 + b * shells / nb, (b + 1) * shells / nb});
  }
  return blocks;
}

EffectiveCouplings reduce_blocks(const std::vector<BlockResult>& parts) {
  if (parts.empty()) return finalize(Accumulator{}, 0.0);
  const BlockResult total = pairwise_reduce<BlockResult>(parts, [](BlockResult a, const BlockResult& b) {
    a.acc.merge(b.acc);
    return a;
  });
  const BlockResult& tail = parts.back();
  return finalize(total.acc, std::max(std::abs(tail.last_omega.value()), std::abs(tail.last_gamma.value())));
}

// Generic kernel over precomputed or on-the-fly classes.
template <class Source>
EffectiveCouplings sum_shells(std::int64_t shells, double d, Source&& source) {
  const auto blocks = shell_blocks(shells);
  std::vector<BlockResult> parts(blocks.size());
  const auto nblocks = static_cast<std::int64_t>(blocks.size());
#pragma omp parallel
  {
    std::vector<ShellClass> buffer;
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < nblocks; ++b) {
      BlockResult res;
      for (std::int64_t s = blocks[b].first; s <= blocks[b].last; ++s) {
        buffer.clear();
        const std::span<const ShellClass> classes = source(s, buffer);
        for (const auto& c : classes) {
          const double xi = kTwoPi * d * c.dist;
          const PairCoupling pc = coupling_from_trig(xi, std::sin(xi), std::cos(xi), c.cos2);
          res.acc.add(pc, c.cos_phase, 0.0, c.weight);
          if (s == shells) {
            res.last_omega.add(c.weight * pc.omega * c.cos_phase);
            res.last_gamma.add(c.weight * pc.gamma * c.cos_phase);
          }
        }
      }
      parts[static_cast<std::size_t>(b)] = res;
    }
  }
  return reduce_blocks(parts);
}

// Chain kernel: partners at +-s, xi_s = s * xi_1, sin/cos advanced by rotation.
EffectiveCouplings sum_line(std::int64_t shells, double d, double cos2, double phase_step) {
  const auto blocks = shell_blocks(shells);
  std::vector<BlockResult> parts(blocks.size());
  const auto nblocks = static_cast<std::int64_t>(blocks.size());
  const double xi1 = kTwoPi * d;
  const double s1 = std::sin(xi1);
  const double c1 = std::cos(xi1);
  const double sp1 = std::sin(phase_step);
  const double cp1 = std::cos(phase_step);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    BlockResult res;
    double sx = 0.0, cx = 1.0, sp = 0.0, cp = 1.0;
    for (std::int64_t s = blocks[b].first; s <= blocks[b].last; ++s) {
      const auto fs = static_cast<double>(s);
      if ((s - blocks[b].first) % kReseedInterval == 0) {
        sx = std::sin(xi1 * fs);
        cx = std::cos(xi1 * fs);
        sp = std::sin(phase_step * fs);
        cp = std::cos(phase_step * fs);
      }
      const PairCoupling pc = coupling_from_trig(xi1 * fs, sx, cx, cos2);
      res.acc.add(pc, cp, 0.0, 2.0);
      if (s == shells) {
        res.last_omega.add(2.0 * pc.omega * cp);
        res.last_gamma.add(2.0 * pc.gamma * cp);
      }
      const double sx_next = sx * c1 + cx * s1;
      cx = cx * c1 - sx * s1;
      sx = sx_next;
      const double sp_next = sp * cp1 + cp * sp1;
      cp = cp * cp1 - sp * sp1;
      sp = sp_next;
    }
    parts[static_cast<std::size_t>(b)] = res;
  }
  return reduce_blocks(parts);
}

EffectiveCouplings evaluate(const ShellEnumerator& en, double d, std::int64_t shells) {
  if (en.is_line()) return sum_line(shells, d, en.line_cos2(), en.line_phase_step());
  return sum_shells(shells, d, [&](std::int64_t s, std::vector<ShellClass>& buf) {
    en.append_shell(s, buf);
    return std::span<const ShellClass>(buf);
  });
}

// All classes of shells 1..n laid out contiguously, for reuse across spacings.
struct ShellTable {
  std::vector<ShellClass> classes;
  std::vector<std::size_t> offsets;  // shell s occupies [offsets[s-1], offsets[s])

  explicit ShellTable(const ShellEnumerator& en) {
    const std::int64_t shells = en.shell_count();
    const auto blocks = shell_blocks(shells);
    std::vector<std::vector<ShellClass>> parts(blocks.size());
    std::vector<std::vector<std::size_t>> sizes(blocks.size());
    const auto nblocks = static_cast<std::int64_t>(blocks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < nblocks; ++b) {
      auto& out = parts[static_cast<std::size_t>(b)];
      for (std::int64_t s = blocks[b].first; s <= blocks[b].last; ++s) {
        const std::size_t before = out.size();
        en.append_shell(s, out);
        sizes[static_cast<std::size_t>(b)].push_back(out.size() - before);
      }
    }
    offsets.push_back(0);
    for (std::size_t b = 0; b < parts.size(); ++b) {
      classes.insert(classes.end(), parts[b].begin(), parts[b].end());
      for (auto n : sizes[b]) offsets.push_back(offsets.back() + n);
    }
  }

  EffectiveCouplings evaluate(double d) const {
    const auto shells = static_cast<std::int64_t>(offsets.size()) - 1;
    return sum_shells(shells, d, [&](std::int64_t s, std::vector<ShellClass>&) {
      const auto i = static_cast<std::size_t>(s);
      return std::span<const ShellClass>(classes).subspan(offsets[i - 1], offsets[i] - offsets[i - 1]);
    });
  }
};

bool flags_divergence(LatticeKind kind, double d) {
  return kind != LatticeKind::cubic && near_integer_spacing(d);
}

void check_grid(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw DomainError(std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !(grid[i] > 0.0)) {
      throw DomainError(std::string(what) + " grid values must be finite and > 0");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw DomainError(std::string(what) + " grid must be strictly ascending");
    }
  }
}

double offset_integer(double d) {
  return std::abs(d - std::round(d)) < 1e-12 ? d + 1e-6 : d;
}

EffectiveCouplings shell_with_tolerance(const ShellEnumerator& en, double d, double tol) {
  const std::int64_t cap = en.shell_count();
  std::int64_t r = std::min<std::int64_t>(32, cap);
  EffectiveCouplings prev = evaluate(en, d, r);
  while (r < cap) {
    r = std::min(2 * r, cap);
    EffectiveCouplings cur = evaluate(en, d, r);
    const double scale = std::max({std::abs(cur.omega_cos), std::abs(cur.gamma_cos), 1e-300});
    const double change = std::max(std::abs(cur.omega_cos - prev.omega_cos), std::abs(cur.gamma_cos - prev.gamma_cos));
    prev = cur;
    if (change <= tol * scale) break;
  }
  return prev;
}

}  // namespace

EffectiveCouplings effective_for_site(std::span<const Vec3> positions, const DipoleOrientation& polarization,
                                      std::span<const double> phases, std::size_t k) {
  if (positions.size() < 2) throw DomainError("effective couplings need at least two atoms");
  if (!phases.empty() && phases.size() != positions.size()) {
    throw DomainError("phase list length does not match the number of atoms");
  }
  if (k >= positions.size()) throw DomainError("reference atom index out of range");
  Accumulator acc;
  const double phi_k = phases.empty() ? 0.0 : phases[k];
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (j == k) continue;
    const PairCoupling pc = pair_coupling(positions[k], positions[j], polarization);
    const double dphi = phases.empty() ? 0.0 : phi_k - phases[j];
    acc.add(pc, std::cos(dphi), std::sin(dphi), 1.0);
  }
  return finalize(acc, 0.0);
}

std::vector<EffectiveCouplings> effective_explicit(std::span<const Vec3> positions,
                                                   const DipoleOrientation& polarization,
                                                   std::span<const double> phases) {
  if (positions.size() < 2) throw DomainError("effective couplings need at least two atoms");
  if (!phases.empty() && phases.size() != positions.size()) {
    throw DomainError("phase list length does not match the number of atoms");
  }
  std::vector<EffectiveCouplings> out(positions.size());
  const auto n = static_cast<std::int64_t>(positions.size());
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    try {
      out[static_cast<std::size_t>(k)] =
          effective_for_site(positions, polarization, phases, static_cast<std::size_t>(k));
    } catch (const DomainError&) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) throw DomainError("effective_explicit: coincident positions");
  return out;
}

EffectiveCouplings effective_shell(const Geometry& geom, const PhaseProfile& phases, const SumPlan& plan) {
  if (plan.mode == SumMode::explicit_sum) {
    const auto pos = positions(geom);
    const auto ph = site_phases(geom, phases);
    return effective_for_site(pos, geom.polarization, ph, center_site(geom));
  }
  const ShellEnumerator en(geom, phases);
  if (plan.rel_tol) return shell_with_tolerance(en, geom.spacing, *plan.rel_tol);
  return evaluate(en, geom.spacing, en.shell_count());
}

bool near_integer_spacing(double d) { return std::abs(d - std::round(d)) < 1e-6 + 1e-12; }

std::vector<SweepRow> sweep_distance(const Geometry& templ, std::span<const double> d_grid,
                                     const PhaseProfile& phases, const SumPlan& plan) {
  check_grid(d_grid, "spacing");
  templ.validate();
  std::vector<SweepRow> rows;
  rows.reserve(d_grid.size());
  auto make_row = [&](double d, const EffectiveCouplings& v) {
    return SweepRow{d, phases.delta_phi, v, flags_divergence(templ.kind, d)};
  };

  const bool explicit_route = templ.kind == LatticeKind::polygon || plan.mode == SumMode::explicit_sum;
  if (explicit_route) {
    for (double d0 : d_grid) {
      const double d = offset_integer(d0);
      const Geometry g = templ.with_spacing(d);
      const auto pos = positions(g);
      const auto ph = site_phases(g, phases);
      rows.push_back(make_row(d, effective_for_site(pos, g.polarization, ph, center_site(g))));
    }
    return rows;
  }

  const ShellEnumerator en(templ, phases);
  if (plan.rel_tol) {
    for (double d0 : d_grid) {
      const double d = offset_integer(d0);
      rows.push_back(make_row(d, shell_with_tolerance(en, d, *plan.rel_tol)));
    }
    return rows;
  }
  if (!en.is_line() && d_grid.size() > 1 && en.class_estimate() <= kTableClassCap) {
    const ShellTable table(en);
    for (double d0 : d_grid) {
      const double d = offset_integer(d0);
      rows.push_back(make_row(d, table.evaluate(d)));
    }
    return rows;
  }
  for (double d0 : d_grid) {
    const double d = offset_integer(d0);
    rows.push_back(make_row(d, evaluate(en, d, en.shell_count())));
  }
  return rows;
}

PhaseMap sweep_phase_map(const Geometry& chain_templ, std::span<const double> d_grid,
                         std::span<const double> delta_phi_grid, const SumPlan& plan) {
  if (chain_templ.kind != LatticeKind::chain) throw DomainError("phase map is defined for chains");
  if (delta_phi_grid.empty()) throw DomainError("phase grid is empty");
  for (std::size_t i = 1; i < delta_phi_grid.size(); ++i) {
    if (!(delta_phi_grid[i] > delta_phi_grid[i - 1])) throw DomainError("phase grid must be strictly ascending");
  }
  PhaseMap map;
  map.delta_phi_grid.assign(delta_phi_grid.begin(), delta_phi_grid.end());
  for (double dphi : delta_phi_grid) {
    PhaseProfile profile;
    profile.delta_phi = dphi;
    auto rows = sweep_distance(chain_templ, d_grid, profile, plan);
    if (map.d_grid.empty()) {
      for (const auto& r : rows) map.d_grid.push_back(r.d);
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double a = rows[i - 1].values.omega_eff_rot;
      const double b = rows[i].values.omega_eff_rot;
      if (!(a * b < 0.0 || a == 0.0)) continue;
      const double da = rows[i - 1].d;
      const double db = rows[i].d;
      // Resonances of the chain sit where 2 pi d +- delta_phi is a multiple of 2 pi.
      bool resonance = false;
      for (double sign : {1.0, -1.0}) {
        const double x = sign * dphi / kTwoPi;
        if (std::ceil(da - x - 1e-9) <= std::floor(db - x + 1e-9)) resonance = true;
      }
      if (resonance) continue;
      const double t = a == 0.0 ? 0.0 : a / (a - b);
      map.zero_contour.emplace_back(da + t * (db - da), dphi);
    }
    map.rows.insert(map.rows.end(), rows.begin(), rows.end());
  }
  return map;
}

std::vector<SweepRow> cubic_innermost(std::int64_t side, std::span<const double> d_grid,
                                      const DipoleOrientation& polarization, const SumPlan& plan) {
  if (side < 1 || side % 2 == 0) throw DomainError("cubic_innermost needs an odd side length");
  check_grid(d_grid, "spacing");
  Geometry g = Geometry::cubic(side, side, side, d_grid.front());
  g.polarization = polarization;
  return sweep_distance(g, d_grid, PhaseProfile{}, plan);
}

std::size_t shell_symmetry_order(const Geometry& geom, const PhaseProfile& phases) {
  return ShellEnumerator(geom, phases).active_order();
}

}  // namespace ddclock
