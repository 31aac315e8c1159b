#include "shell_classes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddclock/errors.hpp"

namespace ddclock::detail {

namespace {

constexpr double kSymTol = 1e-12;
constexpr double kKeyScale = 1e12;

IndexVec act(const IndexMat& g, const IndexVec& n) {
  IndexVec m{};
  for (int r = 0; r < 3; ++r) {
    m[r] = g[r][0] * n[0] + g[r][1] * n[1] + g[r][2] * n[2];
  }
  return m;
}

int determinant(const IndexMat& g) {
  return g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
         g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
}

// g^T v
std::array<double, 3> transpose_apply(const IndexMat& g, const std::array<double, 3>& v) {
  std::array<double, 3> out{};
  for (int c = 0; c < 3; ++c) out[c] = g[0][c] * v[0] + g[1][c] * v[1] + g[2][c] * v[2];
  return out;
}

bool equal_up_to_sign(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double scale = 1.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  bool plus = true;
  bool minus = true;
  for (int i = 0; i < 3; ++i) {
    plus = plus && std::abs(a[i] - b[i]) <= kSymTol * scale;
    minus = minus && std::abs(a[i] + b[i]) <= kSymTol * scale;
  }
  return plus || minus;
}

std::int64_t hex_norm(const IndexVec& n) {
  return std::max({std::abs(n[0]), std::abs(n[1]), std::abs(n[0] + n[1])});
}

bool contains(const std::vector<IndexMat>& ops, const IndexMat& g) {
  for (const auto& h : ops) {
    bool same = true;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) same = same && h[r][c] == g[r][c];
    if (same) return true;
  }
  return false;
}

bool lex_greater(const IndexVec& a, const IndexVec& b) {
  if (a[0] != b[0]) return a[0] > b[0];
  if (a[1] != b[1]) return a[1] > b[1];
  return a[2] > b[2];
}

}  // namespace

ShellEnumerator::ShellEnumerator(const Geometry& geom, const PhaseProfile& phases) {
  geom.validate();
  if (geom.kind == LatticeKind::polygon) {
    throw DomainError("shell summation needs a lattice geometry (chain, square, hexagonal, cubic)");
  }
  basis_ = lattice_basis(geom.kind);
  hexagon_ = geom.is_hexagon_patch();
  if (hexagon_) {
    radius_ = {geom.counts[0], geom.counts[0], 0};
  } else {
    for (std::size_t a = 0; a < geom.counts.size(); ++a) radius_[a] = geom.counts[a] / 2;
  }
  shells_ = std::max({radius_[0], radius_[1], radius_[2]});
  sites_ = static_cast<double>(geom.site_count());

  const Vec3& e = geom.polarization.vector();
  const double dir_norm = norm(phases.direction);
  if (!(dir_norm > 0.0)) throw DomainError("phase direction must be non-zero");
  for (int a = 0; a < 3; ++a) {
    const bool active = radius_[a] > 0;
    pol_vec_[a] = active ? dot(basis_[a], e) : 0.0;
    phase_vec_[a] = active ? phases.delta_phi * dot(basis_[a], phases.direction) / dir_norm : 0.0;
  }

  // Candidate operations: unimodular matrices with entries in {-1, 0, 1}
  // that are isometries of the lattice metric.
  double metric[3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) metric[a][b] = dot(basis_[a], basis_[b]);

  std::vector<IndexVec> probes;
  if (hexagon_) {
    probes = {IndexVec{1, 0, 0}, IndexVec{0, 1, 0}, IndexVec{-1, 1, 0},
              IndexVec{-1, 0, 0}, IndexVec{0, -1, 0}, IndexVec{1, -1, 0}};
  } else {
    for (int sx : {-1, 1})
      for (int sy : {-1, 1})
        for (int sz : {-1, 1}) probes.push_back({sx * radius_[0], sy * radius_[1], sz * radius_[2]});
  }
  auto in_domain = [&](const IndexVec& m) {
    if (hexagon_) return m[2] == 0 && hex_norm(m) <= 1;
    for (int a = 0; a < 3; ++a)
      if (std::abs(m[a]) > radius_[a]) return false;
    return true;
  };

  IndexMat g{};
  for (int code = 0; code < 19683; ++code) {
    int c = code;
    for (int r = 0; r < 3; ++r)
      for (int col = 0; col < 3; ++col) {
        g[r][col] = c % 3 - 1;
        c /= 3;
      }
    if (std::abs(determinant(g)) != 1) continue;
    bool isometry = true;
    for (int a = 0; a < 3 && isometry; ++a)
      for (int b = 0; b < 3 && isometry; ++b) {
        double v = 0.0;
        for (int p = 0; p < 3; ++p)
          for (int q = 0; q < 3; ++q) v += g[p][a] * metric[p][q] * g[q][b];
        isometry = std::abs(v - metric[a][b]) <= kSymTol;
      }
    if (!isometry) continue;
    if (!std::all_of(probes.begin(), probes.end(), [&](const IndexVec& p) { return in_domain(act(g, p)); }))
      continue;
    if (!equal_up_to_sign(transpose_apply(g, pol_vec_), pol_vec_)) continue;
    if (!equal_up_to_sign(transpose_apply(g, phase_vec_), phase_vec_)) continue;
    ops_.push_back(g);
  }

  const IndexMat inversion{{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}};
  if (!contains(ops_, inversion)) {
    throw NumericalError("shell symmetry group lacks inversion");
  }

  if (!hexagon_) {
    for (int a = 0; a < 3; ++a) {
      IndexMat flip{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
      flip[a][a] = -1;
      nonneg_[a] = contains(ops_, flip);
    }
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        IndexMat swap{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
        swap[a][a] = swap[b][b] = 0;
        swap[a][b] = swap[b][a] = 1;
        if (contains(ops_, swap)) ordered_pairs_.emplace_back(a, b);
      }
  }

  // Order of the group as seen by the active axes only.
  std::vector<IndexMat> restricted;
  for (IndexMat h : ops_) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        if (radius_[r] == 0 || radius_[c] == 0) h[r][c] = 0;
    if (!contains(restricted, h)) restricted.push_back(h);
  }
  active_order_ = restricted.size();

  line_ = !hexagon_ && radius_[1] == 0 && radius_[2] == 0;
  if (line_) {
    const double c = pol_vec_[0] / norm(basis_[0]);
    line_cos2_ = c * c;
  }
}

double ShellEnumerator::class_estimate() const {
  return sites_ / static_cast<double>(ops_.size());
}

void ShellEnumerator::visit(const IndexVec& n, std::vector<ShellClass>& out) const {
  for (const auto& [a, b] : ordered_pairs_) {
    if (n[a] < n[b]) return;
  }
  int stabilizer = 0;
  for (const auto& g : ops_) {
    const IndexVec m = act(g, n);
    if (lex_greater(m, n)) return;
    if (m == n) ++stabilizer;
  }
  const Vec3 r = basis_[0] * static_cast<double>(n[0]) + basis_[1] * static_cast<double>(n[1]) +
                 basis_[2] * static_cast<double>(n[2]);
  const double dist = norm(r);
  const double proj = pol_vec_[0] * n[0] + pol_vec_[1] * n[1] + pol_vec_[2] * n[2];
  const double phase = phase_vec_[0] * n[0] + phase_vec_[1] * n[1] + phase_vec_[2] * n[2];
  out.push_back({dist, (proj * proj) / (dist * dist), std::cos(phase),
                 static_cast<double>(ops_.size() / static_cast<std::size_t>(stabilizer))});
}

void ShellEnumerator::enumerate_box_shell(std::int64_t s, std::vector<ShellClass>& out) const {
  std::array<std::int64_t, 3> lo{};
  std::array<std::int64_t, 3> hi{};
  for (int a = 0; a < 3; ++a) {
    hi[a] = std::min(s, radius_[a]);
    lo[a] = nonneg_[a] ? 0 : -hi[a];
  }
  // Axis `a` is the first one with |n_a| == s; axes before it stay strictly inside.
  for (int a = 0; a < 3; ++a) {
    if (s > radius_[a]) continue;
    std::array<std::int64_t, 3> l = lo;
    std::array<std::int64_t, 3> h = hi;
    for (int b = 0; b < a; ++b) {
      l[b] = std::max(l[b], -(s - 1));
      h[b] = std::min(h[b], s - 1);
    }
    for (std::int64_t edge : {-s, s}) {
      if (edge < lo[a] || edge > hi[a]) continue;
      l[a] = h[a] = edge;
      IndexVec n{};
      for (n[0] = l[0]; n[0] <= h[0]; ++n[0])
        for (n[1] = l[1]; n[1] <= h[1]; ++n[1])
          for (n[2] = l[2]; n[2] <= h[2]; ++n[2]) visit(n, out);
    }
  }
}

void ShellEnumerator::enumerate_hex_shell(std::int64_t s, std::vector<ShellClass>& out) const {
  for (std::int64_t i = -s; i <= s; ++i) {
    const std::int64_t jlo = std::max(-s, -s - i);
    const std::int64_t jhi = std::min(s, s - i);
    if (std::abs(i) == s) {
      for (std::int64_t j = jlo; j <= jhi; ++j) visit({i, j, 0}, out);
    } else {
      visit({i, jlo, 0}, out);
      visit({i, jhi, 0}, out);
    }
  }
}

void ShellEnumerator::append_shell(std::int64_t s, std::vector<ShellClass>& out) const {
  const std::size_t first = out.size();
  if (hexagon_) {
    enumerate_hex_shell(s, out);
  } else {
    enumerate_box_shell(s, out);
  }
  // Merge partners that share (distance, cos^2, phase factor), in ascending key order.
  struct Key {
    std::int64_t dist, cos2, phase;
    auto operator<=>(const Key&) const = default;
  };
  auto key = [](const ShellClass& c) {
    return Key{std::llround(c.dist * kKeyScale), std::llround(c.cos2 * kKeyScale),
               std::llround(c.cos_phase * kKeyScale)};
  };
  auto begin = out.begin() + static_cast<std::ptrdiff_t>(first);
  std::sort(begin, out.end(), [&](const ShellClass& a, const ShellClass& b) { return key(a) < key(b); });
  auto write = begin;
  for (auto it = begin; it != out.end(); ++it) {
    if (write != begin && key(*(write - 1)) == key(*it)) {
      (write - 1)->weight += it->weight;
    } else {
      *write++ = *it;
    }
  }
  out.erase(write, out.end());
}

}  // namespace ddclock::detail
