#pragma once

// Orbit representatives of a centered lattice window, grouped in shells.
//
// Box windows (chain, square, cubic, hexagonal parallelogram) use the
// Chebyshev norm of the integer index vector as the shell index; the
// hexagon-shaped patch uses the hexagonal norm max(|i|, |j|, |i + j|). Both
// norms are preserved by every operation kept in the group.

#include <array>
#include <cstdint>
#include <vector>

#include "ddclock/geometry.hpp"

namespace ddclock::detail {

/// One class of equivalent partners. Geometry only, spacing independent:
/// dist in units of the spacing, weight = number of partners in the class.
struct ShellClass {
  double dist = 0.0;
  double cos2 = 0.0;
  double cos_phase = 1.0;
  double weight = 0.0;
};

using IndexVec = std::array<std::int64_t, 3>;
using IndexMat = std::array<std::array<int, 3>, 3>;

class ShellEnumerator {
 public:
  /// Throws DomainError for polygons.
  ShellEnumerator(const Geometry& geom, const PhaseProfile& phases);

  /// Outermost shell index.
  std::int64_t shell_count() const { return shells_; }
  std::size_t group_order() const { return ops_.size(); }
  /// Distinct actions on the occupied lattice axes (2 for a chain, 8 for a square).
  std::size_t active_order() const { return active_order_; }

  /// True for a chain: exactly one class per shell, generated in closed form
  /// by the caller.
  bool is_line() const { return line_; }
  double line_cos2() const { return line_cos2_; }
  /// Phase advance per lattice step along the chain.
  double line_phase_step() const { return phase_vec_[0]; }

  /// Appends the (merged, sorted) classes of shell `s` >= 1 to `out`.
  void append_shell(std::int64_t s, std::vector<ShellClass>& out) const;

  /// Rough number of classes in shells 1..shell_count().
  double class_estimate() const;

 private:
  void visit(const IndexVec& n, std::vector<ShellClass>& out) const;
  void enumerate_box_shell(std::int64_t s, std::vector<ShellClass>& out) const;
  void enumerate_hex_shell(std::int64_t s, std::vector<ShellClass>& out) const;

  bool hexagon_ = false;
  bool line_ = false;
  double line_cos2_ = 0.0;
  std::int64_t shells_ = 0;
  std::array<std::int64_t, 3> radius_{};
  std::array<Vec3, 3> basis_{};
  std::array<double, 3> pol_vec_{};    // basis^T e on active axes
  std::array<double, 3> phase_vec_{};  // phase per unit index step
  std::vector<IndexMat> ops_;
  std::array<bool, 3> nonneg_{};                  // axis sign flip is in the group
  std::vector<std::pair<int, int>> ordered_pairs_;  // pure axis swap is in the group
  double sites_ = 0.0;
  std::size_t active_order_ = 0;
};

}  // namespace ddclock::detail
