#pragma once

#include <cstddef>
#include <span>

namespace ddclock {

/// Adaptive Dormand-Prince 5(4) with dense output at the requested times.
struct IntegratorSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  /// Cap on internal steps between two consecutive output times.
  std::size_t max_steps = 500000;
};

/// Output times must be non-empty, finite, >= 0 and strictly ascending.
/// Throws DomainError otherwise.
void check_times(std::span<const double> times);

/// Throws DomainError for non-positive or non-finite tolerances.
void check_spec(const IntegratorSpec& spec);

}  // namespace ddclock
