#include "ddclock/integrator.hpp"

#include <cmath>

#include "ddclock/errors.hpp"

namespace ddclock {

void check_times(std::span<const double> times) {
  if (times.empty()) throw DomainError("time grid is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) throw DomainError("times must be finite and >= 0");
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("times must be strictly ascending");
  }
}

void check_spec(const IntegratorSpec& spec) {
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0) || !std::isfinite(spec.rel_tol) ||
      !std::isfinite(spec.abs_tol)) {
    throw DomainError("integrator tolerances must be finite and > 0");
  }
  if (spec.max_steps == 0) throw DomainError("max_steps must be positive");
}

}  // namespace ddclock
