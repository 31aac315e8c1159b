#pragma once

// Thin wrapper over Boost.Odeint: dopri5 with dense output, observed at the
// requested times. Start time is always 0.

#include <cmath>
#include <span>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "ddclock/errors.hpp"
#include "ddclock/integrator.hpp"

namespace ddclock::detail {

using OdeState = std::vector<double>;

template <class System>
std::vector<OdeState> integrate_at(System&& system, OdeState x0, std::span<const double> times,
                                   const IntegratorSpec& spec) {
  namespace odeint = boost::numeric::odeint;
  check_times(times);
  check_spec(spec);

  std::vector<double> grid;
  grid.reserve(times.size() + 1);
  const bool prepend = times.front() > 0.0;
  if (prepend) grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());

  std::vector<OdeState> out;
  out.reserve(grid.size());
  auto observer = [&](const OdeState& x, double) {
    for (double v : x) {
      if (!std::isfinite(v)) throw NumericalError("integration produced a non-finite state");
    }
    out.push_back(x);
  };

  if (grid.size() == 1) {
    observer(x0, 0.0);
  } else {
    const double dt0 = std::min(1e-3, 0.1 * (grid[1] - grid[0]));
    auto stepper = odeint::make_dense_output(spec.abs_tol, spec.rel_tol, odeint::runge_kutta_dopri5<OdeState>());
    try {
      odeint::integrate_times(stepper, system, x0, grid.begin(), grid.end(), dt0, observer,
                              odeint::max_step_checker(static_cast<int>(spec.max_steps)));
    } catch (const odeint::no_progress_error& e) {
      throw NumericalError(std::string("integrator could not meet tolerances: ") + e.what());
    } catch (const odeint::step_adjustment_error& e) {
      throw NumericalError(std::string("integrator step control failed: ") + e.what());
    } catch (const odeint::odeint_error& e) {
      throw NumericalError(std::string("integrator failure: ") + e.what());
    }
  }
  if (prepend) out.erase(out.begin());
  return out;
}

}  // namespace ddclock::detail
