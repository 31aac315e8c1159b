#include "ddclock/ramsey.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ddclock/errors.hpp"
#include "ode.hpp"

namespace ddclock {

namespace {

void check_grid(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw DomainError(std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw DomainError(std::string(what) + " grid has non-finite values");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError(std::string(what) + " grid must be strictly ascending");
  }
}

void check_row(std::span<const double> detunings, std::span<const double> signal, std::span<const double> phase) {
  check_grid(detunings, "detuning");
  if (signal.size() != detunings.size()) throw DomainError("signal and detuning grids differ in length");
  if (!phase.empty() && phase.size() != detunings.size()) throw DomainError("phase and detuning grids differ in length");
  if (detunings.size() < 3) throw DomainError("fringe analysis needs at least 3 detuning points");
}

// Index of the central fringe maximum on the grid.
std::size_t central_max(std::span<const double> detunings, std::span<const double> signal,
                        std::span<const double> phase) {
  std::size_t i = 0;
  for (std::size_t k = 1; k < detunings.size(); ++k) {
    const double a = phase.empty() ? std::abs(detunings[k]) : std::abs(phase[k]);
    const double b = phase.empty() ? std::abs(detunings[i]) : std::abs(phase[i]);
    if (a < b) i = k;
  }
  for (;;) {
    if (i > 0 && signal[i - 1] > signal[i]) {
      --i;
    } else if (i + 1 < signal.size() && signal[i + 1] > signal[i]) {
      ++i;
    } else {
      break;
    }
  }
  if (i == 0 || i + 1 == signal.size()) throw DomainError("central fringe maximum is not bracketed by the grid");
  return i;
}

// Lagrange interpolant through up to four points and its derivative.
struct LocalPoly {
  std::vector<double> x;
  std::vector<double> y;

  double value(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double l = 1.0;
      for (std::size_t j = 0; j < x.size(); ++j)
        if (j != i) l *= (t - x[j]) / (x[i] - x[j]);
      s += y[i] * l;
    }
    return s;
  }

  double derivative(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double dl = 0.0;
      for (std::size_t m = 0; m < x.size(); ++m) {
        if (m == i) continue;
        double term = 1.0 / (x[i] - x[m]);
        for (std::size_t j = 0; j < x.size(); ++j)
          if (j != i && j != m) term *= (t - x[j]) / (x[i] - x[j]);
        dl += term;
      }
      s += y[i] * dl;
    }
    return s;
  }
};

}  // namespace

RamseyEnvelope ramsey_envelope(double omega_eff, double gamma_eff, std::span<const double> delays,
                               const IntegratorSpec& spec) {
  if (!std::isfinite(omega_eff) || !std::isfinite(gamma_eff)) throw DomainError("couplings must be finite");
  check_times(delays);
  // s[0] = log A keeps the amplitude positive at long delays
  auto rhs = [=](const detail::OdeState& s, detail::OdeState& ds, double) {
    ds[0] = -0.5 * (1.0 - gamma_eff * s[1]);
    ds[1] = -(1.0 + s[1]) - 0.5 * gamma_eff * std::exp(2.0 * s[0]);
    ds[2] = s[1];
  };
  const auto raw = detail::integrate_at(rhs, {0.0, 0.0, 0.0}, delays, spec);
  RamseyEnvelope env;
  env.delays.assign(delays.begin(), delays.end());
  for (const auto& s : raw) {
    env.amplitude.push_back(std::exp(s[0]));
    env.population.push_back(s[1]);
    env.integrated_z.push_back(s[2]);
  }
  return env;
}

std::span<const double> RamseyResult::signal_row(std::size_t i_delay) const {
  return std::span<const double>(signal).subspan(i_delay * detunings.size(), detunings.size());
}

std::span<const double> RamseyResult::phase_row(std::size_t i_delay) const {
  return std::span<const double>(phase).subspan(i_delay * detunings.size(), detunings.size());
}

RamseyResult ramsey_signal(const RamseyConfig& cfg) {
  check_grid(cfg.detunings, "detuning");
  check_grid(cfg.delays, "delay");
  RamseyResult res;
  res.omega_eff = cfg.omega_eff;
  res.gamma_eff = cfg.gamma_eff;
  res.detunings = cfg.detunings;
  res.delays = cfg.delays;
  res.envelope = ramsey_envelope(cfg.omega_eff, cfg.gamma_eff, cfg.delays, cfg.integrator);
  const std::size_t nd = cfg.detunings.size();
  res.signal.resize(cfg.delays.size() * nd);
  res.phase.resize(cfg.delays.size() * nd);
  for (std::size_t t = 0; t < cfg.delays.size(); ++t) {
    const double big_t = cfg.delays[t];
    const double a = res.envelope.amplitude[t];
    const double drift = cfg.omega_eff * res.envelope.integrated_z[t];
    for (std::size_t k = 0; k < nd; ++k) {
      const double phi = cfg.detunings[k] * big_t - drift;
      res.phase[t * nd + k] = phi;
      res.signal[t * nd + k] = a * std::cos(phi);
    }
  }
  return res;
}

double fringe_shift(std::span<const double> detunings, std::span<const double> signal,
                    std::span<const double> phase) {
  check_row(detunings, signal, phase);
  const std::size_t i = central_max(detunings, signal, phase);
  const double x0 = detunings[i - 1], x1 = detunings[i], x2 = detunings[i + 1];
  const double y0 = signal[i - 1], y1 = signal[i], y2 = signal[i + 1];
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curv = (d12 - d01) / (x2 - x0);
  if (!(curv < 0.0)) return x1;
  return 0.5 * (x0 + x1) - d01 / (2.0 * curv);
}

double zero_crossing_slope(std::span<const double> detunings, std::span<const double> signal,
                           std::span<const double> phase) {
  check_row(detunings, signal, phase);
  std::size_t j = central_max(detunings, signal, phase);
  const std::size_t n = signal.size();
  while (j + 1 < n && !(signal[j] > 0.0 && signal[j + 1] <= 0.0)) ++j;
  if (j + 1 >= n) throw DomainError("no zero crossing above the central fringe within the grid");

  LocalPoly p;
  const std::size_t lo = j >= 1 ? j - 1 : 0;
  const std::size_t hi = std::min(n - 1, j + 2);
  for (std::size_t k = lo; k <= hi; ++k) {
    p.x.push_back(detunings[k]);
    p.y.push_back(signal[k]);
  }
  double a = detunings[j], b = detunings[j + 1];
  double fa = p.value(a);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = p.value(m);
    if ((fa > 0.0) == (fm > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return std::abs(p.derivative(0.5 * (a + b)));
}

std::vector<FringeSummary> summarize(const RamseyResult& result) {
  std::vector<FringeSummary> out;
  for (std::size_t t = 0; t < result.delays.size(); ++t) {
    if (result.delays[t] <= 0.0) continue;
    const auto s = result.signal_row(t);
    const auto ph = result.phase_row(t);
    out.push_back({result.omega_eff, result.gamma_eff, result.delays[t], fringe_shift(result.detunings, s, ph),
                   zero_crossing_slope(result.detunings, s, ph)});
  }
  return out;
}

std::vector<double> fringe_grid(double omega_eff, double delay, std::size_t points_per_fringe) {
  if (!(delay > 0.0) || !std::isfinite(delay)) throw DomainError("fringe grid needs a positive delay");
  if (points_per_fringe < 8) throw DomainError("points_per_fringe must be at least 8");
  const double period = 2.0 * std::numbers::pi / delay;
  const double step = period / static_cast<double>(points_per_fringe);
  const double half = std::abs(omega_eff) + 2.0 * period;
  const auto m = static_cast<std::int64_t>(std::ceil(half / step));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(2 * m + 1));
  for (std::int64_t k = -m; k <= m; ++k) grid.push_back(static_cast<double>(k) * step);
  return grid;
}

std::vector<FringeSummary> fringe_scan(double omega_eff, double gamma_eff, std::span<const double> delays,
                                       const IntegratorSpec& spec, std::size_t points_per_fringe) {
  const RamseyEnvelope env = ramsey_envelope(omega_eff, gamma_eff, delays, spec);
  if (!(delays.front() > 0.0)) throw DomainError("fringe scan delays must be > 0");
  std::vector<FringeSummary> out(delays.size());
  std::vector<std::string> errors(delays.size());
  const auto nt = static_cast<std::int64_t>(delays.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t ti = 0; ti < nt; ++ti) {
    const auto t = static_cast<std::size_t>(ti);
    try {
      if (!(env.amplitude[t] > 0.0)) throw NumericalError("fringe contrast vanished at T = " + std::to_string(delays[t]));
      const auto grid = fringe_grid(omega_eff, delays[t], points_per_fringe);
      std::vector<double> s(grid.size()), ph(grid.size());
      for (std::size_t k = 0; k < grid.size(); ++k) {
        ph[k] = grid[k] * delays[t] - omega_eff * env.integrated_z[t];
        s[k] = env.amplitude[t] * std::cos(ph[k]);
      }
      out[t] = {omega_eff, gamma_eff, delays[t], fringe_shift(grid, s, ph), zero_crossing_slope(grid, s, ph)};
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  }
  for (std::size_t t = 0; t < errors.size(); ++t) {
    if (!errors[t].empty()) throw NumericalError("fringe scan failed: " + errors[t]);
  }
  return out;
}

MaxSlope max_slope(double omega_eff, double gamma_eff, std::span<const double> delays, const IntegratorSpec& spec,
                   std::size_t points_per_fringe) {
  const auto rows = fringe_scan(omega_eff, gamma_eff, delays, spec, points_per_fringe);
  MaxSlope best{omega_eff, gamma_eff, 0.0, -1.0};
  for (const auto& r : rows) {
    if (r.slope > best.best_slope) {
      best.best_slope = r.slope;
      best.best_delay = r.delay;
    }
  }
  return best;
}

}  // namespace ddclock
