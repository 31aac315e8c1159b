#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "ddclock/vec3.hpp"

namespace testing {

inline constexpr double kPi = 3.14159265358979323846;

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

// Fixed-seed generator for the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  ddclock::Vec3 point(double box) { return {uniform(-box, box), uniform(-box, box), uniform(-box, box)}; }
  ddclock::Vec3 direction() {
    for (;;) {
      ddclock::Vec3 v = point(1.0);
      const double n = ddclock::norm(v);
      if (n > 0.1 && n <= 1.0) return v * (1.0 / n);
    }
  }
  // Points at least `min_sep` apart.
  std::vector<ddclock::Vec3> cloud(int n, double box, double min_sep) {
    std::vector<ddclock::Vec3> out;
    while (static_cast<int>(out.size()) < n) {
      const ddclock::Vec3 p = point(box);
      bool ok = true;
      for (const auto& q : out) ok = ok && ddclock::norm(p - q) >= min_sep;
      if (ok) out.push_back(p);
    }
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

// Classical fixed-step RK4 on a flat state vector.
using Rhs = std::function<void(const std::vector<double>&, std::vector<double>&)>;

inline std::vector<double> rk4(const Rhs& f, std::vector<double> x, double t_end, double h) {
  const auto steps = static_cast<long>(std::llround(t_end / h));
  const double dt = t_end / static_cast<double>(steps);
  const std::size_t n = x.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (long s = 0; s < steps; ++s) {
    f(x, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    f(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    f(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    f(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return x;
}

}  // namespace testing
