// Full-size cubic innermost-site sweep. Opt-in: -DDDCLOCK_BUILD_BENCH=ON
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "ddclock/lattice_sums.hpp"

int main(int argc, char** argv) {
  const std::int64_t side = argc > 1 ? std::atoll(argv[1]) : 2001;
  const int points = argc > 2 ? std::atoi(argv[2]) : 7;
  std::vector<double> d;
  for (int i = 0; i < points; ++i) d.push_back(0.6 + 0.3 * i / (points > 1 ? points - 1 : 1));

  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = ddclock::cubic_innermost(side, d, ddclock::DipoleOrientation(ddclock::Vec3{0.0, 0.0, 1.0}));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::printf("# cubic L=%lld, %d spacings, %.2f s\n", static_cast<long long>(side), points, secs);
  std::printf("d,omega_eff,gamma_eff,n_terms\n");
  for (const auto& r : rows) {
    std::printf("%.17g,%.17g,%.17g,%lld\n", r.d, r.values.omega_eff, r.values.gamma_eff,
                static_cast<long long>(r.values.n_terms));
  }
}
