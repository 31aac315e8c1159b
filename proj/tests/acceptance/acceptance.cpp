// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance            run everything
//   acceptance --only A4  run one criterion (exit 1 on FAIL)

#include <quadmath.h>

#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "ddclock/couplings.hpp"
#include "ddclock/geometry.hpp"
#include "ddclock/lattice_sums.hpp"
#include "ddclock/master_oracle.hpp"
#include "ddclock/meanfield.hpp"
#include "ddclock/ramsey.hpp"
#include "ddclock/summation.hpp"

using namespace ddclock;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// appends to the detail string, printf style
void note(Outcome& o, const char* fmt, ...) __attribute__((format(printf, 2, 3)));
void note(Outcome& o, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// quad precision kernels
__float128 f_quad(__float128 xi, __float128 c2) {
  const __float128 a = 1 - c2, b = 1 - 3 * c2;
  return a * sinq(xi) / xi + b * (cosq(xi) / (xi * xi) - sinq(xi) / (xi * xi * xi));
}
__float128 g_quad(__float128 xi, __float128 c2) {
  const __float128 a = 1 - c2, b = 1 - 3 * c2;
  return -a * cosq(xi) / xi + b * (sinq(xi) / (xi * xi) + cosq(xi) / (xi * xi * xi));
}

Outcome a1() {
  Outcome o;
  double worst_lim = 0;
  for (double theta : {0.0, kPi / 4, kPi / 2}) {
    const double h = 1e-2;
    const double extrap = (4 * f_function(h / 2, theta) - f_function(h, theta)) / 3;
    worst_lim = std::max(worst_lim, std::abs(1.5 * extrap - 1));
  }
  o.pass = worst_lim < 1e-6;
  double worst_spot = 0;
  for (double xi : {2 * kPi, kPi}) {
    for (double theta : {0.0, kPi / 4, kPi / 3, kPi / 2}) {
      const double c = std::cos(theta);
      const __float128 qxi = xi, qc2 = static_cast<__float128>(c) * c;
      const double fq = static_cast<double>(f_quad(qxi, qc2)), gq = static_cast<double>(g_quad(qxi, qc2));
      worst_spot = std::max(worst_spot, std::abs(f_function(xi, theta) - fq) / std::max(std::abs(fq), 1e-2));
      worst_spot = std::max(worst_spot, std::abs(g_function(xi, theta) - gq) / std::max(std::abs(gq), 1e-2));
    }
  }
  o.pass = o.pass && worst_spot < 1e-12;
  note(o, "extrapolated |1.5F(0)-1| = %.2e (< 1e-6)", worst_lim);
  note(o, "spot values vs quad precision %.2e (< 1e-12)", worst_spot);
  return o;
}

Outcome a2() {
  Outcome o;
  const std::vector<std::pair<const char*, Geometry>> cases{
      {"chain 1001", Geometry::chain(1001, 0.61)},
      {"square 63x63", Geometry::square(63, 63, 0.61)},
      {"hexagon 3997", Geometry::hexagon_patch(36, 0.61)},
      {"cubic 9^3", Geometry::cubic(9, 9, 9, 0.61)},
  };
  SumPlan explicit_plan;
  explicit_plan.mode = SumMode::explicit_sum;
  double worst = 0;
  for (double d : {0.37, 0.61, 1.43}) {
    for (const auto& [name, g] : cases) {
      const auto s = effective_shell(g.with_spacing(d), {});
      const auto e = effective_shell(g.with_spacing(d), {}, explicit_plan);
      worst = std::max({worst, rel(s.omega_eff, e.omega_eff), rel(s.gamma_eff, e.gamma_eff)});
    }
  }
  o.pass = worst < 1e-10;
  note(o, "max relative difference %.2e (< 1e-10)", worst);
  return o;
}

Outcome a3() {
  Outcome o;
  const auto v = effective_shell(Geometry::chain(1000000, 0.792), {});
  o.pass = std::abs(v.omega_eff) < 0.02;
  note(o, "Omega_eff(0.792) = %.4g (|.| < 0.02), Gamma_eff = %.4g", v.omega_eff, v.gamma_eff);
  return o;
}

Outcome a4() {
  Outcome o;
  const std::vector<double> grid{0.6, 0.7, 0.8};
  const auto sq = sweep_distance(Geometry::square(201, 201, 0.6), grid, {});
  const auto hx = sweep_distance(Geometry::hexagon_patch(182, 0.6), grid, {});
  std::string s = "square 40401: ", h = "hexagon 99919: ";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = sq[i].values.gamma_eff, b = hx[i].values.gamma_eff;
    o.pass = o.pass && a >= -1.0 && a <= -0.8 && b >= -1.0 && b <= -0.8;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.3f", i ? ", " : "", a);
    s += buf;
    std::snprintf(buf, sizeof buf, "%s%.3f", i ? ", " : "", b);
    h += buf;
  }
  note(o, "Gamma_eff at d = 0.6, 0.7, 0.8 in [-1, -0.8]");
  note(o, "%s", s.c_str());
  note(o, "%s", h.c_str());
  return o;
}

Outcome a5() {
  Outcome o;
  const std::vector<double> grid{0.99, 0.999, 0.9999};
  const auto rows = sweep_distance(Geometry::chain(1000000, 0.99), grid, {});
  const double a = std::abs(rows[0].values.omega_eff), b = std::abs(rows[1].values.omega_eff),
               c = std::abs(rows[2].values.omega_eff);
  o.pass = a < b && b < c && c > 10.0;
  note(o, "|Omega_eff| = %.4g, %.4g, %.4g (increasing, last > 10)", a, b, c);
  return o;
}

Outcome a6() {
  Outcome o;
  std::vector<double> grid;
  for (int i = 0; i <= 300; ++i) grid.push_back(0.6 + 1e-3 * i);
  const DipoleOrientation e(Vec3{0, 0, 1});
  const auto small = cubic_innermost(201, grid, e);
  const auto large = cubic_innermost(401, grid, e);
  int differ = 0;
  double excursion = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = large[i].values.omega_eff, b = small[i].values.omega_eff;
    const double ga = large[i].values.gamma_eff, gb = small[i].values.gamma_eff;
    if (rel(a, b) > 0.1 || rel(ga, gb) > 0.1) ++differ;
    excursion = std::max({excursion, std::abs(a), std::abs(b)});
  }
  const double frac = static_cast<double>(differ) / static_cast<double>(grid.size());
  o.pass = frac >= 0.2 && excursion > 1.0;
  note(o, "L=201 vs L=401 differ by >10%% at %d/%zu points (%.0f%%, >= 20%%)", differ, grid.size(), 100 * frac);
  note(o, "max |Omega_eff| = %.3g (> 1)", excursion);
  return o;
}

Outcome a7() {
  Outcome o;
  std::vector<double> t;
  for (int i = 1; i <= 20; ++i) t.push_back(0.05 * i);
  double worst_min_eig = 1, worst_trace = 0;
  auto run = [&](int n, double limit) {
    const auto pos = positions(Geometry::polygon(n, 0.8));
    const DipoleOrientation e(Vec3{0, 0, 1});
    const auto init = ramsey_init(std::vector<double>(static_cast<std::size_t>(n), 0.0));
    const auto exact = evolve_exact(DensityMatrix::product(init), build_generators(pos, e), t);
    const auto mf = evolve_general(pos, e, init, t);
    double worst = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      worst_min_eig = std::min(worst_min_eig, exact[i].min_eigenvalue());
      worst_trace = std::max(worst_trace, exact[i].trace_error());
      const auto ex = expectations(exact[i]);
      for (int k = 0; k < n; ++k) {
        const double pe = (1 + ex[k].z) / 2, pm = (1 + mf[i][k].z) / 2;
        worst = std::max(worst, std::abs(pe - pm) / pe);
      }
    }
    o.pass = o.pass && worst < limit;
    note(o, "N=%d max relative population deviation %.3g (< %.2g)", n, worst, limit);
  };
  run(2, 0.05);
  run(4, 0.10);
  o.pass = o.pass && worst_trace <= 1e-9 && worst_min_eig >= -1e-8;
  note(o, "trace error %.1e, min eigenvalue %.1e", worst_trace, worst_min_eig);
  return o;
}

Outcome a8() {
  Outcome o;
  std::vector<double> t;
  for (int i = 1; i <= 100; ++i) t.push_back(0.1 * i);
  double worst = 0;
  for (double d : {0.2, 0.5, 0.8, 1.3}) {
    const auto pos = positions(Geometry::polygon(6, d));
    const DipoleOrientation e(Vec3{0, 0, 1});
    const auto eff = effective_explicit(pos, e, {});
    const auto sym = evolve_symmetric(eff[0].omega_eff, eff[0].gamma_eff, {1, 0, 0}, t);
    const auto gen = evolve_general(pos, e, BlochState(6, Bloch{1, 0, 0}), t);
    for (std::size_t i = 0; i < t.size(); ++i)
      for (const auto& s : gen[i])
        worst = std::max({worst, std::abs(s.x - sym[i].x), std::abs(s.y - sym[i].y), std::abs(s.z - sym[i].z)});
  }
  o.pass = worst < 1e-8;
  note(o, "max component difference %.2e (< 1e-8)", worst);
  return o;
}

Outcome a9() {
  Outcome o;
  RamseyConfig cfg;
  cfg.detunings = linspace(-8, 8, 321);
  cfg.delays = linspace(0, 10, 41);
  const auto r = ramsey_signal(cfg);
  double worst = 0;
  for (std::size_t i = 0; i < cfg.delays.size(); ++i) {
    const auto row = r.signal_row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double T = cfg.delays[i];
      worst = std::max(worst, std::abs(row[j] - std::exp(-T / 2) * std::cos(cfg.detunings[j] * T)));
    }
  }
  std::vector<double> delays;
  for (int i = 1; i <= 120; ++i) delays.push_back(i / 20.0);
  const auto best = max_slope(0, 0, delays);
  const double err = std::abs(best.best_slope - 2 / std::exp(1.0));
  o.pass = worst < 1e-6 && err < 1e-4 && std::abs(best.best_delay - 2) < 1e-12;
  note(o, "signal error %.2e (< 1e-6)", worst);
  note(o, "max slope %.6f at T = %.3g (2/e = 0.735759, error %.1e < 1e-4)", best.best_slope, best.best_delay, err);
  return o;
}

Outcome a10() {
  Outcome o;
  const std::vector<double> T15{15.0};
  const auto omegas = linspace(-1, 1, 9);
  const std::vector<double> gammas{-0.75, 0.0, 1.0};
  std::vector<std::vector<double>> shift(3);
  double worst_r2 = 1, worst_agree = 0;
  for (std::size_t g = 0; g < 3; ++g) {
    for (double w : omegas) shift[g].push_back(fringe_scan(w, gammas[g], T15)[0].shift);
    // R^2 of a least-squares line
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < omegas.size(); ++i) mx += omegas[i], my += shift[g][i];
    mx /= omegas.size();
    my /= omegas.size();
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      sxy += (omegas[i] - mx) * (shift[g][i] - my);
      sxx += (omegas[i] - mx) * (omegas[i] - mx);
      syy += (shift[g][i] - my) * (shift[g][i] - my);
    }
    worst_r2 = std::min(worst_r2, sxy * sxy / (sxx * syy));
  }
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (omegas[i] == 0) continue;
    for (std::size_t g : {0u, 2u}) worst_agree = std::max(worst_agree, rel(shift[g][i], shift[1][i]));
  }
  const bool pass_a = worst_r2 > 0.99 && worst_agree <= 0.10;
  note(o, "(a) R^2 = %.6f (> 0.99), Gamma spread %.1f%% (<= 10%%), shift/Omega at Gamma=0: %.3f", worst_r2,
       100 * worst_agree, shift[1].back());

  std::vector<double> delays;
  for (int i = 1; i <= 60; ++i) delays.push_back(0.5 * i);
  double worst_indep = 0;
  bool ordered = true;
  std::vector<std::vector<FringeSummary>> by_gamma;
  for (double g : gammas) {
    const auto base = fringe_scan(0.0, g, delays);
    for (double w : {0.5, 1.0}) {
      const auto s = fringe_scan(w, g, delays);
      for (std::size_t i = 0; i < delays.size(); ++i) worst_indep = std::max(worst_indep, rel(s[i].slope, base[i].slope));
    }
    by_gamma.push_back(base);
  }
  for (std::size_t i = 0; i < delays.size(); ++i)
    ordered = ordered && by_gamma[0][i].slope > by_gamma[1][i].slope && by_gamma[1][i].slope > by_gamma[2][i].slope;

  std::vector<double> scan_delays;
  for (int i = 1; i <= 800; ++i) scan_delays.push_back(0.05 * i);
  double lo = INFINITY, hi = 0;
  for (int k = 0; k <= 19; ++k) {
    const double g = -0.9 + 0.1 * k;
    const double best = max_slope(1.0, g, scan_delays).best_slope;
    lo = std::min(lo, best);
    hi = std::max(hi, best);
  }
  const double ratio = hi / lo;
  const bool pass_b = worst_indep <= 0.02 && ordered && ratio >= 3 && ratio <= 7;
  note(o, "(b) slope vs Omega spread %.2e (<= 2%%), ordering %s, max-slope ratio %.3f in [3, 7]", worst_indep,
       ordered ? "holds" : "violated", ratio);
  o.pass = pass_a && pass_b;
  return o;
}

// time for the transverse length to reach 1/e
double one_over_e(double w, double g) {
  std::vector<double> t;
  for (int i = 1; i <= 20000; ++i) t.push_back(0.001 * i);
  const auto traj = evolve_symmetric(w, g, {1, 0, 0}, t);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (transverse(traj[i]) <= std::exp(-1.0)) return t[i];
  return INFINITY;
}

Outcome a11() {
  Outcome o;
  const auto plain = effective_shell(Geometry::chain(1000000, 0.792), {});
  const auto alt049 = effective_shell(Geometry::chain(1000000, 0.49), {kPi});
  const auto alt051 = effective_shell(Geometry::chain(1000000, 0.51), {kPi});
  const double t_plain = one_over_e(plain.omega_eff_rot, plain.gamma_eff_rot);
  const double t_ind = one_over_e(0, 0);
  const double t_alt049 = one_over_e(alt049.omega_eff_rot, alt049.gamma_eff_rot);
  const double t_alt051 = one_over_e(alt051.omega_eff_rot, alt051.gamma_eff_rot);
  const std::vector<double> t1{1.0};
  const double a_alt049 = transverse(evolve_symmetric(alt049.omega_eff_rot, alt049.gamma_eff_rot, {1, 0, 0}, t1)[0]);
  const double a_alt051 = transverse(evolve_symmetric(alt051.omega_eff_rot, alt051.gamma_eff_rot, {1, 0, 0}, t1)[0]);
  o.pass = t_plain > t_ind && t_ind > t_alt049 && a_alt049 < a_alt051;
  note(o, "1/e times: d=0.792 %.3f, independent %.3f, d=0.49 alternating %.3f, d=0.51 alternating %.3f", t_plain,
       t_ind, t_alt049, t_alt051);
  note(o, "rotated Gamma at d=0.49: %.5f, d=0.51: %.4f", alt049.gamma_eff_rot, alt051.gamma_eff_rot);
  note(o, "transverse at t=1: d=0.49 %.4f, d=0.51 %.4f", a_alt049, a_alt051);
  return o;
}

Outcome a12() {
  Outcome o;
  const auto chain = Geometry::chain(100000000, 0.613);
  const int default_threads = num_threads();
  auto t0 = std::chrono::steady_clock::now();
  const auto ref = effective_shell(chain, {0.3});
  const double t_chain = seconds_since(t0);
  bool identical = true;
  for (int n : {1, 2, 4, 8}) {
    set_num_threads(n);
    const auto v = effective_shell(chain, {0.3});
    identical = identical && std::memcmp(&v.omega_eff, &ref.omega_eff, sizeof(double)) == 0 &&
                std::memcmp(&v.gamma_eff, &ref.gamma_eff, sizeof(double)) == 0 &&
                std::memcmp(&v.omega_cos, &ref.omega_cos, sizeof(double)) == 0 &&
                std::memcmp(&v.gamma_cos, &ref.gamma_cos, sizeof(double)) == 0;
  }
  set_num_threads(default_threads);
  const auto grid = linspace(0.05, 3.0, 500);
  t0 = std::chrono::steady_clock::now();
  const auto sq = sweep_distance(Geometry::square(201, 201, 1.0), grid, {});
  const auto hx = sweep_distance(Geometry::hexagon_patch(115, 1.0), grid, {});
  const double t_sweep = seconds_since(t0);
  o.pass = t_chain < 10 && identical && t_sweep < 60 && sq.size() == 500 && hx.size() == 500;
  note(o, "1e8-partner chain %.2f s (< 10 s), bit-identical over 1/2/4/8 threads: %s", t_chain,
       identical ? "yes" : "no");
  note(o, "500-point square 40401 + hexagon 39961 sweeps %.2f s (< 60 s)", t_sweep);
  note(o, "timed with %d thread(s)", default_threads);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    std::string id;
    std::function<Outcome()> run;
    double time_limit;  // seconds, 0 = none
  };
  const std::vector<Criterion> suite{
      {"A1", a1, 1},   {"A2", a2, 30}, {"A3", a3, 10}, {"A4", a4, 120},  {"A5", a5, 0},   {"A6", a6, 0},
      {"A7", a7, 60},  {"A8", a8, 0},  {"A9", a9, 0},  {"A10", a10, 0}, {"A11", a11, 0}, {"A12", a12, 0},
  };
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--only A<n>]\n", argv[0]);
      return 2;
    }
  }
  int failed = 0, ran = 0;
  for (const auto& [id, fn, limit] : suite) {
    if (!only.empty() && id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(t0);
    if (limit > 0) {
      note(o, "runtime %.2f s (< %.0f s)", elapsed, limit);
      o.pass = o.pass && elapsed < limit;
    }
    std::printf("%s %s (%.2f s): %s\n", id.c_str(), o.pass ? "PASS" : "FAIL", elapsed, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
