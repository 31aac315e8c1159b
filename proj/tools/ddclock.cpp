// ddclock command line driver.
//
//   ddclock couplings --config run.ini --out sweep.csv
//   ddclock dynamics --preset decay-chain-0792 --out chain.csv
//
// Exit codes: 0 ok, 2 configuration or domain error, 3 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "config.hpp"
#include "ddclock/errors.hpp"
#include "ddclock/geometry.hpp"
#include "ddclock/lattice_sums.hpp"
#include "ddclock/master_oracle.hpp"
#include "ddclock/meanfield.hpp"
#include "ddclock/ramsey.hpp"
#include "ddclock/summation.hpp"

#ifndef DDCLOCK_VERSION
#define DDCLOCK_VERSION "0.0.0"
#endif
#ifndef DDCLOCK_PRESET_DIR
#define DDCLOCK_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;
using namespace ddclock;
using cli::Config;

namespace {

// One output file: suffix "" is the main CSV, otherwise it is appended to the
// stem of --out ("run.csv" + "summary.csv" -> "run_summary.csv").
struct OutputFile {
  std::string suffix;
  std::string content;
  bool binary = false;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::string header_block) : out_(std::move(header_block)) {}
  Csv& columns(std::initializer_list<const char*> names) { return columns(std::span(names.begin(), names.size())); }
  Csv& columns(std::span<const char* const> names) {
    bool first = true;
    for (const char* n : names) {
      if (!first) out_ += ',';
      out_ += n;
      first = false;
    }
    out_ += '\n';
    return *this;
  }
  template <class... T>
  void row(const T&... v) {
    bool first = true;
    ((out_ += (first ? "" : ","), out_ += cell(v), first = false), ...);
    out_ += '\n';
  }
  std::string str() && { return std::move(out_); }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(long long v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  std::string out_;
};

struct Run {
  std::string command;
  const Config* cfg = nullptr;
  std::vector<std::string> meta;  // extra "# key: value" lines

  std::string header() const {
    std::string h = "# ddclock " DDCLOCK_VERSION " " + command + "\n";
    h += "# units: rates in gamma, distances in lambda0, times in 1/gamma\n";
    h += "# conventions: sigma+ = |e><g|; sx = <sigma+ + sigma->; sy = <-i sigma+ + i sigma->; "
         "sz = P_e - P_g; phase phi -> (cos phi, -sin phi, 0)\n";
    for (const auto& m : meta) h += "# " + m + "\n";
    h += "# config: " + cfg->origin() + "\n";
    for (const auto& line : cfg->echo()) h += "#   " + line + "\n";
    return h;
  }
};

const std::set<std::string> kGeometryKeys{"kind", "counts", "rings", "spacing", "polarization"};
const std::set<std::string> kPhaseKeys{"delta_phi", "direction"};

std::set<std::string> with_grid(std::set<std::string> keys, std::initializer_list<const char*> grids) {
  for (const char* g : grids) {
    keys.insert(g);
    keys.insert(std::string(g) + "_min");
    keys.insert(std::string(g) + "_max");
    keys.insert(std::string(g) + "_points");
  }
  return keys;
}

Geometry read_geometry(const Config& c, bool need_spacing) {
  Geometry g;
  g.kind = lattice_kind_from_string(c.text("geometry", "kind"));
  if (g.kind == LatticeKind::hexagonal && c.has("geometry", "rings")) {
    if (c.has("geometry", "counts")) throw ConfigError("[geometry] give either rings or counts");
    g.counts = {c.integer("geometry", "rings")};
  } else {
    if (c.has("geometry", "rings")) throw ConfigError("[geometry] rings applies to hexagonal lattices only");
    const auto counts = c.integers("geometry", "counts");
    g.counts.assign(counts.begin(), counts.end());
  }
  g.spacing = need_spacing ? c.number("geometry", "spacing") : c.number("geometry", "spacing", 1.0);
  if (c.has("geometry", "polarization")) {
    const auto p = c.triple("geometry", "polarization");
    g.polarization = DipoleOrientation(Vec3{p[0], p[1], p[2]});
  }
  g.validate();
  return g;
}

PhaseProfile read_phase(const Config& c) {
  PhaseProfile p;
  p.delta_phi = c.number("phase", "delta_phi", 0.0);
  if (c.has("phase", "direction")) {
    const auto d = c.triple("phase", "direction");
    p.direction = Vec3{d[0], d[1], d[2]};
  }
  return p;
}

IntegratorSpec read_integrator(const Config& c, const std::string& section) {
  IntegratorSpec s;
  s.rel_tol = c.number(section, "rel_tol", s.rel_tol);
  s.abs_tol = c.number(section, "abs_tol", s.abs_tol);
  check_spec(s);
  return s;
}

std::string describe(const Geometry& g) {
  std::string s = std::string(to_string(g.kind)) + " counts";
  for (auto n : g.counts) s += " " + std::to_string(n);
  if (g.is_hexagon_patch()) s += " (rings)";
  const Vec3& e = g.polarization.vector();
  s += "; polarization " + fmt(e.x) + "," + fmt(e.y) + "," + fmt(e.z);
  return s;
}

// couplings ------------------------------------------------------------------

const char* const kSweepColumns[] = {"d", "delta_phi", "omega_eff", "gamma_eff", "omega_cos", "omega_sin", "gamma_cos",
                                     "gamma_sin", "omega_eff_rot", "gamma_eff_rot", "n_terms", "est_error", "diverged"};

void sweep_rows(Csv& csv, const std::vector<SweepRow>& rows) {
  for (const auto& r : rows) {
    const auto& v = r.values;
    csv.row(r.d, r.delta_phi, v.omega_eff, v.gamma_eff, v.omega_cos, v.omega_sin, v.gamma_cos, v.gamma_sin,
            v.omega_eff_rot, v.gamma_eff_rot, static_cast<long long>(v.n_terms), v.est_error, r.diverged);
  }
}

Csv sweep_csv(const Run& run) {
  Csv csv(run.header());
  csv.columns(kSweepColumns);
  return csv;
}

std::vector<OutputFile> cmd_couplings(Run& run) {
  const Config& c = *run.cfg;
  c.restrict_to({{"geometry", kGeometryKeys},
                 {"phase", kPhaseKeys},
                 {"sweep", with_grid({"mode", "summation", "rel_tol"}, {"d", "delta_phi"})}});
  const Geometry g = read_geometry(c, false);
  const std::string mode = c.text("sweep", "mode", "distance");
  SumPlan plan;
  const std::string summation = c.text("sweep", "summation", "shell");
  if (summation == "explicit") {
    plan.mode = SumMode::explicit_sum;
  } else if (summation != "shell") {
    throw ConfigError("[sweep] summation must be shell or explicit");
  }
  if (c.has("sweep", "rel_tol")) plan.rel_tol = c.number("sweep", "rel_tol");
  const auto d = c.grid("sweep", "d");
  run.meta.push_back("geometry: " + describe(g));
  run.meta.push_back("summation: " + summation + (plan.rel_tol ? " rel_tol " + fmt(*plan.rel_tol) : ""));

  if (mode == "distance") {
    if (c.has_section("sweep") && (c.has("sweep", "delta_phi") || c.has("sweep", "delta_phi_points"))) {
      throw ConfigError("[sweep] delta_phi grids belong to mode = phase_map");
    }
    const PhaseProfile p = read_phase(c);
    run.meta.push_back("mode: distance sweep");
    const auto rows = sweep_distance(g, d, p, plan);
    Csv csv = sweep_csv(run);
    sweep_rows(csv, rows);
    return {{"", std::move(csv).str()}};
  }
  if (mode == "phase_map") {
    if (g.kind != LatticeKind::chain) throw ConfigError("phase_map needs a chain geometry");
    if (c.has("phase", "delta_phi")) throw ConfigError("phase_map takes its phases from [sweep] delta_phi");
    const auto phis = c.grid("sweep", "delta_phi");
    run.meta.push_back("mode: phase map, rows ordered by delta_phi then d");
    const auto map = sweep_phase_map(g, d, phis, plan);
    Csv csv = sweep_csv(run);
    sweep_rows(csv, map.rows);
    Run zrun = run;
    zrun.meta.push_back("zero contour of omega_eff_rot along d (linear interpolation)");
    Csv zero(zrun.header());
    zero.columns({"d", "delta_phi"});
    for (const auto& [zd, zphi] : map.zero_contour) zero.row(zd, zphi);
    return {{"", std::move(csv).str()}, {"zero_contour.csv", std::move(zero).str()}};
  }
  if (mode == "cubic_innermost") {
    if (g.kind != LatticeKind::cubic || g.counts[0] != g.counts[1] || g.counts[1] != g.counts[2]) {
      throw ConfigError("cubic_innermost needs a cubic geometry with equal counts");
    }
    if (c.has_section("phase")) throw ConfigError("cubic_innermost takes no [phase] section");
    run.meta.push_back("mode: innermost site of a cube");
    const auto rows = cubic_innermost(g.counts[0], d, g.polarization, plan);
    Csv csv = sweep_csv(run);
    sweep_rows(csv, rows);
    return {{"", std::move(csv).str()}};
  }
  throw ConfigError("[sweep] mode must be distance, phase_map or cubic_innermost");
}

// dynamics -------------------------------------------------------------------

Bloch read_init(const std::string& init) {
  if (init == "ramsey") return {1, 0, 0};
  if (init == "ground") return {0, 0, -1};
  if (init == "excited") return {0, 0, 1};
  std::vector<double> v;
  std::stringstream in(init);
  std::string item;
  while (std::getline(in, item, ',')) v.push_back(cli::parse_number(item));
  if (v.size() != 3) throw ConfigError("init must be ramsey, ground, excited or x, y, z");
  return {v[0], v[1], v[2]};
}

EffectiveCouplings geometry_couplings(const Geometry& g, const PhaseProfile& p) {
  if (g.kind == LatticeKind::polygon) {
    const auto pos = positions(g);
    return effective_for_site(pos, g.polarization, site_phases(g, p), 0);
  }
  return effective_shell(g, p);
}

std::vector<OutputFile> cmd_dynamics(Run& run) {
  const Config& c = *run.cfg;
  c.restrict_to({{"geometry", kGeometryKeys},
                 {"phase", kPhaseKeys},
                 {"dynamics", with_grid({"mode", "couplings", "omega_eff", "gamma_eff", "init", "rel_tol", "abs_tol"},
                                        {"t"})}});
  const std::string mode = c.text("dynamics", "mode", "symmetric");
  const auto times = c.grid("dynamics", "t");
  const IntegratorSpec spec = read_integrator(c, "dynamics");
  const std::string init = c.text("dynamics", "init", "ramsey");
  run.meta.push_back("integrator: dopri5 rel_tol " + fmt(spec.rel_tol) + " abs_tol " + fmt(spec.abs_tol));
  run.meta.push_back("init: " + init);

  if (mode == "symmetric") {
    const std::string source = c.text("dynamics", "couplings", "geometry");
    double w = 0, gm = 0;
    if (source == "manual") {
      if (c.has_section("geometry") || c.has_section("phase")) {
        throw ConfigError("couplings = manual takes no [geometry] or [phase] section");
      }
      w = c.number("dynamics", "omega_eff");
      gm = c.number("dynamics", "gamma_eff");
    } else if (source == "geometry") {
      if (c.has("dynamics", "omega_eff") || c.has("dynamics", "gamma_eff")) {
        throw ConfigError("omega_eff / gamma_eff need couplings = manual");
      }
      const Geometry g = read_geometry(c, true);
      const PhaseProfile p = read_phase(c);
      const auto eff = geometry_couplings(g, p);
      w = eff.omega_eff_rot;
      gm = eff.gamma_eff_rot;
      run.meta.push_back("geometry: " + describe(g) + "; spacing " + fmt(g.spacing) + "; delta_phi " +
                         fmt(p.delta_phi));
    } else {
      throw ConfigError("[dynamics] couplings must be geometry or manual");
    }
    run.meta.push_back("mode: symmetric, omega_eff_rot " + fmt(w) + ", gamma_eff_rot " + fmt(gm));
    const auto traj = evolve_symmetric(w, gm, read_init(init), times, spec);
    Csv csv(run.header());
    csv.columns({"t", "atom_index", "sx", "sy", "sz"});
    for (std::size_t i = 0; i < times.size(); ++i) csv.row(times[i], -1, traj[i].x, traj[i].y, traj[i].z);
    return {{"", std::move(csv).str()}};
  }
  if (mode == "general") {
    if (c.has("dynamics", "couplings") || c.has("dynamics", "omega_eff") || c.has("dynamics", "gamma_eff")) {
      throw ConfigError("mode = general computes every pair coupling from [geometry]");
    }
    const Geometry g = read_geometry(c, true);
    const PhaseProfile p = read_phase(c);
    const auto pos = positions(g);
    if (pos.size() > kMaxMeanFieldAtoms) throw CapacityError("mode = general is limited to 10^4 atoms");
    const auto phases = site_phases(g, p);
    BlochState s0 = init == "ramsey" ? ramsey_init(phases) : BlochState(pos.size(), read_init(init));
    run.meta.push_back("mode: general, " + std::to_string(pos.size()) + " atoms; geometry: " + describe(g) +
                       "; spacing " + fmt(g.spacing) + "; delta_phi " + fmt(p.delta_phi));
    const auto traj = evolve_general(pos, g.polarization, s0, times, spec);
    Csv csv(run.header());
    csv.columns({"t", "atom_index", "sx", "sy", "sz"});
    for (std::size_t i = 0; i < times.size(); ++i)
      for (std::size_t k = 0; k < pos.size(); ++k) csv.row(times[i], k, traj[i][k].x, traj[i][k].y, traj[i][k].z);
    return {{"", std::move(csv).str()}};
  }
  throw ConfigError("[dynamics] mode must be symmetric or general");
}

// ramsey ---------------------------------------------------------------------

std::vector<OutputFile> cmd_ramsey(Run& run) {
  const Config& c = *run.cfg;
  c.restrict_to({{"ramsey", with_grid({"mode", "points_per_fringe", "rel_tol", "abs_tol"},
                                      {"omega_eff", "gamma_eff", "detuning", "delay"})}});
  const std::string mode = c.text("ramsey", "mode", "signal");
  const IntegratorSpec spec = read_integrator(c, "ramsey");
  const long long ppf = c.integer("ramsey", "points_per_fringe", 256);
  if (ppf < 8) throw ConfigError("[ramsey] points_per_fringe must be >= 8");
  const auto omegas = c.grid("ramsey", "omega_eff");
  const auto gammas = c.grid("ramsey", "gamma_eff");
  const auto delays = c.grid("ramsey", "delay");
  run.meta.push_back("sequence: pi/2 about y maps (x,y,z) -> (-z,y,x); signal = sz after the second pulse");
  run.meta.push_back("shift > 0: central maximum at positive detuning; slope at the first root above it");
  auto summary_header = [&](Run r) {
    Csv s(r.header());
    s.columns({"omega_eff", "gamma_eff", "T", "shift", "slope"});
    return s;
  };
  auto add_summary = [&](Csv& s, double w, double g, std::span<const double> T) {
    for (const auto& f : fringe_scan(w, g, T, spec, static_cast<std::size_t>(ppf)))
      s.row(f.omega_eff, f.gamma_eff, f.delay, f.shift, f.slope);
  };

  if (mode == "signal") {
    if (omegas.size() != gammas.size()) {
      throw ConfigError("[ramsey] signal mode pairs omega_eff and gamma_eff entry by entry; lengths differ");
    }
    const auto det = c.grid("ramsey", "detuning");
    run.meta.push_back("mode: signal for " + std::to_string(omegas.size()) + " coupling pair(s)");
    Csv csv(run.header());
    csv.columns({"omega_eff", "gamma_eff", "T", "delta", "signal"});
    std::vector<double> positive;
    for (double t : delays)
      if (t > 0) positive.push_back(t);
    Run srun = run;
    srun.meta.push_back("summary on fringe-resolving grids of " + std::to_string(ppf) + " points per fringe");
    Csv sum = summary_header(srun);
    for (std::size_t k = 0; k < omegas.size(); ++k) {
      RamseyConfig rc{omegas[k], gammas[k], det, delays, spec};
      const auto r = ramsey_signal(rc);
      for (std::size_t i = 0; i < delays.size(); ++i) {
        const auto row = r.signal_row(i);
        for (std::size_t j = 0; j < det.size(); ++j) csv.row(omegas[k], gammas[k], delays[i], det[j], row[j]);
      }
      if (!positive.empty()) add_summary(sum, omegas[k], gammas[k], positive);
    }
    return {{"", std::move(csv).str()}, {"summary.csv", std::move(sum).str()}};
  }
  if (c.has("ramsey", "detuning") || c.has("ramsey", "detuning_points")) {
    throw ConfigError("[ramsey] detuning grids apply to mode = signal only");
  }
  if (mode == "shift_scan") {
    run.meta.push_back("mode: shift and slope over omega_eff x gamma_eff x T");
    Csv sum = summary_header(run);
    for (double g : gammas)
      for (double w : omegas) add_summary(sum, w, g, delays);
    return {{"", std::move(sum).str()}};
  }
  if (mode == "max_slope") {
    run.meta.push_back("mode: largest zero-crossing slope over the delay grid");
    Csv csv(run.header());
    csv.columns({"omega_eff", "gamma_eff", "best_T", "best_slope"});
    for (double w : omegas)
      for (double g : gammas) {
        const auto m = max_slope(w, g, delays, spec, static_cast<std::size_t>(ppf));
        csv.row(m.omega_eff, m.gamma_eff, m.best_delay, m.best_slope);
      }
    return {{"", std::move(csv).str()}};
  }
  throw ConfigError("[ramsey] mode must be signal, shift_scan or max_slope");
}

// oracle ---------------------------------------------------------------------

std::vector<OutputFile> cmd_oracle(Run& run) {
  const Config& c = *run.cfg;
  c.restrict_to({{"geometry", kGeometryKeys},
                 {"phase", kPhaseKeys},
                 {"oracle", with_grid({"init", "dump", "rel_tol", "abs_tol"}, {"t"})}});
  const Geometry g = read_geometry(c, true);
  const PhaseProfile p = read_phase(c);
  if (g.site_count() > kMaxOracleAtoms) {
    throw CapacityError("the oracle is limited to " + std::to_string(kMaxOracleAtoms) + " atoms, geometry has " +
                        std::to_string(g.site_count()));
  }
  const auto pos = positions(g);
  const auto times = c.grid("oracle", "t");
  const IntegratorSpec spec = read_integrator(c, "oracle");
  const std::string init = c.text("oracle", "init", "ramsey");
  const bool dump = c.flag("oracle", "dump", false);
  const BlochState s0 = init == "ramsey" ? ramsey_init(site_phases(g, p)) : BlochState(pos.size(), read_init(init));
  run.meta.push_back("geometry: " + describe(g) + "; spacing " + fmt(g.spacing) + "; delta_phi " + fmt(p.delta_phi));
  run.meta.push_back("init: " + init + " (product state)");
  run.meta.push_back("max_dev = largest |oracle - mean field| over sx, sy, sz of that atom");

  const auto gen = build_generators(pos, g.polarization);
  const auto exact = evolve_exact(DensityMatrix::product(s0), gen, times, spec);
  const auto mf = evolve_general(pos, g.polarization, s0, times, spec);
  Csv csv(run.header());
  csv.columns({"t", "atom_index", "oracle_sx", "oracle_sy", "oracle_sz", "mf_sx", "mf_sy", "mf_sz", "max_dev"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto ex = expectations(exact[i]);
    for (std::size_t k = 0; k < pos.size(); ++k) {
      const Bloch& a = ex[k];
      const Bloch& b = mf[i][k];
      const double dev = std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
      csv.row(times[i], k, a.x, a.y, a.z, b.x, b.y, b.z, dev);
    }
  }
  std::vector<OutputFile> files{{"", std::move(csv).str()}};
  if (dump) {
    std::ostringstream bin;
    write_rho_dump(bin, times, exact);
    files.push_back({"rho.bin", bin.str(), true});
  }
  return files;
}

// driver ---------------------------------------------------------------------

std::string preset_path(const std::string& name) {
  if (name.empty() || name.find('/') != std::string::npos || name.find("..") != std::string::npos) {
    throw ConfigError("invalid preset name '" + name + "'");
  }
  const char* env = std::getenv("DDCLOCK_PRESET_DIR");
  const fs::path dir = env && *env ? fs::path(env) : fs::path(DDCLOCK_PRESET_DIR);
  const fs::path p = dir / (name + ".ini");
  if (!fs::exists(p)) throw ConfigError("unknown preset '" + name + "' (looked in " + dir.string() + ")");
  return p.string();
}

std::string side_path(const std::string& out, const std::string& suffix) {
  fs::path p(out);
  const std::string stem = p.extension() == ".csv" ? p.stem().string() : p.filename().string();
  return (p.parent_path() / (stem + "_" + suffix)).string();
}

void write_outputs(const std::string& out, const std::vector<OutputFile>& files) {
  if (out == "-") {
    if (files.size() > 1) throw ConfigError("this run writes several files; pass --out PATH");
    std::cout << files.front().content;
    std::cout.flush();
    return;
  }
  for (const auto& f : files) {
    const std::string path = f.suffix.empty() ? out : side_path(out, f.suffix);
    std::ofstream os(path, f.binary ? std::ios::binary : std::ios::out);
    if (!os) throw ConfigError("cannot write '" + path + "'");
    os << f.content;
    if (!os) throw ConfigError("failed writing '" + path + "'");
  }
}

struct Options {
  std::string config;
  std::string preset;
  std::string out = "-";
  int threads = 0;
};

void add_options(CLI::App* sub, Options& o) {
  auto* cfg = sub->add_option("--config", o.config, "INI run configuration");
  auto* pre = sub->add_option("--preset", o.preset, "named configuration shipped in presets/");
  cfg->excludes(pre);
  pre->excludes(cfg);
  sub->add_option("--out", o.out, "output CSV path ('-' = stdout)");
  sub->add_option("--threads", o.threads, "worker threads (0 = default)")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective dipole-dipole effects in atomic lattice clocks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DDCLOCK_VERSION);
  Options opt;
  using Handler = std::vector<OutputFile> (*)(Run&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands{
      {"couplings", "effective couplings versus spacing, phase maps, cube interiors", cmd_couplings},
      {"dynamics", "mean-field Bloch vector trajectories", cmd_dynamics},
      {"ramsey", "Ramsey fringes, shifts and slopes", cmd_ramsey},
      {"oracle", "exact master equation next to mean field (up to 8 atoms)", cmd_oracle},
  };
  for (const auto& [name, help, fn] : commands) add_options(app.add_subcommand(name, help), opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto* sub = app.get_subcommands().front();
    Handler handler = nullptr;
    for (const auto& [name, help, fn] : commands)
      if (name == sub->get_name()) handler = fn;
    if (opt.config.empty() && opt.preset.empty()) throw ConfigError("pass --config PATH or --preset NAME");
    const Config cfg = opt.config.empty() ? Config::from_file(preset_path(opt.preset)) : Config::from_file(opt.config);
    set_num_threads(opt.threads);
    Run run{sub->get_name(), &cfg, {}};
    const auto files = handler(run);
    write_outputs(opt.out, files);
  } catch (const ConfigError& e) {
    std::cerr << "ddclock: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "ddclock: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "ddclock: size limit: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "ddclock: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "ddclock: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
