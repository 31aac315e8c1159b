#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <optional>

#include "ddclock/errors.hpp"
#include "ddclock/geometry.hpp"
#include "ddclock/lattice_sums.hpp"
#include "ddclock/master_oracle.hpp"
#include "ddclock/meanfield.hpp"
#include "ddclock/ramsey.hpp"
#include "ddclock/summation.hpp"

namespace py = pybind11;
using namespace ddclock;

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

namespace {

Vec3 vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

std::vector<Vec3> points(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw py::value_error("positions must have shape (n, 3)");
  auto r = a.unchecked<2>();
  std::vector<Vec3> out;
  for (py::ssize_t i = 0; i < r.shape(0); ++i) out.push_back({r(i, 0), r(i, 1), r(i, 2)});
  return out;
}

Array from_points(const std::vector<Vec3>& v) {
  Array out({static_cast<py::ssize_t>(v.size()), py::ssize_t{3}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < v.size(); ++i) {
    w(i, 0) = v[i].x;
    w(i, 1) = v[i].y;
    w(i, 2) = v[i].z;
  }
  return out;
}

std::vector<double> list(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

BlochState bloch_state(const Array& a) {
  BlochState s;
  for (const auto& p : points(a)) s.push_back({p.x, p.y, p.z});
  return s;
}

Array from_bloch(const BlochState& s) {
  Array out({static_cast<py::ssize_t>(s.size()), py::ssize_t{3}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < s.size(); ++i) {
    w(i, 0) = s[i].x;
    w(i, 1) = s[i].y;
    w(i, 2) = s[i].z;
  }
  return out;
}

Array trajectory(const std::vector<BlochState>& traj) {
  const auto n = static_cast<py::ssize_t>(traj.empty() ? 0 : traj[0].size());
  Array out({static_cast<py::ssize_t>(traj.size()), n, py::ssize_t{3}});
  auto w = out.mutable_unchecked<3>();
  for (std::size_t t = 0; t < traj.size(); ++t)
    for (py::ssize_t k = 0; k < n; ++k) {
      w(t, k, 0) = traj[t][k].x;
      w(t, k, 1) = traj[t][k].y;
      w(t, k, 2) = traj[t][k].z;
    }
  return out;
}

IntegratorSpec spec(double rel_tol, double abs_tol) {
  IntegratorSpec s;
  s.rel_tol = rel_tol;
  s.abs_tol = abs_tol;
  return s;
}

SumPlan plan(const std::string& mode, std::optional<double> rel_tol) {
  SumPlan p;
  if (mode == "explicit") {
    p.mode = SumMode::explicit_sum;
  } else if (mode != "shell") {
    throw py::value_error("mode must be 'shell' or 'explicit'");
  }
  p.rel_tol = rel_tol;
  return p;
}

// column dictionary, one entry per CSV column of the sweep output
py::dict columns(const std::vector<SweepRow>& rows) {
  const auto n = static_cast<py::ssize_t>(rows.size());
  auto col = [&](auto get) {
    Array a(n);
    auto w = a.mutable_unchecked<1>();
    for (py::ssize_t i = 0; i < n; ++i) w(i) = get(rows[i]);
    return a;
  };
  py::dict d;
  d["d"] = col([](const SweepRow& r) { return r.d; });
  d["delta_phi"] = col([](const SweepRow& r) { return r.delta_phi; });
  d["omega_eff"] = col([](const SweepRow& r) { return r.values.omega_eff; });
  d["gamma_eff"] = col([](const SweepRow& r) { return r.values.gamma_eff; });
  d["omega_cos"] = col([](const SweepRow& r) { return r.values.omega_cos; });
  d["omega_sin"] = col([](const SweepRow& r) { return r.values.omega_sin; });
  d["gamma_cos"] = col([](const SweepRow& r) { return r.values.gamma_cos; });
  d["gamma_sin"] = col([](const SweepRow& r) { return r.values.gamma_sin; });
  d["omega_eff_rot"] = col([](const SweepRow& r) { return r.values.omega_eff_rot; });
  d["gamma_eff_rot"] = col([](const SweepRow& r) { return r.values.gamma_eff_rot; });
  d["n_terms"] = col([](const SweepRow& r) { return static_cast<double>(r.values.n_terms); });
  d["est_error"] = col([](const SweepRow& r) { return r.values.est_error; });
  std::vector<bool> div;
  for (const auto& r : rows) div.push_back(r.diverged);
  d["diverged"] = py::array(py::cast(div));
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Collective dipole-dipole couplings, mean-field and master-equation dynamics, Ramsey analysis";

  auto base = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  (void)base;

  m.def("set_num_threads", &set_num_threads, py::arg("n"));
  m.def("num_threads", &num_threads);

  // couplings
  m.def("f_function", &f_function, py::arg("xi"), py::arg("theta"));
  m.def("g_function", &g_function, py::arg("xi"), py::arg("theta"));
  m.def(
      "coupling_at",
      [](double r, double cos2) {
        const auto c = coupling_at(r, cos2);
        return py::make_tuple(c.omega, c.gamma);
      },
      py::arg("r"), py::arg("cos2"), "(omega, gamma) at separation r and cos^2(theta)");
  m.def(
      "pair_coupling",
      [](std::array<double, 3> a, std::array<double, 3> b, std::array<double, 3> e) {
        const auto c = pair_coupling(vec(a), vec(b), DipoleOrientation(vec(e)));
        return py::make_tuple(c.omega, c.gamma);
      },
      py::arg("r1"), py::arg("r2"), py::arg("polarization") = std::array<double, 3>{0, 0, 1});

  // geometry
  py::class_<Geometry>(m, "Geometry")
      .def_static("polygon", &Geometry::polygon, py::arg("n"), py::arg("d"))
      .def_static("chain", &Geometry::chain, py::arg("n"), py::arg("d"))
      .def_static("square", &Geometry::square, py::arg("nx"), py::arg("ny"), py::arg("d"))
      .def_static("hexagonal", &Geometry::hexagonal, py::arg("nx"), py::arg("ny"), py::arg("d"))
      .def_static("hexagon_patch", &Geometry::hexagon_patch, py::arg("rings"), py::arg("d"))
      .def_static("cubic", &Geometry::cubic, py::arg("nx"), py::arg("ny"), py::arg("nz"), py::arg("d"))
      .def_property_readonly("kind", [](const Geometry& g) { return std::string(to_string(g.kind)); })
      .def_readwrite("spacing", &Geometry::spacing)
      .def_readonly("counts", &Geometry::counts)
      .def_property(
          "polarization",
          [](const Geometry& g) {
            const Vec3& e = g.polarization.vector();
            return py::make_tuple(e.x, e.y, e.z);
          },
          [](Geometry& g, std::array<double, 3> e) { g.polarization = DipoleOrientation(vec(e)); })
      .def("with_spacing", &Geometry::with_spacing, py::arg("d"))
      .def("site_count", &Geometry::site_count)
      .def("positions", [](const Geometry& g) { return from_points(positions(g)); })
      .def("center_site", [](const Geometry& g) { return center_site(g); })
      .def(
          "site_phases",
          [](const Geometry& g, double dphi, std::array<double, 3> dir) {
            return py::array(py::cast(site_phases(g, {dphi, vec(dir)})));
          },
          py::arg("delta_phi"), py::arg("direction") = std::array<double, 3>{1, 0, 0})
      .def("__repr__", [](const Geometry& g) {
        std::string s = "Geometry(" + std::string(to_string(g.kind)) + ", counts=[";
        for (std::size_t i = 0; i < g.counts.size(); ++i) s += (i ? ", " : "") + std::to_string(g.counts[i]);
        return s + "], spacing=" + std::to_string(g.spacing) + ")";
      });

  // lattice sums
  py::class_<EffectiveCouplings>(m, "EffectiveCouplings")
      .def_readonly("omega_eff", &EffectiveCouplings::omega_eff)
      .def_readonly("gamma_eff", &EffectiveCouplings::gamma_eff)
      .def_readonly("omega_cos", &EffectiveCouplings::omega_cos)
      .def_readonly("omega_sin", &EffectiveCouplings::omega_sin)
      .def_readonly("gamma_cos", &EffectiveCouplings::gamma_cos)
      .def_readonly("gamma_sin", &EffectiveCouplings::gamma_sin)
      .def_readonly("omega_eff_rot", &EffectiveCouplings::omega_eff_rot)
      .def_readonly("gamma_eff_rot", &EffectiveCouplings::gamma_eff_rot)
      .def_readonly("n_terms", &EffectiveCouplings::n_terms)
      .def_readonly("est_error", &EffectiveCouplings::est_error)
      .def("__repr__", [](const EffectiveCouplings& v) {
        return "EffectiveCouplings(omega_eff=" + std::to_string(v.omega_eff) +
               ", gamma_eff=" + std::to_string(v.gamma_eff) + ", n_terms=" + std::to_string(v.n_terms) + ")";
      });

  m.def(
      "effective_shell",
      [](const Geometry& g, double dphi, std::array<double, 3> dir, const std::string& mode,
         std::optional<double> rel_tol) {
        py::gil_scoped_release unlock;
        return effective_shell(g, {dphi, vec(dir)}, plan(mode, rel_tol));
      },
      py::arg("geometry"), py::arg("delta_phi") = 0.0, py::arg("direction") = std::array<double, 3>{1, 0, 0},
      py::arg("mode") = "shell", py::arg("rel_tol") = std::nullopt);
  m.def(
      "effective_explicit",
      [](const Array& pos, std::array<double, 3> e, std::optional<Array> phases) {
        const auto p = points(pos);
        const auto ph = phases ? list(*phases) : std::vector<double>{};
        py::gil_scoped_release unlock;
        return effective_explicit(p, DipoleOrientation(vec(e)), ph);
      },
      py::arg("positions"), py::arg("polarization") = std::array<double, 3>{0, 0, 1},
      py::arg("phases") = std::nullopt);
  m.def(
      "sweep_distance",
      [](const Geometry& g, const Array& grid, double dphi, std::array<double, 3> dir, const std::string& mode,
         std::optional<double> rel_tol) {
        const auto d = list(grid);
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release unlock;
          rows = sweep_distance(g, d, {dphi, vec(dir)}, plan(mode, rel_tol));
        }
        return columns(rows);
      },
      py::arg("geometry"), py::arg("d_grid"), py::arg("delta_phi") = 0.0,
      py::arg("direction") = std::array<double, 3>{1, 0, 0}, py::arg("mode") = "shell",
      py::arg("rel_tol") = std::nullopt);
  m.def(
      "sweep_phase_map",
      [](const Geometry& g, const Array& d_grid, const Array& phi_grid) {
        const auto d = list(d_grid), phi = list(phi_grid);
        PhaseMap map;
        {
          py::gil_scoped_release unlock;
          map = sweep_phase_map(g, d, phi);
        }
        py::dict out = columns(map.rows);
        Array zero({static_cast<py::ssize_t>(map.zero_contour.size()), py::ssize_t{2}});
        auto w = zero.mutable_unchecked<2>();
        for (std::size_t i = 0; i < map.zero_contour.size(); ++i) {
          w(i, 0) = map.zero_contour[i].first;
          w(i, 1) = map.zero_contour[i].second;
        }
        out["zero_contour"] = zero;
        return out;
      },
      py::arg("chain"), py::arg("d_grid"), py::arg("delta_phi_grid"));
  m.def(
      "cubic_innermost",
      [](std::int64_t side, const Array& grid, std::array<double, 3> e) {
        const auto d = list(grid);
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release unlock;
          rows = cubic_innermost(side, d, DipoleOrientation(vec(e)));
        }
        return columns(rows);
      },
      py::arg("side"), py::arg("d_grid"), py::arg("polarization") = std::array<double, 3>{0, 0, 1});
  m.def("near_integer_spacing", &near_integer_spacing, py::arg("d"));

  // mean field
  m.def(
      "evolve_symmetric",
      [](double w, double g, std::array<double, 3> init, const Array& times, double rel_tol, double abs_tol) {
        const auto t = list(times);
        const auto traj = evolve_symmetric(w, g, {init[0], init[1], init[2]}, t, spec(rel_tol, abs_tol));
        return from_bloch(traj);
      },
      py::arg("omega_eff"), py::arg("gamma_eff"), py::arg("init") = std::array<double, 3>{1, 0, 0},
      py::arg("times"), py::arg("rel_tol") = 1e-8, py::arg("abs_tol") = 1e-10,
      "Trajectory of shape (len(times), 3)");
  m.def(
      "evolve_general",
      [](const Array& pos, std::array<double, 3> e, const Array& init, const Array& times, double rel_tol,
         double abs_tol) {
        const auto p = points(pos);
        const auto s0 = bloch_state(init);
        const auto t = list(times);
        std::vector<BlochState> traj;
        {
          py::gil_scoped_release unlock;
          traj = evolve_general(p, DipoleOrientation(vec(e)), s0, t, spec(rel_tol, abs_tol));
        }
        return trajectory(traj);
      },
      py::arg("positions"), py::arg("polarization"), py::arg("init"), py::arg("times"), py::arg("rel_tol") = 1e-8,
      py::arg("abs_tol") = 1e-10, "Trajectories of shape (len(times), n, 3)");
  m.def(
      "ramsey_init", [](const Array& phases) { return from_bloch(ramsey_init(list(phases))); }, py::arg("phases"));

  // master equation
  m.def(
      "evolve_exact",
      [](const Array& pos, std::array<double, 3> e, const Array& init, const Array& times, bool return_rho,
         double rel_tol, double abs_tol) {
        const auto p = points(pos);
        const auto s0 = bloch_state(init);
        const auto t = list(times);
        std::vector<DensityMatrix> out;
        {
          py::gil_scoped_release unlock;
          out = evolve_exact(DensityMatrix::product(s0), build_generators(p, DipoleOrientation(vec(e))), t,
                             spec(rel_tol, abs_tol));
        }
        std::vector<BlochState> ex;
        for (const auto& r : out) ex.push_back(expectations(r));
        py::dict d;
        d["expectations"] = trajectory(ex);
        if (return_rho) {
          const auto dim = static_cast<py::ssize_t>(out.empty() ? 0 : out[0].dim());
          py::array_t<std::complex<double>> rho({static_cast<py::ssize_t>(out.size()), dim, dim});
          auto w = rho.mutable_unchecked<3>();
          for (std::size_t k = 0; k < out.size(); ++k)
            for (py::ssize_t a = 0; a < dim; ++a)
              for (py::ssize_t b = 0; b < dim; ++b) w(k, a, b) = out[k](a, b);
          d["rho"] = rho;
        }
        return d;
      },
      py::arg("positions"), py::arg("polarization"), py::arg("init"), py::arg("times"), py::arg("return_rho") = false,
      py::arg("rel_tol") = 1e-8, py::arg("abs_tol") = 1e-10,
      "Exact evolution from a product state; expectations of shape (len(times), n, 3)");
  m.attr("MAX_ORACLE_ATOMS") = kMaxOracleAtoms;

  // ramsey
  m.def(
      "ramsey_signal",
      [](double w, double g, const Array& det, const Array& delays) {
        RamseyConfig cfg{w, g, list(det), list(delays), {}};
        const auto r = ramsey_signal(cfg);
        Array sig({static_cast<py::ssize_t>(cfg.delays.size()), static_cast<py::ssize_t>(cfg.detunings.size())});
        std::copy(r.signal.begin(), r.signal.end(), sig.mutable_data());
        return sig;
      },
      py::arg("omega_eff"), py::arg("gamma_eff"), py::arg("detunings"), py::arg("delays"),
      "Signal of shape (len(delays), len(detunings))");
  m.def(
      "fringe_shift", [](const Array& det, const Array& sig) { return fringe_shift(list(det), list(sig)); },
      py::arg("detunings"), py::arg("signal"));
  m.def(
      "zero_crossing_slope",
      [](const Array& det, const Array& sig) { return zero_crossing_slope(list(det), list(sig)); },
      py::arg("detunings"), py::arg("signal"));
  m.def(
      "fringe_scan",
      [](double w, double g, const Array& delays, std::size_t ppf) {
        const auto t = list(delays);
        std::vector<FringeSummary> s;
        {
          py::gil_scoped_release unlock;
          s = fringe_scan(w, g, t, {}, ppf);
        }
        Array out({static_cast<py::ssize_t>(s.size()), py::ssize_t{2}});
        auto o = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < s.size(); ++i) {
          o(i, 0) = s[i].shift;
          o(i, 1) = s[i].slope;
        }
        return out;
      },
      py::arg("omega_eff"), py::arg("gamma_eff"), py::arg("delays"), py::arg("points_per_fringe") = 256,
      "Columns (shift, slope) per delay");
  m.def(
      "max_slope",
      [](double w, double g, const Array& delays, std::size_t ppf) {
        const auto r = max_slope(w, g, list(delays), {}, ppf);
        return py::make_tuple(r.best_delay, r.best_slope);
      },
      py::arg("omega_eff"), py::arg("gamma_eff"), py::arg("delays"), py::arg("points_per_fringe") = 256,
      "(best delay, best slope)");
}
