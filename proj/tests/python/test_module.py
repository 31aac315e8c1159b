import math

import numpy as np
import pytest

import ddclock as dd


def test_pair_values():
    om, ga = dd.pair_coupling((0, 0, 0), (1, 0, 0))
    assert om == pytest.approx(-0.75 * (1 / (2 * math.pi) - 1 / (8 * math.pi**3)), rel=1e-12)
    assert ga == pytest.approx(1.5 / (4 * math.pi**2), rel=1e-12)
    assert dd.f_function(1e-4, 0.3) == pytest.approx(2 / 3, abs=1e-8)


def test_geometry_roundtrip():
    g = dd.Geometry.hexagon_patch(3, 0.5)
    assert g.kind == "hexagonal"
    assert g.site_count() == 37
    pos = g.positions()
    assert pos.shape == (37, 3)
    assert np.allclose(pos[g.center_site()], 0)
    g.polarization = (1, 0, 0)
    assert g.polarization == (1.0, 0.0, 0.0)


def test_shell_matches_explicit():
    g = dd.Geometry.square(21, 21, 0.63)
    shell = dd.effective_shell(g)
    expl = dd.effective_explicit(g.positions())[g.center_site()]
    assert shell.omega_eff == pytest.approx(expl.omega_eff, rel=1e-12)
    assert shell.gamma_eff == pytest.approx(expl.gamma_eff, rel=1e-12)
    assert shell.n_terms == 440


def test_sweep_columns():
    cols = dd.sweep_distance(dd.Geometry.chain(1001, 1.0), np.array([0.5, 1.0]), delta_phi=0.3)
    assert set(cols) >= {"d", "omega_eff_rot", "gamma_eff_rot", "diverged"}
    assert cols["diverged"].tolist() == [False, True]
    assert cols["d"][1] == pytest.approx(1 + 1e-6, abs=1e-15)
    pm = dd.sweep_phase_map(dd.Geometry.chain(2001, 1.0), np.linspace(0.3, 1.2, 19), np.array([0.0, 1.0]))
    assert pm["d"].shape == (38,)
    assert pm["zero_contour"].shape[1] == 2


def test_mean_field_and_oracle():
    t = np.array([0.5, 1.0])
    traj = dd.evolve_symmetric(0.0, 0.0, times=t)
    assert traj[1] == pytest.approx([math.exp(-0.5), 0, math.exp(-1) - 1], abs=1e-8)
    pos = dd.Geometry.polygon(2, 0.8).positions()
    init = dd.ramsey_init(np.zeros(2))
    mf = dd.evolve_general(pos, (0, 0, 1), init, t)
    ex = dd.evolve_exact(pos, (0, 0, 1), init, t, return_rho=True)
    assert mf.shape == ex["expectations"].shape == (2, 2, 3)
    assert ex["rho"].shape == (2, 4, 4)
    assert np.trace(ex["rho"][1]).real == pytest.approx(1, abs=1e-9)
    pe = (1 + ex["expectations"][:, :, 2]) / 2
    pm = (1 + mf[:, :, 2]) / 2
    assert np.all(np.abs(pe - pm) < 0.05 * pe)


def test_ramsey():
    det = np.linspace(-4, 4, 81)
    sig = dd.ramsey_signal(0.0, 0.0, det, np.array([1.0, 2.0]))
    assert sig.shape == (2, 81)
    assert sig[0, 40] == pytest.approx(math.exp(-0.5), abs=1e-8)
    best_t, best = dd.max_slope(0.0, 0.0, np.arange(1, 61) / 20)
    assert best_t == 2.0
    assert best == pytest.approx(2 / math.e, abs=1e-4)
    scan = dd.fringe_scan(1.0, 0.0, np.array([15.0]))
    assert scan.shape == (1, 2)
    assert scan[0, 0] < 0


def test_errors_map_to_python():
    with pytest.raises(dd.CapacityError):
        dd.evolve_exact(np.random.default_rng(0).random((9, 3)), (0, 0, 1), np.zeros((9, 3)), np.array([1.0]))
    with pytest.raises(ValueError):
        dd.sweep_distance(dd.Geometry.chain(11, 1.0), np.array([0.5, 0.4]))
    with pytest.raises(dd.DomainError):
        dd.evolve_symmetric(0, 0, init=(1, 1, 0), times=np.array([1.0]))
