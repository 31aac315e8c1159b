import math
import os
import subprocess

import numpy as np
import pytest

import ddclock as dd

CLI = os.environ.get("DDCLOCK_CLI")
pytestmark = pytest.mark.skipif(not CLI, reason="DDCLOCK_CLI not set")


def run(cmd, tmp_path, config=None, preset=None, threads=None, name="out.csv"):
    args = [CLI, cmd, "--out", str(tmp_path / name)]
    if config is not None:
        path = tmp_path / "run.ini"
        path.write_text(config)
        args += ["--config", str(path)]
    if preset is not None:
        args += ["--preset", preset]
    if threads is not None:
        args += ["--threads", str(threads)]
    return subprocess.run(args, capture_output=True, text=True)


def table(path):
    lines = [l for l in open(path) if not l.startswith("#")]
    header = lines[0].strip().split(",")
    data = np.array([[float(x) for x in l.split(",")] for l in lines[1:]])
    return {h: data[:, i] for i, h in enumerate(header)}


def body(path):
    return "".join(l for l in open(path) if not l.startswith("#"))


def test_polygon_sweep_matches_explicit(tmp_path):
    cfg = "[geometry]\nkind = polygon\ncounts = 4\n[sweep]\nd_min = 0.3\nd_max = 3\nd_points = 28\n"
    r = run("couplings", tmp_path, cfg)
    assert r.returncode == 0, r.stderr
    t = table(tmp_path / "out.csv")
    for d, om, ga in zip(t["d"], t["omega_eff"], t["gamma_eff"]):
        ref = dd.effective_explicit(dd.Geometry.polygon(4, d).positions())[0]
        assert om == pytest.approx(ref.omega_eff, rel=1e-14, abs=1e-15)
        assert ga == pytest.approx(ref.gamma_eff, rel=1e-14, abs=1e-15)


def test_phase_map_writes_contour(tmp_path):
    cfg = (
        "[geometry]\nkind = chain\ncounts = 20000\n[sweep]\nmode = phase_map\n"
        "d_min = 0.2\nd_max = 1.6\nd_points = 57\ndelta_phi_min = 0\ndelta_phi_max = pi\ndelta_phi_points = 5\n"
    )
    r = run("couplings", tmp_path, cfg)
    assert r.returncode == 0, r.stderr
    assert len(table(tmp_path / "out.csv")["d"]) == 57 * 5
    zero = table(tmp_path / "out_zero_contour.csv")
    assert len(zero["d"]) > 0


def test_config_errors_exit_2_without_output(tmp_path):
    empty = "[geometry]\nkind = chain\ncounts = 11\n[sweep]\nd =\n"
    assert run("couplings", tmp_path, empty).returncode == 2
    assert not (tmp_path / "out.csv").exists()
    unknown = "[geometry]\nkind = chain\ncounts = 11\ncolour = red\n[sweep]\nd = 0.5\n"
    assert run("couplings", tmp_path, unknown).returncode == 2
    big = "[geometry]\nkind = chain\ncounts = 9\nspacing = 0.5\n[oracle]\nt = 1\n"
    assert run("oracle", tmp_path, big).returncode == 2
    assert run("dynamics", tmp_path, preset="no-such-preset").returncode == 2
    assert not (tmp_path / "out.csv").exists()


def test_dynamics_presets(tmp_path):
    assert run("dynamics", tmp_path, preset="independent").returncode == 0
    t = table(tmp_path / "out.csv")
    assert np.allclose(t["sx"], np.exp(-t["t"] / 2), atol=1e-8)
    assert np.allclose(t["sz"], np.exp(-t["t"]) - 1, atol=1e-8)
    assert np.all(t["atom_index"] == -1)

    def transverse_at_2(preset):
        assert run("dynamics", tmp_path, preset=preset, name=preset + ".csv").returncode == 0
        t = table(tmp_path / (preset + ".csv"))
        i = np.argmin(np.abs(t["t"] - 2))
        return math.hypot(t["sx"][i], t["sy"][i])

    assert transverse_at_2("decay-chain-0792") > math.exp(-1)
    assert transverse_at_2("decay-alternating-051") < math.exp(-1)
    # alternating phases at d = 0.49 lie outside the light cone: slower than independent
    assert transverse_at_2("decay-alternating-049") > math.exp(-1)


def test_ramsey_presets(tmp_path):
    assert run("ramsey", tmp_path, preset="fringes-independent").returncode == 0
    t = table(tmp_path / "out.csv")
    i = np.where((t["T"] == 1) & (t["delta"] == 0))[0][0]
    assert t["signal"][i] == pytest.approx(0.606531, abs=1e-6)
    s = table(tmp_path / "out_summary.csv")
    assert np.allclose(s["shift"], 0, atol=1e-4)

    assert run("ramsey", tmp_path, preset="shift-vs-omega", name="a.csv").returncode == 0
    a = table(tmp_path / "a.csv")
    assert len(a["shift"]) == 3 * 41
    base = a["gamma_eff"] == 0
    assert np.corrcoef(a["omega_eff"][base], a["shift"][base])[0, 1] ** 2 > 0.99


def test_oracle_deviation(tmp_path):
    one = "[geometry]\nkind = chain\ncounts = 1\nspacing = 1\n[oracle]\nt_min = 0\nt_max = 2\nt_points = 9\n"
    assert run("oracle", tmp_path, one).returncode == 0
    assert table(tmp_path / "out.csv")["max_dev"].max() <= 1e-8
    assert run("oracle", tmp_path, preset="oracle", name="far.csv").returncode == 0
    assert run("oracle", tmp_path, preset="oracle-close", name="close.csv").returncode == 0
    far = table(tmp_path / "far.csv")
    close = table(tmp_path / "close.csv")
    pop_dev = np.abs(far["oracle_sz"] - far["mf_sz"]) / 2
    assert pop_dev.max() < 0.05
    assert close["max_dev"].max() > far["max_dev"].max()


def test_rho_dump(tmp_path):
    cfg = "[geometry]\nkind = polygon\ncounts = 2\nspacing = 0.5\n[oracle]\nt = 0.5, 1\ndump = true\n"
    assert run("oracle", tmp_path, cfg).returncode == 0
    raw = (tmp_path / "out_rho.bin").read_bytes()
    n, dim, count = np.frombuffer(raw[:12], dtype="<u4")
    assert (n, dim, count) == (2, 4, 2)
    assert len(raw) == 12 + count * (8 + dim * dim * 16)


def test_threads_do_not_change_output(tmp_path):
    cfg = "[geometry]\nkind = square\ncounts = 101, 101\n[sweep]\nd_min = 0.3\nd_max = 1.3\nd_points = 40\n"
    assert run("couplings", tmp_path, cfg, threads=1, name="t1.csv").returncode == 0
    assert run("couplings", tmp_path, cfg, threads=4, name="t4.csv").returncode == 0
    assert (tmp_path / "t1.csv").read_bytes() == (tmp_path / "t4.csv").read_bytes()
