import io
import json
import math
import subprocess
import sys
import zlib

import numpy as np
import pytest

from lissajous_cs.cli import main

VORTEX = ["--N", "20", "--zeta-mod", "1", "--zeta-arg", "1.5707963267948966"]
SMALL = ["--nx", "81", "--ny", "81"]


def _state_rows(out):
    lines = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert lines[0] == "K,pK,qNmK,re_c,im_c,abs2"
    return np.array([[float(v) for v in l.split(",")] for l in lines[1:]])


def test_state_listing(capsys):
    assert main(["state", "--N", "2", "--p", "1", "--q", "1", "--zeta-mod", "1", "--zeta-arg", "0"]) == 0
    out = capsys.readouterr().out
    np.testing.assert_allclose(_state_rows(out)[:, 5], [0.25, 0.5, 0.25], atol=1e-15)
    assert "class=StandingWave" in out


def test_state_anisotropic(capsys):
    assert main(["state", "--N", "1", "--p", "1", "--q", "2", "--zeta-mod", "1", "--zeta-arg", "0"]) == 0
    rows = _state_rows(capsys.readouterr().out)
    np.testing.assert_allclose(rows[:, 5], [1 / 3, 2 / 3], atol=1e-15)
    np.testing.assert_array_equal(rows[:, 1:3], [[0, 2], [1, 0]])


def test_state_vortex_tag(capsys):
    assert main(["state", "--p", "1", "--q", "1"] + VORTEX) == 0
    assert "class=VortexLimit" in capsys.readouterr().out


def test_state_from_glauber(capsys):
    assert main(["state", "--N", "2", "--alpha-mod", "1", "--beta-mod", "1"]) == 0
    np.testing.assert_allclose(_state_rows(capsys.readouterr().out)[:, 5], [0.25, 0.5, 0.25], atol=1e-15)


@pytest.mark.parametrize(
    "argv",
    [
        ["state", "--N", "3", "--p", "2", "--q", "4", "--zeta-mod", "1", "--zeta-arg", "0"],
        ["state", "--N", "3", "--zeta-mod", "1", "--zeta-arg", "0", "--alpha-mod", "1", "--beta-mod", "1"],
        ["state", "--N", "3", "--zeta-mod", "1"],
        ["state", "--N", "-1", "--zeta-mod", "1", "--zeta-arg", "0"],
        ["state", "--N", "two"],
        ["state", "--N", "2", "--zeta-mod", "-1", "--zeta-arg", "0"],
        ["field", "--N", "2", "--zeta-mod", "1", "--zeta-arg", "0"],
        ["field", "--N", "2", "--zeta-mod", "1", "--zeta-arg", "0", "--xmin", "1", "--xmax", "0", "--out", "x.csv"],
        ["verify", "--N", "3", "--p", "2", "--q", "4"],
        ["nonsense"],
    ],
)
def test_bad_arguments_exit_2(argv, capsys):
    assert main(argv) == 2
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and err.startswith("error:")


def test_io_error_exit_3(tmp_path, capsys):
    target = tmp_path / "missing" / "f.csv"
    assert main(["field", "--N", "2", "--zeta-mod", "1", "--zeta-arg", "0", "--out", str(target)] + SMALL) == 3


def test_capacity_exit_4(capsys):
    assert main(["state", "--N", "2000", "--zeta-mod", "1", "--zeta-arg", "0"]) == 4


def _read_csv(path):
    text = path.read_text()
    header = text.splitlines()[0].split(",")
    data = np.genfromtxt(io.StringIO(text), delimiter=",", skip_header=1)
    return header, data, text


def test_field_standing_wave_zero_current(tmp_path):
    out = tmp_path / "f.csv"
    assert main(["field", "--N", "6", "--p", "1", "--q", "2", "--zeta-mod", "1", "--zeta-arg", "0", "--out", str(out)] + SMALL) == 0
    header, data, text = _read_csv(out)
    assert header == ["x", "y", "re_psi", "im_psi", "rho", "jx", "jy", "chi"]
    assert data.shape == (81 * 81, 8)
    jcols = [l.split(",")[5:7] for l in text.splitlines()[1:]]
    assert all(v == "0.0000000000000000e+00" for row in jcols for v in row)


def test_field_vortex_phase_column(tmp_path):
    out = tmp_path / "f.csv"
    argv = ["field", "--N", "20", "--zeta-mod", "1", "--zeta-arg", str(-math.pi / 2), "--out", str(out)] + SMALL
    assert main(argv) == 0
    _, d, _ = _read_csv(out)
    ok = ~np.isnan(d[:, 7])
    assert ok.sum() > 1000 and (~ok).any()
    ref = 20 * np.arctan2(d[:, 1], d[:, 0])
    err = np.angle(np.exp(1j * (d[ok, 7] - ref[ok])))
    assert np.abs(err).max() < 1e-9


def test_field_sidecar(tmp_path):
    out = tmp_path / "f.csv"
    assert main(["field", "--N", "3", "--zeta-mod", "1", "--zeta-arg", "0.5", "--out", str(out)] + SMALL) == 0
    meta = json.loads((tmp_path / "f.csv.json").read_text())
    assert meta["units"] == "natural: m=omega=hbar=1"
    assert meta["checksum"] == f"{zlib.crc32(out.read_bytes()):08x}"
    assert meta["config"]["N"] == 3 and meta["config"]["grid"]["nx"] == 81
    assert "version" in meta


def test_field_determinism(tmp_path):
    argv = ["field", "--N", "20", "--p", "2", "--q", "3", "--zeta-mod", "0.8", "--zeta-arg", "0.3"] + SMALL
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_classical_circle(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["classical", "--p", "1", "--q", "1", "--delta", str(math.pi / 2), "--out", str(out)]) == 0
    header, d, _ = _read_csv(out)
    assert header == ["t", "x", "y"]
    assert np.abs(np.hypot(d[:, 1], d[:, 2]) - 1).max() < 1e-14


def test_classical_matched(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["classical", "--out", str(out), "--n-samples", "513"] + VORTEX) == 0
    _, d, _ = _read_csv(out)
    assert np.abs(np.hypot(d[:, 1], d[:, 2]) - math.sqrt(21)).max() < 1e-12


def test_evolve_zeta_constant_and_centroid_matches_classical(tmp_path):
    ev, cl = tmp_path / "e.csv", tmp_path / "c.csv"
    amps = ["--p", "1", "--q", "2", "--alpha-mod", "1.2", "--alpha-arg", "0.4", "--beta-mod", "0.9", "--beta-arg", "-1.1"]
    assert main(["evolve", "--out", str(ev), "--n-samples", "257"] + amps) == 0
    assert main(["classical", "--out", str(cl), "--n-samples", "257"] + amps) == 0
    header, e, _ = _read_csv(ev)
    _, c, _ = _read_csv(cl)
    assert header == ["t", "x", "y", "re_zeta", "im_zeta"]
    z = e[:, 3] + 1j * e[:, 4]
    assert np.abs(z - z[0]).max() <= 1e-12
    assert z[0] == pytest.approx(1.2 * np.exp(0.4j) / (0.9 * np.exp(-1.1j)) ** 2, rel=1e-14)
    np.testing.assert_allclose(e[:, :3], c, atol=1e-12)


def test_evolve_needs_glauber(tmp_path):
    assert main(["evolve", "--out", str(tmp_path / "e.csv")] + VORTEX) == 2


def test_verify_small_grid_and_negative_control(tmp_path):
    rep = tmp_path / "r.txt"
    base = ["verify", "--N", "6", "--zeta-mod", "1", "--zeta-arg", str(math.pi / 2), "--nx", "201", "--ny", "201"]
    assert main(base + ["--report", str(rep)]) == 0
    text = rep.read_text()
    assert text.endswith("overall=pass\n")
    assert main(base + ["--report", str(rep), "--tolerance-completeness", "1e-16"]) == 1
    assert rep.read_text().endswith("overall=fail\n")


def test_verify_mass_deficit_is_infrastructure(tmp_path):
    argv = VORTEX + ["--xmin", "-3", "--xmax", "3", "--ymin", "-3", "--ymax", "3", "--nx", "101", "--ny", "101"]
    assert main(["verify", "--report", str(tmp_path / "r.txt")] + argv) == 4


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "lissajous_cs", "state", "--N", "1", "--zeta-mod", "0", "--zeta-arg", "0"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert r.returncode == 0
    assert "1,1,0,0.0000000000000000e+00" in r.stdout


def test_shortest_number_format_round_trips(tmp_path, capsys):
    fixed, short = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["field", "--N", "4", "--zeta-mod", "1", "--zeta-arg", "0.7"] + SMALL
    assert main(base + ["--out", str(fixed)]) == 0
    assert main(base + ["--out", str(short), "--number-format", "shortest"]) == 0
    _, a, _ = _read_csv(fixed)
    _, b, _ = _read_csv(short)
    np.testing.assert_array_equal(np.isnan(a), np.isnan(b))
    np.testing.assert_allclose(np.nan_to_num(a), np.nan_to_num(b), rtol=1e-15, atol=0)
    assert main(["state", "--N", "2", "--zeta-mod", "1", "--zeta-arg", "0"]) == 0
    assert "5.0000000000000000e-01" in capsys.readouterr().out


def test_field_mass_from_csv(tmp_path):
    out = tmp_path / "f.csv"
    argv = ["field", "--N", "20", "--p", "1", "--q", "2", "--zeta-mod", "1", "--zeta-arg", "0.5", "--nx", "401", "--ny", "401"]
    assert main(argv + ["--out", str(out)]) == 0
    _, d, _ = _read_csv(out)
    x = np.unique(d[:, 0])
    y = np.unique(d[:, 1])
    rho = d[:, 4].reshape(len(x), len(y))
    assert np.trapezoid(np.trapezoid(rho, y, axis=1), x) == pytest.approx(1.0, abs=1e-6)


def test_classical_closure(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["classical", "--p", "2", "--q", "3", "--delta", "0.3", "--ax", "2", "--ay", "1", "--out", str(out)]) == 0
    _, d, _ = _read_csv(out)
    assert np.abs(d[-1, 1:] - d[0, 1:]).max() <= 1e-10
