import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from csquant import cli
from csquant.quantize import build_angle_operator


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(path):
    lines = [ln for ln in open(path).read().splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], [[float(v) for v in r] for r in rows[1:]]


def test_quantize_builtin_angle(tmp_path, capsys):
    out = tmp_path / "angle.json"
    code, _, _ = run(["quantize", "--builtin", "angle", "--order", "100", "--out", str(out)], capsys)
    assert code == 0
    op = cli.OperatorFile.from_json(out.read_text()).to_operator()
    np.testing.assert_array_equal(op.matrix, build_angle_operator(100).matrix)


def test_quantize_isotropic_u(capsys):
    code, text, _ = run(["quantize", "--isotropic", "u", "--order", "10"], capsys)
    assert code == 0
    op = cli.OperatorFile.from_json(text).to_operator()
    np.testing.assert_array_equal(op.matrix, np.diag(np.arange(1.0, 11.0)))


def test_quantize_dirac_pi(capsys):
    code, text, _ = run(["quantize", "--dirac", "1:0,0", "--measure", "pi", "--order", "10"], capsys)
    assert code == 0
    m = cli.OperatorFile.from_json(text).to_operator().matrix
    assert m[0, 0] == 1 / math.pi and np.count_nonzero(m) == 1


def test_quantize_general_and_angular(capsys):
    code, text, _ = run(["quantize", "--general", "z", "--order", "6"], capsys)
    m = cli.OperatorFile.from_json(text).to_operator().matrix
    np.testing.assert_allclose(np.diag(m, 1), np.sqrt(np.arange(1, 6)), atol=1e-12)
    code, text, _ = run(["quantize", "--angular", "cot(theta)", "--order", "12"], capsys)
    assert code == 0


def test_operator_json_lossless(tmp_path):
    rng = np.random.default_rng(1)
    from csquant.fock import FockOperator

    op = FockOperator(rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5)), provenance="random")
    back = cli.OperatorFile.from_json(cli.OperatorFile.from_operator(op).to_json()).to_operator()
    np.testing.assert_array_equal(back.matrix, op.matrix)
    assert back.provenance == "random"


def test_exit_codes(tmp_path, capsys):
    assert run(["quantize", "--isotropic", "x+1", "--order", "4"], capsys)[0] == 2
    assert run(["quantize", "--order", "4"], capsys)[0] == 2
    assert run(["quantize", "--dirac", "1:0", "--order", "4"], capsys)[0] == 2
    assert run(["symbol", str(tmp_path / "missing.json")], capsys)[0] == 2
    code, _, err = run(["quantize", "--angular", "1/sin(theta)^2", "--order", "8"], capsys)
    assert code == 3 and "singularity" in err
    code, _, err = run(["quantize", "--dirac", "1:5,0", "--order", "3"], capsys)
    assert code == 3
    with pytest.raises(SystemExit) as exc:
        cli.main(["quantize", "--builtin", "nope"])
    assert exc.value.code == 2


def test_bad_operator_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"format_version": 99, "order": 1, "hermitian": True, "entries": [[1, 0]]}))
    assert run(["spectrum", str(bad)], capsys)[0] == 2


def test_spectrum_harmonic(tmp_path, capsys):
    out = tmp_path / "spec.csv"
    assert run(["spectrum", "--builtin", "harmonic_hamiltonian", "--order", "10", "--out", str(out)], capsys)[0] == 0
    cols, rows = read_csv(out)
    assert cols == ["index", "real", "imag"]
    np.testing.assert_allclose([r[1] for r in rows], np.arange(1, 11), atol=1e-12)


def test_symbol_from_file(tmp_path, capsys):
    op = tmp_path / "h.json"
    run(["quantize", "--builtin", "free_hamiltonian", "--order", "120", "--out", str(op)], capsys)
    out = tmp_path / "s.csv"
    code, _, _ = run(["symbol", str(op), "--r-grid", "0.5:2:4", "--theta-grid", "8", "--out", str(out)], capsys)
    assert code == 0
    assert open(out).readline().startswith("# lower symbol")
    _, rows = read_csv(out)
    for r, t, v in rows:
        assert v == pytest.approx((r * math.sin(t)) ** 2, abs=1e-9)


def test_study_json(tmp_path, capsys):
    out = tmp_path / "study.json"
    assert run(["study", "--orders", "20:60:20", "--out", str(out)], capsys)[0] == 0
    data = json.loads(out.read_text())
    assert data["orders"] == [20, 40, 60] and data["pad"] == 4
    assert run(["study", "--kind", "angle-number", "--orders", "10:20:10"], capsys)[0] == 0
    assert run(["study", "--orders", "20:10:5"], capsys)[0] == 2


def test_figures(tmp_path, capsys):
    assert run(["figures", "--out", str(tmp_path)], capsys)[0] == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == [
        "figure1_curves.csv",
        "figure1_surface.csv",
        "figure2_time_symbol.csv",
        "figure3_commutator_abs.csv",
        "figure4_spectrum.csv",
        "figure5_spectral_norm.csv",
    ]
    for n in names:
        head = open(tmp_path / n).readline()
        assert head.startswith("# source=") and "order=" in head and "pad=" in head
    _, rows = read_csv(tmp_path / "figure5_spectral_norm.csv")
    assert [int(r[0]) for r in rows] == list(range(10, 101, 10))
    assert rows[-1][1] == pytest.approx(1.0, abs=0.05)
    # r = 0.5 curve: oscillation about pi with amplitude close to sqrt(pi) * 0.5
    _, rows = read_csv(tmp_path / "figure1_curves.csv")
    vals = np.array([r[2] for r in rows if r[0] == 0.5])
    assert np.mean(vals) == pytest.approx(math.pi, abs=1e-9)
    assert (vals.max() - vals.min()) / 2 == pytest.approx(math.sqrt(math.pi) * 0.5, rel=0.1)
    _, rows = read_csv(tmp_path / "figure4_spectrum.csv")
    assert len(rows) == 100
    _, rows = read_csv(tmp_path / "figure3_commutator_abs.csv")
    assert len(rows) == 100 * 100


def test_figures_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(["figures", "--which", "2", "--order", "120", "--theta-grid", "40", "--out", str(d)], capsys)[0] == 0
    assert (a / "figure2_time_symbol.csv").read_bytes() == (b / "figure2_time_symbol.csv").read_bytes()


def test_atomic_write_leaves_no_temp(tmp_path):
    target = tmp_path / "x.txt"
    cli.write_atomic(target, "hello\n")
    assert target.read_text() == "hello\n"
    assert [p.name for p in tmp_path.iterdir()] == ["x.txt"]


def test_grid_and_orders_parsing():
    assert cli.parse_orders("10:30:10") == [10, 20, 30]
    assert cli.parse_orders("5,7") == [5, 7]
    np.testing.assert_allclose(cli.parse_grid("0:1:3"), [0, 0.5, 1])
    assert len(cli.parse_grid("4")) == 4 and cli.parse_grid("4")[-1] < 2 * math.pi
    with pytest.raises(cli.InputError):
        cli.parse_grid("a:b")


def test_console_script_and_thread_cap(tmp_path):
    env = {"CSQ_THREADS": "1", "PATH": "/usr/local/bin:/usr/bin:/bin"}
    res = subprocess.run(
        [sys.executable, "-m", "csquant.cli", "spectrum", "--builtin", "harmonic_hamiltonian", "--order", "3"],
        capture_output=True, text=True, env=env,
    )
    assert res.returncode == 0 and res.stdout.splitlines()[-1].startswith("2,3")
    env["CSQ_THREADS"] = "many"
    res = subprocess.run([sys.executable, "-m", "csquant.cli", "study"], capture_output=True, text=True, env=env)
    assert res.returncode == 2
