import json
import math

import pytest

from ggkp import __version__
from ggkp.cli.emit import read_grid_csv, render_csv
from ggkp.cli.main import main
from ggkp.cli.schema import RunConfig
from ggkp.gaussian.schema import GaussianState
from ggkp.torus.schema import TorusGeometry
from ggkp.zak.transform import qzt_assemble, qzt_eval_xi


def run_json(capsys, *args):
    assert main(list(args)) == 0
    return json.loads(capsys.readouterr().out)


def test_grid_csv_layout(tmp_path):
    out = tmp_path / "grid.csv"
    assert main(["grid", "--nx", "2", "--nk", "2", "--out", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    lines = text.split("\n")
    assert lines[0] == "x,k,re,im,abs"
    assert lines[-1] == "" and len(lines) == 6
    assert "\r" not in text
    rows = [tuple(map(float, line.split(","))) for line in lines[1:-1]]
    # x varies fastest
    assert [(r[0], r[1]) for r in rows] == [(-0.5, -0.5), (0.5, -0.5), (-0.5, 0.5), (0.5, 0.5)]


def test_grid_csv_round_trip(tmp_path):
    out = tmp_path / "grid.csv"
    assert main(["grid", "--nx", "7", "--nk", "4", "--sigma", "0.8", "--out", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    header, rows = read_grid_csv(text)
    assert render_csv(header, rows) == text


def test_grid_is_deterministic(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (first, second):
        assert main(["grid", "--nx", "5", "--nk", "5", "--out", str(path)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_half_characteristic_grid_vanishes_at_center(tmp_path):
    out = tmp_path / "odd.csv"
    args = ["grid", "--char", "1/2,1/2;1/2,1/2", "--nx", "3", "--nk", "3", "--out", str(out)]
    assert main(args) == 0
    _, rows = read_grid_csv(out.read_text(encoding="utf-8"))
    center = [r for r in rows if r[0] == 0.0 and r[1] == 0.0]
    assert len(center) == 1 and center[0][4] < 1e-8


def test_grid_json_metadata(tmp_path):
    out = tmp_path / "grid.json"
    assert main(["grid", "--format", "json", "--nx", "3", "--nk", "2", "--tol", "1e-12", "--out", str(out)]) == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    meta = payload["metadata"]
    assert meta["version"] == __version__
    assert meta["tolerance"] == 1e-12
    assert meta["characteristic"] == "0,0;0,0"
    assert meta["geometry"] == {"L": 2 * math.pi, "P": 2 * math.pi, "hbar": 1.0}
    assert payload["columns"] == ["x", "k", "re", "im", "abs"]
    assert len(payload["rows"]) == 6


def test_grid_pgm_layout(tmp_path):
    out = tmp_path / "grid.pgm"
    assert main(["grid", "--format", "pgm", "--nx", "4", "--nk", "3", "--out", str(out)]) == 0
    data = out.read_bytes()
    header = b"P5\n4 3\n65535\n"
    assert data.startswith(header)
    pixels = data[len(header):]
    assert len(pixels) == 4 * 3 * 2
    values = [int.from_bytes(pixels[i : i + 2], "big") for i in range(0, len(pixels), 2)]
    assert min(values) == 0 and max(values) == 65535


def test_grid_xi_view(tmp_path):
    out = tmp_path / "xi.csv"
    assert main(["grid", "--xi", "--nx", "4", "--nk", "4", "--out", str(out)]) == 0
    header, rows = read_grid_csv(out.read_text(encoding="utf-8"))
    assert header == ("xi2", "xi1", "re", "im", "abs")
    assert {r[0] for r in rows} == {0.0, 0.5, 1.0, 1.5}


def test_grid_xi_columns_follow_header(tmp_path):
    out = tmp_path / "xi.csv"
    args = ["grid", "--xi", "--nx", "4", "--nk", "2", "--L", "3", "--P", "9"]
    assert main([*args, "--out", str(out)]) == 0
    header, rows = read_grid_csv(out.read_text(encoding="utf-8"))
    labelled = [dict(zip(header, row)) for row in rows]
    point = next(r for r in labelled if r["xi2"] == 0.5 and r["xi1"] == 1.0)

    vacuum = GaussianState.vacuum(1.0)
    dist = qzt_assemble(vacuum, vacuum, TorusGeometry(L=3.0, P=9.0))
    expected = qzt_eval_xi(dist, [point["xi1"], point["xi2"]])
    # τ₁ ≠ τ₂ here, so swapped labels land on a far smaller value
    swapped = qzt_eval_xi(dist, [point["xi2"], point["xi1"]])
    assert abs(expected - swapped) > 1e-3 * abs(expected)
    assert complex(point["re"], point["im"]) == pytest.approx(expected, rel=1e-9)


def test_grid_default_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("GGKP_OUTPUT_DIR", str(tmp_path / "out"))
    assert main(["grid", "--nx", "2", "--nk", "2"]) == 0
    assert (tmp_path / "out" / "grid.csv").exists()


def test_environment_tolerance_reaches_metadata(tmp_path, monkeypatch):
    monkeypatch.setenv("GGKP_TOL", "1e-3")
    out = tmp_path / "grid.json"
    assert main(["grid", "--nx", "2", "--nk", "2", "--format", "json", "--out", str(out)]) == 0
    document = json.loads(out.read_text(encoding="utf-8"))
    assert document["metadata"]["tolerance"] == 0.001


@pytest.mark.parametrize("value", ["2", "0", "not-a-number"])
def test_invalid_environment_exits_two(monkeypatch, capsys, value):
    monkeypatch.setenv("GGKP_TOL", value)
    assert main(["grid", "--nx", "2", "--nk", "2"]) == 2
    assert "GGKP_" in capsys.readouterr().err


def test_element_identity(capsys):
    report = run_json(capsys, "element", "0", "0", "--oracle")
    assert report["closed_form"]["re"] == pytest.approx(1.0, abs=1e-12)
    assert report["quadrature"]["re"] == pytest.approx(1.0, abs=1e-12)
    assert report["relative_difference"] < 1e-12


def test_element_first_shell(capsys):
    report = run_json(capsys, "element", "1", "0", "--oracle")
    assert report["closed_form"]["abs"] == pytest.approx(0.7788008, abs=1e-7)
    assert report["quadrature"]["abs"] == pytest.approx(0.7788008, abs=1e-7)


def test_element_far_shell(capsys):
    report = run_json(capsys, "element", "8", "8", "--oracle")
    assert report["closed_form"]["abs"] < 1e-10
    assert report["quadrature"]["abs"] < 1e-10
    assert report["relative_difference"] < 1e-8


def test_element_without_oracle(capsys):
    report = run_json(capsys, "element", "-1", "2")
    assert set(report) == {"m", "n", "closed_form"}
    assert (report["m"], report["n"]) == (-1, 2)


def test_element_resolution_failure_gives_guidance(capsys):
    assert main(["element", "0", "200", "--oracle", "--no-refine"]) == 2
    assert "increase the node count" in capsys.readouterr().err


def test_verify_theta_is_reproducible(capsys):
    first = run_json(capsys, "verify", "--suite", "theta", "--seed", "7")
    second = run_json(capsys, "verify", "--suite", "theta", "--seed", "7")
    assert first == second
    assert first["suite"] == "theta" and first["seed"] == 7 and first["passed"]
    names = {c["name"] for c in first["checks"]}
    assert "theta.integer_periodicity" in names


def test_verify_zak_reports_oracle_error(capsys):
    report = run_json(capsys, "verify", "--suite", "zak")
    oracle = next(c for c in report["checks"] if c["name"] == "zak.oracle_equivalence")
    assert oracle["passed"] and oracle["max_error"] < 1e-8


@pytest.mark.parametrize("suite", ["matrix", "logical"])
def test_verify_suites_pass(capsys, suite):
    report = run_json(capsys, "verify", "--suite", suite, "--seed", "3")
    assert report["passed"], report


def test_verify_unknown_suite_is_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["verify", "--suite", "gauge"])
    assert excinfo.value.code == 2


def test_verify_failure_exits_one(capsys, monkeypatch):
    from ggkp.cli import checks
    from ggkp.cli.schema import CheckResult

    def broken(rng):
        return [CheckResult(name="logical.broken", passed=False, max_error=1.0, threshold=0.0, cases=1)]

    monkeypatch.setitem(checks.SUITES, "logical", broken)
    assert main(["verify", "--suite", "logical"]) == 1
    err = capsys.readouterr().err
    assert "logical.broken" in err


def test_limit_scan(capsys):
    assert main(["limit-scan", "--scales", "1", "2", "4"]) == 0
    header, rows = read_grid_csv(capsys.readouterr().out)
    assert header == ("scale", "fwhm")
    assert [r[0] for r in rows] == [1.0, 2.0, 4.0]
    assert rows[2][1] < rows[1][1] < rows[0][1]


def test_limit_scan_single_scale(capsys):
    assert main(["limit-scan", "--scales", "2"]) == 0
    _, rows = read_grid_csv(capsys.readouterr().out)
    assert len(rows) == 1


def test_limit_scan_rejects_non_positive_scale():
    assert main(["limit-scan", "--scales", "0", "1"]) == 2


def test_overlap_defaults(capsys):
    report = run_json(capsys, "overlap", "--resolution", "256")
    assert report["normalized_cross_overlap"] < 1e-10
    assert set(report) == {
        "resolution",
        "normalized_cross_overlap",
        "normalized_cross_overlap_half_resolution",
        "self_norm_zero",
        "self_norm_one",
        "richardson_error",
    }
    # unit-width vacuum on the 2π square: y = 1/4π per axis, unit prefactor
    zero_axis = 2 * math.fsum(math.exp(-(n**2) / 2) for n in range(-40, 41))
    one_axis = 2 * math.fsum(math.exp(-((n + 0.5) ** 2) / 2) for n in range(-40, 41))
    assert report["self_norm_zero"] == pytest.approx(zero_axis**2, rel=1e-9)
    assert report["self_norm_one"] == pytest.approx(one_axis**2, rel=1e-9)


def test_overlap_converges_with_resolution(capsys):
    fine = run_json(capsys, "overlap", "--resolution", "512")
    coarse = run_json(capsys, "overlap", "--resolution", "64")
    assert fine["normalized_cross_overlap"] <= max(coarse["normalized_cross_overlap"], 1e-10)


def test_config_file_and_flag_override(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(
        json.dumps({"L": 5.0, "P": 5.0, "probe": {"sigma": 0.7}, "characteristic": "0,0;0,0"}),
        encoding="utf-8",
    )
    report = run_json(capsys, "element", "0", "0", "--config", str(config))
    # unequal widths: ⟨φ|ψ⟩ = sqrt(2ab/(a²+b²))
    assert report["closed_form"]["re"] == pytest.approx(math.sqrt(1.4 / 1.49), rel=1e-12)
    report = run_json(capsys, "element", "0", "0", "--config", str(config), "--sigma", "0.7")
    assert report["closed_form"]["re"] == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize(
    "payload",
    [{"Lx": 1.0}, {"probe": {"width": 1.0}}, {"grid": {"nx": 0}}, {"L": -1.0}, {"tolerance": 2.0}],
)
def test_invalid_config_is_usage_error(tmp_path, payload):
    config = tmp_path / "bad.json"
    config.write_text(json.dumps(payload), encoding="utf-8")
    assert main(["element", "0", "0", "--config", str(config)]) == 2


def test_bad_characteristic_flag():
    assert main(["grid", "--char", "1/2", "--nx", "2", "--nk", "2"]) == 2


def test_grid_too_large():
    assert main(["grid", "--nx", "20000", "--nk", "20000"]) == 2


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("", encoding="utf-8")
    assert main(["grid", "--nx", "2", "--nk", "2", "--out", str(blocker / "grid.csv")]) == 2


def test_run_config_defaults():
    config = RunConfig()
    assert (config.hbar, config.L, config.P) == (1.0, 2 * math.pi, 2 * math.pi)
    assert config.probe.sigma == config.signal.sigma == 1.0
    assert config.characteristic.is_zero
