import json
import subprocess
import sys

import numpy as np
import pytest

from rnlslab.cli import main


def run_cli(args):
    return main(args)


def test_regime_subcommand(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"d": 2, "p": 3.0, "omega": [1.2], "gamma": [1.0, 1.4142]}))
    code = run_cli(["regime", "--config", str(cfg), "--output-dir", str(tmp_path / "out")])
    out = capsys.readouterr().out
    assert code == 0
    assert "NonExistence(a)" in out
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["headline"]["reason"] == "a"


def test_unknown_key_is_config_error(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"d": 2, "bogus": 1}))
    code = run_cli(["regime", "--config", str(cfg), "--output-dir", str(tmp_path / "out")])
    assert code == 2
    err = capsys.readouterr().err
    record = json.loads(err.strip().splitlines()[-1])
    assert record["error"] == "ConfigError"


def test_gauge_check(tmp_path, capsys):
    code = run_cli(
        [
            "gauge-check",
            "--set", "points=128",
            "--set", "half_width=12.0",
            "--output-dir", str(tmp_path / "out"),
        ]
    )
    assert code == 0
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["headline"]["max_identity_error"] <= 1e-8


def test_shoot_subcommand(tmp_path, capsys):
    code = run_cli(
        ["shoot", "--set", "d=1", "--set", "p=3.0", "--output-dir", str(tmp_path / "out")]
    )
    assert code == 0
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert abs(manifest["headline"]["center_value"] - np.sqrt(2)) < 1e-6
    assert (tmp_path / "out" / "profile.csv").exists()


def test_evolve_tiny_run_and_determinism(tmp_path):
    cfg = {
        "d": 2,
        "p": 3.0,
        "mu": -1.0,
        "omega": [0.5],
        "gamma": [1.0, 1.0],
        "c": 0.5,
        "source": "free_q0",
        "half_width": 6.0,
        "points": 64,
        "r_max": 18.0,
        "T": 0.05,
        "dt": 1e-3,
        "sample_every": 10,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        code = run_cli(["evolve", "--config", str(cfg_path), "--output-dir", str(out)])
        assert code == 0
        outs.append(out)
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["headline"]["verdict"] == "global"
        names = {a["path"] for a in manifest["artifacts"]}
        assert {"trace.csv", "initial.rnls", "final.rnls"} <= names
        # checksums match the files
        import hashlib

        for a in manifest["artifacts"]:
            digest = hashlib.sha256((out / a["path"]).read_bytes()).hexdigest()
            assert digest == a["sha256"]
    # bit-identical reruns
    for name in ("trace.csv", "initial.rnls", "final.rnls"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


def test_vortex_sweep_subcommand(tmp_path):
    cfg = {
        "d": 2,
        "p": 3.0,
        "mu": -1.0,
        "omega": [1.2],
        "gamma": [1.0, 1.0],
        "variant": "iso2d",
        "m_lo": 1,
        "m_hi": 6,
        "fit_from": 3,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    code = run_cli(["vortex-sweep", "--config", str(cfg_path), "--output-dir", str(tmp_path / "out")])
    assert code == 0
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["headline"]["slope"] < 0
    header = (tmp_path / "out" / "sweep.csv").read_text().splitlines()[0]
    assert header.startswith("m,kinetic,potential,rotation,nonlinear,total")


def test_vortex_sweep_regime_error(tmp_path, capsys):
    cfg = {"d": 2, "p": 3.0, "mu": -1.0, "omega": [0.5], "gamma": [1.0, 1.0], "variant": "iso2d"}
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    code = run_cli(["vortex-sweep", "--config", str(cfg_path), "--output-dir", str(tmp_path / "out")])
    assert code == 3


def test_scan_subcommand_with_snapshot_source(tmp_path):
    import numpy as np

    from rnlslab import make_grid, write_snapshot
    from rnlslab.field import ComplexField, mass

    grid = make_grid(2, 6.0, 64)
    vals = np.exp(-grid.radius_sq() / 2).astype(complex)
    f = ComplexField(grid, vals)
    src = ComplexField(grid, vals / np.sqrt(mass(f)))
    snap = tmp_path / "gauss.rnls"
    write_snapshot(snap, src, 0.0)

    cfg = {
        "d": 2,
        "p": 3.0,
        "mu": -1.0,
        "omega": [0.0],
        "gamma": [1.0, 1.0],
        "half_width": 6.0,
        "points": 64,
        "source": "snapshot",
        "snapshot": str(snap),
        "c_lo": 2.5,
        "c_hi": 4.5,
        "tol_c": 0.5,
        "T_max": 0.4,
        "dt": 1e-3,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    code = run_cli(["scan", "--config", str(cfg_path), "--output-dir", str(tmp_path / "out")])
    assert code == 0
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    lo, hi = manifest["headline"]["bracket"]
    assert 2.5 <= lo < hi <= 4.5
    assert (tmp_path / "out" / "scan.csv").exists()


def test_scan_invalid_bracket_exit_code(tmp_path, capsys):
    import numpy as np

    from rnlslab import make_grid, write_snapshot
    from rnlslab.field import ComplexField

    grid = make_grid(2, 6.0, 64)
    src = ComplexField(grid, np.exp(-grid.radius_sq() / 2).astype(complex))
    snap = tmp_path / "gauss.rnls"
    write_snapshot(snap, src, 0.0)
    cfg = {
        "d": 2,
        "p": 3.0,
        "mu": -1.0,
        "omega": [0.0],
        "gamma": [1.0, 1.0],
        "half_width": 6.0,
        "points": 64,
        "source": "snapshot",
        "snapshot": str(snap),
        "c_lo": 0.1,
        "c_hi": 0.2,
        "T_max": 0.05,
        "dt": 1e-3,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    code = run_cli(["scan", "--config", str(cfg_path), "--output-dir", str(tmp_path / "out")])
    assert code == 3
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["error"] == "BracketError"


def test_presets_listing(capsys):
    assert run_cli(["presets"]) == 0
    out = capsys.readouterr().out
    assert "q0-0.98" in out and "qog-2.515-om0.5-g2-8" in out


def test_console_script_entrypoint():
    proc = subprocess.run(
        [sys.executable, "-m", "rnlslab.cli", "presets"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "q0-1.02" in proc.stdout
