"""Command-line front door: subcommands, JSON run configs, manifests.

Every run validates its config, executes one module pipeline, writes the
module's CSV/snapshot artifacts into --output-dir and records a manifest
with sha256 checksums and headline scalars.  Exit codes: 0 success,
2 config error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import BlowupCriteria, evolve
from .errors import ConfigError, RnlsError
from .field import ComplexField, make_grid, mass, norms
from .groundstate import gradient_flow, lift_to_grid, regrid, shoot_radial
from .inequalities import check_diamagnetic, check_gn, gaussian_moment
from .model import PhysParams, classify_regime, gauge_transform, threshold_mass
from .presets import PRESETS
from .snapshot import read_snapshot, write_snapshot
from .threshold import FREE_Q0, TRAPPED_Q, bisect_threshold, compare_to_critical
from .vortex import VortexSpec, divergence_sweep, make_vortex, write_sweep_csv

_COMMON_KEYS = {
    "command",
    "d",
    "p",
    "mu",
    "omega",
    "gamma",
    "c0",
    "scale_convention",
    "half_width",
    "points",
    "seed",
    "output_dir",
}

_COMMAND_KEYS = {
    "shoot": {"a_lo", "a_hi", "tol", "h", "r_max"},
    "groundstate": {"c", "dtau", "tol", "max_iter", "init_kind", "vortex_m"},
    "evolve": {
        "c",
        "source",
        "snapshot",
        "T",
        "dt",
        "sample_every",
        "order",
        "grad_factor",
        "linf_factor",
        "tail_threshold",
        "gs_half_width",
        "gs_points",
        "r_max",
    },
    "vortex-sweep": {"variant", "m_lo", "m_hi", "fit_from"},
    "check-inequalities": {"n_random", "r_max"},
    "gauge-check": {"matrix"},
    "scan": {
        "c_lo",
        "c_hi",
        "tol_c",
        "T_max",
        "dt",
        "source",
        "snapshot",
        "gs_half_width",
        "gs_points",
        "r_max",
        "grad_factor",
        "linf_factor",
        "tail_threshold",
    },
    "regime": set(),
}


def _validate_config(cfg: dict, command: str) -> None:
    allowed = _COMMON_KEYS | _COMMAND_KEYS[command]
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys for {command}: {sorted(unknown)}")


def _params_from_config(cfg: dict) -> PhysParams:
    d = int(cfg.get("d", 2))
    return PhysParams(
        d=d,
        p=float(cfg.get("p", 1.0 + 4.0 / d)),
        mu=float(cfg.get("mu", -1.0)),
        omega=tuple(cfg.get("omega", ())),
        gamma=tuple(cfg.get("gamma", (0.0,) * d)),
        c0=float(cfg.get("c0", 1.0)),
        scale_convention=str(cfg.get("scale_convention", "amplitude")),
    )


def _grid_from_config(cfg: dict, params: PhysParams):
    return make_grid(
        params.d, cfg.get("half_width", 15.0), cfg.get("points", 256 if params.d <= 2 else 128)
    )


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class RunDir:
    def __init__(self, path: Path):
        self.path = path
        self.path.mkdir(parents=True, exist_ok=True)
        self.artifacts: list[Path] = []

    def file(self, name: str) -> Path:
        p = self.path / name
        self.artifacts.append(p)
        return p

    def manifest(self, command: str, cfg: dict, grid, headline: dict, t0: float) -> Path:
        doc = {
            "command": command,
            "version": __version__,
            "config": cfg,
            "grid": None
            if grid is None
            else {"d": grid.d, "half_width": grid.half_width, "points": grid.points},
            "wall_time_s": round(time.time() - t0, 3),
            "artifacts": [
                {"path": p.name, "sha256": _sha256(p)} for p in self.artifacts if p.exists()
            ],
            "headline": headline,
        }
        out = self.path / "manifest.json"
        with open(out, "w") as fh:
            json.dump(doc, fh, indent=2, default=_json_default)
            fh.write("\n")
        return out


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON serializable: {type(x)}")


def _criteria_from_config(cfg: dict) -> BlowupCriteria:
    base = BlowupCriteria()
    return BlowupCriteria(
        grad_factor=float(cfg.get("grad_factor", base.grad_factor)),
        linf_factor=float(cfg.get("linf_factor", base.linf_factor)),
        tail_threshold=float(cfg.get("tail_threshold", base.tail_threshold)),
    )


def _source_field(cfg: dict, params: PhysParams, grid) -> tuple[ComplexField, dict]:
    """Ground-state field Q for scaled initial data, plus headline info."""
    source = cfg.get("source", FREE_Q0)
    if source == FREE_Q0:
        r_need = float(np.sqrt(sum(L**2 for L in grid.half_width)))
        prof = shoot_radial(params.d, params.p, r_max=float(cfg.get("r_max", max(25.0, 1.2 * r_need))))
        return lift_to_grid(prof, grid, 1.0), {"q0_mass": prof.mass, "q0_center": prof.center_value}
    if source == TRAPPED_Q:
        # default: solve the minimizer on the run grid itself (no regridding)
        gs_grid = make_grid(
            params.d,
            cfg.get("gs_half_width", grid.half_width),
            cfg.get("gs_points", grid.points),
        )
        gs = gradient_flow(params, gs_grid, c=1.0, tol=1e-7, max_iter=200000)
        if gs_grid == grid:
            phi = gs.field
        else:
            phi = regrid(gs.field, grid)
            phi = ComplexField(grid, phi.values / np.sqrt(mass(phi)))
        return phi, {"gs_lambda": gs.lam, "gs_residual": gs.residual, "gs_iterations": gs.iterations}
    if source == "snapshot":
        path = cfg.get("snapshot")
        if not path:
            raise ConfigError("source=snapshot needs a 'snapshot' path")
        field, _ = read_snapshot(path)
        if field.grid != grid:
            field = regrid(field, grid)
        return field, {"snapshot": str(path)}
    raise ConfigError(f"unknown source {source!r}")


def _cmd_shoot(cfg: dict, rundir: RunDir, t0: float) -> dict:
    params = _params_from_config(cfg)
    prof = shoot_radial(
        params.d,
        params.p,
        a_lo=float(cfg.get("a_lo", 0.5)),
        a_hi=float(cfg.get("a_hi", 4.0)),
        tol=float(cfg.get("tol", 1e-12)),
        h=float(cfg.get("h", 1e-4)),
        r_max=float(cfg.get("r_max", 20.0)),
    )
    out = rundir.file("profile.csv")
    with open(out, "w") as fh:
        fh.write("r,u\n")
        for r, u in zip(prof.r[::10], prof.u[::10]):
            fh.write(f"{r:.12e},{u:.12e}\n")
    headline = {
        "center_value": prof.center_value,
        "mass": prof.mass,
        "norm": float(np.sqrt(prof.mass)),
        "threshold_mass": threshold_mass(params, float(np.sqrt(prof.mass))),
    }
    rundir.manifest("shoot", cfg, None, headline, t0)
    print(f"shoot: u(0)={prof.center_value:.6f} mass={prof.mass:.6f}")
    return headline


def _cmd_groundstate(cfg: dict, rundir: RunDir, t0: float) -> dict:
    params = _params_from_config(cfg)
    grid = _grid_from_config(cfg, params)
    verdict = classify_regime(params)
    print(f"regime: {verdict}")
    gs = gradient_flow(
        params,
        grid,
        c=float(cfg.get("c", 1.0)),
        dtau=float(cfg.get("dtau", 0.01)),
        tol=float(cfg.get("tol", 1e-6)),
        max_iter=int(cfg.get("max_iter", 50000)),
        init_kind=str(cfg.get("init_kind", "gaussian")),
        vortex_m=int(cfg.get("vortex_m", 1)),
    )
    write_snapshot(rundir.file("groundstate.rnls"), gs.field, 0.0)
    headline = {
        "lambda": gs.lam,
        "residual": gs.residual,
        "iterations": gs.iterations,
        "energy": gs.energy.as_dict(),
        "mass": mass(gs.field),
        "init_kind": gs.init_kind,
    }
    rundir.manifest("groundstate", cfg, grid, headline, t0)
    print(f"groundstate: lambda={gs.lam:.8f} residual={gs.residual:.3e} iterations={gs.iterations}")
    return headline


def _cmd_evolve(cfg: dict, rundir: RunDir, t0: float) -> dict:
    params = _params_from_config(cfg)
    grid = _grid_from_config(cfg, params)
    verdict = classify_regime(params)
    print(f"regime: {verdict}")
    source, src_headline = _source_field(cfg, params, grid)
    from .threshold import scaled_initial

    psi0 = scaled_initial(float(cfg.get("c", 1.0)), source, params)

    def writer(tag, field, t):
        write_snapshot(rundir.file(f"{tag}.rnls"), field, t)

    trace = evolve(
        psi0,
        T=float(cfg.get("T", 2.0)),
        dt=float(cfg.get("dt", 1e-3)),
        params=params,
        sample_every=int(cfg.get("sample_every", 10)),
        criteria=_criteria_from_config(cfg),
        snapshot_writer=writer,
        order=int(cfg.get("order", 2)),
    )
    trace.write_csv(rundir.file("trace.csv"))
    headline = {
        **src_headline,
        "verdict": trace.verdict,
        "t_detect": trace.t_detect,
        "mass_initial": float(trace.mass[0]),
        "mass_drift": float(abs(trace.mass[-1] - trace.mass[0]) / max(trace.mass[0], 1e-300)),
        "energy_initial": float(trace.energy[0]),
    }
    rundir.manifest("evolve", cfg, grid, headline, t0)
    print(f"evolve: verdict={trace.verdict}" + (f" t_detect={trace.t_detect}" if trace.t_detect else ""))
    return headline


def _cmd_vortex_sweep(cfg: dict, rundir: RunDir, t0: float) -> dict:
    params = _params_from_config(cfg)
    sweep = divergence_sweep(
        str(cfg.get("variant", "iso2d")),
        params,
        m_range=range(int(cfg.get("m_lo", 1)), int(cfg.get("m_hi", 20)) + 1),
        fit_from=cfg.get("fit_from"),
    )
    write_sweep_csv(rundir.file("sweep.csv"), sweep)
    headline = {
        "slope": sweep["slope"],
        "expected_slope": sweep["expected_slope"],
        "intercept": sweep["intercept"],
        "fit_from": sweep["fit_from"],
    }
    rundir.manifest("vortex-sweep", cfg, None, headline, t0)
    print(f"vortex-sweep: slope={sweep['slope']:.4f} expected={sweep['expected_slope']:.4f}")
    return headline


def _cmd_check_inequalities(cfg: dict, rundir: RunDir, t0: float) -> dict:
    params = _params_from_config(cfg)
    grid = _grid_from_config(cfg, params)
    rng = np.random.default_rng(int(cfg.get("seed", 0)))
    n_random = int(cfg.get("n_random", 50))

    moment_err = 0.0
    for n in range(0, 9):
        for alpha in (0.5, 1.0, 2.0):
            y = np.linspace(-30, 30, 60001)
            quad = np.trapezoid(y ** (2 * n) * np.exp(-alpha * y * y), y)
            moment_err = max(moment_err, abs(quad - gaussian_moment(n, alpha)) / quad)

    r_need = float(np.sqrt(sum(L**2 for L in grid.half_width)))
    prof = shoot_radial(params.d, params.p, r_max=float(cfg.get("r_max", max(25.0, 1.2 * r_need))))
    q0_norm = float(np.sqrt(prof.mass))
    q0 = lift_to_grid(prof, grid, 1.0)
    free = PhysParams(d=params.d, p=params.p, mu=params.mu, omega=(0.0,) * (params.d // 2), gamma=(0.0,) * params.d)
    gn_q0 = check_gn(q0, free, q0_norm)

    env = np.exp(-grid.radius_sq() / 4.0)
    worst_gn, worst_dia = 0.0, 0.0
    M = None
    if params.d >= 2 and any(om != 0.0 for om in params.omega):
        from .model import rotation_matrix

        M = rotation_matrix(params)
    for _ in range(n_random):
        noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        u = ComplexField(grid, env * noise)
        worst_gn = max(worst_gn, check_gn(u, free, q0_norm).ratio)
        worst_dia = max(worst_dia, check_diamagnetic(u, M).ratio)

    headline = {
        "gaussian_moment_max_rel_err": moment_err,
        "gn_ratio_at_q0": gn_q0.ratio,
        "gn_worst_random_ratio": worst_gn,
        "diamagnetic_worst_ratio": worst_dia,
        "n_random": n_random,
    }
    out = rundir.file("inequalities.json")
    with open(out, "w") as fh:
        json.dump(headline, fh, indent=2)
        fh.write("\n")
    rundir.manifest("check-inequalities", cfg, grid, headline, t0)
    print(
        f"check-inequalities: GN(Q0)={gn_q0.ratio:.6f} worst random GN={worst_gn:.4f} "
        f"worst diamagnetic={worst_dia:.6f}"
    )
    return headline


def _cmd_gauge_check(cfg: dict, rundir: RunDir, t0: float) -> dict:
    params = _params_from_config(cfg)
    grid = _grid_from_config(cfg, params)
    C = np.asarray(cfg.get("matrix", [[0.0, 1.0], [1.0, 0.0]]), dtype=float)
    if C.shape != (grid.d, grid.d):
        raise ConfigError(f"matrix must be {grid.d}x{grid.d}")
    u = ComplexField(grid, np.exp(-grid.radius_sq() / 2.0).astype(complex))
    v = gauge_transform(u, C)
    from .field import gradient_arrays

    grads_v = gradient_arrays(v.values, grid)
    grads_u = gradient_arrays(u.values, grid)
    omega_x = np.zeros(grid.shape)
    for j in range(grid.d):
        for l in range(grid.d):
            if C[j, l] != 0.0:
                omega_x = omega_x + 0.5 * C[j, l] * grid.coord(j) * grid.coord(l)
    phase = np.exp(1j * omega_x)
    err = 0.0
    for j in range(grid.d):
        Aj = np.zeros(grid.shape)
        for l in range(grid.d):
            if C[j, l] != 0.0:
                Aj = Aj + C[j, l] * grid.coord(l)
        lhs = grads_v[j] - 1j * Aj * v.values
        rhs = phase * grads_u[j]
        err = max(err, float(np.abs(lhs - rhs).max()))
    headline = {"max_identity_error": err, "mass_ratio": mass(v) / mass(u)}
    rundir.manifest("gauge-check", cfg, grid, headline, t0)
    print(f"gauge-check: max covariant-derivative identity error = {err:.3e}")
    return headline


def _cmd_scan(cfg: dict, rundir: RunDir, t0: float) -> dict:
    params = _params_from_config(cfg)
    grid = _grid_from_config(cfg, params)
    verdict = classify_regime(params)
    print(f"regime: {verdict}")
    source_name = cfg.get("source", TRAPPED_Q)
    source, src_headline = _source_field(cfg, params, grid)
    result = bisect_threshold(
        source,
        params,
        c_lo=float(cfg.get("c_lo", 2.3)),
        c_hi=float(cfg.get("c_hi", 2.6)),
        tol_c=float(cfg.get("tol_c", 0.01)),
        T_max=float(cfg.get("T_max", 2.0)),
        dt=float(cfg.get("dt", 1e-3)),
        source=source_name,
        criteria=_criteria_from_config(cfg),
        log=print,
    )
    result.write_csv(rundir.file("scan.csv"))
    headline: dict = {
        **src_headline,
        "bracket": list(result.bracket),
        "c_thresh": result.c_thresh,
        "indeterminate": result.indeterminate,
        "runs": len(result.runs),
    }
    if source_name == FREE_Q0:
        headline["critical_comparison"] = compare_to_critical(result, src_headline["q0_mass"])
    rundir.manifest("scan", cfg, grid, headline, t0)
    print(f"scan: bracket=({result.bracket[0]:.4f}, {result.bracket[1]:.4f}) c_thresh={result.c_thresh:.4f}")
    return headline


def _cmd_regime(cfg: dict, rundir: RunDir, t0: float) -> dict:
    params = _params_from_config(cfg)
    verdict = classify_regime(params)
    headline = {"kind": verdict.kind, "reason": verdict.reason, "detail": verdict.detail}
    rundir.manifest("regime", cfg, None, headline, t0)
    print(str(verdict))
    return headline


_COMMANDS = {
    "shoot": _cmd_shoot,
    "groundstate": _cmd_groundstate,
    "evolve": _cmd_evolve,
    "vortex-sweep": _cmd_vortex_sweep,
    "check-inequalities": _cmd_check_inequalities,
    "gauge-check": _cmd_gauge_check,
    "scan": _cmd_scan,
    "regime": _cmd_regime,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rnlslab",
        description="Spectral lab for rotational NLS: ground states, evolution, thresholds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--preset", choices=sorted(PRESETS), help="named preset config")
        p.add_argument("--output-dir", default=None, help="artifact directory")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a single config key (JSON-parsed value)",
        )
    listp = sub.add_parser("presets")
    listp.add_argument("--json", action="store_true")
    return parser


def _load_config(args) -> dict:
    cfg: dict = {}
    if args.preset:
        cfg.update(PRESETS[args.preset])
    if args.config:
        with open(args.config) as fh:
            cfg.update(json.load(fh))
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            cfg[key] = json.loads(raw)
        except json.JSONDecodeError:
            cfg[key] = raw
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "presets":
        if args.json:
            print(json.dumps(PRESETS, indent=2))
        else:
            for name in sorted(PRESETS):
                print(name)
        return 0
    try:
        cfg = _load_config(args)
        cfg.setdefault("command", args.command)
        if cfg["command"] != args.command:
            raise ConfigError(
                f"config is for {cfg['command']!r} but subcommand is {args.command!r}"
            )
        _validate_config(cfg, args.command)
        outdir = Path(args.output_dir or cfg.get("output_dir") or f"runs/{args.command}")
        rundir = RunDir(outdir)
        t0 = time.time()
        _COMMANDS[args.command](cfg, rundir, t0)
        return 0
    except RnlsError as exc:
        _emit_error(exc, exc.exit_code)
        return exc.exit_code
    except OSError as exc:
        _emit_error(exc, 4)
        return 4


def _emit_error(exc: Exception, code: int) -> None:
    record = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    print(json.dumps(record), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
