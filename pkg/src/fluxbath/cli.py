"""Command-line front end: scenario runners and CSV persistence.

Subcommands: match, simulate, steady, sweep, table1. Exit codes: 0 success,
2 configuration error, 3 failed validity checks under --strict, 4 solver
failure. CSV output is RFC-4180 with '# meta:' comment lines and %.12e
floats, so identical config and version give byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import subprocess
import sys
import warnings
from dataclasses import replace
from importlib import metadata
from pathlib import Path

import numpy as np

from . import analysis
from .config import ConfigError, RunConfig, load
from .optimize import Problem, steady_fidelity
from .lindblad import (
    SolverError,
    batch_map,
    effective_nbar,
    evolve,
    fidelity_target,
    mixed_qubit_with_resonator,
    scenario_liouvillian,
    standard_observables,
    steady_state,
)
from .model import SystemParams, TargetState, design_drive, frame_vectors, rwa_report
from .operators import partial_trace_resonator
from .units import to_two_pi_mhz, two_pi_ghz, two_pi_mhz

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDITY = 3
EXIT_SOLVER = 4


class ValidityError(RuntimeError):
    """A scale-separation check failed under --strict."""


def _version() -> str:
    root = Path(__file__).resolve()
    for parent in root.parents:
        if (parent / ".git").exists():
            try:
                out = subprocess.run(
                    ["git", "describe", "--always", "--dirty"],
                    cwd=parent, capture_output=True, text=True, timeout=5,
                )
                if out.returncode == 0 and out.stdout.strip():
                    return out.stdout.strip()
            except OSError:
                break
            break
    try:
        return metadata.version("fluxbath")
    except metadata.PackageNotFoundError:
        return "0.1.0+local"


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return f"{value:.12e}"


def _meta_lines(cfg: RunConfig | None, scenario: str, extra: dict | None = None) -> list[str]:
    items = {
        "tool": "fluxbath",
        "version": _version(),
        "scenario": scenario,
        "config_sha256": hashlib.sha256(
            (cfg.raw_text if cfg else "").encode("utf-8")
        ).hexdigest(),
    }
    if cfg is not None:
        if cfg.system is not None:
            items["fock"] = cfg.system.fock_cutoff
        items["rwa_margin"] = cfg.rwa_margin
        items["fock_drift_tol"] = cfg.fock_drift_tol
        items["relaxation_basis"] = cfg.relaxation_basis
    items.update(extra or {})
    return ["# meta: " + " ".join(f"{k}={v}" for k, v in items.items())]


def _write_csv(path: str, meta_lines: list[str], header: list[str],
               rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in meta_lines:
            fh.write(line + "\r\n")
        fh.write(",".join(header) + "\r\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, float) else str(v)
                              for v in row) + "\r\n")


def _resolve_drive(cfg: RunConfig):
    """(drive, effective target) from either config mode."""
    if cfg.drive is not None:
        return cfg.drive, cfg.target
    return design_drive(cfg.target, cfg.omega_bar, cfg.system)


def _check_strict(cfg: RunConfig, drive, target, strict: bool) -> None:
    if not strict:
        return
    failed = [c.name for c in rwa_report(cfg.system, drive, target, cfg.rwa_margin)
              if not c.passed]
    if failed:
        raise ValidityError("failed validity checks: " + ", ".join(failed))


def _warn_fock_drift(cfg: RunConfig, drive, target) -> None:
    """Re-solve the steady state at twice the cutoff and warn on drift."""
    if cfg.fock_drift_tol <= 0 or cfg.system.fock_cutoff > 16:
        return
    nbar = effective_nbar(cfg.system)
    fids = []
    for n in (cfg.system.fock_cutoff, 2 * cfg.system.fock_cutoff):
        sys_n = replace(cfg.system, nbar=nbar, temperature=None, fock_cutoff=n)
        rho = steady_state(scenario_liouvillian(
            sys_n, drive, nbar, cfg.relaxation_basis, target))
        fids.append(fidelity_target(rho, target))
    drift = abs(fids[1] - fids[0])
    if drift > cfg.fock_drift_tol:
        warnings.warn(
            f"steady fidelity drifts by {drift:.2e} when the Fock cutoff doubles "
            f"from {cfg.system.fock_cutoff}; raise --fock", stacklevel=2)


def cmd_match(cfg: RunConfig, strict: bool) -> int:
    if cfg.omega_bar is None:
        raise ConfigError("match needs omega_bar in [target] (it designs the drive)")
    drive, eff = design_drive(cfg.target, cfg.omega_bar, cfg.system)
    fv = frame_vectors(drive, eff)

    def mhz(x: float) -> str:
        return f"{to_two_pi_mhz(x):+.6f} 2pi MHz"

    print(f"target: theta={cfg.target.theta:.6f}, phi={cfg.target.phi:.6f}")
    if eff != cfg.target:
        print(f"  remapped to antipodal parameterization: theta'={eff.theta:.6f}, "
              f"phi'={eff.phi:.6f} (lower-hemisphere target)")
    print("designed drive:")
    print(f"  Re(Omega)   = {mhz(drive.omega_re)}")
    print(f"  Im(Omega)   = {mhz(drive.omega_im)}")
    print(f"  drive_freq  = {mhz(drive.drive_freq)}")
    print(f"  delta_varpi = {mhz(drive.delta_varpi)}")
    print(f"  delta_omega = {mhz(drive.delta_omega)}")
    print("frame vectors:")
    print(f"  omega_bar = {mhz(fv.omega_bar)}")
    print(f"  A = ({mhz(fv.a_x)}, {mhz(fv.a_y)}, {mhz(fv.a_z)})")
    print(f"  Theta_+ = {fv.theta_plus:+.6f}, Theta_- = {fv.theta_minus:+.6f}, "
          f"Theta_z = {fv.theta_z:+.6f}")
    print(f"  Delta_- = {mhz(fv.delta_minus)}, Delta_+ = {mhz(fv.delta_plus)}")
    checks = rwa_report(cfg.system, drive, eff, cfg.rwa_margin)
    print(f"validity checks (margin {cfg.rwa_margin:g}):")
    for c in checks:
        ratio = "inf" if math.isinf(c.ratio) else f"{c.ratio:10.3f}"
        print(f"  {c.name:22s} ratio={ratio}  {'PASS' if c.passed else 'FAIL'}")
    if strict and any(not c.passed for c in checks):
        raise ValidityError("failed validity checks: "
                            + ", ".join(c.name for c in checks if not c.passed))
    return EXIT_OK


def cmd_simulate(cfg: RunConfig, out: str, strict: bool,
                 workers: int | None) -> int:
    drive, eff = _resolve_drive(cfg)
    _check_strict(cfg, drive, eff, strict)
    header = ["t_seconds", "sigma_z_rot", "fidelity", "p_minus", "p_plus",
              "trace_dev", "min_eig"]
    meta = _meta_lines(cfg, "simulate", {"method": cfg.method})
    if cfg.t_max <= 0.0 or cfg.points <= 0:
        _write_csv(out, meta, header, [])
        return EXIT_OK
    _warn_fock_drift(cfg, drive, eff)
    nbar = effective_nbar(cfg.system)
    liouvillian = scenario_liouvillian(cfg.system, drive, nbar,
                                       cfg.relaxation_basis, eff)
    rho0 = mixed_qubit_with_resonator(cfg.system, nbar)
    t_grid = np.linspace(0.0, cfg.t_max, cfg.points)
    traj = evolve(liouvillian, rho0, t_grid,
                  standard_observables(eff, cfg.system.fock_cutoff),
                  method=cfg.method)
    rows = [
        [float(t),
         float(traj.series["sigma_z_rot"][k]),
         float(traj.series["fidelity"][k]),
         float(traj.series["p_minus"][k]),
         float(traj.series["p_plus"][k]),
         float(traj.series["trace_dev"][k]),
         float(traj.series["min_eig"][k])]
        for k, t in enumerate(traj.times)
    ]
    _write_csv(out, meta, header, rows)
    return EXIT_OK


def cmd_steady(cfg: RunConfig, out: str, strict: bool) -> int:
    drive, eff = _resolve_drive(cfg)
    _check_strict(cfg, drive, eff, strict)
    _warn_fock_drift(cfg, drive, eff)
    nbar = effective_nbar(cfg.system)
    liouvillian = scenario_liouvillian(cfg.system, drive, nbar,
                                       cfg.relaxation_basis, eff)
    rho, info = steady_state(liouvillian, return_info=True)
    fid = fidelity_target(rho, eff)
    kp = eff.ket_plus()
    reduced = partial_trace_resonator(rho).matrix
    p_plus = float(np.real(kp.conj() @ reduced @ kp))
    rows = [[fid, fid, p_plus, info["residual"], info["residual_raw"]]]
    _write_csv(out, _meta_lines(cfg, "steady"),
               ["fidelity", "p_minus", "p_plus", "residual", "residual_raw"], rows)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, out: str, strict: bool, workers: int | None) -> int:
    kind = cfg.sweep["kind"]
    workers = workers if workers is not None else cfg.workers
    if kind == "rate_map":
        rows = [
            [float(x), float(th), (1.0 + math.cos(th)) ** 2 / (1.0 + 4.0 * x * x)]
            for x in cfg.sweep["delta_over_kappa"]
            for th in cfg.sweep["theta"]
        ]
        _write_csv(out, _meta_lines(cfg, "sweep", {"kind": kind}),
                   ["delta_over_kappa", "theta", "gamma_z_units_g2_over_kappa"], rows)
        return EXIT_OK

    if kind == "robustness":
        drive, eff = design_drive(cfg.target, cfg.omega_bar, cfg.system)
        _check_strict(cfg, drive, eff, strict)
        _warn_fock_drift(cfg, drive, eff)
        grid = analysis.robustness_map(
            drive, eff, cfg.system,
            cfg.sweep["delta_r"], cfg.sweep["delta_i"],
            horizon_factor=cfg.sweep["horizon_factor"],
            time_points=cfg.sweep["time_points"],
            workers=workers,
        )
        rows = [
            [float(dr), float(di),
             float(grid.infidelity[i, j]),
             float(grid.infidelity[i, j] * 1e3),   # same quantity in units of 1e-3
             float(grid.time_to_threshold[i, j])]
            for i, dr in enumerate(grid.delta_r)
            for j, di in enumerate(grid.delta_i)
        ]
        _write_csv(out, _meta_lines(cfg, "sweep", {"kind": kind}),
                   ["delta_r", "delta_i", "infidelity", "infidelity_milli",
                    "time_to_99_seconds"], rows)
        return EXIT_OK

    # dimensionless fidelity maps, full-model steady states
    sw = cfg.sweep
    if kind == "fidelity_theta_phi":
        points = [(th, ph, sw["gamma"]) for th in sw["theta"] for ph in sw["phi"]]
        header = ["theta", "phi", "fidelity"]
    else:
        points = [(th, sw["phi"], gm) for gm in sw["gamma"] for th in sw["theta"]]
        header = ["gamma", "theta", "fidelity"]

    def solve(point, fock=None):
        theta, phi, gamma = point
        problem = Problem(
            target=TargetState(theta, phi % (2.0 * math.pi)),
            gamma=gamma, omega_bar=sw["omega_bar"], nbar=sw["nbar"],
            fock_cutoff=fock if fock is not None else sw["fock"],
        )
        return steady_fidelity(sw["eta"], sw["zeta"], problem)

    if cfg.fock_drift_tol > 0:
        drift = abs(solve(points[0], fock=2 * sw["fock"]) - solve(points[0]))
        if drift > cfg.fock_drift_tol:
            warnings.warn(f"fidelity drifts by {drift:.2e} when the Fock cutoff "
                          f"doubles from {sw['fock']}; raise [sweep] fock",
                          stacklevel=2)
    fidelities = batch_map(solve, points, workers)
    if kind == "fidelity_theta_phi":
        rows = [[float(p[0]), float(p[1]), float(f)]
                for p, f in zip(points, fidelities)]
    else:
        rows = [[float(p[2]), float(p[0]), float(f)]
                for p, f in zip(points, fidelities)]
    _write_csv(out, _meta_lines(cfg, "sweep",
                                {"kind": kind, "steady_source": "full_lindblad"}),
               header, rows)
    return EXIT_OK


def _default_table1_system(fock: int = 8) -> SystemParams:
    return SystemParams(
        omega_c=two_pi_ghz(6.0), omega_sc=two_pi_ghz(6.0),
        g=two_pi_mhz(2.0), kappa=two_pi_mhz(20.0),
        nbar=0.0, fock_cutoff=fock,
    )


def cmd_table1(cfg: RunConfig | None, out: str | None, tcl_only: bool,
               workers: int | None, fock: int | None) -> int:
    system = cfg.system if cfg is not None and cfg.system is not None \
        else _default_table1_system(fock or 8)
    rows = analysis.table1_report(system, tcl_only=tcl_only, workers=workers)
    print(f"{'axis':4s} {'1/rate (us)':>12s} {'simulated (us)':>15s} {'ratio':>8s}")
    for r in rows:
        sim = f"{r.t_simulated * 1e6:15.4f}" if not math.isnan(r.t_simulated) else " " * 12 + "---"
        ratio = f"{r.ratio:8.4f}" if not math.isnan(r.ratio) else "     ---"
        print(f"{r.axis:4s} {r.t_reduced * 1e6:12.4f} {sim} {ratio}")
    if out:
        csv_rows = [
            [r.axis, float(r.drive.omega_re), float(r.drive.omega_im),
             float(r.drive.delta_varpi), float(r.drive.delta_omega),
             float(r.t_reduced), float(r.t_simulated), float(r.ratio)]
            for r in rows
        ]
        _write_csv(out, _meta_lines(cfg, "table1", {"tcl_only": tcl_only}),
                   ["axis", "omega_re", "omega_im", "delta_varpi", "delta_omega",
                    "t_reduced_seconds", "t_simulated_seconds", "ratio"], csv_rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxbath",
        description="Resonator bath engineering of a driven qubit: drive design, "
                    "master-equation simulation, and parameter studies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, needs_out: bool, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=name != "table1",
                       help="path to the key=value run configuration")
        p.add_argument("--fock", type=int, default=None,
                       help="override the resonator Fock cutoff")
        p.add_argument("--workers", type=int, default=None,
                       help="worker threads for grid sweeps")
        p.add_argument("--strict", action="store_true",
                       help="exit 3 when any validity check fails")
        if needs_out or name == "table1":
            p.add_argument("--out", required=needs_out,
                           help="output CSV path")
        return p

    add("match", False, "design a drive for a Bloch target and audit validity")
    add("simulate", True, "integrate the full master equation, write a trajectory CSV")
    add("steady", True, "solve the stationary state, write a one-row CSV")
    add("sweep", True, "run a gridded parameter study, write a long-format CSV")
    p_table = add("table1", False, "polarization times for the x, y, z axis targets")
    p_table.add_argument("--tcl-only", action="store_true",
                         help="skip the full simulations (reduced model only)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "table1":
            cfg = load(args.config, "table1", args.fock) if args.config else None
            return cmd_table1(cfg, args.out, args.tcl_only, args.workers, args.fock)
        cfg = load(args.config, args.command, args.fock)
        if args.command == "match":
            return cmd_match(cfg, args.strict)
        if args.command == "simulate":
            return cmd_simulate(cfg, args.out, args.strict, args.workers)
        if args.command == "steady":
            return cmd_steady(cfg, args.out, args.strict)
        return cmd_sweep(cfg, args.out, args.strict, args.workers)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidityError as err:
        print(f"validity error: {err}", file=sys.stderr)
        return EXIT_VALIDITY
    except SolverError as err:
        print(f"solver error: {err}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
