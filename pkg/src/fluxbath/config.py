"""Run configuration: flat sectioned key=value files.

Frequencies accept the suffixes ``MHz2pi``, ``GHz2pi`` and ``rad_s`` (for
example ``kappa = 20MHz2pi``); grid axes use ``lo:hi:n``. Scenarios that
drive the joint model (match, simulate, steady, the robustness sweep) need a
[system] section, [target] angles, and either an explicit [drive] section or
``omega_bar`` in [target]; the dimensionless fidelity sweeps and the
analytic rate map carry everything in [sweep].
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field

import numpy as np

from .model import DriveParams, SystemParams, TargetState
from .units import TWO_PI_GHZ, TWO_PI_MHZ

SCENARIOS = ("match", "simulate", "steady", "sweep", "table1")
SWEEP_KINDS = ("rate_map", "robustness", "fidelity_theta_phi", "fidelity_gamma_theta")

_MISSING = object()


class ConfigError(ValueError):
    """Invalid or incomplete run configuration."""


def parse_frequency(text: str) -> float:
    """An angular frequency with required unit suffix, returned in rad/s."""
    text = text.strip()
    for suffix, factor in (("MHz2pi", TWO_PI_MHZ), ("GHz2pi", TWO_PI_GHZ), ("rad_s", 1.0)):
        if text.endswith(suffix):
            try:
                return float(text[: -len(suffix)]) * factor
            except ValueError:
                raise ConfigError(f"bad frequency value {text!r}") from None
    raise ConfigError(
        f"frequency {text!r} needs a unit suffix: MHz2pi, GHz2pi or rad_s"
    )


def parse_grid(text: str) -> np.ndarray:
    """A 'lo:hi:n' axis specification as an inclusive linspace."""
    parts = text.strip().split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid {text!r} must be 'lo:hi:n'")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"bad grid specification {text!r}") from None
    if n < 1:
        raise ConfigError(f"grid {text!r} needs at least one point")
    if n == 1:
        return np.array([lo])
    return np.linspace(lo, hi, n)


class _Section:
    """One config section with error messages that name the missing key."""

    def __init__(self, parser: configparser.ConfigParser, name: str):
        self._name = name
        self._data = dict(parser[name]) if parser.has_section(name) else {}

    def __contains__(self, key: str) -> bool:
        return key in self._data

    def get(self, key: str, convert, default=_MISSING):
        if key not in self._data:
            if default is _MISSING:
                raise ConfigError(f"missing key {key!r} in section [{self._name}]")
            return default
        try:
            return convert(self._data[key])
        except ConfigError:
            raise
        except ValueError as err:
            raise ConfigError(f"[{self._name}] {key}: {err}") from None


@dataclass(frozen=True, eq=False)
class RunConfig:
    scenario: str
    system: SystemParams | None
    target: TargetState | None
    omega_bar: float | None            # designed-drive mode
    drive: DriveParams | None          # explicit-drive mode
    t_max: float
    points: int
    method: str
    sweep: dict = field(default_factory=dict)
    workers: int | None = None
    relaxation_basis: str = "energy"
    rwa_margin: float = 10.0
    fock_drift_tol: float = 1e-4
    raw_text: str = ""


def load(path: str, scenario: str, fock_override: int | None = None) -> RunConfig:
    """Read and validate a configuration file for the given scenario."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path, encoding="utf-8") as fh:
            raw_text = fh.read()
        parser.read_string(raw_text)
    except OSError as err:
        raise ConfigError(f"cannot read config {path!r}: {err}") from None
    except configparser.Error as err:
        raise ConfigError(f"cannot parse config {path!r}: {err}") from None

    run = _Section(parser, "run")
    declared = run.get("scenario", str, scenario)
    if declared != scenario:
        raise ConfigError(
            f"config declares scenario {declared!r} but {scenario!r} was requested"
        )

    sweep = _load_sweep(parser) if scenario == "sweep" else {}
    needs_model = scenario in ("match", "simulate", "steady") or (
        scenario == "sweep" and sweep.get("kind") == "robustness"
    )

    system = target = omega_bar = drive = None
    if needs_model or parser.has_section("system"):
        system = _load_system(parser, fock_override)
    if needs_model:
        target, omega_bar = _load_target(parser)
        drive = _load_drive(parser, system)
        if (drive is None) == (omega_bar is None):
            raise ConfigError(
                "give exactly one of an explicit [drive] section or omega_bar in [target]"
            )
        if scenario == "sweep" and drive is not None:
            raise ConfigError("the robustness sweep needs a designed drive "
                              "(omega_bar in [target]), not an explicit [drive]")

    sim = _Section(parser, "simulate")
    method = sim.get("method", str, "expm")
    if method not in ("expm", "rk"):
        raise ConfigError(f"[simulate] method must be 'expm' or 'rk', got {method!r}")

    tol = _Section(parser, "tolerances")
    basis = run.get("relaxation_basis", str, "energy")
    if basis not in ("energy", "rotated"):
        raise ConfigError(f"relaxation_basis must be 'energy' or 'rotated', got {basis!r}")

    return RunConfig(
        scenario=scenario,
        system=system,
        target=target,
        omega_bar=omega_bar,
        drive=drive,
        t_max=sim.get("t_max", float, 0.0),
        points=sim.get("points", int, 400),
        method=method,
        sweep=sweep,
        workers=run.get("workers", int, None),
        relaxation_basis=basis,
        rwa_margin=tol.get("rwa_margin", float, 10.0),
        fock_drift_tol=tol.get("fock_drift", float, 1e-4),
        raw_text=raw_text,
    )


def _load_system(parser: configparser.ConfigParser, fock_override: int | None) -> SystemParams:
    sec = _Section(parser, "system")
    nbar = sec.get("nbar", float, None)
    temperature = sec.get("t_c", float, None)
    if (nbar is None) == (temperature is None):
        raise ConfigError("[system] needs exactly one of nbar or t_c")
    try:
        return SystemParams(
            omega_c=sec.get("omega_c", parse_frequency),
            omega_sc=sec.get("omega_sc", parse_frequency),
            g=sec.get("g", parse_frequency),
            kappa=sec.get("kappa", parse_frequency),
            gamma_s=sec.get("gamma_s", parse_frequency, 0.0),
            gamma_p=sec.get("gamma_p", parse_frequency, 0.0),
            temperature=temperature,
            nbar=nbar,
            fock_cutoff=fock_override if fock_override is not None
            else sec.get("fock", int, 8),
        )
    except ValueError as err:
        raise ConfigError(f"[system]: {err}") from None


def _load_target(parser: configparser.ConfigParser) -> tuple[TargetState, float | None]:
    sec = _Section(parser, "target")
    try:
        target = TargetState(sec.get("theta", float), sec.get("phi", float))
    except ValueError as err:
        raise ConfigError(f"[target]: {err}") from None
    return target, sec.get("omega_bar", parse_frequency, None)


def _load_drive(parser: configparser.ConfigParser, system: SystemParams) -> DriveParams | None:
    if not parser.has_section("drive"):
        return None
    sec = _Section(parser, "drive")
    return DriveParams.for_system(
        system,
        omega_re=sec.get("omega_re", parse_frequency),
        omega_im=sec.get("omega_im", parse_frequency),
        drive_freq=sec.get("drive_freq", parse_frequency),
        counter_rotating=sec.get("counter_rotating", parse_frequency, 0.0),
    )


def _load_sweep(parser: configparser.ConfigParser) -> dict:
    sec = _Section(parser, "sweep")
    kind = sec.get("kind", str)
    if kind not in SWEEP_KINDS:
        raise ConfigError(f"[sweep] kind must be one of {SWEEP_KINDS}, got {kind!r}")
    out: dict = {"kind": kind}
    if kind == "rate_map":
        out["delta_over_kappa"] = sec.get("delta_over_kappa", parse_grid)
        out["theta"] = sec.get("theta", parse_grid)
    elif kind == "robustness":
        out["delta_r"] = sec.get("delta_r", parse_grid)
        out["delta_i"] = sec.get("delta_i", parse_grid)
        out["time_points"] = sec.get("time_points", int, 400)
        out["horizon_factor"] = sec.get("horizon_factor", float, 12.0)
    else:
        # dimensionless fidelity maps carry their own scales
        out["eta"] = sec.get("eta", float)
        out["zeta"] = sec.get("zeta", float)
        out["omega_bar"] = sec.get("omega_bar", parse_frequency)
        out["nbar"] = sec.get("nbar", float, 0.0)
        out["fock"] = sec.get("fock", int, 8)
        if kind == "fidelity_theta_phi":
            out["theta"] = sec.get("theta", parse_grid)
            out["phi"] = sec.get("phi", parse_grid)
            out["gamma"] = sec.get("gamma", float)
        else:
            out["gamma"] = sec.get("gamma", parse_grid)
            out["theta"] = sec.get("theta", parse_grid)
            out["phi"] = sec.get("phi", float, math.pi)
    return out
