"""Observable post-processing: exponential fits, robustness maps, rate tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import tcl
from .lindblad import (
    SolverError,
    Trajectory,
    batch_map,
    effective_nbar,
    evolve,
    fidelity_target,
    mixed_qubit_with_resonator,
    scenario_liouvillian,
    standard_observables,
    steady_state,
)
from .model import DriveParams, SystemParams, TargetState, design_drive, drive_direction
from .units import two_pi_mhz

POLARIZED_THRESHOLD = 0.99


def fit_exponential(t: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Fit y = 1 - exp(-t/T) to a normalized polarization curve.

    Linearizes log(1 - y) through the origin (dropping samples within 1e-6 of
    saturation), then takes one Gauss-Newton step on the nonlinear model.
    Returns (T, rms residual). Raises on saturated-everywhere input or when
    the trend is not a growing exponential.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.size < 4:
        raise ValueError("need at least 4 samples")
    usable = (1.0 - y) >= 1e-6
    if np.sum(usable) < 2:
        raise ValueError("curve is saturated everywhere; no rate information left")
    ts, ys = t[usable], y[usable]
    z = np.log(1.0 - ys)
    denom = float(np.sum(ts * ts))
    if denom == 0.0:
        raise ValueError("degenerate time grid")
    # trend check with a free intercept: log(1 - y) must fall with t, which a
    # through-origin slope alone cannot distinguish from decaying data
    trend = np.polyfit(ts, z, 1)[0] if ts.size > 1 else 0.0
    s = -float(np.sum(ts * z)) / denom
    if s <= 0.0 or trend >= 0.0:
        raise ValueError("data does not grow toward 1; cannot fit an exponential")
    # one Gauss-Newton pass on r(s) = y - (1 - exp(-s t)) over the usable samples
    e = np.exp(-s * ts)
    r = ys - 1.0 + e
    j = -ts * e
    jj = float(np.sum(j * j))
    if jj > 0.0:
        s = s - float(np.sum(j * r)) / jj
    residual = float(np.sqrt(np.mean((y - 1.0 + np.exp(-s * t)) ** 2)))
    return 1.0 / s, residual


def normalized_sigma_z(traj: Trajectory) -> np.ndarray:
    """The polarization curve -<sigma_Z>(t); 1 means fully on target."""
    if "sigma_z_rot" not in traj.series:
        raise KeyError("trajectory has no 'sigma_z_rot' series")
    return -traj.series["sigma_z_rot"]


def time_to_threshold(times: np.ndarray, values: np.ndarray,
                      threshold: float = POLARIZED_THRESHOLD) -> float:
    """First time the series reaches the threshold, linearly interpolated.

    Returns inf when the threshold is never reached on the grid.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    above = np.nonzero(values >= threshold)[0]
    if above.size == 0:
        return math.inf
    k = int(above[0])
    if k == 0:
        return float(times[0])
    t0, t1 = times[k - 1], times[k]
    v0, v1 = values[k - 1], values[k]
    if v1 == v0:
        return float(t1)
    return float(t0 + (threshold - v0) * (t1 - t0) / (v1 - v0))


@dataclass(frozen=True, eq=False)
class RobustnessGrid:
    """Steady-state infidelity and polarization time over drive-amplitude errors."""

    delta_r: np.ndarray
    delta_i: np.ndarray
    infidelity: np.ndarray          # shape (len(delta_r), len(delta_i))
    time_to_threshold: np.ndarray   # same shape; inf where never polarized

    def __post_init__(self):
        for axis in (self.delta_r, self.delta_i):
            if axis.size > 1 and not np.all(np.diff(axis) > 0):
                raise ValueError("grid axes must be strictly increasing")
        shape = (self.delta_r.size, self.delta_i.size)
        if self.infidelity.shape != shape or self.time_to_threshold.shape != shape:
            raise ValueError("grid matrices must be (len(delta_r), len(delta_i))")
        if np.any((self.infidelity < 0) | (self.infidelity > 1)):
            raise ValueError("infidelities must lie in [0, 1]")


def robustness_map(base: DriveParams, target: TargetState, sys: SystemParams,
                   delta_r: np.ndarray, delta_i: np.ndarray,
                   threshold: float = POLARIZED_THRESHOLD,
                   horizon_factor: float = 12.0, time_points: int = 400,
                   workers: int | None = None) -> RobustnessGrid:
    """Scan fractional errors of the two Rabi quadratures.

    Each grid point perturbs Omega_re -> Omega_re (1 + d_R) and
    Omega_im -> Omega_im (1 + d_I) with both detunings held fixed, so the
    effective precession rate and the sideband matching shift. Two columns
    are recorded per point:

    * infidelity: 1 - F against the intended target at the steady state
      (where the qubit ends up);
    * time_to_threshold: how fast -<sigma_Z> crosses the threshold, measured
      in the frame of the axis the perturbed drive actually polarizes. A
      quadrature error tilts that axis, so the intended-frame polarization
      can saturate below threshold even though the qubit polarizes quickly;
      separating speed from pointing error keeps both columns meaningful.
      inf marks points that never cross.
    """
    delta_r = np.asarray(delta_r, dtype=float)
    delta_i = np.asarray(delta_i, dtype=float)
    nbar = effective_nbar(sys)
    rho0 = mixed_qubit_with_resonator(sys, nbar)

    def solve_point(point: tuple[float, float]) -> tuple[float, float]:
        d_r, d_i = point
        drive = replace(base, omega_re=base.omega_re * (1.0 + d_r),
                        omega_im=base.omega_im * (1.0 + d_i))
        try:
            liouvillian = scenario_liouvillian(sys, drive, nbar)
            rho_ss = steady_state(liouvillian)
            infid = 1.0 - fidelity_target(rho_ss, target)
            eff, wbar_eff = drive_direction(drive)
            rate = tcl.gamma_z(sys.g, sys.kappa, eff.theta,
                               drive.delta_omega - 2.0 * wbar_eff)
            t_pol = 1.0 / (rate * (2.0 * nbar + 1.0))
            t_grid = np.linspace(0.0, horizon_factor * t_pol, time_points)
            traj = evolve(liouvillian, rho0, t_grid,
                          standard_observables(eff, sys.fock_cutoff))
            t99 = time_to_threshold(traj.times, normalized_sigma_z(traj), threshold)
        except SolverError as err:
            raise SolverError(
                f"robustness grid point (d_R={d_r:+.3f}, d_I={d_i:+.3f}): {err}"
            ) from err
        return infid, t99

    points = [(d_r, d_i) for d_r in delta_r for d_i in delta_i]
    results = batch_map(solve_point, points, workers)
    infid = np.array([r[0] for r in results]).reshape(delta_r.size, delta_i.size)
    t99 = np.array([r[1] for r in results]).reshape(delta_r.size, delta_i.size)
    return RobustnessGrid(delta_r, delta_i, infid, t99)


AXIS_TARGETS = {
    "x": TargetState(math.pi / 2.0, math.pi),
    "y": TargetState(math.pi / 2.0, math.pi / 2.0),
    "z": TargetState(0.0, 0.0),
}


@dataclass(frozen=True)
class PolarizationRow:
    """One cardinal-axis row: reduced-model time vs full-simulation fit."""

    axis: str
    drive: DriveParams
    t_reduced: float
    t_simulated: float   # nan when the simulation was skipped
    ratio: float         # t_simulated / t_reduced


def table1_report(sys: SystemParams, omega_bar: float | None = None,
                  tcl_only: bool = False, time_points: int = 400,
                  horizon_factor: float = 3.0,
                  workers: int | None = None) -> list[PolarizationRow]:
    """Polarization times for the x, y, z axis targets at a matched drive.

    The reduced-model time is 1/(Gamma_Z (2 nbar + 1)); the simulated time is
    an exponential fit to the full-model -<sigma_Z>(t) starting from a
    maximally mixed qubit. `tcl_only` skips the simulations.
    """
    if omega_bar is None:
        omega_bar = two_pi_mhz(100.0)
    nbar = effective_nbar(sys)

    def solve_axis(axis: str) -> PolarizationRow:
        target = AXIS_TARGETS[axis]
        drive, eff = design_drive(target, omega_bar, sys)
        t_reduced = tcl.polarization_time(sys.g, sys.kappa, eff.theta, 0.0, nbar)
        if tcl_only:
            return PolarizationRow(axis, drive, t_reduced, math.nan, math.nan)
        liouvillian = scenario_liouvillian(sys, drive, nbar)
        rho0 = mixed_qubit_with_resonator(sys, nbar)
        t_grid = np.linspace(0.0, horizon_factor * t_reduced, time_points)
        traj = evolve(liouvillian, rho0, t_grid,
                      standard_observables(eff, sys.fock_cutoff))
        t_sim, _ = fit_exponential(traj.times, normalized_sigma_z(traj))
        return PolarizationRow(axis, drive, t_reduced, t_sim, t_sim / t_reduced)

    return batch_map(solve_axis, ["x", "y", "z"], workers)
