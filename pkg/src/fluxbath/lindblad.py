"""Full master equation of the driven qubit-resonator system.

The generator acts on column-vectorized density matrices,

    d/dt vec(rho) = L vec(rho),
    L = -i (I (x) H - H^T (x) I)
        + sum_k rate_k [2 conj(C_k) (x) C_k - I (x) C_k^dag C_k
                        - (C_k^dag C_k)^T (x) I],

i.e. each (C, rate) pair contributes rate * (2 C rho C^dag - {C^dag C, rho}).
Note the factor 2 inside the dissipator: the pair (a, kappa/2) gives photon
loss at rate kappa, (sigma_-, gamma_s/2) gives T1 = 1/gamma_s, and
(sigma_z, gamma_p/2) decays coherences at 2*gamma_p.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
import scipy.constants
import scipy.integrate
import scipy.linalg

from .model import DriveParams, SystemParams, TargetState
from .operators import (
    DensityMatrix,
    Operator,
    annihilation,
    identity,
    joint_tag,
    kron,
    pauli,
    partial_trace_resonator,
    thermal_state,
    unvec,
    vec,
)

# Trajectory hygiene thresholds; a breach is an error, never silently clipped.
TRACE_DEV_MAX = 1e-9
HERM_DEV_MAX = 1e-10
MIN_EIG_FLOOR = -1e-8


class SolverError(RuntimeError):
    """A numerical solve failed or produced an unphysical state."""


class AmbiguousSteadyStateError(SolverError):
    """The generator has more than one stationary state."""


class HygieneError(SolverError):
    """A trajectory state broke the trace/Hermiticity/positivity thresholds."""


def thermal_occupation(omega_c: float, temperature: float) -> float:
    """Bose-Einstein occupation of a mode at omega_c (rad/s) and T (kelvin)."""
    if omega_c <= 0:
        raise ValueError("omega_c must be > 0")
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if temperature == 0.0:
        return 0.0
    x = scipy.constants.hbar * omega_c / (scipy.constants.k * temperature)
    if x > 700.0:  # exp would overflow; the occupation is zero anyway
        return 0.0
    return 1.0 / (math.expm1(x))


def effective_nbar(sys: SystemParams) -> float:
    """Resonator bath occupation from whichever temperature input was given."""
    if sys.nbar is not None:
        return sys.nbar
    return thermal_occupation(sys.omega_c, sys.temperature)


@dataclass(frozen=True, eq=False)
class Liouvillian:
    """Vectorized generator plus the ingredients it was built from."""

    matrix: np.ndarray
    dim: int
    hamiltonian: Operator
    dissipators: tuple[tuple[Operator, float], ...]

    @property
    def space(self) -> str | None:
        return self.hamiltonian.space


def build_liouvillian(hamiltonian: Operator,
                      dissipators: Sequence[tuple[Operator, float]]) -> Liouvillian:
    """Assemble the vectorized generator for H plus (collapse, rate) pairs."""
    h = hamiltonian.matrix
    d = h.shape[0]
    if h.shape != (d, d):
        raise ValueError("Hamiltonian must be square")
    eye = np.eye(d)
    mat = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for c_op, rate in dissipators:
        c = c_op.matrix
        if c.shape != (d, d):
            raise ValueError(
                f"collapse operator shape {c.shape} does not match dimension {d}"
            )
        cdc = c.conj().T @ c
        mat += rate * (2.0 * np.kron(c.conj(), c)
                       - np.kron(eye, cdc) - np.kron(cdc.T, eye))
    return Liouvillian(mat, d, hamiltonian, tuple((op, float(r)) for op, r in dissipators))


def standard_dissipators(sys: SystemParams, nbar: float | None = None,
                         relaxation_basis: str = "energy",
                         target: TargetState | None = None,
                         ) -> list[tuple[Operator, float]]:
    """The joint-space collapse set: thermal photon loss/gain plus qubit decay
    and pure dephasing.

    Pairs are (a, kappa(1+nbar)/2), (a^dag, kappa nbar/2),
    (sigma_-, gamma_s/2), (sigma_z, gamma_p/2); zero-rate pairs are dropped.
    Intrinsic relaxation acts through the energy-eigenbasis sigma_- by
    default; `relaxation_basis="rotated"` instead lowers along the target
    frame (requires `target`), kept only for comparison studies.
    """
    if nbar is None:
        nbar = effective_nbar(sys)
    n_max = sys.fock_cutoff
    a = annihilation(n_max)
    id_r = identity(n_max + 1, "resonator")
    id_q = identity(2, "qubit")

    if relaxation_basis == "energy":
        lower = pauli("-")
    elif relaxation_basis == "rotated":
        if target is None:
            raise ValueError("rotated relaxation basis requires a target")
        km, kp = target.ket_minus(), target.ket_plus()
        lower = Operator(np.outer(km, kp.conj()), "qubit")
    else:
        raise ValueError(f"unknown relaxation basis {relaxation_basis!r}")

    pairs = [
        (kron(id_q, a), 0.5 * sys.kappa * (1.0 + nbar)),
        (kron(id_q, a.dag()), 0.5 * sys.kappa * nbar),
        (kron(lower, id_r), 0.5 * sys.gamma_s),
        (kron(pauli("z"), id_r), 0.5 * sys.gamma_p),
    ]
    return [(op, rate) for op, rate in pairs if rate > 0.0]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Named observable series on a shared time grid, plus per-step hygiene."""

    times: np.ndarray
    series: dict[str, np.ndarray]
    final: np.ndarray   # raw final density matrix

    def __post_init__(self):
        for name, values in self.series.items():
            if len(values) != len(self.times):
                raise ValueError(f"series {name!r} length does not match time grid")


ObservableFn = Callable[[np.ndarray], float]


def standard_observables(target: TargetState, n_max: int) -> dict[str, ObservableFn]:
    """Target-frame observables evaluated on the reduced qubit state.

    The rotated <sigma_Z> is assembled from the plain Pauli expectations of
    the 2x2 reduced state rather than from joint-space operators.
    """
    st, ct = math.sin(target.theta), math.cos(target.theta)
    sp, cp = math.sin(target.phi), math.cos(target.phi)
    km, kp = target.ket_minus(), target.ket_plus()
    proj_minus = np.outer(km, km.conj())
    proj_plus = np.outer(kp, kp.conj())
    sx, sy, sz = pauli("x").matrix, pauli("y").matrix, pauli("z").matrix
    dim_r = n_max + 1

    def reduced(rho: np.ndarray) -> np.ndarray:
        return np.einsum("ikjk->ij", rho.reshape(2, dim_r, 2, dim_r))

    def sigma_z_rot(rho: np.ndarray) -> float:
        q = reduced(rho)
        return float(np.real(-st * cp * np.trace(q @ sx) + st * sp * np.trace(q @ sy)
                             + ct * np.trace(q @ sz)))

    def fidelity(rho: np.ndarray) -> float:
        return float(np.real(np.trace(reduced(rho) @ proj_minus)))

    def p_plus(rho: np.ndarray) -> float:
        return float(np.real(np.trace(reduced(rho) @ proj_plus)))

    return {
        "sigma_z_rot": sigma_z_rot,
        "fidelity": fidelity,
        "p_minus": fidelity,
        "p_plus": p_plus,
    }


def _hygiene(rho: np.ndarray, t: float, enforce: bool) -> tuple[float, float, float]:
    trace_dev = abs(np.trace(rho) - 1.0)
    herm_dev = float(np.max(np.abs(rho - rho.conj().T)))
    min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2.0).min())
    if enforce and (trace_dev > TRACE_DEV_MAX or herm_dev > HERM_DEV_MAX
                    or min_eig < MIN_EIG_FLOOR):
        raise HygieneError(
            f"state at t={t:.6e} s broke hygiene: |tr-1|={trace_dev:.3e}, "
            f"|rho-rho^dag|={herm_dev:.3e}, min eig={min_eig:.3e}"
        )
    return float(trace_dev), herm_dev, min_eig


def _expm_cache_key(dt: float) -> str:
    return np.format_float_scientific(dt, precision=12)


def evolve(liouvillian: Liouvillian, rho0: DensityMatrix, t_grid: np.ndarray,
           observables: Mapping[str, Operator | ObservableFn] | None = None,
           method: str = "expm", rtol: float = 1e-9,
           enforce_hygiene: bool = True) -> Trajectory:
    """Propagate rho0 over t_grid and record observables plus hygiene series.

    method="expm" exponentiates L*dt once per distinct step size and reuses
    it; method="rk" integrates with an adaptive explicit Runge-Kutta pair at
    the given relative tolerance, with the maximum step capped at one
    twentieth of the fastest Hamiltonian period.
    """
    times = np.asarray(t_grid, dtype=float)
    if times.size == 0:
        return Trajectory(times, {}, rho0.matrix.copy())
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise ValueError("time grid must be strictly increasing")

    obs_fns: dict[str, ObservableFn] = {}
    for name, obs in (observables or {}).items():
        if isinstance(obs, Operator):
            mat = obs.matrix
            obs_fns[name] = lambda rho, m=mat: float(np.real(np.trace(rho @ m)))
        else:
            obs_fns[name] = obs

    series: dict[str, list[float]] = {name: [] for name in obs_fns}
    hygiene: dict[str, list[float]] = {"trace_dev": [], "herm_dev": [], "min_eig": []}
    final = rho0.matrix
    # lazy propagation: a hygiene breach stops before the next step is taken
    for t, rho in zip(times, _propagate(liouvillian, rho0.matrix, times, method, rtol)):
        trace_dev, herm_dev, min_eig = _hygiene(rho, t, enforce_hygiene)
        hygiene["trace_dev"].append(trace_dev)
        hygiene["herm_dev"].append(herm_dev)
        hygiene["min_eig"].append(min_eig)
        for name, fn in obs_fns.items():
            series[name].append(fn(rho))
        final = rho

    all_series = {name: np.asarray(v) for name, v in {**series, **hygiene}.items()}
    return Trajectory(times, all_series, final)


def _propagate(liouvillian: Liouvillian, rho0: np.ndarray, times: np.ndarray,
               method: str, rtol: float):
    mat = liouvillian.matrix
    if method == "expm":
        v = vec(rho0)
        yield rho0.copy()
        cache: dict[str, np.ndarray] = {}
        for dt in np.diff(times):
            key = _expm_cache_key(float(dt))
            if key not in cache:
                cache[key] = scipy.linalg.expm(mat * float(dt))
            v = cache[key] @ v
            yield unvec(v)
        return
    if method == "rk":
        if times.size == 1:
            yield rho0.copy()
            return
        h_eigs = np.linalg.eigvalsh(liouvillian.hamiltonian.matrix)
        omega_max = float(np.max(np.abs(h_eigs)))
        max_step = (2.0 * math.pi / omega_max) / 20.0 if omega_max > 0 else np.inf
        sol = scipy.integrate.solve_ivp(
            lambda _t, y: mat @ y,
            (times[0], times[-1]),
            vec(rho0),
            method="RK45",
            t_eval=times,
            rtol=rtol,
            atol=1e-12,
            max_step=max_step,
        )
        if not sol.success:
            raise SolverError(f"Runge-Kutta integration failed: {sol.message}")
        yield from (unvec(sol.y[:, k]) for k in range(sol.y.shape[1]))
        return
    raise ValueError(f"unknown method {method!r}; expected 'expm' or 'rk'")


def steady_state(liouvillian: Liouvillian, return_info: bool = False,
                 kernel_rtol: float = 1e-9):
    """Unique stationary state of the generator, by dense null-space extraction.

    The kernel is taken from the SVD of the scaled generator; more than one
    singular value below `kernel_rtol` (relative to the largest) means the
    stationary state is not unique and an AmbiguousSteadyStateError is
    raised. The kernel vector is hermitized, trace-normalized, and tiny
    negative eigenvalues (>= -1e-10) are clipped to zero with
    renormalization; anything more negative is a solver failure. With
    return_info=True the raw and scaled residuals and the kernel gap are
    returned alongside the state.
    """
    mat = liouvillian.matrix
    scale = float(np.max(np.abs(mat)))
    if scale == 0.0:
        raise AmbiguousSteadyStateError("zero generator: every state is stationary")
    _, s, vh = np.linalg.svd(mat / scale)
    n_null = int(np.sum(s < kernel_rtol * s[0]))
    if n_null == 0:
        raise SolverError("no stationary state found within tolerance")
    if n_null > 1:
        raise AmbiguousSteadyStateError(
            f"stationary subspace has dimension {n_null}; steady state is ambiguous"
        )
    rho = unvec(vh[-1].conj())
    rho = (rho + rho.conj().T) / 2.0
    tr = np.trace(rho).real
    if abs(tr) < 1e-12:
        raise SolverError("kernel vector is traceless; cannot normalize")
    rho /= tr

    w, v = np.linalg.eigh(rho)
    min_eig_raw = float(w.min())
    if min_eig_raw < MIN_EIG_FLOOR:
        raise SolverError(f"steady state has eigenvalue {min_eig_raw:.3e} below floor")
    if min_eig_raw < 0.0:
        w = np.clip(w, 0.0, None)
        rho = (v * w) @ v.conj().T
        rho /= np.trace(rho).real

    residual_raw = float(np.linalg.norm(mat @ vec(rho)))
    residual = residual_raw / scale
    state = DensityMatrix.from_matrix(rho, liouvillian.space)
    if return_info:
        gap = float(s[-2] / s[0]) if len(s) > 1 else np.inf
        info = {
            "residual": residual,
            "residual_raw": residual_raw,
            "kernel_gap": gap,
            "min_eig_raw": min_eig_raw,
        }
        return state, info
    return state


def fidelity_target(rho: DensityMatrix, target: TargetState) -> float:
    """Overlap of the reduced qubit state with the target ket, <-(t,p)|q|-(t,p)>."""
    reduced = partial_trace_resonator(rho)
    km = target.ket_minus()
    return float(np.real(km.conj() @ reduced.matrix @ km))


def mixed_qubit_with_resonator(sys: SystemParams, nbar: float | None = None) -> DensityMatrix:
    """Maximally mixed qubit joined to the resonator's thermal equilibrium state."""
    if nbar is None:
        nbar = effective_nbar(sys)
    res = thermal_state(sys.fock_cutoff, nbar)
    rho = np.kron(np.eye(2, dtype=complex) / 2.0, res.matrix)
    return DensityMatrix.from_matrix(rho, joint_tag(sys.fock_cutoff))


def batch_map(fn: Callable, items: Sequence, workers: int | None = None) -> list:
    """Evaluate independent jobs on a thread pool, results ordered by input index.

    The heavy work is dense linear algebra, which releases the GIL, so
    threads give real parallelism without pickling overhead.
    """
    items = list(items)
    if workers is not None and workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def scenario_liouvillian(sys: SystemParams, drive: DriveParams,
                         nbar: float | None = None,
                         relaxation_basis: str = "energy",
                         target: TargetState | None = None) -> Liouvillian:
    """Convenience builder: drive-frame Hamiltonian plus standard dissipators."""
    from .model import build_hamiltonian

    h = build_hamiltonian(sys, drive)
    return build_liouvillian(
        h, standard_dissipators(sys, nbar, relaxation_basis, target)
    )
