"""Reduced rate model of the polarization dynamics.

After adiabatic elimination of the lossy resonator (second-order
time-convolutionless expansion in the bad-cavity regime kappa >> g), the
drive-frame Hamiltonian splits into five frequency modes. Each
resonator-assisted mode alpha with coefficient C and frequency w picks up a
dissipation rate and a Lamb-type shift

    Gamma = 4 |C|^2 kappa / (kappa^2 + 4 w^2),
    Shift = 4 |C|^2 w / (kappa^2 + 4 w^2),

and the target-frame populations P = (P_-1, P_+1) close into

    dP/dt = sum_{alpha in {4, 5}} Gamma_alpha M_alpha P,

with the thermal pumping matrices M_4 and M_5 below. Mode 4 (resonant when
the drive matching zeroes Delta_minus) polarizes toward the target; its rate
is the polarization rate

    Gamma_Z = g^2 kappa (1 + cos theta)^2 / (kappa^2 + 4 Delta^2).

Coherences feel the Lamb shifts and the |A_-|^2/(2 Wbar) term, but the
population equations never reference them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.constants

from .lindblad import effective_nbar
from .model import DriveParams, FrameVectors, SystemParams, TargetState, frame_vectors


def gamma_z(g: float, kappa: float, theta: float, delta: float) -> float:
    """Polarization rate toward the target pole, rad/s.

    `delta` is the residual sideband detuning Delta_minus; matched drives
    have delta = 0 and the rate peaks at 4 g^2/kappa for theta = 0.
    """
    if kappa <= 0:
        raise ValueError("kappa must be > 0")
    return g * g * kappa * (1.0 + math.cos(theta)) ** 2 / (kappa * kappa + 4.0 * delta * delta)


def mode_rates(coefficient: complex, frequency: float, kappa: float) -> tuple[float, float]:
    """(dissipation rate, Lamb shift) of one resonator-assisted mode."""
    if kappa <= 0:
        raise ValueError("kappa must be > 0")
    weight = 4.0 * abs(coefficient) ** 2 / (kappa * kappa + 4.0 * frequency * frequency)
    return weight * kappa, weight * frequency


def rate_matrix(nbar: float, mode: int) -> np.ndarray:
    """Thermal pumping matrix of mode 4 or 5 in the (P_-1, P_+1) basis.

    Mode 4 relaxes toward the -1 pole, mode 5 toward +1; columns sum to zero
    so total probability is conserved.
    """
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    if mode == 4:
        return np.array([[-nbar, nbar + 1.0], [nbar, -(nbar + 1.0)]])
    if mode == 5:
        return np.array([[-(nbar + 1.0), nbar], [nbar + 1.0, -nbar]])
    raise ValueError(f"mode must be 4 or 5, got {mode}")


def populations(p0, rates, t, nbar: float = 0.0) -> np.ndarray:
    """Propagate the two-level populations under the listed (rate, mode) pairs.

    Closed form for the 2x2 generator G = sum Gamma_alpha M_alpha: with
    a = up-pumping and b = down-pumping column rates,
    P(t) = P(inf) + (P(0) - P(inf)) exp(-(a+b) t). `t` may be a scalar or an
    array; the result has shape (2,) or (2, len(t)).
    """
    p0 = np.asarray(p0, dtype=float)
    if p0.shape != (2,):
        raise ValueError("p0 must be a probability pair")
    if np.any(p0 < 0):
        raise ValueError("p0 must be nonnegative")
    if abs(p0.sum() - 1.0) > 1e-9:
        raise ValueError("p0 must sum to 1")
    up = 0.0    # P_-1 -> P_+1 flow
    down = 0.0  # P_+1 -> P_-1 flow
    for gamma, mode in rates:
        if gamma < 0:
            raise ValueError("rates must be nonnegative")
        if mode == 4:
            up += gamma * nbar
            down += gamma * (nbar + 1.0)
        elif mode == 5:
            up += gamma * (nbar + 1.0)
            down += gamma * nbar
        else:
            raise ValueError(f"mode must be 4 or 5, got {mode}")
    total = up + down
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)
    if total == 0.0:
        out = np.repeat(p0[:, None], t_arr.size, axis=1)
    else:
        p_inf = np.array([down / total, up / total])
        decay = np.exp(-total * t_arr)
        out = p_inf[:, None] + (p0 - p_inf)[:, None] * decay[None, :]
    return out[:, 0] if scalar else out


def equilibrium_sigma_z(omega_c: float, temperature: float) -> float:
    """Equilibrium <sigma_Z> of the polarized qubit at bath temperature T.

    (e^{-x} - 1)/(e^{-x} + 1) with x = hbar omega_c / (k_B T); identically
    -tanh(x/2). Approaches -1 as T -> 0 and 0 as T -> infinity.
    """
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if temperature == 0.0:
        return -1.0
    x = scipy.constants.hbar * omega_c / (scipy.constants.k * temperature)
    e = math.exp(-x)
    return (e - 1.0) / (e + 1.0)


def polarization_time(g: float, kappa: float, theta: float, delta: float,
                      nbar: float = 0.0) -> float:
    """Exponential time constant of the polarization, 1/(Gamma_Z (2 nbar + 1))."""
    rate = gamma_z(g, kappa, theta, delta)
    if rate == 0.0:
        raise ValueError(
            "polarization rate vanishes at theta = pi; use the antipodal "
            "parameterization (design_drive does this automatically)"
        )
    return 1.0 / (rate * (2.0 * nbar + 1.0))


@dataclass(frozen=True)
class ModeRow:
    """One frequency mode of the drive-frame Hamiltonian decomposition."""

    index: int
    qubit_op: str        # rotated-basis label: sigma_z, sigma_+ or sigma_-
    bath_op: str         # identity or a
    frequency: float     # rad/s
    coefficient: complex  # rad/s


@dataclass(frozen=True)
class ModeTable:
    rows: tuple[ModeRow, ...]

    def row(self, index: int) -> ModeRow:
        for r in self.rows:
            if r.index == index:
                return r
        raise KeyError(index)


def mode_table(fv: FrameVectors, g: float) -> ModeTable:
    """The five-mode decomposition for a given rotated frame and coupling g.

    Row 1 is the static term; its coefficient A_z - Wbar must vanish for the
    reduced expansion to converge, which the drive design guarantees.
    """
    dw = fv.delta_omega
    rows = (
        ModeRow(1, "sigma_z", "identity", 0.0, complex(fv.a_z - fv.omega_bar)),
        ModeRow(2, "sigma_+", "identity", 2.0 * fv.omega_bar, fv.a_minus),
        ModeRow(3, "sigma_z", "a", dw, g * fv.theta_z),
        ModeRow(4, "sigma_-", "a", fv.delta_minus, g * fv.theta_plus),
        ModeRow(5, "sigma_+", "a", fv.delta_plus, g * fv.theta_minus),
    )
    return ModeTable(rows)


@dataclass(frozen=True, eq=False)
class RateModel:
    """All reduced-model quantities for one designed scenario."""

    omega_bar: float
    nbar: float
    gamma_z: float                  # mode-4 rate (the polarization rate)
    mode_gammas: dict               # alpha -> dissipation rate, alpha in {3,4,5}
    mode_shifts: dict               # alpha -> Lamb shift
    lamb_d0: float                  # |A_-|^2 / (2 Wbar), coherence-only
    m4: np.ndarray
    m5: np.ndarray
    p_eq: np.ndarray                # equilibrium populations (P_-1, P_+1)

    def population_rates(self) -> list[tuple[float, int]]:
        return [(self.mode_gammas[4], 4), (self.mode_gammas[5], 5)]


def rate_model(sys: SystemParams, drive: DriveParams, target: TargetState,
               nbar: float | None = None) -> RateModel:
    """Build the reduced rate model for a drive/target pair."""
    if nbar is None:
        nbar = effective_nbar(sys)
    fv = frame_vectors(drive, target)
    table = mode_table(fv, sys.g)
    gammas, shifts = {}, {}
    for alpha in (3, 4, 5):
        row = table.row(alpha)
        gammas[alpha], shifts[alpha] = mode_rates(row.coefficient, row.frequency,
                                                  sys.kappa)
    if fv.omega_bar == 0.0:
        raise ValueError("omega_bar is zero; the rotated-frame expansion diverges")
    lamb_d0 = abs(fv.a_minus) ** 2 / (2.0 * fv.omega_bar)
    up = gammas[4] * nbar + gammas[5] * (nbar + 1.0)
    down = gammas[4] * (nbar + 1.0) + gammas[5] * nbar
    total = up + down
    p_eq = np.array([down / total, up / total]) if total > 0 else np.array([0.5, 0.5])
    return RateModel(
        omega_bar=fv.omega_bar,
        nbar=nbar,
        gamma_z=gammas[4],
        mode_gammas=gammas,
        mode_shifts=shifts,
        lamb_d0=lamb_d0,
        m4=rate_matrix(nbar, 4),
        m5=rate_matrix(nbar, 5),
        p_eq=p_eq,
    )
