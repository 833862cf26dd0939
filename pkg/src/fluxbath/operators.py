"""Dense complex operator algebra on the qubit-resonator space.

Basis conventions, fixed package-wide:

* qubit: ``|0>`` is the ground state, ``|1>`` the excited state, ordered
  ``(|0>, |1>)``, so ``sigma_z = |1><1| - |0><0| = diag(-1, +1)`` and the
  free qubit energies are ``-w/2`` and ``+w/2``.
* resonator: Fock states ``|0> .. |N>`` for cutoff ``N``.
* joint space: qubit index major, Fock index minor, i.e. basis vector
  ``|q, n>`` sits at row ``q*(N+1) + n``; dimension ``2*(N+1)``.

All operators are small dense ``complex128`` matrices; at the cutoffs this
package needs (``N <= 32``) sparse storage buys nothing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np
import scipy.linalg

QUBIT = "qubit"
RESONATOR = "resonator"

_JOINT_TAG = re.compile(r"^joint\((\d+)\)$")

# DensityMatrix validity thresholds (absolute).
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-9
EIGENVALUE_FLOOR = -1e-8


def joint_tag(n_max: int) -> str:
    """Space tag for the joint qubit x resonator space with Fock cutoff n_max."""
    return f"joint({n_max})"


def joint_cutoff(space: str | None) -> int | None:
    """Fock cutoff encoded in a joint space tag, or None for other tags."""
    if space is None:
        return None
    m = _JOINT_TAG.match(space)
    return int(m.group(1)) if m else None


@dataclass(frozen=True, eq=False)
class Operator:
    """A dense complex matrix with an optional label of the space it acts on."""

    matrix: np.ndarray
    space: str | None = None

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2:
            raise ValueError(f"operator must be a 2-d matrix, got shape {mat.shape}")
        object.__setattr__(self, "matrix", mat)
        n_max = joint_cutoff(self.space)
        if n_max is not None and mat.shape != (2 * (n_max + 1), 2 * (n_max + 1)):
            raise ValueError(
                f"joint({n_max}) operators must be {2 * (n_max + 1)} dimensional, "
                f"got shape {mat.shape}"
            )

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def dag(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.space)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def __matmul__(self, other: "Operator") -> "Operator":
        if self.cols != other.rows:
            raise ValueError(f"dimension mismatch: {self.cols} vs {other.rows}")
        return Operator(self.matrix @ other.matrix, self.space or other.space)

    def __add__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix + other.matrix, self.space or other.space)

    def __sub__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix - other.matrix, self.space or other.space)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.matrix * scalar, self.space)

    __rmul__ = __mul__

    def __neg__(self) -> "Operator":
        return Operator(-self.matrix, self.space)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A physical state: Hermitian, unit trace, positive up to numerical noise."""

    op: Operator

    def __post_init__(self):
        mat = self.op.matrix
        if mat.shape[0] != mat.shape[1]:
            raise ValueError("density matrix must be square")
        herm = np.max(np.abs(mat - mat.conj().T))
        if herm > HERMITICITY_TOL:
            raise ValueError(f"not Hermitian: max |rho - rho^dag| = {herm:.3e}")
        tr = np.trace(mat)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
        w_min = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2.0).min())
        if w_min < EIGENVALUE_FLOOR:
            raise ValueError(f"negative eigenvalue {w_min:.3e} below floor")

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, space: str | None = None) -> "DensityMatrix":
        return cls(Operator(matrix, space))

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def space(self) -> str | None:
        return self.op.space


_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex),
    "z": np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex),
    "+": np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex),
    "-": np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex),
}


def pauli(axis: str) -> Operator:
    """Qubit Pauli/ladder operator in the (|0>, |1>) ordering.

    ``sigma_z`` is diag(-1, +1) so that |0> is the low-energy state;
    ``sigma_+`` raises |0> to |1>, ``sigma_-`` lowers |1> to |0>.
    """
    try:
        return Operator(_PAULI[axis].copy(), QUBIT)
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}; expected x, y, z, + or -") from None


def identity(dim: int, space: str | None = None) -> Operator:
    return Operator(np.eye(dim, dtype=complex), space)


def annihilation(n_max: int) -> Operator:
    """Resonator annihilation operator on the truncated space |0>..|n_max|.

    <n-1|a|n> = sqrt(n). The truncation makes [a, a^dag] equal the identity
    everywhere except the (n_max, n_max) corner, which is -n_max.
    """
    if n_max < 1:
        raise ValueError("Fock cutoff must be >= 1 to represent any dynamics")
    mat = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1).astype(complex)
    return Operator(mat, RESONATOR)


def kron(a: Operator, b: Operator) -> Operator:
    """Tensor product with `a` the qubit factor and `b` the resonator factor."""
    space = None
    if a.space == QUBIT and b.space == RESONATOR:
        space = joint_tag(b.rows - 1)
    return Operator(np.kron(a.matrix, b.matrix), space)


def expm(m: Operator) -> Operator:
    """Matrix exponential (scaling-and-squaring Pade, via scipy)."""
    if m.rows != m.cols:
        raise ValueError("matrix exponential requires a square matrix")
    return Operator(scipy.linalg.expm(m.matrix), m.space)


def partial_trace_resonator(rho: DensityMatrix) -> DensityMatrix:
    """Trace out the resonator from a joint state, leaving the 2x2 qubit state."""
    n_max = joint_cutoff(rho.space)
    if n_max is None:
        raise ValueError("partial trace requires a joint(N)-tagged state")
    dim_r = n_max + 1
    blocks = rho.matrix.reshape(2, dim_r, 2, dim_r)
    reduced = np.einsum("ikjk->ij", blocks)
    return DensityMatrix.from_matrix(reduced, QUBIT)


def expect(rho: DensityMatrix, obs: Operator) -> complex:
    """Expectation value tr(rho O)."""
    if rho.matrix.shape != obs.matrix.shape:
        raise ValueError(
            f"dimension mismatch: state {rho.matrix.shape} vs operator {obs.matrix.shape}"
        )
    return complex(np.trace(rho.matrix @ obs.matrix))


def thermal_state(n_max: int, nbar: float) -> DensityMatrix:
    """Thermal resonator state with mean occupation nbar, renormalized on the cutoff.

    Populations are geometric, p_n proportional to (nbar/(1+nbar))^n; nbar = 0
    gives the vacuum.
    """
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    if nbar == 0.0:
        pops = np.zeros(n_max + 1)
        pops[0] = 1.0
    else:
        ratio = nbar / (1.0 + nbar)
        pops = ratio ** np.arange(n_max + 1)
        pops /= pops.sum()
    return DensityMatrix.from_matrix(np.diag(pops).astype(complex), RESONATOR)


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization (Fortran order)."""
    return np.asarray(matrix, dtype=complex).flatten(order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vec`."""
    v = np.asarray(v, dtype=complex)
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise ValueError("vector length is not a perfect square")
    return v.reshape((d, d), order="F")
