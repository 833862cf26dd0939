import numpy as np
import pytest

from fluxbath.operators import (
    DensityMatrix,
    Operator,
    annihilation,
    expect,
    expm,
    identity,
    joint_tag,
    kron,
    partial_trace_resonator,
    pauli,
    thermal_state,
    unvec,
    vec,
)


def test_pauli_z_convention():
    # ground state |0> first, excited |1> second
    assert np.array_equal(pauli("z").matrix, np.diag([-1.0, 1.0]).astype(complex))


def test_pauli_x_involution():
    sx = pauli("x")
    assert np.array_equal((sx @ sx).matrix, np.eye(2, dtype=complex))


def test_ladder_product_projects_on_excited():
    proj = pauli("+") @ pauli("-")
    assert np.array_equal(proj.matrix, np.diag([0.0, 1.0]).astype(complex))


def test_ladder_lowering_action():
    excited = np.array([0.0, 1.0], dtype=complex)
    assert np.array_equal(pauli("-").matrix @ excited, np.array([1.0, 0.0], dtype=complex))


def test_pauli_unknown_axis():
    with pytest.raises(ValueError):
        pauli("w")


def test_annihilation_smallest_cutoff():
    assert np.array_equal(annihilation(1).matrix, np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_number_operator_diagonal():
    a = annihilation(3)
    num = (a.dag() @ a).matrix
    assert np.allclose(num, np.diag([0.0, 1.0, 2.0, 3.0]), atol=1e-14)


@pytest.mark.parametrize("n_max", [1, 2, 5, 8, 17, 32])
def test_truncated_commutator_corner(n_max):
    a = annihilation(n_max)
    comm = (a @ a.dag() - a.dag() @ a).matrix
    expected = np.diag(np.r_[np.ones(n_max), -float(n_max)])
    # off-diagonal structure is exact; diagonal entries are differences of
    # rounded sqrt products, so the tolerance carries the entry magnitude
    assert np.array_equal(comm - np.diag(np.diag(comm)), np.zeros_like(comm))
    eps = np.finfo(float).eps
    np.testing.assert_allclose(np.diag(comm).real, np.diag(expected),
                               rtol=0, atol=4 * (n_max + 1) * eps)
    assert comm[n_max, n_max].real == pytest.approx(-n_max, rel=4 * eps)


def test_annihilation_rejects_zero_cutoff():
    with pytest.raises(ValueError):
        annihilation(0)


def test_kron_identities():
    prod = kron(identity(2), identity(3))
    assert np.array_equal(prod.matrix, np.eye(6, dtype=complex))


def test_kron_qubit_major_ordering():
    assert kron(pauli("z"), identity(2)).matrix[0, 0] == -1.0


def test_kron_dimensions():
    a = Operator(np.ones((2, 2)))
    b = Operator(np.ones((4, 4)))
    assert kron(a, b).matrix.shape == (8, 8)


def test_kron_tags_joint_space():
    op = kron(pauli("x"), annihilation(4))
    assert op.space == joint_tag(4)


def test_kron_mixed_product_property():
    rng = np.random.default_rng(7)
    for _ in range(20):
        a, c = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(2))
        b, d = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(2))
        lhs = np.kron(a, b) @ np.kron(c, d)
        rhs = np.kron(a @ c, b @ d)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_expm_zero():
    assert np.array_equal(expm(Operator(np.zeros((4, 4)))).matrix, np.eye(4, dtype=complex))


def test_expm_half_period_rotation():
    result = expm(Operator(0.5j * np.pi * pauli("x").matrix))
    np.testing.assert_allclose(result.matrix, 1j * pauli("x").matrix, atol=1e-14)


def test_expm_against_taylor_series():
    rng = np.random.default_rng(11)
    for _ in range(5):
        m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        m *= 0.9 / np.linalg.norm(m, 2)
        # independent oracle: 40-term Taylor series, converged far below 1e-10
        term = np.eye(6, dtype=complex)
        total = np.eye(6, dtype=complex)
        for k in range(1, 41):
            term = term @ m / k
            total += term
        assert np.max(np.abs(expm(Operator(m)).matrix - total)) < 1e-10


def test_expm_inverse_property():
    rng = np.random.default_rng(13)
    for scale in (0.5, 3.0, 10.0):
        m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        m *= scale / np.linalg.norm(m, 2)
        prod = expm(Operator(m)).matrix @ expm(Operator(-m)).matrix
        assert np.max(np.abs(prod - np.eye(5))) < 1e-10


def test_expm_rejects_non_square():
    with pytest.raises(ValueError):
        expm(Operator(np.zeros((2, 3))))


def _random_joint_density(rng, n_max):
    d = 2 * (n_max + 1)
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = m @ m.conj().T
    rho /= np.trace(rho)
    return DensityMatrix.from_matrix(rho, joint_tag(n_max))


def test_partial_trace_product_state():
    rho_q = np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]], dtype=complex)
    vac = np.zeros((4, 4), dtype=complex)
    vac[0, 0] = 1.0
    joint = DensityMatrix.from_matrix(np.kron(rho_q, vac), joint_tag(3))
    np.testing.assert_allclose(partial_trace_resonator(joint).matrix, rho_q, atol=1e-14)


def test_partial_trace_entangled_state():
    n_max = 2
    d = 2 * (n_max + 1)
    psi = np.zeros(d, dtype=complex)
    psi[0] = 1.0 / np.sqrt(2)            # |q=0, n=0>
    psi[(n_max + 1) + 1] = 1.0 / np.sqrt(2)  # |q=1, n=1>
    joint = DensityMatrix.from_matrix(np.outer(psi, psi.conj()), joint_tag(n_max))
    np.testing.assert_allclose(partial_trace_resonator(joint).matrix,
                               np.eye(2) / 2.0, atol=1e-14)


def test_partial_trace_preserves_trace_and_linearity():
    rng = np.random.default_rng(17)
    for _ in range(5):
        rho = _random_joint_density(rng, 3)
        reduced = partial_trace_resonator(rho)
        assert abs(np.trace(reduced.matrix) - 1.0) < 1e-12
    # linearity on a convex mixture
    r1, r2 = _random_joint_density(rng, 3), _random_joint_density(rng, 3)
    mix = DensityMatrix.from_matrix(0.25 * r1.matrix + 0.75 * r2.matrix, joint_tag(3))
    lhs = partial_trace_resonator(mix).matrix
    rhs = 0.25 * partial_trace_resonator(r1).matrix + 0.75 * partial_trace_resonator(r2).matrix
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_partial_trace_requires_joint_tag():
    rho = DensityMatrix.from_matrix(np.eye(2) / 2.0)
    with pytest.raises(ValueError):
        partial_trace_resonator(rho)


def test_expect_excited_sigma_z():
    rho = DensityMatrix.from_matrix(np.diag([0.0, 1.0]).astype(complex))
    assert expect(rho, pauli("z")) == pytest.approx(1.0)


def test_expect_mixed_traceless():
    rho = DensityMatrix.from_matrix(np.eye(2) / 2.0)
    rng = np.random.default_rng(3)
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    traceless = Operator(m - np.trace(m) / 2.0 * np.eye(2))
    assert abs(expect(rho, traceless)) < 1e-14


def test_expect_thermal_occupation():
    n_max, nbar = 10, 0.5
    rho = thermal_state(n_max, nbar)
    a = annihilation(n_max)
    # truncated geometric oracle, computed independently of thermal_state
    ratio = nbar / (1.0 + nbar)
    weights = ratio ** np.arange(n_max + 1)
    oracle = float(np.sum(np.arange(n_max + 1) * weights) / np.sum(weights))
    value = expect(rho, a.dag() @ a)
    assert value.real == pytest.approx(oracle, abs=1e-12)
    assert abs(value.real - nbar) < 1e-3


def test_expect_dimension_mismatch():
    rho = DensityMatrix.from_matrix(np.eye(2) / 2.0)
    with pytest.raises(ValueError):
        expect(rho, identity(3))


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix.from_matrix(np.array([[1.0, 0.5], [0.0, 0.0]]))   # not Hermitian
    with pytest.raises(ValueError):
        DensityMatrix.from_matrix(np.diag([0.7, 0.7]).astype(complex))  # trace 1.4
    with pytest.raises(ValueError):
        DensityMatrix.from_matrix(np.diag([1.5, -0.5]).astype(complex))  # negative


def test_vec_unvec_roundtrip():
    rng = np.random.default_rng(5)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    np.testing.assert_array_equal(unvec(vec(m)), m)
