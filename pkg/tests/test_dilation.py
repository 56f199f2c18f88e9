"""Unitary embeddings: the three-rotation qutrit construction and the
general contraction completion, both checked against independent products."""

import math

import numpy as np
import pytest

from conftest import haar_unitary, series_evolution
from ptqsim.dilation import (
    Dilation,
    NormTooLarge,
    RankTooLarge,
    ShiftTooSmall,
    Singular,
    ZeroMatrix,
    embed_check,
    general_dilation,
    hamiltonian_shift_equivalence,
    qutrit_circuit,
    qutrit_unitary,
    rescale_to_contraction,
)
from ptqsim.gates import GateKind, gate_matrix, rx
from ptqsim.linalg import I2, I3, SIGMA_X, dag, is_unitary
from ptqsim.model import (
    PTParams,
    evolution,
    singular_values,
    success_probability,
)

SIGMA_PLUS_08_2 = 2.8378206493124876  # frozen sigma_+ at (r=0.8, t=2)


def test_qutrit_circuit_hermitian_limit():
    c = qutrit_circuit(PTParams(0.0, 0.4))
    kinds = [(g.kind, g.subspace) for g in c]
    assert kinds == [
        (GateKind.RX, (0, 1)),
        (GateKind.RX, (1, 2)),
        (GateKind.RX, (0, 1)),
    ]
    got = [g.angles[0] for g in c]
    assert got == pytest.approx([0.4, 0.0, 0.4], abs=1e-15)


def test_qutrit_circuit_zero_time():
    for r in (0.0, 0.3, 1.0, 1.7):
        assert [g.angles[0] for g in qutrit_circuit(PTParams(r, 0.0))] == [0, 0, 0]


def test_qutrit_circuit_exceptional_point_angles():
    c = qutrit_circuit(PTParams(1.0, 1.0))
    phi = c.gates[0].angles[0]
    theta = c.gates[1].angles[0]
    assert phi == pytest.approx(math.pi / 4.0, abs=1e-15)
    # frozen: -2 arccos((sqrt(2)-1)/(sqrt(2)+1)) from the svd2 oracle route
    assert theta == pytest.approx(-2.796740658164095, abs=1e-12)
    assert c.gates[2].angles[0] == phi


def test_qutrit_unitary_identity_and_double_rotation():
    assert np.max(np.abs(qutrit_unitary(PTParams(1.4, 0.0)) - I3)) < 1e-15
    for t in (0.3, 1.0, 2.2):
        ref = gate_matrix(rx(0, 1, 2.0 * t))
        assert np.max(np.abs(qutrit_unitary(PTParams(0.0, t)) - ref)) < 1e-12


def test_qutrit_unitary_block_against_series():
    u = qutrit_unitary(PTParams(0.8, 2.0))
    sv = singular_values(PTParams(0.8, 2.0))
    assert sv.sigma_plus == pytest.approx(SIGMA_PLUS_08_2, abs=1e-12)
    block = series_evolution(0.8, 2.0) / SIGMA_PLUS_08_2
    assert np.max(np.abs(u[:2, :2] - block)) < 1e-10
    assert is_unitary(u, 1e-12)


def test_embed_check_examples():
    assert embed_check(I3, I2, 1.0)
    assert not embed_check(I3, SIGMA_X, 1.0)
    assert not embed_check(np.diag([1.0, 1.0, 2.0]), I2, 1.0)  # not unitary
    with pytest.raises(ValueError):
        embed_check(I3, I2, 1.0, tol=0.0)
    with pytest.raises(ValueError):
        embed_check(I3, I2, 0.0)


def test_embed_check_random_points():
    rng = np.random.default_rng(53)
    for _ in range(300):
        p = PTParams(float(rng.uniform(0, 2)), float(rng.uniform(0, 10)))
        lam = singular_values(p).sigma_plus
        assert embed_check(qutrit_unitary(p), evolution(p), lam, 1e-10)


def test_success_probability_consistency():
    rng = np.random.default_rng(59)
    for _ in range(100):
        p = PTParams(float(rng.uniform(0, 2)), float(rng.uniform(0, 10)))
        psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        psi = psi / np.linalg.norm(psi)
        lifted = np.array([psi[0], psi[1], 0.0], dtype=complex)
        w = qutrit_unitary(p) @ lifted
        kept = float(np.abs(w[0]) ** 2 + np.abs(w[1]) ** 2)
        assert abs(kept - success_probability(p, psi)) < 1e-10


def test_rank_reduction_of_rescaled_block():
    # 1 - (V/sigma_+)^dag (V/sigma_+) has eigenvalues {0, 1 - ratio^2}
    rng = np.random.default_rng(61)
    for _ in range(200):
        p = PTParams(float(rng.uniform(0.1, 2)), float(rng.uniform(0.2, 10)))
        sv = singular_values(p)
        block = evolution(p) / sv.sigma_plus
        eigs = np.linalg.eigvalsh(I2 - dag(block) @ block)
        above = int(np.sum(eigs > 1e-10))
        assert above <= 1
        if sv.sigma_plus > 1.0 + 1e-5:
            assert above == 1


def test_rescale_to_contraction_examples():
    rng = np.random.default_rng(67)
    u = haar_unitary(3, rng)
    scaled, lam = rescale_to_contraction(u)
    assert lam == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(scaled - u)) < 1e-12
    scaled, lam = rescale_to_contraction(3.0 * I2)
    assert lam == pytest.approx(3.0, abs=1e-14)
    assert np.max(np.abs(scaled - I2)) < 1e-14
    _, lam = rescale_to_contraction(evolution(PTParams(1.0, 1.0)))
    assert lam == pytest.approx(math.sqrt(2.0) + 1.0, abs=1e-12)
    with pytest.raises(ZeroMatrix):
        rescale_to_contraction(np.zeros((3, 3)))


def test_general_dilation_identity_block():
    dil = general_dilation(I2, 1)
    assert isinstance(dil, Dilation)
    assert (dil.n, dil.m, dil.lam) == (2, 1, 1.0)
    assert np.max(np.abs(dil.u - I3)) < 1e-12


def test_general_dilation_of_rescaled_evolution():
    for p in (PTParams(0.5, 1.0), PTParams(1.2, 2.0), PTParams(1.0, 1.0)):
        sv = singular_values(p)
        dil = general_dilation(evolution(p) / sv.sigma_plus, 1)
        assert is_unitary(dil.u, 1e-10)
        assert embed_check(dil.u, evolution(p), sv.sigma_plus, 1e-10)


def test_general_dilation_random_contractions():
    rng = np.random.default_rng(71)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        contracted = int(rng.integers(1, n + 1))
        s = np.ones(n)
        s[:contracted] = rng.uniform(0.1, 0.9, contracted)
        a = haar_unitary(n, rng) @ (s[:, None] * dag(haar_unitary(n, rng)))
        m = int(np.sum(1.0 - s * s > 1e-12))
        dil = general_dilation(a, m)
        eye = np.eye(n + m)
        assert float(np.max(np.abs(dag(dil.u) @ dil.u - eye))) < 1e-10
        assert float(np.max(np.abs(dil.u[:n, :n] - a))) < 1e-12


def test_general_dilation_wide_ancilla():
    # more ancilla dimensions than the defect needs: extra rows of C are zero
    dil = general_dilation(np.array([[0.5]], dtype=complex), 2)
    assert dil.u.shape == (3, 3)
    assert is_unitary(dil.u, 1e-12)
    assert dil.u[0, 0] == pytest.approx(0.5, abs=1e-14)
    dil = general_dilation(0.6 * np.eye(2, dtype=complex), 3)
    assert dil.u.shape == (5, 5)
    assert is_unitary(dil.u, 1e-12)


def test_general_dilation_zero_ancilla_unitary():
    rng = np.random.default_rng(73)
    u = haar_unitary(2, rng)
    dil = general_dilation(u, 0)
    assert dil.m == 0
    assert np.array_equal(dil.u, u)


def test_general_dilation_error_conditions():
    with pytest.raises(NormTooLarge):
        general_dilation(1.5 * I2, 2)
    with pytest.raises(RankTooLarge):
        general_dilation(0.5 * I2, 1)
    with pytest.raises(RankTooLarge):
        general_dilation(0.5 * np.eye(4, dtype=complex), 0)
    with pytest.raises(Singular):
        general_dilation(np.diag([0.5, 1e-13]).astype(complex), 2)
    with pytest.raises(ValueError):
        general_dilation(I2, -1)
    with pytest.raises(ValueError):
        general_dilation(np.eye(10, dtype=complex), 7)  # over the size cap


def test_general_dilation_tolerates_roundoff_norm():
    # eigenvalues of 1 - a^dag a in [-1e-12, 0] count as zero, not a violation
    a = (1.0 + 1e-13) * I2
    dil = general_dilation(a, 0)
    assert dil.m == 0


def test_shift_equivalence_examples():
    p = PTParams(0.5, 1.0)
    mu = math.log(singular_values(p).sigma_plus) / p.t
    assert hamiltonian_shift_equivalence(p, mu) < 1e-12
    assert hamiltonian_shift_equivalence(PTParams(1.2, 2.0), 2.0) < 1e-10
    with pytest.raises(ShiftTooSmall):
        hamiltonian_shift_equivalence(PTParams(1.2, 2.0), 0.0)
