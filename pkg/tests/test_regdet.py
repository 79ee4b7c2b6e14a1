import math

import numpy as np
import pytest

from dolbglue.blockop import BlockCircleOperator
from dolbglue.boundary import BoundaryData, RealBoundaryField
from dolbglue.diskops import half_cylinder_operator
from dolbglue.regdet import (
    InsufficientTruncation,
    Regularizer,
    c_Q,
    dense_real_matrix,
    det_Q,
    det_Q_star,
    derivative_identity_check,
    log_operator,
    mode_weights,
)
from dolbglue.zetautil import zeta_hurwitz


def test_regularizer_zeta_closed_form():
    # default q_n = max(|n|, 1): component zeta is 1 + 2 zeta_R(s)
    Q = Regularizer()
    for s in (0.0, -1.0, 2.0):
        expect = 1.0 + 2.0 * zeta_hurwitz(s).real if s != 0 else 0.0
        val = Q.zeta_component(s).real
        ref = 1.0 + 2.0 * zeta_hurwitz(s).real
        assert val == pytest.approx(ref, abs=1e-12)
    assert Q.zeta_Q_at_0() == pytest.approx(0.0, abs=1e-12)
    assert c_Q(Q) == pytest.approx(1.0, abs=1e-12)


def test_regularizer_sqrt_family():
    Q = Regularizer("sqrt")
    # direct sum at s = 4 (converges quickly)
    n = np.arange(1, 200000)
    direct = np.sum((n * n + 1.0) ** (-2.0))
    assert Q.zeta_one_sided(4.0).real == pytest.approx(direct, rel=1e-10)
    # value at 0 agrees with the default family: zeta_Q(0) = 0, c_Q = 1
    assert Q.zeta_Q_at_0() == pytest.approx(0.0, abs=1e-10)


def test_regularizer_shifted_moves_c_Q():
    Q = Regularizer("shifted", 0.5)
    # zeta_H(0, 1.5) = 1/2 - 3/2 = -1: component 1 + 2(-1) = -1; zeta_Q(0) = -2
    assert Q.zeta_Q_at_0() == pytest.approx(-2.0, abs=1e-12)
    assert c_Q(Q) == pytest.approx(4.0, rel=1e-12)


def test_regularizer_scale_invariance():
    assert Regularizer("scaled", 7.3).zeta_Q_at_0() == pytest.approx(0.0, abs=1e-12)


def test_det_Q_identity_and_scalar():
    Q = Regularizer()
    I = BlockCircleOperator.identity(64)
    val, tail = det_Q(I, Q)
    assert val == 0.0
    two = 2.0 * I
    val, _ = det_Q(two, Q)
    assert val == pytest.approx(0.0, abs=1e-12)


def test_log_operator_blocks():
    I = BlockCircleOperator.identity(8)
    L = log_operator(2.0 * I)
    assert np.allclose(L.blocks, math.log(2.0) * np.eye(2))
    # block [[0,-i],[i,0]] has eigenvalues +-1: half-log of square vanishes
    J = BlockCircleOperator.from_block_function(
        8, lambda n: np.array([[0, -1j], [1j, 0]]),
        np.array([[0, -1j], [1j, 0]]), np.array([[0, 1j], [-1j, 0]]),
        zero_block=np.eye(2))
    L = log_operator(J)
    assert np.abs(L.blocks).max() < 1e-14


def test_det_misc_involution_vanishing():
    """Operators with star T = -T^{-1} star have log Det_Q = 0."""
    Q = Regularizer()
    for lam in (0.5, 1.0, 2.0):
        A = half_cylinder_operator(1.0, lam, 128)
        val, _ = det_Q(A, Q)
        assert abs(val) < 1e-10, lam


def test_det_misc_anticommutation():
    """B T = T^{-1} B forces B Log T = -Log T B block-wise."""
    star = np.array([[0.0, 1.0], [1.0, 0.0]])

    def block(n):
        a = 1.0 + 0.5 / (1 + n * n)
        return np.array([[a, 0.0], [0.0, 1.0 / a]])

    T = BlockCircleOperator.from_block_function(
        16, block, np.eye(2), np.eye(2), zero_block=np.eye(2))
    for n in range(-16, 17):
        B = T.block(n)
        assert np.allclose(star @ B, np.linalg.inv(B) @ star)
    L = log_operator(T)
    for n in range(-16, 17):
        assert np.allclose(star @ L.block(n) + L.block(n) @ star, 0.0, atol=1e-13)


def _kfamily(n_max, seed=5):
    rng = np.random.default_rng(seed)
    blocks = np.zeros((2 * n_max + 1, 2, 2), dtype=complex)
    for m in range(1, n_max + 1):
        H = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        H = 0.5 * (H + H.conj().T)
        blocks[n_max + m] = H / (m * m + 1.0)
        blocks[n_max - m] = np.conj(blocks[n_max + m])
    blocks[n_max] = 0.1 * np.eye(2)
    return BlockCircleOperator(blocks, np.zeros((2, 2)), np.zeros((2, 2)))


def test_derivative_identity_rank_one():
    Q = Regularizer()
    n_max = 32
    P = BlockCircleOperator.zero(n_max)
    Pb = P.blocks.copy()
    Pb[n_max + 3] = np.array([[1.0, 0.0], [0.0, 0.0]])
    Pb[n_max - 3] = np.array([[1.0, 0.0], [0.0, 0.0]])
    P = BlockCircleOperator(Pb, np.zeros((2, 2)), np.zeros((2, 2)))
    I = BlockCircleOperator.identity(n_max)

    def family(e):
        return I + (math.exp(e) - 1.0) * P

    resid = derivative_identity_check(family, [0.0, 0.2], Q)
    assert resid < 1e-7


def test_derivative_identity_compact_perturbation():
    Q = Regularizer()
    K = _kfamily(64)
    I = BlockCircleOperator.identity(64)

    def family(e):
        return I + e * K

    resid = derivative_identity_check(family, [0.1], Q)
    assert resid < 1e-6


def test_derivative_identity_resolvent_family():
    """The (I + eps R(lam)) family with R = (tanh(mu b / 2) - 1) I."""
    Q = Regularizer()
    n_max, a, b, lam = 96, 1.0, 1.0, 1.0

    def Rop():
        def block(n):
            k = 2 * math.pi * n / a
            mu = math.hypot(k, math.sqrt(lam))
            return (math.tanh(mu * b / 2.0) - 1.0) * np.eye(2)
        return BlockCircleOperator.from_block_function(
            n_max, block, np.zeros((2, 2)), np.zeros((2, 2)),
            zero_block=(math.tanh(math.sqrt(lam) * b / 2.0) - 1.0) * np.eye(2))

    R = Rop()
    I = BlockCircleOperator.identity(n_max)

    def family(e):
        return I + e * R

    resid = derivative_identity_check(family, [0.0, 0.5, 1.0], Q)
    assert resid < 1e-6


def test_det_Q_star_empty_and_rank_one_kernel():
    Q = Regularizer()
    n_max = 16
    I = BlockCircleOperator.identity(n_max)
    blocks = I.blocks.copy()
    blocks[n_max] = np.array([[0.0, 0.0], [0.0, 3.0]])
    T = BlockCircleOperator(blocks, np.eye(2), np.eye(2))
    # excluded = the zero-mode f direction
    v = BoundaryData(
        RealBoundaryField.from_modes(n_max, {0: 1.0}),
        RealBoundaryField.zero(n_max),
    )
    val, _ = det_Q_star(T, Q, [v], tail_rtol=np.inf)
    # deflated operator: identity everywhere except diag(3) at the g0 slot;
    # f.p. prescription: log 3 + lbar (zeta_Q(0) - 1) with lbar = 0
    assert val == pytest.approx(math.log(3.0), abs=1e-10)
    # empty exclusion falls back to det_Q, which rejects the singular block
    with pytest.raises(ValueError):
        det_Q_star(T, Q, [])
    # and agrees with det_Q on a nonsingular operator
    I = BlockCircleOperator.identity(n_max)
    assert det_Q_star(2.0 * I, Q, [])[0] == det_Q(2.0 * I, Q)[0]


def test_det_Q_star_rayleigh_consistency():
    """Deflating a non-kernel direction subtracts log of the inverse
    Rayleigh quotient (brute-force dense check at small truncation)."""
    Q = Regularizer()
    n_max = 6
    rng = np.random.default_rng(2)
    blocks = np.zeros((2 * n_max + 1, 2, 2), dtype=complex)
    for m in range(1, n_max + 1):
        H = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        H = 0.5 * (H + H.conj().T)
        blocks[n_max + m] = np.eye(2) + H / (4.0 + m * m)
        blocks[n_max - m] = np.conj(blocks[n_max + m])
    blocks[n_max] = np.eye(2) + 0.1 * np.diag([1.0, -1.0])
    T = BlockCircleOperator(blocks, np.eye(2), np.eye(2))

    u = BoundaryData.random(n_max, rng)
    base, _ = det_Q(T, Q, tail_rtol=np.inf)
    starred, _ = det_Q_star(T, Q, [u], tail_rtol=np.inf)

    # dense check of the Rayleigh-quotient factor v^T M^{-1} v (unit v)
    W = mode_weights(n_max)
    sqw = np.sqrt(W)
    M = sqw[:, None] * dense_real_matrix(T) / sqw[None, :]
    x = np.empty(2 + 4 * n_max)
    x[0] = u.f.coeffs[n_max].real
    x[1] = u.g.coeffs[n_max].real
    for m in range(1, n_max + 1):
        k = 2 + 4 * (m - 1)
        x[k] = u.f.coeffs[n_max + m].real
        x[k + 1] = u.f.coeffs[n_max + m].imag
        x[k + 2] = u.g.coeffs[n_max + m].real
        x[k + 3] = u.g.coeffs[n_max + m].imag
    v = x * sqw
    v = v / np.linalg.norm(v)
    rayleigh = float(v @ np.linalg.solve(M, v))
    assert starred == pytest.approx(base + math.log(abs(rayleigh)), abs=1e-10)


def test_det_Q_star_rejects_dependent_vectors():
    Q = Regularizer()
    T = BlockCircleOperator.identity(8)
    u = BoundaryData.random(8, np.random.default_rng(0))
    with pytest.raises(ValueError, match="independent"):
        det_Q_star(T, Q, [u, u])


def test_decay_check_rejects_slow_tails():
    Q = Regularizer()
    n_max = 128

    def block(n):
        return (1.0 + 0.5 / abs(n) ** 0.5) * np.eye(2)

    T = BlockCircleOperator.from_block_function(
        n_max, block, np.eye(2), np.eye(2), zero_block=np.eye(2))
    with pytest.raises((ValueError, InsufficientTruncation)):
        det_Q(T, Q)


def test_additivity_over_components():
    # two-circle direct sum: zeta_Q(0) adds, c_Q multiplies
    Q = Regularizer("shifted", 0.25)
    z1 = Q.zeta_Q_at_0()
    assert c_Q(Q) == pytest.approx(2.0 ** (-z1), rel=1e-13)
    assert 2.0 ** (-(z1 + z1)) == pytest.approx(c_Q(Q) ** 2, rel=1e-13)
