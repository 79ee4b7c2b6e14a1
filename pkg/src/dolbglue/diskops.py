"""Explicit boundary operators for flat disks, annuli, and cylinders.

All operators act on coefficient pairs (f_hat(n), g_hat(n)) as in
:mod:`dolbglue.boundary`.  Two coordinate conventions occur:

* "inside" circles (boundary of a disk, counterclockwise, outward normal
  +r): flux coordinate u = -2i e^{-i theta} d(phi)/d(zbar);
* "outside" circles (boundary of the complement of a disk, clockwise,
  outward normal -r): flux coordinate u = +2i e^{-i theta} d(phi)/d(zbar),
  and mode index reversed relative to theta.

A cut circle is parametrized by the outside piece; the inside piece's
operator enters jump assemblies conjugated by the mode reflection Sigma.

The transfer identity moves the boundary operator of an exterior region
across a flat annulus eps <= |z| <= 1:

    A(outer region cut at radius eps)
        = S_eps + eps * U_eps A1 (I + T_eps A1)^{-1} U_eps

with mode-diagonal S, U, T given in closed form below and A1 the
operator at the unit circle.
"""

from __future__ import annotations

import numpy as np

from .blockop import BlockCircleOperator, mirror_conjugate

__all__ = [
    "disk_alvarez_operator",
    "disk_simple_pole_operator",
    "plane_exterior_operator",
    "sphere_exterior_pole_operator",
    "half_cylinder_operator",
    "annulus_transfer",
    "transfer_t_limit",
    "apply_transfer",
    "assemble_jump",
    "dilate_to_unit",
    "dilate_from_unit",
    "annulus_direct_blocks",
]


def _sgn(n):
    return np.sign(n)


def disk_alvarez_operator(eps: float, n_max: int) -> BlockCircleOperator:
    """Boundary operator of the flat disk of radius eps, trivial framing.

    block(n) = [[0, -i sgn n], [i sgn n, -eps/|n|]] for n != 0.  The n = 0
    plane is exceptional at spectral parameter zero: the constant f mode is
    annihilated and the constant g mode spans the excluded finite subspace.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")

    def block(n):
        s = _sgn(n)
        return np.array([[0.0, -1j * s], [1j * s, -eps / abs(n)]])

    sym_p = np.array([[0.0, -1j], [1j, 0.0]])
    return BlockCircleOperator.from_block_function(
        n_max, block, sym_p, np.conj(sym_p),
        exceptional={"f0": "annihilated", "g0": "excluded"},
        decay_exponent=1.0,
    )


def disk_simple_pole_operator(eps: float, n_max: int) -> BlockCircleOperator:
    """Disk operator for a framing with a simple pole at the center.

    This is the model for a canonically framed disk: block(n) has the same
    structure as the trivial framing with |n| shifted by the winding,
    block(n) = [[0, -i sgn n], [i sgn n, -eps/(|n|+1)]], and the n = 0 plane
    carries the nonsingular block diag(2/eps, -eps/2); there is no excluded
    direction.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")

    def block(n):
        s = _sgn(n)
        return np.array([[0.0, -1j * s], [1j * s, -eps / (abs(n) + 1.0)]])

    sym_p = np.array([[0.0, -1j], [1j, 0.0]])
    zero = np.array([[2.0 / eps, 0.0], [0.0, -eps / 2.0]])
    return BlockCircleOperator.from_block_function(
        n_max, block, sym_p, np.conj(sym_p), zero_block=zero, decay_exponent=1.0
    )


def plane_exterior_operator(eps: float, n_max: int) -> BlockCircleOperator:
    """Boundary operator of the plane minus the disk of radius eps.

    Outside pieces are parametrized like inside ones (counterclockwise
    theta, same flux coordinate); decaying harmonic extensions then give

        block(n) = [[0, i sgn n], [-i sgn n, eps/|n|]],

    the sign-mirrored disk pattern.  Used as a reference operator for
    renormalized boundary assemblies and as a transfer fixed point.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")

    def block(n):
        s = _sgn(n)
        return np.array([[0.0, 1j * s], [-1j * s, eps / abs(n)]])

    sym_p = np.array([[0.0, 1j], [-1j, 0.0]])
    return BlockCircleOperator.from_block_function(
        n_max, block, sym_p, np.conj(sym_p),
        exceptional={"f0": "annihilated", "g0": "excluded"},
        decay_exponent=1.0,
    )


def sphere_exterior_pole_operator(eps: float, n_max: int) -> BlockCircleOperator:
    """Boundary operator of the round sphere minus a disk, framed by a
    meromorphic section with a simple pole at the removed point.

    Harmonicity at parameter zero is conformally invariant, so in the
    stereographic chart the solve is the bounded exterior one; with the
    pole framing the data trivialization shifts the mode bookkeeping by
    one:

        block(m) = [[0, i sgn m], [-i sgn m, eps/(|m|-1)]]   for |m| >= 2,

    while the whole |m| = 1 plane and the g-constant direction make up the
    finite exceptional subspace (together with the kernel of the closed
    surface they span the deflation space of the pinched jump operator),
    and the f-constant datum is annihilated.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    blocks = np.zeros((2 * n_max + 1, 2, 2), dtype=complex)
    for m in range(2, n_max + 1):
        B = np.array([[0.0, 1j], [-1j, eps / (m - 1.0)]])
        blocks[n_max + m] = B
        blocks[n_max - m] = np.conj(B)
    sym_p = np.array([[0.0, 1j], [-1j, 0.0]])
    return BlockCircleOperator(blocks, sym_p, np.conj(sym_p),
                               exceptional={"f0": "annihilated", "g0": "excluded"},
                               decay_exponent=1.0)


def half_cylinder_operator(a: float, lam: float, n_max: int) -> BlockCircleOperator:
    """Boundary operator of the half-infinite flat cylinder [0, inf) x S^1_a.

    At spectral parameter lam > 0 the decaying solve gives

        A(n) = (1/mu_n) [[lam, -i k_n], [i k_n, -1]],
        k_n = 2 pi n / a,  mu_n = sqrt(k_n^2 + lam).

    These blocks satisfy star A = -A^{-1} star exactly, with star the
    component swap.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    if a <= 0:
        raise ValueError("circumference must be positive")

    def block(n):
        k = 2.0 * np.pi * n / a
        mu = np.hypot(k, np.sqrt(lam))
        return np.array([[lam, -1j * k], [1j * k, -1.0]]) / mu

    sym_p = np.array([[0.0, -1j], [1j, 0.0]])
    mu0 = np.sqrt(lam)
    zero = np.array([[lam, 0.0], [0.0, -1.0]]) / mu0
    return BlockCircleOperator.from_block_function(
        n_max, block, sym_p, np.conj(sym_p), zero_block=zero, decay_exponent=1.0
    )


def _cn(eps: float, n: np.ndarray) -> np.ndarray:
    """(eps^n - eps^-n)/(eps^n + eps^-n), computed without overflow."""
    t = eps ** (2.0 * np.abs(n))
    return np.sign(n) * (t - 1.0) / (t + 1.0)


def annulus_transfer(eps: float, n_max: int):
    """Mode-diagonal transfer operators (S, U, T) of the annulus [eps, 1].

    For n != 0, with c_n = (eps^n - eps^-n)/(eps^n + eps^-n):

        S(n) = c_n [[0, -i], [i, -eps/n]]
        U(n) = (2 / (eps (eps^n + eps^-n))) diag(1, eps)
        T(n) = c_n [[1/n, -i], [i, 0]]

    Valid for 0 < eps <= 1/2 (the stated range of the identity).
    """
    if not (0.0 < eps <= 0.5):
        raise ValueError("eps must lie in (0, 1/2]")
    n = np.arange(-n_max, n_max + 1, dtype=float)
    n[n_max] = 1.0  # placeholder; the 0 blocks are zeroed below
    c = _cn(eps, n)
    t = eps ** (2.0 * np.abs(n))
    upre = 2.0 * eps ** (np.abs(n) - 1.0) / (1.0 + t)

    S = np.zeros((2 * n_max + 1, 2, 2), dtype=complex)
    U = np.zeros_like(S)
    T = np.zeros_like(S)
    S[:, 0, 1] = -1j * c
    S[:, 1, 0] = 1j * c
    S[:, 1, 1] = -c * eps / n
    U[:, 0, 0] = upre
    U[:, 1, 1] = upre * eps
    T[:, 0, 0] = c / n
    T[:, 0, 1] = -1j * c
    T[:, 1, 0] = 1j * c
    for M in (S, U, T):
        M[n_max] = 0.0

    sym_S = np.array([[0.0, 1j], [-1j, 0.0]])  # c_n -> -sgn(n); plus branch
    sym_T0 = np.array([[-0.0, 1j], [-1j, 0.0]])
    zero2 = np.zeros((2, 2))
    S_op = BlockCircleOperator(S, sym_S, np.conj(sym_S),
                               exceptional={"f0": "annihilated", "g0": "excluded"})
    U_op = BlockCircleOperator(U, zero2, zero2)
    T_op = BlockCircleOperator(T, sym_T0, np.conj(sym_T0))
    return S_op, U_op, T_op


def transfer_t_limit(n_max: int) -> BlockCircleOperator:
    """eps -> 0 limit of the T operator: [[-1/|n|, i sgn n], [-i sgn n, 0]]."""
    def block(n):
        s = _sgn(n)
        return np.array([[-1.0 / abs(n), 1j * s], [-1j * s, 0.0]])

    sym = np.array([[0.0, 1j], [-1j, 0.0]])
    return BlockCircleOperator.from_block_function(n_max, block, sym, np.conj(sym))


def apply_transfer(A1: BlockCircleOperator, eps: float) -> BlockCircleOperator:
    """Transfer a unit-circle exterior operator inward to radius eps.

    Returns S_eps + eps U_eps A1 (I + T_eps A1)^{-1} U_eps, evaluated
    block-wise.  The diagonal of I + T A1 cancels to O(eps^{2|n|}) against
    the symbol part of A1, so it is assembled from the exact rearrangement
    1 + c_n (T~ A_inf)_ii = 2 tau / (1 + tau), tau = eps^{2|n|}, which keeps
    every block solve well conditioned at large |n|.  The n = 0 block is
    not covered by the identity and is left as the exceptional zero block.
    """
    if not (0.0 < eps <= 0.5):
        raise ValueError("eps must lie in (0, 1/2]")
    n_max = A1.n_max
    S, _, _ = annulus_transfer(eps, n_max)
    blocks = S.blocks.copy()
    D = np.array([[1.0, 0.0], [0.0, eps]])
    for n in range(-n_max, n_max + 1):
        if n == 0:
            continue
        tau = eps ** (2.0 * abs(n))
        c = np.sign(n) * (tau - 1.0) / (tau + 1.0)
        Ttil = c * np.array([[1.0 / n, -1j], [1j, 0.0]])
        A = A1.block(n)
        M = np.eye(2) + Ttil @ A
        # for operators with the outside-piece symbol [[0, i], [-i, 0]] the
        # blocks of I + T A tend to 2 I, so this solve stays well conditioned
        detM = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        scale = max(1.0, float(np.abs(M).max()) ** 2)
        if abs(detM) <= 1e-14 * scale:
            raise np.linalg.LinAlgError(f"singular transfer block at mode n={n}")
        adjM = np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]])
        pref = eps * (2.0 * eps ** (abs(n) - 1.0) / (1.0 + tau)) ** 2
        blocks[n_max + n] += (pref / detM) * (D @ A @ adjM @ D)
    return BlockCircleOperator(
        blocks, S.symbol_plus, S.symbol_minus,
        exceptional=dict(S.exceptional), decay_exponent=A1.decay_exponent,
    )


def assemble_jump(A_outside: BlockCircleOperator, A_inside: BlockCircleOperator) -> BlockCircleOperator:
    """Neumann jump operator A_outside + Sigma A_inside Sigma for a cut circle.

    The cut circle is parametrized by the outside piece; the inside piece's
    operator is supplied in its own (counterclockwise) coordinates and is
    conjugated by the mode reflection.
    """
    if A_outside.n_max != A_inside.n_max:
        raise ValueError("truncation mismatch")
    return A_outside + mirror_conjugate(A_inside)


def dilate_to_unit(A: BlockCircleOperator, r: float) -> BlockCircleOperator:
    """Re-express an operator on the circle |z| = r in unit-circle coordinates.

    Under w = z/r boundary data transform as (f, g) -> (f, r g) while flux
    outputs pick up a factor r, so A_w = diag(r, 1) A_z diag(1, 1/r).
    """
    D = np.array([[r, 0.0], [0.0, 1.0]])
    E = np.array([[1.0, 0.0], [0.0, 1.0 / r]])
    blocks = np.einsum("ij,njk,kl->nil", D, A.blocks, E)
    return BlockCircleOperator(blocks, D @ A.symbol_plus @ E, D @ A.symbol_minus @ E,
                               exceptional=dict(A.exceptional), decay_exponent=A.decay_exponent)


def dilate_from_unit(A: BlockCircleOperator, r: float) -> BlockCircleOperator:
    """Inverse of :func:`dilate_to_unit`."""
    return dilate_to_unit(A, 1.0 / r)


def annulus_direct_blocks(A1: BlockCircleOperator, eps: float) -> BlockCircleOperator:
    """Exterior operator at radius eps by the direct two-circle annulus solve.

    Independent of the transfer identity: per mode pair, the four harmonic
    coefficients on the annulus are matched to the prescribed data at the
    eps circle and to the unit-circle response of A1.  Serves as the oracle
    for :func:`apply_transfer`.
    """
    n_max = A1.n_max
    blocks = np.zeros((2 * n_max + 1, 2, 2), dtype=complex)
    for m in range(1, n_max + 1):
        A = A1.block(m)
        # unknowns x = (p1, p2~, q1, q2~) with p2 = eps^m p2~, q2 = eps^m q2~
        # (column scaling keeps the system well conditioned); mode-m traces
        # at radius r, with P = p1 r^m + p2 r^-m and Q = q1 r^m + q2 r^-m:
        #   f(r) = (P(r) - Q(r)) / 2i
        #   g(r) = m (p2 r^{-m-1} - q1 r^{m-1})
        #   F(r) = i m (p2 r^{-m-1} + q1 r^{m-1})
        #   G(r) = (P(r) + Q(r)) / 2
        sc = eps ** m

        def rowsP(r):
            return np.array([r ** m, sc * r ** (-m), 0.0, 0.0], dtype=complex)

        def rowsQ(r):
            return np.array([0.0, 0.0, r ** m, sc * r ** (-m)], dtype=complex)

        def row_g(r):
            return m * np.array([0.0, sc * r ** (-m - 1), -r ** (m - 1), 0.0], dtype=complex)

        def row_F(r):
            return 1j * m * np.array([0.0, sc * r ** (-m - 1), r ** (m - 1), 0.0], dtype=complex)

        M = np.zeros((4, 4), dtype=complex)
        # interface conditions at r = 1: (F1, G1) = A1 (f1, g1)
        M[0] = row_F(1.0) - A[0, 0] * (rowsP(1.0) - rowsQ(1.0)) / 2j - A[0, 1] * row_g(1.0)
        M[1] = (rowsP(1.0) + rowsQ(1.0)) / 2.0 - A[1, 0] * (rowsP(1.0) - rowsQ(1.0)) / 2j - A[1, 1] * row_g(1.0)
        # data conditions at r = eps
        M[2] = (rowsP(eps) - rowsQ(eps)) / 2j
        M[3] = row_g(eps)

        for col, rhs in enumerate([(0, 0, 1, 0), (0, 0, 0, 1)]):
            x = np.linalg.solve(M, np.array(rhs, dtype=complex))
            blocks[n_max + m, 0, col] = row_F(eps) @ x
            blocks[n_max + m, 1, col] = (rowsP(eps) + rowsQ(eps)) / 2.0 @ x
        blocks[n_max - m] = np.conj(blocks[n_max + m])

    return BlockCircleOperator(
        blocks, A1.symbol_plus.copy(), A1.symbol_minus.copy(),
        exceptional={"f0": "annihilated", "g0": "excluded"},
    )
