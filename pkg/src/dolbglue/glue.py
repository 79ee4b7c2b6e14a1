"""Gluing identities: jump operators, factorization checks, degenerations.

The flat torus of periods (a, b) is cut along the horizontal circle y = 0
into the cylinder [0, b] x S^1_a.  For the framing exp(2 pi i k z / a)
near the cut, the mixed boundary-value problem decouples over conjugate
mode pairs of the framing-trivialized field, and the Neumann jump operator
has closed-form 2x2 blocks obtained from a two-point solve in y.  For the
trivial framing (k = 0) the blocks collapse to

    N(n) = (2 tanh(mu_n b / 2) / mu_n) [[lam, -i k_n], [i k_n, -1]],

with k_n = 2 pi n / a and mu_n = sqrt(k_n^2 + lam).

The factorization checks compare log Det(D + lam) on the closed surface
against c_Q, the cut-surface determinant, and log Det_Q of the jump, each
computed independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .blockop import BlockCircleOperator
from .boundary import BoundaryData, RealBoundaryField
from .regdet import Regularizer, c_Q, det_Q, det_Q_star
from .spectra import ModelGeometry, doubled, enumerate_spectrum, zeta_det

__all__ = [
    "CutDecomposition",
    "neumann_jump_torus",
    "bfk_verify",
    "sphere_equator_check",
    "framing_gram",
    "zero_mode_bfk_verify",
    "jump_asymptotics",
    "DegenerationReport",
]


@dataclass(frozen=True)
class CutDecomposition:
    """A closed model surface cut along one circle."""

    closed_geometry: ModelGeometry
    cut: str                                  # "torus_horizontal" | "sphere_equator" | "disk"
    pieces: tuple = ()
    framing: str = "trivial"                  # "trivial" | "twist" | "global_section" | "meromorphic_simple_pole"
    twist: int = 0

    @classmethod
    def torus_cut(cls, a, b, framing="trivial", twist=0):
        geom = ModelGeometry.torus(a, b)
        return cls(geom, "torus_horizontal", (ModelGeometry.cylinder(a, b),), framing, twist)

    @classmethod
    def sphere_equator(cls, R):
        geom = ModelGeometry.sphere(R)
        return cls(geom, "sphere_equator",
                   (ModelGeometry.hemisphere(R), ModelGeometry.hemisphere(R)))

    @property
    def cut_length(self) -> float:
        if self.cut == "torus_horizontal":
            return self.closed_geometry.dims[0]
        if self.cut == "sphere_equator":
            return 2.0 * math.pi * self.closed_geometry.dims[0]
        raise ValueError(self.cut)


def _twisted_block(a, b, lam, twist, j):
    """2x2 jump block at framing mode j for the cut torus."""
    from .odedet import _basis_rows

    k1 = 2.0 * math.pi * (j + twist) / a
    k2 = 2.0 * math.pi * (-j + twist) / a
    mu1 = math.sqrt(k1 * k1 + lam)
    mu2 = math.sqrt(k2 * k2 + lam)
    # scaled exponential basis keeps entries O(mu) at every mode
    v1, d1 = _basis_rows(mu1, b, mu1 > 0)
    v2, d2 = _basis_rows(mu2, b, mu2 > 0)

    # unknowns x = (p_A, p_B, q_A, q_B); p solves at frequency mu1,
    # q = conj(phi_{-j+twist}) at frequency mu2
    def comb(vals, ders, kk, at):
        return kk * vals[at] + ders[at]

    M = np.zeros((4, 4), dtype=complex)
    rhs = np.zeros((4, 2), dtype=complex)
    # f conditions: p - q = 2 i f at y = 0 and y = b
    M[0, :2] = v1[0]
    M[0, 2:] = -v2[0]
    M[1, :2] = v1[1]
    M[1, 2:] = -v2[1]
    rhs[0, 0] = rhs[1, 0] = 2j
    # g conditions: (k1 p + p') + (k2 q + q') = 2 g at both circles
    M[2, :2] = comb(v1, d1, k1, 0)
    M[2, 2:] = comb(v2, d2, k2, 0)
    M[3, :2] = comb(v1, d1, k1, 1)
    M[3, 2:] = comb(v2, d2, k2, 1)
    rhs[2, 1] = rhs[3, 1] = 2.0

    sol = np.linalg.solve(M, rhs)
    out = np.zeros((2, 2), dtype=complex)
    for col in range(2):
        x = sol[:, col]
        p, q = x[:2], x[2:]
        flux = lambda at: (comb(v1, d1, k1, at) @ p) - (comb(v2, d2, k2, at) @ q)
        val = lambda at: (v1[at] @ p) + (v2[at] @ q)
        out[0, col] = 0.5j * (flux(0) - flux(1))
        out[1, col] = 0.5 * (val(0) - val(1))
    return out


def neumann_jump_torus(a, b, lam, twist: int = 0, n_max: int = 256) -> BlockCircleOperator:
    """Neumann jump operator for the horizontal cut of the (a, b) torus.

    For lam > 0 all blocks are nonsingular.  At lam = 0 the operator is only
    defined modulo its finite exceptional subspace: for a twisted framing the
    g-constant direction is obstructed (excluded) and the framing-degree
    modes become singular kernel directions, which callers deflate.
    """
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    if lam == 0 and twist == 0:
        raise ValueError("the trivially framed jump needs lam > 0")
    blocks = np.zeros((2 * n_max + 1, 2, 2), dtype=complex)
    if twist == 0:
        n = np.arange(-n_max, n_max + 1, dtype=float)
        k = 2.0 * np.pi * n / a
        mu = np.sqrt(k * k + lam)
        pref = 2.0 * np.tanh(mu * b / 2.0) / mu
        blocks[:, 0, 0] = pref * lam
        blocks[:, 0, 1] = -1j * pref * k
        blocks[:, 1, 0] = 1j * pref * k
        blocks[:, 1, 1] = -pref
        exc = {"f0": "free", "g0": "free"}
    else:
        for j in range(-n_max, n_max + 1):
            if lam == 0 and j == 0:
                kap = 2.0 * math.pi * abs(twist) / a
                blocks[n_max] = np.array(
                    [[2.0 * kap * math.tanh(kap * b / 2.0), 0.0], [0.0, 0.0]])
                continue
            blocks[n_max + j] = _twisted_block(a, b, lam, twist, j)
        exc = {"f0": "free", "g0": "excluded" if lam == 0 else "free"}
    sym = np.array([[0.0, -2j], [2j, 0.0]])
    return BlockCircleOperator(blocks, sym, np.conj(sym), exceptional=exc,
                               decay_exponent=2.0)


@dataclass(frozen=True)
class GlueReport:
    lhs_logdet: float
    rhs_terms: dict
    residual: float
    tails: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "lhs_logdet": self.lhs_logdet,
            "rhs_terms": self.rhs_terms,
            "residual": self.residual,
            "tails": self.tails,
        }


def bfk_verify(cut: CutDecomposition, lam: float, Q: Regularizer | None = None,
               n_max: int = 512, lam_max: float = 4.0e5) -> GlueReport:
    """Residual of the factorization of Det(D + lam) across the cut.

    Supported: the horizontal torus cut with trivial framing.  All three
    factors are computed independently: the closed and cut determinants by
    heat-kernel zeta regularization, the jump determinant by the finite-part
    trace prescription.
    """
    if Q is None:
        Q = Regularizer()
    if cut.cut != "torus_horizontal" or cut.framing != "trivial":
        raise ValueError("bfk_verify supports the trivially framed torus cut")
    if lam <= 0:
        raise ValueError("lam must be positive")
    a, b = cut.closed_geometry.dims

    closed = doubled(enumerate_spectrum(cut.closed_geometry, "closed"))
    res_closed = zeta_det(closed, lam, lam_max=lam_max)

    gd = enumerate_spectrum(cut.pieces[0], "dirichlet")
    gn = enumerate_spectrum(cut.pieces[0], "neumann")
    res_d = zeta_det(gd, lam, lam_max=lam_max)
    res_n = zeta_det(gn, lam, lam_max=lam_max)

    N = neumann_jump_torus(a, b, lam, 0, n_max)
    logdet_N, tail_N = det_Q(N, Q)
    log_cQ = -Q.zeta_Q_at_0() * math.log(2.0)

    lhs = res_closed.log_det
    rhs = log_cQ + res_d.log_det + res_n.log_det + logdet_N
    return GlueReport(
        lhs_logdet=lhs,
        rhs_terms={
            "cut_logdet": res_d.log_det + res_n.log_det,
            "log_detQ_jump": logdet_N,
            "log_cQ": log_cQ,
        },
        residual=lhs - rhs,
        tails={
            "closed": res_closed.tail_error,
            "cut_dirichlet": res_d.tail_error,
            "cut_neumann": res_n.tail_error,
            "jump": tail_N,
        },
    )


def framing_gram(cut: CutDecomposition) -> np.ndarray:
    """Boundary Gram matrix of the closed-surface kernel in the cut framing.

    For the torus the kernel is spanned by the constants 1 and i; in the
    framing exp(2 pi i k z / a) their boundary data have f parts
    Im(c e^{-i beta k x}), giving the Gram a * I for k != 0 and a singular
    matrix for the trivial framing (the real constant has no imaginary
    part).  Nonsingularity of this matrix is the genericity detector.
    """
    if cut.cut != "torus_horizontal":
        raise ValueError("framing_gram supports torus cuts")
    a = cut.closed_geometry.dims[0]
    k = cut.twist if cut.framing == "twist" else 0
    if k == 0:
        # f parts are Im(c): constant 0 for c = 1, constant 1 for c = i
        return np.array([[0.0, 0.0], [0.0, 2.0 * a]])
    return a * np.eye(2)


def zero_mode_bfk_verify(cut: CutDecomposition, Q: Regularizer | None = None,
                         n_max: int = 1024, lam_max: float = 4.0e5) -> GlueReport:
    """Residual of the zero-mode factorization for the twisted torus cut.

    Every factor is computed independently: the closed determinant by the
    heat-kernel zeta, the cut determinant by the fiber boundary-determinant
    sum, the kernel Gram factors in closed form, and the jump determinant
    by the deflated finite-part prescription.  Raises for framings that
    fail the genericity test.
    """
    from .odedet import twisted_cylinder_logdet_star

    if Q is None:
        Q = Regularizer()
    if cut.cut != "torus_horizontal":
        raise ValueError("zero_mode_bfk_verify supports torus cuts")
    gram_closed_boundary = framing_gram(cut)
    if np.linalg.matrix_rank(gram_closed_boundary, tol=1e-12) < 2:
        raise ValueError("framing not generic")
    k = cut.twist
    a, b = cut.closed_geometry.dims
    beta = 2.0 * math.pi * abs(k) / a

    # left side: Det* D on the torus over the kernel Gram
    closed = enumerate_spectrum(cut.closed_geometry, "closed")
    logdet_closed = 2.0 * zeta_det(closed, 0.0, lam_max=lam_max).log_det
    gram_closed = math.log(4.0 * (a * b) ** 2)   # det of the 2x2 kernel Gram
    lhs = logdet_closed - gram_closed

    # cut side: Det* of the twisted mixed problem over its kernel Gram
    logdet_cut = twisted_cylinder_logdet_star(a, b, k)
    tau_norm_sq = a * (1.0 - math.exp(-2.0 * beta * b)) / (2.0 * beta)
    gram_cut = math.log(2.0 * tau_norm_sq)

    # boundary Gram factors
    log_gram_bprime = math.log(float(np.linalg.det(gram_closed_boundary)))
    jump_const = 1.0 - math.exp(-beta * b)
    log_gram_jump = math.log(2.0 * a * jump_const ** 2)

    # jump determinant, deflated by the exceptional boundary subspace
    N = neumann_jump_torus(a, b, 0.0, k, n_max)
    excluded = [
        BoundaryData(RealBoundaryField.from_modes(n_max, {abs(k): 0.5j}),
                     RealBoundaryField.zero(n_max)),
        BoundaryData(RealBoundaryField.from_modes(n_max, {abs(k): 0.5}),
                     RealBoundaryField.zero(n_max)),
        BoundaryData(RealBoundaryField.zero(n_max),
                     RealBoundaryField.from_modes(n_max, {0: 1.0})),
    ]
    logdet_N, tail_N = det_Q_star(N, Q, excluded, circle_length=a)
    log_cQ = -Q.zeta_Q_at_0() * math.log(2.0)

    rhs = (log_cQ + (logdet_cut - gram_cut)
           + log_gram_jump - log_gram_bprime + logdet_N)
    return GlueReport(
        lhs_logdet=lhs,
        rhs_terms={
            "cut_logdet": logdet_cut,
            "gram_cut": gram_cut,
            "gram_jump": log_gram_jump,
            "gram_bprime": log_gram_bprime,
            "log_detQ_jump": logdet_N,
            "log_cQ": log_cQ,
        },
        residual=lhs - rhs,
        tails={"jump": tail_N},
    )


@dataclass(frozen=True)
class DegenerationReport:
    eps_values: tuple
    log_dets: tuple                 # starred jump determinants per eps
    extrapolated: float
    expected: float
    decay_exponent: float = float("nan")
    diagnostics: dict = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return self.extrapolated - self.expected

    def to_dict(self):
        return {
            "eps_values": list(self.eps_values),
            "log_dets": list(self.log_dets),
            "extrapolated": self.extrapolated,
            "expected": self.expected,
            "residual": self.residual,
            "decay_exponent": self.decay_exponent,
            "diagnostics": self.diagnostics,
        }


def _extrapolate(eps, vals):
    eps = np.asarray(eps, dtype=float)
    vals = np.asarray(vals, dtype=float)
    if eps.size >= 3:
        coef = np.polynomial.polynomial.polyfit(eps, vals, 2)
        return float(coef[0])
    return float(vals[-1])


def jump_asymptotics(framing: str, eps_list, Q: Regularizer | None = None,
                     n_max: int = 256, torus_period: float = 4.0) -> DegenerationReport:
    """Shrinking-circle asymptotics of the starred jump determinant.

    framing = "global_section": the trivially framed trivial bundle on a
    square torus with an excised disk; the unit-circle region operator is
    assembled once from the torus Green function and transferred inward
    across flat annuli; the limit is (zeta_Q(0) - 4 h0 + 2) log 2 with
    h0 = 1.

    framing = "meromorphic_simple_pole": the trivial bundle framed by a
    meromorphic section with one simple pole (realized on the round
    sphere, the closed surface carrying such a section with h0 = 1); after
    subtracting log(eps/2) the limit is (zeta_Q(0) - 4 h0 - 2) log 2.
    """
    from .diskops import disk_alvarez_operator, disk_simple_pole_operator, sphere_exterior_pole_operator
    from .greens import (dense_from_blocks, dense_mirror_conjugate,
                         dense_apply_transfer, logdet_star_dense, torus_region_operator)

    if Q is None:
        Q = Regularizer()
    eps_list = tuple(sorted(eps_list, reverse=True))
    if any(e > 0.5 or e <= 0 for e in eps_list):
        raise ValueError("eps values must lie in (0, 1/2]")
    zq0 = Q.zeta_Q_at_0()
    lbar = math.log(2.0)

    if framing == "global_section":
        if torus_period <= 2.0:
            raise ValueError("unit disk must embed in the torus")
        A1 = torus_region_operator(torus_period, 1.0, n_max)
        herm = A1.hermiticity_residual()
        if herm > 1e-6:
            raise RuntimeError(f"region operator self-adjointness residual {herm:.2e}")
        d = A1.matrix.shape[0]
        e0 = np.zeros(d)
        e0[0] = 1.0
        e1 = np.zeros(d)
        e1[1] = 1.0
        logs = []
        decay = float("nan")
        for eps in eps_list:
            A_eps = dense_apply_transfer(A1, eps)
            disk = dense_from_blocks(disk_alvarez_operator(eps, n_max), 2.0 * math.pi * eps)
            N = A_eps.copy_with(A_eps.matrix + dense_mirror_conjugate(disk).matrix)
            N.symbol_plus = np.array([[0.0, 2j], [-2j, 0.0]])
            N.symbol_minus = np.conj(N.symbol_plus)
            val, _ = logdet_star_dense(N, zq0, [e0, e1], lbar=lbar)
            logs.append(val)
            if eps == eps_list[0]:
                ms = np.arange(2, min(24, n_max // 2))
                devs = np.asarray([
                    np.linalg.norm(N.block(m) @ N.block(m) - 4.0 * np.eye(2))
                    for m in ms
                ])
                mask = devs > 1e-14
                if mask.sum() >= 4:
                    decay = -float(np.polyfit(np.log(ms[mask]), np.log(devs[mask]), 1)[0])
                else:
                    decay = float("inf")   # already below noise: faster than any power
        expected = (zq0 - 2.0) * math.log(2.0)
        extr = _extrapolate(eps_list, logs)
        return DegenerationReport(eps_list, tuple(logs), extr, expected, decay,
                                  {"hermiticity": herm, "surface": "torus"})

    if framing == "meromorphic_simple_pole":
        logs = []
        for eps in eps_list:
            from .blockop import mirror_conjugate
            N = sphere_exterior_pole_operator(eps, n_max) + mirror_conjugate(
                disk_simple_pole_operator(eps, n_max))
            excluded = [
                BoundaryData(RealBoundaryField.zero(n_max),
                             RealBoundaryField.from_modes(n_max, {0: 1.0})),
                BoundaryData(RealBoundaryField.from_modes(n_max, {1: 1.0}),
                             RealBoundaryField.zero(n_max)),
                BoundaryData(RealBoundaryField.from_modes(n_max, {1: 1j}),
                             RealBoundaryField.zero(n_max)),
                BoundaryData(RealBoundaryField.zero(n_max),
                             RealBoundaryField.from_modes(n_max, {1: 1.0})),
                BoundaryData(RealBoundaryField.zero(n_max),
                             RealBoundaryField.from_modes(n_max, {1: 1j})),
            ]
            val, _ = det_Q_star(N, Q, excluded, circle_length=2.0 * math.pi * eps)
            logs.append(val + math.log(eps / 2.0))
        expected = (zq0 - 6.0) * math.log(2.0)
        extr = _extrapolate(eps_list, logs)
        return DegenerationReport(eps_list, tuple(logs), extr, expected,
                                  diagnostics={"surface": "sphere"})

    raise ValueError(f"unsupported framing {framing}")


def sphere_equator_check(R: float = 1.0, lam_max: float = 4.0e5) -> GlueReport:
    """Residual of Det* on the sphere against the hemisphere product."""
    sph = enumerate_spectrum(ModelGeometry.sphere(R), "closed")
    hd = enumerate_spectrum(ModelGeometry.hemisphere(R), "dirichlet")
    hn = enumerate_spectrum(ModelGeometry.hemisphere(R), "neumann")
    r_s = zeta_det(sph, 0.0, lam_max=lam_max)
    r_d = zeta_det(hd, 0.0, lam_max=lam_max)
    r_n = zeta_det(hn, 0.0, lam_max=lam_max)
    lhs = r_s.log_det
    rhs = r_d.log_det + r_n.log_det
    return GlueReport(
        lhs_logdet=lhs,
        rhs_terms={"dirichlet": r_d.log_det, "neumann": r_n.log_det},
        residual=lhs - rhs,
        tails={"sphere": r_s.tail_error, "dirichlet": r_d.tail_error,
               "neumann": r_n.tail_error},
    )
