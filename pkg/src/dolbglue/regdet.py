"""Regularized determinants of order-zero block operators on the circle.

For an invertible hermitian mode-block family T with symbol limits, the
determinant is regularized by a positive order-one sequence q_n:

    log Det_Q T  =  f.p. sum_n q_n^{-s} tr(Log T)(n) |_{s=0},

where Log T is taken block-wise, routing indefinite blocks through
(1/2) Log T^2 so every block trace equals the sum of log|eigenvalue|.
Splitting tr(Log T)(n) into the symbol value plus a summable remainder
makes the finite part explicit:

    log Det_Q T = t_0 + l_+ Z_+(0) + l_- Z_-(0) + sum_{n != 0} r_n,

with Z_pm the continuations of sum_{n>=1} q_{pm n}^{-s}.  The starred
variant restricts to the orthogonal complement of a finite list of
excluded boundary vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blockop import BlockCircleOperator
from .boundary import BoundaryData
from .zetautil import zeta_hurwitz

__all__ = [
    "Regularizer",
    "log_operator",
    "det_Q",
    "det_Q_star",
    "c_Q",
    "derivative_identity_check",
    "InsufficientTruncation",
    "dense_real_matrix",
    "mode_weights",
]


class InsufficientTruncation(RuntimeError):
    pass


@dataclass(frozen=True)
class Regularizer:
    """Positive order-one eigenvalue sequence q_n with zeta continuation.

    kinds: "default" (q_n = max(|n|,1)), "sqrt" (sqrt(n^2+1)),
    "shifted" (|n| + a, a > 0), "scaled" (mu * max(|n|,1)).
    """

    kind: str = "default"
    param: float = 1.0

    def __post_init__(self):
        if self.kind not in ("default", "sqrt", "shifted", "scaled"):
            raise ValueError(f"unknown regularizer kind {self.kind}")
        if self.kind in ("shifted", "scaled") and self.param <= 0:
            raise ValueError("parameter must be positive")

    def q(self, n):
        n = np.abs(np.asarray(n, dtype=float))
        if self.kind == "default":
            return np.maximum(n, 1.0)
        if self.kind == "sqrt":
            return np.sqrt(n * n + 1.0)
        if self.kind == "shifted":
            return n + self.param
        return self.param * np.maximum(n, 1.0)

    def zeta_one_sided(self, s) -> complex:
        """Continuation of sum_{n>=1} q_n^{-s}."""
        s = complex(s)
        if self.kind == "default":
            return zeta_hurwitz(s)
        if self.kind == "scaled":
            return self.param ** (-s) * zeta_hurwitz(s)
        if self.kind == "shifted":
            return zeta_hurwitz(s, 1.0 + self.param)
        # sqrt(n^2+1): expand (1 + n^-2)^{-s/2} to three orders plus remainder
        z = zeta_hurwitz
        c1, c2, c3 = -s / 2.0, s * (s + 2.0) / 8.0, -s * (s + 2.0) * (s + 4.0) / 48.0
        total = z(s) + c1 * z(s + 2) + c2 * z(s + 4) + c3 * z(s + 6)
        n = np.arange(1.0, 60.0)
        exact = (n * n + 1.0) ** (-s / 2.0)
        model = n ** (-s) * (1.0 + c1 * n ** -2.0 + c2 * n ** -4.0 + c3 * n ** -6.0)
        return total + np.sum(exact - model)

    def zeta_component(self, s) -> complex:
        """Continuation of sum_{n in Z} q_n^{-s} (one scalar component)."""
        return self.q(0) ** (-complex(s)) + 2.0 * self.zeta_one_sided(s)

    def zeta_Q_at_0(self) -> float:
        """zeta_Q(0) on the full boundary space (two components per mode)."""
        return float(2.0 * self.zeta_component(0.0).real)

    def fp_one_sided_at_0(self) -> float:
        return float(self.zeta_one_sided(0.0).real)


def _block_logs(blocks: np.ndarray, tol: float = 1e-12):
    """Per-block log |eigenvalues| data: returns (logs, vectors)."""
    herm_err = np.abs(blocks - np.conj(np.swapaxes(blocks, 1, 2))).max()
    if herm_err > 1e-9 * max(1.0, np.abs(blocks).max()):
        raise ValueError(f"non-hermitian block (deviation {herm_err:.2e})")
    w, v = np.linalg.eigh(blocks)
    scale = np.abs(w).max()
    if np.abs(w).min() <= tol * max(scale, 1.0):
        bad = int(np.unravel_index(np.abs(w).argmin(), w.shape)[0])
        raise ValueError(f"singular block at mode n={bad - blocks.shape[0] // 2}")
    return np.log(np.abs(w)), v


def _symbol_logs(T: BlockCircleOperator):
    out = []
    for sym in (T.symbol_plus, T.symbol_minus):
        w = np.linalg.eigvalsh(sym)
        if np.abs(w).min() <= 1e-13 * max(1.0, np.abs(w).max()):
            raise ValueError("singular symbol")
        out.append(float(np.sum(np.log(np.abs(w)))))
    return out[0], out[1]


def log_operator(T: BlockCircleOperator) -> BlockCircleOperator:
    """Block-wise logarithm, with indefinite blocks through (1/2) Log T^2."""
    logs, v = _block_logs(T.blocks)
    blocks = np.einsum("nij,nj,nkj->nik", v, logs, np.conj(v))
    out_syms = []
    for sym in (T.symbol_plus, T.symbol_minus):
        w, u = np.linalg.eigh(sym)
        if np.abs(w).min() <= 1e-13 * max(1.0, np.abs(w).max()):
            raise ValueError("singular symbol")
        out_syms.append(u @ np.diag(np.log(np.abs(w))) @ u.conj().T)
    return BlockCircleOperator(blocks, out_syms[0], out_syms[1],
                               exceptional=dict(T.exceptional))


def _trace_data(T: BlockCircleOperator):
    """Per-mode traces of Log T and the symbol limits (l_plus, l_minus)."""
    logs, _ = _block_logs(T.blocks)
    t = logs.sum(axis=1)  # tr log|.| per block, real
    lp, lm = _symbol_logs(T)
    return t, lp, lm


def _nonzero_mode_remainders(T: BlockCircleOperator):
    """Remainders tr Log T(n) - symbol value for n = 1..n_max (and mirrored).

    Modes whose blocks are singular (finite exceptional directions handled
    by deflation) are masked out; the remainders only feed tail estimates.
    """
    n_max = T.n_max
    lp, lm = _symbol_logs(T)
    with np.errstate(divide="ignore"):
        w_p = np.abs(np.linalg.eigvalsh(T.blocks[n_max + 1:]))
        w_m = np.abs(np.linalg.eigvalsh(T.blocks[:n_max][::-1]))
        r_p = np.where(w_p.min(axis=1) > 1e-12, np.log(w_p).sum(axis=1) - lp, 0.0)
        r_m = np.where(w_m.min(axis=1) > 1e-12, np.log(w_m).sum(axis=1) - lm, 0.0)
    return r_p, r_m, lp, lm


def _tail_bound(r: np.ndarray, decay_exponent: float) -> float:
    """Crude bound on the neglected modes from the fitted remainder decay."""
    n_max = r.size
    tailw = np.abs(r[-max(4, n_max // 8):])
    c = tailw.max() * (n_max ** max(decay_exponent, 1.01))
    p = max(decay_exponent, 1.01)
    return float(2.0 * c * n_max ** (1.0 - p) / (p - 1.0))


def det_Q(T: BlockCircleOperator, Q: Regularizer,
          tail_rtol: float = 1e-9, decay_check: bool = True):
    """log Det_Q of an invertible hermitian block operator.

    Returns (log_det, tail_bound).  Raises InsufficientTruncation when the
    estimated mode tail exceeds ``tail_rtol`` of the accumulated total, and
    ValueError when the per-mode traces fail to approach the symbol values.
    """
    n_max = T.n_max
    t, lp, lm = _trace_data(T)
    n = np.arange(-n_max, n_max + 1)
    r = t.copy()
    r[n > 0] -= lp
    r[n < 0] -= lm
    t0 = t[n_max]
    r0 = r[n_max]

    rp = np.abs(r[n_max + 1:])
    if decay_check and n_max >= 32:
        window = np.arange(n_max // 2, n_max)
        vals = rp[window - 1]
        mask = vals > 1e-14 * max(1.0, np.abs(t).max())
        if mask.sum() > 8:
            slope = np.polyfit(np.log(window[mask].astype(float)), np.log(vals[mask]), 1)[0]
            if slope > -1.5:
                raise ValueError(
                    f"not a symbol-plus-trace-class operator (tail exponent {-slope:.2f})")

    total = float(t0 + lp * Q.fp_one_sided_at_0() + lm * Q.fp_one_sided_at_0()
                  + np.sum(r[n != 0]))
    tail = _tail_bound(r[n_max + 1:], T.decay_exponent)
    if tail > tail_rtol * max(abs(total), 1.0):
        raise InsufficientTruncation(
            f"mode tail {tail:.2e} exceeds {tail_rtol:.0e} of total {total:.3e}")
    return total, tail


def mode_weights(n_max: int, circle_length: float = 2.0 * math.pi) -> np.ndarray:
    """Diagonal of the pairing Gram matrix in the real coordinate layout.

    Layout: [f0, g0] then per m >= 1 the blocks
    [Re f_m, Im f_m, Re g_m, Im g_m]; the pairing of two data vectors is
    2 ell (x0 . y0) + 4 ell sum_m (x_m . y_m).
    """
    w = np.empty(2 + 4 * n_max)
    w[:2] = 2.0 * circle_length
    w[2:] = 4.0 * circle_length
    return w


def _embed_complex(b: np.ndarray) -> np.ndarray:
    """Real 4x4 matrix of a complex-linear 2x2 block on (f, g) coordinates."""
    out = np.empty((4, 4))
    for i in range(2):
        for j in range(2):
            re, im = b[i, j].real, b[i, j].imag
            out[2 * i: 2 * i + 2, 2 * j: 2 * j + 2] = [[re, -im], [im, re]]
    return out


def dense_real_matrix(T: BlockCircleOperator) -> np.ndarray:
    """Dense real representation of a mode-diagonal operator.

    Uses the coordinate layout of :func:`mode_weights`; valid for
    reality-preserving block families.
    """
    n_max = T.n_max
    d = 2 + 4 * n_max
    M = np.zeros((d, d))
    z = T.block(0)
    M[:2, :2] = np.real(z)
    for m in range(1, n_max + 1):
        k = 2 + 4 * (m - 1)
        M[k:k + 4, k:k + 4] = _embed_complex(T.block(m))
    return M


def det_Q_star(T: BlockCircleOperator, Q: Regularizer,
               excluded: list[BoundaryData] | None = None,
               circle_length: float = 2.0 * math.pi,
               tail_rtol: float = 1e-9):
    """log Det_Q of T on the orthogonal complement of the excluded vectors.

    The excluded directions are Gram-Schmidt orthonormalized in the boundary
    pairing; the determinant of the compressed operator is evaluated with
    the same finite-part prescription, the identity-direction count shifting
    from zeta_Q(0) to zeta_Q(0) - #excluded.
    """
    if not excluded:
        return det_Q(T, Q, tail_rtol=tail_rtol)
    n_max = T.n_max
    d = 2 + 4 * n_max
    W = mode_weights(n_max, circle_length)
    sqw = np.sqrt(W)

    def to_real(u: BoundaryData) -> np.ndarray:
        x = np.empty(d)
        x[0] = u.f.coeffs[n_max].real
        x[1] = u.g.coeffs[n_max].real
        for m in range(1, n_max + 1):
            k = 2 + 4 * (m - 1)
            x[k] = u.f.coeffs[n_max + m].real
            x[k + 1] = u.f.coeffs[n_max + m].imag
            x[k + 2] = u.g.coeffs[n_max + m].real
            x[k + 3] = u.g.coeffs[n_max + m].imag
        return x

    V = np.stack([to_real(u) * sqw for u in excluded], axis=1)
    qmat, rmat = np.linalg.qr(V)
    if np.abs(np.diag(rmat)).min() < 1e-10 * np.abs(rmat).max():
        raise ValueError("excluded vectors are not linearly independent")
    k = V.shape[1]

    M = sqw[:, None] * dense_real_matrix(T) / sqw[None, :]
    # orthonormal basis of the complement
    full = np.linalg.qr(np.concatenate([qmat, np.eye(d)], axis=1))[0][:, :d]
    B = full[:, k:]
    comp = B.T @ M @ B
    comp = 0.5 * (comp + comp.T)
    nu = np.linalg.eigvalsh(comp)
    if np.abs(nu).min() <= 1e-12 * max(1.0, np.abs(nu).max()):
        raise ValueError("compressed operator is singular; exclude its kernel")

    r_p, _, lp, lm = _nonzero_mode_remainders(T)
    lbar = 0.25 * (lp + lm)   # symbol log per real dimension
    zq0 = Q.zeta_Q_at_0()
    total = float(np.sum(np.log(np.abs(nu)) - lbar) + lbar * (zq0 - k))
    tail = _tail_bound(r_p, T.decay_exponent)
    if tail > tail_rtol * max(abs(total), 1.0):
        raise InsufficientTruncation(
            f"mode tail {tail:.2e} exceeds {tail_rtol:.0e} of total {total:.3e}")
    return total, tail


def c_Q(Q: Regularizer) -> float:
    """The gluing constant 2^{-zeta_Q(0)}."""
    return float(2.0 ** (-Q.zeta_Q_at_0()))


def derivative_identity_check(family, eps_values, Q: Regularizer, step: float = 1e-4):
    """Max residual of d/de log Det_Q T(e) = Tr(T^{-1} dT/de).

    ``family`` maps eps -> BlockCircleOperator.  The trace is the real
    trace of the mode-diagonal operator T^{-1} T', summed directly.  Both
    sides are evaluated at the working truncation, so the identity is
    checked without a tail threshold.
    """
    worst = 0.0
    for e in eps_values:
        up, _ = det_Q(family(e + step), Q, tail_rtol=np.inf)
        dn, _ = det_Q(family(e - step), Q, tail_rtol=np.inf)
        fd = (up - dn) / (2.0 * step)
        T = family(e)
        dT = (1.0 / (2.0 * step)) * (family(e + step) - family(e - step))
        prod = T.inverse() @ dT
        # real trace: Re tr per mode (the 0 block acts on a real plane)
        tr = float(np.sum(np.trace(prod.blocks, axis1=1, axis2=2).real))
        worst = max(worst, abs(fd - tr))
    return worst
