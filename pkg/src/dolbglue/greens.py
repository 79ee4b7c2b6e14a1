"""Region boundary operators assembled from Green kernels.

The boundary operator of "surface minus disk" at spectral parameter zero
is assembled from a single-layer representation: harmonic fields on the
region are phi = S[sigma] + c with a complex density sigma on the circle
(zero mean, so the layer potential is harmonic despite the Green kernel's
background term) plus a constant.  The Green kernel splits into the flat
logarithmic part, whose circle-mode action is closed form, and a smooth
remainder handled by FFT quadrature, which is spectrally accurate here.
Exterior-side limits of the Cauchy-type derivative kernel are taken
analytically, so no principal values appear.

Dense operators live in the real coordinate layout of
:func:`dolbglue.regdet.mode_weights`:
[f0, g0] then [Re f_m, Im f_m, Re g_m, Im g_m] for m = 1..n_max.
"""

from __future__ import annotations

import math

import numpy as np

from .blockop import BlockCircleOperator
from .regdet import mode_weights

__all__ = [
    "DenseRegionOperator",
    "torus_region_operator",
    "dense_from_blocks",
    "dense_mirror_conjugate",
    "dense_apply_transfer",
    "logdet_star_dense",
    "real_from_complex_pair",
]


def _dim(n_max: int) -> int:
    return 2 + 4 * n_max


def real_from_complex_pair(fhat: np.ndarray, ghat: np.ndarray, n_max: int) -> np.ndarray:
    """Pack hermitian mode data into the real layout."""
    x = np.empty(_dim(n_max))
    x[0] = fhat[n_max].real
    x[1] = ghat[n_max].real
    m = np.arange(1, n_max + 1)
    x[2::4] = fhat[n_max + m].real
    x[3::4] = fhat[n_max + m].imag
    x[4::4] = ghat[n_max + m].real
    x[5::4] = ghat[n_max + m].imag
    return x


class DenseRegionOperator:
    """Dense real-representation boundary operator with symbol data."""

    def __init__(self, matrix: np.ndarray, n_max: int, circle_length: float,
                 symbol_plus: np.ndarray, symbol_minus: np.ndarray,
                 exceptional: dict | None = None, decay_exponent: float = 2.0):
        self.matrix = matrix
        self.n_max = n_max
        self.circle_length = circle_length
        self.symbol_plus = np.asarray(symbol_plus, dtype=complex)
        self.symbol_minus = np.asarray(symbol_minus, dtype=complex)
        self.exceptional = exceptional or {}
        self.decay_exponent = decay_exponent

    def block(self, m: int) -> np.ndarray:
        """Complex 2x2 block extracted from the diagonal of mode m >= 1."""
        k = 2 + 4 * (m - 1)
        R = self.matrix[k:k + 4, k:k + 4]
        return np.array([
            [complex(R[0, 0] + R[1, 1], R[1, 0] - R[0, 1]) / 2,
             complex(R[0, 2] + R[1, 3], R[1, 2] - R[0, 3]) / 2],
            [complex(R[2, 0] + R[3, 1], R[3, 0] - R[2, 1]) / 2,
             complex(R[2, 2] + R[3, 3], R[3, 2] - R[2, 3]) / 2],
        ])

    def hermiticity_residual(self) -> float:
        W = mode_weights(self.n_max, self.circle_length)
        sq = np.sqrt(W)
        M = sq[:, None] * self.matrix / sq[None, :]
        return float(np.abs(M - M.T).max())

    def copy_with(self, matrix: np.ndarray) -> "DenseRegionOperator":
        return DenseRegionOperator(matrix, self.n_max, self.circle_length,
                                   self.symbol_plus, self.symbol_minus,
                                   dict(self.exceptional), self.decay_exponent)


def _im_re_parts(modes: np.ndarray, n_max: int):
    flip = modes[::-1].conj()
    return (modes - flip) / 2j, (modes + flip) / 2.0


def torus_region_operator(L: float, radius: float, n_max: int,
                          grid: int | None = None) -> DenseRegionOperator:
    """Boundary operator at zero spectral parameter of Torus(L, L) minus a
    disk of the given radius (the torus is homogeneous, so the center is
    immaterial).  The zero-mode plane is exceptional: the constant f datum
    is annihilated and the constant g datum is obstructed.
    """
    from .genus1 import torus_scalar_green

    if 2.0 * radius >= L:
        raise ValueError("disk does not embed in the torus")
    n_work = n_max + 16      # density modes beyond the data truncation
    if grid is None:
        grid = max(512, 4 * n_work)
    g = torus_scalar_green(L, L)
    r = radius
    M = grid
    th = 2.0 * math.pi * np.arange(M) / M
    z = r * np.exp(1j * th)

    U = z[:, None] - z[None, :]
    FH = np.fft.fft2(g.smooth_value(U)) / (M * M)
    FHD = np.fft.fft2(np.conj(g.smooth_du(U))) / (M * M)

    nw = 2 * n_work + 1
    wmodes = np.arange(-n_work, n_work + 1)
    Sval = 2.0 * math.pi * r * FH[np.ix_(wmodes % M, (-wmodes) % M)]
    Sder = 2.0 * math.pi * r * FHD[np.ix_(wmodes % M, (-wmodes) % M)]

    # free logarithmic parts (exterior-side limits), mode diagonal
    for i, n in enumerate(wmodes):
        Sval[i, i] += r / (2.0 * abs(n)) if n != 0 else -r * math.log(r)
        if n >= 0 and i + 1 < nw:
            Sder[i + 1, i] += -0.5

    # flux modes: u = -2 i e^{-i theta} dzbar(phi) shifts modes down by one
    Uop = np.zeros((nw, nw), dtype=complex)
    Uop[:-1, :] = -2j * Sder[1:, :]

    # real assembly over the density/constant parameters; data and output
    # rows are restricted to |mode| <= n_max, so the padded density modes
    # make the least-squares data map well conditioned at the truncation edge
    dim = _dim(n_max)
    cols_D, cols_O = [], []

    def project(vec):
        return vec[n_work - n_max: n_work + n_max + 1]

    for j in range(nw):
        if wmodes[j] == 0:
            continue
        for amp in (1.0, 1j):
            sig = np.zeros(nw, dtype=complex)
            sig[j] = amp
            W = Sval @ sig
            Uf = Uop @ sig
            imW, reW = _im_re_parts(W, n_work)
            imU, reU = _im_re_parts(Uf, n_work)
            cols_D.append(real_from_complex_pair(project(imW), project(imU), n_max))
            cols_O.append(real_from_complex_pair(project(reU), project(reW), n_max))
    # imaginary constant (the real constant is the kernel and is dropped)
    Wc = np.zeros(nw, dtype=complex)
    Wc[n_work] = 1j
    imW, reW = _im_re_parts(Wc, n_work)
    zero = np.zeros(nw, dtype=complex)
    cols_D.append(real_from_complex_pair(project(imW), project(zero), n_max))
    cols_O.append(real_from_complex_pair(project(zero), project(reW), n_max))

    D = np.stack(cols_D, axis=1)
    O = np.stack(cols_O, axis=1)

    keep = np.ones(dim, dtype=bool)
    keep[1] = False    # g0 data are obstructed at parameter zero
    X, res, rank, sv = np.linalg.lstsq(D[keep], np.eye(dim - 1), rcond=None)
    resid = float(np.abs(D[keep] @ X - np.eye(dim - 1)).max())
    if resid > 1e-8:
        raise RuntimeError(f"layer representation residual {resid:.2e}")
    A = O @ X
    full = np.zeros((dim, dim))
    full[:, keep] = A
    full[1, :] = 0.0
    full[:, 1] = 0.0
    sym_p = np.array([[0.0, 1j], [-1j, 0.0]])
    return DenseRegionOperator(full, n_max, 2.0 * math.pi * r, sym_p, np.conj(sym_p),
                               {"f0": "annihilated", "g0": "excluded"})


def dense_from_blocks(op: BlockCircleOperator, circle_length: float) -> DenseRegionOperator:
    """Embed a mode-diagonal block operator into the dense real layout."""
    from .regdet import dense_real_matrix

    return DenseRegionOperator(
        dense_real_matrix(op), op.n_max, circle_length,
        op.symbol_plus, op.symbol_minus, dict(op.exceptional), op.decay_exponent)


def dense_mirror_conjugate(op: DenseRegionOperator) -> DenseRegionOperator:
    """Sigma T Sigma in the real layout: flips the sign of every Im row/col."""
    d = op.matrix.shape[0]
    s = np.ones(d)
    s[3::4] = -1.0
    s[5::4] = -1.0
    return op.copy_with(s[:, None] * op.matrix * s[None, :])


def _diag_real(op2x2_fn, n_max: int) -> np.ndarray:
    """Real layout matrix of a mode-diagonal complex family (helper)."""
    d = _dim(n_max)
    out = np.zeros((d, d))
    z = np.real(op2x2_fn(0))
    out[:2, :2] = z
    for m in range(1, n_max + 1):
        B = op2x2_fn(m)
        k = 2 + 4 * (m - 1)
        for i in range(2):
            for j in range(2):
                re, im = B[i, j].real, B[i, j].imag
                out[k + 2 * i: k + 2 * i + 2, k + 2 * j: k + 2 * j + 2] = [[re, -im], [im, re]]
    return out


def dense_apply_transfer(A1: DenseRegionOperator, eps: float) -> DenseRegionOperator:
    """Transfer a unit-circle dense exterior operator inward to radius eps.

    Same identity as :func:`dolbglue.diskops.apply_transfer`, with the
    mode-diagonal annulus operators acting on the dense matrix; the zero
    mode stays exceptional.
    """
    from .diskops import annulus_transfer

    n_max = A1.n_max
    S, Uo, T = annulus_transfer(eps, n_max)
    Sd = _diag_real(S.block, n_max)
    Ud = _diag_real(Uo.block, n_max)
    Td = _diag_real(T.block, n_max)
    d = _dim(n_max)
    A = A1.matrix
    M = np.eye(d) + Td @ A
    # the zero-mode plane is excluded from the transfer; keep it decoupled
    M[:2, :2] = np.eye(2)
    core = np.linalg.solve(M, Ud)
    out = Sd + eps * (Ud @ A @ core)
    out[:2, :] = 0.0
    out[:, :2] = 0.0
    res = A1.copy_with(out)
    res.circle_length = eps * A1.circle_length
    res.exceptional = {"f0": "annihilated", "g0": "excluded"}
    return res


def logdet_star_dense(op: DenseRegionOperator, zeta_Q_at_0: float,
                      excluded: list[np.ndarray], lbar: float | None = None):
    """Finite-part log-determinant of a dense jump operator, deflated.

    ``excluded`` holds real-layout vectors spanning the exceptional
    subspace.  Returns (log_det, spectrum) where spectrum is the deflated
    eigenvalue list (for decay diagnostics).
    """
    d = op.matrix.shape[0]
    W = mode_weights(op.n_max, op.circle_length)
    sq = np.sqrt(W)
    Mw = sq[:, None] * op.matrix / sq[None, :]
    Mw = 0.5 * (Mw + Mw.T)
    if lbar is None:
        wp = np.linalg.eigvalsh(op.symbol_plus)
        wm = np.linalg.eigvalsh(op.symbol_minus)
        lbar = 0.25 * float(np.sum(np.log(np.abs(wp))) + np.sum(np.log(np.abs(wm))))
    k = 0
    if excluded:
        V = np.stack([v * sq for v in excluded], axis=1)
        q, rr = np.linalg.qr(V)
        if np.abs(np.diag(rr)).min() < 1e-10 * max(1.0, np.abs(rr).max()):
            raise ValueError("excluded vectors are not linearly independent")
        k = V.shape[1]
        full = np.linalg.qr(np.concatenate([q, np.eye(d)], axis=1))[0]
        B = full[:, k:d]
        Mw = B.T @ Mw @ B
        Mw = 0.5 * (Mw + Mw.T)
    nu = np.linalg.eigvalsh(Mw)
    if np.abs(nu).min() < 1e-10 * max(1.0, np.abs(nu).max()):
        raise ValueError("deflated jump operator is close to singular")
    total = float(np.sum(np.log(np.abs(nu)) - lbar) + lbar * (zeta_Q_at_0 - k))
    return total, nu
