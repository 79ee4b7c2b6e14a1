"""Mode-diagonal operators on circle boundary data.

An operator acts on pairs (f, g) of hermitian Fourier data through a
family of complex 2x2 blocks B(n), n in [-n_max, n_max]:

    (T u)(n) = B(n) (f_hat(n), g_hat(n))^T.

Reality (preservation of hermitian symmetry) is B(-n) = conj(B(n)).
Order-zero operators carry their symbol limits B(n) -> symbol_pm as
n -> +-infinity; regularized determinants split each block trace into
the symbol value plus a summable remainder.

The n = 0 block acts on the real pair (f_hat(0), g_hat(0)).  At spectral
parameter zero some operators are only defined or only nonsingular on a
subspace of that plane; the ``exceptional`` descriptor records which of
the two directions is excluded from the domain ("excluded"), mapped to
zero ("annihilated"), or ordinary ("free").
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .boundary import BoundaryData, RealBoundaryField

__all__ = ["BlockCircleOperator", "mirror_conjugate"]

_FREE = "free"
_EXC_STATES = (_FREE, "annihilated", "excluded")


@dataclass(frozen=True)
class BlockCircleOperator:
    """Family of 2x2 blocks indexed by circle mode, with symbol limits."""

    blocks: np.ndarray                     # (2*n_max+1, 2, 2) complex, index n+n_max
    symbol_plus: np.ndarray                # 2x2, limit n -> +inf
    symbol_minus: np.ndarray               # 2x2, limit n -> -inf
    band_width: int = 0                    # reserved; mode-diagonal throughout
    exceptional: dict = field(default_factory=lambda: {"f0": _FREE, "g0": _FREE})
    decay_exponent: float = 2.0            # |B(n)-symbol| = O(n^-decay_exponent)

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=complex)
        if b.ndim != 3 or b.shape[1:] != (2, 2) or b.shape[0] % 2 == 0:
            raise ValueError("blocks must have shape (2*n_max+1, 2, 2)")
        object.__setattr__(self, "blocks", b)
        object.__setattr__(self, "symbol_plus", np.asarray(self.symbol_plus, dtype=complex))
        object.__setattr__(self, "symbol_minus", np.asarray(self.symbol_minus, dtype=complex))
        for k in ("f0", "g0"):
            if self.exceptional.get(k, _FREE) not in _EXC_STATES:
                raise ValueError(f"bad exceptional state for {k}")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_block_function(cls, n_max, fn, symbol_plus, symbol_minus, zero_block=None, **kw):
        """Blocks from a callable n -> 2x2 array (n != 0); zero_block for n = 0."""
        blocks = np.zeros((2 * n_max + 1, 2, 2), dtype=complex)
        for n in range(-n_max, n_max + 1):
            if n == 0:
                if zero_block is not None:
                    blocks[n_max] = np.asarray(zero_block, dtype=complex)
            else:
                blocks[n_max + n] = np.asarray(fn(n), dtype=complex)
        return cls(blocks, symbol_plus, symbol_minus, **kw)

    @classmethod
    def zero(cls, n_max: int) -> "BlockCircleOperator":
        z = np.zeros((2, 2))
        return cls(np.zeros((2 * n_max + 1, 2, 2), dtype=complex), z, z)

    @classmethod
    def identity(cls, n_max: int) -> "BlockCircleOperator":
        eye = np.broadcast_to(np.eye(2, dtype=complex), (2 * n_max + 1, 2, 2)).copy()
        return cls(eye, np.eye(2), np.eye(2))

    # -- basic queries -------------------------------------------------------

    @property
    def n_max(self) -> int:
        return self.blocks.shape[0] // 2

    def block(self, n: int) -> np.ndarray:
        if abs(n) > self.n_max:
            return (self.symbol_plus if n > 0 else self.symbol_minus).copy()
        return self.blocks[self.n_max + n]

    def is_reality_preserving(self, tol: float = 1e-10) -> bool:
        err = np.abs(self.blocks - np.conj(self.blocks[::-1])).max()
        serr = np.abs(self.symbol_minus - np.conj(self.symbol_plus)).max()
        scale = max(1.0, np.abs(self.blocks).max())
        return bool(err <= tol * scale and serr <= tol * scale)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        err = np.abs(self.blocks - np.conj(np.swapaxes(self.blocks, 1, 2))).max()
        return bool(err <= tol * max(1.0, np.abs(self.blocks).max()))

    def symbol_deviation(self) -> np.ndarray:
        """max-norm of B(n) - symbol for n = 1..n_max (tail-decay diagnostics)."""
        N = self.n_max
        dev_p = np.abs(self.blocks[N + 1:] - self.symbol_plus).max(axis=(1, 2))
        dev_m = np.abs(self.blocks[:N][::-1] - self.symbol_minus).max(axis=(1, 2))
        return np.maximum(dev_p, dev_m)

    # -- algebra -------------------------------------------------------------

    def _merge_exc(self, other):
        out = {}
        for k in ("f0", "g0"):
            a, b = self.exceptional.get(k, _FREE), other.exceptional.get(k, _FREE)
            out[k] = a if b == _FREE else b if a == _FREE else ("excluded" if "excluded" in (a, b) else a)
        return out

    def __add__(self, other: "BlockCircleOperator") -> "BlockCircleOperator":
        if self.n_max != other.n_max:
            raise ValueError("truncation mismatch")
        return BlockCircleOperator(
            self.blocks + other.blocks,
            self.symbol_plus + other.symbol_plus,
            self.symbol_minus + other.symbol_minus,
            exceptional=self._merge_exc(other),
            decay_exponent=min(self.decay_exponent, other.decay_exponent),
        )

    def __sub__(self, other: "BlockCircleOperator") -> "BlockCircleOperator":
        return self + (-1.0) * other

    def __rmul__(self, s: complex) -> "BlockCircleOperator":
        return BlockCircleOperator(
            s * self.blocks, s * self.symbol_plus, s * self.symbol_minus,
            exceptional=dict(self.exceptional), decay_exponent=self.decay_exponent,
        )

    def __matmul__(self, other: "BlockCircleOperator") -> "BlockCircleOperator":
        if self.n_max != other.n_max:
            raise ValueError("truncation mismatch")
        return BlockCircleOperator(
            np.einsum("nij,njk->nik", self.blocks, other.blocks),
            self.symbol_plus @ other.symbol_plus,
            self.symbol_minus @ other.symbol_minus,
            exceptional=self._merge_exc(other),
            decay_exponent=min(self.decay_exponent, other.decay_exponent),
        )

    def inverse(self, tol: float = 1e-13) -> "BlockCircleOperator":
        dets = np.linalg.det(self.blocks)
        scale = np.abs(self.blocks).max(axis=(1, 2)) ** 2 + 1e-300
        bad = np.nonzero(np.abs(dets) <= tol * scale)[0]
        if bad.size:
            raise np.linalg.LinAlgError(f"singular block at mode n={int(bad[0]) - self.n_max}")
        return BlockCircleOperator(
            np.linalg.inv(self.blocks),
            np.linalg.inv(self.symbol_plus),
            np.linalg.inv(self.symbol_minus),
            exceptional=dict(self.exceptional),
            decay_exponent=self.decay_exponent,
        )

    def apply(self, u: BoundaryData) -> BoundaryData:
        if u.n_max != self.n_max:
            raise ValueError("truncation mismatch")
        vec = np.stack([u.f.coeffs, u.g.coeffs], axis=1)
        out = np.einsum("nij,nj->ni", self.blocks, vec)
        return BoundaryData(
            RealBoundaryField(out[:, 0]), RealBoundaryField(out[:, 1]), u.circle_length
        )

    # -- serialization -------------------------------------------------------

    def to_json(self) -> str:
        def mat(m):
            return [[float(f"{x.real:.17g}"), float(f"{x.imag:.17g}")] for x in np.asarray(m).ravel()]

        payload = {
            "n_max": self.n_max,
            "band_width": self.band_width,
            "blocks": [[n, mat(self.block(n))] for n in range(-self.n_max, self.n_max + 1)],
            "symbol_plus": mat(self.symbol_plus),
            "symbol_minus": mat(self.symbol_minus),
            "exceptional": dict(self.exceptional),
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "BlockCircleOperator":
        d = json.loads(text)
        n_max = int(d["n_max"])

        def unmat(entries):
            flat = np.array([complex(re, im) for re, im in entries])
            return flat.reshape(2, 2)

        blocks = np.zeros((2 * n_max + 1, 2, 2), dtype=complex)
        for n, entries in d["blocks"]:
            blocks[n_max + int(n)] = unmat(entries)
        return cls(
            blocks,
            unmat(d["symbol_plus"]),
            unmat(d["symbol_minus"]),
            band_width=int(d.get("band_width", 0)),
            exceptional=d.get("exceptional", {"f0": _FREE, "g0": _FREE}),
        )

    def with_exceptional(self, **kw) -> "BlockCircleOperator":
        exc = dict(self.exceptional)
        exc.update(kw)
        return replace(self, exceptional=exc)


def mirror_conjugate(op: BlockCircleOperator) -> BlockCircleOperator:
    """Sigma o T o Sigma where Sigma reflects mode index in both components."""
    return BlockCircleOperator(
        op.blocks[::-1].copy(),
        op.symbol_minus.copy(),
        op.symbol_plus.copy(),
        exceptional=dict(op.exceptional),
        decay_exponent=op.decay_exponent,
    )
