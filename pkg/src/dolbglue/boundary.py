"""Fourier-mode representation of real boundary data on a circle.

Conventions used throughout the package
---------------------------------------

A boundary circle Gamma of length ``ell`` is parametrized by theta in
[0, 2*pi) with arclength ds = (ell / 2*pi) dtheta.  A real-valued field
f on Gamma is stored by its Fourier coefficients f_hat(n) with

    f(theta) = sum_n f_hat(n) e^{i n theta},   f_hat(-n) = conj(f_hat(n)).

Boundary data for the mixed (Dirichlet-on-imaginary / Robin-on-real)
boundary value problem is a pair (f, g):

* ``f``     the imaginary part of the section in the boundary framing,
* ``g``     the imaginary part of the complex-flux trace, identified with
            a function via the oriented Hodge star on Gamma.

The flux trace of a function phi on a piece with boundary Gamma is the
pullback of 2*dbar(phi); in coordinates with unit tangent t along the
oriented boundary it is the function u = 2*conj(t) * d(phi)/d(zbar).
The real-linear pairing of two data pairs is

    <(f1,g1), (f2,g2)> = 2 * int_Gamma (f1 f2 + g1 g2) ds,

which in modes is 2*ell*sum_n [f1(n) conj(f2(n)) + g1(n) conj(g2(n))].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RealBoundaryField",
    "BoundaryData",
    "pairing",
    "apply_J",
    "apply_star",
    "apply_mirror",
]


def _check_hermitian(coeffs: np.ndarray, tol: float = 1e-12) -> None:
    err = np.abs(coeffs - np.conj(coeffs[::-1])).max()
    if err > tol * max(1.0, np.abs(coeffs).max()):
        raise ValueError(f"coefficients are not hermitian-symmetric (err={err:.3e})")


@dataclass(frozen=True)
class RealBoundaryField:
    """Real-valued function on the circle, stored as hermitian Fourier data.

    ``coeffs[k]`` holds the coefficient of mode n = k - n_max, so the array
    has length 2*n_max + 1 and satisfies coeffs[-1-k] == conj(coeffs[k]).
    """

    coeffs: np.ndarray
    n_max: int = field(default=-1)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 == 0:
            raise ValueError("coeffs must be a 1-d array of odd length")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "n_max", c.size // 2)
        _check_hermitian(c)

    @classmethod
    def zero(cls, n_max: int) -> "RealBoundaryField":
        return cls(np.zeros(2 * n_max + 1, dtype=complex))

    @classmethod
    def from_modes(cls, n_max: int, modes: dict[int, complex]) -> "RealBoundaryField":
        """Build from {n: amplitude}, n >= 0; hermitian partners are filled in.

        The n = 0 amplitude must be real.
        """
        c = np.zeros(2 * n_max + 1, dtype=complex)
        for n, a in modes.items():
            if n < 0:
                raise ValueError("specify modes by their nonnegative index")
            if n == 0:
                if abs(np.imag(a)) > 1e-14 * max(1.0, abs(a)):
                    raise ValueError("n=0 amplitude must be real")
                c[n_max] = np.real(a)
            else:
                c[n_max + n] = a
                c[n_max - n] = np.conj(a)
        return cls(c)

    @classmethod
    def random(cls, n_max: int, rng, decay: float = 1.5) -> "RealBoundaryField":
        """Random smooth field with |coeff(n)| ~ (1+|n|)^-decay."""
        n = np.arange(-n_max, n_max + 1)
        raw = rng.standard_normal(2 * n_max + 1) + 1j * rng.standard_normal(2 * n_max + 1)
        raw *= (1.0 + np.abs(n)) ** (-decay)
        c = 0.5 * (raw + np.conj(raw[::-1]))
        return cls(c)

    def coeff(self, n: int) -> complex:
        if abs(n) > self.n_max:
            return 0.0 + 0.0j
        return complex(self.coeffs[self.n_max + n])

    def sample(self, thetas: np.ndarray) -> np.ndarray:
        n = np.arange(-self.n_max, self.n_max + 1)
        vals = np.exp(1j * np.outer(thetas, n)) @ self.coeffs
        return vals.real

    def __add__(self, other):
        return RealBoundaryField(self.coeffs + other.coeffs)

    def __sub__(self, other):
        return RealBoundaryField(self.coeffs - other.coeffs)

    def __rmul__(self, s: float):
        return RealBoundaryField(np.real(s) * self.coeffs)


@dataclass(frozen=True)
class BoundaryData:
    """Pair (f, g) of real boundary fields on a circle of given length."""

    f: RealBoundaryField
    g: RealBoundaryField
    circle_length: float = 2.0 * np.pi

    def __post_init__(self):
        if self.f.n_max != self.g.n_max:
            raise ValueError("f and g must share the truncation order")
        if self.circle_length <= 0:
            raise ValueError("circle_length must be positive")

    @property
    def n_max(self) -> int:
        return self.f.n_max

    @classmethod
    def zero(cls, n_max: int, circle_length: float = 2.0 * np.pi) -> "BoundaryData":
        z = RealBoundaryField.zero(n_max)
        return cls(z, z, circle_length)

    @classmethod
    def random(cls, n_max: int, rng, circle_length: float = 2.0 * np.pi, decay: float = 1.5):
        return cls(
            RealBoundaryField.random(n_max, rng, decay),
            RealBoundaryField.random(n_max, rng, decay),
            circle_length,
        )

    def vector(self) -> np.ndarray:
        """Stacked coefficient vector [f_hat; g_hat], modes -n_max..n_max."""
        return np.concatenate([self.f.coeffs, self.g.coeffs])

    @classmethod
    def from_vector(cls, vec: np.ndarray, circle_length: float = 2.0 * np.pi) -> "BoundaryData":
        m = vec.size // 2
        return cls(RealBoundaryField(vec[:m]), RealBoundaryField(vec[m:]), circle_length)


def pairing(u: BoundaryData, v: BoundaryData) -> float:
    """Real bilinear pairing 2 * int_Gamma (f_u f_v + g_u g_v) ds."""
    if u.n_max != v.n_max:
        raise ValueError("mismatched truncation orders")
    if abs(u.circle_length - v.circle_length) > 1e-12 * u.circle_length:
        raise ValueError("mismatched circle lengths")
    s = np.vdot(v.f.coeffs, u.f.coeffs) + np.vdot(v.g.coeffs, u.g.coeffs)
    return float(2.0 * u.circle_length * s.real)


def apply_star(u: BoundaryData) -> BoundaryData:
    """Hodge-star involution: swaps the section and flux components."""
    return BoundaryData(u.g, u.f, u.circle_length)


def apply_mirror(u: BoundaryData) -> BoundaryData:
    """Mode reflection n -> -n in both components (orientation flip)."""
    return BoundaryData(
        RealBoundaryField(u.f.coeffs[::-1].copy()),
        RealBoundaryField(u.g.coeffs[::-1].copy()),
        u.circle_length,
    )


def apply_J(u: BoundaryData) -> BoundaryData:
    """Almost complex structure on boundary data.

    J multiplies the represented complex data by i and swaps the two
    lagrangian slots; on coefficient pairs it acts as
    (f, g) -> (-g~, f~) where the tilde is multiplication by i carried
    through the hermitian representation, i.e. J^2 = -id.
    """
    # On the underlying complex field, multiplying by i sends the stored
    # imaginary parts to real parts; composing with the slot swap yields
    # (f, g) |-> (-g, f) on coefficient pairs.
    return BoundaryData(
        RealBoundaryField(-u.g.coeffs),
        RealBoundaryField(u.f.coeffs),
        u.circle_length,
    )
