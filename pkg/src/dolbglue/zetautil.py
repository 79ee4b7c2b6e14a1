"""Zeta-function continuations used by the determinant machinery.

Everything here is independent of the operator layer so these routines can
double as oracles in tests:

* Hurwitz zeta by Euler-Maclaurin summation, valid for complex s (complex
  arithmetic is kept throughout so complex-step differentiation in s works).
* The massive one-dimensional lattice zeta Z(s) = sum_{m>=1} ((c m)^2 +
  lam)^{-s}, continued to all s by Poisson summation and Bessel-K terms.
* Regularized sums of logarithms of arithmetic sequences, used when mode
  sums of one-dimensional determinants are assembled.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np

__all__ = [
    "zeta_hurwitz",
    "zeta_riemann",
    "zeta_deriv",
    "epstein_massive",
    "epstein_massive_deriv",
    "reg_sum_log_linear",
    "reg_sum_power",
    "gamma_upper",
]

# Bernoulli numbers B_2, B_4, ..., B_24
_B2K = [
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730,
    7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330,
    854513.0 / 138, -236364091.0 / 2730,
]


def zeta_hurwitz(s, a=1.0, nterms: int = 40, korder: int = 10):
    """Hurwitz zeta(s, a) by Euler-Maclaurin; complex s, a > 0, s != 1."""
    s = complex(s)
    if abs(s - 1.0) < 1e-14:
        raise ValueError("pole at s = 1")
    N = nterms
    ks = np.arange(N)
    total = np.sum((ks + a) ** (-s))
    x = N + a
    total += x ** (1.0 - s) / (s - 1.0) + 0.5 * x ** (-s)
    poch = s
    xpow = x ** (-s - 1.0)
    fact = 1.0
    for j in range(1, korder + 1):
        b = _B2K[j - 1]
        fact = math.factorial(2 * j)
        total += b / fact * poch * xpow
        # update pochhammer s(s+1)...(s+2j) and power x^{-s-2j-1}
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        xpow *= x ** (-2.0)
    return total


def zeta_riemann(s, **kw):
    return zeta_hurwitz(s, 1.0, **kw)


def zeta_deriv(s, a=1.0, order: int = 1):
    """d/ds zeta(s, a) by complex-step differentiation (exact to roundoff)."""
    h = 1e-80
    if order == 1:
        return zeta_hurwitz(complex(s) + 1j * h, a).imag / h
    raise ValueError("only first derivative supported")


def _kv(order, z):
    return complex(mp.besselk(order, z))


def epstein_massive(s, c: float, lam: float, kmax: int = 400, as_mp: bool = False):
    """Analytic continuation of sum_{m>=1} ((c m)^2 + lam)^{-s}, lam > 0.

    Poisson resummation of the full lattice sum gives

        sum_{m in Z} ((c m)^2 + lam)^{-s}
            = (sqrt(pi)/c) Gamma(s-1/2)/Gamma(s) lam^{1/2-s}
              + (2 sqrt(pi)/(c Gamma(s))) sum_{k>=1}
                    2 (b_k/lam)^{(s-1/2)/2} K_{s-1/2}(2 sqrt(b_k lam)),

    with b_k = (pi k / c)^2; the k-series converges like
    exp(-2 pi k sqrt(lam)/c).  Valid at every s, uniformly in a strip, so
    complex-step derivatives in s are accurate.
    """
    if lam <= 0:
        raise ValueError("lam must be positive (use zeta_hurwitz for lam = 0)")
    with mp.workdps(40):
        sm = mp.mpc(s)
        cm, lm = mp.mpf(c), mp.mpf(lam)
        term1 = mp.sqrt(mp.pi) / cm * mp.gamma(sm - 0.5) / mp.gamma(sm) * lm ** (0.5 - sm)
        acc = mp.mpc(0)
        for k in range(1, kmax + 1):
            b = (mp.pi * k / cm) ** 2
            # int t^{s-3/2} e^{-lam t - b/t} dt
            #     = 2 (b/lam)^{(s-1/2)/2} K_{s-1/2}(2 sqrt(b lam))
            z = 2 * mp.sqrt(b * lm)
            term = 2 * (b / lm) ** ((sm - 0.5) / 2) * mp.besselk(sm - 0.5, z)
            acc += term
            if abs(term) < 1e-25 * (1 + abs(acc)) and k > 3:
                break
        term2 = 2 * mp.sqrt(mp.pi) / cm / mp.gamma(sm) * acc
        out = (term1 + term2 - lm ** (-sm)) / 2
        return out if as_mp else complex(out)


def epstein_massive_deriv(s, c: float, lam: float, **kw):
    """d/ds of :func:`epstein_massive` by high-precision central differences.

    Only valid away from the poles at s = 1/2 - k.
    """
    h = mp.mpf("1e-12")
    with mp.workdps(40):
        up = epstein_massive(mp.mpc(s) + h, c, lam, as_mp=True, **kw)
        dn = epstein_massive(mp.mpc(s) - h, c, lam, as_mp=True, **kw)
        return float(((up - dn) / (2 * h)).real)


def reg_sum_log_linear(c: float, d: float = 0.0) -> float:
    """Zeta-regularized sum of log(c (m + d)) over m >= 1.

    Defined as -d/ds [ c^{-s} zeta_H(s, 1 + d) ] at s = 0; in closed form

        log(c) (1/2 - (1 + d)) - [log Gamma(1 + d) - (1/2) log(2 pi)].
    """
    zh0 = 0.5 - (1.0 + d)
    zh0p = float(mp.log(mp.gamma(1.0 + d)) - 0.5 * mp.log(2.0 * mp.pi))
    return float(np.log(c) * zh0 - zh0p)


def reg_sum_power(c: float, power: float, d: float = 0.0) -> float:
    """Zeta-regularized sum of (c (m + d))^power over m >= 1 (power != -1)."""
    return float((c ** power) * zeta_hurwitz(-power, 1.0 + d).real)


def gamma_upper(a, x):
    """Upper incomplete gamma, entire in the order a (x > 0)."""
    return complex(mp.gammainc(a, x, mp.inf))
