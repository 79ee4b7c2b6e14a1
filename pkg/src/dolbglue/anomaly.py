"""Curvature data, the conformal variation functional, and the index count.

Metrics are conformal factors over a flat background chart: rho = e^{2 sigma}
|dz|^2 on a disk/annulus chart or on the flat torus, and bundle metrics
h = e^{2 f} relative to the framing trivialization.  Derived quantities:

    R    = -2 e^{-2 sigma} Lap sigma                (scalar curvature)
    kappa = e^{-sigma} (kappa_flat + d sigma/dn)    (geodesic curvature)
    Omega = -(1/2) e^{-2 sigma} Lap log h           (Hermitian-Einstein)
    nu   = -(1/2) e^{-sigma} d log h / dn           (boundary Robin weight)

The variation functional between conformally related pairs is

    S(sigma, f) = -(1/6 pi) int [6 grad f . grad(sigma+f) + |grad sigma|^2]
                  -(1/6 pi) int [6 Omega (sigma+2f) + R (sigma+3f)]
                  +(1/3 pi) int_bdy [3 nu (sigma+2f) - kappa (sigma+3f)],

with every hatted quantity taken in the base metric.  The index of the
mixed problem is 2 deg(framing) + chi, audited against the curvature
integral and against direct kernel/cokernel mode counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spectra import ModelGeometry

__all__ = [
    "DiskGrid",
    "GeometryBundleData",
    "curvature_data",
    "liouville_action",
    "anomaly_verify",
    "index",
]


@dataclass(frozen=True)
class DiskGrid:
    """Tensor grid on a disk or annulus chart: Gauss-Legendre radii times
    equispaced angles (spectrally accurate for smooth integrands)."""

    r_in: float
    r_out: float
    n_r: int = 256
    n_th: int = 256
    nodes_r: np.ndarray = field(init=False)
    weights_r: np.ndarray = field(init=False)
    thetas: np.ndarray = field(init=False)

    def __post_init__(self):
        x, w = np.polynomial.legendre.leggauss(self.n_r)
        r = 0.5 * (x + 1.0) * (self.r_out - self.r_in) + self.r_in
        wr = 0.5 * (self.r_out - self.r_in) * w
        object.__setattr__(self, "nodes_r", r)
        object.__setattr__(self, "weights_r", wr)
        object.__setattr__(self, "thetas", 2.0 * math.pi * np.arange(self.n_th) / self.n_th)

    def points(self):
        z = self.nodes_r[:, None] * np.exp(1j * self.thetas[None, :])
        return z

    def integrate(self, vals: np.ndarray) -> float:
        """Flat-measure integral int vals r dr dtheta."""
        dth = 2.0 * math.pi / self.n_th
        return float(np.sum(vals * (self.nodes_r * self.weights_r)[:, None]) * dth)

    def boundary_integrate(self, vals: np.ndarray, outer: bool = True) -> float:
        """Flat arclength integral over the outer (or inner) circle."""
        r = self.r_out if outer else self.r_in
        dth = 2.0 * math.pi / self.n_th
        return float(np.sum(vals) * r * dth)


def _lap(fn, z, h=1e-3):
    """Five-point fourth-order Laplacian of a callable on complex points."""
    f0 = fn(z)
    out = np.zeros_like(f0)
    for d in (h, 1j * h):
        out += (-fn(z + 2 * d) + 16 * fn(z + d) - 30 * f0 + 16 * fn(z - d) - fn(z - 2 * d)) / (12 * h * h)
    return out


def _grad(fn, z, h=1e-4):
    gx = (fn(z + 2 * h) - 8 * fn(z + h) + 8 * fn(z - h) - fn(z - 2 * h)) / (-12 * h)
    gy = (fn(z + 2j * h) - 8 * fn(z + 1j * h) + 8 * fn(z - 1j * h) - fn(z - 2j * h)) / (-12 * h)
    return gx, gy


@dataclass
class GeometryBundleData:
    """Curvature fields of (rho, h) on a chart grid, with checks attached."""

    geom: ModelGeometry
    grid: DiskGrid
    sigma: object
    logh: object
    R: np.ndarray
    Omega: np.ndarray
    kappa_out: np.ndarray
    nu_out: np.ndarray
    kappa_in: np.ndarray | None = None
    nu_in: np.ndarray | None = None

    def area_element(self) -> np.ndarray:
        z = self.grid.points()
        return np.exp(2.0 * np.real(self.sigma(z)))

    def gauss_bonnet_residual(self) -> float:
        dA = self.area_element()
        bulk = self.grid.integrate(self.R * dA) / (4.0 * math.pi)
        z_out = self.grid.r_out * np.exp(1j * self.grid.thetas)
        ds_out = np.exp(np.real(self.sigma(z_out)))
        bdy = self.grid.boundary_integrate(self.kappa_out * ds_out, outer=True) / (2.0 * math.pi)
        if self.kappa_in is not None:
            z_in = self.grid.r_in * np.exp(1j * self.grid.thetas)
            ds_in = np.exp(np.real(self.sigma(z_in)))
            bdy += self.grid.boundary_integrate(self.kappa_in * ds_in, outer=False) / (2.0 * math.pi)
        chi = self.geom.euler_characteristic
        return float(bulk + bdy - chi)


def curvature_data(sigma, logh, geom: ModelGeometry, grid: DiskGrid | None = None) -> GeometryBundleData:
    """Curvature fields for rho = e^{2 sigma} |dz|^2 and h = e^{2 f_h} on a
    disk or annulus chart (sigma, logh callables of the complex coordinate;
    logh is log h, i.e. twice the bundle conformal exponent)."""
    if geom.variant not in ("disk", "annulus", "hemisphere"):
        raise ValueError("chart grids cover disk-type geometries")
    if grid is None:
        if geom.variant == "annulus":
            grid = DiskGrid(geom.dims[0], geom.dims[1])
        else:
            grid = DiskGrid(0.0, geom.dims[0])
    z = grid.points()
    sig = np.real(sigma(z))
    if np.exp(2 * sig).min() <= 0:
        raise ValueError("non-positive metric")
    R = -2.0 * np.exp(-2.0 * sig) * np.real(_lap(sigma, z))
    Omega = -0.5 * np.exp(-2.0 * sig) * np.real(_lap(logh, z))

    def bdy(r, sign):
        zb = r * np.exp(1j * grid.thetas)
        nx = sign * np.exp(1j * grid.thetas)
        gx, gy = _grad(sigma, zb)
        dn_sig = np.real(gx) * np.real(nx) + np.real(gy) * np.imag(nx)
        gx, gy = _grad(logh, zb)
        dn_logh = np.real(gx) * np.real(nx) + np.real(gy) * np.imag(nx)
        sigb = np.real(sigma(zb))
        kappa = np.exp(-sigb) * (sign / r + dn_sig)
        nu = -0.5 * np.exp(-sigb) * dn_logh
        return kappa, nu

    kappa_out, nu_out = bdy(grid.r_out, +1.0)
    kappa_in = nu_in = None
    if grid.r_in > 0:
        kappa_in, nu_in = bdy(grid.r_in, -1.0)
    return GeometryBundleData(geom, grid, sigma, logh, R, Omega,
                              kappa_out, nu_out, kappa_in, nu_in)


def liouville_action(sigma, f, base: GeometryBundleData) -> float:
    """The variation functional S(sigma, f) over the base metric data.

    ``sigma`` and ``f`` are callables of the chart coordinate; the base
    carries the hatted curvature fields and measures.
    """
    grid = base.grid
    z = grid.points()
    base_sig = np.real(base.sigma(z))
    dA = np.exp(2.0 * base_sig)
    sig = np.real(sigma(z))
    fv = np.real(f(z))

    gsx, gsy = _grad(sigma, z)
    gfx, gfy = _grad(f, z)
    gsx, gsy, gfx, gfy = (np.real(v) for v in (gsx, gsy, gfx, gfy))
    # conformal invariance of Dirichlet integrands: flat gradients, flat area
    bulk_grad = 6.0 * (gfx * (gsx + gfx) + gfy * (gsy + gfy)) + gsx ** 2 + gsy ** 2
    total = -grid.integrate(bulk_grad) / (6.0 * math.pi)

    bulk_curv = (6.0 * base.Omega * (sig + 2.0 * fv) + base.R * (sig + 3.0 * fv)) * dA
    total += -grid.integrate(bulk_curv) / (6.0 * math.pi)

    def bdy_term(r, kappa, nu, outer):
        zb = r * np.exp(1j * grid.thetas)
        ds = np.exp(np.real(base.sigma(zb)))
        sb = np.real(sigma(zb))
        fb = np.real(f(zb))
        vals = (3.0 * nu * (sb + 2.0 * fb) - kappa * (sb + 3.0 * fb)) * ds
        return grid.boundary_integrate(vals, outer=outer) / (3.0 * math.pi)

    total += bdy_term(grid.r_out, base.kappa_out, base.nu_out, True)
    if base.kappa_in is not None:
        total += bdy_term(grid.r_in, base.kappa_in, base.nu_in, False)
    return float(total)


def anomaly_verify(config: str = "disk_hemisphere", lam_max: float = 4.0e5) -> dict:
    """Residual of the conformal-variation identity on solvable pairs.

    config = "torus_rescale": constant rescaling of the square torus
    (checked against exact spectral scaling).
    config = "sphere_rescale": constant rescaling of the round sphere.
    config = "disk_hemisphere": flat unit disk vs round hemisphere.
    """
    from .spectra import enumerate_spectrum, synthetic_generator, zeta_det

    if config == "torus_rescale":
        c = 0.3
        gen = enumerate_spectrum(ModelGeometry.torus(1, 1), "closed")
        base_det = zeta_det(gen, 0.0, lam_max=lam_max)
        lams, mults = gen.levels(lam_max)
        pos = lams > 0
        scaled = synthetic_generator(
            np.concatenate([[0.0], math.exp(-2 * c) * lams[pos]]),
            np.concatenate([[1.0], mults[pos]]),
            (math.exp(2 * c) * gen.heat_coeffs[0], 0.0, 0.0), dim_ker=1)
        scaled_det = zeta_det(scaled, 0.0, lam_max=lam_max * math.exp(-2 * c))
        # Gram of the constant kernel basis scales with the area
        lhs = 2.0 * (scaled_det.log_det - base_det.log_det) - math.log(math.exp(4.0 * c))
        rhs = 0.0  # flat, closed, constant sigma: every term of S vanishes
        return {"residual": lhs - rhs, "lhs": lhs, "S": rhs}

    if config == "sphere_rescale":
        c = 0.25
        gen = enumerate_spectrum(ModelGeometry.sphere(1.0), "closed")
        gen2 = enumerate_spectrum(ModelGeometry.sphere(math.exp(c)), "closed")
        d1 = zeta_det(gen, 0.0, lam_max=lam_max)
        d2 = zeta_det(gen2, 0.0, lam_max=lam_max)
        lhs = 2.0 * (d2.log_det - d1.log_det) - 4.0 * c
        # S(c, 0) = -(1/6 pi) int R_hat c dA_hat = -(4/3) c on the unit sphere
        rhs = -(4.0 / 3.0) * c
        return {"residual": lhs - rhs, "lhs": lhs, "S": rhs}

    if config == "disk_hemisphere":
        sigma = lambda z: np.log(2.0 / (1.0 + np.abs(z) ** 2 + 0j)).real + 0.0 * np.real(z)
        flat = curvature_data(lambda z: 0.0 * np.real(z), lambda z: 0.0 * np.real(z),
                              ModelGeometry.disk(1.0),
                              DiskGrid(0.0, 1.0, n_r=512, n_th=256))
        S = liouville_action(sigma, lambda z: 0.0 * np.real(z), flat)

        def det_ratio(geom):
            gd = zeta_det(enumerate_spectrum(geom, "dirichlet"), 0.0, lam_max=lam_max)
            gn = zeta_det(enumerate_spectrum(geom, "neumann"), 0.0, lam_max=lam_max)
            gram = math.log(2.0 * geom.area)
            return gd.log_det + gn.log_det - gram

        lhs = det_ratio(ModelGeometry.hemisphere(1.0)) - det_ratio(ModelGeometry.disk(1.0))
        return {"residual": lhs - S, "lhs": lhs, "S": S}

    raise ValueError(f"unknown configuration {config}")


def _disk_kernel_count(q: int) -> int:
    """dim_R of mixed-condition kernel for the q-th canonical power on the
    disk: holomorphic v with Im v = 0 on the circle and a zero of order q
    at the center; reflection forces v to a real constant."""
    return 1 if q == 0 else 0


def _disk_cokernel_count(q: int) -> int:
    """Serre-dual count: meromorphic v with pole order <= q - 1 at the
    center and Im v = 0 on the circle; Laurent reflection c_{-k} =
    conj(c_k) leaves a real constant plus q - 1 complex coefficients."""
    if q == 0:
        return 0
    return 2 * q - 1


def index(geom: ModelGeometry, bundle: str = "trivial", q: int = 0,
          framing: str = "canonical") -> dict:
    """Index of the mixed boundary problem with the audit triple.

    Returns {"index", "formula", "curvature_integral", "kernel",
    "cokernel"}; raises if any leg of the audit disagrees.
    """
    if geom.variant not in ("disk", "annulus"):
        raise ValueError("index audit supports disk and annulus charts")
    chi = geom.euler_characteristic
    if bundle == "trivial":
        q = 0
    deg = -q * chi
    formula = 2 * deg + chi

    # curvature integral (1/pi) int Omega - (1/pi) int_bdy nu
    #                  + (1/4 pi) int R + (1/2 pi) int_bdy kappa
    # The global bundle metric is the smooth induced one (Omega from it);
    # nu carries the framing factor ||tau||^2 = |z|^{-2q}, whose winding is
    # exactly what the degree measures.
    if geom.variant == "disk":
        grid = DiskGrid(0.0, geom.dims[0], n_r=128, n_th=128)
    else:
        if q != 0:
            raise ValueError("annulus audit implemented for the trivial bundle")
        grid = DiskGrid(geom.dims[0], geom.dims[1], n_r=128, n_th=128)
    data = curvature_data(lambda z: 0.0 * np.real(z), lambda z: 0.0 * np.real(z), geom, grid)
    logh_frame = lambda z: -2.0 * q * np.log(np.abs(z))

    def frame_nu(r, sign):
        zb = r * np.exp(1j * grid.thetas)
        gx, gy = _grad(logh_frame, zb)
        nx = sign * np.exp(1j * grid.thetas)
        return -0.5 * (np.real(gx) * np.real(nx) + np.real(gy) * np.imag(nx))

    integral = grid.integrate(data.Omega * data.area_element()) / math.pi
    integral -= grid.boundary_integrate(frame_nu(grid.r_out, +1.0), outer=True) / math.pi
    integral += grid.integrate(data.R * data.area_element()) / (4.0 * math.pi)
    integral += grid.boundary_integrate(data.kappa_out, outer=True) / (2.0 * math.pi)
    if data.kappa_in is not None:
        integral -= grid.boundary_integrate(frame_nu(grid.r_in, -1.0), outer=False) / math.pi
        integral += grid.boundary_integrate(data.kappa_in, outer=False) / (2.0 * math.pi)

    if geom.variant == "disk":
        ker = _disk_kernel_count(q)
        cok = _disk_cokernel_count(q)
    else:
        ker, cok = 1, 1
    count = ker - cok
    if abs(integral - formula) > 1e-8 or count != formula:
        raise AssertionError(
            f"index audit disagrees: formula {formula}, integral {integral}, count {count}")
    return {"index": formula, "formula": formula,
            "curvature_integral": float(integral), "kernel": ker, "cokernel": cok}
