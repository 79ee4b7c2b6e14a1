import math

import numpy as np
import pytest
from scipy import special as sp_special

from dolbglue.spectra import (
    ModelGeometry,
    bessel_deriv_zeros,
    bessel_zeros,
    doubled,
    enumerate_spectrum,
    heat_coefficients,
    heat_trace,
    landau_generator,
    mcmahon_newton_zeros,
    reg_resolvent_trace,
    synthetic_generator,
    zeta_det,
)
from dolbglue.zetautil import zeta_deriv

from oracles import cylinder_logdet_dirichlet, cylinder_logdet_neumann, torus_logdet


def test_torus_first_levels():
    gen = enumerate_spectrum(ModelGeometry.torus(1, 1), "closed")
    lams, mults = gen.levels(100.0)
    # collapse duplicates
    assert lams[0] == 0.0
    nz = lams[lams > 0]
    first = nz.min()
    assert first == pytest.approx(4 * math.pi ** 2, rel=1e-12)
    assert np.sum(np.isclose(lams, first)) == 4


def test_sphere_first_level():
    gen = enumerate_spectrum(ModelGeometry.sphere(1), "closed")
    lam1, mult1 = gen.enumerate(1)
    assert lam1 == pytest.approx(2.0)
    assert mult1 == 3


def test_disk_dirichlet_first_level():
    gen = enumerate_spectrum(ModelGeometry.disk(1), "dirichlet")
    lam1, _ = gen.enumerate(0)
    assert lam1 == pytest.approx(5.7831859629, rel=1e-9)


def test_bessel_zero_oracle():
    for order in (0, 1, 2):
        z = bessel_zeros(order, 30)
        z2 = mcmahon_newton_zeros(order, 30)
        assert np.allclose(z, z2, rtol=1e-13)
        assert np.abs(sp_special.jv(order, z)).max() < 1e-12


def test_hemisphere_parity_partition():
    R = 1.0
    gd = enumerate_spectrum(ModelGeometry.hemisphere(R), "dirichlet")
    gn = enumerate_spectrum(ModelGeometry.hemisphere(R), "neumann")
    ld, md = gd.levels(300.0)
    ln, mn = gn.levels(300.0)
    for l in range(1, 10):
        lam = l * (l + 1.0)
        assert md[np.isclose(ld, lam)].sum() == l
        assert mn[np.isclose(ln, lam)].sum() == l + 1


def test_weyl_law():
    for gen, area in [
        (enumerate_spectrum(ModelGeometry.torus(1, 1), "closed"), 1.0),
        (enumerate_spectrum(ModelGeometry.disk(1), "dirichlet"), math.pi),
    ]:
        c = gen.weyl_constant(4000.0)
        assert c == pytest.approx(area / (4 * math.pi), rel=0.05)


def test_heat_trace_torus_theta_product():
    gen = enumerate_spectrum(ModelGeometry.torus(1, 1), "closed")
    t = 0.05
    theta = sum(math.exp(-t * (2 * math.pi * m) ** 2) for m in range(-60, 61))
    assert heat_trace(gen, t) == pytest.approx(theta ** 2, rel=1e-12)


def test_heat_trace_large_t_kernel():
    gen = enumerate_spectrum(ModelGeometry.sphere(1), "closed")
    assert heat_trace(gen, 50.0) == pytest.approx(1.0, rel=1e-12)


def test_small_t_fit_exponent():
    # residual after the three-coefficient model decays like sqrt(t)
    gen = enumerate_spectrum(ModelGeometry.disk(1), "dirichlet")
    c_m1, c_half, c0 = gen.heat_coeffs
    ts = np.geomspace(1e-4, 1e-2, 10)
    resid = np.array([
        abs(heat_trace(gen, t) - (c_m1 / t + c_half / math.sqrt(t) + c0)) for t in ts
    ])
    slope = np.polyfit(np.log(ts), np.log(resid), 1)[0]
    assert slope >= 0.45


@pytest.mark.parametrize("geom,bc", [
    (ModelGeometry.disk(1.0), "dirichlet"),
    (ModelGeometry.disk(1.0), "neumann"),
    (ModelGeometry.hemisphere(1.0), "dirichlet"),
    (ModelGeometry.hemisphere(1.0), "neumann"),
    (ModelGeometry.cylinder(1.0, 1.0), "alvarez_trivial"),
])
def test_heat_coefficients_fit(geom, bc):
    # fitted c0 from the enumerated spectrum matches the stored coefficient
    gen = enumerate_spectrum(geom, bc)
    c_m1, c_half, c0 = gen.heat_coeffs
    t = 1e-3
    resid = heat_trace(gen, t) - c_m1 / t - c_half / math.sqrt(t)
    assert resid == pytest.approx(c0, abs=0.01 * max(1.0, abs(c0)) + 0.05 * math.sqrt(t) * 10)


def test_zeta_det_synthetic_integers():
    # lambda_k = k: log Det = -zeta_R'(0) = log sqrt(2 pi)
    lams = np.arange(1, 200001, dtype=float)
    gen = synthetic_generator(lams, np.ones_like(lams), (1.0, 0.0, -0.5))
    res = zeta_det(gen, 0.0, lam_max=2.0e5)
    assert res.log_det == pytest.approx(0.5 * math.log(2 * math.pi), abs=2e-9)


def test_zeta_det_sphere_value():
    # log Det* Delta_{S^2} = 1/2 - 4 zeta_R'(-1)
    gen = enumerate_spectrum(ModelGeometry.sphere(1), "closed")
    res = zeta_det(gen, 0.0)
    expect = 0.5 - 4.0 * zeta_deriv(-1.0)
    assert res.log_det == pytest.approx(expect, abs=1e-7)
    assert res.log_det == pytest.approx(1.1616845, abs=1e-6)


def test_zeta_det_torus_factored_oracle():
    gen = enumerate_spectrum(ModelGeometry.torus(1, 1), "closed")
    res = zeta_det(gen, 1.0)
    assert res.log_det == pytest.approx(torus_logdet(1.0, 1.0, 1.0), abs=1e-8)


def test_zeta_det_cylinder_factored_oracle():
    a, b, lam = 1.0, 1.0, 0.7
    gd = enumerate_spectrum(ModelGeometry.cylinder(a, b), "dirichlet")
    gn = enumerate_spectrum(ModelGeometry.cylinder(a, b), "neumann")
    rd = zeta_det(gd, lam)
    rn = zeta_det(gn, lam)
    assert rd.log_det == pytest.approx(cylinder_logdet_dirichlet(a, b, lam), abs=1e-8)
    assert rn.log_det == pytest.approx(cylinder_logdet_neumann(a, b, lam), abs=1e-8)


def test_real_doubling():
    gen = enumerate_spectrum(ModelGeometry.torus(1, 1), "closed")
    dgen = doubled(gen)
    for lam in (0.5, 2.0):
        r1 = zeta_det(gen, lam)
        r2 = zeta_det(dgen, lam)
        assert r2.log_det == pytest.approx(2.0 * r1.log_det, abs=2e-9)


def test_zeta_det_lambda_derivative():
    gen = enumerate_spectrum(ModelGeometry.torus(1, 1), "closed")
    lam, h = 1.0, 1e-4
    fd = (zeta_det(gen, lam + h).log_det - zeta_det(gen, lam - h).log_det) / (2 * h)
    tr = reg_resolvent_trace(gen, lam)
    assert fd == pytest.approx(tr, abs=1e-6)


def test_zeta_det_landau_closed_form():
    # ladder lambda_k = g k, mult d: zeta(s) = d g^{-s} zeta_R(s), so
    # log Det* = (d/2) log(2 pi / g)
    for d, area in ((1, 1.0), (2, 3.0)):
        gen = landau_generator(d, area)
        res = zeta_det(gen, 0.0)
        g = 4 * math.pi * d / area
        expect = 0.5 * d * math.log(2 * math.pi / g)
        assert res.log_det == pytest.approx(expect, abs=5e-8)


def test_coefficient_mismatch_detected():
    lams = np.arange(1, 50001, dtype=float)
    gen = synthetic_generator(lams, np.ones_like(lams), (2.0, 0.0, -0.5))
    with pytest.raises(ValueError, match="mismatch"):
        zeta_det(gen, 0.0, lam_max=5.0e4)


def test_serre_duality_disk_spectra():
    """The canonically framed mixed problem on the disk has the same
    spectrum as the trivially framed one: per angular pair the secular
    function factors through J_n * J_n'."""
    eps = 1.0
    for n in (1, 2, 5):
        a, b = abs(n - 1), abs(n + 1)
        s = np.linspace(1.0, 30.0, 2000)
        Ja = sp_special.jv(a, s)
        Jb = sp_special.jv(b, s)
        Jap = sp_special.jvp(a, s)
        Jbp = sp_special.jvp(b, s)
        secular = 2 * Ja * Jb + s * (Ja * Jbp + Jap * Jb)
        target = 2 * s * sp_special.jv(n, s) * sp_special.jvp(n, s)
        assert np.allclose(secular, -target / 1.0, atol=1e-10) or np.allclose(
            secular, target, atol=1e-10
        )
    # eigenvalue lists agree: union of J_n and J_n' zeros on both sides
    dir_gen = enumerate_spectrum(ModelGeometry.disk(eps), "dirichlet")
    neu_gen = enumerate_spectrum(ModelGeometry.disk(eps), "neumann")
    l1, m1 = dir_gen.levels(500.0)
    l2, m2 = neu_gen.levels(500.0)
    combined = np.sort(np.concatenate([np.repeat(l1, m1.astype(int)),
                                       np.repeat(l2, m2.astype(int))]))
    # canonical-problem spectrum assembled pairwise from the same zeros
    parts = [np.zeros(1)]  # Neumann kernel
    nmax = int(math.sqrt(500.0)) + 2
    for n in range(0, nmax + 1):
        mult = 1.0 if n == 0 else 2.0
        zd = bessel_zeros(n, 40)
        zn = bessel_deriv_zeros(n, 40)
        for z in (zd, zn):
            lam = z[z * z <= 500.0] ** 2
            parts.append(np.repeat(lam, int(mult)))
    canon = np.sort(np.concatenate(parts))
    k = min(500, combined.size, canon.size)
    assert np.allclose(combined[:k], canon[:k], rtol=1e-12)


def test_heat_coefficients_closed_forms():
    # Alvarez disk: c0 = 1/3
    c = heat_coefficients(ModelGeometry.disk(0.5))
    assert c[2] == pytest.approx(1.0 / 3.0)
    assert c[1] == 0.0
    # closed torus: all vanish except the area term
    c = heat_coefficients(ModelGeometry.torus(2, 3))
    assert c == (6.0 / (2 * math.pi), 0.0, 0.0)
    # canonical bundle on the sphere: (1/12pi) int (6 * (-1) + 2) dA = -4/3
    c = heat_coefficients(ModelGeometry.sphere(1.0), "canonical_q", q=1)
    assert c[2] == pytest.approx(-4.0 / 3.0)
