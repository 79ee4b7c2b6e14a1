import math

import mpmath as mp
import numpy as np
import pytest

from dolbglue.genus1 import (
    AdmissibleBundle,
    Genus1Data,
    arakelov_green,
    bosonization_constants,
    bosonization_verify,
    dolbeault_det_torus,
    eta,
    flat_torus_logdet,
    insertion_verify,
    log_theta1_cell_integral,
    theta1,
    theta1_prime,
    theta_char,
    theta_eta,
)


def test_theta1_odd_and_vanishing():
    tau = 0.3 + 1.1j
    assert abs(theta1(0.0, tau)) < 1e-14
    z = 0.21 + 0.13j
    assert np.allclose(theta1(-z, tau), -theta1(z, tau))


def test_theta1_against_mpmath():
    tau = 0.25 + 0.9j
    q = mp.exp(1j * mp.pi * tau)
    for z in (0.3, 0.1 + 0.2j):
        mine = complex(theta1(z, tau))
        ref = complex(mp.jtheta(1, mp.pi * z, q))
        assert mine == pytest.approx(ref, rel=1e-12)


def test_eta_closed_form_at_i():
    # eta(i) = Gamma(1/4) / (2 pi^{3/4})
    expect = float(mp.gamma(0.25)) / (2.0 * math.pi ** 0.75)
    assert abs(eta(1j)) == pytest.approx(expect, rel=1e-12)
    assert abs(eta(1j)) == pytest.approx(0.76822546, rel=1e-7)


def test_theta1_quasi_periodicity():
    tau = 0.37 + 1.21j
    z = 0.11 + 0.07j
    lhs = complex(theta1(z + 1.0, tau))
    assert lhs == pytest.approx(-complex(theta1(z, tau)), rel=1e-12)
    lhs2 = complex(theta1(z + tau, tau))
    factor = -np.exp(-1j * math.pi * tau - 2j * math.pi * z)
    assert lhs2 == pytest.approx(complex(factor * theta1(z, tau)), rel=1e-11)


def test_theta1_prime_eta_cubed():
    # theta1'(0) = 2 pi eta^3
    for tau in (1j, 0.3 + 0.8j):
        assert complex(theta1_prime(0.0, tau)) == pytest.approx(
            2.0 * math.pi * eta(tau) ** 3, rel=1e-11)


def test_green_certification_and_symmetry():
    data = Genus1Data(0.5 + 1.0j)
    assert data._cert["symmetry"] < 1e-12
    assert data._cert["curvature"] < 1e-3
    z, w = 0.3 + 0.2j, 0.7 + 0.6j
    assert float(arakelov_green(z, w, data)) == pytest.approx(
        float(arakelov_green(w, z, data)), rel=1e-13)


def test_green_normalization_with_subtraction():
    """B1: |int mu log G| < 1e-6 on a 512^2 grid after subtracting the
    exactly integrable log|theta1| model."""
    for tau in (1j, 0.5 + 1.0j):
        data = Genus1Data(tau)
        n = 512
        x = (np.arange(n) + 0.5) / n
        y = (np.arange(n) + 0.5) / n
        Z = x[None, :] + tau * y[:, None]
        w = 0.0
        smooth = (-math.pi * np.imag(Z - w) ** 2 / data.area
                  - math.log(abs(eta(tau))))
        mean = smooth.mean() + log_theta1_cell_integral(tau)
        assert abs(mean) < 1e-6


def test_green_flatness_of_diagonal_limit():
    data = Genus1Data(0.4 + 1.3j)
    rng = np.random.default_rng(1)
    pts = rng.random(8) + data.tau * rng.random(8)
    vals = []
    for z in pts:
        h = 1e-6
        vals.append(2.0 * (data.log_green(z + h, z) - math.log(h)))
    vals = np.asarray(vals)
    assert vals.var() < 1e-8
    assert np.exp(vals.mean()) == pytest.approx(data.arakelov_metric_factor(), rel=1e-5)


def test_admissibility_curvature():
    # -(1/2) Lap log h over the grid equals 2 pi d / (Arakelov area)
    data = Genus1Data(1j)
    bundle = AdmissibleBundle(data, [0.31 + 0.21j])
    h = 1e-2
    z0 = 0.62 + 0.44j

    def logh(z):
        return 2.0 * data.log_green(z, bundle.divisor[0])

    lap = 0.0
    for d in (h, 1j * h):
        lap += (-logh(z0 + 2 * d) + 16 * logh(z0 + d) - 30 * logh(z0)
                + 16 * logh(z0 - d) - logh(z0 - 2 * d)) / (12 * h * h)
    rho = data.arakelov_metric_factor()
    omega = -0.5 * lap / rho
    assert omega == pytest.approx(2.0 * math.pi / (rho * data.area), rel=1e-6)


def test_flat_torus_logdet_eta_identity():
    # Det* of the flat unit-lattice torus is (Im tau)^2 |eta|^4
    for tau in (1j, 0.5 + 1.0j):
        got = flat_torus_logdet(tau, lam_max=2.0e5)
        expect = 2.0 * math.log(float(np.imag(tau))) + 4.0 * math.log(abs(eta(tau)))
        assert got == pytest.approx(expect, abs=1e-7), tau


def test_landau_ladder_against_magnetic_diagonalization():
    """Peierls finite differences with unit flux reproduce the first gap
    4 pi d / A with multiplicity d (Richardson over two grids)."""
    import scipy.sparse as sp
    import scipy.sparse.linalg as spla

    def landau_gaps(N):
        # unit square torus, flux 2 pi through the surface (d = 1)
        B = 2.0 * math.pi
        h = 1.0 / N
        idx = lambda i, j: (i % N) * N + (j % N)
        rows, cols, vals = [], [], []
        for i in range(N):
            for j in range(N):
                k = idx(i, j)
                rows.append(k), cols.append(k), vals.append(4.0 / h / h)
                # x hops carry the Landau phase exp(-i B y dx)
                y = j * h
                phase = np.exp(-1j * B * y * h)
                for di, ph in ((1, phase), (-1, np.conj(phase))):
                    kk = idx(i + di, j)
                    rows.append(k), cols.append(kk), vals.append(-ph / h / h)
                # magnetic periodicity in y at the seam
                for dj in (1, -1):
                    kk = idx(i, j + dj)
                    seam = 1.0
                    if j + dj == N:
                        seam = np.exp(1j * B * (i * h))
                    elif j + dj == -1:
                        seam = np.exp(-1j * B * (i * h))
                    rows.append(k), cols.append(kk), vals.append(-seam / h / h)
        H = sp.csr_matrix((vals, (rows, cols)), shape=(N * N, N * N))
        w = spla.eigsh(H, k=4, which="SA", return_eigenvectors=False)
        w = np.sort(w)
        return w[1] - w[0], w

    g1, w1 = landau_gaps(32)
    g2, w2 = landau_gaps(48)
    # Richardson in h^2; the first gap of the shifted operator is the
    # ladder spacing 4 pi d / A of the bundle Laplacian
    extr = (g2 * 48 ** 2 - g1 * 32 ** 2) / (48 ** 2 - 32 ** 2)
    assert extr == pytest.approx(4.0 * math.pi, rel=2e-4)
    # ground level multiplicity d = 1: exactly one eigenvalue near w[0]
    assert int(np.sum(np.abs(w1 - w1[0]) < 1.0)) == 1


def test_dolbeault_det_ladder_consistency():
    """Enumerated ladder through the heat-kernel zeta matches the closed form."""
    from dolbglue.spectra import landau_generator, zeta_det

    data = Genus1Data(1j)
    rho = data.arakelov_metric_factor()
    area = rho * data.area
    for d in (1, 2):
        gen = landau_generator(d, area)
        res = zeta_det(gen, 0.0)
        expect = 0.5 * d * math.log(area / (2.0 * d))
        assert res.log_det == pytest.approx(expect, abs=1e-8)


def test_bosonization_constants():
    c = bosonization_constants()
    assert c["delta_1"] == pytest.approx(
        (2 * math.pi) ** 2 * math.exp(c["c_1"] / 6.0), rel=1e-13)
    assert c["delta_1"] == pytest.approx(3.4050219, abs=1e-6)
    assert c["epsilon_1_1"] == pytest.approx(1.0 / (2 * math.pi))


@pytest.mark.parametrize("tau", [1j, 0.5 + 1.0j])
@pytest.mark.parametrize("degree", [1, 2])
def test_bosonization_identity(tau, degree):
    data = Genus1Data(tau)
    pts = [0.731 + 0.412 * tau, 0.227 + 0.661 * tau][:degree]
    out = bosonization_verify(degree, pts, data, grid=384)
    assert abs(out["residual"]) < 1e-3, out


def test_bosonization_point_independence():
    data = Genus1Data(1j)
    outs = [bosonization_verify(1, [p], data, grid=320)["residual"]
            for p in (0.3 + 0.4j, 0.81 + 0.13j, 0.55 + 0.72j)]
    assert np.ptp(outs) < 5e-4


def test_insertion_identity():
    data = Genus1Data(1j)
    out = insertion_verify(1, 0.63 + 0.29j, data, grid=384)
    assert abs(out["residual"]) < 1e-3, out


def test_insertion_basis_and_point_stability():
    data = Genus1Data(1j)
    base = insertion_verify(1, 0.63 + 0.29j, data, grid=256, basis_seed=0)
    alt = insertion_verify(1, 0.63 + 0.29j, data, grid=256, basis_seed=5)
    assert base["residual"] == pytest.approx(alt["residual"], abs=1e-6)
    other = insertion_verify(1, 0.41 + 0.52j, data, grid=256, basis_seed=0)
    assert abs(other["residual"] - base["residual"]) < 5e-4
