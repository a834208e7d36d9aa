import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import eigh_tridiagonal

from pdmosc.errors import DimensionMismatch, NonFiniteSample, SingularCoefficient, TailWarning
from pdmosc.numerics import (
    FDGrid,
    convergence_slope,
    fd_oracle_negative,
    fd_oracle_positive,
    fd_oracle_schrodinger,
    gauss_legendre,
    integrate,
    integrate_real_line,
    legendre_grid,
    ode_solve_second_order,
    residual_schrodinger,
    sturm_count,
    tridiag_lowest_eigenvalues,
)
from pdmosc.oscillator import OscillatorParams
from pdmosc.spectra import eigenstate_positive


# --- quadrature --------------------------------------------------------------------

def test_gauss_legendre_small_orders():
    r2 = gauss_legendre(2)
    assert np.allclose(r2.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    assert np.allclose(r2.weights, [1, 1], atol=1e-15)
    r3 = gauss_legendre(3)
    assert np.allclose(r3.nodes, [-math.sqrt(0.6), 0, math.sqrt(0.6)], atol=1e-15)
    assert np.allclose(r3.weights, [5 / 9, 8 / 9, 5 / 9], atol=1e-15)
    assert gauss_legendre(1).nodes.tolist() == [0.0]


@pytest.mark.parametrize("order", [4, 17, 64, 256, 1000])
def test_gauss_legendre_vs_numpy(order):
    x, w = np.polynomial.legendre.leggauss(order)
    r = gauss_legendre(order)
    assert np.allclose(r.nodes, x, atol=1e-14)
    assert np.allclose(r.weights, w, atol=1e-14)
    assert abs(r.weights.sum() - 2) <= 1e-13
    assert np.all(np.diff(r.nodes) > 0)
    assert np.max(np.abs(r.nodes + r.nodes[::-1])) <= 1e-13


def test_gauss_legendre_bounds():
    with pytest.raises(ValueError):
        gauss_legendre(0)
    with pytest.raises(ValueError):
        gauss_legendre(2049)


@given(st.integers(1, 200))
def test_quadrature_exactness(n):
    r = gauss_legendre(n)
    k = 2 * n - 2
    assert integrate(r, lambda z: z**k, -1, 1) == pytest.approx(2 / (k + 1), abs=1e-13)


def test_integrate_examples():
    assert integrate(gauss_legendre(2), lambda x: np.ones_like(x), 0, 1) == pytest.approx(1.0, abs=1e-15)
    assert integrate(gauss_legendre(2), lambda x: x * x, -1, 1) == pytest.approx(2 / 3, abs=1e-15)
    val = integrate(gauss_legendre(64), lambda z: (0.5 * np.sqrt(1 - z * z)) ** 2, -1, 1)
    assert val == pytest.approx(1 / 3, abs=1e-12)


def test_integrate_nonfinite():
    with pytest.raises(NonFiniteSample), np.errstate(invalid="ignore"):
        integrate(gauss_legendre(4), lambda x: np.log(x), -1, 1)


def test_integrate_real_line():
    assert integrate_real_line(lambda x: (1 + x * x) ** -5) == pytest.approx(35 * math.pi / 128, abs=1e-10)
    assert integrate_real_line(lambda x: np.exp(-x * x)) == pytest.approx(math.sqrt(math.pi), abs=1e-12)
    # slow algebraic tail |x|^{-1.4}: integral of (1+x^2)^{-0.7} = sqrt(pi) Gamma(0.2)/Gamma(0.7)
    ref = math.sqrt(math.pi) * math.gamma(0.2) / math.gamma(0.7)
    assert integrate_real_line(lambda x: (1 + x * x) ** -0.7) == pytest.approx(ref, rel=1e-10)


# --- tridiagonal ------------------------------------------------------------------

def test_tridiag_examples():
    assert np.allclose(tridiag_lowest_eigenvalues([2, 2], [-1], 2), [1, 3], atol=1e-14)
    assert np.allclose(tridiag_lowest_eigenvalues([1, 2, 3], [0, 0], 3), [1, 2, 3], atol=1e-14)
    s = math.sqrt(2)
    assert np.allclose(tridiag_lowest_eigenvalues([2, 2, 2], [-1, -1], 3), [2 - s, 2, 2 + s], atol=1e-14)


def test_tridiag_dimension_errors():
    with pytest.raises(DimensionMismatch):
        tridiag_lowest_eigenvalues([1, 2, 3], [1], 2)
    with pytest.raises(DimensionMismatch):
        tridiag_lowest_eigenvalues([1, 2], [1], 3)


@given(st.lists(st.floats(-10, 10), min_size=2, max_size=40), st.data())
def test_tridiag_vs_scipy(diag, data):
    off = data.draw(st.lists(st.floats(-5, 5), min_size=len(diag) - 1, max_size=len(diag) - 1))
    m = data.draw(st.integers(1, len(diag)))
    ref = eigh_tridiagonal(np.array(diag), np.array(off), eigvals_only=True)[:m]
    got = tridiag_lowest_eigenvalues(diag, off, m)
    assert np.allclose(got, ref, rtol=1e-12, atol=1e-12 * max(1, np.max(np.abs(ref))))


@given(st.lists(st.floats(-4, 4), min_size=1, max_size=6), st.data())
def test_sturm_count_vs_characteristic(diag, data):
    n = len(diag)
    off = data.draw(st.lists(st.floats(-3, 3), min_size=n - 1, max_size=n - 1))
    sigma = data.draw(st.floats(-8, 8))
    A = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    ev = np.linalg.eigvalsh(A)
    if np.min(np.abs(ev - sigma)) < 1e-9:
        return
    assert sturm_count(diag, off, sigma) == int(np.sum(ev < sigma))


# --- ODE ----------------------------------------------------------------------------

def test_ode_sine_and_sinh():
    sol = ode_solve_second_order(lambda z: (1.0, 0.0, -1.0), 0.0, 0.0, 1.0, math.pi / 2)
    assert sol(math.pi / 2) == pytest.approx(1.0, abs=1e-9)
    sol = ode_solve_second_order(lambda z: (1.0, 0.0, 1.0), 0.0, 0.0, 1.0, 1.0)
    assert sol(1.0) == pytest.approx(math.sinh(1.0), abs=1e-9)
    assert sol.derivative(1.0) == pytest.approx(math.cosh(1.0), abs=1e-9)


def test_ode_legendre_nu2_mu1():
    # (1-z^2) phi'' = 2 z phi' - (6 - 1/(1-z^2)) phi has the solution z sqrt(1-z^2)
    def coeffs(z):
        return 1 - z * z, 2 * z, -(6 - 1 / (1 - z * z))

    sol = ode_solve_second_order(coeffs, 0.0, 0.0, 1.0, 0.9)
    z = np.linspace(0, 0.9, 19)
    assert np.allclose(sol(z), z * np.sqrt(1 - z * z), atol=1e-8)


def test_ode_error_scales_with_tolerance():
    errs = []
    for tol in (1e-6, 1e-9):
        sol = ode_solve_second_order(lambda z: (1.0, 0.0, -1.0), 0.0, 0.0, 1.0, 10.0, rel_tol=tol)
        errs.append(abs(sol(10.0) - math.sin(10.0)))
    assert errs[1] < errs[0]
    assert errs[0] <= 100 * 1e-6 * 10


def test_ode_singular_coefficient():
    with pytest.raises(SingularCoefficient):
        ode_solve_second_order(lambda z: (1 - z, 0.0, 1.0), 0.0, 1.0, 0.0, 1.0)


# --- FD oracles ---------------------------------------------------------------------

def test_fd_grid():
    g = FDGrid(0, 1, 99)
    assert g.h == pytest.approx(0.01)
    assert g.refined().h == pytest.approx(0.005)
    with pytest.raises(ValueError):
        FDGrid(0, 1, 8)


def test_fd_positive_ml():
    vals = fd_oracle_positive(1.0, legendre_grid(4000, 1e-6), 3)
    assert np.allclose(vals, [2, 6, 12], rtol=1e-3)


def test_fd_positive_z_coordinate():
    vals = fd_oracle_positive(1.0, legendre_grid(4000, 1e-6, "z"), 3, coordinate="z")
    assert np.allclose(vals, [2, 6, 12], rtol=1e-3)


def test_fd_positive_carinena_mu():
    mu = math.sqrt(5) / 2
    assert fd_oracle_positive(mu, count=1)[0] == pytest.approx(mu * (mu + 1), rel=1e-3)


def test_fd_positive_refinement_quarters_error():
    mu = 1.0
    g = legendre_grid(400)
    e0 = abs(fd_oracle_positive(mu, g, 1)[0] - 2)
    e1 = abs(fd_oracle_positive(mu, g.refined(), 1)[0] - 2)
    assert 3.5 < e0 / e1 < 4.5


def test_fd_convergence_slope():
    g = legendre_grid(500)
    vals = [fd_oracle_positive(1.0, gg, 1)[0] for gg in (g, g.refined(), g.refined().refined())]
    assert 1.7 <= convergence_slope(vals) <= 2.3


def test_fd_negative_mu47(neg47, ml):
    with pytest.warns(TailWarning):
        res = fd_oracle_negative(4.7, 40, 8000, 3, neg47, ml)
    assert np.allclose(res.energies, [1.85, 5.55, 8.25], rtol=1e-3)
    assert res.n_max == 4 and res.bound.all()


def test_fd_negative_mu5(neg5, ml):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TailWarning)
        res = fd_oracle_negative(5.0, 40, 8000, 1, neg5, ml)
    assert res.energies[0] == pytest.approx(2.0, rel=1e-3)


def test_fd_negative_flags_box_states(neg47, ml):
    res = fd_oracle_negative(4.7, 40, 2000, 8, neg47, ml, coordinate="angle")
    assert res.bound.tolist() == [True] * 5 + [False] * 3
    assert res.casimir[4] == pytest.approx(0.21, abs=0.02)
    # the box squeezes the shallow n = 4 state (tail ~ y^-0.7) above the threshold
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TailWarning)
        box = fd_oracle_negative(4.7, 40, 2000, 8, neg47, ml)
    assert box.bound[:4].all() and not box.bound[4:].any()


def test_fd_negative_angle_map(ml):
    p = OscillatorParams(22.09, -1, 1)
    res = fd_oracle_negative(4.7, 40, 4000, 3, p, ml, coordinate="angle")
    assert np.allclose(res.energies, [1.85, 5.55, 8.25], rtol=1e-6)


def test_direct_oracle(unit, ml, bdd, carinena):
    assert np.allclose(fd_oracle_schrodinger(unit, ml), [1, 3, 6], rtol=1e-6)
    assert np.allclose(fd_oracle_schrodinger(unit, bdd), [0.5, 2.5, 5.5], rtol=1e-6)
    assert np.allclose(fd_oracle_schrodinger(unit, carinena, count=2), [0.80901699, 2.92705098], rtol=1e-6)


def test_direct_oracle_negative_coordinates(carinena):
    # mu ~ 1.118: the box cannot hold the y^{-1.1} tail, the tan map can
    p = OscillatorParams(1.0, -1.0, 1.0)
    exact = 0.5 * math.sqrt(1.25) - 0.25
    assert fd_oracle_schrodinger(p, carinena, points=8000, count=1, coordinate="angle")[0] == pytest.approx(exact, rel=1e-4)
    box = fd_oracle_schrodinger(p, carinena, points=8000, count=1)[0]
    assert abs(box - exact) / exact > 1e-3


# --- residual -------------------------------------------------------------------------

def test_residual_exact_and_shifted(unit, ml):
    st0 = eigenstate_positive(0, unit, ml)
    x = np.linspace(-0.95, 0.95, 39)
    assert residual_schrodinger(st0, st0.E, unit, ml, x) <= 1e-6
    assert residual_schrodinger(st0, st0.E + 0.1, unit, ml, x) == pytest.approx(0.1, rel=1e-5)


def test_residual_keeps_off_singular_points(unit, ml):
    st0 = eigenstate_positive(0, unit, ml)
    with pytest.raises(ValueError):
        residual_schrodinger(st0, st0.E, unit, ml, [0.999])
