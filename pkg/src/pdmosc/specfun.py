"""Scalar special functions used by the closed-form eigenstates.

Polynomial evaluators accept scalars or numpy arrays for the argument and
return the same shape.  Parameters (degree, order, ...) are scalars.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import BadParameters, NoConvergence, PoleAtNonPositiveInteger

SQRT_PI = math.sqrt(math.pi)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))``."""
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleAtNonPositiveInteger(f"Gamma has a pole at {x}")
    sign = 1 if x > 0 or math.floor(x) % 2 == 0 else -1
    return math.lgamma(x), sign


def gamma(x: float) -> float:
    lg, s = log_gamma(x)
    return s * math.exp(lg)


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if _is_nonpositive_integer(x):
        return 0.0
    lg, s = log_gamma(x)
    return s * math.exp(-lg)


def pochhammer(a: float, n: int) -> float:
    out = 1.0
    for j in range(n):
        out *= a + j
    return out


def falling(s: float, k: int) -> float:
    """Falling factorial s (s-1) ... (s-k+1)."""
    out = 1.0
    for j in range(k):
        out *= s - j
    return out


def hyp2f1_terminating(a: float, b: float, c: float, z):
    """Gauss series F(a, b; c; z) for ``a = -n``; exact finite sum of n+1 terms."""
    if not _is_nonpositive_integer(a):
        raise BadParameters(f"terminating series needs a = -n, got a = {a}")
    n = int(-a)
    if _is_nonpositive_integer(c) and -c < n:
        raise BadParameters(f"c = {c} hits zero before the series terminates (n = {n})")
    z = np.asarray(z, dtype=float)
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(n):
        term = term * ((a + k) * (b + k) / ((c + k) * (k + 1))) * z
        total = total + term
    return float(total) if total.ndim == 0 else total


def hyp2f1_series(a: float, b: float, c: float, z, max_terms: int = 10000):
    """Gauss series F(a, b; c; z) summed until the term drops below 1e-15 of the sum.

    Restricted to |z| <= 0.9, where convergence is geometric at worst like 0.9^k.
    """
    if _is_nonpositive_integer(c):
        raise BadParameters(f"c = {c} is a non-positive integer")
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 0.9):
        raise BadParameters("hyp2f1_series is restricted to |z| <= 0.9")
    term = np.ones_like(z)
    total = np.ones_like(z)
    scale = np.ones_like(z)
    for k in range(max_terms):
        term = term * ((a + k) * (b + k) / ((c + k) * (k + 1))) * z
        total = total + term
        scale = np.maximum(scale, np.abs(total))
        # second clause: sums that cancel to ~0 are judged against the largest partial sum
        done = (np.abs(term) <= 1e-15 * np.abs(total)) | (np.abs(term) <= 1e-17 * scale)
        if np.all(done):
            break
    else:
        raise NoConvergence(f"hyp2f1_series({a}, {b}; {c}) did not converge in {max_terms} terms")
    return float(total) if total.ndim == 0 else total


def jacobi_poly(n: int, a: float, b: float, z):
    """P_n^{(a,b)}(z) by the three-term recurrence."""
    z = np.asarray(z, dtype=float)
    p0 = np.ones_like(z)
    if n == 0:
        return float(p0) if z.ndim == 0 else p0
    p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * z
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2.0 * k * (k + a + b) * (s - 2.0)
        c2 = (s - 1.0) * (s * (s - 2.0) * z + a * a - b * b)
        c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s
        p0, p1 = p1, (c2 * p1 - c3 * p0) / c1
    return float(p1) if z.ndim == 0 else p1


def jacobi_poly_deriv(n: int, a: float, b: float, z, order: int = 1):
    """Derivative of P_n^{(a,b)} via d/dz P_n^{(a,b)} = (n+a+b+1)/2 P_{n-1}^{(a+1,b+1)}."""
    coef = 1.0
    for j in range(order):
        if n - j <= 0:
            return 0.0 * np.asarray(z, dtype=float)
        # after j steps the polynomial is P_{n-j}^{(a+j, b+j)}
        coef *= 0.5 * (n + a + b + 1 + j)
    return coef * jacobi_poly(n - order, a + order, b + order, z)


def gegenbauer_poly(n: int, alpha: float, z):
    """C_n^{alpha}(z) by recurrence, run formally for any real alpha."""
    z = np.asarray(z, dtype=float)
    c0 = np.ones_like(z)
    if n == 0:
        return float(c0) if z.ndim == 0 else c0
    c1 = 2.0 * alpha * z
    for k in range(2, n + 1):
        c0, c1 = c1, (2.0 * z * (k + alpha - 1.0) * c1 - (k + 2.0 * alpha - 2.0) * c0) / k
    return float(c1) if z.ndim == 0 else c1


def _check_unit_interval(z):
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 1.0):
        raise ValueError("argument must lie in [-1, 1]")
    return z


def _envelope(z, mu: float):
    with np.errstate(divide="ignore"):
        return (1.0 - z * z) ** (0.5 * mu)


def legendre_nonint_poly(n: int, mu: float, z):
    """P_{n+mu}^{-mu}(z) on [-1, 1] from its terminating hypergeometric form.

    Even n uses the F(-n/2, ...; 1/2; z^2) branch, odd n the z F(...; 3/2; z^2)
    branch; the other branch carries 1/Gamma at a pole and drops out.
    """
    if mu <= -1:
        raise ValueError("order requires mu > -1")
    z = _check_unit_interval(z)
    if n % 2 == 0:
        lg1, s1 = log_gamma(0.5 - 0.5 * n)
        lg2, s2 = log_gamma(1.0 + 0.5 * n + mu)
        coef = s1 * s2 * math.exp(-mu * math.log(2.0) - lg1 - lg2) * SQRT_PI
        poly = hyp2f1_terminating(-0.5 * n, 0.5 + 0.5 * n + mu, 0.5, z * z)
    else:
        lg1, s1 = log_gamma(0.5 + 0.5 * n + mu)
        lg2, s2 = log_gamma(-0.5 * n)
        coef = -2.0 * s1 * s2 * math.exp(-mu * math.log(2.0) - lg1 - lg2) * SQRT_PI
        poly = z * hyp2f1_terminating(0.5 - 0.5 * n, 1.0 + 0.5 * n + mu, 1.5, z * z)
    out = coef * _envelope(z, mu) * poly
    return float(out) if np.ndim(out) == 0 else out


def legendre_nonint_via_jacobi(n: int, mu: float, z, extra_sign: bool = False):
    """P_{n+mu}^{-mu}(z) = 2^{-mu} n!/Gamma(n+mu+1) (1-z^2)^{mu/2} P_n^{(mu,mu)}(z).

    ``extra_sign=True`` multiplies by (-1)^n, which disagrees with the
    hypergeometric form for odd n; it exists only to document that.
    """
    if mu <= -1:
        raise ValueError("order requires mu > -1")
    z = _check_unit_interval(z)
    coef = math.exp(-mu * math.log(2.0) + math.lgamma(n + 1.0) - math.lgamma(n + mu + 1.0))
    if extra_sign and n % 2:
        coef = -coef
    out = coef * _envelope(z, mu) * jacobi_poly(n, mu, mu, z)
    return float(out) if np.ndim(out) == 0 else out


def rodrigues_eval(n: int, mu: float, z):
    """Rodrigues form (-1)^n / (2^{n+mu} Gamma(n+mu+1)) (1-z^2)^{-mu/2} d^n/dz^n (1-z^2)^{n+mu}.

    The n-th derivative of (1-z)^s (1+z)^s, s = n+mu, is expanded with the
    Leibniz rule, so no numerical differentiation is involved.
    """
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) >= 1.0):
        raise ValueError("Rodrigues evaluation needs |z| < 1")
    s = n + mu
    deriv = np.zeros_like(z)
    for k in range(n + 1):
        # d^k (1-z)^s = (-1)^k s^(k falling) (1-z)^{s-k}
        left = (-1) ** k * falling(s, k) * (1.0 - z) ** (s - k)
        right = falling(s, n - k) * (1.0 + z) ** (s - n + k)
        deriv = deriv + math.comb(n, k) * left * right
    lg = math.lgamma(s + 1.0)
    coef = (-1) ** n * math.exp(-s * math.log(2.0) - lg)
    out = coef * (1.0 - z * z) ** (-0.5 * mu) * deriv
    return float(out) if out.ndim == 0 else out


def legendre_series_general(nu: float, mu: float, z):
    """P_nu^{-mu}(z) for general real nu from the two-series representation, |z| <= 0.9."""
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 0.9):
        raise BadParameters("legendre_series_general is restricted to |z| <= 0.9")
    h_nu, h_mu = 0.5 * nu, 0.5 * mu
    z2 = z * z
    r1 = rgamma(0.5 - h_nu + h_mu) * rgamma(1.0 + h_nu + h_mu)
    r2 = rgamma(0.5 + h_nu + h_mu) * rgamma(-h_nu + h_mu)
    first = r1 * hyp2f1_series(h_mu - h_nu, 0.5 + h_nu + h_mu, 0.5, z2) if r1 else 0.0 * z
    second = 2.0 * z * r2 * hyp2f1_series(0.5 - h_nu + h_mu, 1.0 + h_nu + h_mu, 1.5, z2) if r2 else 0.0 * z
    out = 2.0**-mu * SQRT_PI * (1.0 - z2) ** h_mu * (first - second)
    return float(out) if np.ndim(out) == 0 else out


def legendre_imag_gegenbauer(n: int, mu: float, y):
    """Real profile (1+y^2)^{(n-mu)/2} C_n^{mu-n}(y/sqrt(1+y^2)) of P_{n-mu}^{mu}(iy).

    The constant complex phase and gamma prefactor are left out; callers
    normalise by quadrature.
    """
    y = np.asarray(y, dtype=float)
    r = 1.0 + y * y
    out = r ** (0.5 * (n - mu)) * gegenbauer_poly(n, mu - n, y / np.sqrt(r))
    return float(out) if out.ndim == 0 else out


def legendre_imag_gegenbauer_deriv(n: int, mu: float, y):
    """d/dy of :func:`legendre_imag_gegenbauer`, using C_n^a' = 2a C_{n-1}^{a+1}."""
    y = np.asarray(y, dtype=float)
    r = 1.0 + y * y
    t = y / np.sqrt(r)
    a = mu - n
    c = gegenbauer_poly(n, a, t)
    dc = 2.0 * a * gegenbauer_poly(n - 1, a + 1.0, t) if n > 0 else 0.0 * t
    out = (n - mu) * y * r ** (0.5 * (n - mu) - 1.0) * c + r ** (0.5 * (n - mu) - 1.5) * dc
    return float(out) if out.ndim == 0 else out


def gegenbauer_scale(n: int, mu: float) -> float | None:
    """|2^{n-mu} n! Gamma(n-mu+1/2) / (sqrt(pi) Gamma(1+2n-2mu))|, the magnitude of the
    constant linking P_{n-mu}^{mu}(iy) to the real Gegenbauer profile.

    Returns None when a gamma argument sits at a pole (integer or half-integer mu).
    """
    a1, a2 = n - mu + 0.5, 1.0 + 2 * n - 2 * mu
    if _is_nonpositive_integer(a1) or _is_nonpositive_integer(a2):
        return None
    lg1, _ = log_gamma(a1)
    lg2, _ = log_gamma(a2)
    return math.exp((n - mu) * math.log(2.0) + math.lgamma(n + 1.0) + lg1 - lg2) / SQRT_PI


# --- conical functions -------------------------------------------------------

CONICAL_Z0 = 1.0 + 1e-4


def _frobenius_conical(rho: float, mu: float, z):
    """Two-term Frobenius expansion (z^2-1)^{mu/2} (1 + c1 (z-1)) about z = 1."""
    c1 = -0.5 * mu - (0.25 + rho * rho) / (2.0 * (1.0 + mu))
    z = np.asarray(z, dtype=float)
    t = z - 1.0
    w = z * z - 1.0
    val = w ** (0.5 * mu) * (1.0 + c1 * t)
    dval = mu * z * w ** (0.5 * mu - 1.0) * (1.0 + c1 * t) + c1 * w ** (0.5 * mu)
    return val, dval


@lru_cache(maxsize=64)
def _conical_solution(rho: float, mu: float, z_max: float, rel_tol: float):
    from .numerics import ode_solve_second_order

    nunu1 = -0.25 - rho * rho

    def coeffs(z):
        one = 1.0 - z * z
        return one, 2.0 * z, -(nunu1 - mu * mu / one)

    phi0, dphi0 = _frobenius_conical(rho, mu, CONICAL_Z0)
    return ode_solve_second_order(coeffs, CONICAL_Z0, float(phi0), float(dphi0), z_max, rel_tol=rel_tol)


def conical_legendre(rho: float, mu: float, z, z_max: float = 10.0, rel_tol: float = 1e-10, derivative: bool = False):
    """Real solution of the Legendre equation with nu(nu+1) = -1/4 - rho^2 on z > 1.

    Normalised so that phi ~ (z^2-1)^{mu/2} with unit coefficient as z -> 1+.
    Built by adaptive integration from z0 = 1 + 1e-4; below z0 the two-term
    Frobenius expansion is used directly.
    """
    if mu <= 0:
        raise ValueError("conical_legendre needs mu > 0")
    z = np.asarray(z, dtype=float)
    if np.any(z <= 1.0) or np.any(z > z_max):
        raise ValueError(f"conical_legendre needs 1 < z <= z_max = {z_max}")
    sol = _conical_solution(float(rho), float(mu), float(z_max), float(rel_tol))
    near = z < CONICAL_Z0
    fv, fd = _frobenius_conical(rho, mu, np.where(near, z, CONICAL_Z0))
    zz = np.where(near, CONICAL_Z0, z)
    if derivative:
        out = np.where(near, fd, sol.derivative(zz))
    else:
        out = np.where(near, fv, sol(zz))
    return float(out) if out.ndim == 0 else out
