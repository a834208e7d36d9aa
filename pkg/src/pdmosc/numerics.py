"""Numerical kernels: Gauss-Legendre quadrature, Sturm-sequence bisection for
symmetric tridiagonal matrices, adaptive ODE integration and the
finite-difference eigenvalue oracles used to cross-check closed-form spectra."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    DimensionMismatch,
    IntegrationFailure,
    NoConvergence,
    NonFiniteSample,
    SingularCoefficient,
    TailWarning,
)
from .ordering import OrderingMeans
from .oscillator import OscillatorParams, effective_potential, energy_from_casimir, reduced_coefficients


# --- quadrature ---------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return len(self.nodes)


@lru_cache(maxsize=32)
def gauss_legendre(order: int) -> QuadratureRule:
    """Gauss-Legendre rule on (-1, 1); nodes by Newton iteration from Chebyshev guesses."""
    if not 1 <= order <= 2048:
        raise ValueError("order must be in [1, 2048]")
    n = order
    i = np.arange(n)
    x = np.cos(np.pi * (i + 0.75) / (n + 0.5))
    for _ in range(100):
        p0, p1 = np.ones_like(x), x.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    else:
        raise NoConvergence(f"Newton iteration for Gauss-Legendre order {order} did not converge")
    p0, p1 = np.ones_like(x), x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order_idx = np.argsort(x)
    x, w = x[order_idx], w[order_idx]
    # enforce exact symmetry
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(x, w)


def _sample(f, x):
    vals = np.asarray(f(x), dtype=float)
    if vals.shape != x.shape:
        vals = np.array([f(xi) for xi in x], dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteSample("integrand is not finite at some quadrature node")
    return vals


def integrate(rule: QuadratureRule, f, a: float, b: float) -> float:
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * rule.nodes
    return float(half * np.dot(rule.weights, _sample(f, x)))


def integrate_real_line(f, order: int = 64, panel: float = 1.0, tail_tol: float = 1e-16, t_max: float = 700.0) -> float:
    """Integral of f over the whole real line.

    Substitutes x = sinh(t), truncates where the transformed integrand falls
    below ``tail_tol`` times its peak and applies composite Gauss-Legendre
    panels of width ``panel``.  Handles algebraic tails like |x|^{-1.4}.
    """
    rule = gauss_legendre(order)

    def g(t):
        return _sample(f, np.sinh(t)) * np.cosh(t)

    peak = float(np.max(np.abs(g(np.linspace(-4.0, 4.0, 81)))))
    T = 4.0
    while T < t_max:
        edge = np.abs(g(np.array([-T, T])))
        if np.all(edge <= tail_tol * peak):
            break
        T *= 1.5
    else:
        raise NoConvergence("integrand tail does not decay within |x| < sinh(700)")
    npanel = max(2, int(math.ceil(2 * T / panel)))
    edges = np.linspace(-T, T, npanel + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate(rule, g, lo, hi)
    return total


# --- symmetric tridiagonal eigenvalues -------------------------------------------

def sturm_count(diag, offdiag, sigma: float) -> int:
    """Number of eigenvalues strictly below ``sigma`` (sign agreements of the Sturm sequence)."""
    return _sturm_count_sq([float(v) for v in diag], [float(v) ** 2 for v in offdiag], sigma)


def _sturm_count_sq(diag, e2, sigma: float) -> int:
    count = 0
    q = 1.0
    for i, d in enumerate(diag):
        q = d - sigma - (e2[i - 1] / q if i else 0.0)
        if q == 0.0:
            q = -1e-300
        if q < 0.0:
            count += 1
    return count


def tridiag_lowest_eigenvalues(diag, offdiag, count: int) -> np.ndarray:
    """Smallest ``count`` eigenvalues of a symmetric tridiagonal matrix by bisection."""
    d = [float(v) for v in diag]
    e = [float(v) for v in offdiag]
    n = len(d)
    if len(e) != n - 1:
        raise DimensionMismatch(f"offdiag has {len(e)} entries, expected {n - 1}")
    if not 1 <= count <= n:
        raise DimensionMismatch(f"count {count} outside 1..{n}")
    e2 = [v * v for v in e]
    radius = [abs(e[i - 1]) if i else 0.0 for i in range(n)]
    for i in range(n - 1):
        radius[i] += abs(e[i])
    lo0 = min(di - r for di, r in zip(d, radius))
    hi0 = max(di + r for di, r in zip(d, radius))
    pad = 1e-14 * max(abs(lo0), abs(hi0), 1.0)
    lo0, hi0 = lo0 - pad, hi0 + pad
    out = []
    lower = lo0
    for k in range(count):
        lo, hi = lower, hi0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _sturm_count_sq(d, e2, mid) > k:
                hi = mid
            else:
                lo = mid
            if hi - lo <= 2e-16 * max(abs(lo), abs(hi)):
                break
        val = 0.5 * (lo + hi)
        out.append(val)
        lower = lo
    return np.array(out)


# --- ODE integration ------------------------------------------------------------

@dataclass
class OdeSolution:
    z0: float
    z_end: float
    _dense: object = field(repr=False)

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        return self._dense(z)[0] if z.ndim else float(self._dense(z)[0])

    def derivative(self, z):
        z = np.asarray(z, dtype=float)
        return self._dense(z)[1] if z.ndim else float(self._dense(z)[1])


def ode_solve_second_order(coeffs, z0: float, phi0: float, dphi0: float, z_end: float,
                           rel_tol: float = 1e-10, atol: float | None = None) -> OdeSolution:
    """Integrate p(z) phi'' = q(z) phi' + r(z) phi from z0 to z_end.

    ``coeffs(z)`` returns ``(p, q, r)``.  Explicit Runge-Kutta (DOP853) with
    dense output; the returned object evaluates phi and phi' anywhere in range.
    """
    for zz in (z0, z_end):
        p, q, r = coeffs(zz)
        if p == 0 or not np.isfinite([p, q, r]).all():
            raise SingularCoefficient(f"coefficients singular at z = {zz}")

    def rhs(z, y):
        p, q, r = coeffs(z)
        if p == 0 or not np.isfinite(p):
            raise SingularCoefficient(f"p(z) vanishes at z = {z}")
        return [y[1], (q * y[1] + r * y[0]) / p]

    if atol is None:
        atol = rel_tol * 1e-6 * max(abs(phi0), abs(dphi0), 1e-300)
    try:
        res = solve_ivp(rhs, (z0, z_end), [phi0, dphi0], method="DOP853",
                        rtol=rel_tol, atol=atol, dense_output=True)
    except SingularCoefficient:
        raise
    except Exception as exc:  # scipy raises a mix of ValueError/RuntimeError
        raise IntegrationFailure(str(exc)) from exc
    if not res.success:
        raise IntegrationFailure(res.message)
    return OdeSolution(z0, z_end, res.sol)


# --- finite-difference oracles --------------------------------------------------

@dataclass(frozen=True)
class FDGrid:
    """Uniform grid of ``points`` interior nodes on [lower+epsilon, upper-epsilon]
    with Dirichlet conditions at the two (offset) ends."""

    lower: float
    upper: float
    points: int
    epsilon: float = 0.0

    def __post_init__(self):
        if self.points < 16:
            raise ValueError("FD grid needs at least 16 points")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")

    @property
    def h(self) -> float:
        return (self.upper - self.lower - 2 * self.epsilon) / (self.points + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.lower + self.epsilon + self.h * np.arange(1, self.points + 1)

    def refined(self) -> "FDGrid":
        """Grid with exactly half the spacing."""
        return FDGrid(self.lower, self.upper, 2 * self.points + 1, self.epsilon)

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "points": self.points,
                "epsilon": self.epsilon, "h": self.h}


def legendre_grid(points: int = 4000, epsilon: float = 1e-6, coordinate: str = "angle") -> FDGrid:
    if coordinate == "angle":
        return FDGrid(0.0, math.pi, points, epsilon)
    if coordinate == "z":
        return FDGrid(-1.0, 1.0, points, epsilon)
    raise ValueError(f"unknown coordinate {coordinate!r}")


def _sturm_liouville(grid: FDGrid, p, q, w, count: int) -> np.ndarray:
    """Lowest eigenvalues of -(p u')' + q u = lam w u with Dirichlet ends.

    Flux form with p at cell midpoints; the diagonal weight is absorbed by the
    symmetric scaling W^{-1/2} A W^{-1/2}.
    """
    x, h = grid.nodes, grid.h
    pm, pp = p(x - 0.5 * h), p(x + 0.5 * h)
    diag = (pm + pp) / h**2 + q(x)
    off = -pp[:-1] / h**2
    s = 1.0 / np.sqrt(w(x))
    diag = diag * s * s
    off = off * s[:-1] * s[1:]
    return tridiag_lowest_eigenvalues(diag, off, count)


def fd_oracle_positive(mu: float, grid: FDGrid | None = None, count: int = 3, coordinate: str = "angle") -> np.ndarray:
    """Finite-difference approximations of nu_n(nu_n+1) for the associated Legendre
    problem on (-1, 1) with order mu, Dirichlet at the offset ends.

    ``coordinate="z"`` discretizes -[(1-z^2) u']' + mu^2/(1-z^2) u directly; its
    convergence degrades to order ~mu for mu < 2 because solutions behave like
    (1-z)^{mu/2}.  The default ``"angle"`` uses z = cos(theta), where the same
    flux-form scheme is second order for mu >= 1.
    """
    if mu <= 0:
        raise ValueError("oracle needs mu > 0")
    if grid is None:
        grid = legendre_grid(coordinate=coordinate)
    if coordinate == "angle":
        return _sturm_liouville(grid, np.sin, lambda t: mu * mu / np.sin(t), np.sin, count)
    if coordinate == "z":
        return _sturm_liouville(grid, lambda z: 1.0 - z * z, lambda z: mu * mu / (1.0 - z * z),
                                np.ones_like, count)
    raise ValueError(f"unknown coordinate {coordinate!r}")


@dataclass(frozen=True)
class NegativeOracleResult:
    energies: np.ndarray
    casimir: np.ndarray  # approximations of -nu(nu+1)
    bound: np.ndarray  # False for box artefacts above the bound window
    n_max: int
    tail: np.ndarray


def fd_oracle_negative(mu: float, L: float, points: int, count: int,
                       p: OscillatorParams, means: OrderingMeans, coordinate: str = "box",
                       epsilon: float = 1e-9) -> NegativeOracleResult:
    """Eigenvalues of -[(1+y^2) u']' - mu^2/(1+y^2) u = kappa u, kappa = -nu(nu+1),
    mapped to energies with the signed-lambda spectrum formula.

    ``coordinate="box"`` imposes Dirichlet conditions at y = +-L.  Bound states
    decay only like (1+y^2)^{(n-mu)/2}, so for mu close to n + 1/2 no practical
    L is large enough; ``coordinate="angle"`` maps y = tan(theta) onto
    (-pi/2, pi/2), where the problem reads -u'' - mu^2 u = kappa sec^2 u and the
    Dirichlet ends are exact.  ``L`` is ignored there.
    """
    n_max = int(math.ceil(mu - 0.5)) - 1
    idx = np.arange(count)
    if coordinate == "box":
        grid = FDGrid(-L, L, points)
        kappa = _sturm_liouville(grid, lambda y: 1.0 + y * y, lambda y: -mu * mu / (1.0 + y * y),
                                 np.ones_like, count)
        tail = (1.0 + L * L) ** (0.5 * (idx - mu))
    elif coordinate == "angle":
        grid = FDGrid(-0.5 * math.pi, 0.5 * math.pi, points, epsilon)
        kappa = _sturm_liouville(grid, np.ones_like, lambda t: np.full_like(t, -mu * mu),
                                 lambda t: np.cos(t) ** -2, count)
        tail = np.zeros(count)
    else:
        raise ValueError(f"unknown coordinate {coordinate!r}")
    energies = np.array([energy_from_casimir(-k, mu, p, means) for k in kappa])
    # continuum threshold of the operator is kappa = 1/4
    bound = (idx <= n_max) & (kappa < 0.25)
    slow = [int(n) for n in idx[bound] if tail[n] > 1e-8]
    if slow:
        warnings.warn(f"eigenfunction tails at L={L} exceed 1e-8 for levels {slow}", TailWarning, stacklevel=2)
    return NegativeOracleResult(energies, kappa, bound, n_max, tail)


def fd_oracle_schrodinger(p: OscillatorParams, means: OrderingMeans, points: int = 4000, count: int = 3,
                          L: float = 40.0, epsilon: float = 1e-6, coordinate: str = "box") -> np.ndarray:
    """Energies from a direct discretization of the ordered Schrodinger equation.

    Uses only the reduced coefficients (a, b(E), c), written in Sturm-Liouville
    form with p = (1-lam x^2)^{-a} and weight (1-lam x^2)^{-a-1}; no Legendre
    reduction or spectral formula is involved.  lam > 0 works in the angle
    x = cos(theta)/sqrt(lam); lam < 0 in y = sqrt(|lam|) x on [-L, L], or with
    ``coordinate="angle"`` in y = tan(theta) on (-pi/2, pi/2).
    """
    rc = reduced_coefficients(p, means)
    a, c, lam = rc.a, rc.c, p.lam
    if lam > 0:
        grid = FDGrid(0.0, math.pi, points, epsilon)
        ex = -2.0 * a - 1.0
        beta = _sturm_liouville(
            grid,
            lambda t: np.sin(t) ** ex,
            lambda t: -(c / lam**2) * np.sin(t) ** (ex - 2.0) * np.cos(t) ** 2,
            lambda t: np.sin(t) ** ex,
            count,
        )
        b = lam * beta
    elif lam < 0 and coordinate == "angle":
        grid = FDGrid(-0.5 * math.pi, 0.5 * math.pi, points, min(epsilon, 1e-9))
        beta = _sturm_liouville(
            grid,
            lambda t: np.cos(t) ** (2.0 * a + 2.0),
            lambda t: -(c / lam**2) * np.cos(t) ** (2.0 * a) * np.sin(t) ** 2,
            lambda t: np.cos(t) ** (2.0 * a),
            count,
        )
        b = abs(lam) * beta
    elif lam < 0:
        grid = FDGrid(-L, L, points)
        beta = _sturm_liouville(
            grid,
            lambda y: (1.0 + y * y) ** (-a),
            lambda y: -(c / lam**2) * (1.0 + y * y) ** (-a - 2.0) * y * y,
            lambda y: (1.0 + y * y) ** (-a - 1.0),
            count,
        )
        b = abs(lam) * beta
    else:
        raise ValueError("direct oracle needs lambda != 0")
    return (b - rc.b_const) / rc.b_slope


def convergence_slope(values) -> float:
    """Observed order from three results on grids with h, h/2, h/4 (self-convergence)."""
    v0, v1, v2 = (float(v) for v in values)
    return math.log2(abs(v0 - v1) / abs(v1 - v2))


# --- Schrodinger residual -------------------------------------------------------

def residual_schrodinger(psi, E: float, p: OscillatorParams, means: OrderingMeans, samples, h: float | None = None) -> float:
    """max |H psi - E psi| / max |psi| over ``samples`` for the ordered Hamiltonian.

    Derivatives come from 5-point central differences of ``psi`` with step h
    (default 1e-3 of the length scale 1/sqrt|lambda|), keeping the check
    independent of the special-function formulas being tested.
    """
    x = np.asarray(samples, dtype=float)
    scale = 1.0 / math.sqrt(abs(p.lam)) if p.lam else 1.0
    if h is None:
        h = 1e-3 * scale
    if p.lam > 0 and np.any(np.abs(np.abs(x) - scale) < 10 * h):
        raise ValueError("samples must stay at least 10 h away from the singular points")
    f = [np.asarray(psi(x + j * h), dtype=float) for j in (-2, -1, 0, 1, 2)]
    d1 = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h)
    d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
    h2 = p.hbar**2
    lhs = (-0.5 * h2 * (1.0 - p.lam * x * x) * d2
           - h2 * (means.gamma_bar - means.alpha_bar - 1.0) * p.lam * x * d1
           + effective_potential(x, p, means) * f[2])
    res = lhs - E * f[2]
    if not np.all(np.isfinite(res)):
        raise NonFiniteSample("residual is not finite at some sample")
    return float(np.max(np.abs(res)) / np.max(np.abs(f[2])))
