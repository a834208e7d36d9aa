"""Closed-form spectra, normalised eigenstates and the lambda-Hermite reduction
for the Mathews-Lakshmanan oscillator under a general ordering."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import MuOutOfRange, NoBoundStates, SingularOrdering, WrongRegime
from .numerics import integrate_real_line
from .ordering import OrderingMeans
from .oscillator import (
    OscillatorParams,
    Regime,
    Regularity,
    SpectralParams,
    _one_minus,
    classify_regularity,
    energy_from_casimir,
    spectral_params,
)
from .specfun import (
    conical_legendre,
    gegenbauer_scale,
    jacobi_poly,
    jacobi_poly_deriv,
    legendre_imag_gegenbauer,
    legendre_nonint_poly,
)

LEVEL_RTOL = 1e-10


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    E: float
    nu: float | None

    def to_dict(self) -> dict:
        return {"n": self.n, "nu": self.nu, "E": self.E}


def _level(n: int, E: float, nu: float, mu: float, p: OscillatorParams, m: OrderingMeans) -> EnergyLevel:
    """Build a level, checking the explicit closed form against the degree form of E."""
    ref = energy_from_casimir(nu * (nu + 1.0), mu, p, m)
    if abs(E - ref) > LEVEL_RTOL * max(abs(E), abs(ref), 1.0):
        raise ArithmeticError(f"level {n}: E = {E!r} disagrees with nu-form {ref!r}")
    return EnergyLevel(n, E, nu)


@dataclass(frozen=True)
class BoundSpectrum:
    levels: tuple[EnergyLevel, ...]
    finite: bool
    n_max: int | None
    regime: Regime
    mu: float | None
    d_tilde: float
    singular: bool = False

    @property
    def energies(self) -> np.ndarray:
        return np.array([lv.E for lv in self.levels])

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "mu": self.mu,
            "d_tilde": self.d_tilde,
            "levels": [lv.to_dict() for lv in self.levels],
            "finite": self.finite,
            "n_max": self.n_max,
            "singular": self.singular,
        }


def _require(sp: SpectralParams, *regimes: Regime):
    if sp.regime not in regimes:
        raise WrongRegime(f"operation not defined in regime {sp.regime.value}")


def bound_spectrum_positive(p: OscillatorParams, means: OrderingMeans, n_max: int) -> BoundSpectrum:
    """Levels n = 0..n_max for lambda > 0 (infinite tower, truncated on request)."""
    sp = spectral_params(p, means)
    _require(sp, Regime.POSITIVE_INTERIOR)
    h, lam, d = p.hbar, p.lam, sp.d_tilde
    levels = []
    for n in range(n_max + 1):
        E = (n + 0.5) * h * d + 0.5 * h * h * lam * n * (n + 1) - 0.5 * h * h * lam * means.mean_sum
        levels.append(_level(n, E, n + sp.mu, sp.mu, p, means))
    return BoundSpectrum(tuple(levels), False, None, sp.regime, sp.mu, d,
                         classify_regularity(means) is Regularity.SINGULAR)


def max_bound_index(mu: float) -> int:
    """Largest N with mu > N + 1/2 strictly; -1 when there is none."""
    return int(math.ceil(mu - 0.5)) - 1


def bound_spectrum_negative(p: OscillatorParams, means: OrderingMeans) -> BoundSpectrum:
    sp = spectral_params(p, means)
    _require(sp, Regime.NEGATIVE)
    N = max_bound_index(sp.mu)
    if N < 0:
        raise NoBoundStates(f"mu = {sp.mu:.12g} <= 1/2 leaves no normalisable level")
    h, al, d = p.hbar, abs(p.lam), sp.d_tilde
    levels = []
    for n in range(N + 1):
        E = -n * (n + 1) * h * h * al / 2 + (n + 0.5) * h * d + 0.5 * h * h * al * means.mean_sum
        levels.append(_level(n, E, n - sp.mu, sp.mu, p, means))
    return BoundSpectrum(tuple(levels), True, N, sp.regime, sp.mu, d,
                         classify_regularity(means) is Regularity.SINGULAR)


def bound_spectrum_harmonic(p: OscillatorParams, means: OrderingMeans, n_max: int) -> BoundSpectrum:
    """lambda = 0: ordering drops out and E_n = (n + 1/2) hbar sqrt(k)."""
    sp = spectral_params(p, means)
    _require(sp, Regime.HARMONIC)
    levels = tuple(EnergyLevel(n, (n + 0.5) * p.hbar * sp.d_tilde, None) for n in range(n_max + 1))
    return BoundSpectrum(levels, False, None, sp.regime, None, sp.d_tilde, False)


def bound_spectrum(p: OscillatorParams, means: OrderingMeans, levels: int = 6) -> BoundSpectrum:
    """Dispatch on the sign of lambda; ``levels`` bounds the count for the infinite towers."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if p.lam > 0:
        return bound_spectrum_positive(p, means, levels - 1)
    if p.lam < 0:
        full = bound_spectrum_negative(p, means)
        return BoundSpectrum(full.levels[:levels], True, full.n_max, full.regime, full.mu,
                             full.d_tilde, full.singular)
    return bound_spectrum_harmonic(p, means, levels - 1)


# --- continuum ----------------------------------------------------------------

class Branch(str, Enum):
    REGION1 = "Region1"  # x < -1/sqrt(lambda)
    REGION3 = "Region3"  # x > +1/sqrt(lambda)


@dataclass(frozen=True)
class ContinuumState:
    rho: float
    mu: float
    branch: Branch | None
    E: float


def continuum_energy(rho: float, p: OscillatorParams, means: OrderingMeans,
                     branch: Branch | None = None) -> ContinuumState:
    sp = spectral_params(p, means)
    _require(sp, Regime.POSITIVE_INTERIOR, Regime.POSITIVE_CONTINUUM)
    E = energy_from_casimir(-0.25 - rho * rho, sp.mu, p, means)
    return ContinuumState(float(rho), sp.mu, branch, E)


# --- eigenstates ---------------------------------------------------------------

@dataclass(frozen=True)
class Eigenstate:
    """Normalised bound state; calling it evaluates psi_n(x)."""

    n: int
    mu: float
    means: OrderingMeans
    params: OscillatorParams
    normalization: float
    regime: Regime
    E: float

    def profile(self, y):
        raise NotImplementedError

    def __call__(self, x):
        raise NotImplementedError


def weight_function(x, p: OscillatorParams, means: OrderingMeans):
    """W = (1 - lam x^2)^{-(gamma_bar - alpha_bar)}; the absolute value is taken
    outside the interior region so the continuum branches stay real."""
    s = np.abs(_one_minus(x, p))
    out = s ** (-means.asymmetry)
    return float(out) if np.ndim(out) == 0 else out


def positive_norm_squared(n: int, mu: float, lam: float) -> float:
    """N_n^2 = sqrt(lam) (2n+2mu+1) Gamma(n+2mu+1) / (2 Gamma(n+1))."""
    lg = math.lgamma(n + 2 * mu + 1.0) - math.lgamma(n + 1.0)
    return math.sqrt(lam) * (2 * n + 2 * mu + 1) * 0.5 * math.exp(lg)


@dataclass(frozen=True)
class PositiveEigenstate(Eigenstate):
    def profile(self, z):
        """Unnormalised P_{n+mu}^{-mu}(z) on [-1, 1]."""
        return legendre_nonint_poly(self.n, self.mu, z)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        z = math.sqrt(self.params.lam) * x
        inside = np.abs(z) <= 1.0
        zc = np.where(inside, z, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            env = (1.0 - zc * zc) ** (0.5 * self.means.asymmetry)
        val = np.where(inside, self.normalization * env * np.asarray(self.profile(zc)), 0.0)
        return float(val) if val.ndim == 0 else val


def eigenstate_positive(n: int, p: OscillatorParams, means: OrderingMeans) -> PositiveEigenstate:
    sp = spectral_params(p, means)
    _require(sp, Regime.POSITIVE_INTERIOR)
    if classify_regularity(means) is Regularity.SINGULAR:
        raise SingularOrdering(
            f"gamma_bar - alpha_bar = {means.asymmetry:.12g} < 0: eigenfunctions blow up at the edges")
    if sp.mu <= -1:
        raise MuOutOfRange(f"mu = {sp.mu} must exceed -1")
    if n < 0:
        raise ValueError("level index must be non-negative")
    norm = math.sqrt(positive_norm_squared(n, sp.mu, p.lam))
    E = bound_spectrum_positive(p, means, n).levels[n].E
    return PositiveEigenstate(n, sp.mu, means, p, norm, sp.regime, E)


def negative_profile_norm(n: int, mu: float) -> float:
    """Integral over the real line of the squared Gegenbauer profile."""
    return integrate_real_line(lambda y: legendre_imag_gegenbauer(n, mu, y) ** 2)


def negative_norm_closed_form(n: int, mu: float) -> float | None:
    """|4 n! sin^2((n-mu) pi) Gamma(2mu-n) / ((2n+1-2mu) pi)|, the magnitude of the
    squared norm of P_{n-mu}^{mu}(iy) over the real y-line.

    None at integer mu, where the sine factor vanishes and the formula is degenerate.
    """
    if float(mu).is_integer():
        return None
    s = math.sin((n - mu) * math.pi)
    return abs(4.0 * math.factorial(n) * s * s * math.gamma(2 * mu - n) / ((2 * n + 1 - 2 * mu) * math.pi))


def negative_norm_from_profile(n: int, mu: float) -> float | None:
    """Same magnitude assembled from the Gegenbauer scale and the profile quadrature."""
    scale = gegenbauer_scale(n, mu)
    if scale is None:
        return None
    return scale * scale * negative_profile_norm(n, mu)


@dataclass(frozen=True)
class NegativeEigenstate(Eigenstate):
    def profile(self, y):
        return legendre_imag_gegenbauer(self.n, self.mu, y)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        al = abs(self.params.lam)
        y = math.sqrt(al) * x
        val = self.normalization * (1.0 + y * y) ** (0.5 * self.means.asymmetry) * np.asarray(self.profile(y))
        return float(val) if val.ndim == 0 else val


def eigenstate_negative(n: int, p: OscillatorParams, means: OrderingMeans) -> NegativeEigenstate:
    """Normalised by quadrature: N_n = (sqrt|lam| / int profile^2 dy)^{1/2}."""
    sp = spectral_params(p, means)
    _require(sp, Regime.NEGATIVE)
    if n < 0:
        raise ValueError("level index must be non-negative")
    if not sp.mu > n + 0.5:
        raise MuOutOfRange(f"level {n} needs mu > {n + 0.5}, got mu = {sp.mu:.12g}")
    norm = math.sqrt(math.sqrt(abs(p.lam)) / negative_profile_norm(n, sp.mu))
    E = bound_spectrum_negative(p, means).levels[n].E
    return NegativeEigenstate(n, sp.mu, means, p, norm, sp.regime, E)


def eigenstate(n: int, p: OscillatorParams, means: OrderingMeans) -> Eigenstate:
    if p.lam > 0:
        return eigenstate_positive(n, p, means)
    if p.lam < 0:
        return eigenstate_negative(n, p, means)
    raise WrongRegime("closed-form eigenstates need lambda != 0")


@dataclass(frozen=True)
class ContinuumEigenstate:
    """Unnormalised continuum state supported on one outer region."""

    state: ContinuumState
    means: OrderingMeans
    params: OscillatorParams
    z_max: float = 10.0

    @property
    def E(self) -> float:
        return self.state.E

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        sign = 1.0 if self.state.branch is Branch.REGION3 else -1.0
        z = sign * math.sqrt(self.params.lam) * x
        outside = z > 1.0
        if np.any(np.where(outside, z, 0.0) > self.z_max):
            raise ValueError(f"x beyond z_max = {self.z_max}; rebuild with a larger z_max")
        zc = np.where(outside, z, 2.0)
        env = (zc * zc - 1.0) ** (0.5 * self.means.asymmetry)
        phi = np.asarray(conical_legendre(self.state.rho, self.state.mu, zc, z_max=self.z_max))
        val = np.where(outside, env * phi, 0.0)
        return float(val) if val.ndim == 0 else val


def eigenstate_continuum(rho: float, p: OscillatorParams, means: OrderingMeans,
                         branch: Branch | str = Branch.REGION3, z_max: float = 10.0) -> ContinuumEigenstate:
    branch = Branch(branch)
    state = continuum_energy(rho, p, means, branch)
    if not state.mu > 0:
        raise MuOutOfRange("continuum states need mu > 0")
    return ContinuumEigenstate(state, means, p, float(z_max))


# --- lambda-dependent Hermite form -------------------------------------------------

@dataclass(frozen=True)
class LambdaHermiteForm:
    """phi(y) = P_n^{(mu,mu)}(sqrt(lambda_tilde) y) solving
    (1 - lt y^2) phi'' - 2 (1 + lt) y phi' + B phi = 0 with lt = 1/mu."""

    n: int
    d: float
    lambda_tilde: float
    B: float
    mu: float
    d_tilde: float
    means: OrderingMeans = field(repr=False)
    params: OscillatorParams = field(repr=False)

    def phi(self, y):
        return jacobi_poly(self.n, self.mu, self.mu, math.sqrt(self.lambda_tilde) * np.asarray(y, dtype=float))

    def dphi(self, y):
        s = math.sqrt(self.lambda_tilde)
        return s * jacobi_poly_deriv(self.n, self.mu, self.mu, s * np.asarray(y, dtype=float), 1)

    def d2phi(self, y):
        s = math.sqrt(self.lambda_tilde)
        return s * s * jacobi_poly_deriv(self.n, self.mu, self.mu, s * np.asarray(y, dtype=float), 2)

    def residual(self, y):
        """Left side of the Hermite-type equation with the denominator cleared."""
        y = np.asarray(y, dtype=float)
        lt = self.lambda_tilde
        return (1.0 - lt * y * y) * self.d2phi(y) - 2.0 * (1.0 + lt) * y * self.dphi(y) + self.B * self.phi(y)

    def energy(self) -> float:
        """E from B: b = (d~/hbar)(B + lt (gamma_bar - alpha_bar) + 1), E = hbar^2 (b - 2 lam gamma_bar)/2."""
        h = self.params.hbar
        b = (self.d_tilde / h) * (self.B + self.lambda_tilde * self.means.asymmetry + 1.0)
        return 0.5 * h * h * (b - 2.0 * self.params.lam * self.means.gamma_bar)


def lambda_hermite_form(n: int, p: OscillatorParams, means: OrderingMeans) -> LambdaHermiteForm:
    sp = spectral_params(p, means)
    _require(sp, Regime.POSITIVE_INTERIOR)
    if sp.d_tilde == 0:
        raise MuOutOfRange("lambda-Hermite rescaling needs d_tilde > 0")
    lt = p.hbar * p.lam / sp.d_tilde
    d = 0.5 * means.asymmetry + sp.d_tilde / (2.0 * p.hbar * p.lam)
    B = lt * n * (n + 2.0 * sp.mu + 1.0)
    return LambdaHermiteForm(n, d, lt, B, sp.mu, sp.d_tilde, means, p)
