"""Mathews-Lakshmanan oscillator: mass, potentials, reduced equation coefficients
and the spectral parameters (d_tilde, mu, nu) that fix the closed-form solution."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ImaginaryMu, InvalidAmplitude, SingularPoint, WrongRegime
from .ordering import OrderingMeans

SINGULAR_TOL = 1e-14


class Regime(str, Enum):
    POSITIVE_INTERIOR = "PositiveLambdaInterior"
    POSITIVE_CONTINUUM = "PositiveLambdaContinuum"
    NEGATIVE = "NegativeLambda"
    HARMONIC = "HarmonicLimit"


class Regularity(str, Enum):
    REGULAR = "Regular"
    SINGULAR = "SingularEigenfunctions"


@dataclass(frozen=True)
class OscillatorParams:
    k: float = 1.0
    lam: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not self.k > 0:
            raise ValueError(f"k must be positive, got {self.k}")

    @property
    def edge(self) -> float:
        """Singular point 1/sqrt(lambda) for lambda > 0, otherwise inf."""
        return 1.0 / math.sqrt(self.lam) if self.lam > 0 else math.inf

    def to_dict(self) -> dict:
        return {"k": self.k, "lambda": self.lam, "hbar": self.hbar}

    @classmethod
    def from_dict(cls, d: dict) -> "OscillatorParams":
        return cls(k=float(d["k"]), lam=float(d["lambda"]), hbar=float(d.get("hbar", 1.0)))


@dataclass(frozen=True)
class ReducedCoefficients:
    """Coefficients of (1 - lam x^2) psi'' + 2 a lam x psi' + (b(E) + c x^2/(1 - lam x^2)) psi = 0."""

    a: float
    c: float
    b_const: float
    b_slope: float

    def b(self, E: float) -> float:
        return self.b_const + self.b_slope * E


@dataclass(frozen=True)
class SpectralParams:
    d_tilde: float
    mu: float | None
    regime: Regime
    lam: float
    hbar: float


@dataclass(frozen=True)
class ClassicalOrbit:
    amplitude: float
    omega: float
    delta: float
    omega0: float

    def x(self, t):
        return self.amplitude * np.sin(self.omega * np.asarray(t) + self.delta)


def _one_minus(x, p: OscillatorParams):
    x = np.asarray(x, dtype=float)
    s = 1.0 - p.lam * x * x
    if np.any(np.abs(s) < SINGULAR_TOL):
        raise SingularPoint(f"lambda*x^2 = 1 at x = {x[np.abs(s) < SINGULAR_TOL].ravel()[0]!r}")
    return s


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


def mass(x, p: OscillatorParams):
    return _out(1.0 / _one_minus(x, p))


def potential(x, p: OscillatorParams):
    x = np.asarray(x, dtype=float)
    return _out(p.k * x * x / (2.0 * _one_minus(x, p)))


def effective_potential(x, p: OscillatorParams, m: OrderingMeans):
    x = np.asarray(x, dtype=float)
    s = _one_minus(x, p)
    lam, h2 = p.lam, p.hbar**2
    ordering_part = 0.5 * h2 * (-2.0 * lam * m.gamma_bar + 4.0 * m.alphagamma_bar * lam**2 * x * x / s)
    return _out(ordering_part + p.k * x * x / (2.0 * s))


def reduced_coefficients(p: OscillatorParams, m: OrderingMeans) -> ReducedCoefficients:
    h2 = p.hbar**2
    return ReducedCoefficients(
        a=m.gamma_bar - m.alpha_bar - 1.0,
        c=-(4.0 * m.alphagamma_bar * p.lam**2 + p.k / h2),
        b_const=2.0 * p.lam * m.gamma_bar,
        b_slope=2.0 / h2,
    )


def radicand(p: OscillatorParams, m: OrderingMeans) -> float:
    return p.k + p.hbar**2 * p.lam**2 * m.discriminant


def spectral_params(p: OscillatorParams, m: OrderingMeans) -> SpectralParams:
    r = radicand(p, m)
    if r < 0:
        raise ImaginaryMu(r)
    d = math.sqrt(r)
    if p.lam == 0:
        return SpectralParams(d, None, Regime.HARMONIC, 0.0, p.hbar)
    regime = Regime.POSITIVE_INTERIOR if p.lam > 0 else Regime.NEGATIVE
    return SpectralParams(d, d / (p.hbar * abs(p.lam)), regime, p.lam, p.hbar)


def nu_for_level(n: int, sp: SpectralParams) -> float:
    """Degree of the Legendre function carrying level ``n``: n+mu (lam>0), n-mu (lam<0)."""
    if n < 0:
        raise ValueError("level index must be non-negative")
    if sp.regime in (Regime.POSITIVE_INTERIOR, Regime.POSITIVE_CONTINUUM):
        return n + sp.mu
    if sp.regime is Regime.NEGATIVE:
        return n - sp.mu
    raise WrongRegime(f"no Legendre degree in regime {sp.regime.value}")


def energy_from_casimir(nu_nu1: float, mu: float, p: OscillatorParams, m: OrderingMeans) -> float:
    """Energy for a Legendre degree with nu(nu+1) = ``nu_nu1`` (signed lambda)."""
    return 0.5 * p.hbar**2 * p.lam * (nu_nu1 - mu * mu - m.mean_sum)


def classify_regularity(m: OrderingMeans) -> Regularity:
    # Hermitian orderings built from decimal inputs must not flip to singular.
    if m.alpha_bar - m.gamma_bar > 1e-12:
        return Regularity.SINGULAR
    return Regularity.REGULAR


def classical_orbit(amplitude: float, delta: float, p: OscillatorParams) -> ClassicalOrbit:
    """Amplitude-dependent frequency of the classical motion x = A sin(w t + delta).

    The unit-mass harmonic frequency sqrt(k) is used for omega_0.
    """
    s = 1.0 + p.lam * amplitude**2
    if s <= 0:
        raise InvalidAmplitude(f"1 + lambda*A^2 = {s} <= 0")
    omega0 = math.sqrt(p.k)
    return ClassicalOrbit(amplitude, math.sqrt(p.k / s), delta, omega0)
