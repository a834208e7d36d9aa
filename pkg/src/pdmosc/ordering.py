"""Kinetic-energy operator orderings as weighted exponent triples.

An ordering is a list of terms ``w * m^alpha p m^beta p m^gamma`` with
``alpha + beta + gamma = -1`` and weights summing to one.  Everything
downstream only sees the three weighted means returned by
:func:`derived_means`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import ConstraintViolation, UnknownScheme

TOL = 1e-12


@dataclass(frozen=True)
class OrderingTerm:
    w: float
    alpha: float
    beta: float
    gamma: float


@dataclass(frozen=True)
class Ordering:
    terms: tuple[OrderingTerm, ...]
    name: str | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "terms": [
                {"w": t.w, "alpha": t.alpha, "beta": t.beta, "gamma": t.gamma}
                for t in self.terms
            ],
        }


@dataclass(frozen=True)
class OrderingMeans:
    alpha_bar: float
    gamma_bar: float
    alphagamma_bar: float

    @property
    def asymmetry(self) -> float:
        """gamma_bar - alpha_bar; zero for Hermitian orderings."""
        return self.gamma_bar - self.alpha_bar

    @property
    def mean_sum(self) -> float:
        return self.alpha_bar + self.gamma_bar

    @property
    def discriminant(self) -> float:
        """(gamma_bar - alpha_bar)^2 + 4*alphagamma_bar, the only other
        combination the spectrum depends on."""
        return self.asymmetry**2 + 4.0 * self.alphagamma_bar


class Hermiticity(str, Enum):
    HERMITIAN = "Hermitian"
    NON_HERMITIAN = "NonHermitian"


def make_ordering(terms: Iterable[Sequence[float]], name: str | None = None) -> Ordering:
    """Validate ``(w, alpha, beta, gamma)`` tuples and build an :class:`Ordering`."""
    built = []
    for i, t in enumerate(terms):
        if len(t) != 4:
            raise ConstraintViolation(i, "term must be (w, alpha, beta, gamma)", tuple(t))
        w, a, b, g = (float(v) for v in t)
        s = a + b + g
        if abs(s + 1.0) > TOL:
            raise ConstraintViolation(i, "alpha+beta+gamma = -1", s)
        built.append(OrderingTerm(w, a, b, g))
    if not built:
        raise ConstraintViolation(None, "at least one term", 0)
    wsum = sum(t.w for t in built)
    if abs(wsum - 1.0) > TOL:
        raise ConstraintViolation(None, "sum of weights = 1", wsum)
    return Ordering(tuple(built), name)


def derived_means(o: Ordering) -> OrderingMeans:
    a = sum(t.w * t.alpha for t in o.terms)
    g = sum(t.w * t.gamma for t in o.terms)
    ag = sum(t.w * t.alpha * t.gamma for t in o.terms)
    return OrderingMeans(a, g, ag)


def classify_hermiticity(m: OrderingMeans) -> Hermiticity:
    if abs(m.alpha_bar - m.gamma_bar) <= TOL:
        return Hermiticity.HERMITIAN
    return Hermiticity.NON_HERMITIAN


# Weyl ordering is deliberately absent: it has no finite term list of this form.
SCHEMES: dict[str, tuple[tuple[float, float, float, float], ...]] = {
    "ben-daniel-duke": ((1.0, 0.0, -1.0, 0.0),),
    "zhu-kroemer": ((1.0, -0.5, 0.0, -0.5),),
    "mathews-lakshmanan": ((0.5, 0.0, 0.0, -1.0), (0.5, -1.0, 0.0, 0.0)),
    "carinena": ((1.0, -0.5, -0.5, 0.0),),
}


def named_scheme(name: str) -> Ordering:
    key = name.strip().lower()
    if key not in SCHEMES:
        raise UnknownScheme(name)
    return make_ordering(SCHEMES[key], name=key)


def ordering_from_dict(data: dict) -> Ordering:
    """Parse the JSON ordering form ``{"name": ..., "terms": [{w, alpha, beta, gamma}, ...]}``.

    Extra keys (``means``, ``hermiticity``) written by the catalog are ignored.
    """
    try:
        raw = data["terms"]
        terms = [(t["w"], t["alpha"], t["beta"], t["gamma"]) for t in raw]
    except (KeyError, TypeError) as exc:
        raise ConstraintViolation(None, f"malformed ordering JSON ({exc})") from None
    return make_ordering(terms, name=data.get("name"))


def load_ordering(path) -> Ordering:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, list):
        if len(data) != 1:
            raise ConstraintViolation(None, "ordering file must hold exactly one ordering", len(data))
        data = data[0]
    return ordering_from_dict(data)
