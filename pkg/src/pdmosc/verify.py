"""Named property checks tying the closed forms to independent oracles.

Every check returns a :class:`VerificationReport`; :func:`run_all` picks the
checks that make sense for the regime of the given parameters.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ImaginaryMu, TailWarning
from .numerics import (
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
)
from .ordering import OrderingMeans
from .oscillator import (
    OscillatorParams,
    Regularity,
    classify_regularity,
    energy_from_casimir,
    spectral_params,
)
from .spectra import (
    bound_spectrum,
    eigenstate_continuum,
    eigenstate_negative,
    eigenstate_positive,
    lambda_hermite_form,
    max_bound_index,
    negative_norm_closed_form,
    negative_norm_from_profile,
    weight_function,
)
from .specfun import (
    conical_legendre,
    gegenbauer_poly,
    legendre_imag_gegenbauer,
    legendre_imag_gegenbauer_deriv,
    legendre_nonint_poly,
    legendre_nonint_via_jacobi,
    legendre_series_general,
    rodrigues_eval,
)


@dataclass(frozen=True)
class VerificationReport:
    check_name: str
    max_error: float
    tolerance: float
    details: dict = field(default_factory=dict)
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.max_error <= self.tolerance))

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "details": self.details,
        }


@dataclass(frozen=True)
class VerifyConfig:
    n_levels: int = 6
    quad_order: int = 256
    identity_mus: tuple[float, ...] = (0.5, 1.0, 2.5)
    jacobi_n_max: int = 10
    jacobi_samples: int = 101
    rodrigues_n_max: int = 8
    rodrigues_samples: int = 41
    hermite_n_max: int = 4
    oracle_levels: int = 3
    oracle_points: int = 4000
    oracle_epsilon: float = 1e-6
    negative_L: float = 40.0
    negative_points: int = 8000
    convergence_points: int = 500
    reflection_nus: tuple[float, ...] = (0.3, 1.2, 2.7)
    reflection_mus: tuple[float, ...] = (0.7, 1.5)
    reflection_samples: int = 19
    harmonic_lambda: float = 1e-6
    harmonic_levels: int = 6
    continuum_rho: float = 0.5
    continuum_window: tuple[float, float] = (1.05, 5.0)
    gegenbauer_span: float = 6.0


def _identity_grid(count: int, closed: bool) -> np.ndarray:
    if closed:
        return np.linspace(-1.0, 1.0, count)
    return np.linspace(-1.0, 1.0, count + 2)[1:-1]


# --- validity -----------------------------------------------------------------

def check_validity(p: OscillatorParams, means: OrderingMeans) -> VerificationReport:
    details = {"regularity": classify_regularity(means).value}
    try:
        sp = spectral_params(p, means)
    except ImaginaryMu as exc:
        details.update(reason=str(exc), radicand=exc.radicand)
        return VerificationReport("validity", math.inf, 0.0, details)
    details.update(regime=sp.regime.value, mu=sp.mu, d_tilde=sp.d_tilde)
    if p.lam < 0 and max_bound_index(sp.mu) < 0:
        details["reason"] = f"no bound states: mu = {sp.mu:.12g} <= 1/2"
        return VerificationReport("validity", math.inf, 0.0, details)
    return VerificationReport("validity", 0.0, 0.0, details)


# --- orthonormality -------------------------------------------------------------

def check_orthonormality_positive(p: OscillatorParams, means: OrderingMeans, n_levels: int = 6,
                                  quad_order: int = 256, tolerance: float | None = None) -> VerificationReport:
    """Weighted Gram matrix over the interior region against the identity."""
    states = [eigenstate_positive(n, p, means) for n in range(n_levels)]
    mu = states[0].mu
    integer_mu = float(mu).is_integer()
    if tolerance is None:
        # integer mu: polynomial integrands, Gauss-Legendre is exact up to rounding
        tolerance = 1e-8 if integer_mu else 1e-6
    rule = gauss_legendre(quad_order)
    edge = p.edge
    x = 0.5 * 2 * edge * rule.nodes
    w = weight_function(x, p, means)
    vals = np.array([s(x) for s in states])
    G = np.einsum("k,ik,jk->ij", rule.weights * edge * w, vals, vals)
    err = np.abs(G - np.eye(n_levels))
    return VerificationReport("orthonormality_positive", float(err.max()), tolerance, {
        "levels": n_levels, "quad_order": quad_order, "mu": mu,
        "G00": float(G[0, 0]), "max_offdiag": float((err - np.diag(np.diag(err))).max()),
        "budget": "integer mu: exact polynomial quadrature; otherwise (1-z^2)^mu endpoint behaviour",
    })


def check_orthonormality_negative(p: OscillatorParams, means: OrderingMeans,
                                  tolerance: float = 1e-8) -> VerificationReport:
    """Gram matrix of all bound states for lambda < 0 with the weight (1+|lam|x^2)^{-(gamma_bar-alpha_bar)}."""
    N = bound_spectrum(p, means, 10**6).n_max
    states = [eigenstate_negative(n, p, means) for n in range(N + 1)]
    G = np.zeros((N + 1, N + 1))
    for i in range(N + 1):
        for j in range(i, N + 1):
            G[i, j] = G[j, i] = integrate_real_line(
                lambda x, a=states[i], b=states[j]: weight_function(x, p, means) * a(x) * b(x))
    err = np.abs(G - np.eye(N + 1))
    return VerificationReport("orthonormality_negative", float(err.max()), tolerance, {
        "levels": N + 1, "mu": states[0].mu, "budget": "sinh-mapped Gauss-Legendre panels",
    })


# --- special-function identities ----------------------------------------------------

def check_jacobi_relation(mu_list=(0.5, 1.0, 2.5), n_max: int = 10, sample_count: int = 101,
                          tolerance: float = 1e-10) -> VerificationReport:
    """Hypergeometric form vs the Jacobi relation (no (-1)^n factor).

    Also evaluates the relation with (-1)^n reinstated and records which n fail.
    """
    z = _identity_grid(sample_count, closed=True)
    err = 0.0
    extra_fail = set()
    ratio_signs = {}
    for mu in mu_list:
        for n in range(n_max + 1):
            ref = legendre_nonint_poly(n, mu, z)
            ours = legendre_nonint_via_jacobi(n, mu, z)
            scale = max(1.0, float(np.max(np.abs(ref))))
            err = max(err, float(np.max(np.abs(ours - ref))) / scale)
            alt = legendre_nonint_via_jacobi(n, mu, z, extra_sign=True)
            if np.max(np.abs(alt - ref)) / scale > tolerance:
                extra_fail.add(n)
            k = int(np.argmax(np.abs(ref)))
            ratio_signs[n] = int(np.sign(alt[k] / ref[k]))
    odd = [n for n in range(n_max + 1) if n % 2]
    return VerificationReport("jacobi_relation", err, tolerance, {
        "mus": list(mu_list), "n_max": n_max, "samples": sample_count,
        "extra_sign_failing_n": sorted(extra_fail),
        "extra_sign_fails_all_odd_n": sorted(extra_fail) == odd,
        "extra_sign_ratio": ratio_signs,
    })


def check_rodrigues(mu_list=(0.5, 1.0, 2.5), n_max: int = 8, sample_count: int = 41,
                    tolerance: float = 1e-9) -> VerificationReport:
    z = _identity_grid(sample_count, closed=False)
    err = 0.0
    for mu in mu_list:
        for n in range(n_max + 1):
            ref = legendre_nonint_poly(n, mu, z)
            scale = max(1.0, float(np.max(np.abs(ref))))
            err = max(err, float(np.max(np.abs(rodrigues_eval(n, mu, z) - ref))) / scale)
    return VerificationReport("rodrigues", err, tolerance,
                              {"mus": list(mu_list), "n_max": n_max, "samples": sample_count})


def check_nu_reflection(nus=(0.3, 1.2, 2.7), mus=(0.7, 1.5), zs=None,
                        tolerance: float = 1e-10) -> VerificationReport:
    if zs is None:
        zs = np.linspace(-0.9, 0.9, 19)
    zs = np.asarray(zs, dtype=float)
    err = 0.0
    for nu in nus:
        for mu in mus:
            a = legendre_series_general(nu, mu, zs)
            b = legendre_series_general(-nu - 1.0, mu, zs)
            err = max(err, float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a)))))
    return VerificationReport("nu_reflection", err, tolerance,
                              {"nus": list(nus), "mus": list(mus), "samples": int(zs.size)})


# --- lambda-Hermite form ------------------------------------------------------------

def check_lambda_hermite(p: OscillatorParams, means: OrderingMeans, n_max: int = 4,
                         samples: int = 41, tolerance: float = 1e-8) -> VerificationReport:
    """Residual of the Hermite-type equation with analytic Jacobi derivatives."""
    err = 0.0
    for n in range(n_max + 1):
        f = lambda_hermite_form(n, p, means)
        y = np.linspace(-1.0, 1.0, samples) / math.sqrt(f.lambda_tilde)
        scale = max(1.0, float(np.max(np.abs(f.B * f.phi(y)))))
        err = max(err, float(np.max(np.abs(f.residual(y)))) / scale)
    f0 = lambda_hermite_form(0, p, means)
    return VerificationReport("lambda_hermite", err, tolerance, {
        "n_max": n_max, "lambda_tilde": f0.lambda_tilde, "d": f0.d, "mu": f0.mu,
        "budget": "analytic derivatives via the Jacobi derivative formula",
    })


def check_lambda_hermite_energy(p: OscillatorParams, means: OrderingMeans, n_max: int = 4,
                                tolerance: float = 1e-12) -> VerificationReport:
    spec = bound_spectrum(p, means, n_max + 1)
    err = 0.0
    for lv in spec.levels:
        E = lambda_hermite_form(lv.n, p, means).energy()
        err = max(err, abs(E - lv.E) / max(1.0, abs(lv.E)))
    return VerificationReport("lambda_hermite_energy", err, tolerance, {"n_max": n_max})


# --- lambda < 0 Gegenbauer profile ------------------------------------------------

def check_gegenbauer_relation(mu: float, n_max: int, span: float = 6.0, sample_count: int = 61,
                              tolerance: float = 1e-8) -> VerificationReport:
    """The Gegenbauer profile against an independent ODE solution of the
    imaginary-argument Legendre equation started at y = 0 with the profile's data.

    The ratio ODE/profile must be constant (= 1); deviations are measured
    relative to max |profile| so nodes of the profile do not blow up the ratio.
    """
    err = 0.0
    for n in range(n_max + 1):
        nu = n - mu
        kappa = -nu * (nu + 1.0)

        def coeffs(y, kappa=kappa):
            r = 1.0 + y * y
            return r, -2.0 * y, -(kappa + mu * mu / r)

        u0 = float(legendre_imag_gegenbauer(n, mu, 0.0))
        # analytic slope at 0: d/dy C_n^a(y/sqrt(1+y^2)) = 2a C_{n-1}^{a+1}(0)
        du0 = 2.0 * (mu - n) * float(gegenbauer_poly(n - 1, mu - n + 1.0, 0.0)) if n else 0.0
        for end in (span, -span):
            sol = ode_solve_second_order(coeffs, 0.0, u0, du0, end, rel_tol=1e-12,
                                         atol=1e-14 * max(abs(u0), abs(du0)))
            y = np.linspace(0.0, end, sample_count)
            prof = legendre_imag_gegenbauer(n, mu, y)
            err = max(err, float(np.max(np.abs(sol(y) - prof)) / np.max(np.abs(prof))))
    slope_err = max(abs(float(legendre_imag_gegenbauer_deriv(n, mu, 0.0))
                        - (2.0 * (mu - n) * float(gegenbauer_poly(n - 1, mu - n + 1.0, 0.0)) if n else 0.0))
                    for n in range(n_max + 1))
    return VerificationReport("gegenbauer_relation", max(err, slope_err), tolerance, {
        "mu": mu, "n_max": n_max, "span": span,
        "magnitude_check": "skipped" if negative_norm_closed_form(0, mu) is None else "separate",
    })


def check_gegenbauer_norm(mu: float, n_max: int, tolerance: float = 1e-6) -> VerificationReport | None:
    """|closed-form squared norm| against scale^2 * quadrature of the real profile.

    Returns None where the closed form is degenerate (integer mu) or a gamma
    factor sits at a pole.
    """
    err = 0.0
    pairs = {}
    for n in range(n_max + 1):
        closed = negative_norm_closed_form(n, mu)
        quad = negative_norm_from_profile(n, mu)
        if closed is None or quad is None:
            return None
        pairs[n] = (closed, quad)
        err = max(err, abs(quad - closed) / closed)
    return VerificationReport("gegenbauer_norm", err, tolerance, {"mu": mu, "n_max": n_max,
                                                                  "closed_vs_quadrature": pairs})


# --- spectrum vs oracle -----------------------------------------------------------

def check_spectrum_vs_oracle(p: OscillatorParams, means: OrderingMeans, m_levels: int = 3,
                             grid: FDGrid | None = None, L: float = 40.0, points: int = 8000,
                             tolerance: float = 1e-3) -> VerificationReport:
    """Closed-form levels against two FD oracles: the Legendre-form oracle and a
    direct discretisation of the ordered Schrodinger equation."""
    spec = bound_spectrum(p, means, m_levels)
    m = len(spec.levels)
    closed = spec.energies
    details = {"levels": m}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TailWarning)
        if p.lam > 0:
            g = grid or legendre_grid()
            lam_vals = fd_oracle_positive(spec.mu, g, m)
            legendre = np.array([energy_from_casimir(v, spec.mu, p, means) for v in lam_vals])
            direct = fd_oracle_schrodinger(p, means, points=g.points, count=m, epsilon=g.epsilon)
            details["grid"] = g.to_dict()
        else:
            # the box oracle needs decayed tails at +-L; otherwise use the tan map
            tail = (1.0 + L * L) ** (0.5 * (np.arange(m) - spec.mu))
            coord = "box" if np.all(tail <= 1e-8) else "angle"
            res = fd_oracle_negative(spec.mu, L, points, m, p, means, coordinate=coord)
            legendre = res.energies
            direct = fd_oracle_schrodinger(p, means, points=points, count=m, L=L, coordinate=coord)
            details.update(L=L, points=points, coordinate=coord, tail=tail.tolist())
    details["tail_warnings"] = len([w for w in caught if issubclass(w.category, TailWarning)])
    # a level can sit at E = 0; hbar*sqrt(k) keeps the relative error finite there
    scale = np.maximum(np.abs(closed), p.hbar * math.sqrt(p.k))
    e1 = np.abs(legendre - closed) / scale
    e2 = np.abs(direct - closed) / scale
    details.update(closed=closed.tolist(), legendre_oracle=legendre.tolist(), direct_oracle=direct.tolist(),
                   legendre_rel_err=float(e1.max()), direct_rel_err=float(e2.max()))
    return VerificationReport("spectrum_vs_oracle", float(max(e1.max(), e2.max())), tolerance, details)


def check_fd_convergence(mu: float, points: int = 500, target: float = 2.0,
                         tolerance: float = 0.3) -> VerificationReport:
    """Observed order of the Legendre oracle from three nested grids (self-convergence)."""
    g0 = legendre_grid(points)
    grids = [g0, g0.refined(), g0.refined().refined()]
    vals = [fd_oracle_positive(mu, g, 1)[0] for g in grids]
    slope = convergence_slope(vals)
    return VerificationReport("fd_convergence", abs(slope - target), tolerance, {
        "mu": mu, "points": [g.points for g in grids], "values": vals, "slope": slope,
    })


# --- structural properties ---------------------------------------------------------

def check_parity(p: OscillatorParams, means: OrderingMeans, n_levels: int = 6,
                 samples: int = 41, tolerance: float = 1e-13) -> VerificationReport:
    if p.lam > 0:
        states = [eigenstate_positive(n, p, means) for n in range(n_levels)]
        x = np.linspace(0.0, 0.999 * p.edge, samples)
    else:
        N = max_bound_index(spectral_params(p, means).mu)
        states = [eigenstate_negative(n, p, means) for n in range(min(n_levels, N + 1))]
        x = np.linspace(0.0, 5.0 / math.sqrt(abs(p.lam)), samples)
    err = 0.0
    for s in states:
        a, b = s(x), s(-x)
        err = max(err, float(np.max(np.abs(b - (-1) ** s.n * a)) / np.max(np.abs(a))))
    return VerificationReport("parity", err, tolerance, {"levels": len(states)})


def _companion_means(m: OrderingMeans, shift: float = 0.3) -> OrderingMeans:
    """Different means with the same (alpha_bar + gamma_bar) and discriminant."""
    s, g = m.mean_sum, m.asymmetry + shift
    ag = (m.discriminant - g * g) / 4.0
    return OrderingMeans(0.5 * (s - g), 0.5 * (s + g), ag)


def check_mean_combination(p: OscillatorParams, means: OrderingMeans, levels: int = 6,
                           tolerance: float = 1e-12) -> VerificationReport:
    others = [OrderingMeans(means.gamma_bar, means.alpha_bar, means.alphagamma_bar), _companion_means(means)]
    ref = bound_spectrum(p, means, levels).energies
    err = 0.0
    for o in others:
        e = bound_spectrum(p, o, levels).energies
        err = max(err, float(np.max(np.abs(e - ref) / np.maximum(1.0, np.abs(ref)))))
    return VerificationReport("mean_combination", err, tolerance, {
        "variants": [[o.alpha_bar, o.gamma_bar, o.alphagamma_bar] for o in others]})


def check_quadrature_exactness(orders=(1, 2, 3, 5, 8, 16, 32, 64, 128, 256),
                               tolerance: float = 1e-13) -> VerificationReport:
    """Order-n rule integrates z^{2n-2} exactly; weights sum to 2."""
    err = 0.0
    for n in orders:
        r = gauss_legendre(n)
        k = 2 * n - 2
        err = max(err, abs(integrate(r, lambda z: z**k, -1.0, 1.0) - 2.0 / (k + 1)))
        err = max(err, abs(float(np.sum(r.weights)) - 2.0))
        err = max(err, float(np.max(np.abs(r.nodes + r.nodes[::-1]))))
    return VerificationReport("quadrature_exactness", err, tolerance, {"orders": list(orders)})


def check_harmonic_limit(p: OscillatorParams, means: OrderingMeans, lam: float = 1e-6, levels: int = 6,
                         tolerance: float = 1e-4) -> VerificationReport:
    q = OscillatorParams(p.k, lam, p.hbar)
    E = bound_spectrum(q, means, levels).energies
    ref = (np.arange(levels) + 0.5) * p.hbar * math.sqrt(p.k)
    return VerificationReport("harmonic_limit", float(np.max(np.abs(E - ref))), tolerance,
                              {"lambda": lam, "levels": levels})


# --- continuum ----------------------------------------------------------------------

def check_continuum_residual(p: OscillatorParams, means: OrderingMeans, rho: float = 0.5,
                             window=(1.05, 5.0), samples: int = 80, tolerance: float = 1e-5) -> VerificationReport:
    """Schrodinger residual of the ODE-built continuum state on x*sqrt(lam) in ``window``."""
    state = eigenstate_continuum(rho, p, means, "Region3", z_max=max(10.0, 2 * window[1]))
    x = np.linspace(*window, samples) / math.sqrt(p.lam)
    r = residual_schrodinger(state, state.E, p, means, x)
    return VerificationReport("continuum_residual", r, tolerance,
                              {"rho": rho, "E": state.E, "window": list(window)})


def check_frobenius_exponent(mu: float, rho: float = 0.5, tolerance: float = 1e-2) -> VerificationReport:
    """Slope of log phi against log(z^2 - 1) just past the integration start."""
    z = 1.0 + np.geomspace(2e-4, 1e-3, 9)
    phi = conical_legendre(rho, mu, z)
    slope = float(np.polyfit(np.log(z * z - 1.0), np.log(np.abs(phi)), 1)[0])
    return VerificationReport("frobenius_exponent", abs(slope - 0.5 * mu), tolerance,
                              {"mu": mu, "rho": rho, "slope": slope})


def check_continuum_window(p: OscillatorParams, means: OrderingMeans, rhos=(0.5, 1.5, 2.5),
                           z_max: float = 1e4, tolerance: float = 0.5) -> VerificationReport:
    """Overlaps of continuum states on the window 1 < z < z_max; off-diagonal entries,
    normalised by the diagonal, must stay below ``tolerance``.  Not part of run_all."""
    states = [eigenstate_continuum(r, p, means, "Region3", z_max=z_max) for r in rhos]
    rule = gauss_legendre(64)
    edges = np.linspace(math.log(1.0 + 1e-6), math.log(z_max), 200)
    t = np.concatenate([0.5 * (a + b) + 0.5 * (b - a) * rule.nodes for a, b in zip(edges[:-1], edges[1:])])
    wq = np.concatenate([0.5 * (b - a) * rule.weights for a, b in zip(edges[:-1], edges[1:])])
    x = np.exp(t) / math.sqrt(p.lam)
    dx = wq * x
    w = weight_function(x, p, means)
    vals = np.array([s(x) for s in states])
    G = np.einsum("k,ik,jk->ij", dx * w, vals, vals)
    d = np.sqrt(np.diag(G))
    C = G / np.outer(d, d)
    off = float(np.max(np.abs(C - np.eye(len(rhos)))))
    return VerificationReport("continuum_window", off, tolerance, {"rhos": list(rhos), "z_max": z_max})


# --- suite ----------------------------------------------------------------------------

def run_all(p: OscillatorParams, means: OrderingMeans, config: VerifyConfig | None = None) -> list[VerificationReport]:
    """Every check applicable to the regime, in a fixed order."""
    c = config or VerifyConfig()
    validity = check_validity(p, means)
    if not validity.passed:
        return [validity]
    if p.lam == 0:
        return [check_harmonic_limit(p, means, c.harmonic_lambda, c.harmonic_levels),
                check_quadrature_exactness()]
    sp = spectral_params(p, means)
    regular = classify_regularity(means) is Regularity.REGULAR
    out = [validity]
    if p.lam > 0:
        if regular:
            out.append(check_orthonormality_positive(p, means, c.n_levels, c.quad_order))
    else:
        out.append(check_orthonormality_negative(p, means))
        N = max_bound_index(sp.mu)
        out.append(check_gegenbauer_relation(sp.mu, N, c.gegenbauer_span))
        norm = check_gegenbauer_norm(sp.mu, N)
        if norm is not None:
            out.append(norm)
    out.append(check_jacobi_relation(c.identity_mus, c.jacobi_n_max, c.jacobi_samples))
    out.append(check_rodrigues(c.identity_mus, c.rodrigues_n_max, c.rodrigues_samples))
    if p.lam > 0:
        out.append(check_lambda_hermite(p, means, c.hermite_n_max))
        out.append(check_lambda_hermite_energy(p, means, c.hermite_n_max))
    grid = legendre_grid(c.oracle_points, c.oracle_epsilon)
    out.append(check_spectrum_vs_oracle(p, means, c.oracle_levels, grid, c.negative_L, c.negative_points))
    out.append(check_nu_reflection(c.reflection_nus, c.reflection_mus,
                                   np.linspace(-0.9, 0.9, c.reflection_samples)))
    if p.lam < 0 or regular:
        out.append(check_parity(p, means, c.n_levels))
    out.append(check_mean_combination(p, means, c.n_levels))
    out.append(check_quadrature_exactness())
    # the angle-coordinate oracle is second order for mu >= 1
    out.append(check_fd_convergence(max(sp.mu, 1.0), c.convergence_points))
    out.append(check_harmonic_limit(p, means, c.harmonic_lambda, c.harmonic_levels))
    if p.lam > 0 and sp.mu > 0:
        out.append(check_continuum_residual(p, means, c.continuum_rho, c.continuum_window))
        out.append(check_frobenius_exponent(sp.mu, c.continuum_rho))
    return out


def all_passed(reports) -> bool:
    return all(r.passed for r in reports)

