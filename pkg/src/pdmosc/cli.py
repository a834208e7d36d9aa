"""Command-line front end: ``pdmosc {orderings,spectrum,wavefunction,potential,verify,oracle}``.

Payload goes to stdout (or ``--output``) in one write; diagnostics go to
stderr.  Exit codes: 0 success, 2 domain error or failed verification,
3 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import PDMError, WrongRegime
from .numerics import (
    FDGrid,
    convergence_slope,
    fd_oracle_negative,
    fd_oracle_positive,
    legendre_grid,
)
from .ordering import (
    SCHEMES,
    Ordering,
    classify_hermiticity,
    derived_means,
    load_ordering,
    named_scheme,
)
from .oscillator import (
    OscillatorParams,
    effective_potential,
    energy_from_casimir,
    mass,
    potential,
    spectral_params,
)
from .spectra import (
    bound_spectrum,
    eigenstate,
    eigenstate_continuum,
)
from .verify import VerifyConfig, all_passed, run_all

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 2, 3
CLAMP = 1e-9
SUBCOMMANDS = ("orderings", "spectrum", "wavefunction", "potential", "verify", "oracle")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class Command:
    subcommand: str
    params: OscillatorParams | None = None
    ordering: Ordering | None = None
    fmt: str = "json"
    output: str | None = None
    options: dict = field(default_factory=dict)


# --- argument grammar ---------------------------------------------------------------

def _finite(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {s!r}")
    return v


def _positive(s: str) -> float:
    v = _finite(s)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {s!r}")
    return v


def _count(minimum: int):
    def parse(s: str) -> int:
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}: {s!r}")
        return v
    return parse


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
    common.add_argument("--output", metavar="PATH", help="write the payload here instead of stdout")

    physics = _Parser(add_help=False)
    src = physics.add_mutually_exclusive_group(required=True)
    src.add_argument("--ordering", metavar="NAME", help=f"preset: {', '.join(SCHEMES)}")
    src.add_argument("--ordering-file", metavar="PATH", help="ordering JSON ({name, terms:[{w,alpha,beta,gamma}]})")
    physics.add_argument("--k", type=_positive, default=1.0, help="spring constant (default 1)")
    physics.add_argument("--lambda", dest="lam", type=_finite, default=1.0, help="nonlinearity (default 1)")
    physics.add_argument("--hbar", type=_positive, default=1.0, help="(default 1)")

    xrange_ = _Parser(add_help=False)
    xrange_.add_argument("--xmin", type=_finite, default=-0.99)
    xrange_.add_argument("--xmax", type=_finite, default=0.99)
    xrange_.add_argument("--samples", type=_count(2), default=201)

    parser = _Parser(prog="pdmosc", description="Mathews-Lakshmanan oscillator with general kinetic ordering.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("orderings", parents=[common], help="preset catalog with derived means")
    p.add_argument("--scheme", metavar="NAME", help="emit a single preset (re-ingestible via --ordering-file)")

    p = sub.add_parser("spectrum", parents=[common, physics], help="closed-form bound spectrum")
    p.add_argument("--levels", type=_count(1), default=6, help="number of levels (lambda >= 0; capped at N+1 for lambda < 0)")

    p = sub.add_parser("wavefunction", parents=[common, physics, xrange_], help="sampled eigenfunction rows x,psi")
    p.add_argument("--n", type=_count(0), default=0, help="bound level index")
    p.add_argument("--rho", type=_finite, default=None, help="sample the continuum state with this rho instead")
    p.add_argument("--branch", choices=("Region1", "Region3"), default="Region3")

    sub.add_parser("potential", parents=[common, physics, xrange_], help="rows x,V,V_eff,m")

    p = sub.add_parser("verify", parents=[common, physics], help="run the property suite (exit 2 on any failure)")
    p.add_argument("--oracle-points", type=_count(16), default=VerifyConfig.oracle_points)
    p.add_argument("--levels", type=_count(1), default=VerifyConfig.n_levels)

    p = sub.add_parser("oracle", parents=[common, physics], help="finite-difference oracle report")
    p.add_argument("--levels", type=_count(1), default=3)
    p.add_argument("--grid-points", type=_count(16), default=None,
                   help="interior points (default 4000 for lambda > 0, 8000 for lambda < 0)")
    p.add_argument("--epsilon", type=_positive, default=1e-6, help="endpoint offset (lambda > 0)")
    p.add_argument("--L", dest="box", type=_positive, default=40.0, help="half-width in y (lambda < 0, box)")
    p.add_argument("--coordinate", choices=("angle", "z", "box"), default=None,
                   help="lambda > 0: angle|z (default angle); lambda < 0: box|angle (default box)")
    return parser


def parse(argv) -> Command:
    parser = build_parser()
    ns = parser.parse_args(argv)
    opts = {k: v for k, v in vars(ns).items()
            if k not in ("subcommand", "fmt", "output", "ordering", "ordering_file", "k", "lam", "hbar")}
    cmd = Command(ns.subcommand, fmt=ns.fmt, output=ns.output, options=opts)
    if ns.subcommand in ("wavefunction", "potential") and not ns.xmin < ns.xmax:
        parser.error("--xmin must be smaller than --xmax")
    if ns.subcommand == "orderings":
        if ns.scheme is not None:
            cmd.ordering = _resolve(parser, lambda: named_scheme(ns.scheme))
        return cmd
    if ns.ordering is not None:
        cmd.ordering = _resolve(parser, lambda: named_scheme(ns.ordering))
    else:
        cmd.options["ordering_file"] = ns.ordering_file
        if not os.path.isfile(ns.ordering_file):
            parser.error(f"ordering file not found: {ns.ordering_file}")
        try:
            with open(ns.ordering_file) as fh:
                json.load(fh)
        except json.JSONDecodeError as exc:
            parser.error(f"ordering file is not valid JSON: {exc}")
    cmd.params = OscillatorParams(ns.k, ns.lam, ns.hbar)
    return cmd


def _resolve(parser, fn):
    try:
        return fn()
    except PDMError as exc:
        parser.error(str(exc))


# --- emitters -------------------------------------------------------------------------

def _num(v):
    """JSON-safe scalar: floats keep full repr precision, non-finite become strings."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    return v


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    return _num(obj)


def _dump_json(payload) -> str:
    return json.dumps(_clean(payload), indent=2) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _emit(text: str, output: str | None):
    """Write the whole payload at once; files go through a rename."""
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    d = os.path.dirname(os.path.abspath(output))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".pdmosc-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- subcommands ------------------------------------------------------------------------

def _catalog_entry(o: Ordering) -> dict:
    m = derived_means(o)
    d = o.to_dict()
    d["means"] = {"alpha_bar": m.alpha_bar, "gamma_bar": m.gamma_bar, "alphagamma_bar": m.alphagamma_bar}
    d["hermiticity"] = classify_hermiticity(m).value
    return d


def _run_orderings(cmd: Command) -> tuple[str, int]:
    entries = [_catalog_entry(cmd.ordering)] if cmd.ordering else [_catalog_entry(named_scheme(n)) for n in SCHEMES]
    if cmd.fmt == "json":
        return _dump_json(entries[0] if cmd.ordering else entries), EXIT_OK
    rows = []
    for e in entries:
        for i, t in enumerate(e["terms"]):
            m = e["means"]
            rows.append([e["name"], i, t["w"], t["alpha"], t["beta"], t["gamma"],
                         m["alpha_bar"], m["gamma_bar"], m["alphagamma_bar"], e["hermiticity"]])
    header = ["name", "term", "w", "alpha", "beta", "gamma", "alpha_bar", "gamma_bar", "alphagamma_bar", "hermiticity"]
    return _dump_csv(header, rows), EXIT_OK


def _run_spectrum(cmd: Command, means) -> tuple[str, int]:
    spec = bound_spectrum(cmd.params, means, cmd.options["levels"])
    if cmd.fmt == "json":
        return _dump_json(spec.to_dict()), EXIT_OK
    return _dump_csv(["n", "nu", "E"], [[lv.n, lv.nu, lv.E] for lv in spec.levels]), EXIT_OK


def _clamp(x: np.ndarray, p: OscillatorParams, inward: bool):
    """Push samples within CLAMP/sqrt(lam) of +-1/sqrt(lam) off the singular points."""
    if p.lam <= 0:
        return x, []
    edge = p.edge
    delta = CLAMP * edge
    out = x.copy()
    clamped = []
    for i, xi in enumerate(x):
        for s in (-1.0, 1.0):
            if abs(xi - s * edge) < delta:
                inside = edge - delta if inward else edge + delta
                out[i] = s * inside
                clamped.append({"index": i, "requested": float(xi), "used": float(out[i])})
    return out, clamped


def _run_wavefunction(cmd: Command, means) -> tuple[str, int]:
    o, p = cmd.options, cmd.params
    x = np.linspace(o["xmin"], o["xmax"], o["samples"])
    meta = {"params": p.to_dict(), "ordering": cmd.ordering.name}
    if o["rho"] is not None:
        if p.lam <= 0:
            raise WrongRegime("continuum states need lambda > 0")
        x, clamped = _clamp(x, p, inward=False)
        z_max = max(10.0, 1.01 * float(np.max(np.abs(x))) * math.sqrt(p.lam))
        st = eigenstate_continuum(o["rho"], p, means, o["branch"], z_max=z_max)
        psi = st(x)
        meta.update(kind="continuum", rho=o["rho"], branch=o["branch"], E=st.E, normalised=False)
    else:
        x, clamped = _clamp(x, p, inward=True)
        st = eigenstate(o["n"], p, means)
        psi = st(x)
        meta.update(kind="bound", n=o["n"], E=st.E, normalization=st.normalization)
    meta["clamped"] = clamped
    if clamped:
        print(f"pdmosc: clamped {len(clamped)} sample(s) off the singular points", file=sys.stderr)
    if cmd.fmt == "json":
        rows = [{"x": a, "psi": b} for a, b in zip(x.tolist(), np.asarray(psi).tolist())]
        return _dump_json({"metadata": meta, "rows": rows}), EXIT_OK
    return _dump_csv(["x", "psi"], zip(x.tolist(), np.asarray(psi).tolist())), EXIT_OK


def _run_potential(cmd: Command, means) -> tuple[str, int]:
    o, p = cmd.options, cmd.params
    x = np.linspace(o["xmin"], o["xmax"], o["samples"])
    x, clamped = _clamp(x, p, inward=True)
    cols = [x, potential(x, p), effective_potential(x, p, means), mass(x, p)]
    rows = list(zip(*(np.asarray(c).tolist() for c in cols)))
    if clamped:
        print(f"pdmosc: clamped {len(clamped)} sample(s) off the singular points", file=sys.stderr)
    if cmd.fmt == "json":
        payload = {"metadata": {"params": p.to_dict(), "ordering": cmd.ordering.name, "clamped": clamped},
                   "rows": [dict(zip(("x", "V", "V_eff", "m"), r)) for r in rows]}
        return _dump_json(payload), EXIT_OK
    return _dump_csv(["x", "V", "V_eff", "m"], rows), EXIT_OK


def _run_verify(cmd: Command, means) -> tuple[str, int]:
    cfg = VerifyConfig(oracle_points=cmd.options["oracle_points"], n_levels=cmd.options["levels"])
    reports = run_all(cmd.params, means, cfg)
    code = EXIT_OK if all_passed(reports) else EXIT_DOMAIN
    for r in reports:
        if not r.passed:
            print(f"pdmosc: check {r.check_name} failed: max_error {r.max_error:.3e} > {r.tolerance:.1e}",
                  file=sys.stderr)
    if cmd.fmt == "json":
        return _dump_json([r.to_dict() for r in reports]), code
    rows = [[r.check_name, r.max_error, r.tolerance, r.passed] for r in reports]
    return _dump_csv(["check_name", "max_error", "tolerance", "passed"], rows), code


def _run_oracle(cmd: Command, means) -> tuple[str, int]:
    o, p = cmd.options, cmd.params
    sp = spectral_params(p, means)
    m = o["levels"]
    if p.lam > 0:
        coord = o["coordinate"] or "angle"
        if coord == "box":
            raise WrongRegime("coordinate 'box' applies to lambda < 0")
        g = legendre_grid(o["grid_points"] or 4000, o["epsilon"], coord)
        grids = [g, g.refined(), g.refined().refined()]
        runs = [fd_oracle_positive(sp.mu, gg, m, coord) for gg in grids]
        values = runs[0]
        energies = [energy_from_casimir(v, sp.mu, p, means) for v in values]
        payload = {"grid": g.to_dict(), "epsilon": g.epsilon, "coordinate": coord, "quantity": "nu(nu+1)"}
        extra = {}
    elif p.lam < 0:
        coord = o["coordinate"] or "box"
        if coord == "z":
            raise WrongRegime("coordinate 'z' applies to lambda > 0")
        pts = o["grid_points"] or 8000
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            runs_full = [fd_oracle_negative(sp.mu, o["box"], q, m, p, means, coordinate=coord)
                         for q in (pts, 2 * pts + 1, 4 * pts + 3)]
        for w in caught[:1]:
            print(f"pdmosc: warning: {w.message}", file=sys.stderr)
        runs = [r.casimir for r in runs_full]
        values = runs[0]
        energies = runs_full[0].energies
        if coord == "box":
            g = FDGrid(-o["box"], o["box"], pts)
        else:
            g = FDGrid(-0.5 * math.pi, 0.5 * math.pi, pts, 1e-9)
        payload = {"grid": g.to_dict(), "epsilon": g.epsilon, "coordinate": coord, "quantity": "-nu(nu+1)"}
        extra = {"bound": runs_full[0].bound.tolist(), "n_max": runs_full[0].n_max,
                 "tail": runs_full[0].tail.tolist()}
    else:
        raise WrongRegime("the oracle needs lambda != 0")
    slopes = [convergence_slope([r[i] for r in runs]) for i in range(len(values))]
    payload.update(values=list(values), convergence_slope=slopes[0], convergence_slopes=slopes,
                   energies=list(energies), mu=sp.mu, **extra)
    if cmd.fmt == "json":
        return _dump_json(payload), EXIT_OK
    rows = [[i, values[i], energies[i], slopes[i]] for i in range(len(values))]
    return _dump_csv(["n", "value", "E", "convergence_slope"], rows), EXIT_OK


def run(cmd: Command) -> int:
    if cmd.subcommand == "orderings":
        text, code = _run_orderings(cmd)
    else:
        if cmd.ordering is None:
            cmd.ordering = load_ordering(cmd.options["ordering_file"])
        means = derived_means(cmd.ordering)
        handler = {
            "spectrum": _run_spectrum,
            "wavefunction": _run_wavefunction,
            "potential": _run_potential,
            "verify": _run_verify,
            "oracle": _run_oracle,
        }[cmd.subcommand]
        text, code = handler(cmd, means)
    _emit(text, cmd.output)
    return code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cmd = parse(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return run(cmd)
    except PDMError as exc:
        print(f"pdmosc: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"pdmosc: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
