"""Closed-form levels for every preset ordering next to the FD oracle.

    python3 scripts/spectrum_table.py --k 1 --lambda 1 --levels 4
"""
import argparse
from dataclasses import dataclass

import numpy as np

from pdmosc import OscillatorParams, bound_spectrum, derived_means, named_scheme
from pdmosc.errors import PDMError
from pdmosc.numerics import fd_oracle_schrodinger
from pdmosc.ordering import SCHEMES


@dataclass
class TableConfig:
    k: float = 1.0
    lam: float = 1.0
    hbar: float = 1.0
    levels: int = 4
    oracle_points: int = 4000


def table(cfg: TableConfig):
    p = OscillatorParams(cfg.k, cfg.lam, cfg.hbar)
    for name in SCHEMES:
        means = derived_means(named_scheme(name))
        try:
            spec = bound_spectrum(p, means, cfg.levels)
        except PDMError as exc:
            print(f"{name:24s} {exc}")
            continue
        m = len(spec.levels)
        kw = {"coordinate": "angle"} if p.lam < 0 else {}
        direct = fd_oracle_schrodinger(p, means, points=cfg.oracle_points, count=m, **kw) if p.lam else None
        print(f"{name:24s} mu={spec.mu if spec.mu is not None else float('nan'):.6f}")
        for i, lv in enumerate(spec.levels):
            line = f"    n={lv.n:2d}  E={lv.E:.10f}"
            if direct is not None:
                line += f"  oracle={direct[i]:.8f}  rel={abs(direct[i] - lv.E) / max(abs(lv.E), 1e-12):.1e}"
            print(line)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=float, default=1.0)
    ap.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ap.add_argument("--hbar", type=float, default=1.0)
    ap.add_argument("--levels", type=int, default=4)
    ap.add_argument("--oracle-points", type=int, default=4000)
    a = ap.parse_args()
    np.set_printoptions(precision=10)
    table(TableConfig(a.k, a.lam, a.hbar, a.levels, a.oracle_points))


if __name__ == "__main__":
    main()
