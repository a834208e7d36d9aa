"""Convergence of the Legendre-form FD oracle: the angle coordinate against the
epsilon-offset z coordinate, for a few orders mu.

    python3 scripts/fd_convergence.py --mus 0.5 1 2.5 --points 250 500 1000 2000 4000
"""
import argparse
import math
from dataclasses import dataclass, field

import numpy as np

from pdmosc.numerics import fd_oracle_positive, legendre_grid


@dataclass
class ConvergenceConfig:
    mus: list = field(default_factory=lambda: [0.5, 1.0, math.sqrt(5) / 2, 2.5])
    points: list = field(default_factory=lambda: [250, 500, 1000, 2000, 4000])
    epsilon: float = 1e-6


def study(cfg: ConvergenceConfig):
    for mu in cfg.mus:
        exact = mu * (mu + 1)
        print(f"mu = {mu:.6f}   exact nu(nu+1) = {exact:.10f}")
        print(f"    {'points':>7s} {'angle err':>12s} {'z err':>12s}")
        errs = {"angle": [], "z": []}
        for n in cfg.points:
            for coord in errs:
                v = fd_oracle_positive(mu, legendre_grid(n, cfg.epsilon, coord), 1, coord)[0]
                errs[coord].append(abs(v - exact))
            print(f"    {n:7d} {errs['angle'][-1]:12.3e} {errs['z'][-1]:12.3e}")
        h = 1.0 / np.asarray(cfg.points, dtype=float)
        for coord, e in errs.items():
            order = np.polyfit(np.log(h), np.log(e), 1)[0]
            print(f"    observed order ({coord}): {order:.2f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mus", type=float, nargs="+")
    ap.add_argument("--points", type=int, nargs="+")
    ap.add_argument("--epsilon", type=float, default=1e-6)
    a = ap.parse_args()
    cfg = ConvergenceConfig(epsilon=a.epsilon)
    if a.mus:
        cfg.mus = a.mus
    if a.points:
        cfg.points = a.points
    study(cfg)


if __name__ == "__main__":
    main()
