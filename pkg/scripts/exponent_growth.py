"""Fit log-count slopes for a few small diagonal systems and compare with
the predicted exponent (s - r K(K+1)/2, or s - r k for a single power k).
Single-power quadratic systems carry an extra log factor at this scale."""

import argparse
import json
from dataclasses import dataclass, field

from multimagic.counting import DiagonalSystem, Filter, expected_exponent, exponent_fit
from multimagic.exactlinalg import IntMatrix


@dataclass
class Config:
    heights: list = field(default_factory=lambda: [25, 50, 100, 200])
    filter: str = "none"


SYSTEMS = {
    "x1+x2=x3+x4": ([[1, 1, -1, -1]], (1,)),
    "x1+x2+x3=x4+x5+x6": ([[1, 1, 1, -1, -1, -1]], (1,)),
    "x1-x2=0": ([[1, -1]], (1,)),
    "two rows, s=4": ([[1, 1, -1, -1], [1, -1, 1, -1]], (1,)),
    "x1^2+x2^2=x3^2+x4^2": ([[1, 1, -1, -1]], (2,)),
}


def _predicted(sys_):
    E = sys_.exponents
    if E == tuple(range(1, len(E) + 1)):
        return expected_exponent(sys_.r, sys_.s, K=len(E))
    if len(E) == 1:
        return expected_exponent(sys_.r, sys_.s, k=E[0])
    return None


def run(cfg: Config) -> list[dict]:
    rows = []
    flt = Filter.parse(cfg.filter)
    for name, (C, E) in SYSTEMS.items():
        sys_ = DiagonalSystem(IntMatrix.from_rows(C), E)
        fit = exponent_fit(sys_, cfg.heights, flt)
        rows.append(
            {
                "system": name,
                "predicted": str(_predicted(sys_)),
                "slope": None if fit.slope is None else round(fit.slope, 4),
                "rms": fit.residual,
                "counts": {str(P): str(c) for P, c in fit.counts.items()},
            }
        )
    return rows


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--heights", type=lambda t: [int(v) for v in t.split(",")], default=Config().heights)
    p.add_argument("--filter", default="none")
    print(json.dumps(run(Config(**vars(p.parse_args()))), indent=1))
