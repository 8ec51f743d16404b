"""Exhaustive small-square searches and kernel cross-checks for N=3."""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from multimagic.counting import DiagonalSystem, count_solutions
from multimagic.magicsys import MagicSystem, magic_matrix
from multimagic.squares import brute_force_squares, verify_square


@dataclass
class Config:
    max_entry: int = 10
    height: int = 3


def run(cfg: Config) -> dict:
    ms = MagicSystem(3)
    C = magic_matrix(ms)
    out = {"config": asdict(cfg)}
    for K in (1, 2):
        t = time.perf_counter()
        found = brute_force_squares(3, K, range(1, cfg.max_entry + 1), require_distinct=True)
        assert all(verify_square(Z, K).magic and not any(C.matvec(ms.flatten(Z))) for Z in found)
        out[f"distinct_K{K}"] = {
            "count": len(found),
            "seconds": round(time.perf_counter() - t, 3),
            "first": [list(r) for r in found[0].entries] if found else None,
        }
    # all magic squares (repeats allowed) with entries in [-P, P], counted in the kernel
    rep = count_solutions(DiagonalSystem(C, (1,)), cfg.height)
    out["kernel_count"] = {"P": cfg.height, "total": str(rep.total)}
    return out


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-entry", dest="max_entry", type=int, default=10)
    p.add_argument("--height", type=int, default=3)
    print(json.dumps(run(Config(**vars(p.parse_args()))), indent=1))
