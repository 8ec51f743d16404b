"""Exhaustive (N=4) or sampled (N>=5) check of the magic-matrix rank bound
and of domination of F(2N, N^2, .).

    python3 scripts/rank_condition.py --order 4
    python3 scripts/rank_condition.py --order 5 --samples 100000 --threads 4
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from multimagic.domination import ThresholdFunction, check_rank_condition, dominates, piecewise_equivalence
from multimagic.exactlinalg import ScanConfig
from multimagic.magicsys import MagicSystem, magic_matrix


@dataclass
class Config:
    order: int = 4
    budget: int = 2**20
    samples: int = 100_000
    seed: int = 0
    threads: int = 1


def run(cfg: Config) -> dict:
    scan = ScanConfig(budget=cfg.budget, samples=cfg.samples, seed=cfg.seed, threads=cfg.threads)
    N = cfg.order
    out = {"config": asdict(cfg), "piecewise_equivalence": piecewise_equivalence(N)}
    t = time.perf_counter()
    out["rank_condition"] = check_rank_condition(N, scan).to_json_dict()
    out["rank_condition_seconds"] = round(time.perf_counter() - t, 2)
    t = time.perf_counter()
    C = magic_matrix(MagicSystem(N))
    out["dominates_F"] = dominates(C, ThresholdFunction.F(2 * N, N * N), scan).to_json_dict()
    out["dominates_seconds"] = round(time.perf_counter() - t, 2)
    return out


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, val in asdict(Config()).items():
        p.add_argument("--" + name, type=int, default=val)
    print(json.dumps(run(Config(**vars(p.parse_args()))), indent=1))
