"""Real and p-adic nonsingular-solution evidence for the order-N magic system
with exponents 1..K, seeded by a diagonal Latin square."""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from multimagic.counting import DiagonalSystem
from multimagic.magicsys import MagicSystem, latin_witness, magic_matrix
from multimagic.solubility import solubility_report


@dataclass
class Config:
    order: int = 13
    degree: int = 2
    prime_bound: int = 20
    attempts: int = 1000
    seed: int = 0


def run(cfg: Config) -> dict:
    ms = MagicSystem.multimagic(cfg.order, cfg.degree)
    sys_ = DiagonalSystem(magic_matrix(ms), ms.exponents)
    seeds = []
    w = latin_witness(ms, [v * v + 1 for v in range(cfg.order)])
    if w is not None:
        seeds.append(w)
    t = time.perf_counter()
    rep = solubility_report(sys_, cfg.prime_bound, seed=cfg.seed, attempts=cfg.attempts, seeds=seeds)
    out = rep.to_json_dict()
    out["config"] = asdict(cfg)
    out["seconds"] = round(time.perf_counter() - t, 2)
    return out


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, val in asdict(Config()).items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=int, default=val)
    print(json.dumps(run(Config(**vars(p.parse_args()))), indent=1))
