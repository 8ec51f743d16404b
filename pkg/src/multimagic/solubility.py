"""Evidence for nonsingular real and p-adic solutions of diagonal systems.

The stacked system has R = r|E| equations  F_{k,i}(x) = sum_j c_ij x_j^k
with Jacobian entries k c_ij x_j^(k-1).  A p-adic witness is an integer
vector x, not divisible by p, together with a maximal minor of J(x) of
p-adic valuation d such that v_p(F(x)) > 2d; Newton's lemma then lifts x to
a nonsingular root in Z_p.  With d = 0 this is the familiar "solution mod p
with Jacobian of full rank mod p"; primes dividing some k in E need a
higher modulus because the corresponding Jacobian rows vanish mod p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import sympy
from scipy.optimize import least_squares

from .counting import DiagonalSystem
from .errors import DomainError
from .exactlinalg import rank_of_vectors

EXHAUSTIVE_LIMIT = 10**6


def jacobian(sys: DiagonalSystem, x: Sequence[int]) -> list[list[int]]:
    rows = []
    for k in sys.exponents:
        for i in range(sys.r):
            row = sys.C.row(i)
            rows.append([k * c * v ** (k - 1) for c, v in zip(row, x)])
    return rows


def _vp(n: int, p: int) -> float:
    if n == 0:
        return float("inf")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _vp_fraction(q: Fraction, p: int) -> float:
    return _vp(q.numerator, p) - _vp(q.denominator, p)


def minor_valuation(J: Sequence[Sequence[int]], p: int) -> tuple[int, float]:
    """(rank, least p-adic valuation of a maximal minor) by full pivoting.

    Pivoting on an entry of least valuation keeps every entry p-integral, so
    the pivot valuations add up to the valuation of the best minor.
    """
    a = [[Fraction(v) for v in row] for row in J]
    nr = len(a)
    nc = len(a[0]) if a else 0
    live_rows = list(range(nr))
    live_cols = list(range(nc))
    total = 0
    rk = 0
    while live_rows and live_cols:
        best = None
        for i in live_rows:
            for j in live_cols:
                if a[i][j]:
                    v = _vp_fraction(a[i][j], p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        v, pi, pj = best
        total += v
        rk += 1
        piv = a[pi][pj]
        for i in live_rows:
            if i != pi and a[i][pj]:
                f = a[i][pj] / piv
                for j in live_cols:
                    a[i][j] -= f * a[pi][j]
        live_rows.remove(pi)
        live_cols.remove(pj)
    return rk, (total if rk == nr else float("inf"))


@dataclass
class PadicWitness:
    p: int
    vector: tuple[int, ...]
    residual_valuation: float  # inf for an exact integer solution
    minor_valuation: int
    jacobian_rank: int

    @property
    def modulus(self) -> int:
        return self.p ** (2 * self.minor_valuation + 1)

    def to_json_dict(self) -> dict:
        rv = self.residual_valuation
        return {
            "p": self.p,
            "vector": [str(v) for v in self.vector],
            "residual_valuation": None if rv == float("inf") else int(rv),
            "minor_valuation": self.minor_valuation,
            "jacobian_rank": self.jacobian_rank,
            "modulus": str(self.modulus),
        }


def certify_padic(sys: DiagonalSystem, x: Sequence[int], p: int) -> PadicWitness | None:
    """Return a witness if x satisfies the lifting criterion at p."""
    x = tuple(int(v) for v in x)
    if all(v % p == 0 for v in x):
        return None
    F = sys.residual(x)
    vf = min((_vp(v, p) for v in F), default=float("inf"))
    if vf < 1:
        return None
    R = sys.r * len(sys.exponents)
    rk, d = minor_valuation(jacobian(sys, x), p)
    if rk < R or not vf > 2 * d:
        return None
    return PadicWitness(p, x, vf, int(d), rk)


def padic_nonsingular_solution(
    sys: DiagonalSystem,
    p: int,
    attempts: int = 100_000,
    seed: int = 0,
    seeds: Iterable[Sequence[int]] = (),
    extra_levels: int = 1,
) -> PadicWitness | None:
    """Search for a liftable solution at p.

    Candidates are the given ``seeds`` first, then vectors mod p^m for
    m = 2 d0 + 1, 2 d0 + 3, ..., where d0 = r * sum_k v_p(k) is the valuation
    every maximal minor carries.  A level is scanned exhaustively when
    p^(m s) <= 10^6, otherwise ``attempts`` random vectors are tried.
    """
    if not sympy.isprime(p):
        raise DomainError(f"{p} is not prime")
    for x in seeds:
        w = certify_padic(sys, x, p)
        if w is not None:
            return w
    d0 = sys.r * sum(_vp(k, p) for k in sys.exponents)
    rng = np.random.default_rng([seed, p])
    for level in range(2 * d0 + 1, 2 * d0 + 2 + 2 * extra_levels, 2):
        q = p**level
        if q**sys.s <= EXHAUSTIVE_LIMIT:
            candidates = itertools.product(range(q), repeat=sys.s)
        else:
            candidates = (tuple(int(v) for v in rng.integers(0, q, sys.s)) for _ in range(attempts))
        for x in candidates:
            if all(v % p == 0 for v in x):
                continue
            if any(v % q for v in sys.residual(x)):
                continue
            w = certify_padic(sys, x, p)
            if w is not None:
                return w
    return None


@dataclass
class RealWitness:
    vector: tuple  # ints when exact, floats otherwise
    exact: bool
    residual: float
    min_singular_value: float
    jacobian_rank: int

    def to_json_dict(self) -> dict:
        return {
            "vector": [str(v) for v in self.vector],
            "exact": self.exact,
            "residual": self.residual,
            "min_singular_value": self.min_singular_value,
            "jacobian_rank": self.jacobian_rank,
        }


def _small_integer_candidates(s: int, height: int) -> Iterable[tuple[int, ...]]:
    vals = [0]
    for h in range(1, height + 1):
        vals += [h, -h]
    for x in itertools.product(vals, repeat=s):
        if any(x):
            yield x


def real_nonsingular_solution(
    sys: DiagonalSystem,
    attempts: int = 50,
    seed: int = 0,
    tol: float = 1e-9,
    sv_tol: float = 1e-6,
    height: int = 2,
    seeds: Iterable[Sequence[int]] = (),
) -> RealWitness | None:
    """Find a real point with F = 0 and full-rank Jacobian.

    Small integer vectors (and ``seeds``) are tried first and certified
    exactly.  Otherwise trust-region least squares runs from random starts.
    The equations are homogeneous, so residual and Jacobian are measured at
    x/|x| to keep the origin from looking like a solution.  A
    floating-point witness is evidence, not proof.
    """
    R = sys.r * len(sys.exponents)
    cand = list(seeds)
    if (2 * height + 1) ** sys.s <= 200_000:
        cand = itertools.chain(cand, _small_integer_candidates(sys.s, height))
    for x in cand:
        x = tuple(int(v) for v in x)
        if any(x) and sys.is_solution(x):
            rk = rank_of_vectors(jacobian(sys, x))
            if rk == R:
                sv = _min_sv(sys, np.array(x, dtype=float) / np.linalg.norm(x))
                return RealWitness(x, True, 0.0, sv, rk)

    C = np.array(sys.C.to_rows(), dtype=float)
    ks = np.array(sys.exponents, dtype=float)

    def F(u):
        return np.concatenate([C @ u**k for k in ks])

    def G(y):
        return F(y / np.linalg.norm(y))

    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        y0 = rng.standard_normal(sys.s)
        sol = least_squares(G, y0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        u = sol.x / np.linalg.norm(sol.x)
        res = float(np.max(np.abs(F(u))))
        if res >= tol:
            continue
        sv = _min_sv(sys, u)
        if sv >= sv_tol:
            return RealWitness(tuple(float(v) for v in u), False, res, sv, R)
    return None


def _min_sv(sys: DiagonalSystem, u: np.ndarray) -> float:
    C = np.array(sys.C.to_rows(), dtype=float)
    J = np.vstack([k * C * u ** (k - 1) for k in sys.exponents])
    sv = np.linalg.svd(J, compute_uv=False)
    R = J.shape[0]
    return float(sv[R - 1]) if len(sv) >= R else 0.0


@dataclass
class SolubilityReport:
    real_witness: RealWitness | None
    padic_witnesses: dict[int, PadicWitness | None]
    verdict: str

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "real_witness": self.real_witness.to_json_dict() if self.real_witness else None,
            "padic_witnesses": {
                str(p): (w.to_json_dict() if w else None) for p, w in self.padic_witnesses.items()
            },
        }


def solubility_report(
    sys: DiagonalSystem,
    prime_bound: int,
    seed: int = 0,
    attempts: int = 100_000,
    seeds: Iterable[Sequence[int]] = (),
) -> SolubilityReport:
    """Real search plus a p-adic search for every prime <= prime_bound.

    An exact integer real witness is offered to every p-adic search as its
    first candidate."""
    if prime_bound < 2:
        raise DomainError("prime bound must be at least 2")
    seeds = [tuple(int(v) for v in x) for x in seeds]
    real = real_nonsingular_solution(sys, seed=seed, seeds=seeds)
    if real is not None and real.exact:
        seeds = [real.vector] + seeds
    padic = {
        p: padic_nonsingular_solution(sys, p, attempts=attempts, seed=seed, seeds=seeds)
        for p in sympy.primerange(2, prime_bound + 1)
    }
    ok = real is not None and all(w is not None for w in padic.values())
    return SolubilityReport(real, padic, "evidence-positive" if ok else "inconclusive")
