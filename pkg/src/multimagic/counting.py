"""Counting solutions of diagonal systems  sum_j c_ij x_j^k = 0  (k in E).

``enumerate_solutions`` is the brute-force route; ``count_solutions`` joins
two halves of the variables on their partial power-sum vectors.  Pairwise
distinct solutions are counted by Moebius inversion over set partitions of
the variables: fixing x constant on the blocks of a partition is the same as
solving the system whose columns are the block sums (the column merge).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np
import sympy

from .errors import BudgetExceeded, DomainError, InvalidIndexError
from .exactlinalg import IntMatrix
from .magicsys import merge_blocks, merge_columns


@dataclass(frozen=True)
class DiagonalSystem:
    C: IntMatrix
    exponents: tuple[int, ...] = (1,)

    def __post_init__(self):
        exps = tuple(sorted(set(int(k) for k in self.exponents)))
        if not exps:
            raise DomainError("exponent set must be nonempty")
        if exps[0] < 1:
            raise DomainError("exponents must be positive")
        object.__setattr__(self, "exponents", exps)

    @property
    def r(self) -> int:
        return self.C.rows

    @property
    def s(self) -> int:
        return self.C.cols

    def residual(self, x: Sequence[int]) -> tuple[int, ...]:
        """C x^k for each k in E, concatenated."""
        out = []
        for k in self.exponents:
            out.extend(self.C.matvec([v**k for v in x]))
        return tuple(out)

    def is_solution(self, x: Sequence[int]) -> bool:
        return not any(self.residual(x))

    def merged(self, i: int, j: int) -> DiagonalSystem:
        return DiagonalSystem(merge_columns(self.C, i, j), self.exponents)


# -- entry filters -------------------------------------------------------------


def is_smooth(n: int, Q: int) -> bool:
    """Every prime factor of |n| is at most Q.  0 is never smooth: every
    prime divides it."""
    n = abs(n)
    if n == 0:
        return False
    for p in sympy.primerange(2, Q + 1):
        while n % p == 0:
            n //= p
        if n == 1:
            return True
    return n == 1


def smooth_filter(x: Sequence[int], Q: int) -> bool:
    if Q < 2:
        raise DomainError(f"smoothness bound must be at least 2, got {Q}")
    return all(is_smooth(v, Q) for v in x)


@dataclass(frozen=True)
class Filter:
    """distinct: pairwise distinct entries.  smooth: every |x_i| is Q-smooth.
    prime: every |x_i| is prime (so negative entries are -p)."""

    distinct: bool = False
    smooth: int | None = None
    prime: bool = False

    def __post_init__(self):
        if self.smooth is not None and self.smooth < 2:
            raise DomainError(f"smoothness bound must be at least 2, got {self.smooth}")

    @classmethod
    def parse(cls, text: str | None) -> Filter:
        """'none', 'distinct', 'smooth:Q', 'prime', or several joined by '+'."""
        if text is None or text.strip() in ("", "none"):
            return cls()
        kw: dict = {}
        for part in text.split("+"):
            part = part.strip()
            if part == "distinct":
                kw["distinct"] = True
            elif part == "prime":
                kw["prime"] = True
            elif part.startswith("smooth:"):
                try:
                    kw["smooth"] = int(part.split(":", 1)[1])
                except ValueError:
                    raise DomainError(f"bad smoothness bound in {part!r}") from None
            else:
                raise DomainError(f"unknown filter {part!r}")
        return cls(**kw)

    def __str__(self) -> str:
        parts = []
        if self.distinct:
            parts.append("distinct")
        if self.smooth is not None:
            parts.append(f"smooth:{self.smooth}")
        if self.prime:
            parts.append("prime")
        return "+".join(parts) or "none"

    def admits(self, v: int) -> bool:
        if self.smooth is not None and not is_smooth(v, self.smooth):
            return False
        if self.prime and not sympy.isprime(abs(v)):
            return False
        return True

    def domain(self, P: int) -> list[int]:
        return [v for v in range(-P, P + 1) if self.admits(v)]


NONE = Filter()


# -- enumeration ----------------------------------------------------------------

ENUMERATION_LIMIT = 10**9


def iter_solutions(
    sys: DiagonalSystem, P: int, flt: Filter = NONE, limit: int = ENUMERATION_LIMIT
) -> Iterator[tuple[int, ...]]:
    """Brute force over dom^s in lexicographic order."""
    dom = flt.domain(P)
    if len(dom) ** sys.s > limit:
        raise BudgetExceeded(
            f"{len(dom)}^{sys.s} candidate vectors exceed the enumeration limit {limit}; "
            "use count_solutions instead"
        )
    if not dom:
        return
    bound = max(abs(c) for c in sys.C.data) * sys.s * max(abs(v) for v in dom) ** max(sys.exponents) if sys.C.data else 0
    if bound < 2**62:
        yield from _iter_numpy(sys, dom, flt.distinct)
    else:
        yield from _iter_python(sys, dom, flt.distinct)


def _iter_python(sys, dom, distinct):
    for x in itertools.product(dom, repeat=sys.s):
        if distinct and len(set(x)) != len(x):
            continue
        if sys.is_solution(x):
            yield x


def _iter_numpy(sys, dom, distinct, chunk: int = 1 << 16):
    d, s = len(dom), sys.s
    vals = np.array(dom, dtype=np.int64)
    Ct = np.array(sys.C.to_rows(), dtype=np.int64).T.reshape(s, sys.r)
    total = d**s
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = np.empty((len(idx), s), dtype=np.int64)
        for j in range(s - 1, -1, -1):
            idx, digits[:, j] = np.divmod(idx, d)
        X = vals[digits]
        ok = np.ones(len(X), dtype=bool)
        for k in sys.exponents:
            ok &= ~(X**k @ Ct).any(axis=1)
        if distinct and s > 1:
            Xs = np.sort(X, axis=1)
            ok &= (np.diff(Xs, axis=1) != 0).all(axis=1)
        for row in X[ok]:
            yield tuple(int(v) for v in row)


def enumerate_solutions(
    sys: DiagonalSystem, P: int, flt: Filter = NONE, limit: int = ENUMERATION_LIMIT
) -> list[tuple[int, ...]]:
    """All x in [-P, P]^s solving the system and passing the filter, in
    lexicographic order."""
    return list(iter_solutions(sys, P, flt, limit))


# -- meet in the middle -----------------------------------------------------------

KEY_LIMIT = 5_000_000


def _half_counter(columns, dom, exponents, width, key_limit) -> Counter:
    """Multiset of partial power-sum vectors over the given columns."""
    acc: Counter = Counter({(0,) * width: 1})
    for col in columns:
        contrib = [tuple(c * v**k for k in exponents for c in col) for v in dom]
        nxt: Counter = Counter()
        for key, cnt in acc.items():
            for d in contrib:
                nxt[tuple(a + b for a, b in zip(key, d))] += cnt
        if len(nxt) > key_limit:
            raise BudgetExceeded(f"more than {key_limit} partial sums in one half")
        acc = nxt
    return acc


def count_mitm(C: IntMatrix, exponents: Sequence[int], dom: Sequence[int], key_limit: int = KEY_LIMIT) -> int:
    """#{x in dom^s : C x^k = 0 for all k}, by a split of the variables."""
    cols = C.columns()
    width = len(exponents) * C.rows
    h = len(cols) // 2
    left = _half_counter(cols[:h], dom, exponents, width, key_limit)
    right = _half_counter(cols[h:], dom, exponents, width, key_limit)
    if len(left) > len(right):
        left, right = right, left
    total = 0
    for key, cnt in left.items():
        other = right.get(tuple(-a for a in key))
        if other:
            total += cnt * other
    return total


def set_partitions(n: int) -> Iterator[list[list[int]]]:
    """Set partitions of range(n), blocks in order of least element."""
    if n == 0:
        yield []
        return
    for part in set_partitions(n - 1):
        for b in range(len(part)):
            yield [blk + [n - 1] if t == b else blk for t, blk in enumerate(part)]
        yield part + [[n - 1]]


MAX_DISTINCT_VARIABLES = 11


def count_distinct_mitm(C: IntMatrix, exponents, dom, key_limit: int = KEY_LIMIT) -> int:
    """Solutions with pairwise distinct entries by inclusion-exclusion over
    set partitions, mu(pi) = prod over blocks of (-1)^(|B|-1) (|B|-1)!."""
    if C.cols > MAX_DISTINCT_VARIABLES:
        raise BudgetExceeded(
            f"distinct counting over {C.cols} variables needs Bell({C.cols}) merged systems"
        )
    cache: dict = {}
    total = 0
    for part in set_partitions(C.cols):
        mu = 1
        for blk in part:
            mu *= (-1) ** (len(blk) - 1) * math.factorial(len(blk) - 1)
        merged = merge_blocks(C, part)
        # counts are invariant under column permutation
        key = tuple(sorted(merged.columns()))
        if key not in cache:
            cache[key] = count_mitm(merged, exponents, dom, key_limit)
        total += mu * cache[key]
    return total


@dataclass
class CountReport:
    P: int
    total: int
    distinct: int | None
    method: str
    filter: Filter = NONE

    def __post_init__(self):
        if self.distinct is not None:
            assert 0 <= self.distinct <= self.total

    @property
    def count(self) -> int:
        """The count the filter asks for."""
        return self.distinct if self.filter.distinct else self.total

    def to_json_dict(self) -> dict:
        return {
            "P": self.P,
            "total": str(self.total),
            "distinct": str(self.distinct) if self.distinct is not None else None,
            "count": str(self.count),
            "method": self.method,
            "filter": str(self.filter),
        }


def count_solutions(
    sys: DiagonalSystem, P: int, flt: Filter = NONE, key_limit: int = KEY_LIMIT
) -> CountReport:
    """Count solutions in [-P, P]^s.  ``total`` applies the per-entry filters
    (smooth, prime); ``distinct`` additionally requires distinct entries and
    is computed when the filter asks for it."""
    if P < 0:
        raise DomainError("height must be nonnegative")
    dom = flt.domain(P)
    total = count_mitm(sys.C, sys.exponents, dom, key_limit)
    distinct = None
    method = "meet-in-middle"
    if flt.distinct:
        if len(dom) < sys.s:
            distinct = 0
        else:
            distinct = count_distinct_mitm(sys.C, sys.exponents, dom, key_limit)
        method = "meet-in-middle+partition-inversion"
    return CountReport(P, total, distinct, method, flt)


# -- collision identity ------------------------------------------------------------


def collision_counts(sys: DiagonalSystem, P: int, i: int, j: int) -> tuple[int, int]:
    """(#solutions with x_i = x_j by enumeration, #solutions of the merged system)."""
    if not (0 <= i < j < sys.s):
        raise InvalidIndexError(f"need 0 <= i < j < {sys.s}, got i={i}, j={j}")
    lhs = sum(1 for x in iter_solutions(sys, P) if x[i] == x[j])
    rhs = count_solutions(sys.merged(i, j), P).total
    return lhs, rhs


def collision_identity_check(sys: DiagonalSystem, P: int, i: int, j: int) -> bool:
    lhs, rhs = collision_counts(sys, P, i, j)
    return lhs == rhs


# -- exponents ---------------------------------------------------------------------


def expected_exponent(r: int, s: int, *, K: int | None = None, k: int | None = None) -> Fraction:
    """Predicted growth exponent: s - rK(K+1)/2 for exponents 1..K, or
    s - rk for a single power k."""
    if (K is None) == (k is None):
        raise ValueError("give exactly one of K (multimagic) or k (single power)")
    if r < 1 or s < 1:
        raise DomainError("r and s must be positive")
    if K is not None:
        if K < 1:
            raise DomainError("K must be positive")
        return Fraction(s) - Fraction(r * K * (K + 1), 2)
    if k < 1:
        raise DomainError("k must be positive")
    return Fraction(s - r * k)


@dataclass
class FitReport:
    slope: float | None
    intercept: float | None
    residual: float | None
    counts: dict[int, int]
    dropped: list[int] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "counts": {str(P): str(c) for P, c in self.counts.items()},
            "dropped": self.dropped,
            "flags": self.flags,
        }


def exponent_fit(sys: DiagonalSystem, heights: Sequence[int], flt: Filter = NONE) -> FitReport:
    """Least-squares slope of log(count) against log(P)."""
    heights = list(heights)
    if len(heights) < 3:
        raise ValueError("need at least three heights")
    if sorted(set(heights)) != heights or heights[0] < 1:
        raise ValueError("heights must be strictly ascending positive integers")
    counts = {P: count_solutions(sys, P, flt).count for P in heights}
    flags = []
    dropped = [P for P, c in counts.items() if c <= 0]
    if dropped:
        flags.append(f"zero count at P={dropped}")
    pts = [(math.log(P), math.log(c)) for P, c in counts.items() if c > 0]
    if len(pts) < 2:
        flags.append("degenerate: fewer than two usable points")
        return FitReport(None, None, None, counts, dropped, flags)
    if len({c for c in counts.values() if c > 0}) == 1:
        flags.append("degenerate: count does not grow with P")
        return FitReport(None, None, None, counts, dropped, flags)
    xs, ys = np.array(pts).T
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    rms = float(np.sqrt(np.mean(resid**2)))
    return FitReport(float(slope), float(intercept), rms, counts, dropped, flags)
