"""Exact integer linear algebra: ranks, column selection and subset rank scans.

Everything here is exact.  The batched modular rank is only ever used as a
*lower bound* on the rational rank (reduction mod p can only lose rank), so a
subset whose modular rank already clears a threshold is certified without
further work, and anything that matters for a reported minimum is recomputed
with fraction-free elimination.
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import FormatError, InvalidIndexError

# Largest prime p with p**2 < 2**31: cross-multiplied residues fit in int32.
SCAN_PRIME = 46_337
# 2**31 - 1: products of two residues fit in int64.
MODULUS = 2_147_483_647


@dataclass(frozen=True)
class IntMatrix:
    """Dense row-major matrix of Python integers."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1:
            raise ValueError("IntMatrix needs at least one row")
        if self.cols < 0:
            raise ValueError("column count must be nonnegative")
        data = tuple(self.data)
        if len(data) != self.rows * self.cols:
            raise ValueError(
                f"data has {len(data)} entries, expected {self.rows * self.cols}"
            )
        for v in data:
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise TypeError(f"entries must be integers, got {type(v).__name__}")
        object.__setattr__(self, "data", tuple(int(v) for v in data))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> IntMatrix:
        rows = [list(r) for r in rows]
        if not rows:
            raise ValueError("need at least one row")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), width, tuple(v for r in rows for v in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> IntMatrix:
        columns = [list(c) for c in columns]
        if rows is None:
            if not columns:
                raise ValueError("row count required for an empty column list")
            rows = len(columns[0])
        if any(len(c) != rows for c in columns):
            raise ValueError("columns have inconsistent length")
        return cls(rows, len(columns), tuple(columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        if not 0 <= j < self.cols:
            raise InvalidIndexError(f"column {j} out of range [0, {self.cols})")
        return self.data[j::self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> IntMatrix:
        if self.cols == 0:
            raise ValueError("cannot transpose a matrix with no columns")
        return IntMatrix.from_rows(self.columns())

    def matvec(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.cols:
            raise ValueError(f"vector has length {len(x)}, expected {self.cols}")
        return tuple(
            sum(a * b for a, b in zip(self.row(i), x)) for i in range(self.rows)
        )

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "data": [str(v) for v in self.data]}

    @classmethod
    def from_json_dict(cls, obj) -> IntMatrix:
        if not isinstance(obj, dict):
            raise FormatError("matrix", "expected a JSON object")
        if "matrix" in obj and "data" not in obj:
            # report files produced by the CLI wrap the matrix
            return cls.from_json_dict(obj["matrix"])
        for key in ("rows", "cols", "data"):
            if key not in obj:
                raise FormatError(key, "missing")
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
        if not isinstance(rows, int) or isinstance(rows, bool) or rows < 1:
            raise FormatError("rows", f"must be a positive integer, got {rows!r}")
        if not isinstance(cols, int) or isinstance(cols, bool) or cols < 0:
            raise FormatError("cols", f"must be a nonnegative integer, got {cols!r}")
        if not isinstance(data, list) or len(data) != rows * cols:
            raise FormatError("data", f"must be a list of {rows * cols} decimal strings")
        values = []
        for k, v in enumerate(data):
            if isinstance(v, bool):
                raise FormatError(f"data[{k}]", "booleans are not integers")
            if isinstance(v, int):
                values.append(v)
                continue
            if not isinstance(v, str):
                raise FormatError(f"data[{k}]", f"expected a decimal string, got {v!r}")
            try:
                values.append(int(v.strip(), 10))
            except ValueError:
                raise FormatError(f"data[{k}]", f"not a decimal integer: {v!r}") from None
        return cls(rows, cols, tuple(values))

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def loads(cls, text: str) -> IntMatrix:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError("matrix", f"invalid JSON ({exc})") from None
        return cls.from_json_dict(obj)


def _check_index_set(M: IntMatrix, J: Iterable[int]) -> list[int]:
    J = [int(j) for j in J]
    for j in J:
        if not 0 <= j < M.cols:
            raise InvalidIndexError(f"column index {j} out of range [0, {M.cols})")
    if len(set(J)) != len(J):
        raise InvalidIndexError(f"duplicate column index in {J}")
    return J


def submatrix(M: IntMatrix, J: Iterable[int]) -> IntMatrix:
    """Columns of ``M`` indexed by ``J`` (0-based), in the given order."""
    J = _check_index_set(M, J)
    return IntMatrix(
        M.rows, len(J), tuple(M.data[i * M.cols + j] for i in range(M.rows) for j in J)
    )


def _bareiss_rank(a: list[list[int]]) -> int:
    """Fraction-free elimination in place; returns the rank."""
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        if p != r:
            a[p], a[r] = a[r], a[p]
        piv = a[r][c]
        prow = a[r]
        for i in range(r + 1, nrows):
            row = a[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (row[j] * piv - f * prow[j]) // prev
            row[c] = 0
        prev = piv
        r += 1
    return r


def rank(M: IntMatrix) -> int:
    """Rank over the rationals, by Bareiss fraction-free elimination."""
    if M.cols == 0:
        return 0
    # eliminate along the shorter side
    if M.cols < M.rows:
        a = [list(c) for c in M.columns()]
    else:
        a = M.to_rows()
    return _bareiss_rank(a)


def rank_of_vectors(vectors: Sequence[Sequence[int]]) -> int:
    """Rank of the span of the given integer vectors."""
    if not vectors:
        return 0
    return _bareiss_rank([list(v) for v in vectors])


def rank_mod_p_batch(stack: np.ndarray, p: int = MODULUS) -> np.ndarray:
    """Ranks mod ``p`` of a batch of small matrices.

    ``stack`` has shape (B, m, n); each slice is treated as m vectors of
    length n.  Entries must already be reduced to [0, p).  Requires p < 2**31;
    arithmetic is done in int32 when p <= SCAN_PRIME.
    """
    A = np.array(stack, dtype=np.int64 if p > SCAN_PRIME else np.int32, copy=True)
    B, m, n = A.shape
    ranks = np.zeros(B, dtype=np.int64)
    if m == 0 or n == 0 or B == 0:
        return ranks
    used = np.zeros((B, m), dtype=bool)
    batch = np.arange(B)
    for t in range(n):
        cand = (A[:, :, t] != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = cand.argmax(axis=1)
        prow = A[batch, piv, t:]  # (B, n - t)
        # batches without a pivot here get the identity update
        pval = np.where(has, prow[:, 0], 1)
        prow = prow * has[:, None]
        # only rows not yet used as pivots matter afterwards; coordinates < t
        # of those rows are already zero
        A[:, :, t:] = (A[:, :, t:] * pval[:, None, None] - A[:, :, t:t + 1] * prow[:, None, :]) % p
        used[batch, piv] |= has
        ranks += has
    return ranks


def colex_combinations(n: int, m: int) -> Iterator[tuple[int, ...]]:
    """All m-subsets of range(n) in colexicographic order."""
    if m == 0:
        yield ()
        return
    for top in range(m - 1, n):
        for rest in colex_combinations(top, m - 1):
            yield rest + (top,)


# -- subset rank scans ---------------------------------------------------------


@dataclass
class ScanConfig:
    """Work limits for subset rank scans.

    ``budget`` caps the number of rank evaluations spent on exhaustive scans;
    a cardinality whose subset count does not fit in what remains is sampled
    with ``samples`` uniform random subsets instead.
    """

    budget: int = 2**20
    samples: int = 100_000
    seed: int = 0
    threads: int = 1
    chunk: int = 8192


@dataclass
class SizeMin:
    size: int
    min_rank: int | None
    status: str  # "exact" or "sampled"
    checked: int
    witness: tuple[int, ...] | None = None

    def to_json_dict(self) -> dict:
        return {
            "size": self.size,
            "min_rank": self.min_rank,
            "status": self.status,
            "checked": self.checked,
            "witness": list(self.witness) if self.witness is not None else None,
        }


class _SubsetRanker:
    """Evaluates minimum ranks over batches of column subsets of one matrix."""

    def __init__(self, M: IntMatrix, p: int = SCAN_PRIME):
        self.M = M
        self.p = p
        dtype = np.int64 if p > SCAN_PRIME else np.int32
        cols = np.array([[v % p for v in M.column(j)] for j in range(M.cols)], dtype=dtype)
        self.vectors = cols.reshape(M.cols, M.rows)
        self.columns = M.columns()

    def exact_rank(self, J: Sequence[int]) -> int:
        return rank_of_vectors([self.columns[j] for j in J])

    def chunk_min(self, combos: np.ndarray) -> tuple[int, int]:
        """(exact minimum rank, index of first subset attaining it)."""
        if combos.shape[1] == 0:
            return 0, 0
        lower = rank_mod_p_batch(self.vectors[combos], self.p)
        order = np.argsort(lower, kind="stable")
        best = best_idx = None
        for idx in order:
            if best is not None and lower[idx] >= best:
                break
            exact = self.exact_rank(combos[idx])
            if best is None or exact < best or (exact == best and idx < best_idx):
                best, best_idx = exact, int(idx)
        return best, best_idx


def _chunks(it: Iterator[tuple[int, ...]], size: int, m: int) -> Iterator[np.ndarray]:
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield np.array(block, dtype=np.int64).reshape(len(block), m)


def _sample_chunks(rng: np.random.Generator, n: int, m: int, total: int, size: int) -> Iterator[np.ndarray]:
    done = 0
    while done < total:
        b = min(size, total - done)
        picks = np.argsort(rng.random((b, n)), axis=1)[:, :m]
        picks.sort(axis=1)
        done += b
        yield picks


def scan_size(
    ranker: _SubsetRanker,
    m: int,
    *,
    exhaustive: bool,
    floor: int | None,
    config: ScanConfig,
) -> SizeMin:
    """Minimum rank over m-subsets, exhaustively (colex) or by sampling.

    ``floor`` is a proven lower bound for the minimum (the previous size's
    exact minimum, by rank monotonicity); an exhaustive scan stops as soon as
    it is attained.
    """
    M = ranker.M
    if m == 0:
        return SizeMin(0, 0, "exact", 1, ())
    if exhaustive:
        chunks = _chunks(colex_combinations(M.cols, m), config.chunk, m)
    else:
        rng = np.random.default_rng([config.seed, m])
        chunks = _sample_chunks(rng, M.cols, m, config.samples, config.chunk)
    best = witness = None
    checked = 0
    threads = max(1, config.threads)
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while True:
            wave = list(itertools.islice(chunks, threads))
            if not wave:
                break
            results = list(pool.map(ranker.chunk_min, wave)) if pool else [ranker.chunk_min(wave[0])]
            stop = False
            for combos, (cmin, cidx) in zip(wave, results):
                checked += len(combos)
                if best is None or cmin < best:
                    best, witness = cmin, tuple(int(v) for v in combos[cidx])
                if exhaustive and floor is not None and best <= floor:
                    stop = True
                    break
            if stop:
                break
    finally:
        if pool:
            pool.shutdown()
    return SizeMin(m, best, "exact" if exhaustive else "sampled", checked, witness)


def rank_profile(
    M: IntMatrix,
    max_card: int,
    config: ScanConfig | None = None,
) -> dict[int, SizeMin]:
    """Minimum rank of C_J over all |J| = m, for m = 0..max_card.

    A size is reported "exact" only if every subset was accounted for: either
    scanned within the remaining budget, or covered by a proven shortcut
    (the previous exact minimum is attained, or already equals the row count).
    """
    config = config or ScanConfig()
    if not 0 <= max_card <= M.cols:
        raise ValueError(f"max_card must lie in [0, {M.cols}]")
    ranker = _SubsetRanker(M)
    remaining = config.budget
    profile: dict[int, SizeMin] = {}
    prev: SizeMin | None = None
    for m in range(max_card + 1):
        floor = prev.min_rank if prev is not None and prev.status == "exact" else None
        if floor is not None and floor == M.rows and prev.witness is not None:
            # every m-subset contains an (m-1)-subset of full rank
            profile[m] = SizeMin(
                m, floor, "exact", 0,
                tuple(sorted(prev.witness + (_first_unused(prev.witness, M.cols),))),
            )
        else:
            total = math.comb(M.cols, m)
            exhaustive = total <= remaining
            entry = scan_size(ranker, m, exhaustive=exhaustive, floor=floor, config=config)
            if exhaustive:
                remaining -= entry.checked
            profile[m] = entry
        prev = profile[m]
    return profile


def _first_unused(J: tuple[int, ...], n: int) -> int:
    used = set(J)
    return next(j for j in range(n) if j not in used)
