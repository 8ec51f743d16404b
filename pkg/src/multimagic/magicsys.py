"""The magic-square coefficient matrix, column merging, thresholds and catalog.

Cells are 0-based pairs ``(i, j)`` with ``i`` the row and ``j`` the column.
The coefficient matrix has 2N rows: row ``a`` of the first block encodes
"row ``a`` sum minus main-diagonal sum", and row ``b`` of the second block
encodes "column ``b`` sum minus antidiagonal sum".
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

import mpmath

from .errors import DomainError, FormatError, InvalidIndexError
from .exactlinalg import IntMatrix

Cell = tuple[int, int]


def row_major(N: int) -> tuple[Cell, ...]:
    return tuple((i, j) for i in range(N) for j in range(N))


def column_major(N: int) -> tuple[Cell, ...]:
    return tuple((i, j) for j in range(N) for i in range(N))


def random_ordering(N: int, seed: int = 0) -> tuple[Cell, ...]:
    cells = list(row_major(N))
    random.Random(seed).shuffle(cells)
    return tuple(cells)


@dataclass(frozen=True)
class MagicSystem:
    """Order, variable ordering and exponent set of a (multi)magic system.

    ``ordering[t]`` is the cell carried by variable ``t``; ``exponents`` is
    (1, ..., K) for K-multimagic squares or (k,) for squares of k-th powers.
    """

    N: int
    exponents: tuple[int, ...] = (1,)
    ordering: tuple[Cell, ...] | None = None

    def __post_init__(self):
        if self.N < 3:
            raise DomainError(f"order must be at least 3, got {self.N}")
        exps = tuple(sorted(set(int(k) for k in self.exponents)))
        if not exps or exps[0] < 1:
            raise DomainError("exponents must be a nonempty set of positive integers")
        object.__setattr__(self, "exponents", exps)
        order = tuple(tuple(c) for c in (self.ordering or row_major(self.N)))
        if sorted(order) != list(row_major(self.N)):
            raise DomainError("ordering must list every cell exactly once")
        object.__setattr__(self, "ordering", order)

    @classmethod
    def multimagic(cls, N: int, K: int, ordering=None) -> MagicSystem:
        return cls(N, tuple(range(1, K + 1)), ordering)

    @property
    def r(self) -> int:
        return 2 * self.N

    @property
    def s(self) -> int:
        return self.N * self.N

    def matrix(self) -> IntMatrix:
        return magic_matrix(self)

    def flatten(self, square: Square) -> tuple[int, ...]:
        if square.N != self.N:
            raise ValueError(f"square has order {square.N}, system has order {self.N}")
        return tuple(square.entries[i][j] for i, j in self.ordering)

    def unflatten(self, x: Sequence[int]) -> Square:
        grid = [[0] * self.N for _ in range(self.N)]
        for (i, j), v in zip(self.ordering, x, strict=True):
            grid[i][j] = v
        return Square.from_rows(grid)


@dataclass(frozen=True)
class Square:
    N: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.N < 1 or len(self.entries) != self.N or any(len(r) != self.N for r in self.entries):
            raise ValueError(f"square entries must be {self.N} x {self.N}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> Square:
        return cls(len(rows), tuple(tuple(int(v) for v in r) for r in rows))

    def power(self, k: int) -> Square:
        return Square(self.N, tuple(tuple(v**k for v in r) for r in self.entries))

    def values(self) -> list[int]:
        return [v for r in self.entries for v in r]

    def to_text(self) -> str:
        lines = [str(self.N)]
        lines += [" ".join(str(v) for v in r) for r in self.entries]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Square:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise FormatError("order", "file is empty")
        try:
            N = int(lines[0].strip())
        except ValueError:
            raise FormatError("order", f"first line must be the order, got {lines[0]!r}") from None
        if N < 1:
            raise FormatError("order", f"must be positive, got {N}")
        if len(lines) - 1 != N:
            raise FormatError("rows", f"expected {N} rows, found {len(lines) - 1}")
        rows = []
        for a, ln in enumerate(lines[1:]):
            parts = ln.split()
            if len(parts) != N:
                raise FormatError(f"row {a}", f"expected {N} entries, found {len(parts)}")
            try:
                rows.append([int(v) for v in parts])
            except ValueError:
                raise FormatError(f"row {a}", f"non-integer entry in {ln!r}") from None
        return cls.from_rows(rows)


def diagonal_sets(N: int) -> tuple[frozenset[Cell], frozenset[Cell]]:
    """Main diagonal and antidiagonal cells."""
    if N < 1:
        raise DomainError("order must be positive")
    D1 = frozenset((i, i) for i in range(N))
    D2 = frozenset((i, N - 1 - i) for i in range(N))
    return D1, D2


def column_vector(N: int, i: int, j: int) -> tuple[int, ...]:
    """Coefficient column of cell (i, j): row indicator | column indicator,
    with the all-ones vector subtracted from the first half on the main
    diagonal and from the second half on the antidiagonal."""
    if not (0 <= i < N and 0 <= j < N):
        raise InvalidIndexError(f"cell ({i}, {j}) outside a {N} x {N} square")
    first = [int(a == i) for a in range(N)]
    second = [int(b == j) for b in range(N)]
    if i == j:
        first = [v - 1 for v in first]
    if i + j == N - 1:
        second = [v - 1 for v in second]
    return tuple(first + second)


def magic_matrix(sys: MagicSystem) -> IntMatrix:
    """2N x N^2 coefficient matrix of the magic system, one column per cell in ``sys.ordering``."""
    return IntMatrix.from_columns([column_vector(sys.N, i, j) for i, j in sys.ordering])


def merge_columns(C: IntMatrix, i: int, j: int) -> IntMatrix:
    """Replace column i by c_i + c_j and delete column j (requires i < j)."""
    if not (0 <= i < j < C.cols):
        raise InvalidIndexError(f"need 0 <= i < j < {C.cols}, got i={i}, j={j}")
    cols = C.columns()
    cols[i] = tuple(a + b for a, b in zip(cols[i], cols[j]))
    del cols[j]
    return IntMatrix.from_columns(cols, rows=C.rows)


def merge_blocks(C: IntMatrix, blocks: Sequence[Sequence[int]]) -> IntMatrix:
    """One column per block, holding the sum of that block's columns."""
    cols = C.columns()
    merged = [tuple(map(sum, zip(*(cols[j] for j in b)))) for b in blocks]
    return IntMatrix.from_columns(merged, rows=C.rows)


# -- thresholds and catalog ----------------------------------------------------


def multimagic_threshold(K: int) -> int:
    """Smallest N with N > 2K(K+1)."""
    if K < 2:
        raise DomainError(f"degree must be at least 2, got {K}")
    return 2 * K * (K + 1) + 1


def kth_power_threshold(k: int) -> int:
    """Smallest order admissible for magic squares of distinct k-th powers."""
    if k < 2:
        raise DomainError(f"power must be at least 2, got {k}")
    if k <= 4:
        return 2 ** (k + 1) + 1
    return 2 * _certified_ceil_log_bound(k) + 1


def _certified_ceil_log_bound(k: int) -> int:
    """ceil(k (ln k + 4.20032)), with the ceiling certified by interval arithmetic."""
    iv = mpmath.iv
    for dps in (30, 60, 120, 240):
        iv.dps = dps
        val = iv.mpf(k) * (iv.log(iv.mpf(k)) + iv.mpf("4.20032"))
        lo, hi = math.ceil(val.a), math.ceil(val.b)
        if lo == hi:
            return int(lo)
    raise ArithmeticError(f"could not certify the ceiling for k={k}")


_TABLE = {
    2: (6, "J. Wroblewski"),
    3: (12, "W. Trump"),
    4: (243, "P. Fengchu"),
    5: (729, "L. Wen"),
    6: (4096, "P. Fengchu"),
}


def best_known_order(K: int) -> tuple[int, str]:
    """Smallest order of a known K-multimagic square with distinct entries."""
    if K < 2:
        raise DomainError(f"degree must be at least 2, got {K}")
    if K in _TABLE:
        return _TABLE[K]
    return (4 * K - 2) ** K, "Zhang, Chen, and Li"


def exponent_identity_holds(N: int, K: int) -> bool:
    return N * N - 2 * N * K * (K + 1) // 2 == N * (N - K * (K + 1))


# -- integer witnesses ---------------------------------------------------------


def diagonal_latin_square(N: int) -> list[list[int]] | None:
    """A Latin square on symbols 0..N-1 whose two diagonals are also transversals.

    Uses the cyclic construction when gcd(N, 6) = 1, otherwise a backtracking
    most-constrained-cell search.  Returns None when none exists
    (N = 2, 3).
    """
    if math.gcd(N, 6) == 1:
        return [[(2 * i + j) % N for j in range(N)] for i in range(N)]
    full = (1 << N) - 1
    grid = [[-1] * N for _ in range(N)]
    rows, cols, diag = [0] * N, [0] * N, [0, 0]  # bitmasks of used symbols

    def options(i, j) -> int:
        used = rows[i] | cols[j]
        if i == j:
            used |= diag[0]
        if i + j == N - 1:
            used |= diag[1]
        return full & ~used

    def toggle(i, j, bit):
        rows[i] ^= bit
        cols[j] ^= bit
        if i == j:
            diag[0] ^= bit
        if i + j == N - 1:
            diag[1] ^= bit

    def place(left: int) -> bool:
        if left == 0:
            return True
        # most constrained empty cell first
        best, best_opts, best_n = None, 0, N + 1
        for i in range(N):
            for j in range(N):
                if grid[i][j] < 0:
                    o = options(i, j)
                    n = bin(o).count("1")
                    if n < best_n:
                        best, best_opts, best_n = (i, j), o, n
                        if n == 0:
                            return False
        i, j = best
        o = best_opts
        while o:
            bit = o & -o
            o ^= bit
            grid[i][j] = bit.bit_length() - 1
            toggle(i, j, bit)
            if place(left - 1):
                return True
            toggle(i, j, bit)
        grid[i][j] = -1
        return False

    return grid if place(N * N) else None


def latin_witness(sys: MagicSystem, values: Sequence[int]) -> tuple[int, ...] | None:
    """Integer solution of the system for every exponent at once.

    Every row, column and diagonal of a diagonal Latin square carries each
    symbol once, so substituting ``values[symbol]`` equalizes all power sums.
    """
    L = diagonal_latin_square(sys.N)
    if L is None:
        return None
    if len(values) != sys.N:
        raise ValueError(f"need {sys.N} symbol values")
    return tuple(values[L[i][j]] for i, j in sys.ordering)
