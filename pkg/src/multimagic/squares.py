"""Checking and exhaustively searching small (multi)magic squares."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExceeded, DomainError
from .magicsys import Square


def _lines(N: int) -> list[tuple[str, list[tuple[int, int]]]]:
    lines = [(f"row {a}", [(a, j) for j in range(N)]) for a in range(N)]
    lines += [(f"column {b}", [(i, b) for i in range(N)]) for b in range(N)]
    lines.append(("main diagonal", [(i, i) for i in range(N)]))
    lines.append(("antidiagonal", [(i, N - 1 - i) for i in range(N)]))
    return lines


@dataclass
class PowerCheck:
    k: int
    magic: bool
    constant: int  # power sum of row 0, the reference line
    violation: str | None = None  # first line whose sum differs
    violation_sum: int | None = None


@dataclass
class SquareReport:
    N: int
    K: int
    checks: list[PowerCheck]
    distinct: int

    @property
    def magic(self) -> bool:
        return all(c.magic for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "order": self.N,
            "degree": self.K,
            "multimagic": self.magic,
            "distinct_entries": self.distinct,
            "powers": [
                {
                    "k": c.k,
                    "magic": c.magic,
                    "constant": str(c.constant),
                    "violation": c.violation,
                    "violation_sum": str(c.violation_sum) if c.violation_sum is not None else None,
                }
                for c in self.checks
            ],
        }


def verify_square(Z: Square, K: int) -> SquareReport:
    """Check that Z^k is magic for each k = 1..K."""
    if K < 1:
        raise DomainError(f"degree must be positive, got {K}")
    lines = _lines(Z.N)
    checks = []
    for k in range(1, K + 1):
        sums = [(name, sum(Z.entries[i][j] ** k for i, j in cells)) for name, cells in lines]
        ref = sums[0][1]
        bad = next(((name, v) for name, v in sums if v != ref), None)
        checks.append(PowerCheck(k, bad is None, ref, *(bad or (None, None))))
    return SquareReport(Z.N, K, checks, len(set(Z.values())))


class _Search:
    def __init__(self, N, K, values, distinct, budget):
        self.N, self.K = N, K
        self.values = sorted(set(values))
        self.lo, self.hi = self.values[0], self.values[-1]
        self.vset = set(self.values)
        self.distinct = distinct
        self.budget = budget
        self.nodes = 0
        self.grid = [[None] * N for _ in range(N)]
        self.lines = [cells for _, cells in _lines(N)]
        self.cell_lines = {(i, j): [] for i in range(N) for j in range(N)}
        for t, cells in enumerate(self.lines):
            for c in cells:
                self.cell_lines[c].append(t)
        self.sums = [[0] * (K + 1) for _ in self.lines]
        self.empty = [N] * len(self.lines)
        self.used: dict[int, int] = {}
        self.target: list[int] | None = None
        # per power: extreme values of v**k over the domain
        self.pmin = [None] + [min(v**k for v in self.values) for k in range(1, K + 1)]
        self.pmax = [None] + [max(v**k for v in self.values) for k in range(1, K + 1)]
        self.found: list[Square] = []

    def feasible_line(self, t: int) -> bool:
        if self.target is None:
            return True
        e = self.empty[t]
        for k in range(1, self.K + 1):
            need = self.target[k] - self.sums[t][k]
            if e == 0:
                if need:
                    return False
            elif not e * self.pmin[k] <= need <= e * self.pmax[k]:
                return False
        return True

    def assign(self, cell, v) -> bool:
        i, j = cell
        self.grid[i][j] = v
        self.used[v] = self.used.get(v, 0) + 1
        for t in self.cell_lines[cell]:
            self.empty[t] -= 1
            for k in range(1, self.K + 1):
                self.sums[t][k] += v**k
        if self.target is None and self.empty[0] == 0:
            self.target = list(self.sums[0])
        return all(self.feasible_line(t) for t in self.cell_lines[cell])

    def unassign(self, cell, v, set_target):
        i, j = cell
        self.grid[i][j] = None
        self.used[v] -= 1
        if not self.used[v]:
            del self.used[v]
        for t in self.cell_lines[cell]:
            self.empty[t] += 1
            for k in range(1, self.K + 1):
                self.sums[t][k] -= v**k
        if set_target:
            self.target = None

    def next_cell(self):
        """Forced cell (only empty spot of some line) if any, else the first
        empty cell of the line with fewest empties; row 0 goes first so the
        magic constants are fixed early."""
        if self.target is None:
            j = next(j for j in range(self.N) if self.grid[0][j] is None)
            return (0, j), None
        best = None
        for t, cells in enumerate(self.lines):
            e = self.empty[t]
            if e == 0:
                continue
            if e == 1:
                cell = next(c for c in cells if self.grid[c[0]][c[1]] is None)
                return cell, self.target[1] - self.sums[t][1]
            if best is None or e < self.empty[best]:
                best = t
        if best is None:
            return None, None
        cell = next(c for c in self.lines[best] if self.grid[c[0]][c[1]] is None)
        return cell, None

    def run(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(
                f"search exceeded {self.budget} nodes after {len(self.found)} squares",
                partial=list(self.found),
            )
        cell, forced = self.next_cell()
        if cell is None:
            self.found.append(Square.from_rows(self.grid))
            return
        if forced is not None:
            choices = [forced] if forced in self.vset else []
        else:
            choices = self.values
        for v in choices:
            if self.distinct and v in self.used:
                continue
            had_target = self.target is not None
            ok = self.assign(cell, v)
            if ok:
                self.run()
            self.unassign(cell, v, set_target=not had_target and self.target is not None)


def brute_force_squares(
    N: int,
    K: int,
    values: Sequence[int] | range,
    require_distinct: bool = False,
    budget: int = 10**7,
) -> list[Square]:
    """All N x N squares over ``values`` that are magic for powers 1..K.

    Backtracking: row 0 fixes the power-sum targets; afterwards a line with
    one empty cell forces its value through the k = 1 sum, and every line is
    pruned with interval bounds on the remaining power sums.
    """
    if N < 1 or K < 1:
        raise DomainError("order and degree must be positive")
    values = list(values)
    if not values:
        return []
    search = _Search(N, K, values, require_distinct, budget)
    search.run()
    return sorted(search.found, key=lambda Z: Z.values())
