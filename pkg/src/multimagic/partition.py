"""Partition columns into disjoint full-rank bases (matroid partitioning).

Columns are elements of the linear matroid of C.  Blocks are grown one
element at a time; when an element cannot be placed directly, a shortest
augmenting path in the exchange graph moves elements between blocks to make
room.  Because the union of the n block matroids is itself a matroid, an
element that cannot be inserted now can never be inserted later, so the
greedy pass reaches the maximum and the search is complete.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import InvalidIndexError, RankDeficientError
from .exactlinalg import IntMatrix, rank, rank_of_vectors


@dataclass(frozen=True)
class BasisPartition:
    blocks: tuple[tuple[int, ...], ...]

    def to_json_dict(self) -> dict:
        return {"blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json_dict(cls, obj) -> BasisPartition:
        return cls(tuple(tuple(int(j) for j in b) for b in obj["blocks"]))


class _Matroid:
    def __init__(self, C: IntMatrix):
        self.columns = C.columns()
        self.r = C.rows

    def independent(self, J) -> bool:
        J = list(J)
        if len(J) > self.r:
            return False
        return rank_of_vectors([self.columns[j] for j in J]) == len(J)


def _augment(mat: _Matroid, blocks: list[list[int]], where: dict[int, int], x: int) -> bool:
    """Insert x into some block via a shortest exchange path, if one exists."""
    parent: dict[int, tuple[int, int] | None] = {x: None}  # y -> (pred, block pred enters)
    queue = deque([x])
    while queue:
        y = queue.popleft()
        home = where.get(y)
        for l, block in enumerate(blocks):
            if l == home:
                continue
            if mat.independent(block + [y]):
                _apply(blocks, where, parent, y, l)
                return True
            for z in block:
                if z in parent:
                    continue
                trial = [e for e in block if e != z] + [y]
                if mat.independent(trial):
                    parent[z] = (y, l)
                    queue.append(z)
    return False


def _apply(blocks, where, parent, last, last_block):
    # walk back from the sink: each element enters the block recorded on its edge
    moves = [(last, last_block)]
    node = last
    while parent[node] is not None:
        pred, l = parent[node]
        moves.append((pred, l))
        node = pred
    for elem, l in moves:
        old = where.get(elem)
        if old is not None:
            blocks[old].remove(elem)
    for elem, l in moves:
        blocks[l].append(elem)
        where[elem] = l


def _union_greedy(C: IntMatrix, n: int, target: int | None = None) -> list[list[int]]:
    mat = _Matroid(C)
    blocks: list[list[int]] = [[] for _ in range(n)]
    where: dict[int, int] = {}
    goal = n * C.rows if target is None else target
    size = 0
    for x in range(C.cols):
        if size == goal:
            break
        if _augment(mat, blocks, where, x):
            size += 1
    return blocks


def find_basis_partition(C: IntMatrix, n: int) -> BasisPartition | None:
    """n disjoint column sets, each a basis (r columns, rank r), or None."""
    if n < 0:
        raise ValueError("block count must be nonnegative")
    if n == 0:
        return BasisPartition(())
    if C.cols == 0:
        return None
    if rank(C) < C.rows:
        raise RankDeficientError(f"matrix has rank {rank(C)} < {C.rows} rows")
    if C.cols < n * C.rows:
        return None
    blocks = _union_greedy(C, n)
    if sum(map(len, blocks)) < n * C.rows:
        return None
    part = BasisPartition(tuple(sorted(tuple(sorted(b)) for b in blocks)))
    assert verify_partition(C, part)
    return part


def verify_partition(C: IntMatrix, p: BasisPartition) -> bool:
    seen: set[int] = set()
    for block in p.blocks:
        for j in block:
            if not 0 <= j < C.cols:
                raise InvalidIndexError(f"column index {j} out of range")
        if len(block) != C.rows or seen.intersection(block) or len(set(block)) != len(block):
            return False
        seen.update(block)
        if rank_of_vectors([C.column(j) for j in block]) != C.rows:
            return False
    return True


def largest_partitionable(C: IntMatrix) -> int:
    """Largest n for which n disjoint bases exist among the columns."""
    if C.cols == 0 or rank(C) < C.rows:
        return 0
    # the union of n bases reaches size n*r exactly when they exist
    for n in range(C.cols // C.rows, 0, -1):
        if find_basis_partition(C, n) is not None:
            return n
    return 0
