import random

import pytest
from hypothesis import given, strategies as st

from multimagic.domination import ThresholdFunction, dominates
from multimagic.errors import InvalidIndexError, RankDeficientError
from multimagic.exactlinalg import IntMatrix, rank, submatrix
from multimagic.magicsys import MagicSystem, magic_matrix
from multimagic.partition import (
    BasisPartition,
    find_basis_partition,
    largest_partitionable,
    verify_partition,
)

from oracles import basis_partition_exists, columns_rank

I2I2 = IntMatrix.from_rows([[1, 0, 1, 0], [0, 1, 0, 1]])


def test_two_identities():
    p = find_basis_partition(I2I2, 2)
    assert p is not None and verify_partition(I2I2, p)
    assert largest_partitionable(I2I2) == 2


def test_single_block():
    C = IntMatrix.from_rows([[1, 0, 1], [0, 1, 0]])
    p = find_basis_partition(C, 1)
    assert len(p.blocks) == 1 and columns_rank([C.column(j) for j in p.blocks[0]]) == 2


def test_verify_rejects_overlap_and_parallel():
    assert verify_partition(I2I2, BasisPartition(((0, 1), (2, 3))))
    assert not verify_partition(I2I2, BasisPartition(((0, 1), (1, 3))))
    assert not verify_partition(I2I2, BasisPartition(((0, 2),)))
    with pytest.raises(InvalidIndexError):
        verify_partition(I2I2, BasisPartition(((0, 7),)))


def test_rank_deficient():
    C = IntMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    with pytest.raises(RankDeficientError):
        find_basis_partition(C, 1)
    assert largest_partitionable(C) == 0


def test_degenerate_inputs():
    assert find_basis_partition(I2I2, 0).blocks == ()
    assert find_basis_partition(IntMatrix.zeros(2, 0), 1) is None
    assert find_basis_partition(I2I2, 3) is None


def test_json_round_trip():
    p = find_basis_partition(I2I2, 2)
    assert BasisPartition.from_json_dict(p.to_json_dict()) == p


def _random_full_rank(rng, r, s, density=0.5):
    while True:
        rows = [[rng.choice([-1, 1, 2]) if rng.random() < density else 0 for _ in range(s)] for _ in range(r)]
        C = IntMatrix.from_rows(rows)
        if rank(C) == r:
            return C


@st.composite
def full_rank(draw):
    r = draw(st.integers(1, 3))
    s = draw(st.integers(r, 9))
    data = draw(st.lists(st.integers(-1, 1), min_size=r * s, max_size=r * s))
    C = IntMatrix(r, s, tuple(data))
    if rank(C) < r:
        data = list(data)
        for i in range(r):  # force full rank with a planted identity
            for t in range(r):
                data[i * s + t] = int(i == t)
        C = IntMatrix(r, s, tuple(data))
    return C


@given(full_rank())
def test_largest_partitionable_matches_oracle(C):
    n = largest_partitionable(C)
    cols = C.columns()
    assert basis_partition_exists(cols, C.rows, n)
    assert not basis_partition_exists(cols, C.rows, n + 1)


def test_existence_matches_oracle_on_random_matrices():
    rng = random.Random(99)
    for _ in range(60):
        r = rng.randint(1, 3)
        s = rng.randint(r, 9)
        C = _random_full_rank(rng, r, s, density=rng.choice([0.3, 0.5, 0.8]))
        for n in range(0, s // r + 1):
            p = find_basis_partition(C, n)
            assert (p is not None) == basis_partition_exists(C.columns(), r, n)
            if p is not None:
                assert verify_partition(C, p)


def test_dominating_low_function_gives_full_partition():
    rng = random.Random(2024)
    hits = tries = 0
    while hits < 100:
        tries += 1
        assert tries < 5000, "could not generate enough dominating matrices"
        r = rng.randint(1, 4)
        s = rng.randint(r, 12)
        C = _random_full_rank(rng, r, s, density=0.7)
        if not dominates(C, ThresholdFunction.low(r, s)).proven:
            continue
        hits += 1
        p = find_basis_partition(C, s // r)
        assert p is not None and verify_partition(C, p)


def test_magic_n5_submatrix_two_blocks():
    C = magic_matrix(MagicSystem(5))
    rng = random.Random(5)
    for _ in range(3):
        J = sorted(rng.sample(range(25), 23))
        M = submatrix(C, J)
        assert rank(M) == 10
        p = find_basis_partition(M, 2)
        assert p is not None and verify_partition(M, p)
        assert [rank(submatrix(M, b)) for b in p.blocks] == [10, 10]
