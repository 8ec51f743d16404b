import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from multimagic.errors import DomainError, FormatError, InvalidIndexError
from multimagic.exactlinalg import IntMatrix, rank, rank_profile
from multimagic.magicsys import (
    MagicSystem,
    Square,
    best_known_order,
    column_major,
    column_vector,
    diagonal_latin_square,
    diagonal_sets,
    exponent_identity_holds,
    kth_power_threshold,
    latin_witness,
    magic_matrix,
    merge_blocks,
    merge_columns,
    multimagic_threshold,
    random_ordering,
    row_major,
)

from oracles import is_magic


def test_diagonal_sets():
    D1, D2 = diagonal_sets(3)
    assert D1 == {(0, 0), (1, 1), (2, 2)}
    assert D2 == {(0, 2), (1, 1), (2, 0)}
    assert not (diagonal_sets(4)[0] & diagonal_sets(4)[1])
    D1, D2 = diagonal_sets(5)
    assert D1 & D2 == {(2, 2)}


@pytest.mark.parametrize(
    "cell, expected",
    [
        ((0, 1), (1, 0, 0, 0, 1, 0)),
        ((1, 1), (-1, 0, -1, -1, 0, -1)),
        ((0, 0), (0, -1, -1, 1, 0, 0)),
        ((2, 0), (0, 0, 1, 0, -1, -1)),
    ],
)
def test_column_vector_cases(cell, expected):
    assert column_vector(3, *cell) == expected


def test_column_vector_range():
    with pytest.raises(InvalidIndexError):
        column_vector(3, 3, 0)


def test_magic_matrix_shape_and_centre_column():
    sys3 = MagicSystem(3)
    C = magic_matrix(sys3)
    assert (C.rows, C.cols) == (6, 9)
    t = sys3.ordering.index((1, 1))
    assert C.column(t) == (-1, 0, -1, -1, 0, -1)
    assert rank(magic_matrix(MagicSystem(4))) == 8
    with pytest.raises(DomainError):
        MagicSystem(2)


def test_merge_columns():
    assert merge_columns(IntMatrix.from_rows([[1, 2, 3]]), 0, 1) == IntMatrix.from_rows([[3, 3]])
    assert merge_columns(IntMatrix.identity(2), 0, 1).columns() == [(1, 1)]
    sys3 = MagicSystem(3)
    C = magic_matrix(sys3)
    a, b = sys3.ordering.index((0, 1)), sys3.ordering.index((1, 0))
    i, j = min(a, b), max(a, b)
    M = merge_columns(C, i, j)
    assert M.cols == 8
    assert M.column(i) == (1, 1, 0, 1, 1, 0)
    for bad in [(1, 1), (2, 1), (0, 9)]:
        with pytest.raises(InvalidIndexError):
            merge_columns(C, *bad)


def test_merge_blocks_sums_each_block():
    C = IntMatrix.from_rows([[1, 2, 3, 4]])
    assert merge_blocks(C, [[0, 2], [1, 3]]).to_rows() == [[4, 6]]


def _encoding_exhaustive(N, W_values):
    """Check kernel membership against the line-sum condition on every
    square with entries in W_values (already raised to the power k)."""
    sys_ = MagicSystem(N)
    C = np.array(magic_matrix(sys_).to_rows(), dtype=np.int64)
    # columns in the ordering's cell order; flatten row-major to match
    perm = [sys_.ordering.index((i, j)) for i in range(N) for j in range(N)]
    Cr = C[:, perm]
    vals = np.array(W_values, dtype=np.int64)
    head = N  # enumerate the first row in Python, the rest vectorised
    rest = np.array(list(itertools.product(range(len(vals)), repeat=N * N - head)), dtype=np.int64)
    rest = vals[rest]
    n_kernel = 0
    for first in itertools.product(vals, repeat=head):
        W = np.hstack([np.broadcast_to(np.array(first), (len(rest), head)), rest])
        in_kernel = ~(W @ Cr.T).any(axis=1)
        G = W.reshape(-1, N, N)
        rows = G.sum(axis=2)
        cols = G.sum(axis=1)
        d1 = np.trace(G, axis1=1, axis2=2)
        d2 = np.trace(G[:, :, ::-1], axis1=1, axis2=2)
        cond = (rows == d1[:, None]).all(axis=1) & (cols == d2[:, None]).all(axis=1)
        assert np.array_equal(in_kernel, cond)
        # and the encoding forces a genuine magic square
        magic = cond & (d1 == d2)
        assert np.array_equal(cond, magic)
        n_kernel += int(in_kernel.sum())
    return n_kernel


def test_system_encoding_n3_k1():
    # entries in [-3, 3]; the kernel count must match the meet-in-the-middle counter
    from multimagic.counting import DiagonalSystem, count_solutions

    n = _encoding_exhaustive(3, range(-3, 4))
    assert n == count_solutions(DiagonalSystem(magic_matrix(MagicSystem(3)), (1,)), 3).total == 63


def test_system_encoding_n3_k2():
    # squares of entries in [-3, 3] take values {0, 1, 4, 9}
    assert _encoding_exhaustive(3, [0, 1, 4, 9]) > 0


@given(st.lists(st.integers(-40, 40), min_size=16, max_size=16), st.integers(1, 3))
def test_encoding_matches_direct_check_n4(entries, k):
    Z = Square.from_rows([entries[4 * i : 4 * i + 4] for i in range(4)])
    sys_ = MagicSystem(4)
    in_kernel = not any(magic_matrix(sys_).matvec(sys_.flatten(Z.power(k))))
    assert in_kernel == is_magic(Z.entries, k)


@pytest.mark.parametrize("N", range(3, 9))
def test_column_entries_and_minus_one_blocks(N):
    C = magic_matrix(MagicSystem(N))
    assert set(C.data) <= {-1, 0, 1}
    with_minus = sum(1 for c in C.columns() if -1 in c)
    # cells on D1 or D2: 2N when they are disjoint, 2N - 1 when they share the centre
    assert with_minus == (2 * N if N % 2 == 0 else 2 * N - 1)


def test_profile_invariant_under_ordering():
    profiles = []
    for order in (row_major(4), column_major(4), random_ordering(4, seed=11)):
        prof = rank_profile(magic_matrix(MagicSystem(4, ordering=order)), 16)
        profiles.append([prof[m].min_rank for m in range(17)])
    assert profiles[0] == profiles[1] == profiles[2]


def test_ordering_must_be_bijection():
    with pytest.raises(DomainError):
        MagicSystem(3, ordering=((0, 0),) * 9)


def test_flatten_round_trip():
    sys_ = MagicSystem(4, ordering=random_ordering(4, 3))
    Z = Square.from_rows([[4 * i + j for j in range(4)] for i in range(4)])
    assert sys_.unflatten(sys_.flatten(Z)) == Z


def test_square_text_round_trip_and_errors():
    Z = Square.from_rows([[2, 7, 6], [9, 5, 1], [4, 3, 8]])
    assert Square.from_text(Z.to_text()) == Z
    with pytest.raises(FormatError) as exc:
        Square.from_text("3\n1 2 3\n4 5\n7 8 9\n")
    assert exc.value.field == "row 1"
    with pytest.raises(FormatError):
        Square.from_text("x\n")


def test_thresholds():
    assert [multimagic_threshold(K) for K in (2, 3, 6)] == [13, 25, 85]
    assert [kth_power_threshold(k) for k in (2, 3, 4, 5)] == [9, 17, 33, 61]
    for k in range(5, 60):
        expected = 2 * math.ceil(k * (math.log(k) + 4.20032)) + 1
        assert kth_power_threshold(k) == expected
    for bad in (multimagic_threshold, kth_power_threshold, best_known_order):
        with pytest.raises(DomainError):
            bad(1)


def test_catalog():
    assert [best_known_order(K)[0] for K in range(2, 7)] == [6, 12, 243, 729, 4096]
    assert best_known_order(4)[1] == "P. Fengchu"
    for K in (7, 8, 12):
        assert best_known_order(K)[0] == (4 * K - 2) ** K
    assert best_known_order(7)[0] == 26**7


def test_exponent_identity():
    for K in range(2, 7):
        for N in range(1, 101):
            assert exponent_identity_holds(N, K)


@pytest.mark.parametrize("N", [4, 5, 7, 8, 13])
def test_diagonal_latin_square(N):
    L = diagonal_latin_square(N)
    assert L is not None
    full = set(range(N))
    assert all(set(row) == full for row in L)
    assert all({L[i][j] for i in range(N)} == full for j in range(N))
    assert {L[i][i] for i in range(N)} == full
    assert {L[i][N - 1 - i] for i in range(N)} == full


def test_latin_witness_solves_every_power():
    ms = MagicSystem(5, exponents=(1, 2, 3))
    x = latin_witness(ms, [1, 2, 5, 10, 17])
    assert x is not None
    C = magic_matrix(ms)
    for k in (1, 2, 3, 7):
        assert not any(C.matvec([v**k for v in x]))
