import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from multimagic.errors import DomainError
from multimagic.exactlinalg import IntMatrix, ScanConfig, rank, submatrix
from multimagic.domination import (
    ThresholdFunction,
    check_rank_condition,
    dominates,
    eval_F,
    piecewise_equivalence,
    rank_condition_bound,
    simplified_F,
)
from multimagic.magicsys import MagicSystem, magic_matrix

from oracles import columns_rank


def brute_F(r, s, x):
    # three affine terms written straight from the definition
    return max(Fraction(x - (s - t) % r, (s - t) // r) for t in range(3))


def test_eval_F_examples():
    assert eval_F(8, 16, 8) == 4
    assert eval_F(8, 16, 13) == 7
    assert eval_F(10, 25, 5) == 1


def test_eval_F_domain():
    with pytest.raises(DomainError):
        eval_F(8, 9, 1)
    with pytest.raises(DomainError):
        ThresholdFunction.F(3, 4)


@given(st.integers(1, 50), st.integers(0, 2500), st.integers(0, 3000))
def test_eval_F_matches_definition(r, extra, x):
    s = r + 2 + extra
    assert eval_F(r, s, x) == brute_F(r, s, x)


def test_slopes_positive():
    for r in range(1, 51):
        for s in range(r + 2, 2501, 7):
            f = ThresholdFunction.F(r, s)
            assert all(p.slope > 0 for p in f.pieces)


@given(st.integers(1, 20), st.integers(0, 60))
def test_F_nondecreasing(r, extra):
    s = r + 2 + extra
    vals = [eval_F(r, s, x) for x in range(s + 1)]
    assert vals == sorted(vals)


def test_rank_condition_bound_examples():
    b = rank_condition_bound(4)
    assert b(5) == 4
    assert b(16) == 8
    # middle regime x - N^2 + 3N - 1 at x = N(N-1)
    assert b(12) == 12 - 16 + 12 - 1


@pytest.mark.parametrize("N", [4, 5, 6, 9])
def test_rank_condition_bound_regimes(N):
    b = rank_condition_bound(N)
    for x in range(N * N + 1):
        if x <= N * (N - 1) - 1:
            expected = math.ceil(2 * math.sqrt(x)) - 1 if x else 0  # empty J: clamp, rank is never negative
            assert b(x) == expected
        elif x <= N * (N - 1) + 1:
            assert b(x) == x - N * N + 3 * N - 1
        else:
            assert b(x) == 2 * N


def test_dominates_examples():
    assert dominates(IntMatrix.identity(3), lambda x: x).proven
    C = IntMatrix.from_rows([[1, 0], [0, 0]])
    v = dominates(C, lambda x: x)
    assert v.refuted and v.witness == (1,)


def test_positive_constant_refuted_on_empty_set():
    v = dominates(IntMatrix.identity(2), lambda x: Fraction(1, 2))
    assert v.refuted and v.witness == ()


def test_magic_n4_dominates_F():
    C = magic_matrix(MagicSystem(4))
    v = dominates(C, ThresholdFunction.F(8, 16))
    assert v.proven and v.scan_depth == 16


def test_check_rank_condition_domain():
    with pytest.raises(DomainError):
        check_rank_condition(3)


@pytest.mark.parametrize("N", [4, 5, 7])
def test_piecewise_equivalence_examples(N):
    assert piecewise_equivalence(N)


def test_simplified_forms():
    assert simplified_F(4, 8) == 4
    assert simplified_F(5, 5) == 1


def _brute_dominates(C, f):
    cols = C.columns()
    for m in range(C.cols + 1):
        need = min(Fraction(f(m)), C.rows)
        for J in itertools.combinations(range(C.cols), m):
            if columns_rank([cols[j] for j in J]) < need:
                return False
    return True


@st.composite
def small_matrices(draw):
    r = draw(st.integers(1, 3))
    s = draw(st.integers(1, 6))
    data = draw(st.lists(st.integers(-1, 1), min_size=r * s, max_size=r * s))
    return IntMatrix(r, s, tuple(data))


@given(small_matrices(), st.fractions(0, 3, max_denominator=4))
def test_dominates_linear_matches_brute_force(C, a):
    f = lambda x: a * x  # noqa: E731
    v = dominates(C, f)
    assert v.status != "inconclusive"
    assert v.proven == _brute_dominates(C, f)
    if v.refuted:
        J = v.witness
        assert rank(submatrix(C, J)) < min(f(len(J)), C.rows)


@given(small_matrices(), st.fractions(0, 2, max_denominator=3), st.fractions(0, 1, max_denominator=3))
def test_dominates_antitone(C, a, shrink):
    g = lambda x: a * x  # noqa: E731
    f = lambda x: shrink * a * x  # noqa: E731
    if dominates(C, g).proven:
        assert dominates(C, f).proven


def test_dominates_permutation_invariant_n4():
    C = magic_matrix(MagicSystem(4))
    rng = random.Random(7)
    f = ThresholdFunction.F(8, 16)
    strict = lambda x: eval_F(8, 16, x) + Fraction(1, 3)  # noqa: E731
    for _ in range(3):
        perm = list(range(16))
        rng.shuffle(perm)
        P = submatrix(C, perm)
        assert dominates(P, f).status == dominates(C, f).status == "proven"
        a, b = dominates(P, strict), dominates(C, strict)
        assert a.status == b.status == "refuted"
        assert len(a.witness) == len(b.witness)


def test_sampled_mode_is_never_proven():
    C = magic_matrix(MagicSystem(4))
    v = dominates(C, ThresholdFunction.F(8, 16), ScanConfig(budget=100, samples=200))
    assert v.status == "inconclusive"
    assert 0 <= v.scan_depth < 16
    assert any(e.status == "sampled" for e in v.per_size.values())


def test_verdict_thread_independent():
    C = magic_matrix(MagicSystem(4))
    f = lambda x: eval_F(8, 16, x) + Fraction(1, 3)  # noqa: E731
    a = dominates(C, f, ScanConfig(threads=1, chunk=256))
    b = dominates(C, f, ScanConfig(threads=3, chunk=256))
    assert a.to_json_dict() == b.to_json_dict()
