import random
from itertools import permutations

import pytest
from hypothesis import given

from lunimodal import gf
from lunimodal.enumerate import (
    compositions, descent_histogram, in_D_i, in_I_j, lambda_unimodal_involutions,
    signed_sum_over_family,
)
from lunimodal.gf import (
    DescentPolynomial, Engine, FamilyKey, count_Di, count_L, count_Lj, expand_family,
    gelfand_G, gelfand_Gj, gelfand_Hi, poly_Dti, poly_Lt, poly_Ltj,
)
from lunimodal.perm import Composition

from strategies import compositions_up_to, with_index

small = compositions_up_to(7)


def terms(kind, k, max_total, index=None):
    return {t.comp.parts: t.coefficient for t in expand_family(kind, k, max_total, index)
            if t.coefficient}


def test_one_part_families():
    for n in range(1, 12):
        c = Composition((n,))
        assert count_L(c) == n
        assert count_Di(c, 1) == 1
        assert list(poly_Lt(c)) == [1] * n
        assert list(poly_Dti(c, 1)) == [0] * (n - 1) + [1]
        assert gelfand_G(c) == n % 2


def test_empty_composition():
    assert count_L(()) == 1
    assert gelfand_G(()) == 1
    assert list(poly_Lt(())) == [1]


def test_frozen_values_from_brute_force():
    assert count_L((4, 3, 2)) == 628
    assert count_L((1, 1)) == 2
    assert count_Lj((1, 1), 1) == 2
    assert [count_Lj((2, 2), j) for j in (1, 2)] == [6, 5]
    assert [count_Di((2, 2), i) for i in (1, 2)] == [2, 5]
    assert list(poly_Lt((2, 2))) == [3, 4, 3]
    assert list(poly_Ltj((2, 2), 1)) == [1, 2, 3]
    assert list(poly_Dti((2, 2), 2)) == [0, 2, 3]
    assert list(poly_Dti((3, 2), 1)) == [0, 0, 1, 1]
    assert list(poly_Lt((2, 3, 4))) == [19, 72, 138, 170, 138, 72, 19]
    assert list(poly_Lt((5, 4))) == [5, 14, 24, 31, 31, 24, 14, 5]
    assert count_L((3, 3, 3)) == 814
    assert gelfand_G((3, 3, 3)) == 10


def test_first_part_reduces_to_tail():
    assert count_Di((3, 2, 2), 1) == count_L((2, 2))
    assert list(poly_Dti((3, 2), 1)) == [0, 0] + list(poly_Lt((2,)))


def test_gelfand_printed_values():
    assert gelfand_G((1, 1)) == 2
    assert gelfand_G((2, 2)) == 2
    assert gelfand_G((3, 1)) == 1
    assert gelfand_G((1, 1, 1)) == 4
    assert gelfand_G((1, 1, 3)) == 2
    assert poly_Lt((1, 1, 3))(-1) == 2


def test_expand_family():
    assert terms("G", 1, 7) == {(1,): 1, (3,): 1, (5,): 1, (7,): 1}
    assert terms("G", 2, 4) == {(1, 1): 2, (1, 3): 1, (2, 2): 2, (3, 1): 1}
    assert terms("L", 1, 4) == {(1,): 1, (2,): 2, (3,): 3, (4,): 4}
    listed = [t.comp.parts for t in expand_family("L", 2, 4)]
    assert listed == [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)]
    with pytest.raises(ValueError):
        list(expand_family("Q", 1, 3))


def test_key_validation():
    with pytest.raises(ValueError):
        FamilyKey.make("Lj", (2, 2), 3)
    with pytest.raises(ValueError):
        FamilyKey.make("Di", (2, 2))
    with pytest.raises(ValueError):
        FamilyKey.make("L", (2, 2), 1)
    with pytest.raises(ValueError):
        count_Lj((2, 2), 0)


def test_descent_polynomial():
    p = DescentPolynomial((3, 4, 3))
    assert p(1) == 10 and p(-1) == 2 and p(0) == 3
    assert p.degree == 2
    assert list(p) == [3, 4, 3]


@pytest.mark.parametrize("kind", gf.KINDS)
def test_fast_and_literal_paths_agree(kind):
    fast, plain, literal = Engine(), Engine(symmetric=False), Engine(literal=True)
    for n in range(1, 9):
        for c in compositions(n):
            for idx in (range(1, c.k + 1) if kind in gf.INDEXED_KINDS else (None,)):
                key = FamilyKey.make(kind, c, idx)
                expected = literal.value(key)
                assert fast.value(key) == expected, key
                assert plain.value(key) == expected, key


@pytest.mark.parametrize("kind", gf.KINDS)
def test_memo_is_transparent(kind):
    memo, bare = Engine(), Engine(memo=False)
    for n in range(1, 8):
        for c in compositions(n):
            for idx in (range(1, c.k + 1) if kind in gf.INDEXED_KINDS else (None,)):
                key = FamilyKey.make(kind, c, idx)
                assert memo.value(key) == bare.value(key), key


def test_explicit_stack_handles_long_chains():
    # 400 ones: recursion depth in n would overflow the default interpreter limit
    c = Composition((1,) * 400)
    assert gelfand_G(c, Engine()) == count_L(c, Engine())


def test_tampered_cache_is_read_back():
    e = Engine()
    key = e.canonical(("L", 0, (1, 2)))
    e.value(key)
    e.cache[key] += 1
    assert count_L((2, 1), e) == 5


@given(small)
def test_counts_match_set_definitions(c):
    family = lambda_unimodal_involutions(c)
    assert count_L(c) == len(family)
    for j in range(1, c.k + 1):
        assert count_Lj(c, j) == sum(in_I_j(p, c, j) for p in family)
        assert count_Di(c, j) == sum(in_D_i(p, c, j) for p in family)


@given(with_index(small))
def test_polynomials_match_histograms(ci):
    c, j = ci
    family = lambda_unimodal_involutions(c)
    assert list(poly_Lt(c)) == descent_histogram(family, c)
    assert list(poly_Ltj(c, j)) == descent_histogram(
        [p for p in family if in_I_j(p, c, j)], c)
    assert list(poly_Dti(c, j)) == descent_histogram(
        [p for p in family if in_D_i(p, c, j)], c)


@given(with_index(small))
def test_gelfand_system_is_the_signed_count(ci):
    c, j = ci
    family = lambda_unimodal_involutions(c)
    assert gelfand_G(c) == signed_sum_over_family(family, c)
    assert gelfand_Gj(c, j) == signed_sum_over_family(
        [p for p in family if in_I_j(p, c, j)], c)
    assert gelfand_Hi(c, j) == signed_sum_over_family(
        [p for p in family if in_D_i(p, c, j)], c)


@given(with_index(compositions_up_to(12)))
def test_specializations_and_bounds(ci):
    c, j = ci
    lt = poly_Lt(c)
    assert lt(1) == count_L(c)
    assert lt(-1) == gelfand_G(c)
    assert poly_Ltj(c, j)(1) == count_Lj(c, j)
    assert poly_Dti(c, j)(-1) == gelfand_Hi(c, j)
    assert lt.degree <= c.n - c.k
    assert all(a >= 0 for a in lt)
    assert 0 <= count_Di(c, j) <= count_Lj(c, j) <= count_L(c)


@given(compositions_up_to(10, max_part=5))
def test_symmetric_families_ignore_part_order(c):
    plain = Engine(symmetric=False)
    shuffled = list(c.parts)
    random.Random(c.n).shuffle(shuffled)
    for kind in ("L", "Lt", "G"):
        assert plain.value((kind, 0, tuple(shuffled))) == plain.value((kind, 0, c.parts))


def test_all_rearrangements_of_a_three_part_class():
    plain = Engine(symmetric=False)
    values = {plain.value(("G", 0, p)) for p in permutations((1, 2, 4))}
    assert values == {gelfand_G((1, 2, 4))}


@given(compositions_up_to(10))
def test_d1_ignores_the_first_part(c):
    assert count_Di(c, 1) == count_Di((c.parts[0] + 2,) + c.parts[1:], 1)
    assert gelfand_Hi(c, 1) == (-1) ** (c.parts[0] - 1) * gelfand_G(c.parts[1:])
