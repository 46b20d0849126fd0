from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, strategies as st

from lunimodal.characters import (
    BruteForceRefused, CharacterValue, Method, Partition, _mn, border_strip_removals,
    gelfand, irreducible_character, partitions, regular_character,
)
from lunimodal.enumerate import all_lambda_unimodal, compositions, signed_sum_over_family
from lunimodal.perm import Composition

from strategies import compositions_up_to

METHODS = ("recurrence", "signed-sum", "murnaghan-nakayama")

# Character table of S_3 by brute force: classes (1,1,1), (2,1), (3).
S3_TABLE = {(3,): (1, 1, 1), (2, 1): (2, 0, -1), (1, 1, 1): (1, -1, 1)}


@pytest.mark.parametrize("method", METHODS)
def test_printed_values(method):
    assert gelfand((1, 1, 3), method).value == 2
    assert gelfand((5,), method).value == 1
    assert gelfand((4,), method).value == 0
    assert gelfand((1, 1, 1, 1), method).value == 10


def test_character_value_record():
    cv = gelfand(Composition((2, 2)), "mn")
    assert cv == CharacterValue(Composition((2, 2)), 2, Method.MURNAGHAN_NAKAYAMA)


def test_method_names():
    assert Method.parse("mn") is Method.MURNAGHAN_NAKAYAMA
    assert Method.parse("signed-sum") is Method.SIGNED_SUM
    with pytest.raises(ValueError):
        Method.parse("guess")


def test_signed_sum_refuses_above_limit():
    with pytest.raises(BruteForceRefused):
        gelfand((11,), "signed-sum")
    assert gelfand((3, 3), "signed-sum", brute_force_limit=6).value == \
        gelfand((3, 3)).value
    with pytest.raises(BruteForceRefused):
        gelfand((3, 3), "signed-sum", brute_force_limit=5)
    # the other methods have no such cap
    assert gelfand((11,), "mn").value == 1


def test_empty_class_is_rejected():
    with pytest.raises(ValueError):
        gelfand(())
    with pytest.raises(ValueError):
        regular_character(())


def test_s3_character_table():
    classes = [(1, 1, 1), (2, 1), (3,)]
    for mu, row in S3_TABLE.items():
        assert tuple(irreducible_character(mu, c) for c in classes) == row


def test_trivial_and_sign_characters():
    for n in range(1, 8):
        for c in compositions(n):
            assert irreducible_character((n,), c) == 1
            assert irreducible_character((1,) * n, c) == (-1) ** (n - c.k)


def test_size_mismatch():
    with pytest.raises(ValueError):
        irreducible_character((2, 1), (2, 2))


def test_empty_partition_floor():
    assert irreducible_character(Partition(()), ()) == 1


def test_partitions():
    assert [p.parts for p in partitions(4)] == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert [sum(1 for _ in partitions(n)) for n in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]
    assert Partition((3, 1, 1)).conjugate() == Partition((3, 1, 1))
    assert Partition((4, 2)).conjugate() == Partition((2, 2, 1, 1))
    with pytest.raises(ValueError):
        Partition((1, 2))


def test_border_strips_of_a_hook():
    assert sorted(border_strip_removals((3, 1, 1), 5)) == [((), 2)]
    assert sorted(border_strip_removals((2, 2), 2)) == [((1, 1), 1), ((2,), 0)]


@pytest.mark.parametrize("n", range(1, 9))
def test_column_orthogonality_at_identity(n):
    assert sum(irreducible_character(mu, (1,) * n) ** 2 for mu in partitions(n)) == factorial(n)


@given(compositions_up_to(8))
def test_cycle_order_does_not_matter(c):
    # the public function sorts the cycles, so go through the raw recursion
    for mu in partitions(c.n):
        expected = irreducible_character(mu, c)
        for perm in set(permutations(c.parts)):
            assert _mn(mu.parts, perm) == expected


@given(compositions_up_to(7))
def test_three_methods_agree(c):
    assert len({gelfand(c, m).value for m in METHODS}) == 1


@given(st.integers(1, 7))
def test_regular_character(n):
    assert regular_character((1,) * n) == factorial(n)
    for c in compositions(n):
        expected = signed_sum_over_family(all_lambda_unimodal(c), c) if n <= 6 else None
        value = regular_character(c)
        assert value == (factorial(n) if c.k == n else 0)
        if expected is not None:
            assert value == expected


def test_regular_character_examples():
    assert regular_character((1, 1, 1, 1)) == 24
    assert regular_character((2, 1, 1)) == 0
    assert regular_character((5,)) == 0
