import random

import pytest
from hypothesis import given

from lunimodal import gf
from lunimodal.bulk import PRIMES, BulkCounter, bulk_count, involution_count
from lunimodal.enumerate import compositions
from lunimodal.perm import Composition

from strategies import compositions_up_to, with_index


def test_prime_table():
    sympy = pytest.importorskip("sympy")
    assert len(set(PRIMES)) == len(PRIMES)
    assert all(sympy.isprime(p) and p < 2 ** 55 for p in PRIMES)


def test_involution_count():
    assert [involution_count(n) for n in range(11)] == \
        [1, 1, 2, 4, 10, 26, 76, 232, 764, 2620, 9496]


def test_agrees_with_engine_on_all_small_compositions():
    engine = gf.Engine()
    for n in range(1, 9):
        for c in compositions(n):
            counter = BulkCounter(c, check=True)
            assert counter.count("L") == engine.evaluate("L", c)
            for j in range(1, c.k + 1):
                assert counter.count("Lj", j) == engine.evaluate("Lj", c, j)
                assert counter.count("Di", j) == engine.evaluate("Di", c, j)


@given(with_index(compositions_up_to(40, max_part=15)))
def test_agrees_with_engine_on_random_compositions(ci):
    c, j = ci
    engine = gf.Engine()
    for kind, idx in (("L", None), ("Lj", j), ("Di", j)):
        assert BulkCounter(c, check=True).count(kind, idx) == engine.evaluate(kind, c, idx)


def test_frozen_large_values():
    # values from the key-by-key engine
    assert bulk_count((12, 7, 9, 3, 9)) == 4598366005136
    assert bulk_count((12, 7, 9, 3, 9), "Lj", 2) == 223476523966
    assert bulk_count((12, 7, 9, 3, 9), "Di", 3) == 2605576259
    assert bulk_count((6, 28, 5, 11, 2, 2, 9, 3, 32, 2)) == 458497020108504042418903408928


def test_count_functions_switch_to_bulk_for_large_n():
    c = Composition((12, 7, 9, 3, 9))
    assert c.n >= gf.BULK_MIN_N
    assert gf.count_L(c) == gf.count_L(c, gf.Engine())
    assert gf.count_Di(c, 4) == gf.count_Di(c, 4, gf.Engine())
    with pytest.raises(ValueError):
        gf.count_Lj(c, 6)


def test_huge_parts_use_wider_rows():
    assert bulk_count((300,)) == 300
    with pytest.raises(ValueError, match="too large"):
        BulkCounter((2000,))
    assert bulk_count((256, 1)) == gf.Engine().evaluate("L", (256, 1))


def test_bad_requests():
    with pytest.raises(ValueError):
        BulkCounter((2, 0))
    with pytest.raises(ValueError):
        BulkCounter((2, 2)).count("Lt")
    with pytest.raises(ValueError):
        BulkCounter((2, 2)).count("Di", 3)


def test_reusing_a_counter():
    counter = BulkCounter((4, 2, 3))
    engine = gf.Engine()
    assert [counter.count("Di", i) for i in (1, 2, 3)] == \
        [engine.evaluate("Di", (4, 2, 3), i) for i in (1, 2, 3)]
    assert counter.count("L") == engine.evaluate("L", (4, 2, 3))


def test_values_are_exact_beyond_int64():
    rng = random.Random(7)
    cuts = sorted(rng.sample(range(1, 80), 5))
    parts = tuple(b - a for a, b in zip([0] + cuts, cuts + [80]))
    value = bulk_count(parts)
    assert value > 2 ** 64
    assert value == gf.Engine().evaluate("L", parts)
