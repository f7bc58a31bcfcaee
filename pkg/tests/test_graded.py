import itertools
import random
from math import comb

import pytest

from forge.graded import (Shuffle, TruncationContext, koszul_sign, merge_sign, perm_sign,
                          rational, shuffles, sort_with_sign, unshuffles)
from forge.sampling import random_element


def test_swap_of_odd_elements_is_negative():
    assert koszul_sign((1, 0), (1, 1)) == -1


def test_identity_permutation_is_positive():
    assert koszul_sign((0, 1, 2), (1, 3, 5)) == 1


def test_swap_with_even_element_is_positive():
    assert koszul_sign((1, 0), (2, 1)) == 1


def test_koszul_sign_rejects_bad_input():
    with pytest.raises(ValueError):
        koszul_sign((0, 0), (1, 1))
    with pytest.raises(ValueError):
        koszul_sign((1, 0), (1,))


def compose(s, t):
    # apply t first (positions), then s
    return tuple(t[s[i]] for i in range(len(s)))


def test_koszul_sign_is_multiplicative():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(1, 6)
        degs = [rng.randint(-2, 3) for _ in range(n)]
        t = list(range(n))
        s = list(range(n))
        rng.shuffle(t)
        rng.shuffle(s)
        permuted = [degs[t[i]] for i in range(n)]
        expected = koszul_sign(t, degs) * koszul_sign(s, permuted)
        assert koszul_sign(compose(s, t), degs) == expected


def test_perm_sign_counts_transpositions():
    assert perm_sign((1, 0, 2)) == -1
    assert perm_sign((1, 2, 0)) == 1


@pytest.mark.parametrize("k,l,count", [(1, 1, 2), (2, 1, 3), (0, 4, 1)])
def test_shuffle_counts(k, l, count):
    assert len(shuffles(k, l)) == count


def test_shuffle_of_empty_block_is_identity():
    assert shuffles(0, 3)[0].permutation == (1, 2, 3)


def test_shuffle_counts_are_binomial():
    for k, l in itertools.product(range(7), repeat=2):
        assert len(shuffles(k, l)) == comb(k + l, k)


def test_shuffle_rejects_decreasing_block():
    with pytest.raises(ValueError):
        Shuffle((2, 1), (2, 1, 3))


def test_unshuffles_partition_positions():
    splits = unshuffles(4, (2, 2))
    assert len(splits) == 6
    for a, b in splits:
        assert sorted(a + b) == [0, 1, 2, 3]


def test_anticommuting_sorts():
    assert sort_with_sign((2, 0, 1)) == (1, (0, 1, 2))
    assert sort_with_sign((1, 0)) == (-1, (0, 1))
    assert sort_with_sign((1, 1)) == (0, None)
    assert merge_sign((1,), (0,)) == (-1, (0, 1))
    assert merge_sign((0,), (0,)) == (0, None)


def test_context_validation():
    with pytest.raises(ValueError):
        TruncationContext(d=0)
    with pytest.raises(ValueError):
        TruncationContext(d=1, N_ar=0)
    assert TruncationContext(d=2).with_(N_y=7).N_y == 7


def test_rationals_are_exact():
    assert rational(1, 3) * 3 == 1
    assert rational(1, 3) + rational(1, 6) == rational(1, 2)


@pytest.mark.parametrize("kind,slots", [("polyvector", 2), ("polydiffop", 2), ("form", 1),
                                        ("chain", 2)])
def test_truncation_is_a_projection(kind, slots):
    ctx = TruncationContext(d=2, N_y=6)
    rng = random.Random(11)
    for _ in range(10):
        e = random_element(rng, ctx, kind, slots=slots, dy=(0, 1), xdeg=1, terms=4)
        once = e.truncate(3)
        assert once.truncate(3) == once
        assert all(once.ydeg_of(k) <= 3 for k in once.terms)
