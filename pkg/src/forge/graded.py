"""Sign discipline, shuffles, multi-indices and the truncation context."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from fractions import Fraction
from math import comb, factorial

try:
    from gmpy2 import mpq as rational
except ImportError:  # pragma: no cover
    rational = Fraction

RATIONAL_TYPES = (int, Fraction, type(rational(0)))


@dataclass(frozen=True)
class TruncationContext:
    """Global cutoffs shared by every construction.

    d is the chart dimension, N_y the largest total fiber degree kept,
    N_hbar the largest deformation order and N_ar the largest arity.
    """

    d: int
    N_y: int = 4
    N_hbar: int = 0
    N_ar: int = 3

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("chart dimension must be at least 1")
        for name in ("N_y", "N_hbar"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.N_ar < 1:
            raise ValueError("N_ar must be positive")

    def with_(self, **changes) -> "TruncationContext":
        fields = {"d": self.d, "N_y": self.N_y, "N_hbar": self.N_hbar, "N_ar": self.N_ar}
        fields.update(changes)
        return TruncationContext(**fields)


class Kind(Enum):
    POLYVECTOR = "polyvector"
    POLYDIFFOP = "polydiffop"
    CHAIN = "chain"
    FORM = "form"
    DYFORM = "dyform"
    HBAR = "hbar"


@dataclass(frozen=True)
class GradedSymbol:
    degree: int
    kind: Kind

    @property
    def parity(self) -> int:
        return self.degree % 2


@dataclass(frozen=True)
class Shuffle:
    """A permutation of 1..n increasing inside each block.

    ``permutation[i]`` is the image of i+1 (one-based values).
    """

    blocks: tuple[int, ...]
    permutation: tuple[int, ...]

    def __post_init__(self):
        if sum(self.blocks) != len(self.permutation):
            raise ValueError("block sizes do not add up to the permutation length")
        start = 0
        for size in self.blocks:
            part = self.permutation[start:start + size]
            if any(a >= b for a, b in zip(part, part[1:])):
                raise ValueError("shuffle must increase inside each block")
            start += size


def koszul_sign(perm, degrees) -> int:
    """Sign of permuting graded elements.

    ``perm[i]`` names which original element lands in position i
    (zero-based). The sign is the product of (-1)^(k_a k_b) over the
    pairs of elements whose relative order is reversed.
    """
    perm = list(perm)
    degrees = list(degrees)
    if len(perm) != len(degrees):
        raise ValueError("permutation and degree list have different lengths")
    if sorted(perm) != list(range(len(perm))):
        raise ValueError("not a permutation of 0..n-1")
    odd = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                odd += degrees[perm[i]] * degrees[perm[j]]
    return -1 if odd % 2 else 1


def perm_sign(perm) -> int:
    return koszul_sign(perm, [1] * len(perm))


def shuffles(k: int, l: int) -> list[Shuffle]:
    """All (k,l)-shuffles in lexicographic order of the permutation."""
    if k < 0 or l < 0:
        raise ValueError("block sizes must be non-negative")
    n = k + l
    out = []
    for first in combinations(range(1, n + 1), k):
        rest = tuple(i for i in range(1, n + 1) if i not in first)
        out.append(Shuffle((k, l), first + rest))
    out.sort(key=lambda s: s.permutation)
    return out


def unshuffles(n: int, sizes) -> list[tuple[tuple[int, ...], ...]]:
    """Ways to split positions 0..n-1 into ordered blocks of given sizes.

    Each block keeps increasing order. Used when expanding symmetric
    sums over shuffles.
    """
    sizes = list(sizes)
    if sum(sizes) != n:
        raise ValueError("sizes do not add up")

    def rec(pool, sizes):
        if not sizes:
            yield ()
            return
        for block in combinations(pool, sizes[0]):
            rest = tuple(p for p in pool if p not in block)
            for tail in rec(rest, sizes[1:]):
                yield (block,) + tail

    return list(rec(tuple(range(n)), sizes))


def sort_with_sign(indices):
    """Sort distinct anticommuting indices; return (sign, sorted) or (0, None)."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    # insertion sort counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


def merge_sign(a, b):
    """Product of two sorted anticommuting monomials."""
    if not a:
        return 1, tuple(b)
    if not b:
        return 1, tuple(a)
    if set(a) & set(b):
        return 0, None
    # count pairs (x in a, y in b) with x > y
    inv = sum(1 for x in a for y in b if x > y)
    return (-1 if inv % 2 else 1), tuple(sorted(a + b))


def remove_at(t, pos):
    return t[:pos] + t[pos + 1:]


# multi-indices are exponent tuples of length d

def zero_mono(d: int) -> tuple[int, ...]:
    return (0,) * d


def unit_mono(d: int, i: int) -> tuple[int, ...]:
    m = [0] * d
    m[i] = 1
    return tuple(m)


def mono_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_deg(a) -> int:
    return sum(a)


def mono_factorial(a) -> int:
    out = 1
    for e in a:
        out *= factorial(e)
    return out


def mono_leq(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomials_upto(d: int, deg: int):
    """All exponent tuples of total degree <= deg, graded-lex ordered."""
    out = []
    for total in range(deg + 1):
        out.extend(monomials_of_degree(d, total))
    return out


def monomials_of_degree(d: int, total: int):
    if d == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in monomials_of_degree(d - 1, total - first):
            out.append((first,) + rest)
    return out


def submonos(a):
    """All exponent tuples b <= a componentwise."""
    out = [()]
    for e in a:
        out = [p + (k,) for p in out for k in range(e + 1)]
    return out


def mono_binom(a, b) -> int:
    """Product of binomials C(a_i, b_i)."""
    out = 1
    for x, y in zip(a, b):
        out *= comb(x, y)
    return out


def compositions(a, parts: int):
    """Ordered splittings a = b_1 + ... + b_parts with multinomial weights.

    Yields (weight, (b_1, ..., b_parts)) with weight = a!/(b_1!...b_parts!).
    """
    if parts == 1:
        yield 1, (tuple(a),)
        return
    for first in submonos(a):
        w = mono_binom(a, first)
        rest = mono_sub(a, first)
        for w2, tail in compositions(rest, parts - 1):
            yield w * w2, (first,) + tail
