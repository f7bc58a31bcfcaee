"""Sparse elements of the truncated symmetric coalgebra S(V), V = L[1].

Only individual elements are built, never the whole coalgebra. Elements
are dicts from sorted index words to coefficients; tensors are dicts from
word pairs. Used for partial homotopies and for coalgebra-level identities
(co-Leibniz, group-like exponentials, morphisms of coalgebras).
"""
from __future__ import annotations

from math import factorial

from ..graded import rational
from .relations import _set_partitions, _splits, partition_sign, split_sign
from .structures import HOMOTOPY_SIGN, LinftyError, MapTable, canonical_words, sort_shifted, \
    vec_add


def add_into(acc, elem, scale=1):
    return vec_add(acc, elem, scale)


def word_degree(word, shifted):
    return sum(shifted[i] for i in word)


def multiply(a, b, shifted):
    """Product in S(V)."""
    out = {}
    for u, x in a.items():
        for v, y in b.items():
            s, w = sort_shifted(u + v, shifted)
            if s:
                out[w] = out.get(w, 0) + s * x * y
    return {k: c for k, c in out.items() if c}


def vector_element(vec):
    return {(i,): c for i, c in vec.items() if c}


def coproduct(elem, shifted):
    """Reduced coproduct, both tensor factors nonempty."""
    out = {}
    for w, c in elem.items():
        for part, rest in _splits(len(w)):
            if not part or not rest:
                continue
            s = split_sign(w, shifted, part, rest)
            key = (tuple(w[p] for p in part), tuple(w[p] for p in rest))
            out[key] = out.get(key, 0) + s * c
    return {k: c for k, c in out.items() if c}


def tensor_apply(left, right, tensor, right_degree, shifted):
    """(A (x) B)(x (x) y) = (-1)^{|B||x|} A(x) (x) B(y)."""
    out = {}
    for (u, v), c in tensor.items():
        a = left(u)
        if not a:
            continue
        b = right(v)
        if not b:
            continue
        if right_degree % 2 and word_degree(u, shifted) % 2:
            c = -c
        for x, p in a.items():
            for y, q in b.items():
                out[(x, y)] = out.get((x, y), 0) + c * p * q
    return {k: c for k, c in out.items() if c}


def extend(func):
    """Linear extension of a word map to elements."""
    def apply(elem):
        out = {}
        for w, c in elem.items():
            add_into(out, func(w), c)
        return out
    return apply


def coderivation(space):
    """The coderivation of S(V) with components Q_n, as a word map."""
    sh = space.basis.shifted

    def q(word):
        out = {}
        for part, rest in _splits(len(word)):
            if not part or len(part) > space.arity:
                continue
            t = space.q(len(part))
            if not t:
                continue
            vec = t.shifted(tuple(word[p] for p in part))
            if not vec:
                continue
            s = split_sign(word, sh, part, rest)
            add_into(out, multiply(vector_element(vec), {tuple(word[p] for p in rest): 1}, sh),
                     s)
        return out
    return q


def coalgebra_map(maps, arity, source_shifted, target_shifted):
    """Coalgebra morphism from components maps[n] (degree zero, shifted)."""
    cache = {}

    def f(word):
        if word in cache:
            return cache[word]
        out = {}
        for blocks in _set_partitions(len(word)):
            elem = {(): 1}
            for blk in blocks:
                if len(blk) > arity:
                    elem = None
                    break
                vec = maps[len(blk)](tuple(word[p] for p in blk))
                if not vec:
                    elem = None
                    break
                elem = multiply(elem, vector_element(vec), target_shifted)
                if not elem:
                    break
            if elem:
                add_into(out, elem, partition_sign(word, source_shifted, blocks))
        cache[word] = out
        return out
    return f


def morphism_map(F):
    return coalgebra_map({n: F.f(n).shifted for n in range(1, F.arity + 1)}, F.arity,
                         F.source.basis.shifted, F.target.basis.shifted)


def projection(elem, length):
    return {w: c for w, c in elem.items() if len(w) == length}


def cxp(vec, arity, shifted):
    """exp(x) - 1 truncated at the given word length, for an even shifted vector."""
    out = {}
    power = {(): 1}
    x = vector_element(vec)
    for n in range(1, arity + 1):
        power = multiply(power, x, shifted)
        add_into(out, power, rational(1, factorial(n)))
    return out


def truncate(elem, arity):
    return {w: c for w, c in elem.items() if len(w) <= arity}


# ---------------------------------------------------------------- identities

def co_leibniz_defects(space):
    """Words where Delta Q != (Q (x) 1 + 1 (x) Q) Delta."""
    sh = space.basis.shifted
    q = coderivation(space)
    one = lambda w: {w: 1}
    bad = []
    for n in range(1, space.arity + 1):
        for word in canonical_words(space.basis, n):
            lhs = coproduct(q(word), sh)
            d = coproduct({word: 1}, sh)
            rhs = tensor_apply(q, one, d, 0, sh)
            add_into(rhs, tensor_apply(one, q, d, 1, sh))
            if lhs != {k: v for k, v in rhs.items() if v}:
                bad.append(word)
    return bad


def grouplike_defect(vec, arity, shifted):
    """Delta(cxp x) - cxp x (x) cxp x, truncated at total length arity."""
    e = cxp(vec, arity, shifted)
    lhs = coproduct(e, shifted)
    rhs = {}
    for u, a in e.items():
        for v, b in e.items():
            if len(u) + len(v) <= arity:
                rhs[(u, v)] = rhs.get((u, v), 0) + a * b
    add_into(lhs, rhs, -1)
    return lhs


def morphism_defects(source, target, F_map, arity):
    """Words where Delta F != (F (x) F) Delta."""
    sh, tsh = source.basis.shifted, target.basis.shifted
    bad = []
    for n in range(1, arity + 1):
        for word in canonical_words(source.basis, n):
            lhs = coproduct(F_map(word), tsh)
            rhs = tensor_apply(F_map, F_map, coproduct({word: 1}, sh), 0, sh)
            add_into(lhs, rhs, -1)
            if lhs:
                bad.append(word)
    return bad


# ---------------------------------------------------------------- partial homotopy

class TPoly:
    """Polynomial in the path parameter t with rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def const(cls, x):
        return cls((x,))

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if not isinstance(other, TPoly):
            other = TPoly((other,))
        return self.c == other.c

    def __add__(self, other):
        if not isinstance(other, TPoly):
            other = TPoly((other,))
        n = max(len(self.c), len(other.c))
        a = self.c + (0,) * (n - len(self.c))
        b = other.c + (0,) * (n - len(other.c))
        return TPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return TPoly(-x for x in self.c)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TPoly):
            return TPoly(other * x for x in self.c)
        out = [0] * max(len(self.c) + len(other.c) - 1, 0)
        for i, x in enumerate(self.c):
            for j, y in enumerate(other.c):
                out[i + j] += x * y
        return TPoly(out)

    __rmul__ = __mul__

    def integral(self):
        return TPoly((0,) + tuple(x * rational(1, i + 1) for i, x in enumerate(self.c)))

    def at_one(self):
        return sum(self.c, rational(0))


def partial_homotopy(F, h_table, n):
    """Modify F by a partial homotopy whose only structure map is h at arity n.

    The result is the endpoint of the path F_t with dF_t/dt = Q'H_t + H_t Q,
    where H_t is the (F_t, F_t)-coderivation with structure map h. It agrees
    with F below arity n, and at arity n it equals F_n + Q'_1 h + h Q_1.
    ``h_table`` is an unshifted table {index tuple: vector} of degree -n.
    """
    from .relations import _insert_front, coderivation_terms
    from .structures import LinftyMorphism, decalage

    if not 1 <= n <= F.arity:
        raise LinftyError(f"homotopy arity {n} outside 1..{F.arity}")
    if not isinstance(h_table, MapTable):
        h_table = MapTable(n, h_table, F.source.basis, F.target.basis, -n,
                           sign=HOMOTOPY_SIGN, label="H")
    elif h_table.degree_shift != -n or h_table.arity != n:
        raise LinftyError("homotopy table has the wrong arity or degree")
    src, tgt = F.source, F.target
    sh = src.basis.shifted
    comps = {}

    def f_t(word):
        s, canon = sort_shifted(word, sh)
        if not s:
            return {}
        vec = comps[len(word)].get(canon)
        return {i: s * c for i, c in vec.items()} if vec else {}

    for m in range(1, F.arity + 1):
        comps[m] = {}
        for word in canonical_words(src.basis, m):
            vec = {i: TPoly.const(c) for i, c in F.f(m).shifted(word).items()}
            if m >= n:
                rate = {}
                for qvec, rest, sign in coderivation_terms(src, word):
                    if len(rest) + 1 == n:
                        vec_add(rate, _insert_front(h_table, qvec, rest), sign)
                rate = {i: TPoly.const(c) for i, c in rate.items()}
                for blocks in _set_partitions(m):
                    k = len(blocks)
                    if k > tgt.arity or not tgt.q(k):
                        continue
                    if any(len(b) > F.arity for b in blocks):
                        continue
                    base_sign = partition_sign(word, sh, blocks)
                    for pos, blk in enumerate(blocks):
                        if len(blk) != n:
                            continue
                        vecs = []
                        for j, b in enumerate(blocks):
                            w = tuple(word[p] for p in b)
                            vecs.append(h_table.shifted(w) if j == pos else f_t(w))
                            if not vecs[-1]:
                                break
                        else:
                            passed = sum(sh[word[p]] for b in blocks[:pos] for p in b)
                            sign = -base_sign if passed % 2 else base_sign
                            vec_add(rate, tgt.q(k).on_vectors(vecs), sign)
                for i, c in rate.items():
                    c = c if isinstance(c, TPoly) else TPoly.const(c)
                    vec_add(vec, {i: c.integral()})
            if vec:
                comps[m][word] = vec
    maps = {}
    for m, table in comps.items():
        entries = {}
        for word, vec in table.items():
            e = decalage(word, sh)
            val = {i: e * c.at_one() for i, c in vec.items()}
            val = {i: c for i, c in val.items() if c}
            if val:
                entries[word] = val
        maps[m] = MapTable(m, entries, src.basis, tgt.basis, 1 - m, label=f"F{m}")
    return LinftyMorphism(src, tgt, maps, F.arity, closed=False)
