"""Maurer-Cartan elements and twisting of algebras, morphisms and modules.

A twist inserts copies of a degree-one element pi in front of the
arguments and sums with 1/k! weights. With the sign conventions used here
that insertion carries no extra sign.

Truncation: for an object that is not closed, the structure maps above its
arity are unknown, so a twisted relation at arity n is exact only when all
pi insertions beyond the arity vanish by filtration. The twisted object's
arity is therefore lowered by the filtration depth of pi, the number of
insertions that can survive.
"""
from __future__ import annotations

from math import factorial

from ..graded import rational
from .coalgebra import coalgebra_map, coderivation, cxp, extend, morphism_map, multiply, \
    vector_element
from .relations import _set_partitions, partition_sign
from .structures import ALGEBRA_SIGN, LinftyError, LinftyModule, LinftyMorphism, LinftySpace, \
    MapTable, MCElement, ModuleMorphism, canonical_words, clean, decalage, vec_add


class NotMaurerCartan(LinftyError):
    """The element fails the Maurer-Cartan equation."""


def _as_mc(space, pi):
    if isinstance(pi, MCElement):
        if pi.space is not space:
            raise LinftyError("MC element belongs to a different algebra")
        return pi
    return MCElement(space, dict(pi))


def depth(pi_vec, space_basis, out_basis):
    """Largest number of pi insertions that can land at a nonzero level."""
    if not pi_vec:
        return 0
    p = space_basis.vector_level(pi_vec)
    return out_basis.max_level() // p


def filtration_defects(obj):
    out = []
    for n, t in obj.maps.items():
        for key in t.filtration_defects():
            out.append((n, key))
    return out


def _require_filtered(*objs):
    for obj in objs:
        if obj.closed:
            continue
        bad = filtration_defects(obj)
        if bad:
            n, key = bad[0]
            raise LinftyError(f"structure map of arity {n} lowers the filtration at {key}")


def _insert(table_for, n, total, pi, args, v=None):
    """sum_k 1/k! T_{n+k}(pi^k, args) in the unshifted picture."""
    out = {}
    for k in range(0, total - n + 1):
        t = table_for(n + k)
        if not t:
            continue
        if k and not pi:
            break
        val = t.on_vectors([pi] * k + args, v, shifted=False)
        if val:
            vec_add(out, val, rational(1, factorial(k)))
    return out


def _twisted_tables(maps, total, pi, source, target, shift_of, lo, *, module=None, sign=1,
                    label="map", new_arity):
    tables = {}
    for n in range(lo, new_arity + 1):
        entries = {}
        for word in canonical_words(source, n):
            args = [{i: rational(1)} for i in word]
            if module is None:
                val = _insert(maps.get, n, total, pi, args)
                if val:
                    entries[word] = val
            else:
                for v in range(len(module)):
                    val = _insert(maps.get, n, total, pi, args, v)
                    if val:
                        entries[(word, v)] = val
        tables[n] = MapTable(n, entries, source, target, shift_of(n), module=module, sign=sign,
                             label=f"{label}{n}")
    return tables


def _new_arity(obj, d):
    if obj.closed:
        return obj.arity
    a = obj.arity - d
    if a < 1:
        raise LinftyError(f"filtration depth {d} exhausts arity {obj.arity}")
    return a


# ---------------------------------------------------------------- MC equation

def mc_residual(space, pi):
    """sum_n 1/n! Q_n(pi, ..., pi); for a DGLA this is d pi + 1/2 [pi, pi]."""
    pi = _as_mc(space, pi)
    return _mc_series(space.q, space.arity, pi.vector)


def _mc_series(table_for, total, vec):
    out = {}
    for n in range(1, total + 1):
        t = table_for(n)
        if t and vec:
            vec_add(out, t.on_vectors([vec] * n, shifted=False), rational(1, factorial(n)))
    return out


def _top_arity(space):
    return max((n for n, t in space.maps.items() if t), default=1)


def mc_coalgebra_residual(space, pi):
    """Q(cxp(pi)) on word lengths where the truncation is exact."""
    pi = _as_mc(space, pi)
    sh = space.basis.shifted
    e = cxp(pi.vector, space.arity, sh)
    q = extend(coderivation(space))(e)
    keep = space.arity - _top_arity(space) + 1
    return {w: c for w, c in q.items() if len(w) <= keep}


def mc_check(space, pi):
    """Report of the MC equation: residual vector and coalgebra form."""
    pi = _as_mc(space, pi)
    return {"residual": clean(mc_residual(space, pi)),
            "coalgebra": mc_coalgebra_residual(space, pi)}


def is_mc(space, pi):
    r = mc_check(space, pi)
    return not r["residual"] and not r["coalgebra"]


def _require_mc(space, pi):
    pi = _as_mc(space, pi)
    res = clean(mc_residual(space, pi))
    if res:
        raise NotMaurerCartan(
            "Maurer-Cartan equation d pi + 1/2 [pi, pi] = 0 fails: residual "
            + str(space.basis.named(res)))
    return pi


# ---------------------------------------------------------------- algebra

def twist_algebra(space, pi):
    """Algebra with Q^pi_n(x) = sum_k 1/k! Q_{n+k}(pi^k, x); for a DGLA, d + [pi, -]."""
    pi = _require_mc(space, pi)
    _require_filtered(space)
    d = depth(pi.vector, space.basis, space.basis)
    arity = _new_arity(space, d)
    maps = _twisted_tables(space.maps, space.arity, pi.vector, space.basis, space.basis,
                           lambda n: 2 - n, 1, sign=ALGEBRA_SIGN, label="Q", new_arity=arity)
    return LinftySpace(space.basis, maps, arity, closed=space.closed)


def mc_pushforward(F, pi):
    """S = sum_n 1/n! F_n(pi, ..., pi), an MC element of the target."""
    pi = _require_mc(F.source, pi)
    _require_filtered(F)
    vec = _mc_series(F.f, F.arity, pi.vector)
    return MCElement(F.target, clean(vec))


def twist_morphism(F, pi, source=None, target=None):
    """F^pi_n(x) = sum_k 1/k! F_{n+k}(pi^k, x), between the twisted algebras."""
    pi = _require_mc(F.source, pi)
    _require_filtered(F, F.source, F.target)
    S = mc_pushforward(F, pi)
    source = source or twist_algebra(F.source, pi)
    target = target or twist_algebra(F.target, S)
    d = max(depth(pi.vector, F.source.basis, F.source.basis),
            depth(pi.vector, F.source.basis, F.target.basis))
    arity = min(_new_arity(F, d), source.arity, target.arity)
    maps = _twisted_tables(F.maps, F.arity, pi.vector, F.source.basis, F.target.basis,
                           lambda n: 1 - n, 1, label="F", new_arity=arity)
    return LinftyMorphism(source, target, maps, arity, closed=F.closed)


def twist_module(M, pi, algebra=None):
    """phi^pi_n(x, v) = sum_k 1/k! phi_{n+k}(pi^k, x, v) over the twisted algebra."""
    pi = _require_mc(M.algebra, pi)
    _require_filtered(M, M.algebra)
    algebra = algebra or twist_algebra(M.algebra, pi)
    d = max(depth(pi.vector, M.algebra.basis, M.basis),
            depth(pi.vector, M.algebra.basis, M.algebra.basis))
    arity = min(_new_arity(M, d), algebra.arity)
    maps = _twisted_tables(M.maps, M.arity, pi.vector, M.algebra.basis, M.basis,
                           lambda n: 1 - n, 0, module=M.basis, label="phi", new_arity=arity)
    return LinftyModule(algebra, M.basis, maps, arity, closed=M.closed)


def twist_module_morphism(K, pi):
    """kappa^pi_n(x, v) = sum_k 1/k! kappa_{n+k}(pi^k, x, v) between twisted modules."""
    alg = K.source.algebra
    pi = _require_mc(alg, pi)
    _require_filtered(K, K.source, K.target, alg)
    talg = twist_algebra(alg, pi)
    src = twist_module(K.source, pi, talg)
    tgt = twist_module(K.target, pi, talg)
    d = max(depth(pi.vector, alg.basis, b) for b in (alg.basis, K.source.basis, K.target.basis))
    arity = min(_new_arity(K, d), src.arity, tgt.arity)
    maps = _twisted_tables(K.maps, K.arity, pi.vector, alg.basis, K.target.basis,
                           lambda n: -n, 0, module=K.source.basis, label="kappa",
                           new_arity=arity)
    return ModuleMorphism(src, tgt, maps, arity, closed=K.closed)


# ---------------------------------------------------------------- composition

def compose(G, F):
    """The composite morphism G o F with (G o F)_n = sum over partitions of G_k(F, ..., F)."""
    if F.target.basis != G.source.basis:
        raise LinftyError("morphisms are not composable")
    arity = min(F.arity, G.arity)
    sh = F.source.basis.shifted
    maps = {}
    for n in range(1, arity + 1):
        entries = {}
        for word in canonical_words(F.source.basis, n):
            out = {}
            for blocks in _set_partitions(n):
                k = len(blocks)
                if not G.f(k):
                    continue
                vecs = [F.f(len(b)).shifted(tuple(word[p] for p in b)) for b in blocks]
                if not all(vecs):
                    continue
                vec_add(out, G.f(k).on_vectors(vecs), partition_sign(word, sh, blocks))
            if out:
                e = decalage(word, sh)
                entries[word] = {i: e * c for i, c in out.items()}
        maps[n] = MapTable(n, entries, F.source.basis, G.target.basis, 1 - n, label=f"F{n}")
    linear = lambda M: all(not M.f(m) for m in range(2, M.arity + 1))
    closed = F.closed and G.closed and (linear(F) or linear(G))
    return LinftyMorphism(F.source, G.target, maps, arity, closed=closed)


def same_maps(A, B, upto=None):
    """Structure maps of two morphisms agree up to the given arity."""
    upto = upto or min(A.arity, B.arity)
    return all(A.maps[n].entries == B.maps[n].entries for n in range(1, upto + 1))


# ---------------------------------------------------------------- coalgebra identities

def pushforward_defect(F, pi, lengths=2):
    """F(cxp(pi)) - cxp(S) on word lengths up to ``lengths``."""
    pi = _require_mc(F.source, pi)
    S = mc_pushforward(F, pi)
    sh, tsh = F.source.basis.shifted, F.target.basis.shifted
    d = depth(pi.vector, F.source.basis, F.target.basis)
    reach = F.arity if F.closed or not d else min(F.arity, d)
    e = cxp(pi.vector, lengths * reach, sh)
    image = extend(morphism_map(F))(e)
    image = {w: c for w, c in image.items() if len(w) <= lengths}
    target = cxp(S.vector, lengths, tsh)
    vec_add(image, target, -1)
    return image


# ---------------------------------------------------------------- gauge directions

def twisted_differential(space, pi, vec):
    """sum_k 1/k! Q_{k+1}(pi^k, x); for a DGLA, d x + [pi, x]."""
    pi = _as_mc(space, pi)
    return _insert(space.q, 1, space.arity, pi.vector, [vec])


def gauge_direction(space, pi, xi):
    """Infinitesimal gauge motion of pi along a degree-zero xi."""
    if space.basis.vector_degree(xi) not in (0, None):
        raise LinftyError("gauge parameter must have degree zero")
    return twisted_differential(space, pi, xi)


def tangency_residual(space, pi, xi):
    """d pi' + [pi, pi'] for pi' the gauge direction; zero when pi is MC."""
    direction = gauge_direction(space, pi, xi)
    return clean(twisted_differential(space, pi, direction))
