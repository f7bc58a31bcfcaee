"""Hochschild cochains and chains of the fiber algebra.

Operators insert into each other by the graded insertion product, the
bracket is its graded commutator, and cochains act on chains with the
cyclic wrap-around terms included.
"""
from __future__ import annotations

from itertools import permutations

from ..graded import (compositions, rational, merge_sign, mono_add, mono_deg, perm_sign,
                      sort_with_sign, unit_mono, zero_mono)
from .algebra import Accumulator, bilinear, falling, unary
from .carriers import ExtForm, HochChain, PolyDiffOp, PolyVecField, accumulate, operator


def _opdeg(slot):
    return len(slot) - 1


def _insert_terms(y1, a, y2, b):
    """Fiber part of (y1 d^a) . (y2 d^b) for single terms, with insertion signs."""
    k1, k2 = len(a) - 1, len(b) - 1
    if k1 < 0:
        return
    for i in range(k1 + 1):
        sign = -1 if (i * k2) % 2 else 1
        for w, parts in compositions(a[i], k2 + 2):
            coef, ycoef = falling(y2, parts[0])
            if not coef:
                continue
            middle = tuple(mono_add(b[t], parts[t + 1]) for t in range(k2 + 1))
            yield mono_add(y1, ycoef), a[:i] + middle + a[i + 1:], sign * w * coef


def bullet(p1: PolyDiffOp, p2: PolyDiffOp) -> PolyDiffOp:
    """Insertion product p1 . p2 (sum over slots of p1 with signs (-)^(i k2))."""
    return bilinear(p1, p2, _insert_terms, _opdeg, PolyDiffOp)


def gerstenhaber_into(acc, p1: PolyDiffOp, p2: PolyDiffOp):
    acc.add(p1, p2, _insert_terms, _opdeg)
    # split both sides by parity to get the swap sign per pair of parities
    for par1, q1 in _by_parity(p1):
        for par2, q2 in _by_parity(p2):
            acc.add(q2, q1, _insert_terms, _opdeg, scale=1 if (par1 * par2) % 2 else -1)
    return acc


def gerstenhaber(p1: PolyDiffOp, p2: PolyDiffOp) -> PolyDiffOp:
    """[p1, p2] = p1 . p2 - (-)^(|p1||p2|) p2 . p1, degrees include dy-forms."""
    return gerstenhaber_into(Accumulator(p1.ctx, PolyDiffOp), p1, p2).result()


def _by_parity(e):
    groups = {0: {}, 1: {}}
    for k, c in e.terms.items():
        groups[e.parity_of(k)][k] = c
    return [(p, type(e).trusted(e.ctx, t)) for p, t in groups.items() if t]


def multiplication(ctx) -> PolyDiffOp:
    """The commutative product of the fiber algebra as a 2-slot operator."""
    z = zero_mono(ctx.d)
    return operator(ctx, 1, (z, z))


def hoch_diff(p: PolyDiffOp) -> PolyDiffOp:
    return gerstenhaber(multiplication(p.ctx), p)


def cup(p1: PolyDiffOp, p2: PolyDiffOp) -> PolyDiffOp:
    """Slot concatenation with the outputs multiplied.

    The dy-part of p2 moves past the slots of p1, costing (-1)^(#slots * |dy|).
    """
    def op(y1, a, y2, b):
        yield mono_add(y1, y2), a + b, 1

    return bilinear(p1, p2, op, lambda s: len(s), PolyDiffOp)


def apply(p: PolyDiffOp, args) -> PolyDiffOp:
    """Evaluate p on dy-free functions; returns a function (no slots)."""
    out = {}
    for (w, x, y, slots), c in p.terms.items():
        if len(slots) != len(args):
            raise ValueError("argument count does not match operator arity")
        partial = {(x, y): c}
        for alpha, f in zip(slots, args):
            nxt = {}
            for (xx, yy), cc in partial.items():
                for (w2, x2, y2, s2), c2 in f.terms.items():
                    if w2 or s2:
                        raise ValueError("arguments must be dy-free functions")
                    coef, ym = falling(y2, alpha)
                    if coef:
                        accumulate(nxt, (mono_add(xx, x2), mono_add(yy, ym)), cc * c2 * coef)
            partial = nxt
        for (xx, yy), cc in partial.items():
            accumulate(out, (w, xx, yy, ()), cc)
    return PolyDiffOp(p.ctx, out)


# -- chains -----------------------------------------------------------------------

def _eval_on_monos(y, alphas, monos):
    coef = 1
    m = y
    for a, mono in zip(alphas, monos):
        c, r = falling(mono, a)
        if not c:
            return 0, None
        coef *= c
        m = mono_add(m, r)
    return coef, m


def _chain_terms(y, alphas, _y2, monos):
    k = len(alphas) - 1
    n = len(monos) - 1
    if k > n:
        return
    if k < 0:
        # the first sum runs over i = 0..n+1; the second sum has the reversed
        # range j = n+1..n-1, read as minus its j = n term, which cancels i = 0
        for i in range(1, n + 2):
            yield (0,) * len(y), monos[:i] + (y,) + monos[i:], -1 if i % 2 else 1
        return
    for i in range(n - k + 1):
        c, m = _eval_on_monos(y, alphas, monos[i:i + k + 1])
        if c:
            sign = -1 if (k * i) % 2 else 1
            yield (0,) * len(y), monos[:i] + (m,) + monos[i + k + 1:], sign * c
    for j in range(n - k, n):
        args = monos[j + 1:] + monos[:k + j - n + 1]
        c, m = _eval_on_monos(y, alphas, args)
        if c:
            sign = -1 if (n * (j + 1)) % 2 else 1
            yield (0,) * len(y), (m,) + monos[k + j + 1 - n:j + 1], sign * c


def chain_action(p: PolyDiffOp, a: HochChain) -> HochChain:
    """R_p on chains; zero when the operator has more slots than the chain."""
    return bilinear(p, a, _chain_terms, _opdeg, HochChain, ctx=a.ctx)


def chain_diff(a: HochChain) -> HochChain:
    return chain_action(multiplication(a.ctx), a)


def pair(p: PolyDiffOp, a: HochChain) -> PolyDiffOp:
    """Apply a (k+1)-slot operator to a chain with k+1 factors, on the diagonal."""
    def op(y, alphas, _y2, monos):
        if len(alphas) != len(monos):
            return
        c, m = _eval_on_monos(y, alphas, monos)
        if c:
            yield m, (), c

    return bilinear(p, a, op, _opdeg, PolyDiffOp, ctx=p.ctx)


# -- HKR maps ---------------------------------------------------------------------

def hkr_V(v: PolyVecField) -> PolyDiffOp:
    """i_v(da_0 ^ ... ^ da_k) as an antisymmetric first-order operator."""
    d = v.ctx.d

    def op(y, slot):
        for perm in permutations(range(len(slot))):
            yield y, tuple(unit_mono(d, slot[p]) for p in perm), perm_sign(perm)

    return unary(v, op, PolyDiffOp)


def hkr_C(a: HochChain) -> ExtForm:
    """a_0 da_1 ^ ... ^ da_k with the fiber de Rham differential."""
    d = a.ctx.d

    def op(_y, monos):
        acc = {(monos[0], ()): 1}
        for m in monos[1:]:
            nxt = {}
            for (ym, dx), c in acc.items():
                for i in range(d):
                    if m[i]:
                        sg, dx2 = merge_sign(dx, (i,))
                        if sg:
                            mm = list(m)
                            mm[i] -= 1
                            accumulate(nxt, (mono_add(ym, tuple(mm)), dx2), c * sg * m[i])
            acc = nxt
        for (ym, dx), c in acc.items():
            yield ym, dx, c

    out = unary(a, op, ExtForm)
    return out


def vector_to_operator(v: PolyVecField) -> PolyDiffOp:
    """View a (form-valued) vector field as a first-order one-slot operator."""
    if any(len(k[3]) != 1 for k in v.terms):
        raise ValueError("expected a vector field")
    return hkr_V(v)


def antisymmetrize_first_order(p: PolyDiffOp) -> PolyVecField:
    """Polyvector whose Vey image is the antisymmetrization of the first-order part.

    Only terms with every slot of order exactly one contribute; the result
    satisfies hkr_V(result) = (1/(k+1)!) * sum_sigma sign(sigma) p^sigma.
    """
    from math import factorial
    out = {}
    for (w, x, y, slots), c in p.terms.items():
        if not slots or any(mono_deg(a) != 1 for a in slots):
            continue
        idx = [a.index(1) for a in slots]
        sg, s = sort_with_sign(idx)
        if sg:
            accumulate(out, (w, x, y, s), rational(sg) * c / factorial(len(slots)))
    return PolyVecField(p.ctx, out)
