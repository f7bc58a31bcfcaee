"""Polyvector fields: wedge, Schouten-Nijenhuis bracket, contraction, Lie derivative."""
from __future__ import annotations

from ..graded import merge_sign, mono_add, remove_at
from .algebra import bilinear, falling, unary
from .carriers import ExtForm, PolyVecField, accumulate


def _d(y, i):
    """d/dy^i of y^m as (coef, mono)."""
    if not y[i]:
        return 0, None
    m = list(y)
    m[i] -= 1
    return y[i], tuple(m)


def wedge(v1: PolyVecField, v2: PolyVecField) -> PolyVecField:
    def op(y1, s1, y2, s2):
        sg, s = merge_sign(s1, s2)
        if sg:
            yield mono_add(y1, y2), s, sg

    return bilinear(v1, v2, op, lambda s: len(s), PolyVecField)


def _schouten_terms(y1, s1, y2, s2):
    """[f d_I, g d_J] for monomial coefficients f = y^y1, g = y^y2.

    (-1)^(|I|-1) sum_r (-1)^r f (d_{i_r} g) d_{I-i_r} ^ d_J
      - sum_s (-1)^s g (d_{j_s} f) d_I ^ d_{J-j_s}
    """
    lead = -1 if (len(s1) - 1) % 2 else 1
    for r, i in enumerate(s1):
        c, m = _d(y2, i)
        if c:
            sg, s = merge_sign(remove_at(s1, r), s2)
            if sg:
                yield mono_add(y1, m), s, lead * (-1 if r % 2 else 1) * sg * c
    for r, j in enumerate(s2):
        c, m = _d(y1, j)
        if c:
            sg, s = merge_sign(s1, remove_at(s2, r))
            if sg:
                yield mono_add(m, y2), s, -(-1 if r % 2 else 1) * sg * c


def schouten(v1: PolyVecField, v2: PolyVecField) -> PolyVecField:
    return bilinear(v1, v2, _schouten_terms, lambda s: len(s) - 1, PolyVecField)


def _contract_terms(y1, s1, y2, s2):
    """i_{d_J} on dx^L: successive left contractions by d_{j_0}, d_{j_1}, ..."""
    sign = 1
    dx = s2
    for j in s1:
        if j not in dx:
            return
        pos = dx.index(j)
        if pos % 2:
            sign = -sign
        dx = remove_at(dx, pos)
    yield mono_add(y1, y2), dx, sign


def contract(v: PolyVecField, w: ExtForm) -> ExtForm:
    """Interior product; pairs the i-th vector slot with the i-th form slot.

    With this convention the Vey map gives V(u^v)(a,b) = u(a)v(b) - v(a)u(b).
    """
    return bilinear(v, w, _contract_terms, lambda s: len(s), ExtForm, ctx=w.ctx)


def de_rham(w: ExtForm) -> ExtForm:
    """Fiber de Rham differential dx^i d/dy^i (odd, passes dy-forms with a sign)."""
    d = w.ctx.d

    def op(y, dx):
        for i in range(d):
            c, m = _d(y, i)
            if c:
                sg, s = merge_sign((i,), dx)
                if sg:
                    yield m, s, sg * c

    return unary(w, op, ExtForm, odd=True)


def _lie_raw(d, k, y1, s1, y2, s2):
    # d(i_g w)
    for ym, dx, c in _contract_terms(y1, s1, y2, s2):
        for i in range(d):
            c2, m = _d(ym, i)
            if c2:
                sg, s = merge_sign((i,), dx)
                if sg:
                    yield m, s, c * c2 * sg
    # (-1)^k i_g(d w)
    sk = -1 if k % 2 else 1
    for i in range(d):
        c2, m = _d(y2, i)
        if c2:
            sg, s = merge_sign((i,), s2)
            if sg:
                for ym, dx, c in _contract_terms(y1, s1, m, s):
                    yield ym, dx, sk * sg * c2 * c


def _lie_terms_factory(d):
    def op(y1, s1, y2, s2):
        # L is built from the left-composition contraction i_{u^v} = i_u i_v,
        # which differs from the Vey-pinned pairing by the reversal sign
        n = len(s1)
        rev = -1 if (n * (n - 1) // 2) % 2 else 1
        for y, s, c in _lie_raw(d, n - 1, y1, s1, y2, s2):
            yield y, s, rev * c
    return op


def lie_derivative(v: PolyVecField, w: ExtForm) -> ExtForm:
    """L_v = d i_v + (-)^k i_v d for a (k+1)-vector v.

    Here i_v composes single left contractions, i_{u^v} = i_u i_v. This is a
    representation of the Schouten bracket on forms.
    """
    return bilinear(v, w, _lie_terms_factory(w.ctx.d), lambda s: len(s) - 1, ExtForm, ctx=w.ctx)


def apply_vector(v: PolyVecField, f_y):
    """Derivative of the monomial y^f_y along a dy-free vector field (term iterator)."""
    for (w, x, y, s), c in v.terms.items():
        coef, m = _d(f_y, s[0])
        if coef:
            yield w, x, mono_add(y, m), c * coef


def form_product(w1: ExtForm, w2: ExtForm) -> ExtForm:
    """Wedge product of dx-forms (dy-parts to the left, Koszul signs)."""
    def op(y1, s1, y2, s2):
        sg, s = merge_sign(s1, s2)
        if sg:
            yield mono_add(y1, y2), s, sg

    return bilinear(w1, w2, op, lambda s: len(s), ExtForm)


def derivative(e, i: int):
    """d/dy^i applied to the coefficients of any carrier (not chains)."""
    def op(y, s):
        c, m = _d(y, i)
        if c:
            yield m, s, c

    return unary(e, op)


def x_derivative(e, i: int):
    """d/dx^i applied to the base coefficients."""
    out = {}
    for (w, x, y, s), c in e.terms.items():
        if x[i]:
            xx = list(x)
            xx[i] -= 1
            accumulate(out, (w, tuple(xx), y, s), c * x[i])
    return e.new(out)


__all__ = ["wedge", "schouten", "contract", "de_rham", "lie_derivative", "form_product",
           "derivative", "x_derivative", "falling"]
