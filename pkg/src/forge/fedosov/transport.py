"""Transport of fiber and chart elements along linear coordinate changes.

With new coordinates x' = g x, base coordinates and fiber coordinates
(and their differentials) pull back by g^{-1}, while derivations
d/dy transform by the transpose of g.
"""
from __future__ import annotations

from ..graded import mono_add, sort_with_sign, zero_mono
from ..linalg import inverse, transpose
from ..polycalc.carriers import ExtForm, HochChain, PolyDiffOp, PolyVecField, accumulate
from ..polycalc.poly import Poly
from .calculus import ConnectionData, connection_field, connection_from_field


def _mono_image(m, matrix, cache):
    key = (m, id(matrix))
    if key not in cache:
        cache[key] = Poly(len(m), {m: 1}).substitute_linear(matrix).terms
    return cache[key]


def _wedge_image(indices, matrix):
    """prod_i (sum_j M[i][j] e_j) for anticommuting e_j, as {sorted tuple: coeff}."""
    acc = {(): 1}
    for i in indices:
        nxt = {}
        for t, c in acc.items():
            for j, mij in enumerate(matrix[i]):
                if mij and j not in t:
                    sg, srt = sort_with_sign(t + (j,))
                    accumulate(nxt, srt, c * mij * sg)
        acc = nxt
    return acc


def _products(parts):
    acc = {(): 1}
    for part in parts:
        nxt = {}
        for t, c in acc.items():
            for k, c2 in part.items():
                accumulate(nxt, t + (k,), c * c2)
        acc = nxt
    return acc


def transport(e, g):
    """The element expressed in the coordinates x' = g x."""
    ginv = inverse(g)
    gt = transpose(g)
    cache = {}
    out = {}
    for (w, x, y, s), c in e.terms.items():
        xs = _mono_image(x, ginv, cache)
        ys = _mono_image(y, ginv, cache) if any(y) else {y: 1}
        ws = _wedge_image(w, ginv)
        if isinstance(e, PolyVecField):
            ss = _wedge_image(s, gt)
        elif isinstance(e, ExtForm):
            ss = _wedge_image(s, ginv)
        elif isinstance(e, PolyDiffOp):
            ss = _products([_mono_image(a, gt, cache) for a in s])
        elif isinstance(e, HochChain):
            ss = _products([_mono_image(a, ginv, cache) for a in s])
        else:
            raise TypeError(type(e).__name__)
        for w2, cw in ws.items():
            for x2, cx in xs.items():
                for y2, cy in ys.items():
                    for s2, cs in ss.items():
                        accumulate(out, (w2, x2, y2, s2), c * cw * cx * cy * cs)
    return type(e)(e.ctx, out)


def transport_connection(conn: ConnectionData, g, ctx) -> ConnectionData:
    """Christoffel symbols in the new coordinates (tensorial for linear changes)."""
    return connection_from_field(transport(connection_field(conn, ctx), g))
