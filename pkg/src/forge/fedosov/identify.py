"""Identifications between flat fiber objects and objects on the chart.

Chart-level elements keep the chart coordinates in the ``y`` slot (with
``x`` empty), the convention of the polycalc layer; fiber elements keep
base coordinates in ``x``.
"""
from __future__ import annotations

from math import factorial

from ..graded import (mono_add, mono_deg, mono_factorial, monomials_upto, rational, unit_mono,
                      zero_mono)
from ..polycalc.carriers import HochChain, PolyDiffOp, PolyVecField, accumulate, function
from ..polycalc.hochschild import pair
from ..polycalc.jets import PolyJet, _slot_bases
from ..polycalc.poly import Poly
from .calculus import delta
from .resolution import FedosovData, fedosov_D, reliable_degree, tau


class IllPosedError(ValueError):
    pass


def to_fiber(fd: FedosovData, e):
    """Move a chart element into the fiber context as a y-free section."""
    z = zero_mono(fd.context.d)
    out = {}
    for (w, x, y, s), c in e.terms.items():
        if any(x):
            raise ValueError("chart elements carry their coordinates in the y slot")
        accumulate(out, (w, y, z, s), c)
    return type(e)(fd.context, out, truncate=False)


def to_chart(e, chart_ctx):
    """Inverse of to_fiber for y-free sections."""
    z = zero_mono(chart_ctx.d)
    out = {}
    for (w, x, y, s), c in e.terms.items():
        if any(y):
            raise ValueError("only y-free sections live on the chart")
        accumulate(out, (w, z, x, s), c)
    return type(e)(chart_ctx, out, truncate=False)


# -- the triangular matrix of the flat lift -------------------------------------------

def lift_matrix(fd: FedosovData, order: int):
    """T[alpha][beta] with d^alpha_y tau(a)|_{y=0} = sum_beta T[alpha][beta](x) d^beta a.

    Unitriangular: T[alpha][alpha] = 1 and only |beta| <= |alpha| occur.
    Built from tau of x-monomials by a triangular solve.
    """
    if order > fd.context.N_y:
        raise ValueError("derivative order exceeds the fiber truncation")
    cache = fd.cache.setdefault("lift_matrix", {})
    if order in cache:
        return cache[order]
    d = fd.context.d
    monos = monomials_upto(d, order)
    lifted = {}
    for g in monos:
        t = tau(fd, function(fd.context, Poly(d, {g: 1}), where="x"))
        # coefficient of y^alpha, times alpha!, as an x-polynomial
        table = {}
        for (w, x, y, s), c in t.terms.items():
            if not w and mono_deg(y) <= order:
                table.setdefault(y, {})
                table[y][x] = table[y].get(x, 0) + c * mono_factorial(y)
        lifted[g] = {a: Poly(d, t2) for a, t2 in table.items()}
    T = {}
    for alpha in monos:
        row = {}
        for g in sorted(monos, key=mono_deg):
            if mono_deg(g) > mono_deg(alpha):
                continue
            val = lifted[g].get(alpha, Poly(d))
            for beta, coef in row.items():
                if all(b <= e for b, e in zip(beta, g)) and beta != g:
                    fall = rational(mono_factorial(g), mono_factorial(tuple(e - b for e, b in zip(g, beta))))
                    val = val - coef * Poly(d, {tuple(e - b for e, b in zip(g, beta)): fall})
            val = val * rational(1, mono_factorial(g))
            if val:
                row[g] = val
        T[alpha] = row
    cache[order] = T
    return T


def _slot_product(T, alphas, d):
    """Expand prod_s T[alpha_s] into {beta tuple: x-polynomial}."""
    acc = {(): None}
    for a in alphas:
        nxt = {}
        for betas, p in acc.items():
            for b, q in T[a].items():
                key = betas + (b,)
                val = q if p is None else p * q
                nxt[key] = nxt[key] + val if key in nxt else val
        acc = nxt
    return {k: (Poly.const(d, 1) if p is None else p) for k, p in acc.items()}


def _order(e):
    return max((sum(mono_deg(a) for a in k[3]) for k in e.terms), default=0)


def _max_slot_order(e):
    return max((mono_deg(a) for k in e.terms for a in k[3]), default=0)


def _check_flat(fd, e):
    if delta(e).is_zero():
        return
    top = reliable_degree(fd, e)
    if fedosov_D(fd, e, top).is_zero():
        return
    raise IllPosedError("operator is neither delta-closed nor D-closed")


def nu(fd: FedosovData, op: PolyDiffOp, chart_ctx, check: bool = True) -> PolyDiffOp:
    """nu(P)(a_0..a_k) = P(tau a_0, ..., tau a_k)|_{y=0} as a chart operator."""
    if not op.is_dy_free():
        raise IllPosedError("nu takes exterior degree zero operators")
    if check:
        _check_flat(fd, op)
    T = lift_matrix(fd, _max_slot_order(op))
    z = zero_mono(fd.context.d)
    out = {}
    for (w, x, y, s), c in op.terms.items():
        if any(y):
            continue
        for betas, p in _slot_product(T, s, fd.context.d).items():
            for m, c2 in p.terms.items():
                accumulate(out, ((), z, mono_add(x, m), betas), c * c2)
    return PolyDiffOp(chart_ctx, out, truncate=False)


def nu_inverse(fd: FedosovData, op: PolyDiffOp) -> PolyDiffOp:
    """The y-free fiber operator Q with nu(Q) = op, peeled by decreasing order."""
    chart_ctx = op.ctx
    residual = op
    found = PolyDiffOp(fd.context)
    while residual:
        top = max(sum(mono_deg(a) for a in k[3]) for k in residual.terms)
        head = residual.new({k: c for k, c in residual.terms.items()
                             if sum(mono_deg(a) for a in k[3]) == top}, truncate=False)
        step = to_fiber(fd, head)
        found = found + step
        residual = residual - nu(fd, step, chart_ctx, check=False)
    return found


def lambda_D(fd: FedosovData, op: PolyDiffOp) -> PolyDiffOp:
    """tau(nu^{-1}(op)): chart operator to D-flat fiber operator."""
    return tau(fd, nu_inverse(fd, op))


def lambda_D_inverse(fd: FedosovData, op: PolyDiffOp, chart_ctx, check: bool = True) -> PolyDiffOp:
    return nu(fd, op, chart_ctx, check=check)


def nu_T(fd: FedosovData, v: PolyVecField, chart_ctx) -> PolyVecField:
    """On delta-closed polyvectors the lift matrix is the identity on first-order slots."""
    return to_chart(v.new({k: c for k, c in v.terms.items() if not any(k[2])}), chart_ctx)


def lambda_T(fd: FedosovData, v: PolyVecField) -> PolyVecField:
    return tau(fd, to_fiber(fd, v))


def lambda_T_inverse(fd: FedosovData, v: PolyVecField, chart_ctx) -> PolyVecField:
    return nu_T(fd, v, chart_ctx)


# -- chains and polyjets ---------------------------------------------------------------

def varrho(fd: FedosovData, a: HochChain, chart_ctx, cap: int) -> PolyJet:
    """rho(a)(P) = (lambda_D(P))(a)|_{y=0}, tabulated on d^beta bases of order <= cap.

    Only the y-free part of lambda_D(P), which is nu^{-1}(P), survives at y = 0.
    """
    if not a.is_dy_free():
        raise ValueError("varrho takes exterior degree zero chains")
    if not a.terms:
        return PolyJet(chart_ctx, 0, cap)
    k = len(next(iter(a.terms))[3]) - 1
    z = zero_mono(fd.context.d)
    values = {}
    for betas in _slot_bases(fd.context.d, k + 1, cap):
        from ..polycalc.carriers import operator
        q = nu_inverse(fd, operator(chart_ctx, 1, betas))
        for (w, x, y, s), c in pair(q, a).terms.items():
            if not any(y):
                accumulate(values, (betas, x), c)
    return PolyJet(chart_ctx, k, cap, values)


def along(e, u: PolyVecField):
    """Contract the exterior-degree-one part of e with a chart vector field u."""
    d = e.ctx.d
    comps = [Poly(d) for _ in range(d)]
    for (w, x, y, s), c in u.terms.items():
        comps[s[0]] = comps[s[0]] + Poly(d, {y: c})
    out = {}
    for (w, x, y, s), c in e.terms.items():
        if len(w) != 1:
            continue
        for m, c2 in comps[w[0]].terms.items():
            accumulate(out, ((), mono_add(x, m), y, s), c * c2)
    return e.new(out)


def fedosov_along(fd: FedosovData, u: PolyVecField, a):
    """D_u a: the Fedosov differential contracted with u."""
    return along(fedosov_D(fd, a), u)
