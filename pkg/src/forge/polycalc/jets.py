"""Polyjets: fiberwise linear functionals on polydifferential operators.

A jet of degree l is stored by its values on the constant-coefficient
basis d^a_0 (x) ... (x) d^a_l, each value being a chart polynomial.
Values are known up to a total derivative order ``cap``; operations that
raise the order of their argument lower the cap accordingly.
"""
from __future__ import annotations

from functools import lru_cache
from math import factorial

from ..graded import rational, mono_add, mono_deg, monomials_upto, unit_mono, zero_mono
from .carriers import HochChain, PolyDiffOp, PolyVecField, accumulate, operator
from .hochschild import bullet, cup, pair
from .poly import Poly


@lru_cache(maxsize=None)
def _slot_bases(d, slots, cap):
    """All tuples of `slots` multi-indices with total order <= cap."""
    monos = monomials_upto(d, cap)
    out = [()]
    for _ in range(slots):
        out = [t + (m,) for t in out for m in monos if sum(map(mono_deg, t)) + mono_deg(m) <= cap]
    return tuple(out)


class PolyJet:
    __slots__ = ("ctx", "degree", "cap", "values")

    def __init__(self, ctx, degree: int, cap: int, values=None):
        self.ctx = ctx
        self.degree = degree
        self.cap = cap
        clean = {}
        for (alphas, y), c in (values or {}).items():
            if c and sum(mono_deg(a) for a in alphas) <= cap:
                clean[(alphas, y)] = rational(c)
        self.values = clean

    def basis(self):
        return _slot_bases(self.ctx.d, self.degree + 1, self.cap)

    def value(self, alphas) -> Poly:
        return Poly(self.ctx.d, {y: c for (a, y), c in self.values.items() if a == alphas})

    def restrict(self, cap):
        return PolyJet(self.ctx, self.degree, min(cap, self.cap), self.values)

    def __eq__(self, other):
        if not isinstance(other, PolyJet):
            return False
        if other.degree != self.degree:
            return self.is_zero() and other.is_zero()
        cap = min(self.cap, other.cap)
        return self.restrict(cap).values == other.restrict(cap).values

    def __sub__(self, other):
        cap = min(self.cap, other.cap)
        out = dict(self.restrict(cap).values)
        for k, c in other.restrict(cap).values.items():
            accumulate(out, k, -c)
        return PolyJet(self.ctx, self.degree, cap, out)

    def __add__(self, other):
        cap = min(self.cap, other.cap)
        out = dict(self.restrict(cap).values)
        for k, c in other.restrict(cap).values.items():
            accumulate(out, k, c)
        return PolyJet(self.ctx, self.degree, cap, out)

    def scale(self, c):
        return PolyJet(self.ctx, self.degree, self.cap, {k: v * c for k, v in self.values.items()})

    def is_zero(self):
        return not self.values

    def evaluate(self, p: PolyDiffOp) -> PolyDiffOp:
        """j(p) for a chart operator with degree+1 slots (C-infinity linear)."""
        out = {}
        z = zero_mono(self.ctx.d)
        by_alpha = {}
        for (a, y), c in self.values.items():
            by_alpha.setdefault(a, []).append((y, c))
        for (w, x, y, slots), c in p.terms.items():
            if w or any(x):
                raise ValueError("jets evaluate chart operators only")
            if len(slots) != self.degree + 1:
                raise ValueError("operator arity does not match the jet degree")
            if sum(mono_deg(a) for a in slots) > self.cap:
                raise ValueError("operator order exceeds the jet's known range")
            for y2, c2 in by_alpha.get(slots, ()):
                accumulate(out, ((), z, mono_add(y, y2), ()), c * c2)
        return PolyDiffOp(p.ctx, out)

    def to_json(self):
        from .carriers import fraction_str
        rows = [{"coeff": fraction_str(c), "slots": [list(a) for a in alphas], "y": list(y)}
                for (alphas, y), c in sorted(self.values.items())]
        return {"type": "polyjet", "degree": self.degree, "cap": self.cap, "terms": rows}

    def __repr__(self):
        return f"PolyJet(degree={self.degree}, cap={self.cap}, {len(self.values)} values)"


def _basis_op(ctx, alphas) -> PolyDiffOp:
    return operator(ctx, 1, alphas)


def jet_from_function(ctx, degree, cap, fn) -> PolyJet:
    """Tabulate fn(alphas) -> chart function (PolyDiffOp without slots)."""
    out = {}
    for alphas in _slot_bases(ctx.d, degree + 1, cap):
        f = fn(alphas)
        for (w, x, y, s), c in f.terms.items():
            accumulate(out, (alphas, y), c)
    return PolyJet(ctx, degree, cap, out)


def cyclic_t(j: PolyJet, times: int = 1) -> PolyJet:
    """t(a)(P_0 x ... x P_l) = a(P_1 x ... x P_l x P_0)."""
    n = j.degree + 1
    times %= n
    out = {}
    for (alphas, y), c in j.values.items():
        # value at beta equals a at (beta_1..beta_l, beta_0): beta = rotate_right(alphas)
        beta = alphas[n - times:] + alphas[:n - times] if times else alphas
        out[(beta, y)] = c
    return PolyJet(j.ctx, j.degree, j.cap, out)


def jet_action(p: PolyDiffOp, j: PolyJet) -> PolyJet:
    """R^_P(a)(Q0 x Q) = a((Q0 x Q).P) + sum_{i=1}^k (-1)^(l i) t^i(a)((Q0.P) x Q)."""
    ctx = j.ctx
    k = _degree(p)
    l = j.degree
    if k > l:
        return PolyJet(ctx, l - k, 0)
    ord_p = p.max_order() if p.terms else 0
    cap = j.cap - ord_p
    shifted = [cyclic_t(j, i) for i in range(max(k + 1, 0))]

    def value(betas):
        q0 = _basis_op(ctx, betas[:1])
        total = j.evaluate(bullet(_basis_op(ctx, betas), p))
        rest = _basis_op(ctx, betas[1:])
        for i in range(1, k + 1):
            term = shifted[i].evaluate(cup(bullet(q0, p), rest))
            total = total + (term if (l * i) % 2 == 0 else -term)
        if k < 0:
            # reversed range i = 1..-1 reads as minus the i = 0 term
            total = total - j.evaluate(cup(bullet(q0, p), rest))
        return total

    if cap < 0:
        return PolyJet(ctx, l - k, -1)
    return jet_from_function(ctx, l - k, cap, value)


def jet_diff(j: PolyJet) -> PolyJet:
    from .hochschild import multiplication
    return jet_action(multiplication(j.ctx), j)


def _degree(p: PolyDiffOp) -> int:
    degs = {len(k[3]) - 1 for k in p.terms}
    if len(degs) > 1:
        raise ValueError("operator is not homogeneous")
    return degs.pop() if degs else 0


def grothendieck_conn(u: PolyVecField, j: PolyJet) -> PolyJet:
    """(nabla^G_u j)(P) = u(j(P)) - j(u . P)."""
    from .hochschild import apply, vector_to_operator
    ctx = j.ctx
    uop = vector_to_operator(u)

    def value(alphas):
        base = j.evaluate(_basis_op(ctx, alphas))
        return apply(uop, [base]) - j.evaluate(bullet(uop, _basis_op(ctx, alphas)))

    return jet_from_function(ctx, j.degree, j.cap - 1, value)


def chain_to_functional(b: HochChain):
    """The chain b(y_0..y_k) as a functional on k-slot operators (slots 1..k)."""
    ctx = b.ctx

    def fn(alphas):
        z = zero_mono(ctx.d)
        return pair(operator(ctx, 1, (z,) + tuple(alphas)), b)

    return fn


def chi(j: PolyJet) -> HochChain:
    """chi(a)(P) = a(1 x P), returned as a chain polynomial in y_0..y_k.

    The chain is rebuilt by Taylor expansion around the diagonal:
    b = sum_beta chi(a)(d^beta)(y_0) prod_s (y_s - y_0)^beta_s / beta_s!.
    Exact when the chain has degree <= cap in y_1..y_k.
    """
    ctx = j.ctx
    d = ctx.d
    k = j.degree
    z = zero_mono(d)
    out = {}
    for betas in _slot_bases(d, k, j.cap):
        val = j.value((z,) + betas)
        if not val:
            continue
        weight = rational(1)
        for beta in betas:
            for e in beta:
                weight /= factorial(e)
        # expand prod_s prod_i (y_s^i - y_0^i)^e into monomials
        expansion = {(z,) * (k + 1): weight}
        for s, beta in enumerate(betas, start=1):
            for i, e in enumerate(beta):
                for _ in range(e):
                    nxt = {}
                    for monos, c in expansion.items():
                        up = list(monos)
                        up[s] = mono_add(up[s], unit_mono(d, i))
                        accumulate(nxt, tuple(up), c)
                        down = list(monos)
                        down[0] = mono_add(down[0], unit_mono(d, i))
                        accumulate(nxt, tuple(down), -c)
                    expansion = nxt
        for m, c in val.terms.items():
            for monos, c2 in expansion.items():
                full = (mono_add(monos[0], m),) + monos[1:]
                accumulate(out, ((), z, z, full), c * c2)
    return HochChain(ctx, out, truncate=False)


class ExtensionError(ValueError):
    pass


def chi_inverse(b: HochChain, cap: int, check: bool = True) -> PolyJet:
    """The flat jet a with a(1 x P) = b(P), extended by
    a(d_i Q x P) = d_i[a(Q x P)] - a(Q x (d_i . P)).
    """
    ctx = b.ctx
    d = ctx.d
    k = len(next(iter(b.terms))[3]) - 1 if b.terms else 0
    fn = chain_to_functional(b)
    memo = {}

    def as_poly(f):
        return Poly(d, {y: c for (w, x, y, s), c in f.terms.items()})

    def val(gamma, betas):
        key = (gamma, betas)
        if key in memo:
            return memo[key]
        if not any(gamma):
            res = as_poly(fn(betas))
        else:
            res = None
            for i in range(d):
                if not gamma[i]:
                    continue
                lower = list(gamma)
                lower[i] -= 1
                lower = tuple(lower)
                cand = val(lower, betas).deriv(i)
                for s in range(len(betas)):
                    up = list(betas)
                    up[s] = mono_add(up[s], unit_mono(d, i))
                    cand = cand - val(lower, tuple(up))
                if res is None:
                    res = cand
                    if not check:
                        break
                elif cand != res:
                    raise ExtensionError(f"extension rule inconsistent at slot orders {gamma}, {betas}")
        memo[key] = res
        return res

    out = {}
    for alphas in _slot_bases(d, k + 1, cap):
        for y, c in val(alphas[0], alphas[1:]).terms.items():
            accumulate(out, (alphas, y), c)
    return PolyJet(ctx, k, cap, out)


def natural_jet(b: HochChain, cap: int) -> PolyJet:
    """a(Q_0 x ... x Q_k) = (Q_0 x ... x Q_k)(b) on the diagonal."""
    ctx = b.ctx
    k = len(next(iter(b.terms))[3]) - 1 if b.terms else 0
    return jet_from_function(ctx, k, cap, lambda alphas: pair(operator(ctx, 1, alphas), b))
