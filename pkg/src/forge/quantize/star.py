"""Star products as Maurer-Cartan elements of polydifferential operators.

A star product is a * b = ab + sum_n hbar^n Pi_n(a, b) on a polynomial
chart, with each Pi_n a two-slot operator. Gauge elements U = I + hbar U_1
+ ... act by a *' b = U(U^{-1} a * U^{-1} b). All series are cut at a
fixed hbar order.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from ..graded import compositions, mono_add, rational, unit_mono, zero_mono
from ..polycalc.algebra import bilinear, falling
from ..polycalc.carriers import PolyDiffOp, PolyVecField, accumulate, function
from ..polycalc.hochschild import apply, bullet, gerstenhaber, hkr_V, hoch_diff, multiplication
from ..polycalc.poly import Poly
from ..polycalc.vectors import schouten

HALF = rational(1, 2)


class QuantizeError(ValueError):
    pass


def _two_slot(p: PolyDiffOp) -> bool:
    return all(len(k[3]) == 2 and not k[0] for k in p.terms)


def _one_slot(p: PolyDiffOp) -> bool:
    return all(len(k[3]) == 1 and not k[0] for k in p.terms)


@dataclass(frozen=True)
class PoissonStructure:
    """Bivector series alpha_1, alpha_2, ... (index 0 is hbar^1)."""
    ctx: object
    alpha: tuple

    def __post_init__(self):
        for a in self.alpha:
            if any(len(k[3]) != 2 or k[0] for k in a.terms):
                raise QuantizeError("Poisson data must be dy-free bivector fields")

    @property
    def order(self):
        return len(self.alpha)

    def jacobi_residuals(self):
        """[alpha, alpha] per hbar order n >= 2: sum over i + j = n of [alpha_i, alpha_j]."""
        out = {}
        for n in range(2, 2 * self.order + 1):
            acc = PolyVecField(self.ctx)
            for i in range(1, n):
                j = n - i
                if i <= self.order and j <= self.order:
                    acc = acc + schouten(self.alpha[i - 1], self.alpha[j - 1])
            out[n] = acc
        return out

    def is_poisson(self):
        return all(not r for r in self.jacobi_residuals().values())

    def is_constant(self):
        return all(not any(k[2]) and not any(k[1]) for a in self.alpha for k in a.terms)

    def matrix(self, n=1):
        """alpha_n as an antisymmetric coefficient table {(i, j): c}."""
        out = {}
        for (_, _, y, s), c in self.alpha[n - 1].terms.items():
            if any(y):
                raise QuantizeError("matrix form needs constant coefficients")
            i, j = s
            out[(i, j)] = out.get((i, j), 0) + c
            out[(j, i)] = out.get((j, i), 0) - c
        return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class StarProduct:
    """pi[n - 1] is the two-slot operator at hbar^n."""
    ctx: object
    pi: tuple

    def __post_init__(self):
        for p in self.pi:
            if not _two_slot(p):
                raise QuantizeError("star product terms must be dy-free two-slot operators")

    @property
    def order(self):
        return len(self.pi)

    def term(self, n):
        if n == 0:
            return multiplication(self.ctx)
        if 1 <= n <= self.order:
            return self.pi[n - 1]
        return PolyDiffOp(self.ctx)

    def __eq__(self, other):
        return isinstance(other, StarProduct) and self.order == other.order and \
            all(a == b for a, b in zip(self.pi, other.pi))

    def star(self, a, b):
        """Series a * b for functions (or series {order: function}) a and b."""
        a, b = _series(self.ctx, a), _series(self.ctx, b)
        out = {}
        for i, fa in a.items():
            for j, fb in b.items():
                for n in range(0, self.order + 1 - i - j):
                    val = apply(self.term(n), [fa, fb])
                    if val:
                        k = i + j + n
                        out[k] = out[k] + val if k in out else val
        return {k: v for k, v in out.items() if v}

    def commutator(self, a, b):
        ab, ba = self.star(a, b), self.star(b, a)
        out = {}
        for k in set(ab) | set(ba):
            v = ab.get(k, PolyDiffOp(self.ctx)) - ba.get(k, PolyDiffOp(self.ctx))
            if v:
                out[k] = v
        return out

    def to_json(self):
        return {"type": "star", "d": self.ctx.d,
                "pi": [p.to_json() for p in self.pi]}


@dataclass(frozen=True)
class GaugeElement:
    """u[n - 1] is the one-slot operator U_n of U = I + sum hbar^n U_n."""
    ctx: object
    u: tuple

    def __post_init__(self):
        for p in self.u:
            if not _one_slot(p):
                raise QuantizeError("gauge terms must be dy-free one-slot operators")

    @property
    def order(self):
        return len(self.u)

    def term(self, n):
        if n == 0:
            return identity_operator(self.ctx)
        if 1 <= n <= self.order:
            return self.u[n - 1]
        return PolyDiffOp(self.ctx)


def _series(ctx, a):
    if isinstance(a, dict):
        return {k: v for k, v in a.items() if v}
    if isinstance(a, PolyDiffOp):
        return {0: a}
    return {0: function(ctx, a)}


def identity_operator(ctx):
    z = zero_mono(ctx.d)
    return PolyDiffOp(ctx, {((), z, z, (z,)): 1})


# ---------------------------------------------------------------- construction

def constant_poisson(ctx, entries):
    """Constant bivector from {(i, j): c} with i < j, meaning c d_i ^ d_j."""
    z = zero_mono(ctx.d)
    terms = {}
    for (i, j), c in entries.items():
        if i == j:
            continue
        sign = 1 if i < j else -1
        accumulate(terms, ((), z, z, (min(i, j), max(i, j))), sign * rational(c))
    return PoissonStructure(ctx, (PolyVecField(ctx, terms),))


def moyal_star(alpha: PoissonStructure, ctx=None, order=None):
    """Pi_n = (1/n!) alpha^{i1 j1} ... alpha^{in jn} d_I (x) d_J, no factor 1/2."""
    ctx = ctx or alpha.ctx
    if alpha.order > 1 and any(alpha.alpha[1:]):
        raise QuantizeError("the Moyal generator takes a single constant bivector")
    if not alpha.is_constant():
        raise QuantizeError("the Moyal generator needs constant coefficients")
    order = ctx.N_hbar if order is None else order
    mat = alpha.matrix(1) if alpha.order else {}
    d = ctx.d
    z = zero_mono(d)
    power = {(z, z): rational(1)}
    pis = []
    for n in range(1, order + 1):
        nxt = {}
        for (a, b), c in power.items():
            for (i, j), m in mat.items():
                key = (mono_add(a, unit_mono(d, i)), mono_add(b, unit_mono(d, j)))
                nxt[key] = nxt.get(key, 0) + c * m
        power = {k: v for k, v in nxt.items() if v}
        scale = rational(1, factorial(n))
        pis.append(PolyDiffOp(ctx, {((), z, z, (a, b)): c * scale for (a, b), c in power.items()},
                              truncate=False))
    return StarProduct(ctx, tuple(pis))


def first_order(alpha: PoissonStructure, ctx=None, order=None):
    """Pi_1 = hkr_V(alpha_1) and nothing above; associative only for special alpha."""
    ctx = ctx or alpha.ctx
    order = ctx.N_hbar if order is None else order
    pis = [hkr_V(alpha.alpha[0])] + [PolyDiffOp(ctx) for _ in range(order - 1)]
    return StarProduct(ctx, tuple(pis[:order]))


# ---------------------------------------------------------------- MC equation

def mc_residual(s: StarProduct):
    """{n: d Pi_n + 1/2 sum_{k+l=n} [Pi_k, Pi_l]} for n = 1..order."""
    out = {}
    for n in range(1, s.order + 1):
        acc = hoch_diff(s.term(n))
        for k in range(1, n):
            acc = acc + gerstenhaber(s.term(k), s.term(n - k)).scale(HALF)
        out[n] = acc
    return out


def is_mc(s: StarProduct):
    return all(not r for r in mc_residual(s).values())


def monomial_basis(ctx, degree):
    from ..graded import monomials_upto
    return [function(ctx, Poly(ctx.d, {m: 1})) for m in monomials_upto(ctx.d, degree)]


def associativity_residual(s: StarProduct, degree=3):
    """(a * b) * c - a * (b * c) on monomials up to ``degree``; nonzero entries only."""
    basis = monomial_basis(s.ctx, degree)
    bad = []
    for a in basis:
        for b in basis:
            ab = s.star(a, b)
            for c in basis:
                left = s.star(ab, c)
                right = s.star(a, s.star(b, c))
                for k in set(left) | set(right):
                    v = left.get(k, PolyDiffOp(s.ctx)) - right.get(k, PolyDiffOp(s.ctx))
                    if v:
                        bad.append((k, a, b, c, v))
    return bad


# ---------------------------------------------------------------- gauge action

def _insert_at(slot_index):
    def op(y1, a, y2, b):
        if slot_index >= len(a):
            return
        k2 = len(b) - 1
        for w, parts in compositions(a[slot_index], k2 + 2):
            coef, ycoef = falling(y2, parts[0])
            if not coef:
                continue
            middle = tuple(mono_add(b[t], parts[t + 1]) for t in range(k2 + 1))
            yield mono_add(y1, ycoef), a[:slot_index] + middle + a[slot_index + 1:], w * coef
    return op


def insert_at(p: PolyDiffOp, q: PolyDiffOp, slot_index: int) -> PolyDiffOp:
    """p with the one-slot operator q fed into a single slot."""
    return bilinear(p, q, _insert_at(slot_index), lambda s: len(s) - 1, PolyDiffOp)


def compose_gauge(g: GaugeElement, h: GaugeElement, order=None) -> GaugeElement:
    """The product g h as operators."""
    order = max(g.order, h.order) if order is None else order
    out = []
    for n in range(1, order + 1):
        acc = PolyDiffOp(g.ctx)
        for i in range(0, n + 1):
            acc = acc + bullet(g.term(i), h.term(n - i))
        out.append(acc)
    return GaugeElement(g.ctx, tuple(out))


def inverse_gauge(g: GaugeElement, order=None) -> GaugeElement:
    """W with g W = I: W_n = -sum_{i=1..n} U_i W_{n-i}."""
    order = g.order if order is None else order
    w = [identity_operator(g.ctx)]
    for n in range(1, order + 1):
        acc = PolyDiffOp(g.ctx)
        for i in range(1, n + 1):
            acc = acc - bullet(g.term(i), w[n - i])
        w.append(acc)
    return GaugeElement(g.ctx, tuple(w[1:]))


def gauge_transform(s: StarProduct, g: GaugeElement, check=True) -> StarProduct:
    """The product a *' b = U(U^{-1} a * U^{-1} b), so U(a * b) = U a *' U b."""
    if check and not is_mc(s):
        raise QuantizeError("gauge action needs an associative star product")
    order = s.order
    w = inverse_gauge(g, order)
    # C_n = sum_{p+q+r=n} B_p(W_q ., W_r .)
    C = {}
    for n in range(0, order + 1):
        acc = PolyDiffOp(s.ctx)
        for p in range(0, n + 1):
            B = s.term(p)
            if not B:
                continue
            for q in range(0, n - p + 1):
                r = n - p - q
                left = insert_at(B, w.term(q), 0) if q else B
                acc = acc + (insert_at(left, w.term(r), 1) if r else left)
        C[n] = acc
    pis = []
    for n in range(1, order + 1):
        acc = PolyDiffOp(s.ctx)
        for i in range(0, n + 1):
            acc = acc + (bullet(g.term(i), C[n - i]) if i else C[n])
        pis.append(acc)
    return StarProduct(s.ctx, tuple(pis))


def swap_slots(p: PolyDiffOp) -> PolyDiffOp:
    return PolyDiffOp(p.ctx, {(w, x, y, (s[1], s[0])): c for (w, x, y, s), c in p.terms.items()},
                      truncate=False)


def antisymmetric_part(p: PolyDiffOp) -> PolyDiffOp:
    return (p - swap_slots(p)).scale(HALF)


def symmetric_part(p: PolyDiffOp) -> PolyDiffOp:
    return (p + swap_slots(p)).scale(HALF)


def laplacian_gauge(ctx, scale=rational(1, 4), order=None):
    """U = I + hbar * scale * sum_i d_i^2."""
    order = ctx.N_hbar if order is None else order
    d = ctx.d
    z = zero_mono(d)
    lap = PolyDiffOp(ctx, {((), z, z, (mono_add(unit_mono(d, i), unit_mono(d, i)),)): scale
                           for i in range(d)})
    return GaugeElement(ctx, (lap,) + tuple(PolyDiffOp(ctx) for _ in range(order - 1)))
