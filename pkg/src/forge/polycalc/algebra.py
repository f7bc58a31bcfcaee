"""Shared term-level helpers for the fiberwise calculus."""
from __future__ import annotations

from ..graded import merge_sign, mono_add, rational
from .carriers import accumulate


def falling(m, g):
    """Coefficient and exponent of d^g applied to y^m; (0, None) if it vanishes."""
    coef = 1
    out = []
    for e, k in zip(m, g):
        if k > e:
            return 0, None
        for t in range(k):
            coef *= e - t
        out.append(e - k)
    return coef, tuple(out)


try:
    import flint
except ImportError:  # pragma: no cover
    flint = None


def _fq(c):
    return flint.fmpq(int(c.numerator), int(c.denominator))


class Accumulator:
    """Sum of several dy-form valued bilinear contributions.

    ``op(y1, s1, y2, s2)`` yields ``(y, slot, c)`` for dy-free, x-free
    monomial terms. The dy-part of the second argument is moved past the
    first argument's payload, which costs (-1)^(left_degree(s1) * |dy2|).
    Terms are grouped by their fiber part so ``op`` runs once per pair of
    fiber monomials, and the x-coefficients are multiplied as polynomials.
    Outputs above the truncation are skipped before any coefficient work.
    """

    def __init__(self, ctx, cls):
        self.ctx = ctx
        self.cls = cls
        self.out = {}
        self._pctx = flint.fmpq_mpoly_ctx.get(("x", ctx.d), "lex") if flint else None

    def _groups(self, e):
        raw = {}
        for (w, x, y, s), c in e.terms.items():
            raw.setdefault((y, s), {}).setdefault(w, {})[x] = c
        if self._pctx is None:
            return raw
        from_dict = self._pctx.from_dict
        return {k: {w: from_dict({x: _fq(c) for x, c in t.items()}) for w, t in ws.items()}
                for k, ws in raw.items()}

    def _times(self, q1, q2):
        if self._pctx is not None:
            return q1 * q2
        out = {}
        for x1, c1 in q1.items():
            for x2, c2 in q2.items():
                accumulate(out, mono_add(x1, x2), c1 * c2)
        return out

    def _add_into(self, key, q, c):
        out = self.out
        if self._pctx is not None:
            term = q * _fq(rational(c))
            out[key] = out[key] + term if key in out else term
            return
        bucket = out.setdefault(key, {})
        for x, cc in q.items():
            accumulate(bucket, x, cc * c)

    def add(self, e1, e2, op, left_degree, scale=1):
        limit = self.ctx.N_y
        ydeg = self.cls.ydeg_of
        g1 = self._groups(e1)
        g2 = self._groups(e2)
        for (y1, s1), l1 in g1.items():
            p = left_degree(s1) % 2
            for (y2, s2), l2 in g2.items():
                results = [(y, s, c) for y, s, c in op(y1, s1, y2, s2)
                           if ydeg((None, None, y, s)) <= limit]
                if not results:
                    continue
                coef = {}
                for w1, q1 in l1.items():
                    for w2, q2 in l2.items():
                        sg, w = merge_sign(w1, w2)
                        if not sg:
                            continue
                        if p and len(w2) % 2:
                            sg = -sg
                        coef.setdefault(w, []).append((sg, q1, q2))
                merged = {}
                for w, prods in coef.items():
                    acc = None
                    for sg, q1, q2 in prods:
                        t = self._times(q1, q2)
                        if sg < 0:
                            t = -t if self._pctx is not None else {x: -c for x, c in t.items()}
                        if acc is None:
                            acc = t
                        elif self._pctx is not None:
                            acc = acc + t
                        else:
                            for x, c in t.items():
                                accumulate(acc, x, c)
                    merged[w] = acc
                for y, s, c in results:
                    for w, q in merged.items():
                        self._add_into((w, y, s), q, c * scale)
        return self

    def result(self):
        terms = {}
        if self._pctx is not None:
            for (w, y, s), q in self.out.items():
                for x, c in q.to_dict().items():
                    if c:
                        terms[(w, tuple(map(int, x)), y, s)] = rational(int(c.p), int(c.q))
        else:
            for (w, y, s), q in self.out.items():
                for x, c in q.items():
                    if c:
                        terms[(w, x, y, s)] = c
        return self.cls.trusted(self.ctx, terms)


def bilinear(e1, e2, op, left_degree, cls, ctx=None):
    """A single bilinear contribution; see Accumulator."""
    return Accumulator(ctx or e1.ctx, cls).add(e1, e2, op, left_degree).result()


def unary(e, op, cls=None, odd=False):
    """Apply a fiberwise linear map termwise; ``op(y, slot)`` yields (y, slot, c).

    An odd map picks up (-1)^|dy| while passing the dy-part.
    """
    out = {}
    for (w, x, y, s), c in e.terms.items():
        c0 = -c if odd and len(w) % 2 else c
        for y2, s2, c2 in op(y, s):
            accumulate(out, (w, x, y2, s2), c0 * c2)
    return (cls or type(e))(e.ctx, out)
