"""Fiberwise calculus of the resolution: delta, its homotopy, the
projection to the base, the connection and its curvature."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..graded import rational, merge_sign, mono_add, mono_deg, unit_mono, zero_mono
from ..polycalc.action import act
from ..polycalc.carriers import HochChain, PolyDiffOp, PolyVecField, accumulate
from ..polycalc.poly import Poly
from ..polycalc.vectors import schouten, x_derivative


class TorsionError(ValueError):
    pass


@dataclass(frozen=True)
class ConnectionData:
    """Christoffel symbols gamma[(k, i, j)] as x-polynomials (0-based indices)."""

    d: int
    gamma: tuple  # sorted ((k, i, j), Poly) pairs, zero entries omitted

    @classmethod
    def from_table(cls, d, table):
        entries = {}
        for (k, i, j), p in table.items():
            for t in (k, i, j):
                if not 0 <= t < d:
                    raise ValueError(f"Christoffel index {t + 1} outside 1..{d}")
            if not isinstance(p, Poly):
                p = Poly.const(d, p)
            if p:
                entries[(k, i, j)] = entries.get((k, i, j), Poly(d)) + p
        for (k, i, j), p in entries.items():
            if entries.get((k, j, i), Poly(d)) != p:
                raise TorsionError(
                    f"torsion-free violation: Gamma^{k + 1}_{i + 1}{j + 1} != Gamma^{k + 1}_{j + 1}{i + 1}")
        return cls(d, tuple(sorted((key, p) for key, p in entries.items() if p)))

    @classmethod
    def symmetric(cls, d, table):
        """Build from entries with i <= j, filling in the mirror entries."""
        full = {}
        for (k, i, j), p in table.items():
            full[(k, i, j)] = p
            full[(k, j, i)] = p
        return cls.from_table(d, full)

    @classmethod
    def flat(cls, d):
        return cls(d, ())

    def entry(self, k, i, j) -> Poly:
        return dict(self.gamma).get((k, i, j), Poly(self.d))

    def table(self):
        return dict(self.gamma)

    def is_zero(self):
        return not self.gamma


def _tables_key(conn):
    return tuple((key, tuple(sorted(p.terms.items()))) for key, p in conn.gamma)


# -- delta, its homotopy and sigma ----------------------------------------------------

@lru_cache(maxsize=None)
def _delta_terms(d):
    return {((i,), zero_mono(d), zero_mono(d), (i,)): rational(1) for i in range(d)}


def delta_field(ctx) -> PolyVecField:
    """The canonical fiberwise vector field dy^i d/dy^i."""
    return PolyVecField(ctx, _delta_terms(ctx.d))


def delta(e):
    return act(delta_field(e.ctx), e)


def delta_inv(e):
    """Contract one dy into y with alternating signs from the left, divided by p + q."""
    if isinstance(e, HochChain):
        raise TypeError("delta_inv is not defined on chains")
    d = e.ctx.d
    out = {}
    for (w, x, y, s), c in e.terms.items():
        q = len(w)
        if not q:
            continue
        p = mono_deg(y)
        scale = c / (p + q)
        for pos, i in enumerate(w):
            rest = w[:pos] + w[pos + 1:]
            accumulate(out, (rest, x, mono_add(y, unit_mono(d, i)), s), -scale if pos % 2 else scale)
    return e.new(out)


def sigma(e):
    """Set y and dy to zero."""
    return e.new({k: c for k, c in e.terms.items() if not k[0] and e.ydeg_of(k) == 0})


def hodge_defect(e):
    """e - sigma(e) - delta delta_inv e - delta_inv delta e (zero when the identity holds).

    delta_inv raises the y-degree, so the check runs with one degree of headroom.
    """
    e = e.with_ctx(e.ctx.with_(N_y=e.ctx.N_y + 1))
    return e - sigma(e) - delta(delta_inv(e)) - delta_inv(delta(e))


# -- the connection --------------------------------------------------------------------

def connection_field(conn: ConnectionData, ctx) -> PolyVecField:
    """Gamma = -dy^i Gamma^k_ij(x) y^j d/dy^k."""
    if conn.d != ctx.d:
        raise ValueError("connection and context dimensions differ")
    d = ctx.d
    out = {}
    for (k, i, j), p in conn.gamma:
        for m, c in p.terms.items():
            accumulate(out, ((i,), m, unit_mono(d, j), (k,)), -c)
    return PolyVecField(ctx, out)


def connection_from_field(field: PolyVecField) -> ConnectionData:
    """Read the Christoffel table back from -dy^i Gamma^k_ij y^j d/dy^k."""
    d = field.ctx.d
    table = {}
    for (w, x, y, s), c in field.terms.items():
        if len(w) != 1 or mono_deg(y) != 1 or len(s) != 1:
            raise ValueError("not a connection form")
        j = y.index(1)
        key = (s[0], w[0], j)
        table[key] = table.get(key, Poly(d)) + Poly(d, {x: -c})
    return ConnectionData.from_table(d, table)


def base_differential(e):
    """dy^i d/dx^i, the dy placed on the left."""
    out = {}
    for i in range(e.ctx.d):
        for (w, x, y, s), c in x_derivative(e, i).terms.items():
            sg, w2 = merge_sign((i,), w)
            if sg:
                accumulate(out, (w2, x, y, s), sg * c)
    return e.new(out)


def nabla(conn: ConnectionData, e):
    return base_differential(e) + act(connection_field(conn, e.ctx), e)


def riemann(conn: ConnectionData):
    """R[(i, j, k, l)] = d_i G^k_jl - d_j G^k_il + G^k_im G^m_jl - G^k_jm G^m_il."""
    d = conn.d
    g = conn.entry
    out = {}
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            for k in range(d):
                for l in range(d):
                    r = g(k, j, l).deriv(i) - g(k, i, l).deriv(j)
                    for m in range(d):
                        r = r + g(k, i, m) * g(m, j, l) - g(k, j, m) * g(m, i, l)
                    if r:
                        out[(i, j, k, l)] = r
    return out


def curvature(conn: ConnectionData, ctx) -> PolyVecField:
    """-1/2 dy^i dy^j R_ij^k_l(x) y^l d/dy^k."""
    d = ctx.d
    out = {}
    for (i, j, k, l), r in riemann(conn).items():
        sg, w = merge_sign((i,), (j,))
        for m, c in r.terms.items():
            accumulate(out, (w, m, unit_mono(d, l), (k,)), -sg * c / 2)
    return PolyVecField(ctx, out)


def curvature_from_connection(conn: ConnectionData, ctx) -> PolyVecField:
    """The same 2-form computed as dGamma + 1/2 [Gamma, Gamma]."""
    g = connection_field(conn, ctx)
    return base_differential(g) + schouten(g, g).scale(rational(1, 2))
