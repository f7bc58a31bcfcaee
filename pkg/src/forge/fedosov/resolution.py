"""The flat connection A, the differential D, the flat lift tau and the
contracting homotopy Phi."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..graded import TruncationContext, mono_deg, rational
from ..polycalc.action import act
from ..polycalc.carriers import HochChain, PolyDiffOp, PolyVecField, accumulate
from ..polycalc.vectors import schouten
from .calculus import (ConnectionData, base_differential, connection_field, curvature, delta,
                       delta_inv, nabla)

HALF = rational(1, 2)


@dataclass(frozen=True)
class FedosovData:
    context: TruncationContext
    conn: ConnectionData
    curvature: PolyVecField
    A: PolyVecField
    cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def gamma_field(self) -> PolyVecField:
        return connection_field(self.conn, self.context)

    def strata(self):
        return {p: self.A.stratum(p) for p in range(2, self.context.N_y + 1) if self.A.stratum(p)}


def _split(e):
    out = {}
    for k, c in e.terms.items():
        out.setdefault(e.ydeg_of(k), {})[k] = c
    return {p: e.new(t) for p, t in out.items()}


def build_A(conn: ConnectionData, ctx: TruncationContext) -> FedosovData:
    """Solve A = delta_inv(R) + delta_inv(nabla A + 1/2 [A, A]) one y-degree at a time.

    Stratum p + 1 only needs strata <= p, so each pass is exact.
    """
    if conn.d != ctx.d:
        raise ValueError("connection and context dimensions differ")
    R = curvature(conn, ctx)
    gamma = connection_field(conn, ctx)
    strata = {}
    seed = delta_inv(R)
    for p in range(2, ctx.N_y + 1):
        src = seed.stratum(p)
        # nabla preserves y-degree; [A_a, A_b] has degree a + b - 1
        prev = strata.get(p - 1)
        rhs = PolyVecField(ctx)
        if prev is not None:
            rhs = rhs + base_differential(prev) + schouten(gamma, prev)
        # A is odd, so [A_a, A_b] = [A_b, A_a] and each unordered pair is taken once
        for a in range(2, p // 2 + 1):
            b = p - a
            if a in strata and b in strata and b >= 2:
                br = schouten(strata[a], strata[b])
                rhs = rhs + (br.scale(HALF) if a == b else br)
        cur = src + delta_inv(rhs.stratum(p - 1))
        if cur:
            strata[p] = cur
    A = PolyVecField(ctx)
    for s in strata.values():
        A = A + s
    return FedosovData(ctx, conn, R, A)


def flatness_residual(fd: FedosovData, upto: int | None = None) -> PolyVecField:
    """R - delta A + nabla A + 1/2 [A, A], kept on y-degrees <= upto (default N_y - 1)."""
    ctx = fd.context
    upto = ctx.N_y - 1 if upto is None else upto
    A = fd.A.truncate(upto + 1)
    strata = _split(A)
    res = fd.curvature - delta(A) + nabla(fd.conn, A.truncate(upto))
    # [A_a, A_b] lands in y-degree a + b - 1; only pairs below the cut are formed
    for a, ea in strata.items():
        for b, eb in strata.items():
            if a <= b and a + b - 1 <= upto:
                br = schouten(ea, eb)
                res = res + (br.scale(HALF) if a == b else br)
    return res.truncate(upto)


def fedosov_D(fd: FedosovData, e, upto: int | None = None):
    """D = nabla - delta + A, optionally kept only on y-degrees <= upto."""
    e = e.with_ctx(fd.context) if e.ctx != fd.context else e
    if upto is not None:
        e = e.truncate(upto + 1)
    out = nabla(fd.conn, e) - delta(e) + act(fd.A, e, upto)
    return out.truncate(upto) if upto is not None else out


def D_squared(fd: FedosovData, e):
    """D(D e) on the y-degrees where truncation cannot reach it."""
    top = reliable_degree(fd, e)
    return fedosov_D(fd, fedosov_D(fd, e, top + 1), top)


def derivative_order(e) -> int:
    """How far one vector field action can lower the y-degree of e."""
    if isinstance(e, PolyDiffOp):
        return max((sum(mono_deg(a) for a in k[3]) for k in e.terms), default=0)
    if isinstance(e, HochChain):
        return 0
    return 1 if any(k[3] for k in e.terms) else 0


def reliable_degree(fd: FedosovData, e) -> int:
    """Largest y-degree on which D(D e) is unaffected by the dropped strata of A."""
    return fd.context.N_y - 1 - derivative_order(e)


def _filtration(e, key) -> int:
    if isinstance(e, PolyDiffOp):
        return e.ydeg_of(key) - sum(mono_deg(a) for a in key[3])
    return e.ydeg_of(key)


def _by_filtration(e):
    cls, ctx = type(e), e.ctx
    out = {}
    if isinstance(e, PolyDiffOp):
        for k, c in e.terms.items():
            f = mono_deg(k[2]) - sum(mono_deg(a) for a in k[3])
            out.setdefault(f, {})[k] = c
    else:
        for k, c in e.terms.items():
            out.setdefault(e.ydeg_of(k), {})[k] = c
    return {f: cls.trusted(ctx, t) for f, t in out.items()}


def _solve(fd: FedosovData, seed):
    """Fixed point X = seed + delta_inv(nabla X + A X), built by filtration degree.

    The filtration is the y-degree, minus the derivative order for operators;
    nabla preserves it, A raises it and delta_inv raises it by one.
    """
    if isinstance(seed, HochChain):
        raise TypeError("the flat lift is not defined on chains")
    ctx = fd.context
    seed = seed.with_ctx(ctx) if seed.ctx != ctx else seed
    gamma = fd.gamma_field
    parts = _by_filtration(seed)
    if not parts:
        return seed
    cls = type(seed)
    X = {}
    acc = {}
    for f in range(min(parts), ctx.N_y + 1):
        cur = parts.get(f, seed.zero())
        below = acc.pop(f - 1, None)
        if below is not None:
            cur = cur + _by_filtration(delta_inv(cls.trusted(ctx, below))).get(f, seed.zero())
        if not cur:
            continue
        for k, c in cur.terms.items():
            accumulate(X, k, c)
        image = base_differential(cur) + act(gamma, cur) + act(fd.A, cur)
        for g, t in _by_filtration(image).items():
            bucket = acc.setdefault(g, {})
            for k, c in t.terms.items():
                accumulate(bucket, k, c)
    return cls.trusted(ctx, X)


def tau(fd: FedosovData, a):
    """The D-flat lift a + delta_inv(nabla tau(a) + A tau(a)) of a y-free, dy-free element."""
    return _solve(fd, a)


def phi(fd: FedosovData, e):
    """Phi(e) = -delta_inv e + delta_inv(nabla Phi(e) + A Phi(e))."""
    return _solve(fd, -delta_inv(e.with_ctx(fd.context) if e.ctx != fd.context else e))
