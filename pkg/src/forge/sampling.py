"""Deterministic random pools of carrier elements for property checks."""
from __future__ import annotations

import random

from .graded import merge_sign, monomials_upto, rational, zero_mono
from .polycalc.carriers import (ExtForm, HochChain, PolyDiffOp, PolyVecField, accumulate)


def _coef(rng: random.Random) -> rational:
    return rational(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 1, 2, 3]))


def _subset(rng, d, size):
    if size > d:
        return None
    return tuple(sorted(rng.sample(range(d), size)))


def _mono(rng, d, maxdeg):
    return rng.choice(monomials_upto(d, maxdeg))


def random_element(rng, ctx, kind, *, terms=3, ydeg=None, xdeg=0, dy=(0,), slots=1,
                   order=1):
    """Random element of a carrier.

    ``dy`` lists admissible exterior degrees, ``slots`` the payload size
    (vector count, operator slots, form degree or chain factors), ``order``
    the largest derivative order per operator slot.
    """
    d = ctx.d
    ydeg = ctx.N_y if ydeg is None else ydeg
    out = {}
    for _ in range(terms):
        q = rng.choice(dy)
        w = _subset(rng, d, q)
        if w is None:
            continue
        x = _mono(rng, d, xdeg)
        y = _mono(rng, d, ydeg)
        if kind == "polyvector":
            s = _subset(rng, d, slots)
            if s is None:
                continue
            cls = PolyVecField
        elif kind == "form":
            s = _subset(rng, d, slots)
            if s is None:
                continue
            cls = ExtForm
        elif kind == "polydiffop":
            s = tuple(_mono(rng, d, order) for _ in range(slots))
            cls = PolyDiffOp
        elif kind == "chain":
            s = tuple(_mono(rng, d, max(ydeg // max(slots, 1), 1)) for _ in range(slots))
            y = zero_mono(d)
            cls = HochChain
        else:
            raise ValueError(kind)
        accumulate(out, (w, x, y, s), _coef(rng))
    return {"polyvector": PolyVecField, "form": ExtForm, "polydiffop": PolyDiffOp,
            "chain": HochChain}[kind](ctx, out)


def random_poly(rng, n, maxdeg, terms=2):
    from .polycalc.poly import Poly
    out = {}
    for _ in range(terms):
        m = _mono(rng, n, maxdeg)
        out[m] = out.get(m, 0) + _coef(rng)
    return Poly(n, out)


def random_christoffel(rng, d, maxdeg=2, density=0.35, terms=2):
    """Symmetric table {(k,i,j): Poly} with i <= j stored once."""
    table = {}
    for k in range(d):
        for i in range(d):
            for j in range(i, d):
                if rng.random() < density:
                    p = random_poly(rng, d, maxdeg, terms)
                    if p:
                        table[(k, i, j)] = p
    if not table:
        table[(0, 0, 0)] = random_poly(rng, d, maxdeg, terms) or random_poly(rng, d, 0, 1)
    return table


def random_invertible(rng, d):
    """Random invertible rational matrix with small entries."""
    from .linalg import det
    while True:
        m = [[rational(rng.randint(-2, 2)) for _ in range(d)] for _ in range(d)]
        if det(m) != 0:
            return m


__all__ = ["random_element", "random_poly", "random_christoffel", "random_invertible", "merge_sign"]
