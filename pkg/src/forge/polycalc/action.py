"""Action of fiberwise vector fields on every carrier.

Functions and operators are acted on by the Gerstenhaber bracket,
polyvectors by the Schouten bracket, forms by the Lie derivative and
chains by the cochain action. Fedosov operators go through this single
entry point so their signs agree across carriers.
"""
from __future__ import annotations

from ..graded import mono_deg
from .carriers import ExtForm, HochChain, PolyDiffOp, PolyVecField
from .algebra import Accumulator
from .hochschild import _chain_terms, _opdeg, gerstenhaber_into, vector_to_operator
from .vectors import _lie_terms_factory, _schouten_terms


def _raw_into(acc, u, e):
    if isinstance(e, PolyVecField):
        acc.add(u, e, _schouten_terms, lambda s: len(s) - 1)
    elif isinstance(e, PolyDiffOp):
        gerstenhaber_into(acc, vector_to_operator(u), e)
    elif isinstance(e, ExtForm):
        acc.add(u, e, _lie_terms_factory(e.ctx.d), lambda s: len(s) - 1)
    elif isinstance(e, HochChain):
        acc.add(vector_to_operator(u), e, _chain_terms, _opdeg)
    else:
        raise TypeError(f"no vector field action on {type(e).__name__}")


def _drop(e, key) -> int:
    """How far below ydeg + r - 1 a vector field of y-degree r can push this term."""
    if isinstance(e, PolyDiffOp):
        return max(0, max((mono_deg(a) for a in key[3]), default=0) - 1)
    return 0


def act(u: PolyVecField, e, upto: int | None = None):
    """u . e, skipping pairs of terms that can only land above y-degree ``upto``.

    ``upto`` defaults to the truncation bound, so the result is unchanged.
    """
    if any(len(k[3]) != 1 for k in u.terms):
        raise ValueError("only (form-valued) vector fields act")
    limit = e.ctx.N_y if upto is None else upto
    u_by = {}
    for k, c in u.terms.items():
        u_by.setdefault(mono_deg(k[2]), {})[k] = c
    e_by = {}
    for k, c in e.terms.items():
        e_by.setdefault((e.ydeg_of(k), _drop(e, k)), {})[k] = c
    acc = Accumulator(e.ctx, type(e))
    for r, ut in u_by.items():
        chosen = {}
        for (m, drop), et in e_by.items():
            if m + r - 1 - drop <= limit:
                chosen.update(et)
        if chosen:
            _raw_into(acc, PolyVecField.trusted(u.ctx, ut), type(e).trusted(e.ctx, chosen))
    out = acc.result()
    return out.truncate(limit) if upto is not None else out
