"""Contracting a truncated morphism into Omega(M, D_poly) onto flat-landing maps.

The target DGLA is fiber operators with dy-forms, differential D + the
Hochschild differential, and the Gerstenhaber bracket. The source is chart
polyvector fields with the Schouten bracket and zero differential.

Morphisms are kept as callables on homogeneous chart polyvector fields.
Relations are checked on a finite list of sample inputs; everything is
compared on y-degrees where the truncation of the fiber is exact.

Only arities 1 and 2 are supported. The relations used are

    arity 1:  d' U1(g) = 0
    arity 2:  d' U2(g1, g2) = U1([g1, g2]) - [U1 g1, U1 g2]

and a partial homotopy h at arity 1 (degree -1) changes the maps to

    U1 + d' h
    U2 - [h g1, U1 g2 + 1/2 d' h g2] - (-1)^|g1| [U1 g1 + 1/2 d' h g1, h g2] + h [g1, g2]

which is the endpoint of the path dU_t/dt = Q' H_t + H_t Q. At arity 2 the
homotopy only adds d' h to U2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from ..graded import rational
from ..polycalc.carriers import PolyDiffOp, PolyVecField
from ..polycalc.hochschild import gerstenhaber, hkr_V, hoch_diff
from ..polycalc.vectors import schouten
from .identify import lambda_D
from .resolution import FedosovData, fedosov_D, phi

HALF = rational(1, 2)
MAX_ARITY = 2


class ContractionError(ValueError):
    """The input morphism violates its relations or cannot be contracted."""

    def __init__(self, message, arity=None):
        super().__init__(message)
        self.arity = arity


def polyvector_degree(g: PolyVecField) -> int:
    degs = {len(k[3]) - 1 for k in g.terms}
    if len(degs) > 1:
        raise ContractionError("sample inputs must be homogeneous polyvector fields")
    return degs.pop() if degs else 0


def _cached(func):
    memo = {}

    def wrapped(*args):
        if args not in memo:
            memo[args] = func(*args)
        return memo[args]
    return wrapped


@dataclass
class FormValuedMorphism:
    """Truncated L-infinity morphism T_poly -> Omega(M, D_poly), arities 1 and 2.

    ``maps[n]`` takes n chart polyvector fields and returns a fiber operator
    in ``fd.context``. ``samples`` are the inputs used for checks. Values
    are compared only on y-degrees <= ``cut``, where the truncation cannot
    reach them.
    """
    fd: FedosovData
    maps: dict
    samples: list
    arity: int = 2
    cut: int | None = None
    history: list = field(default_factory=list)

    def __post_init__(self):
        if not 1 <= self.arity <= MAX_ARITY:
            raise ContractionError(f"only arities 1..{MAX_ARITY} are supported")
        self.maps = {n: _cached(f) for n, f in self.maps.items()}
        if self.cut is None:
            self.cut = self.fd.context.N_y - 2

    def u(self, n, *args):
        f = self.maps.get(n)
        if f is None:
            return PolyDiffOp(self.fd.context)
        return f(*args)

    def differential(self, e):
        """D + Hochschild differential."""
        ctx = self.fd.context
        e = e.with_ctx(ctx) if e.ctx != ctx else e
        return fedosov_D(self.fd, e) + hoch_diff(e)

    def exact(self, e):
        return e.truncate(self.cut)

    def words(self, n):
        return list(combinations_with_replacement(self.samples, n))


def flat_morphism(fd: FedosovData, samples, arity=2):
    """U1 = lambda_D o hkr_V, U2 = 0.

    On vector fields and functions this is a strict DGLA morphism landing in
    flat exterior-degree-zero operators.
    """
    return FormValuedMorphism(fd, {1: lambda g: lambda_D(fd, hkr_V(g))}, list(samples), arity)


# ---------------------------------------------------------------- relations

def relation_residual(U: FormValuedMorphism, args):
    n = len(args)
    if n == 1:
        return U.exact(U.differential(U.u(1, *args)))
    if n == 2:
        g1, g2 = args
        res = U.differential(U.u(2, g1, g2)) - U.u(1, schouten(g1, g2)) \
            + gerstenhaber(U.u(1, g1), U.u(1, g2))
        return U.exact(res)
    raise ContractionError(f"relations above arity {MAX_ARITY} are not implemented")


def check_relations(U: FormValuedMorphism, upto=None):
    """(arity, inputs) for every sample word with a nonzero residual."""
    upto = U.arity if upto is None else min(upto, U.arity)
    bad = []
    for n in range(1, upto + 1):
        for args in U.words(n):
            if relation_residual(U, args):
                bad.append((n, args))
    return bad


def exterior_degree(e) -> int:
    return max((len(k[0]) for k in e.terms), default=0)


def flat_defects(U: FormValuedMorphism, n):
    """Sample words whose arity-n value has dy-forms or is not D-closed."""
    bad = []
    for args in U.words(n):
        val = U.u(n, *args)
        if exterior_degree(U.exact(val)) or U.exact(fedosov_D(U.fd, val)):
            bad.append(args)
    return bad


def is_flat(U: FormValuedMorphism, upto=None):
    upto = U.arity if upto is None else upto
    return all(not flat_defects(U, n) for n in range(1, upto + 1))


# ---------------------------------------------------------------- homotopies

def homotopy_step(U: FormValuedMorphism, h, n):
    """Apply a partial homotopy with single structure map h at arity n."""
    d = U.differential
    old1, old2 = U.maps.get(1), U.maps.get(2)
    zero = lambda *a: PolyDiffOp(U.fd.context)
    old1 = old1 or zero
    old2 = old2 or zero
    maps = {}
    if n == 1:
        maps[1] = lambda g: old1(g) + d(h(g))
        if U.arity >= 2:
            def new2(g1, g2):
                h1, h2 = h(g1), h(g2)
                u1, u2 = old1(g1), old1(g2)
                out = old2(g1, g2) - gerstenhaber(h1, u2 + d(h2).scale(HALF))
                second = gerstenhaber(u1 + d(h1).scale(HALF), h2)
                out = out + (second if polyvector_degree(g1) % 2 else -second)
                return out + h(schouten(g1, g2))
            maps[2] = new2
    elif n == 2:
        maps[1] = old1
        maps[2] = lambda g1, g2: old2(g1, g2) + d(h(g1, g2))
    else:
        raise ContractionError(f"homotopies above arity {MAX_ARITY} are not implemented")
    return FormValuedMorphism(U.fd, maps, U.samples, U.arity, U.cut, U.history + [n])


def _phi_homotopy(U, n):
    f = U.maps[n]
    return lambda *args: -phi(U.fd, f(*args))


def contract_to_flat(U: FormValuedMorphism, fd: FedosovData | None = None, arity=None,
                     max_rounds=None):
    """Partially homotopic morphism whose maps up to ``arity`` are flat.

    Arity by arity, the homotopy h = -Phi(U_n) is applied until U_n has no
    dy-forms; each round lowers the top exterior degree. Maps below the
    current arity are left unchanged. Flat input is returned as is.
    """
    if fd is not None and fd is not U.fd:
        raise ContractionError("morphism was built over a different Fedosov connection")
    arity = U.arity if arity is None else arity
    if not 1 <= arity <= U.arity:
        raise ContractionError(f"arity {arity} outside 1..{U.arity}")
    bad = check_relations(U, arity)
    if bad:
        n, args = bad[0]
        raise ContractionError(f"relation fails at arity {n}", arity=n)
    rounds = max_rounds or U.fd.context.d + 1
    for n in range(1, arity + 1):
        for _ in range(rounds):
            if not any(exterior_degree(U.exact(U.u(n, *a))) for a in U.words(n)):
                break
            U = homotopy_step(U, _phi_homotopy(U, n), n)
        else:
            raise ContractionError(f"exterior degree did not drop at arity {n}", arity=n)
    return U
