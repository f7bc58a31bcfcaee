"""Linear functionals on truncated functions tested against star commutators."""
from __future__ import annotations

from dataclasses import dataclass

from ..graded import mono_deg, monomials_upto, rational
from ..polycalc.carriers import PolyDiffOp
from ..polycalc.hochschild import apply
from .star import StarProduct, monomial_basis


@dataclass(frozen=True)
class Functional:
    """Coefficient table {exponent tuple: weight} on chart monomials."""
    weights: dict

    def __call__(self, f: PolyDiffOp):
        total = rational(0)
        for (_, _, y, s), c in f.terms.items():
            if s:
                raise ValueError("functionals take functions")
            w = self.weights.get(tuple(y))
            if w:
                total += w * c
        return total

    @classmethod
    def coefficient_of(cls, mono):
        return cls({tuple(mono): rational(1)})


@dataclass(frozen=True)
class TraceResidual:
    order: int
    a: tuple
    b: tuple
    value: object


def _exponent(f):
    (key,) = f.terms
    return tuple(key[2])


def trace_check(s: StarProduct, functional: Functional, poly_cap=2):
    """Nonzero values of the functional on a * b - b * a, per hbar order.

    Also returns, per monomial pair, the classical criterion: the functional
    on Pi_1(a, b) - Pi_1(b, a) next to the order-one commutator value.
    """
    basis = monomial_basis(s.ctx, poly_cap)
    residuals = []
    criterion = []
    pi1 = s.term(1)
    for i, a in enumerate(basis):
        for b in basis[i + 1:]:
            comm = s.commutator(a, b)
            for n, val in sorted(comm.items()):
                v = functional(val)
                if v:
                    residuals.append(TraceResidual(n, _exponent(a), _exponent(b), v))
            classical = functional(apply(pi1, [a, b]) - apply(pi1, [b, a])) if pi1 else 0
            first = functional(comm[1]) if 1 in comm else rational(0)
            criterion.append((_exponent(a), _exponent(b), first, classical))
    return residuals, criterion


def criterion_agrees(criterion):
    """At order hbar the commutator is the antisymmetrized Pi_1, so both sides match."""
    return all(first == classical for _, _, first, classical in criterion)


def top_coefficient(ctx, poly_cap):
    """Coefficient of the product of all coordinates to the highest power <= poly_cap / d."""
    k = poly_cap // ctx.d
    return Functional.coefficient_of((k,) * ctx.d)


def monomials(ctx, poly_cap):
    return [m for m in monomials_upto(ctx.d, poly_cap) if mono_deg(m) <= poly_cap]
