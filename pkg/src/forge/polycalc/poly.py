"""Sparse multivariate polynomials with rational coefficients."""
from __future__ import annotations

import ast

from ..graded import RATIONAL_TYPES, mono_add, mono_deg, rational, zero_mono


class Poly:
    """Polynomial in n variables stored as {exponent tuple: rational}."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        clean = {}
        for m, c in (terms or {}).items():
            c = rational(c)
            if c:
                clean[tuple(m)] = c
        self.terms = clean

    @classmethod
    def const(cls, n, c):
        return cls(n, {zero_mono(n): c})

    @classmethod
    def var(cls, n, i):
        m = [0] * n
        m[i] = 1
        return cls(n, {tuple(m): 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, RATIONAL_TYPES):
            other = Poly.const(self.n, other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        return Poly.const(self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_add(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def deriv(self, i: int) -> "Poly":
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * e
        return Poly(self.n, out)

    def degree(self) -> int:
        return max((mono_deg(m) for m in self.terms), default=-1)

    def substitute_linear(self, matrix) -> "Poly":
        """Return p(M x), matrix given as rows of rationals."""
        images = []
        for i in range(self.n):
            images.append(Poly(self.n, {tuple(1 if k == j else 0 for k in range(self.n)): matrix[i][j]
                                        for j in range(self.n)}))
        out = Poly(self.n)
        for m, c in self.terms.items():
            t = Poly.const(self.n, c)
            for i, e in enumerate(m):
                if e:
                    t = t * images[i] ** e
            out = out + t
        return out

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: (mono_deg(kv[0]), tuple(-e for e in kv[0])))

    def to_str(self, names=None) -> str:
        names = names or [f"x{i + 1}" for i in range(self.n)]
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.items():
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self.to_str()})"


class PolyParseError(ValueError):
    pass


def parse_poly(text, n: int, names=None) -> Poly:
    """Parse strings such as ``"3/2*x1^2 - x2 + 1"`` into a Poly.

    Variable names default to x1..xn. Numbers may be integers or
    integer ratios; ``^`` and ``**`` both mean power.
    """
    if isinstance(text, RATIONAL_TYPES):
        return Poly.const(n, text)
    names = names or [f"x{i + 1}" for i in range(n)]
    lookup = {name: i for i, name in enumerate(names)}
    try:
        tree = ast.parse(str(text).replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise PolyParseError(f"cannot parse polynomial {text!r}: {exc.msg} at column {exc.offset}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Poly.const(n, node.value)
        if isinstance(node, ast.Name):
            if node.id not in lookup:
                raise PolyParseError(f"unknown variable {node.id!r} in {text!r}")
            return Poly.var(n, lookup[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int) and exp.value >= 0):
                    raise PolyParseError(f"exponent must be a non-negative integer in {text!r}")
                return ev(node.left) ** exp.value
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if b.degree() > 0 or not b:
                    raise PolyParseError(f"division by a non-constant in {text!r}")
                return a * Poly.const(n, 1 / b.terms[zero_mono(n)])
        raise PolyParseError(f"unsupported syntax in polynomial {text!r}")

    return ev(tree)
