"""Graded carriers over a polynomial chart.

Every element is a finite sum of terms

    coeff * x^a * [dy-monomial] * y^b * payload

stored as ``{(dy, x, y, slot): rational}``. ``dy`` is a strictly
increasing tuple of form indices, ``x`` and ``y`` are exponent tuples and
``slot`` depends on the carrier:

* PolyVecField: strictly increasing tuple of vector indices
* PolyDiffOp: tuple of k+1 exponent tuples (derivatives per slot);
  the empty tuple is a plain function
* ExtForm: strictly increasing tuple of dx indices
* HochChain: tuple of k+1 exponent tuples (monomials in y_0..y_k);
  the ``y`` entry is unused and kept at zero

Fiberwise operations differentiate the ``y`` variables and treat ``x``
as a parameter. Chart-level objects (plain polyvector fields, operators
and forms on R^d) are stored with the chart coordinates in the ``y``
position and no ``x`` dependence, so one implementation of the calculus
serves both levels.
"""
from __future__ import annotations


from ..graded import RATIONAL_TYPES, TruncationContext, mono_deg, rational, zero_mono
from .poly import Poly

ZERO = rational(0)


def accumulate(out: dict, key, c) -> None:
    v = out.get(key, ZERO) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class FiberElement:
    __slots__ = ("ctx", "terms")
    kind = "element"

    def __init__(self, ctx: TruncationContext, terms=None, truncate: bool = True):
        self.ctx = ctx
        clean = {}
        limit = ctx.N_y if truncate else None
        for key, c in (terms or {}).items():
            if not c:
                continue
            if limit is not None and self.ydeg_of(key) > limit:
                continue
            clean[key] = c if isinstance(c, type(rational(0))) else rational(c)
        self.terms = clean

    @classmethod
    def trusted(cls, ctx, terms):
        """Wrap a dict that is already clean: nonzero rationals within the truncation."""
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.terms = terms
        return obj

    # -- carrier specific hooks -------------------------------------------------
    @staticmethod
    def slot_degree(slot) -> int:
        raise NotImplementedError

    @staticmethod
    def ydeg_of(key) -> int:
        return mono_deg(key[2])

    # -- generic structure ------------------------------------------------------
    def new(self, terms, truncate=True):
        return type(self)(self.ctx, terms, truncate)

    def zero(self):
        return type(self)(self.ctx)

    @classmethod
    def parity_of(cls, key) -> int:
        return (len(key[0]) + cls.slot_degree(key[3])) % 2

    def sort_key(self, key):
        dy, x, y, slot = key
        return (self.ydeg_of(key), dy, mono_deg(x), x, y, slot)

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: self.sort_key(kv[0]))

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return type(other) is type(self) and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self.terms.items())))

    def _combine(self, other, sign):
        self._check(other)
        if self.ctx != other.ctx:
            out = dict(self.terms)
            for k, c in other.terms.items():
                accumulate(out, k, sign * c)
            return self.new(out)
        big, small, s_big, s_small = self.terms, other.terms, 1, sign
        if len(small) > len(big):
            big, small, s_big, s_small = small, big, sign, 1
        out = dict(big) if s_big == 1 else {k: -c for k, c in big.items()}
        for k, c in small.items():
            accumulate(out, k, c if s_small == 1 else -c)
        return type(self).trusted(self.ctx, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return type(self).trusted(self.ctx, {k: -c for k, c in self.terms.items()})

    def scale(self, c):
        c = rational(c)
        if not c:
            return self.zero()
        return type(self).trusted(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, RATIONAL_TYPES):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.ctx.d != self.ctx.d:
            raise ValueError("dimension mismatch")

    def with_ctx(self, ctx):
        return type(self)(ctx, self.terms)

    def truncate(self, n=None):
        """Drop terms of y-degree above n (default: the context bound)."""
        n = self.ctx.N_y if n is None else n
        return self.new({k: c for k, c in self.terms.items() if self.ydeg_of(k) <= n})

    def upto(self, n):
        return self.truncate(n)

    def stratum(self, p):
        return self.new({k: c for k, c in self.terms.items() if self.ydeg_of(k) == p})

    def exterior(self, q):
        return self.new({k: c for k, c in self.terms.items() if len(k[0]) == q})

    def max_ydeg(self) -> int:
        return max((self.ydeg_of(k) for k in self.terms), default=-1)

    def exterior_degrees(self):
        return sorted({len(k[0]) for k in self.terms})

    def is_dy_free(self) -> bool:
        return all(not k[0] for k in self.terms)

    def is_x_free(self) -> bool:
        return all(not any(k[1]) for k in self.terms)

    def map_keys(self, fn):
        """Apply fn(key, coeff) -> iterable of (key, coeff) and collect."""
        out = {}
        for k, c in self.terms.items():
            for k2, c2 in fn(k, c):
                accumulate(out, k2, c2)
        return self.new(out)

    # -- serialization ----------------------------------------------------------
    def slot_to_json(self, slot):
        raise NotImplementedError

    @classmethod
    def slot_from_json(cls, term, d):
        raise NotImplementedError

    def to_json(self):
        rows = []
        for (dy, x, y, slot), c in self.items():
            row = {"coeff": fraction_str(c), "dy": [i + 1 for i in dy], "x": list(x), "y": list(y)}
            row.update(self.slot_to_json(slot))
            rows.append(row)
        return {"type": self.kind, "d": self.ctx.d, "terms": rows}

    @classmethod
    def from_json(cls, data, ctx):
        if data.get("type") not in (None, cls.kind):
            raise ValueError(f"expected a {cls.kind}, got {data.get('type')}")
        d = ctx.d
        terms = {}
        for row in data.get("terms", []):
            dy = tuple(sorted(i - 1 for i in row.get("dy", [])))
            x = tuple(row.get("x", zero_mono(d)))
            y = tuple(row.get("y", zero_mono(d)))
            slot, sign = cls.slot_from_json(row, d)
            accumulate(terms, (dy, x, y, slot), sign * rational(row["coeff"]))
        return cls(ctx, terms)

    def __repr__(self):
        return f"{type(self).__name__}({len(self.terms)} terms)"


def fraction_str(c) -> str:
    c = rational(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _sorted_signed(indices):
    from ..graded import sort_with_sign
    sign, s = sort_with_sign(indices)
    return s, sign


class PolyVecField(FiberElement):
    """Polyvector fields; slot = increasing tuple of d/dy indices."""

    kind = "polyvector"
    __slots__ = ()

    @staticmethod
    def slot_degree(slot) -> int:
        return len(slot) - 1

    def slot_to_json(self, slot):
        return {"vslots": [i + 1 for i in slot]}

    @classmethod
    def slot_from_json(cls, row, d):
        s, sign = _sorted_signed([i - 1 for i in row.get("vslots", [])])
        if s is None:
            return (), 0
        return s, sign


class PolyDiffOp(FiberElement):
    """Polydifferential operators; slot = tuple of derivative multi-indices."""

    kind = "polydiffop"
    __slots__ = ()

    @staticmethod
    def slot_degree(slot) -> int:
        return len(slot) - 1

    def slot_to_json(self, slot):
        return {"oslots": [list(a) for a in slot]}

    @classmethod
    def slot_from_json(cls, row, d):
        return tuple(tuple(a) for a in row.get("oslots", [])), 1

    def max_order(self) -> int:
        return max((sum(mono_deg(a) for a in k[3]) for k in self.terms), default=0)


class ExtForm(FiberElement):
    """dx-forms; slot = increasing tuple of dx indices."""

    kind = "form"
    __slots__ = ()

    @staticmethod
    def slot_degree(slot) -> int:
        return len(slot)

    def slot_to_json(self, slot):
        return {"dx": [i + 1 for i in slot]}

    @classmethod
    def slot_from_json(cls, row, d):
        s, sign = _sorted_signed([i - 1 for i in row.get("dx", [])])
        if s is None:
            return (), 0
        return s, sign


class HochChain(FiberElement):
    """Hochschild chains as polynomials in y_0, ..., y_k."""

    kind = "chain"
    __slots__ = ()

    @staticmethod
    def slot_degree(slot) -> int:
        return len(slot) - 1

    @staticmethod
    def ydeg_of(key) -> int:
        return sum(mono_deg(m) for m in key[3])

    def slot_to_json(self, slot):
        return {"ymultis": [list(a) for a in slot]}

    @classmethod
    def slot_from_json(cls, row, d):
        return tuple(tuple(a) for a in row.get("ymultis", [])), 1


CARRIERS = {c.kind: c for c in (PolyVecField, PolyDiffOp, ExtForm, HochChain)}


# -- convenience constructors -----------------------------------------------------

def _poly_terms(ctx, poly, where):
    """Expand a Poly (or number) into (x, y) monomial pairs."""
    d = ctx.d
    if not isinstance(poly, Poly):
        poly = Poly.const(d, poly)
    for m, c in poly.terms.items():
        if where == "y":
            yield zero_mono(d), m, c
        else:
            yield m, zero_mono(d), c


def function(ctx, poly=1, where="y", dy=()) -> PolyDiffOp:
    """A function as an operator with no slots (C^{-1})."""
    out = {}
    for x, y, c in _poly_terms(ctx, poly, where):
        accumulate(out, (tuple(dy), x, y, ()), c)
    return PolyDiffOp(ctx, out)


def vector_field(ctx, comps, where="y") -> PolyVecField:
    """sum_k comps[k] d/dy^k with comps given as Polys or numbers."""
    out = {}
    for k, p in enumerate(comps):
        for x, y, c in _poly_terms(ctx, p, where):
            accumulate(out, ((), x, y, (k,)), c)
    return PolyVecField(ctx, out)


def polyvector(ctx, poly, slots, where="y") -> PolyVecField:
    s, sign = _sorted_signed(list(slots))
    if s is None:
        return PolyVecField(ctx)
    out = {}
    for x, y, c in _poly_terms(ctx, poly, where):
        accumulate(out, ((), x, y, s), sign * c)
    return PolyVecField(ctx, out)


def operator(ctx, poly, slots, where="y") -> PolyDiffOp:
    slots = tuple(tuple(a) for a in slots)
    out = {}
    for x, y, c in _poly_terms(ctx, poly, where):
        accumulate(out, ((), x, y, slots), c)
    return PolyDiffOp(ctx, out)


def form(ctx, poly, dx=(), where="y") -> ExtForm:
    s, sign = _sorted_signed(list(dx))
    if s is None:
        return ExtForm(ctx)
    out = {}
    for x, y, c in _poly_terms(ctx, poly, where):
        accumulate(out, ((), x, y, s), sign * c)
    return ExtForm(ctx, out)


def chain(ctx, factors, coeff=1) -> HochChain:
    """Tensor product of monomials given as exponent tuples."""
    key = ((), zero_mono(ctx.d), zero_mono(ctx.d), tuple(tuple(m) for m in factors))
    return HochChain(ctx, {key: rational(coeff)})


def chain_from_polys(ctx, polys) -> HochChain:
    """Tensor product a_0 (x) ... (x) a_k of chart polynomials."""
    out = {(): rational(1)}
    for p in polys:
        if not isinstance(p, Poly):
            p = Poly.const(ctx.d, p)
        nxt = {}
        for slot, c in out.items():
            for m, c2 in p.terms.items():
                accumulate(nxt, slot + (m,), c * c2)
        out = nxt
    z = zero_mono(ctx.d)
    return HochChain(ctx, {((), z, z, slot): c for slot, c in out.items()})


def dy_free_part(e):
    return e.exterior(0)
