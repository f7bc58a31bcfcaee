"""Finite-dimensional L-infinity data: graded bases, structure-map tables, signs.

Structure maps are stored the way a user writes them, as graded
antisymmetric maps on the unshifted space, one canonical entry per sorted
tuple of basis indices. Every identity is evaluated in the shifted picture
V = L[1], where the maps become graded symmetric and all signs reduce to
Koszul signs of shifted degrees. The two pictures are related by

    shifted(w_1..w_n) = c * (-1)^(sum_i (n-i) * sdeg(w_i)) * unshifted(w_1..w_n)

with c = -1 for algebra structure maps and homotopies, +1 otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from ..graded import RATIONAL_TYPES, rational

ALGEBRA_SIGN = -1
HOMOTOPY_SIGN = -1


class LinftyError(ValueError):
    """Malformed structure data (degree, index or filtration violation)."""


@dataclass(frozen=True)
class BasisElement:
    name: str
    degree: int
    level: int = 0


def _as_rational(c):
    if isinstance(c, str):
        c = c.strip()
        if "/" in c:
            num, den = c.split("/")
            return rational(int(num), int(den))
        return rational(int(c))
    if isinstance(c, RATIONAL_TYPES):
        return rational(c)
    raise LinftyError(f"coefficient {c!r} is not an exact rational")


def vec_add(acc, vec, scale=1):
    for i, c in vec.items():
        v = acc.get(i, 0) + scale * c
        if v:
            acc[i] = v
        else:
            acc.pop(i, None)
    return acc


def vec_scale(vec, scale):
    if not scale:
        return {}
    return {i: scale * c for i, c in vec.items()}


def clean(vec):
    return {i: c for i, c in vec.items() if c}


class GradedBasis:
    """Ordered basis with degrees and filtration levels."""

    def __init__(self, elements):
        elements = tuple(e if isinstance(e, BasisElement) else BasisElement(*e)
                         for e in elements)
        names = [e.name for e in elements]
        if len(set(names)) != len(names):
            raise LinftyError("basis names must be distinct")
        for e in elements:
            if e.level < 0:
                raise LinftyError(f"negative filtration level for {e.name}")
        self.elements = elements
        self.index = {n: i for i, n in enumerate(names)}
        self.degrees = tuple(e.degree for e in elements)
        self.shifted = tuple(e.degree - 1 for e in elements)
        self.levels = tuple(e.level for e in elements)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, GradedBasis) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def name(self, i):
        return self.elements[i].name

    def lookup(self, name):
        try:
            return self.index[name]
        except KeyError:
            raise LinftyError(f"unknown basis element {name!r}") from None

    def max_level(self):
        return max(self.levels, default=0)

    def vector(self, data):
        """Vector from {name: coefficient}."""
        return clean({self.lookup(n): _as_rational(c) for n, c in data.items()})

    def named(self, vec):
        return {self.name(i): vec[i] for i in sorted(vec)}

    def vector_degree(self, vec):
        degs = {self.degrees[i] for i in vec}
        if len(degs) > 1:
            raise LinftyError("vector is not homogeneous")
        return degs.pop() if degs else None

    def vector_level(self, vec):
        return min((self.levels[i] for i in vec), default=None)


# ---------------------------------------------------------------- signs

def sort_unshifted(word, degrees):
    """Sort indices of a graded antisymmetric argument list.

    Returns (sign, key) or (0, None) when the product vanishes
    (an even element repeated).
    """
    w = list(word)
    sign = 1
    for i in range(1, len(w)):
        j = i
        while j > 0 and w[j - 1] > w[j]:
            a, b = w[j - 1], w[j]
            if not (degrees[a] * degrees[b]) % 2:
                sign = -sign
            w[j - 1], w[j] = b, a
            j -= 1
    for a, b in zip(w, w[1:]):
        if a == b and degrees[a] % 2 == 0:
            return 0, None
    return sign, tuple(w)


def sort_shifted(word, shifted):
    """Sort indices of a graded symmetric argument list (shifted degrees)."""
    w = list(word)
    sign = 1
    for i in range(1, len(w)):
        j = i
        while j > 0 and w[j - 1] > w[j]:
            a, b = w[j - 1], w[j]
            if (shifted[a] * shifted[b]) % 2:
                sign = -sign
            w[j - 1], w[j] = b, a
            j -= 1
    for a, b in zip(w, w[1:]):
        if a == b and shifted[a] % 2:
            return 0, None
    return sign, tuple(w)


def decalage(key, shifted):
    n = len(key)
    odd = sum((n - 1 - i) * shifted[a] for i, a in enumerate(key))
    return -1 if odd % 2 else 1


def canonical_words(basis: GradedBasis, n: int):
    """Sorted index tuples that are nonzero in the n-th shifted symmetric power."""
    out = []
    for key in combinations_with_replacement(range(len(basis)), n):
        if all(not (a == b and basis.shifted[a] % 2) for a, b in zip(key, key[1:])):
            out.append(key)
    return out


# ---------------------------------------------------------------- tables

class MapTable:
    """One graded antisymmetric multilinear map, stored on canonical keys.

    ``module`` tables take a trailing module index that does not take part
    in the antisymmetry. ``sign`` is the shifted-picture constant c.
    """

    def __init__(self, arity, entries, source, target, degree_shift, *, module=None,
                 sign=1, label="map"):
        self.arity = arity
        self.source = source
        self.target = target
        self.module = module
        self.sign = sign
        self.label = label
        self.degree_shift = degree_shift
        self.entries = {}
        for key, vec in entries.items():
            self._insert(key, vec)

    def _insert(self, key, vec):
        if self.module is not None:
            word, v = key
        else:
            word, v = key, None
        word = tuple(word)
        if len(word) != self.arity:
            raise LinftyError(f"{self.label}: entry {word} has wrong arity")
        s, canon = sort_unshifted(word, self.source.degrees)
        vec = clean(vec)
        if s == 0:
            if vec:
                raise LinftyError(f"{self.label}: nonzero value on vanishing input {word}")
            return
        expected = sum(self.source.degrees[i] for i in canon) + self.degree_shift
        if v is not None:
            expected += self.module.degrees[v]
        for i in vec:
            if self.target.degrees[i] != expected:
                raise LinftyError(
                    f"{self.label}: output {self.target.name(i)} has degree "
                    f"{self.target.degrees[i]}, expected {expected}")
        k = canon if v is None else (canon, v)
        vec = vec_scale(vec, s)
        if k in self.entries and self.entries[k] != vec:
            raise LinftyError(f"{self.label}: conflicting entries for {word}")
        if vec:
            self.entries[k] = vec

    def __bool__(self):
        return bool(self.entries)

    def unshifted(self, word, v=None):
        s, canon = sort_unshifted(word, self.source.degrees)
        if not s:
            return {}
        vec = self.entries.get(canon if v is None else (canon, v))
        return vec_scale(vec, s) if vec else {}

    def shifted(self, word, v=None):
        s, canon = sort_shifted(word, self.source.shifted)
        if not s:
            return {}
        vec = self.entries.get(canon if v is None else (canon, v))
        if not vec:
            return {}
        return vec_scale(vec, s * self.sign * decalage(canon, self.source.shifted))

    def on_vectors(self, vectors, v=None, shifted=True):
        """Multilinear expansion on vector arguments."""
        out = {}
        evaluate = self.shifted if shifted else self.unshifted

        def rec(pos, word, coeff):
            if pos == len(vectors):
                vec = evaluate(tuple(word), v)
                if vec:
                    vec_add(out, vec, coeff)
                return
            for i, c in vectors[pos].items():
                word.append(i)
                rec(pos + 1, word, coeff * c)
                word.pop()

        if self.entries:
            rec(0, [], 1)
        return out

    def filtration_defects(self):
        """Entries whose output lies below the sum of the input levels."""
        bad = []
        for key, vec in self.entries.items():
            word, v = (key if self.module is not None else (key, None))
            need = sum(self.source.levels[i] for i in word)
            if v is not None:
                need += self.module.levels[v]
            if any(self.target.levels[i] < need for i in vec):
                bad.append(key)
        return bad

    def to_json(self):
        rows = []
        for key in sorted(self.entries):
            word, v = (key if self.module is not None else (key, None))
            row = {"in": [self.source.name(i) for i in word]}
            if v is not None:
                row["v"] = self.module.name(v)
            row["out"] = {self.target.name(i): str(c)
                          for i, c in sorted(self.entries[key].items())}
            rows.append(row)
        return rows


def _table_from_rows(rows, arity, source, target, shift, *, module=None, sign=1, label):
    entries = {}
    for row in rows:
        if "in" not in row or "out" not in row:
            raise LinftyError(f"{label}: each entry needs 'in' and 'out'")
        word = tuple(source.lookup(n) for n in row["in"])
        vec = target.vector(row["out"])
        if module is not None:
            if "v" not in row:
                raise LinftyError(f"{label}: module entries need 'v'")
            key = (word, module.lookup(row["v"]))
        else:
            key = word
        if key in entries:
            vec_add(entries[key], vec)
        else:
            entries[key] = vec
    return MapTable(arity, entries, source, target, shift, module=module, sign=sign,
                    label=label)


def _basis_from_json(rows):
    out = []
    for row in rows:
        try:
            out.append(BasisElement(str(row["name"]), int(row["degree"]),
                                    int(row.get("level", 0))))
        except KeyError as exc:
            raise LinftyError(f"basis entry missing field {exc}") from None
    return GradedBasis(out)


def _basis_to_json(basis):
    return [{"name": e.name, "degree": e.degree, "level": e.level} for e in basis.elements]


# ---------------------------------------------------------------- objects

@dataclass(eq=False)
class LinftySpace:
    """L-infinity algebra truncated at arity N: maps Q_1..Q_N of degree 2-n.

    ``closed`` asserts that all structure maps above the truncation vanish
    (true for DGLAs); twisting a closed object keeps its arity.
    """

    basis: GradedBasis
    maps: dict
    arity: int
    closed: bool = False

    def __post_init__(self):
        if self.arity < 1:
            raise LinftyError("arity must be positive")
        tables = {}
        for n in range(1, self.arity + 1):
            t = self.maps.get(n)
            if t is None:
                t = MapTable(n, {}, self.basis, self.basis, 2 - n, sign=ALGEBRA_SIGN,
                             label=f"Q{n}")
            elif not isinstance(t, MapTable):
                t = MapTable(n, t, self.basis, self.basis, 2 - n, sign=ALGEBRA_SIGN,
                             label=f"Q{n}")
            tables[n] = t
        extra = set(self.maps) - set(tables)
        if extra:
            raise LinftyError(f"structure maps beyond arity {self.arity}: {sorted(extra)}")
        self.maps = tables

    def __len__(self):
        return len(self.basis)

    def q(self, n):
        return self.maps.get(n) or MapTable(n, {}, self.basis, self.basis, 2 - n,
                                            sign=ALGEBRA_SIGN)

    @classmethod
    def dgla(cls, basis, differential, bracket, arity=4):
        """Package a DGLA: differential {i: vec}, bracket {(i, j): vec}."""
        basis = basis if isinstance(basis, GradedBasis) else GradedBasis(basis)
        q1 = {(i,): v for i, v in differential.items()}
        q2 = {tuple(k): v for k, v in bracket.items()}
        maps = {1: q1}
        if arity >= 2:
            maps[2] = q2
        elif any(clean(v) for v in q2.values()):
            raise LinftyError("arity 1 cannot hold a bracket")
        return cls(basis, maps, arity, closed=True)

    def is_dgla(self):
        return all(not self.maps[n] for n in range(3, self.arity + 1))

    def to_json(self):
        return {"basis": _basis_to_json(self.basis), "arity": self.arity,
                "closed": self.closed,
                "maps": {str(n): t.to_json() for n, t in self.maps.items() if t}}

    @classmethod
    def from_json(cls, data, arity=None):
        basis = _basis_from_json(data.get("basis", []))
        arity = int(data.get("arity", arity or 4))
        maps = {}
        for n, rows in data.get("maps", {}).items():
            n = int(n)
            if not 1 <= n <= arity:
                raise LinftyError(f"structure map arity {n} outside 1..{arity}")
            maps[n] = _table_from_rows(rows, n, basis, basis, 2 - n, sign=ALGEBRA_SIGN,
                                       label=f"Q{n}")
        return cls(basis, maps, arity, closed=bool(data.get("closed", False)))


@dataclass(eq=False)
class LinftyMorphism:
    """Maps F_1..F_N, F_n of degree 1-n, between two L-infinity algebras."""

    source: LinftySpace
    target: LinftySpace
    maps: dict
    arity: int = None
    closed: bool = False

    def __post_init__(self):
        if self.arity is None:
            self.arity = min(self.source.arity, self.target.arity)
        tables = {}
        for n in range(1, self.arity + 1):
            t = self.maps.get(n, {})
            if not isinstance(t, MapTable):
                t = MapTable(n, t, self.source.basis, self.target.basis, 1 - n,
                             label=f"F{n}")
            tables[n] = t
        if set(self.maps) - set(tables):
            raise LinftyError("morphism maps beyond its arity")
        self.maps = tables

    def f(self, n):
        return self.maps[n]

    @classmethod
    def homomorphism(cls, source, target, linear):
        """A strict DGLA homomorphism {i: vec} with no higher maps."""
        return cls(source, target, {1: {(i,): v for i, v in linear.items()}},
                   min(source.arity, target.arity), closed=True)

    @classmethod
    def identity(cls, space):
        return cls.homomorphism(space, space, {i: {i: rational(1)} for i in range(len(space))})

    def to_json(self):
        return {"arity": self.arity, "closed": self.closed,
                "maps": {str(n): t.to_json() for n, t in self.maps.items() if t}}

    @classmethod
    def from_json(cls, data, source, target):
        arity = int(data.get("arity", min(source.arity, target.arity)))
        maps = {}
        for n, rows in data.get("maps", {}).items():
            n = int(n)
            maps[n] = _table_from_rows(rows, n, source.basis, target.basis, 1 - n,
                                       label=f"F{n}")
        return cls(source, target, maps, arity, closed=bool(data.get("closed", False)))


@dataclass(eq=False)
class LinftyModule:
    """Module maps phi_0..phi_N over an algebra, phi_n of degree 1-n."""

    algebra: LinftySpace
    basis: GradedBasis
    maps: dict
    arity: int = None
    closed: bool = False

    def __post_init__(self):
        if self.arity is None:
            self.arity = self.algebra.arity
        tables = {}
        for n in range(0, self.arity + 1):
            t = self.maps.get(n, {})
            if not isinstance(t, MapTable):
                t = MapTable(n, t, self.algebra.basis, self.basis, 1 - n, module=self.basis,
                             label=f"phi{n}")
            tables[n] = t
        if set(self.maps) - set(tables):
            raise LinftyError("module maps beyond its arity")
        self.maps = tables

    def phi(self, n):
        return self.maps[n]

    @classmethod
    def dg_module(cls, algebra, basis, differential, action):
        """DG module: differential {v: vec}, action {(i, v): vec}."""
        basis = basis if isinstance(basis, GradedBasis) else GradedBasis(basis)
        phi0 = {((), v): vec for v, vec in differential.items()}
        phi1 = {((i,), v): vec for (i, v), vec in action.items()}
        return cls(algebra, basis, {0: phi0, 1: phi1}, algebra.arity, closed=True)

    def to_json(self):
        return {"basis": _basis_to_json(self.basis), "arity": self.arity,
                "closed": self.closed,
                "maps": {str(n): t.to_json() for n, t in self.maps.items() if t}}

    @classmethod
    def from_json(cls, data, algebra):
        basis = _basis_from_json(data.get("basis", []))
        arity = int(data.get("arity", algebra.arity))
        maps = {}
        for n, rows in data.get("maps", {}).items():
            n = int(n)
            maps[n] = _table_from_rows(rows, n, algebra.basis, basis, 1 - n, module=basis,
                                       label=f"phi{n}")
        return cls(algebra, basis, maps, arity, closed=bool(data.get("closed", False)))


@dataclass(eq=False)
class ModuleMorphism:
    """Maps kappa_0..kappa_N, kappa_n of degree -n, between modules over one algebra."""

    source: LinftyModule
    target: LinftyModule
    maps: dict
    arity: int = None
    closed: bool = False

    def __post_init__(self):
        if self.source.algebra is not self.target.algebra:
            raise LinftyError("module morphism needs both modules over the same algebra")
        if self.arity is None:
            self.arity = min(self.source.arity, self.target.arity)
        tables = {}
        alg = self.source.algebra.basis
        for n in range(0, self.arity + 1):
            t = self.maps.get(n, {})
            if not isinstance(t, MapTable):
                t = MapTable(n, t, alg, self.target.basis, -n, module=self.source.basis,
                             label=f"kappa{n}")
            tables[n] = t
        self.maps = tables

    def kappa(self, n):
        return self.maps[n]

    @classmethod
    def linear(cls, source, target, linear):
        """An ordinary chain map {v: vec} commuting with the actions."""
        return cls(source, target, {0: {((), v): vec for v, vec in linear.items()}},
                   closed=True)

    @classmethod
    def identity(cls, module):
        return cls.linear(module, module, {v: {v: rational(1)} for v in range(len(module.basis))})

    def to_json(self):
        return {"arity": self.arity, "closed": self.closed,
                "maps": {str(n): t.to_json() for n, t in self.maps.items() if t}}

    @classmethod
    def from_json(cls, data, source, target):
        arity = int(data.get("arity", min(source.arity, target.arity)))
        maps = {}
        for n, rows in data.get("maps", {}).items():
            n = int(n)
            maps[n] = _table_from_rows(rows, n, source.algebra.basis, target.basis, -n,
                                       module=source.basis, label=f"kappa{n}")
        return cls(source, target, maps, arity, closed=bool(data.get("closed", False)))


@dataclass(eq=False)
class MCElement:
    """A degree-one element of positive filtration level."""

    space: LinftySpace
    vector: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vector = clean({i: rational(c) for i, c in self.vector.items()})
        b = self.space.basis
        for i in self.vector:
            if b.degrees[i] != 1:
                raise LinftyError(f"MC element has component {b.name(i)} of degree "
                                  f"{b.degrees[i]}, expected 1")
            if b.levels[i] < 1:
                raise LinftyError(f"MC element has component {b.name(i)} at filtration "
                                  f"level {b.levels[i]}, expected at least 1")

    @property
    def level(self):
        return self.space.basis.vector_level(self.vector)
