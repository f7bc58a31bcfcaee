"""Quadratic relations of L-infinity algebras, morphisms, modules and module maps.

Each checker evaluates one relation per arity on every canonical basis
word and returns the nonzero residuals. An empty list means the structure
is valid up to the object's arity.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .structures import canonical_words, decalage, vec_add


@dataclass(frozen=True)
class Residual:
    relation: str
    arity: int
    inputs: tuple
    value: tuple  # sorted (basis name, coefficient) pairs

    def to_json(self):
        return {"relation": self.relation, "arity": self.arity, "inputs": list(self.inputs),
                "value": {k: str(c) for k, c in self.value}}


def _named(basis, vec):
    return tuple((basis.name(i), vec[i]) for i in sorted(vec))


@lru_cache(maxsize=None)
def _splits(n):
    """All (I, J) splits of positions 0..n-1, I and J increasing."""
    out = []
    pos = tuple(range(n))
    for k in range(n + 1):
        for part in combinations(pos, k):
            rest = tuple(p for p in pos if p not in part)
            out.append((part, rest))
    return out


def split_sign(word, shifted, part, rest):
    """Koszul sign of reordering word into (word[part], word[rest])."""
    odd = 0
    for a in part:
        for b in rest:
            if b < a:
                odd += shifted[word[a]] * shifted[word[b]]
    return -1 if odd % 2 else 1


@lru_cache(maxsize=None)
def _set_partitions(n):
    """Set partitions of 0..n-1, blocks ordered by their smallest element."""
    if n == 0:
        return [()]
    out = []
    for p in _set_partitions(n - 1):
        out.append(p + ((n - 1,),))
        for i in range(len(p)):
            out.append(p[:i] + (p[i] + (n - 1,),) + p[i + 1:])
    return [tuple(sorted(p)) for p in out]


def partition_sign(word, shifted, blocks):
    order = [p for b in blocks for p in b]
    odd = 0
    for x in range(len(order)):
        for y in range(x + 1, len(order)):
            if order[x] > order[y]:
                odd += shifted[word[order[x]]] * shifted[word[order[y]]]
    return -1 if odd % 2 else 1


def odd_total(word, shifted, part):
    return sum(shifted[word[p]] for p in part) % 2


def _unit(i):
    return {i: 1}


# ---------------------------------------------------------------- coderivations

def coderivation_terms(space, word):
    """Pairs (vector, remaining word, sign) of Q applied to a shifted word.

    These are the terms q_|I|(w_I) * w_J with I nonempty.
    """
    sh = space.basis.shifted
    out = []
    for part, rest in _splits(len(word)):
        if not part or len(part) > space.arity:
            continue
        table = space.q(len(part))
        if not table:
            continue
        vec = table.shifted(tuple(word[p] for p in part))
        if vec:
            out.append((vec, tuple(word[p] for p in rest), split_sign(word, sh, part, rest)))
    return out


def _insert_front(table, vec, rest, v=None):
    """table(vec, rest...) in the shifted picture, vec in the first slot."""
    out = {}
    for i, c in vec.items():
        r = table.shifted((i,) + rest, v)
        if r:
            vec_add(out, r, c)
    return out


def apply_q(space, vec):
    """Q_1 on a vector, shifted picture."""
    return space.q(1).on_vectors([vec])


# ---------------------------------------------------------------- algebra

def linfty_residual(space, word):
    """sum over splits of q_{|J|+1}(q_|I|(w_I), w_J)."""
    out = {}
    for vec, rest, sign in coderivation_terms(space, word):
        n = len(rest) + 1
        if n > space.arity or not space.q(n):
            continue
        vec_add(out, _insert_front(space.q(n), vec, rest), sign)
    return out


def _report(name, basis_in, basis_out, n, word, shifted_vec, c, v_name=None):
    if not shifted_vec:
        return None
    scale = c * decalage(word, basis_in.shifted)
    vec = {i: scale * x for i, x in shifted_vec.items()}
    inputs = tuple(basis_in.name(i) for i in word)
    if v_name is not None:
        inputs = inputs + (v_name,)
    return Residual(name, n, inputs, _named(basis_out, vec))


def check_linfty(space, upto=None):
    upto = space.arity if upto is None else min(upto, space.arity)
    out = []
    b = space.basis
    for n in range(1, upto + 1):
        for word in canonical_words(b, n):
            r = _report("Q^2=0", b, b, n, word, linfty_residual(space, word), -1)
            if r:
                out.append(r)
    return out


# ---------------------------------------------------------------- morphisms

def morphism_lhs(F, word):
    """pr q'(F(w)): sum over set partitions of q'_k(f(w_B1), ..., f(w_Bk))."""
    sh = F.source.basis.shifted
    tgt = F.target
    out = {}
    for blocks in _set_partitions(len(word)):
        k = len(blocks)
        if k > tgt.arity or not tgt.q(k):
            continue
        vecs = []
        for blk in blocks:
            if len(blk) > F.arity:
                vecs = None
                break
            vec = F.f(len(blk)).shifted(tuple(word[p] for p in blk))
            if not vec:
                vecs = None
                break
            vecs.append(vec)
        if vecs is None:
            continue
        val = tgt.q(k).on_vectors(vecs)
        if val:
            vec_add(out, val, partition_sign(word, sh, blocks))
    return out


def morphism_rhs(F, word):
    """f(q(w)) projected to the target space."""
    out = {}
    for vec, rest, sign in coderivation_terms(F.source, word):
        n = len(rest) + 1
        if n > F.arity:
            continue
        vec_add(out, _insert_front(F.f(n), vec, rest), sign)
    return out


def morphism_residual(F, word):
    return vec_add(morphism_lhs(F, word), morphism_rhs(F, word), -1)


def check_morphism(F, upto=None):
    upto = F.arity if upto is None else min(upto, F.arity)
    out = []
    for n in range(1, upto + 1):
        for word in canonical_words(F.source.basis, n):
            r = _report("Q'F=FQ", F.source.basis, F.target.basis, n, word,
                        morphism_residual(F, word), 1)
            if r:
                out.append(r)
    return out


# ---------------------------------------------------------------- modules

def module_residual(M, word, v):
    """pr_M phi^2 on w (x) v."""
    alg = M.algebra
    sh = alg.basis.shifted
    out = {}
    for vec, rest, sign in coderivation_terms(alg, word):
        n = len(rest) + 1
        if n > M.arity:
            continue
        vec_add(out, _insert_front(M.phi(n), vec, rest, v), sign)
    for part, rest in _splits(len(word)):
        inner = M.phi(len(rest))
        outer = M.phi(len(part))
        if not inner or not outer:
            continue
        mid = inner.shifted(tuple(word[p] for p in rest), v)
        if not mid:
            continue
        sign = split_sign(word, sh, part, rest)
        if odd_total(word, sh, part):
            sign = -sign
        w_part = tuple(word[p] for p in part)
        for u, c in mid.items():
            r = outer.shifted(w_part, u)
            if r:
                vec_add(out, r, sign * c)
    return out


def check_module(M, upto=None):
    upto = M.arity if upto is None else min(upto, M.arity)
    out = []
    ab = M.algebra.basis
    for n in range(0, upto + 1):
        for word in canonical_words(ab, n):
            for v in range(len(M.basis)):
                r = _report("phi^2=0", ab, M.basis, n, word, module_residual(M, word, v), 1,
                            M.basis.name(v))
                if r:
                    out.append(r)
    return out


def module_morphism_residual(K, word, v):
    """kappa(phi^M X) - phi^N(kappa X), projected to N."""
    alg = K.source.algebra
    sh = alg.basis.shifted
    out = {}
    for vec, rest, sign in coderivation_terms(alg, word):
        n = len(rest) + 1
        if n > K.arity:
            continue
        vec_add(out, _insert_front(K.kappa(n), vec, rest, v), sign)
    for part, rest in _splits(len(word)):
        sign = split_sign(word, sh, part, rest)
        w_part = tuple(word[p] for p in part)
        w_rest = tuple(word[p] for p in rest)
        # kappa_|I|(w_I, phi^M_|J|(w_J, v))
        inner = K.source.phi(len(rest))
        outer = K.kappa(len(part))
        if inner and outer:
            mid = inner.shifted(w_rest, v)
            s = -sign if odd_total(word, sh, part) else sign
            for u, c in mid.items():
                r = outer.shifted(w_part, u)
                if r:
                    vec_add(out, r, s * c)
        # - phi^N_|I|(w_I, kappa_|J|(w_J, v))
        inner = K.kappa(len(rest))
        outer = K.target.phi(len(part))
        if inner and outer:
            mid = inner.shifted(w_rest, v)
            for u, c in mid.items():
                r = outer.shifted(w_part, u)
                if r:
                    vec_add(out, r, -sign * c)
    return out


def check_module_morphism(K, upto=None):
    upto = K.arity if upto is None else min(upto, K.arity)
    out = []
    ab = K.source.algebra.basis
    for n in range(0, upto + 1):
        for word in canonical_words(ab, n):
            for v in range(len(K.source.basis)):
                r = _report("kappa phi=phi kappa", ab, K.target.basis, n, word,
                            module_morphism_residual(K, word, v), 1, K.source.basis.name(v))
                if r:
                    out.append(r)
    return out
