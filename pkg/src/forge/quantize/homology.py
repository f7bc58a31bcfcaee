"""Truncated Hochschild chain complex twisted by a star product, and the
Poisson form complex, with homology dimensions by exact rank.

Both complexes live over Q[hbar]/hbar^(N+1), written out as Q-vector
spaces with basis (element, hbar power). Polynomial truncation is by
weight: total monomial degree of a chain, coefficient degree plus form
degree for forms. Constant Poisson data only lowers weight, so the
truncation is a subcomplex; other data may leak out, and leaks are counted.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from itertools import combinations, product

from ..graded import monomials_upto, mono_deg, zero_mono
from ..linalg import rank_sparse
from ..polycalc.carriers import ExtForm, HochChain
from ..polycalc.hochschild import chain_action
from ..polycalc.vectors import lie_derivative
from .star import PoissonStructure, QuantizeError, StarProduct


@dataclass
class Complex:
    """Finite complex with a homological differential of degree -1."""
    name: str
    bases: dict  # degree -> list of basis keys
    columns: dict  # degree -> list of sparse columns into degree - 1
    leaks: int = 0
    meta: dict = field(default_factory=dict)

    def rank(self, k):
        cols = self.columns.get(k)
        return rank_sparse(cols) if cols else 0

    def dimension(self, k):
        return len(self.bases.get(k, ()))

    def homology(self, upto):
        return [self.dimension(k) - self.rank(k) - self.rank(k + 1) for k in range(upto + 1)]

    def square_defects(self):
        """Degrees k where d_{k-1} d_k is not the zero matrix."""
        bad = []
        for k in sorted(self.columns):
            lower = self.columns.get(k - 1)
            if not lower:
                continue
            for col in self.columns[k]:
                out = {}
                for r, c in col.items():
                    for rr, cc in lower[r].items():
                        out[rr] = out.get(rr, 0) + c * cc
                if any(out.values()):
                    bad.append(k)
                    break
        return bad


def _chain_basis(d, k, poly_cap):
    monos = list(monomials_upto(d, poly_cap))
    out = []
    for combo in product(monos, repeat=k + 1):
        if sum(mono_deg(m) for m in combo) <= poly_cap:
            out.append(combo)
    return out


def _chain_of(ctx, slot):
    z = zero_mono(ctx.d)
    return HochChain(ctx, {((), z, z, slot): 1}, truncate=False)


def twisted_chain_complex(s: StarProduct, ctx=None, degree_cap=2, poly_cap=3) -> Complex:
    """(C(A)/hbar^(N+1), b + R_Pi) in chain degrees 0..degree_cap + 1."""
    ctx = ctx or s.ctx
    N = s.order
    top = degree_cap + 1
    raw = {k: _chain_basis(ctx.d, k, poly_cap) for k in range(top + 1)}
    index = {k: {b: i for i, b in enumerate(raw[k])} for k in raw}
    bases = {k: [(b, j) for j in range(N + 1) for b in raw[k]] for k in raw}
    pos = {k: {key: i for i, key in enumerate(bases[k])} for k in bases}
    leaks = 0
    columns = {}
    for k in range(1, top + 1):
        images = {}
        for b in raw[k]:
            chain = _chain_of(ctx, b)
            per = {}
            for n in range(0, N + 1):
                img = chain_action(s.term(n), chain)
                vec = {}
                for (_, _, _, slot), c in img.terms.items():
                    if slot not in index[k - 1]:
                        leaks += 1
                        continue
                    vec[slot] = vec.get(slot, 0) + c
                per[n] = vec
            images[b] = per
        cols = []
        for (b, j) in bases[k]:
            col = {}
            for n, vec in images[b].items():
                if j + n > N:
                    continue
                for slot, c in vec.items():
                    col[pos[k - 1][(slot, j + n)]] = c
            cols.append({r: c for r, c in col.items() if c})
        columns[k] = cols
    return Complex("hochschild", bases, columns, leaks,
                   {"degree_cap": degree_cap, "poly_cap": poly_cap, "hbar_order": N})


def _form_basis(d, k, poly_cap):
    out = []
    for dx in combinations(range(d), k):
        for m in monomials_upto(d, poly_cap - k):
            out.append((m, dx))
    return out if poly_cap >= k else []


def forms_complex(alpha: PoissonStructure, ctx=None, degree_cap=2, poly_cap=3,
                  order=None) -> Complex:
    """(Omega/hbar^(N+1), L_alpha) with alpha = sum_n hbar^n alpha_n."""
    if not alpha.is_poisson():
        raise QuantizeError("[alpha, alpha] != 0: not a Poisson structure")
    ctx = ctx or alpha.ctx
    N = ctx.N_hbar if order is None else order
    top = min(degree_cap + 1, ctx.d)
    raw = {k: _form_basis(ctx.d, k, poly_cap) for k in range(top + 1)}
    index = {k: set(raw[k]) for k in raw}
    bases = {k: [(b, j) for j in range(N + 1) for b in raw[k]] for k in raw}
    pos = {k: {key: i for i, key in enumerate(bases[k])} for k in bases}
    z = zero_mono(ctx.d)
    leaks = 0
    columns = {}
    for k in range(1, top + 1):
        images = {}
        for b in raw[k]:
            m, dx = b
            w = ExtForm(ctx, {((), z, m, dx): 1}, truncate=False)
            per = {}
            for n in range(1, min(N, alpha.order) + 1):
                img = lie_derivative(alpha.alpha[n - 1], w)
                vec = {}
                for (_, _, y, s), c in img.terms.items():
                    key = (y, s)
                    if key not in index.get(k - 1, ()):
                        leaks += 1
                        continue
                    vec[key] = vec.get(key, 0) + c
                per[n] = vec
            images[b] = per
        cols = []
        for (b, j) in bases[k]:
            col = {}
            for n, vec in images[b].items():
                if j + n > N:
                    continue
                for key, c in vec.items():
                    col[pos[k - 1][(key, j + n)]] = c
            cols.append({r: c for r, c in col.items() if c})
        columns[k] = cols
    return Complex("forms", bases, columns, leaks,
                   {"degree_cap": degree_cap, "poly_cap": poly_cap, "hbar_order": N})


def compare(s: StarProduct, alpha: PoissonStructure, degree_cap=2, poly_cap=3):
    """Homology dimension tables of both complexes, degree by degree."""
    chains = twisted_chain_complex(s, degree_cap=degree_cap, poly_cap=poly_cap)
    forms = forms_complex(alpha, s.ctx, degree_cap, poly_cap, order=s.order)
    rows = []
    hc = chains.homology(degree_cap)
    hf = forms.homology(degree_cap)
    for k in range(degree_cap + 1):
        rows.append({"degree": k, "hochschild": hc[k], "forms": hf[k]})
    return {"rows": rows, "equal": hc == hf, "leaks": {"hochschild": chains.leaks,
                                                      "forms": forms.leaks}}


def to_csv(table) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["degree", "hochschild", "forms"], lineterminator="\n")
    w.writeheader()
    for row in table["rows"]:
        w.writerow(row)
    return buf.getvalue()
