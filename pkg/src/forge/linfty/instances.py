"""Small DGLAs and modules used as fixtures and demos."""
from __future__ import annotations

from ..graded import rational
from .structures import BasisElement, GradedBasis, LinftyModule, LinftySpace, vec_add


def _matmul(a, b, n):
    out = {}
    for (i, k), x in a.items():
        for (k2, j), y in b.items():
            if k == k2:
                out[(i, j)] = out.get((i, j), 0) + x * y
    return {k: v for k, v in out.items() if v}


def endomorphism_dgla(degrees, differential, levels=None, arity=4):
    """End(V) of a graded vector space with an odd square-zero operator.

    ``degrees`` lists the degrees of a basis of V and ``differential`` maps
    (row, col) to matrix entries of the operator on V. The bracket is the
    graded commutator and the differential is its adjoint action.
    """
    n = len(degrees)
    units = [(i, j) for i in range(n) for j in range(n)]
    levels = levels or {}
    basis = GradedBasis([BasisElement(f"E{i}{j}", degrees[i] - degrees[j], levels.get((i, j), 0))
                         for i, j in units])
    index = {u: k for k, u in enumerate(units)}
    dv = {k: rational(v) for k, v in differential.items() if v}
    for (i, j) in dv:
        if degrees[i] - degrees[j] != 1:
            raise ValueError("operator on V must have degree one")
    if _matmul(dv, dv, n):
        raise ValueError("operator on V must square to zero")

    def to_vec(mat):
        return {index[k]: v for k, v in mat.items() if v}

    def bracket(a, b, da, db):
        ab = _matmul(a, b, n)
        ba = _matmul(b, a, n)
        s = -1 if (da * db) % 2 else 1
        out = dict(ab)
        for k, v in ba.items():
            out[k] = out.get(k, 0) - s * v
        return {k: v for k, v in out.items() if v}

    diff = {}
    br = {}
    for a, ua in enumerate(units):
        da = basis.degrees[a]
        ma = {ua: rational(1)}
        diff[a] = to_vec(bracket(dv, ma, 1, da))
        for b in range(a, n * n):
            mb = {units[b]: rational(1)}
            br[(a, b)] = to_vec(bracket(ma, mb, da, basis.degrees[b]))
    return LinftySpace.dgla(basis, diff, br, arity)


def heisenberg_extension(arity=4, derivation=None):
    """Lambda(theta) (x) h for the Heisenberg algebra h = <x, y, z>, [x, y] = z.

    The odd half theta (x) h sits in degree one at filtration level one. The
    differential is theta times a derivation of h (default x -> z).
    """
    names = ["x", "y", "z"]
    elems = [BasisElement(n, 0, 0) for n in names] + \
            [BasisElement("t" + n, 1, 1) for n in names]
    basis = GradedBasis(elems)
    lie = {(0, 1): {2: rational(1)}}
    der = derivation if derivation is not None else {0: {2: rational(1)}}
    diff = {}
    for i in range(3):
        diff[i] = {3 + k: rational(c) for k, c in der.get(i, {}).items()}
    br = {}
    for (i, j), vec in lie.items():
        br[(i, j)] = dict(vec)
        br[(i, 3 + j)] = {3 + k: c for k, c in vec.items()}
        br[(3 + i, j)] = {3 + k: c for k, c in vec.items()}
    return LinftySpace.dgla(basis, diff, br, arity)


def heisenberg_module(algebra):
    """Lambda(theta) (x) C^2 with x, y acting nilpotently and theta by multiplication."""
    basis = GradedBasis([BasisElement("m0", 0, 0), BasisElement("m1", 0, 0),
                         BasisElement("tm0", 1, 1), BasisElement("tm1", 1, 1)])
    # x e0 = e1 on C^2 is a rep of h with y, z acting by zero
    rep = {0: {(0, 1): rational(1)}}
    action = {}
    for g, mat in rep.items():
        for (dst, src), c in mat.items():
            vec_add(action.setdefault((g, src), {}), {dst: c})
            vec_add(action.setdefault((g, 2 + src), {}), {2 + dst: c})
            vec_add(action.setdefault((3 + g, src), {}), {2 + dst: c})
    return LinftyModule.dg_module(algebra, basis, {}, action)


def adjoint_module(algebra):
    """The algebra as a module over itself: differential and bracket."""
    basis = GradedBasis(list(algebra.basis.elements))
    diff = {v: dict(algebra.q(1).unshifted((v,))) for v in range(len(basis))}
    action = {}
    for i in range(len(basis)):
        for v in range(len(basis)):
            vec = algebra.q(2).unshifted((i, v)) if algebra.arity >= 2 else {}
            if vec:
                action[(i, v)] = dict(vec)
    return LinftyModule.dg_module(algebra, basis, diff, action)


def two_step_dgla(arity=4):
    """Positive part of Lambda(t1, t2) (x) g for g = <a, b>, [a, b] = b.

    Six dimensions: t1 a, t1 b, t2 a, t2 b in degree one (level one) and
    t12 a, t12 b in degree two (level two). The differential is t1 times
    ad_a. An element t1 p + t2 q is Maurer-Cartan iff [a + p, q] = 0.
    """
    names = ["t1a", "t1b", "t2a", "t2b", "t12a", "t12b"]
    basis = GradedBasis([BasisElement(n, 1 if i < 4 else 2, 1 if i < 4 else 2)
                         for i, n in enumerate(names)])
    lie = {(0, 1): {1: 1}, (1, 0): {1: -1}}  # on g indices a=0, b=1

    def elem(mono, g):
        if mono == (1,):
            return g
        if mono == (2,):
            return 2 + g
        return 4 + g

    br = {}
    for x in range(2):
        for y in range(2):
            vec = lie.get((x, y))
            if not vec:
                continue
            # [t1 x, t2 y] = t1 t2 [x, y];  [t2 x, t1 y] = t2 t1 [x, y] = -t12 [x, y]
            # the odd parts anticommute, and g sits in degree zero
            for (m1, m2, s) in (((1,), (2,), 1), ((2,), (1,), -1)):
                key = (elem(m1, x), elem(m2, y))
                for g, c in vec.items():
                    vec_add(br.setdefault(key, {}), {4 + g: rational(s * c)})
    diff = {}
    # d(t2 y) = t1 t2 ad_a(y); d(t1 y) = 0
    for y in range(2):
        vec = lie.get((0, y))
        if vec:
            diff[2 + y] = {4 + g: rational(c) for g, c in vec.items()}
    return LinftySpace.dgla(basis, diff, br, arity)


def mixed_degree_dgla(arity=4):
    """m (x) g with m = <u, t, ut> (degrees -1, 1, 0; levels 1, 1, 2), g = <a, b>.

    u and t are odd with ut the only nonzero product, du = ut and dt = 0.
    Room in degrees -1 and 0 at positive level makes homotopies nontrivial.
    """
    names = ["ua", "ub", "ta", "tb", "uta", "utb"]
    degs = [-1, -1, 1, 1, 0, 0]
    levels = [1, 1, 1, 1, 2, 2]
    basis = GradedBasis([BasisElement(n, d, l) for n, d, l in zip(names, degs, levels)])
    lie = {(0, 1): {1: 1}, (1, 0): {1: -1}}
    br = {}
    for (x, y), vec in lie.items():
        # [u x, t y] = ut [x, y]; [t x, u y] = tu [x, y] = -ut [x, y]
        for first, second, s in ((0, 2, 1), (2, 0, -1)):
            key = (first + x, second + y)
            for g, c in vec.items():
                vec_add(br.setdefault(key, {}), {4 + g: rational(s * c)})
    diff = {0: {4: rational(1)}, 1: {5: rational(1)}}
    return LinftySpace.dgla(basis, diff, br, arity)


def truncated_super_heisenberg(arity=4):
    """<eps, eps^2> (x) h with h = <e, f, c> in degrees 1, -1, 0, [e, f] = c, d = [e, -].

    eps has degree zero and eps^3 = 0; eps-parts sit at level one and
    eps^2-parts at level two. df = c makes degree-lowering homotopies
    visible to the differential.
    """
    names = ["se", "sf", "sc", "qe", "qf", "qc"]
    degs = [1, -1, 0, 1, -1, 0]
    levels = [1, 1, 1, 2, 2, 2]
    basis = GradedBasis([BasisElement(n, d, l) for n, d, l in zip(names, degs, levels)])
    br = {(0, 1): {5: rational(1)}}
    diff = {1: {2: rational(1)}, 4: {5: rational(1)}}
    return LinftySpace.dgla(basis, diff, br, arity)
