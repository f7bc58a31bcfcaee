"""Identity suites on seeded random pools, shared by the CLI and the tests.

Each suite returns a list of Check records. A check holds the identity
name, where it was evaluated and the residual (None when it vanishes).
Residuals of fiber elements are compared only on the y-degrees where the
truncation cannot reach them.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .fedosov import (ConnectionData, build_A, delta, delta_inv, fedosov_D, flatness_residual,
                      hodge_defect, lambda_D, lambda_D_inverse, lambda_T, lambda_T_inverse, phi,
                      reliable_degree, sigma, tau, transport, transport_connection)
from .fedosov.resolution import derivative_order
from .graded import TruncationContext
from .polycalc import bullet, cup, schouten
from .sampling import random_christoffel, random_element, random_invertible


@dataclass(frozen=True)
class Check:
    identity: str
    location: str
    residual: object = None

    @property
    def ok(self):
        return self.residual is None

    def to_json(self):
        out = {"identity": self.identity, "location": self.location, "holds": self.ok}
        if not self.ok:
            out["residual"] = self.residual
        return out


def element_check(identity, location, e, upto=None):
    """Check record for a fiber element that should vanish (below ``upto``)."""
    if upto is not None:
        e = e.truncate(upto)
    if not e:
        return Check(identity, location)
    stratum = min(e.ydeg_of(k) for k in e.terms)
    payload = e.stratum(stratum).to_json()
    payload["stratum"] = stratum
    return Check(identity, f"{location}, y-degree {stratum}", payload)


def first_failure(checks):
    return next((c for c in checks if not c.ok), None)


# ---------------------------------------------------------------- pools

CARRIER_SHAPES = (("polyvector", 1), ("polyvector", 2), ("polydiffop", 0), ("polydiffop", 1),
                  ("polydiffop", 2), ("form", 1), ("chain", 2))


def hodge_suite(rng, ctx, count):
    """Chains are skipped: their delta-cohomology is larger than sigma's image."""
    shapes = [s for s in CARRIER_SHAPES if s[0] != "chain"]
    out = []
    for t in range(count):
        kind, slots = shapes[t % len(shapes)]
        e = random_element(rng, ctx, kind, slots=min(slots, ctx.d),
                           dy=tuple(range(min(ctx.d, 2) + 1)), xdeg=1,
                           ydeg=min(3, ctx.N_y), order=2, terms=3)
        out.append(element_check("Hodge: a = sigma a + delta delta_inv a + delta_inv delta a",
                                 f"{kind} #{t}", hodge_defect(e)))
    return out


def random_connection(rng, d, maxdeg=2):
    return ConnectionData.symmetric(d, random_christoffel(rng, d, maxdeg))


def flatness_checks(fd):
    top = fd.context.N_y - 1
    res = flatness_residual(fd, top)
    return [element_check("flatness: nabla A - delta A + 1/2 [A, A] + R = 0",
                          f"strata <= {top}", res)]


def _pool(rng, ctx, flat_inputs):
    """(kind, element) pairs; flat_inputs gives y-free dy-free seeds for tau."""
    out = []
    for kind, sl in (("polydiffop", 0), ("polyvector", 1), ("polyvector", 2), ("polydiffop", 1),
                     ("polydiffop", 2), ("form", 1)):
        sl = min(sl, ctx.d)
        order = 1 if sl == 2 else 2
        if flat_inputs:
            e = random_element(rng, ctx, kind, slots=sl, dy=(0,), xdeg=2, ydeg=0, order=order,
                               terms=2)
        else:
            e = random_element(rng, ctx, kind, slots=sl, dy=(1,), xdeg=1, ydeg=2, order=order,
                               terms=2)
        out.append((f"{kind}/{sl}", e))
    return out


def d_squared_checks(fd, rng, count=1):
    out = []
    for _ in range(count):
        for label, e in _pool(rng, fd.context, False):
            dd = fedosov_D(fd, fedosov_D(fd, e))
            out.append(element_check("D^2 = 0", label, dd, reliable_degree(fd, e)))
    return out


def tau_checks(fd, rng, count=1):
    out = []
    for _ in range(count):
        for label, a in _pool(rng, fd.context, True):
            ta = tau(fd, a)
            lim = fd.context.N_y - 1 - derivative_order(a)
            out.append(element_check("sigma tau = id", label, sigma(ta) - a))
            out.append(element_check("D tau = 0", label, fedosov_D(fd, ta), lim))
    return out


def phi_checks(fd, rng, count=1):
    out = []
    for _ in range(count):
        for label, e in _pool(rng, fd.context, False):
            lim = fd.context.N_y - 2 - derivative_order(e)
            pe = phi(fd, e)
            De = fedosov_D(fd, e)
            out.append(element_check("D Phi + Phi D = id (exterior degree > 0)", label,
                                     fedosov_D(fd, pe) + phi(fd, De) - e, lim))
            out.append(element_check("Phi^2 = 0", label, phi(fd, pe)))
            out.append(element_check("D Phi D = D", label, fedosov_D(fd, phi(fd, De)) - De, lim))
    return out


def lambda_checks(fd, chart, rng, count=3):
    out = []
    for t in range(count):
        P1 = random_element(rng, chart, "polydiffop", slots=rng.choice([1, 2]), ydeg=2, order=1,
                            terms=2)
        P2 = random_element(rng, chart, "polydiffop", slots=rng.choice([0, 1, 2]), ydeg=2,
                            order=1, terms=2)
        L1, L2 = lambda_D(fd, P1), lambda_D(fd, P2)
        back = lambda_D_inverse(fd, L1, chart)
        out.append(element_check("lambda_D^-1 lambda_D = id", f"pair #{t}", back - P1))
        lhs = bullet(back, lambda_D_inverse(fd, L2, chart))
        rhs = lambda_D_inverse(fd, bullet(L1, L2), chart, check=False)
        out.append(element_check("lambda_D^-1 respects the insertion product", f"pair #{t}",
                                 lhs - rhs))
        lhs = cup(back, lambda_D_inverse(fd, L2, chart))
        rhs = lambda_D_inverse(fd, cup(L1, L2), chart, check=False)
        out.append(element_check("lambda_D^-1 respects the cup product", f"pair #{t}", lhs - rhs))
        v1 = random_element(rng, chart, "polyvector", slots=rng.choice([1, min(2, chart.d)]),
                            ydeg=2, terms=2)
        v2 = random_element(rng, chart, "polyvector", slots=rng.choice([1, min(2, chart.d)]),
                            ydeg=2, terms=2)
        br = schouten(lambda_T(fd, v1), lambda_T(fd, v2))
        out.append(element_check("lambda_T respects the Schouten bracket", f"pair #{t}",
                                 br - lambda_T(fd, schouten(v1, v2)), fd.context.N_y - 2))
        out.append(element_check("lambda_T^-1 of the bracket", f"pair #{t}",
                                 lambda_T_inverse(fd, br, chart) - schouten(v1, v2)))
    return out


def equivariance_checks(conn, ctx, chart, rng):
    g = random_invertible(rng, ctx.d)
    fd = build_A(conn, ctx)
    fd2 = build_A(transport_connection(conn, g, ctx), ctx)
    out = [element_check("A transforms under linear changes", "A", fd2.A - transport(fd.A, g))]
    a = random_element(rng, ctx, "polyvector", slots=1, dy=(0,), xdeg=2, ydeg=0, terms=2)
    out.append(element_check("tau commutes with linear changes", "tau",
                             tau(fd2, transport(a, g)) - transport(tau(fd, a), g)))
    e = random_element(rng, ctx, "polydiffop", slots=1, dy=(1,), xdeg=1, ydeg=2, terms=2)
    out.append(element_check("Phi commutes with linear changes", "Phi",
                             phi(fd2, transport(e, g)) - transport(phi(fd, e), g)))
    P = random_element(rng, chart, "polydiffop", slots=2, ydeg=2, order=1, terms=2)
    out.append(element_check("lambda_D commutes with linear changes", "lambda_D",
                             lambda_D(fd2, transport(P, g)) - transport(lambda_D(fd, P), g)))
    return out


def delta_checks(rng, ctx, count=10):
    out = []
    for t in range(count):
        kind, slots = CARRIER_SHAPES[t % len(CARRIER_SHAPES)]
        e = random_element(rng, ctx, kind, slots=min(slots, ctx.d) if kind != "chain" else slots,
                           dy=(0, 1), xdeg=1, ydeg=min(3, ctx.N_y), terms=3)
        out.append(element_check("delta^2 = 0", f"{kind} #{t}", delta(delta(e))))
        if kind != "chain":
            out.append(element_check("delta_inv^2 = 0", f"{kind} #{t}", delta_inv(delta_inv(e))))
    return out


def chart_context(ctx):
    return TruncationContext(d=ctx.d, N_y=max(30, 4 * ctx.N_y), N_hbar=ctx.N_hbar,
                             N_ar=ctx.N_ar)


def seeded(seed):
    return random.Random(seed)
