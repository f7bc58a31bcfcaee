"""Command implementations: each turns a scene into a Report."""
from __future__ import annotations

from dataclasses import dataclass, field

from .. import checks as suites
from ..fedosov import ConnectionData, build_A
from ..linfty import (check_linfty, check_module, check_morphism, is_mc, mc_check, twist_algebra,
                      twist_module, twist_morphism)
from ..quantize import (Functional, antisymmetric_part, compare, criterion_agrees,
                        gauge_transform, inverse_gauge, laplacian_gauge, mc_residual, moyal_star,
                        to_csv, top_coefficient, trace_check)
from ..quantize.star import associativity_residual
from .scene import Scene, SceneError, weights_from

Check = suites.Check


@dataclass
class Report:
    command: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def holds(self):
        return all(c.ok for c in self.checks)

    def first_failure(self):
        return suites.first_failure(self.checks)

    def to_json(self):
        return {"command": self.command, "holds": self.holds,
                "checks": [c.to_json() for c in self.checks], "data": self.data}


def _fd(scene: Scene):
    conn = scene.connection or ConnectionData.flat(scene.context.d)
    return conn, build_A(conn, scene.context)


def _summary_A(fd):
    return {str(p): len(s.terms) for p, s in sorted(fd.strata().items())}


def fedosov_build(scene):
    _, fd = _fd(scene)
    return Report("fedosov build", suites.flatness_checks(fd),
                  {"strata": _summary_A(fd), "A": fd.A.to_json()})


def fedosov_check(scene):
    _, fd = _fd(scene)
    rng = suites.seeded(scene.seed)
    out = suites.flatness_checks(fd)
    out += suites.d_squared_checks(fd, rng, scene.pool)
    out += suites.hodge_suite(rng, scene.context, 6 * scene.pool)
    return Report("fedosov check", out, {"strata": _summary_A(fd)})


def tau_command(scene):
    _, fd = _fd(scene)
    return Report("tau", suites.tau_checks(fd, suites.seeded(scene.seed), scene.pool))


def phi_command(scene):
    _, fd = _fd(scene)
    return Report("phi-check", suites.phi_checks(fd, suites.seeded(scene.seed), scene.pool))


def lambda_command(scene):
    _, fd = _fd(scene)
    chart = suites.chart_context(scene.context)
    return Report("lambda", suites.lambda_checks(fd, chart, suites.seeded(scene.seed),
                                                 3 * scene.pool))


def _linfty_checks(payload, label=""):
    out = []
    alg = payload["algebra"]
    for r in check_linfty(alg):
        out.append(Check(f"{label}Q^2 = 0", f"arity {r.arity} on {r.inputs}", r.to_json()))
    if not out:
        out.append(Check(f"{label}Q^2 = 0", f"arities <= {alg.arity}"))
    if "module" in payload:
        res = check_module(payload["module"])
        out += [Check(f"{label}module relations", f"arity {r.arity} on {r.inputs}", r.to_json())
                for r in res] or [Check(f"{label}module relations", "all arities")]
    if "morphism" in payload:
        res = check_morphism(payload["morphism"])
        out += [Check(f"{label}morphism relations", f"arity {r.arity} on {r.inputs}", r.to_json())
                for r in res] or [Check(f"{label}morphism relations", "all arities")]
    return out


def _named(basis, vec):
    return {basis.name(i): str(c) for i, c in sorted(vec.items())}


def linfty_command(scene):
    out = _linfty_checks(scene.linfty)
    data = {}
    if "mc" in scene.linfty:
        alg = scene.linfty["algebra"]
        r = mc_check(alg, scene.linfty["mc"])
        res = r["residual"]
        out.append(Check("Maurer-Cartan: d pi + 1/2 [pi, pi] = 0", "pi",
                         _named(alg.basis, res) if res else None))
        data["mc"] = _named(alg.basis, scene.linfty["mc"])
    return Report("linfty check", out, data)


def twist_command(scene):
    payload = scene.linfty
    alg, pi = payload["algebra"], payload["mc"]
    if not is_mc(alg, pi):
        res = mc_check(alg, pi)["residual"]
        return Report("twist", [Check("Maurer-Cartan: d pi + 1/2 [pi, pi] = 0", "pi",
                                      _named(alg.basis, res) or "coalgebra form")])
    talg = twist_algebra(alg, pi)
    twisted = {"algebra": talg}
    if "module" in payload:
        twisted["module"] = twist_module(payload["module"], pi, talg)
    if "morphism" in payload:
        twisted["morphism"] = twist_morphism(payload["morphism"], pi, source=talg)
    return Report("twist", _linfty_checks(twisted, "twisted "),
                  {"twisted_algebra": talg.to_json()})


def _star(scene):
    return moyal_star(scene.poisson, order=scene.context.N_hbar)


def _mc_checks(s, label=""):
    return [suites.element_check(f"{label}MC: d Pi_{n} + 1/2 sum [Pi_k, Pi_l] = 0",
                                 f"hbar^{n}", r) for n, r in mc_residual(s).items()]


def star_moyal(scene):
    s = _star(scene)
    return Report("star moyal", _mc_checks(s), {"star": s.to_json()})


def star_check(scene):
    s = _star(scene)
    out = _mc_checks(s)
    bad = associativity_residual(s, 2)
    out.append(Check("associativity (a * b) * c = a * (b * c)", "monomials of degree <= 2",
                     {"failures": len(bad)} if bad else None))
    g = scene.gauge or laplacian_gauge(s.ctx, order=s.order)
    t = gauge_transform(s, g)
    out += _mc_checks(t, "gauge-transformed ")
    back = gauge_transform(t, inverse_gauge(g, s.order))
    out.append(Check("gauge round trip", "U then U^-1", None if back == s else {"differs": True}))
    diff = antisymmetric_part(t.term(1)) - antisymmetric_part(s.term(1))
    out.append(suites.element_check("order-hbar antisymmetric part is gauge invariant",
                                    "hbar^1", diff))
    return Report("star check", out, {"transformed": t.to_json()})


def homology_compare(scene):
    s = _star(scene)
    caps = {"degree_cap": int(scene.homology.get("degree_cap", 2)),
            "poly_cap": int(scene.homology.get("poly_cap", 3))}
    table = compare(s, scene.poisson, **caps)
    leaks = table["leaks"]
    out = [Check("homology dimensions agree", "chain degrees <= %d" % caps["degree_cap"],
                 None if table["equal"] else {"rows": table["rows"]}),
           Check("truncation closed under the differentials", "both complexes",
                 None if not any(leaks.values()) else leaks)]
    return Report("homology compare", out, {"rows": table["rows"], "csv": to_csv(table), **caps})


def trace_command(scene):
    s = _star(scene)
    cap = int(scene.trace.get("poly_cap", 2))
    rows = scene.trace.get("functional")
    fn = Functional(weights_from(rows, s.ctx.d)) if rows is not None else \
        top_coefficient(s.ctx, cap)
    residuals, criterion = trace_check(s, fn, cap)
    out = [Check("functional vanishes on star commutators", f"hbar^{r.order}, {r.a} {r.b}",
                 str(r.value)) for r in residuals]
    if not residuals:
        out.append(Check("functional vanishes on star commutators", f"monomials <= {cap}"))
    out.append(Check("order-hbar criterion matches the Poisson bracket", f"monomials <= {cap}",
                     None if criterion_agrees(criterion) else {"pairs": len(criterion)}))
    return Report("trace check", out,
                  {"functional": {",".join(map(str, m)): str(w)
                                  for m, w in sorted(fn.weights.items())}})


HANDLERS = {
    "fedosov build": fedosov_build,
    "fedosov check": fedosov_check,
    "tau": tau_command,
    "phi-check": phi_command,
    "lambda": lambda_command,
    "linfty check": linfty_command,
    "twist": twist_command,
    "star moyal": star_moyal,
    "star check": star_check,
    "homology compare": homology_compare,
    "trace check": trace_command,
}


def run(scene: Scene, command: str) -> Report:
    scene.require(command)
    try:
        return HANDLERS[command](scene)
    except SceneError:
        raise
    except ValueError as exc:
        raise SceneError(f"{command}: {exc}") from None
