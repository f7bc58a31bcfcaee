"""Scene files: one JSON document describing a chart and the payloads to check.

Schema version 1::

    {
      "schema": 1,
      "d": 2, "N_y": 6, "N_hbar": 3, "N_ar": 4,
      "christoffel": [{"k": 1, "i": 1, "j": 2, "poly": "x1"}, ...],
      "seed": 0, "pool": 1,
      "poisson": [{"i": 1, "j": 2, "poly": "1"}],
      "gauge": [[{"slots": [[2, 0]], "poly": "1/4"}, ...], ...],
      "linfty": {"algebra": {...}, "module": {...}, "morphism": {...}, "mc": {...}},
      "homology": {"degree_cap": 2, "poly_cap": 3},
      "trace": {"poly_cap": 2, "functional": [{"mono": [1, 1], "weight": "1"}]},
      "commands": ["fedosov check", "star check"]
    }

Christoffel entries are 1-based and list the full table, so both
Gamma^k_ij and Gamma^k_ji must appear.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..fedosov import ConnectionData, TorsionError
from ..graded import TruncationContext, rational, zero_mono
from ..linfty import LinftyError, LinftyModule, LinftyMorphism, LinftySpace
from ..polycalc.carriers import PolyDiffOp, PolyVecField, accumulate
from ..polycalc.poly import PolyParseError, parse_poly
from ..quantize import GaugeElement, PoissonStructure

SCHEMA_VERSION = 1

COMMANDS = ("fedosov build", "fedosov check", "tau", "phi-check", "lambda", "linfty check",
            "twist", "star moyal", "star check", "homology compare", "trace check")

# payloads each command needs beyond the chart itself
NEEDS = {
    "linfty check": ("linfty",),
    "twist": ("linfty",),
    "star moyal": ("poisson",),
    "star check": ("poisson",),
    "homology compare": ("poisson",),
    "trace check": ("poisson",),
}


class SceneError(ValueError):
    """Invalid scene; the message names the failing field or parse location."""


@dataclass
class Scene:
    context: TruncationContext
    connection: ConnectionData | None = None
    poisson: PoissonStructure | None = None
    gauge: GaugeElement | None = None
    linfty: dict = field(default_factory=dict)
    homology: dict = field(default_factory=dict)
    trace: dict = field(default_factory=dict)
    commands: list = field(default_factory=list)
    seed: int = 0
    pool: int = 1

    def require(self, command):
        if command not in COMMANDS:
            raise SceneError(f"unknown command {command!r}")
        for name in NEEDS.get(command, ()):
            if not getattr(self, name):
                raise SceneError(f"command {command!r} needs a {name!r} payload in the scene")
        if command == "twist" and "mc" not in self.linfty:
            raise SceneError("command 'twist' needs linfty.mc")


def _int(data, key, default=None, low=None):
    if key not in data:
        if default is None:
            raise SceneError(f"missing field {key!r}")
        return default
    v = data[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise SceneError(f"field {key!r} must be an integer")
    if low is not None and v < low:
        raise SceneError(f"field {key!r} must be at least {low}")
    return v


def _index(row, key, d, where):
    v = row.get(key)
    if not isinstance(v, int) or not 1 <= v <= d:
        raise SceneError(f"{where}.{key}: expected an index in 1..{d}")
    return v - 1


def _poly(row, d, where):
    try:
        return parse_poly(row.get("poly", 1), d)
    except PolyParseError as exc:
        raise SceneError(f"{where}.poly: {exc}") from None


def _connection(rows, d):
    if not isinstance(rows, list):
        raise SceneError("field 'christoffel' must be a list")
    table = {}
    for n, row in enumerate(rows):
        where = f"christoffel[{n}]"
        key = tuple(_index(row, k, d, where) for k in ("k", "i", "j"))
        p = _poly(row, d, where)
        table[key] = table[key] + p if key in table else p
    try:
        return ConnectionData.from_table(d, table)
    except TorsionError as exc:
        raise SceneError(f"christoffel: {exc}") from None


def _poisson(rows, ctx):
    if not isinstance(rows, list):
        raise SceneError("field 'poisson' must be a list")
    d = ctx.d
    z = zero_mono(d)
    terms = {}
    for n, row in enumerate(rows):
        where = f"poisson[{n}]"
        i, j = _index(row, "i", d, where), _index(row, "j", d, where)
        if i == j:
            raise SceneError(f"{where}: a bivector needs i != j")
        sign = 1 if i < j else -1
        for m, c in _poly(row, d, where).terms.items():
            accumulate(terms, ((), z, m, (min(i, j), max(i, j))), sign * c)
    return PoissonStructure(ctx, (PolyVecField(ctx, terms, truncate=False),))


def _gauge(orders, ctx):
    if not isinstance(orders, list):
        raise SceneError("field 'gauge' must be a list of hbar orders")
    d = ctx.d
    z = zero_mono(d)
    ops = []
    for n, rows in enumerate(orders):
        terms = {}
        for t, row in enumerate(rows):
            where = f"gauge[{n}][{t}]"
            slots = row.get("slots")
            if not isinstance(slots, list) or len(slots) != 1 or len(slots[0]) != d:
                raise SceneError(f"{where}.slots: expected one derivative multi-index of length {d}")
            for m, c in _poly(row, d, where).terms.items():
                accumulate(terms, ((), z, m, (tuple(slots[0]),)), c)
        ops.append(PolyDiffOp(ctx, terms, truncate=False))
    return GaugeElement(ctx, tuple(ops))


def _linfty(data, arity):
    if not isinstance(data, dict) or "algebra" not in data:
        raise SceneError("linfty: expected an object with an 'algebra' entry")
    out = {}
    try:
        alg = LinftySpace.from_json(data["algebra"], arity)
        out["algebra"] = alg
        if "module" in data:
            out["module"] = LinftyModule.from_json(data["module"], alg)
        if "morphism" in data:
            m = data["morphism"]
            if "target" not in m:
                raise SceneError("linfty.morphism: missing 'target' algebra")
            tgt = LinftySpace.from_json(m["target"], arity)
            out["morphism"] = LinftyMorphism.from_json(m, alg, tgt)
        if "mc" in data:
            out["mc"] = alg.basis.vector(data["mc"])
    except (LinftyError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SceneError):
            raise
        raise SceneError(f"linfty: {exc}") from None
    return out


def parse_scene(data) -> Scene:
    if not isinstance(data, dict):
        raise SceneError("scene must be a JSON object")
    version = data.get("schema", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SceneError(f"unsupported schema version {version!r}; expected {SCHEMA_VERSION}")
    d = _int(data, "d", low=1)
    ctx = TruncationContext(d=d, N_y=_int(data, "N_y", 4, 1), N_hbar=_int(data, "N_hbar", 2, 0),
                            N_ar=_int(data, "N_ar", 4, 1))
    scene = Scene(ctx, seed=_int(data, "seed", 0), pool=_int(data, "pool", 1, 1))
    if "christoffel" in data:
        scene.connection = _connection(data["christoffel"], d)
    chart = ctx.with_(N_y=max(30, 4 * ctx.N_y))
    if "poisson" in data:
        scene.poisson = _poisson(data["poisson"], chart)
    if "gauge" in data:
        scene.gauge = _gauge(data["gauge"], chart)
    if "linfty" in data:
        scene.linfty = _linfty(data["linfty"], ctx.N_ar)
    for key in ("homology", "trace"):
        if key in data:
            if not isinstance(data[key], dict):
                raise SceneError(f"field {key!r} must be an object")
            setattr(scene, key, dict(data[key]))
    commands = data.get("commands", [])
    if not isinstance(commands, list):
        raise SceneError("field 'commands' must be a list")
    for c in commands:
        scene.require(c)
    scene.commands = list(commands)
    return scene


def load_scene(path) -> Scene:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SceneError(f"cannot read scene {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") \
            from None
    return parse_scene(data)


def weights_from(rows, d):
    out = {}
    for n, row in enumerate(rows or []):
        mono = row.get("mono")
        if not isinstance(mono, list) or len(mono) != d:
            raise SceneError(f"trace.functional[{n}].mono: expected {d} exponents")
        out[tuple(mono)] = rational(row.get("weight", 1))
    return out
