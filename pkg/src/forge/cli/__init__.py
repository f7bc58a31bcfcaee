"""Command-line front end: ``forge <command> --scene <file> [--format json|text] [--out <file>]``.

Exit status is 0 when every checked identity holds, 1 when some residual
is nonzero and 2 for unusable input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .commands import HANDLERS, Report, run
from .scene import COMMANDS, Scene, SceneError, load_scene, parse_scene

__all__ = ["COMMANDS", "Report", "Scene", "SceneError", "emit_report", "load_scene", "main",
           "parse_scene", "run"]


def thread_cap():
    """FORGE_THREADS, default 1. Commands currently run on one thread."""
    raw = os.environ.get("FORGE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise SceneError(f"FORGE_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise SceneError("FORGE_THREADS must be a positive integer")
    return n


def _text(report: Report) -> str:
    lines = [f"# {report.command}"]
    for c in report.checks:
        lines.append(f"{'ok  ' if c.ok else 'FAIL'}  {c.identity}  [{c.location}]")
    if "rows" in report.data:
        lines.append("degree  hochschild  forms")
        for row in report.data["rows"]:
            lines.append(f"{row['degree']:>6}  {row['hochschild']:>10}  {row['forms']:>5}")
    bad = report.first_failure()
    if bad is None:
        lines.append("ALL IDENTITIES HOLD")
    else:
        lines.append(f"FIRST FAILURE: {bad.identity} at {bad.location}")
        lines.append(json.dumps(bad.residual, sort_keys=True))
    return "\n".join(lines) + "\n"


def emit_report(reports, fmt="json") -> bytes:
    """Deterministic bytes for a list of reports."""
    if isinstance(reports, Report):
        reports = [reports]
    if fmt == "json":
        body = {"holds": all(r.holds for r in reports), "reports": [r.to_json() for r in reports]}
        return (json.dumps(body, sort_keys=True, indent=2) + "\n").encode("utf-8")
    if fmt == "text":
        return "".join(_text(r) for r in reports).encode("utf-8")
    if fmt == "csv":
        tables = [r.data["csv"] for r in reports if "csv" in r.data]
        if not tables:
            raise SceneError("csv output is only available for 'homology compare'")
        return "".join(tables).encode("utf-8")
    raise SceneError(f"unknown format {fmt!r}")


SUBCOMMANDS = {
    "fedosov": ("build", "check"),
    "linfty": ("check",),
    "star": ("moyal", "check"),
    "homology": ("compare",),
    "trace": ("check",),
}


def _parser():
    p = argparse.ArgumentParser(prog="forge", description=__doc__.splitlines()[0])
    p.add_argument("command", help="one of: " + ", ".join(COMMANDS) + ", or 'run'")
    p.add_argument("action", nargs="?", help="second word of two-word commands")
    p.add_argument("--scene", required=True, help="scene file (JSON, schema 1)")
    p.add_argument("--format", default="json", choices=("json", "text", "csv"))
    p.add_argument("--out", help="write the report here instead of stdout")
    return p


def _commands(args, scene):
    if args.command == "run":
        if not scene.commands:
            raise SceneError("scene lists no commands")
        return scene.commands
    if args.command in SUBCOMMANDS:
        if args.action not in SUBCOMMANDS[args.command]:
            raise SceneError(f"'{args.command}' takes one of: "
                             + ", ".join(SUBCOMMANDS[args.command]))
        return [f"{args.command} {args.action}"]
    if args.action:
        raise SceneError(f"'{args.command}' takes no sub-command")
    if args.command not in HANDLERS:
        raise SceneError(f"unknown command {args.command!r}")
    return [args.command]


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        thread_cap()
        scene = load_scene(args.scene)
        reports = [run(scene, c) for c in _commands(args, scene)]
        payload = emit_report(reports, args.format)
    except SceneError as exc:
        print(f"forge: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    return 0 if all(r.holds for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
