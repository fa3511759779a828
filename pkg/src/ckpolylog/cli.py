"""Command-line front end: ``ckpolylog basis|geom|loci|count|selftest``."""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .counting import BUDGET_EXHAUSTED, count_points
from .geometric import EliminationBudgetExceeded, geometric_ideal
from .loci import assemble_loci, default_prime, disk_reports, scheme_alphabet, symmetrize
from .motivic_basis import BasisSearchExhausted, cached_basis
from .sunits import OpenIntegerScheme, enumerate_points

FORMAT = "ckpolylog/1"

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_FAILED = 0, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    scheme: str | None = None
    qs: int | None = None
    depth: int = 2
    prime: int | None = None
    precision: int | None = None
    height_bound: int | None = None
    budget: float | None = None
    out: str | None = None
    jobs: int = 1
    max_radius: int = 3

    def validate(self) -> None:
        if self.depth < 1:
            raise ValueError("--depth must be >= 1")
        if self.precision is not None and self.precision < 1:
            raise ValueError("--precision must be >= 1")
        if self.scheme is not None:
            OpenIntegerScheme.parse(self.scheme)

    def public(self) -> dict:
        return {k: v for k, v in asdict(self).items() if k not in ("out", "jobs")}


def _document(config: RunConfig, result: dict) -> dict:
    return {"format": FORMAT, "version": __version__, "command": config.command,
            "config": config.public(), "result": result}


def _emit(config: RunConfig, doc: dict) -> str | None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if config.out:
        Path(config.out).write_text(text)
        return config.out
    sys.stdout.write(text)
    return None


def cmd_basis(config: RunConfig) -> int:
    qs = config.qs or OpenIntegerScheme.parse(config.scheme or "Z").q_s
    basis = cached_basis(qs, config.depth, config.precision or 20, config.prime, config.height_bound or 256)
    result = basis.to_dict()
    result["points"] = [str(g.point) for g in basis.generators if g.kind == "li"]
    _emit(config, _document(config, result))
    return EXIT_OK


def cmd_geom(config: RunConfig) -> int:
    Z = OpenIntegerScheme.parse(config.scheme or "Z")
    ideal = geometric_ideal(scheme_alphabet(Z, config.depth), config.depth, config.budget)
    _emit(config, _document(config, ideal.to_dict()))
    return EXIT_OK


def cmd_loci(config: RunConfig) -> int:
    Z = OpenIntegerScheme.parse(config.scheme or "Z")
    N = config.precision or 15
    p = config.prime or default_prime(Z)
    locus = assemble_loci(Z, config.depth, N, p)
    fns = symmetrize(locus.functions)
    known = [pt.value for pt in enumerate_points(Z, config.height_bound or 64)]
    report = disk_reports(fns, p, N, known, max_depth=config.max_radius, jobs=config.jobs)
    result = report.to_dict()
    result["ideal"] = locus.ideal.generator_strings()
    result["known_points"] = [str(x) for x in known]
    result["generators"] = [f.to_dict() for f in fns]
    _emit(config, _document(config, result))
    return EXIT_OK if report.certified else EXIT_FAILED


def _default_report_path(config: RunConfig) -> str:
    slug = re.sub(r"[^A-Za-z0-9]+", "_", config.scheme or "Z").strip("_")
    return f"count_{slug}_n{config.depth}.json"


def cmd_count(config: RunConfig) -> int:
    Z = OpenIntegerScheme.parse(config.scheme or "Z")
    if config.prime is not None and config.prime <= 2:
        raise ValueError("--prime must be odd")
    points, state = count_points(Z, config.depth, config.prime, config.precision or 15,
                                 config.height_bound or 16, budget=config.budget, jobs=config.jobs)
    exhausted = points == BUDGET_EXHAUSTED
    result = {"points": None if exhausted else [str(pt) for pt in points],
              "status": BUDGET_EXHAUSTED if exhausted else "certified", "state": state.to_dict()}
    path = config.out or _default_report_path(config)
    Path(path).write_text(json.dumps(_document(config, result), indent=2, sort_keys=True) + "\n")
    if exhausted:
        print(BUDGET_EXHAUSTED)
    else:
        print("{" + ", ".join(str(pt) for pt in points) + "}" if points else "∅")
    print(f"report: {path}")
    return EXIT_BUDGET if exhausted else EXIT_OK


def cmd_selftest(config: RunConfig) -> int:
    from .selftest import run

    results = run()
    _emit(config, _document(config, results))
    return EXIT_OK if all(r["ok"] for r in results.values()) else EXIT_FAILED


COMMANDS = {"basis": cmd_basis, "geom": cmd_geom, "loci": cmd_loci, "count": cmd_count,
            "selftest": cmd_selftest}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ckpolylog", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--scheme", help='e.g. "Z", "Z[1/2,1/3]", "Z>5"')
        sp.add_argument("--depth", type=int, default=2)
        sp.add_argument("--prime", type=int)
        sp.add_argument("--precision", type=int, help="p-adic working precision N")
        sp.add_argument("--height-bound", type=int, dest="height_bound")
        sp.add_argument("--budget", type=float, help="seconds")
        sp.add_argument("--out")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--max-radius", type=int, default=3, dest="max_radius",
                        help="deepest ball radius exponent for loci")
        if name == "basis":
            sp.add_argument("--qs", type=int, help="largest inverted prime")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(**vars(args))
    try:
        config.validate()
        return COMMANDS[config.command](config)
    except ValueError as exc:
        print(json.dumps({"error": {"code": "config", "message": str(exc)}}), file=sys.stderr)
        return EXIT_CONFIG
    except (EliminationBudgetExceeded, BasisSearchExhausted) as exc:
        print(json.dumps({"error": {"code": "budget", "message": str(exc)}}), file=sys.stderr)
        return EXIT_BUDGET
    except ArithmeticError as exc:
        print(json.dumps({"error": {"code": "precision", "message": str(exc)}}), file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
