"""Batch command-line front end.

Subcommands: classify, check-valuation, metric, jc, group, search,
export-dot.  Reports are emitted either as human-readable key/value
text or as JSON (``--format json``); JSON reports are byte-stable for
identical inputs, seed, and tolerance.

Exit status: 0 when the requested expectation holds (or none was
requested), 1 when it fails, 2 on input errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import catalog
from .errors import PosetvalError, UnknownName
from .metric import bound_gap, induce_metric, jc_distance, search_counterexample
from .poset import Poset, parse_poset_text, to_dot
from .valuation import (
    DEFAULT_TOLERANCE,
    Valuation,
    WeightFunction,
    affine_transform,
    cardinal_filter_valuation,
    cardinal_ideal_valuation,
    check_valuation,
    check_valuation_leclerc,
    check_valuation_monjardet,
    cumulative_lower,
    kappa_valuation,
    log_transform,
    parse_values_text,
    parse_weights_text,
)


def _jsonable(obj: Any) -> Any:
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(
            {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj) if not f.name.startswith("_")}
        )
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, frozenset):
        return sorted(obj)
    return obj


def _render_human(obj: Any, indent: int = 0, out: Optional[list[str]] = None) -> list[str]:
    lines = out if out is not None else []
    pad = "  " * indent
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                _render_human(v, indent + 1, lines)
            else:
                lines.append(f"{pad}{k}: {v if v != [] and v != {} else '(none)'}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                _render_human(v, indent + 1, lines)
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def _emit(report: dict, fmt: str) -> str:
    data = _jsonable(report)
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    return "\n".join(_render_human(data)) + "\n"


# -- input resolution ----------------------------------------------------------


def _resolve_poset(args) -> tuple[Poset, dict, Optional[catalog.SubgroupLattice]]:
    descriptor: dict[str, Any] = {"tolerance": args.tolerance}
    if getattr(args, "seed", None) is not None:
        descriptor["seed"] = args.seed
    if getattr(args, "budget", None) is not None:
        descriptor["budget"] = args.budget
    sources = [s for s in ("fixture", "poset", "group") if getattr(args, s, None)]
    if len(sources) != 1:
        raise PosetvalError("exactly one of --fixture, --poset, --group is required")
    source = sources[0]
    if source == "fixture":
        descriptor["fixture"] = args.fixture
        return catalog.named_poset(args.fixture), descriptor, None
    if source == "poset":
        descriptor["poset_file"] = args.poset
        text = Path(args.poset).read_text(encoding="utf-8")
        return parse_poset_text(text), descriptor, None
    descriptor["group"] = args.group
    lattice = catalog.enumerate_subgroups(catalog.named_group(args.group))
    return lattice.poset, descriptor, lattice


def _build_valuation(
    args, p: Poset, lattice: Optional[catalog.SubgroupLattice]
) -> tuple[Valuation, str]:
    chosen: list[tuple[str, Any]] = []
    for flag in ("cardinal_ideal", "cardinal_filter", "cardinality", "log_cardinality"):
        if getattr(args, flag, False):
            chosen.append((flag, True))
    for flag in ("cumulative", "kappa", "valuation"):
        if getattr(args, flag, None):
            chosen.append((flag, getattr(args, flag)))
    if len(chosen) != 1:
        raise PosetvalError(
            "exactly one valuation builder is required "
            "(--cardinal-ideal, --cardinal-filter, --cumulative, --kappa, "
            "--valuation, --cardinality, --log-cardinality)"
        )
    kind, value = chosen[0]
    tol = args.tolerance
    if kind == "cardinal_ideal":
        v, name = cardinal_ideal_valuation(p, tol), "cardinal-ideal"
    elif kind == "cardinal_filter":
        v, name = cardinal_filter_valuation(p, tol), "cardinal-filter"
    elif kind in ("cardinality", "log_cardinality"):
        if lattice is None:
            raise PosetvalError(f"--{kind.replace('_', '-')} requires --group")
        v = lattice.card_valuation if kind == "cardinality" else lattice.log_valuation
        name = kind.replace("_", "-")
    elif kind == "cumulative":
        t = _load_weights(value, p, tol)
        v, name = cumulative_lower(p, t), f"cumulative({value})"
    elif kind == "kappa":
        if value == "irreducibles":
            subset = sorted(p.meet_irreducibles())
        else:
            subset = value.split(",")
        offset = args.kappa_offset if args.kappa_offset is not None else float(len(subset))
        v, name = kappa_valuation(p, subset, offset, tol), f"kappa({value})"
    else:
        text = Path(value).read_text(encoding="utf-8")
        v, name = parse_values_text(text, p, tol), f"file({value})"
    if args.affine:
        k, a = args.affine
        v = affine_transform(v, k, a)
        name += f" affine({k},{a})"
    if args.log:
        v = log_transform(v)
        name += " log"
    return v, name


def _load_weights(spec: str, p: Poset, tol: float) -> WeightFunction:
    if spec == "uniform":
        return WeightFunction.uniform(p, tol)
    if spec == "ones":
        return WeightFunction.constant(p, 1.0, tol)
    return parse_weights_text(Path(spec).read_text(encoding="utf-8"), p, tol)


def _verdict_block(verdict) -> dict:
    return {
        "is_lower": verdict.is_lower,
        "is_upper": verdict.is_upper,
        "domain_lower_ok": verdict.domain_lower_ok,
        "domain_upper_ok": verdict.domain_upper_ok,
        "witnesses": [dataclasses.asdict(w) for w in verdict.witnesses],
    }


# -- subcommands -----------------------------------------------------------------


def cmd_classify(args) -> tuple[dict, int]:
    p, descriptor, _ = _resolve_poset(args)
    cls = p.classify()
    report = {
        "command": "classify",
        "input": descriptor,
        "poset": {
            "element_count": len(p),
            "cover_count": len(p.covers),
            "elements": list(p.elements),
            "reduction_warnings": [list(w) for w in p.reduction_warnings],
        },
        "classification": dataclasses.asdict(cls),
    }
    return report, 0


def cmd_check_valuation(args) -> tuple[dict, int]:
    p, descriptor, lattice = _resolve_poset(args)
    v, name = _build_valuation(args, p, lattice)
    if args.checker == "monjardet":
        verdict = check_valuation_monjardet(v)
    elif args.checker == "leclerc":
        verdict = check_valuation_leclerc(v)
    else:
        verdict = check_valuation(v)
    report = {
        "command": "check-valuation",
        "input": descriptor,
        "checker": args.checker,
        "valuation": {
            "name": name,
            "monotonicity": v.monotonicity,
            "values": {x: v.value(x) for x in p.elements},
        },
        "verdict": _verdict_block(verdict),
    }
    code = 0
    if args.expect:
        met = {
            "lower": verdict.is_lower,
            "upper": verdict.is_upper,
            "both": verdict.is_lower and verdict.is_upper,
        }[args.expect]
        report["expect"] = args.expect
        report["expectation_met"] = met
        code = 0 if met else 1
    return report, code


def cmd_metric(args) -> tuple[dict, int]:
    p, descriptor, lattice = _resolve_poset(args)
    v, name = _build_valuation(args, p, lattice)
    verdict = check_valuation(v)
    table = induce_metric(v, row=args.row, check=verdict)
    block: dict[str, Any] = {"row": table.table_row, "verdict": table.verdict}
    if args.verify:
        block["witnesses"] = [list(w) for w in table.violation_witnesses]
    if args.export_table:
        block["table"] = {
            f"{x},{y}": table.d(x, y)
            for i, x in enumerate(p.elements)
            for y in p.elements[i:]
        }
    report = {
        "command": "metric",
        "input": descriptor,
        "valuation": {"name": name, "monotonicity": v.monotonicity},
        "valuation_verdict": _verdict_block(verdict),
        "metric": block,
    }
    if args.bounds:
        gaps = bound_gap(v, check=verdict)
        finite = [g for g in gaps.gaps.values() if not math.isinf(g)]
        report["bounds"] = {
            "equality": gaps.equality,
            "max_gap": max(finite) if finite else 0.0,
            "gaps": {f"{x},{y}": g for (x, y), g in sorted(gaps.gaps.items())},
        }
    return report, 0


def cmd_jc(args) -> tuple[dict, int]:
    p, descriptor, _ = _resolve_poset(args)
    report: dict[str, Any] = {"command": "jc", "input": descriptor}
    if args.search:
        result = search_counterexample(
            p, "jc_triangle", budget=args.budget, seed=args.seed, tolerance=args.tolerance
        )
        report["search"] = _search_block(result, p)
        return report, 0
    if not args.weights:
        raise PosetvalError("jc requires --weights or --search")
    t = _load_weights(args.weights, p, args.tolerance)
    table = jc_distance(p, t, args.tolerance)
    report["weights"] = {x: float(t.weights[x]) for x in p.elements}
    report["jc"] = {
        "information_content": dict(table.info),
        "excluded": list(table.excluded),
        "verdict": table.verdict,
        "witnesses": [list(w) for w in table.violation_witnesses],
        "table": {
            f"{x},{y}": table.d(x, y)
            for i, x in enumerate(table.included)
            for y in table.included[i:]
        },
    }
    return report, 0


def _search_block(result, p: Poset) -> dict:
    if result is None:
        return {"found": False}
    witness = result.witness
    if dataclasses.is_dataclass(witness) and not isinstance(witness, type):
        witness = dataclasses.asdict(witness)
    elif isinstance(witness, tuple):
        witness = list(witness)
    return {
        "found": True,
        "iterations": result.iterations,
        "weights": {x: float(result.weights.weights[x]) for x in p.elements},
        "witness": witness,
    }


def cmd_group(args) -> tuple[dict, int]:
    g = catalog.named_group(args.name)
    lattice = catalog.enumerate_subgroups(g, cap=args.cap)
    ok, witnesses = catalog.product_formula_check(lattice)
    report: dict[str, Any] = {
        "command": "group",
        "input": {"group": args.name, "tolerance": args.tolerance},
        "group": {"name": g.name, "order": g.order, "abelian": g.is_abelian()},
        "subgroup_count": len(lattice.subgroups),
        "subgroups": [
            {
                "label": lattice.labels[i],
                "order": len(s),
                "members": sorted(g.names[k] for k in s),
            }
            for i, s in enumerate(lattice.subgroups)
        ],
        "covers": [list(c) for c in sorted(lattice.poset.covers)],
        "product_formula": {"ok": ok, "witnesses": [list(w) for w in witnesses]},
    }
    if args.metric:
        x, y = args.metric
        report["metric"] = {"x": x, "y": y, "distance": catalog.subgroup_metric(lattice, x, y)}
    return report, 0


def cmd_search(args) -> tuple[dict, int]:
    p, descriptor, _ = _resolve_poset(args)
    result = search_counterexample(
        p, args.target, budget=args.budget, seed=args.seed, tolerance=args.tolerance
    )
    report = {
        "command": "search",
        "input": descriptor,
        "target": args.target,
        "search": _search_block(result, p),
    }
    return report, 0


def cmd_export_dot(args) -> tuple[dict, int]:
    p, _, _ = _resolve_poset(args)
    return {"_raw": to_dot(p)}, 0


# -- parser ------------------------------------------------------------------------


def _add_source_args(sp):
    sp.add_argument("--fixture", help="named poset fixture, e.g. P1, M2, chain(5)")
    sp.add_argument("--poset", help="poset file in the cover-list format")
    sp.add_argument("--group", help="group name; uses its subgroup lattice, e.g. S3")


def _add_builder_args(sp):
    sp.add_argument("--cardinal-ideal", action="store_true", help="|down x|")
    sp.add_argument("--cardinal-filter", action="store_true", help="|up x|")
    sp.add_argument("--cumulative", metavar="WEIGHTS", help="weights file, 'uniform' or 'ones'")
    sp.add_argument("--kappa", metavar="SUBSET", help="'irreducibles' or a,b,c")
    sp.add_argument("--kappa-offset", type=float, default=None, help="offset A (default |K|)")
    sp.add_argument("--valuation", metavar="FILE", help="valuation file (element value lines)")
    sp.add_argument("--cardinality", action="store_true", help="|X| on a subgroup lattice")
    sp.add_argument("--log-cardinality", action="store_true", help="log|X| on a subgroup lattice")
    sp.add_argument("--affine", nargs=2, type=float, metavar=("K", "A"), help="apply K*v + A")
    sp.add_argument("--log", action="store_true", help="apply natural log")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=100_000)
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--timing", action="store_true", help="append elapsed time (not byte-stable)")

    parser = argparse.ArgumentParser(prog="posetval", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("classify", parents=[common], help="order-theoretic classification")
    _add_source_args(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("check-valuation", parents=[common], help="test the valuation axioms")
    _add_source_args(sp)
    _add_builder_args(sp)
    sp.add_argument("--expect", choices=("lower", "upper", "both"))
    sp.add_argument("--checker", choices=("standard", "monjardet", "leclerc"), default="standard")
    sp.set_defaults(func=cmd_check_valuation)

    sp = sub.add_parser("metric", parents=[common], help="induce and verify a distance table")
    _add_source_args(sp)
    _add_builder_args(sp)
    sp.add_argument("--row", type=int, default=None, help="force a formula row (1-4)")
    sp.add_argument("--verify", action="store_true", help="include axiom witnesses")
    sp.add_argument("--bounds", action="store_true", help="include envelope gaps")
    sp.add_argument("--export-table", action="store_true", help="include the distance table")
    sp.set_defaults(func=cmd_metric)

    sp = sub.add_parser("jc", parents=[common], help="information-content distance")
    _add_source_args(sp)
    sp.add_argument("--weights", metavar="SPEC", help="weights file or 'uniform'")
    sp.add_argument("--search", action="store_true", help="search for a triangle violation")
    sp.set_defaults(func=cmd_jc)

    sp = sub.add_parser("group", parents=[common], help="enumerate subgroups of a named group")
    sp.add_argument("--name", required=True)
    sp.add_argument("--cap", type=int, default=catalog.DEFAULT_ORDER_CAP)
    sp.add_argument("--metric", nargs=2, metavar=("X", "Y"), help="subgroup metric between labels")
    sp.set_defaults(func=cmd_group)

    sp = sub.add_parser("search", parents=[common], help="counterexample search over weights")
    _add_source_args(sp)
    sp.add_argument(
        "--target",
        required=True,
        choices=("jc_triangle", "log_lower_fails", "log_upper_fails"),
    )
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("export-dot", parents=[common], help="Hasse diagram as DOT text")
    _add_source_args(sp)
    sp.set_defaults(func=cmd_export_dot)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        report, code = args.func(args)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except PosetvalError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if "_raw" in report:
        sys.stdout.write(report["_raw"])
        return code
    if args.timing:
        report["timing"] = {"elapsed_s": round(time.perf_counter() - start, 6)}
    sys.stdout.write(_emit(report, args.format))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
