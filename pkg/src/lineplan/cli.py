"""Command-line interface.

Subcommands: validate, capacity, balance, lp, vsm, compare, serve.
Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
1 validation or input failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from lineplan.balance import BalancePolicy, balance_line, default_policy
from lineplan.capacity import analyze_capacity, build_crp_lp
from lineplan.lineio import (
    DocumentError,
    LineDocument,
    parse_line_document,
    render_capacity_table,
    report_to_dict,
)
from lineplan.model import (
    ADJUST_LABOR,
    ADJUST_MACHINES,
    LinePlanError,
    ScenarioDelta,
    Violation,
)
from lineplan.simplex import LpProblem, LpSolution, solve
from lineplan.vsm import compare_states, lead_time, va_ratio, value_added_time


def _load(path: str) -> LineDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError([Violation(path, str(exc))]) from None
    return parse_line_document(text)


def _fmt(value: float) -> str:
    number = float(value)
    if number.is_integer():
        return str(int(number))
    return f"{number:g}"


def describe_delta(delta: ScenarioDelta) -> str:
    """Human-readable summary of a delta's edits, e.g. '+1 team, +1 machine'."""
    parts = []
    for edit in delta.edits:
        if edit.kind == ADJUST_LABOR:
            parts.append(f"{int(edit.value):+d} team")
        elif edit.kind == ADJUST_MACHINES:
            parts.append(f"{int(edit.value):+d} machine")
        else:
            parts.append(f"cycle time -> {_fmt(edit.value)}")
    return ", ".join(parts)


def _cmd_validate(args) -> int:
    _load(args.file)  # raises on any problem
    print("ok")
    return 0


def _cmd_capacity(args) -> int:
    doc = _load(args.file)
    report = analyze_capacity(doc.line)
    if args.format == "json":
        print(json.dumps(report_to_dict(report), indent=2))
    else:
        sys.stdout.write(render_capacity_table(report, doc.line))
    return 0


def _resolve_policy(doc: LineDocument, target: float | None) -> BalancePolicy:
    if doc.balance_policy is not None:
        if target is None:
            return doc.balance_policy
        return dataclasses.replace(doc.balance_policy, target_throughput=target)
    if target is None:
        raise DocumentError(
            [Violation("balance", "no --target given and the document has no balance_policy")]
        )
    return default_policy(doc.line, target)


def _cmd_balance(args) -> int:
    doc = _load(args.file)
    policy = _resolve_policy(doc, args.target)
    plan = balance_line(doc.line, policy)
    start = analyze_capacity(doc.line).fg_throughput
    print(f"initial fg output: {_fmt(start)}")
    for step in plan.steps:
        print(
            f"step {step.iteration + 1}: {step.station_id} "
            f"{describe_delta(step.delta)} -> fg {_fmt(step.fg_throughput)}"
        )
    final_report = analyze_capacity(plan.final_line)
    if plan.achieved:
        print(f"achieved: target {_fmt(policy.target_throughput)} met "
              f"with fg {_fmt(final_report.fg_throughput)}")
        return 0
    print(
        f"not achieved: blocked at {final_report.bottleneck().station_id} "
        f"with fg {_fmt(final_report.fg_throughput)}"
    )
    return 0


def render_lp(problem: LpProblem, solution: LpSolution) -> str:
    lines = []
    terms = " + ".join(
        f"{_fmt(c)}*{problem.variable_label(j)}" for j, c in enumerate(problem.objective)
    )
    lines.append(f"{problem.sense}imize {terms if terms else '0'}")
    lines.append("subject to:")
    for i, row in enumerate(problem.constraint_matrix):
        row_terms = " + ".join(
            f"{_fmt(a)}*{problem.variable_label(j)}" for j, a in enumerate(row) if a != 0
        )
        lines.append(
            f"  {problem.constraint_label(i)}: {row_terms if row_terms else '0'} "
            f"<= {_fmt(problem.rhs[i])}"
        )
    lines.append(f"status: {solution.status}")
    if solution.z is not None:
        lines.append(f"objective: {_fmt(solution.z)}")
        for j, value in enumerate(solution.x):
            lines.append(f"  {problem.variable_label(j)} = {_fmt(value)}")
        binding = ", ".join(
            problem.constraint_label(i) for i in solution.active_constraints
        )
        lines.append(f"binding: {binding if binding else '(none)'}")
    return "\n".join(lines) + "\n"


def _cmd_lp(args) -> int:
    doc = _load(args.file)
    if not doc.line.styles:
        print("document has no styles; the throughput program is empty", file=sys.stderr)
        return 1
    problem = build_crp_lp(doc.line)
    solution = solve(problem)
    sys.stdout.write(render_lp(problem, solution))
    return 0


def _require_vsm(doc: LineDocument, path: str):
    if doc.vsm is None:
        raise DocumentError([Violation(path, "document has no vsm section")])
    return doc.vsm


def _cmd_vsm(args) -> int:
    doc = _load(args.file)
    vsm_map = _require_vsm(doc, args.file)
    lead = lead_time(vsm_map)
    print(f"lead time (min): {_fmt(lead)}")
    print(f"value-added time (min): {_fmt(value_added_time(vsm_map))}")
    print(f"va ratio: {va_ratio(vsm_map):.4f}")
    return 0


def _cmd_compare(args) -> int:
    current = _require_vsm(_load(args.current), args.current)
    future = _require_vsm(_load(args.future), args.future)
    result = compare_states(current, future)
    print(f"lead time current (min): {_fmt(result.lead_current)}")
    print(f"lead time future (min): {_fmt(result.lead_future)}")
    print(f"reduction (min): {_fmt(result.reduction)}")
    print(f"reduction pct: {result.reduction_pct * 100:.1f}%")
    print(f"rolled yield current: {result.rolled_yield_current:.4f}")
    print(f"rolled yield future: {result.rolled_yield_future:.4f}")
    return 0


def _cmd_serve(args) -> int:
    # Imported lazily so plain CLI use never needs the HTTP stack.
    import uvicorn

    from lineplan.service import create_app

    doc = _load(args.line)
    app = create_app(
        doc,
        snapshot_path=args.snapshot,
        allow_dev_origin=args.allow_dev_origin,
        ui_dir=args.ui,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lineplan",
        description="Capacity planning and line balancing for production lines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a line document")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("capacity", help="per-station capacity report")
    p.add_argument("file")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=_cmd_capacity)

    p = sub.add_parser("balance", help="iteratively grow the bottleneck to a target")
    p.add_argument("file")
    p.add_argument("--target", type=float, default=None)
    p.set_defaults(func=_cmd_balance)

    p = sub.add_parser("lp", help="build and solve the throughput program")
    p.add_argument("file")
    p.set_defaults(func=_cmd_lp)

    p = sub.add_parser("vsm", help="value-stream metrics for the document's map")
    p.add_argument("file")
    p.set_defaults(func=_cmd_vsm)

    p = sub.add_parser("compare", help="lead-time change between two documents")
    p.add_argument("current")
    p.add_argument("future")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("serve", help="run the planning HTTP service")
    p.add_argument("--line", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--snapshot", default=None)
    p.add_argument("--ui", default=None)
    p.add_argument("--allow-dev-origin", action="store_true")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except DocumentError as exc:
        for problem in exc.problems:
            print(str(problem), file=sys.stderr)
        return 1
    except LinePlanError as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
