"""Command line front end.

Commands: ``slice`` (reduce a trace backward from one event), ``deps``
(list the dependency predecessors of one event), ``validate`` (check a
trace against its model), and ``serve`` (start the HTTP explorer).

Exit codes: 0 success, 1 validation found violations, 2 unreadable
paths, 3 event index out of range, 4 unparseable trace or model. The
``TRACELENS_LOG`` environment variable sets the log level.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .engine import DependencyKind, SliceMode, all_dependencies
from .events import EventTrace, TraceFormat, TraceParseError, parse_trace
from .model import ModelLoadError, SystemModel, parse_model
from .slicer import SliceResult, canonical_json, result_to_json_obj, slice_trace, to_dot

log = logging.getLogger("tracelens")

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_BAD_PATH = 2
EXIT_BAD_EVENT = 3
EXIT_PARSE = 4

TABLE_HEADERS = ("No.", "Proc.", "Oper.", "Rsrc.", "Old State", "New State")

_KIND_LABELS = {
    DependencyKind.COS: "Change-Of-State",
    DependencyKind.LRU: "Last-Resource-Use",
    DependencyKind.LSRU: "Last-Shared-Resource-Use",
    DependencyKind.CE: "Cause-Effect",
}


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _trace_format(path: str) -> TraceFormat:
    return TraceFormat.JSON if path.lower().endswith(".json") else TraceFormat.TSV


def _load_inputs(args) -> tuple[EventTrace, SystemModel]:
    trace = parse_trace(_read_text(args.trace), _trace_format(args.trace))
    model = parse_model(_read_text(args.model))
    return trace, model


def render_event_table(trace: EventTrace, indices) -> str:
    rows = [TABLE_HEADERS]
    for index in indices:
        event = trace.event(index)
        rows.append((str(index), event.process, event.operation, event.resource,
                     event.old_state, event.new_state))
    widths = [max(len(row[col]) for row in rows) for col in range(len(TABLE_HEADERS))]
    lines = []
    for row in rows:
        lines.append("  ".join(cell.ljust(width)
                               for cell, width in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _pairs_text(edges) -> str:
    ordered = sorted(edges, key=lambda e: (-e.from_index, -e.to_index))
    if not ordered:
        return "(none)"
    return ", ".join(f"({e.from_index},{e.to_index})" for e in ordered)


def render_deps_table(edges, mode: SliceMode) -> str:
    if mode is SliceMode.BASIC:
        kinds = (DependencyKind.COS, DependencyKind.LRU, DependencyKind.LSRU)
    else:
        kinds = (DependencyKind.COS, DependencyKind.CE)
    label_width = max(len(_KIND_LABELS[kind]) for kind in kinds)
    lines = []
    for kind in kinds:
        group = [e for e in edges if e.kind is kind]
        lines.append(f"{_KIND_LABELS[kind].ljust(label_width)}  {_pairs_text(group)}")
    return "\n".join(lines) + "\n"


def deps_to_json_obj(edges, event: int, mode: SliceMode) -> dict:
    def group(kind: DependencyKind) -> list[dict]:
        return [
            e.to_json_obj()
            for e in sorted(edges, key=lambda e: (e.from_index, e.to_index))
            if e.kind is kind
        ]

    return {
        "event": event,
        "mode": mode.value,
        "cos": group(DependencyKind.COS),
        "lru": group(DependencyKind.LRU),
        "lsru": group(DependencyKind.LSRU),
        "ce": group(DependencyKind.CE),
    }


def cmd_slice(args) -> int:
    trace, model = _load_inputs(args)
    result = slice_trace(trace, model, args.event, SliceMode(args.mode),
                         lsru_strict=args.lsru_strict)
    if args.format == "table":
        sys.stdout.write(render_event_table(trace, result.members))
    elif args.format == "json":
        sys.stdout.write(canonical_json(result_to_json_obj(result)) + "\n")
    else:
        sys.stdout.write(to_dot(result, trace))
    log.info(
        "kept %d of %d events (ratio %.2f)",
        result.stats.slice_length, result.stats.trace_length,
        result.stats.reduction_ratio,
    )
    return EXIT_OK


def cmd_deps(args) -> int:
    trace, model = _load_inputs(args)
    mode = SliceMode(args.mode)
    edges = all_dependencies(trace, args.event, model, mode,
                             lsru_strict=args.lsru_strict)
    if args.format == "json":
        sys.stdout.write(canonical_json(deps_to_json_obj(edges, args.event, mode)) + "\n")
    else:
        sys.stdout.write(render_deps_table(edges, mode))
    return EXIT_OK


def cmd_validate(args) -> int:
    from .model import validate_against_model

    trace, model = _load_inputs(args)
    violations = validate_against_model(trace, model)
    for violation in violations:
        sys.stdout.write(
            f"event {violation.event_index}: {violation.kind.value}: "
            f"{violation.message}\n"
        )
    sys.stdout.write(f"{len(violations)} violations\n")
    return EXIT_OK if not violations else EXIT_VIOLATIONS


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracelens",
        description="Reduce event traces by slicing backward from a suspect event.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io_args(p, with_event: bool, formats: tuple[str, ...]) -> None:
        p.add_argument("--trace", required=True,
                       help="trace file (.tsv, or .json for the JSON form)")
        p.add_argument("--model", required=True, help="model JSON file")
        if with_event:
            p.add_argument("--event", required=True, type=int,
                           help="1-based index of the event to examine")
            p.add_argument("--mode", choices=[m.value for m in SliceMode],
                           default=SliceMode.BASIC.value)
            p.add_argument("--lsru-strict", action="store_true",
                           help="use the literal last-shared-use check that "
                            "counts intervening uses by the affected process")
        if formats:
            p.add_argument("--format", choices=formats, default="table")

    p_slice = sub.add_parser("slice", help="slice the trace backward from an event")
    add_io_args(p_slice, with_event=True, formats=("table", "json", "dot"))
    p_slice.set_defaults(handler=cmd_slice)

    p_deps = sub.add_parser("deps", help="list dependency predecessors of an event")
    add_io_args(p_deps, with_event=True, formats=("table", "json"))
    p_deps.set_defaults(handler=cmd_deps)

    p_validate = sub.add_parser("validate", help="check a trace against its model")
    add_io_args(p_validate, with_event=False, formats=())
    p_validate.set_defaults(handler=cmd_validate)

    p_serve = sub.add_parser("serve", help="start the HTTP explorer service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(handler=cmd_serve)

    return parser


def _configure_logging() -> None:
    level_name = os.environ.get("TRACELENS_LOG", "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except OSError as exc:
        print(f"tracelens: cannot read input: {exc}", file=sys.stderr)
        return EXIT_BAD_PATH
    except IndexError as exc:
        print(f"tracelens: {exc}", file=sys.stderr)
        return EXIT_BAD_EVENT
    except (TraceParseError, ModelLoadError) as exc:
        print(f"tracelens: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
