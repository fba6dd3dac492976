"""Command-line interface: batch reasoning over KB files and the simulation.

Exit codes: 0 on success, 1 when the given state is inconsistent (or no model
exists), 2 on usage, file or parse errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Optional

from .assistant import (
    SizeGuardError,
    propagate_split,
    relevant_approx,
    relevant_exact,
)
from .engine import (
    BOTH,
    SolveState,
    StateInconsistentError,
    enumerate_models,
    is_consistent,
)
from .logic import Kind, KnowledgeBase, PartialStructure
from .parsing import ParseError, parse_kb, parse_structure, serialize_structure
from .simulate import SimulationConfig, SimulationRow, mean_entries, run_simulation


class UsageError(Exception):
    """Usage-level failure; the CLI maps it to exit code 2."""


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc.strerror or exc))


def _load_kb(path: str) -> KnowledgeBase:
    text = _read_file(path)
    try:
        return parse_kb(text)
    except ParseError as exc:
        raise UsageError("%s: %s" % (path, exc))


def _load_state(kb: KnowledgeBase, struct_paths: list[str]) -> SolveState:
    merged = PartialStructure.empty(kb.vocabulary)
    for path in struct_paths or []:
        text = _read_file(path)
        try:
            merged = merged.join(parse_structure(text, kb.vocabulary))
        except (ParseError, ValueError) as exc:
            raise UsageError("%s: %s" % (path, exc))
    return SolveState(
        merged.restrict_kind(Kind.ENV), merged.restrict_kind(Kind.DEC)
    )


def cmd_check(args) -> int:
    kb = _load_kb(args.kb)
    vocab = kb.vocabulary
    print("symbols: %d (%d environmental, %d decision)"
          % (len(vocab), len(vocab.environmental), len(vocab.decision)))
    print("sentences: %d environment, %d solution" % (len(kb.tenv), len(kb.tsol)))
    if kb.goals:
        print("goals: %s" % ", ".join(kb.goals))
    if is_consistent(kb, SolveState.empty(vocab)):
        print("empty state: consistent")
        return 0
    print("empty state: inconsistent (there is no solution)")
    return 1


def cmd_solve(args) -> int:
    kb = _load_kb(args.kb)
    state = _load_state(kb, args.struct)
    models = enumerate_models(kb, state, BOTH, limit=args.limit)
    if not models:
        print("no models", file=sys.stderr)
        return 1
    for i, model in enumerate(models, 1):
        print("// model %d" % i)
        print(serialize_structure(model))
        if i < len(models):
            print()
    return 0


def cmd_propagate(args) -> int:
    kb = _load_kb(args.kb)
    state = _load_state(kb, args.struct)
    try:
        split = propagate_split(kb, state)
    except StateInconsistentError as exc:
        print("inconsistent state: %s" % exc, file=sys.stderr)
        return 1
    for title, part in (
        ("safe consequences", split.obs_safe),
        ("to verify", split.obs_to_verify),
        ("decision consequences", split.dec_consequence),
    ):
        print("// %s" % title)
        text = serialize_structure(part)
        if text:
            print(text)
    return 0


def cmd_relevance(args) -> int:
    kb = _load_kb(args.kb)
    state = _load_state(kb, args.struct)
    try:
        if args.mode == "exact":
            relevant = relevant_exact(kb, state)
        else:
            relevant = relevant_approx(kb, state)
    except StateInconsistentError as exc:
        print("inconsistent state: %s" % exc, file=sys.stderr)
        return 1
    except SizeGuardError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    combined = state.combined()
    print("symbol  kind  status")
    for sym in kb.vocabulary.symbols:
        if sym.name in combined:
            status = "given"
        elif sym.name in relevant:
            status = "relevant"
        else:
            status = "irrelevant"
        print("%s  %s  %s" % (sym.name, sym.kind.value, status))
    return 0


def _simulate_rows(kb: KnowledgeBase, args, mode) -> list[SimulationRow]:
    config = SimulationConfig(
        kb, instances=args.runs, seed=args.seed, mode=mode, step_cap=args.step_cap
    )
    return run_simulation(config)


def cmd_simulate(args) -> int:
    kb = _load_kb(args.kb)
    modes = [args.mode] if args.mode else ["traditional", "guided"]
    rows_by_mode = {mode: _simulate_rows(kb, args, mode) for mode in modes}

    if len(modes) == 2:
        trad, guid = rows_by_mode["traditional"], rows_by_mode["guided"]
        print("instance  traditional  guided  retractions")
        for t, g in zip(trad, guid):
            print("sale-%-4d %-12d %-7d %d" % (t.instance, t.entries, g.entries, g.retractions))
        mt, mg = mean_entries(trad), mean_entries(guid)
        print("average   %-12.2f %-7.2f" % (mt, mg))
        if mt > 0:
            print("gain      %+.2f entries (%+.0f%%)" % (mg - mt, 100.0 * (mg - mt) / mt))
    else:
        mode = modes[0]
        print("instance  mode         entries  retractions  outcome")
        for row in rows_by_mode[mode]:
            print("sale-%-4d %-12s %-8d %-12d %s"
                  % (row.instance, row.mode, row.entries, row.retractions, row.outcome))
        print("average   %-12s %.2f" % (mode, mean_entries(rows_by_mode[mode])))

    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["instance", "mode", "entries", "retractions", "outcome"])
            for mode in modes:
                for row in rows_by_mode[mode]:
                    writer.writerow(
                        [row.instance, row.mode, row.entries, row.retractions, row.outcome]
                    )
    failed = any(r.outcome == "failed" for rows in rows_by_mode.values() for r in rows)
    return 1 if failed else 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mxassist",
        description="Reasoning over split environment/decision knowledge bases.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_kb(p):
        p.add_argument("--kb", required=True, help="knowledge base file (.kb)")

    def add_struct(p):
        p.add_argument(
            "--struct", action="append", default=[],
            help="partial structure file (.struct); repeatable, merged by symbol kind",
        )

    p = sub.add_parser("check", help="parse a KB and report diagnostics")
    add_kb(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="enumerate total solutions")
    add_kb(p)
    add_struct(p)
    p.add_argument("--limit", type=int, default=10)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("propagate", help="split propagation of a state")
    add_kb(p)
    add_struct(p)
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("relevance", help="relevant/irrelevant symbols of a state")
    add_kb(p)
    add_struct(p)
    p.add_argument("--mode", choices=["exact", "approx"], default="approx")
    p.set_defaults(func=cmd_relevance)

    p = sub.add_parser("simulate", help="robot data-entry experiment")
    add_kb(p)
    p.add_argument("--mode", choices=["traditional", "guided"], default=None,
                   help="run one protocol only (default: both, with gain)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--step-cap", type=int, default=200)
    p.add_argument("--csv", default=None, help="write rows to this CSV file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static", default=None, help="directory of UI files to serve at /")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
