"""Command line interface: batch question generation, feedback-loop replay
and the HTTP service.

Exit codes: 0 ok, 2 usage or input problems, 3 domain errors, 4 environment
failures.  A JSON config file named by the QGEN_CONFIG environment variable
seeds flag defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .dataset import IngestOptions, load_dataset
from .engine import EngineConfig, ExplorationSession, generate_questions
from .errors import IngestError, NoEligibleColumns, QgenError, UnknownQuestion
from .ranking import question_weight

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_ENV = 4


def _load_env_config() -> dict:
    path = os.environ.get("QGEN_CONFIG")
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"qgen: cannot read QGEN_CONFIG {path!r}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    if not isinstance(data, dict):
        print(f"qgen: QGEN_CONFIG {path!r} must hold a JSON object", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    return {k.replace("-", "_"): v for k, v in data.items()}


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="qgen",
                                     description="Generate and rank interesting "
                                                 "questions over a tabular dataset")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_ingest_flags(p):
        p.add_argument("--delimiter", default=",", help="field delimiter (default ,)")
        p.add_argument("--date-format", action="append", dest="date_format",
                       help="date format to try, repeatable (strptime syntax)")
        p.add_argument("--numeric-threshold", type=float, default=0.9,
                       help="parse-vote threshold for numeric/date kinds")
        p.add_argument("--id-threshold", type=float, default=0.95,
                       help="distinctness threshold for identifier columns")

    def add_engine_flags(p):
        p.add_argument("--limit", type=int, default=500,
                       help="maximum number of questions to keep (default 500)")
        p.add_argument("--top", type=int, default=10,
                       help="how many questions to echo per ranking (default 10)")
        p.add_argument("--max-cols", type=int, default=3, dest="max_cols",
                       help="largest column subset per question (default 3)")
        p.add_argument("--alpha", type=float, default=0.05,
                       help="significance level for slice tests (default 0.05)")
        p.add_argument("--entity", default="records",
                       help="entity noun used in question text (default records)")
        p.add_argument("--k", type=int, default=10,
                       help="number of interesting columns to keep (default 10)")
        p.add_argument("--min-slice-size", type=int, default=2, dest="min_slice_size")
        p.add_argument("--effect-floor", type=float, default=0.5, dest="effect_floor")
        p.add_argument("--measures",
                       help="comma-separated measure names to enable "
                            "(entropy,unalikeability,cv,std,correlation)")

    gen = sub.add_parser("generate", help="write ranked questions for a dataset")
    gen.add_argument("--input", required=True, help="delimited text file with header row")
    gen.add_argument("--output", help="output file (JSON lines); stdout when omitted")
    add_engine_flags(gen)
    add_ingest_flags(gen)

    rep = sub.add_parser("replay", help="verify the feedback loop on a selection trace")
    rep.add_argument("--input", required=True, help="delimited text file with header row")
    rep.add_argument("--selections", required=True,
                     help="file with one question id per line")
    add_engine_flags(rep)
    add_ingest_flags(rep)

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--port", type=int, default=8080)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--catalog-dir", dest="catalog_dir",
                     help="directory of delimited files listed in the catalog")

    return parser, {"generate": gen, "replay": rep, "serve": srv}


def _engine_config(args) -> EngineConfig:
    measures = None
    if getattr(args, "measures", None):
        measures = tuple(m.strip() for m in args.measures.split(",") if m.strip())
    return EngineConfig(
        k=args.k,
        r_max=args.max_cols,
        alpha=args.alpha,
        min_slice_size=args.min_slice_size,
        effect_floor=args.effect_floor,
        entity=args.entity,
        measures=measures,
    )


def _ingest_options(args) -> IngestOptions:
    return IngestOptions(
        delimiter=args.delimiter,
        date_formats=tuple(args.date_format) if args.date_format
        else IngestOptions().date_formats,
        numeric_threshold=args.numeric_threshold,
        id_threshold=args.id_threshold,
    )


def _load_input(args):
    path = Path(args.input)
    if not path.is_file():
        print(f"qgen: input file not found: {path}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    try:
        return load_dataset(path, _ingest_options(args))
    except IngestError as exc:
        print(f"qgen: {type(exc).__name__}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _question_line(rank: int, q) -> str:
    return json.dumps({
        "rank": rank,
        "question": q.surface_text,
        "score": q.score,
        "columns": list(q.columns),
        "operators": dict(q.operator_map),
        "slot_values": list(q.slot_values),
        "id": q.id,
    }, ensure_ascii=False)


def cmd_generate(args) -> int:
    dataset = _load_input(args)
    try:
        questions = generate_questions(dataset, _engine_config(args), limit=args.limit)
    except NoEligibleColumns as exc:
        print(f"qgen: NoEligibleColumns: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    lines = [_question_line(i + 1, q) for i, q in enumerate(questions)]
    body = "\n".join(lines) + ("\n" if lines else "")
    if args.output:
        Path(args.output).write_text(body, encoding="utf-8")
        for line in lines[: args.top]:
            print(line)
    else:
        sys.stdout.write(body)
    return EXIT_OK


def _iteration_line(session: ExplorationSession, top: int) -> str:
    ranked = session.top(top)
    entry = {
        "iteration": session.iteration,
        "counters": session.state.counters,
        "probabilities": session.probabilities(),
        "top": [
            {
                "rank": i + 1,
                "id": q.id,
                "question": q.surface_text,
                "score": q.score,
                "weight": question_weight(session.state, q),
            }
            for i, q in enumerate(ranked)
        ],
    }
    return json.dumps(entry, ensure_ascii=False)


def cmd_replay(args) -> int:
    dataset = _load_input(args)
    selections_path = Path(args.selections)
    if not selections_path.is_file():
        print(f"qgen: selections file not found: {selections_path}", file=sys.stderr)
        return EXIT_USAGE
    selections = [
        line.strip() for line in selections_path.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    try:
        session = ExplorationSession.create(
            dataset, _engine_config(args), question_limit=args.limit,
            session_id="replay")
    except NoEligibleColumns as exc:
        print(f"qgen: NoEligibleColumns: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print(_iteration_line(session, args.top))
    for question_id in selections:
        try:
            session.select(question_id)
        except UnknownQuestion as exc:
            print(f"qgen: UnknownQuestion: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        print(_iteration_line(session, args.top))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(catalog_dir=args.catalog_dir)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except (OSError, SystemExit) as exc:
        print(f"qgen: cannot serve on {args.host}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_ENV
    return EXIT_OK


def main(argv=None) -> int:
    parser, subparsers = build_parser()
    env_config = _load_env_config()
    if env_config:
        # config file seeds defaults; explicitly passed flags still win
        for sub in subparsers.values():
            dests = {action.dest for action in sub._actions}  # noqa: SLF001
            sub.set_defaults(**{k: v for k, v in env_config.items() if k in dests})
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "replay":
            return cmd_replay(args)
        if args.command == "serve":
            return cmd_serve(args)
    except QgenError as exc:
        print(f"qgen: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
