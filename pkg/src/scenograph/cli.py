"""Command-line entry point: validate, export, run, sweep, lib, serve.

Exit codes: 0 success/valid, 1 validation or scenario-level failure,
2 usage or I/O error. `--format structured` switches every command to a
stable JSON output for scripting; the default human output stays terse.
No command ever mutates its input file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import concretize, library
from .errors import (
    InvalidConfig,
    LevelError,
    NotFound,
    OutOfRange,
    ParseError,
    ScenarioError,
    SchemaError,
)
from .executor import TickConfig, run
from .serialize import load as load_scenario, save as save_scenario
from .registry import DEFAULT_REGISTRY, Registry
from .validation import validate
from .xosc import ExportOptions, export, verify_structure

EXIT_OK = 0
EXIT_SCENARIO = 1
EXIT_USAGE = 2

HUMAN = "human"
STRUCTURED = "structured"


def _load_registry(args) -> Registry:
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as handle:
            return DEFAULT_REGISTRY.with_overrides(json.load(handle))
    return DEFAULT_REGISTRY


def _load_scenario(path: str):
    try:
        return load_scenario(path)
    except OSError as exc:
        raise SystemExit(_fail(f"cannot read {path}: {exc.strerror or exc}"))
    except (ParseError, SchemaError) as exc:
        raise SystemExit(_fail(f"{path}: {exc}"))


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _emit(args, payload: dict, human: str) -> None:
    if args.format == STRUCTURED:
        print(json.dumps(payload, indent=2))
    else:
        print(human)


# -- validate ---------------------------------------------------------------


def cmd_validate(args) -> int:
    graph = _load_scenario(args.scenario)
    report = validate(graph, _load_registry(args))
    if args.format == STRUCTURED:
        print(json.dumps(report.to_json(), indent=2))
    else:
        for finding in report.findings:
            nodes = ",".join(finding.node_ids)
            print(f"{finding.severity.upper():7s} {finding.rule_id} [{nodes}] {finding.message}")
        verdict = "valid" if report.is_valid else "invalid"
        print(f"{graph.name}: {verdict} "
              f"({len(report.errors())} error(s), {len(report.warnings())} warning(s))")
    failed = not report.is_valid or (args.strict and report.warnings())
    return EXIT_SCENARIO if failed else EXIT_OK


# -- export -----------------------------------------------------------------


def cmd_export(args) -> int:
    graph = _load_scenario(args.scenario)
    options = ExportOptions(
        catalog_locations=(ExportOptions.parse_catalog_spec(args.catalog_locations)
                           if args.catalog_locations else ()),
        parameterize=tuple(args.parameterize or ()),
    )
    try:
        document = export(graph, options, _load_registry(args))
    except ScenarioError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    out = Path(args.out)
    out.write_bytes(document.text.encode("utf-8"))
    structure = verify_structure(document)
    _emit(args, {"out": str(out), "structure_ok": structure.ok},
          f"wrote {out} (structure {'ok' if structure.ok else 'BROKEN'})")
    return EXIT_OK if structure.ok else EXIT_SCENARIO


# -- run / sweep ------------------------------------------------------------


def _concretize_for_run(graph, args, registry):
    level = concretize.classify_level(graph, registry)
    if level.name == "Concrete":
        return graph
    plan_ = concretize.plan(graph, registry)
    if args.index is not None:
        return concretize.enumerate_variant(graph, plan_, args.index, registry)
    if args.seed is not None:
        return concretize.sample(graph, plan_, args.seed, registry)
    raise LevelError(
        f"{graph.name} is {level.name}; pass --index or --seed to concretize"
    )


def cmd_run(args) -> int:
    graph = _load_scenario(args.scenario)
    registry = _load_registry(args)
    try:
        config = TickConfig(dt=args.dt, max_time=args.max_time, seed=args.seed or 0)
        concrete = _concretize_for_run(graph, args, registry)
        trace = run(concrete, config, registry)
    except (InvalidConfig, OutOfRange) as exc:
        return _fail(str(exc))
    except ScenarioError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    if args.out:
        Path(args.out).write_text(trace.to_text(args.stride), encoding="utf-8")
    summary = trace.outcome.to_json()
    human = trace.outcome.kind
    if trace.outcome.kind == "Collision":
        human = f"Collision({trace.outcome.pair[0]},{trace.outcome.pair[1]}) at t={trace.outcome.time}"
    elif trace.outcome.kind == "Completed":
        human = f"Completed at t={trace.outcome.completion_time}"
    _emit(args, summary, human)
    return EXIT_OK


def sweep_rows(graph, config: TickConfig, registry: Registry, jobs: int = 1):
    """Outcome of every enumerated variant, ordered by index."""
    plan_ = concretize.plan(graph, registry)

    def one(index: int) -> dict:
        variant = concretize.enumerate_variant(graph, plan_, index, registry)
        trace = run(variant, config, registry)
        out = trace.outcome
        kind = out.kind
        if kind == "Collision":
            kind = f"Collision({out.pair[0]},{out.pair[1]})"
        time = out.completion_time if out.kind == "Completed" else out.time
        return {
            "index": index,
            "outcome": kind,
            "min_distance": out.min_distance,
            "completion_time": time,
        }

    indices = range(plan_.total_count)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, indices))
    return [one(i) for i in indices]


def format_sweep_table(rows) -> str:
    lines = ["index,outcome,min_distance,completion_time"]
    for row in rows:
        min_distance = "" if row["min_distance"] is None else repr(row["min_distance"])
        time = "" if row["completion_time"] is None else repr(row["completion_time"])
        lines.append(f"{row['index']},{row['outcome']},{min_distance},{time}")
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    graph = _load_scenario(args.scenario)
    registry = _load_registry(args)
    try:
        config = TickConfig(dt=args.dt, max_time=args.max_time)
        rows = sweep_rows(graph, config, registry, jobs=args.jobs)
    except LevelError as exc:
        print(f"error: LevelError: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except ScenarioError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    table = format_sweep_table(rows)
    if args.format == STRUCTURED:
        print(json.dumps(rows, indent=2))
    else:
        print(table, end="")
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "sweep.csv").write_text(table, encoding="utf-8")
        plan_ = concretize.plan(graph, registry)
        for row in rows:
            variant = concretize.enumerate_variant(graph, plan_, row["index"], registry)
            save_scenario(variant, out_dir / f"variant_{row['index']:04d}.json")
    return EXIT_OK


# -- library ----------------------------------------------------------------


def cmd_lib(args) -> int:
    catalog = Path(args.catalog)
    if args.lib_command == "add":
        try:
            with open(args.module, "r", encoding="utf-8") as handle:
                module = library.module_from_document(json.load(handle))
        except OSError as exc:
            return _fail(f"cannot read {args.module}: {exc.strerror or exc}")
        except (json.JSONDecodeError, SchemaError) as exc:
            return _fail(f"{args.module}: {exc}")
        revision = library.library_save(module, catalog)
        _emit(args, {"name": module.name, "revision": revision},
              f"{module.name} {revision}")
        return EXIT_OK
    if args.lib_command == "list":
        entries = library.library_list(catalog)
        if args.format == STRUCTURED:
            print(json.dumps(entries, indent=2))
        else:
            for entry in entries:
                roles = ",".join(entry["roles"])
                print(f"{entry['name']} {entry['revision']} roles={roles}")
        return EXIT_OK
    # show
    try:
        module = library.library_load(catalog, args.name, args.revision)
    except NotFound as exc:
        return _fail(str(exc))
    print(json.dumps(library.module_document(module), indent=2))
    return EXIT_OK


# -- serve ------------------------------------------------------------------


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        workspace=Path(args.workspace),
        catalog=Path(args.catalog),
        registry=_load_registry(args),
        allow_origins=[args.allow_origin],
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scenograph",
        description="Model, validate, concretize, export, and execute scenario graphs.",
    )
    parser.add_argument("--config", help="registry override config (JSON)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=[HUMAN, STRUCTURED], default=HUMAN)
        p.add_argument("--config", help="registry override config (JSON)")

    p = sub.add_parser("validate", help="run the rule suite on a scenario file")
    p.add_argument("scenario")
    p.add_argument("--strict", action="store_true",
                   help="treat warnings as errors for the exit code")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("export", help="emit an OpenSCENARIO file")
    p.add_argument("scenario")
    p.add_argument("--out", required=True)
    p.add_argument("--catalog-locations",
                   help='catalog paths, e.g. "Vehicle=../catalogs,Pedestrian=./peds"')
    p.add_argument("--parameterize", action="append", metavar="NODE:PARAM",
                   help="emit this scalar as an OpenSCENARIO parameter")
    common(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("run", help="execute a scenario and print its outcome")
    p.add_argument("scenario")
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--max-time", type=float, default=60.0)
    p.add_argument("--index", type=int, help="concretize a logical scenario by index")
    p.add_argument("--seed", type=int, help="concretize a logical scenario by sampling")
    p.add_argument("--out", help="write the trace (JSON)")
    p.add_argument("--stride", type=int, default=1, help="state sampling stride in the trace")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run every enumerated variant of a logical scenario")
    p.add_argument("scenario")
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--max-time", type=float, default=60.0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-dir", help="write sweep.csv and the variant scenario files")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("lib", help="module catalog operations")
    libsub = p.add_subparsers(dest="lib_command", required=True)
    p_add = libsub.add_parser("add")
    p_add.add_argument("module", help="module definition file (JSON)")
    p_list = libsub.add_parser("list")
    p_show = libsub.add_parser("show")
    p_show.add_argument("name")
    p_show.add_argument("--revision")
    catalog_default = os.environ.get("SCENOGRAPH_CATALOG", "catalog")
    for lp in (p_add, p_list, p_show):
        lp.add_argument("--catalog", default=catalog_default)
        common(lp)
    p.set_defaults(func=cmd_lib)

    p = sub.add_parser("serve", help="start the HTTP service for the editor")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8036)
    p.add_argument("--workspace", default="workspace")
    p.add_argument("--catalog", default=catalog_default)
    p.add_argument("--allow-origin", default="*")
    common(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> None:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except SystemExit:
        raise
    except ScenarioError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        code = EXIT_SCENARIO
    sys.exit(code)


if __name__ == "__main__":
    main()
