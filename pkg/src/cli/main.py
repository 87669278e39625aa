"""
Command-line interface.

Commands mirror the generation steps; each reads and writes the documented
file formats, and ``pipeline`` chains them in one process:

    convert        CityGML -> serialized model graph
    ingest         dataset file -> serialized data graph
    apply          model + data graphs + technique -> abstract graph
    layout         model + abstract graph + technique -> scene (JSON Lines)
    emit           model + scene + technique -> X3D / X3DOM document
    pipeline       all of the above from one config file
    make-fixtures  synthetic city, datasets, techniques and configs

Diagnostics and timings go to stderr; stdout carries only results.
"""

import argparse
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from src.cli.fixtures import make_fixtures
from src.cli.stages import (
    apply_stage,
    convert_model,
    count_triples,
    dataset_name,
    emit_stage,
    ingest_dataset,
    layout_stage,
    load_model_text,
    write_text,
)
from src.config.pipeline_config import (
    PipelineConfig,
    apply_overrides,
    default_prefixes,
    parse_type_iri,
    read_pipeline_config,
    resolve_technique,
    split_overrides,
)
from src.core import StageReport, get_stage_executor, reset
from src.datasets import DATA_KINDS
from src.errors import CityVizError, ConfigError
from src.logging import dump_log_buffer, logger, set_log_level
from src.techniques import read_technique

FORMATS = ("x3d", "x3dom")


def _technique(args):
    """Technique named on the command line with its ``--param`` overrides."""
    path = resolve_technique(args.technique, Path.cwd())
    if not path.is_file():
        raise ConfigError(f"technique file not found: {args.technique}")
    layout, emit = split_overrides(args.param or [])
    return apply_overrides(read_technique(path), layout, emit)


def _read(path, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read {what} {path}: {e.strerror}") from None


# ============================================================================
# Staged commands
# ============================================================================


def cmd_convert(args) -> int:
    text = convert_model(args.model)
    write_text(args.out, text)
    print(count_triples(text))
    return 0


def cmd_ingest(args) -> int:
    type_iri = parse_type_iri(args.type)
    id_prefix, loc_prefix = default_prefixes(dataset_name(args.out), args.id_prefix, args.loc_prefix)
    model_text = load_model_text(args.model) if args.model else None
    text = ingest_dataset(
        args.data, args.kind, type_iri, id_prefix, loc_prefix,
        dictionary=args.dict, regions=args.regions, model_text=model_text,
    )
    write_text(args.out, text)
    print(count_triples(text))
    return 0


def cmd_apply(args) -> int:
    spec = _technique(args)
    model_text = load_model_text(args.model)
    datasets = [(dataset_name(path), _read(path, "data graph")) for path in args.data]
    text, count = apply_stage(model_text, datasets, spec)
    write_text(args.out, text)
    print(count)
    return 0


def cmd_layout(args) -> int:
    spec = _technique(args)
    text, count = layout_stage(load_model_text(args.model), _read(args.abstract, "abstract graph"), spec)
    write_text(args.out, text)
    print(count)
    return 0


def cmd_emit(args) -> int:
    spec = _technique(args)
    text = emit_stage(load_model_text(args.model), _read(args.scene, "scene"), spec, args.format)
    write_text(args.out, text)
    return 0


def cmd_make_fixtures(args) -> int:
    written = make_fixtures(args.out, args.buildings)
    for label in written:
        print(label)
    return 0


# ============================================================================
# Pipeline
# ============================================================================


def register_pipeline(config: PipelineConfig, spec) -> None:
    """Register the five stages on the global executor; they share one state dict."""
    reset()
    executor = get_stage_executor()

    def convert(state: Dict[str, Any]):
        state["model"] = load_model_text(config.model)
        return {"triples": count_triples(state["model"])}

    def ingest(state: Dict[str, Any]):
        state["datasets"] = []
        total = 0
        for entry in config.datasets:
            id_prefix, loc_prefix = entry.prefixes()
            text = ingest_dataset(
                entry.path, entry.kind, entry.type_iri, id_prefix, loc_prefix,
                dictionary=entry.dictionary, regions=entry.regions, model_text=state["model"],
            )
            state["datasets"].append((entry.name, text))
            total += count_triples(text)
        return {"datasets": len(config.datasets), "triples": total}

    def apply(state: Dict[str, Any]):
        state["abstract"], count = apply_stage(state["model"], state["datasets"], spec)
        return {"triples": count_triples(state["abstract"]), "abstract_nodes": count}

    def layout(state: Dict[str, Any]):
        state["scene"], count = layout_stage(state["model"], state["abstract"], spec)
        return {"scene_nodes": count}

    def emit(state: Dict[str, Any]):
        text = emit_stage(state["model"], state["scene"], spec, config.format)
        partial = config.output.with_name(config.output.name + ".part")
        try:
            write_text(partial, text)
            os.replace(partial, config.output)
        finally:
            if partial.exists():
                partial.unlink()
        return {"bytes": len(text.encode("utf-8"))}

    for name, func in (("convert", convert), ("ingest", ingest), ("apply", apply), ("layout", layout), ("emit", emit)):
        executor.register_stage(name, func)


def run_pipeline(config: PipelineConfig) -> List[StageReport]:
    """
    Check the config, then run every stage in order.

    Raises:
        ConfigError: Before any stage runs, on missing files or bad overrides
        CityVizError: From the first failing stage
    """
    config.check_paths()
    spec = config.technique_spec()
    register_pipeline(config, spec)
    logger.info(f"🚀 Pipeline '{spec.name}' -> {config.output}")
    return get_stage_executor().run_all({})


def cmd_pipeline(args) -> int:
    config = read_pipeline_config(args.config)
    reports = run_pipeline(config)
    for report in reports:
        print(report.summary(), file=sys.stderr)
    print(config.output)
    return 0


# ============================================================================
# Argument parsing
# ============================================================================


def _add_technique(parser) -> None:
    parser.add_argument("--technique", required=True, help="Technique file or built-in technique name")
    parser.add_argument(
        "--param", action="append", metavar="SECTION.KEY=VALUE",
        help="Override a technique parameter, e.g. layout.cone-base-radius=2 (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="city-viz-forge",
        description="Generate information visualization prototypes inside 3D city models",
    )
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    parser.add_argument("--log-file", help="Write the buffered log to this file after the run")
    commands = parser.add_subparsers(dest="command", required=True)

    convert = commands.add_parser("convert", help="Convert a CityGML model to a graph file")
    convert.add_argument("--model", required=True, help="CityGML file")
    convert.add_argument("--out", required=True, help="Graph file to write")
    convert.set_defaults(handler=cmd_convert)

    ingest = commands.add_parser("ingest", help="Turn a dataset into a graph file")
    ingest.add_argument("--data", required=True, help="CSV table or grid field file")
    ingest.add_argument("--kind", required=True, choices=DATA_KINDS)
    ingest.add_argument("--type", required=True, help="Data element type, e.g. :PedestrianCounting")
    ingest.add_argument("--dict", help="Reference dictionary (object and relation data)")
    ingest.add_argument("--regions", help="Region side file (region data)")
    ingest.add_argument("--model", help="City model (CityGML or graph) to check references against")
    ingest.add_argument("--id-prefix", help="Data element IRI prefix (default: output file stem)")
    ingest.add_argument("--loc-prefix", help="Location IRI prefix (default: <id-prefix>-loc)")
    ingest.add_argument("--out", required=True, help="Graph file to write")
    ingest.set_defaults(handler=cmd_ingest)

    apply = commands.add_parser("apply", help="Apply a technique to the model and data graphs")
    apply.add_argument("--model", required=True, help="City model (CityGML or graph)")
    apply.add_argument("--data", required=True, action="append", help="Data graph file (repeatable)")
    _add_technique(apply)
    apply.add_argument("--out", required=True, help="Abstract graph file to write")
    apply.set_defaults(handler=cmd_apply)

    layout = commands.add_parser("layout", help="Lay out an abstract graph as a concrete scene")
    layout.add_argument("--model", required=True, help="City model (CityGML or graph)")
    layout.add_argument("--abstract", required=True, help="Abstract graph file")
    _add_technique(layout)
    layout.add_argument("--out", required=True, help="Scene file to write")
    layout.set_defaults(handler=cmd_layout)

    emit = commands.add_parser("emit", help="Emit a scene as an X3D or X3DOM document")
    emit.add_argument("--model", required=True, help="City model (CityGML or graph)")
    emit.add_argument("--scene", required=True, help="Scene file")
    _add_technique(emit)
    emit.add_argument("--format", choices=FORMATS, default="x3dom")
    emit.add_argument("--out", required=True, help="Document to write")
    emit.set_defaults(handler=cmd_emit)

    pipeline = commands.add_parser("pipeline", help="Run every stage from a config file")
    pipeline.add_argument("config", help="Pipeline config file")
    pipeline.set_defaults(handler=cmd_pipeline)

    fixtures = commands.add_parser("make-fixtures", help="Write a synthetic city with sample data")
    fixtures.add_argument("--out", required=True, help="Directory to write into")
    fixtures.add_argument("--buildings", type=int, default=4, help="Number of buildings (default: 4)")
    fixtures.set_defaults(handler=cmd_make_fixtures)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one command.

    Returns:
        Exit status: 0 success, 2 input or usage error, 3 internal error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    if args.debug:
        set_log_level("DEBUG")

    try:
        return args.handler(args)
    except CityVizError as e:
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.error(f"❌ Unexpected error: {e}", exc_info=True)
        return 3
    finally:
        if args.log_file:
            dump_log_buffer(args.log_file)


__all__ = ["build_parser", "main", "register_pipeline", "run_pipeline"]
