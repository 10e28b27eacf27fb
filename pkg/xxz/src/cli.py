from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from pydantic import BaseModel

import settings
from activity import RunAction, RunComponent, log_event, run_metadata
from code_analysis import (
    CommutationError,
    PhaseObstructionError,
    degeneracy_sweep,
    locality_check,
    logical_qubit_count,
    verify_commutation,
)
from linalg_f2 import CompositeModulusError
from metric import UNREACHABLE, ball, distances_from, metric_sets_from_spec
from oracle import OracleCapError, OracleCommutationError, ground_space_dim_dense
from pauli_symplectic import AnySpec, build_stabilizers
from presets import PRESETS, build_preset, parse_parameters
from schemas import BallResult, DistanceResult, OracleResult
from spec_files import parse_spec, spec_fingerprint


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=settings.LOG_LEVEL, stream=sys.stderr, format="%(message)s")
    try:
        return _run(args)
    except (CommutationError, PhaseObstructionError, CompositeModulusError, OracleCapError, OracleCommutationError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Build and analyse generalized Haah stabilizer codes over finite groups.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def _command(name: str, help_text: str) -> argparse.ArgumentParser:
        command = subparsers.add_parser(name, help=help_text)
        command.add_argument("target", help=f"preset ({', '.join(sorted(PRESETS))}) or spec file path")
        command.add_argument("--size", help="preset parameters, e.g. 4 or 6:2:4; resizes a spec file's group")
        command.add_argument("--format", choices=("tsv", "json"), default="tsv")
        return command

    _command("verify", "check that every pair of generators commutes")
    _command("degeneracy", "logical qudit count k = N - rank")
    sweep = _command("sweep", "logical counts over a list of sizes")
    sweep.add_argument("--sizes", required=True, help="comma-separated parameter tuples, e.g. 2,4,8 or 6:2:4,7:2:4")
    _command("locality", "largest word-metric distance from a generator's site to its support")
    distance = _command("metric", "word-metric distance between two elements")
    distance.add_argument("--from", dest="source", required=True)
    distance.add_argument("--to", dest="destination", required=True)
    neighbourhood = _command("ball", "elements within a radius of a center")
    neighbourhood.add_argument("--center", required=True)
    neighbourhood.add_argument("--radius", type=int, required=True)
    _command("oracle", "dense ground-space dimension for small codes")
    return parser


def load_target(target: str, size: str | None) -> AnySpec:
    parameters = parse_parameters(size) if size else None
    if target in PRESETS:
        return build_preset(target, parameters)
    path = Path(target)
    if not path.exists():
        raise ValueError(f"'{target}' is neither a preset nor a spec file")
    if parameters is not None and len(parameters) != 1:
        raise ValueError("spec files take a single --size")
    return parse_spec(path, size=parameters[0] if parameters else None)


def _run(args: argparse.Namespace) -> int:
    if args.command == "sweep":
        parameters = [parse_parameters(part) for part in args.sizes.split(",") if part]
        rows = degeneracy_sweep(args.target, parameters)
        header = run_metadata(args.command, args.target)
        records = [_sweep_record(row) for row in rows]
        _emit(args.format, header, records, [row.model_dump(mode="json") for row in rows])
        return EXIT_FAILED if any(row.error for row in rows) else EXIT_OK

    spec = load_target(args.target, args.size)
    header = run_metadata(args.command, _target_label(args), spec_fingerprint(spec))
    if args.command == "verify":
        report = verify_commutation(build_stabilizers(spec))
        for violation in report.violations:
            print(
                f"violation: {violation.first_label} vs {violation.second_label} (value {violation.value})",
                file=sys.stderr,
            )
        record = {
            "total_pairs": report.total_pairs,
            "pairs_checked": report.pairs_checked,
            "violations": len(report.violations),
        }
        _emit(args.format, header, [record], report.model_dump(mode="json"))
        return EXIT_OK if report.ok else EXIT_FAILED
    if args.command == "degeneracy":
        result = logical_qubit_count(spec)
        _emit_model(args.format, header, result)
    elif args.command == "locality":
        locality = locality_check(spec)
        _emit_model(args.format, header, locality)
        return EXIT_FAILED if locality.disconnected else EXIT_OK
    elif args.command == "metric":
        ms = metric_sets_from_spec(spec)
        source, destination = spec.group.element(args.source), spec.group.element(args.destination)
        value = int(distances_from(ms, destination)[source.index])
        _emit_model(
            args.format,
            header,
            DistanceResult(source=source.name, target=destination.name, distance=None if value == UNREACHABLE else value),
        )
    elif args.command == "ball":
        ms = metric_sets_from_spec(spec)
        center = spec.group.element(args.center)
        members = sorted(ball(ms, center, args.radius), key=lambda element: element.index)
        _emit_model(
            args.format,
            header,
            BallResult(center=center.name, radius=args.radius, elements=[element.name for element in members]),
        )
    else:
        stabilizers = build_stabilizers(spec)
        dimension = ground_space_dim_dense(stabilizers)
        prediction = None
        try:
            prediction = spec.modulus ** logical_qubit_count(stabilizers).logical_count
        except ValueError as exc:
            log_event(RunComponent.CLI, RunAction.REFUSED, str(exc), command="oracle", output="rank_prediction")
        _emit_model(
            args.format,
            header,
            OracleResult(
                n_qudits=stabilizers.n_qubits,
                modulus=spec.modulus,
                ground_space_dim=dimension,
                rank_prediction=prediction,
            ),
        )
    return EXIT_OK


def _target_label(args: argparse.Namespace) -> str:
    return f"{args.target}:{args.size}" if args.size else args.target


def _sweep_record(row: Any) -> dict[str, Any]:
    record: dict[str, Any] = dict(row.parameters)
    result = row.result
    record["n_qubits"] = result.n_qubits if result else None
    record["rank"] = result.rank if result else None
    record["logical_count"] = result.logical_count if result else None
    record.update(row.annotations)
    record["error"] = row.error
    return record


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".6g")
    if isinstance(value, list):
        return ",".join(_cell(item) for item in value)
    return str(value)


def _emit_model(output_format: str, header: str, model: BaseModel) -> None:
    payload = model.model_dump(mode="json")
    _emit(output_format, header, [payload], payload)


def _emit(output_format: str, header: str, records: list[dict[str, Any]], payload: Any) -> None:
    if output_format == "json":
        print(json.dumps({"metadata": header.lstrip("# "), "result": payload}, indent=2, sort_keys=True))
        return
    columns: list[str] = []
    for record in records:
        columns.extend(column for column in record if column not in columns)
    print(header)
    print("\t".join(columns))
    for record in records:
        print("\t".join(_cell(record.get(column)) for column in columns))


if __name__ == "__main__":
    raise SystemExit(main())
