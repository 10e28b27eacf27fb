"""
Reading and writing code-spec files.

A spec file is TOML (.toml) or JSON. Element references are torus words ("x", "xy",
"x^-1y", "-y"), element names of the group, or integer indices.
"""

from __future__ import annotations

import hashlib
import json
import tomllib
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
from pydantic import ValidationError

from group_algebra import (
    AlgebraElement,
    AlgebraMatrix,
    BinaryMatrix,
    ModularMatrix,
    WeightedAlgebraElement,
    empty,
    subset,
    weighted_from_counts,
)
from group_core import (
    FiniteGroup,
    dihedral_group,
    make_cyclic,
    make_torus,
    read_cayley_file,
    symmetric_group,
    write_cayley_file,
)
from pauli_symplectic import AnySpec, CodeSpec, NonCommutingMatricesError, QuditCodeSpec
from schemas import GroupBlock, GroupKind, SpecFile


class SpecFileError(ValueError):
    def __init__(self, path: str, location: str, message: str) -> None:
        super().__init__(f"{path}: {location}: {message}")
        self.path = path
        self.location = location
        self.message = message


def parse_spec(path: Path, size: Optional[int] = None) -> AnySpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecFileError(str(path), "file", str(exc)) from exc
    return load_spec_document(text, path.suffix, path.parent, source=str(path), size=size)


def _decode(text: str, suffix: str, source: str) -> Any:
    if suffix.lower() == ".toml":
        try:
            return tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise SpecFileError(source, "syntax", str(exc)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(source, f"line {exc.lineno}, column {exc.colno}", exc.msg) from exc


def load_spec_document(
    text: str,
    suffix: str,
    base_dir: Path,
    source: str = "<spec>",
    size: Optional[int] = None,
) -> AnySpec:
    document = _decode(text, suffix, source)
    try:
        model = SpecFile.model_validate(document)
    except ValidationError as exc:
        error = exc.errors()[0]
        location = ".".join(str(part) for part in error["loc"]) or "document"
        raise SpecFileError(source, location, error["msg"]) from exc
    return spec_from_model(model, base_dir, source, size)


def _build_group(block: GroupBlock, base_dir: Path, source: str, size: Optional[int]) -> FiniteGroup:
    dims, order, degree, path = block.dims, block.order, block.degree, block.path
    try:
        if block.kind is GroupKind.TORUS and dims is not None:
            return make_torus(*([size] * len(dims) if size else dims))
        if block.kind is GroupKind.CYCLIC and order is not None:
            return make_cyclic(size or order)
        if block.kind is GroupKind.SYMMETRIC and degree is not None:
            return symmetric_group(degree)
        if block.kind is GroupKind.DIHEDRAL and degree is not None:
            return dihedral_group(degree)
        if block.kind is GroupKind.CAYLEY and path is not None:
            return read_cayley_file(base_dir / path)
        raise ValueError(f"group kind '{block.kind.value}' is missing its parameters")
    except (ValueError, OSError) as exc:
        raise SpecFileError(source, "group", str(exc)) from exc


def _resolve(group: FiniteGroup, reference: Union[int, str], source: str, location: str) -> int:
    try:
        return group.element(reference).index
    except ValueError as exc:
        raise SpecFileError(source, location, str(exc)) from exc


def _subset(group: FiniteGroup, entry: Any, source: str, location: str) -> AlgebraElement:
    if isinstance(entry, dict):
        counts = {_resolve(group, name, source, f"{location}.{name}"): count for name, count in entry.items()}
        return AlgebraElement.from_indices(group, [index for index, count in counts.items() if count % 2])
    indices = [_resolve(group, reference, source, f"{location}[{position}]") for position, reference in enumerate(entry)]
    if len(set(indices)) != len(indices):
        raise SpecFileError(source, location, "duplicate element in subset")
    return subset(group, indices)


def _multiset(group: FiniteGroup, d: int, entry: Any, source: str, location: str) -> WeightedAlgebraElement:
    if isinstance(entry, dict):
        counts = {}
        for name, count in entry.items():
            if not 1 <= count < d:
                raise SpecFileError(source, f"{location}.{name}", f"multiplicity must lie in 1..{d - 1}")
            counts[_resolve(group, name, source, f"{location}.{name}")] = count
        return weighted_from_counts(group, d, counts)
    members = _subset(group, entry, source, location)
    return weighted_from_counts(group, d, {int(index): 1 for index in members.indices()})


def _matrix(group: FiniteGroup, d: int, rows: list[list[Any]], q: int, source: str, location: str):
    if len(rows) != q or any(len(row) != q for row in rows):
        raise SpecFileError(source, location, f"expected a {q}x{q} matrix")
    algebra = any(isinstance(entry, list) for row in rows for entry in row)
    try:
        if algebra:
            if d != 2:
                raise SpecFileError(source, location, "algebra-valued matrices are only supported for qubits")
            unit = subset(group, [group.identity])
            entries = [
                [
                    _subset(group, entry, source, f"{location}[{i}][{j}]")
                    if isinstance(entry, list)
                    else (unit if entry % 2 else empty(group))
                    for j, entry in enumerate(row)
                ]
                for i, row in enumerate(rows)
            ]
            return AlgebraMatrix.of(group, entries)
        if d == 2:
            return BinaryMatrix.of(rows)
        return ModularMatrix.of(rows, d)
    except SpecFileError:
        raise
    except ValueError as exc:
        raise SpecFileError(source, location, str(exc)) from exc


def spec_from_model(model: SpecFile, base_dir: Path, source: str = "<spec>", size: Optional[int] = None) -> AnySpec:
    group = _build_group(model.group, base_dir, source, size)
    q, d = model.q, model.d
    for name, sets in (("A", model.A), ("B", model.B)):
        if len(sets) != q:
            raise SpecFileError(source, name, f"expected {q} sets, found {len(sets)}")
    matrices = [_matrix(group, d, rows, q, source, f"matrices[{index}]") for index, rows in enumerate(model.matrices)]
    try:
        if d == 2:
            return CodeSpec(
                group=group,
                q=q,
                A=tuple(_subset(group, entry, source, f"A[{k}]") for k, entry in enumerate(model.A)),
                B=tuple(_subset(group, entry, source, f"B[{k}]") for k, entry in enumerate(model.B)),
                matrices=tuple(matrices),
                allow_noncommuting=not model.check_matrices,
            )
        return QuditCodeSpec(
            group=group,
            q=q,
            d=d,
            A=tuple(_multiset(group, d, entry, source, f"A[{k}]") for k, entry in enumerate(model.A)),
            B=tuple(_multiset(group, d, entry, source, f"B[{k}]") for k, entry in enumerate(model.B)),
            matrices=tuple(matrices),
            allow_noncommuting=not model.check_matrices,
        )
    except NonCommutingMatricesError as exc:
        first, second = exc.pair
        raise SpecFileError(source, f"matrices[{first}], matrices[{second}]", str(exc)) from exc
    except SpecFileError:
        raise
    except ValueError as exc:
        raise SpecFileError(source, "spec", str(exc)) from exc


def _is_cyclic(group: FiniteGroup) -> bool:
    indices = np.arange(group.order)
    return group.names() == tuple(f"g^{index}" for index in indices) and bool(
        np.array_equal(group.cayley, (indices[:, None] + indices[None, :]) % group.order)
    )


def _group_document(group: FiniteGroup, cayley_path: Optional[str]) -> dict[str, Any]:
    if group.torus_dims:
        return {"kind": GroupKind.TORUS.value, "dims": list(group.torus_dims)}
    if _is_cyclic(group):
        return {"kind": GroupKind.CYCLIC.value, "order": group.order}
    if cayley_path is None:
        raise ValueError("this group is only expressible through a Cayley table file")
    return {"kind": GroupKind.CAYLEY.value, "path": cayley_path}


def spec_to_document(spec: AnySpec, cayley_path: Optional[str] = None) -> dict[str, Any]:
    document: dict[str, Any] = {"group": _group_document(spec.group, cayley_path), "q": spec.q, "d": spec.modulus}
    if isinstance(spec, QuditCodeSpec):
        document["A"] = [entry.counts() for entry in spec.A]
        document["B"] = [entry.counts() for entry in spec.B]
    else:
        document["A"] = [entry.names() for entry in spec.A]
        document["B"] = [entry.names() for entry in spec.B]
    matrices: list[Any] = []
    for matrix in spec.matrices:
        if isinstance(matrix, AlgebraMatrix):
            matrices.append([[entry.names() for entry in row] for row in matrix.entries])
        else:
            matrices.append(matrix.tolist())
    document["matrices"] = matrices
    if spec.allow_noncommuting:
        document["check_matrices"] = False
    return document


def write_spec(spec: AnySpec, path: Path) -> None:
    """Writes a JSON spec file; groups without a compact description get a Cayley table next to it."""
    path = Path(path)
    cayley_path = None
    if not spec.group.torus_dims and not _is_cyclic(spec.group):
        table = path.with_name(f"{path.stem}.cayley.txt")
        write_cayley_file(spec.group, table)
        cayley_path = table.name
    path.write_text(json.dumps(spec_to_document(spec, cayley_path), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def spec_fingerprint(spec: AnySpec) -> str:
    document = spec_to_document(spec, cayley_path="-")
    digest = hashlib.sha256()
    digest.update(json.dumps(document, sort_keys=True).encode("utf-8"))
    digest.update(np.ascontiguousarray(spec.group.cayley).tobytes())
    digest.update(json.dumps(list(spec.group.names())).encode("utf-8"))
    return digest.hexdigest()
