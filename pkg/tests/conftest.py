"""
Test configuration and fixtures for the xxz code tools.

Fixtures build small groups and code specs; the random spec factory draws
well-formed specs (commuting matrix sets) from a fixed seed.
"""
from __future__ import annotations

import sys
from pathlib import Path
from typing import Callable

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "xxz" / "src"))

from group_algebra import (  # noqa: E402
    AlgebraElement,
    AlgebraMatrix,
    BinaryMatrix,
    ModularMatrix,
    WeightedAlgebraElement,
    identity_matrix,
    matrix_power,
    weighted_from_counts,
)
from group_core import (  # noqa: E402
    FiniteGroup,
    dihedral_group,
    make_cyclic,
    make_torus,
    symmetric_group,
)
from pauli_symplectic import (  # noqa: E402
    CodeSpec,
    Generator,
    GeneratorKind,
    PauliOperator,
    QuditCodeSpec,
    StabilizerSet,
)
from presets import haah_a  # noqa: E402


def _small_groups() -> list[FiniteGroup]:
    return [
        make_cyclic(2),
        make_cyclic(5),
        make_cyclic(6),
        make_cyclic(12),
        make_torus(2, 2),
        make_torus(2, 3),
        make_torus(3, 3),
        make_torus(2, 2, 2),
        symmetric_group(3),
        dihedral_group(4),
        symmetric_group(4),
    ]


def _random_subset(group: FiniteGroup, rng: np.random.Generator) -> AlgebraElement:
    flags = rng.random(group.order) < 0.3
    if not flags.any():
        flags[rng.integers(group.order)] = True
    return AlgebraElement.from_indices(group, np.flatnonzero(flags))


def _random_qubit_spec(rng: np.random.Generator) -> CodeSpec:
    groups = _small_groups()
    group = groups[int(rng.integers(len(groups)))]
    q = int(rng.integers(1, 4))
    A = tuple(_random_subset(group, rng) for _ in range(q))
    B = tuple(_random_subset(group, rng) for _ in range(q))
    if group.is_abelian and rng.random() < 0.3:
        seed = AlgebraMatrix.of(group, [[_random_subset(group, rng) for _ in range(q)] for _ in range(q)])
        matrices = (identity_matrix(q, group=group), seed, matrix_power(seed, 2))
    else:
        seed = BinaryMatrix(rng.integers(0, 2, size=(q, q)))
        matrices = (identity_matrix(q), seed, matrix_power(seed, 2))
    return CodeSpec(group=group, q=q, A=A, B=B, matrices=matrices)


def _modular_square(matrix: ModularMatrix) -> ModularMatrix:
    square = matrix_power(matrix, 2)
    assert isinstance(square, ModularMatrix)
    return square


def _random_qudit_spec(rng: np.random.Generator, d: int) -> QuditCodeSpec:
    groups = [group for group in _small_groups() if group.order <= 8]
    group = groups[int(rng.integers(len(groups)))]
    q = int(rng.integers(1, 3))

    def _weighted() -> WeightedAlgebraElement:
        coeffs = rng.integers(0, d, size=group.order) * (rng.random(group.order) < 0.4)
        return WeightedAlgebraElement(group, d, coeffs)

    seed = ModularMatrix(rng.integers(0, d, size=(q, q)), d)
    return QuditCodeSpec(
        group=group,
        q=q,
        d=d,
        A=tuple(_weighted() for _ in range(q)),
        B=tuple(_weighted() for _ in range(q)),
        matrices=(ModularMatrix.identity(q, d), seed, _modular_square(seed)),
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def s3() -> FiniteGroup:
    return symmetric_group(3)


@pytest.fixture
def haah_a_2() -> CodeSpec:
    return haah_a(2)


@pytest.fixture
def random_qubit_spec() -> Callable[[np.random.Generator], CodeSpec]:
    return _random_qubit_spec


@pytest.fixture
def random_qudit_spec() -> Callable[[np.random.Generator, int], QuditCodeSpec]:
    return _random_qudit_spec


@pytest.fixture
def obstructed_stabilizers() -> StabilizerSet:
    """XX, ZZ and -(XZ)(XZ) with the identity: pairwise commuting, product -I."""
    group = make_cyclic(1)
    unit = weighted_from_counts(group, 2, {0: 1})
    spec = QuditCodeSpec(
        group=group,
        q=1,
        d=2,
        A=(unit,),
        B=(unit,),
        matrices=(ModularMatrix.of([[1]], 2), ModularMatrix.of([[1]], 2)),
    )
    operators = [
        PauliOperator(np.array([1, 1]), np.array([0, 0])),
        PauliOperator(np.array([0, 0]), np.array([1, 1])),
        PauliOperator(np.array([1, 1]), np.array([1, 1]), phase_exp=1),
        PauliOperator.identity(2),
    ]
    kinds = [GeneratorKind.U, GeneratorKind.V, GeneratorKind.U, GeneratorKind.V]
    return StabilizerSet(
        spec,
        tuple(
            Generator(operator, 0, kind, index // 2)
            for index, (operator, kind) in enumerate(zip(operators, kinds))
        ),
    )
