"""
Brute-force checks on the full d^N basis, for small codes only.

A Pauli w^c X^x Z^z sends basis state |b> to w^(c + z.b) |b - x>, so every operator
here is a phase-carrying permutation of basis indices and all sums are integer
counts of roots of unity. Basis index b has digit (b // d^j) % d on qudit j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

import settings
from activity import RunAction, RunComponent, log_event
from linalg_f2 import is_prime
from pauli_symplectic import PauliOperator, StabilizerSet


class OracleCapError(ValueError):
    pass


class OracleCommutationError(ValueError):
    def __init__(self, first: int, second: int, phase: int) -> None:
        super().__init__(f"generators {first} and {second} do not commute (phase w^{phase})")
        self.pair = (first, second)
        self.phase = phase


class OracleInconsistencyError(RuntimeError):
    pass


Action = tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True)
class DenseOperatorSpec:
    n_qudits: int
    modulus: int
    actions: tuple[tuple[tuple[int, str, int], ...], ...]
    phases: tuple[int, ...]

    def __post_init__(self) -> None:
        check_cap(self.n_qudits, self.modulus)

    @classmethod
    def from_operators(cls, operators: Sequence[PauliOperator]) -> "DenseOperatorSpec":
        if not operators:
            raise ValueError("no operators given")
        n, modulus = operators[0].n, operators[0].modulus
        actions = []
        for operator in operators:
            if operator.n != n or operator.modulus != modulus:
                raise ValueError("operators disagree on qudit count or dimension")
            steps = []
            for site in operator.support():
                if operator.xpart[site]:
                    steps.append((int(site), "X", int(operator.xpart[site])))
                if operator.zpart[site]:
                    steps.append((int(site), "Z", int(operator.zpart[site])))
            actions.append(tuple(steps))
        return cls(n, modulus, tuple(actions), tuple(operator.phase_exp for operator in operators))


def check_cap(n_qudits: int, modulus: int) -> None:
    cap = settings.max_oracle_qubits()
    if n_qudits * math.log2(modulus) > cap + 1e-9:
        log_event(RunComponent.ORACLE, RunAction.CAPPED, qudits=n_qudits, d=modulus, cap_qubits=cap)
        raise OracleCapError(
            f"dense oracle refused: {modulus}^{n_qudits} basis states exceed the cap of 2^{cap} "
            "(set XXZ_MAX_ORACLE_QUBITS, at most 24)"
        )


def _basis_action(n: int, modulus: int, steps: Sequence[tuple[int, str, int]], phase: int) -> Action:
    size = modulus**n
    indices = np.arange(size, dtype=np.int64)
    targets = indices.copy()
    phases = np.full(size, phase, dtype=np.int64)
    for site, letter, exponent in steps:
        place = modulus**site
        digit = (indices // place) % modulus
        if letter == "Z":
            phases += exponent * digit
        else:
            targets += (((digit - exponent) % modulus) - digit) * place
    return targets, phases % modulus


def monomial_action(operator: PauliOperator) -> Action:
    """(targets, phases): operator|b> = w^phases[b] |targets[b]>."""
    spec = DenseOperatorSpec.from_operators([operator])
    return _basis_action(spec.n_qudits, spec.modulus, spec.actions[0], spec.phases[0])


def _compose(first: Action, second: Action, modulus: int) -> Action:
    """Action of (second then first), i.e. of the product first * second."""
    targets_first, phases_first = first
    targets_second, phases_second = second
    return targets_first[targets_second], (phases_second + phases_first[targets_second]) % modulus


def _commute_phase(left: Action, right: Action, modulus: int) -> int:
    left_right = _compose(left, right, modulus)
    right_left = _compose(right, left, modulus)
    if not np.array_equal(left_right[0], right_left[0]):
        raise OracleInconsistencyError("PQ and QP permute basis states differently")
    difference = np.unique((left_right[1] - right_left[1]) % modulus)
    if difference.size != 1:
        raise OracleInconsistencyError(f"PQ and QP differ by non-constant phases {difference.tolist()}")
    return int(difference[0])


def commute_dense(left: PauliOperator, right: PauliOperator) -> int:
    """c with PQ = w^c QP, found by applying both products to every basis state."""
    if left.n != right.n or left.modulus != right.modulus:
        raise ValueError("operators disagree on qudit count or dimension")
    return _commute_phase(monomial_action(left), monomial_action(right), left.modulus)


@dataclass(frozen=True)
class _BasisImage:
    """An element of the stabilizer group, recorded by its action on |0> and each |e_j>."""

    targets: tuple[int, ...]
    phases: tuple[int, ...]


def _reference_states(n: int, modulus: int) -> np.ndarray:
    return np.array([0] + [modulus**site for site in range(n)], dtype=np.int64)


def _apply_to_image(image: _BasisImage, action: Action, modulus: int) -> _BasisImage:
    targets, phases = action
    sources = np.array(image.targets, dtype=np.int64)
    new_targets = targets[sources]
    new_phases = (np.array(image.phases, dtype=np.int64) + phases[sources]) % modulus
    return _BasisImage(tuple(int(value) for value in new_targets), tuple(int(value) for value in new_phases))


Generators = Union[StabilizerSet, Sequence[PauliOperator]]


def _operators(stabilizers: Generators) -> list[PauliOperator]:
    if isinstance(stabilizers, StabilizerSet):
        return stabilizers.operators()
    return list(stabilizers)


def stabilizer_group(stabilizers: Generators) -> list[_BasisImage]:
    """Every element of the group the generators generate, closed by breadth-first multiplication."""
    operators = _operators(stabilizers)
    spec = DenseOperatorSpec.from_operators(operators)
    n, modulus = spec.n_qudits, spec.modulus
    actions = [_basis_action(n, modulus, steps, phase) for steps, phase in zip(spec.actions, spec.phases)]
    identity = _BasisImage(tuple(int(value) for value in _reference_states(n, modulus)), (0,) * (n + 1))
    seen = {identity}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for element in frontier:
            for action in actions:
                product = _apply_to_image(element, action, modulus)
                if product not in seen:
                    seen.add(product)
                    next_frontier.append(product)
        frontier = next_frontier
    return sorted(seen, key=lambda image: (image.targets, image.phases))


def _fixed_point_phases(image: _BasisImage, n: int, modulus: int) -> np.ndarray:
    # |0> -> w^c |-x> fixes c and x; |e_j> -> w^(c + z_j) |e_j - x> fixes z_j.
    shift = image.targets[0]
    if shift != 0:
        return np.zeros(0, dtype=np.int64)
    steps = [
        (site, "Z", (image.phases[site + 1] - image.phases[0]) % modulus)
        for site in range(n)
        if (image.phases[site + 1] - image.phases[0]) % modulus
    ]
    targets, phases = _basis_action(n, modulus, steps, image.phases[0])
    return phases[targets == np.arange(targets.size)]


def ground_space_dim_dense(stabilizers: Generators) -> int:
    """dim of the joint w^0 eigenspace: Tr of the group average, as an exact integer."""
    operators = _operators(stabilizers)
    spec = DenseOperatorSpec.from_operators(operators)
    n, modulus = spec.n_qudits, spec.modulus
    if not is_prime(modulus):
        raise ValueError(f"the dense trace needs a prime qudit dimension, got d={modulus}")

    actions = [_basis_action(n, modulus, steps, phase) for steps, phase in zip(spec.actions, spec.phases)]
    for first in range(len(actions)):
        for second in range(first + 1, len(actions)):
            phase = _commute_phase(actions[first], actions[second], modulus)
            if phase:
                raise OracleCommutationError(first, second, phase)

    group = stabilizer_group(stabilizers)
    counts = np.zeros(modulus, dtype=np.int64)
    for element in group:
        counts += np.bincount(_fixed_point_phases(element, n, modulus), minlength=modulus)

    # sum_k counts[k] w^k is an integer only when counts[1:] agree.
    if np.any(counts[1:] != counts[1]):
        raise OracleInconsistencyError(f"trace is not an integer: root-of-unity counts {counts.tolist()}")
    trace = int(counts[0] - counts[1])
    if trace % len(group):
        raise OracleInconsistencyError(f"trace {trace} is not divisible by the group order {len(group)}")
    dimension = trace // len(group)
    # Zero means the group contains a nontrivial multiple of the identity.
    if dimension < 0 or dimension > modulus**n or (dimension and not _is_power(dimension, modulus)):
        raise OracleInconsistencyError(f"ground space dimension {dimension} is not a power of {modulus}")
    log_event(RunComponent.ORACLE, RunAction.COMPUTED, qudits=n, d=modulus, group_order=len(group), dimension=dimension)
    return dimension


def _is_power(value: int, base: int) -> bool:
    while value % base == 0 and value > 1:
        value //= base
    return value == 1
