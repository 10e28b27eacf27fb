"""
Questions asked of a built code: do the generators commute, how many logical
qudits does it carry, how local is it, and how does that change with size.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

import settings
from activity import RunAction, RunComponent, log_event
from group_algebra import (
    AlgebraMatrix,
    DimensionMismatchError,
    Matrix,
    MatrixKindError,
    ModularMatrix,
    ModulusMismatchError,
    matrix_product,
)
from group_core import GroupElement, GroupMismatchError
from linalg_f2 import (
    CompositeModulusError,
    PrimeFieldMatrix,
    is_prime,
    left_kernel_basis,
    rank_f2,
    rank_fp,
)
from metric import UNREACHABLE, distances_from, metric_sets_from_spec, without_identity
from pauli_symplectic import (
    AnySpec,
    CodeSpec,
    GeneratorKind,
    PauliOperator,
    QuditCodeSpec,
    StabilizerSet,
    build_stabilizers,
    generator_bits,
    generator_matrix,
    overlap_count,
    pauli_multiply,
    pauli_power,
)
from schemas import CommutationReport, DegeneracyResult, LocalityResult, SweepRow, Violation


FIRST_KINDS = (GeneratorKind.Z, GeneratorKind.U)


class CommutationError(ValueError):
    def __init__(self, report: CommutationReport) -> None:
        first = report.violations[0]
        super().__init__(
            f"stabilizers do not commute: {len(report.violations)} violating pairs, "
            f"first {first.first_label} vs {first.second_label} (symplectic value {first.value})"
        )
        self.report = report


class PhaseObstructionError(ValueError):
    def __init__(self, phases: Sequence[int]) -> None:
        super().__init__(
            f"phase-obstructed stabilizer group: {len(phases)} generator dependencies multiply to a "
            f"nontrivial multiple of the identity (phases {sorted(set(phases))})"
        )
        self.phases = list(phases)


@dataclass(frozen=True)
class MatrixCommuteResult:
    commute: bool
    witness: Optional[tuple[int, int]] = None
    products: Optional[tuple[Matrix, Matrix]] = None


def matrices_commute_check(matrices: Sequence[Matrix]) -> MatrixCommuteResult:
    if not matrices:
        return MatrixCommuteResult(True)
    kind = type(matrices[0])
    if any(type(matrix) is not kind for matrix in matrices):
        raise MatrixKindError("matrices mix binary, modular and algebra-valued kinds")
    size = matrices[0].q
    if any(matrix.q != size for matrix in matrices):
        raise DimensionMismatchError("matrices have different dimensions")
    if len({matrix.modulus for matrix in matrices if isinstance(matrix, ModularMatrix)}) > 1:
        raise ModulusMismatchError("matrices have different moduli")
    if len({id(matrix.group) for matrix in matrices if isinstance(matrix, AlgebraMatrix)}) > 1:
        raise GroupMismatchError("algebra matrices are over different groups")
    for first in range(len(matrices)):
        for second in range(first + 1, len(matrices)):
            forward = matrix_product(matrices[first], matrices[second])
            backward = matrix_product(matrices[second], matrices[first])
            if forward != backward:
                return MatrixCommuteResult(False, (first, second), (forward, backward))
    return MatrixCommuteResult(True)


def _label(stabilizers: StabilizerSet, index: int) -> str:
    generator = stabilizers.generators[index]
    site = stabilizers.spec.group.name(generator.site)
    return f"{generator.kind.value}[{generator.matrix_index}]@{site}"


def _support_entries(operators: Sequence[PauliOperator]) -> tuple[np.ndarray, ...]:
    """(qudit, owner, x, z) for every supported site of every operator, sorted by qudit."""
    sites, owners, xs, zs = [], [], [], []
    for owner, operator in enumerate(operators):
        support = operator.support()
        x, z = operator.wide()
        sites.append(support)
        owners.append(np.full(support.size, owner, dtype=np.int64))
        xs.append(x[support])
        zs.append(z[support])
    if not sites:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty, empty
    qudits = np.concatenate(sites)
    order = np.argsort(qudits, kind="stable")
    return qudits[order], np.concatenate(owners)[order], np.concatenate(xs)[order], np.concatenate(zs)[order]


def _overlapping_products(
    operator: PauliOperator, entries: tuple[np.ndarray, ...], modulus: int
) -> tuple[np.ndarray, np.ndarray]:
    """Owners whose support meets `operator`, with their symplectic products against it mod d."""
    qudits, owners, xs, zs = entries
    support = operator.support()
    starts = np.searchsorted(qudits, support, side="left")
    lengths = np.searchsorted(qudits, support, side="right") - starts
    total = int(lengths.sum())
    if not total:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    picks = np.repeat(starts - (np.cumsum(lengths) - lengths), lengths) + np.arange(total)
    x, z = operator.wide()
    sites = np.repeat(support, lengths)
    terms = x[sites] * zs[picks] - z[sites] * xs[picks]
    touched, inverse = np.unique(owners[picks], return_inverse=True)
    sums = np.zeros(touched.size, dtype=np.int64)
    np.add.at(sums, inverse, terms)
    return touched, sums % modulus


def verify_commutation(stabilizers: StabilizerSet) -> CommutationReport:
    """
    Checks the Z/U versus X/V block; same-kind pairs act on disjoint symplectic halves.

    Only pairs with overlapping support are evaluated, so memory follows the
    generator weights rather than the number of qudits squared.
    """
    generators = stabilizers.generators
    total = len(generators) * (len(generators) - 1) // 2
    first = [i for i, gen in enumerate(generators) if gen.kind in FIRST_KINDS]
    second = [i for i, gen in enumerate(generators) if gen.kind not in FIRST_KINDS]
    violations: list[Violation] = []
    if first and second:
        entries = _support_entries([generators[j].operator for j in second])
        for i in first:
            touched, values = _overlapping_products(generators[i].operator, entries, stabilizers.modulus)
            for position, value in zip(touched[values != 0], values[values != 0]):
                low, high = sorted((i, second[int(position)]))
                violations.append(
                    Violation(
                        first=low,
                        second=high,
                        value=int(value),
                        first_label=_label(stabilizers, low),
                        second_label=_label(stabilizers, high),
                    )
                )
        violations.sort(key=lambda violation: (violation.first, violation.second))
    report = CommutationReport(total_pairs=total, pairs_checked=len(first) * len(second), violations=violations)
    log_event(
        RunComponent.ANALYSIS,
        RunAction.VERIFIED,
        pairs=report.pairs_checked,
        violations=len(report.violations),
    )
    return report


def _product_phase(operators: Sequence[PauliOperator], weights: Sequence[int]) -> int:
    product = PauliOperator.identity(operators[0].n, operators[0].modulus)
    for operator, weight in zip(operators, weights):
        if weight:
            product = pauli_multiply(product, pauli_power(operator, int(weight)))
    if not product.is_identity():
        raise RuntimeError("kernel vector does not cancel the generator exponents")
    return product.phase_exp


def phase_obstructions(stabilizers: StabilizerSet) -> list[int]:
    """Phases w^c of the products picked out by a basis of generator dependencies; nonzero c obstructs."""
    modulus = stabilizers.modulus
    if not is_prime(modulus):
        raise CompositeModulusError(modulus)
    operators = stabilizers.operators()
    phases = []
    for weights in left_kernel_basis(generator_matrix(stabilizers), modulus):
        phase = _product_phase(operators, weights)
        if phase:
            phases.append(phase)
    return phases


def _as_stabilizers(target: Union[AnySpec, StabilizerSet]) -> StabilizerSet:
    if isinstance(target, StabilizerSet):
        return target
    return build_stabilizers(target)


def logical_qubit_count(target: Union[AnySpec, StabilizerSet]) -> DegeneracyResult:
    spec = target.spec if isinstance(target, StabilizerSet) else target
    modulus = spec.modulus
    if not is_prime(modulus):
        raise CompositeModulusError(modulus)
    stabilizers = _as_stabilizers(target)
    report = verify_commutation(stabilizers)
    if not report.ok:
        raise CommutationError(report)
    if isinstance(spec, QuditCodeSpec):
        phases = phase_obstructions(stabilizers)
        if phases:
            raise PhaseObstructionError(phases)
    if modulus == 2:
        rank = rank_f2(generator_bits(stabilizers))
    else:
        rank = rank_fp(PrimeFieldMatrix(generator_matrix(stabilizers), modulus))
    n = stabilizers.n_qubits
    logical = n - rank
    result = DegeneracyResult(
        n_qubits=n,
        n_generators=len(stabilizers.generators),
        rank=rank,
        logical_count=logical,
        modulus=modulus,
        log_degeneracy=logical,
        log2_degeneracy=logical * math.log2(modulus),
    )
    log_event(RunComponent.ANALYSIS, RunAction.COMPUTED, qudits=n, rank=rank, logical=logical, d=modulus)
    return result


def overlap_parity_sum(spec: CodeSpec, i: int, j: int, g: GroupElement, h: GroupElement) -> int:
    """Sum of overlap_count over every u (with v = h u^-1 g^-1), mod 2."""
    group = spec.group
    total = 0
    for u in group.elements():
        v = h * u.inverse() * g.inverse()
        total += overlap_count(spec, i, j, g, h, u, v)
    return total % 2


def degeneracy_sweep(
    family: str,
    parameters: Sequence[Sequence[int]],
    workers: Optional[int] = None,
) -> list[SweepRow]:
    from presets import family_annotations, family_factory, family_parameter_names

    factory = family_factory(family)
    names = family_parameter_names(family)

    def _row(values: Sequence[int]) -> SweepRow:
        labelled = dict(zip(names, (int(value) for value in values)))
        try:
            result = logical_qubit_count(factory(values))
            return SweepRow(parameters=labelled, result=result, annotations=family_annotations(family, values))
        except ValueError as exc:
            log_event(RunComponent.ANALYSIS, RunAction.ROW_FAILED, str(exc), family=family, parameters=labelled)
            return SweepRow(parameters=labelled, error=str(exc))

    with ThreadPoolExecutor(max_workers=workers or settings.SWEEP_WORKERS) as pool:
        return list(pool.map(_row, parameters))


def locality_check(spec: AnySpec) -> LocalityResult:
    """Largest word-metric distance from a generator's site to any site it touches."""
    ms = without_identity(metric_sets_from_spec(spec))
    stabilizers = build_stabilizers(spec)
    group = spec.group
    per_site = 2 * spec.q
    by_site: dict[int, list[PauliOperator]] = {}
    for generator in stabilizers.generators:
        by_site.setdefault(generator.site, []).append(generator.operator)

    radius = 0
    unreachable: set[int] = set()
    for site, operators in by_site.items():
        distances = distances_from(ms, GroupElement(site, group))
        touched = np.unique(np.concatenate([operator.support() for operator in operators]) // per_site)
        reached = distances[touched]
        unreachable.update(int(index) for index in touched[reached == UNREACHABLE])
        if np.any(reached != UNREACHABLE):
            radius = max(radius, int(reached[reached != UNREACHABLE].max()))

    result = LocalityResult(
        max_radius=radius,
        disconnected=bool(unreachable),
        generators=len(stabilizers.generators),
        unreachable=[group.name(index) for index in sorted(unreachable)],
    )
    log_event(RunComponent.ANALYSIS, RunAction.COMPUTED, locality_radius=radius, disconnected=result.disconnected)
    return result
