"""
LR word metric: d(g, h) is the fewest left factors from L plus right factors from R
turning h into g. Distances come from a breadth-first search over the group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from activity import RunAction, RunComponent, log_event
from group_algebra import AlgebraElement, WeightedAlgebraElement, inverse_set, support
from group_core import FiniteGroup, GroupElement, GroupMismatchError
from pauli_symplectic import AnySpec, QuditCodeSpec, channel_sets, weighted_channel_sets


UNREACHABLE = -1


class NotInverseClosedError(ValueError):
    pass


@dataclass(frozen=True)
class MetricSpec:
    group: FiniteGroup
    left: AlgebraElement
    right: AlgebraElement

    def __post_init__(self) -> None:
        if self.left.group is not self.group or self.right.group is not self.group:
            raise GroupMismatchError("metric sets belong to a different group")
        if inverse_set(self.left) != self.left:
            raise NotInverseClosedError("left metric set is not inverse-closed")
        if inverse_set(self.right) != self.right:
            raise NotInverseClosedError("right metric set is not inverse-closed")


def distances_from(ms: MetricSpec, h: GroupElement, limit: Optional[int] = None) -> np.ndarray:
    """d(x, h) for every x, UNREACHABLE where no word reaches x (or beyond limit)."""
    if h.group is not ms.group:
        raise GroupMismatchError("element belongs to a different group")
    table = ms.group.cayley
    left = ms.left.indices()
    right = ms.right.indices()
    distances = np.full(ms.group.order, UNREACHABLE, dtype=np.int64)
    distances[h.index] = 0
    frontier = np.array([h.index], dtype=np.int64)
    level = 0
    while frontier.size and (limit is None or level < limit):
        level += 1
        moved_left = table[left[:, None], frontier[None, :]].ravel()
        moved_right = table[frontier[:, None], right[None, :]].ravel()
        reached = np.unique(np.concatenate([moved_left, moved_right]))
        frontier = reached[distances[reached] == UNREACHABLE]
        distances[frontier] = level
    return distances


def word_metric(ms: MetricSpec, g: GroupElement, h: GroupElement) -> Union[int, float]:
    if g.group is not ms.group:
        raise GroupMismatchError("element belongs to a different group")
    distance = int(distances_from(ms, h)[g.index])
    return math.inf if distance == UNREACHABLE else distance


def ball(ms: MetricSpec, g: GroupElement, r: int) -> set[GroupElement]:
    if r < 0:
        raise ValueError("ball radius must be non-negative")
    distances = distances_from(ms, g, limit=r)
    return {GroupElement(int(index), ms.group) for index in np.flatnonzero(distances != UNREACHABLE)}


def metric_sets_from_spec(spec: AnySpec) -> MetricSpec:
    """Right set from the (chi A)_k, left set from the (chi^T B)_k, both closed under inverses."""
    group = spec.group
    left_bits = 0
    right_bits = 0
    for matrix_index in range(len(spec.matrices)):
        chi_a: Sequence[Union[AlgebraElement, WeightedAlgebraElement]]
        chi_b: Sequence[Union[AlgebraElement, WeightedAlgebraElement]]
        if isinstance(spec, QuditCodeSpec):
            chi_a, chi_b = weighted_channel_sets(spec, matrix_index)
        else:
            chi_a, chi_b = channel_sets(spec, matrix_index)
        for entry in chi_a:
            right_bits |= support(entry).bits
        for entry in chi_b:
            left_bits |= support(entry).bits
    right = AlgebraElement(group, right_bits)
    left = AlgebraElement(group, left_bits)
    return MetricSpec(
        group,
        AlgebraElement(group, left.bits | inverse_set(left).bits),
        AlgebraElement(group, right.bits | inverse_set(right).bits),
    )


def without_identity(ms: MetricSpec) -> MetricSpec:
    """The same metric with 1 removed from both sets; a step by 1 never shortens a word."""
    identity_bit = 1 << ms.group.identity
    if not (ms.left.bits | ms.right.bits) & identity_bit:
        return ms
    log_event(RunComponent.METRIC, RunAction.CONVENTION, "identity dropped from metric sets for locality")
    return MetricSpec(
        ms.group,
        AlgebraElement(ms.group, ms.left.bits & ~identity_bit),
        AlgebraElement(ms.group, ms.right.bits & ~identity_bit),
    )
