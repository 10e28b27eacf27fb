from __future__ import annotations

import itertools
import json
import logging
import math

import numpy as np
import pytest

from group_algebra import AlgebraElement, empty, inverse_set, subset
from group_core import FiniteGroup, GroupElement, dihedral_group, make_cyclic, make_torus, symmetric_group
from metric import (
    MetricSpec,
    NotInverseClosedError,
    ball,
    distances_from,
    metric_sets_from_spec,
    without_identity,
    word_metric,
)
from pauli_symplectic import build_stabilizer_pair
from presets import haah_a, haah_b, trivial


def _brute_force_distance(ms: MetricSpec, g: GroupElement, h: GroupElement) -> float:
    group = ms.group
    powers_left = [{group.identity}]
    powers_right = [{group.identity}]
    for _ in range(group.order):
        powers_left.append({int(group.cayley[s, w]) for s in ms.left.indices() for w in powers_left[-1]})
        powers_right.append({int(group.cayley[w, t]) for t in ms.right.indices() for w in powers_right[-1]})
    best = math.inf
    for a, b in itertools.product(range(group.order + 1), repeat=2):
        for left in powers_left[a]:
            for right in powers_right[b]:
                if int(group.cayley[group.cayley[left, h.index], right]) == g.index:
                    best = min(best, a + b)
    return best


def _random_closed_set(group: FiniteGroup, rng: np.random.Generator) -> AlgebraElement:
    chosen = AlgebraElement.from_indices(group, np.flatnonzero(rng.random(group.order) < 0.25))
    return AlgebraElement(group, chosen.bits | inverse_set(chosen).bits)


def test_cycle_distance_with_left_steps_only() -> None:
    group = make_cyclic(6)
    ms = MetricSpec(group, subset(group, [1, 5]), empty(group))

    assert word_metric(ms, GroupElement(0, group), GroupElement(0, group)) == 0
    assert word_metric(ms, GroupElement(3, group), GroupElement(0, group)) == 3


def test_s3_distance_needs_one_step_on_each_side(s3: FiniteGroup) -> None:
    ms = MetricSpec(s3, subset(s3, ["(12)"]), subset(s3, ["(13)"]))
    target = s3.element("(12)") * s3.unit * s3.element("(13)")

    assert word_metric(ms, s3.unit, target) == 2


def test_unreachable_elements_are_infinitely_far() -> None:
    group = make_cyclic(6)
    ms = MetricSpec(group, subset(group, [3]), empty(group))

    assert word_metric(ms, GroupElement(1, group), group.unit) == math.inf


def test_sets_must_be_inverse_closed() -> None:
    group = make_cyclic(6)

    with pytest.raises(NotInverseClosedError):
        MetricSpec(group, subset(group, [1]), empty(group))


def test_balls_grow_to_the_whole_group() -> None:
    spec = haah_a(3)
    ms = metric_sets_from_spec(spec)
    g = spec.group.element("xy")

    assert ball(ms, g, 0) == {g}
    assert ball(ms, g, spec.group.order) == set(spec.group.elements())


def test_unit_ball_holds_haah_a_supports() -> None:
    spec = haah_a(3)
    group = spec.group
    ms = metric_sets_from_spec(spec)
    g = group.element("x^2y")
    neighbourhood = {element.index for element in ball(ms, g, 1)}

    z_op, x_op = build_stabilizer_pair(spec, 0, g)
    touched = np.concatenate([z_op.support(), x_op.support()]) // 2

    assert set(touched.tolist()) <= neighbourhood
    assert group.element("xyz").index not in {element.index for element in ball(ms, group.unit, 1)}


def test_haah_a_metric_sets() -> None:
    spec = haah_a(3)
    group = spec.group
    ms = metric_sets_from_spec(spec)

    assert ms.right == subset(group, ["1", "x", "y", "z", "-x", "-y", "-z"])
    assert ms.left == subset(group, ["1", "xy", "xz", "yz", "-xy", "-xz", "-yz"])


def test_trivial_code_metric_sets_hold_only_the_identity() -> None:
    spec = trivial(4)
    ms = metric_sets_from_spec(spec)

    assert ms.left == subset(spec.group, [spec.group.identity])
    assert ms.right == subset(spec.group, [spec.group.identity])
    assert word_metric(ms, GroupElement(1, spec.group), spec.group.unit) == math.inf


def test_identity_is_dropped_only_for_locality(caplog: pytest.LogCaptureFixture) -> None:
    spec = haah_a(3)
    caplog.set_level(logging.INFO, logger="activity")

    full = metric_sets_from_spec(spec)
    reduced = without_identity(full)

    assert reduced.right == subset(spec.group, ["x", "y", "z", "-x", "-y", "-z"])
    assert reduced.left == subset(spec.group, ["xy", "xz", "yz", "-xy", "-xz", "-yz"])
    assert without_identity(reduced) is reduced
    actions = [json.loads(record.getMessage())["action"] for record in caplog.records if record.name == "activity"]
    assert "convention" in actions
    for g in spec.group.elements():
        assert word_metric(full, g, spec.group.unit) == word_metric(reduced, g, spec.group.unit)


def test_b_code_metric_sets_cover_both_channels() -> None:
    spec = haah_b(3)
    group = spec.group
    ms = metric_sets_from_spec(spec)

    assert ms.right == subset(group, ["1", "x", "y", "-x", "-y"])
    assert ms.left == subset(group, ["1", "x", "z", "-x", "-z"])


def test_metric_axioms_on_small_groups(rng: np.random.Generator) -> None:
    for group in (make_cyclic(7), symmetric_group(3), make_torus(2, 2, 3), dihedral_group(4)):
        for _ in range(4):
            ms = MetricSpec(group, _random_closed_set(group, rng), _random_closed_set(group, rng))
            table = np.array([[word_metric(ms, g, h) for h in group.elements()] for g in group.elements()])

            assert np.array_equal(table, table.T)
            assert all(table[i, i] == 0 for i in range(group.order))
            assert all(table[i, j] > 0 for i in range(group.order) for j in range(group.order) if i != j)
            for i, j, k in itertools.product(range(group.order), repeat=3):
                assert table[i, k] <= table[i, j] + table[j, k]


def test_breadth_first_distances_match_word_enumeration(rng: np.random.Generator) -> None:
    for group in (make_cyclic(6), symmetric_group(3)):
        for _ in range(3):
            ms = MetricSpec(group, _random_closed_set(group, rng), _random_closed_set(group, rng))
            for g, h in itertools.product(group.elements(), repeat=2):
                assert word_metric(ms, g, h) == _brute_force_distance(ms, g, h)


def test_metric_is_not_left_invariant_in_general(s3: FiniteGroup) -> None:
    ms = MetricSpec(s3, subset(s3, ["(12)"]), subset(s3, ["(13)"]))

    witnesses = [
        (g, h, c)
        for g, h, c in itertools.product(s3.elements(), repeat=3)
        if word_metric(ms, c * g, c * h) != word_metric(ms, g, h)
    ]

    assert witnesses


def test_distance_limit_stops_the_search() -> None:
    group = make_cyclic(10)
    ms = MetricSpec(group, subset(group, [1, 9]), empty(group))

    distances = distances_from(ms, group.unit, limit=2)

    assert sorted(np.flatnonzero(distances >= 0).tolist()) == [0, 1, 2, 8, 9]
