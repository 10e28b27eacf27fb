from __future__ import annotations

import itertools

import numpy as np
import pytest

from group_algebra import BinaryMatrix, ModularMatrix, identity_matrix, subset, weighted_from_counts
from group_core import GroupElement, make_cyclic, make_torus
from pauli_symplectic import (
    CodeSpec,
    GeneratorKind,
    Layer,
    NonCommutingMatricesError,
    PauliOperator,
    QubitIndex,
    QuditCodeSpec,
    as_qudit_spec,
    build_all_stabilizers,
    build_qudit_stabilizers,
    build_stabilizer_pair,
    channel_sets,
    generator_bits,
    generator_matrix,
    overlap_count,
    pauli_multiply,
    pauli_power,
    swap_lower_layer,
    symplectic_product,
)
from presets import SWAP_SUM, haah_a, haah_b, haah_b_alt, trivial


def _flat_set(spec: CodeSpec, sites: list[GroupElement], layer: Layer) -> set[int]:
    return {QubitIndex(site, layer, 1).flat(spec.q) for site in sites}


def _overlap_spec(second: tuple[tuple[int, int], ...]) -> CodeSpec:
    group = make_torus(2, 2)
    return CodeSpec(
        group=group,
        q=2,
        A=(subset(group, ["1", "y"]), subset(group, ["x", "y"])),
        B=(subset(group, ["1", "xy"]), subset(group, ["x"])),
        matrices=(identity_matrix(2), BinaryMatrix.of(second)),
    )


def test_flat_index_layout() -> None:
    group = make_cyclic(3)
    index = QubitIndex(GroupElement(2, group), Layer.MINUS, 2)

    assert index.flat(3) == 2 * 6 + 3 + 1
    assert QubitIndex.from_flat(group, 3, index.flat(3)) == index


def test_haah_a_generator_supports() -> None:
    spec = haah_a(3)
    group = spec.group
    g = group.element("xy^2z")
    x, y, z = (group.element(name) for name in ("x", "y", "z"))
    xy, xz, yz = (group.element(name) for name in ("xy", "xz", "yz"))

    z_op, x_op = build_stabilizer_pair(spec, 0, g)

    assert not z_op.xpart.any() and not x_op.zpart.any()
    z_sites = set(np.flatnonzero(z_op.zpart).tolist())
    assert z_sites == _flat_set(spec, [g, g * x, g * y, g * z], Layer.PLUS) | _flat_set(
        spec, [g, xy * g, xz * g, yz * g], Layer.MINUS
    )
    x_sites = set(np.flatnonzero(x_op.xpart).tolist())
    assert x_sites == _flat_set(spec, [g, xy.inverse() * g, xz.inverse() * g, yz.inverse() * g], Layer.PLUS) | _flat_set(
        spec, [g, g * x.inverse(), g * y.inverse(), g * z.inverse()], Layer.MINUS
    )


def test_trivial_code_generators() -> None:
    spec = trivial(3)
    g = GroupElement(1, spec.group)

    z_op, x_op = build_stabilizer_pair(spec, 0, g)

    assert np.flatnonzero(z_op.zpart).tolist() == [2, 3]
    assert np.flatnonzero(x_op.xpart).tolist() == [2, 3]


def test_b_code_second_generator_mixes_channels() -> None:
    spec = haah_b(3)
    a1, a2 = spec.A
    b1, b2 = spec.B

    chi_a, chi_b = channel_sets(spec, 1)

    assert chi_a == [a1 ^ a2, a1]
    assert chi_b == [b1 ^ b2, b1]


def test_generator_counts_and_order() -> None:
    assert len(build_all_stabilizers(haah_a(2)).generators) == 16
    assert build_all_stabilizers(haah_a(2)).n_qubits == 16
    assert len(build_all_stabilizers(haah_b(2)).generators) == 32
    assert build_all_stabilizers(haah_b(2)).n_qubits == 32
    assert len(build_all_stabilizers(trivial(1)).generators) == 2

    generators = build_all_stabilizers(haah_b(2)).generators
    assert [(gen.matrix_index, gen.site, gen.kind) for gen in generators[:3]] == [
        (0, 0, GeneratorKind.Z),
        (0, 0, GeneratorKind.X),
        (0, 1, GeneratorKind.Z),
    ]
    assert generators[16].matrix_index == 1


def test_builds_are_deterministic() -> None:
    first = generator_matrix(build_all_stabilizers(haah_b_alt(3)))
    second = generator_matrix(build_all_stabilizers(haah_b_alt(3)))

    assert np.array_equal(first, second)


def test_haah_a_generators_commute_pairwise() -> None:
    stabilizers = build_all_stabilizers(haah_a(2))
    for left, right in itertools.combinations(stabilizers.operators(), 2):
        assert symplectic_product(left, right) == 0


def test_symplectic_product_of_single_site_paulis() -> None:
    x = PauliOperator.from_exponents(1, x={0: 1})
    z = PauliOperator.from_exponents(1, z={0: 1})
    xx = PauliOperator.from_exponents(2, x={0: 1, 1: 1})
    zz = PauliOperator.from_exponents(2, z={0: 1, 1: 1})

    assert symplectic_product(x, z) == 1
    assert symplectic_product(x, x) == 0
    assert symplectic_product(xx, zz) == 0


def test_multiplication_phase_tracks_commutation(rng: np.random.Generator) -> None:
    for modulus in (2, 3, 5):
        for _ in range(20):
            left = PauliOperator(rng.integers(0, modulus, 4), rng.integers(0, modulus, 4), modulus)
            right = PauliOperator(rng.integers(0, modulus, 4), rng.integers(0, modulus, 4), modulus)

            forward, backward = pauli_multiply(left, right), pauli_multiply(right, left)

            assert np.array_equal(forward.xpart, backward.xpart)
            assert (forward.phase_exp - backward.phase_exp) % modulus == symplectic_product(left, right)


def test_square_of_xz_is_minus_identity() -> None:
    xz = PauliOperator.from_exponents(1, x={0: 1}, z={0: 1})

    square = pauli_power(xz, 2)

    assert square.is_identity()
    assert square.phase_exp == 1


def test_noncommuting_matrices_are_rejected() -> None:
    group = make_torus(2, 2)
    sets = (subset(group, ["1"]), subset(group, ["x"]))

    with pytest.raises(NonCommutingMatricesError, match="matrices 0 and 1 do not commute"):
        CodeSpec(
            group=group,
            q=2,
            A=sets,
            B=sets,
            matrices=(BinaryMatrix.of([[1, 1], [0, 1]]), BinaryMatrix.of([[1, 0], [1, 1]])),
        )


def test_qudit_trivial_generators_commute() -> None:
    group = make_cyclic(3)
    spec = QuditCodeSpec(
        group=group,
        q=1,
        d=3,
        A=(weighted_from_counts(group, 3, {0: 1}),),
        B=(weighted_from_counts(group, 3, {0: 1}),),
        matrices=(ModularMatrix.of([[1]], 3),),
    )

    stabilizers = build_qudit_stabilizers(spec)
    u_ops = [gen.operator for gen in stabilizers.generators if gen.kind is GeneratorKind.U]
    v_ops = [gen.operator for gen in stabilizers.generators if gen.kind is GeneratorKind.V]

    assert np.flatnonzero(u_ops[1].zpart).tolist() == [2]
    assert np.flatnonzero(u_ops[1].xpart).tolist() == [3]
    for u_op, v_op in itertools.product(u_ops, v_ops):
        assert symplectic_product(u_op, v_op) == 0


def test_scaling_a_scales_u_exponents() -> None:
    group = make_torus(3, 3)
    A = (weighted_from_counts(group, 3, {"1": 1, "x": 2, "y": 1}),)
    B = (weighted_from_counts(group, 3, {"1": 2, "xy": 1}),)
    matrices = (ModularMatrix.of([[1]], 3),)
    base = build_qudit_stabilizers(QuditCodeSpec(group=group, q=1, d=3, A=A, B=B, matrices=matrices))
    scaled = build_qudit_stabilizers(
        QuditCodeSpec(group=group, q=1, d=3, A=(A[0].scale(2),), B=B, matrices=matrices)
    )

    for original, rescaled in zip(base.generators, scaled.generators):
        if original.kind is GeneratorKind.U:
            assert np.array_equal(rescaled.operator.zpart, (2 * original.operator.zpart) % 3)
            assert np.array_equal(rescaled.operator.xpart, original.operator.xpart)
    for left, right in itertools.product(scaled.operators(), repeat=2):
        assert symplectic_product(left, right) == 0


@pytest.mark.parametrize("build", [haah_a, haah_b, haah_b_alt])
def test_qubit_build_is_qudit_build_with_lower_layer_swapped(build) -> None:
    spec = build(2)

    qubit = generator_matrix(swap_lower_layer(build_all_stabilizers(spec)))
    qudit = generator_matrix(build_qudit_stabilizers(as_qudit_spec(spec)))

    assert np.array_equal(qubit, qudit)


def test_overlap_count_is_even_for_equal_matrices() -> None:
    spec = _overlap_spec(SWAP_SUM)
    group = spec.group
    for i in (0, 1):
        for g, h, u in itertools.product(group.elements(), repeat=3):
            v = h * u.inverse() * g.inverse()
            assert overlap_count(spec, i, i, g, h, u, v) % 2 == 0


@pytest.mark.parametrize(
    ("second", "formula"),
    [
        (SWAP_SUM, lambda u, v: 2 * (u[0] * v[0] + u[0] * v[1] + u[1] * v[0])),
        (((0, 1), (1, 1)), lambda u, v: 2 * u[0] * v[1] + 2 * u[1] * v[0] + 2 * u[1] * v[1]),
    ],
)
def test_overlap_count_closed_forms(second, formula) -> None:
    spec = _overlap_spec(second)
    group = spec.group
    for g, h, u in itertools.product(group.elements(), repeat=3):
        v = h * u.inverse() * g.inverse()
        u_a = [int(u in entry) for entry in spec.A]
        v_b = [int(v in entry) for entry in spec.B]

        assert overlap_count(spec, 0, 1, g, h, u, v) == formula(u_a, v_b)


def test_overlap_count_rejects_unpaired_elements() -> None:
    spec = _overlap_spec(SWAP_SUM)
    group = spec.group
    g = h = group.unit

    with pytest.raises(ValueError):
        overlap_count(spec, 0, 1, g, h, group.element("x"), group.element("y"))


def test_generator_bits_pack_the_generator_matrix() -> None:
    stabilizers = build_all_stabilizers(haah_b(3))
    dense = generator_matrix(stabilizers)

    assert dense.dtype == np.uint8
    assert np.array_equal(generator_bits(stabilizers).to_dense(), dense % 2)


def test_compact_exponents_do_not_wrap_in_products() -> None:
    left = PauliOperator(np.array([250, 3]), np.array([250, 0]), modulus=251)
    right = PauliOperator(np.array([250, 0]), np.array([250, 1]), modulus=251)
    product = pauli_multiply(left, right)

    assert left.xpart.dtype == np.uint8
    assert product.xpart.tolist() == [249, 3]
    assert product.zpart.tolist() == [249, 1]
    assert product.phase_exp == (-250 * 250) % 251
    assert symplectic_product(left, right) == (250 * 250 + 3 - 250 * 250) % 251
