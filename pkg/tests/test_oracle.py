from __future__ import annotations

import numpy as np
import pytest

from code_analysis import logical_qubit_count
from oracle import (
    OracleCapError,
    OracleCommutationError,
    commute_dense,
    ground_space_dim_dense,
    stabilizer_group,
)
from pauli_symplectic import PauliOperator, StabilizerSet, build_all_stabilizers, symplectic_product
from presets import haah_a, lr_gcd, trivial


def _pauli(n: int, x: dict[int, int] | None = None, z: dict[int, int] | None = None, modulus: int = 2) -> PauliOperator:
    return PauliOperator.from_exponents(n, modulus, x=x, z=z)


def test_single_z_fixes_one_state() -> None:
    assert ground_space_dim_dense([_pauli(1, z={0: 1})]) == 1


def test_bell_pair_stabilizers() -> None:
    xx = _pauli(2, x={0: 1, 1: 1})
    zz = _pauli(2, z={0: 1, 1: 1})

    assert ground_space_dim_dense([zz, xx]) == 1
    assert len(stabilizer_group([zz, xx])) == 4


def test_qutrit_z_fixes_one_state() -> None:
    assert ground_space_dim_dense([_pauli(2, z={0: 1}, modulus=3)]) == 3


def test_dense_commutation_of_single_site_paulis() -> None:
    x, z = _pauli(1, x={0: 1}), _pauli(1, z={0: 1})

    assert commute_dense(x, z) == 1
    assert commute_dense(z, z) == 0


@pytest.mark.parametrize(("modulus", "n", "trials"), [(2, 8, 200), (3, 5, 60), (5, 4, 40)])
def test_dense_commutation_matches_symplectic_product(modulus: int, n: int, trials: int) -> None:
    rng = np.random.default_rng(modulus)
    for _ in range(trials):
        left = PauliOperator(rng.integers(0, modulus, n), rng.integers(0, modulus, n), modulus, int(rng.integers(modulus)))
        right = PauliOperator(rng.integers(0, modulus, n), rng.integers(0, modulus, n), modulus)

        assert commute_dense(left, right) == symplectic_product(left, right)


def test_haah_a_ground_space() -> None:
    stabilizers = build_all_stabilizers(haah_a(2))

    assert ground_space_dim_dense(stabilizers) == 64
    assert ground_space_dim_dense(stabilizers) == 2 ** logical_qubit_count(stabilizers).logical_count


@pytest.mark.parametrize("spec", [trivial(3), lr_gcd(6, 2, 4), lr_gcd(7, 2, 4), lr_gcd(8, 2, 6)])
def test_ground_space_matches_rank_count(spec) -> None:
    stabilizers = build_all_stabilizers(spec)

    assert ground_space_dim_dense(stabilizers) == 2 ** logical_qubit_count(stabilizers).logical_count


def test_dense_check_agrees_on_haah_a_commutation() -> None:
    operators = build_all_stabilizers(haah_a(2)).operators()
    for left in operators[:4]:
        for right in operators:
            assert commute_dense(left, right) == symplectic_product(left, right)


def test_noncommuting_generators_are_refused() -> None:
    with pytest.raises(OracleCommutationError) as excinfo:
        ground_space_dim_dense([_pauli(1, x={0: 1}), _pauli(1, z={0: 1})])

    assert excinfo.value.pair == (0, 1)


def test_phase_obstructed_group_has_no_ground_space(obstructed_stabilizers: StabilizerSet) -> None:
    assert ground_space_dim_dense(obstructed_stabilizers) == 0


def test_cap_is_configurable(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("XXZ_MAX_ORACLE_QUBITS", "4")

    with pytest.raises(OracleCapError, match="XXZ_MAX_ORACLE_QUBITS"):
        ground_space_dim_dense(build_all_stabilizers(haah_a(2)))
    assert ground_space_dim_dense(build_all_stabilizers(trivial(2))) == 1
