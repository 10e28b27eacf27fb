"""
Finite groups as validated Cayley tables.

cayley[a][b] is the product "a then b" in juxtaposition order ab. Elements are
plain indices into the table; a GroupElement pairs an index with its group.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

import settings
from activity import RunAction, RunComponent, log_event


TORUS_LETTERS = "xyz"
_TORUS_FACTOR = re.compile(r"([a-z])(?:\^(-?\d+))?")

ElementKey = Union[int, str, "GroupElement"]


class GroupAxiomError(ValueError):
    pass


class NotLatinSquareError(GroupAxiomError):
    pass


class MissingIdentityError(GroupAxiomError):
    pass


class MissingInverseError(GroupAxiomError):
    def __init__(self, element: int) -> None:
        super().__init__(f"element {element} has no two-sided inverse")
        self.element = element


class NonAssociativeError(GroupAxiomError):
    def __init__(self, witness: tuple[int, int, int]) -> None:
        a, b, c = witness
        super().__init__(f"table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")
        self.witness = witness


class GroupOrderError(ValueError):
    pass


class GroupMismatchError(ValueError):
    pass


class UnknownElementError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    cayley: np.ndarray
    identity: int
    inverse: np.ndarray
    element_names: Optional[tuple[str, ...]] = None
    torus_dims: tuple[int, ...] = ()
    factors: tuple["FiniteGroup", ...] = field(default=())

    @property
    def order(self) -> int:
        return int(self.cayley.shape[0])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    @cached_property
    def _name_index(self) -> dict[str, int]:
        return {name: index for index, name in enumerate(self.names())}

    def names(self) -> tuple[str, ...]:
        if self.element_names is not None:
            return self.element_names
        return tuple(str(index) for index in range(self.order))

    def name(self, index: int) -> str:
        return self.names()[index]

    def element(self, key: ElementKey) -> "GroupElement":
        if isinstance(key, GroupElement):
            if key.group is not self:
                raise GroupMismatchError("element belongs to a different group")
            return key
        if isinstance(key, (int, np.integer)) and not isinstance(key, bool):
            return GroupElement(int(key), self)
        if isinstance(key, str):
            return GroupElement(parse_element_name(self, key), self)
        raise UnknownElementError(f"cannot interpret {key!r} as a group element")

    def elements(self) -> Iterator["GroupElement"]:
        for index in range(self.order):
            yield GroupElement(index, self)

    @property
    def unit(self) -> "GroupElement":
        return GroupElement(self.identity, self)


@dataclass(frozen=True)
class GroupElement:
    index: int
    group: FiniteGroup

    def __post_init__(self) -> None:
        if not 0 <= self.index < self.group.order:
            raise UnknownElementError(f"element index {self.index} outside 0..{self.group.order - 1}")

    @property
    def name(self) -> str:
        return self.group.name(self.index)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return group_mul(self, other)

    def inverse(self) -> "GroupElement":
        return group_inv(self)

    def __repr__(self) -> str:
        return f"GroupElement({self.name!r})"


def group_mul(a: GroupElement, b: GroupElement) -> GroupElement:
    if a.group is not b.group:
        raise GroupMismatchError("cannot multiply elements of different groups")
    return GroupElement(int(a.group.cayley[a.index, b.index]), a.group)


def group_inv(a: GroupElement) -> GroupElement:
    return GroupElement(int(a.group.inverse[a.index]), a.group)


def element_order(a: GroupElement) -> int:
    power = a
    order = 1
    while power.index != a.group.identity:
        power = group_mul(power, a)
        order += 1
    return order


def _check_order(order: int) -> None:
    if order < 1:
        raise GroupOrderError("group order must be positive")
    if order > settings.MAX_GROUP_ORDER:
        raise GroupOrderError(f"group order {order} exceeds the configured maximum {settings.MAX_GROUP_ORDER}")


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=np.int64)
    array.setflags(write=False)
    return array


def make_cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupOrderError("cyclic group order must be at least 1")
    _check_order(n)
    indices = np.arange(n)
    return FiniteGroup(
        cayley=_frozen((indices[:, None] + indices[None, :]) % n),
        identity=0,
        inverse=_frozen((-indices) % n),
        element_names=tuple(f"g^{index}" for index in range(n)),
    )


def _product_names(left: FiniteGroup, right: FiniteGroup) -> tuple[str, ...]:
    names = tuple(a + b for a in left.names() for b in right.names())
    if len(set(names)) == len(names):
        return names
    return tuple(f"({a},{b})" for a in left.names() for b in right.names())


def direct_product(left: FiniteGroup, right: FiniteGroup) -> FiniteGroup:
    order = left.order * right.order
    _check_order(order)
    indices = np.arange(order)
    first, second = indices // right.order, indices % right.order
    cayley = (
        left.cayley[first[:, None], first[None, :]] * right.order
        + right.cayley[second[:, None], second[None, :]]
    )
    return FiniteGroup(
        cayley=_frozen(cayley),
        identity=left.identity * right.order + right.identity,
        inverse=_frozen(left.inverse[first] * right.order + right.inverse[second]),
        element_names=_product_names(left, right),
        factors=(left, right),
    )


def project(element: GroupElement, factor: int) -> GroupElement:
    """Image of an element of a two-factor direct product in factor 0 or 1."""
    left, right = element.group.factors
    if factor == 0:
        return GroupElement(element.index // right.order, left)
    return GroupElement(element.index % right.order, right)


def _torus_name(exponents: Sequence[int]) -> str:
    parts = []
    for letter, exponent in zip(TORUS_LETTERS, exponents):
        if exponent == 1:
            parts.append(letter)
        elif exponent:
            parts.append(f"{letter}^{exponent}")
    return "".join(parts) or "1"


def torus_coordinates(element: GroupElement) -> tuple[int, ...]:
    dims = element.group.torus_dims
    coordinates = []
    rest = element.index
    for size in reversed(dims):
        coordinates.append(rest % size)
        rest //= size
    return tuple(reversed(coordinates))


def torus_index(dims: Sequence[int], coordinates: Sequence[int]) -> int:
    index = 0
    for size, value in zip(dims, coordinates):
        index = index * size + value % size
    return index


def make_torus(*dims: int) -> FiniteGroup:
    """Z_l x Z_m x Z_n (one to three factors) with unit vectors named x, y, z."""
    if not 1 <= len(dims) <= len(TORUS_LETTERS):
        raise GroupOrderError("a torus has between one and three factors")
    group = make_cyclic(dims[0])
    for size in dims[1:]:
        group = direct_product(group, make_cyclic(size))
    names = tuple(
        _torus_name(coordinates)
        for coordinates in itertools.product(*(range(size) for size in dims))
    )
    return FiniteGroup(
        cayley=group.cayley,
        identity=group.identity,
        inverse=group.inverse,
        element_names=names,
        torus_dims=tuple(int(size) for size in dims),
        factors=group.factors,
    )


def parse_element_name(group: FiniteGroup, text: str) -> int:
    name = text.strip()
    index = group._name_index.get(name)
    if index is not None:
        return index
    if name.startswith("-") and len(name) > 1:
        return int(group.inverse[parse_element_name(group, name[1:])])
    if group.torus_dims:
        parsed = _parse_torus_word(group.torus_dims, name)
        if parsed is not None:
            return parsed
    raise UnknownElementError(f"unknown element name {text!r}")


def _parse_torus_word(dims: Sequence[int], word: str) -> Optional[int]:
    if word in ("1", "e"):
        return 0
    letters = TORUS_LETTERS[: len(dims)]
    exponents = [0] * len(dims)
    position = 0
    while position < len(word):
        match = _TORUS_FACTOR.match(word, position)
        if match is None or match.group(1) not in letters:
            return None
        exponents[letters.index(match.group(1))] += int(match.group(2) or 1)
        position = match.end()
    return torus_index(dims, exponents)


def _validate_table(table: np.ndarray, exhaustive_max: int) -> tuple[int, np.ndarray]:
    order = table.shape[0]
    expected = np.arange(order)
    if table.min() < 0 or table.max() >= order:
        raise NotLatinSquareError("table entries must be element indices 0..n-1")
    if not (np.all(np.sort(table, axis=1) == expected) and np.all(np.sort(table, axis=0) == expected[:, None])):
        raise NotLatinSquareError("table is not a Latin square")

    identities = [
        candidate
        for candidate in range(order)
        if np.array_equal(table[candidate], expected) and np.array_equal(table[:, candidate], expected)
    ]
    if not identities:
        raise MissingIdentityError("table has no two-sided identity")
    identity = identities[0]

    inverse = np.argmax(table == identity, axis=1)
    failed = np.nonzero(table[inverse, expected] != identity)[0]
    if failed.size:
        raise MissingInverseError(int(failed[0]))

    witness = _associativity_witness(table, exhaustive_max)
    if witness is not None:
        raise NonAssociativeError(witness)
    return identity, inverse


def _associativity_witness(table: np.ndarray, exhaustive_max: int) -> Optional[tuple[int, int, int]]:
    order = table.shape[0]
    if order <= exhaustive_max:
        left = table[table]
        right = table[np.arange(order)[:, None, None], table[None, :, :]]
        bad = np.argwhere(left != right)
    else:
        rng = np.random.default_rng(settings.RANDOM_SEED)
        a, b, c = rng.integers(0, order, size=(3, settings.ASSOCIATIVITY_SAMPLES))
        mismatch = np.nonzero(table[table[a, b], c] != table[a, table[b, c]])[0]
        bad = np.stack([a[mismatch], b[mismatch], c[mismatch]], axis=1)
    if len(bad):
        first, second, third = (int(value) for value in bad[0])
        return first, second, third
    return None


def from_cayley_table(table: Sequence[Sequence[int]] | np.ndarray, names: Optional[Sequence[str]] = None) -> FiniteGroup:
    array = np.asarray(table, dtype=np.int64)
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
        raise NotLatinSquareError("Cayley table must be a non-empty square table")
    _check_order(array.shape[0])
    identity, inverse = _validate_table(array, settings.ASSOCIATIVITY_EXHAUSTIVE_MAX)
    element_names = None
    if names is not None:
        element_names = tuple(str(name) for name in names)
        if len(element_names) != array.shape[0] or len(set(element_names)) != len(element_names):
            raise ValueError("element names must be unique and one per element")
    log_event(RunComponent.GROUP, RunAction.VALIDATED, order=array.shape[0], identity=identity)
    return FiniteGroup(cayley=_frozen(array), identity=identity, inverse=_frozen(inverse), element_names=element_names)


def check_group_axioms(group: FiniteGroup, exhaustive_max: int = 64) -> None:
    """Re-validates every group invariant of an existing group; raises GroupAxiomError."""
    identity, inverse = _validate_table(np.asarray(group.cayley), exhaustive_max)
    if identity != group.identity or not np.array_equal(inverse, group.inverse):
        raise GroupAxiomError("stored identity or inverse table disagrees with the Cayley table")


def _cycle_name(permutation: Sequence[int]) -> str:
    seen: set[int] = set()
    cycles = []
    for start in range(len(permutation)):
        if start in seen or permutation[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        point = permutation[start]
        while point != start:
            cycle.append(point)
            seen.add(point)
            point = permutation[point]
        cycles.append("(" + "".join(str(point + 1) for point in cycle) + ")")
    return "".join(cycles) or "e"


def permutation_group(permutations: Iterable[Sequence[int]]) -> FiniteGroup:
    """Group of permutation tuples; the product ab applies a first, then b."""
    elements = sorted({tuple(permutation) for permutation in permutations})
    position = {permutation: index for index, permutation in enumerate(elements)}
    table = [
        [position[tuple(b[point] for point in a)] for b in elements]
        for a in elements
    ]
    return from_cayley_table(table, [_cycle_name(permutation) for permutation in elements])


def _closure(generators: Sequence[tuple[int, ...]]) -> set[tuple[int, ...]]:
    identity = tuple(range(len(generators[0])))
    found = {identity}
    frontier = [identity]
    while frontier:
        current = frontier.pop()
        for generator in generators:
            product = tuple(generator[point] for point in current)
            if product not in found:
                found.add(product)
                frontier.append(product)
    return found


def symmetric_group(n: int) -> FiniteGroup:
    return permutation_group(itertools.permutations(range(n)))


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    rotation = tuple((point + 1) % n for point in range(n))
    reflection = tuple((-point) % n for point in range(n))
    return permutation_group(_closure([rotation, reflection]))


def read_cayley_file(path: Path) -> FiniteGroup:
    names: Optional[list[str]] = None
    rows: list[list[int]] = []
    order: Optional[int] = None
    for line_number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#names:"):
            names = line[len("#names:"):].split()
            continue
        if line.startswith("#"):
            continue
        try:
            values = [int(token) for token in line.split()]
        except ValueError as exc:
            raise ValueError(f"{path}:{line_number}: expected integers") from exc
        if order is None:
            if len(values) != 1:
                raise ValueError(f"{path}:{line_number}: first line must hold the group order")
            order = values[0]
            continue
        if len(values) != order:
            raise ValueError(f"{path}:{line_number}: expected {order} entries, found {len(values)}")
        rows.append(values)
    if order is None or len(rows) != order:
        raise ValueError(f"{path}: expected {order} table rows, found {len(rows)}")
    return from_cayley_table(rows, names)


def write_cayley_file(group: FiniteGroup, path: Path) -> None:
    lines = [str(group.order)]
    if group.element_names is not None:
        lines.append("#names: " + " ".join(group.element_names))
    lines.extend(" ".join(str(int(value)) for value in row) for row in group.cayley)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
