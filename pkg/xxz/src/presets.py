"""
Named code families. Each preset builds a validated CodeSpec from integer parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence, Union

from group_algebra import BinaryMatrix, identity_matrix, subset
from group_core import make_cyclic, make_torus
from pauli_symplectic import AnySpec, CodeSpec


SWAP_SUM = ((1, 1), (1, 0))

Annotation = dict[str, Union[int, bool]]


class UnknownPresetError(ValueError):
    pass


@dataclass(frozen=True)
class Preset:
    name: str
    parameters: tuple[str, ...]
    defaults: tuple[int, ...]
    description: str
    build: Callable[..., CodeSpec]
    annotate: Callable[..., Annotation]


def _torus_spec(size: int, a_sets: Sequence[Sequence[str]], b_sets: Sequence[Sequence[str]]) -> CodeSpec:
    if size < 2:
        raise ValueError("torus presets need a lattice size of at least 2")
    group = make_torus(size, size, size)
    q = len(a_sets)
    matrices = [identity_matrix(q)] if q == 1 else [identity_matrix(q), BinaryMatrix.of(SWAP_SUM)]
    return CodeSpec(
        group=group,
        q=q,
        A=tuple(subset(group, names) for names in a_sets),
        B=tuple(subset(group, names) for names in b_sets),
        matrices=tuple(matrices),
    )


def haah_a(size: int) -> CodeSpec:
    return _torus_spec(size, [["1", "x", "y", "z"]], [["1", "xy", "xz", "yz"]])


def haah_b(size: int) -> CodeSpec:
    return _torus_spec(size, [["1", "-y"], ["1", "-x"]], [["1", "-x"], ["1", "-z"]])


def haah_b_alt(size: int) -> CodeSpec:
    return _torus_spec(size, [["x", "z"], ["1", "x"]], [["x", "y"], ["1", "y"]])


def lr_gcd(n: int, a: int, b: int) -> CodeSpec:
    """Z_n with A = {0, a}, B = {0, b}; logical count 2 * gcd(a, b, n)."""
    group = make_cyclic(n)
    return CodeSpec(
        group=group,
        q=1,
        A=(subset(group, [0, a % n]),),
        B=(subset(group, [0, b % n]),),
        matrices=(identity_matrix(1),),
    )


def trivial(n: int = 1) -> CodeSpec:
    group = make_cyclic(n)
    return CodeSpec(
        group=group,
        q=1,
        A=(subset(group, [group.identity]),),
        B=(subset(group, [group.identity]),),
        matrices=(identity_matrix(1),),
    )


def is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


def _lattice_annotations(size: int) -> Annotation:
    return {"power_of_two": is_power_of_two(size)}


def _haah_a_annotations(size: int) -> Annotation:
    return {"power_of_two": is_power_of_two(size), "four_l_minus_two": 4 * size - 2}


def _gcd_annotations(n: int, a: int, b: int) -> Annotation:
    pair = math.gcd(a, b)
    return {"gcd_ab": pair, "gcd_abn": math.gcd(pair, n), "gcd_divides_n": pair > 0 and n % pair == 0}


def _no_annotations(*_: int) -> Annotation:
    return {}


PRESETS: dict[str, Preset] = {
    preset.name: preset
    for preset in (
        Preset("haah-a", ("L",), (2,), "Haah cubic code on Z_L^3 (q=1)", haah_a, _haah_a_annotations),
        Preset("haah-b", ("L",), (2,), "Haah B-code on Z_L^3 (q=2)", haah_b, _lattice_annotations),
        Preset("haah-b-alt", ("L",), (2,), "alternate B-code sets on Z_L^3 (q=2)", haah_b_alt, _lattice_annotations),
        Preset("lr-gcd", ("n", "a", "b"), (6, 2, 4), "Z_n with A={0,a}, B={0,b} (q=1)", lr_gcd, _gcd_annotations),
        Preset("trivial", ("n",), (1,), "singleton sets on Z_n (q=1)", trivial, _no_annotations),
    )
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPresetError(f"unknown preset '{name}' (known: {', '.join(sorted(PRESETS))})") from None


def build_preset(name: str, parameters: Sequence[int] | None = None) -> CodeSpec:
    preset = get_preset(name)
    values = tuple(parameters) if parameters else preset.defaults
    if len(values) != len(preset.parameters):
        raise ValueError(f"preset '{name}' takes parameters {':'.join(preset.parameters)}")
    return preset.build(*values)


def parse_parameters(text: str) -> tuple[int, ...]:
    """'8' -> (8,), '6:2:4' -> (6, 2, 4)."""
    try:
        return tuple(int(part) for part in text.split(":"))
    except ValueError:
        raise ValueError(f"invalid parameter tuple '{text}'") from None


def family_parameter_names(family: str) -> tuple[str, ...]:
    if family in PRESETS:
        return PRESETS[family].parameters
    return ("L",)


def family_annotations(family: str, parameters: Sequence[int]) -> Annotation:
    if family in PRESETS:
        return PRESETS[family].annotate(*parameters)
    return {}


def family_factory(family: str) -> Callable[[Sequence[int]], AnySpec]:
    """Builds specs of a preset family, or of a spec file resized by its first parameter."""
    if family in PRESETS:
        return lambda parameters: build_preset(family, parameters)
    path = Path(family)
    if not path.exists():
        raise UnknownPresetError(f"'{family}' is neither a preset nor a spec file")

    from spec_files import parse_spec

    def _from_file(parameters: Sequence[int]) -> AnySpec:
        if len(parameters) != 1:
            raise ValueError("spec file families take a single size parameter")
        return parse_spec(path, size=parameters[0])

    return _from_file

