"""
Data schemas for code specs and analysis reports.

SpecFile is the on-disk form of a code spec (TOML or JSON). The report models are
what the analysis functions return and what the CLI serializes.
"""

from enum import Enum
from typing import Optional, Union

from pydantic import BaseModel, Field, model_validator


ElementRef = Union[int, str]
SubsetEntry = Union[list[ElementRef], dict[str, int]]
MatrixEntry = Union[int, list[ElementRef]]


class GroupKind(str, Enum):
    TORUS = "torus"
    CYCLIC = "cyclic"
    CAYLEY = "cayley"
    SYMMETRIC = "symmetric"
    DIHEDRAL = "dihedral"


class GroupBlock(BaseModel):
    kind: GroupKind
    dims: Optional[list[int]] = None
    order: Optional[int] = Field(default=None, ge=1)
    degree: Optional[int] = Field(default=None, ge=1)
    path: Optional[str] = None

    @model_validator(mode="after")
    def _required_for_kind(self) -> "GroupBlock":
        required = {
            GroupKind.TORUS: "dims",
            GroupKind.CYCLIC: "order",
            GroupKind.CAYLEY: "path",
            GroupKind.SYMMETRIC: "degree",
            GroupKind.DIHEDRAL: "degree",
        }[self.kind]
        if getattr(self, required) is None:
            raise ValueError(f"group kind '{self.kind.value}' needs '{required}'")
        if self.dims is not None and (not 1 <= len(self.dims) <= 3 or min(self.dims) < 1):
            raise ValueError("torus dims are one to three positive sizes")
        return self


class SpecFile(BaseModel):
    group: GroupBlock
    q: int = Field(ge=1)
    d: int = Field(default=2, ge=2)
    A: list[SubsetEntry]
    B: list[SubsetEntry]
    matrices: list[list[list[MatrixEntry]]] = Field(min_length=1)
    check_matrices: bool = True
    name: Optional[str] = None


class Violation(BaseModel):
    first: int
    second: int
    value: int
    first_label: str
    second_label: str


class CommutationReport(BaseModel):
    total_pairs: int
    pairs_checked: int
    violations: list[Violation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class DegeneracyResult(BaseModel):
    n_qubits: int
    n_generators: int
    rank: int
    logical_count: int
    modulus: int = 2
    log_degeneracy: int
    log2_degeneracy: float


class SweepRow(BaseModel):
    parameters: dict[str, int]
    result: Optional[DegeneracyResult] = None
    annotations: dict[str, Union[int, bool]] = Field(default_factory=dict)
    error: Optional[str] = None


class LocalityResult(BaseModel):
    max_radius: Optional[int] = None
    disconnected: bool = False
    generators: int
    unreachable: list[str] = Field(default_factory=list)


class DistanceResult(BaseModel):
    source: str
    target: str
    distance: Optional[int] = None


class BallResult(BaseModel):
    center: str
    radius: int
    elements: list[str]


class OracleResult(BaseModel):
    n_qudits: int
    modulus: int
    ground_space_dim: int
    rank_prediction: Optional[int] = None
