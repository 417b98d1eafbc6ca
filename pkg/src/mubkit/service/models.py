"""Request and response schemas for the HTTP surface.

The same models validate CLI configs, so the two entry points cannot
drift apart.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator

CheckName = Literal[
    "field",
    "classes",
    "group_law",
    "powers",
    "hs",
    "unbiasedness",
    "eigenstates",
    "wf",
    "covariance",
]


class FieldRequest(BaseModel):
    p: int = Field(ge=2)
    m: int = Field(default=1, ge=1)
    format: Literal["json", "csv", "pretty"] = "json"


class MubsRequest(BaseModel):
    p: int = Field(ge=2)
    m: int = Field(default=1, ge=1)
    phase_k: int = Field(default=0, ge=0)


class VerifyRequest(BaseModel):
    p: int = Field(ge=2)
    m: int = Field(default=1, ge=1)
    phase_k: int = Field(default=0, ge=0)
    dense_cap: int | None = Field(default=None, ge=0)
    inject_phase_error: bool = False
    checks: list[CheckName] | None = None


class MatrixJSON(BaseModel):
    """Dense complex matrix as parallel real/imaginary nested arrays."""

    re: list[list[float]]
    im: list[list[float]]

    @model_validator(mode="after")
    def _shapes_agree(self) -> "MatrixJSON":
        n = len(self.re)
        if n == 0 or any(len(row) != n for row in self.re):
            raise ValueError("re must be a nonempty square array")
        if len(self.im) != n or any(len(row) != n for row in self.im):
            raise ValueError("im must match the shape of re")
        return self


class TomoRequest(BaseModel):
    p: int = Field(ge=2)
    m: int = Field(default=1, ge=1)
    phase_k: int = Field(default=0, ge=0)
    seeds: int = Field(default=10, ge=1, le=10_000)
    tol: float = Field(default=1e-9, gt=0)
    rho: MatrixJSON | None = None


class RingRequest(BaseModel):
    n: int = Field(ge=2)


class ReportModel(BaseModel):
    name: str
    passed: bool
    checked: int
    failures: list[dict]
    info: dict


class StateModel(BaseModel):
    k: int
    kind: Literal["delta", "phase"]
    exponents: list[int] | None


class BasisModel(BaseModel):
    i: int
    states: list[StateModel]


class FamilyResponse(BaseModel):
    p: int
    m: int
    N: int
    poly: list[int]
    phase_denominator: int
    phase_k: int
    bases: list[BasisModel]


class FieldResponse(BaseModel):
    p: int
    m: int
    N: int
    poly: list[int]
    field_mul: list[list[int]]
    field_add: list[list[int]]
    mod_mul: list[list[int]]
    mod_add: list[list[int]]


class VerifyResponse(BaseModel):
    p: int
    m: int
    N: int
    phase_k: int
    passed: bool
    reports: list[ReportModel]


class TomoResponse(BaseModel):
    p: int
    m: int
    N: int
    passed: bool
    seeds: int
    tol: float
    worst_displacement_err: float
    worst_measurement_err: float
    reconstructed: MatrixJSON | None = None
    probabilities: list[list[float]] | None = None


class RingClassModel(BaseModel):
    members: list[list[int]]


class RingUnbiasedness(BaseModel):
    max_deviation: float
    pairs: list[dict]
    best_subset: list[int] | None
    best_subset_max_deviation: float | None


class RingResponse(BaseModel):
    N: int
    class_count: int
    classes: list[RingClassModel]
    degenerate_classes: list[int]
    unbiasedness: RingUnbiasedness
