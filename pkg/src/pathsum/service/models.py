"""Request/response models for the HTTP API."""

from __future__ import annotations

import math

from pydantic import BaseModel, Field, field_validator


class FeaturesPayload(BaseModel):
    data: list[list[float]] = Field(min_length=1)
    fps: float = Field(gt=0)

    @field_validator("data")
    @classmethod
    def rectangular_and_finite(cls, v):
        dim = len(v[0])
        for i, row in enumerate(v):
            if len(row) != dim or dim == 0:
                raise ValueError(f"row {i} has arity {len(row)}, expected {dim}")
            if not all(math.isfinite(x) for x in row):
                raise ValueError(f"row {i} contains a non-finite value")
        return v


class BuildGraphRequest(BaseModel):
    features: FeaturesPayload
    m_hops: int = Field(ge=1)
    sigma: float = Field(gt=0)


class Edge(BaseModel):
    i: int  # 1-based
    j: int
    w: float


class BuildGraphResponse(BaseModel):
    n: int
    m_hops: int
    edges: list[Edge]


class UnfoldRequest(BaseModel):
    features: FeaturesPayload
    m_hops: int = Field(ge=1)
    sigma: float = Field(gt=0)
    beta: float


class PathLaplacianPayload(BaseModel):
    sub_weights: list[float]
    self_loops: list[float]


class SampleRequest(BaseModel):
    laplacian: PathLaplacianPayload
    mu: float = Field(gt=0)
    budget: int | None = Field(default=None, ge=1)
    threshold: float | None = None
    eps: float = Field(default=1e-9, gt=0)


class SampleResponse(BaseModel):
    samples: list[int]
    h: list[int]
    partitions: list[tuple[int, int, int]]
    scalars: list[float]
    threshold: float
    exhausted: bool


class KeyframesRequest(BaseModel):
    features: FeaturesPayload
    m_hops: int = Field(default=2, ge=1)
    sigma: float = Field(default=6.0, gt=0)
    beta: float = 2.0
    mu: float = Field(default=0.05, gt=0)
    budget: int = Field(ge=1)
    eps: float = Field(default=1e-9, gt=0)
    source_fps: float | None = Field(default=None, gt=0)


class Keyframe(BaseModel):
    node: int
    frame: int
    time_sec: float


class KeyframesResponse(BaseModel):
    keyframes: list[Keyframe]
    threshold: float
    exhausted: bool


class BenchRequest(BaseModel):
    features: FeaturesPayload | None = None
    m_hops: int = Field(default=2, ge=1)
    sigma: float = Field(default=6.0, gt=0)
    n_synthetic: int | None = Field(default=None, ge=4)
    betas: list[float] = [2.0, 0.0]
    budgets: list[int] = Field(min_length=1)
    signal_class: str = "BL"
    snr_db: float | None = None  # null means noise-free
    trials: int = Field(default=100, ge=1)
    mu: float = Field(default=0.05, gt=0)
    eps: float = Field(default=1e-9, gt=0)
    seed: int = 0


class BenchRowModel(BaseModel):
    signal_class: str
    snr_db: float | None  # null means noise-free
    beta: float
    budget: int
    method: str
    mean_mse: float
    stderr: float
    trials: int
    seed: int


class BenchResponse(BaseModel):
    rows: list[BenchRowModel]
    csv: str


class SummaryPayload(BaseModel):
    frame_indices: list[int]
    fps: float = Field(gt=0)


class EvalRequest(BaseModel):
    automatic: SummaryPayload
    users: list[SummaryPayload] = Field(min_length=1)
    window_sec: float = Field(default=2.5, gt=0)


class UserScore(BaseModel):
    precision: float
    recall: float
    f1: float
    degenerate: bool  # a 0/0 ratio was mapped to 0


class EvalResponse(BaseModel):
    per_user: list[UserScore]
    mean_p: float
    mean_r: float
    mean_f1: float
