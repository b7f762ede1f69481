"""Pydantic request/response models for the HTTP service.

These mirror the on-disk report schema: each classified point is
``{uv, rank, class, margins, method}`` and the locus is a list of polylines
of [u, v] samples.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


class SurfaceSpec(BaseModel):
    """Either inline surface text or the name of a bundled surface."""
    text: Optional[str] = None
    name: Optional[str] = None

    @model_validator(mode="after")
    def _one_of(self):
        if (self.text is None) == (self.name is None):
            raise ValueError("give exactly one of text or name")
        return self


class MatrixSpec(BaseModel):
    """A 6x6 matrix, inline or from a bundled family."""
    rows: Optional[list[list[float]]] = None
    name: Optional[str] = None
    xi: float = 0.0

    @model_validator(mode="after")
    def _one_of(self):
        if (self.rows is None) == (self.name is None):
            raise ValueError("give exactly one of rows or name")
        if self.rows is not None:
            if len(self.rows) != 6 or any(len(r) != 6 for r in self.rows):
                raise ValueError("matrix must be 6x6")
        return self


class SteeringSpec(BaseModel):
    point: tuple[float, float] = (0.0, 0.0)
    mode: Literal["generic", "degenerate"] = "generic"
    seed: int = 0
    xi: float = 0.0
    sphere: Optional[int] = Field(default=None, ge=1, le=2)


class ClassifyRequest(BaseModel):
    surface: SurfaceSpec
    matrix: Optional[MatrixSpec] = None
    steering: Optional[SteeringSpec] = None
    grid: tuple[int, int] = (41, 41)
    order: int = Field(default=6, ge=4, le=10)
    domain: Optional[tuple[float, float, float, float]] = None
    max_points: int = Field(default=64, ge=1, le=1024)
    projection_tol: Optional[float] = Field(default=None, gt=0,
                                            description="relative det B cutoff "
                                                        "for masking grid cells")


class PointReport(BaseModel):
    uv: tuple[float, float]
    rank: int
    class_: str = Field(alias="class")
    margins: dict[str, float]
    method: str

    model_config = {"populate_by_name": True}


class RunStats(BaseModel):
    grid: list[int]
    domain: list[float]
    masked_fraction: float
    segments: int


class ClassifyResponse(BaseModel):
    surface: str
    matrixA: Optional[list[list[float]]]
    points: list[PointReport]
    locus: list[list[tuple[float, float]]]
    stats: RunStats
    phat: Optional[list[float]] = None
    steering: Optional[dict] = None

    model_config = {"populate_by_name": True}


class PointRequest(BaseModel):
    """Classify at a single parameter point (no domain scan)."""
    surface: SurfaceSpec
    matrix: Optional[MatrixSpec] = None
    steering: Optional[SteeringSpec] = None
    point: tuple[float, float] = (0.0, 0.0)
    order: int = Field(default=6, ge=4, le=10)


class PointResponse(BaseModel):
    report: PointReport
    agreement: Optional[bool] = None
    direct_class: Optional[str] = None
    lie_class: Optional[str] = None
    sphere_index: Optional[int] = None
    surface_type: Optional[str] = None
    note: Optional[str] = None


class SweepRequest(BaseModel):
    surface: SurfaceSpec
    family: Optional[str] = None           # bundled matrix family name
    steering: Optional[SteeringSpec] = None
    xi_range: tuple[float, float] = (0.0, 1.0)
    samples: int = Field(default=11, ge=3, le=201)
    point: tuple[float, float] = (0.0, 0.0)
    order: int = Field(default=6, ge=4, le=10)

    @model_validator(mode="after")
    def _one_of(self):
        if (self.family is None) == (self.steering is None):
            raise ValueError("give exactly one of family or steering")
        return self


class SweepRow(BaseModel):
    xi: float
    class_: str = Field(alias="class")
    detHess: float

    model_config = {"populate_by_name": True}


class SweepResponse(BaseModel):
    point: tuple[float, float]
    rows: list[SweepRow]
    transition_xi: float
    transition_class: str
    bracket: tuple[float, float]


class SteerRequest(BaseModel):
    surface: SurfaceSpec
    point: tuple[float, float] = (0.0, 0.0)
    target: str
    seed: int = 0
    order: int = Field(default=6, ge=4, le=10)


class SteerResponse(BaseModel):
    matrix: list[list[float]]
    phat: list[float]
    xi: float
    mode: str
    sphere: int
    verification: PointReport


class CheckMatrixRequest(BaseModel):
    matrix: MatrixSpec
    tol: float = Field(default=1e-12, gt=0)


class CheckMatrixResponse(BaseModel):
    is_lie: bool
    residual: float
    tol: float


class MeshRequest(BaseModel):
    surface: SurfaceSpec
    matrix: Optional[MatrixSpec] = None
    steering: Optional[SteeringSpec] = None
    grid: tuple[int, int] = (41, 41)
    domain: Optional[tuple[float, float, float, float]] = None
    locus: Optional[list[list[tuple[float, float]]]] = None  # polylines to embed


class ErrorBody(BaseModel):
    error: str
    message: str
    context: dict = {}
