"""Request and response payloads of the HTTP service.

Graphs travel as the plain-text edge-list format so that a remote client
never needs to share a filesystem with the server.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

Variant = Literal["F0", "F", "SF", "RF", "SFD"]
Policy = Literal["small", "large"]
Mode = Literal["none", "contract", "assumption", "reduced"]


class ErrorBody(BaseModel):
    error: str
    detail: str


class RadiusChoice(BaseModel):
    delta: Optional[float] = Field(None, gt=0)
    policy: Optional[Policy] = None

    @model_validator(mode="after")
    def _one_radius(self):
        if (self.delta is None) == (self.policy is None):
            raise ValueError("give exactly one of delta and policy")
        return self


class RunConfig(RadiusChoice):
    """Shared settings of the command-line client (``--config`` file)."""

    graph: Optional[str] = None
    variant: Variant = "SF"
    backend: Optional[str] = None
    time_limit: float = Field(1800.0, gt=0)
    abs_gap: float = Field(1 - 1e-6, ge=0)
    seed: int = 0
    out: Optional[str] = None


class PreprocessRequest(BaseModel):
    graph: str
    delta: float = Field(gt=0)
    mode: Mode = "assumption"


class PreprocessResponse(BaseModel):
    graph: str
    report: dict


class CoversRequest(BaseModel):
    graph: str
    delta: float = Field(gt=0)
    allow_long: bool = False


class BuildRequest(BaseModel):
    graph: str
    delta: float = Field(gt=0)
    variant: Variant = "SF"
    covers: Optional[dict] = None
    preprocess: bool = True


class BuildResponse(BaseModel):
    lp: str
    counts: dict
    network: list[int]


class SolveRequest(RadiusChoice):
    graph: str
    variant: Variant = "SF"
    backend: Optional[str] = None
    time_limit: float = Field(1800.0, gt=0)
    abs_gap: float = Field(1 - 1e-6, ge=0)
    seed: int = 0


class PointBody(BaseModel):
    node: Optional[int] = None
    edge: Optional[int] = None
    offset: Optional[float] = None


class VerifyRequest(BaseModel):
    graph: str
    delta: float = Field(gt=0)
    placement: list[PointBody]


class VerifyResponse(BaseModel):
    ok: bool
    edge: Optional[int] = None
    interval: Optional[list[float]] = None
    facilities: int


class GenRequest(BaseModel):
    n: int = Field(ge=2)
    p: float = Field(gt=0, le=1)
    seed: int = 0


class GenSetRequest(BaseModel):
    family: str = "random_A"
    seed: int = 0
    policy: Policy = "large"
    sizes: Optional[list[int]] = None
    probabilities: list[float] = [0.1, 0.2, 0.3, 0.4]


class GenSetResponse(BaseModel):
    set: dict
    graphs: dict[str, str]


class BenchInstance(BaseModel):
    id: str
    graph: str
    n: Optional[int] = None
    p: Optional[float] = None
    seed: Optional[int] = None


class BenchRequest(BaseModel):
    name: str
    instances: list[BenchInstance]
    variants: list[Variant] = ["SF", "RF", "SFD"]
    policies: list[Policy] = ["large"]
    time_limit: float = Field(1800.0, gt=0)
    abs_gap: float = Field(1 - 1e-6, ge=0)
    workers: int = Field(3, ge=1)
    backend: Optional[str] = None


class BenchResponse(BaseModel):
    records: list[dict]
    summary: list[dict]
    table: str
    csv: str
    manifest: dict
