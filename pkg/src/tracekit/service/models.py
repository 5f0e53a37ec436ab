"""Request/response models for the HTTP service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class EvalRequest(BaseModel):
    workspace: dict
    term: str
    instance: Optional[str] = None
    run: Optional[list] = None


class MorphismOut(BaseModel):
    instance: str
    dom: list
    cod: list
    payload: dict
    text: str


class EvalResponse(BaseModel):
    dom: list
    cod: list
    morphism: MorphismOut
    outputs: Optional[Any] = None


class CheckRequest(BaseModel):
    instance: str
    axiom: str = "all"
    samples: int = Field(default=100, ge=0)
    seed: int = 0


class FailureOut(BaseModel):
    sample: int
    description: str
    lhs: str
    rhs: str


class AxiomReportOut(BaseModel):
    axiom: str
    samples: int
    passed: bool
    failures: list[FailureOut]
    skipped: Optional[str] = None


class CheckResponse(BaseModel):
    instance: str
    seed: int
    reports: list[AxiomReportOut]
    passed: bool


class BisimRequest(BaseModel):
    left: dict
    right: dict


class BisimResponse(BaseModel):
    equivalent: bool
    witness: Optional[list] = None


class PlaysRequest(BaseModel):
    workspace: dict
    term: str
    instance: Optional[str] = None
    depth: int = Field(ge=0)


class PlaysResponse(BaseModel):
    plays: list[str]


class TraceLogRequest(BaseModel):
    workspace: dict
    term: str
    instance: Optional[str] = None


class TraceLogResponse(BaseModel):
    lines: list[str]


class InstancesResponse(BaseModel):
    instances: list[str]
