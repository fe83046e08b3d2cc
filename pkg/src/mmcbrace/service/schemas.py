"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class AutRequest(BaseModel):
    shape: list[int] = Field(min_length=1, description="cyclic factor orders, e.g. [2, 16]")
    bound: Optional[int] = None


class AutResponse(BaseModel):
    shape: list[int]
    aut_order: int
    sylow2_order: int


class CensusRequest(BaseModel):
    m: int = Field(ge=3)
    shape: list[int] = Field(min_length=1)
    unpruned_oracle: bool = False
    workers: Optional[int] = Field(default=None, ge=1)
    time_budget_seconds: Optional[float] = Field(default=None, gt=0)
    bound: Optional[int] = None


class CensusSummary(BaseModel):
    subgroup_count: int
    iso_class_count: int
    per_socle_classes: dict[str, int]
    oracle_match: Optional[bool] = None


class CensusResponse(BaseModel):
    census: dict
    summary: CensusSummary
    table: str


class ScanRequest(BaseModel):
    m: int = Field(ge=3)
    time_budget_seconds: Optional[float] = Field(default=None, gt=0)
    bound: Optional[int] = None


class ScanRow(BaseModel):
    shape: list[int]
    exists: bool
    subgroup_count: int
    iso_class_count: int


class ScanResponse(BaseModel):
    m: int
    rows: list[ScanRow]


class FamiliesRequest(BaseModel):
    m: int = Field(ge=3)


class FamiliesResponse(BaseModel):
    m: int
    descriptors: list[dict]
    class_count: int
    per_socle_classes: dict[str, int]


class VerifyRequest(BaseModel):
    m: int
    unpruned_oracle: bool = False
    workers: Optional[int] = Field(default=None, ge=1)
    time_budget_seconds: Optional[float] = Field(default=None, gt=0)
    bound: Optional[int] = None


class VerifyResponse(BaseModel):
    m: int
    passed: bool
    items: list[dict]


class NormalizeRequest(BaseModel):
    census: dict


class NormalizeResponse(BaseModel):
    census: dict


class HealthResponse(BaseModel):
    status: str
    version: str
