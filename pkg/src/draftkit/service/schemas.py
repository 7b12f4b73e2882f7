"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field


class CreateSessionRequest(BaseModel):
    set_code: str
    agent: str


class SessionCreated(BaseModel):
    session_id: str


class RecommendRequest(BaseModel):
    pack: list[str] = Field(min_length=1, max_length=15)


class RecommendationItem(BaseModel):
    name: str
    score: float
    adherent: bool


class RecommendResponse(BaseModel):
    ranked: list[RecommendationItem]
    agent_id: str
    prompt_used: str | None = None


class PickRequest(BaseModel):
    card: str
    # the pack the card was taken from, when the client knows it; kept in
    # the session's pick history for later review/export
    pack: list[str] = Field(default_factory=list, max_length=15)


class PickResponse(BaseModel):
    pool_size: int
    color_counts: dict[str, int]
    primary_pair: list[str]


class PickHistoryEntry(BaseModel):
    pack: list[str]
    chosen: str


class SessionResponse(BaseModel):
    session_id: str
    set_code: str
    agent: str
    created_at: float
    picks_made: int
    pool: list[str]
    # pool names bucketed W/U/B/R/G/multicolor/colorless server-side, so
    # clients can render the sidebar without any card knowledge
    pool_grouped: dict[str, list[str]]
    pick_history: list[PickHistoryEntry]
    color_counts: dict[str, int]
    primary_pair: list[str]
    complete: bool


class CardsResponse(BaseModel):
    names: list[str]


class EvalJobRequest(BaseModel):
    dataset_path: str
    agent: str
    mode: str = "name"
    limit: int | None = None
    set_code: str | None = None


class JobCreated(BaseModel):
    job_id: str


class JobStatus(BaseModel):
    job_id: str
    status: str
    report: dict | None = None
    error: str | None = None
