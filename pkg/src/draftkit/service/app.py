"""HTTP service hosting live draft-companion sessions and batch evaluation
jobs. All errors use the shape {"error": {"code": ..., "message": ...}}."""

from __future__ import annotations

import itertools
import logging
import time
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..agents import (
    FrequencyTable,
    Legality,
    LlmClient,
    color_greedy_agent,
    frequency_agent,
    llm_agent,
    random_agent,
)
from ..cards import CardSet, RenderMode, fuzzy_lookup, load_card_set, lookup
from ..datalog import ParseConfig, PickEvent, parse_draft_csv
from ..draft import color_profile, is_adherent
from ..errors import (
    AuthFailedError,
    CardNotFoundError,
    EndpointUnreachableError,
)
from ..evaluate import evaluate
from ..prompts import build_prompt
from ..text import normalize_name
from .config import ServiceConfig
from .jobs import JobRunner
from .schemas import (
    CardsResponse,
    CreateSessionRequest,
    EvalJobRequest,
    JobCreated,
    JobStatus,
    PickRequest,
    PickResponse,
    RecommendationItem,
    RecommendRequest,
    RecommendResponse,
    SessionCreated,
    SessionResponse,
)
from .store import MAX_PICKS, DraftSessionComplete, Session, SessionStore

log = logging.getLogger("draftkit.service")

AGENT_NAMES = ("random", "greedy", "frequency", "llm")
RANDOM_AGENT_SEED = 1717


def api_error(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "message": message})


class Engine:
    """Shared state behind the routes: card sets, sessions, agents, jobs."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.card_sets: dict[str, CardSet] = {
            code: load_card_set(path, code) for code, path in config.card_sets.items()
        }
        self.store = SessionStore(config.persistence_dir)
        self.jobs = JobRunner(workers=2)
        self.frequency_table: FrequencyTable | None = None
        if config.frequency_table:
            self.frequency_table = FrequencyTable.load(config.frequency_table)
        self.llm_client: LlmClient | None = None
        if config.llm:
            self.llm_client = LlmClient(config.llm)

    def available_agents(self) -> list[str]:
        names = ["random", "greedy"]
        if self.frequency_table is not None:
            names.append("frequency")
        if self.llm_client is not None:
            names.append("llm")
        return names

    def card_set(self, set_code: str) -> CardSet:
        card_set = self.card_sets.get(set_code)
        if card_set is None:
            raise api_error(400, "UnknownSet", f"set {set_code!r} is not loaded")
        return card_set

    def resolve_pack(self, card_set: CardSet, names: list[str]) -> list[str]:
        """Fuzzy-resolve submitted names to canonical ones; 422 lists every
        name that cannot be resolved."""
        resolved: list[str] = []
        offenders: list[str] = []
        for name in names:
            try:
                resolved.append(fuzzy_lookup(card_set, name).name)
            except CardNotFoundError:
                offenders.append(name)
        if offenders:
            raise api_error(
                422, "UnknownCard", "unknown cards: " + ", ".join(offenders)
            )
        return resolved

    def decide(self, session: Session, card_set: CardSet, pack: list[str]):
        """Run the session's agent over a pseudo pick event for this pack.
        Returns (decision, prompt_text_or_None)."""
        picks_made = len(session.pick_history)
        event = PickEvent(
            draft_id=session.session_id,
            pack_number=min(picks_made // 15, 2),
            pick_number=picks_made % 15,
            pool=tuple(sorted(session.pool)),
            pack=tuple(sorted(pack)),
            chosen=sorted(pack)[0],
        )
        if session.agent == "random":
            return random_agent(event, RANDOM_AGENT_SEED), None
        if session.agent == "greedy":
            return color_greedy_agent(event, card_set), None
        if session.agent == "frequency":
            return frequency_agent(event, self.frequency_table), None
        if session.agent == "llm":
            prompt = build_prompt(event.pool, event.pack, card_set, RenderMode.NAME_ONLY)
            try:
                decision = llm_agent(event, card_set, RenderMode.NAME_ONLY, self.llm_client)
            except (EndpointUnreachableError, AuthFailedError) as exc:
                raise api_error(502, "AgentUnavailable", str(exc)) from exc
            return decision, prompt.text
        raise api_error(400, "UnknownAgent", f"agent {session.agent!r} not registered")


def create_app(config: ServiceConfig) -> FastAPI:
    engine = Engine(config)
    app = FastAPI(title="draftkit", version="0.1.0")
    app.state.engine = engine

    @app.exception_handler(HTTPException)
    async def shape_errors(request: Request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, dict) or "code" not in detail:
            detail = {"code": "Error", "message": str(exc.detail)}
        return JSONResponse(status_code=exc.status_code, content={"error": detail})

    @app.middleware("http")
    async def request_logging(request: Request, call_next):
        start = time.perf_counter()
        response = await call_next(request)
        log.info(
            "%s %s -> %d (%.1f ms)",
            request.method,
            request.url.path,
            response.status_code,
            (time.perf_counter() - start) * 1000,
        )
        return response

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "sets": sorted(engine.card_sets)}

    @app.post("/v1/sessions", response_model=SessionCreated, status_code=201)
    def create_session(body: CreateSessionRequest):
        engine.card_set(body.set_code)
        if body.agent not in AGENT_NAMES:
            raise api_error(400, "UnknownAgent", f"agent {body.agent!r} unknown")
        if body.agent not in engine.available_agents():
            raise api_error(
                400, "UnknownAgent", f"agent {body.agent!r} is not configured"
            )
        session = engine.store.create(body.set_code, body.agent)
        return SessionCreated(session_id=session.session_id)

    def session_or_404(session_id: str) -> Session:
        session = engine.store.get(session_id)
        if session is None:
            raise api_error(404, "NoSession", f"no session {session_id!r}")
        return session

    def session_view(session: Session) -> SessionResponse:
        card_set = engine.card_sets[session.set_code]
        profile = color_profile(session.pool, card_set)
        grouped: dict[str, list[str]] = {
            key: [] for key in ("W", "U", "B", "R", "G", "multicolor", "colorless")
        }
        for name in sorted(session.pool):
            colors = lookup(card_set, name).colors
            if not colors:
                grouped["colorless"].append(name)
            elif len(colors) > 1:
                grouped["multicolor"].append(name)
            else:
                grouped[next(iter(colors))].append(name)
        return SessionResponse(
            session_id=session.session_id,
            set_code=session.set_code,
            agent=session.agent,
            created_at=session.created_at,
            picks_made=len(session.pick_history),
            pool=session.pool,
            pool_grouped=grouped,
            pick_history=[
                {"pack": pack, "chosen": chosen}
                for pack, chosen in session.pick_history
            ],
            color_counts=profile.counts,
            primary_pair=list(profile.primary_pair),
            complete=session.complete,
        )

    @app.get("/v1/sessions/{session_id}", response_model=SessionResponse)
    def get_session(session_id: str):
        return session_view(session_or_404(session_id))

    @app.post("/v1/sessions/{session_id}/recommend", response_model=RecommendResponse)
    def recommend(session_id: str, body: RecommendRequest):
        session = session_or_404(session_id)
        card_set = engine.card_set(session.set_code)
        pack = engine.resolve_pack(card_set, body.pack)
        profile = color_profile(session.pool, card_set)
        adherent = {
            name: is_adherent(lookup(card_set, name), profile)
            for name in set(pack)
        }
        decision, prompt_used = engine.decide(session, card_set, pack)

        names = sorted(set(pack))
        if session.agent == "frequency":
            ordered = sorted(
                names, key=lambda n: (-engine.frequency_table.rate(n), n)
            )
            items = [
                RecommendationItem(
                    name=n,
                    score=engine.frequency_table.rate(n),
                    adherent=adherent[n],
                )
                for n in ordered
            ]
        else:
            chosen = (
                decision.chosen
                if decision.legality is Legality.LEGAL and decision.chosen in names
                else None
            )
            rest = sorted(
                (n for n in names if n != chosen),
                key=lambda n: (not adherent[n], n),
            )
            ordered = ([chosen] if chosen else []) + rest
            count = len(ordered)
            items = [
                RecommendationItem(
                    name=n,
                    score=(count - i) / count,
                    adherent=adherent[n],
                )
                for i, n in enumerate(ordered)
            ]
        return RecommendResponse(
            ranked=items,
            agent_id=decision.agent_id,
            prompt_used=prompt_used,
        )

    @app.post("/v1/sessions/{session_id}/picks", response_model=PickResponse)
    def record_pick(session_id: str, body: PickRequest):
        session = session_or_404(session_id)
        card_set = engine.card_set(session.set_code)
        try:
            card = fuzzy_lookup(card_set, body.card).name
        except CardNotFoundError:
            raise api_error(422, "UnknownCard", f"unknown card: {body.card}") from None
        pack = engine.resolve_pack(card_set, body.pack) if body.pack else []
        try:
            session = engine.store.append_pick(session_id, pack, card)
        except DraftSessionComplete:
            raise api_error(
                409,
                "DraftComplete",
                f"session already holds {MAX_PICKS} picks",
            ) from None
        profile = color_profile(session.pool, card_set)
        return PickResponse(
            pool_size=len(session.pool),
            color_counts=profile.counts,
            primary_pair=list(profile.primary_pair),
        )

    @app.get("/v1/cards", response_model=CardsResponse)
    def autocomplete_cards(
        set_code: str = Query(alias="set"), q: str = "", limit: int = 20
    ):
        card_set = engine.card_set(set_code)
        needle = normalize_name(q)
        names = sorted(card_set.names())
        prefix = [n for n in names if normalize_name(n).startswith(needle)]
        taken = set(prefix)
        rest = [
            n
            for n in names
            if needle and needle in normalize_name(n) and n not in taken
        ]
        return CardsResponse(names=(prefix + rest)[: max(0, min(limit, 20))])

    @app.post("/v1/eval/jobs", response_model=JobCreated, status_code=201)
    def create_eval_job(body: EvalJobRequest):
        if body.agent not in engine.available_agents():
            raise api_error(400, "UnknownAgent", f"agent {body.agent!r} unavailable")
        if not body.dataset_path:
            raise api_error(400, "BadPath", "dataset_path must be nonempty")
        set_code = body.set_code or engine.config.default_set
        card_set = engine.card_set(set_code)
        mode = RenderMode.FULL_TEXT if body.mode == "text" else RenderMode.NAME_ONLY
        agent_name = body.agent
        limit = body.limit

        def work() -> dict:
            events_iter, _report = parse_draft_csv(
                body.dataset_path, card_set, ParseConfig()
            )
            if limit:
                events = list(itertools.islice(events_iter, limit))
            else:
                events = list(events_iter)
            if agent_name == "random":
                agent = lambda e: random_agent(e, RANDOM_AGENT_SEED)
            elif agent_name == "greedy":
                agent = lambda e: color_greedy_agent(e, card_set)
            elif agent_name == "frequency":
                agent = lambda e: frequency_agent(e, engine.frequency_table)
            else:
                agent = lambda e: llm_agent(e, card_set, mode, engine.llm_client)
            report = evaluate(agent, events, card_set, mode)
            return report.to_dict()

        return JobCreated(job_id=engine.jobs.submit(work))

    @app.get("/v1/eval/jobs/{job_id}", response_model=JobStatus)
    def job_status(job_id: str):
        job = engine.jobs.get(job_id)
        if job is None:
            raise api_error(404, "NoJob", f"no job {job_id!r}")
        return JobStatus(
            job_id=job.job_id, status=job.status, report=job.report, error=job.error
        )

    if config.ui_dir and Path(config.ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app

