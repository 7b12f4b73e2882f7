"""Drafting agents behind one decision interface: seeded-random,
color-greedy, pick-frequency, and a remote chat-completion agent with
free-text response resolution and illegality classification.

All agents are total: they return a decision for every valid event and
never raise on arbitrary response text.
"""

from __future__ import annotations

import json
import threading
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from random import Random

import httpx

from .cards import CardSet, RenderMode
from .datalog import PickEvent
from .draft import color_profile, is_adherent
from .errors import AuthFailedError, EndpointUnreachableError
from .prompts import build_prompt
from .text import levenshtein, normalize_name, normalize_response

Agent = Callable[[PickEvent], "AgentDecision"]


class Legality(str, Enum):
    LEGAL = "legal"
    NOT_OFFERED = "not_offered"
    UNCLEAR = "unclear"


@dataclass(frozen=True)
class AgentDecision:
    """A resolved choice. legality is LEGAL exactly when chosen is present
    and offered in the pack; NOT_OFFERED decisions carry the resolved
    out-of-pack name, UNCLEAR ones carry none."""

    chosen: str | None
    raw_response: str
    legality: Legality
    latency_ms: float
    agent_id: str


@dataclass
class FrequencyTable:
    """Per-card (times_picked, times_seen) built from a training split.

    A card is "seen" once per event in which it was offered (names, not
    copies, are the decision unit)."""

    pick_rate: dict[str, tuple[int, int]] = field(default_factory=dict)

    @classmethod
    def from_events(cls, events: Iterable[PickEvent]) -> "FrequencyTable":
        table: dict[str, list[int]] = {}
        for event in events:
            for name in set(event.pack):
                entry = table.setdefault(name, [0, 0])
                entry[1] += 1
            table[event.chosen][0] += 1
        return cls(pick_rate={k: (v[0], v[1]) for k, v in table.items()})

    def rate(self, name: str) -> float:
        picked, seen = self.pick_rate.get(name, (0, 0))
        return picked / seen if seen else 0.0

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as out:
            json.dump({k: list(v) for k, v in self.pick_rate.items()}, out)

    @classmethod
    def load(cls, path: str | Path) -> "FrequencyTable":
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
        return cls(pick_rate={k: (int(v[0]), int(v[1])) for k, v in raw.items()})


# --- response resolution -----------------------------------------------------


def _substring_hit(normalized_raw: str, candidates: dict[str, str]) -> str | None:
    """candidates maps normalized name -> canonical name. When several
    distinct names occur, the one whose last occurrence starts latest wins
    (models conclude with their final answer); equal starts prefer the
    longer name (nested names)."""
    hits: list[tuple[int, int, str]] = []
    for norm, canonical in candidates.items():
        if not norm:
            continue
        pos = normalized_raw.rfind(norm)
        if pos >= 0:
            hits.append((pos, len(norm), canonical))
    if not hits:
        return None
    hits.sort()
    return hits[-1][2]


def _edit_hit(
    normalized_line: str, candidates: dict[str, str], max_distance: int = 2
) -> tuple[str | None, bool]:
    """Closest candidate to the line within max_distance edits.

    Returns (name, unique). Ties at the minimum distance resolve to the
    lexicographically-first canonical name with unique=False.
    """
    if not normalized_line:
        return None, False
    best: list[tuple[int, str]] = []
    for norm, canonical in candidates.items():
        dist = levenshtein(normalized_line, norm, limit=max_distance)
        if dist <= max_distance:
            best.append((dist, canonical))
    if not best:
        return None, False
    best.sort()
    lowest = [name for dist, name in best if dist == best[0][0]]
    return sorted(lowest)[0], len(lowest) == 1


def resolve_response(
    raw: str,
    pack: Iterable[str],
    card_set: CardSet | None = None,
) -> tuple[str | None, Legality]:
    """Mechanized grading of a free-text drafting response.

    Pipeline: exact match of the whole normalized text against pack names;
    then substring occurrence (last occurrence wins on multiples); then
    minimum-edit-distance (<= 2) of the last line; then, with a card set,
    the same search over the whole set to classify picks of real cards that
    were not offered; everything else is unclear.
    """
    pack_names = sorted(set(pack))
    normalized_raw = normalize_response(raw)
    by_norm = {normalize_response(name): name for name in pack_names}

    if normalized_raw in by_norm:
        return by_norm[normalized_raw], Legality.LEGAL

    hit = _substring_hit(normalized_raw, by_norm)
    if hit is not None:
        return hit, Legality.LEGAL

    last_line = ""
    for line in reversed(raw.splitlines()):
        last_line = normalize_response(line)
        if last_line:
            break
    hit, _ = _edit_hit(last_line, by_norm)
    if hit is not None:
        return hit, Legality.LEGAL

    if card_set is not None:
        set_by_norm = {
            normalize_response(card.name): card.name for card in card_set.cards
        }
        if normalized_raw in set_by_norm:
            return set_by_norm[normalized_raw], Legality.NOT_OFFERED
        hit = _substring_hit(normalized_raw, set_by_norm)
        if hit is not None:
            return hit, Legality.NOT_OFFERED
        hit, unique = _edit_hit(last_line, set_by_norm)
        if hit is not None and unique:
            return hit, Legality.NOT_OFFERED

    return None, Legality.UNCLEAR


# --- offline agents ----------------------------------------------------------


def random_agent(event: PickEvent, seed: int) -> AgentDecision:
    """Uniform choice over the pack multiset, deterministic per (seed, event)."""
    rng = Random(
        f"{seed}:{event.draft_id}:{event.pack_number}:{event.pick_number}"
    )
    chosen = rng.choice(sorted(event.pack))
    return AgentDecision(
        chosen=chosen,
        raw_response=chosen,
        legality=Legality.LEGAL,
        latency_ms=0.0,
        agent_id=f"random-{seed}",
    )


def color_greedy_agent(event: PickEvent, card_set: CardSet) -> AgentDecision:
    """First adherent card in lexicographic order; first card overall when
    nothing adheres to the pool's primary color pair."""
    profile = color_profile(event.pool, card_set)
    names = sorted(set(event.pack))
    adherent = [
        n
        for n in names
        if is_adherent(card_set.name_index[normalize_name(n)], profile)
    ]
    chosen = adherent[0] if adherent else names[0]
    return AgentDecision(
        chosen=chosen,
        raw_response=chosen,
        legality=Legality.LEGAL,
        latency_ms=0.0,
        agent_id="color-greedy",
    )


def frequency_agent(event: PickEvent, table: FrequencyTable) -> AgentDecision:
    """Highest historical pick rate in the pack, ties lexicographic, unseen
    cards rated 0."""
    names = sorted(set(event.pack))
    chosen = sorted(names, key=lambda n: (-table.rate(n), n))[0]
    return AgentDecision(
        chosen=chosen,
        raw_response=chosen,
        legality=Legality.LEGAL,
        latency_ms=0.0,
        agent_id="frequency",
    )


# --- remote LLM agent ---------------------------------------------------------


@dataclass
class LlmEndpointConfig:
    """Chat-completion endpoint parameters. api_key should come from the
    environment; it is excluded from repr so it never reaches logs."""

    base_url: str
    model: str
    api_key: str = field(default="", repr=False)
    max_output_tokens: int = 30
    temperature: float = 0.0
    timeout_ms: int = 30_000
    max_retries: int = 3
    max_concurrency: int = 4
    backoff_base_ms: float = 250.0

    def __post_init__(self):
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be >= 1")
        if self.max_concurrency < 1:
            raise ValueError("max_concurrency must be >= 1")


class LlmClient:
    """Thread-safe chat-completion client with bounded concurrency and
    exponential-backoff retries on transient failures (transport errors,
    5xx, 429).

    in-flight request count never exceeds max_concurrency; the observed
    maximum is exposed for tests via max_inflight_seen.
    """

    def __init__(
        self,
        config: LlmEndpointConfig,
        transport: httpx.BaseTransport | None = None,
    ):
        self.config = config
        self._semaphore = threading.BoundedSemaphore(config.max_concurrency)
        self._lock = threading.Lock()
        self._inflight = 0
        self.max_inflight_seen = 0
        headers = {}
        if config.api_key:
            headers["Authorization"] = f"Bearer {config.api_key}"
        self._http = httpx.Client(
            base_url=config.base_url.rstrip("/"),
            timeout=config.timeout_ms / 1000.0,
            headers=headers,
            transport=transport,
        )

    def close(self) -> None:
        self._http.close()

    def complete(self, prompt: str) -> tuple[str, float]:
        """POST one single-user-message completion request. Returns
        (response text, latency in ms)."""
        body = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "max_tokens": self.config.max_output_tokens,
            "temperature": self.config.temperature,
        }
        start = time.perf_counter()
        last_error = "no attempts made"
        with self._semaphore:
            with self._lock:
                self._inflight += 1
                self.max_inflight_seen = max(self.max_inflight_seen, self._inflight)
            try:
                for attempt in range(self.config.max_retries + 1):
                    if attempt:
                        delay = (
                            self.config.backoff_base_ms / 1000.0 * (2 ** (attempt - 1))
                        )
                        time.sleep(delay)
                    try:
                        response = self._http.post("/chat/completions", json=body)
                    except httpx.HTTPError as exc:
                        last_error = f"{type(exc).__name__}: {exc}"
                        continue
                    if response.status_code in (401, 403):
                        raise AuthFailedError(
                            str(self._http.base_url), response.status_code
                        )
                    if response.status_code == 429 or response.status_code >= 500:
                        last_error = f"HTTP {response.status_code}"
                        continue
                    response.raise_for_status()
                    data = response.json()
                    text = data["choices"][0]["message"]["content"]
                    latency = (time.perf_counter() - start) * 1000.0
                    return text, latency
            finally:
                with self._lock:
                    self._inflight -= 1
        raise EndpointUnreachableError(
            str(self._http.base_url), self.config.max_retries + 1, last_error
        )


def llm_agent(
    event: PickEvent,
    card_set: CardSet,
    mode: RenderMode,
    endpoint: LlmEndpointConfig | LlmClient,
) -> AgentDecision:
    """One chat-completion round trip for one pick decision. Pass an
    LlmClient (not a config) when evaluating many events so the concurrency
    bound and connection pool are shared."""
    client = endpoint if isinstance(endpoint, LlmClient) else LlmClient(endpoint)
    prompt = build_prompt(event.pool, event.pack, card_set, mode)
    raw, latency = client.complete(prompt.text)
    chosen, legality = resolve_response(raw, event.pack, card_set)
    if legality is not Legality.LEGAL:
        chosen_out = chosen if legality is Legality.NOT_OFFERED else None
    else:
        chosen_out = chosen
    return AgentDecision(
        chosen=chosen_out,
        raw_response=raw,
        legality=legality,
        latency_ms=latency,
        agent_id=f"llm:{client.config.model}:{mode.value}",
    )


# --- factories: bind parameters into the uniform Agent callable ---------------


def make_random_agent(seed: int) -> Agent:
    return lambda event: random_agent(event, seed)


def make_color_greedy_agent(card_set: CardSet) -> Agent:
    return lambda event: color_greedy_agent(event, card_set)


def make_frequency_agent(table: FrequencyTable) -> Agent:
    return lambda event: frequency_agent(event, table)


def make_llm_agent(
    card_set: CardSet,
    mode: RenderMode,
    config: LlmEndpointConfig,
    transport: httpx.BaseTransport | None = None,
) -> Agent:
    client = LlmClient(config, transport=transport)
    return lambda event: llm_agent(event, card_set, mode, client)
