"""Replay pick events against an agent and compute accuracy, color
adherence, and illegal-selection rate with Wilson confidence intervals;
also the constructed deck-space lower bound and report comparison tables.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .agents import Agent, AgentDecision, Legality
from .cards import CardSet, RenderMode, lookup
from .datalog import PickEvent
from .draft import color_profile, is_adherent
from .errors import InvalidArgumentsError, NoEventsError


@dataclass(frozen=True)
class EvalReport:
    """Replay metrics over one event collection.

    Illegal decisions count as incorrect and as non-adherent; adherence is
    computed over legal decisions only, so it reflects drafting sense rather
    than parsing failures (color_adherence is None when nothing was legal).
    """

    agent_id: str
    n_events: int
    accuracy: float
    color_adherence: float | None
    illegal_rate: float
    accuracy_ci95: tuple[float, float]
    per_pick_accuracy: dict[tuple[int, int], float] = field(repr=False)
    mode: RenderMode = RenderMode.NAME_ONLY

    def to_dict(self) -> dict:
        return {
            "agent_id": self.agent_id,
            "n_events": self.n_events,
            "accuracy": self.accuracy,
            "color_adherence": self.color_adherence,
            "illegal_rate": self.illegal_rate,
            "accuracy_ci95": list(self.accuracy_ci95),
            "per_pick_accuracy": {
                f"{p}-{k}": v for (p, k), v in sorted(self.per_pick_accuracy.items())
            },
            "mode": self.mode.value,
        }


def wilson_interval(successes: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval; valid at small n, always inside [0, 1] and
    containing the point estimate."""
    if n == 0:
        return (0.0, 1.0)
    phat = successes / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    margin = (z / denom) * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n))
    return (max(0.0, center - margin), min(1.0, center + margin))


def evaluate(
    agent: Agent,
    events: Sequence[PickEvent],
    card_set: CardSet,
    mode: RenderMode = RenderMode.NAME_ONLY,
    workers: int = 1,
) -> EvalReport:
    """Run the agent over every event and aggregate. Metric accumulation is
    commutative counting, so parallel and serial runs agree exactly."""
    events = list(events)
    if not events:
        raise NoEventsError()

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            decisions = list(pool.map(agent, events))
    else:
        decisions = [agent(event) for event in events]

    n = len(events)
    correct = 0
    legal = 0
    adherent = 0
    per_pick: dict[tuple[int, int], list[int]] = {}
    for event, decision in zip(events, decisions):
        is_legal = decision.legality is Legality.LEGAL
        is_correct = is_legal and decision.chosen == event.chosen
        correct += is_correct
        legal += is_legal
        if is_legal:
            profile = color_profile(event.pool, card_set)
            card = lookup(card_set, decision.chosen)
            adherent += is_adherent(card, profile)
        bucket = per_pick.setdefault((event.pack_number, event.pick_number), [0, 0])
        bucket[0] += is_correct
        bucket[1] += 1

    return EvalReport(
        agent_id=decisions[0].agent_id,
        n_events=n,
        accuracy=correct / n,
        color_adherence=(adherent / legal) if legal else None,
        illegal_rate=(n - legal) / n,
        accuracy_ci95=wilson_interval(correct, n),
        per_pick_accuracy={k: v[0] / v[1] for k, v in per_pick.items()},
        mode=mode,
    )


def decisions_of(agent: Agent, events: Sequence[PickEvent]) -> list[AgentDecision]:
    """Convenience for tests and reporting: raw decisions in event order."""
    return [agent(event) for event in events]


def compute_deck_space_bound(
    pool_size: int, copies: int, deck_size: int
) -> float:
    """log10 of binomial(pool_size * copies, deck_size), via log-gamma.

    Exact to well past 6 significant figures for the card-pool sizes in
    range here.
    """
    if pool_size <= 0 or copies <= 0 or deck_size <= 0:
        raise InvalidArgumentsError("all arguments must be positive")
    total = pool_size * copies
    if deck_size > total:
        raise InvalidArgumentsError(
            f"deck_size {deck_size} exceeds pool of {total} cards"
        )
    log_e = (
        math.lgamma(total + 1)
        - math.lgamma(deck_size + 1)
        - math.lgamma(total - deck_size + 1)
    )
    return log_e / math.log(10)


_COLUMNS = ("agent", "mode", "n", "accuracy", "ci_low", "ci_high", "adherence", "illegal")


def compare_reports(reports: Sequence[EvalReport]) -> tuple[str, str]:
    """Render reports as an aligned text table and a CSV string, sorted by
    accuracy descending. Missing metrics render as an em dash in the text
    table and empty fields in the CSV."""
    if not reports:
        raise NoEventsError()
    ordered = sorted(reports, key=lambda r: -r.accuracy)

    def fmt(value: float | None, places: int = 4) -> str:
        return "—" if value is None else f"{value:.{places}f}"

    rows = []
    for r in ordered:
        lo, hi = r.accuracy_ci95
        rows.append(
            (
                r.agent_id,
                r.mode.value,
                str(r.n_events),
                f"{r.accuracy:.4f} ±{(hi - lo) / 2:.4f}",
                fmt(r.color_adherence),
                fmt(r.illegal_rate),
            )
        )
    headers = ("agent", "mode", "n", "accuracy", "adherence", "illegal")
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in rows))
        for i in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    lines.extend(
        "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)) for row in rows
    )
    text = "\n".join(lines)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_COLUMNS)
    for r in ordered:
        lo, hi = r.accuracy_ci95
        writer.writerow(
            [
                r.agent_id,
                r.mode.value,
                r.n_events,
                f"{r.accuracy:.6f}",
                f"{lo:.6f}",
                f"{hi:.6f}",
                "" if r.color_adherence is None else f"{r.color_adherence:.6f}",
                f"{r.illegal_rate:.6f}",
            ]
        )
    return text, buffer.getvalue()
