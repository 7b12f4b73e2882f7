"""Booster draft state machine: pack generation, simultaneous picks, pack
passing, pool accumulation, and the pool color profile used by the
adherence metric.

DraftState is a value; operations return new states. One pod advances
single-threaded, many pods run independently in parallel.
"""

from __future__ import annotations

import json
from collections.abc import Callable, Iterable
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from random import Random

from .cards import COLOR_ORDER, Card, CardSet
from .datalog import PickEvent
from .errors import (
    CardNotInPackError,
    DraftCompleteError,
    InsufficientCardsError,
    UnknownCardError,
)
from .text import normalize_name

N_SEATS = 8
N_ROUNDS = 3


class PassDirection(str, Enum):
    LEFT = "left"
    RIGHT = "right"


def direction_for_round(round_index: int) -> PassDirection:
    return PassDirection.LEFT if round_index % 2 == 0 else PassDirection.RIGHT


@dataclass(frozen=True)
class Pack:
    """An opened booster in flight. pack_id identifies the originally opened
    pack across passes; cards is an ordered multiset of names."""

    pack_id: int
    cards: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.cards)


@dataclass(frozen=True)
class PackConfig:
    """Booster composition. Default is the standard 1 rare-or-mythic /
    3 uncommon / 11 common layout; uniform=True samples the whole pack
    uniformly without replacement instead."""

    size: int = 15
    uniform: bool = False
    rare_or_mythic: int = 1
    uncommons: int = 3
    commons: int = 11

    def __post_init__(self):
        if not self.uniform:
            total = self.rare_or_mythic + self.uncommons + self.commons
            if total != self.size:
                raise ValueError(f"rarity slots sum to {total}, expected {self.size}")


@dataclass(frozen=True)
class ColorProfile:
    """Per-color pool counts plus the two most-represented colors.

    primary_pair ties break in canonical W<U<B<R<G order, so an empty pool
    yields (W, U)."""

    counts: dict[str, int]
    primary_pair: tuple[str, str]


@dataclass(frozen=True)
class DraftState:
    """Full 8-seat pod state.

    pending holds this step's staged picks: cards move and packs rotate only
    once all 8 seats have picked (simultaneity). unopened holds the boosters
    for rounds not yet started."""

    seats: tuple[tuple[str, ...], ...]
    packs_in_flight: tuple[Pack, ...]
    unopened: tuple[tuple[Pack, ...], ...]
    round: int
    pick_in_round: int
    pass_direction: PassDirection
    rng_seed: int
    pack_size: int
    pending: tuple[str | None, ...]

    @property
    def complete(self) -> bool:
        return self.round == N_ROUNDS - 1 and self.pick_in_round >= self.pack_size


def generate_pack(
    card_set: CardSet,
    rng: Random,
    config: PackConfig | None = None,
    pack_id: int = 0,
) -> Pack:
    """Sample one booster without replacement (within each rarity slot for
    the default config). Raises InsufficientCardsError when the set cannot
    fill a slot."""
    cfg = config or PackConfig()
    if cfg.uniform:
        names = [c.name for c in card_set.cards]
        if len(names) < cfg.size:
            raise InsufficientCardsError("any", cfg.size, len(names))
        picked = rng.sample(names, cfg.size)
        return Pack(pack_id=pack_id, cards=tuple(picked))

    by_slot = {
        "rare/mythic": [c.name for c in card_set.cards if c.rarity in ("rare", "mythic")],
        "uncommon": [c.name for c in card_set.cards if c.rarity == "uncommon"],
        "common": [c.name for c in card_set.cards if c.rarity == "common"],
    }
    wants = {
        "rare/mythic": cfg.rare_or_mythic,
        "uncommon": cfg.uncommons,
        "common": cfg.commons,
    }
    picked = []
    for slot, want in wants.items():
        have = by_slot[slot]
        if len(have) < want:
            raise InsufficientCardsError(slot, want, len(have))
        picked.extend(rng.sample(have, want))
    rng.shuffle(picked)
    return Pack(pack_id=pack_id, cards=tuple(picked))


def new_draft(
    card_set: CardSet, seed: int, config: PackConfig | None = None
) -> DraftState:
    """Open a fresh 8-seat pod: all boosters for all three rounds are
    generated up-front from the seed; round 0 is distributed immediately."""
    cfg = config or PackConfig()
    rng = Random(seed)
    rounds = []
    for rnd in range(N_ROUNDS):
        rounds.append(
            tuple(
                generate_pack(card_set, rng, cfg, pack_id=rnd * N_SEATS + seat)
                for seat in range(N_SEATS)
            )
        )
    return DraftState(
        seats=tuple(() for _ in range(N_SEATS)),
        packs_in_flight=rounds[0],
        unopened=tuple(rounds[1:]),
        round=0,
        pick_in_round=0,
        pass_direction=direction_for_round(0),
        rng_seed=seed,
        pack_size=cfg.size,
        pending=(None,) * N_SEATS,
    )


def _rotate(packs: tuple[Pack, ...], direction: PassDirection) -> tuple[Pack, ...]:
    if direction is PassDirection.LEFT:
        # pack at seat i is handed to seat i+1
        return tuple(packs[(i - 1) % N_SEATS] for i in range(N_SEATS))
    return tuple(packs[(i + 1) % N_SEATS] for i in range(N_SEATS))


def _remove_one(cards: tuple[str, ...], name: str) -> tuple[str, ...]:
    idx = cards.index(name)
    return cards[:idx] + cards[idx + 1:]


def apply_pick(state: DraftState, seat: int, card: str) -> DraftState:
    """Stage one seat's pick. Once all 8 seats have staged, the picks are
    committed together: cards move to pools, remaining packs rotate one seat
    in the pass direction, and a finished round opens the next one with the
    direction flipped (left, right, left)."""
    if state.complete:
        raise DraftCompleteError()
    if not 0 <= seat < N_SEATS:
        raise ValueError(f"seat must be 0..{N_SEATS - 1}, got {seat}")
    if state.pending[seat] is not None:
        raise ValueError(f"seat {seat} already picked this step")
    if card not in state.packs_in_flight[seat].cards:
        raise CardNotInPackError(card)

    pending = list(state.pending)
    pending[seat] = card
    if any(p is None for p in pending):
        return replace(state, pending=tuple(pending))

    # commit: every seat has picked
    seats = tuple(
        pool + (pending[i],) for i, pool in enumerate(state.seats)
    )
    packs = tuple(
        Pack(p.pack_id, _remove_one(p.cards, pending[i]))
        for i, p in enumerate(state.packs_in_flight)
    )
    pick_in_round = state.pick_in_round + 1

    if pick_in_round == state.pack_size:
        if not state.unopened:
            return replace(
                state,
                seats=seats,
                packs_in_flight=packs,
                pick_in_round=pick_in_round,
                pending=(None,) * N_SEATS,
            )
        next_round = state.round + 1
        return replace(
            state,
            seats=seats,
            packs_in_flight=state.unopened[0],
            unopened=state.unopened[1:],
            round=next_round,
            pick_in_round=0,
            pass_direction=direction_for_round(next_round),
            pending=(None,) * N_SEATS,
        )

    return replace(
        state,
        seats=seats,
        packs_in_flight=_rotate(packs, state.pass_direction),
        pick_in_round=pick_in_round,
        pending=(None,) * N_SEATS,
    )


def color_profile(pool: Iterable[str], card_set: CardSet) -> ColorProfile:
    """Count pool cards per color (a multicolor card increments each of its
    colors) and pick the top two, canonical order breaking ties."""
    counts = {c: 0 for c in COLOR_ORDER}
    for name in pool:
        card = card_set.name_index.get(normalize_name(name))
        if card is None:
            raise UnknownCardError(name)
        for color in card.colors:
            counts[color] += 1
    ranked = sorted(COLOR_ORDER, key=lambda c: (-counts[c], COLOR_ORDER.index(c)))
    return ColorProfile(counts=counts, primary_pair=(ranked[0], ranked[1]))


def is_adherent(card: Card, profile: ColorProfile) -> bool:
    """A card adheres when its colors fit inside the primary pair. Colorless
    cards always adhere."""
    return card.colors <= set(profile.primary_pair)


# --- pod simulation ---------------------------------------------------------

Picker = Callable[[int, tuple[str, ...], tuple[str, ...], Random], str]


def _uniform_picker(
    seat: int, pool: tuple[str, ...], pack: tuple[str, ...], rng: Random
) -> str:
    return rng.choice(sorted(pack))


@dataclass
class PodResult:
    """One simulated pod: the final state, one PickEvent per decision (each
    seat gets its own draft_id, mirroring per-player logs), and transcript
    rows for the JSONL format."""

    final_state: DraftState
    events: list[PickEvent]
    transcript: list[dict]


def simulate_pod(
    card_set: CardSet,
    seed: int,
    picker: Picker | None = None,
    config: PackConfig | None = None,
) -> PodResult:
    """Run one full 8-seat draft with the given picker (seeded-uniform by
    default). Deterministic per seed."""
    choose = picker or _uniform_picker
    rng = Random(f"pod:{seed}")
    state = new_draft(card_set, seed, config)
    events: list[PickEvent] = []
    transcript: list[dict] = []

    while not state.complete:
        staged = state
        for seat in range(N_SEATS):
            pool = state.seats[seat]
            pack = state.packs_in_flight[seat].cards
            chosen = choose(seat, pool, pack, rng)
            events.append(
                PickEvent(
                    draft_id=f"sim{seed}-s{seat}",
                    pack_number=state.round,
                    pick_number=state.pick_in_round,
                    pool=tuple(sorted(pool)),
                    pack=tuple(sorted(pack)),
                    chosen=chosen,
                    player_rank=None,
                    event_type="Premier",
                )
            )
            transcript.append(
                {
                    "seat": seat,
                    "round": state.round,
                    "pick": state.pick_in_round,
                    "pack": list(pack),
                    "chosen": chosen,
                }
            )
            staged = apply_pick(staged, seat, chosen)
        state = staged

    return PodResult(final_state=state, events=events, transcript=transcript)


def write_transcript(path: str | Path, transcript: Iterable[dict]) -> int:
    """Write transcript rows as JSON lines. Returns the row count."""
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as out:
        for row in transcript:
            out.write(json.dumps(row, separators=(",", ":"), ensure_ascii=False))
            out.write("\n")
            count += 1
    return count
