"""Card database: load and index one expansion's card pool, and render cards
in the two prompt representations (name-only and full-text).

Card source format is a JSON array of objects with keys `name`, `colors`,
`mana_cost`, `type_line`, `rarity`, `text`, `set`. Unknown keys are ignored.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import (
    CardNotFoundError,
    DuplicateNameError,
    FileNotReadableError,
    MalformedRecordError,
)
from .text import levenshtein, normalize_name

COLOR_ORDER = "WUBRG"
COLORS = frozenset(COLOR_ORDER)
RARITIES = frozenset({"common", "uncommon", "rare", "mythic"})


class RenderMode(str, Enum):
    NAME_ONLY = "name"
    FULL_TEXT = "text"


@dataclass(frozen=True)
class Card:
    """One game card.

    colors is a subset of {W,U,B,R,G}; empty means colorless. rules_text may
    be empty and may contain newlines.
    """

    name: str
    colors: frozenset[str]
    mana_cost: str
    type_line: str
    rarity: str
    rules_text: str
    set_code: str


@dataclass(frozen=True)
class CardSet:
    """Immutable, name-indexed collection of one expansion's cards.

    The name index is total and injective over cards: every card is reachable
    by its normalized name and no two cards share one. Safe for unrestricted
    concurrent reads.
    """

    set_code: str
    cards: tuple[Card, ...]
    name_index: dict[str, Card] = field(repr=False)

    def __len__(self) -> int:
        return len(self.cards)

    def __contains__(self, name: str) -> bool:
        return normalize_name(name) in self.name_index

    def names(self) -> list[str]:
        return [c.name for c in self.cards]


def _parse_record(index: int, rec: object, default_set: str) -> Card:
    if not isinstance(rec, dict):
        raise MalformedRecordError(index, "not a JSON object")
    name = rec.get("name")
    if not isinstance(name, str) or not name.strip():
        raise MalformedRecordError(index, "missing or empty 'name'")
    raw_colors = rec.get("colors", [])
    if not isinstance(raw_colors, list) or not all(
        isinstance(c, str) for c in raw_colors
    ):
        raise MalformedRecordError(index, "'colors' must be a list of strings")
    colors = frozenset(c.upper() for c in raw_colors)
    if not colors <= COLORS:
        bad = sorted(colors - COLORS)
        raise MalformedRecordError(index, f"invalid colors {bad}")
    rarity = rec.get("rarity", "")
    if rarity not in RARITIES:
        raise MalformedRecordError(index, f"invalid rarity {rarity!r}")
    for key in ("mana_cost", "type_line", "text"):
        if key in rec and not isinstance(rec[key], str):
            raise MalformedRecordError(index, f"{key!r} must be a string")
    return Card(
        name=name.strip(),
        colors=colors,
        mana_cost=rec.get("mana_cost", ""),
        type_line=rec.get("type_line", ""),
        rarity=rarity,
        rules_text=rec.get("text", ""),
        set_code=rec.get("set", default_set) or default_set,
    )


def build_card_set(cards: list[Card], set_code: str) -> CardSet:
    """Index a list of cards, rejecting case-insensitive duplicates."""
    index: dict[str, Card] = {}
    for card in cards:
        key = normalize_name(card.name)
        if key in index:
            raise DuplicateNameError(card.name)
        index[key] = card
    return CardSet(set_code=set_code, cards=tuple(cards), name_index=index)


def load_card_set(path: str | Path, set_code: str) -> CardSet:
    """Load and validate a card file.

    Raises FileNotReadableError, MalformedRecordError (with the offending
    record index) or DuplicateNameError.
    """
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileNotReadableError(str(path), str(exc)) from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedRecordError(None, f"invalid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise MalformedRecordError(None, "top-level value is not an array")
    cards = [_parse_record(i, rec, set_code) for i, rec in enumerate(data)]
    return build_card_set(cards, set_code)


def lookup(card_set: CardSet, name: str) -> Card:
    """Case-insensitive exact lookup after normalization.

    Raises CardNotFoundError when no card matches.
    """
    card = card_set.name_index.get(normalize_name(name))
    if card is None:
        raise CardNotFoundError(name)
    return card


def fuzzy_lookup(card_set: CardSet, name: str, max_distance: int = 2) -> Card:
    """Exact lookup, falling back to the closest name within max_distance
    edits (ties broken lexicographically). Raises CardNotFoundError when
    nothing is close enough."""
    key = normalize_name(name)
    card = card_set.name_index.get(key)
    if card is not None:
        return card
    best: tuple[int, str] | None = None
    for cand_key, cand in card_set.name_index.items():
        dist = levenshtein(key, cand_key, limit=max_distance)
        if dist <= max_distance:
            rank = (dist, cand.name)
            if best is None or rank < best:
                best = rank
    if best is None:
        raise CardNotFoundError(name)
    return lookup(card_set, best[1])


def render_card(card: Card, mode: RenderMode) -> str:
    """Render one card for prompt inclusion.

    NAME_ONLY is the name verbatim. FULL_TEXT is a single line
    "Name (mana_cost) [type_line] — rules_text" with rules-text newlines
    replaced by "; "; cards without rules text omit the " — " segment.
    """
    if mode is RenderMode.NAME_ONLY:
        return card.name
    head = f"{card.name} ({card.mana_cost}) [{card.type_line}]"
    if not card.rules_text:
        return head
    flat = card.rules_text.replace("\r\n", "\n").replace("\n", "; ")
    return f"{head} — {flat}"


def estimate_tokens(text: str) -> int:
    """Model-free token estimate: ceil(UTF-8 bytes / 4)."""
    return math.ceil(len(text.encode("utf-8")) / 4)
