"""Prompt construction for pick decisions, plus the inverse parser used by
export round-trip checks.

The template is fixed; pool and pack render one card per "- " line in
lexicographic order, duplicates as repeated lines, and an empty pool as the
single line "- (empty)".
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .cards import CardSet, RenderMode, estimate_tokens, lookup, render_card
from .errors import EmptyPackError, NotAPromptError

HEADER = "You are an expert Magic: The Gathering drafter."
POOL_MARKER = "My pool so far:"
PACK_MARKER = "Current pack:"
QUESTION = "Which card should I pick? Respond with the card name only."
EMPTY_POOL_LINE = "- (empty)"


@dataclass(frozen=True)
class Prompt:
    text: str
    mode: RenderMode
    estimated_tokens: int

    def over_budget(self, budget_tokens: int) -> bool:
        return self.estimated_tokens > budget_tokens


def _render_block(names: Iterable[str], card_set: CardSet, mode: RenderMode) -> str:
    cards = [lookup(card_set, name) for name in names]
    lines = sorted("- " + render_card(card, mode) for card in cards)
    return "\n".join(lines)


def build_prompt(
    pool: Iterable[str],
    pack: Iterable[str],
    card_set: CardSet,
    mode: RenderMode = RenderMode.NAME_ONLY,
) -> Prompt:
    """Build the pick prompt for (pool, pack). Deterministic; injective on
    the (pool, pack) multisets in name-only mode. Raises EmptyPackError or
    CardNotFoundError."""
    pack = list(pack)
    if not pack:
        raise EmptyPackError()
    pool = list(pool)
    pool_block = _render_block(pool, card_set, mode) if pool else EMPTY_POOL_LINE
    pack_block = _render_block(pack, card_set, mode)
    text = (
        f"{HEADER}\n"
        f"{POOL_MARKER}\n{pool_block}\n"
        f"{PACK_MARKER}\n{pack_block}\n"
        f"{QUESTION}"
    )
    return Prompt(text=text, mode=mode, estimated_tokens=estimate_tokens(text))


def parse_prompt(text: str) -> tuple[list[str], list[str]]:
    """Invert a name-only prompt back to its (pool, pack) name multisets.

    Only defined for build_prompt output in name-only mode; anything else
    raises NotAPromptError.
    """
    lines = text.split("\n")
    if not lines or lines[0] != HEADER:
        raise NotAPromptError("missing header line")
    try:
        pool_at = lines.index(POOL_MARKER)
        pack_at = lines.index(PACK_MARKER)
    except ValueError as exc:
        raise NotAPromptError(f"missing marker: {exc}") from None
    if lines[-1] != QUESTION:
        raise NotAPromptError("missing terminal question")
    if not pool_at < pack_at < len(lines) - 1:
        raise NotAPromptError("markers out of order")

    def strip_items(block: list[str]) -> list[str]:
        names = []
        for line in block:
            if not line.startswith("- "):
                raise NotAPromptError(f"unexpected list line: {line!r}")
            names.append(line[2:])
        return names

    pool = strip_items(lines[pool_at + 1 : pack_at])
    pack = strip_items(lines[pack_at + 1 : -1])
    if pool == ["(empty)"]:
        pool = []
    if not pack:
        raise NotAPromptError("empty pack block")
    return pool, pack
