"""draftkit: booster-draft recommendation engine, evaluation harness, and
live draft companion service."""

from .cards import Card, CardSet, RenderMode, load_card_set, lookup, render_card
from .datalog import PickEvent, SplitSpec, export_finetune_jsonl, parse_draft_csv, split
from .draft import (
    ColorProfile,
    DraftState,
    Pack,
    PackConfig,
    apply_pick,
    color_profile,
    generate_pack,
    is_adherent,
    new_draft,
    simulate_pod,
)
from .prompts import Prompt, build_prompt, parse_prompt

__version__ = "0.1.0"

__all__ = [
    "Card",
    "CardSet",
    "RenderMode",
    "load_card_set",
    "lookup",
    "render_card",
    "PickEvent",
    "SplitSpec",
    "parse_draft_csv",
    "split",
    "export_finetune_jsonl",
    "Pack",
    "PackConfig",
    "DraftState",
    "ColorProfile",
    "new_draft",
    "generate_pack",
    "apply_pick",
    "color_profile",
    "is_adherent",
    "simulate_pod",
    "Prompt",
    "build_prompt",
    "parse_prompt",
    "__version__",
]
