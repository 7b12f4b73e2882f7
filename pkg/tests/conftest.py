from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import pytest

from draftkit.cards import Card, CardSet, build_card_set, load_card_set
from draftkit.datalog import PickEvent, write_wide_csv
from draftkit.draft import simulate_pod
from draftkit.lora import (
    ToyPickModel,
    init_toy_model,
    planted_frequency_table,
    synthetic_card_set,
    synthetic_pick_events,
    train_base_model,
)

REPO_ROOT = Path(__file__).resolve().parents[1]
NEO_CARDS_PATH = REPO_ROOT / "data" / "neo_cards.json"

# tuned once for the synthetic task; shared by the unit and acceptance suites
TOY_LEARNING_RATE = 0.3
TOY_ABLATION_STEPS = 2000


@dataclass(frozen=True)
class ToyTask:
    """Synthetic adaptation task: base model pretrained on a source set,
    target set labeled by a planted per-card pick-rate ordering."""

    source_set: CardSet
    target_set: CardSet
    source_events: list[PickEvent]
    train_events: list[PickEvent]
    dev_events: list[PickEvent]
    base: ToyPickModel


@pytest.fixture(scope="session")
def toy_task() -> ToyTask:
    source_set = synthetic_card_set("SRC", 48, seed=100)
    target_set = synthetic_card_set("TGT", 48, seed=200)
    source_events, _ = synthetic_pick_events(
        source_set, 1500, seed=101, table=planted_frequency_table(source_set, 110)
    )
    target_table = planted_frequency_table(target_set, 210)
    train_events, _ = synthetic_pick_events(
        target_set, 3000, seed=201, table=target_table
    )
    dev_events, _ = synthetic_pick_events(
        target_set, 500, seed=202, table=target_table
    )
    base = init_toy_model(embed_dim=16, hidden_dim=32, seed=0)
    base = train_base_model(
        base, source_events, source_set,
        steps=300, learning_rate=1.0, batch_size=32, seed=1,
    )
    return ToyTask(
        source_set=source_set,
        target_set=target_set,
        source_events=source_events,
        train_events=train_events,
        dev_events=dev_events,
        base=base,
    )


@pytest.fixture(scope="session")
def neo_set() -> CardSet:
    return load_card_set(NEO_CARDS_PATH, "NEO")


def make_card(
    name: str,
    colors: str = "",
    cost: str = "{1}",
    type_line: str = "Creature",
    rarity: str = "common",
    text: str = "",
) -> Card:
    return Card(
        name=name,
        colors=frozenset(colors),
        mana_cost=cost,
        type_line=type_line,
        rarity=rarity,
        rules_text=text,
        set_code="TST",
    )


@pytest.fixture
def mini_set() -> CardSet:
    cards = [
        make_card("Lightning Bolt", "R", "{R}", "Instant",
                  text="Lightning Bolt deals 3 damage to any target."),
        make_card("Counterspell", "U", "{U}{U}", "Instant",
                  text="Counter target spell."),
        make_card("Giant Growth", "G", "{G}", "Instant",
                  text="Target creature gets +3/+3 until end of turn."),
        make_card("Healing Salve", "W", "{W}", "Instant"),
        make_card("Dark Ritual", "B", "{B}", "Instant",
                  text="Add {B}{B}{B}."),
        make_card("Ornithopter", "", "{0}", "Artifact Creature",
                  text="Flying"),
        make_card("Azorius Charm", "WU", "{W}{U}", "Instant",
                  text="Choose one."),
    ]
    return build_card_set(cards, "TST")


@pytest.fixture(scope="session")
def preference_events(neo_set) -> list[PickEvent]:
    """5,000 pick events from pods whose picks sample a rating softmax
    (temperature 0.15), so logs carry the kind of graded, learnable
    preference signal human corpora do."""
    import math
    from random import Random

    rating_rng = Random("excerpt-ratings")
    ratings = {name: rating_rng.random() for name in neo_set.names()}

    def picker(seat, pool, pack, rng):
        names = sorted(pack)
        weights = [math.exp(ratings[n] / 0.15) for n in names]
        return rng.choices(names, weights=weights)[0]

    events: list[PickEvent] = []
    seed = 7000
    while len(events) < 5000:
        events.extend(simulate_pod(neo_set, seed=seed, picker=picker).events)
        seed += 1
    return events[:5000]


@pytest.fixture(scope="session")
def excerpt_csv(neo_set, preference_events, tmp_path_factory) -> Path:
    """A 1,000-row wide-format log excerpt (1-indexed numbering, as real
    corpora use) materialized from the preference-driven simulation."""
    path = tmp_path_factory.mktemp("logs") / "neo_excerpt_1000.csv"
    write_wide_csv(preference_events[:1000], neo_set, path, one_indexed=True)
    return path
