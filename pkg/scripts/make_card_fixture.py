"""Regenerate data/neo_cards.json, the hermetic NEO-flavored card pool used
by tests, the demo service config, and the simulation CLI.

The file is committed; rerun this only when the composition needs to
change. Output is deterministic.
"""

from __future__ import annotations

import json
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "data" / "neo_cards.json"

COLOR_WORDS = {
    "W": (
        ["Radiant", "Vigilant", "Temple", "Dawnlight", "Jade", "Imperial",
         "Blessed", "Lotus", "Serene", "Gleaming"],
        ["Sentinel", "Monk", "Shrinekeeper", "Crane", "Guardian", "Adept",
         "Lantern", "Procession", "Edict", "Aegis"],
    ),
    "U": (
        ["Moonlit", "Prototype", "Mirrored", "Tidal", "Futurist", "Sable",
         "Drifting", "Neon", "Silent", "Chrome"],
        ["Moth", "Scholar", "Duplicant", "Current", "Artificer", "Koi",
         "Observer", "Circuit", "Phantasm", "Glider"],
    ),
    "B": (
        ["Dokuchi", "Gravelit", "Withered", "Nezumi", "Masked", "Oniwalker",
         "Grim", "Sinister", "Hollow", "Bleak"],
        ["Assassin", "Reaver", "Shadewalker", "Ritualist", "Informant",
         "Bloodletter", "Stalker", "Specter", "Okiba", "Widow"],
    ),
    "R": (
        ["Emberforged", "Blazing", "Reckless", "Crackling", "Volatile",
         "Sokenzan", "Roaring", "Scrapyard", "Furious", "Smoldering"],
        ["Ronin", "Firebrand", "Goblin", "Onslaught", "Charger", "Smith",
         "Detonator", "Berserker", "Warbeast", "Raider"],
    ),
    "G": (
        ["Verdant", "Towering", "Mossborn", "Sprouting", "Ancient",
         "Jukai", "Thornwood", "Primal", "Blossoming", "Wild"],
        ["Colossus", "Orochi", "Cultivator", "Boar", "Warden", "Sage",
         "Creeper", "Terrarium", "Protector", "Behemoth"],
    ),
}

KAMI_THINGS = [
    "Industry", "Falling Petals", "the Drowned Bell", "Restless Steel",
    "Quiet Gardens", "Broken Streets", "the Painted Sky", "Winter Lanterns",
    "Forked Lightning", "the Patient Root", "Hidden Pacts", "Iron Rain",
    "the Last Ember", "Glass Rivers", "Bright Thresholds", "Torn Banners",
    "the Sleepless City", "New Growth", "Severed Paths", "the Ninth Gate",
    "Spring Thaw", "the Hungry Furnace", "Paper Cranes", "the Long Watch",
    "Crossed Blades", "Tangled Wires", "the Second Moon", "Silent Bells",
    "Burning Fields", "the Deep Root", "Stolen Hours", "the Open Door",
    "Distant Thunder", "the Final Verse", "Woven Starlight",
]

TYPES_BY_COLOR = {
    "W": ["Creature — Human Samurai", "Creature — Spirit", "Instant", "Enchantment"],
    "U": ["Creature — Moonfolk Wizard", "Creature — Spirit", "Instant", "Sorcery"],
    "B": ["Creature — Rat Rogue", "Creature — Spirit", "Sorcery", "Enchantment"],
    "R": ["Creature — Goblin Warrior", "Creature — Ogre Samurai", "Instant", "Sorcery"],
    "G": ["Creature — Snake Druid", "Creature — Spirit", "Sorcery", "Enchantment"],
}

SHORT_TEXTS = [
    "Flying",
    "Vigilance",
    "Haste",
    "Menace",
    "Reach",
    "Deathtouch",
    "Trample",
    "Lifelink",
    "Ninjutsu {1}",
    "Channel — {1}, Discard this card: Scry 2.",
]

MID_TEXTS = [
    "When this creature enters the battlefield, scry 1.",
    "When this creature enters the battlefield, draw a card, then discard a card.",
    "Whenever you cast a Spirit spell, this creature gets +1/+1 until end of turn.",
    "Sacrifice an artifact: This creature gains indestructible until end of turn.",
    "When this creature dies, create a 1/1 colorless Spirit creature token.",
    "Whenever an artifact you control leaves the battlefield, each opponent loses 1 life.",
    "At the beginning of combat on your turn, another target creature you control gains vigilance until end of turn.",
    "Whenever this creature attacks, defending player mills two cards.",
]

LONG_TEXTS = [
    "When this enchantment enters the battlefield, look at the top four cards of "
    "your library. You may reveal an artifact or enchantment card from among them "
    "and put it into your hand. Put the rest on the bottom of your library in a "
    "random order.",
    "Whenever one or more creatures you control deal combat damage to a player, "
    "create a Treasure token. Then if you control three or more artifacts, draw a "
    "card and each opponent loses 1 life.",
    "At the beginning of your upkeep, choose one — you draw a card and you "
    "lose 1 life; or return target artifact card from your graveyard to your hand; "
    "or create a 1/1 colorless Spirit creature token with flying.",
]

SAGA_CHAPTERS = (
    "(As this Saga enters and after your draw step, add a lore counter. "
    "Sacrifice after III.)\n"
    "I — Create two 1/1 colorless Spirit creature tokens, then scry 2. If you "
    "control an artifact and an enchantment, instead create three of those tokens "
    "and draw a card.\n"
    "II — Until your next turn, creatures you control get +1/+0 and gain "
    "vigilance. Artifacts you control become artifact creatures with base power "
    "and toughness 2/2 until your next turn in addition to their other types.\n"
    "III — Exile this Saga, then return it to the battlefield transformed "
    "under your control. Each opponent sacrifices a nonland permanent of their "
    "choice, then you gain 2 life for each permanent exiled this way."
)

ARTIFACT_NAMES = [
    "Whirring", "Calibrated", "Portable", "Foundry", "Clockwork", "Gilded",
    "Modular", "Salvaged", "Patchwork", "Automated", "Burnished", "Compact",
]
ARTIFACT_NOUNS = [
    "Servo", "Compiler", "Drone", "Relic", "Engine", "Apparatus",
    "Chassis", "Beacon", "Amplifier", "Gyroscope", "Conduit", "Regulator",
]

LAND_NAMES = [
    "Neon Skyline Rooftops", "Lantern-Lit Graveyard", "Flooded Pagoda",
    "Scrapyard Crossing", "Moss-Cloaked Shrine", "Undercity Tramway",
    "Painted Canal", "Ember Market", "Whispering Bamboo Grove",
    "Forgotten Monastery", "Chrome Atrium", "Terraced Rice Fields",
]


def color_cards(color: str) -> list[dict]:
    adjectives, nouns = COLOR_WORDS[color]
    names = [f"{a} {n}" for a in adjectives for n in nouns]
    cards = []
    # 20 commons
    for i in range(20):
        cards.append(
            {
                "name": names[i],
                "colors": [color],
                "mana_cost": f"{{{1 + i % 4}}}{{{color}}}",
                "type_line": TYPES_BY_COLOR[color][i % 4],
                "rarity": "common",
                "text": SHORT_TEXTS[i % len(SHORT_TEXTS)],
                "set": "NEO",
            }
        )
    # 11 uncommons per color (Banishing Slash, added separately, is white's 11th)
    for i in range(10 if color == "W" else 11):
        cards.append(
            {
                "name": names[20 + i],
                "colors": [color],
                "mana_cost": f"{{{1 + i % 3}}}{{{color}}}{{{color}}}",
                "type_line": TYPES_BY_COLOR[color][(i + 1) % 4],
                "rarity": "uncommon",
                "text": MID_TEXTS[i % len(MID_TEXTS)],
                "set": "NEO",
            }
        )
    # 7 rares
    for i in range(7):
        cards.append(
            {
                "name": f"Kami of {KAMI_THINGS['WUBRG'.index(color) * 7 + i]}",
                "colors": [color],
                "mana_cost": f"{{{2 + i % 3}}}{{{color}}}{{{color}}}",
                "type_line": "Legendary Creature — Spirit",
                "rarity": "rare",
                "text": LONG_TEXTS[i % len(LONG_TEXTS)],
                "set": "NEO",
            }
        )
    # 2 mythics
    for i in range(2):
        cards.append(
            {
                "name": names[31 + i] + " Ascendant",
                "colors": [color],
                "mana_cost": f"{{{3 + i}}}{{{color}}}{{{color}}}{{{color}}}",
                "type_line": "Legendary Creature — Dragon Spirit",
                "rarity": "mythic",
                "text": LONG_TEXTS[(i + 1) % len(LONG_TEXTS)] + "\nFlying",
                "set": "NEO",
            }
        )
    return cards


def main() -> None:
    cards: list[dict] = []
    for color in "WUBRG":
        cards.extend(color_cards(color))

    # the real mono-white uncommon referenced throughout the test suite
    cards.append(
        {
            "name": "Banishing Slash",
            "colors": ["W"],
            "mana_cost": "{W}{W}",
            "type_line": "Sorcery",
            "rarity": "uncommon",
            "text": "Destroy up to one target artifact, enchantment, or tapped "
            "creature. Then, if you control an artifact and an enchantment, "
            "create a 2/2 white Samurai creature token with vigilance.",
            "set": "NEO",
        }
    )

    # ten two-color uncommons, five two-color rares
    pairs = ["WU", "UB", "BR", "RG", "GW", "WB", "UR", "BG", "RW", "GU"]
    pair_nouns = [
        "Concord", "Syndicate", "Uprising", "Stampede", "Communion",
        "Bargain", "Circuit", "Rot", "Vanguard", "Reverie",
    ]
    for pair, noun in zip(pairs, pair_nouns):
        cards.append(
            {
                "name": f"Twinned {noun}",
                "colors": list(pair),
                "mana_cost": "{1}" + "".join(f"{{{c}}}" for c in pair),
                "type_line": "Enchantment",
                "rarity": "uncommon",
                "text": MID_TEXTS[pairs.index(pair) % len(MID_TEXTS)],
                "set": "NEO",
            }
        )
    saga_names = [
        "The Fall of Lantern City", "March of the Iron Shogunate",
        "Tale of the Drowned Court", "The Shattered Torii",
        "Rise of the Neon Dynasty",
    ]
    for i, name in enumerate(saga_names):
        pair = pairs[i * 2]
        cards.append(
            {
                "name": name,
                "colors": list(pair),
                "mana_cost": "{2}" + "".join(f"{{{c}}}" for c in pair),
                "type_line": "Enchantment — Saga",
                "rarity": "rare",
                "text": SAGA_CHAPTERS,
                "set": "NEO",
            }
        )

    # colorless artifacts: 30 commons, 15 uncommons, 8 rares, 2 mythics
    artifact_names = [f"{a} {n}" for a in ARTIFACT_NAMES for n in ARTIFACT_NOUNS]
    for i in range(30):
        cards.append(
            {
                "name": artifact_names[i],
                "colors": [],
                "mana_cost": f"{{{1 + i % 5}}}",
                "type_line": "Artifact" if i % 3 else "Artifact Creature — Construct",
                "rarity": "common",
                "text": SHORT_TEXTS[i % len(SHORT_TEXTS)] if i % 4 else "",
                "set": "NEO",
            }
        )
    for i in range(15):
        cards.append(
            {
                "name": artifact_names[30 + i],
                "colors": [],
                "mana_cost": f"{{{2 + i % 4}}}",
                "type_line": "Artifact — Vehicle" if i % 2 else "Artifact",
                "rarity": "uncommon",
                "text": MID_TEXTS[i % len(MID_TEXTS)],
                "set": "NEO",
            }
        )
    for i in range(8):
        cards.append(
            {
                "name": artifact_names[45 + i],
                "colors": [],
                "mana_cost": f"{{{3 + i % 3}}}",
                "type_line": "Legendary Artifact",
                "rarity": "rare",
                "text": LONG_TEXTS[i % len(LONG_TEXTS)],
                "set": "NEO",
            }
        )
    for i in range(2):
        cards.append(
            {
                "name": artifact_names[53 + i],
                "colors": [],
                "mana_cost": f"{{{5 + i}}}",
                "type_line": "Legendary Artifact Creature — Construct Dragon",
                "rarity": "mythic",
                "text": LONG_TEXTS[(i + 2) % len(LONG_TEXTS)] + "\nFlying, haste",
                "set": "NEO",
            }
        )

    # twelve common utility lands
    for i, name in enumerate(LAND_NAMES):
        cards.append(
            {
                "name": name,
                "colors": [],
                "mana_cost": "",
                "type_line": "Land",
                "rarity": "common",
                "text": "{T}: Add {C}."
                + ("" if i % 2 else f"\n{{T}}: Add {{{'WUBRG'[i % 5]}}}. Activate only if you control a Shrine."),
                "set": "NEO",
            }
        )

    names = [c["name"] for c in cards]
    lowered = [n.lower() for n in names]
    assert len(set(lowered)) == len(names), "duplicate card names in fixture"
    assert len(cards) == 282, f"expected 282 cards, got {len(cards)}"

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(
        json.dumps(cards, indent=1, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(cards)} cards to {OUT}")


if __name__ == "__main__":
    main()
