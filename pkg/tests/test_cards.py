import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from draftkit.cards import (
    RenderMode,
    estimate_tokens,
    fuzzy_lookup,
    load_card_set,
    lookup,
    render_card,
)
from draftkit.errors import (
    CardNotFoundError,
    DuplicateNameError,
    FileNotReadableError,
    MalformedRecordError,
)

from conftest import NEO_CARDS_PATH, make_card


class TestLoadCardSet:
    def test_fixture_count_matches_file_length(self, neo_set):
        raw = json.loads(NEO_CARDS_PATH.read_text(encoding="utf-8"))
        assert len(neo_set) == len(raw) == 282

    def test_duplicate_names_rejected_case_insensitively(self, tmp_path):
        path = tmp_path / "dupes.json"
        path.write_text(json.dumps([
            {"name": "Kami of Industry", "colors": ["W"], "rarity": "common"},
            {"name": "kami of industry", "colors": ["W"], "rarity": "common"},
        ]))
        with pytest.raises(DuplicateNameError):
            load_card_set(path, "TST")

    def test_empty_array_is_a_valid_empty_set(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text("[]")
        assert len(load_card_set(path, "TST")) == 0

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotReadableError):
            load_card_set(tmp_path / "nope.json", "TST")

    def test_malformed_record_reports_index(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps([
            {"name": "Fine Card", "colors": [], "rarity": "common"},
            {"name": "Bad Card", "colors": ["Q"], "rarity": "common"},
        ]))
        with pytest.raises(MalformedRecordError) as err:
            load_card_set(path, "TST")
        assert err.value.index == 1

    def test_bad_rarity_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps([{"name": "X", "colors": [], "rarity": "epic"}]))
        with pytest.raises(MalformedRecordError):
            load_card_set(path, "TST")

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(MalformedRecordError):
            load_card_set(path, "TST")

    def test_unknown_keys_ignored(self, tmp_path):
        path = tmp_path / "extra.json"
        path.write_text(json.dumps([
            {"name": "X", "colors": [], "rarity": "common", "price_usd": 1.5},
        ]))
        assert len(load_card_set(path, "TST")) == 1


class TestLookup:
    def test_whitespace_and_case_normalized(self, mini_set):
        card = lookup(mini_set, "  lightning  BOLT ")
        assert card.name == "Lightning Bolt"

    def test_banishing_slash_is_mono_white(self, neo_set):
        card = lookup(neo_set, "Banishing Slash")
        assert card.colors == frozenset({"W"})
        assert card.rarity == "uncommon"

    def test_not_found(self, mini_set):
        with pytest.raises(CardNotFoundError):
            lookup(mini_set, "Nonexistent Card")

    def test_fuzzy_lookup_within_two_edits(self, mini_set):
        assert fuzzy_lookup(mini_set, "Lightnin Blt").name == "Lightning Bolt"
        with pytest.raises(CardNotFoundError):
            fuzzy_lookup(mini_set, "Completely Unrelated")


class TestRenderCard:
    def test_name_only_is_identity(self, mini_set):
        for card in mini_set.cards:
            assert render_card(card, RenderMode.NAME_ONLY) == card.name

    def test_full_text_template(self, mini_set):
        card = lookup(mini_set, "Lightning Bolt")
        assert render_card(card, RenderMode.FULL_TEXT) == (
            "Lightning Bolt ({R}) [Instant] — "
            "Lightning Bolt deals 3 damage to any target."
        )

    def test_empty_rules_text_omits_dash_segment(self, mini_set):
        card = lookup(mini_set, "Healing Salve")
        rendered = render_card(card, RenderMode.FULL_TEXT)
        assert rendered == "Healing Salve ({W}) [Instant]"
        assert "—" not in rendered

    def test_newlines_flattened(self):
        card = make_card("Multi Line", "G", text="First ability.\nSecond ability.")
        rendered = render_card(card, RenderMode.FULL_TEXT)
        assert "\n" not in rendered
        assert "First ability.; Second ability." in rendered

    def test_long_card_token_estimate_in_expected_band(self, neo_set):
        card = lookup(neo_set, "The Fall of Lantern City")
        rendered = render_card(card, RenderMode.FULL_TEXT)
        assert 100 <= estimate_tokens(rendered) <= 300

    def test_full_text_has_name_as_prefix(self, neo_set):
        for card in neo_set.cards:
            full = render_card(card, RenderMode.FULL_TEXT)
            assert full.startswith(render_card(card, RenderMode.NAME_ONLY))

    def test_name_only_round_trips_through_lookup(self, neo_set):
        for card in neo_set.cards:
            assert lookup(neo_set, render_card(card, RenderMode.NAME_ONLY)) is card


@given(st.text(min_size=1, max_size=40))
def test_estimate_tokens_matches_byte_definition(text):
    tokens = estimate_tokens(text)
    size = len(text.encode("utf-8"))
    assert tokens * 4 >= size > (tokens - 1) * 4
