"""Ingestion of wide-format draft pick logs, train/test splitting, and
fine-tune JSONL export.

The input CSV is expected in the community log layout: one row per pick
decision with base columns `draft_id, event_type, rank, pack_number,
pick_number, pick` plus one `pool_<Name>` and one `pack_card_<Name>` count
column per card in the set. Files indexed from 0 and from 1 are both
accepted; indexing is detected from the column minima over an initial row
buffer and normalized to 0-indexed.
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from pathlib import Path
from random import Random

from .cards import CardSet, RenderMode
from .errors import EmptyFileError, InsufficientDataError, MissingColumnError
from .text import normalize_name

BASE_COLUMNS = ("draft_id", "event_type", "rank", "pack_number", "pick_number", "pick")
POOL_PREFIX = "pool_"
PACK_PREFIX = "pack_card_"


@dataclass(frozen=True)
class PickEvent:
    """One human pick decision reconstructed from a log row.

    Invariants (enforced by the parser, not the constructor):
      - chosen is in pack
      - len(pack) == initial_pack_size - pick_number
      - len(pool) == initial_pack_size * pack_number + pick_number
    """

    draft_id: str
    pack_number: int
    pick_number: int
    pool: tuple[str, ...]
    pack: tuple[str, ...]
    chosen: str
    player_rank: str | None = None
    event_type: str = "Premier"


def validate_event(event: PickEvent, initial_pack_size: int = 15) -> str | None:
    """Return the first violated PickEvent invariant, or None when valid."""
    if event.chosen not in event.pack:
        return "ChosenNotInPack"
    if len(event.pack) != initial_pack_size - event.pick_number:
        return "PackSizeMismatch"
    expected_pool = initial_pack_size * event.pack_number + event.pick_number
    if len(event.pool) != expected_pool:
        return "PoolSizeMismatch"
    return None


@dataclass(frozen=True)
class SplitSpec:
    """Draft-wise split: test_size counts distinct draft_ids, all of whose
    events land in the test side together (prevents within-draft leakage)."""

    test_size: int
    seed: int
    rank_filter: frozenset[str] | None = None


@dataclass
class ParseConfig:
    initial_pack_size: int = 15
    # rows buffered up-front to detect 0- vs 1-indexed numbering
    detect_buffer_rows: int = 64


@dataclass
class ParseReport:
    """Filled in while the event stream is consumed; counts are final once
    the stream is exhausted."""

    total_rows: int = 0
    emitted: int = 0
    dropped: Counter = field(default_factory=Counter)
    unknown_columns: tuple[str, ...] = ()
    pack_number_offset: int = 0
    pick_number_offset: int = 0

    @property
    def dropped_total(self) -> int:
        return sum(self.dropped.values())


def _column_map(
    header: list[str], prefix: str, card_set: CardSet
) -> tuple[list[tuple[int, str | None]], list[str]]:
    cols: list[tuple[int, str | None]] = []
    unknown: list[str] = []
    for idx, col in enumerate(header):
        if not col.startswith(prefix):
            continue
        raw_name = col[len(prefix):]
        card = card_set.name_index.get(normalize_name(raw_name))
        if card is None:
            unknown.append(col)
            cols.append((idx, None))
        else:
            cols.append((idx, card.name))
    return cols, unknown


def _collect(
    row: list[str], cols: list[tuple[int, str | None]]
) -> tuple[list[str], str | None]:
    """Expand count columns into a name multiset. Returns (names, drop_reason)."""
    names: list[str] = []
    for idx, name in cols:
        value = row[idx]
        if value == "" or value == "0":
            continue
        try:
            count = int(value)
        except ValueError:
            return [], "BadCount"
        if count < 0:
            return [], "BadCount"
        if count == 0:
            continue
        if name is None:
            return [], "UnknownCard"
        names.extend([name] * count)
    return names, None


def parse_draft_csv(
    path: str | Path,
    card_set: CardSet,
    config: ParseConfig | None = None,
) -> tuple[Iterator[PickEvent], ParseReport]:
    """Stream PickEvents out of a wide-format log.

    Rows violating the PickEvent invariants are dropped and tallied in the
    report with a reason; they are never emitted. Parsing is single-pass and
    constant-memory apart from the header column index and the small
    indexing-detection buffer.
    """
    cfg = config or ParseConfig()
    handle = open(path, newline="", encoding="utf-8")
    reader = csv.reader(handle)
    try:
        header = next(reader)
    except StopIteration:
        handle.close()
        raise EmptyFileError(str(path)) from None

    col_idx = {name: i for i, name in enumerate(header)}
    for required in BASE_COLUMNS:
        if required not in col_idx:
            handle.close()
            raise MissingColumnError(required)
    pool_cols, unknown_pool = _column_map(header, POOL_PREFIX, card_set)
    pack_cols, unknown_pack = _column_map(header, PACK_PREFIX, card_set)
    if not pack_cols:
        handle.close()
        raise MissingColumnError(f"{PACK_PREFIX}<Name>")

    report = ParseReport(unknown_columns=tuple(unknown_pool + unknown_pack))

    i_draft = col_idx["draft_id"]
    i_type = col_idx["event_type"]
    i_rank = col_idx["rank"]
    i_packn = col_idx["pack_number"]
    i_pickn = col_idx["pick_number"]
    i_pick = col_idx["pick"]

    buffer: list[list[str]] = []
    for row in reader:
        buffer.append(row)
        if len(buffer) >= cfg.detect_buffer_rows:
            break

    def _minimum(index: int) -> int | None:
        values = []
        for row in buffer:
            if index < len(row):
                try:
                    values.append(int(row[index]))
                except ValueError:
                    continue
        return min(values) if values else None

    # files are 0- or 1-indexed; a minimum of exactly 1 marks 1-indexing
    report.pack_number_offset = 1 if _minimum(i_packn) == 1 else 0
    report.pick_number_offset = 1 if _minimum(i_pickn) == 1 else 0

    size = cfg.initial_pack_size
    n_cols = len(header)

    def events() -> Iterator[PickEvent]:
        def rows() -> Iterator[list[str]]:
            yield from buffer
            yield from reader

        try:
            for row in rows():
                report.total_rows += 1
                if len(row) != n_cols:
                    report.dropped["RaggedRow"] += 1
                    continue
                draft_id = row[i_draft].strip()
                if not draft_id:
                    report.dropped["MissingDraftId"] += 1
                    continue
                try:
                    pack_number = int(row[i_packn]) - report.pack_number_offset
                    pick_number = int(row[i_pickn]) - report.pick_number_offset
                except ValueError:
                    report.dropped["BadNumber"] += 1
                    continue
                if not 0 <= pack_number <= 2:
                    report.dropped["PackNumberOutOfRange"] += 1
                    continue
                chosen_card = card_set.name_index.get(normalize_name(row[i_pick]))
                if chosen_card is None:
                    report.dropped["UnknownPick"] += 1
                    continue
                pool, reason = _collect(row, pool_cols)
                if reason is not None:
                    report.dropped[reason] += 1
                    continue
                pack, reason = _collect(row, pack_cols)
                if reason is not None:
                    report.dropped[reason] += 1
                    continue
                event = PickEvent(
                    draft_id=draft_id,
                    pack_number=pack_number,
                    pick_number=pick_number,
                    pool=tuple(sorted(pool)),
                    pack=tuple(sorted(pack)),
                    chosen=chosen_card.name,
                    player_rank=row[i_rank].strip() or None,
                    event_type=row[i_type].strip() or "Premier",
                )
                violation = validate_event(event, size)
                if violation is not None:
                    report.dropped[violation] += 1
                    continue
                report.emitted += 1
                yield event
        finally:
            handle.close()

    return events(), report


def split(
    events: Iterable[PickEvent], spec: SplitSpec
) -> tuple[list[PickEvent], list[PickEvent]]:
    """Partition events into (train, test) by draft_id.

    Deterministic for a given seed regardless of input order: distinct
    draft_ids are sorted, then shuffled with the seeded generator, and the
    first test_size become the test side. rank_filter (when present) drops
    non-matching events before sampling.
    """
    pool = list(events)
    if spec.rank_filter is not None:
        wanted = {r.casefold() for r in spec.rank_filter}
        pool = [
            e
            for e in pool
            if e.player_rank is not None and e.player_rank.casefold() in wanted
        ]
    draft_ids = sorted({e.draft_id for e in pool})
    if spec.test_size <= 0:
        raise InsufficientDataError("test_size must be positive")
    if spec.test_size > len(draft_ids):
        raise InsufficientDataError(
            f"test_size {spec.test_size} exceeds {len(draft_ids)} available drafts"
        )
    rng = Random(spec.seed)
    rng.shuffle(draft_ids)
    test_ids = set(draft_ids[: spec.test_size])
    train = [e for e in pool if e.draft_id not in test_ids]
    test = [e for e in pool if e.draft_id in test_ids]
    return train, test


def write_wide_csv(
    events: Iterable[PickEvent],
    card_set: CardSet,
    path: str | Path,
    one_indexed: bool = False,
) -> int:
    """Write events back out in the wide log layout (the parser's inverse).

    Used to materialize simulated drafts as ingestible log files; pass
    one_indexed=True to mimic corpora whose pack/pick numbers start at 1.
    Returns the row count.
    """
    names = sorted(card_set.names())
    offset = 1 if one_indexed else 0
    written = 0
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            list(BASE_COLUMNS)
            + [f"{POOL_PREFIX}{n}" for n in names]
            + [f"{PACK_PREFIX}{n}" for n in names]
        )
        for event in events:
            pool = Counter(event.pool)
            pack = Counter(event.pack)
            writer.writerow(
                [
                    event.draft_id,
                    event.event_type,
                    event.player_rank or "",
                    event.pack_number + offset,
                    event.pick_number + offset,
                    event.chosen,
                ]
                + [pool.get(n, 0) for n in names]
                + [pack.get(n, 0) for n in names]
            )
            written += 1
    return written


def export_finetune_jsonl(
    events: Iterable[PickEvent],
    card_set: CardSet,
    mode: RenderMode,
    path: str | Path,
) -> int:
    """Write chat-format training lines, one compact JSON object per line:
    the built prompt as the user message, the chosen card name verbatim as
    the assistant message. Returns the number of lines written."""
    from .prompts import build_prompt

    written = 0
    with open(path, "w", encoding="utf-8", newline="\n") as out:
        for event in events:
            prompt = build_prompt(event.pool, event.pack, card_set, mode)
            line = {
                "messages": [
                    {"role": "user", "content": prompt.text},
                    {"role": "assistant", "content": event.chosen},
                ]
            }
            out.write(json.dumps(line, separators=(",", ":"), ensure_ascii=False))
            out.write("\n")
            written += 1
    return written
