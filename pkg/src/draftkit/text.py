"""Text normalization and fuzzy-matching helpers shared by card lookup and
response resolution."""

from __future__ import annotations

import re
import unicodedata

_WS_RUN = re.compile(r"\s+")
# keeps word characters, whitespace, hyphens and apostrophes; drops the rest
_PUNCT = re.compile(r"[^\w\s'’-]", re.UNICODE)


def normalize_name(raw: str) -> str:
    """Canonical comparison form of a card name.

    NFC-normalized, outer whitespace stripped, inner runs collapsed to one
    space, casefolded.
    """
    text = unicodedata.normalize("NFC", raw)
    text = _WS_RUN.sub(" ", text.strip())
    return text.casefold()


def normalize_response(raw: str) -> str:
    """Normalization applied to free-form model output before matching.

    Like normalize_name but additionally strips punctuation except hyphens
    and apostrophes (card names use both).
    """
    text = unicodedata.normalize("NFC", raw).casefold()
    text = text.replace("’", "'")
    text = _PUNCT.sub(" ", text)
    return _WS_RUN.sub(" ", text).strip()


def levenshtein(a: str, b: str, limit: int | None = None) -> int:
    """Edit distance between two strings (insertions, deletions,
    substitutions each cost 1).

    When limit is given and the true distance exceeds it, returns limit + 1
    instead of the exact value (early exit keeps candidate scans cheap).
    """
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    if limit is not None and len(a) - len(b) > limit:
        return limit + 1

    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        best = i
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            val = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
            cur.append(val)
            if val < best:
                best = val
        if limit is not None and best > limit:
            return limit + 1
        prev = cur
    return prev[-1]
