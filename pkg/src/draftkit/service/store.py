"""Session state with append-only per-session event logs.

Each session persists as <dir>/<session_id>.jsonl: one create line followed
by one line per recorded pick. Logs replay on startup, so a restart loses
nothing. Mutations are serialized per session (single writer)."""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

MAX_PICKS = 45


class DraftSessionComplete(Exception):
    """Raised on the pick that would exceed the 45-card draft."""


@dataclass
class Session:
    """One human drafter's view. pool is derived: the multiset of all chosen
    names in pick_history."""

    session_id: str
    set_code: str
    agent: str
    created_at: float
    pick_history: list[tuple[list[str], str]] = field(default_factory=list)

    @property
    def pool(self) -> list[str]:
        return [chosen for _, chosen in self.pick_history]

    @property
    def complete(self) -> bool:
        return len(self.pick_history) >= MAX_PICKS


class SessionStore:
    def __init__(self, directory: str | Path):
        self._dir = Path(directory)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._load_all()

    def _log_path(self, session_id: str) -> Path:
        return self._dir / f"{session_id}.jsonl"

    def _load_all(self) -> None:
        for path in sorted(self._dir.glob("*.jsonl")):
            session: Session | None = None
            for line in path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                record = json.loads(line)
                if record["type"] == "create":
                    session = Session(
                        session_id=record["session_id"],
                        set_code=record["set_code"],
                        agent=record["agent"],
                        created_at=record["created_at"],
                    )
                elif record["type"] == "pick" and session is not None:
                    session.pick_history.append(
                        (list(record.get("pack", [])), record["card"])
                    )
            if session is not None:
                self._sessions[session.session_id] = session
                self._locks[session.session_id] = threading.Lock()

    def create(self, set_code: str, agent: str) -> Session:
        session = Session(
            session_id=uuid.uuid4().hex,
            set_code=set_code,
            agent=agent,
            created_at=time.time(),
        )
        with self._registry_lock:
            self._sessions[session.session_id] = session
            self._locks[session.session_id] = threading.Lock()
        with open(self._log_path(session.session_id), "w", encoding="utf-8") as out:
            out.write(
                json.dumps(
                    {
                        "type": "create",
                        "session_id": session.session_id,
                        "set_code": session.set_code,
                        "agent": session.agent,
                        "created_at": session.created_at,
                    }
                )
                + "\n"
            )
        return session

    def get(self, session_id: str) -> Session | None:
        return self._sessions.get(session_id)

    def append_pick(self, session_id: str, pack: list[str], card: str) -> Session:
        session = self._sessions[session_id]
        with self._locks[session_id]:
            if session.complete:
                raise DraftSessionComplete()
            with open(self._log_path(session_id), "a", encoding="utf-8") as out:
                out.write(
                    json.dumps({"type": "pick", "pack": pack, "card": card}) + "\n"
                )
            session.pick_history.append((pack, card))
        return session
