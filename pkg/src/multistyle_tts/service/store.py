"""Session and answer persistence.

Answers go to one append-only JSONL log per test kind; each accepted answer
is exactly one write call, serialized through a lock, so concurrent posts
never tear lines and the log line count always equals the accepted count.
Sessions live in an append-only index file and are rebuilt on restart.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from ..evalkit import Answer

TEST_KINDS = ("abx", "preference", "query_match")


@dataclass
class Session:
    session_id: str
    kind: str
    item_ids: list[str]
    created_at: float
    answered: set[str] = field(default_factory=set)

    @property
    def cursor(self) -> int:
        return len(self.answered)

    def next_item_id(self) -> str | None:
        for item_id in self.item_ids:
            if item_id not in self.answered:
                return item_id
        return None


class AnswerLog:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._seen: set[tuple[str, str]] = set()
        if self.path.exists():
            for ans in self.answers():
                self._seen.add((ans.session_id, ans.item_id))

    def append(self, answer: Answer) -> bool:
        """Record one answer; False if this (session, item) already answered."""
        key = (answer.session_id, answer.item_id)
        line = (
            json.dumps(
                {
                    "session_id": answer.session_id,
                    "item_id": answer.item_id,
                    "choice": answer.choice,
                    "timestamp": answer.timestamp,
                }
            )
            + "\n"
        )
        with self._lock:
            if key in self._seen:
                return False
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(line)
                f.flush()
            self._seen.add(key)
        return True

    def answers(self) -> list[Answer]:
        if not self.path.exists():
            return []
        out = []
        with open(self.path, "r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if line:
                    out.append(Answer(**json.loads(line)))
        return out

    def answered_items(self, session_id: str) -> set[str]:
        with self._lock:
            return {item for sid, item in self._seen if sid == session_id}


class SessionStore:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._index_path = self.data_dir / "sessions.jsonl"
        self._lock = threading.Lock()
        self.logs = {kind: AnswerLog(self.data_dir / f"answers_{kind}.jsonl") for kind in TEST_KINDS}
        self._sessions: dict[str, Session] = {}
        if self._index_path.exists():
            with open(self._index_path, "r", encoding="utf-8") as f:
                for line in f:
                    line = line.strip()
                    if not line:
                        continue
                    rec = json.loads(line)
                    session = Session(
                        session_id=rec["session_id"],
                        kind=rec["kind"],
                        item_ids=rec["item_ids"],
                        created_at=rec["created_at"],
                    )
                    session.answered = self.logs[session.kind].answered_items(session.session_id)
                    self._sessions[session.session_id] = session

    def create(self, kind: str, item_ids: list[str]) -> Session:
        if kind not in TEST_KINDS:
            raise ValueError(f"unknown test kind {kind!r}")
        session = Session(
            session_id=uuid.uuid4().hex,
            kind=kind,
            item_ids=list(item_ids),
            created_at=time.time(),
        )
        with self._lock:
            self._sessions[session.session_id] = session
            with open(self._index_path, "a", encoding="utf-8") as f:
                f.write(
                    json.dumps(
                        {
                            "session_id": session.session_id,
                            "kind": session.kind,
                            "item_ids": session.item_ids,
                            "created_at": session.created_at,
                        }
                    )
                    + "\n"
                )
                f.flush()
        return session

    def get(self, kind: str, session_id: str) -> Session | None:
        session = self._sessions.get(session_id)
        if session is None or session.kind != kind:
            return None
        return session

    def record_answer(self, session: Session, answer: Answer) -> bool:
        accepted = self.logs[session.kind].append(answer)
        if accepted:
            session.answered.add(answer.item_id)
        return accepted
