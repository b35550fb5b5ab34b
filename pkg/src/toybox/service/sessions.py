"""In-memory registry of live environment sessions.

Each session owns one env (and optionally one server-side agent) behind a
per-session lock; the registry itself is guarded by its own lock so many
clients can drive distinct sessions concurrently.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from ..env import BreakoutEnv, Observation


@dataclass
class Session:
    env: BreakoutEnv
    agent_spec: dict | None = None
    agent: object | None = None
    render: bool = False
    last_observation: Observation | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionLimitError(RuntimeError):
    pass


class SessionRegistry:
    def __init__(self, max_sessions: int = 128) -> None:
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self.max_sessions = max_sessions

    def create(self, session: Session) -> str:
        with self._lock:
            if len(self._sessions) >= self.max_sessions:
                raise SessionLimitError(
                    f"session limit reached ({self.max_sessions}); close an env first"
                )
            env_id = uuid.uuid4().hex
            self._sessions[env_id] = session
            return env_id

    def get(self, env_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(env_id)
        if session is None:
            raise KeyError(env_id)
        return session

    def remove(self, env_id: str) -> None:
        with self._lock:
            if env_id not in self._sessions:
                raise KeyError(env_id)
            del self._sessions[env_id]

    def __len__(self) -> int:
        with self._lock:
            return len(self._sessions)
