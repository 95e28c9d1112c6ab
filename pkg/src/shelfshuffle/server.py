"""Session-oriented HTTP API for live guessing games and exact-law queries.

Sessions are in-memory with a TTL; the hidden deck is never serialized while
a session is active.  Classification of a correct guess (lucky vs certified)
is done server-side with the same rule the strategy module uses, so human
games and simulated games share one definition.
"""

from __future__ import annotations

import random
import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import exact, oracle, shuffle, strategy
from .params import Prob, format_probability, format_value, parse_probability

MAX_SESSION_CARDS = 1000
DEFAULT_TTL_SECONDS = 3600.0


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _validation_error(message: str) -> ApiError:
    return ApiError(400, "validation", message)


@dataclass
class Session:
    session_id: str
    n: int
    p: Prob
    deck: tuple[int, ...]
    state: strategy.GuesserState
    created: float
    history: list[dict] = field(default_factory=list)
    lucky: int = 0
    certified: int = 0
    incorrect: int = 0

    @property
    def step(self) -> int:
        return len(self.history)

    @property
    def finished(self) -> bool:
        return self.step >= self.n

    @property
    def status(self) -> str:
        return "finished" if self.finished else "active"

    @property
    def revealed(self) -> tuple[int, ...]:
        return self.deck[: self.step]

    def totals(self) -> dict:
        return {
            "total": self.lucky + self.certified,
            "lucky": self.lucky,
            "certified": self.certified,
        }

    def public_view(self) -> dict:
        view = {
            "session_id": self.session_id,
            "n": self.n,
            "p": format_probability(self.p),
            "status": self.status,
            "history": list(self.history),
            "totals": self.totals(),
            "remaining_count": self.n - self.step,
            "remaining_labels": sorted(self.state.unseen),
        }
        if self.finished:
            view["deck"] = list(self.deck)
        return view


class SessionStore:
    """Thread-safe in-memory session map with lazy TTL expiry."""

    def __init__(self, ttl_seconds: float = DEFAULT_TTL_SECONDS, clock: Callable[[], float] = time.monotonic):
        self.ttl = ttl_seconds
        self.clock = clock
        self._lock = threading.RLock()
        self._sessions: dict[str, Session] = {}

    def _purge(self) -> None:
        now = self.clock()
        dead = [k for k, s in self._sessions.items() if now - s.created > self.ttl]
        for k in dead:
            del self._sessions[k]

    def add(self, session: Session) -> None:
        with self._lock:
            self._purge()
            self._sessions[session.session_id] = session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._purge()
            session = self._sessions.get(session_id)
            if session is None:
                raise ApiError(404, "not_found", f"unknown session {session_id!r}")
            return session

    def lock(self) -> threading.RLock:
        return self._lock


class CreateSessionBody(BaseModel):
    n: int
    p: str | float | int = "1/2"
    seed: int | None = None
    flips: list[bool] | None = None  # explicit placements, for scripted replays


class GuessBody(BaseModel):
    label: int


def _parse_bias(raw) -> Prob:
    try:
        return parse_probability(raw)
    except ValueError as exc:
        raise _validation_error(str(exc)) from exc


def create_app(
    ttl_seconds: float = DEFAULT_TTL_SECONDS,
    clock: Callable[[], float] = time.monotonic,
    cors_origins: list[str] | None = None,
) -> FastAPI:
    app = FastAPI(title="shelfshuffle", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(ttl_seconds=ttl_seconds, clock=clock)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def api_error_handler(_: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status, content={"error": exc.code, "message": exc.message}
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"error": "validation", "message": str(exc.errors())}
        )

    @app.post("/api/session", status_code=201)
    def create_session(body: CreateSessionBody):
        if not 1 <= body.n <= MAX_SESSION_CARDS:
            raise _validation_error(f"n must be in 1..{MAX_SESSION_CARDS}, got {body.n}")
        p = _parse_bias(body.p)
        if body.flips is not None:
            if len(body.flips) != body.n - 1:
                raise _validation_error(
                    f"flips must have length n-1 = {body.n - 1}, got {len(body.flips)}"
                )
            deck = shuffle.deck_from_placements(body.n, body.flips)
        else:
            rng = random.Random(body.seed if body.seed is not None else secrets.randbits(64))
            deck = shuffle.shelf_shuffle(body.n, p, rng)
        session = Session(
            session_id=secrets.token_hex(16),
            n=body.n,
            p=p,
            deck=deck,
            state=strategy.initial_state(body.n, p),
            created=store.clock(),
        )
        store.add(session)
        return {"session_id": session.session_id, "n": session.n, "p": format_probability(p)}

    @app.get("/api/session/{session_id}")
    def get_session(session_id: str):
        return store.get(session_id).public_view()

    @app.post("/api/session/{session_id}/guess")
    def submit_guess(session_id: str, body: GuessBody):
        # Mutations within a session are serialized by the store lock.
        with store.lock():
            session = store.get(session_id)
            if session.finished:
                raise ApiError(409, "conflict", "session is finished")
            label = body.label
            if not 1 <= label <= session.n:
                raise _validation_error(f"label must be in 1..{session.n}")
            if label not in session.state.unseen:
                raise _validation_error(f"label {label} has already been shown")
            shown = session.deck[session.step]
            new_state, cls = strategy.observe(session.state, shown, label)
            session.state = new_state
            if cls is strategy.GuessClassification.LUCKY:
                session.lucky += 1
            elif cls is strategy.GuessClassification.CERTIFIED:
                session.certified += 1
            else:
                session.incorrect += 1
            session.history.append(
                {"guess": label, "shown": shown, "classification": cls.value}
            )
            response = {
                "shown": shown,
                "correct": label == shown,
                "classification": cls.value,
                "totals": session.totals(),
                "remaining_count": session.n - session.step,
                "status": session.status,
            }
            if session.finished:
                response["deck"] = list(session.deck)
            return response

    @app.get("/api/session/{session_id}/hint")
    def hint(session_id: str):
        session = store.get(session_id)
        if session.finished:
            raise ApiError(409, "conflict", "session is finished")
        law = oracle.conditional_next_card_closed(session.n, session.p, session.revealed)
        optimal = strategy.next_guess(session.state)
        return {
            "optimal_guess": optimal,
            "conditional_law": [[c, format_value(v)] for c, v in sorted(law.items())],
            "certified": law.get(optimal) == 1,
        }

    def _law_params(n, p) -> tuple[int, Prob]:
        try:
            n = int(n)
        except (TypeError, ValueError):
            raise _validation_error(f"n must be an integer, got {n!r}")
        if not 1 <= n <= MAX_SESSION_CARDS:
            raise _validation_error(f"n must be in 1..{MAX_SESSION_CARDS}")
        return n, _parse_bias(p)

    @app.get("/api/exact/pmf")
    def exact_pmf(n: str, p: str = "1/2"):
        size, bias = _law_params(n, p)
        return exact.total_pmf(size, bias).to_json_dict()

    @app.get("/api/exact/joint")
    def exact_joint(n: str, p: str = "1/2"):
        size, bias = _law_params(n, p)
        if size > 256:
            raise _validation_error("joint law is limited to n <= 256")
        return exact.joint_pmf(size, bias).to_json_dict()

    @app.get("/api/exact/position-matrix")
    def exact_position_matrix(n: str, p: str = "1/2"):
        size, bias = _law_params(n, p)
        if size > 256:
            raise _validation_error("position matrix is limited to n <= 256")
        matrix = shuffle.position_matrix(size, bias)
        return {
            "n": size,
            "p": format_probability(bias),
            "rows": [[format_value(v) for v in row] for row in matrix],
        }

    return app


app = create_app()
