"""Session-oriented JSON API over the game engine.

Versioned under /api/v1.  A session owns a sequence of games against a
fixed host and rule set; each finished game folds into the session's
running score and the next game starts on demand.  Game k of a session
consumes random substream k of the session seed, so any game can be
reproduced from the response data alone.

Complex vectors cross the wire as [re, im] pairs; floats are emitted at
full round-trip precision unless the rule set truncates announcements.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
import uuid

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import engine, hilbert, strategies
from .engine import ABORTED, FINISHED, OPENED, VARIANTS, RuleSet
from .errors import (CheatAmbiguous, CheatDegenerate, CheatSetupFailed,
                     ConfigError, DegenerateInput, EffectRankTooHigh,
                     IncompleteTriple, InvalidProjector, QmontyError,
                     RuleViolation, WrongStage)
from .lab import wilson_interval
from .streams import TrialStreams, make_rng

DEFAULT_IDLE_EXPIRY = 3600.0

HINT_MODES = ("stick", "switch", "cheat_finite", "cheat_real")


class NotFound(QmontyError):
    pass


def _error_payload(code: str, exc: Exception) -> dict:
    return {"error": {"code": code, "message": str(exc),
                      "detail": type(exc).__name__}}


class SessionRecord:
    """One client's slot: engine session, score, and housekeeping."""

    def __init__(self, session_id: str, host, rules: RuleSet, seed: int,
                 disclose_host: bool):
        self.session_id = session_id
        self.host = host
        self.rules = rules
        self.seed = seed
        self.disclose_host = disclose_host
        self.streams = TrialStreams(seed)
        self.lock = threading.Lock()
        self.created_at = time.time()
        self.last_used = time.monotonic()
        self.game_index = -1
        self.session = None
        self.games = 0
        self.wins = 0
        self.last_result = None
        self._next_game()

    def _next_game(self) -> None:
        self.game_index += 1
        rng = self.streams.rng_for(self.game_index)
        self.session = engine.new_session(
            self.rules, self.host, rng,
            seed_info={"seed": self.seed, "stream": self.game_index})

    def settle(self) -> None:
        """Fold a finished or aborted game into the score and rearm."""
        stage = self.session.stage
        if stage == FINISHED:
            self.games += 1
            self.wins += int(bool(self.session.won))
            self.last_result = {
                "game_index": self.game_index,
                "won": bool(self.session.won),
                "aborted": False,
            }
            self._next_game()
        elif stage == ABORTED:
            self.last_result = {
                "game_index": self.game_index,
                "won": None,
                "aborted": True,
            }
            self._next_game()

    def stats(self) -> dict:
        if self.games == 0:
            return {"games": 0, "wins": 0, "estimate": None,
                    "ci_low": None, "ci_high": None}
        low, high = wilson_interval(self.wins, self.games)
        return {"games": self.games, "wins": self.wins,
                "estimate": self.wins / self.games,
                "ci_low": low, "ci_high": high}

    def state(self) -> dict:
        s = self.session
        pairs = hilbert.to_pairs
        return {
            "session_id": self.session_id,
            "stage": s.stage,
            "game_index": self.game_index,
            "rules": self.rules.to_config(),
            "seed": self.seed,
            "disclose_host": self.disclose_host,
            "host": self.host.spec() if self.disclose_host else None,
            "p": pairs(s.p_axis) if s.p_axis is not None else None,
            "triple": ([pairs(a) for a in s.triple_axes]
                       if s.triple_axes is not None else None),
            "chi": (pairs(s.chi_announced)
                    if s.chi_announced is not None else None),
            "reveal": s.stage3_reveal,
            "touched": s.touched,
            "restarts": s.restart_count,
            "won": s.won,
            "last_result": self.last_result,
            "stats": self.stats(),
        }


def _vector_from(payload, key: str):
    try:
        return hilbert.from_pairs(payload[key])
    except QmontyError:
        raise
    except Exception:
        raise ConfigError("field %r must be three [re, im] pairs"
                          % key) from None


def _hint_vector(record: SessionRecord, mode: str):
    """The vector the named strategy would submit now, uncommitted."""
    s = record.session
    if mode not in HINT_MODES:
        raise ConfigError("unknown hint mode %r" % mode)
    if s.stage != OPENED:
        raise WrongStage("hints apply to an opened game, not stage %r"
                         % s.stage)
    if mode == "stick":
        return s.p_axis
    throwaway = make_rng(0)
    if mode == "switch":
        player = strategies.SwitchPlayer()
        return player.final_choice(s.p_axis, s.triple_axes,
                                   s.chi_announced, throwaway)
    if not record.disclose_host:
        raise ConfigError("cheat hints need a disclosed host")
    if mode == "cheat_real":
        if record.host.kind != "real":
            raise ConfigError("the real-vector cheat needs a real-vector "
                              "host")
        player = strategies.RealCheatPlayer()
    else:
        catalog = strategies.catalog_of(record.host)
        if catalog is None:
            raise ConfigError("this host has no finite catalog to cheat "
                              "against")
        player = strategies.FiniteSetCheatPlayer(catalog,
                                                 on_ambiguous="best_guess")
    return player.final_choice(s.p_axis, s.triple_axes, s.chi_announced,
                               throwaway)


def _strategy_catalog() -> dict:
    return {
        "hosts": [
            {"kind": "haar", "label": "uniform random prize"},
            {"kind": "axes", "label": "prize on a fixed basis",
             "params": ["basis"]},
            {"kind": "finite_set", "label": "prize from a finite catalog",
             "params": ["vectors", "probabilities"]},
            {"kind": "real", "label": "real-valued prize"},
            {"kind": "ignore_notepad", "label": "oblivious door opener",
             "params": ["reveal_bias"]},
            {"kind": "complete_vn", "label": "complete measurement host",
             "params": ["prize"]},
            {"kind": "entangled", "label": "entangled notepad host",
             "params": ["policy", "povm", "measure_early"]},
        ],
        "players": [
            {"kind": "stick", "label": "keep the first choice"},
            {"kind": "switch", "label": "move to the untouched door"},
            {"kind": "sweep", "label": "interpolate switch and stick",
             "params": ["theta"]},
            {"kind": "cheat_finite", "label": "finite-catalog cheat",
             "params": ["vectors"]},
            {"kind": "cheat_real", "label": "real-vector cheat"},
            {"kind": "bayes", "label": "model-based best response",
             "params": ["samples"]},
        ],
        "variants": list(VARIANTS),
        "hint_modes": list(HINT_MODES),
    }


def create_app(idle_expiry: float = DEFAULT_IDLE_EXPIRY) -> FastAPI:
    app = FastAPI(title="qmonty", docs_url=None, redoc_url=None)
    sessions: dict[str, SessionRecord] = {}
    registry_lock = threading.Lock()

    def purge_idle() -> None:
        now = time.monotonic()
        with registry_lock:
            dead = [sid for sid, rec in sessions.items()
                    if now - rec.last_used > idle_expiry]
            for sid in dead:
                del sessions[sid]

    def get_record(session_id: str) -> SessionRecord:
        purge_idle()
        with registry_lock:
            rec = sessions.get(session_id)
            if rec is None:
                raise NotFound("no session %r" % session_id)
            rec.last_used = time.monotonic()
            return rec

    async def read_body(request: Request) -> dict:
        raw = await request.body()
        if not raw:
            return {}
        try:
            payload = json.loads(raw)
        except ValueError:
            raise ConfigError("request body must be JSON") from None
        if not isinstance(payload, dict):
            raise ConfigError("request body must be a JSON object")
        return payload

    @app.exception_handler(NotFound)
    async def on_not_found(request, exc):
        return JSONResponse(_error_payload("not_found", exc),
                            status_code=404)

    @app.exception_handler(WrongStage)
    async def on_wrong_stage(request, exc):
        return JSONResponse(_error_payload("wrong_stage", exc),
                            status_code=409)

    @app.exception_handler(RuleViolation)
    async def on_rule_violation(request, exc):
        return JSONResponse(_error_payload("rule_violation", exc),
                            status_code=409)

    for invalid in (ConfigError, InvalidProjector, IncompleteTriple,
                    DegenerateInput, CheatSetupFailed, CheatAmbiguous,
                    CheatDegenerate, EffectRankTooHigh):
        @app.exception_handler(invalid)
        async def on_invalid(request, exc):
            return JSONResponse(_error_payload("invalid_input", exc),
                                status_code=400)

    @app.post("/api/v1/sessions", status_code=201)
    async def create_session(request: Request):
        payload = await read_body(request)
        purge_idle()
        host = strategies.host_from_spec(payload.get("host",
                                                     {"kind": "haar"}))
        rules = RuleSet.from_config(payload.get("rules"))
        seed = payload.get("seed")
        if seed is None:
            seed = secrets.randbits(63)
        elif not isinstance(seed, int) or isinstance(seed, bool):
            raise ConfigError("seed must be an integer")
        disclose = bool(payload.get("disclose_host", True))
        record = SessionRecord(uuid.uuid4().hex, host, rules, seed, disclose)
        with registry_lock:
            sessions[record.session_id] = record
        return record.state()

    @app.get("/api/v1/sessions/{session_id}")
    async def get_session(session_id: str):
        record = get_record(session_id)
        with record.lock:
            record.settle()
            return record.state()

    @app.get("/api/v1/sessions/{session_id}/stats")
    async def get_stats(session_id: str):
        record = get_record(session_id)
        with record.lock:
            record.settle()
            return {"session_id": record.session_id, **record.stats()}

    @app.post("/api/v1/sessions/{session_id}/door")
    async def choose_door(session_id: str, request: Request):
        payload = await read_body(request)
        record = get_record(session_id)
        with record.lock:
            record.settle()
            if "triple" in payload:
                raw = payload["triple"]
                if not isinstance(raw, (list, tuple)) or len(raw) != 3:
                    raise ConfigError("field 'triple' must hold three "
                                      "vectors")
                choice = tuple(_vector_from({"v": item}, "v")
                               for item in raw)
            elif "phi" in payload:
                choice = _vector_from(payload, "phi")
            else:
                raise ConfigError("provide 'phi' (one vector) or 'triple' "
                                  "(three vectors)")
            engine.player_choose(record.session, choice)
            engine.host_open_door(record.session)
            state = record.state()
            record.settle()
            state["stats"] = record.stats()
            state["last_result"] = record.last_result
            return state

    @app.post("/api/v1/sessions/{session_id}/final")
    async def final_choice(session_id: str, request: Request):
        payload = await read_body(request)
        record = get_record(session_id)
        with record.lock:
            record.settle()
            if "p_prime" in payload:
                vec = _vector_from(payload, "p_prime")
            elif "mode" in payload:
                vec = _hint_vector(record, str(payload["mode"]))
            else:
                raise ConfigError("provide 'p_prime' ([re, im] pairs) or "
                                  "'mode'")
            won = engine.player_final(record.session, vec)
            state = record.state()
            state["won"] = won
            record.settle()
            state["stats"] = record.stats()
            state["last_result"] = record.last_result
            return state

    @app.get("/api/v1/sessions/{session_id}/hint")
    async def hint(session_id: str, mode: str = "switch"):
        record = get_record(session_id)
        with record.lock:
            record.settle()
            vec = _hint_vector(record, mode)
            return {"mode": mode, "p_prime": hilbert.to_pairs(vec)}

    @app.get("/api/v1/strategies")
    async def list_strategies():
        return _strategy_catalog()

    return app


app = create_app()
