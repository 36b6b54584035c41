"""The referee: stage machine, rule variants, measurements, transcripts.

A game runs through four stages: the host prepares the prize (stage 1),
the player announces a projector p (stage 2), the host opens a door q
that must be orthogonal to p and is certain not to reveal the prize
(stage 3, a binary Lueders measurement), and the player measures a
final projector orthogonal to q (stage 4).  The engine performs every
physical measurement itself; hosts and players only output choices, so
an illegal host raises HostViolation instead of silently skewing the
statistics.

Rule variants change what happens when the stage-3 measurement finds
the prize (reveal_wins, restart_on_reveal), what the host may do to the
prize (touch_allowed, complete_vn), and what the player must announce
(triple_choice, open_players_door).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from . import hilbert, kernels
from .errors import (
    ConfigError,
    DegenerateInput,
    HostViolation,
    IncompleteTriple,
    InvalidProjector,
    RestartLimitExceeded,
    RuleViolation,
    WrongStage,
)
from .hilbert import EPS, JointState, Projector, StateVector, Vec
from .streams import make_rng

VARIANTS = (
    "strict",
    "reveal_wins",
    "restart_on_reveal",
    "touch_allowed",
    "open_players_door",
    "complete_vn",
    "triple_choice",
)

PREPARED = "prepared"
CHOSEN = "chosen"
OPENED = "opened"
FINISHED = "finished"
ABORTED = "aborted"


@dataclass(frozen=True)
class RuleSet:
    """Which variant is in force, plus the announcement precision.

    ``announce_precision_digits`` rounds each real/imaginary part of the
    announced door vector to that many significant digits; the internal
    measurement always uses the exact door.  ``degenerate_door`` picks
    the policy when the forced door is not unique (the player chose the
    prize ray): "haar" draws it uniformly from the free plane, "fixed"
    takes a deterministic basis vector of it.
    """

    variant: str = "strict"
    announce_precision_digits: int | None = None
    restart_limit: int = 1000
    degenerate_door: str = "haar"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError("unknown rule variant %r (choose from %s)"
                              % (self.variant, ", ".join(VARIANTS)))
        d = self.announce_precision_digits
        if d is not None and (not isinstance(d, int) or d < 1):
            raise ConfigError("announce_precision_digits must be a positive "
                              "integer")
        if self.restart_limit < 1:
            raise ConfigError("restart_limit must be at least 1")
        if self.degenerate_door not in ("haar", "fixed"):
            raise ConfigError("degenerate_door must be 'haar' or 'fixed'")

    def label(self) -> str:
        if self.announce_precision_digits is None:
            return self.variant
        return "%s(digits=%d)" % (self.variant, self.announce_precision_digits)

    def to_config(self) -> dict:
        out: dict = {"variant": self.variant}
        if self.announce_precision_digits is not None:
            out["announce_precision_digits"] = self.announce_precision_digits
        if self.restart_limit != 1000:
            out["restart_limit"] = self.restart_limit
        if self.degenerate_door != "haar":
            out["degenerate_door"] = self.degenerate_door
        return out

    @classmethod
    def from_config(cls, cfg: "RuleSet | dict | str | None") -> "RuleSet":
        if cfg is None:
            return cls()
        if isinstance(cfg, RuleSet):
            return cfg
        if isinstance(cfg, str):
            return cls(variant=cfg)
        if not isinstance(cfg, dict):
            raise ConfigError("rules must be a RuleSet, a variant name, or "
                              "a config object")
        known = {"variant", "announce_precision_digits", "restart_limit",
                 "degenerate_door"}
        unknown = set(cfg) - known
        if unknown:
            raise ConfigError("unknown rule fields: %s" % ", ".join(sorted(unknown)))
        return cls(**cfg)


class MixedPrize:
    """Prize state that is a mixture of a few pure rays (after a touch)."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[tuple[float, Vec]]):
        total = sum(w for w, _ in components)
        if abs(total - 1.0) > 1e-9:
            raise ValueError("mixture weights sum to %r, not 1" % total)
        self.components = tuple((float(w), ax) for w, ax in components)

    def born(self, axis: Vec) -> float:
        return sum(w * kernels.born(ax, axis) for w, ax in self.components)

    def density(self) -> hilbert.DensityOperator:
        return hilbert.DensityOperator.mixture(self.components)


def truncate_announcement(chi: StateVector | Vec, digits: int) -> Vec:
    """Round each real/imaginary part to ``digits`` significant digits.

    Only the announced value is truncated; it is not renormalized, and
    the engine keeps measuring with the exact door.
    """
    if digits < 1:
        raise ConfigError("digits must be at least 1")

    def sig(x: float) -> float:
        if x == 0.0:
            return 0.0
        return round(x, digits - 1 - math.floor(math.log10(abs(x))))

    return tuple(complex(sig(c.real), sig(c.imag))
                 for c in hilbert.as_vec(chi))


@dataclass
class Transcript:
    """Complete record of one finished game.

    Vectors are stored as [re, im] pairs.  ``player`` is either the
    strategy configuration that produced the choices or a scripted
    record of the literal choices (for externally driven games); either
    way, re-running with the recorded seed reproduces the identical
    outcome.
    """

    host: dict
    player: dict
    rules: dict
    seed: dict | None
    prize_provenance: dict = field(default_factory=dict)
    p: list | None = None
    triple: list | None = None
    q: list | None = None
    announced_chi: list | None = None
    notepad_outcome: object = None
    vn_basis: list | None = None
    reveal: bool = False
    touched: bool = False
    degenerate_door: bool = False
    p_prime_submitted: list | None = None
    p_prime: list | None = None
    won: bool | None = None
    restarts: int = 0

    def to_json(self) -> str:
        return json.dumps(self.__dict__, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        return cls(**json.loads(text))


class GameSession:
    """One game in progress.  Single-threaded; sessions are independent."""

    __slots__ = (
        "rules", "host", "rng", "seed_info", "stage", "prize", "note",
        "p_axis", "triple_axes", "q_axis", "chi_announced", "p_prime_axis",
        "p_prime_submitted", "won", "restart_count", "notepad_outcome",
        "degenerate_door_used", "touched", "vn_basis", "stage3_reveal",
    )

    def __init__(self, rules: RuleSet, host, rng, seed_info: dict | None):
        self.rules = rules
        self.host = host
        self.rng = rng
        self.seed_info = seed_info
        self.stage = PREPARED
        self.prize = None
        self.note = None
        self.p_axis: Vec | None = None
        self.triple_axes = None
        self.q_axis: Vec | None = None
        self.chi_announced: Vec | None = None
        self.p_prime_axis: Vec | None = None
        self.p_prime_submitted: Vec | None = None
        self.won: bool | None = None
        self.restart_count = 0
        self.notepad_outcome = None
        self.degenerate_door_used = False
        self.touched = False
        self.vn_basis = None
        self.stage3_reveal = False

    @property
    def prize_state(self):
        """Current prize as a public value type."""
        if isinstance(self.prize, JointState):
            return self.prize
        if isinstance(self.prize, MixedPrize):
            return self.prize.density()
        if self.prize is None:
            return None
        return StateVector(self.prize)

    @property
    def p(self) -> Projector | None:
        return Projector(self.p_axis) if self.p_axis is not None else None

    @property
    def q(self) -> Projector | None:
        return Projector(self.q_axis) if self.q_axis is not None else None

    @property
    def p_prime(self) -> Projector | None:
        return (Projector(self.p_prime_axis)
                if self.p_prime_axis is not None else None)

    def transcript(self, player_record: dict | None = None) -> Transcript:
        pairs = hilbert.to_pairs
        t = Transcript(
            host=self.host.spec(),
            player=player_record or {},
            rules=self.rules.to_config(),
            seed=self.seed_info,
            prize_provenance={"host_kind": self.host.kind,
                              "seed": self.seed_info},
            restarts=self.restart_count,
        )
        if self.p_axis is not None:
            t.p = pairs(self.p_axis)
        if self.triple_axes is not None:
            t.triple = [pairs(a) for a in self.triple_axes]
        if self.q_axis is not None:
            t.q = pairs(self.q_axis)
        if self.chi_announced is not None:
            t.announced_chi = pairs(self.chi_announced)
        if self.vn_basis is not None:
            t.vn_basis = [pairs(a) for a in self.vn_basis]
        t.notepad_outcome = self.notepad_outcome
        t.reveal = self.stage3_reveal
        t.touched = self.touched
        t.degenerate_door = self.degenerate_door_used
        if self.p_prime_submitted is not None:
            t.p_prime_submitted = pairs(self.p_prime_submitted)
        if self.p_prime_axis is not None:
            t.p_prime = pairs(self.p_prime_axis)
        t.won = self.won
        return t


def _axis_of(value) -> Vec:
    if isinstance(value, Projector):
        return value.axis
    if isinstance(value, StateVector):
        return value.components
    v = hilbert.as_vec(value)
    n = kernels.norm_sq(v)
    if abs(n - 1.0) > 2.0 * EPS:
        raise InvalidProjector("projector axis is not unit: |v|^2 = %r" % n)
    return v


def new_session(rules: RuleSet | dict | str | None, host, rng,
                seed_info: dict | None = None) -> GameSession:
    """Stage 1: run the host's preparation and open a fresh session."""
    rules = RuleSet.from_config(rules)
    if rules.variant == "complete_vn" and not hasattr(host, "complete_basis"):
        raise ConfigError(
            "the complete_vn variant needs a host with a fixed, publicly "
            "known prize vector (host kind %r has none)" % host.kind)
    if getattr(host, "requires_triple", False) and rules.variant != "triple_choice":
        raise ConfigError(
            "host %r measures the player's triple and only plays under "
            "the triple_choice variant" % host.label())
    session = GameSession(rules, host, rng, seed_info)
    session.prize, session.note = host.prepare(rng)
    return session


def player_choose(session: GameSession, choice) -> None:
    """Stage 2: record the player's projector (or triple of projectors)."""
    if session.stage != PREPARED:
        raise WrongStage("cannot choose at stage %r" % session.stage)
    if session.rules.variant == "open_players_door":
        raise WrongStage("this variant analyzes the game with stage 2 "
                         "omitted; open the door directly")
    if _looks_like_triple(choice):
        _choose_triple(session, choice)
        return
    if session.rules.variant == "triple_choice":
        raise IncompleteTriple("the triple rules require three projectors "
                               "resolving the identity")
    session.p_axis = _axis_of(choice)
    session.stage = CHOSEN


def _looks_like_triple(choice) -> bool:
    if isinstance(choice, (Projector, StateVector)):
        return False
    if not isinstance(choice, (tuple, list)) or len(choice) != 3:
        return False
    return not all(isinstance(c, (int, float, complex)) for c in choice)


def _choose_triple(session: GameSession, triple) -> None:
    if session.rules.variant != "triple_choice":
        raise RuleViolation("a triple of projectors is only accepted under "
                            "the triple_choice variant")
    axes = tuple(_axis_of(c) for c in triple)
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(kernels.inner(axes[i], axes[j])) > EPS:
                raise IncompleteTriple(
                    "projectors %d and %d overlap; the triple must resolve "
                    "the identity" % (i, j))
    session.triple_axes = axes
    session.p_axis = axes[0]
    session.stage = CHOSEN


def _degenerate_door(session: GameSession, around: Vec) -> Vec:
    session.degenerate_door_used = True
    if session.rules.degenerate_door == "fixed":
        return kernels.complement_basis(around)[0]
    return kernels.unit_in_complement(around, session.rng)


def _restart(session: GameSession) -> None:
    session.restart_count += 1
    if session.restart_count > session.rules.restart_limit:
        session.stage = ABORTED
        raise RestartLimitExceeded(
            "game restarted %d times; giving up" % (session.restart_count - 1))
    session.prize, session.note = session.host.prepare(session.rng)
    session.p_axis = None
    session.triple_axes = None
    session.q_axis = None
    session.chi_announced = None
    session.notepad_outcome = None
    session.stage3_reveal = False
    session.stage = PREPARED


def host_open_door(session: GameSession) -> Vec | None:
    """Stage 3: the host picks a door, the engine measures {q, 1-q}.

    Returns the announced door vector (phase-normalized, truncated when
    the rules say so).  Under restart_on_reveal a reveal re-prepares the
    game and returns None with the session back at stage "prepared".
    """
    variant = session.rules.variant
    if variant == "open_players_door":
        if session.stage != PREPARED:
            raise WrongStage("cannot open a door at stage %r" % session.stage)
    elif session.stage != CHOSEN:
        raise WrongStage("cannot open a door at stage %r" % session.stage)

    host = session.host
    rng = session.rng

    if variant == "complete_vn":
        basis = host.complete_basis(session.p_axis, rng)
        apply_variant_complete_vn(session, basis)
        return session.chi_announced

    if isinstance(session.prize, JointState):
        povm = host.notepad_povm(session.p_axis, session.triple_axes)
        label, _post = hilbert.measure_notepad(session.prize, povm, rng)
        effect = next(e for e in povm.effects if e.label == label)
        collapsed = hilbert.collapsed_game_vector(session.prize, effect)
        session.prize = collapsed
        session.notepad_outcome = label
        try:
            q_axis = host.door_for_outcome(label, session.p_axis,
                                           session.triple_axes, rng)
        except DegenerateInput:
            q_axis = _degenerate_door(session, session.p_axis or collapsed)
    else:
        try:
            q_axis = host.choose_door(session.note, session.p_axis, rng)
        except DegenerateInput:
            q_axis = _degenerate_door(session,
                                      session.p_axis or session.prize)

    q_axis = hilbert.as_vec(q_axis)
    if abs(kernels.norm_sq(q_axis) - 1.0) > 2.0 * EPS:
        raise HostViolation("host produced a non-unit door axis")
    if session.p_axis is not None and abs(kernels.inner(q_axis, session.p_axis)) > EPS:
        raise HostViolation("host must open another door: q is not "
                            "orthogonal to p")
    if variant == "triple_choice":
        d1 = 1.0 - abs(kernels.inner(q_axis, session.triple_axes[1]))
        d2 = 1.0 - abs(kernels.inner(q_axis, session.triple_axes[2]))
        if min(d1, d2) > EPS:
            raise HostViolation("under the triple rules the host must open "
                                "one of the player's alternative projectors")

    return _measure_door(session, q_axis)


def _measure_door(session: GameSession, q_axis: Vec) -> Vec | None:
    """Lueders measurement of the opened door against the prize state."""
    variant = session.rules.variant
    hit, post = kernels.lueders(session.prize, q_axis, session.rng)
    if hit:
        session.stage3_reveal = True
        session.q_axis = q_axis
        if variant == "reveal_wins":
            # opening the prize door hands over all prizes
            session.prize = post
            session.chi_announced = _announce(session, q_axis)
            session.won = True
            session.stage = FINISHED
            return None
        if variant == "restart_on_reveal":
            _restart(session)
            return None
        session.stage = ABORTED
        raise HostViolation("host opened the door holding the prize")
    session.prize = post
    session.q_axis = q_axis
    session.chi_announced = _announce(session, q_axis)
    session.stage = OPENED
    if variant == "touch_allowed":
        apply_variant_touch(session)
    return session.chi_announced


def _announce(session: GameSession, q_axis: Vec) -> Vec:
    chi = kernels.phase_normalize(q_axis, EPS)
    digits = session.rules.announce_precision_digits
    if digits is not None:
        chi = truncate_announcement(chi, digits)
    return chi


def apply_variant_complete_vn(session: GameSession, basis) -> None:
    """Open a door as a complete von Neumann measurement.

    The host supplies an orthonormal basis (q, q', q''); q must be safe
    (orthogonal to the prize and to p).  The engine samples the outcome
    secretly, collapses the prize onto q' or q'', and announces q: this
    is the channel rho -> q rho q + q' rho q' + q'' rho q'' followed by
    forgetting which of the unopened doors fired.
    """
    if session.rules.variant != "complete_vn":
        raise WrongStage("complete von Neumann openings belong to the "
                         "complete_vn variant")
    if session.stage != CHOSEN:
        raise WrongStage("cannot open a door at stage %r" % session.stage)
    axes = tuple(_axis_of(b) for b in basis)
    if len(axes) != 3:
        raise RuleViolation("the complete measurement needs a basis of "
                            "three projectors")
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(kernels.inner(axes[i], axes[j])) > EPS:
                raise RuleViolation("measurement basis is not orthonormal")
    q, q1, q2 = axes
    if session.p_axis is not None and abs(kernels.inner(q, session.p_axis)) > EPS:
        raise RuleViolation("the opened direction must be orthogonal to p")
    prize = session.prize
    if kernels.born(prize, q) > EPS:
        raise RuleViolation("the opened direction must be orthogonal to "
                            "the prize vector")
    # sample the von Neumann outcome among the two unopened directions
    w1 = kernels.born(prize, q1)
    w2 = kernels.born(prize, q2)
    u = session.rng.random() * (w1 + w2)
    session.prize = kernels.project_onto(prize, q1 if u < w1 else q2)
    session.vn_basis = axes
    session.q_axis = q
    session.chi_announced = _announce(session, q)
    session.stage = OPENED


def apply_variant_touch(session: GameSession) -> None:
    """Replace the prize by the equal mixture over the two closed doors."""
    if session.rules.variant != "touch_allowed":
        raise WrongStage("touching the prize requires the touch_allowed "
                         "variant")
    if session.stage != OPENED:
        raise WrongStage("the host touches the prize after opening a door")
    if session.touched:
        return
    p_axis = session.p_axis
    sw = kernels.cross_conj(p_axis, session.q_axis)
    if kernels.norm_sq(sw) <= EPS * EPS:
        raise RuleViolation("cannot equalize: p and q do not leave a "
                            "third door")
    sw = kernels.normalize(sw)
    session.prize = MixedPrize(((0.5, p_axis), (0.5, sw)))
    session.touched = True


def _final_tolerance(session: GameSession) -> float:
    digits = session.rules.announce_precision_digits
    if digits is None:
        return EPS
    # the player only saw a door rounded to `digits` significant digits,
    # so her orthogonality can be off by a few units in that digit
    return max(EPS, 32.0 * 10.0 ** (-digits))


def player_final(session: GameSession, p_prime) -> bool:
    """Stage 4: measure the player's final projector against the prize."""
    if session.stage != OPENED:
        raise WrongStage("cannot make the final choice at stage %r"
                         % session.stage)
    axis = _axis_of(p_prime)
    overlap = abs(kernels.inner(axis, session.q_axis))
    if overlap > _final_tolerance(session):
        raise RuleViolation("the final choice must be orthogonal to the "
                            "opened door (|<p'|q>| = %.3g)" % overlap)
    session.p_prime_submitted = axis
    if overlap > 0.0:
        # project into (1-q)H so the recorded move is exactly legal
        axis = kernels.project_out(axis, session.q_axis)
    session.p_prime_axis = axis

    prize = session.prize
    if isinstance(prize, MixedPrize):
        won = session.rng.random() < prize.born(axis)
    else:
        won, post = kernels.lueders(prize, axis, session.rng)
        session.prize = post
    session.won = won
    session.stage = FINISHED
    return won


class _ScriptedPlayer:
    """Replays recorded choices; used to re-run externally driven games."""

    kind = "scripted"

    def __init__(self, record: dict):
        self._record = dict(record)
        self._first = [hilbert.from_pairs(p) for p in record.get("p_rounds", [])]
        self._triples = [tuple(hilbert.from_pairs(a) for a in t)
                         for t in record.get("triple_rounds", [])]
        self._final = (hilbert.from_pairs(record["p_prime"])
                       if record.get("p_prime") else None)
        self._i = 0

    def first_choice(self, rng, need_triple=False):
        i = self._i
        self._i += 1
        if need_triple:
            return self._triples[i]
        return self._first[i]

    def final_choice(self, p_axis, triple, chi, rng):
        return self._final

    def spec(self):
        return dict(self._record)


def scripted_record(session: GameSession, p_rounds, triple_rounds) -> dict:
    """Player record for a transcript of an externally driven game."""
    rec: dict = {"kind": "scripted"}
    if p_rounds:
        rec["p_rounds"] = [hilbert.to_pairs(p) for p in p_rounds]
    if triple_rounds:
        rec["triple_rounds"] = [[hilbert.to_pairs(a) for a in t]
                                for t in triple_rounds]
    if session.p_prime_submitted is not None:
        rec["p_prime"] = hilbert.to_pairs(session.p_prime_submitted)
    return rec


def play_game(rules, host, player, rng, *, collect_transcript: bool = False,
              seed_info: dict | None = None):
    """Drive one full game with strategy objects on both sides.

    Returns (won, transcript or None).  Restarts re-run preparation and
    the player's first choice on the same random stream.
    """
    rules = RuleSet.from_config(rules)
    session = new_session(rules, host, rng, seed_info)
    need_triple = rules.variant == "triple_choice"
    while True:
        if rules.variant != "open_players_door":
            choice = player.first_choice(rng, need_triple=need_triple)
            player_choose(session, choice)
        host_open_door(session)
        if session.stage == PREPARED:
            continue
        break
    if session.stage == OPENED:
        p2 = player.final_choice(session.p_axis, session.triple_axes,
                                 session.chi_announced, rng)
        player_final(session, p2)
    if not collect_transcript:
        return session.won, None
    record = player.spec() if hasattr(player, "spec") else {"kind": "unknown"}
    transcript = session.transcript(player_record=record)
    return session.won, transcript


def replay_transcript(transcript: Transcript | dict) -> Transcript:
    """Re-run a recorded game from its seed; returns the new transcript.

    The caller compares it against the recording; both runs are built
    from the same host/player configuration and the same substream, so
    they must agree bit for bit.
    """
    from . import strategies  # deferred: strategies never imports engine

    t = transcript.__dict__ if isinstance(transcript, Transcript) else dict(transcript)
    seed = t.get("seed") or {}
    if "seed" not in seed:
        raise ConfigError("transcript carries no seed; it cannot be replayed")
    rng = make_rng(int(seed["seed"]), int(seed.get("stream", 0)))
    host = strategies.host_from_spec(t["host"])
    player_rec = t.get("player") or {}
    if player_rec.get("kind") == "scripted":
        player = _ScriptedPlayer(player_rec)
    else:
        player = strategies.player_from_spec(player_rec, host=host)
    rules = RuleSet.from_config(t.get("rules"))
    _won, new_t = play_game(rules, host, player, rng,
                            collect_transcript=True, seed_info=t.get("seed"))
    return new_t
