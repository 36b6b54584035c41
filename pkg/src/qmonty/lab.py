"""Monte Carlo experiment harness and analytic oracles.

Every closed-form win probability the game admits is catalogued in
``analytic_value``; ``run_trials`` estimates the same quantities by
seeded simulation, with one independent random substream per trial so
results are identical no matter how the trials are scheduled.  The
module also houses the conditional-state model for the uniform host,
the mean-density estimator, the theta sweep between switching and
sticking, and an exploratory best-response probe.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import engine, hilbert, kernels, strategies
from .engine import RuleSet
from .errors import ConfigError, HostViolation
from .hilbert import EPS, DensityOperator, Projector
from .streams import TrialStreams, make_rng

Z95 = 1.959963984540054

# substream index reserved for setup draws (catalogs etc.); trial indices
# are always small nonnegative integers, so they never collide with it
SETUP_STREAM = (1 << 64) - 1


def wilson_interval(wins: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """95% Wilson score interval; well-behaved at estimates 0 and 1."""
    if trials < 1:
        raise ConfigError("need at least one trial")
    p = wins / trials
    zz = z * z / trials
    denom = 1.0 + zz
    center = (p + zz / 2.0) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + zz / (4.0 * trials)) / denom
    # at 0 or n wins one end is exactly the estimate; rounding in
    # center-half would otherwise leave a stray ulp
    low = 0.0 if wins == 0 else max(0.0, center - half)
    high = 1.0 if wins == trials else min(1.0, center + half)
    return low, high


@dataclass(frozen=True)
class WinStats:
    """Outcome of a Monte Carlo run."""

    trials: int
    wins: int
    estimate: float
    ci_low: float
    ci_high: float
    seed: int

    @classmethod
    def from_counts(cls, wins: int, trials: int, seed: int) -> "WinStats":
        low, high = wilson_interval(wins, trials)
        return cls(trials=trials, wins=wins, estimate=wins / trials,
                   ci_low=low, ci_high=high, seed=seed)

    def sigma(self) -> float:
        """Binomial standard error at the point estimate."""
        return math.sqrt(max(self.estimate * (1.0 - self.estimate), 0.0)
                         / self.trials)


@dataclass(frozen=True)
class ConditionalModel:
    """The state the player must ascribe to the game space after the
    announcement, for the uniform host: (1/3) p + (2/3) (1 - p - q)."""

    p: Projector
    q: Projector
    rho_q: DensityOperator

    @classmethod
    def haar(cls, p: Projector, q: Projector) -> "ConditionalModel":
        sw = kernels.cross_conj(p.axis, q.axis)
        if kernels.norm_sq(sw) <= EPS * EPS:
            raise ConfigError("p and q coincide; the conditional state "
                              "is undefined")
        sw = kernels.normalize(sw)
        rho = DensityOperator.mixture(((1.0 / 3.0, p.axis), (2.0 / 3.0, sw)))
        return cls(p=p, q=q, rho_q=rho)

    def __post_init__(self):
        if self.rho_q.expectation(self.q) > EPS:
            raise ValueError("conditional state must not overlap the "
                             "announced door")

    def win_probability(self, p_prime: Projector) -> float:
        return self.rho_q.expectation(p_prime)


@dataclass
class ExperimentConfig:
    """One batch experiment: who plays whom, under which rules, how long."""

    host: object
    player: object
    rules: object = "strict"
    trials: int = 10_000
    seed: int = 0
    format: str = "csv"

    def __post_init__(self):
        if int(self.trials) < 1:
            raise ConfigError("trials must be at least 1")
        self.trials = int(self.trials)
        self.seed = int(self.seed)
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be 'csv' or 'json'")

    def resolved(self):
        """(host object, player object, RuleSet) from specs or objects."""
        host = self.host
        if isinstance(host, dict):
            host = strategies.host_from_spec(host)
        player = self.player
        if isinstance(player, dict):
            player = strategies.player_from_spec(player, host=host)
        return host, player, RuleSet.from_config(self.rules)

    def to_json(self) -> str:
        host, player, rules = self.resolved()
        return json.dumps({
            "host": host.spec(),
            "player": player.spec(),
            "rules": rules.to_config(),
            "trials": self.trials,
            "seed": self.seed,
            "format": self.format,
        }, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        d = json.loads(text)
        return cls(host=d["host"], player=d["player"],
                   rules=d.get("rules", "strict"),
                   trials=d.get("trials", 10_000), seed=d.get("seed", 0),
                   format=d.get("format", "csv"))


def _run_range(host, player, rules, seed: int, start: int, stop: int) -> int:
    streams = TrialStreams(seed)
    wins = 0
    for i in range(start, stop):
        rng = streams.rng_for(i)
        try:
            won, _ = engine.play_game(rules, host, player, rng)
        except HostViolation as exc:
            raise HostViolation(
                "trial %d (seed %d): host %s broke the rules: %s"
                % (i, seed, host.label(), exc)) from exc
        if won:
            wins += 1
    return wins


def run_trials(config: ExperimentConfig, workers: int = 1) -> WinStats:
    """Play the configured number of independent games and tally wins.

    Trial i always consumes substream i of the master seed, so the
    result is identical for any worker count or chunking.
    """
    host, player, rules = config.resolved()
    n = config.trials
    if workers <= 1 or n < 4 * workers:
        wins = _run_range(host, player, rules, config.seed, 0, n)
        return WinStats.from_counts(wins, n, config.seed)
    bounds = [n * k // workers for k in range(workers + 1)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(
            lambda k: _run_range(host, player, rules, config.seed,
                                 bounds[k], bounds[k + 1]),
            range(workers))
    return WinStats.from_counts(sum(parts), n, config.seed)


def _kind_of(thing) -> str:
    if isinstance(thing, dict):
        return thing.get("kind", "")
    return getattr(thing, "kind", "")


def _mean_is_maximally_mixed(host) -> bool:
    kind = _kind_of(host)
    if kind in ("haar", "axes", "real", "ignore_notepad", "entangled"):
        return True
    if kind == "finite_set":
        if isinstance(host, dict):
            host = strategies.host_from_spec(host)
        mean = np.zeros((3, 3), dtype=np.complex128)
        for row, prob in zip(host.vectors, host.probabilities):
            mean += prob * np.outer(row, row.conjugate())
        return bool(np.max(np.abs(mean - np.eye(3) / 3.0)) <= 1e-9)
    return False


def _catalogs_match(host, player) -> bool:
    if isinstance(player, dict):
        return True  # specs resolve against the host's own catalog
    if not isinstance(player, strategies.FiniteSetCheatPlayer):
        return False
    if isinstance(host, dict):
        host = strategies.host_from_spec(host)
    have = strategies.catalog_of(host)
    if have is None or have.shape != player.vectors.shape:
        return False
    return bool(np.allclose(have, player.vectors, atol=1e-12))


def analytic_value(host, player, rules) -> float | None:
    """Closed-form win probability for the catalogued pairings, else None.

    Hosts and players may be given as objects or JSON specs.  The
    catalogue covers: switching against any host whose mean prize state
    is maximally mixed (2/3); sticking against the uniform host (1/3);
    both perfect cheats against their hosts at full announcement
    precision (1); the touch and complete-measurement variants (1/2 for
    every legal final choice); the reveal-wins game of the oblivious
    host against switching (2/3); and the triple game against the
    transpose host (2/3).
    """
    rules = RuleSet.from_config(rules)
    variant = rules.variant
    host_kind = _kind_of(host)
    player_kind = _kind_of(player)

    if variant == "touch_allowed":
        return 0.5
    if variant == "complete_vn":
        return 0.5
    if variant == "reveal_wins":
        if host_kind == "ignore_notepad" and player_kind == "switch":
            bias = (host.get("reveal_bias", 0.0) if isinstance(host, dict)
                    else getattr(host, "reveal_bias", 0.0))
            if not bias:
                return 2.0 / 3.0
        return None
    if variant == "triple_choice":
        if host_kind == "entangled" and player_kind == "switch":
            policy = (host.get("policy") if isinstance(host, dict)
                      else getattr(host, "policy", None))
            if policy == strategies.EntangledHost.POLICY_TRANSPOSE:
                return 2.0 / 3.0
        return None
    if variant != "strict":
        return None

    truncated = rules.announce_precision_digits is not None
    if player_kind == "switch" and _mean_is_maximally_mixed(host):
        return 2.0 / 3.0
    if player_kind == "stick" and host_kind == "haar":
        return 1.0 / 3.0
    if truncated:
        return None
    if player_kind == "cheat_real" and host_kind == "real":
        return 1.0
    if player_kind == "cheat_finite" and host_kind in ("axes", "finite_set",
                                                       "entangled"):
        if host_kind == "entangled":
            default = strategies.EntangledHost.POLICY_FIXED
            policy = (host.get("policy", default) if isinstance(host, dict)
                      else getattr(host, "policy", None))
            if policy != default:
                return None
        if _catalogs_match(host, player):
            return 1.0
    return None


def mean_density_estimate(host, n: int, seed: int) -> DensityOperator:
    """Average prize state over n preparations.

    Entangled preparations carry an exactly maximally mixed reduced
    state, so that case is computed, not sampled.
    """
    if n < 1:
        raise ConfigError("need at least one preparation")
    if isinstance(host, dict):
        host = strategies.host_from_spec(host)
    if isinstance(host, strategies.EntangledHost):
        return hilbert.reduced_state(hilbert.maximally_entangled(), "first")
    rng = make_rng(seed)
    acc = np.zeros((3, 3), dtype=np.complex128)
    for _ in range(n):
        prize, _note = host.prepare(rng)
        a = np.array(prize, dtype=np.complex128)
        acc += np.outer(a, a.conjugate())
    acc /= n
    # clean up accumulated asymmetry so the result validates
    return DensityOperator((acc + acc.conjugate().T) / 2.0)


def predicted_sweep_value(theta: float) -> float:
    """Win probability of the theta-interpolated strategy vs the uniform
    host: (1/3) sin^2 + (2/3) cos^2, i.e. switch at 0, stick at pi/2."""
    s, c = math.sin(theta), math.cos(theta)
    return (s * s) / 3.0 + 2.0 * (c * c) / 3.0


@dataclass(frozen=True)
class SweepPoint:
    theta: float
    stats: WinStats
    predicted: float


def theta_sweep(host, thetas, trials_per_point: int, seed: int,
                phi=None) -> list[SweepPoint]:
    """Estimate the win rate of the interpolated strategy on a theta grid.

    Defined against the uniform host, where the conditional-state model
    pins the prediction.  All points share the master seed, so they see
    the same prize draws (common random numbers).
    """
    if isinstance(host, dict):
        host = strategies.host_from_spec(host)
    if _kind_of(host) != "haar":
        raise ConfigError("the sweep prediction is defined for the uniform "
                          "host only")
    out = []
    for theta in thetas:
        player = strategies.AngleSweepPlayer(float(theta), phi)
        stats = run_trials(ExperimentConfig(
            host=host, player=player, rules="strict",
            trials=trials_per_point, seed=seed))
        out.append(SweepPoint(theta=float(theta), stats=stats,
                              predicted=predicted_sweep_value(float(theta))))
    return out


def finite_catalog(n: int, seed: int) -> np.ndarray:
    """n Haar-distributed unit vectors as an (n, 3) catalog."""
    if n < 1:
        raise ConfigError("catalog needs at least one vector")
    rng = make_rng(seed, SETUP_STREAM)
    g = rng.standard_normal((n, 6))
    vecs = g[:, 0::2] + 1j * g[:, 1::2]
    norms = np.sqrt((vecs.conjugate() * vecs).sum(axis=1).real)
    # zero draws have measure zero but renormalizing guards the invariant
    norms[norms == 0.0] = 1.0
    return vecs / norms[:, None]


def best_response_probe(host, budget: int = 120_000, seed: int = 0,
                        rules="strict", extra_candidates=()) -> tuple:
    """Search a candidate set of players for the best response to a host.

    Purely exploratory: grid anglings, the model-based player, and the
    applicable cheats share the trial budget, and the best estimate is
    reported with no claim of global optimality.
    """
    if isinstance(host, dict):
        host = strategies.host_from_spec(host)
    candidates = [
        strategies.SwitchPlayer(),
        strategies.StickPlayer(),
        strategies.AngleSweepPlayer(math.pi / 8),
        strategies.AngleSweepPlayer(math.pi / 4),
        strategies.AngleSweepPlayer(3 * math.pi / 8),
        strategies.BayesOptimalPlayer(host),
    ]
    catalog = strategies.catalog_of(host)
    if catalog is not None:
        candidates.append(strategies.FiniteSetCheatPlayer(
            catalog, on_ambiguous="best_guess"))
    if _kind_of(host) == "real":
        candidates.append(strategies.RealCheatPlayer())
    candidates.extend(extra_candidates)
    per = max(1, budget // len(candidates))
    best = None
    for player in candidates:
        stats = run_trials(ExperimentConfig(host=host, player=player,
                                            rules=rules, trials=per,
                                            seed=seed))
        if best is None or stats.estimate > best[1].estimate:
            best = (player, stats)
    return best


REPORT_COLUMNS = ("host", "player", "rules", "trials", "seed", "estimate",
                  "ci_low", "ci_high", "analytic", "|estimate-analytic|")


@dataclass(frozen=True)
class ReportRow:
    host: str
    player: str
    rules: str
    trials: int
    seed: int
    estimate: float
    ci_low: float
    ci_high: float
    analytic: float | None

    def abs_error(self) -> float | None:
        if self.analytic is None:
            return None
        return abs(self.estimate - self.analytic)

    def as_record(self) -> dict:
        return {
            "host": self.host,
            "player": self.player,
            "rules": self.rules,
            "trials": self.trials,
            "seed": self.seed,
            "estimate": self.estimate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "analytic": self.analytic,
            "|estimate-analytic|": self.abs_error(),
        }


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ReportRow:
    """run_trials plus the analytic lookup, as one report row."""
    host, player, rules = config.resolved()
    stats = run_trials(config, workers=workers)
    return ReportRow(
        host=host.label(), player=player.label(), rules=rules.label(),
        trials=stats.trials, seed=stats.seed, estimate=stats.estimate,
        ci_low=stats.ci_low, ci_high=stats.ci_high,
        analytic=analytic_value(host, player, rules))


def sweep_rows(points: list[SweepPoint], host_label: str, rules_label: str) -> list[ReportRow]:
    """Report rows for a theta sweep, one per grid point."""
    return [ReportRow(
        host=host_label,
        player="sweep(theta=%.6g)" % pt.theta,
        rules=rules_label, trials=pt.stats.trials, seed=pt.stats.seed,
        estimate=pt.stats.estimate, ci_low=pt.stats.ci_low,
        ci_high=pt.stats.ci_high, analytic=pt.predicted)
        for pt in points]


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_report(rows, format: str = "csv") -> str:
    """Render report rows as a CSV or JSON document with a stable layout."""
    rows = list(rows)
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            rec = row.as_record()
            writer.writerow([_fmt_cell(rec[c]) for c in REPORT_COLUMNS])
        return buf.getvalue()
    if format == "json":
        return json.dumps({
            "columns": list(REPORT_COLUMNS),
            "rows": [row.as_record() for row in rows],
        }, separators=(",", ":"))
    raise ConfigError("format must be 'csv' or 'json'")


def rows_from_json(text: str) -> list[ReportRow]:
    """Parse a JSON report back into rows (the lossless interchange form)."""
    doc = json.loads(text)
    out = []
    for rec in doc["rows"]:
        out.append(ReportRow(
            host=rec["host"], player=rec["player"], rules=rec["rules"],
            trials=int(rec["trials"]), seed=int(rec["seed"]),
            estimate=float(rec["estimate"]), ci_low=float(rec["ci_low"]),
            ci_high=float(rec["ci_high"]),
            analytic=None if rec["analytic"] is None else float(rec["analytic"])))
    return out
