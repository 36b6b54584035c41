"""Host and player strategies for the quantum Monty Hall game.

Hosts prepare the prize (stage 1) and pick the door to open (stage 3);
players pick their first projector (stage 2) and their final one
(stage 4).  Strategies only ever *output* choices: every physical
measurement is executed by the engine, so an illegal host is detected
by the referee instead of silently cheating the statistics.

All strategy objects are immutable after construction and safe to share
across concurrent sessions; per-game randomness comes from the random
stream passed into each call.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import hilbert, kernels
from .errors import (
    CheatAmbiguous,
    CheatDegenerate,
    CheatSetupFailed,
    ConfigError,
    DegenerateInput,
    EffectRankTooHigh,
)
from .hilbert import EPS, Povm, PovmEffect, Vec

E1: Vec = (1 + 0j, 0j, 0j)
E2: Vec = (0j, 1 + 0j, 0j)
E3: Vec = (0j, 0j, 1 + 0j)

Triple = tuple[Vec, Vec, Vec]

# pairwise span tests get quadratically expensive; beyond this many pairs
# the cheat player trusts that a Haar draw avoids the spans (measure zero)
SPAN_TEST_PAIR_LIMIT = 200_000


def forced_door(p_axis: Vec, prize_axis: Vec) -> Vec:
    """The unique door orthogonal to both the choice and the prize.

    Raises DegenerateInput when the player picked the prize ray and the
    host retains a one-parameter freedom; the engine's degeneracy policy
    takes over in that case.
    """
    c = kernels.cross_conj(p_axis, prize_axis)
    if kernels.norm_sq(c) <= EPS * EPS:
        raise DegenerateInput("player choice is parallel to the prize; "
                              "the forced door is not unique")
    return kernels.normalize(c)


def _orthonormal_triple(phi: Vec) -> Triple:
    u1, u2 = kernels.complement_basis(phi)
    return (phi, u1, u2)


def _vec_spec(v: Vec) -> list[list[float]]:
    return [[c.real, c.imag] for c in v]


class HostStrategy:
    """Base class: quiz-master behavior plugged into the engine."""

    kind = "abstract"
    quantum_notepad = False
    requires_triple = False

    def prepare(self, rng):
        """Stage 1: returns (prize, note).

        Classical hosts return a pure game-space vector plus their own
        note of it; an entangled host returns a JointState and no note.
        """
        raise NotImplementedError

    def choose_door(self, note, p_axis: Vec | None, rng) -> Vec:
        """Stage 3 for classical notepads: the axis of the door to open."""
        raise NotImplementedError

    def spec(self) -> dict:
        raise NotImplementedError

    def label(self) -> str:
        return self.kind

    def _door_without_choice(self, prize_axis: Vec, rng) -> Vec:
        # stage-2-omitted play: any safe door, drawn uniformly
        return kernels.unit_in_complement(prize_axis, rng)


class AxesHost(HostStrategy):
    """Hides the prize on one of three fixed orthonormal axes, uniformly."""

    kind = "axes"

    def __init__(self, basis: Sequence[Vec] | None = None):
        if basis is None:
            basis = (E1, E2, E3)
        basis = tuple(hilbert.as_vec(b) for b in basis)
        if len(basis) != 3:
            raise ConfigError("axes host needs exactly 3 basis vectors")
        for i, b in enumerate(basis):
            if abs(kernels.norm_sq(b) - 1.0) > 2.0 * EPS:
                raise ConfigError("basis vector %d is not unit" % i)
            for j in range(i):
                if abs(kernels.inner(basis[j], b)) > EPS:
                    raise ConfigError("basis vectors %d and %d are not "
                                      "orthogonal" % (j, i))
        self.basis = basis

    def prepare(self, rng):
        prize = self.basis[int(rng.integers(3))]
        return prize, prize

    def choose_door(self, note, p_axis, rng):
        if p_axis is None:
            return self._door_without_choice(note, rng)
        return forced_door(p_axis, note)

    def spec(self):
        return {"kind": self.kind,
                "basis": [_vec_spec(b) for b in self.basis]}


class FiniteSetHost(HostStrategy):
    """Draws the prize from a fixed finite catalog of unit vectors."""

    kind = "finite_set"

    def __init__(self, vectors, probabilities=None):
        arr = np.asarray(vectors, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 1:
            raise ConfigError("catalog must be a nonempty (n, 3) array")
        norms = np.abs((arr.conjugate() * arr).sum(axis=1) - 1.0)
        if norms.max() > 2.0 * EPS:
            raise ConfigError("catalog vector %d is not unit"
                              % int(norms.argmax()))
        n = arr.shape[0]
        if probabilities is None:
            probs = np.full(n, 1.0 / n)
        else:
            probs = np.asarray(probabilities, dtype=np.float64)
            if probs.shape != (n,):
                raise ConfigError("need one probability per catalog vector")
            if probs.min() < 0.0 or abs(probs.sum() - 1.0) > 1e-9:
                raise ConfigError("probabilities must be nonnegative and "
                                  "sum to 1")
        self.vectors = arr
        self.probabilities = probs
        self._cum = np.cumsum(probs)
        self._cum[-1] = 1.0

    def prepare(self, rng):
        i = int(np.searchsorted(self._cum, rng.random(), side="right"))
        row = self.vectors[i]
        prize = (complex(row[0]), complex(row[1]), complex(row[2]))
        return prize, prize

    def choose_door(self, note, p_axis, rng):
        if p_axis is None:
            return self._door_without_choice(note, rng)
        return forced_door(p_axis, note)

    def label(self):
        return "finite_set(n=%d)" % self.vectors.shape[0]

    def spec(self):
        return {"kind": self.kind,
                "vectors": [_vec_spec(tuple(row)) for row in self.vectors],
                "probabilities": self.probabilities.tolist()}


class RealVectorHost(HostStrategy):
    """Hides the prize on a uniformly random all-real unit vector."""

    kind = "real"

    def prepare(self, rng):
        prize = kernels.real_unit(rng)
        return prize, prize

    def choose_door(self, note, p_axis, rng):
        if p_axis is None:
            return self._door_without_choice(note, rng)
        return forced_door(p_axis, note)

    def spec(self):
        return {"kind": self.kind}


class HaarHost(HostStrategy):
    """Hides the prize on a Haar-uniform unit vector, the invariant measure."""

    kind = "haar"

    def prepare(self, rng):
        prize = kernels.haar_unit(rng)
        return prize, prize

    def choose_door(self, note, p_axis, rng):
        if p_axis is None:
            return self._door_without_choice(note, rng)
        return forced_door(p_axis, note)

    def spec(self):
        return {"kind": self.kind}


class IgnoreNotepadHost(HostStrategy):
    """Never consults the notepad: opens a uniform door orthogonal to p.

    Meaningful under reveal-tolerant rules, where hitting the prize ends
    or restarts the game.  ``reveal_bias`` is the probability of aiming
    at the prize's component orthogonal to p instead of drawing blindly,
    modelling a host who deliberately cancels games under the restart
    rule; the default never aims.
    """

    kind = "ignore_notepad"

    def __init__(self, reveal_bias: float = 0.0):
        if not 0.0 <= reveal_bias <= 1.0:
            raise ConfigError("reveal_bias must lie in [0, 1]")
        self.reveal_bias = float(reveal_bias)

    def prepare(self, rng):
        prize = kernels.haar_unit(rng)
        return prize, prize

    def choose_door(self, note, p_axis, rng):
        if p_axis is None:
            return kernels.haar_unit(rng)
        if self.reveal_bias > 0.0 and rng.random() < self.reveal_bias:
            ip = kernels.inner(p_axis, note)
            rest = (note[0] - p_axis[0] * ip,
                    note[1] - p_axis[1] * ip,
                    note[2] - p_axis[2] * ip)
            if kernels.norm_sq(rest) > EPS * EPS:
                return kernels.normalize(rest)
        return kernels.unit_in_complement(p_axis, rng)

    def label(self):
        if self.reveal_bias:
            return "ignore_notepad(bias=%g)" % self.reveal_bias
        return self.kind

    def spec(self):
        return {"kind": self.kind, "reveal_bias": self.reveal_bias}


class CompleteVNHost(HostStrategy):
    """Publicly announces a fixed prize vector; built for the variant where
    opening a door is a complete von Neumann measurement.

    The two unopened directions are taken at 45 degrees to the prize
    vector, which makes every legal final choice a coin flip.
    """

    kind = "complete_vn"
    public = True

    def __init__(self, prize: Vec | None = None):
        self.prize = hilbert.as_vec(prize) if prize is not None else E1
        if abs(kernels.norm_sq(self.prize) - 1.0) > 2.0 * EPS:
            raise ConfigError("public prize vector must be unit")

    def prepare(self, rng):
        return self.prize, self.prize

    def choose_door(self, note, p_axis, rng):
        if p_axis is None:
            return self._door_without_choice(note, rng)
        return forced_door(p_axis, note)

    def complete_basis(self, p_axis: Vec | None, rng) -> Triple:
        """Basis (q, q', q'') with q safe and q', q'' at 45 deg to the prize."""
        try:
            q = (self._door_without_choice(self.prize, rng)
                 if p_axis is None else forced_door(p_axis, self.prize))
        except DegenerateInput:
            q = kernels.unit_in_complement(self.prize, rng)
        mid = kernels.normalize(kernels.cross_conj(q, self.prize))
        s = 1.0 / math.sqrt(2.0)
        q1 = tuple(s * (a + b) for a, b in zip(self.prize, mid))
        q2 = tuple(s * (a - b) for a, b in zip(self.prize, mid))
        return q, q1, q2

    def spec(self):
        return {"kind": self.kind, "prize": _vec_spec(self.prize)}


class EntangledHost(HostStrategy):
    """Keeps a quantum notepad maximally entangled with the game space.

    Two measurement policies:

    - ``fixed_povm``: a fixed rank-one POVM on the notepad, canonically
      reduced so its weights sum to 3.  Outcome x pins the prize to the
      conjugate of the effect axis; the host then opens the forced door.
      With ``measure_early`` the host measures while preparing, which is
      strategically equivalent to measuring at door time.
    - ``transpose_of_player_triple``: measures the notepad in the
      transposed basis of the player's announced triple, then opens one
      of the player's two alternative projectors, never the one holding
      the collapsed prize (fair coin when the prize landed on p).
    """

    kind = "entangled"
    quantum_notepad = True

    POLICY_FIXED = "fixed_povm"
    POLICY_TRANSPOSE = "transpose_of_player_triple"

    def __init__(self, policy: str = POLICY_FIXED, povm: Povm | None = None,
                 measure_early: bool = False):
        if policy not in (self.POLICY_FIXED, self.POLICY_TRANSPOSE):
            raise ConfigError("unknown entangled policy %r" % policy)
        self.policy = policy
        self.measure_early = bool(measure_early)
        if policy == self.POLICY_FIXED:
            if povm is None:
                povm = Povm.projective([E1, E2, E3])
            self.povm = canonical_povm_reduction(povm)
            self._effect_by_label = {e.label: e for e in self.povm.effects}
        else:
            if povm is not None:
                raise ConfigError("the transpose policy takes no POVM")
            if measure_early:
                raise ConfigError("the transpose policy measures a basis "
                                  "chosen by the player; it cannot measure "
                                  "while preparing")
            self.povm = None
        if policy == self.POLICY_TRANSPOSE:
            self.requires_triple = True

    def prepare(self, rng):
        joint = hilbert.maximally_entangled()
        if not self.measure_early:
            return joint, None
        label, post = hilbert.measure_notepad(joint, self.povm, rng)
        eff = self._effect_by_label[label]
        prize = hilbert.collapsed_game_vector(joint, eff)
        return prize, prize

    def notepad_povm(self, p_axis: Vec | None, triple: Triple | None) -> Povm:
        if self.policy == self.POLICY_FIXED:
            return self.povm
        if triple is None:
            raise ConfigError("the transpose policy requires the player's "
                              "triple of projectors")
        axes = [tuple(c.conjugate() for c in ax) for ax in triple]
        return Povm.projective(axes, labels=(0, 1, 2))

    def door_for_outcome(self, label, p_axis: Vec | None,
                         triple: Triple | None, rng) -> Vec:
        if self.policy == self.POLICY_FIXED:
            eff = self._effect_by_label[label]
            prize = tuple(c.conjugate() for c in eff.axis)
            if p_axis is None:
                return self._door_without_choice(prize, rng)
            return forced_door(p_axis, prize)
        # transpose policy: prize collapsed onto triple[label]
        if label == 0:
            return triple[1] if rng.random() < 0.5 else triple[2]
        return triple[2] if label == 1 else triple[1]

    def choose_door(self, note, p_axis, rng):
        # only reachable after measure_early turned the note classical
        if p_axis is None:
            return self._door_without_choice(note, rng)
        return forced_door(p_axis, note)

    def label(self):
        name = "transpose" if self.policy == self.POLICY_TRANSPOSE else "fixed_povm"
        return "entangled(%s)" % name

    def spec(self):
        out = {"kind": self.kind, "policy": self.policy,
               "measure_early": self.measure_early}
        if self.povm is not None:
            out["povm"] = [{"label": e.label, "weight": e.weight,
                            "axis": _vec_spec(e.axis)}
                           for e in self.povm.effects]
        return out


def canonical_povm_reduction(povm: Povm) -> Povm:
    """Merge POVM effects sharing a ray into weight * |phi><phi| form.

    Only rank-one effects can guarantee the host a safe door, so any
    effect of higher rank is rejected.  The merged weights always sum
    to 3, the trace of the identity.
    """
    merged: list[list] = []  # [label, weight, axis]
    for eff in povm.effects:
        if eff.weight <= EPS:
            continue
        if eff.axis is None:
            raise EffectRankTooHigh(
                "effect %r has rank > 1 and cannot guarantee a safe door"
                % (eff.label,))
        for item in merged:
            if abs(kernels.inner(item[2], eff.axis)) > 1.0 - EPS:
                item[1] += eff.weight
                break
        else:
            axis = kernels.phase_normalize(eff.axis, EPS)
            merged.append([eff.label, eff.weight, axis])
    out = Povm.from_rank_one([(lab, w, ax) for lab, w, ax in merged])
    total = sum(e.weight for e in out.effects)
    if abs(total - 3.0) > 1e-6:
        raise ValueError("reduced POVM weights sum to %r, not 3" % total)
    return out


def beforehand_equivalent_host(host: EntangledHost) -> FiniteSetHost:
    """Classical host equivalent to measuring a fixed POVM while preparing.

    Outcome x of the notepad POVM pins the prize to conj(phi_x) and
    occurs with probability v_x / 3, so the entangled host plays exactly
    like this finite catalog.
    """
    if host.policy != EntangledHost.POLICY_FIXED:
        raise ConfigError("only the fixed_povm policy has a finite-catalog "
                          "equivalent")
    vectors = [tuple(c.conjugate() for c in e.axis) for e in host.povm.effects]
    probs = [e.weight / 3.0 for e in host.povm.effects]
    return FiniteSetHost(np.array(vectors), np.array(probs))


class PlayerStrategy:
    """Base class: player behavior plugged into the engine."""

    kind = "abstract"

    def first_choice(self, rng, need_triple: bool = False):
        """Stage 2: an axis, or an orthonormal triple of axes."""
        phi = self._first_axis(rng)
        return _orthonormal_triple(phi) if need_triple else phi

    def _first_axis(self, rng) -> Vec:
        raise NotImplementedError

    def final_choice(self, p_axis: Vec | None, triple: Triple | None,
                     chi: Vec, rng) -> Vec:
        """Stage 4: the final axis, given the announced door vector chi.

        ``chi`` is exactly what the host announced: phase-normalized and
        possibly precision-truncated, so not necessarily unit.
        """
        raise NotImplementedError

    def spec(self) -> dict:
        raise NotImplementedError

    def label(self) -> str:
        return self.kind

    @staticmethod
    def _switch_axis(p_axis: Vec | None, chi: Vec, rng) -> Vec:
        chi_n = kernels.normalize(chi)
        if p_axis is None:
            return kernels.unit_in_complement(chi_n, rng)
        c = kernels.cross_conj(p_axis, chi_n)
        if kernels.norm_sq(c) <= EPS * EPS:
            # announced door parallel to p: no third ray, stay orthogonal
            return kernels.unit_in_complement(chi_n, rng)
        return kernels.normalize(c)


class _ConfigurableFirst(PlayerStrategy):
    def __init__(self, phi: Vec | None = None):
        self.phi = hilbert.as_vec(phi) if phi is not None else None
        if self.phi is not None and abs(kernels.norm_sq(self.phi) - 1.0) > 2.0 * EPS:
            raise ConfigError("configured first choice must be unit")

    def _first_axis(self, rng):
        return self.phi if self.phi is not None else kernels.haar_unit(rng)

    def spec(self):
        out = {"kind": self.kind}
        if self.phi is not None:
            out["phi"] = _vec_spec(self.phi)
        return out


class StickPlayer(_ConfigurableFirst):
    """Keeps the first choice."""

    kind = "stick"

    def final_choice(self, p_axis, triple, chi, rng):
        if p_axis is None:
            return kernels.unit_in_complement(kernels.normalize(chi), rng)
        return p_axis


class SwitchPlayer(_ConfigurableFirst):
    """Plays the ray orthogonal to both p and the announced door.

    Under the triple rules this is exactly the remaining member of the
    announced triple, so no special casing is needed there.
    """

    kind = "switch"

    def final_choice(self, p_axis, triple, chi, rng):
        return self._switch_axis(p_axis, chi, rng)


class AngleSweepPlayer(_ConfigurableFirst):
    """Interpolates between switching (theta = 0) and sticking (theta = pi/2)."""

    kind = "sweep"

    def __init__(self, theta: float, phi: Vec | None = None):
        super().__init__(phi)
        self.theta = float(theta)

    def final_choice(self, p_axis, triple, chi, rng):
        if p_axis is None:
            return kernels.unit_in_complement(kernels.normalize(chi), rng)
        sw = self._switch_axis(p_axis, chi, rng)
        c, s = math.cos(self.theta), math.sin(self.theta)
        return (c * sw[0] + s * p_axis[0],
                c * sw[1] + s * p_axis[1],
                c * sw[2] + s * p_axis[2])

    def label(self):
        return "sweep(theta=%.6g)" % self.theta

    def spec(self):
        out = super().spec()
        out["theta"] = self.theta
        return out


class FiniteSetCheatPlayer(PlayerStrategy):
    """Perfect cheat against a host with a known finite catalog.

    The first choice avoids every 2-dimensional span of two catalog
    vectors, so the announced door is orthogonal to exactly one catalog
    vector: the prize.
    """

    kind = "cheat_finite"

    def __init__(self, vectors, tolerance: float = 1e-6,
                 on_ambiguous: str = "raise", max_tries: int = 1000,
                 phi: Vec | None = None):
        arr = np.asarray(vectors, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 1:
            raise ConfigError("known catalog must be a nonempty (n, 3) array")
        if on_ambiguous not in ("raise", "best_guess"):
            raise ConfigError("on_ambiguous must be 'raise' or 'best_guess'")
        self.vectors = arr
        self.tolerance = float(tolerance)
        self.on_ambiguous = on_ambiguous
        self.max_tries = int(max_tries)
        n = arr.shape[0]
        n_pairs = n * (n - 1) // 2
        if 0 < n_pairs <= SPAN_TEST_PAIR_LIMIT:
            ii, jj = np.triu_indices(n, k=1)
            a, b = arr[ii], arr[jj]
            # rows are the unconjugated cross products a x b, so
            # |det[phi, a, b]| = |cross(a, b) . phi|
            self._pair_crosses = np.stack([
                a[:, 1] * b[:, 2] - a[:, 2] * b[:, 1],
                a[:, 2] * b[:, 0] - a[:, 0] * b[:, 2],
                a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0],
            ], axis=1)
        else:
            self._pair_crosses = None
        if phi is not None:
            phi = kernels.normalize(tuple(complex(c) for c in phi))
            if not self._outside_catalog_spans(phi):
                raise CheatSetupFailed(
                    "the requested first choice lies in the span of two "
                    "catalog vectors; the announcement would be ambiguous")
        self.phi = phi

    def _outside_catalog_spans(self, phi: Vec) -> bool:
        if self._pair_crosses is None:
            return True
        dets = np.abs(self._pair_crosses @ np.array(phi))
        return float(dets.min(initial=np.inf)) > 1e-6

    def _first_axis(self, rng):
        if self.phi is not None:
            return self.phi
        for _ in range(self.max_tries):
            phi = kernels.haar_unit(rng)
            if self._outside_catalog_spans(phi):
                return phi
        raise CheatSetupFailed(
            "no first choice found outside all catalog spans after %d tries"
            % self.max_tries)

    def identify_prize(self, chi: Vec) -> Vec:
        """The unique catalog vector orthogonal to the announced door."""
        chi_n = np.array(kernels.normalize(chi))
        overlaps = np.abs(self.vectors @ chi_n.conjugate())
        hits = np.flatnonzero(overlaps < self.tolerance)
        if hits.shape[0] != 1:
            if self.on_ambiguous == "best_guess":
                hits = np.array([overlaps.argmin()])
            else:
                raise CheatAmbiguous(
                    "%d catalog vectors are orthogonal to the announced door "
                    "within %g" % (hits.shape[0], self.tolerance))
        row = self.vectors[int(hits[0])]
        return (complex(row[0]), complex(row[1]), complex(row[2]))

    def final_choice(self, p_axis, triple, chi, rng):
        return self.identify_prize(chi)

    def label(self):
        return "cheat_finite(n=%d)" % self.vectors.shape[0]

    def spec(self):
        out = {"kind": self.kind,
               "vectors": [_vec_spec(tuple(row)) for row in self.vectors],
               "tolerance": self.tolerance,
               "on_ambiguous": self.on_ambiguous}
        if self.phi is not None:
            out["phi"] = _vec_spec(self.phi)
        return out


class RealCheatPlayer(PlayerStrategy):
    """Universal cheat against hosts that only use real prize vectors.

    First choice (1, i, 0)/sqrt(2), whose real and imaginary parts are
    linearly independent; the announced door then determines the real
    prize vector up to sign.
    """

    kind = "cheat_real"
    PHI: Vec = (complex(1.0 / math.sqrt(2.0), 0.0),
                complex(0.0, 1.0 / math.sqrt(2.0)), 0j)

    def __init__(self, degenerate_eps: float = 1e-6):
        self.degenerate_eps = float(degenerate_eps)

    def _first_axis(self, rng):
        return self.PHI

    def reconstruct(self, chi: Vec) -> Vec:
        """Prize vector from the announced door; raises CheatDegenerate
        when the door's first component is too small to fix the phase."""
        c = kernels.phase_normalize(kernels.normalize(chi), EPS)
        if abs(c[0]) < self.degenerate_eps:
            raise CheatDegenerate(
                "announced door has |chi_1| = %g; the reconstruction phase "
                "is ambiguous" % abs(c[0]))
        return kernels.normalize((complex(-c[2].real, 0.0),
                                  complex(c[2].imag, 0.0),
                                  complex(c[0].real, 0.0)))

    def final_choice(self, p_axis, triple, chi, rng):
        try:
            return self.reconstruct(chi)
        except CheatDegenerate:
            return self._switch_axis(p_axis, chi, rng)

    def spec(self):
        return {"kind": self.kind, "degenerate_eps": self.degenerate_eps}


class BayesOptimalPlayer(PlayerStrategy):
    """Plays the top eigenvector of the modeled post-announcement state.

    Closed-form posteriors exist for the Haar host (where the answer is
    exactly the switch ray) and for finite catalogs (enumeration of
    which catalog vector forces the announced door).  The real-vector
    host reduces to the real cheat.  Any other host model is handled by
    weighted simulation: prize/door pairs are sampled from the model and
    reweighted by how close their door lands to the announced one.
    """

    kind = "bayes"

    def __init__(self, host_model: HostStrategy, phi: Vec | None = None,
                 samples: int = 512):
        self.host_model = host_model
        self.phi = hilbert.as_vec(phi) if phi is not None else None
        self.samples = int(samples)
        self._real_cheat = RealCheatPlayer()

    def _first_axis(self, rng):
        return self.phi if self.phi is not None else kernels.haar_unit(rng)

    def final_choice(self, p_axis, triple, chi, rng):
        host = self.host_model
        if p_axis is None or isinstance(host, HaarHost):
            return self._switch_axis(p_axis, chi, rng)
        if isinstance(host, RealVectorHost):
            return self._real_cheat.final_choice(p_axis, triple, chi, rng)
        if isinstance(host, EntangledHost) and host.policy == EntangledHost.POLICY_FIXED:
            host = beforehand_equivalent_host(host)
        if isinstance(host, AxesHost):
            host = FiniteSetHost(np.array(host.basis))
        if isinstance(host, FiniteSetHost):
            return self._finite_posterior(host, p_axis, chi, rng)
        return self._simulated_posterior(host, p_axis, chi, rng)

    def _restricted_top_ray(self, rho: np.ndarray, chi_n: Vec, rng) -> Vec:
        q = hilbert.projector_matrix(chi_n)
        comp = np.eye(3, dtype=np.complex128) - q
        vals, vecs = np.linalg.eigh(comp @ rho @ comp)
        top = vecs[:, int(vals.argmax())]
        v = (complex(top[0]), complex(top[1]), complex(top[2]))
        if kernels.norm_sq(v) <= EPS * EPS:
            return kernels.unit_in_complement(chi_n, rng)
        return kernels.normalize(v)

    def _finite_posterior(self, host: FiniteSetHost, p_axis, chi, rng) -> Vec:
        chi_n = kernels.normalize(chi)
        q_proj = hilbert.projector_matrix(chi_n)
        rho = np.zeros((3, 3), dtype=np.complex128)
        total = 0.0
        for row, prob in zip(host.vectors, host.probabilities):
            psi = (complex(row[0]), complex(row[1]), complex(row[2]))
            try:
                door = forced_door(p_axis, psi)
            except DegenerateInput:
                continue
            if kernels.born(door, chi_n) > 1.0 - 1e-9:
                rho += prob * hilbert.projector_matrix(psi)
                total += prob
        if total <= 0.0:
            return self._switch_axis(p_axis, chi, rng)
        return self._restricted_top_ray(rho / total, chi_n, rng)

    def _simulated_posterior(self, host: HostStrategy, p_axis, chi, rng) -> Vec:
        chi_n = kernels.normalize(chi)
        rho = np.zeros((3, 3), dtype=np.complex128)
        total = 0.0
        for _ in range(self.samples):
            prize, note = host.prepare(rng)
            if not isinstance(prize, tuple):
                # entangled preparation: the reduced state carries no
                # usable correlation without the door mechanics
                return self._switch_axis(p_axis, chi, rng)
            try:
                door = host.choose_door(note, p_axis, rng)
            except DegenerateInput:
                continue
            w = kernels.born(door, chi_n) ** 64
            if w > 0.0:
                rho += w * hilbert.projector_matrix(prize)
                total += w
        if total <= 0.0:
            return self._switch_axis(p_axis, chi, rng)
        return self._restricted_top_ray(rho / total, chi_n, rng)

    def label(self):
        return "bayes(%s)" % self.host_model.label()

    def spec(self):
        out = {"kind": self.kind, "host_model": self.host_model.spec(),
               "samples": self.samples}
        if self.phi is not None:
            out["phi"] = _vec_spec(self.phi)
        return out


_HOST_KINDS = {
    "axes": AxesHost,
    "finite_set": FiniteSetHost,
    "real": RealVectorHost,
    "haar": HaarHost,
    "ignore_notepad": IgnoreNotepadHost,
    "complete_vn": CompleteVNHost,
    "entangled": EntangledHost,
}

_PLAYER_KINDS = {
    "stick": StickPlayer,
    "switch": SwitchPlayer,
    "sweep": AngleSweepPlayer,
    "cheat_finite": FiniteSetCheatPlayer,
    "cheat_real": RealCheatPlayer,
    "bayes": BayesOptimalPlayer,
}


def _vectors_from_spec(items) -> np.ndarray:
    return np.array([hilbert.from_pairs(v) for v in items],
                    dtype=np.complex128)


def host_from_spec(spec: dict) -> HostStrategy:
    """Build a host from its JSON configuration."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("host spec must be an object with a 'kind' tag")
    kind = spec["kind"]
    if kind not in _HOST_KINDS:
        raise ConfigError("unknown host kind %r" % kind)
    if kind == "axes":
        basis = spec.get("basis")
        if basis is not None:
            basis = [hilbert.from_pairs(b) for b in basis]
        return AxesHost(basis)
    if kind == "finite_set":
        if "vectors" not in spec:
            raise ConfigError("finite_set host needs 'vectors'")
        probs = spec.get("probabilities")
        return FiniteSetHost(_vectors_from_spec(spec["vectors"]),
                             None if probs is None else np.asarray(probs))
    if kind == "ignore_notepad":
        return IgnoreNotepadHost(float(spec.get("reveal_bias", 0.0)))
    if kind == "complete_vn":
        prize = spec.get("prize")
        return CompleteVNHost(hilbert.from_pairs(prize) if prize else None)
    if kind == "entangled":
        policy = spec.get("policy", EntangledHost.POLICY_FIXED)
        povm = None
        if spec.get("povm") is not None:
            povm = Povm.from_rank_one([
                (e.get("label", i), float(e["weight"]),
                 hilbert.from_pairs(e["axis"]))
                for i, e in enumerate(spec["povm"])])
        return EntangledHost(policy, povm,
                             bool(spec.get("measure_early", False)))
    return _HOST_KINDS[kind]()


def player_from_spec(spec: dict, host: HostStrategy | None = None) -> PlayerStrategy:
    """Build a player from its JSON configuration.

    The cheat players need the host's catalog; when the spec omits it
    and the host is disclosed, the catalog is taken from the host.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("player spec must be an object with a 'kind' tag")
    kind = spec["kind"]
    if kind not in _PLAYER_KINDS:
        raise ConfigError("unknown player kind %r" % kind)
    phi = spec.get("phi")
    phi_vec = hilbert.from_pairs(phi) if phi is not None else None
    if kind in ("stick", "switch"):
        return _PLAYER_KINDS[kind](phi_vec)
    if kind == "sweep":
        if "theta" not in spec:
            raise ConfigError("sweep player needs 'theta'")
        return AngleSweepPlayer(float(spec["theta"]), phi_vec)
    if kind == "cheat_finite":
        vectors = spec.get("vectors")
        if vectors is not None:
            arr = _vectors_from_spec(vectors)
        else:
            arr = catalog_of(host)
            if arr is None:
                raise ConfigError("cheat_finite needs a known catalog: give "
                                  "'vectors' or a host with a finite catalog")
        return FiniteSetCheatPlayer(
            arr, tolerance=float(spec.get("tolerance", 1e-6)),
            on_ambiguous=spec.get("on_ambiguous", "raise"), phi=phi_vec)
    if kind == "cheat_real":
        return RealCheatPlayer(float(spec.get("degenerate_eps", 1e-6)))
    if kind == "bayes":
        model_spec = spec.get("host_model")
        if model_spec is None:
            if host is None:
                raise ConfigError("bayes player needs a 'host_model'")
            model = host
        else:
            model = host_from_spec(model_spec)
        return BayesOptimalPlayer(model, phi_vec,
                                  int(spec.get("samples", 512)))
    raise ConfigError("unknown player kind %r" % kind)


def catalog_of(host: HostStrategy | None) -> np.ndarray | None:
    """The finite prize catalog a cheat player would need, if one exists."""
    if isinstance(host, AxesHost):
        return np.array(host.basis, dtype=np.complex128)
    if isinstance(host, FiniteSetHost):
        return host.vectors
    if isinstance(host, EntangledHost) and host.policy == EntangledHost.POLICY_FIXED:
        return beforehand_equivalent_host(host).vectors
    return None
