"""States, projectors, and measurements on the 3-dimensional game space.

The game is played on rays of a 3-dimensional complex Hilbert space:
doors and prize positions are unit vectors, opening a door is a binary
Lueders measurement, and a host may keep a quantum notepad entangled
with the game space.  This module provides the value types (StateVector,
Projector, DensityOperator, JointState, Povm) and the operations on
them; the scalar arithmetic lives in ``qmonty.kernels`` so the compiled
backend can accelerate it.

Joint states of game space and notepad are stored as 3x3 coefficient
matrices M with J = sum_{k,l} M[k,l] |k>|l>.  In that picture an
operator A on the game space acts as A @ M, an operator B on the
notepad acts as M @ B.T, the reduced game state is M @ M^dagger and the
reduced notepad state is M.T @ conj(M).
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import DegenerateInput, EffectRankTooHigh, InvalidProjector

EPS = 1e-9

Vec = tuple[complex, complex, complex]
Pair = list[float]


def as_vec(components: Iterable[complex] | "StateVector") -> Vec:
    """Coerce a StateVector or any length-3 iterable to a plain tuple."""
    if isinstance(components, StateVector):
        return components.components
    v = tuple(complex(c) for c in components)
    if len(v) != 3:
        raise ValueError("expected exactly 3 components, got %d" % len(v))
    return v


def to_pairs(v: Iterable[complex] | "StateVector") -> list[Pair]:
    """Serialize a vector as [re, im] pairs of doubles."""
    return [[c.real, c.imag] for c in as_vec(v)]


def from_pairs(pairs: Sequence[Sequence[float]]) -> Vec:
    if len(pairs) != 3:
        raise ValueError("expected 3 [re, im] pairs, got %d" % len(pairs))
    out = []
    for p in pairs:
        if len(p) != 2:
            raise ValueError("each component must be an [re, im] pair")
        out.append(complex(float(p[0]), float(p[1])))
    return (out[0], out[1], out[2])


class StateVector:
    """Unit vector in the game space (or the notepad space)."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[complex] | Vec):
        v = as_vec(components)
        if abs(kernels.norm_sq(v) - 1.0) > 2.0 * EPS:
            raise InvalidProjector("state vector is not normalized: "
                                   "|v|^2 = %r" % kernels.norm_sq(v))
        self.components = v

    @classmethod
    def normalized(cls, components: Iterable[complex]) -> "StateVector":
        """Build from an arbitrary nonzero vector by normalizing it."""
        sv = cls.__new__(cls)
        sv.components = kernels.normalize(as_vec(components))
        return sv

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "StateVector":
        return cls(from_pairs(pairs))

    def to_pairs(self) -> list[Pair]:
        return to_pairs(self.components)

    def inner(self, other: "StateVector | Vec") -> complex:
        return kernels.inner(self.components, as_vec(other))

    def projector(self) -> "Projector":
        return Projector(self)

    def as_array(self) -> np.ndarray:
        return np.array(self.components, dtype=np.complex128)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, k: int) -> complex:
        return self.components[k]

    def __repr__(self) -> str:
        return "StateVector(%r)" % (self.components,)

    def __eq__(self, other) -> bool:
        return (isinstance(other, StateVector)
                and self.components == other.components)

    def __hash__(self):
        return hash(self.components)


def projector_matrix(axis: Vec) -> np.ndarray:
    a = np.array(axis, dtype=np.complex128)
    return np.outer(a, a.conjugate())


class Projector:
    """Rank-one orthogonal projector |a><a| on the game space.

    Doors, choices, and prize positions are all rank one; higher-rank
    projectors only ever appear implicitly as complements (1 - q).
    """

    __slots__ = ("axis",)

    def __init__(self, axis: StateVector | Iterable[complex]):
        v = as_vec(axis)
        n = kernels.norm_sq(v)
        if abs(n - 1.0) > 2.0 * EPS:
            raise InvalidProjector("projector axis is not a unit vector "
                                   "(|v|^2 = %r)" % n)
        self.axis = v

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "Projector":
        """Validate a 3x3 matrix as a rank-one projector and extract its axis."""
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (3, 3):
            raise InvalidProjector("projector matrix must be 3x3")
        if np.max(np.abs(m - m.conjugate().T)) > EPS:
            raise InvalidProjector("projector matrix is not Hermitian")
        if np.max(np.abs(m @ m - m)) > EPS:
            raise InvalidProjector("projector matrix is not idempotent")
        tr = m.trace()
        if abs(tr - 1.0) > EPS:
            raise InvalidProjector("projector must have trace 1, got %r" % tr)
        vals, vecs = np.linalg.eigh(m)
        # idempotent + trace 1 means spectrum (0, 0, 1); take the top ray
        axis = vecs[:, 2]
        return cls(StateVector.normalized(axis))

    @property
    def matrix(self) -> np.ndarray:
        return projector_matrix(self.axis)

    def distance(self, other: "Projector") -> float:
        """sin of the angle between the two rays; 0 iff equal projectors."""
        ov = kernels.born(self.axis, as_vec(other.axis))
        return math.sqrt(max(0.0, 1.0 - ov))

    def expectation(self, state: StateVector | Vec) -> float:
        return kernels.born(as_vec(state), self.axis)

    def to_pairs(self) -> list[Pair]:
        return to_pairs(self.axis)

    def __repr__(self) -> str:
        return "Projector(%r)" % (self.axis,)


class DensityOperator:
    """3x3 positive unit-trace operator: mixed, mean, or conditional states."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: np.ndarray):
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (3, 3):
            raise ValueError("density matrix must be 3x3")
        if np.max(np.abs(m - m.conjugate().T)) > EPS:
            raise ValueError("density matrix is not Hermitian")
        if np.linalg.eigvalsh(m).min() < -EPS:
            raise ValueError("density matrix has a negative eigenvalue")
        if abs(m.trace() - 1.0) > EPS:
            raise ValueError("density matrix trace is %r, not 1" % m.trace())
        self.matrix = m

    @classmethod
    def pure(cls, axis: StateVector | Iterable[complex]) -> "DensityOperator":
        return cls(projector_matrix(as_vec(axis)))

    @classmethod
    def mixture(cls, weighted_axes: Sequence[tuple[float, Vec]]) -> "DensityOperator":
        m = np.zeros((3, 3), dtype=np.complex128)
        for w, axis in weighted_axes:
            m += w * projector_matrix(axis)
        return cls(m)

    @classmethod
    def maximally_mixed(cls) -> "DensityOperator":
        return cls(np.eye(3, dtype=np.complex128) / 3.0)

    def expectation(self, proj: Projector | StateVector | Vec) -> float:
        axis = proj.axis if isinstance(proj, Projector) else as_vec(proj)
        a = np.array(axis, dtype=np.complex128)
        return float((a.conjugate() @ self.matrix @ a).real)

    def __repr__(self) -> str:
        return "DensityOperator(%r)" % (self.matrix,)


class JointState:
    """Unit vector on game space tensor notepad, as its 3x3 coefficient matrix."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: np.ndarray):
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (3, 3):
            raise ValueError("joint state coefficient matrix must be 3x3")
        n = float(np.vdot(m, m).real)
        if abs(n - 1.0) > 2.0 * EPS:
            raise ValueError("joint state is not normalized: |J|^2 = %r" % n)
        self.matrix = m

    def component(self, k: int, l: int) -> complex:
        return complex(self.matrix[k, l])

    def game_op_applied(self, x: np.ndarray) -> np.ndarray:
        """Coefficient matrix of (X tensor 1) applied to this state (not renormalized)."""
        return np.asarray(x, dtype=np.complex128) @ self.matrix

    def notepad_op_applied(self, x: np.ndarray) -> np.ndarray:
        """Coefficient matrix of (1 tensor X) applied to this state (not renormalized)."""
        return self.matrix @ np.asarray(x, dtype=np.complex128).T

    def expectation_notepad(self, f: np.ndarray) -> float:
        m = self.matrix
        return float(np.trace(m.T @ m.conjugate() @ np.asarray(f)).real)

    def reduced_game(self) -> DensityOperator:
        m = self.matrix
        return DensityOperator(m @ m.conjugate().T)

    def reduced_notepad(self) -> DensityOperator:
        m = self.matrix
        return DensityOperator(m.T @ m.conjugate())

    def to_pairs(self) -> list[list[Pair]]:
        return [[[c.real, c.imag] for c in row] for row in self.matrix.tolist()]

    def __repr__(self) -> str:
        return "JointState(%r)" % (self.matrix,)


class PovmEffect:
    """One positive effect of a POVM, with its square root precomputed.

    For rank-one effects the decomposition F = weight * |axis><axis| is
    stored as well; that form is what the safe-door argument needs.
    """

    __slots__ = ("label", "matrix", "sqrt_matrix", "weight", "axis")

    def __init__(self, label, matrix: np.ndarray):
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (3, 3):
            raise ValueError("effect must be a 3x3 matrix")
        if np.max(np.abs(m - m.conjugate().T)) > EPS:
            raise ValueError("effect is not Hermitian")
        vals, vecs = np.linalg.eigh(m)
        if vals.min() < -EPS:
            raise ValueError("effect has a negative eigenvalue")
        vals = np.clip(vals, 0.0, None)
        self.label = label
        self.matrix = m
        self.sqrt_matrix = (vecs * np.sqrt(vals)) @ vecs.conjugate().T
        self.weight = float(vals.sum())
        # rank-one detection: all weight in the top eigenvalue
        if self.weight > EPS and vals[1] <= EPS:
            a = vecs[:, 2]
            self.axis = kernels.normalize((complex(a[0]), complex(a[1]),
                                           complex(a[2])))
        else:
            self.axis = None

    @classmethod
    def rank_one(cls, label, weight: float, axis: Vec) -> "PovmEffect":
        eff = cls.__new__(cls)
        eff.label = label
        eff.weight = float(weight)
        eff.axis = kernels.normalize(axis)
        m = projector_matrix(eff.axis)
        eff.matrix = weight * m
        eff.sqrt_matrix = math.sqrt(weight) * m
        return eff

    def rank(self) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.matrix) > EPS))


class Povm:
    """Positive operators summing to the identity on the notepad space."""

    __slots__ = ("effects",)

    def __init__(self, effects: Sequence[PovmEffect]):
        total = np.zeros((3, 3), dtype=np.complex128)
        for e in effects:
            total += e.matrix
        if np.max(np.abs(total - np.eye(3))) > EPS:
            raise ValueError("POVM effects do not sum to the identity")
        self.effects = tuple(effects)

    @classmethod
    def projective(cls, axes: Sequence[Vec], labels: Sequence | None = None) -> "Povm":
        """Rank-one projective POVM from an orthonormal basis."""
        if labels is None:
            labels = list(range(len(axes)))
        return cls([PovmEffect.rank_one(lab, 1.0, as_vec(ax))
                    for lab, ax in zip(labels, axes)])

    @classmethod
    def from_rank_one(cls, items: Sequence[tuple]) -> "Povm":
        """Build from (label, weight, axis) triples."""
        return cls([PovmEffect.rank_one(lab, w, as_vec(ax))
                    for lab, w, ax in items])

    def __iter__(self):
        return iter(self.effects)

    def __len__(self) -> int:
        return len(self.effects)


def inner(a: StateVector | Vec, b: StateVector | Vec) -> complex:
    """Hermitian inner product, conjugate-linear in the first argument."""
    return kernels.inner(as_vec(a), as_vec(b))


def normalize_phase(chi: StateVector | Vec) -> StateVector:
    """Fix the global phase so the first component above EPS is real positive.

    Generalizes the convention "make the first component real": when that
    component vanishes the rule falls through to the next one.
    """
    v = kernels.phase_normalize(as_vec(chi), EPS)
    sv = StateVector.__new__(StateVector)
    sv.components = v
    return sv


def orthogonal_complement_vector(phi: StateVector | Vec,
                                 psi: StateVector | Vec) -> StateVector:
    """The unique unit ray orthogonal to both inputs, phase-normalized.

    This is the door a host with a classical notepad is forced to open:
    orthogonal to the player's choice and to the prize.  Raises
    DegenerateInput when the inputs span only one dimension (the player
    picked the prize ray) and the host keeps its residual freedom.
    """
    c = kernels.cross_conj(as_vec(phi), as_vec(psi))
    if kernels.norm_sq(c) <= EPS * EPS:
        raise DegenerateInput("inputs are parallel up to phase; "
                              "the complement ray is not unique")
    return normalize_phase(kernels.normalize(c))


def haar_random_unit(rng) -> StateVector:
    """Unit vector whose distribution is invariant under every unitary."""
    sv = StateVector.__new__(StateVector)
    sv.components = kernels.haar_unit(rng)
    return sv


def random_real_unit(rng) -> StateVector:
    """Unit vector with real components, uniform on the real 2-sphere."""
    sv = StateVector.__new__(StateVector)
    sv.components = kernels.real_unit(rng)
    return sv


def lueders_measure(state: StateVector | Vec, q: Projector,
                    rng) -> tuple[bool, StateVector]:
    """Binary projective measurement {q, 1-q}.

    Returns (outcome, post_state): outcome True fires with the Born
    probability <state|q|state> and collapses onto the q ray; False
    collapses onto the complement, which leaves any state orthogonal to
    q untouched.
    """
    hit, post = kernels.lueders(as_vec(state), q.axis, rng)
    sv = StateVector.__new__(StateVector)
    sv.components = post
    return hit, sv


def maximally_entangled() -> JointState:
    """The unit vector (1/sqrt(3)) sum_k |kk> on game space tensor notepad."""
    return JointState(np.eye(3, dtype=np.complex128) / math.sqrt(3.0))


def transpose_op(x):
    """Transpose without conjugation, in the fixed product basis.

    Dispatches on the input: a Projector maps to the projector onto the
    conjugated axis, a DensityOperator stays a DensityOperator, and a
    plain array maps to a plain array.
    """
    if isinstance(x, Projector):
        return Projector(StateVector.normalized(
            tuple(c.conjugate() for c in x.axis)))
    if isinstance(x, DensityOperator):
        return DensityOperator(x.matrix.T)
    return np.asarray(x).T


def reduced_state(joint: JointState, factor: str = "first") -> DensityOperator:
    """Partial trace of a joint state: "first" keeps the game space."""
    if factor == "first":
        return joint.reduced_game()
    if factor == "second":
        return joint.reduced_notepad()
    raise ValueError("factor must be 'first' or 'second', got %r" % factor)


def measure_notepad(joint: JointState, povm: Povm,
                    rng) -> tuple[object, JointState]:
    """Measure the notepad factor with a POVM.

    The outcome x fires with probability <J|(1 tensor F_x)|J> and the
    state collapses to the normalized (1 tensor sqrt(F_x)) J, the
    square-root instrument.  Averaged over outcomes this leaves the
    reduced game-space state unchanged.
    """
    m = joint.matrix
    rho_n = m.T @ m.conjugate()
    probs = [max(0.0, float(np.trace(rho_n @ e.matrix).real))
             for e in povm.effects]
    total = sum(probs)
    # guard against rounding drift in the cumulative sampling
    u = rng.random() * total
    acc = 0.0
    pick = len(probs) - 1
    for i, pr in enumerate(probs):
        acc += pr
        if u < acc:
            pick = i
            break
    eff = povm.effects[pick]
    post = m @ eff.sqrt_matrix.T
    n = math.sqrt(float(np.vdot(post, post).real))
    if n <= EPS:
        raise DegenerateInput("POVM outcome %r has zero probability on this "
                              "state" % (eff.label,))
    return eff.label, JointState(post / n)


def collapsed_game_vector(joint: JointState, effect: PovmEffect) -> Vec:
    """Game-space ray after a rank-one notepad effect fired on ``joint``.

    For F = v |phi><phi| the post state is the product (M conj(phi))
    tensor phi, so the game factor is M conj(phi) normalized.
    """
    if effect.axis is None:
        raise EffectRankTooHigh("effect %r is not rank one" % (effect.label,))
    phi_bar = np.array([c.conjugate() for c in effect.axis],
                       dtype=np.complex128)
    g = joint.matrix @ phi_bar
    v = (complex(g[0]), complex(g[1]), complex(g[2]))
    if kernels.norm_sq(v) <= EPS * EPS:
        raise DegenerateInput("effect %r has zero probability on this state"
                              % (effect.label,))
    return kernels.normalize(v)
