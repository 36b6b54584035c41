"""Host and player strategy behavior, catalogs, and spec round-trips."""

import math

import numpy as np
import pytest

from conftest import binomial_sigma, same_ray
from qmonty import engine, hilbert, kernels, strategies
from qmonty.errors import (CheatAmbiguous, CheatSetupFailed, ConfigError,
                           DegenerateInput, EffectRankTooHigh)
from qmonty.hilbert import JointState, Povm, PovmEffect
from qmonty.strategies import (AngleSweepPlayer, AxesHost, BayesOptimalPlayer,
                               CompleteVNHost, EntangledHost,
                               FiniteSetCheatPlayer, FiniteSetHost, HaarHost,
                               IgnoreNotepadHost, RealCheatPlayer,
                               RealVectorHost, StickPlayer, SwitchPlayer,
                               beforehand_equivalent_host,
                               canonical_povm_reduction, catalog_of,
                               forced_door, host_from_spec, player_from_spec)
from qmonty.streams import make_rng

E1 = (1.0 + 0j, 0j, 0j)
E2 = (0j, 1.0 + 0j, 0j)
E3 = (0j, 0j, 1.0 + 0j)
SQ3 = 1.0 / math.sqrt(3.0)
SQ2 = 1.0 / math.sqrt(2.0)
DIAG = (SQ3, SQ3, SQ3)


class TestForcedDoor:
    def test_symmetric_choice_against_first_axis(self):
        chi = kernels.phase_normalize(forced_door(DIAG, E1), 1e-9)
        assert abs(chi[0]) < 1e-12
        assert abs(chi[1] - SQ2) < 1e-12
        assert abs(chi[2] + SQ2) < 1e-12

    def test_orthogonal_to_both(self, rng):
        for _ in range(50):
            p = kernels.haar_unit(rng)
            r = kernels.haar_unit(rng)
            q = forced_door(p, r)
            assert abs(kernels.inner(q, p)) < 1e-9
            assert abs(kernels.inner(q, r)) < 1e-9
            assert abs(kernels.norm_sq(q) - 1.0) < 1e-12

    def test_parallel_inputs_degenerate(self):
        with pytest.raises(DegenerateInput):
            forced_door(E1, E1)
        phase = complex(math.cos(1.0), math.sin(1.0))
        with pytest.raises(DegenerateInput):
            forced_door(E1, (phase, 0j, 0j))


class TestClassicalHosts:
    def test_axes_host_uniform_over_basis(self, rng):
        host = AxesHost()
        n = 3000
        counts = {0: 0, 1: 0, 2: 0}
        for _ in range(n):
            prize, note = host.prepare(rng)
            k = max(range(3), key=lambda i: abs(prize[i]))
            counts[k] += 1
        sigma = binomial_sigma(1.0 / 3.0, n)
        for k in counts:
            assert abs(counts[k] / n - 1.0 / 3.0) < 4 * sigma

    def test_axes_host_rejects_non_orthonormal_basis(self):
        with pytest.raises(ConfigError):
            AxesHost(basis=(E1, E1, E3))
        with pytest.raises(ConfigError):
            AxesHost(basis=(E1, (0.5 + 0j, 0.5 + 0j, 0j), E3))

    def test_door_is_safe_and_legal(self, rng):
        for host in (AxesHost(), HaarHost(), RealVectorHost(),
                     FiniteSetHost(np.eye(3, dtype=complex))):
            for _ in range(40):
                prize, note = host.prepare(rng)
                p = kernels.haar_unit(rng)
                q = host.choose_door(note, p, rng)
                assert abs(kernels.inner(q, p)) < 1e-9
                assert kernels.born(prize, q) < 1e-18

    def test_real_host_prize_is_real(self, rng):
        host = RealVectorHost()
        prize, _ = host.prepare(rng)
        assert all(c.imag == 0.0 for c in prize)

    def test_finite_host_sampling_matches_probabilities(self, rng):
        host = FiniteSetHost(np.eye(3, dtype=complex),
                             probabilities=(0.5, 0.3, 0.2))
        n = 5000
        counts = [0, 0, 0]
        for _ in range(n):
            prize, _ = host.prepare(rng)
            counts[max(range(3), key=lambda i: abs(prize[i]))] += 1
        for k, target in enumerate((0.5, 0.3, 0.2)):
            assert abs(counts[k] / n - target) < 4 * binomial_sigma(target, n)

    def test_finite_host_validation(self):
        with pytest.raises(ConfigError):
            FiniteSetHost(np.array([[1.0, 1.0, 0.0]], dtype=complex))
        with pytest.raises(ConfigError):
            FiniteSetHost(np.eye(3, dtype=complex), probabilities=(0.5, 0.5, 0.5))


class TestIgnoreNotepadHost:
    def test_bias_validation(self):
        with pytest.raises(ConfigError):
            IgnoreNotepadHost(reveal_bias=1.5)

    def test_unbiased_door_ignores_prize(self, rng):
        host = IgnoreNotepadHost()
        overlaps = 0
        for _ in range(200):
            prize, note = host.prepare(rng)
            q = host.choose_door(note, E1, rng)
            assert abs(kernels.inner(q, E1)) < 1e-9
            if kernels.born(prize, q) > 1e-6:
                overlaps += 1
        assert overlaps > 100  # blind draws almost always graze the prize

    def test_full_bias_aims_at_prize(self, rng):
        host = IgnoreNotepadHost(reveal_bias=1.0)
        for _ in range(50):
            prize, note = host.prepare(rng)
            p = kernels.haar_unit(rng)
            q = host.choose_door(note, p, rng)
            assert abs(kernels.inner(q, p)) < 1e-9
            # q is the prize component orthogonal to p: maximal overlap
            ip = kernels.inner(p, prize)
            rest = tuple(prize[i] - p[i] * ip for i in range(3))
            assert same_ray(q, kernels.normalize(rest), tol=1e-9)


class TestCompleteVNHost:
    def test_basis_structure(self, rng):
        host = CompleteVNHost()
        p = kernels.haar_unit(rng)
        q, q1, q2 = host.complete_basis(p, rng)
        for a, b in ((q, q1), (q, q2), (q1, q2)):
            assert abs(kernels.inner(a, b)) < 1e-9
        assert abs(kernels.inner(q, p)) < 1e-9
        assert kernels.born(host.prize, q) < 1e-18
        # the two unopened doors sit at 45 degrees to the prize
        assert abs(kernels.born(host.prize, q1) - 0.5) < 1e-9
        assert abs(kernels.born(host.prize, q2) - 0.5) < 1e-9

    def test_non_unit_prize_rejected(self):
        with pytest.raises(ConfigError):
            CompleteVNHost(prize=(1.0, 1.0, 0.0))


class TestEntangledHost:
    def test_prepare_returns_entangled_joint_state(self, rng):
        host = EntangledHost()
        prize, note = host.prepare(rng)
        assert isinstance(prize, JointState)
        assert np.allclose(prize.reduced_game().matrix, np.eye(3) / 3.0,
                           atol=1e-12)

    def test_measure_early_collapses_to_catalog(self, rng):
        host = EntangledHost(measure_early=True)
        equivalent = beforehand_equivalent_host(EntangledHost())
        for _ in range(40):
            prize, note = host.prepare(rng)
            assert isinstance(prize, tuple)
            hits = [same_ray(prize, tuple(v), tol=1e-9)
                    for v in equivalent.vectors]
            assert sum(hits) == 1

    def test_invalid_policy_combinations(self):
        povm = Povm.projective([E1, E2, E3])
        with pytest.raises(ConfigError):
            EntangledHost(policy=EntangledHost.POLICY_TRANSPOSE, povm=povm)
        with pytest.raises(ConfigError):
            EntangledHost(policy=EntangledHost.POLICY_TRANSPOSE,
                          measure_early=True)
        with pytest.raises(ConfigError):
            EntangledHost(policy="sideways")

    def test_transpose_door_mapping(self, rng):
        host = EntangledHost(policy=EntangledHost.POLICY_TRANSPOSE)
        triple = (E1, E2, E3)
        assert host.door_for_outcome(1, E1, triple, rng) == E3
        assert host.door_for_outcome(2, E1, triple, rng) == E2
        opened = {host.door_for_outcome(0, E1, triple, rng)
                  for _ in range(50)}
        assert opened == {E2, E3}

    def test_transpose_notepad_povm_conjugates_triple(self):
        host = EntangledHost(policy=EntangledHost.POLICY_TRANSPOSE)
        axis = kernels.normalize((1, 1j, 0))
        u1, u2 = kernels.complement_basis(axis)
        povm = host.notepad_povm(None, (axis, u1, u2))
        assert same_ray(povm.effects[0].axis,
                        tuple(c.conjugate() for c in axis), tol=1e-9)

    def test_requires_triple_flag(self):
        assert EntangledHost(policy=EntangledHost.POLICY_TRANSPOSE).requires_triple
        assert not EntangledHost().requires_triple


class TestPovmReduction:
    def test_projective_reduces_to_unit_weights(self):
        povm = Povm.projective([E1, E2, E3])
        reduced = canonical_povm_reduction(povm)
        assert len(reduced) == 3
        assert all(abs(e.weight - 1.0) < 1e-12 for e in reduced.effects)

    def test_split_effects_merge(self):
        items = [(0, 0.5, E1), (1, 0.5, E1), (2, 1.0, E2), (3, 1.0, E3)]
        reduced = canonical_povm_reduction(Povm.from_rank_one(items))
        assert len(reduced) == 3
        weights = sorted(e.weight for e in reduced.effects)
        assert max(abs(w - 1.0) for w in weights) < 1e-12

    def test_weights_sum_to_three(self):
        # overcomplete rank-one POVM: two half-weight copies of a basis
        items = [(i, 0.5, ax)
                 for i, ax in enumerate((E1, E1, E2, E2, E3, E3))]
        reduced = canonical_povm_reduction(Povm.from_rank_one(items))
        assert abs(sum(e.weight for e in reduced.effects) - 3.0) < 1e-9
        assert len(reduced) == 3

    def test_rank_two_effect_rejected(self):
        effects = [PovmEffect("low", np.diag([1, 1, 0]).astype(complex)),
                   PovmEffect("top", np.diag([0, 0, 1]).astype(complex))]
        with pytest.raises(EffectRankTooHigh):
            canonical_povm_reduction(Povm(effects))

    def test_equivalent_host_conjugates_catalog(self):
        axis = kernels.normalize((1, 1j, 1))
        u1, u2 = kernels.complement_basis(axis)
        host = EntangledHost(povm=Povm.projective([axis, u1, u2]))
        eq = beforehand_equivalent_host(host)
        assert same_ray(tuple(eq.vectors[0]),
                        tuple(c.conjugate() for c in axis), tol=1e-9)
        assert np.allclose(eq.probabilities, 1.0 / 3.0)


class TestBasicPlayers:
    def test_stick_keeps_first_choice(self, rng):
        player = StickPlayer()
        p = player.first_choice(rng)
        assert player.final_choice(p, None, E3, rng) == p

    def test_switch_is_orthogonal_to_both(self, rng):
        player = SwitchPlayer()
        for _ in range(50):
            p = kernels.haar_unit(rng)
            chi = kernels.unit_in_complement(p, rng)
            p2 = player.final_choice(p, None, chi, rng)
            assert abs(kernels.inner(p2, p)) < 1e-9
            assert abs(kernels.inner(p2, chi)) < 1e-9

    def test_fixed_first_choice(self, rng):
        player = SwitchPlayer(phi=DIAG)
        assert player.first_choice(rng) == DIAG

    def test_sweep_interpolates(self, rng):
        p = kernels.haar_unit(rng)
        chi = kernels.unit_in_complement(p, rng)
        switch_axis = SwitchPlayer().final_choice(p, None, chi, rng)
        for theta in (0.0, math.pi / 6, math.pi / 3, math.pi / 2):
            p2 = AngleSweepPlayer(theta).final_choice(p, None, chi, rng)
            assert abs(abs(kernels.inner(p2, p)) - abs(math.sin(theta))) < 1e-9
            assert (abs(abs(kernels.inner(p2, switch_axis))
                        - abs(math.cos(theta))) < 1e-9)
            assert abs(kernels.inner(p2, chi)) < 1e-9

    def test_triple_first_choice_is_orthonormal(self, rng):
        triple = SwitchPlayer().first_choice(rng, need_triple=True)
        assert len(triple) == 3
        for i in range(3):
            for j in range(i + 1, 3):
                assert abs(kernels.inner(triple[i], triple[j])) < 1e-9


def play_many(host, player, rules, n, seed):
    rng = make_rng(seed)
    wins = 0
    for _ in range(n):
        won, _ = engine.play_game(rules, host, player, rng)
        wins += won
    return wins


class TestFiniteCheat:
    def test_always_wins_against_axes(self):
        host = AxesHost()
        player = FiniteSetCheatPlayer(catalog_of(host))
        assert play_many(host, player, "strict", 200, seed=3) == 200

    def test_always_wins_against_random_catalog(self):
        rng = make_rng(8)
        vectors = np.array([kernels.haar_unit(rng) for _ in range(25)])
        host = FiniteSetHost(vectors)
        player = FiniteSetCheatPlayer(vectors)
        assert play_many(host, player, "strict", 200, seed=4) == 200

    def test_identify_prize_unique(self):
        player = FiniteSetCheatPlayer(np.eye(3, dtype=complex))
        chi = (0j, SQ2 + 0j, -SQ2 + 0j)  # orthogonal to e1 only
        assert player.identify_prize(chi) == E1

    def test_ambiguous_announcement_raises(self):
        player = FiniteSetCheatPlayer(np.eye(3, dtype=complex))
        with pytest.raises(CheatAmbiguous):
            player.identify_prize(E3)  # orthogonal to e1 and e2

    def test_best_guess_mode_returns_some_catalog_vector(self):
        player = FiniteSetCheatPlayer(np.eye(3, dtype=complex),
                                      on_ambiguous="best_guess")
        guess = player.identify_prize(E3)
        assert any(same_ray(guess, v, tol=1e-9)
                   for v in (E1, E2))

    def test_exhausted_sampling_raises(self, rng):
        player = FiniteSetCheatPlayer(np.eye(3, dtype=complex), max_tries=0)
        with pytest.raises(CheatSetupFailed):
            player.first_choice(rng)

    def test_pinned_first_choice_in_span_rejected(self):
        with pytest.raises(CheatSetupFailed):
            FiniteSetCheatPlayer(np.eye(3, dtype=complex),
                                 phi=(SQ2, SQ2, 0.0))


class TestRealCheat:
    def test_reconstruction_oracle(self, rng):
        host = RealVectorHost()
        player = RealCheatPlayer()
        for _ in range(100):
            prize, note = host.prepare(rng)
            p = player.first_choice(rng)
            chi = host.choose_door(note, p, rng)
            guess = player.final_choice(p, None, chi, rng)
            assert same_ray(guess, prize, tol=1e-9)

    def test_always_wins(self):
        assert play_many(RealVectorHost(), RealCheatPlayer(), "strict",
                         200, seed=6) == 200

    def test_first_choice_is_the_designed_probe(self, rng):
        p = RealCheatPlayer().first_choice(rng)
        assert abs(p[0] - SQ2) < 1e-12
        assert abs(p[1] - SQ2 * 1j) < 1e-12
        assert abs(p[2]) == 0.0

    def test_degenerate_announcement_falls_back_to_switch(self, rng):
        player = RealCheatPlayer()
        p = player.first_choice(rng)
        chi = E3  # first reconstruction component vanishes
        out = player.final_choice(p, None, chi, rng)
        assert abs(kernels.inner(out, chi)) < 1e-9
        assert abs(kernels.inner(out, p)) < 1e-9


class TestBayesPlayer:
    def test_beats_axes_host(self):
        host = AxesHost()
        player = BayesOptimalPlayer(host)
        assert play_many(host, player, "strict", 100, seed=9) == 100

    def test_beats_finite_host(self):
        rng = make_rng(10)
        vectors = np.array([kernels.haar_unit(rng) for _ in range(12)])
        host = FiniteSetHost(vectors)
        player = BayesOptimalPlayer(host)
        assert play_many(host, player, "strict", 100, seed=11) == 100

    def test_haar_model_plays_switch(self, rng):
        player = BayesOptimalPlayer(HaarHost())
        p = kernels.haar_unit(rng)
        chi = kernels.unit_in_complement(p, rng)
        got = player.final_choice(p, None, chi, rng)
        want = SwitchPlayer().final_choice(p, None, chi, rng)
        assert same_ray(got, want, tol=1e-9)


class TestSpecs:
    HOSTS = [
        AxesHost(),
        FiniteSetHost(np.eye(3, dtype=complex), probabilities=(0.2, 0.3, 0.5)),
        RealVectorHost(),
        HaarHost(),
        IgnoreNotepadHost(reveal_bias=0.25),
        CompleteVNHost(),
        EntangledHost(),
        EntangledHost(policy=EntangledHost.POLICY_TRANSPOSE),
        EntangledHost(measure_early=True),
    ]

    @pytest.mark.parametrize("host", HOSTS, ids=lambda h: h.label())
    def test_host_spec_round_trip(self, host, rng):
        clone = host_from_spec(host.spec())
        assert clone.kind == host.kind
        assert clone.spec() == host.spec()

    def test_player_spec_round_trip(self):
        players = [StickPlayer(), SwitchPlayer(phi=DIAG),
                   AngleSweepPlayer(0.7),
                   FiniteSetCheatPlayer(np.eye(3, dtype=complex)),
                   RealCheatPlayer(),
                   BayesOptimalPlayer(HaarHost())]
        for player in players:
            clone = player_from_spec(player.spec())
            assert clone.kind == player.kind
            assert clone.spec() == player.spec()

    def test_unknown_kinds_rejected(self):
        with pytest.raises(ConfigError):
            host_from_spec({"kind": "trapdoor"})
        with pytest.raises(ConfigError):
            player_from_spec({"kind": "psychic"})
        with pytest.raises(ConfigError):
            host_from_spec("haar")

    def test_cheat_finite_pulls_catalog_from_host(self):
        player = player_from_spec({"kind": "cheat_finite"}, host=AxesHost())
        assert player.vectors.shape == (3, 3)
        with pytest.raises(ConfigError):
            player_from_spec({"kind": "cheat_finite"}, host=HaarHost())

    def test_catalog_of(self):
        assert catalog_of(HaarHost()) is None
        assert catalog_of(AxesHost()).shape == (3, 3)
        fixed = EntangledHost()
        cat = catalog_of(fixed)
        assert cat is not None and cat.shape[1] == 3
        assert catalog_of(
            EntangledHost(policy=EntangledHost.POLICY_TRANSPOSE)) is None
