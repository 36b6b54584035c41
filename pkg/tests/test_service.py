"""JSON API: session lifecycle, error mapping, determinism, hints."""

import math

import pytest
from fastapi.testclient import TestClient

from conftest import binomial_sigma, same_ray
from qmonty import hilbert, kernels
from qmonty.service import create_app

SQ3 = 1.0 / math.sqrt(3.0)
E1_PAIRS = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
E2_PAIRS = [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]
E3_PAIRS = [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
DIAG_PAIRS = [[SQ3, 0.0], [SQ3, 0.0], [SQ3, 0.0]]


@pytest.fixture()
def client():
    with TestClient(create_app()) as c:
        yield c


def make_session(client, **overrides):
    body = {"host": {"kind": "haar"}, "seed": 1}
    body.update(overrides)
    resp = client.post("/api/v1/sessions", json=body)
    assert resp.status_code == 201, resp.text
    return resp.json()


def vec(pairs):
    return hilbert.from_pairs(pairs)


class TestSessionLifecycle:
    def test_create_defaults(self, client):
        state = make_session(client)
        assert state["stage"] == "prepared"
        assert state["game_index"] == 0
        assert state["rules"]["variant"] == "strict"
        assert state["seed"] == 1
        assert state["host"] == {"kind": "haar"}
        assert state["stats"]["games"] == 0
        assert state["stats"]["estimate"] is None

    def test_random_seed_when_omitted(self, client):
        resp = client.post("/api/v1/sessions", json={})
        assert resp.status_code == 201
        assert isinstance(resp.json()["seed"], int)

    def test_full_game_and_auto_advance(self, client):
        sid = make_session(client)["session_id"]
        opened = client.post(f"/api/v1/sessions/{sid}/door",
                             json={"phi": E1_PAIRS}).json()
        assert opened["stage"] == "opened"
        assert opened["p"] == E1_PAIRS
        chi = vec(opened["chi"])
        assert abs(kernels.inner(chi, vec(opened["p"]))) < 1e-9

        done = client.post(f"/api/v1/sessions/{sid}/final",
                           json={"mode": "switch"}).json()
        assert done["stage"] == "finished"
        assert done["won"] in (True, False)
        assert done["stats"]["games"] == 1
        assert done["stats"]["wins"] == int(done["won"])
        assert done["last_result"] == {"game_index": 0,
                                       "won": done["won"],
                                       "aborted": False}

        nxt = client.get(f"/api/v1/sessions/{sid}").json()
        assert nxt["stage"] == "prepared"
        assert nxt["game_index"] == 1
        assert nxt["chi"] is None and nxt["won"] is None

    def test_stats_endpoint(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/api/v1/sessions/{sid}/door", json={"phi": E1_PAIRS})
        client.post(f"/api/v1/sessions/{sid}/final", json={"mode": "stick"})
        stats = client.get(f"/api/v1/sessions/{sid}/stats").json()
        assert stats["session_id"] == sid
        assert stats["games"] == 1
        assert stats["ci_low"] is not None

    def test_explicit_final_vector(self, client):
        sid = make_session(client)["session_id"]
        opened = client.post(f"/api/v1/sessions/{sid}/door",
                             json={"phi": E1_PAIRS}).json()
        hint = client.get(f"/api/v1/sessions/{sid}/hint",
                          params={"mode": "switch"}).json()
        done = client.post(f"/api/v1/sessions/{sid}/final",
                           json={"p_prime": hint["p_prime"]}).json()
        assert done["stage"] == "finished"


class TestWorkedExample:
    """Fixing the prize on the first axis pins every vector in stage 3."""

    HOST = {"kind": "finite_set", "vectors": [E1_PAIRS]}

    def test_forced_door_announcement(self, client):
        state = make_session(client, host=self.HOST)
        sid = state["session_id"]
        opened = client.post(f"/api/v1/sessions/{sid}/door",
                             json={"phi": DIAG_PAIRS}).json()
        s = 1.0 / math.sqrt(2.0)
        assert same_ray(vec(opened["chi"]), (0j, s + 0j, -s + 0j),
                        tol=1e-12)
        # announced form is phase normalized: leading component real
        # and positive
        assert opened["chi"][1][0] > 0 and opened["chi"][1][1] == 0.0

    def test_cheat_hint_recovers_prize(self, client):
        sid = make_session(client, host=self.HOST)["session_id"]
        client.post(f"/api/v1/sessions/{sid}/door", json={"phi": DIAG_PAIRS})
        hint = client.get(f"/api/v1/sessions/{sid}/hint",
                          params={"mode": "cheat_finite"}).json()
        assert same_ray(vec(hint["p_prime"]), vec(E1_PAIRS), tol=1e-9)
        done = client.post(f"/api/v1/sessions/{sid}/final",
                           json={"mode": "cheat_finite"}).json()
        assert done["won"] is True

    def test_hint_does_not_commit(self, client):
        sid = make_session(client, host=self.HOST)["session_id"]
        client.post(f"/api/v1/sessions/{sid}/door", json={"phi": DIAG_PAIRS})
        for _ in range(3):
            client.get(f"/api/v1/sessions/{sid}/hint",
                       params={"mode": "stick"})
        state = client.get(f"/api/v1/sessions/{sid}").json()
        assert state["stage"] == "opened"


class TestErrorMapping:
    def test_unknown_session_is_404(self, client):
        resp = client.get("/api/v1/sessions/deadbeef")
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "not_found"

    def test_door_twice_is_409_wrong_stage(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/api/v1/sessions/{sid}/door", json={"phi": E1_PAIRS})
        resp = client.post(f"/api/v1/sessions/{sid}/door",
                           json={"phi": E2_PAIRS})
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "wrong_stage"

    def test_final_on_announced_door_is_409_rule_violation(self, client):
        sid = make_session(client)["session_id"]
        opened = client.post(f"/api/v1/sessions/{sid}/door",
                             json={"phi": E1_PAIRS}).json()
        resp = client.post(f"/api/v1/sessions/{sid}/final",
                           json={"p_prime": opened["chi"]})
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "rule_violation"

    def test_non_unit_vector_is_400(self, client):
        sid = make_session(client)["session_id"]
        resp = client.post(f"/api/v1/sessions/{sid}/door",
                           json={"phi": [[1, 0], [1, 0], [1, 0]]})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "invalid_input"

    def test_malformed_vector_is_400(self, client):
        sid = make_session(client)["session_id"]
        resp = client.post(f"/api/v1/sessions/{sid}/door",
                           json={"phi": [[1, 0], [0, 0]]})
        assert resp.status_code == 400

    def test_bad_seed_is_400(self, client):
        for bad in (True, "seven", 1.5):
            resp = client.post("/api/v1/sessions", json={"seed": bad})
            assert resp.status_code == 400, bad

    def test_bad_body_is_400(self, client):
        resp = client.post("/api/v1/sessions",
                           content=b"not json",
                           headers={"content-type": "application/json"})
        assert resp.status_code == 400

    def test_unknown_hint_mode_is_400(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/api/v1/sessions/{sid}/door", json={"phi": E1_PAIRS})
        resp = client.get(f"/api/v1/sessions/{sid}/hint",
                          params={"mode": "psychic"})
        assert resp.status_code == 400

    def test_hint_before_door_is_409(self, client):
        sid = make_session(client)["session_id"]
        resp = client.get(f"/api/v1/sessions/{sid}/hint",
                          params={"mode": "switch"})
        assert resp.status_code == 409


class TestDisclosure:
    def test_hidden_host_blocks_cheat_hints(self, client):
        state = make_session(client, host={"kind": "axes"},
                             disclose_host=False)
        assert state["host"] is None
        sid = state["session_id"]
        client.post(f"/api/v1/sessions/{sid}/door", json={"phi": DIAG_PAIRS})
        resp = client.get(f"/api/v1/sessions/{sid}/hint",
                          params={"mode": "cheat_finite"})
        assert resp.status_code == 400
        ok = client.get(f"/api/v1/sessions/{sid}/hint",
                        params={"mode": "switch"})
        assert ok.status_code == 200

    def test_cheat_real_needs_real_host(self, client):
        sid = make_session(client, host={"kind": "haar"})["session_id"]
        client.post(f"/api/v1/sessions/{sid}/door", json={"phi": E1_PAIRS})
        resp = client.get(f"/api/v1/sessions/{sid}/hint",
                          params={"mode": "cheat_real"})
        assert resp.status_code == 400


class TestTripleFlow:
    def test_triple_game(self, client):
        state = make_session(
            client,
            host={"kind": "entangled",
                  "policy": "transpose_of_player_triple"},
            rules="triple_choice")
        sid = state["session_id"]
        opened = client.post(
            f"/api/v1/sessions/{sid}/door",
            json={"triple": [E1_PAIRS, E2_PAIRS, E3_PAIRS]}).json()
        assert opened["stage"] == "opened"
        assert opened["triple"] == [E1_PAIRS, E2_PAIRS, E3_PAIRS]
        chi = vec(opened["chi"])
        assert same_ray(chi, vec(E2_PAIRS)) or same_ray(chi, vec(E3_PAIRS))
        done = client.post(f"/api/v1/sessions/{sid}/final",
                           json={"mode": "switch"}).json()
        assert done["stage"] == "finished"
        assert done["won"] in (True, False)

    def test_single_vector_rejected_under_triple_rules(self, client):
        state = make_session(
            client,
            host={"kind": "entangled",
                  "policy": "transpose_of_player_triple"},
            rules="triple_choice")
        sid = state["session_id"]
        resp = client.post(f"/api/v1/sessions/{sid}/door",
                           json={"phi": E1_PAIRS})
        assert resp.status_code == 400


class TestRevealBehaviour:
    def find_instant_finish(self, client, rules):
        for seed in range(40):
            sid = make_session(client,
                               host={"kind": "ignore_notepad",
                                     "reveal_bias": 1.0},
                               rules=rules, seed=seed)["session_id"]
            resp = client.post(f"/api/v1/sessions/{sid}/door",
                               json={"phi": E1_PAIRS})
            if resp.status_code != 200:
                continue
            state = resp.json()
            if state["reveal"]:
                return sid, state
        raise AssertionError("no reveal observed over 40 seeds")

    def test_reveal_wins_counts_instantly(self, client):
        sid, state = self.find_instant_finish(client, "reveal_wins")
        assert state["stage"] == "finished"
        assert state["won"] is True
        assert state["stats"]["games"] == 1
        assert state["stats"]["wins"] == 1
        assert state["stats"]["estimate"] == 1.0
        assert state["last_result"]["won"] is True

    def test_restart_on_reveal_keeps_game_open(self, client):
        for seed in range(40):
            sid = make_session(client,
                               host={"kind": "ignore_notepad",
                                     "reveal_bias": 1.0},
                               rules="restart_on_reveal",
                               seed=seed)["session_id"]
            state = client.post(f"/api/v1/sessions/{sid}/door",
                                json={"phi": E1_PAIRS}).json()
            if state["restarts"] > 0:
                assert state["stage"] == "prepared"
                assert state["p"] is None
                assert state["stats"]["games"] == 0
                again = client.post(f"/api/v1/sessions/{sid}/door",
                                    json={"phi": E2_PAIRS})
                assert again.status_code == 200
                return
        raise AssertionError("no restart observed over 40 seeds")

    def test_strict_reveal_aborts_without_counting(self, client):
        for seed in range(40):
            sid = make_session(client,
                               host={"kind": "ignore_notepad",
                                     "reveal_bias": 1.0},
                               rules="strict", seed=seed)["session_id"]
            resp = client.post(f"/api/v1/sessions/{sid}/door",
                               json={"phi": E1_PAIRS})
            if resp.status_code == 409:
                assert resp.json()["error"]["code"] == "rule_violation"
                state = client.get(f"/api/v1/sessions/{sid}").json()
                assert state["stage"] == "prepared"
                assert state["game_index"] == 1
                assert state["last_result"]["aborted"] is True
                assert state["stats"]["games"] == 0
                return
        raise AssertionError("no violation observed over 40 seeds")


class TestDeterminism:
    def play_one(self, client, seed):
        sid = make_session(client, seed=seed)["session_id"]
        opened = client.post(f"/api/v1/sessions/{sid}/door",
                             json={"phi": DIAG_PAIRS}).json()
        done = client.post(f"/api/v1/sessions/{sid}/final",
                           json={"mode": "switch"}).json()
        return opened["chi"], done["won"]

    def test_same_seed_same_games(self, client):
        assert self.play_one(client, 123) == self.play_one(client, 123)

    def test_different_seeds_differ(self, client):
        chi_a, _ = self.play_one(client, 123)
        chi_b, _ = self.play_one(client, 124)
        assert chi_a != chi_b

    def test_games_use_distinct_substreams(self, client):
        sid = make_session(client, seed=55)["session_id"]
        chis = []
        for _ in range(2):
            opened = client.post(f"/api/v1/sessions/{sid}/door",
                                 json={"phi": DIAG_PAIRS}).json()
            chis.append(tuple(map(tuple, opened["chi"])))
            client.post(f"/api/v1/sessions/{sid}/final",
                        json={"mode": "switch"})
        assert chis[0] != chis[1]


class TestExpiry:
    def test_idle_sessions_purged(self):
        with TestClient(create_app(idle_expiry=0.0)) as c:
            sid = c.post("/api/v1/sessions",
                         json={"seed": 1}).json()["session_id"]
            resp = c.get(f"/api/v1/sessions/{sid}")
            assert resp.status_code == 404


class TestStrategyCatalog:
    def test_catalog_shape(self, client):
        doc = client.get("/api/v1/strategies").json()
        host_kinds = {h["kind"] for h in doc["hosts"]}
        player_kinds = {p["kind"] for p in doc["players"]}
        assert {"haar", "axes", "finite_set", "real", "ignore_notepad",
                "complete_vn", "entangled"} <= host_kinds
        assert {"stick", "switch", "sweep", "cheat_finite", "cheat_real",
                "bayes"} <= player_kinds
        assert "strict" in doc["variants"]
        assert set(doc["hint_modes"]) == {"stick", "switch", "cheat_finite",
                                          "cheat_real"}


class TestWinRateSmoke:
    N = 600

    def test_switch_rate_over_many_games(self, client):
        sid = make_session(client, seed=2026)["session_id"]
        for _ in range(self.N):
            client.post(f"/api/v1/sessions/{sid}/door",
                        json={"phi": DIAG_PAIRS})
            client.post(f"/api/v1/sessions/{sid}/final",
                        json={"mode": "switch"})
        stats = client.get(f"/api/v1/sessions/{sid}/stats").json()
        assert stats["games"] == self.N
        sigma = binomial_sigma(2.0 / 3.0, self.N)
        assert abs(stats["estimate"] - 2.0 / 3.0) < 4 * sigma


@pytest.mark.slow
class TestEndToEndLong:
    """Full-service volume run; the default suite uses the short smoke."""

    N = 100_000

    def test_switch_rate_large(self):
        with TestClient(create_app()) as client:
            sid = client.post("/api/v1/sessions",
                              json={"seed": 31337}).json()["session_id"]
            for _ in range(self.N):
                client.post(f"/api/v1/sessions/{sid}/door",
                            json={"phi": DIAG_PAIRS})
                client.post(f"/api/v1/sessions/{sid}/final",
                            json={"mode": "switch"})
            stats = client.get(f"/api/v1/sessions/{sid}/stats").json()
            assert stats["games"] == self.N
            sigma = binomial_sigma(2.0 / 3.0, self.N)
            assert abs(stats["estimate"] - 2.0 / 3.0) < 4 * sigma
