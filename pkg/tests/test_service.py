import pytest
from fastapi.testclient import TestClient

from gridgame.service.app import app

from conftest import K22_TEXT, P3_TEXT, V2_TEXT

client = TestClient(app)


def grid_text(text):
    return {"text": text}


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


class TestSimulate:
    def test_attack_with_cascade(self):
        resp = client.post(
            "/simulate",
            json={"grid": grid_text(V2_TEXT), "alpha": 0.5, "attack": [0]},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["payoff"] == 1
        assert body["num_rounds"] == 1
        assert body["rounds"] == [{"round": 1, "removed_edges": [[1, 2]]}]
        assert body["wall_seconds"] is None

    def test_defended_attack(self):
        resp = client.post(
            "/simulate",
            json={
                "grid": grid_text(V2_TEXT),
                "alpha": 0.5,
                "attack": [0],
                "defend": [0],
            },
        )
        assert resp.json()["payoff"] == 0
        assert resp.json()["num_rounds"] == 0

    def test_unknown_node_is_input_error(self):
        resp = client.post(
            "/simulate", json={"grid": grid_text(P3_TEXT), "attack": [9]}
        )
        assert resp.status_code == 400
        assert resp.json()["kind"] == "input"

    def test_bad_grid_text_is_input_error(self):
        resp = client.post(
            "/simulate", json={"grid": grid_text("node 0 S\nedge 0 5\n")}
        )
        assert resp.status_code == 400

    def test_timings_opt_in(self):
        resp = client.post(
            "/simulate",
            json={"grid": grid_text(V2_TEXT), "attack": [0], "timings": True},
        )
        assert resp.json()["wall_seconds"] >= 0


class TestLoads:
    def test_p3_rows(self):
        resp = client.post("/loads", json={"grid": grid_text(P3_TEXT), "alpha": 0.0})
        body = resp.json()
        assert body["nodes"] == [
            {"node": 0, "nodal_load": 0.0, "single_attack_payoff": 1},
            {"node": 1, "nodal_load": 1.0, "single_attack_payoff": 1},
            {"node": 2, "nodal_load": 0.0, "single_attack_payoff": 1},
        ]
        assert body["edges"] == [
            {"u": 0, "v": 1, "load": 1.0},
            {"u": 1, "v": 2, "load": 1.0},
        ]

    def test_k22_sources_harmless(self):
        resp = client.post("/loads", json={"grid": grid_text(K22_TEXT), "alpha": 3.0})
        body = resp.json()
        payoff_by_node = {
            row["node"]: row["single_attack_payoff"] for row in body["nodes"]
        }
        assert payoff_by_node == {0: 0, 1: 0, 2: 1, 3: 1}
        assert all(row["nodal_load"] == 0.0 for row in body["nodes"])


class TestRespond:
    def test_defender_exact(self):
        resp = client.post(
            "/respond",
            json={
                "grid": grid_text(K22_TEXT),
                "alpha": 3.0,
                "side": "defender",
                "budget": 1,
                "opponent": [
                    {"nodes": [2], "probability": 0.6},
                    {"nodes": [3], "probability": 0.4},
                ],
            },
        )
        body = resp.json()
        assert body["nodes"] == [2]
        assert body["value"] == pytest.approx(0.4)

    def test_attacker_greedy(self):
        resp = client.post(
            "/respond",
            json={
                "grid": grid_text(K22_TEXT),
                "alpha": 3.0,
                "side": "attacker",
                "budget": 1,
                "oracle": "greedy",
                "opponent": [{"nodes": [2], "probability": 1.0}],
            },
        )
        body = resp.json()
        assert body["nodes"] == [3]
        assert body["value"] == pytest.approx(1.0)

    def test_capacity_error_maps_to_409(self):
        big = client.post(
            "/generate",
            json={"n": 24, "m": 40, "src_frac": 0.25, "ld_frac": 0.25, "seed": 2},
        ).json()["grid_text"]
        resp = client.post(
            "/respond",
            json={
                "grid": grid_text(big),
                "side": "attacker",
                "budget": 12,
                "oracle": "exact",
            },
        )
        assert resp.status_code == 409
        assert resp.json()["kind"] == "capacity"

    def test_bad_probabilities_rejected(self):
        resp = client.post(
            "/respond",
            json={
                "grid": grid_text(K22_TEXT),
                "side": "defender",
                "budget": 1,
                "opponent": [{"nodes": [2], "probability": 0.4}],
            },
        )
        assert resp.status_code == 400


class TestSolve:
    def test_k22_exact(self):
        resp = client.post(
            "/solve",
            json={"grid": grid_text(K22_TEXT), "alpha": 3.0, "ka": 1, "kd": 1},
        )
        body = resp.json()
        assert body["value"] == pytest.approx(0.5, abs=1e-9)
        assert body["converged"] is True
        assert body["iterations"] == len(body["iteration_stats"])
        for entry in body["attacker_mix"]:
            assert set(entry) == {"nodes", "probability"}

    def test_iteration_cap_reported(self):
        resp = client.post(
            "/solve",
            json={
                "grid": grid_text(K22_TEXT),
                "alpha": 3.0,
                "ka": 1,
                "kd": 1,
                "max_iters": 1,
            },
        )
        assert resp.json()["converged"] is False


class TestSweep:
    def test_metrics_per_point(self):
        resp = client.post(
            "/sweep",
            json={
                "grid": grid_text(K22_TEXT),
                "alphas": [3.0],
                "ka_list": [1],
                "kd_list": [1],
            },
        )
        rows = resp.json()["rows"]
        metrics = {r["metric"]: r for r in rows}
        assert set(metrics) == {
            "game_value",
            "dlb_vs_minimax",
            "dlb_vs_best_response",
            "uniform_baseline",
        }
        assert metrics["game_value"]["value"] == pytest.approx(0.5, abs=1e-9)
        # pure DLB defense is exploitable on K22: best response hits the other load
        assert metrics["dlb_vs_best_response"]["value"] >= 0.5
        assert metrics["uniform_baseline"]["value"] >= 1 * (1 - 1 / 2) - 1e-9

    def test_empty_sweep_lists_rejected(self):
        resp = client.post(
            "/sweep",
            json={
                "grid": grid_text(K22_TEXT),
                "alphas": [],
                "ka_list": [1],
                "kd_list": [1],
            },
        )
        assert resp.status_code == 422

    def test_negative_alpha_rejected(self):
        resp = client.post(
            "/sweep",
            json={
                "grid": grid_text(K22_TEXT),
                "alphas": [-1.0],
                "ka_list": [1],
                "kd_list": [1],
            },
        )
        assert resp.status_code == 422


class TestGenerate:
    def test_deterministic_text(self):
        payload = {"n": 6, "m": 7, "src_frac": 0.34, "ld_frac": 0.34, "seed": 42}
        a = client.post("/generate", json=payload).json()["grid_text"]
        b = client.post("/generate", json=payload).json()["grid_text"]
        assert a == b
        assert a.count("edge") == 7

    def test_infeasible_is_input_error(self):
        resp = client.post(
            "/generate",
            json={"n": 5, "m": 11, "src_frac": 0.2, "ld_frac": 0.2, "seed": 0},
        )
        assert resp.status_code == 400


def test_grid_source_requires_exactly_one():
    resp = client.post("/loads", json={"grid": {}})
    assert resp.status_code == 422
    resp = client.post(
        "/loads",
        json={
            "grid": {
                "text": P3_TEXT,
                "synthetic": {"n": 4, "m": 3, "src_frac": 0.3, "ld_frac": 0.3},
            }
        },
    )
    assert resp.status_code == 422
