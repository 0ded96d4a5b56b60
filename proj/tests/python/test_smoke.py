# Copyright 2026 The Eco-Bee Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests for the Python bindings against the shared fixtures."""

import base64
import pathlib

import pytest

import ecobee

DATA = pathlib.Path(__file__).resolve().parents[1] / "data"


@pytest.fixture(scope="module")
def table():
    return ecobee.FactorTable(DATA / "f0")


def test_boundary_codes():
    codes = ecobee.boundary_codes()
    assert len(codes) == 9
    assert codes[0] == "climate_change"
    assert codes[-1] == "novel_entities"


def test_factor_table(table):
    assert table.domains == ["fashion", "food", "housing", "mobility"]
    assert len(table) == 18
    assert "vegan" in table.options("food")
    assert len(table.version) == 12


def test_score_hand_quiz(table):
    result = ecobee.score(
        table,
        {"food": "vegan", "mobility": "cycle", "fashion": "secondhand", "housing": "shared_flat"},
    )
    # climate: 100 * (1 - 2.3 / 14)
    assert result["boundaries"]["climate_change"] == pytest.approx(83.6)
    assert result["boundaries"]["freshwater_use"] == pytest.approx(71.1)
    assert 0.0 <= result["composite"] <= 100.0
    assert result["explanations"]


def test_score_anchors(table):
    best = ecobee.score(
        table,
        {"food": "home_grown", "mobility": "walk", "fashion": "no_new_clothes", "housing": "eco_coop"},
    )
    worst = ecobee.score(
        table,
        {"food": "meat_heavy", "mobility": "car", "fashion": "fast_fashion", "housing": "detached_house"},
    )
    assert best["composite"] == 100.0
    assert worst["composite"] == 0.0


def test_unknown_option_raises(table):
    with pytest.raises(ecobee.EcoBeeError) as info:
        ecobee.score(table, {"food": "caviar"})
    assert info.value.code == "unknown_option"


def test_validate_factors():
    assert ecobee.validate_factors(DATA / "f0") == []
    findings = ecobee.validate_factors(DATA / "bad_negative")
    assert any("factors_food.csv:3" in f for f in findings)


def test_recommend_fallback_and_embedding(tmp_path):
    scores = {code: 90.0 for code in ecobee.boundary_codes()}
    scores["freshwater_use"] = 10.0
    fallback = ecobee.recommend(DATA / "actions.csv", scores, context=["main_campus"], n=3)
    assert [r["action_id"] for r in fallback][0] == "swap_shop"
    model = tmp_path / "model.txt"
    version = ecobee.train_model(DATA / "actions.csv", seed=42, out=model)
    assert version == ecobee.train_model(DATA / "actions.csv", seed=42)
    ranked = ecobee.recommend(DATA / "actions.csv", scores, model_file=model, n=3)
    assert len(ranked) == 3
    for rec in ranked:
        assert set(rec["target_boundaries"]) <= {"freshwater_use", "climate_change", "biosphere_integrity"}


def test_leaderboard(tmp_path):
    board = ecobee.Leaderboard(tmp_path / "lb.sqlite")
    for i, composite in enumerate([62.0, 50.0, 44.0, 36.0, 55.0]):
        boundaries = {code: composite for code in ecobee.boundary_codes()}
        board.submit(f"student_{i}", "main_campus", composite, boundaries)
    assert len(board) == 5
    summary = board.summary()
    assert summary["n"] == 5
    assert summary["top_composite"] == 62.0
    assert summary["mean_composite"] == pytest.approx(49.4)
    assert "mean_composite" not in board.summary(k_min=6)
    assert board.top(2) == [("student_0", 62.0), ("student_4", 55.0)]


def test_service_round_trip():
    service = ecobee.Service(DATA / "ecobee.conf")
    status, health = service.request("GET", "/api/health")
    assert status == 200 and health["ok"] is True
    image = base64.b64encode((DATA / "images" / "image_a.jpg").read_bytes()).decode()
    status, vision = service.request("POST", "/api/vision", {"image_base64": image})
    assert status == 200
    assert vision["labelled_items"][0]["option_key"] == "beef_burger"
    status, err = service.request("POST", "/api/score", {"pseudonym": "x", "quiz": {"food": "caviar"}})
    assert status == 400 and err["code"] == "unknown_option"
