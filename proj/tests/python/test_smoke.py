# Copyright 2026 The qttt Authors
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

import json
import math

import pytest

import qttt


def test_board_helpers():
    b = qttt.empty_board()
    assert b == "....." "....O"
    assert qttt.legal_moves(b) == list(range(9))
    assert qttt.minimax_value(b) == 0
    b = qttt.apply_move(b, 4)
    assert b[4] == "O" and b[9] == "X"
    assert qttt.outcome("OOOXX....X") == "o_wins"


def test_engine_census_and_counts():
    keys = qttt.engine_keys()
    assert len(keys) == 54
    e = qttt.Engine("ccnn-stronger")
    assert e.classical_params == 10057 and e.quantum_params == 0
    assert e.circuit_metrics() is None
    h = qttt.Engine("hnn-est-8-hee-realamplitudes")
    assert h.circuit_metrics()["cx_count"] == 14
    assert h.quantum_params == 16


def test_evaluate_and_train_roundtrip(tmp_path):
    e = qttt.Engine("ccnn-weaker", seed=3)
    q = e.evaluate(qttt.empty_board())
    assert len(q) == 9 and all(-1.0 <= v <= 1.0 for v in q)
    assert e.train(50, seed=1) == 50
    path = tmp_path / "w.json"
    e.save(path)
    back = qttt.load_engine(path)
    assert back.evaluate("O...X...." "O") == e.evaluate("O...X...." "O")
    assert 0.0 <= qttt.non_loss_rate_vs_random(back, games=50, seed=2) <= 1.0


def test_elo_and_noise():
    assert qttt.expected_score(1500, 1570) == pytest.approx(1 / (10 ** (70 / 400) + 1), abs=1e-12)
    assert qttt.update_rating(1500, 60, 40, 0, 0.5) == 1820
    assert qttt.noise_sigma(100) == 99
    assert qttt.noise_sigma(10) == pytest.approx(10 ** 0.2 - 1)


def test_errors_surface_as_python_exceptions(tmp_path):
    with pytest.raises(qttt.QtttError):
        qttt.Engine("not-an-engine")
    with pytest.raises(qttt.QtttError):
        qttt.load_engine(tmp_path / "missing.json")
    with pytest.raises(ValueError):
        qttt.legal_moves("bad")


def test_run_config(tmp_path):
    cfg = {
        "command": "train",
        "engines": ["ccnn-weaker"],
        "seed": 4,
        "output_dir": str(tmp_path / "out"),
        "trainer": {"episodes": 20},
    }
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    artifacts = qttt.run_config(path)
    assert artifacts and all(isinstance(a, str) for a in artifacts)
