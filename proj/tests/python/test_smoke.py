# Copyright 2026 The mtqc Authors
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

import math

import numpy as np
import pytest

import mtqc


def test_catalog_shape():
    ids = mtqc.system_ids("all")
    assert len(ids) == 51
    assert mtqc.system_ids("table1") == ["SQ3", "SQ4", "TQ25", "TQ26", "ThQ1"]
    sq2 = mtqc.system("SQ2")
    assert sq2["n_qubits"] == 1
    assert list(sq2["descriptor"]) == [1, 1, 1.0, 1, 0, 1]
    np.testing.assert_allclose(sq2["drift"], [[0, 1], [1, 0]])


def test_rabi_flip_has_unit_fidelity():
    u = np.zeros((1, 1))
    f = mtqc.transfer_fidelity("SQ2", math.pi / 2, u, mode="closed", gamma=0.0)
    assert abs(f - 1.0) < 1e-9


def test_gradient_matches_finite_difference():
    rng = np.random.default_rng(0)
    u = rng.uniform(-1, 1, size=(4, 2))
    g = mtqc.fidelity_gradient("TQ26", 2.0, u, mode="open", gamma=0.01)
    h = 1e-6
    fd = np.zeros_like(u)
    for idx in np.ndindex(u.shape):
        up, down = u.copy(), u.copy()
        up[idx] += h
        down[idx] -= h
        fd[idx] = (mtqc.transfer_fidelity("TQ26", 2.0, up, "open", 0.01)
                   - mtqc.transfer_fidelity("TQ26", 2.0, down, "open", 0.01)) / (2 * h)
    assert np.linalg.norm(g - fd) <= 1e-5 * np.linalg.norm(fd)


def test_grape_sq2():
    r = mtqc.grape("SQ2", 3.0, 10, mode="closed", restarts=2, seed=1)
    assert r["fidelity"] >= 0.999
    assert r["amplitudes"].shape == (10, 1)
    assert all(b >= a for a, b in zip(r["trace"], r["trace"][1:]))


def test_rim_zero_perturbation():
    u = np.full((3, 1), 0.3)
    nominal = mtqc.transfer_fidelity("SQ4", 2.0, u, "open", 0.01)
    value, samples = mtqc.rim("SQ4", 2.0, u, kind="combined", delta_u=0.0, delta_gamma=0.0, samples=4)
    assert len(samples) == 4
    assert abs(value - (1 - nominal)) < 1e-9


def test_environment_episode():
    env = mtqc.ControlEnv("SQ2", mode="closed")
    obs = env.reset(seed=3)
    assert len(obs) == env.observation_size == 70
    assert obs[0] == 1.0
    done, steps = False, 0
    t_raw = 2 * (math.pi / 2 - 1) / 19 - 1
    while not done:
        obs, reward, done, info = env.step([t_raw, -1.0])
        steps += 1
    assert steps == 2
    assert info["fidelity"] > 0.999
    with pytest.raises(RuntimeError):
        env.step([0.0, 0.0])


def test_reward_examples():
    assert mtqc.shaped_reward(0.5, 0.0, 0, 0.95) == 5.0
    assert abs(mtqc.shaped_reward(0.96, 0.80, 3, 0.95) - 40.97) < 1e-12


def test_unknown_system_raises():
    with pytest.raises(ValueError):
        mtqc.system("SQ99")
