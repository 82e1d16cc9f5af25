import math

import numpy as np
import pytest

from matic.agents import (
    BanditConfig,
    CharacterConfig,
    ReceiverConfig,
    bandit_convergence,
    ber_point,
    bpsk_config,
    build_bandit,
    build_receiver,
    decode,
    fan_out,
    garage_from_dict,
    garage_to_dict,
    job_seeds,
    parse_config,
    pose_transitions,
    random_message,
    run_bandit,
    run_character,
    theoretical_ber,
    transmit,
    tree_outcomes,
)
from matic.cognet import detect_circularity
from matic.errors import ConfigError, DataError
from matic.events.io import read_json
from matic.orchestrator.tasks import condition_rows


def _three_symbol_receiver(noise_var=0.0):
    templates = np.eye(3, 4) * 2.0
    return ReceiverConfig(
        alphabet=["a", "b", "c"],
        templates=templates.tolist(),
        transitions={"a": ["b"], "b": ["c"], "c": ["a", "b"]},
        noise_var=noise_var,
        samples_per_symbol=4,
    )


def test_receiver_network_is_acyclic():
    net = build_receiver(_three_symbol_receiver())
    assert detect_circularity(net).acyclic


def test_noiseless_bpsk_is_bit_exact():
    cfg = bpsk_config(8)
    rng = np.random.default_rng(0)
    bits = random_message(cfg, 2000, rng)
    decoded = decode(build_receiver(cfg), transmit(cfg, bits, rng), seed=0)
    assert np.array_equal(decoded, bits)


def test_noiseless_constrained_message_is_exact():
    cfg = _three_symbol_receiver()
    rng = np.random.default_rng(1)
    message = random_message(cfg, 500, rng)
    assert all(cfg.allows(a, b) for a, b in zip(message, message[1:]))
    assert np.array_equal(decode(build_receiver(cfg), transmit(cfg, message, rng)), message)


def test_forbidden_successions_are_never_decoded():
    cfg = _three_symbol_receiver(noise_var=1.0)
    rng = np.random.default_rng(2)
    message = random_message(cfg, 1000, rng)
    decoded = decode(build_receiver(cfg), transmit(cfg, message, rng))
    assert all(cfg.allows(a, b) for a, b in zip(decoded, decoded[1:]))


def test_decode_rejects_wrong_sample_width():
    with pytest.raises(DataError):
        decode(build_receiver(bpsk_config(8)), np.zeros((3, 5)))


def test_theoretical_ber_values():
    assert theoretical_ber(0.0) == pytest.approx(0.5 * math.erfc(1.0))
    assert theoretical_ber(4.0) == pytest.approx(0.0125, abs=1e-4)


@pytest.mark.slow
@pytest.mark.parametrize("ebn0_db", [0.0, 4.0, 8.0])
def test_ber_tracks_theory_within_three_sigma(ebn0_db):
    point = ber_point(ebn0_db, 100_000, seed=7)
    assert point.errors > 0
    assert point.within(3.0)


def test_receiver_config_validation():
    with pytest.raises(ConfigError):
        parse_config(ReceiverConfig, {"alphabet": ["a"], "templates": [[1.0]], "transitions": {}})


@pytest.fixture
def character(scenarios_dir):
    scenario = read_json(scenarios_dir / "character.json")
    cfg = parse_config(CharacterConfig, scenario["config"])
    return cfg, condition_rows(cfg, scenario["schedule"], scenario["ticks"])


def test_character_only_takes_allowed_transitions(character):
    cfg, rows = character
    for seed in range(5):
        frames = run_character(cfg, rows, seed)
        assert all(cfg.allows(a, b) for a, b in pose_transitions(frames))


def test_character_holds_each_pose_for_its_minimum(character):
    cfg, rows = character
    frames = run_character(cfg, rows, seed=3)
    minimum = {p.name: p.min_ticks for p in cfg.poses}
    runs, current, length = [], frames[0].pose, 0
    for frame in frames:
        if frame.pose == current:
            length += 1
        else:
            runs.append((current, length))
            current, length = frame.pose, 1
    assert all(length >= minimum[pose] for pose, length in runs)


def test_character_reacts_to_conditions(character):
    cfg, rows = character
    frames = run_character(cfg, rows, seed=0)
    assert {f.pose for f in frames[25:35]} == {"turn"}
    assert {f.pose for f in frames[40:50]} == {"flee"}
    assert "walk" in {f.pose for f in frames[50:]}


def test_character_pose_is_a_unit_quaternion_and_reproducible(character):
    cfg, rows = character
    frames = run_character(cfg, rows, seed=9)
    for f in frames:
        assert sum(c * c for c in f.rotation) == pytest.approx(1.0)
    assert [f.to_row() for f in frames] == [f.to_row() for f in run_character(cfg, rows, seed=9)]


def test_random_select_outcomes_carry_weights(character):
    cfg, _ = character
    outcomes = tree_outcomes(cfg.tree, {"enemy_near": False, "low_health": False})
    assert sorted((pose, prob) for prob, ok, pose in outcomes if ok) == [("idle", 0.25), ("walk", 0.75)]


def test_schedule_with_unknown_condition_fails(character):
    cfg, _ = character
    with pytest.raises(ConfigError):
        condition_rows(cfg, [{"start": 0, "conditions": {"hungry": 1}}], 3)


def _bandit(**overrides):
    base = {"payouts": [0.2, 1.0], "learning_rate": 0.1, "epsilon": 0.1, "training_episodes": 500}
    return BanditConfig(**{**base, **overrides})


def test_bandit_converges_to_best_arm():
    convergence = bandit_convergence(_bandit(), seeds=20, seed=0, max_workers=2)
    assert convergence.best_arm == 1
    assert convergence.rate >= 0.95


@pytest.mark.slow
def test_bandit_finds_the_only_paying_arm_across_seeds():
    convergence = bandit_convergence(_bandit(payouts=[1.0, 0.0]), seeds=100, seed=0, max_workers=4)
    assert convergence.best_arm == 0
    assert convergence.rate >= 0.95


def test_closed_learning_line_freezes_the_policy():
    cfg = _bandit(training_episodes=0, episodes=200)
    run = run_bandit(cfg, seed=4)
    assert run.table == build_bandit(cfg, 4).transfer.serialize()
    assert run.arms.size == 200


def test_policy_stops_changing_after_training():
    cfg = _bandit(training_episodes=100, episodes=300)
    trained = run_bandit(cfg, seed=5, episodes=100)
    full = run_bandit(cfg, seed=5)
    assert full.table == trained.table
    assert np.array_equal(full.arms[:100], trained.arms)


def test_garage_document_matches_shipped_scenario(scenarios_dir):
    assert garage_to_dict() == read_json(scenarios_dir / "garage.json")
    trace, corpus, query = garage_from_dict(garage_to_dict())
    assert query == "e3" and len(corpus) == 19


def test_fan_out_is_deterministic_and_ordered():
    first = fan_out(lambda p, s: (p, s), list(range(8)), seed=11, max_workers=4)
    second = fan_out(lambda p, s: (p, s), list(range(8)), seed=11, max_workers=1)
    assert first == second
    assert [job for job, _ in first] == list(range(8))
    assert len(set(job_seeds(11, 8))) == 8
