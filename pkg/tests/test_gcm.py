import numpy as np
import pytest

from matic.errors import ArityMismatch, ConfigError, LengthMismatch
from matic.gcm import (
    BinaryRuleTable,
    Frozen,
    GatedRewardUpdate,
    Gcm,
    MatchedFilterBank,
    Ports,
    RuleEntry,
    Selection,
    Signal,
    SignalBundle,
    TabulatedNonlinear,
    and_table,
    gcm_from_dict,
    gcm_to_dict,
    identity_table,
    not_table,
    run_gcm,
    simulate,
    step_fast,
    transfer_from_dict,
)


def _rows(*rows):
    return Signal(np.array(rows, dtype=float))


def test_and_table_truth_table():
    gcm = Gcm(and_table(), ports=Ports(n=2))
    out = run_gcm(gcm, SignalBundle(n=_rows([0, 0], [0, 1], [1, 0], [1, 1])), 4)
    assert out.values[:, 0].tolist() == [0.0, 0.0, 0.0, 1.0]


def test_inhibitory_line_vetoes_to_baseline():
    gcm = Gcm(not_table(), ports=Ports(p=1, n=1))
    out = run_gcm(gcm, SignalBundle(p=_rows([0], [1], [0.2]), n=_rows([0], [0], [0])), 3)
    assert out.values[:, 0].tolist() == [1.0, 0.0, 0.0]


def test_missing_ports_read_as_zero():
    gcm = Gcm(not_table(), ports=Ports(n=1))
    assert run_gcm(gcm, SignalBundle(), 2).values[:, 0].tolist() == [1.0, 1.0]


def test_rule_table_must_be_total():
    with pytest.raises(ConfigError):
        BinaryRuleTable(1, (RuleEntry((0,), (1.0,)),))


def test_port_count_must_match_arity():
    with pytest.raises(ConfigError):
        Gcm(and_table(), ports=Ports(n=3))


def test_wrong_input_width_is_an_arity_mismatch():
    gcm = Gcm(identity_table(), ports=Ports(n=1))
    with pytest.raises(ArityMismatch):
        step_fast(gcm, np.zeros(0), np.zeros(2), gcm.rng())
    with pytest.raises(ArityMismatch):
        run_gcm(gcm, SignalBundle(n=_rows([0, 1])), 1)


def test_short_signal_is_a_length_mismatch():
    gcm = Gcm(identity_table(), ports=Ports(n=1))
    with pytest.raises(LengthMismatch):
        run_gcm(gcm, SignalBundle(n=_rows([1], [0])), 3)


def test_zero_ticks_gives_empty_output():
    gcm = Gcm(identity_table(), ports=Ports(n=1))
    assert run_gcm(gcm, SignalBundle(), 0).ticks == 0


def test_same_seed_reproduces_noisy_output():
    gcm = Gcm(identity_table(), ports=Ports(n=1), noise_var=0.5, rng_seed=11)
    inputs = SignalBundle(n=Signal(np.ones((50, 1))))
    assert run_gcm(gcm, inputs, 50) == run_gcm(gcm, inputs, 50)
    other = Gcm(identity_table(), ports=Ports(n=1), noise_var=0.5, rng_seed=12)
    assert run_gcm(other, inputs, 50) != run_gcm(gcm, inputs, 50)


def test_stochastic_selection_follows_weights():
    entries = (RuleEntry((), (0.0,), 1.0), RuleEntry((), (1.0,), 3.0))
    gcm = Gcm(BinaryRuleTable(0, entries, Selection.STOCHASTIC), rng_seed=3)
    out = run_gcm(gcm, SignalBundle(), 4000)
    assert out.values.mean() == pytest.approx(0.75, abs=0.03)


def test_greedy_selection_prefers_first_on_ties():
    entries = (RuleEntry((), (5.0,), 1.0), RuleEntry((), (7.0,), 1.0))
    table = BinaryRuleTable(0, entries)
    out, fired = table.evaluate(np.zeros(0), np.random.default_rng(0))
    assert fired == 0 and out.tolist() == [5.0]


def test_matched_filter_argmax_labels():
    bank = MatchedFilterBank(np.array([[1.0, 1.0], [1.0, -1.0]]), (10.0, 20.0), "argmax")
    rng = np.random.default_rng(0)
    assert bank.evaluate(np.array([0.9, -1.1]), rng)[0].tolist() == [20.0]
    assert bank.evaluate(np.array([1.0, 1.0]), rng)[0].tolist() == [10.0]
    response = MatchedFilterBank(np.array([[1.0, 1.0], [1.0, -1.0]]))
    assert response.evaluate(np.array([2.0, 0.0]), rng)[0].tolist() == [2.0]


def test_matched_filter_peaks_on_its_own_template():
    rng = np.random.default_rng(4)
    u = rng.normal(size=8)
    bank = MatchedFilterBank(u)
    peak = float(bank.evaluate(u, rng)[0][0])
    assert peak == pytest.approx(float(u @ u))
    for _ in range(1000):
        x = rng.normal(size=8)
        x *= np.linalg.norm(u) / np.linalg.norm(x)
        assert float(bank.evaluate(x, rng)[0][0]) <= peak + 1e-9
    templates = rng.normal(size=(4, 8))
    templates /= np.linalg.norm(templates, axis=1, keepdims=True)
    labelled = MatchedFilterBank(templates, (0.0, 1.0, 2.0, 3.0), "argmax")
    for i, row in enumerate(templates):
        assert labelled.evaluate(row, rng)[0].tolist() == [float(i)]


def test_tabulated_nonlinear_interpolates_and_clamps():
    curve = TabulatedNonlinear(np.array([1.0, 1.0]), np.array([0.0, 2.0]), np.array([0.0, 1.0]))
    rng = np.random.default_rng(0)
    assert curve.evaluate(np.array([0.5, 0.5]), rng)[0][0] == pytest.approx(0.5)
    assert curve.evaluate(np.array([5.0, 5.0]), rng)[0][0] == pytest.approx(1.0)
    assert curve.evaluate(np.array([-5.0, 0.0]), rng)[0][0] == pytest.approx(0.0)


def test_tabulated_grid_must_increase():
    with pytest.raises(ConfigError):
        TabulatedNonlinear(np.array([1.0]), np.array([1.0, 1.0]), np.array([0.0, 1.0]))


def _learner(rate=0.5):
    entries = (RuleEntry((), (0.0,), 0.0), RuleEntry((), (1.0,), 0.0))
    table = BinaryRuleTable(0, entries, Selection.GREEDY)
    return Gcm(table, GatedRewardUpdate(rate), Ports(r=1, l=1))


def test_reward_update_moves_fired_entry_weight():
    gcm = _learner()
    inputs = SignalBundle(r=Signal(np.ones((2, 1))), l=Signal(np.ones((2, 1))))
    _, final = simulate(gcm, inputs, 2, slow_period=1)
    assert final.transfer.weights.tolist() == [0.75, 0.0]


def test_closed_learning_gate_freezes_the_table():
    gcm = _learner()
    inputs = SignalBundle(r=Signal(np.ones((20, 1))), l=Signal(np.zeros((20, 1))))
    _, final = simulate(gcm, inputs, 20, slow_period=1)
    assert final.transfer.serialize() == gcm.transfer.serialize()


def test_slow_pathway_runs_every_k_ticks():
    gcm = _learner(rate=1.0)
    inputs = SignalBundle(r=Signal(np.full((9, 1), 2.0)), l=Signal(np.ones((9, 1))))
    _, final = simulate(gcm, inputs, 9, slow_period=10)
    assert final.transfer.weights.tolist() == [0.0, 0.0]
    _, final = simulate(gcm, SignalBundle(r=Signal(np.full((10, 1), 2.0)), l=Signal(np.ones((10, 1)))), 10, 10)
    assert final.transfer.weights.tolist() == [2.0, 0.0]


def test_frozen_module_never_changes():
    gcm = Gcm(and_table(), Frozen(), Ports(n=2))
    _, final = simulate(gcm, SignalBundle(n=Signal(np.ones((30, 2)))), 30, slow_period=1)
    assert final.transfer is gcm.transfer


def test_reward_ports_must_fit_update_kind():
    entries = (RuleEntry((), (0.0,), 0.0),)
    with pytest.raises(ConfigError):
        Gcm(BinaryRuleTable(0, entries), GatedRewardUpdate(0.1), Ports(r=2, l=1))
    with pytest.raises(ConfigError):
        GatedRewardUpdate(0.0)


def test_config_round_trip_preserves_transfer():
    config = {
        "kind": "BinaryRuleTable",
        "parameters": {"rules": {"0": [1], "1": [0]}},
        "ports": {"p": 1},
        "seed": 4,
    }
    gcm = gcm_from_dict(config)
    assert gcm.ports == Ports(p=1, n=1)
    again = gcm_from_dict(gcm_to_dict(gcm))
    assert again.transfer.serialize() == gcm.transfer.serialize()
    assert again.rng_seed == 4


def test_unknown_transfer_kind_is_a_config_error():
    with pytest.raises(ConfigError):
        transfer_from_dict({"kind": "Perceptron"})
    with pytest.raises(ConfigError):
        gcm_from_dict({"parameters": {}})
