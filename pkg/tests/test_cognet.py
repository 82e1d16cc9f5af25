import numpy as np
import pytest

from matic.cognet import (
    Edge,
    Network,
    PortKind,
    Predicate,
    Stimulus,
    build_selection_network,
    cardinality,
    detect_circularity,
    is_binary_agent,
    member,
    member_alpha,
    network_from_dict,
    predicate_complement,
    predicate_equiv,
    predicate_intersection,
    predicate_of,
    predicate_union,
    run_network,
    stimuli_from_dict,
    stratify_network,
)
from matic.errors import ArityMismatch, CircularSystem, ConfigError, DataError, UnknownNode
from matic.gcm import (
    BinaryRuleTable,
    GatedRewardUpdate,
    Gcm,
    Ports,
    RuleEntry,
    Signal,
    constant_table,
    identity_table,
    not_table,
)
from matic.events.io import read_json


def _relay(n: int = 3) -> Network:
    nodes = {f"g{i}": Gcm(identity_table(), ports=Ports(n=1)) for i in range(n)}
    edges = [Edge("x", "g0", PortKind.EXCITATORY)]
    edges += [Edge(f"g{i}", f"g{i + 1}", PortKind.EXCITATORY) for i in range(n - 1)]
    return Network(nodes, edges, {"x": 1})


def test_chain_is_acyclic_with_increasing_levels():
    net = _relay(3)
    verdict = detect_circularity(net)
    assert verdict.acyclic
    assert verdict.order == ("g0", "g1", "g2")
    assert stratify_network(net) == {"g0": 1, "g1": 2, "g2": 3}


def test_fast_loop_is_circular_with_closed_witness():
    nodes = {"a": Gcm(identity_table(), ports=Ports(n=1)), "b": Gcm(not_table(), ports=Ports(n=1))}
    net = Network(nodes, [Edge("a", "b", PortKind.EXCITATORY), Edge("b", "a", PortKind.EXCITATORY)])
    verdict = detect_circularity(net)
    assert not verdict.acyclic
    assert verdict.cycle[0] == verdict.cycle[-1]
    assert set(verdict.cycle) == {"a", "b"}
    with pytest.raises(CircularSystem):
        stratify_network(net)
    with pytest.raises(CircularSystem):
        run_network(net, {}, 1)


def test_self_inhibition_is_circular():
    net = Network({"a": Gcm(identity_table(), ports=Ports(p=1, n=1))}, [Edge("a", "a", PortKind.INHIBITORY)])
    assert detect_circularity(net).cycle == ("a", "a")


def test_reward_feedback_does_not_count_as_a_cycle():
    table = BinaryRuleTable(0, (RuleEntry((), (1.0,), 0.0),))
    learner = Gcm(table, GatedRewardUpdate(0.5), Ports(r=1, l=1))
    critic = Gcm(identity_table(), ports=Ports(n=1))
    net = Network(
        {"learner": learner, "critic": critic},
        [
            Edge("learner", "critic", PortKind.EXCITATORY),
            Edge("critic", "learner", PortKind.REWARD),
            Edge("gate", "learner", PortKind.LEARNING),
        ],
        {"gate": 1},
    )
    assert detect_circularity(net).acyclic
    run = run_network(net, {"gate": Signal(np.ones((4, 1)))}, 4, slow_period=1)
    assert run.nodes["learner"].transfer.weights[0] == pytest.approx(1 - 0.5**4)


def test_relay_runs_tick_by_tick():
    run = run_network(_relay(3), {"x": Signal(np.array([[0.0], [1.0], [1.0]]))}, 3)
    assert run.outputs["g2"].values[:, 0].tolist() == [0.0, 1.0, 1.0]


def test_port_width_mismatch_is_rejected():
    nodes = {"a": Gcm(identity_table(), ports=Ports(n=1))}
    with pytest.raises(ArityMismatch):
        Network(nodes, [Edge("x", "a", PortKind.EXCITATORY)], {"x": 2})


def test_unknown_nodes_and_missing_inputs():
    nodes = {"a": Gcm(identity_table(), ports=Ports(n=1))}
    with pytest.raises(UnknownNode):
        Network(nodes, [Edge("ghost", "a", PortKind.EXCITATORY)])
    with pytest.raises(ConfigError):
        Network(nodes, [Edge("a", "a", PortKind.REWARD)])
    net = _relay(1)
    with pytest.raises(DataError):
        run_network(net, {}, 1)


def _bit_stimuli():
    return [
        Stimulus("zero", {"stimulus": Signal(np.zeros((4, 1)))}),
        Stimulus("one", {"stimulus": Signal(np.ones((4, 1)))}),
        Stimulus("half", {"stimulus": Signal(np.array([[0.0], [1.0], [0.0], [1.0]]))}),
    ]


def test_predicate_degrees_and_crisp_mode():
    net = Network({"id": Gcm(identity_table(), ports=Ports(n=1))}, [Edge("stimulus", "id", PortKind.EXCITATORY)],
                  {"stimulus": 1})
    fuzzy = predicate_of(net, "id", _bit_stimuli())
    assert fuzzy.extension == {"zero": 0.0, "one": 1.0, "half": 0.5}
    assert fuzzy.level == 1
    crisp = predicate_of(net, "id", _bit_stimuli(), threshold=0.6, crisp=True)
    assert crisp.is_crisp and crisp.degree("half") == 0.0
    with pytest.raises(UnknownNode):
        predicate_of(net, "nope", _bit_stimuli())


def test_fuzzy_set_operations():
    p = Predicate("P", {"a": 0.2, "b": 1.0})
    q = Predicate("Q", {"a": 0.7, "c": 0.4})
    assert predicate_union(p, q).extension == {"a": 0.7, "b": 1.0, "c": 0.4}
    assert predicate_intersection(p, q).extension == {"a": 0.2, "b": 0.0, "c": 0.0}
    assert predicate_complement(p).degree("a") == pytest.approx(0.8)
    assert cardinality(p) == pytest.approx(1.2)
    assert member("b", p) and not member("a", p)
    assert member_alpha("a", p, 0.2)
    assert predicate_equiv(p, Predicate("P2", {"a": 0.2, "b": 1.0, "z": 0.0}))


def test_degrees_must_lie_in_unit_interval():
    with pytest.raises(DataError):
        Predicate("P", {"a": 1.5})


@pytest.mark.parametrize("mode", ["gate", "conjunction"])
def test_selection_network_computes_intersection(mode):
    first = Gcm(BinaryRuleTable(2, tuple(RuleEntry(b, (float(b[0]),)) for b in ((0, 0), (0, 1), (1, 0), (1, 1)))),
                ports=Ports(n=2))
    second = Gcm(BinaryRuleTable(2, tuple(RuleEntry(b, (float(b[1]),)) for b in ((0, 0), (0, 1), (1, 0), (1, 1)))),
                 ports=Ports(n=2))
    net, out = build_selection_network(first, second, mode)
    assert detect_circularity(net).acyclic
    assert is_binary_agent(net)
    stimuli = [
        Stimulus(f"s{a}{b}", {"stimulus": Signal(np.array([[float(a), float(b)]]))})
        for a in (0, 1)
        for b in (0, 1)
    ]
    selected = predicate_of(net, out, stimuli)
    assert selected.extension == {"s00": 0.0, "s01": 0.0, "s10": 0.0, "s11": 1.0}


def test_shipped_network_file_loads(scenarios_dir):
    net = network_from_dict(read_json(scenarios_dir / "nand_network.json"))
    assert stratify_network(net) == {"and": 1, "not": 2}
    assert is_binary_agent(net)
    run = run_network(net, {"x": Signal(np.array([[0.0, 0.0], [1.0, 1.0]]))}, 2)
    assert run.outputs["not"].values[:, 0].tolist() == [1.0, 0.0]


def test_stimuli_file_reads_a_nand_predicate(scenarios_dir):
    net = network_from_dict(read_json(scenarios_dir / "nand_network.json"))
    node, crisp, stimuli = stimuli_from_dict(read_json(scenarios_dir / "nand_stimuli.json"), net)
    assert (node, crisp) == ("not", True)
    fuzzy = predicate_of(net, node, stimuli)
    assert fuzzy.extension == {"both": 0.0, "left": 1.0, "none": 1.0, "mixed": 0.25}
    assert fuzzy.level == 2
    assert predicate_of(net, node, stimuli, threshold=0.2, crisp=True).degree("mixed") == 1.0


def test_stimuli_must_feed_known_inputs(scenarios_dir):
    net = network_from_dict(read_json(scenarios_dir / "nand_network.json"))
    with pytest.raises(ConfigError):
        stimuli_from_dict({"node": "not", "stimuli": [{"event": "e", "inputs": {"y": [[1.0]]}}]}, net)
    with pytest.raises(ConfigError):
        stimuli_from_dict({"stimuli": []}, net)


def _random_inhibition_network(rng, size, density):
    pairs = [(a, b) for a in range(size) for b in range(size) if rng.random() < density]
    indegree = {b: sum(1 for _, t in pairs if t == b) for b in range(size)}
    nodes = {f"g{i}": Gcm(constant_table([1.0]), ports=Ports(p=indegree[i])) for i in range(size)}
    edges = [Edge(f"g{a}", f"g{b}", PortKind.INHIBITORY) for a, b in pairs]
    return Network(nodes, edges), pairs


def _has_cycle(size, pairs):
    succ = {i: [b for a, b in pairs if a == i] for i in range(size)}
    for start in range(size):
        seen, stack = set(), list(succ[start])
        while stack:
            node = stack.pop()
            if node == start:
                return True
            if node not in seen:
                seen.add(node)
                stack.extend(succ[node])
    return False


def test_circularity_matches_reachability_on_random_networks():
    rng = np.random.default_rng(0)
    verdicts = set()
    for _ in range(500):
        size = int(rng.integers(1, 51))
        net, pairs = _random_inhibition_network(rng, size, float(rng.uniform(0.0, 3.0 / size)))
        verdict = detect_circularity(net)
        assert verdict.acyclic is not _has_cycle(size, pairs)
        verdicts.add(verdict.acyclic)
        if verdict.acyclic:
            levels = stratify_network(net)
            assert all(levels[e.source] < levels[e.target] for e in net.edges)
        else:
            cycle = verdict.cycle
            assert cycle[0] == cycle[-1]
            assert all((int(a[1:]), int(b[1:])) in pairs for a, b in zip(cycle, cycle[1:]))
            with pytest.raises(CircularSystem):
                stratify_network(net)
    assert verdicts == {True, False}
