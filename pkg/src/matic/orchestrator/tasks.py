"""
Subcommand bodies for MaTIC runs.

Each task reads its inputs from a RunContext and returns a TaskResult: the
`result` block of summary.json plus the rows of metrics.csv. CSV headers are
fixed per task and listed in TASKS.
"""

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from matic.agents import (
    BanditConfig,
    CharacterConfig,
    ReceiverConfig,
    bandit_convergence,
    ber_sweep,
    bpsk_config,
    build_receiver,
    decode,
    garage_from_dict,
    parse_config,
    pose_transitions,
    random_message,
    run_bandit,
    run_character,
    transmit,
)
from matic.cognet import (
    cardinality,
    detect_circularity,
    is_binary_agent,
    network_from_dict,
    predicate_of,
    stimuli_from_dict,
    stratify_network,
)
from matic.config import Settings, resolve_path
from matic.errors import ConfigError, DataError, IllegalTransfer, NoCandidates, PatternMismatch
from matic.events import WindowSelector, selector_from_spec, validate_chain
from matic.events.io import corpus_from_list, read_json, trace_from_dict
from matic.gcm import SignalBundle, gcm_from_dict, inputs_from_dict, simulate
from matic.implicature import ConditionalModel, fit_or_load, infer_cause, infer_cause_bank, rank_candidates
from matic.infometrics import (
    entropy_profile,
    generate_corpus,
    regime_possibility,
    source_spec_from_dict,
    stationarity_test,
    window_distributions,
)
from matic.logic import (
    FormulaDocument,
    LevelAssignment,
    apply_idealisation,
    apply_transference,
    check_comprehension,
    comprehensions,
    is_internal,
    parse_document,
    reverse_transference,
    stratify_formula,
)

from .manifest import RunManifest


@dataclass
class RunContext:
    manifest: RunManifest
    settings: Settings

    @property
    def seed(self) -> int:
        return self.manifest.seed

    def param(self, name: str, default: Any = None) -> Any:
        value = self.manifest.params.get(name)
        return default if value is None else value

    def has_input(self, name: str) -> bool:
        return name in self.manifest.inputs

    def input_path(self, name: str) -> Path:
        if name not in self.manifest.inputs:
            raise ConfigError(f"The {self.manifest.command} command needs a {name} file", input=name)
        return Path(self.manifest.inputs[name])

    def read(self, name: str) -> Any:
        return read_json(self.input_path(name))

    def read_text(self, name: str) -> str:
        return self.input_path(name).read_text(encoding="utf-8")

    @property
    def max_context(self) -> int:
        return int(self.param("k", self.settings.implicature.max_context_size))

    @property
    def max_workers(self) -> int:
        return self.settings.runs.max_workers

    def scenario(self, name: str) -> Any:
        """The scenario override if one was given, else the shipped scenario."""
        if self.has_input("scenario"):
            return self.read("scenario")
        return read_json(resolve_path(self.settings.runs.scenarios_dir) / f"{name}.json")


@dataclass
class TaskResult:
    result: Dict[str, Any]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    # extra JSON documents written next to summary.json
    artifacts: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Task:
    name: str
    header: Tuple[str, ...]
    fn: Callable[[RunContext], TaskResult]


def mix_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(list(parts)).generate_state(1, dtype=np.uint64)[0])


def _model(ctx: RunContext, fallback: Optional[List[Any]] = None) -> ConditionalModel:
    smoothing = float(ctx.param("smoothing", ctx.settings.implicature.smoothing))
    horizon = ctx.param("horizon")
    if ctx.has_input("model"):
        return fit_or_load(ctx.read("model"), ctx.max_context, smoothing, horizon)
    if ctx.has_input("corpus"):
        return fit_or_load(ctx.read("corpus"), ctx.max_context, smoothing, horizon)
    if fallback is not None:
        return ConditionalModel.fit(fallback, ctx.max_context, smoothing, horizon)
    raise ConfigError(f"The {ctx.manifest.command} command needs a corpus or model file")


def _ranked_rows(ranked) -> List[Dict[str, Any]]:
    return [
        {"rank": i + 1, "cause_label": pair.cause.label, **pair.to_row()}
        for i, pair in enumerate(ranked)
    ]


def _pair_result(pair, y) -> Dict[str, Any]:
    return {
        "event": y.id,
        "cause": pair.cause.id,
        "cause_label": pair.cause.label,
        "context": list(pair.context_ids),
        "surprisal_bits": pair.surprisal,
    }


# Events

def trace_validate(ctx: RunContext) -> TaskResult:
    trace = trace_from_dict(ctx.read("trace"))
    result: Dict[str, Any] = {
        "valid": True,
        "events": len(trace),
        "alphabet": sorted(trace.alphabet),
        "end_time": trace.end_time,
    }
    chain_ids = ctx.param("chain")
    if chain_ids:
        verdict = validate_chain([trace.get(i) for i in chain_ids])
        result["chain"] = {"ids": list(chain_ids), "status": verdict.status.value, "index": verdict.index}
    rows = [
        {"event_id": e.id, "t_start": e.t_start, "t_end": e.t_end, "label": e.label, "agent": e.agent or ""}
        for e in trace.events
    ]
    return TaskResult(result, rows)


# GCM and networks

def gcm_run(ctx: RunContext) -> TaskResult:
    document = ctx.read("gcm")
    if not isinstance(document, dict):
        raise ConfigError("A GCM file must hold a JSON object")
    config = document.get("gcm", document)
    gcm = gcm_from_dict(config)
    gcm = dataclasses.replace(gcm, rng_seed=mix_seed(ctx.seed, gcm.rng_seed))
    raw_inputs = ctx.read("signals") if ctx.has_input("signals") else document.get("inputs", {})
    bundle = inputs_from_dict(raw_inputs, gcm.ports) if raw_inputs else SignalBundle()
    lengths = [s.ticks for s in (bundle.p, bundle.n, bundle.r, bundle.l) if s is not None]
    ticks = ctx.param("ticks", document.get("ticks"))
    if ticks is None:
        if not lengths:
            raise ConfigError("gcm run needs --ticks when no input signal is given")
        ticks = min(lengths)
    slow_period = int(ctx.param("slow_period", ctx.settings.gcm.slow_period))
    signal, final = simulate(gcm, bundle, int(ticks), slow_period)
    rows = [
        {"tick": t, "line": j, "value": float(v)}
        for t, vector in enumerate(signal.values)
        for j, v in enumerate(vector)
    ]
    result = {
        "ticks": int(ticks),
        "slow_period": slow_period,
        "output_dim": signal.dim,
        "mean_output": signal.mean().tolist(),
        "transfer": final.transfer.to_dict(),
        "transfer_changed": final.transfer.serialize() != gcm.transfer.serialize(),
    }
    return TaskResult(result, rows)


def net_check(ctx: RunContext) -> TaskResult:
    net = network_from_dict(ctx.read("network"))
    verdict = detect_circularity(net)
    levels = stratify_network(net) if verdict.acyclic else {}
    rows = [
        {"node": node_id, "kind": gcm.transfer.kind.value, "level": levels.get(node_id, "")}
        for node_id, gcm in net.nodes.items()
    ]
    result = {
        "verdict": "Acyclic" if verdict.acyclic else "Circular",
        "order": list(verdict.order),
        "cycle": list(verdict.cycle),
        "binary_agent": is_binary_agent(net),
        "nodes": len(net.nodes),
        "edges": len(net.edges),
    }
    if ctx.has_input("stimuli"):
        node, crisp, stimuli = stimuli_from_dict(ctx.read("stimuli"), net)
        threshold = float(ctx.param("threshold", ctx.settings.cognet.predicate_threshold))
        predicate = predicate_of(net, node, stimuli, threshold=threshold, crisp=crisp, seed=ctx.seed)
        result["predicate"] = {
            "node": predicate.id,
            "level": predicate.level,
            "crisp": crisp,
            "threshold": threshold,
            "extension": predicate.extension,
            "cardinality": cardinality(predicate),
        }
    return TaskResult(result, rows)


# Implicatures and information metrics

def infer(ctx: RunContext) -> TaskResult:
    trace = trace_from_dict(ctx.read("trace"))
    model = _model(ctx)
    event_id = ctx.param("event")
    if event_id is None:
        if not trace.events:
            raise DataError("The trace has no events")
        event_id = trace.events[-1].id
    y = trace.get(event_id)
    k = ctx.max_context
    winner = infer_cause(model, trace, y, k)
    ranked = rank_candidates(model, trace, y, k)
    result = _pair_result(winner, y)
    result["k"] = k
    result["candidates"] = len(ranked)
    if ctx.param("bank", False):
        bank = infer_cause_bank(model, trace, y, k)
        result["bank_agrees"] = (bank.cause.id, bank.context_ids) == (winner.cause.id, winner.context_ids)
    return TaskResult(result, _ranked_rows(ranked))


def entropy(ctx: RunContext) -> TaskResult:
    trace = trace_from_dict(ctx.read("trace"))
    model = _model(ctx, fallback=[trace])
    selector = selector_from_spec(str(ctx.param("selector", f"window:{ctx.max_context}")))
    possibility = None
    if ctx.has_input("scenario"):
        possibility = regime_possibility(source_spec_from_dict(ctx.read("scenario")))
    points = entropy_profile(trace, model, selector, possibility)
    bits = [p.bits for p in points]
    rows = [
        {"event_id": p.event_id, "tick": p.tick, "label": p.label, "entropy_bits": p.bits, "possible": p.possible}
        for p in points
    ]
    result = {
        "events": len(points),
        "mean_bits": float(np.mean(bits)) if bits else 0.0,
        "min_bits": min(bits, default=0.0),
        "max_bits": max(bits, default=0.0),
        "constant": len(set(round(b, 12) for b in bits)) <= 1,
    }
    return TaskResult(result, rows)


def stationarity(ctx: RunContext) -> TaskResult:
    window = ctx.param("window")
    if ctx.has_input("corpus"):
        traces = corpus_from_list(ctx.read("corpus"))
    else:
        spec = source_spec_from_dict(ctx.read("scenario"))
        traces = generate_corpus(spec, ctx.seed)
        window = window or spec.window
    if window is None:
        raise ConfigError("stationarity needs a window (option or scenario field)")
    tau = float(ctx.param("tau", ctx.settings.infometrics.stationarity_tau))
    outcome = stationarity_test(traces, int(window), tau)
    rows = [
        {"window": w, "label": label, "probability": dist.p(label)}
        for w, dist in window_distributions(traces, int(window)).items()
        for label in dist.labels
    ]
    result = outcome.to_dict()
    result["window_ticks"] = int(window)
    return TaskResult(result, rows)


def model_fit(ctx: RunContext) -> TaskResult:
    corpus = corpus_from_list(ctx.read("corpus"))
    smoothing = float(ctx.param("smoothing", ctx.settings.implicature.smoothing))
    model = ConditionalModel.fit(corpus, ctx.max_context, smoothing, ctx.param("horizon"))
    rows: List[Dict[str, Any]] = []
    for (sig, cause), counts in sorted(model.pair_counts.items()):
        for outcome, count in sorted(counts.items()):
            rows.append({"kind": "pair", "context": ".".join(sig), "cause": cause, "outcome": outcome, "count": count})
    for sig, counts in sorted(model.context_counts.items()):
        for outcome, count in sorted(counts.items()):
            rows.append({"kind": "context", "context": ".".join(sig), "cause": "", "outcome": outcome, "count": count})
    result = {
        "traces": model.n_traces,
        "alphabet": sorted(model.alphabet),
        "max_context_size": model.max_context_size,
        "smoothing": model.smoothing,
        "pair_keys": len(model.pair_counts),
        "context_keys": len(model.context_counts),
        "model_file": "model.json",
    }
    return TaskResult(result, rows, {"model.json": model.to_dict()})


# Logic

def _document(ctx: RunContext) -> FormulaDocument:
    if ctx.has_input("formulas"):
        return parse_document(ctx.read_text("formulas"))
    text = ctx.param("formula")
    if not text:
        raise ConfigError(f"The {ctx.manifest.command} command needs a formula or a formula file")
    return parse_document(str(text))


def logic_check(ctx: RunContext) -> TaskResult:
    doc = _document(ctx)
    rows = []
    for line, text, f in doc.formulas:
        stratified = stratify_formula(f)
        verdicts = [check_comprehension(c, doc.definitions) for c in comprehensions(f)]
        rows.append(
            {
                "line": line,
                "formula": text,
                "stratified": isinstance(stratified, LevelAssignment),
                "internal": is_internal(f, doc.definitions),
                "cycle": "" if isinstance(stratified, LevelAssignment) else stratified.render(),
                "comprehensions": ";".join(v.status.value for v in verdicts),
            }
        )
    result = {
        "formulas": len(rows),
        "stratified": sum(1 for r in rows if r["stratified"]),
        "internal": sum(1 for r in rows if r["internal"]),
        "definitions": sorted(doc.definitions),
    }
    return TaskResult(result, rows)


TRANSFER_RULES = ("transference", "reverse", "idealisation")


def logic_transfer(ctx: RunContext) -> TaskResult:
    doc = _document(ctx)
    rule = str(ctx.param("rule", "transference"))
    if rule not in TRANSFER_RULES:
        raise ConfigError(f"Unknown rule {rule!r}", allowed=", ".join(TRANSFER_RULES))
    standard = list(ctx.param("standard", []))
    rows = []
    for line, text, f in doc.formulas:
        row = {"line": line, "formula": text, "rule": rule, "legal": True, "reason": "", "result": ""}
        try:
            if rule == "transference":
                rewritten = apply_transference(f, standard, doc.definitions)
            elif rule == "reverse":
                rewritten = reverse_transference(f, standard, doc.definitions)
            else:
                rewritten = apply_idealisation(f, doc.definitions)
            row["result"] = str(rewritten)
        except IllegalTransfer as e:
            row.update(legal=False, reason=e.reason)
        except PatternMismatch as e:
            row.update(legal=False, reason=f"PatternMismatch: {e.message}")
        rows.append(row)
    result = {
        "rule": rule,
        "standard": standard,
        "checked": len(rows),
        "legal": sum(1 for r in rows if r["legal"]),
        "verdicts": [{k: r[k] for k in ("line", "legal", "reason", "result")} for r in rows],
    }
    return TaskResult(result, rows)


# Demos

def demo_garage(ctx: RunContext) -> TaskResult:
    trace, corpus, query = garage_from_dict(ctx.scenario("garage"))
    k = ctx.max_context
    smoothing = float(ctx.param("smoothing", ctx.settings.implicature.smoothing))
    model = ConditionalModel.fit(corpus, k, smoothing)
    y = trace.get(query)
    winner = infer_cause(model, trace, y, k)
    try:
        infer_cause(model, trace, trace.events[0], k)
        first_event = "candidates"
    except NoCandidates:
        first_event = "NoCandidates"
    profile = entropy_profile(trace, model, WindowSelector(k))
    result = _pair_result(winner, y)
    result["first_event"] = first_event
    result["entropy_profile"] = [[p.event_id, p.bits] for p in profile]
    return TaskResult(result, _ranked_rows(rank_candidates(model, trace, y, k)))


def demo_receiver(ctx: RunContext) -> TaskResult:
    scenario = ctx.scenario("receiver")
    samples = int(scenario.get("samples_per_symbol", ctx.settings.receiver.samples_per_symbol))
    cfg = parse_config(ReceiverConfig, scenario["receiver"]) if "receiver" in scenario else bpsk_config(samples)
    rng = np.random.default_rng(mix_seed(ctx.seed, 0))
    message = random_message(cfg, int(scenario.get("noiseless_symbols", 1000)), rng)
    clean = transmit(cfg.model_copy(update={"noise_var": 0.0}), message, rng)
    received = decode(build_receiver(cfg), clean, ctx.seed)
    points = ber_sweep(
        scenario.get("ebn0_db", [0.0, 4.0, 8.0]),
        int(scenario.get("symbols", 20000)),
        ctx.seed,
        samples,
        ctx.max_workers,
    )
    result = {
        "noiseless_symbols": int(message.size),
        "noiseless_bit_exact": bool(np.array_equal(received, message)),
        "points": [{**p.to_row(), "within_3_sigma": p.within(3.0)} for p in points],
    }
    return TaskResult(result, [p.to_row() for p in points])


def demo_bandit(ctx: RunContext) -> TaskResult:
    scenario = ctx.scenario("bandit")
    cfg = parse_config(BanditConfig, scenario.get("config", scenario))
    run = run_bandit(cfg, ctx.seed)
    convergence = bandit_convergence(cfg, int(scenario.get("seeds", 20)), ctx.seed, ctx.max_workers)
    result = {
        "episodes": int(run.arms.size),
        "greedy_arm": run.greedy_arm,
        "best_arm": convergence.best_arm,
        "total_reward": float(run.rewards.sum()),
        "table": run.gcm.transfer.to_dict(),
        "convergence_rate": convergence.rate,
        "convergence_runs": convergence.runs,
    }
    return TaskResult(result, run.to_rows())


def condition_rows(cfg: CharacterConfig, schedule: List[Dict[str, Any]], ticks: int) -> List[List[float]]:
    """Expand [{"start": t, "conditions": {...}}] into one condition row per tick."""
    ordered = sorted(schedule, key=lambda s: int(s.get("start", 0)))
    rows = []
    current: Dict[str, float] = {}
    pending = list(ordered)
    for t in range(ticks):
        while pending and int(pending[0].get("start", 0)) <= t:
            step = pending.pop(0)
            unknown = set(step.get("conditions", {})) - set(cfg.conditions)
            if unknown:
                raise ConfigError("Schedule names undeclared conditions", conditions=sorted(unknown))
            current = {**current, **step.get("conditions", {})}
        rows.append([float(current.get(c, 0.0)) for c in cfg.conditions])
    return rows


def demo_character(ctx: RunContext) -> TaskResult:
    scenario = ctx.scenario("character")
    cfg = parse_config(CharacterConfig, scenario.get("config", scenario))
    ticks = int(scenario.get("ticks", 60))
    frames = run_character(cfg, condition_rows(cfg, scenario.get("schedule", []), ticks), ctx.seed)
    changes = pose_transitions(frames)
    norms = [float(np.linalg.norm(f.rotation)) for f in frames]
    result = {
        "ticks": ticks,
        "final_pose": frames[-1].pose if frames else cfg.start_pose,
        "transitions": [list(c) for c in changes],
        "forbidden_transitions": sum(1 for a, b in changes if not cfg.allows(a, b)),
        "max_quaternion_norm_error": max((abs(n - 1.0) for n in norms), default=0.0),
    }
    return TaskResult(result, [f.to_row() for f in frames])


RANKED_HEADER = ("rank", "cause", "cause_label", "context", "context_size", "surprisal_bits")

TASKS: Dict[str, Task] = {
    task.name: task
    for task in (
        Task("trace validate", ("event_id", "t_start", "t_end", "label", "agent"), trace_validate),
        Task("gcm run", ("tick", "line", "value"), gcm_run),
        Task("net check", ("node", "kind", "level"), net_check),
        Task("infer", RANKED_HEADER, infer),
        Task("entropy", ("event_id", "tick", "label", "entropy_bits", "possible"), entropy),
        Task("stationarity", ("window", "label", "probability"), stationarity),
        Task("model fit", ("kind", "context", "cause", "outcome", "count"), model_fit),
        Task("logic check", ("line", "formula", "stratified", "internal", "cycle", "comprehensions"), logic_check),
        Task("logic transfer", ("line", "formula", "rule", "legal", "reason", "result"), logic_transfer),
        Task("demo garage", RANKED_HEADER, demo_garage),
        Task("demo receiver", ("ebn0_db", "symbols", "errors", "ber", "theoretical_ber"), demo_receiver),
        Task("demo bandit", ("episode", "arm", "reward"), demo_bandit),
        Task("demo character", ("tick", "pose", "x", "y", "qw", "qx", "qy", "qz"), demo_character),
    )
}
