"""Bit-flip fault injection on gate outputs.

After a gate computes its output word, each bit flips independently with the
gate's probability; downstream gates see the flipped word.  Random draws come
from one Philox stream per ``(seed, gate id)``; trial ``t`` always consumes row
``t`` of that stream, so a draw depends only on seed, trial index and gate id.
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .circuit import Gate, Netlist, propagate
from .metrics import SweepPoint, SweepReport

INPUT_SOURCES = ("uniform", "exhaustive")
_INPUT_STREAM = "__inputs__"


@dataclass(frozen=True)
class FaultPlan:
    """Everything that determines a fault-injection experiment.

    ``forced`` maps a gate id to an XOR mask applied on every trial, on top of
    any random flips.
    """

    probability: float = 0.0
    per_gate: Mapping[str, float] = field(default_factory=dict)
    excluded: frozenset[str] = frozenset()
    seed: int = 0
    forced: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "excluded", frozenset(self.excluded))
        for p in [self.probability, *self.per_gate.values()]:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"flip probability {p} outside [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    def rate(self, gate_id: str) -> float:
        if gate_id in self.excluded:
            return 0.0
        return self.per_gate.get(gate_id, self.probability)

    @classmethod
    def targeted(cls, gate_id: str, probability: float, seed: int = 0) -> "FaultPlan":
        """Faults on a single gate only."""
        return cls(0.0, {gate_id: probability}, frozenset(), seed)

    @classmethod
    def system(cls, netlist: Netlist, probability: float, seed: int = 0, include_boundary: bool = False) -> "FaultPlan":
        """Faults on every gate; translators and voters excluded unless asked."""
        excluded = frozenset() if include_boundary else frozenset(g.id for g in netlist.gates if g.is_boundary)
        return cls(probability, {}, excluded, seed)


def _stream(seed: int, key: str) -> np.random.Generator:
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    words = [seed & 0xFFFFFFFF, seed >> 32] + [int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(words)))


def uniform_draws(seed: int, key: str, trials: np.ndarray, width: int) -> np.ndarray:
    """Uniform [0, 1) draws, one row of ``width`` per requested trial index."""
    trials = np.asarray(trials, dtype=np.int64)
    if trials.size == 0:
        return np.zeros((0, width))
    rows = _stream(seed, key).random((int(trials.max()) + 1, width))
    return rows[trials]


def flip_masks(plan: FaultPlan, gate: Gate, trials: np.ndarray, width: int) -> np.ndarray:
    """XOR mask per trial for a gate's output word."""
    mask = np.zeros(len(trials), dtype=np.int64)
    p = plan.rate(gate.id)
    if p > 0.0:
        draws = uniform_draws(plan.seed, gate.id, trials, width) < p
        # column 0 is the most significant bit
        weights = 1 << np.arange(width - 1, -1, -1, dtype=np.int64)
        mask = draws.astype(np.int64) @ weights
    if gate.id in plan.forced:
        mask = mask ^ plan.forced[gate.id]
    return mask


def popcount(words: np.ndarray) -> np.ndarray:
    words = np.asarray(words, dtype=np.int64)
    count = np.zeros_like(words)
    while np.any(words):
        count += words & 1
        words = words >> 1
    return count


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    inputs: dict[str, int]
    golden: dict[str, int]
    faulty: dict[str, int]
    injected: dict[str, int]
    output_correct: bool


@dataclass
class Batch:
    """Golden and faulty net values for a batch of trials."""

    netlist: Netlist
    trials: np.ndarray
    golden: dict[str, np.ndarray]
    faulty: dict[str, np.ndarray]
    injected: dict[str, np.ndarray]

    @property
    def output_correct(self) -> np.ndarray:
        ok = np.ones(len(self.trials), dtype=bool)
        for net in self.netlist.outputs:
            ok &= self.netlist.output_logic(net, self.faulty[net]) == self.netlist.output_logic(net, self.golden[net])
        return ok

    @property
    def inserted_bits(self) -> int:
        return int(sum(int(v.sum()) for v in self.injected.values()))

    def mismatch(self, net: str) -> np.ndarray:
        return popcount(self.golden[net] ^ self.faulty[net])

    def records(self) -> list[TrialRecord]:
        ok = self.output_correct
        nets = self.netlist.nets
        out = []
        for i, t in enumerate(self.trials):
            out.append(TrialRecord(
                trial=int(t),
                inputs={n: int(self.golden[n][i]) for n in self.netlist.inputs},
                golden={n: int(self.golden[n][i]) for n in nets},
                faulty={n: int(self.faulty[n][i]) for n in nets},
                injected={n: int(v[i]) for n, v in self.injected.items()},
                output_correct=bool(ok[i]),
            ))
        return out

    def profile(self) -> "ErrorProfile":
        widths = self.netlist.net_widths
        counts = {}
        for net in self.netlist.nets:
            mism = self.mismatch(net)
            counts[net] = tuple(int(np.count_nonzero(mism == k)) for k in range(1, widths[net] + 1))
        return ErrorProfile(counts, len(self.trials))

    def dump_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "net", "golden_value", "faulty_value", "flipped_bits_injected", "mismatch_bits"])
        nets = self.netlist.nets
        mism = {n: self.mismatch(n) for n in nets}
        for i, t in enumerate(self.trials):
            for n in nets:
                inj = int(self.injected[n][i]) if n in self.injected else 0
                w.writerow([int(t), n, int(self.golden[n][i]), int(self.faulty[n][i]), inj, int(mism[n][i])])
        return buf.getvalue()


@dataclass(frozen=True)
class ErrorProfile:
    """Per net, the number of trials with exactly k erroneous bits (k = 1..width)."""

    counts: dict[str, tuple[int, ...]]
    trials: int

    def to_csv(self) -> str:
        depth = max([3, *(len(c) for c in self.counts.values())])
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["net", *(f"errors_{k}bit" for k in range(1, depth + 1)), "trials"])
        for net, c in self.counts.items():
            w.writerow([net, *c, *([0] * (depth - len(c))), self.trials])
        return buf.getvalue()


def simulate_batch(netlist: Netlist, input_words: Mapping[str, Sequence[int]], plan: FaultPlan, trials=None) -> Batch:
    """Golden and faulty runs over explicit input words, one trial per column."""
    first = np.asarray(next(iter(input_words.values())))
    if trials is None:
        trials = np.arange(len(first), dtype=np.int64)
    trials = np.asarray(trials, dtype=np.int64)
    golden = propagate(netlist, input_words)
    widths = netlist.net_widths
    injected: dict[str, np.ndarray] = {}

    def hook(gate, word):
        mask = flip_masks(plan, gate, trials, widths[gate.output])
        injected[gate.output] = popcount(mask)
        return word ^ mask

    faulty = propagate(netlist, input_words, hook)
    return Batch(netlist, trials, golden, faulty, injected)


def inject_and_evaluate(netlist: Netlist, inputs: Mapping[str, int], plan: FaultPlan, trial_index: int = 0) -> TrialRecord:
    words = {n: [int(v)] for n, v in inputs.items()}
    return simulate_batch(netlist, words, plan, [trial_index]).records()[0]


def logic_inputs(n_inputs: int, trials: int, source: str = "uniform", seed: int = 0) -> np.ndarray:
    """Logic input bits, shape (trials, n_inputs)."""
    if source == "uniform":
        gen = _stream(seed, _INPUT_STREAM)
        return gen.integers(0, 2, size=(trials, n_inputs), dtype=np.int64)
    if source == "exhaustive":
        t = np.arange(trials, dtype=np.int64) % (1 << n_inputs)
        shifts = np.arange(n_inputs - 1, -1, -1, dtype=np.int64)
        return (t[:, None] >> shifts) & 1
    raise ValueError(f"unknown input source {source!r}; use one of {INPUT_SOURCES}")


def encode_inputs(netlist: Netlist, bits: np.ndarray) -> dict[str, np.ndarray]:
    """Pole-encode logic input columns for the netlist's input scheme."""
    scheme = netlist.input_scheme
    poles = np.array([scheme.pole0, scheme.pole1], dtype=np.int64)
    return {net: poles[bits[:, i]] for i, net in enumerate(netlist.inputs)}


def run_batch(netlist: Netlist, plan: FaultPlan, trials: int, input_source: str = "uniform") -> Batch:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    bits = logic_inputs(len(netlist.inputs), trials, input_source, plan.seed)
    return simulate_batch(netlist, encode_inputs(netlist, bits), plan)


def run_trials(netlist: Netlist, plan: FaultPlan, trials: int, input_source: str = "uniform"):
    """Returns ``(records, profile)``."""
    batch = run_batch(netlist, plan, trials, input_source)
    return batch.records(), batch.profile()


def logic_function(netlist: Netlist) -> list[tuple[int, ...]]:
    """Fault-free logic outputs for every logic input combination."""
    k = len(netlist.inputs)
    bits = logic_inputs(k, 1 << k, "exhaustive")
    values = propagate(netlist, encode_inputs(netlist, bits))
    cols = [netlist.output_logic(n, values[n]) for n in netlist.outputs]
    return [tuple(int(c[i]) for c in cols) for i in range(1 << k)]


def check_comparable(netlists: Mapping[str, Netlist]) -> None:
    items = list(netlists.items())
    ref_label, ref = items[0]
    ref_fn = logic_function(ref)
    for label, net in items[1:]:
        if len(net.inputs) != len(ref.inputs) or len(net.outputs) != len(ref.outputs):
            raise ValueError(
                f"{label}: interface {len(net.inputs)} in / {len(net.outputs)} out differs from "
                f"{ref_label}: {len(ref.inputs)} in / {len(ref.outputs)} out"
            )
        if logic_function(net) != ref_fn:
            raise ValueError(f"{label} computes a different logic function from {ref_label}")


def default_p_values() -> list[float]:
    return [round(0.01 * k, 2) for k in range(1, 21)]


def sweep(
    netlists: Mapping[str, Netlist],
    p_values: Sequence[float],
    trials: int,
    seed: int = 0,
    input_source: str = "uniform",
    include_boundary: bool = False,
) -> SweepReport:
    """Availability and tolerance rate of each netlist at each flip probability.

    All netlists see the same logic input stream, so points are paired.
    """
    if not p_values:
        raise ValueError("empty probability list")
    if not netlists:
        raise ValueError("no netlists to compare")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    check_comparable(netlists)
    k = len(next(iter(netlists.values())).inputs)
    bits = logic_inputs(k, trials, input_source, seed)
    points = []
    for label, net in netlists.items():
        words = encode_inputs(net, bits)
        for p in p_values:
            plan = FaultPlan.system(net, p, seed, include_boundary)
            batch = simulate_batch(net, words, plan)
            correct = int(np.count_nonzero(batch.output_correct))
            points.append(SweepPoint(label, float(p), trials, correct, trials - correct, batch.inserted_bits))
    return SweepReport(points)
