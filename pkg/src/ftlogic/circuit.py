"""Combinational gate netlists.

Nets carry unsigned words (width 1 for conventional logic, n for a tolerant
scheme).  Evaluation is levelized and vectorized: every net holds a numpy
array with one entry per parallel evaluation.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .coding import CONVENTIONAL, CodingScheme, Codeword, HPolicy
from .synth import AND, NOT, OR, TolerantGateSpec, TranslatorSpec, tolerant_gate, translator

CONVENTIONAL_KINDS = {"AND": AND, "OR": OR, "NOT": NOT}
TOLERANT_KINDS = {"TAND": AND, "TOR": OR, "TNOT": NOT}
ALL_KINDS = set(CONVENTIONAL_KINDS) | set(TOLERANT_KINDS) | {"TFUNC", "TRANS", "MAJ"}


class NetlistError(ValueError):
    """Structural problem in a netlist; ``gate`` names the offending gate when known."""

    def __init__(self, message: str, gate: str | None = None):
        super().__init__(message)
        self.gate = gate


@dataclass(frozen=True)
class Gate:
    id: str
    kind: str
    output: str
    inputs: tuple[str, ...]
    spec: TolerantGateSpec | TranslatorSpec | None = None

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if self.kind not in ALL_KINDS:
            raise NetlistError(f"unknown gate kind {self.kind!r}", self.id)
        if self.kind in CONVENTIONAL_KINDS:
            arity = CONVENTIONAL_KINDS[self.kind].arity
        elif self.kind in TOLERANT_KINDS or self.kind == "TFUNC":
            if not isinstance(self.spec, TolerantGateSpec):
                raise NetlistError(f"gate {self.id}: {self.kind} needs a tolerant gate spec", self.id)
            arity = self.spec.arity
        elif self.kind == "TRANS":
            if not isinstance(self.spec, TranslatorSpec):
                raise NetlistError(f"gate {self.id}: TRANS needs a translator spec", self.id)
            arity = 1
        else:
            arity = len(self.inputs)
            if arity < 3 or arity % 2 == 0:
                raise NetlistError(f"gate {self.id}: majority voter needs odd fan-in >= 3, got {arity}", self.id)
        if len(self.inputs) != arity:
            raise NetlistError(f"gate {self.id}: {self.kind} takes {arity} inputs, got {len(self.inputs)}", self.id)

    @property
    def is_boundary(self) -> bool:
        """Translators and voters, the gates assumed fault-free by default."""
        return self.kind in ("TRANS", "MAJ")

    def input_widths(self, net_widths: Mapping[str, int]) -> tuple[int, ...]:
        if self.kind in CONVENTIONAL_KINDS:
            return (1,) * len(self.inputs)
        if self.kind == "TRANS":
            return (self.spec.from_scheme.width,)
        if self.kind == "MAJ":
            return (net_widths[self.inputs[0]],) * len(self.inputs)
        return (self.spec.scheme.width,) * len(self.inputs)

    def output_width(self, net_widths: Mapping[str, int]) -> int:
        if self.kind in CONVENTIONAL_KINDS:
            return 1
        if self.kind == "TRANS":
            return self.spec.to_scheme.width
        if self.kind == "MAJ":
            return net_widths[self.inputs[0]]
        return self.spec.scheme.width


@dataclass(frozen=True)
class Netlist:
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    gates: tuple[Gate, ...]
    width: int = 1
    scheme: CodingScheme | None = None
    h_policy: HPolicy = HPolicy.AS_ZERO
    name: str = field(default="", compare=False)

    def __post_init__(self):
        for attr in ("inputs", "outputs", "gates"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        if not self.outputs:
            raise NetlistError("no outputs declared")
        if self.scheme is not None and self.width not in (1, self.scheme.width):
            raise NetlistError(f"input width {self.width} does not match scheme {self.scheme.notation}")
        if self.width > 1 and self.scheme is None:
            raise NetlistError(f"input width {self.width} needs a scheme directive")

        widths: dict[str, int] = {}
        for net in self.inputs:
            if net in widths:
                raise NetlistError(f"net {net!r} declared as input twice")
            widths[net] = self.width
        drivers = {}
        for g in self.gates:
            if g.id in drivers.values():
                raise NetlistError(f"duplicate gate id {g.id!r}", g.id)
            if g.output in widths or g.output in drivers:
                raise NetlistError(f"net {g.output!r} has multiple drivers", g.id)
            drivers[g.output] = g.id
            widths[g.output] = -1

        by_output = {g.output: i for i, g in enumerate(self.gates)}
        pending = []
        users: dict[int, list[int]] = {}
        for i, g in enumerate(self.gates):
            for net in g.inputs:
                if net not in widths:
                    raise NetlistError(f"gate {g.id}: net {net!r} has no driver", g.id)
            deps = {by_output[n] for n in g.inputs if n in by_output}
            pending.append(len(deps))
            for d in deps:
                users.setdefault(d, []).append(i)
        # Kahn's algorithm, ties broken by declaration order
        ready = [i for i, k in enumerate(pending) if k == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            i = heapq.heappop(ready)
            order.append(self.gates[i])
            for u in users.get(i, ()):
                pending[u] -= 1
                if pending[u] == 0:
                    heapq.heappush(ready, u)
        if len(order) != len(self.gates):
            stuck = sorted(self.gates[i].output for i, k in enumerate(pending) if k > 0)
            raise NetlistError(f"combinational cycle through nets {stuck}")

        for g in order:
            expected = g.input_widths(widths)
            for net, w in zip(g.inputs, expected):
                if widths[net] != w:
                    raise NetlistError(
                        f"gate {g.id}: net {net!r} has width {widths[net]}, {g.kind} expects {w}", g.id
                    )
            widths[g.output] = g.output_width(widths)
        for net in self.outputs:
            if net not in widths:
                raise NetlistError(f"output net {net!r} has no driver")
        object.__setattr__(self, "_order", tuple(order))
        object.__setattr__(self, "_widths", widths)

    @property
    def order(self) -> tuple[Gate, ...]:
        """Gates in a valid evaluation order."""
        return self._order

    @property
    def net_widths(self) -> dict[str, int]:
        return dict(self._widths)

    @property
    def nets(self) -> list[str]:
        return list(self.inputs) + [g.output for g in self._order]

    @property
    def input_scheme(self) -> CodingScheme:
        return CONVENTIONAL if self.width == 1 else self.scheme

    def gate(self, gate_id: str) -> Gate:
        for g in self.gates:
            if g.id == gate_id:
                return g
        raise KeyError(gate_id)

    def is_conventional(self) -> bool:
        return self.width == 1 and all(g.kind in CONVENTIONAL_KINDS for g in self.gates)

    def output_logic(self, net: str, words):
        """Logic value carried by an output word, decoding through the scheme if needed."""
        w = self._widths[net]
        if w == 1:
            return words
        if self.scheme is None or self.scheme.width != w:
            return words
        table = np.asarray(self.scheme.decode_table(self.h_policy))
        return table[words]


def apply_gate(gate: Gate, args: list[np.ndarray], width: int) -> np.ndarray:
    kind = gate.kind
    if kind == "AND":
        return args[0] & args[1]
    if kind == "OR":
        return args[0] | args[1]
    if kind == "NOT":
        return args[0] ^ 1
    if kind == "TRANS":
        return gate.spec.lookup[args[0]]
    if kind == "MAJ":
        out = np.zeros_like(args[0])
        need = len(args) // 2 + 1
        for k in range(width):
            votes = sum((a >> k) & 1 for a in args)
            out |= (votes >= need).astype(out.dtype) << k
        return out
    spec = gate.spec
    if spec.arity == 1:
        return spec.lookup[args[0]]
    return spec.lookup[(args[0] << spec.scheme.width) | args[1]]


FaultHook = Callable[[Gate, np.ndarray], np.ndarray]


def propagate(netlist: Netlist, input_values: Mapping[str, np.ndarray], fault_hook: FaultHook | None = None) -> dict[str, np.ndarray]:
    """Evaluate all nets for a batch of input words.

    ``fault_hook(gate, word)`` may return a replacement output word; the
    replacement is what downstream gates see.
    """
    values: dict[str, np.ndarray] = {}
    for net in netlist.inputs:
        if net not in input_values:
            raise ValueError(f"missing value for input {net!r}")
        arr = np.asarray(input_values[net], dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= 1 << netlist.width):
            raise ValueError(f"input {net!r} out of range for width {netlist.width}")
        values[net] = arr
    widths = netlist._widths
    for g in netlist.order:
        out = apply_gate(g, [values[n] for n in g.inputs], widths[g.output])
        if fault_hook is not None:
            out = fault_hook(g, out)
        values[g.output] = out
    return values


def evaluate(netlist: Netlist, assignment: Mapping[str, int | Codeword]) -> dict[str, int]:
    """Fault-free value of every net for one input assignment."""
    batch = {}
    for net in netlist.inputs:
        if net not in assignment:
            raise ValueError(f"missing value for input {net!r}")
        v = assignment[net]
        if isinstance(v, Codeword) and v.width != netlist.width:
            raise ValueError(f"input {net!r}: width {v.width}, netlist expects {netlist.width}")
        batch[net] = np.array([int(v)], dtype=np.int64)
    return {net: int(arr[0]) for net, arr in propagate(netlist, batch).items()}


def substitute(
    netlist: Netlist,
    scheme: CodingScheme,
    h_policy: HPolicy = HPolicy.AS_ZERO,
    input_translators: bool = False,
    output_translators: bool = True,
) -> Netlist:
    """Replace each conventional gate by its tolerant counterpart under ``scheme``.

    Topology and names are kept.  Optional translators convert primary inputs
    from 1-bit logic (``tr_<net>`` driving ``<net>_enc``) and primary outputs
    back to 1-bit logic (``tr_<net>`` driving ``<net>_out``).
    """
    if not netlist.is_conventional():
        bad = [g.id for g in netlist.gates if g.kind not in CONVENTIONAL_KINDS]
        raise NetlistError(f"substitution needs a conventional netlist; non-conventional gates: {bad}")
    specs = {kind: tolerant_gate(scheme, op, h_policy) for kind, op in TOLERANT_KINDS.items()}
    rename = {}
    gates = []
    if input_translators:
        enc = translator(CONVENTIONAL, scheme, h_policy)
        for net in netlist.inputs:
            rename[net] = f"{net}_enc"
            gates.append(Gate(f"tr_{net}", "TRANS", rename[net], (net,), enc))
    for g in netlist.gates:
        kind = "T" + g.kind
        gates.append(Gate(g.id, kind, g.output, tuple(rename.get(n, n) for n in g.inputs), specs[kind]))
    outputs = [rename.get(n, n) for n in netlist.outputs]
    if output_translators:
        dec = translator(scheme, CONVENTIONAL, h_policy)
        new_outputs = []
        for net in outputs:
            gates.append(Gate(f"tr_{net}", "TRANS", f"{net}_out", (net,), dec))
            new_outputs.append(f"{net}_out")
        outputs = new_outputs
    return Netlist(
        inputs=netlist.inputs,
        outputs=tuple(outputs),
        gates=tuple(gates),
        width=1 if input_translators else scheme.width,
        scheme=scheme,
        h_policy=h_policy,
        name=f"{netlist.name}_{scheme.notation}" if netlist.name else scheme.notation,
    )


def build_nmr(netlist: Netlist, r: int = 3) -> Netlist:
    """``r`` disjoint copies sharing the primary inputs, one majority voter per output."""
    if r < 3 or r % 2 == 0:
        raise NetlistError(f"replication must be odd and >= 3, got {r}")
    primary = set(netlist.inputs)

    def copy_net(net, i):
        return net if net in primary else f"{net}__r{i}"

    gates = []
    for i in range(r):
        for g in netlist.gates:
            gates.append(Gate(f"{g.id}__r{i}", g.kind, copy_net(g.output, i),
                              tuple(copy_net(n, i) for n in g.inputs), g.spec))
    outputs = []
    for net in netlist.outputs:
        voted = f"{net}_voted" if net in primary else net
        gates.append(Gate(f"vote_{net}", "MAJ", voted, tuple(copy_net(net, i) for i in range(r))))
        outputs.append(voted)
    return Netlist(
        inputs=netlist.inputs,
        outputs=tuple(outputs),
        gates=tuple(gates),
        width=netlist.width,
        scheme=netlist.scheme,
        h_policy=netlist.h_policy,
        name=f"{netlist.name}_{r}mr" if netlist.name else f"{r}mr",
    )
