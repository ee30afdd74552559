"""Tolerant gates, synthesized functions and coding translators.

Every gate here is a total word-level truth table: inputs are decoded by
class, the Boolean operator is applied to the logic values, and the result is
emitted as a pole code.  Input index for a two-input gate is ``a * 2**n + b``
(the concatenated bits ``a1..an b1..bn``); output bit 1 is the most
significant bit.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .coding import CONVENTIONAL, CodingScheme, HPolicy, UncorrectableCodeError


@dataclass(frozen=True)
class LogicOp:
    """A Boolean operator given by its truth table.

    ``table[i]`` is the output for logic inputs packed as ``i = a`` (arity 1)
    or ``i = 2*a + b`` (arity 2).
    """

    name: str
    arity: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.arity not in (1, 2):
            raise ValueError(f"arity must be 1 or 2, got {self.arity}")
        if len(self.table) != 1 << self.arity or any(v not in (0, 1) for v in self.table):
            raise ValueError(f"{self.name}: table must list {1 << self.arity} values in {{0, 1}}")
        object.__setattr__(self, "table", tuple(self.table))

    def __call__(self, *args: int) -> int:
        if len(args) != self.arity:
            raise TypeError(f"{self.name} takes {self.arity} inputs")
        idx = 0
        for v in args:
            idx = (idx << 1) | (1 if v else 0)
        return self.table[idx]

    @property
    def is_custom(self) -> bool:
        return self not in BUILTIN_OPS.values()


AND = LogicOp("and", 2, (0, 0, 0, 1))
OR = LogicOp("or", 2, (0, 1, 1, 1))
NOT = LogicOp("not", 1, (1, 0))
XOR = LogicOp("xor", 2, (0, 1, 1, 0))
IDENTITY = LogicOp("identity", 1, (0, 1))

BUILTIN_OPS = {op.name: op for op in (AND, OR, NOT, XOR)}


def custom_op(name: str, table) -> LogicOp:
    table = tuple(int(v) for v in table)
    arity = {2: 1, 4: 2}.get(len(table))
    if arity is None:
        raise ValueError(f"custom table must have 2 or 4 entries, got {len(table)}")
    return LogicOp(name, arity, table)


def _bit(word: int, k: int, width: int) -> int:
    # k counts from 1 at the most significant bit
    return (word >> (width - k)) & 1


@dataclass(frozen=True)
class MintermLists:
    width: int
    sop: tuple[tuple[int, ...], ...]
    pos: tuple[tuple[int, ...], ...]

    def lines(self, prefix: str = "f") -> list[str]:
        """One line per output bit, SOP and POS forms."""
        out = []
        for k in range(1, self.width + 1):
            out.append(f"{prefix}_{k} = {format_sigma(self.sop[k - 1])}")
            out.append(f"{prefix}_{k} = {format_pi(self.pos[k - 1])}")
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bit_index", "form", "indices"])
        for k in range(1, self.width + 1):
            w.writerow([k, "SOP", " ".join(map(str, self.sop[k - 1]))])
            w.writerow([k, "POS", " ".join(map(str, self.pos[k - 1]))])
        return buf.getvalue()


def format_sigma(indices) -> str:
    return "Σ(" + ",".join(str(i) for i in indices) + ")"


def format_pi(indices) -> str:
    return "Π(" + ",".join(str(i) for i in indices) + ")"


def _minterms(table: tuple[int, ...], width: int) -> MintermLists:
    sop, pos = [], []
    for k in range(1, width + 1):
        ones = tuple(i for i, out in enumerate(table) if _bit(out, k, width))
        zeros = tuple(i for i, out in enumerate(table) if not _bit(out, k, width))
        sop.append(ones)
        pos.append(zeros)
    return MintermLists(width, tuple(sop), tuple(pos))


@dataclass(frozen=True)
class TolerantGateSpec:
    scheme: CodingScheme
    op: LogicOp
    h_policy: HPolicy
    table: tuple[int, ...]

    @property
    def arity(self) -> int:
        return self.op.arity

    @property
    def name(self) -> str:
        return f"T_{self.op.name.capitalize()}"

    @cached_property
    def lookup(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)

    def __call__(self, *words: int) -> int:
        n = self.scheme.width
        idx = 0
        for w in words:
            idx = (idx << n) | int(w)
        return self.table[idx]

    def pole_input_set(self, logic: int) -> list[tuple[int, ...]]:
        """Input tuples that produce the given pole."""
        target = self.scheme.pole(logic)
        n = self.scheme.width
        mask = (1 << n) - 1
        out = []
        for idx, word in enumerate(self.table):
            if word == target:
                if self.arity == 2:
                    out.append((idx >> n, idx & mask))
                else:
                    out.append((idx,))
        return out

    @cached_property
    def minterms_per_bit(self) -> MintermLists:
        return _minterms(self.table, self.scheme.width)


def _checked_decoder(scheme: CodingScheme, h_policy: HPolicy) -> tuple[int, ...]:
    try:
        return scheme.decode_table(h_policy)
    except UncorrectableCodeError as exc:
        raise ValueError(
            f"strict Class_H policy leaves the table for {scheme.notation} partial "
            f"(Class_H = {list(scheme.class_h)})"
        ) from exc


def tolerant_gate(scheme: CodingScheme, op: LogicOp, h_policy: HPolicy = HPolicy.AS_ZERO) -> TolerantGateSpec:
    decode = _checked_decoder(scheme, h_policy)
    n = scheme.width
    if op.arity == 1:
        table = tuple(scheme.pole(op(decode[a])) for a in range(1 << n))
    else:
        table = tuple(
            scheme.pole(op(decode[a], decode[b])) for a in range(1 << n) for b in range(1 << n)
        )
    return TolerantGateSpec(scheme, op, h_policy, table)


def minterm_lists(spec) -> MintermLists:
    return spec.minterms_per_bit


def synthesize_function(scheme: CodingScheme, function: LogicOp, h_policy: HPolicy = HPolicy.AS_ZERO) -> TolerantGateSpec:
    """Tolerant realization of an arbitrary one- or two-input function.

    Built from the class Cartesian products: the inputs mapping to pole 1 are
    the union of ``C_a x C_b`` over logic pairs ``(a, b)`` with ``f(a, b) = 1``.
    """
    decode = _checked_decoder(scheme, h_policy)
    classes = {0: [c for c in range(scheme.size) if decode[c] == 0],
               1: [c for c in range(scheme.size) if decode[c] == 1]}
    n = scheme.width
    ones = set()
    if function.arity == 1:
        for a in (0, 1):
            if function(a):
                ones.update(classes[a])
    else:
        for a in (0, 1):
            for b in (0, 1):
                if function(a, b):
                    ones.update((x << n) | y for x in classes[a] for y in classes[b])
    count = 1 << (n * function.arity)
    table = tuple(scheme.pole1 if i in ones else scheme.pole0 for i in range(count))
    return TolerantGateSpec(scheme, function, h_policy, table)


@dataclass(frozen=True)
class TranslatorSpec:
    from_scheme: CodingScheme
    to_scheme: CodingScheme
    h_policy: HPolicy
    table: tuple[int, ...]

    @cached_property
    def lookup(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)

    def __call__(self, word: int) -> int:
        return self.table[int(word)]

    @cached_property
    def minterms_per_bit(self) -> MintermLists:
        return _minterms(self.table, self.to_scheme.width)


def translator(from_scheme: CodingScheme, to_scheme: CodingScheme, h_policy: HPolicy = HPolicy.AS_ZERO) -> TranslatorSpec:
    decode = _checked_decoder(from_scheme, h_policy)
    table = tuple(to_scheme.pole(v) for v in decode)
    return TranslatorSpec(from_scheme, to_scheme, h_policy, table)


def conventional_gate(op: LogicOp) -> TolerantGateSpec:
    return tolerant_gate(CONVENTIONAL, op)
