"""Published reference tables and a diff against what this package computes.

The reference values below are transcribed as printed, including their
errors.  :func:`conformance_report` lists every item with MATCH or DIVERGES
and the exact differing elements.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coding import build_scheme, scheme_quality
from .synth import AND, NOT, OR, XOR, synthesize_function, tolerant_gate, translator
from .coding import CONVENTIONAL

# (pole0, pole1, class0, class1, class_h, pole distance, max correctable distance or None)
ONE_BIT_ROWS = [
    (0, 1, {0}, {1}, set(), 1, None),
    (1, 0, {1}, {0}, set(), 1, None),
]
TWO_BIT_ROWS = [
    (0, 3, {0}, {3}, {1, 2}, 2, None),
    (3, 0, {3}, {0}, {1, 2}, 2, None),
    (1, 2, {1}, {2}, {0, 3}, 2, None),
    (2, 1, {2}, {1}, {0, 3}, 2, None),
    (1, 3, {1, 0}, {3, 2}, set(), 1, None),
    (3, 1, {3, 2}, {1, 0}, set(), 1, None),
    (0, 2, {0, 1}, {2, 3}, set(), 1, None),
    (2, 0, {2, 3}, {0, 1}, set(), 1, None),
]
THREE_BIT_ROWS = [
    (0, 7, {0, 1, 2, 4}, {3, 5, 6, 7}, set(), 3, 1),
    (7, 0, {3, 5, 6, 7}, {0, 1, 2, 4}, set(), 3, 1),
    (1, 6, {0, 1, 3, 5}, {2, 4, 6, 7}, set(), 3, 1),
    (6, 1, {2, 4, 6, 7}, {0, 1, 3, 5}, set(), 3, 1),
    (2, 5, {0, 2, 3, 6}, {1, 4, 5, 7}, set(), 3, 1),
    (5, 2, {1, 4, 5, 7}, {0, 2, 3, 6}, set(), 3, 1),
    (0, 3, {1, 4}, {7}, {2, 5, 6}, 2, 1),
    (3, 0, {7}, {1, 4}, {2, 5, 6}, 2, 1),
    (1, 3, {0, 4, 5}, {2, 7, 6}, set(), 1, 2),
    (3, 1, {2, 6, 7}, {0, 4, 5}, set(), 1, 2),
]
SCHEME_COUNTS = {1: 2, 2: 12, 3: 56}

_C00 = [0, 2, 3, 6, 16, 18, 19, 22, 24, 26, 27, 30, 48, 50, 51, 54]
_C11 = [9, 12, 13, 15, 33, 36, 37, 39, 41, 44, 45, 47, 57, 60, 61, 63]
_C11_MISPRINT = [9, 12, 23, 15, 33, 36, 37, 39, 41, 44, 45, 47, 57, 60, 61, 63]
_XOR_PRINTED = [1, 4, 5, 7, 8, 10, 11, 14, 17, 20, 21, 23, 25, 28, 29, 31, 32, 34, 35, 38,
                40, 42, 43, 46, 49, 52, 53, 55, 57, 60, 61, 63]

# (gate, output bit, form, printed index list) for the (2,5)_3 scheme
MINTERM_LISTINGS = [
    ("T_Or", 1, "POS", _C00),
    ("T_Or", 2, "SOP", _C00),
    ("T_Or", 3, "POS", _C00),
    ("T_And", 1, "SOP", _C11),
    ("T_And", 2, "POS", _C11_MISPRINT),
    ("T_And", 3, "SOP", _C11_MISPRINT),
    ("T_Not", 1, "SOP", [0, 2, 3, 6]),
    ("T_Not", 2, "POS", [0, 2, 3, 6]),
    ("T_Not", 3, "SOP", [0, 2, 3, 6]),
    ("XOR", 1, "SOP", _XOR_PRINTED),
    ("XOR", 2, "POS", _XOR_PRINTED),
    ("XOR", 3, "SOP", _XOR_PRINTED),
    ("Tr (2,5)_3->(0,1)_1", 1, "SOP", [1, 4, 5, 7]),
]

# translator (2,5)_3 -> (0,1)_1, indexed by input codeword
TRANSLATOR_DOWN = [0, 1, 0, 0, 1, 1, 0, 1]
# translator (0,1)_1 -> (2,5)_3
TRANSLATOR_UP = [0b010, 0b101]

XOR_POLE1_PAIRS = [
    (0, 1), (0, 4), (0, 5), (0, 7), (2, 1), (2, 4), (2, 5), (2, 7), (3, 1), (3, 4), (3, 5), (3, 7),
    (6, 1), (6, 4), (6, 5), (6, 7), (1, 0), (1, 2), (1, 3), (1, 6), (4, 0), (4, 2), (4, 3), (4, 6),
    (5, 0), (5, 2), (5, 3), (5, 6), (7, 0), (7, 2), (7, 3), (7, 6),
]

# five-bit example as printed: header poles and class listings
FIVE_BIT_SCHEME = (10, 21, 5)
FIVE_BIT_HEADER_POLES = (2, 5)
FIVE_BIT_CLASS0 = {0, 2, 3, 4, 6, 8, 9, 11, 12, 14, 15, 18, 24, 26, 27, 30}
FIVE_BIT_CLASS1 = {1, 5, 7, 13, 16, 17, 19, 20, 22, 23, 25, 28, 29, 31}


@dataclass(frozen=True)
class Finding:
    item: str
    matches: bool
    detail: str

    def line(self) -> str:
        return f"[{'MATCH' if self.matches else 'DIVERGES'}] {self.item}: {self.detail}"


def _set_diff(computed, printed) -> str:
    computed, printed = set(computed), set(printed)
    if computed == printed:
        return "identical"
    extra = sorted(computed - printed)
    missing = sorted(printed - computed)
    return f"computed-only {extra}, printed-only {missing}"


def scheme_row_findings(rows, n: int) -> list[Finding]:
    out = []
    for p0, p1, c0, c1, ch, dist, corr in rows:
        s = build_scheme(n, p0, p1)
        q = scheme_quality(s)
        name = s.notation
        # some printed rows leave the pole itself out of its class listing
        c0_full, c1_full = c0 | {p0}, c1 | {p1}
        problems = []
        for label, comp, printed in (("Class_0", s.class0, c0_full), ("Class_1", s.class1, c1_full),
                                     ("Class_H", s.class_h, ch)):
            if set(comp) != printed:
                problems.append(f"{label} {_set_diff(comp, printed)}")
        if q.pole_distance != dist:
            problems.append(f"pole distance computed {q.pole_distance}, printed {dist}")
        if corr is not None and q.max_correctable_distance != corr:
            problems.append(f"correctable distance computed {q.max_correctable_distance}, printed {corr}")
        notes = []
        if p0 not in c0 or p1 not in c1:
            notes.append("printed listing omits the pole codes")
        if problems:
            detail = "; ".join(problems + notes) + (
                f" (nearest-pole rule gives Class_0={sorted(s.class0)}, Class_1={sorted(s.class1)}, "
                f"Class_H={sorted(s.class_h)})"
            )
            out.append(Finding(f"scheme table row {name}", False, detail))
        else:
            out.append(Finding(f"scheme table row {name}", True, "; ".join(notes) or "identical"))
    return out


def computed_minterms(gate: str, bit: int, form: str) -> tuple[int, ...]:
    s = build_scheme(3, 2, 5)
    if gate == "T_Or":
        spec = tolerant_gate(s, OR)
    elif gate == "T_And":
        spec = tolerant_gate(s, AND)
    elif gate == "T_Not":
        spec = tolerant_gate(s, NOT)
    elif gate == "XOR":
        spec = synthesize_function(s, XOR)
    else:
        spec = translator(s, CONVENTIONAL)
    lists = spec.minterms_per_bit
    return (lists.sop if form == "SOP" else lists.pos)[bit - 1]


def minterm_findings() -> list[Finding]:
    out = []
    for gate, bit, form, printed in MINTERM_LISTINGS:
        comp = computed_minterms(gate, bit, form)
        sym = "Σ" if form == "SOP" else "Π"
        item = f"{gate}_{bit} {sym} listing"
        if set(comp) == set(printed) and len(printed) == len(set(printed)):
            out.append(Finding(item, True, "identical"))
        else:
            out.append(Finding(item, False, _set_diff(comp, printed)))
    return out


def translator_findings() -> list[Finding]:
    s = build_scheme(3, 2, 5)
    down = list(translator(s, CONVENTIONAL).table)
    up = list(translator(CONVENTIONAL, s).table)
    return [
        Finding("translator (2,5)_3 -> (0,1)_1 truth table", down == TRANSLATOR_DOWN,
                "identical" if down == TRANSLATOR_DOWN else f"computed {down}, printed {TRANSLATOR_DOWN}"),
        Finding("translator (0,1)_1 -> (2,5)_3 truth table", up == TRANSLATOR_UP,
                "identical" if up == TRANSLATOR_UP else f"computed {up}, printed {TRANSLATOR_UP}"),
    ]


def xor_pair_findings() -> list[Finding]:
    spec = synthesize_function(build_scheme(3, 2, 5), XOR)
    comp = set(spec.pole_input_set(1))
    printed = set(XOR_POLE1_PAIRS)
    return [Finding("XOR pole-1 input pair set", comp == printed,
                    f"{len(comp)} pairs, " + _set_diff(comp, printed))]


def five_bit_findings() -> list[Finding]:
    p0, p1, n = FIVE_BIT_SCHEME
    s = build_scheme(n, p0, p1)
    q = scheme_quality(s)
    out = [
        Finding(f"{s.notation} quality", True,
                f"pole distance {q.pole_distance}, Class_H empty {q.class_h_empty}, "
                f"correctable distance {q.max_correctable_distance}, "
                f"class sizes {len(s.class0)}+{len(s.class1)}"),
        Finding(f"{s.notation} header poles", FIVE_BIT_HEADER_POLES == (p0, p1),
                f"printed header poles {FIVE_BIT_HEADER_POLES}, scheme poles ({p0}, {p1})"),
    ]
    for label, comp, printed in (("Class_0", s.class0, FIVE_BIT_CLASS0), ("Class_1", s.class1, FIVE_BIT_CLASS1)):
        same = set(comp) == printed
        out.append(Finding(f"{s.notation} {label} listing", same,
                           f"computed {len(comp)} members, printed {len(printed)}; " + _set_diff(comp, printed)))
    return out


def bound_findings(widths=range(1, 9)) -> list[Finding]:
    """Stated "up to n/2 bits" against the best complement-pole scheme per width."""
    out = []
    for n in widths:
        s = build_scheme(n, 0, (1 << n) - 1)
        got = scheme_quality(s).max_correctable_distance
        stated = n / 2
        out.append(Finding(f"correction bound n={n}", got == stated,
                           f"computed {got} for {s.notation}, stated n/2 = {stated:g}"))
    return out


def count_findings() -> list[Finding]:
    from .coding import enumerate_schemes

    out = []
    for n, printed in SCHEME_COUNTS.items():
        got = len(enumerate_schemes(n))
        out.append(Finding(f"scheme count n={n}", got == printed, f"computed {got}, printed {printed}"))
    return out


def all_findings() -> list[Finding]:
    return (
        count_findings()
        + scheme_row_findings(ONE_BIT_ROWS, 1)
        + scheme_row_findings(TWO_BIT_ROWS, 2)
        + scheme_row_findings(THREE_BIT_ROWS, 3)
        + minterm_findings()
        + xor_pair_findings()
        + translator_findings()
        + five_bit_findings()
        + bound_findings()
    )


def conformance_report() -> str:
    findings = all_findings()
    bad = sum(not f.matches for f in findings)
    lines = ["Conformance against published reference tables",
             f"{len(findings)} items, {len(findings) - bad} match, {bad} diverge", ""]
    lines += [f.line() for f in findings]
    return "\n".join(lines) + "\n"
