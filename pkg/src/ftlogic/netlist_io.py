"""Reader and writer for the line-based netlist format.

::

    # comment
    width 3
    scheme (2,5)_3
    policy AsZero
    input net1
    output net7_out
    gate g_net3 TNOT net3 net1
    gate tr_net7 TRANS net7_out net7 from=(2,5)_3 to=(0,1)_1
    gate vote_f MAJ f f__r0 f__r1 f__r2
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .circuit import CONVENTIONAL_KINDS, TOLERANT_KINDS, Gate, Netlist, NetlistError
from .coding import HPolicy, parse_scheme
from .synth import tolerant_gate, translator


class NetlistSyntaxError(NetlistError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None, gate: str | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {column}" if column is not None else "") + ": "
        super().__init__(where + message, gate)
        self.line = line
        self.column = column


def _tokens(line: str):
    """Yield (column, token) pairs, columns 1-based."""
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        yield i + 1, line[i:j]
        i = j


def parse_netlist(text: str, name: str = "") -> Netlist:
    width = 1
    scheme = None
    policy = HPolicy.AS_ZERO
    inputs, outputs, raw_gates = [], [], []
    gate_lines: dict[str, int] = {}
    drivers: dict[str, int] = {}

    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        toks = list(_tokens(line))
        if not toks:
            continue
        (col, head), args = toks[0], toks[1:]
        if head == "width":
            if len(args) != 1 or not args[0][1].isdigit():
                raise NetlistSyntaxError("expected 'width <n>'", lineno, col)
            width = int(args[0][1])
        elif head == "scheme":
            if len(args) != 1:
                raise NetlistSyntaxError("expected 'scheme (p0,p1)_n'", lineno, col)
            try:
                scheme = parse_scheme(args[0][1])
            except ValueError as exc:
                raise NetlistSyntaxError(str(exc), lineno, args[0][0]) from None
        elif head == "policy":
            if len(args) != 1:
                raise NetlistSyntaxError("expected 'policy <AsZero|AsOne|Strict>'", lineno, col)
            try:
                policy = HPolicy.parse(args[0][1])
            except ValueError as exc:
                raise NetlistSyntaxError(str(exc), lineno, args[0][0]) from None
        elif head in ("input", "output"):
            if len(args) != 1:
                raise NetlistSyntaxError(f"expected '{head} <net>'", lineno, col)
            net = args[0][1]
            if head == "input":
                if net in drivers:
                    raise NetlistSyntaxError(f"net {net!r} has multiple drivers", lineno, args[0][0])
                drivers[net] = lineno
                inputs.append(net)
            else:
                outputs.append(net)
        elif head == "gate":
            if len(args) < 3:
                raise NetlistSyntaxError("expected 'gate <id> <KIND> <out_net> <in_net...>'", lineno, col)
            (_, gid), (kcol, kind), (ocol, out) = args[:3]
            if kind not in CONVENTIONAL_KINDS and kind not in TOLERANT_KINDS and kind not in ("TRANS", "MAJ"):
                raise NetlistSyntaxError(f"unknown gate kind {kind!r}", lineno, kcol, gid)
            if gid in gate_lines:
                raise NetlistSyntaxError(f"duplicate gate id {gid!r}", lineno, args[0][0], gid)
            if out in drivers:
                raise NetlistSyntaxError(
                    f"net {out!r} has multiple drivers (first at line {drivers[out]})", lineno, ocol, gid
                )
            drivers[out] = lineno
            gate_lines[gid] = lineno
            nets, attrs = [], {}
            for acol, tok in args[3:]:
                if "=" in tok:
                    key, _, value = tok.partition("=")
                    attrs[key] = (acol, value)
                else:
                    nets.append(tok)
            raw_gates.append((lineno, gid, kind, out, nets, attrs))
        else:
            raise NetlistSyntaxError(f"unknown directive {head!r}", lineno, col)

    if not outputs:
        raise NetlistSyntaxError("no outputs declared")

    specs = {}
    gates = []
    for lineno, gid, kind, out, nets, attrs in raw_gates:
        spec = None
        if kind in TOLERANT_KINDS:
            if scheme is None:
                raise NetlistSyntaxError(f"{kind} needs a file-level 'scheme' directive", lineno, gate=gid)
            if kind not in specs:
                try:
                    specs[kind] = tolerant_gate(scheme, TOLERANT_KINDS[kind], policy)
                except ValueError as exc:
                    raise NetlistSyntaxError(str(exc), lineno, gate=gid) from None
            spec = specs[kind]
        elif kind == "TRANS":
            ends = []
            for key in ("from", "to"):
                if key not in attrs:
                    raise NetlistSyntaxError(f"TRANS needs a '{key}=' scheme attribute", lineno, gate=gid)
                acol, value = attrs[key]
                try:
                    ends.append(parse_scheme(value))
                except ValueError as exc:
                    raise NetlistSyntaxError(str(exc), lineno, acol, gid) from None
            try:
                spec = translator(ends[0], ends[1], policy)
            except ValueError as exc:
                raise NetlistSyntaxError(str(exc), lineno, gate=gid) from None
        unknown = set(attrs) - ({"from", "to"} if kind == "TRANS" else set())
        if unknown:
            key = sorted(unknown)[0]
            raise NetlistSyntaxError(f"unexpected attribute {key!r}", lineno, attrs[key][0], gid)
        try:
            gates.append(Gate(gid, kind, out, tuple(nets), spec))
        except NetlistError as exc:
            raise NetlistSyntaxError(str(exc), lineno, gate=gid) from None

    try:
        return Netlist(tuple(inputs), tuple(outputs), tuple(gates), width, scheme, policy, name)
    except NetlistError as exc:
        line = gate_lines.get(exc.gate) if exc.gate else None
        raise NetlistSyntaxError(str(exc), line, gate=exc.gate) from None


def serialize_netlist(netlist: Netlist) -> str:
    lines = []
    if netlist.name:
        lines.append(f"# {netlist.name}")
    lines.append(f"width {netlist.width}")
    if netlist.scheme is not None:
        lines.append(f"scheme {netlist.scheme.notation}")
    if netlist.h_policy is not HPolicy.AS_ZERO:
        lines.append(f"policy {netlist.h_policy.value}")
    lines += [f"input {n}" for n in netlist.inputs]
    lines += [f"output {n}" for n in netlist.outputs]
    for g in netlist.gates:
        parts = ["gate", g.id, g.kind, g.output, *g.inputs]
        if g.kind in TOLERANT_KINDS:
            if netlist.scheme is None or g.spec.scheme != netlist.scheme or g.spec.h_policy is not netlist.h_policy:
                raise NetlistError(f"gate {g.id}: tolerant gate scheme differs from the netlist scheme", g.id)
        elif g.kind == "TFUNC":
            raise NetlistError(f"gate {g.id}: synthesized function gates have no textual form", g.id)
        elif g.kind == "TRANS":
            if g.spec.h_policy is not netlist.h_policy:
                raise NetlistError(f"gate {g.id}: translator policy differs from the netlist policy", g.id)
            parts += [f"from={g.spec.from_scheme.notation}", f"to={g.spec.to_scheme.notation}"]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def load_netlist(path) -> Netlist:
    path = Path(path)
    return parse_netlist(path.read_text(encoding="utf-8"), name=path.stem)


def save_netlist(netlist: Netlist, path) -> None:
    Path(path).write_text(serialize_netlist(netlist), encoding="utf-8")


FIXTURES = ("xor_conventional", "xor_(2,5)_3", "xor_tmr", "xor_5mr")


def load_fixture(name: str) -> Netlist:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    text = resources.files("ftlogic").joinpath("fixtures", f"{name}.net").read_text(encoding="utf-8")
    return parse_netlist(text, name=name)


def resolve_netlist(ref: str) -> Netlist:
    """Load a netlist by file path or shipped fixture name."""
    if ref in FIXTURES:
        return load_fixture(ref)
    return load_netlist(ref)
