"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 bad input data, 4 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from decimal import Decimal, InvalidOperation
from pathlib import Path

from . import conformance
from .circuit import NetlistError, build_nmr, substitute
from .coding import CONVENTIONAL, HPolicy, enumerate_schemes, parse_scheme, rank_schemes, scheme_quality
from .faultsim import FaultPlan, INPUT_SOURCES, default_p_values, run_batch, sweep
from .metrics import SweepReport, emit_report
from .netlist_io import FIXTURES, load_fixture, resolve_netlist, save_netlist
from .synth import AND, NOT, OR, XOR, custom_op, synthesize_function, tolerant_gate, translator

log = logging.getLogger("ftlogic")

EXIT_USAGE, EXIT_DATA, EXIT_RUNTIME = 2, 3, 4
OUT_ENV = "FTLOGIC_OUT"
ALIASES = {"xor_tol": "xor_(2,5)_3", "xor_conv": "xor_conventional", "xor_tmr": "xor_tmr", "xor_5mr": "xor_5mr"}
OPS = {"and": AND, "tand": AND, "or": OR, "tor": OR, "not": NOT, "tnot": NOT, "xor": XOR}


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def _scheme_arg(text):
    try:
        return parse_scheme(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _policy_arg(text):
    try:
        return HPolicy.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a non-negative 64-bit integer")
    return value


def parse_p_values(text: str) -> list[float]:
    """``start:stop:step`` (inclusive), a comma list, or a single value."""
    try:
        if ":" in text:
            start, stop, step = (Decimal(x) for x in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            values = []
            k = 0
            while start + k * step <= stop:
                values.append(float(start + k * step))
                k += 1
        else:
            values = [float(Decimal(x)) for x in text.split(",")]
    except (ValueError, InvalidOperation):
        raise argparse.ArgumentTypeError(f"bad probability spec {text!r}; use start:stop:step or a,b,c") from None
    if not values or any(not 0.0 <= v <= 1.0 for v in values):
        raise argparse.ArgumentTypeError(f"probabilities must lie in [0, 1]: {text!r}")
    return values


def _fmt_set(values) -> str:
    return "{" + ",".join(str(v) for v in values) + "}"


def _scheme_row(s, q) -> str:
    return "\t".join([str(s.pole0), str(s.pole1), _fmt_set(s.class0), _fmt_set(s.class1), _fmt_set(s.class_h),
                      str(q.pole_distance), str(q.max_correctable_distance)])


SCHEME_HEADER = "Pole Code_0\tPole Code_1\tClass_0\tClass_1\tClass_H\tDistance Between Poles\tMax Correctable Distance"


def _conformance_lines(match) -> list[str]:
    found = [f.line() for f in conformance.all_findings() if match(f.item)]
    return ["", "conformance:"] + (found or ["no published reference entry"])


def inspect_text(s) -> str:
    q = scheme_quality(s)
    faulty0 = len(s.class0) - 1
    faulty1 = len(s.class1) - 1
    lines = [
        f"scheme {s.notation}",
        f"Pole Code_0: {s.pole0} ({format(s.pole0, f'0{s.width}b')})",
        f"Pole Code_1: {s.pole1} ({format(s.pole1, f'0{s.width}b')})",
        f"Class_0: {_fmt_set(s.class0)}",
        f"Class_1: {_fmt_set(s.class1)}",
        f"Class_H: {_fmt_set(s.class_h)}",
        f"distance between poles: {q.pole_distance}",
        f"maximum correctable distance: {q.max_correctable_distance}",
        f"faulty codes: {faulty0} in Class_0, {faulty1} in Class_1, {len(s.class_h)} in Class_H",
        "transitions: " + " ".join(f"{c}->{'H' if t is None else t}" for c, t in enumerate(s.transition)),
    ]
    return "\n".join(lines)


def cmd_scheme(args) -> int:
    if args.action == "inspect":
        try:
            s = parse_scheme(args.target)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        lines = [inspect_text(s)]
        if args.conformance:
            lines += _conformance_lines(lambda item: s.notation in item)
    else:
        try:
            n = int(args.target)
            rows = enumerate_schemes(n) if args.action == "enumerate" else None
            ranked = rank_schemes(n) if args.action == "rank" else None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.action == "enumerate":
            pairs = [(s, scheme_quality(s)) for s in rows]
            title = f"{len(pairs)} pole selections in {n}-bit Hamming space"
        else:
            pairs = ranked[: args.top] if args.top else ranked
            title = f"pole selections in {n}-bit Hamming space, best first"
        lines = [title, SCHEME_HEADER] + [_scheme_row(s, q) for s, q in pairs]
        if args.conformance:
            lines += _conformance_lines(lambda item: f")_{n}" in item or item.endswith(f"n={n}"))
    print("\n".join(lines))
    return 0


def _truth_table(spec, in_width: int, out_width: int, arity: int) -> list[str]:
    names = ["a", "b"][:arity]
    lines = ["  ".join(n.ljust(in_width) for n in names) + "  f"]
    for idx, out in enumerate(spec.table):
        words = [idx] if arity == 1 else [idx >> in_width, idx & ((1 << in_width) - 1)]
        lines.append("  ".join(format(w, f"0{in_width}b") for w in words) + "  " + format(out, f"0{out_width}b"))
    return lines


def cmd_synth(args) -> int:
    s = args.scheme
    op = args.op.lower()
    try:
        if op == "trans":
            if args.target is None:
                raise UsageError("trans needs a target scheme, e.g. synth (2,5)_3 trans (0,1)_1")
            target = _scheme_arg(args.target)
            spec = translator(s, target, args.policy)
            prefix, title = "Tr", f"translator {s.notation} -> {target.notation}"
            in_w, out_w, arity = s.width, target.width, 1
        elif op == "custom":
            if not args.table or set(args.table) - {"0", "1"} or len(args.table) not in (2, 4):
                raise UsageError("custom needs --table of 2 or 4 binary digits, e.g. --table 0110")
            fn = custom_op("custom", [int(c) for c in args.table])
            spec = synthesize_function(s, fn, args.policy)
            prefix, title = "f", f"custom function {args.table} on {s.notation}"
            in_w, out_w, arity = s.width, s.width, fn.arity
        elif op in OPS:
            fn = OPS[op]
            spec = synthesize_function(s, fn, args.policy) if op == "xor" else tolerant_gate(s, fn, args.policy)
            prefix = "f" if op == "xor" else spec.name
            title = f"{prefix} on {s.notation}"
            in_w, out_w, arity = s.width, s.width, fn.arity
        else:
            raise UsageError(f"unknown operator {args.op!r}; use one of {sorted(OPS) + ['trans', 'custom']}")
    except argparse.ArgumentTypeError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise DataError(str(exc)) from None

    lists = spec.minterms_per_bit
    if args.format == "csv":
        text = lists.to_csv()
    else:
        lines = [f"{title} (Class_H policy {args.policy.value})"] + lists.lines(prefix)
        if args.format == "table":
            lines += [""] + _truth_table(spec, in_w, out_w, arity)
        text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(text)
    return 0


def _load(ref: str):
    ref = ALIASES.get(ref, ref)
    try:
        return resolve_netlist(ref)
    except FileNotFoundError:
        raise DataError(f"no such netlist file or fixture: {ref}") from None
    except NetlistError as exc:
        raise DataError(f"{ref}: {exc}") from None


def _summary(netlist) -> str:
    kinds = {}
    for g in netlist.gates:
        kinds[g.kind] = kinds.get(g.kind, 0) + 1
    parts = ", ".join(f"{k} x{v}" for k, v in sorted(kinds.items()))
    return (f"{len(netlist.gates)} gates ({parts}); {len(netlist.nets)} nets; "
            f"inputs {list(netlist.inputs)}; outputs {list(netlist.outputs)}")


def cmd_substitute(args) -> int:
    net = _load(args.netlist)
    try:
        out = substitute(net, args.scheme, args.policy, input_translators=args.input_translators,
                         output_translators=not args.no_output_translator)
    except NetlistError as exc:
        raise DataError(str(exc)) from None
    except ValueError as exc:
        raise DataError(str(exc)) from None
    save_netlist(out, args.output)
    print(f"wrote {args.output}: {_summary(out)}")
    return 0


def cmd_nmr(args) -> int:
    net = _load(args.netlist)
    if args.r % 2 == 0 or args.r < 3:
        raise UsageError(f"replication must be odd and >= 3, got {args.r}")
    out = build_nmr(net, args.r)
    save_netlist(out, args.output)
    print(f"wrote {args.output}: {_summary(out)}")
    return 0


def _out_dir(arg) -> Path:
    return Path(arg or os.environ.get(OUT_ENV) or "ftlogic-out")


def _p_tag(p: float) -> str:
    return repr(p).replace(".", "_")


def _profiles(netlists, plan_for, p, trials, source, out_dir, dump) -> list[Path]:
    from .plotting import plot_error_profile

    written = []
    for label, net in netlists.items():
        batch = run_batch(net, plan_for(net, p), trials, source)
        stem = out_dir / f"profile_{label}_p{_p_tag(p)}"
        path = stem.with_suffix(".csv")
        path.write_text(batch.profile().to_csv(), encoding="utf-8")
        svg = stem.with_suffix(".svg")
        plot_error_profile(batch.profile(), svg, title=f"{label}: error profile, p={p}, {trials} trials")
        written += [path, svg]
        if dump:
            dpath = out_dir / f"trials_{label}_p{_p_tag(p)}.csv"
            dpath.write_text(batch.dump_csv(), encoding="utf-8")
            written.append(dpath)
    return written


def run_simulation(netlists, p_values, trials, seed, out_dir, target_gate=None, source="uniform",
                   include_boundary=False, dump=False, stem="sweep") -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    if target_gate:
        for label, net in netlists.items():
            if target_gate not in {g.id for g in net.gates}:
                raise DataError(f"{label} has no gate {target_gate!r}")

    def plan_for(net, p):
        if target_gate:
            return FaultPlan.targeted(target_gate, p, seed)
        return FaultPlan.system(net, p, seed, include_boundary)

    if target_gate:
        report = _targeted_sweep(netlists, p_values, trials, seed, source, target_gate)
    else:
        try:
            report = sweep(netlists, p_values, trials, seed, source, include_boundary)
        except ValueError as exc:
            raise DataError(str(exc)) from None
    written = emit_report(report, out_dir, stem=stem)
    if len(p_values) == 1 or dump:
        for p in p_values:
            written += _profiles(netlists, plan_for, p, trials, source, out_dir, dump)
    return written


def _targeted_sweep(netlists, p_values, trials, seed, source, gate_id) -> SweepReport:
    from .faultsim import check_comparable
    from .metrics import SweepPoint
    import numpy as np

    try:
        check_comparable(netlists)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    points = []
    for label, net in netlists.items():
        for p in p_values:
            batch = run_batch(net, FaultPlan.targeted(gate_id, p, seed), trials, source)
            ok = int(np.count_nonzero(batch.output_correct))
            points.append(SweepPoint(label, p, trials, ok, trials - ok, batch.inserted_bits))
    return SweepReport(points)


def cmd_simulate(args) -> int:
    refs = args.compare.split(",") if args.compare else ["xor_tol"]
    netlists = {}
    for ref in refs:
        ref = ref.strip()
        label = Path(ref).stem if ref not in ALIASES and ref not in FIXTURES else ref
        netlists[label] = _load(ref)
    out_dir = _out_dir(args.out)
    written = run_simulation(netlists, args.p, args.trials, args.seed, out_dir, args.target_gate,
                             args.input_source, args.include_boundary, args.dump_trials)
    for path in written:
        print(f"wrote {path}")
    return 0


def reproduce(out_dir: Path, trials: int = 10000, profile_trials: int = 1000, seed: int = 7) -> list[Path]:
    """Regenerate every reference table, minterm listing and experiment into ``out_dir``."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name, text):
        path = out_dir / name
        path.write_text(text, encoding="utf-8")
        written.append(path)

    tables = []
    for n in (1, 2, 3):
        pairs = [(s, scheme_quality(s)) for s in enumerate_schemes(n)]
        tables += [f"{len(pairs)} pole selections in {n}-bit Hamming space", SCHEME_HEADER]
        tables += [_scheme_row(s, q) for s, q in pairs] + [""]
    for notation in ("(0,7)_3", "(2,5)_3", "(0,3)_3", "(1,3)_3", "(10,21)_5"):
        tables += [inspect_text(parse_scheme(notation)), ""]
    put("tables.txt", "\n".join(tables))

    s = parse_scheme("(2,5)_3")
    specs = {
        "t_or": tolerant_gate(s, OR), "t_and": tolerant_gate(s, AND), "t_not": tolerant_gate(s, NOT),
        "xor": synthesize_function(s, XOR),
        "tr_down": translator(s, CONVENTIONAL), "tr_up": translator(CONVENTIONAL, s),
    }
    prefixes = {"t_or": "T_Or", "t_and": "T_And", "t_not": "T_Not", "xor": "f", "tr_down": "Tr", "tr_up": "Tr"}
    listing = []
    for key, spec in specs.items():
        listing += [f"# {key}"] + spec.minterms_per_bit.lines(prefixes[key]) + [""]
        put(f"minterms_{key}.csv", spec.minterms_per_bit.to_csv())
    put("minterms.txt", "\n".join(listing))
    put("conformance.txt", conformance.conformance_report())

    tol = load_fixture("xor_(2,5)_3")
    single = {"xor_tol": tol}
    # net5 scenario uses p=0.05 as a stand-in for the unstated "higher probability"
    for gate, p in (("g_net3", 0.005), ("g_net5", 0.05)):
        written += run_simulation(single, [p], profile_trials, seed, out_dir / f"targeted_{gate}", target_gate=gate)
    written += run_simulation(single, [0.005], profile_trials, seed, out_dir / "whole_system")

    nets = {"xor_tol": tol, "xor_conv": load_fixture("xor_conventional"),
            "xor_tmr": load_fixture("xor_tmr"), "xor_5mr": load_fixture("xor_5mr")}
    report = sweep(nets, default_p_values(), trials, seed)
    written += emit_report(report, out_dir, stem="sweep_all")
    for other in ("xor_conv", "xor_tmr", "xor_5mr"):
        sub = SweepReport([pt for pt in report.points if pt.label in ("xor_tol", other)])
        written += emit_report(sub, out_dir, stem=f"sweep_tol_vs_{other.split('_')[1]}")
    return written


def cmd_reproduce(args) -> int:
    base = _out_dir(args.out)
    out_dir = base if args.no_timestamp else base / time.strftime("reproduce-%Y%m%d-%H%M%S")
    for path in reproduce(out_dir, args.trials, seed=args.seed):
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ftlogic", description="Fault-tolerant pole-coded Boolean logic toolkit.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scheme", help="inspect, enumerate or rank coding schemes")
    p.add_argument("action", choices=("inspect", "enumerate", "rank"))
    p.add_argument("target", help="scheme notation (p0,p1)_n for inspect, bit count n otherwise")
    p.add_argument("--top", type=_positive, help="rank: show only the best N")
    p.add_argument("--conformance", action="store_true", help="append divergences from published tables")
    p.set_defaults(func=cmd_scheme)

    p = sub.add_parser("synth", help="tolerant gate / translator minterm lists and truth tables")
    p.add_argument("scheme", type=_scheme_arg)
    p.add_argument("op", help="and|or|not|xor (t-prefixed aliases accepted), trans, or custom")
    p.add_argument("target", nargs="?", help="target scheme for trans")
    p.add_argument("--table", help="custom: output column, e.g. 0110 for XOR")
    p.add_argument("--policy", type=_policy_arg, default=HPolicy.AS_ZERO)
    p.add_argument("--format", choices=("text", "table", "csv"), default="table")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("substitute", help="rewrite a conventional netlist into tolerant gates")
    p.add_argument("netlist")
    p.add_argument("scheme", type=_scheme_arg)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--policy", type=_policy_arg, default=HPolicy.AS_ZERO)
    p.add_argument("--input-translators", action="store_true")
    p.add_argument("--no-output-translator", action="store_true")
    p.set_defaults(func=cmd_substitute)

    p = sub.add_parser("nmr", help="build an N-modular-redundant netlist with majority voters")
    p.add_argument("netlist")
    p.add_argument("-r", type=int, default=3)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_nmr)

    p = sub.add_parser("simulate", help="seeded fault-injection sweep")
    p.add_argument("--compare", help="comma-separated netlist paths or fixture names")
    p.add_argument("--p", type=parse_p_values, default=default_p_values(), help="start:stop:step or a,b,c")
    p.add_argument("--trials", type=_positive, default=10000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--target-gate", help="inject faults on this gate only")
    p.add_argument("--input-source", choices=INPUT_SOURCES, default="uniform")
    p.add_argument("--include-boundary", action="store_true", help="also fault translators and voters")
    p.add_argument("--dump-trials", action="store_true")
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./ftlogic-out)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reproduce", help="regenerate all tables, listings and experiments")
    p.add_argument("--out")
    p.add_argument("--trials", type=_positive, default=10000)
    p.add_argument("--seed", type=_seed, default=7)
    p.add_argument("--no-timestamp", action="store_true", help="write directly into --out")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ftlogic: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, NetlistError) as exc:
        print(f"ftlogic: input error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.debug("runtime failure", exc_info=True)
        print(f"ftlogic: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
