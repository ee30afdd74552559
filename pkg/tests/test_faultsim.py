import math

import numpy as np
import pytest

from ftlogic.circuit import Gate, Netlist
from ftlogic.faultsim import (
    FaultPlan,
    default_p_values,
    inject_and_evaluate,
    logic_inputs,
    popcount,
    run_batch,
    run_trials,
    simulate_batch,
    sweep,
    uniform_draws,
)
from ftlogic.netlist_io import load_fixture, parse_netlist

TOLERANT_GATES = ("g_net3", "g_net4", "g_net5", "g_net6", "g_net7")


@pytest.fixture(scope="module")
def tol():
    return load_fixture("xor_(2,5)_3")


@pytest.fixture(scope="module")
def conv():
    return load_fixture("xor_conventional")


def all_word_pairs():
    a, b = np.meshgrid(np.arange(8), np.arange(8), indexing="ij")
    return {"net1": a.ravel(), "net2": b.ravel()}


class TestPlan:
    def test_bounds(self):
        with pytest.raises(ValueError):
            FaultPlan(1.5)
        with pytest.raises(ValueError):
            FaultPlan(0.1, {"g": -0.1})

    def test_rate(self):
        plan = FaultPlan(0.1, {"a": 0.3}, {"b"})
        assert (plan.rate("a"), plan.rate("b"), plan.rate("c")) == (0.3, 0.0, 0.1)

    def test_system_excludes_boundary(self, tol):
        assert FaultPlan.system(tol, 0.1).excluded == {"tr_net7"}
        assert FaultPlan.system(tol, 0.1, include_boundary=True).excluded == frozenset()


class TestInjection:
    def test_zero_probability(self, tol):
        rec = inject_and_evaluate(tol, {"net1": 2, "net2": 5}, FaultPlan(0.0, seed=3))
        assert rec.faulty == rec.golden and rec.output_correct
        assert all(v == 0 for v in rec.injected.values())

    def test_certain_flip(self):
        net = Netlist(("a",), ("y",), (Gate("g", "NOT", "y", ("a",)),))
        batch = run_batch(net, FaultPlan(1.0, seed=1), 50, "exhaustive")
        assert np.all(batch.faulty["y"] == batch.golden["y"] ^ 1)
        assert not batch.output_correct.any()

    def test_downstream_sees_flip(self, conv):
        rec = inject_and_evaluate(conv, {"net1": 0, "net2": 1}, FaultPlan(forced={"g_net3": 1}))
        assert rec.faulty["net3"] == 0 and rec.golden["net3"] == 1
        assert rec.golden["net7"] == 1
        assert rec.faulty["net6"] == 0 and rec.faulty["net7"] == 0
        assert not rec.output_correct

    def test_single_flips_after_first_gate_are_masked(self, tol):
        cases = 0
        for k in range(3):
            batch = simulate_batch(tol, all_word_pairs(), FaultPlan(forced={"g_net3": 1 << k}))
            assert batch.output_correct.all()
            cases += len(batch.trials)
        assert cases == 192

    def test_trial_stream_independent_of_batch(self, tol):
        plan = FaultPlan(0.2, seed=11)
        records, _ = run_trials(tol, plan, 40)
        single = inject_and_evaluate(tol, records[37].inputs, plan, trial_index=37)
        assert single == records[37]

    def test_adding_gate_keeps_other_draws(self, conv):
        extra = Netlist(conv.inputs, conv.outputs + ("z",),
                        conv.gates + (Gate("g_extra", "NOT", "z", ("net7",)),))
        plan = FaultPlan(0.3, seed=5)
        a = run_batch(conv, plan, 200)
        b = run_batch(extra, plan, 200)
        for g in conv.gates:
            assert np.array_equal(a.injected[g.output], b.injected[g.output])

    def test_draws_keyed_by_trial(self):
        rows = uniform_draws(9, "g", np.arange(10), 3)
        assert np.array_equal(uniform_draws(9, "g", [7, 2], 3), rows[[7, 2]])
        assert not np.array_equal(uniform_draws(9, "h", [7], 3), rows[[7]])

    def test_excluded_never_flip(self, tol):
        plan = FaultPlan(0.0, {"tr_net7": 0.9}, {"tr_net7"}, seed=2)
        batch = run_batch(tol, plan, 500)
        assert np.array_equal(batch.faulty["net7_out"], batch.golden["net7_out"])

    def test_injected_bit_rate_within_5_sigma(self, tol):
        p, trials = 0.05, 10_000
        plan = FaultPlan.system(tol, p, seed=13)
        batch = run_batch(tol, plan, trials)
        bits = 5 * 3  # five tolerant gates, three output bits each
        mean = batch.inserted_bits / trials
        sigma = math.sqrt(bits * p * (1 - p) / trials)
        assert abs(mean - p * bits) <= 5 * sigma

    def test_injected_at_most_width(self, tol):
        batch = run_batch(tol, FaultPlan(0.9, seed=1), 300)
        for net, counts in batch.injected.items():
            assert counts.max() <= tol.net_widths[net]


class TestCorrectionProperties:
    def test_single_flip_on_any_tolerant_gate_is_masked(self, tol):
        for gid in TOLERANT_GATES:
            for k in range(3):
                batch = simulate_batch(tol, all_word_pairs(), FaultPlan(forced={gid: 1 << k}))
                assert batch.output_correct.all(), (gid, k)

    def test_flip_at_translator_output_always_corrupts(self, tol):
        batch = simulate_batch(tol, all_word_pairs(), FaultPlan(forced={"tr_net7": 1}))
        assert not batch.output_correct.any()

    def test_double_flip_can_escape(self, tol):
        batch = simulate_batch(tol, all_word_pairs(), FaultPlan(forced={"g_net3": 0b011}))
        assert not batch.output_correct.all()


class TestRunTrials:
    def test_snapshot_targeted_net3(self, tol):
        records, profile = run_trials(tol, FaultPlan.targeted("g_net3", 0.005, seed=7), 1000)
        assert profile.counts["net3"] == (19, 0, 0)
        assert all(r.output_correct for r in records)
        assert all(profile.counts[n] == (0, 0, 0) for n in ("net4", "net5", "net6", "net7"))

    def test_zero_profile(self, tol):
        _, profile = run_trials(tol, FaultPlan(0.0), 1)
        assert all(sum(c) == 0 for c in profile.counts.values())

    def test_same_seed_same_records(self, tol):
        plan = FaultPlan(0.1, seed=99)
        assert run_trials(tol, plan, 300) == run_trials(tol, plan, 300)

    def test_different_seed_differs(self, tol):
        a, _ = run_trials(tol, FaultPlan(0.1, seed=1), 300)
        b, _ = run_trials(tol, FaultPlan(0.1, seed=2), 300)
        assert a != b

    def test_trials_must_be_positive(self, tol):
        with pytest.raises(ValueError):
            run_trials(tol, FaultPlan(), 0)

    def test_profile_csv(self, tol):
        _, profile = run_trials(tol, FaultPlan.targeted("g_net5", 0.3, seed=1), 200)
        lines = profile.to_csv().splitlines()
        assert lines[0] == "net,errors_1bit,errors_2bit,errors_3bit,trials"
        assert len(lines) == 1 + len(tol.nets)
        for row in lines[1:]:
            cells = row.split(",")
            assert sum(map(int, cells[1:4])) <= int(cells[4]) == 200

    def test_dump_csv(self, tol):
        batch = run_batch(tol, FaultPlan(0.2, seed=4), 3)
        lines = batch.dump_csv().splitlines()
        assert lines[0] == "trial,net,golden_value,faulty_value,flipped_bits_injected,mismatch_bits"
        assert len(lines) == 1 + 3 * len(tol.nets)

    def test_exhaustive_inputs(self):
        bits = logic_inputs(2, 6, "exhaustive")
        assert bits.tolist() == [[0, 0], [0, 1], [1, 0], [1, 1], [0, 0], [0, 1]]

    def test_uniform_inputs_seeded(self):
        assert np.array_equal(logic_inputs(2, 50, "uniform", 3), logic_inputs(2, 50, "uniform", 3))
        with pytest.raises(ValueError):
            logic_inputs(2, 5, "gaussian")

    def test_popcount(self):
        assert popcount(np.array([0, 1, 7, 5, 1 << 12])).tolist() == [0, 1, 3, 2, 1]


class TestSweep:
    def test_default_grid(self):
        ps = default_p_values()
        assert len(ps) == 20 and ps[0] == 0.01 and ps[-1] == 0.2

    def test_p_zero_is_fully_available(self, tol, conv):
        nets = {"tol": tol, "conv": conv, "tmr": load_fixture("xor_tmr")}
        report = sweep(nets, [0.0], 500, seed=1)
        assert all(pt.availability == 1 for pt in report.points)
        assert all(pt.tolerance_rate is None for pt in report.points)

    def test_empty_p_rejected(self, tol):
        with pytest.raises(ValueError):
            sweep({"tol": tol}, [], 10)

    def test_interface_mismatch_rejected(self, tol):
        other = parse_netlist("input a\noutput y\ngate g NOT y a\n")
        with pytest.raises(ValueError, match="interface"):
            sweep({"tol": tol, "inv": other}, [0.1], 10)

    def test_function_mismatch_rejected(self, tol):
        other = parse_netlist("input a\ninput b\noutput y\ngate g AND y a b\n")
        with pytest.raises(ValueError, match="different logic function"):
            sweep({"tol": tol, "and": other}, [0.1], 10)

    def test_tolerant_beats_conventional(self, tol, conv):
        report = sweep({"tol": tol, "conv": conv}, default_p_values(), 10_000, seed=3)
        for a, b in zip(report.series("tol"), report.series("conv")):
            assert a.availability >= b.availability

    def test_monotone_with_3_sigma_margin(self, tol, conv):
        nets = {"tol": tol, "conv": conv, "tmr": load_fixture("xor_tmr"), "5mr": load_fixture("xor_5mr")}
        report = sweep(nets, [0.01, 0.2], 10_000, seed=5)
        for label in nets:
            lo, hi = report.series(label)
            a_lo, a_hi = float(lo.availability), float(hi.availability)
            sigma = math.sqrt(a_lo * (1 - a_lo) / lo.trials + a_hi * (1 - a_hi) / hi.trials)
            assert a_lo >= a_hi - 3 * sigma

    def test_counts_consistent(self, tol):
        report = sweep({"tol": tol}, [0.05, 0.1], 1000, seed=2)
        for pt in report.points:
            assert pt.correct + pt.incorrect == pt.trials == 1000
            assert pt.inserted_error_bits > 0
