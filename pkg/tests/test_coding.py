import itertools

import pytest
from hypothesis import given, strategies as st

from ftlogic.coding import (
    ClassLabel,
    Codeword,
    FiniteMetricSpace,
    HPolicy,
    UncorrectableCodeError,
    build_scheme,
    classify,
    correct,
    enumerate_schemes,
    generalized_decode,
    hamming_distance,
    parse_scheme,
    rank_schemes,
    scheme_quality,
)


def popcount_oracle(x, y, n):
    """Bitwise string comparison, independent of int.bit_count."""
    a, b = format(x, f"0{n}b"), format(y, f"0{n}b")
    return sum(ca != cb for ca, cb in zip(a, b))


def nearest_pole_oracle(n, p0, p1):
    c0, c1, ch = set(), set(), set()
    for c in range(2**n):
        d0, d1 = popcount_oracle(c, p0, n), popcount_oracle(c, p1, n)
        (c0 if d0 < d1 else c1 if d1 < d0 else ch).add(c)
    return c0, c1, ch


def schemes_up_to(n_max):
    return [s for n in range(1, n_max + 1) for s in enumerate_schemes(n)]


class TestHammingDistance:
    def test_all_bits_differ(self):
        assert hamming_distance(0b010, 0b101) == 3

    def test_identity(self):
        assert hamming_distance(Codeword(5, 3), Codeword(5, 3)) == 0

    def test_against_oracle(self):
        assert hamming_distance(0b000, 0b011) == popcount_oracle(0, 3, 3) == 2

    def test_width_mismatch(self):
        with pytest.raises(ValueError, match="width mismatch"):
            hamming_distance(Codeword(1, 2), Codeword(1, 3))

    @given(st.integers(1, 16).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1), st.integers(0, 2**n - 1))))
    def test_matches_oracle(self, args):
        n, x, y = args
        assert hamming_distance(Codeword(x, n), Codeword(y, n)) == popcount_oracle(x, y, n)


def test_codeword_range():
    with pytest.raises(ValueError):
        Codeword(8, 3)
    with pytest.raises(ValueError):
        Codeword(0, 17)


class TestBuildScheme:
    def test_two_five(self):
        s = build_scheme(3, 2, 5)
        assert s.class0 == (0, 2, 3, 6)
        assert s.class1 == (1, 4, 5, 7)
        assert s.class_h == ()

    def test_two_bit_nearby(self):
        s = build_scheme(2, 1, 3)
        assert set(s.class0) == {1, 0} and set(s.class1) == {3, 2} and not s.class_h

    def test_zero_three_brute_force(self):
        s = build_scheme(3, 0, 3)
        assert (set(s.class0), set(s.class1), set(s.class_h)) == ({0, 4}, {3, 7}, {1, 2, 5, 6})

    @pytest.mark.parametrize("args", [(3, 4, 4), (3, 0, 8), (3, -1, 2), (17, 0, 1)])
    def test_rejects(self, args):
        with pytest.raises(ValueError):
            build_scheme(*args)

    def test_exhaustive_against_oracle(self):
        for s in schemes_up_to(4):
            c0, c1, ch = nearest_pole_oracle(s.width, s.pole0, s.pole1)
            assert (set(s.class0), set(s.class1), set(s.class_h)) == (c0, c1, ch), s.notation

    def test_partition_invariants(self):
        for s in schemes_up_to(4):
            assert s.classify(s.pole0) is ClassLabel.CLASS0
            assert s.classify(s.pole1) is ClassLabel.CLASS1
            assert len(s.class0) + len(s.class1) + len(s.class_h) == s.size
            for c in s.class0:
                assert s.transition[c] == s.pole0
            for c in s.class1:
                assert s.transition[c] == s.pole1
            for c in s.class_h:
                assert s.transition[c] is None


class TestNotation:
    def test_roundtrip(self):
        assert str(parse_scheme("(2,5)_3")) == "(2,5)_3"
        assert parse_scheme(" ( 10 , 21 )_5 ").notation == "(10,21)_5"

    def test_subscript_digits(self):
        assert parse_scheme("(2,5)₃") == build_scheme(3, 2, 5)

    @pytest.mark.parametrize("bad", ["2,5_3", "(2,5)", "(a,b)_3", "(2,2)_3", ""])
    def test_bad(self, bad):
        with pytest.raises(ValueError):
            parse_scheme(bad)


class TestClassifyCorrect:
    def test_classify(self):
        assert classify(build_scheme(3, 2, 5), 6) is ClassLabel.CLASS0
        assert classify(build_scheme(3, 0, 7), 3) is ClassLabel.CLASS1
        assert classify(build_scheme(3, 0, 3), 5) is ClassLabel.CLASS_H

    def test_classify_width_mismatch(self):
        with pytest.raises(ValueError):
            classify(build_scheme(3, 2, 5), Codeword(1, 2))

    def test_correct(self):
        s = build_scheme(3, 2, 5)
        assert correct(s, 0) == 2
        assert correct(s, 2) == 2

    def test_strict_on_class_h(self):
        with pytest.raises(UncorrectableCodeError):
            correct(build_scheme(3, 0, 3), 5, HPolicy.STRICT)

    def test_policies(self):
        s = build_scheme(3, 0, 3)
        assert correct(s, 5, HPolicy.AS_ZERO) == 0
        assert correct(s, 5, HPolicy.AS_ONE) == 3

    def test_idempotent(self):
        for s in schemes_up_to(4):
            for c in range(s.size):
                if s.classify(c) is not ClassLabel.CLASS_H:
                    once = s.correct(c)
                    assert s.correct(once) == once

    def test_tmr_equivalence(self):
        s = build_scheme(3, 0, 7)
        for c in range(8):
            bits = [(c >> k) & 1 for k in range(3)]
            majority = 1 if sum(bits) >= 2 else 0
            assert s.correct(c) == (0b111 if majority else 0b000)


def test_pole_swap_symmetry():
    for s in schemes_up_to(3):
        t = build_scheme(s.width, s.pole1, s.pole0)
        assert t.class0 == s.class1 and t.class1 == s.class0 and t.class_h == s.class_h


def test_complement_poles_odd_width_have_no_class_h():
    for n in (1, 3, 5, 7):
        mask = 2**n - 1
        for p in range(0, 2**n, max(1, 2**n // 16)):
            assert build_scheme(n, p, p ^ mask).class_h == ()


class TestEnumerate:
    @pytest.mark.parametrize("n,count", [(1, 2), (2, 12), (3, 56), (4, 240)])
    def test_counts(self, n, count):
        assert len(enumerate_schemes(n)) == count == 2**n * (2**n - 1)

    def test_order(self):
        pairs = [(s.pole0, s.pole1) for s in enumerate_schemes(2)]
        assert pairs == sorted(pairs)

    @pytest.mark.parametrize("n", [0, 9])
    def test_out_of_range(self, n):
        with pytest.raises(ValueError):
            enumerate_schemes(n)

    def test_n8_is_lazy_enough(self):
        assert len(enumerate_schemes(8)) == 256 * 255


class TestQuality:
    def test_zero_seven(self):
        q = scheme_quality(build_scheme(3, 0, 7))
        assert (q.pole_distance, q.class_h_empty, q.max_correctable_distance) == (3, True, 1)

    def test_one_three(self):
        q = scheme_quality(build_scheme(3, 1, 3))
        assert (q.pole_distance, q.class_h_empty, q.max_correctable_distance) == (1, True, 2)

    def test_ten_twentyone(self):
        q = scheme_quality(build_scheme(5, 10, 21))
        assert (q.pole_distance, q.class_h_empty, q.max_correctable_distance) == (5, True, 2)

    def test_conventional(self):
        q = scheme_quality(build_scheme(1, 0, 1))
        assert (q.pole_distance, q.max_correctable_distance) == (1, 0)

    def test_complement_bound(self):
        for n in (1, 2, 3, 4, 5):
            mask = 2**n - 1
            for p in range(2**n):
                s = build_scheme(n, p, p ^ mask)
                q = scheme_quality(s)
                if q.class_h_empty:
                    assert q.max_correctable_distance <= (q.pole_distance - 1) // 2


class TestRank:
    def test_three_bit_top_are_complements(self):
        top = rank_schemes(3)[:8]
        assert all(s.pole0 ^ s.pole1 == 7 for s, _ in top)
        table_rows = {(0, 7), (7, 0), (1, 6), (6, 1), (2, 5), (5, 2)}
        assert table_rows <= {(s.pole0, s.pole1) for s, _ in top}

    def test_one_bit_tie(self):
        ranked = rank_schemes(1)
        assert [(q.pole_distance, q.max_correctable_distance) for _, q in ranked] == [(1, 0), (1, 0)]
        assert [(s.pole0, s.pole1) for s, _ in ranked] == [(0, 1), (1, 0)]

    def test_two_bit_class_h_dominates(self):
        ranked = rank_schemes(2)
        assert [q.pole_distance for _, q in ranked[:8]] == [1] * 8
        assert all(q.pole_distance == 2 and not q.class_h_empty for _, q in ranked[8:])


class TestGeneralizedDecode:
    def test_pole_is_fixed(self):
        space = FiniteMetricSpace.hamming(3)
        assert generalized_decode(space, 2, 5, 5) == 5

    def test_three_points(self):
        space = FiniteMetricSpace.from_pairs("abc", {("c", "a"): 1, ("c", "b"): 2, ("a", "b"): 3})
        assert generalized_decode(space, "a", "b", "c") == "a"

    def test_tie_policy(self):
        space = FiniteMetricSpace.from_pairs("abc", {("c", "a"): 1, ("c", "b"): 1, ("a", "b"): 2})
        assert generalized_decode(space, "a", "b", "c") == "a"
        assert generalized_decode(space, "a", "b", "c", tie="b") == "b"

    def test_agrees_with_correct_exhaustive(self):
        for n in range(1, 5):
            space = FiniteMetricSpace.hamming(n)
            for s in enumerate_schemes(n):
                for c in range(s.size):
                    if s.classify(c) is not ClassLabel.CLASS_H:
                        assert generalized_decode(space, s.pole0, s.pole1, c) == s.correct(c)

    def test_invalid_metric(self):
        with pytest.raises(ValueError):
            FiniteMetricSpace.from_matrix("ab", [[0, 1], [2, 0]])
        with pytest.raises(ValueError):
            FiniteMetricSpace.from_matrix("ab", [[1, 1], [1, 0]])

    def test_unknown_point(self):
        with pytest.raises(ValueError):
            generalized_decode(FiniteMetricSpace.hamming(2), 0, 3, 9)


def test_schemes_are_hashable_and_comparable():
    assert len({build_scheme(3, 2, 5), parse_scheme("(2,5)_3")}) == 1
    assert list(itertools.islice(enumerate_schemes(3), 1))[0].notation == "(0,1)_3"
