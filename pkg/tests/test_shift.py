"""Order patterns of one- and two-sided shifts."""
import itertools

import pytest
from hypothesis import given, strategies as st

from oracles import shift_patterns_by_digits
from ordpat.errors import (BadLength, DuplicateShifts, HypothesisViolated,
                           LengthTooLong, PeriodicCollision)
from ordpat.perm import (Pattern, all_patterns, elementary_extensions,
                         elementary_predecessors, mirror)
from ordpat.sequences import Bisequence, SymbolSequence
from ordpat.shift import (Family, Screen, SegmentPartition, Verdict, all_partitions,
                          classify_spiralling, is_allowed_for_shift, is_root_pattern,
                          named_forbidden_family, parse_spiralling, pattern_of_bisequence,
                          pattern_of_sequence, r4_blocks, r4_screen, shift_witness,
                          spiralling_pattern, witness_short_pattern)

# parse_spiralling reports the canonical form, whose first segment has length >= 2
partitions = st.tuples(st.integers(2, 3), st.lists(st.integers(1, 3), min_size=1, max_size=4)).map(
    lambda t: SegmentPartition((t[0],) + tuple(t[1])))


def r4_valid(block, pos, L):
    return all(pos[a + 1] < pos[b + 1]
               for i, a in enumerate(block) for b in block[i + 1:]
               if a <= L - 2 and b <= L - 2)


def ruled_out_by_search(p, N):
    """No placement of at most N-1 separators keeps every block R4-valid."""
    L = len(p)
    pos = {v: i for i, v in enumerate(p)}
    for k in range(N):
        for cuts in itertools.combinations(range(1, L), k):
            edges = (0,) + cuts + (L,)
            if all(r4_valid(p[a:b], pos, L) for a, b in zip(edges, edges[1:])):
                return False
    return True


class TestSequencePatterns:
    def test_sixteen_symbol_word(self):
        w = SymbolSequence(3, (2, 1, 1, 1, 2, 2, 0, 0, 1, 1, 0, 0, 2, 2, 2, 1), (0,))
        assert pattern_of_sequence(w, 14) == Pattern([6, 10, 7, 11, 9, 8, 1, 2, 3, 5, 0, 4, 13, 12])

    def test_collision(self):
        with pytest.raises(PeriodicCollision):
            pattern_of_sequence(SymbolSequence(2, (), (0, 1)), 3)

    def test_bisequence_pattern(self):
        b = Bisequence(SymbolSequence(2, (), (0,)), SymbolSequence(2, (1, 0), (1, 1, 0)))
        p = pattern_of_bisequence(b, 3)
        assert sorted(p) == [0, 1, 2]

    def test_bisequence_collision(self):
        # ...0101|0101... returns to itself after two shifts
        b = Bisequence(SymbolSequence(2, (), (1, 0)), SymbolSequence(2, (), (0, 1)))
        with pytest.raises(DuplicateShifts):
            pattern_of_bisequence(b, 3)


class TestSpiralling:
    def test_twelve_point_example(self):
        p = Pattern([9, 8, 7, 5, 2, 1, 0, 3, 4, 6, 10, 11])
        part, mirrored = parse_spiralling(p)
        assert part.lengths == (3, 2, 1, 1, 3, 2) and not mirrored
        assert spiralling_pattern(part) == p
        w = SymbolSequence(7, (3, 3, 2, 3, 4, 1, 5, 1, 1, 0, 5, 6), (0,))
        assert pattern_of_sequence(w, 12) == p

    @given(partitions, st.booleans())
    def test_parse_round_trip(self, part, mirrored):
        assert parse_spiralling(spiralling_pattern(part, mirrored)) == (part, mirrored)

    @given(partitions)
    def test_mirrored_is_mirror(self, part):
        assert spiralling_pattern(part, True) == mirror(spiralling_pattern(part))

    def test_non_spiral(self):
        assert parse_spiralling([0, 1, 2]) is None or parse_spiralling([0, 1, 2])[0].D >= 2
        assert parse_spiralling([1, 3, 0, 2]) is None

    def test_hypothesis_check(self):
        with pytest.raises(HypothesisViolated):
            classify_spiralling(SegmentPartition((1, 2)), 2)

    @pytest.mark.parametrize("N", [2, 3])
    def test_classifier_matches_census(self, N):
        for L in range(3, 7):
            for part in all_partitions(L, min_first=2):
                for m in (False, True):
                    p = spiralling_pattern(part, m)
                    want = Verdict.ALLOWED if is_allowed_for_shift(p, N) else Verdict.FORBIDDEN
                    assert classify_spiralling(part, N) == want, (part, m)


class TestScreen:
    def test_blocks_cover_pattern(self):
        p = Pattern([9, 8, 7, 5, 2, 1, 0, 3, 4, 6, 10, 11])
        blocks = r4_blocks(p)
        assert tuple(itertools.chain.from_iterable(blocks)) == tuple(p)
        pos = {v: i for i, v in enumerate(p)}
        assert all(r4_valid(b, pos, len(p)) for b in blocks)

    def test_worked_screens(self):
        assert r4_screen([3, 1, 0, 2], 2) is Screen.RULED_OUT
        assert r4_screen([2, 1, 0], 2) is Screen.INCONCLUSIVE
        assert r4_screen(list(range(7)), 2) is Screen.INCONCLUSIVE

    @pytest.mark.parametrize("N, L", [(2, 5), (2, 6), (3, 6)])
    def test_greedy_matches_separator_search(self, N, L):
        for p in all_patterns(L):
            assert (r4_screen(p, N) is Screen.RULED_OUT) == ruled_out_by_search(p, N)

    @pytest.mark.parametrize("N, L", [(2, 4), (2, 5), (2, 6), (3, 5), (3, 6)])
    def test_screen_is_sound(self, N, L):
        for p in all_patterns(L):
            if r4_screen(p, N) is Screen.RULED_OUT:
                assert not is_allowed_for_shift(p, N)

    def test_short_patterns_never_ruled_out(self):
        for p in all_patterns(4):
            assert r4_screen(p, 3) is Screen.INCONCLUSIVE


class TestAllowed:
    @pytest.mark.parametrize("N, L", [(2, 3), (2, 4), (2, 5), (3, 4)])
    def test_matches_digit_oracle(self, N, L):
        got = {p for p in all_patterns(L) if is_allowed_for_shift(p, N)}
        assert got == shift_patterns_by_digits(N, L, L + 2)

    @pytest.mark.parametrize("N", [2, 3])
    def test_mirror_symmetry(self, N):
        for p in all_patterns(5):
            assert is_allowed_for_shift(p, N) == is_allowed_for_shift(mirror(p), N)

    def test_witness_realizes(self):
        for p in all_patterns(5):
            w = shift_witness(p, 2)
            if w is not None:
                assert pattern_of_sequence(w, 5) == p
            else:
                assert not is_allowed_for_shift(p, 2)

    @pytest.mark.parametrize("N", [2, 3, 4])
    def test_short_pattern_witness(self, N):
        for L in range(2, N + 2):
            for p in all_patterns(L):
                w = witness_short_pattern(p, N)
                assert w.alphabet_size == N and pattern_of_sequence(w, L) == p

    def test_short_pattern_witness_length(self):
        with pytest.raises(LengthTooLong):
            witness_short_pattern([0, 1, 2, 3], 2)

    @pytest.mark.parametrize("L", [2, 3, 4, 5])
    def test_weak_converse(self, L):
        for p in all_patterns(L):
            group_a = elementary_extensions(p)[:L + 1]
            if not any(is_allowed_for_shift(e, 2) for e in group_a):
                assert not is_allowed_for_shift(p, 2)

    @pytest.mark.parametrize("L", [2, 3, 4])
    def test_one_sided_patterns_are_two_sided(self, L):
        left = SymbolSequence(2, (), (0,))
        for p in all_patterns(L):
            if is_allowed_for_shift(p, 2):
                w = shift_witness(p, 2)
                assert pattern_of_bisequence(Bisequence(left, w), L) == p

    def test_every_forbidden_pattern_has_forbidden_ancestor_or_is_root(self):
        for p in all_patterns(5):
            if not is_allowed_for_shift(p, 2) and not is_root_pattern(p, 2):
                assert any(not is_allowed_for_shift(q, 2) for q in elementary_predecessors(p))


class TestFamilies:
    def test_minimal_spiral_two_symbols(self):
        assert named_forbidden_family("minimal-spiral", 2, 4) == Pattern([3, 1, 0, 2])
        with pytest.raises(BadLength):
            named_forbidden_family("minimal-spiral", 2, 5)

    @pytest.mark.parametrize("N", [2, 3])
    @pytest.mark.parametrize("k", [2, 3, 4])
    @pytest.mark.parametrize("mirrored", [False, True])
    def test_spiral_roots(self, N, k, mirrored):
        assert is_root_pattern(named_forbidden_family(Family.SPIRAL_ROOT, N, N + k, mirrored), N)

    @pytest.mark.parametrize("N, L", [(2, 4), (2, 6), (3, 6), (3, 7)])
    def test_paired_roots(self, N, L):
        p = named_forbidden_family("paired-root", N, L)
        assert is_root_pattern(p, N) and is_root_pattern(mirror(p), N)

    def test_paired_length(self):
        with pytest.raises(BadLength):
            named_forbidden_family("paired-root", 3, 5)

    def test_root_counts_two_symbols(self):
        assert [sum(is_root_pattern(p, 2) for p in all_patterns(L)) for L in (3, 4, 5)] == [0, 6, 18]
