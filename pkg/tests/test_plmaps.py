"""Exact piecewise-linear maps and their pattern censuses."""
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from ordpat import plmaps
from ordpat.errors import CapExceeded, ExcludedPoint, PeriodicCollision, UnknownName
from ordpat.perm import Pattern, all_patterns, pattern_of_values
from ordpat.plmaps import (IntervalUnion, PatternCensus, PLMap, builtin_map,
                           cached_census, coding_word, conjugate_endpoints,
                           critical_points, digits_of, enumerate_allowed,
                           growth_profile, iterate, logistic, orbit,
                           orbit_pattern_at, psi_value)
from ordpat.sequences import SymbolSequence


def tent(x):
    return 2 * x if x < F(1, 2) else 2 - 2 * x


def sawtooth(N):
    return lambda x: N * x - math.floor(N * x)


def exact_pattern(g, x, L):
    xs = [x]
    for _ in range(L - 1):
        xs.append(g(xs[-1]))
    return pattern_of_values(xs) if len(set(xs)) == L else None


rationals = st.fractions(min_value=0, max_value=1, max_denominator=10**6)


class TestPLMap:
    def test_validation(self):
        with pytest.raises(ValueError):
            PLMap((0, F(1, 2), 1), (2, 0), (0, 2))
        with pytest.raises(ValueError):
            PLMap((0, 1), (2,), (0,))  # image leaves [0, 1]
        with pytest.raises(TypeError):
            PLMap((0.0, 1), (1,), (0,))

    def test_builtin_names(self):
        assert builtin_map("tent")(F(1, 3)) == F(2, 3)
        assert builtin_map("sawtooth", 3)(F(1, 2)) == F(1, 2)
        with pytest.raises(UnknownName):
            builtin_map("baker")

    @given(rationals)
    def test_tent_agrees_with_formula(self, x):
        assert builtin_map("tent")(x) == tent(x)

    @settings(max_examples=50)
    @given(rationals, st.integers(1, 4))
    def test_iterate_is_composition(self, x, k):
        f = builtin_map("tent")
        assert iterate(f, k)(x) == orbit(f, x, k + 1)[-1]

    def test_iterate_cap(self):
        with pytest.raises(CapExceeded):
            iterate(builtin_map("tent"), 12, cap=100)

    def test_critical_points_include_breakpoints(self):
        cps = critical_points(builtin_map("tent"), 3)
        assert {0, F(1, 2), 1} <= set(cps)
        assert cps == sorted(cps)


class TestOrbitPattern:
    def test_collision(self):
        with pytest.raises(PeriodicCollision):
            orbit_pattern_at(builtin_map("tent"), F(2, 3), 3)  # fixed point

    def test_logistic_is_exact(self):
        assert orbit(logistic, F(1, 3), 3) == [F(1, 3), F(8, 9), F(32, 81)]


class TestIntervalUnion:
    def test_holes(self):
        u = IntervalUnion(((F(0), F(1)),), (F(1, 2),))
        assert F(1, 4) in u and F(1, 2) not in u
        assert u.components == 1 and u.length == 1
        assert u.interior_point() == F(1, 4)

    def test_rejects_overlap(self):
        with pytest.raises(ValueError):
            IntervalUnion(((F(0), F(2, 3)), (F(1, 2), F(1))))


class TestCensus:
    def test_tent_length3(self):
        c = enumerate_allowed(builtin_map("tent"), 3)
        assert c.forbidden == (Pattern([2, 1, 0]),)
        ends = sorted({a for a, _, _ in c.rows()} | {b for _, b, _ in c.rows()})
        assert ends == [0, F(1, 3), F(2, 5), F(2, 3), F(4, 5), 1]

    def test_tent_length4_components(self):
        c = enumerate_allowed(builtin_map("tent"), 4)
        assert len(c.realized) == 12 and len(c.rows()) == 15
        two = {p for p, u in c.realized.items() if u.components == 2}
        assert two == {Pattern([0, 3, 1, 2]), Pattern([2, 0, 3, 1]), Pattern([1, 2, 3, 0])}
        # the tied orbit of 1/2 sits inside one component
        assert c.realized[Pattern([2, 3, 0, 1])].holes == (F(1, 2),)

    @pytest.mark.parametrize("name, N, L", [("tent", None, 3), ("tent", None, 4), ("tent", None, 5),
                                            ("sawtooth", 2, 4), ("sawtooth", 3, 4)])
    def test_lengths_sum_to_one(self, name, N, L):
        c = enumerate_allowed(builtin_map(name, N), L)
        assert sum(u.length for u in c.realized.values()) == 1

    @pytest.mark.parametrize("name, N, L", [("tent", None, 4), ("tent", None, 5),
                                            ("sawtooth", 2, 5), ("sawtooth", 3, 4)])
    def test_grid_oracle(self, name, N, L):
        """Every grid point's exact pattern lies in the census at that point."""
        g = tent if name == "tent" else sawtooth(N)
        c = enumerate_allowed(builtin_map(name, N), L)
        D = 1009
        for k in range(1, D):
            x = F(k, D)
            p = exact_pattern(g, x, L)
            if p is None:
                continue
            assert x in c.realized[p] or any(x in (a, b) for a, b in c.realized[p].intervals)

    @pytest.mark.parametrize("name, N, L", [("tent", None, 5), ("sawtooth", 3, 4)])
    def test_interior_points_realize(self, name, N, L):
        g = tent if name == "tent" else sawtooth(N)
        c = enumerate_allowed(builtin_map(name, N), L)
        for p, u in c.realized.items():
            for a, b in u.intervals:
                assert exact_pattern(g, (a + b) / 2, L) == p or (a + b) / 2 in u.holes

    def test_json_round_trip(self):
        c = enumerate_allowed(builtin_map("tent"), 4)
        back = PatternCensus.from_json(c.to_json())
        assert back == c and back.to_json() == c.to_json()

    def test_csv_rows(self):
        text = enumerate_allowed(builtin_map("tent"), 3).to_csv()
        assert text.splitlines()[0] == "pattern,left,right"
        assert len(text.splitlines()) == 6

    def test_disk_cache(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ORDPAT_CACHE_DIR", str(tmp_path))
        monkeypatch.setattr(plmaps, "_memo", {})
        a = cached_census("sawtooth", 3, 2)
        files = list(tmp_path.iterdir())
        assert len(files) == 1 and files[0].name.startswith("census-v")
        monkeypatch.setattr(plmaps, "_memo", {})
        assert cached_census("sawtooth", 3, 2) == a == enumerate_allowed(builtin_map("sawtooth", 2), 3)

    def test_growth_profile(self):
        gp = growth_profile(builtin_map("tent"), 5)
        assert gp.counts[:3] == (2, 5, 12)
        assert all(r > 0 for r in gp.log_ratios)


class TestConjugacy:
    def test_logistic_endpoints(self):
        nc = conjugate_endpoints(enumerate_allowed(builtin_map("tent"), 3))
        ends = sorted({e for iv in nc.realized.values() for a, b in iv for e in (a, b)})[1:-1]
        s5 = math.sqrt(5)
        for got, want in zip(ends, [0.25, (5 - s5) / 8, 0.75, (5 + s5) / 8]):
            assert abs(got - want) < 1e-12

    def test_needs_tent(self):
        with pytest.raises(ValueError):
            conjugate_endpoints(enumerate_allowed(builtin_map("sawtooth", 2), 3))


class TestCoding:
    @given(st.fractions(min_value=0, max_value=1, max_denominator=5000).filter(lambda x: x < 1),
           st.integers(2, 5))
    def test_digits_round_trip(self, x, N):
        assert psi_value(digits_of(x, N)) == x

    def test_top_sequence_excluded(self):
        with pytest.raises(ExcludedPoint):
            psi_value(SymbolSequence(2, (0,), (1,)))
        with pytest.raises(ExcludedPoint):
            psi_value(SymbolSequence(3, (), (2,)))

    def test_sawtooth_coding_is_digits(self):
        x = F(5, 13)
        w = coding_word(builtin_map("sawtooth", 3), [0, F(1, 3), F(2, 3), 1], x, 12)
        assert w == digits_of(x, 3).prefix(12)
