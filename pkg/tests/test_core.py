from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from alloclab.core import (
    DimensionError,
    InvalidParameterError,
    Permutation,
    all_points,
    as_fraction,
    code_point,
    compose_with_permutation,
    format_rational,
    is_prime,
    parse_rational,
    permutation_code_map,
    point_code,
)

permutations = st.integers(1, 6).flatmap(lambda R: st.permutations(range(1, R + 1)).map(lambda p: Permutation(tuple(p))))


class TestRationals:
    def test_canonical_form(self):
        assert format_rational(Fraction(2, 4)) == "1/2"
        assert format_rational(3) == "3/1"
        assert format_rational("-6/4") == "-3/2"

    def test_parse_round_trip(self):
        assert parse_rational(format_rational(Fraction(7, 81))) == Fraction(7, 81)

    @pytest.mark.parametrize("bad", ["1/0", "x", "1//2", ""])
    def test_parse_rejects(self, bad):
        with pytest.raises(InvalidParameterError):
            parse_rational(bad)

    def test_floats_and_bools_rejected(self):
        with pytest.raises(InvalidParameterError):
            as_fraction(0.1)
        with pytest.raises(InvalidParameterError):
            as_fraction(True)

    @given(st.fractions())
    def test_format_parse_identity(self, x):
        assert parse_rational(format_rational(x)) == x

    def test_primes(self):
        assert [n for n in range(12) if is_prime(n)] == [2, 3, 5, 7, 11]


class TestPermutations:
    def test_compose_example(self):
        assert compose_with_permutation((0, 1, 2), Permutation((2, 3, 1))) == (1, 2, 0)

    def test_identity_is_noop(self):
        assert compose_with_permutation((2, 0, 1), Permutation.identity(3)) == (2, 0, 1)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            compose_with_permutation((0, 1), Permutation((2, 3, 1)))

    def test_not_a_permutation(self):
        with pytest.raises(InvalidParameterError):
            Permutation((1, 1, 2))

    def test_cyclic_shift_hits_target(self):
        for s in range(1, 5):
            for t in range(1, 5):
                assert Permutation.cyclic_shift(4, s, t)(s) == t

    @given(permutations)
    def test_inverse(self, pi):
        assert pi.then(pi.inverse()) == Permutation.identity(pi.R)

    @given(permutations, st.data())
    def test_composition_law(self, pi, data):
        # (x o pi) o sigma == x o (sigma then pi)
        sigma = Permutation(tuple(data.draw(st.permutations(range(1, pi.R + 1)))))
        x = tuple(data.draw(st.lists(st.integers(0, 2), min_size=pi.R, max_size=pi.R)))
        left = compose_with_permutation(compose_with_permutation(x, pi), sigma)
        assert left == compose_with_permutation(x, sigma.then(pi))


class TestPointCodes:
    @given(st.integers(1, 5), st.integers(2, 5), st.data())
    def test_round_trip(self, R, base, data):
        code = data.draw(st.integers(0, base**R - 1))
        assert point_code(code_point(code, R, base), base) == code

    def test_coordinate_one_is_least_significant(self):
        assert point_code((1, 0), 3) == 1
        assert point_code((0, 1), 3) == 3

    def test_all_points_rows_match_codes(self):
        pts = all_points(3, 3)
        assert all(point_code(tuple(row), 3) == c for c, row in enumerate(pts))

    def test_digit_out_of_range(self):
        with pytest.raises(DimensionError):
            point_code((3,), 3)

    @given(permutations)
    def test_code_map_matches_pointwise(self, pi):
        base = 3
        m = permutation_code_map(pi, base)
        for code in range(0, base**pi.R, max(1, base**pi.R // 50)):
            x = code_point(code, pi.R, base)
            assert m[code] == point_code(compose_with_permutation(x, pi), base)
        assert sorted(m.tolist()) == list(range(base**pi.R))
        assert isinstance(m, np.ndarray)
