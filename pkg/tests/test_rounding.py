import math

import pytest
from hypothesis import given, strategies as st

from srinterp.errors import InjectedStreamExhausted
from srinterp.interp import subscripts
from srinterp.rng import DrawStream
from srinterp.rounding import (RoundingStrategy, dr, dr_array, floor_round,
                               round_subscript_vector, sr_eq3, sr_eq3_array,
                               sr_mode1, sr_mode2)

# Published golden table: three upscale groups with an injected draw per row.
GOLDEN_2X = ([0.5, 1.0, 1.5, 2.0, 2.5, 3.0],
             [0.4, 0.5, 0.5, 0.1, 0.5, 0.3],
             [1, 1, 2, 2, 3, 3],
             [1, 1, 1, 2, 2, 3])
GOLDEN_3X = (subscripts(3, 3),
             [0.1, 0.4, 0.3, 0.5, 0.3, 0.2, 0.4, 0.3, 0.1],
             [1, 1, 1, 2, 2, 2, 3, 3, 3],
             [1, 1, 1, 1, 2, 2, 2, 3, 3])
GOLDEN_4X = (subscripts(4, 4),
             [0.5, 0.1, 0.4, 0.0, 0.4, 0.4, 0.4, 0.4,
              0.5, 0.1, 0.3, 0.4, 0.4, 0.4, 0.5, 0.1],
             [1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4],
             [1, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4])


def test_dr_examples():
    assert dr(1.5).index == 2
    assert dr(3.0).index == 3
    assert dr(0.25).index == 1


def test_dr_rejects_nonpositive():
    with pytest.raises(ValueError):
        dr(0.0)
    with pytest.raises(ValueError):
        sr_eq3(-1.0, 0.1)


def test_floor_clamps_to_one():
    assert floor_round(0.5).index == 1
    assert floor_round(2.7).index == 2


def test_sr_eq3_examples():
    assert sr_eq3(1.5, 0.5).index == 1
    assert sr_eq3(2.5, 0.5).index == 2
    assert sr_eq3(0.25, 0.5).index == 1  # exceptional x <= r rounds up
    assert sr_eq3(4 / 3, 0.5).index == 1
    assert sr_eq3(2.0, 0.1).index == 2  # integer passes through


def test_sr_eq3_zero_draw_equals_ceil():
    for x in (0.3, 1.5, 2.25, 7.9):
        assert sr_eq3(x, 0.0).index == dr(x).index


def test_sr_eq3_records_draw():
    out = sr_eq3(1.5, 0.4)
    assert out.r_used == 0.4
    assert out.strategy is RoundingStrategy.SR_EQ3


@given(st.integers(0, 499),
       st.sampled_from([k * 0.05 for k in range(20)]),
       st.sampled_from([0.0, 0.1, 0.2, 0.3, 0.4, 0.5]))
def test_sr_eq3_bracket_property(whole, fracpart, r):
    x = whole + fracpart
    if x <= 0:
        return
    index = sr_eq3(x, r).index
    assert index >= 1
    lo = math.floor(round(x, 9))
    frac = round(x - lo, 9)
    if frac == 0:
        assert index == lo
    elif x > r:
        # deterministic given the drawn r: floor iff r covers the fraction
        assert index == (max(1, lo) if r >= frac else lo + 1)
    else:
        assert index == lo + 1


@given(st.floats(min_value=0.01, max_value=500.0), st.integers(0, 2 ** 32 - 1))
def test_nonzero_output_all_strategies(x, seed):
    stream = DrawStream.from_seed(seed)
    assert dr(x).index >= 1
    assert floor_round(x).index >= 1
    assert sr_eq3(x, stream.next_r()).index >= 1
    assert sr_mode1(x, stream).index >= 1
    assert sr_mode2(x, stream).index >= 1


def test_integer_passthrough_all_strategies():
    stream = DrawStream.from_seed(1)
    for x in (1.0, 4.0, 7.0):
        assert dr(x).index == x
        assert sr_eq3(x, 0.5).index == x
        assert sr_mode1(x, stream).index == x
        assert sr_mode2(x, stream).index == x


def test_mode1_clamp_at_half():
    # uniform 0.9 selects the floor branch, which clamps 0 up to 1
    stream = DrawStream.from_values([0.9])
    assert sr_mode1(0.5, stream).index == 1


def test_mode1_monte_carlo_mean():
    stream = DrawStream.from_seed(11)
    n = 100_000
    total = sum(sr_mode1(2.5, stream).index for _ in range(n))
    assert abs(total / n - 2.5) < 0.01


def test_mode2_monte_carlo_up_probability():
    stream = DrawStream.from_seed(13)
    n = 100_000
    ups = sum(sr_mode2(2.25, stream).index == 3 for _ in range(n))
    assert abs(ups / n - 0.25) < 0.01


def test_mode2_monte_carlo_unbiased():
    stream = DrawStream.from_seed(17)
    n = 100_000
    total = sum(sr_mode2(2.25, stream).index for _ in range(n))
    assert abs(total / n - 2.25) < 0.01


@pytest.mark.parametrize("golden", [GOLDEN_2X, GOLDEN_3X, GOLDEN_4X],
                         ids=["2x", "3x", "4x"])
def test_golden_table_rows(golden):
    xs, rs, dr_expected, sr_expected = golden
    assert [dr(x).index for x in xs] == dr_expected
    stream = DrawStream.from_values(rs)
    outcomes = round_subscript_vector(xs, RoundingStrategy.SR_EQ3, stream)
    assert [o.index for o in outcomes] == sr_expected
    # one draw consumed per row, including integer rows
    assert stream.draws_emitted == len(xs)


def test_vector_dr_consumes_no_draws():
    stream = DrawStream.from_values([])
    outcomes = round_subscript_vector([0.5, 1.5, 2.5], RoundingStrategy.DR_CEIL,
                                      stream)
    assert [o.index for o in outcomes] == [1, 2, 3]
    assert stream.draws_emitted == 0


def test_vector_exhaustion_propagates():
    stream = DrawStream.from_values([0.1, 0.2])
    with pytest.raises(InjectedStreamExhausted):
        round_subscript_vector([0.5, 1.5, 2.5], RoundingStrategy.SR_EQ3, stream)


def test_array_forms_match_scalar():
    xs = subscripts(7, 3)
    rs = DrawStream.from_seed(23).next_r_array(len(xs))
    vec = sr_eq3_array(xs, rs)
    assert list(vec) == [sr_eq3(x, r).index for x, r in zip(xs, rs)]
    assert list(dr_array(xs)) == [dr(x).index for x in xs]
