import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from siccost import (
    DieSpec,
    DomainError,
    PriceModel,
    RoundingMode,
    ValidationError,
    die_cost,
    full_breakdown,
    list_price,
    total_chip_cost,
)
from siccost.cost import round_half_up
from siccost.wafer import dice_per_wafer, die_yield, good_chips_per_wafer, weekly_output

money = st.floats(0, 1e4, allow_nan=False)


@pytest.mark.parametrize(
    "wafer_cost, n, y, expected",
    [
        (2250, 6857, 0.8999991, 0.364591),
        (3000, 15588, 0.8749989, 0.219950),
        (2250, 6225, 0.89999901, 0.401607),
        (1000, 1000, 1.0, 1.0),
    ],
)
def test_die_cost_examples(wafer_cost, n, y, expected):
    assert die_cost(wafer_cost, n, y) == pytest.approx(expected, abs=1e-6)


@pytest.mark.parametrize("n, y", [(0, 0.9), (100, 0.0)])
def test_die_cost_degenerate(n, y):
    with pytest.raises(DomainError):
        die_cost(2250, n, y)


@pytest.mark.parametrize(
    "dc, testing, packaging, fty, expected",
    [
        (0.365, 0.15, 0.08, 0.992, 0.5997984),
        (0.402, 0.15, 0.08, 0.992, 0.6370968),
        (0.22, 0.2, 0.1, 0.985, 0.5279188),
    ],
)
def test_total_chip_cost_examples(dc, testing, packaging, fty, expected):
    got = total_chip_cost(dc, DieSpec(10, testing, packaging, fty))
    assert got == pytest.approx(expected, abs=1e-7)


def test_total_chip_cost_identity():
    assert total_chip_cost(0.4321, DieSpec(10, 0, 0, 1.0)) == 0.4321


class TestRoundHalfUp:
    @pytest.mark.parametrize(
        "value, places, expected",
        [
            (0.364591, 3, 0.365),
            (0.40160686, 3, 0.402),
            (0.2199497, 3, 0.22),
            (0.5997984, 2, 0.60),
            (0.6370968, 2, 0.64),
            (0.5279188, 2, 0.53),
            (0.125, 2, 0.13),
            (0.0005, 3, 0.001),
        ],
    )
    def test_values(self, value, places, expected):
        assert round_half_up(value, places) == expected


class TestFullBreakdown:
    def test_paper_mode_300(self, config_300):
        b = full_breakdown(*config_300, RoundingMode.PAPER)
        assert b.dice_per_wafer == 6857
        assert b.die_cost_applied == 0.365
        assert b.total_chip_cost == pytest.approx(0.5997984, abs=1e-7)
        assert b.reported_total == 0.60
        assert b.good_chips_per_wafer == 6121
        assert (b.weekly_output_min, b.weekly_output_max) == (6121 * 5000, 6121 * 8000)
        assert b.weekly_output_floor_hundred() == (30_500_000, 48_800_000)

    def test_paper_mode_450(self, config_450):
        b = full_breakdown(*config_450, RoundingMode.PAPER)
        assert b.total_chip_cost == pytest.approx(0.5279188, abs=1e-7)
        assert b.reported_total == 0.53
        assert b.weekly_output_floor_hundred() == (67_000_000, 107_200_000)

    def test_exact_mode_matches_oracle(self, config_300):
        b = full_breakdown(*config_300, RoundingMode.EXACT)
        expected = oracles.total_cost(2250, 300, 10, 0.9, 1e-7, 4, 0.15, 0.08, 0.992)
        assert b.total_chip_cost == pytest.approx(float(expected), rel=1e-13)
        assert b.total_chip_cost == pytest.approx(0.599386, abs=1e-6)
        assert b.reported_total == b.total_chip_cost

    def test_exact_equals_manual_composition(self, config_300, config_300_secure, config_450):
        for wafer, die in (config_300, config_300_secure, config_450):
            n = dice_per_wafer(wafer, die)
            y = die_yield(wafer, die)
            manual = total_chip_cost(die_cost(wafer.wafer_cost, n, y), die)
            b = full_breakdown(wafer, die)
            assert b.total_chip_cost == pytest.approx(manual, rel=2.3e-16, abs=0)
            assert b.good_chips_per_wafer == good_chips_per_wafer(wafer, die)
            assert (b.weekly_output_min, b.weekly_output_max) == weekly_output(b.good_chips_per_wafer, wafer)

    def test_paper_and_exact_close(self, config_300, config_300_secure, config_450):
        for cfg in (config_300, config_300_secure, config_450):
            exact = full_breakdown(*cfg, RoundingMode.EXACT).total_chip_cost
            paper = full_breakdown(*cfg, RoundingMode.PAPER).total_chip_cost
            assert abs(exact - paper) < 1e-3

    def test_total_not_below_die_cost(self, config_300):
        b = full_breakdown(*config_300)
        assert b.total_chip_cost >= b.die_cost

    def test_rounding_mode_accepts_strings(self, config_300):
        assert full_breakdown(*config_300, "paper").rounding is RoundingMode.PAPER


class TestListPrice:
    @pytest.mark.parametrize(
        "args, expected",
        [
            ((0.6, 0, 0, 0), (0.6, 0.6)),
            ((0.6, 0.1, 0.3, 0), (1.0, 1.0)),
            ((1.0, 0, 0, 0.2), (1.0, 1.25)),
        ],
    )
    def test_examples(self, args, expected):
        asp, lp = list_price(PriceModel(*args))
        assert asp == pytest.approx(expected[0], rel=1e-15)
        assert lp == pytest.approx(expected[1], rel=1e-15)

    @pytest.mark.parametrize(
        "args, field",
        [
            ((0.6, 0.5, 0.5, 0), "gross_margin_fraction"),
            ((0.6, 0, 0, 1.0), "average_discount_fraction"),
            ((0.6, -0.1, 0, 0), "direct_cost_fraction"),
            ((-0.6, 0, 0, 0), "component_cost"),
        ],
    )
    def test_invalid(self, args, field):
        with pytest.raises(ValidationError) as exc:
            PriceModel(*args)
        assert exc.value.path == field

    @pytest.mark.invariant
    @settings(max_examples=200)
    @given(
        c=money,
        direct=st.floats(0, 0.45),
        margin=st.floats(0, 0.45),
        discount=st.floats(0, 0.95),
    )
    def test_ordering(self, c, direct, margin, discount):
        asp, lp = list_price(PriceModel(c, direct, margin, discount))
        assert lp >= asp >= c


# -- properties --------------------------------------------------------------


@pytest.mark.invariant
@settings(max_examples=200)
@given(
    wafer_cost=st.floats(1, 1e5),
    k=st.floats(1e-3, 1e3),
    n=st.integers(1, 100_000),
    y=st.floats(1e-3, 1),
)
def test_die_cost_homogeneous(wafer_cost, k, n, y):
    assert die_cost(k * wafer_cost, n, y) == pytest.approx(k * die_cost(wafer_cost, n, y), rel=1e-12)


@pytest.mark.invariant
@settings(max_examples=200)
@given(
    dc=money, testing=money, packaging=money,
    fty=st.floats(0.01, 0.99), bump=st.floats(1e-3, 1),
)
def test_total_cost_monotone(dc, testing, packaging, fty, bump):
    die = DieSpec(10, testing, packaging, fty)
    base = total_chip_cost(dc, die)
    if base > 0:
        assert total_chip_cost(dc, DieSpec(10, testing, packaging, min(1.0, fty + bump))) < base
    assert total_chip_cost(dc + bump, die) > base
    assert total_chip_cost(dc, DieSpec(10, testing + bump, packaging, fty)) > base
    assert total_chip_cost(dc, DieSpec(10, testing, packaging + bump, fty)) > base
