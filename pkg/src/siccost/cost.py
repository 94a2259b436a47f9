"""Per-chip cost and the cost-to-list-price markup chain."""

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum

from .errors import DomainError, ValidationError
from .wafer import (
    DieSpec,
    WaferSpec,
    dice_per_wafer,
    die_yield,
    floor_to_hundred,
    good_chips_per_wafer,
    weekly_output,
)


class RoundingMode(str, Enum):
    """How intermediate money values are rounded.

    ``EXACT`` keeps full precision throughout. ``PAPER`` rounds die cost to
    0.001 EUR before it enters the total and reports totals to the cent,
    which is how the published worked examples were carried out by hand.
    """

    EXACT = "exact"
    PAPER = "paper"


def round_half_up(value: float, places: int) -> float:
    """Round to ``places`` decimals, halves away from zero.

    Goes through the shortest decimal repr so 0.5997984 rounds to 0.60 and
    not to whatever the binary expansion suggests.
    """
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


DIE_COST_QUANTUM = 3  # 0.001 EUR
CENT = 2


@dataclass(frozen=True)
class CostBreakdown:
    dice_per_wafer: int
    die_yield: float
    die_cost: float
    testing_cost: float
    packaging_cost: float
    final_test_yield: float
    total_chip_cost: float
    good_chips_per_wafer: int
    weekly_output_min: int
    weekly_output_max: int
    rounding: RoundingMode = RoundingMode.EXACT
    # die cost as it entered the total (0.001-rounded in paper mode)
    die_cost_applied: float | None = None
    wafers_per_week_min: int = 0
    wafers_per_week_max: int = 0

    def __post_init__(self):
        for name in ("die_cost", "testing_cost", "packaging_cost", "total_chip_cost"):
            if getattr(self, name) < 0:
                raise ValidationError(name, f"must be >= 0, got {getattr(self, name)}")
        if self.die_cost_applied is None:
            object.__setattr__(self, "die_cost_applied", self.die_cost)

    @property
    def reported_total(self) -> float:
        """Total chip cost as reported: to the cent in paper mode."""
        if self.rounding is RoundingMode.PAPER:
            return round_half_up(self.total_chip_cost, CENT)
        return self.total_chip_cost

    @property
    def good_chips_floor_hundred(self) -> int:
        return floor_to_hundred(self.good_chips_per_wafer)

    def weekly_output_floor_hundred(self) -> tuple[int, int]:
        """Weekly output using good chips rounded down to whole hundreds."""
        hundreds = self.good_chips_floor_hundred
        return hundreds * self.wafers_per_week_min, hundreds * self.wafers_per_week_max


@dataclass(frozen=True)
class PriceModel:
    component_cost: float
    direct_cost_fraction: float = 0.0
    gross_margin_fraction: float = 0.0
    average_discount_fraction: float = 0.0

    def __post_init__(self):
        if self.component_cost < 0:
            raise ValidationError("component_cost", f"must be >= 0, got {self.component_cost}")
        for name in ("direct_cost_fraction", "gross_margin_fraction", "average_discount_fraction"):
            value = getattr(self, name)
            if not 0 <= value < 1:
                raise ValidationError(name, f"must be in [0, 1), got {value}")
        if self.direct_cost_fraction + self.gross_margin_fraction >= 1:
            raise ValidationError(
                "gross_margin_fraction",
                "direct_cost_fraction + gross_margin_fraction must be < 1",
            )


def die_cost(wafer_cost: float, dice_per_wafer: int, die_yield: float) -> float:
    if dice_per_wafer < 1:
        raise DomainError(f"die cost undefined with {dice_per_wafer} dice per wafer")
    if die_yield <= 0:
        raise DomainError(f"die cost undefined with die yield {die_yield}")
    return wafer_cost / (dice_per_wafer * die_yield)


def total_chip_cost(die_cost: float, die: DieSpec) -> float:
    if die.final_test_yield <= 0:
        raise DomainError(f"final_test_yield must be > 0, got {die.final_test_yield}")
    return (die_cost + die.testing_cost + die.packaging_cost) / die.final_test_yield


def full_breakdown(
    wafer: WaferSpec, die: DieSpec, rounding_mode: RoundingMode = RoundingMode.EXACT
) -> CostBreakdown:
    rounding_mode = RoundingMode(rounding_mode)
    n = dice_per_wafer(wafer, die)
    y = die_yield(wafer, die)
    dc = die_cost(wafer.wafer_cost, n, y)
    applied = round_half_up(dc, DIE_COST_QUANTUM) if rounding_mode is RoundingMode.PAPER else dc
    total = total_chip_cost(applied, die)
    good = good_chips_per_wafer(wafer, die)
    week_min, week_max = weekly_output(good, wafer)
    return CostBreakdown(
        dice_per_wafer=n,
        die_yield=y,
        die_cost=dc,
        testing_cost=die.testing_cost,
        packaging_cost=die.packaging_cost,
        final_test_yield=die.final_test_yield,
        total_chip_cost=total,
        good_chips_per_wafer=good,
        weekly_output_min=week_min,
        weekly_output_max=week_max,
        rounding=rounding_mode,
        die_cost_applied=applied,
        wafers_per_week_min=wafer.wafers_per_week_min,
        wafers_per_week_max=wafer.wafers_per_week_max,
    )


def list_price(price: PriceModel) -> tuple[float, float]:
    """Return ``(average_selling_price, list_price)``.

    Direct cost and gross margin are shares of the average selling price;
    the average discount is a share of the list price.
    """
    asp_denominator = 1 - price.direct_cost_fraction - price.gross_margin_fraction
    discount_denominator = 1 - price.average_discount_fraction
    if asp_denominator <= 0 or discount_denominator <= 0:
        raise DomainError("price fractions leave no room for the component cost")
    asp = price.component_cost / asp_denominator
    return asp, asp / discount_denominator
