"""Wafer geometry and die yield.

Units are millimetres for length, mm² for area and defects/mm² for defect
density. Money is in EUR.
"""

import math
from dataclasses import dataclass

from .errors import DomainError, ValidationError


def _require(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise ValidationError(path, message)


@dataclass(frozen=True)
class WaferSpec:
    diameter: float
    wafer_cost: float
    wafer_yield: float
    defect_density: float
    masking_levels: int
    test_dice_per_wafer: int = 0
    wafers_per_week_min: int = 0
    wafers_per_week_max: int = 0

    def __post_init__(self):
        _require(self.diameter > 0, "diameter", f"must be > 0, got {self.diameter}")
        _require(self.wafer_cost >= 0, "wafer_cost", f"must be >= 0, got {self.wafer_cost}")
        _require(0 <= self.wafer_yield <= 1, "wafer_yield", f"must be in [0, 1], got {self.wafer_yield}")
        _require(self.defect_density >= 0, "defect_density", f"must be >= 0, got {self.defect_density}")
        _require(
            isinstance(self.masking_levels, int) and self.masking_levels >= 1,
            "masking_levels",
            f"must be an integer >= 1, got {self.masking_levels!r}",
        )
        _require(
            isinstance(self.test_dice_per_wafer, int) and self.test_dice_per_wafer >= 0,
            "test_dice_per_wafer",
            f"must be a non-negative integer, got {self.test_dice_per_wafer!r}",
        )
        for name in ("wafers_per_week_min", "wafers_per_week_max"):
            value = getattr(self, name)
            _require(isinstance(value, int) and value >= 0, name, f"must be a non-negative integer, got {value!r}")
        _require(
            self.wafers_per_week_min <= self.wafers_per_week_max,
            "wafers_per_week_min",
            f"must not exceed wafers_per_week_max ({self.wafers_per_week_min} > {self.wafers_per_week_max})",
        )

    @property
    def area(self) -> float:
        return math.pi * (self.diameter / 2) ** 2


@dataclass(frozen=True)
class DieSpec:
    die_area: float
    testing_cost: float = 0.0
    packaging_cost: float = 0.0
    final_test_yield: float = 1.0

    def __post_init__(self):
        _require(self.die_area > 0, "die_area", f"must be > 0, got {self.die_area}")
        _require(self.testing_cost >= 0, "testing_cost", f"must be >= 0, got {self.testing_cost}")
        _require(self.packaging_cost >= 0, "packaging_cost", f"must be >= 0, got {self.packaging_cost}")
        _require(
            0 < self.final_test_yield <= 1,
            "final_test_yield",
            f"must be in (0, 1], got {self.final_test_yield}",
        )


def gross_dice(diameter: float, die_area: float, test_dice: int = 0) -> float:
    """Real-valued dice count before flooring.

    Circle area over die area, minus the edge loss term, minus the dice
    reserved for testing.
    """
    if die_area <= 0:
        raise DomainError(f"die_area must be > 0, got {die_area}")
    return (
        math.pi * (diameter / 2) ** 2 / die_area
        - math.pi * diameter / math.sqrt(2 * die_area)
        - test_dice
    )


def dice_per_wafer(wafer: WaferSpec, die: DieSpec) -> int:
    if die.die_area >= wafer.area:
        raise DomainError(
            f"die area {die.die_area} mm² does not fit on a {wafer.diameter} mm wafer"
        )
    raw = gross_dice(wafer.diameter, die.die_area, wafer.test_dice_per_wafer)
    if raw < 0:
        raise DomainError(
            f"die of {die.die_area} mm² too large for a {wafer.diameter} mm wafer "
            f"with {wafer.test_dice_per_wafer} test dice (gross count {raw:.3f})"
        )
    return math.floor(raw)


def die_yield(wafer: WaferSpec, die: DieSpec) -> float:
    """Negative-binomial die yield, wafer_yield * (1 + D*A/a)**(-a)."""
    if not 0 <= wafer.wafer_yield <= 1:
        raise DomainError(f"wafer_yield must be in [0, 1], got {wafer.wafer_yield}")
    a = wafer.masking_levels
    # log1p keeps the tiny D*A/a products of the worked examples exact
    return wafer.wafer_yield * math.exp(-a * math.log1p(wafer.defect_density * die.die_area / a))


def good_chips_per_wafer(wafer: WaferSpec, die: DieSpec) -> int:
    n = dice_per_wafer(wafer, die)
    return math.floor(n * die_yield(wafer, die) * die.final_test_yield)


def weekly_output(good_chips: int, wafer: WaferSpec) -> tuple[int, int]:
    """Chips per week from one fab at the wafer spec's throughput bounds."""
    if good_chips < 0:
        raise DomainError(f"good_chips must be >= 0, got {good_chips}")
    return good_chips * wafer.wafers_per_week_min, good_chips * wafer.wafers_per_week_max


def floor_to_hundred(count: int) -> int:
    """Round a chip count down to whole hundreds ("more than 6100" style)."""
    return count // 100 * 100
