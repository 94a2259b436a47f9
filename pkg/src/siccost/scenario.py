"""Security overlays, baseline/variant comparison and one-at-a-time sweeps."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

from .cost import CENT, CostBreakdown, RoundingMode, full_breakdown, round_half_up
from .errors import DomainError, ValidationError
from .wafer import DieSpec, WaferSpec


@dataclass(frozen=True)
class SecurityOverlay:
    """Changes to a die caused by adding security features.

    ``rd_additional_cost`` and ``time_to_market_delay_months`` are carried
    through to reports only; they never enter the per-chip cost.
    """

    area_increase_fraction: float = 0.0
    testing_cost_delta: float = 0.0
    packaging_cost_delta: float = 0.0
    final_test_yield_delta: float = 0.0
    rd_additional_cost: float = 0.0
    time_to_market_delay_months: float = 0.0

    def __post_init__(self):
        if self.area_increase_fraction < 0:
            raise ValidationError(
                "area_increase_fraction", f"must be >= 0, got {self.area_increase_fraction}"
            )
        if self.rd_additional_cost < 0:
            raise ValidationError("rd_additional_cost", f"must be >= 0, got {self.rd_additional_cost}")
        if self.time_to_market_delay_months < 0:
            raise ValidationError(
                "time_to_market_delay_months",
                f"must be >= 0, got {self.time_to_market_delay_months}",
            )


@dataclass(frozen=True)
class ScenarioComparison:
    baseline: CostBreakdown
    variant: CostBreakdown
    absolute_delta: float
    relative_delta: float
    magnitude_transfer_ratio: float | None = None
    rounding: RoundingMode = RoundingMode.EXACT
    weekly_output_delta_min: int | None = None
    weekly_output_delta_max: int | None = None


_OVERLAY_FIELD = {
    "die_area": "area_increase_fraction",
    "testing_cost": "testing_cost_delta",
    "packaging_cost": "packaging_cost_delta",
    "final_test_yield": "final_test_yield_delta",
}


def overlay_die(die: DieSpec, overlay: SecurityOverlay) -> DieSpec:
    """The die after the overlay; a ValidationError names the overlay field."""
    try:
        return DieSpec(
            die_area=die.die_area * (1 + overlay.area_increase_fraction),
            testing_cost=die.testing_cost + overlay.testing_cost_delta,
            packaging_cost=die.packaging_cost + overlay.packaging_cost_delta,
            final_test_yield=die.final_test_yield + overlay.final_test_yield_delta,
        )
    except ValidationError as exc:
        message = str(exc).split(": ", 1)[1]
        raise ValidationError(_OVERLAY_FIELD[exc.path], f"resulting {exc.path} {message}") from None


def apply_overlay(
    wafer: WaferSpec, die: DieSpec, overlay: SecurityOverlay
) -> tuple[WaferSpec, DieSpec]:
    try:
        return wafer, overlay_die(die, overlay)
    except ValidationError as exc:
        raise DomainError(f"overlay leaves an invalid die: {exc}") from exc


def _total(x: CostBreakdown | float, mode: RoundingMode) -> float:
    total = x.total_chip_cost if isinstance(x, CostBreakdown) else float(x)
    if mode is RoundingMode.PAPER:
        return round_half_up(total, CENT)
    return total


def compare(
    baseline: CostBreakdown | float,
    variant: CostBreakdown | float,
    rounding_mode: RoundingMode = RoundingMode.EXACT,
    area_change: float | None = None,
) -> ScenarioComparison:
    """Compare two cost breakdowns (or bare totals).

    In paper mode both totals are rounded to the cent before the deltas are
    taken. ``area_change`` is the relative die-area change that produced the
    variant; when given and non-zero the relative cost change is divided by
    it to give the magnitude transfer ratio.
    """
    mode = RoundingMode(rounding_mode)
    base = _total(baseline, mode)
    var = _total(variant, mode)
    if base <= 0:
        raise DomainError(f"baseline total must be > 0, got {base}")
    absolute = var - base
    if mode is RoundingMode.PAPER:
        absolute = round_half_up(absolute, CENT)
    relative = absolute / base
    ratio = relative / area_change if area_change else None
    return ScenarioComparison(
        baseline=baseline,
        variant=variant,
        absolute_delta=absolute,
        relative_delta=relative,
        magnitude_transfer_ratio=ratio,
        rounding=mode,
    )


def wafer_transition(
    baseline: tuple[WaferSpec, DieSpec],
    variant: tuple[WaferSpec, DieSpec],
    rounding_mode: RoundingMode = RoundingMode.EXACT,
) -> ScenarioComparison:
    mode = RoundingMode(rounding_mode)
    before = full_breakdown(*baseline, mode)
    after = full_breakdown(*variant, mode)
    result = compare(before, after, mode)
    return replace(
        result,
        weekly_output_delta_min=after.weekly_output_min - before.weekly_output_min,
        weekly_output_delta_max=after.weekly_output_max - before.weekly_output_max,
    )


WAFER_PARAMETERS = ("diameter", "wafer_cost", "wafer_yield", "defect_density", "masking_levels")
DIE_PARAMETERS = ("die_area", "testing_cost", "packaging_cost", "final_test_yield")
SWEEP_PARAMETERS = WAFER_PARAMETERS + DIE_PARAMETERS


@dataclass(frozen=True)
class SweepRow:
    parameter: str
    value: float
    breakdown: CostBreakdown
    relative_delta: float
    # None when the input did not move relative to a non-zero baseline value
    elasticity: float | None


def with_parameter(
    config: tuple[WaferSpec, DieSpec], parameter: str, value: float
) -> tuple[WaferSpec, DieSpec]:
    wafer, die = config
    if parameter == "masking_levels":
        if int(value) != value:
            raise DomainError(f"masking_levels must be an integer, got {value}")
        value = int(value)
    try:
        if parameter in WAFER_PARAMETERS:
            return replace(wafer, **{parameter: value}), die
        if parameter in DIE_PARAMETERS:
            return wafer, replace(die, **{parameter: value})
    except ValidationError as exc:
        raise DomainError(f"{parameter}={value!r} gives an invalid configuration: {exc}") from exc
    raise DomainError(f"cannot sweep unknown parameter {parameter!r}; choose from {', '.join(SWEEP_PARAMETERS)}")


def sensitivity_sweep(
    config: tuple[WaferSpec, DieSpec],
    parameter_name: str,
    values,
    rounding_mode: RoundingMode = RoundingMode.EXACT,
    workers: int = 1,
) -> list[SweepRow]:
    """One-at-a-time sweep of a single parameter.

    The first value is the baseline for relative deltas and elasticities.
    Rows come back in input order whatever ``workers`` is.
    """
    mode = RoundingMode(rounding_mode)
    values = list(values)
    if not values:
        return []

    def evaluate(value):
        try:
            return full_breakdown(*with_parameter(config, parameter_name, value), mode)
        except DomainError as exc:
            raise DomainError(f"sweep of {parameter_name} failed at value {value!r}: {exc}") from exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            breakdowns = list(pool.map(evaluate, values))
    else:
        breakdowns = [evaluate(v) for v in values]

    base_value, base = values[0], breakdowns[0]
    rows = []
    for value, breakdown in zip(values, breakdowns):
        delta = compare(base, breakdown, mode).relative_delta
        if base_value == 0 or value == base_value:
            elasticity = None
        else:
            elasticity = delta / ((value - base_value) / base_value)
        rows.append(SweepRow(parameter_name, value, breakdown, delta, elasticity))
    return rows


def is_identity(overlay: SecurityOverlay) -> bool:
    return all(getattr(overlay, f.name) == 0 for f in fields(overlay))
