"""``siccost`` command line: load a scenario file, run one computation,
print a report.

Exit codes: 0 success, 2 usage error, 3 parse/validation error,
4 domain error.
"""

import argparse
import hashlib
import os
import sys
from pathlib import Path

from . import __version__
from .config import ScenarioFile, dump_scenario, parse_scenario, read_scenario_bytes
from .cost import CostBreakdown, RoundingMode, full_breakdown, list_price
from .errors import DomainError, ParseError, UsageError, ValidationError
from .report import FORMATS, Column, Report, Table, emit
from .scenario import SWEEP_PARAMETERS, apply_overlay, compare, sensitivity_sweep, wafer_transition
from .security import attack_cost, break_even, expected_loss, security_worth_it

SUBCOMMANDS = ("cost", "overlay", "transition", "sweep", "attack", "worth-it")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_DOMAIN = 0, 2, 3, 4


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _pick(named: dict, requested: str | None, what: str):
    if requested is not None:
        if requested not in named:
            known = ", ".join(sorted(named)) or "none defined"
            raise UsageError(f"no {what} named {requested!r} in scenario ({known})")
        return requested, named[requested]
    if len(named) == 1:
        return next(iter(named.items()))
    if not named:
        raise UsageError(f"scenario defines no {what}s")
    raise UsageError(f"scenario defines several {what}s ({', '.join(sorted(named))}); choose one by name")


def _breakdown_columns(mode: RoundingMode) -> list[Column]:
    return [
        Column("dice_per_wafer", "int"),
        Column("die_yield"),
        Column("die_cost_eur", "money"),
        Column("die_cost_applied_eur", "money"),
        Column("testing_cost_eur", "money"),
        Column("packaging_cost_eur", "money"),
        Column("final_test_yield"),
        Column("total_chip_cost_eur", "money"),
        Column("total_chip_cost_reported_eur", "cents" if mode is RoundingMode.PAPER else "money"),
        Column("good_chips_per_wafer", "int"),
        Column("weekly_output_min", "int"),
        Column("weekly_output_max", "int"),
    ]


def _breakdown_cells(b: CostBreakdown) -> list:
    return [
        b.dice_per_wafer,
        b.die_yield,
        b.die_cost,
        b.die_cost_applied,
        b.testing_cost,
        b.packaging_cost,
        b.final_test_yield,
        b.total_chip_cost,
        b.reported_total,
        b.good_chips_per_wafer,
        b.weekly_output_min,
        b.weekly_output_max,
    ]


def _breakdown_table(name: str, labelled: list[tuple[str, CostBreakdown]], mode: RoundingMode) -> Table:
    columns = _breakdown_columns(mode)
    if len(labelled) > 1:
        columns = [Column("configuration", "text")] + columns
    table = Table(name, columns)
    for label, b in labelled:
        cells = _breakdown_cells(b)
        table.add(*([label] + cells if len(labelled) > 1 else cells))
    return table


def _floor_hundred_table(labelled: list[tuple[str, CostBreakdown]]) -> Table:
    table = Table(
        "weekly_output_floor_hundred",
        [
            Column("configuration", "text"),
            Column("good_chips_floor_hundred", "int"),
            Column("weekly_output_min", "int"),
            Column("weekly_output_max", "int"),
        ],
    )
    for label, b in labelled:
        table.add(label, b.good_chips_floor_hundred, *b.weekly_output_floor_hundred())
    return table


FLOOR_HUNDRED_NOTE = (
    "weekly_output_floor_hundred rounds good chips per wafer down to whole hundreds "
    "before multiplying by wafers per week; the breakdown table uses the exact count."
)
PAPER_MODE_NOTE = (
    "paper rounding: die cost is rounded to 0.001 EUR before it enters the total "
    "(die_cost_applied_eur) and the total is reported to the cent."
)


def _cost(scenario: ScenarioFile, mode: RoundingMode, flags: dict, report: Report) -> None:
    b = full_breakdown(*scenario.config, mode)
    report.tables.append(_breakdown_table("breakdown", [("baseline", b)], mode))
    report.tables.append(_floor_hundred_table([("baseline", b)]))
    report.notes.append(FLOOR_HUNDRED_NOTE)
    if scenario.price is not None:
        price = scenario.price.model(b.reported_total)
        asp, lp = list_price(price)
        table = Table(
            "price",
            [
                Column("component_cost_eur", "money"),
                Column("direct_cost_fraction"),
                Column("gross_margin_fraction"),
                Column("average_discount_fraction"),
                Column("average_selling_price_eur", "money"),
                Column("list_price_eur", "money"),
            ],
        )
        table.add(
            price.component_cost,
            price.direct_cost_fraction,
            price.gross_margin_fraction,
            price.average_discount_fraction,
            asp,
            lp,
        )
        report.tables.append(table)
        report.assumptions.append(
            "direct cost, gross margin and average discount fractions have no published values; "
            "defaults are zero and unvalidated"
        )


def _comparison_table(cmp, area_change: float | None) -> Table:
    table = Table(
        "comparison",
        [
            Column("baseline_total_eur", "cents" if cmp.rounding is RoundingMode.PAPER else "money"),
            Column("variant_total_eur", "cents" if cmp.rounding is RoundingMode.PAPER else "money"),
            Column("absolute_delta_eur", "money"),
            Column("relative_delta"),
            Column("area_change"),
            Column("magnitude_transfer_ratio"),
        ],
    )
    table.add(
        cmp.baseline.reported_total,
        cmp.variant.reported_total,
        cmp.absolute_delta,
        cmp.relative_delta,
        area_change,
        cmp.magnitude_transfer_ratio,
    )
    return table


def _overlay(scenario: ScenarioFile, mode: RoundingMode, flags: dict, report: Report) -> None:
    name, overlay = _pick(scenario.overlays, flags.get("variant"), "overlay")
    wafer, die = apply_overlay(*scenario.config, overlay)
    base = full_breakdown(*scenario.config, mode)
    var = full_breakdown(wafer, die, mode)
    area_change = overlay.area_increase_fraction or None
    cmp = compare(base, var, mode, area_change=area_change)

    table = Table(
        "overlay",
        [
            Column("name", "text"),
            Column("area_increase_fraction"),
            Column("die_area_mm2"),
            Column("testing_cost_delta_eur", "money"),
            Column("packaging_cost_delta_eur", "money"),
            Column("final_test_yield_delta"),
            Column("rd_additional_cost_eur", "money"),
            Column("time_to_market_delay_months"),
        ],
    )
    table.add(
        name,
        overlay.area_increase_fraction,
        die.die_area,
        overlay.testing_cost_delta,
        overlay.packaging_cost_delta,
        overlay.final_test_yield_delta,
        overlay.rd_additional_cost,
        overlay.time_to_market_delay_months,
    )
    report.tables.append(table)
    labelled = [("baseline", base), (name, var)]
    report.tables.append(_breakdown_table("breakdowns", labelled, mode))
    report.tables.append(_comparison_table(cmp, area_change))
    report.tables.append(_floor_hundred_table(labelled))
    report.notes.append(
        "R&D additions and time-to-market delay are reported as entered; they are not "
        "amortized into the per-chip cost."
    )
    report.notes.append(FLOOR_HUNDRED_NOTE)


def _transition(scenario: ScenarioFile, mode: RoundingMode, flags: dict, report: Report) -> None:
    target = flags.get("variant")
    if target is None:
        raise UsageError("transition needs the target scenario (path or bundled name) as the variant")
    if isinstance(target, ScenarioFile):
        other, label = target, "variant"
    else:
        data, _ = read_scenario_bytes(target)
        other, label = parse_scenario(data), Path(target).name.removesuffix(".scenario")
        report.provenance["variant_input_sha256"] = _digest(data)
    cmp = wafer_transition(scenario.config, other.config, mode)
    labelled = [("baseline", cmp.baseline), (label, cmp.variant)]
    report.tables.append(_breakdown_table("breakdowns", labelled, mode))
    report.tables.append(_comparison_table(cmp, None))

    base_fh, var_fh = cmp.baseline.weekly_output_floor_hundred(), cmp.variant.weekly_output_floor_hundred()
    table = Table(
        "weekly_output",
        [
            Column("convention", "text"),
            Column("delta_min", "int"),
            Column("delta_max", "int"),
            Column("ratio_min"),
            Column("ratio_max"),
        ],
    )

    def ratio(a, b):
        return a / b if b else None

    b, v = cmp.baseline, cmp.variant
    table.add(
        "exact",
        cmp.weekly_output_delta_min,
        cmp.weekly_output_delta_max,
        ratio(v.weekly_output_min, b.weekly_output_min),
        ratio(v.weekly_output_max, b.weekly_output_max),
    )
    table.add(
        "floor_hundred",
        var_fh[0] - base_fh[0],
        var_fh[1] - base_fh[1],
        ratio(var_fh[0], base_fh[0]),
        ratio(var_fh[1], base_fh[1]),
    )
    report.tables.append(table)
    report.tables.append(_floor_hundred_table(labelled))
    report.notes.append(
        "Capital cost of retooling a fab for the new wafer size is not modeled; "
        "only order-of-magnitude estimates (up to about a billion EUR) exist."
    )
    report.notes.append(FLOOR_HUNDRED_NOTE)


def _parse_values(raw) -> list[float]:
    if raw is None:
        raise UsageError("sweep needs --values, e.g. --values 10,11,12")
    if isinstance(raw, str):
        try:
            return [float(v) for v in raw.split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"--values must be comma-separated numbers, got {raw!r}") from None
    return [float(v) for v in raw]


def _sweep(scenario: ScenarioFile, mode: RoundingMode, flags: dict, report: Report) -> None:
    parameter = flags.get("parameter")
    if parameter not in SWEEP_PARAMETERS:
        raise UsageError(f"sweep needs --parameter, one of {', '.join(SWEEP_PARAMETERS)}")
    values = _parse_values(flags.get("values"))
    rows = sensitivity_sweep(scenario.config, parameter, values, mode, workers=flags.get("workers") or 1)
    table = Table(
        "sweep",
        [
            Column("parameter", "text"),
            Column("value"),
            Column("total_chip_cost_eur", "money"),
            Column("relative_delta"),
            Column("elasticity"),
        ],
    )
    for row in rows:
        table.add(row.parameter, row.value, row.breakdown.total_chip_cost, row.relative_delta, row.elasticity)
    report.tables.append(table)
    report.notes.append(
        "The first value is the baseline. Elasticity is relative cost change over relative "
        "input change and is n/a where the input did not move."
    )
    if mode is RoundingMode.PAPER:
        report.notes.append("paper rounding: relative deltas use totals rounded to the cent.")


def _attack(scenario: ScenarioFile, mode: RoundingMode, flags: dict, report: Report) -> None:
    name, profile = _pick(scenario.attacks, flags.get("variant"), "attack profile")
    equipment = Table("equipment", [Column("label", "text"), Column("cost_eur", "money")])
    for label, cost in profile.equipment_items:
        equipment.add(label, cost)
    report.tables.append(equipment)
    costs = Table(
        "attack_cost",
        [
            Column("attack", "text"),
            Column("equipment_eur", "money"),
            Column("staff_eur", "money"),
            Column("materials_eur", "money"),
            Column("infrastructure_eur", "money"),
            Column("attack_total_cost_eur", "money"),
        ],
    )
    total = attack_cost(profile)
    costs.add(name, profile.equipment_cost, profile.staff_cost, profile.materials_cost, profile.infrastructure_cost, total)
    report.tables.append(costs)

    gain, gain_source = flags.get("gain"), "--gain"
    if gain is None and (flags.get("loss") is not None or len(scenario.losses) == 1):
        loss_name, loss = _pick(scenario.losses, flags.get("loss"), "loss model")
        gain, gain_source = expected_loss(loss), f"expected loss of {loss_name!r}"
        report.assumptions.append(
            f"loss per exploited unit for {loss_name!r} is a user-supplied figure; "
            "it is used as the attacker's expected gain"
        )
    if gain is None:
        report.notes.append("No expected gain given (--gain or --loss); break-even not evaluated.")
        return
    threshold = flags.get("threshold")
    threshold = 1.0 if threshold is None else threshold
    verdict = break_even(profile, gain, threshold)
    table = Table(
        "break_even",
        [
            Column("attack_total_cost_eur", "money"),
            Column("expected_gain_or_loss_eur", "money"),
            Column("gain_source", "text"),
            Column("feasibility_ratio"),
            Column("rationality_threshold"),
            Column("verdict", "text"),
        ],
    )
    table.add(verdict.attack_total_cost, verdict.expected_gain_or_loss, gain_source, verdict.feasibility_ratio, threshold, verdict.verdict.value)
    report.tables.append(table)
    report.assumptions.append(
        f"rationality threshold {threshold:g} is a policy knob; an attack is called rational "
        "only when gain / cost is strictly above it"
    )


def _require_number(flags: dict, key: str, option: str) -> float:
    value = flags.get(key)
    if value is None:
        raise UsageError(f"worth-it needs {option}")
    return float(value)


def _worth_it(scenario: ScenarioFile, mode: RoundingMode, flags: dict, report: Report) -> None:
    without_name, without = _pick(scenario.losses, flags.get("loss_without"), "loss model")
    with_name, with_ = (
        _pick(scenario.losses, flags["loss_with"], "loss model")
        if flags.get("loss_with") is not None
        else (without_name, without)
    )
    p_without = _require_number(flags, "p_without", "--p-without")
    p_with = _require_number(flags, "p_with", "--p-with")
    added = _require_number(flags, "security_cost", "--security-cost")
    acceptable = _require_number(flags, "acceptable_risk", "--acceptable-risk")
    verdict = security_worth_it(added, without, with_, p_without, p_with, acceptable)

    inputs = Table(
        "inputs",
        [
            Column("case", "text"),
            Column("loss_model", "text"),
            Column("expected_loss_eur", "money"),
            Column("success_probability"),
        ],
    )
    inputs.add("without_security", without_name, expected_loss(without), p_without)
    inputs.add("with_security", with_name, expected_loss(with_), p_with)
    report.tables.append(inputs)
    table = Table(
        "verdict",
        [
            Column("security_added_cost_eur", "money"),
            Column("risk_reduction_eur", "money"),
            Column("expected_gain_or_loss_eur", "money"),
            Column("residual_risk_eur", "money"),
            Column("acceptable_risk_eur", "money"),
            Column("risk_acceptable", "bool"),
        ],
    )
    table.add(added, verdict.risk_reduction, verdict.expected_gain_or_loss, verdict.residual_risk, acceptable, verdict.risk_acceptable)
    report.tables.append(table)
    report.notes.append("expected_gain_or_loss_eur > 0 means the security pays for itself.")
    report.assumptions.append("attack success probabilities are user-supplied point estimates")
    for name in dict.fromkeys((without_name, with_name)):
        report.assumptions.append(f"loss per exploited unit for {name!r} is a user-supplied figure")


_HANDLERS = {
    "cost": (_cost, "Per-chip production cost"),
    "overlay": (_overlay, "Security overlay comparison"),
    "transition": (_transition, "Wafer size transition"),
    "sweep": (_sweep, "Sensitivity sweep"),
    "attack": (_attack, "Attack cost and break-even"),
    "worth-it": (_worth_it, "Is the security worth it"),
}


def run_subcommand(
    name: str, scenario: ScenarioFile, flags: dict | None = None, *, input_digest: str | None = None
) -> Report:
    """Run one subcommand against a parsed scenario and build its report.

    ``flags`` holds the subcommand options by their long-option names with
    dashes turned into underscores (``rounding``, ``variant``, ``parameter``,
    ``values``, ``loss``, ``gain``, ``threshold``, ``loss_without``, ...).
    """
    if name not in _HANDLERS:
        raise UsageError(f"unknown subcommand {name!r}; choose from {', '.join(SUBCOMMANDS)}")
    flags = dict(flags or {})
    mode = RoundingMode(flags.get("rounding") or scenario.options.rounding_mode or RoundingMode.EXACT)
    handler, title = _HANDLERS[name]
    report = Report(
        title=f"{title} ({name})",
        provenance={
            "tool": f"siccost {__version__}",
            "subcommand": name,
            "input_sha256": input_digest or _digest(dump_scenario(scenario)),
            "rounding_mode": mode.value,
        },
    )
    if mode is RoundingMode.PAPER and name in ("cost", "overlay", "transition"):
        report.notes.append(PAPER_MODE_NOTE)
    try:
        handler(scenario, mode, flags, report)
    except ValidationError:
        raise
    except DomainError as exc:
        raise DomainError(f"{name}: {exc}") from exc
    return report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, help="scenario file path or bundled name")
    common.add_argument("--variant", help="overlay / attack profile name, or target scenario for transition")
    common.add_argument("--rounding", choices=[m.value for m in RoundingMode])
    common.add_argument("--format", choices=FORMATS, help="defaults to $SICCOST_FORMAT, then table")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="siccost", description="Smart-card IC cost and attack economics.")
    parser.add_argument("--version", action="version", version=f"siccost {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    sub.add_parser("cost", parents=[common], help="per-chip cost breakdown")
    sub.add_parser("overlay", parents=[common], help="apply a security overlay and compare")
    sub.add_parser("transition", parents=[common], help="compare against another wafer configuration")
    sweep = sub.add_parser("sweep", parents=[common], help="one-at-a-time parameter sweep")
    sweep.add_argument("--parameter", choices=SWEEP_PARAMETERS, required=True)
    sweep.add_argument("--values", required=True, help="comma-separated values; the first is the baseline")
    sweep.add_argument("--workers", type=int, default=1)
    attack = sub.add_parser("attack", parents=[common], help="attack cost and break-even verdict")
    attack.add_argument("--loss", help="loss model whose expected loss is the attacker's gain")
    attack.add_argument("--gain", type=float, help="expected attacker gain in EUR")
    attack.add_argument("--threshold", type=float, default=1.0)
    worth = sub.add_parser("worth-it", parents=[common], help="does added security pay for itself")
    worth.add_argument("--loss-without", help="loss model without the security")
    worth.add_argument("--loss-with", help="loss model with the security (defaults to --loss-without)")
    worth.add_argument("--p-without", type=float, required=True, help="attack success probability without")
    worth.add_argument("--p-with", type=float, required=True, help="attack success probability with")
    worth.add_argument("--security-cost", type=float, required=True, help="cost of the security in EUR")
    worth.add_argument("--acceptable-risk", type=float, required=True, help="risk budget in EUR")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("subcommand", "scenario", "format", "out")}
    try:
        data, _ = read_scenario_bytes(args.scenario)
        scenario = parse_scenario(data)
        fmt = args.format or scenario.options.output_format or os.environ.get("SICCOST_FORMAT") or "table"
        if fmt not in FORMATS:
            raise UsageError(f"SICCOST_FORMAT must be one of {', '.join(FORMATS)}, got {fmt!r}")
        report = run_subcommand(args.subcommand, scenario, flags, input_digest=_digest(data))
        body = emit(report, fmt)
    except UsageError as exc:
        print(f"siccost: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError, FileNotFoundError) as exc:
        print(f"siccost: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"siccost: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    if args.out is not None:
        args.out.write_bytes(body)
    else:
        sys.stdout.buffer.write(body)
        sys.stdout.flush()
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
