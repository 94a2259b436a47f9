"""Attack economics: what an attack costs, what a break costs, and whether
added security pays for itself."""

from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, ValidationError


def _non_negative(obj, *names):
    for name in names:
        value = getattr(obj, name)
        if value < 0:
            raise ValidationError(name, f"must be >= 0, got {value}")


@dataclass(frozen=True)
class AttackProfile:
    equipment_items: tuple[tuple[str, float], ...] = ()
    expert_count: int = 0
    expert_annual_salary: float = 0.0
    duration_years: float = 0.0
    target_chip_unit_cost: float = 0.0
    target_chips_needed: int = 0
    infrastructure_cost: float = 0.0

    def __post_init__(self):
        items = tuple((str(label), cost) for label, cost in self.equipment_items)
        object.__setattr__(self, "equipment_items", items)
        for i, (label, cost) in enumerate(items):
            if cost < 0:
                raise ValidationError(f"equipment_items[{i}]", f"cost of {label!r} must be >= 0, got {cost}")
        _non_negative(
            self,
            "expert_count",
            "expert_annual_salary",
            "duration_years",
            "target_chip_unit_cost",
            "target_chips_needed",
            "infrastructure_cost",
        )

    @property
    def equipment_cost(self) -> float:
        return sum(cost for _, cost in self.equipment_items)

    @property
    def staff_cost(self) -> float:
        return self.expert_count * self.expert_annual_salary * self.duration_years

    @property
    def materials_cost(self) -> float:
        return self.target_chips_needed * self.target_chip_unit_cost


@dataclass(frozen=True)
class ReplacementEvent:
    """Worst case after a break: reissue every card, replace terminals and
    lose revenue while the system is down."""

    units_to_reissue: int = 0
    reissue_cost_per_unit: float = 0.0
    downtime_months: float = 0.0
    revenue_loss_per_month: float = 0.0
    terminal_replacement_cost: float = 0.0

    def __post_init__(self):
        _non_negative(
            self,
            "units_to_reissue",
            "reissue_cost_per_unit",
            "downtime_months",
            "revenue_loss_per_month",
            "terminal_replacement_cost",
        )


@dataclass(frozen=True)
class LossModel:
    deployed_units: int
    exploited_fraction: float
    loss_per_exploited_unit: float
    replacement: ReplacementEvent | None = None

    def __post_init__(self):
        _non_negative(self, "deployed_units", "loss_per_exploited_unit")
        if not 0 <= self.exploited_fraction <= 1:
            raise ValidationError("exploited_fraction", f"must be in [0, 1], got {self.exploited_fraction}")


class Verdict(str, Enum):
    ATTACK_RATIONAL = "attack_rational"
    ATTACK_IRRATIONAL = "attack_irrational"


@dataclass(frozen=True)
class RiskVerdict:
    """Outcome of a break-even or security-worth-it evaluation.

    Fields that the producing operation does not compute are ``None``.
    """

    attack_total_cost: float | None = None
    expected_gain_or_loss: float | None = None
    feasibility_ratio: float | None = None
    verdict: Verdict | None = None
    residual_risk: float | None = None
    risk_acceptable: bool | None = None
    risk_reduction: float | None = None


def attack_cost(profile: AttackProfile) -> float:
    return (
        profile.equipment_cost
        + profile.staff_cost
        + profile.materials_cost
        + profile.infrastructure_cost
    )


def replacement_event_cost(event: ReplacementEvent) -> float:
    return (
        event.units_to_reissue * event.reissue_cost_per_unit
        + event.downtime_months * event.revenue_loss_per_month
        + event.terminal_replacement_cost
    )


def expected_loss(model: LossModel) -> float:
    loss = model.deployed_units * model.exploited_fraction * model.loss_per_exploited_unit
    if model.replacement is not None:
        loss += replacement_event_cost(model.replacement)
    return loss


def break_even(
    attack: AttackProfile | float, expected_gain: float, rationality_threshold: float = 1.0
) -> RiskVerdict:
    """Attacker-side feasibility.

    The attack counts as rational only when gain / cost is strictly above
    ``rationality_threshold``.
    """
    cost = attack_cost(attack) if isinstance(attack, AttackProfile) else float(attack)
    if cost <= 0:
        raise DomainError("feasibility ratio is undefined for an attack that costs nothing")
    ratio = expected_gain / cost
    verdict = Verdict.ATTACK_RATIONAL if ratio > rationality_threshold else Verdict.ATTACK_IRRATIONAL
    return RiskVerdict(
        attack_total_cost=cost,
        expected_gain_or_loss=expected_gain,
        feasibility_ratio=ratio,
        verdict=verdict,
    )


def security_worth_it(
    security_added_cost: float,
    loss_without: LossModel,
    loss_with: LossModel,
    success_prob_without: float,
    success_prob_with: float,
    acceptable_risk: float,
) -> RiskVerdict:
    """Defender-side view of a security investment.

    ``expected_gain_or_loss`` is the risk reduction bought minus what the
    security costs; positive means the security pays for itself.
    """
    for name, p in (("success_prob_without", success_prob_without), ("success_prob_with", success_prob_with)):
        if not 0 <= p <= 1:
            raise DomainError(f"{name} must be in [0, 1], got {p}")
    residual = success_prob_with * expected_loss(loss_with)
    reduction = success_prob_without * expected_loss(loss_without) - residual
    return RiskVerdict(
        expected_gain_or_loss=reduction - security_added_cost,
        residual_risk=residual,
        risk_acceptable=residual <= acceptable_risk,
        risk_reduction=reduction,
    )
