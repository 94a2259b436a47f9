"""Production cost of smart-card ICs and the economics of attacking them."""

__version__ = "0.1.0"

from .cost import (
    CostBreakdown,
    PriceModel,
    RoundingMode,
    die_cost,
    full_breakdown,
    list_price,
    total_chip_cost,
)
from .errors import DomainError, ParseError, SiccostError, UsageError, ValidationError
from .scenario import (
    ScenarioComparison,
    SecurityOverlay,
    apply_overlay,
    compare,
    sensitivity_sweep,
    wafer_transition,
)
from .security import (
    AttackProfile,
    LossModel,
    ReplacementEvent,
    RiskVerdict,
    Verdict,
    attack_cost,
    break_even,
    expected_loss,
    replacement_event_cost,
    security_worth_it,
)
from .wafer import DieSpec, WaferSpec, dice_per_wafer, die_yield, good_chips_per_wafer, weekly_output
