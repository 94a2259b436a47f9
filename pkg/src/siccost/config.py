"""Scenario files: a single JSON document describing one production
configuration plus named overlays, attack profiles and loss models.

Unknown keys are rejected everywhere, and every error names the dotted
path of the offending field.
"""

import json
import types
from dataclasses import MISSING, asdict, dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Union, get_args, get_origin

from .cost import PriceModel, RoundingMode
from .errors import ParseError, ValidationError
from .scenario import SecurityOverlay, overlay_die
from .security import AttackProfile, LossModel, ReplacementEvent
from .wafer import DieSpec, WaferSpec

SCHEMA_VERSIONS = ("1",)
OUTPUT_FORMATS = ("table", "csv", "json", "markdown")
BUNDLED = ("paper_300mm", "paper_300mm_secure", "paper_450mm")


@dataclass(frozen=True)
class PriceSection:
    """Markup fractions; the component cost is the computed chip cost."""

    direct_cost_fraction: float = 0.0
    gross_margin_fraction: float = 0.0
    average_discount_fraction: float = 0.0

    def __post_init__(self):
        PriceModel(0.0, *asdict(self).values())

    def model(self, component_cost: float) -> PriceModel:
        return PriceModel(component_cost, *asdict(self).values())


@dataclass(frozen=True)
class Options:
    rounding_mode: RoundingMode | None = None
    output_format: str | None = None

    def __post_init__(self):
        if self.rounding_mode is not None:
            try:
                object.__setattr__(self, "rounding_mode", RoundingMode(self.rounding_mode))
            except ValueError:
                raise ValidationError("rounding_mode", f"must be one of exact, paper; got {self.rounding_mode!r}") from None
        if self.output_format is not None and self.output_format not in OUTPUT_FORMATS:
            raise ValidationError(
                "output_format", f"must be one of {', '.join(OUTPUT_FORMATS)}; got {self.output_format!r}"
            )


@dataclass(frozen=True)
class ScenarioFile:
    schema_version: str
    wafer: WaferSpec
    die: DieSpec
    price: PriceSection | None = None
    overlays: dict[str, SecurityOverlay] = field(default_factory=dict)
    attacks: dict[str, AttackProfile] = field(default_factory=dict)
    losses: dict[str, LossModel] = field(default_factory=dict)
    options: Options = field(default_factory=Options)
    description: str = ""

    @property
    def config(self) -> tuple[WaferSpec, DieSpec]:
        return self.wafer, self.die


def _join(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else str(key)


def _reject_duplicates(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise ParseError(f"duplicate key {key!r}")
        seen[key] = value
    return seen


def _expect_object(node, path: str) -> dict:
    if not isinstance(node, dict):
        raise ParseError(f"expected an object, got {type(node).__name__}", path=path)
    return node


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {json.dumps(value)}", path=path)
    return float(value)


def _integer(value, path: str) -> int:
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected an integer, got {json.dumps(value)}", path=path)
    return value


def _string(value, path: str) -> str:
    if not isinstance(value, str):
        raise ParseError(f"expected a string, got {json.dumps(value)}", path=path)
    return value


def _optional_inner(tp):
    if get_origin(tp) in (Union, types.UnionType):
        args = [a for a in get_args(tp) if a is not type(None)]
        return args[0]
    return tp


def _convert(tp, value, path: str):
    tp = _optional_inner(tp)
    if tp is float:
        return _number(value, path)
    if tp is int:
        return _integer(value, path)
    if tp is str or tp is RoundingMode:
        return _string(value, path)
    if tp is ReplacementEvent:
        return _section(ReplacementEvent, value, path)
    raise TypeError(f"no converter for {tp!r}")  # pragma: no cover


def _equipment(value, path: str) -> tuple[tuple[str, float], ...]:
    if not isinstance(value, list):
        raise ParseError("expected a list of {label, cost} objects", path=path)
    items = []
    for i, item in enumerate(value):
        item_path = _join(path, i)
        item = _expect_object(item, item_path)
        unknown = sorted(set(item) - {"label", "cost"})
        if unknown:
            raise ParseError(f"unknown key {unknown[0]!r}", path=_join(item_path, unknown[0]))
        for key in ("label", "cost"):
            if key not in item:
                raise ParseError("missing required key", path=_join(item_path, key))
        items.append((_string(item["label"], _join(item_path, "label")), _number(item["cost"], _join(item_path, "cost"))))
    return tuple(items)


def _section(cls, node, path: str):
    node = _expect_object(node, path)
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(node) - set(known))
    if unknown:
        raise ParseError(f"unknown key {unknown[0]!r}", path=_join(path, unknown[0]))
    kwargs = {}
    for name, f in known.items():
        if name not in node:
            if f.default is MISSING and f.default_factory is MISSING:
                raise ParseError("missing required key", path=_join(path, name))
            continue
        value = node[name]
        if value is None and _optional_inner(f.type) is not f.type:
            kwargs[name] = None
        elif cls is AttackProfile and name == "equipment_items":
            kwargs[name] = _equipment(value, _join(path, name))
        else:
            kwargs[name] = _convert(f.type, value, _join(path, name))
    try:
        return cls(**kwargs)
    except ValidationError as exc:
        raise exc.prefixed(path) from None


def _named(cls, node, path: str) -> dict:
    node = _expect_object(node, path)
    return {_string(name, path): _section(cls, value, _join(path, name)) for name, value in node.items()}


TOP_LEVEL = ("schema_version", "description", "wafer", "die", "price", "overlays", "attacks", "losses", "options")


def parse_scenario(data: bytes | str) -> ScenarioFile:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from None
    if not data.strip():
        raise ParseError("empty scenario file", line=1)
    try:
        tree = json.loads(data, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    tree = _expect_object(tree, "<root>")

    unknown = sorted(set(tree) - set(TOP_LEVEL))
    if unknown:
        raise ParseError(f"unknown key {unknown[0]!r}", path=unknown[0])
    for key in ("schema_version", "wafer", "die"):
        if key not in tree:
            raise ParseError("missing required key", path=key)
    version = _string(tree["schema_version"], "schema_version")
    if version not in SCHEMA_VERSIONS:
        raise ValidationError("schema_version", f"unsupported version {version!r}; expected one of {SCHEMA_VERSIONS}")

    wafer = _section(WaferSpec, tree["wafer"], "wafer")
    die = _section(DieSpec, tree["die"], "die")
    if die.die_area >= wafer.area:
        raise ValidationError("die.die_area", f"{die.die_area} mm² does not fit on a {wafer.diameter} mm wafer")
    overlays = _named(SecurityOverlay, tree.get("overlays", {}), "overlays")
    for name, overlay in overlays.items():
        try:
            overlay_die(die, overlay)
        except ValidationError as exc:
            raise exc.prefixed(_join("overlays", name)) from None
    price = tree.get("price")
    return ScenarioFile(
        schema_version=version,
        description=_string(tree.get("description", ""), "description"),
        wafer=wafer,
        die=die,
        price=None if price is None else _section(PriceSection, price, "price"),
        overlays=overlays,
        attacks=_named(AttackProfile, tree.get("attacks", {}), "attacks"),
        losses=_named(LossModel, tree.get("losses", {}), "losses"),
        options=_section(Options, tree.get("options", {}), "options"),
    )


def _plain(obj):
    if isinstance(obj, RoundingMode):
        return obj.value
    if isinstance(obj, AttackProfile):
        out = {f.name: getattr(obj, f.name) for f in fields(obj)}
        out["equipment_items"] = [{"label": label, "cost": cost} for label, cost in obj.equipment_items]
        return out
    if hasattr(obj, "__dataclass_fields__"):
        return {f.name: _plain(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    return obj


def dump_scenario(scenario: ScenarioFile) -> bytes:
    """Serialize back to the canonical JSON form that ``parse_scenario`` reads."""
    tree = {
        "schema_version": scenario.schema_version,
        "description": scenario.description,
        "wafer": _plain(scenario.wafer),
        "die": _plain(scenario.die),
        "price": _plain(scenario.price),
        "overlays": _plain(scenario.overlays),
        "attacks": _plain(scenario.attacks),
        "losses": _plain(scenario.losses),
        "options": {k: v for k, v in _plain(scenario.options).items() if v is not None},
    }
    if tree["price"] is None:
        del tree["price"]
    return (json.dumps(tree, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def bundled_path(name: str):
    return resources.files("siccost") / "scenarios" / f"{name}.scenario"


def read_scenario_bytes(ref: str) -> tuple[bytes, str]:
    """Resolve ``ref`` as a file path, falling back to a bundled scenario name."""
    path = Path(ref)
    if path.is_file():
        return path.read_bytes(), str(path)
    name = path.name.removesuffix(".scenario")
    if name in BUNDLED and not path.exists():
        return bundled_path(name).read_bytes(), f"bundled:{name}"
    raise FileNotFoundError(f"no scenario file at {ref!r} (bundled names: {', '.join(BUNDLED)})")


def load_scenario(ref: str) -> ScenarioFile:
    return parse_scenario(read_scenario_bytes(ref)[0])
