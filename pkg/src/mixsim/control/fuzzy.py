"""Fuzzification and hierarchical bang-bang rule inference.

Four inputs drive the switch decision: the windowed motion-error degree,
the operator availability degree, the active LOA (crisp) and the current
speed degree. Rules are evaluated strictly in priority order with a min
t-norm; the first rule whose antecedent reaches the activation threshold
fires and its crisp consequent is applied (largest-of-maxima collapses to
exactly this under two crisp output states). No activated rule means no
switch, which biases the controller toward stability.

Rule bases serialize to YAML so the availability-aware and the plain
variants differ only by declared rules.
"""

from dataclasses import dataclass

import yaml

from ..world.robot import LoaMode

SWITCH = "switch"
STAY = "stay"

_TERMS = {
    "error": ("high", "low"),
    "availability": ("attending", "not_attending"),
    "loa": ("teleoperation", "autonomy"),
    "speed": ("low", "high"),
}


def ramp_up(x: float, lo: float, hi: float) -> float:
    """0 below lo, 1 above hi, linear in between."""
    if x <= lo:
        return 0.0
    if x >= hi:
        return 1.0
    return (x - lo) / (hi - lo)


@dataclass(frozen=True)
class FuzzyInput:
    error_high: float
    availability: float
    loa: LoaMode
    speed_low: float

    def term_degree(self, var: str, term: str) -> float:
        if var == "error":
            return self.error_high if term == "high" else 1.0 - self.error_high
        if var == "availability":
            return self.availability if term == "attending" else 1.0 - self.availability
        if var == "loa":
            return 1.0 if self.loa.value == term else 0.0
        if var == "speed":
            return self.speed_low if term == "low" else 1.0 - self.speed_low
        raise KeyError(var)


def fuzzify(
    mean_error: float,
    availability_degree: float,
    loa: LoaMode,
    speed: float,
    error_low: float = 0.1,
    error_high: float = 0.3,
    speed_low: float = 0.1,
    speed_high: float = 0.3,
) -> FuzzyInput:
    """Trapezoid memberships for error (rising) and speed (falling)."""
    return FuzzyInput(
        error_high=ramp_up(mean_error, error_low, error_high),
        availability=availability_degree,
        loa=loa,
        speed_low=1.0 - ramp_up(speed, speed_low, speed_high),
    )


@dataclass(frozen=True)
class Rule:
    priority: int
    antecedent: dict[str, str]  # variable -> term, conjunction (min)
    consequent: str  # SWITCH or STAY
    target: LoaMode | None = None

    def degree(self, fz: FuzzyInput) -> float:
        return min(fz.term_degree(var, term) for var, term in self.antecedent.items())


@dataclass(frozen=True)
class SwitchDecision:
    action: str  # SWITCH or STAY
    target: LoaMode | None
    firing_rule: int | None
    activation: float


NO_SWITCH = SwitchDecision(STAY, None, None, 0.0)


class RuleBaseError(ValueError):
    """Malformed rule base (duplicate priorities, bad terms, self-switch)."""


class RuleBase:
    def __init__(self, rules: list[Rule]):
        priorities = [r.priority for r in rules]
        if len(set(priorities)) != len(priorities):
            raise RuleBaseError("duplicate rule priorities")
        for r in rules:
            if not r.antecedent:
                raise RuleBaseError(f"rule {r.priority}: empty antecedent")
            for var, term in r.antecedent.items():
                if var not in _TERMS or term not in _TERMS[var]:
                    raise RuleBaseError(f"rule {r.priority}: unknown term {var}={term}")
            if r.consequent == SWITCH:
                if r.target is None:
                    raise RuleBaseError(f"rule {r.priority}: switch rule needs a target")
                if r.antecedent.get("loa") == r.target.value:
                    raise RuleBaseError(f"rule {r.priority}: switch into the active LOA")
                if "loa" not in r.antecedent:
                    raise RuleBaseError(f"rule {r.priority}: switch rule must pin the active LOA")
            elif r.consequent != STAY:
                raise RuleBaseError(f"rule {r.priority}: unknown consequent {r.consequent!r}")
        self.rules = sorted(rules, key=lambda r: r.priority)

    def __len__(self) -> int:
        return len(self.rules)

    def to_config(self) -> dict:
        out = []
        for r in self.rules:
            entry = {"priority": r.priority, "if": dict(r.antecedent), "then": r.consequent}
            if r.target is not None:
                entry["target"] = r.target.value
            out.append(entry)
        return {"rules": out}

    @classmethod
    def from_config(cls, cfg: dict) -> "RuleBase":
        rules = []
        for entry in cfg["rules"]:
            target = entry.get("target")
            rules.append(
                Rule(
                    priority=int(entry["priority"]),
                    antecedent={str(k): str(v) for k, v in entry["if"].items()},
                    consequent=str(entry["then"]),
                    target=LoaMode(target) if target is not None else None,
                )
            )
        return cls(rules)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            yaml.safe_dump(self.to_config(), f, sort_keys=False)

    @classmethod
    def load(cls, path) -> "RuleBase":
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_config(yaml.safe_load(f))


def infer(rules: RuleBase, fz: FuzzyInput, activation_threshold: float = 0.5) -> SwitchDecision:
    """First rule (in priority order) at or above the threshold wins."""
    for rule in rules.rules:
        deg = rule.degree(fz)
        if deg >= activation_threshold:
            return SwitchDecision(rule.consequent, rule.target, rule.priority, deg)
    return NO_SWITCH


def mi_rule_base() -> RuleBase:
    """Expert-error driven switching only (availability-blind)."""
    return RuleBase(
        [
            Rule(0, {"error": "high", "loa": "autonomy", "speed": "low"}, SWITCH, LoaMode.TELEOPERATION),
            Rule(1, {"error": "high", "loa": "teleoperation", "speed": "low"}, SWITCH, LoaMode.AUTONOMY),
        ]
    )


def caa_mi_rule_base() -> RuleBase:
    """Availability and active LOA take precedence over the error rules.

    While the operator is not attending, the robot switches to (or stays
    in) autonomy; the trailing rules are identical to the plain variant.
    """
    return RuleBase(
        [
            Rule(0, {"availability": "not_attending", "loa": "teleoperation"}, SWITCH, LoaMode.AUTONOMY),
            Rule(1, {"availability": "not_attending", "loa": "autonomy"}, STAY),
            Rule(2, {"error": "high", "loa": "autonomy", "speed": "low"}, SWITCH, LoaMode.TELEOPERATION),
            Rule(3, {"error": "high", "loa": "teleoperation", "speed": "low"}, SWITCH, LoaMode.AUTONOMY),
        ]
    )
