from .controller import (
    AI,
    HUMAN,
    ControllerParams,
    ControllerTickResult,
    LoaSwitch,
    MixedInitiativeController,
    Variant,
)
from .fuzzy import (
    NO_SWITCH,
    STAY,
    SWITCH,
    FuzzyInput,
    Rule,
    RuleBase,
    RuleBaseError,
    SwitchDecision,
    caa_mi_rule_base,
    fuzzify,
    infer,
    mi_rule_base,
    ramp_up,
)
from .window import MotionErrorWindow

__all__ = [
    "AI",
    "HUMAN",
    "ControllerParams",
    "ControllerTickResult",
    "FuzzyInput",
    "LoaSwitch",
    "MixedInitiativeController",
    "MotionErrorWindow",
    "NO_SWITCH",
    "Rule",
    "RuleBase",
    "RuleBaseError",
    "STAY",
    "SWITCH",
    "SwitchDecision",
    "Variant",
    "caa_mi_rule_base",
    "fuzzify",
    "infer",
    "mi_rule_base",
    "ramp_up",
]
