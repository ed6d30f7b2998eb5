"""Switching controller state machine around the fuzzy rule base.

Owns the motion-error window, applies the post-switch cooldown that damps
human/AI contention, and records switch provenance. Operator-initiated
switches are always honored immediately; only AI-initiated switches are
subject to the cooldown.
"""

from dataclasses import dataclass
from enum import Enum

from ..world.robot import LoaMode
from .fuzzy import (
    NO_SWITCH,
    SWITCH,
    FuzzyInput,
    RuleBase,
    SwitchDecision,
    caa_mi_rule_base,
    fuzzify,
    infer,
    mi_rule_base,
)
from .window import MotionErrorWindow

AI = "ai"
HUMAN = "human"


class Variant(Enum):
    MI = "mi"
    CAA_MI = "caa-mi"
    TELEOP_ONLY = "teleop"
    AUTONOMY_ONLY = "autonomy"

    @property
    def switching(self) -> bool:
        return self in (Variant.MI, Variant.CAA_MI)

    @property
    def availability_aware(self) -> bool:
        return self is Variant.CAA_MI

    def initial_loa(self) -> LoaMode:
        if self is Variant.AUTONOMY_ONLY:
            return LoaMode.AUTONOMY
        return LoaMode.TELEOPERATION


@dataclass(frozen=True)
class ControllerParams:
    error_low: float = 0.1
    error_high: float = 0.3
    speed_low: float = 0.1
    speed_high: float = 0.3
    window_s: float = 5.0
    cooldown_s: float = 3.0
    activation: float = 0.5


@dataclass(frozen=True)
class LoaSwitch:
    t: float
    initiator: str  # AI or HUMAN
    from_mode: LoaMode
    to_mode: LoaMode
    firing_rule: int | None = None


@dataclass(frozen=True)
class ControllerTickResult:
    fuzzy_input: FuzzyInput
    decision: SwitchDecision
    suppressed: bool  # an inferred switch held back by the cooldown
    switch: LoaSwitch | None
    mean_error: float


class MixedInitiativeController:
    def __init__(
        self,
        variant: Variant,
        params: ControllerParams = ControllerParams(),
        rule_base: RuleBase | None = None,
    ):
        self.variant = variant
        self.params = params
        if rule_base is not None:
            self.rule_base = rule_base
        elif variant is Variant.CAA_MI:
            self.rule_base = caa_mi_rule_base()
        elif variant is Variant.MI:
            self.rule_base = mi_rule_base()
        else:
            self.rule_base = RuleBase([])
        self.window = MotionErrorWindow(params.window_s)
        self._last_switch_t: float | None = None

    def in_cooldown(self, t: float) -> bool:
        if self._last_switch_t is None or self.params.cooldown_s <= 0.0:
            return False
        return (t - self._last_switch_t) < self.params.cooldown_s

    def notify_goal_change(self) -> None:
        """Error must re-accumulate against a fresh goal."""
        self.window.reset()

    def evaluate(
        self, mean_error: float, availability_degree: float, loa: LoaMode, speed: float
    ) -> tuple[FuzzyInput, SwitchDecision]:
        """Fuzzify and run the rule base (no side effects).

        The availability-blind variant pins the availability degree to 1,
        reproducing the plain controller through the same pipeline.
        """
        if not self.variant.availability_aware:
            availability_degree = 1.0
        p = self.params
        fz = fuzzify(
            mean_error,
            availability_degree,
            loa,
            speed,
            p.error_low,
            p.error_high,
            p.speed_low,
            p.speed_high,
        )
        if not self.variant.switching:
            return fz, NO_SWITCH
        return fz, infer(self.rule_base, fz, p.activation)

    def update(
        self,
        t: float,
        expert_speed: float,
        actual_speed: float,
        availability_degree: float,
        loa: LoaMode,
    ) -> ControllerTickResult:
        """Advance one tick; a returned switch has already been committed."""
        mean_error = self.window.push(t, expert_speed, actual_speed)
        fz, decision = self.evaluate(mean_error, availability_degree, loa, actual_speed)
        suppressed = False
        switch = None
        if decision.action == SWITCH:
            if self.in_cooldown(t):
                suppressed = True
            else:
                switch = LoaSwitch(t, AI, loa, decision.target, decision.firing_rule)
                self._commit(t)
        return ControllerTickResult(fz, decision, suppressed, switch, mean_error)

    def apply_operator_switch(self, t: float, requested: LoaMode, loa: LoaMode) -> LoaSwitch | None:
        """Operator switches are never blocked; same-mode requests are no-ops."""
        if requested == loa:
            return None
        self._commit(t)
        return LoaSwitch(t, HUMAN, loa, requested)

    def _commit(self, t: float) -> None:
        self.window.reset()
        self._last_switch_t = t
