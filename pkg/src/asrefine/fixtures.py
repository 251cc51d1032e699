"""Shipped models: the car alarm system (CAS) at several parameter scales.

``cas_N`` multiplies the three timer values of the ``after`` action and the
upper bound of the ``int`` type by N, which leaves the behaviour unchanged
but inflates the parameter domain an explicit enumeration has to cover.
"""

import logging
from typing import Optional

from .model import Model
from .parser import parse_model

logger = logging.getLogger(__name__)

FIXTURE_SCALES = {"cas_1": 1, "cas_10": 10, "cas_100": 100, "cas_1000": 1000}

# Timer values of the 'after' action at scale 1
TIMERS = (20, 30, 270)
INT_MAX = 270

_CAS_TEMPLATE = """\
% Car alarm system. State codes for aState:
%   0 Flash, 1 Alarm, 2 Armed, 3 ClosedAndLocked, 4 ClosedAndUnlocked,
%   5 OpenAndLocked, 6 OpenAndUnlocked, 7 SilentAndOpen
% fromAlarm / fromArmed remember the sub-step inside the alarm and armed phases.
% armPending is 1 between entering Armed and the AlarmArmed_SetOn signal.

type(enum_State, X) :- X in 0..7.
type(enum_From, X) :- X in 0..4.
type(enum_Bool, X) :- X in 0..1.
type(int, X) :- X in 0..{int_max}.

var([aState], enum_State).
var([fromAlarm, fromArmed], enum_From).
var([armPending, flashOn, soundOn], enum_Bool).

state_def([aState, fromAlarm, fromArmed, armPending, flashOn, soundOn]).

init([6, 0, 0, 0, 0, 0]).

as :-
    actions(
        'after'(Wait_time)::(true) => (
            ((Wait_time #= {t1} /\\ aState #= 3) =>
                (aState := 2; armPending := 1))
            []
            ((Wait_time #= {t2} /\\ aState #= 1 /\\ fromArmed #= 4) =>
                (aState := 0; fromAlarm := 4; fromArmed := 0))
            []
            ((Wait_time #= {t3} /\\ aState #= 0 /\\ fromAlarm #= 2) =>
                (aState := 7; fromAlarm := 1; fromArmed := 0))
        ),
        'Lock'::(true) => (
            ((aState #= 6 /\\ fromAlarm #= 0) => (aState := 5))
            []
            ((aState #= 4 /\\ fromArmed #\\= 1) => (aState := 3; fromArmed := 0))
        ),
        'Unlock'::(true) => (
            ((aState #= 5) => (aState := 6))
            []
            ((aState #= 3) => (aState := 4))
            []
            ((aState #= 2 /\\ armPending #= 0) => (aState := 4; fromArmed := 1))
            []
            ((aState #= 1 /\\ fromArmed #= 4) =>
                (aState := 6; fromAlarm := 3; fromArmed := 0))
            []
            ((aState #= 0 /\\ fromAlarm #= 2) => (aState := 6; fromAlarm := 1))
            []
            ((aState #= 7 /\\ fromAlarm #= 0) => (aState := 6))
        ),
        'Close'::(true) => (
            ((aState #= 6 /\\ fromAlarm #= 0) => (aState := 4))
            []
            ((aState #= 5) => (aState := 3))
            []
            ((aState #= 7 /\\ fromAlarm #= 0) => (aState := 2; armPending := 1))
        ),
        'Open'::(true) => (
            ((aState #= 4 /\\ fromArmed #\\= 1) => (aState := 6; fromArmed := 0))
            []
            ((aState #= 3) => (aState := 5))
            []
            ((aState #= 2 /\\ armPending #= 0) => (aState := 1; fromArmed := 2))
        ),
        'AlarmArmed_SetOn'::(true) => (
            ((aState #= 2 /\\ armPending #= 1) => (armPending := 0))
        ),
        'AlarmArmed_SetOff'::(true) => (
            ((aState #= 4 /\\ fromArmed #= 1) => (fromArmed := 0))
            []
            ((aState #= 1 /\\ fromArmed #= 2) => (fromArmed := 3))
        ),
        'OpticalAlarm_SetOn'::(true) => (
            ((aState #= 1 /\\ fromArmed #= 3 /\\ flashOn #= 0 /\\ soundOn #= 0) =>
                (flashOn := 1))
            []
            ((aState #= 1 /\\ fromArmed #= 3 /\\ flashOn #= 0 /\\ soundOn #= 1) =>
                (flashOn := 1; fromArmed := 4))
        ),
        'AcousticAlarm_SetOn'::(true) => (
            ((aState #= 1 /\\ fromArmed #= 3 /\\ soundOn #= 0 /\\ flashOn #= 0) =>
                (soundOn := 1))
            []
            ((aState #= 1 /\\ fromArmed #= 3 /\\ soundOn #= 0 /\\ flashOn #= 1) =>
                (soundOn := 1; fromArmed := 4))
        ),
        'OpticalAlarm_SetOff'::(true) => (
            ((fromAlarm #= 1 /\\ flashOn #= 1) => (flashOn := 0; fromAlarm := 0))
            []
            ((fromAlarm #= 3 /\\ flashOn #= 1 /\\ soundOn #= 1) => (flashOn := 0))
            []
            ((fromAlarm #= 3 /\\ flashOn #= 1 /\\ soundOn #= 0) =>
                (flashOn := 0; fromAlarm := 0))
        ),
        'AcousticAlarm_SetOff'::(true) => (
            ((aState #= 0 /\\ fromAlarm #= 4 /\\ soundOn #= 1) =>
                (soundOn := 0; fromAlarm := 2))
            []
            ((fromAlarm #= 3 /\\ soundOn #= 1 /\\ flashOn #= 1) => (soundOn := 0))
            []
            ((fromAlarm #= 3 /\\ soundOn #= 1 /\\ flashOn #= 0) =>
                (soundOn := 0; fromAlarm := 0))
        )
    ),
    dood(
        [X:int]:'after'(X)
        [] 'Lock'
        [] 'Unlock'
        [] 'Close'
        [] 'Open'
        [] 'AlarmArmed_SetOn'
        [] 'AlarmArmed_SetOff'
        [] 'OpticalAlarm_SetOn'
        [] 'AcousticAlarm_SetOn'
        [] 'OpticalAlarm_SetOff'
        [] 'AcousticAlarm_SetOff'
    ).
"""


def fixture_names() -> list[str]:
    return list(FIXTURE_SCALES)


def cas_source(scale: int = 1, param_max: Optional[int] = None) -> str:
    """
    CAS model text with timers and the ``int`` bound multiplied by ``scale``.

    Args:
        scale: Multiplier for the after-timers and the int type's upper bound
        param_max: Replaces the int type's upper bound (e.g. 30 for the reduced variant)

    Raises:
        ValueError: If scale is not positive or param_max is negative
    """
    if scale < 1:
        raise ValueError(f"scale must be >= 1, got {scale}")
    if param_max is not None and param_max < 0:
        raise ValueError(f"param_max must be >= 0, got {param_max}")
    t1, t2, t3 = (t * scale for t in TIMERS)
    int_max = param_max if param_max is not None else INT_MAX * scale
    return _CAS_TEMPLATE.format(t1=t1, t2=t2, t3=t3, int_max=int_max)


def fixture_source(name: str, param_max: Optional[int] = None) -> str:
    """
    Text of a named fixture.

    Raises:
        KeyError: If the name is unknown
    """
    if name not in FIXTURE_SCALES:
        raise KeyError(f"unknown fixture '{name}' (valid: {', '.join(FIXTURE_SCALES)})")
    return cas_source(FIXTURE_SCALES[name], param_max)


def load_fixture(name: str, param_max: Optional[int] = None) -> Model:
    model = parse_model(fixture_source(name, param_max))
    logger.debug(f"Loaded fixture {name} ({len(model.actions)} actions)")
    return model
