from enum import Enum


class ToleranceUpdateKind(str, Enum):
    """What the schedule did at one time-step."""

    NONE = "none"
    EXPONENTIAL = "exp"
    ADAPTIVE = "adaptive"
    SAFETY = "safety"
    ENDGAME = "endgame"
    PINNED = "pinned"
