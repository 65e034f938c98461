"""Enums for penalization and tolerance schedules."""

from enum import Enum


class PenaltyScheme(str, Enum):
    STATIC_ADDITIVE = "static"
    PROPOSED_CONSTANT = "proposed"


class ScheduleKind(str, Enum):
    NONE = "none"
    EXPONENTIAL = "exp"
    PSEUDO_ADAPTIVE = "adaptive"

    @property
    def label(self) -> str:
        """Row label used in the summary table."""
        return {
            ScheduleKind.NONE: "NONE",
            ScheduleKind.EXPONENTIAL: "EXP.",
            ScheduleKind.PSEUDO_ADAPTIVE: "ADAPTIVE",
        }[self]
