from enum import Enum


class Formulation(str, Enum):
    CLASSICAL = "classical"
    RRR1 = "rrr1"
    RRR2 = "rrr2"
