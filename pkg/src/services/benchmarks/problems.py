"""g01-g13 objective and constraint functions.

Every function accepts a single position (n,) or a batch (..., n).
Constraints are stacked on the last axis, inequalities first. Interval
constraints are folded into one inequality each (g04, g05), and g12's 729
disjoint spheres form a single membership constraint.
"""

import numpy as np


def _stack(*columns: np.ndarray) -> np.ndarray:
    return np.stack(columns, axis=-1)


# g01

def g01_objective(x: np.ndarray) -> np.ndarray:
    return (
        5.0 * np.sum(x[..., 0:4], axis=-1)
        - 5.0 * np.sum(x[..., 0:4] ** 2, axis=-1)
        - np.sum(x[..., 4:13], axis=-1)
    )


def g01_constraints(x: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4, x5, x6, x7, x8, x9, x10, x11, x12 = (x[..., i] for i in range(12))
    return _stack(
        2 * x1 + 2 * x2 + x10 + x11 - 10,
        2 * x1 + 2 * x3 + x10 + x12 - 10,
        2 * x2 + 2 * x3 + x11 + x12 - 10,
        -8 * x1 + x10,
        -8 * x2 + x11,
        -8 * x3 + x12,
        -2 * x4 - x5 + x10,
        -2 * x6 - x7 + x11,
        -2 * x8 - x9 + x12,
    )


# g02

def g02_objective(x: np.ndarray) -> np.ndarray:
    cos = np.cos(x)
    numerator = np.abs(np.sum(cos**4, axis=-1) - 2.0 * np.prod(cos**2, axis=-1))
    weighted = np.sum(np.arange(1, x.shape[-1] + 1) * x**2, axis=-1)
    safe = np.where(weighted > 0.0, weighted, 1.0)
    return np.where(weighted > 0.0, -numerator / np.sqrt(safe), 0.0)


def g02_constraints(x: np.ndarray) -> np.ndarray:
    return _stack(
        0.75 - np.prod(x, axis=-1),
        np.sum(x, axis=-1) - 7.5 * x.shape[-1],
    )


# g03

def g03_objective(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    return -(np.sqrt(n) ** n) * np.prod(x, axis=-1)


def g03_constraints(x: np.ndarray) -> np.ndarray:
    return _stack(np.sum(x**2, axis=-1) - 1.0)


# g04

def g04_objective(x: np.ndarray) -> np.ndarray:
    x1, x3, x5 = x[..., 0], x[..., 2], x[..., 4]
    return 5.3578547 * x3**2 + 0.8356891 * x1 * x5 + 37.293239 * x1 - 40792.141


def g04_constraints(x: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4, x5 = (x[..., i] for i in range(5))
    u1 = 85.334407 + 0.0056858 * x2 * x5 + 0.0006262 * x1 * x4 - 0.0022053 * x3 * x5
    u2 = 80.51249 + 0.0071317 * x2 * x5 + 0.0029955 * x1 * x2 + 0.0021813 * x3**2
    u3 = 9.300961 + 0.0047026 * x3 * x5 + 0.0012547 * x1 * x3 + 0.0019085 * x3 * x4
    # 0 <= u1 <= 92, 90 <= u2 <= 110, 20 <= u3 <= 25
    return _stack(
        np.maximum(u1 - 92.0, -u1),
        np.maximum(u2 - 110.0, 90.0 - u2),
        np.maximum(u3 - 25.0, 20.0 - u3),
    )


# g05

def g05_objective(x: np.ndarray) -> np.ndarray:
    x1, x2 = x[..., 0], x[..., 1]
    return 3 * x1 + 0.000001 * x1**3 + 2 * x2 + (0.000002 / 3) * x2**3


def g05_constraints(x: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4 = (x[..., i] for i in range(4))
    return _stack(
        np.maximum(-x4 + x3 - 0.55, -x3 + x4 - 0.55),
        1000 * np.sin(-x3 - 0.25) + 1000 * np.sin(-x4 - 0.25) + 894.8 - x1,
        1000 * np.sin(x3 - 0.25) + 1000 * np.sin(x3 - x4 - 0.25) + 894.8 - x2,
        1000 * np.sin(x4 - 0.25) + 1000 * np.sin(x4 - x3 - 0.25) + 1294.8,
    )


# g06

def g06_objective(x: np.ndarray) -> np.ndarray:
    return (x[..., 0] - 10) ** 3 + (x[..., 1] - 20) ** 3


def g06_constraints(x: np.ndarray) -> np.ndarray:
    x1, x2 = x[..., 0], x[..., 1]
    return _stack(
        -((x1 - 5) ** 2) - (x2 - 5) ** 2 + 100,
        (x1 - 6) ** 2 + (x2 - 5) ** 2 - 82.81,
    )


# g07

def g07_objective(x: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4, x5, x6, x7, x8, x9, x10 = (x[..., i] for i in range(10))
    return (
        x1**2 + x2**2 + x1 * x2 - 14 * x1 - 16 * x2
        + (x3 - 10) ** 2 + 4 * (x4 - 5) ** 2 + (x5 - 3) ** 2
        + 2 * (x6 - 1) ** 2 + 5 * x7**2 + 7 * (x8 - 11) ** 2
        + 2 * (x9 - 10) ** 2 + (x10 - 7) ** 2 + 45
    )


def g07_constraints(x: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4, x5, x6, x7, x8, x9, x10 = (x[..., i] for i in range(10))
    return _stack(
        -105 + 4 * x1 + 5 * x2 - 3 * x7 + 9 * x8,
        10 * x1 - 8 * x2 - 17 * x7 + 2 * x8,
        -8 * x1 + 2 * x2 + 5 * x9 - 2 * x10 - 12,
        3 * (x1 - 2) ** 2 + 4 * (x2 - 3) ** 2 + 2 * x3**2 - 7 * x4 - 120,
        5 * x1**2 + 8 * x2 + (x3 - 6) ** 2 - 2 * x4 - 40,
        x1**2 + 2 * (x2 - 2) ** 2 - 2 * x1 * x2 + 14 * x5 - 6 * x6,
        0.5 * (x1 - 8) ** 2 + 2 * (x2 - 4) ** 2 + 3 * x5**2 - x6 - 30,
        -3 * x1 + 6 * x2 + 12 * (x9 - 8) ** 2 - 7 * x10,
    )


# g08

def g08_objective(x: np.ndarray) -> np.ndarray:
    x1, x2 = x[..., 0], x[..., 1]
    denominator = x1**3 * (x1 + x2)
    safe = np.where(denominator != 0.0, denominator, 1.0)
    value = -(np.sin(2 * np.pi * x1) ** 3) * np.sin(2 * np.pi * x2) / safe
    return np.where(denominator != 0.0, value, 0.0)


def g08_constraints(x: np.ndarray) -> np.ndarray:
    x1, x2 = x[..., 0], x[..., 1]
    return _stack(x1**2 - x2 + 1, 1 - x1 + (x2 - 4) ** 2)


# g09

def g09_objective(x: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4, x5, x6, x7 = (x[..., i] for i in range(7))
    return (
        (x1 - 10) ** 2 + 5 * (x2 - 12) ** 2 + x3**4 + 3 * (x4 - 11) ** 2
        + 10 * x5**6 + 7 * x6**2 + x7**4 - 4 * x6 * x7 - 10 * x6 - 8 * x7
    )


def g09_constraints(x: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4, x5, x6, x7 = (x[..., i] for i in range(7))
    return _stack(
        2 * x1**2 + 3 * x2**4 + x3 + 4 * x4**2 + 5 * x5 - 127,
        7 * x1 + 3 * x2 + 10 * x3**2 + x4 - x5 - 282,
        23 * x1 + x2**2 + 6 * x6**2 - 8 * x7 - 196,
        4 * x1**2 + x2**2 - 3 * x1 * x2 + 2 * x3**2 + 5 * x6 - 11 * x7,
    )


# g10

def g10_objective(x: np.ndarray) -> np.ndarray:
    return x[..., 0] + x[..., 1] + x[..., 2]


def g10_constraints(x: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4, x5, x6, x7, x8 = (x[..., i] for i in range(8))
    return _stack(
        -1 + 0.0025 * (x4 + x6),
        -1 + 0.0025 * (x5 + x7 - x4),
        -1 + 0.01 * (x8 - x5),
        -x1 * x6 + 833.33252 * x4 + 100 * x1 - 83333.333,
        -x2 * x7 + 1250 * x5 + x2 * x4 - 1250 * x4,
        -x3 * x8 + 1250000 + x3 * x5 - 2500 * x5,
    )


# g11

def g11_objective(x: np.ndarray) -> np.ndarray:
    return x[..., 0] ** 2 + (x[..., 1] - 1) ** 2


def g11_constraints(x: np.ndarray) -> np.ndarray:
    return _stack(x[..., 1] - x[..., 0] ** 2)


# g12

def g12_objective(x: np.ndarray) -> np.ndarray:
    return -(100 - (x[..., 0] - 5) ** 2 - (x[..., 1] - 5) ** 2 - (x[..., 2] - 5) ** 2) / 100.0


def g12_constraints(x: np.ndarray) -> np.ndarray:
    # Nearest of the centres {1..9}^3, coordinate by coordinate
    centre = np.clip(np.rint(x), 1.0, 9.0)
    return _stack(np.sum((x - centre) ** 2, axis=-1) - 0.0625)


# g13

def g13_objective(x: np.ndarray) -> np.ndarray:
    return np.exp(np.prod(x, axis=-1))


def g13_constraints(x: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4, x5 = (x[..., i] for i in range(5))
    return _stack(
        x1**2 + x2**2 + x3**2 + x4**2 + x5**2 - 10,
        x2 * x3 - 5 * x4 * x5,
        x1**3 + x2**3 + 1,
    )
