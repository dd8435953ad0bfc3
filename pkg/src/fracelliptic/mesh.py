"""Partitions of the interval (a, b): uniform meshes and one-sided graded meshes.

A mesh holds the P+1 partition points a = x_0 < x_1 < ... < x_P = b.  Graded
meshes cluster points at one endpoint via x_i = (i/P)^gamma (left) or its
reflection (right); they are restricted to the unit interval, which is where
the nonsmooth benchmark problems live.  Points are always computed from the
closed-form formula at each index, never by accumulation, so there is no
drift for large P.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Side", "MeshKind", "Mesh", "uniform_mesh", "graded_mesh", "half_points"]


class Side(enum.Enum):
    """Endpoint a graded mesh refines towards."""

    LEFT = enum.auto()
    RIGHT = enum.auto()


class MeshKind(enum.Enum):
    UNIFORM = "uniform"
    GRADED_LEFT = "graded-left"
    GRADED_RIGHT = "graded-right"


@dataclass(frozen=True)
class Mesh:
    """Partition of (a, b) into P cells.

    Attributes:
        a, b: interval endpoints.
        points: array of length P+1, strictly increasing, points[0] == a,
            points[-1] == b.
        kind: uniform or graded flavour.
        gamma: grading exponent (None for uniform meshes).
    """

    a: float
    b: float
    points: np.ndarray
    kind: MeshKind
    gamma: float | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < 3:
            raise ValueError("mesh needs at least P=2 cells (3 points)")
        if not np.all(np.diff(pts) > 0):
            raise ValueError("mesh points must be strictly increasing")
        if pts[0] != self.a or pts[-1] != self.b:
            raise ValueError("mesh points must start at a and end at b")

    @property
    def P(self) -> int:
        """Number of cells."""
        return self.points.size - 1

    @property
    def h(self) -> float:
        """Largest cell width (the uniform step for uniform meshes)."""
        return float(np.max(self.widths))

    @property
    def widths(self) -> np.ndarray:
        """Cell widths h_j = x_j - x_{j-1}, length P."""
        return np.diff(self.points)

    @property
    def interior(self) -> np.ndarray:
        """Interior nodes x_1 .. x_{P-1}."""
        return self.points[1:-1]

    def is_uniform(self) -> bool:
        return self.kind is MeshKind.UNIFORM


def uniform_mesh(a: float, b: float, P: int) -> Mesh:
    """Uniform partition of (a, b) with P cells of width (b-a)/P."""
    if P < 2:
        raise ValueError(f"P must be >= 2, got {P}")
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    pts = a + (b - a) * (np.arange(P + 1) / P)
    pts[0] = a
    pts[-1] = b
    return Mesh(a=float(a), b=float(b), points=pts, kind=MeshKind.UNIFORM)


def graded_mesh(P: int, gamma: float, side: Side) -> Mesh:
    """Graded partition of (0, 1): x_i = (i/P)^gamma, or its right-refining
    reflection x_i = 1 - ((P-i)/P)^gamma.

    gamma = 1 degenerates to the uniform mesh (and is tagged as such, so the
    closed-form uniform assembly applies).  Grading on a general (a, b) is
    deliberately unsupported.
    """
    if P < 2:
        raise ValueError(f"P must be >= 2, got {P}")
    if gamma < 1:
        raise ValueError(f"grading exponent must be >= 1, got {gamma}")
    i = np.arange(P + 1, dtype=float)
    if gamma == 1.0:
        return uniform_mesh(0.0, 1.0, P)
    if side is Side.LEFT:
        pts = (i / P) ** gamma
        kind = MeshKind.GRADED_LEFT
    else:
        pts = 1.0 - ((P - i) / P) ** gamma
        kind = MeshKind.GRADED_RIGHT
    pts[0] = 0.0
    pts[-1] = 1.0
    return Mesh(a=0.0, b=1.0, points=pts, kind=kind, gamma=float(gamma))


def half_points(m: Mesh) -> np.ndarray:
    """Cell midpoints x_{n+1/2} = (x_n + x_{n+1})/2, length P."""
    return 0.5 * (m.points[:-1] + m.points[1:])
