"""Homogeneous-coordinate arithmetic on the complex projective plane.

A point of P^2(C) is a nonzero triple (c0, c1, c2) up to complex scale,
written [c0:c1:c2].  All dynamics in this package iterates degree-4
polynomial lifts, so points are stored in a canonical normalization: the
coordinate of maximal modulus is divided out and becomes exactly 1 (ties
broken by lowest index).  Every stored coordinate then lies in the closed
unit disc and ten thousand iterations cannot overflow.

The metric is the sine form of the Fubini-Study distance,

    d([p], [q]) = |p ^ q| / (|p| |q|)  in [0, 1],

where |p ^ q|^2 = |p|^2 |q|^2 - |<p, q>|^2 (complex Lagrange identity).
It vanishes exactly on projectively equal pairs and is maximal (= 1) on
orthogonal lifts, e.g. [1:0:0] versus [0:1:0].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AtPencilCenter, ChartOverflow, ZeroVector

# Single global fuzz knob: two points are projectively equal when their
# chordal distance is below this.  CLI commands may pass an override.
EQUALITY_TOL = 1e-10

# Extended-complex infinity used for chart coordinates on rational curves.
INFINITY = complex(math.inf, 0.0)


def is_infinite(w) -> bool:
    """True for the point at infinity of an affine coordinate."""
    w = complex(w)
    return not (math.isfinite(w.real) and math.isfinite(w.imag))


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """A point of P^2(C) in canonical normalization.

    Do not call the constructor with raw coordinates; go through
    :func:`normalize`, which enforces the normalization invariant.
    """

    c0: complex
    c1: complex
    c2: complex

    def lift(self) -> np.ndarray:
        """The stored (canonical) homogeneous lift as a length-3 array."""
        return np.array([self.c0, self.c1, self.c2], dtype=complex)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return chordal_distance(self, other) < EQUALITY_TOL

    __hash__ = None

    def __repr__(self):
        return f"[{self.c0}:{self.c1}:{self.c2}]"


@dataclass(frozen=True)
class ChartCoord:
    """Affine coordinates in one of the three standard charts.

    chart 'x' sets x = 1 with (u, v) = (y, z); chart 'y' sets y = 1 with
    (u, v) = (x, z); chart 'z' sets z = 1 with (u, v) = (x, y).  On the
    invariant line {y = 0} the coordinate w = x/z is the u-coordinate of
    the z-chart, and on {x = 0} the coordinate t = y/z is its v-coordinate.
    """

    chart: str
    u: complex
    v: complex


_CHART_SLOT = {"x": 0, "y": 1, "z": 2}
_CHART_FREE = {0: (1, 2), 1: (0, 2), 2: (0, 1)}


def normalize(c0, c1=None, c2=None) -> ProjPoint:
    """Canonical normalization of a nonzero homogeneous triple.

    Accepts three scalars or a single length-3 sequence.  Raises
    :class:`ZeroVector` on the zero triple, which signals that an
    indeterminacy point was produced upstream.
    """
    if c1 is None:
        c0, c1, c2 = c0
    c0, c1, c2 = complex(c0), complex(c1), complex(c2)
    moduli = (abs(c0), abs(c1), abs(c2))
    m = max(moduli)
    if m == 0.0:
        raise ZeroVector("cannot normalize the zero triple")
    pivot = (c0, c1, c2)[moduli.index(m)]
    return ProjPoint(c0 / pivot, c1 / pivot, c2 / pivot)


def normalize_rows(arr: np.ndarray) -> np.ndarray:
    """Row-wise canonical normalization of an (n, 3) complex array."""
    arr = np.asarray(arr, dtype=complex)
    mod = np.abs(arr)
    idx = np.argmax(mod, axis=-1)  # argmax keeps the lowest index on ties
    pivot = np.take_along_axis(arr, idx[..., None], axis=-1)
    if np.any(pivot == 0):
        raise ZeroVector("zero row in homogeneous batch")
    return arr / pivot


def unit_rows(arr: np.ndarray) -> np.ndarray:
    """Row-wise unit-2-norm lifts (used only inside metric formulas)."""
    arr = np.asarray(arr, dtype=complex)
    norms = np.linalg.norm(arr, axis=-1, keepdims=True)
    if np.any(norms == 0):
        raise ZeroVector("zero row in homogeneous batch")
    return arr / norms


def chordal_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Chordal distance between paired rows of two (n, 3) arrays."""
    ua, ub = unit_rows(a), unit_rows(b)
    inner = np.abs(np.sum(ua * np.conj(ub), axis=-1))
    return np.sqrt(np.clip(1.0 - inner * inner, 0.0, 1.0))


def chordal_distance(p: ProjPoint, q: ProjPoint) -> float:
    """Chordal (Fubini-Study sine) distance between two points, in [0, 1]."""
    return float(chordal_rows(p.lift()[None, :], q.lift()[None, :])[0])


def cross_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Coordinate cross product of paired rows (a bilinear P^1-ification)."""
    return np.cross(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def project_pencil(p: ProjPoint) -> ProjPoint:
    """Project along the pencil of lines through [0:1:0] onto {y = 0}.

    [x:y:z] maps to [x:0:z]; the image is the unique point of {y = 0} on
    the line joining [0:1:0] to p.  Undefined at the pencil center itself.
    """
    if abs(p.c0) == 0.0 and abs(p.c2) == 0.0:
        raise AtPencilCenter("projection along the pencil is undefined at its center")
    return normalize(p.c0, 0.0, p.c2)


def project_pencil_rows(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex, copy=True)
    out[..., 1] = 0.0
    return normalize_rows(out)


def to_chart(p: ProjPoint, chart: str) -> ChartCoord:
    """Dehomogenize into one of the charts 'x', 'y', 'z'."""
    k = _CHART_SLOT[chart]
    lift = (p.c0, p.c1, p.c2)
    if abs(lift[k]) == 0.0:
        raise ChartOverflow(f"coordinate {chart} vanishes at {p}")
    i, j = _CHART_FREE[k]
    return ChartCoord(chart, lift[i] / lift[k], lift[j] / lift[k])


def from_chart(c: ChartCoord) -> ProjPoint:
    """Homogenize chart coordinates back into P^2."""
    k = _CHART_SLOT[c.chart]
    lift = [0j, 0j, 0j]
    lift[k] = 1.0 + 0j
    i, j = _CHART_FREE[k]
    lift[i] = complex(c.u)
    lift[j] = complex(c.v)
    return normalize(*lift)


def chart_index(chart: str) -> int:
    return _CHART_SLOT[chart]


def best_chart_rows(arr: np.ndarray) -> np.ndarray:
    """Index of the best-conditioned chart per row (max-modulus coordinate)."""
    return np.argmax(np.abs(np.asarray(arr)), axis=-1)


# Distinguished points: the superattracting pencil center, and the two
# corners of the invariant triangle lying on the line {y = 0}.
PENCIL_CENTER = normalize(0, 1, 0)
CORNER_XY = normalize(0, 0, 1)   # {x=0} intersect {y=0}
CORNER_YZ = normalize(1, 0, 0)   # {y=0} intersect {z=0}
