"""The elementary Desboves family of degree-4 endomorphisms of P^2(C).

For a nonzero parameter lam the map is

    f_lam [x:y:z] = [ -x(x^3 + 2z^3)
                    :  y(z^3 - x^3 + lam(x^3 + y^3 + z^3))
                    :  z(2x^3 + z^3) ],

obtained from the general Desboves family

    f_{a,b,c} [x:y:z] = [ x(y^3 - z^3 + a*Phi) : y(z^3 - x^3 + b*Phi)
                        : z(x^3 - y^3 + c*Phi) ],   Phi = x^3 + y^3 + z^3,

by specializing (a, b, c) = (-1, lam, 1).  Each f_lam leaves invariant the
coordinate lines X = {x=0}, Y = {y=0}, Z = {z=0}, the Fermat cubic
C = {Phi = 0}, and the pencil of lines through the superattracting fixed
point [0:1:0].  Since the first and third components depend on (x, z)
only, projecting along the pencil semiconjugates f_lam to its restriction
to Y, which in the coordinate w = x/z is the lambda-independent Lattes map

    g(w) = -w (w^3 + 2) / (2 w^3 + 1).

The restriction to X in the coordinate t = y/z is t -> (1+lam) t + lam t^4,
so the transverse multiplier at [0:0:1] is 1+lam; by the symmetric
computation on Z the multiplier at [1:0:0] is 1-lam.  At lam = 0 the formula
degenerates: f_0 is undefined exactly at [0:1:0] and is kept only as a
limit object.

The determinant of the 3x3 matrix of partial derivatives of the lift
factors as

    jac f_lam = -8 (x^3 - z^3)^2 (-x^3 + z^3 + lam(4y^3 + x^3 + z^3)),

so the critical set is the union of the three lines {z = omega^j x}
through [0:1:0] (each doubled) and a cubic depending on lam.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import IndeterminacyHit, NotEndomorphism, ZeroVector
from .projective import (
    CORNER_XY,
    CORNER_YZ,
    INFINITY,
    PENCIL_CENTER,
    ProjPoint,
    best_chart_rows,
    is_infinite,
    normalize,
    normalize_rows,
)

OMEGA = cmath.exp(2j * cmath.pi / 3)  # primitive cube root of unity

# Fixed intersection of the Fermat cubic with the line {y = 0}; repelling
# for every nonzero parameter (multipliers -2 along the cubic, -8 along Y).
FERMAT_FIXED = normalize(1, 0, -1)


def eval_lift_rows(lam: complex, p: np.ndarray) -> np.ndarray:
    """Raw degree-4 lift applied row-wise to an (n, 3) array (no rescale)."""
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    x3, y3, z3 = x * x * x, y * y * y, z * z * z
    return np.stack(
        [
            -x * (x3 + 2.0 * z3),
            y * (z3 - x3 + lam * (x3 + y3 + z3)),
            z * (2.0 * x3 + z3),
        ],
        axis=-1,
    )


def eval_rows(lam: complex, p: np.ndarray) -> np.ndarray:
    """One normalized iteration of f_lam on an (n, 3) array."""
    return normalize_rows(eval_lift_rows(lam, p))


def partials_rows(lam: complex, p: np.ndarray) -> np.ndarray:
    """(n, 3, 3) matrix of partial derivatives of the lift at each row.

    Entry [r, c] is dF_r / dx_c evaluated on the given lifts.
    """
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    x2, y2, z2 = x * x, y * y, z * z
    x3, y3, z3 = x2 * x, y2 * y, z2 * z
    zero = np.zeros_like(x)
    row0 = np.stack([-4.0 * x3 - 2.0 * z3, zero, -6.0 * x * z2], axis=-1)
    row1 = np.stack(
        [
            3.0 * x2 * y * (lam - 1.0),
            z3 - x3 + lam * (x3 + 4.0 * y3 + z3),
            3.0 * y * z2 * (lam + 1.0),
        ],
        axis=-1,
    )
    row2 = np.stack([6.0 * x2 * z, zero, 2.0 * x3 + 4.0 * z3], axis=-1)
    return np.stack([row0, row1, row2], axis=-2)


def jacobian_det_rows(lam: complex, p: np.ndarray) -> np.ndarray:
    """Closed-form determinant of the 3x3 lift derivative, row-wise.

    Value depends on the chosen lift (homogeneity degree 9); callers are
    expected to pass canonical lifts.  Intrinsic quantities go through
    the Fubini-Study log-Jacobian instead.
    """
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    x3, y3, z3 = x**3, y**3, z**3
    return -8.0 * (x3 - z3) ** 2 * (-x3 + z3 + lam * (4.0 * y3 + x3 + z3))


def _chart_frame(idx: np.ndarray):
    """Free coordinate indices (ascending) for each chart index."""
    free = np.array([[1, 2], [0, 2], [0, 1]])
    return free[idx]


def differential_rows(
    lam: complex,
    p: np.ndarray,
    in_chart: np.ndarray | None = None,
    out_chart: np.ndarray | None = None,
):
    """Chart derivative of f_lam as an (n, 2, 2) array.

    Charts default to the best-conditioned one (max-modulus coordinate) at
    the source and at the image.  Returns (matrices, images) where images
    are the raw lifts f(p) used for the output chart.
    """
    p = np.asarray(p, dtype=complex)
    fp = eval_lift_rows(lam, p)
    if in_chart is None:
        in_chart = best_chart_rows(p)
    else:
        in_chart = np.broadcast_to(np.asarray(in_chart), p.shape[:-1]).copy()
    if out_chart is None:
        out_chart = best_chart_rows(fp)
    else:
        out_chart = np.broadcast_to(np.asarray(out_chart), p.shape[:-1]).copy()

    DF = partials_rows(lam, p)
    in_free = _chart_frame(in_chart)          # (n, 2) column indices
    out_free = _chart_frame(out_chart)        # (n, 2) row indices

    # Columns: derivative w.r.t. the two free source coordinates.
    cols = np.take_along_axis(DF, in_free[..., None, :], axis=-1)  # (n, 3, 2)
    num = np.take_along_axis(cols, out_free[..., :, None], axis=-2)  # (n, 2, 2)
    den = np.take_along_axis(cols, out_chart[..., None, None], axis=-2)  # (n, 1, 2)

    fm = np.take_along_axis(fp, out_chart[..., None], axis=-1)  # (n, 1)
    fi = np.take_along_axis(fp, out_free, axis=-1)              # (n, 2)

    # d(F_i/F_m) = (dF_i * F_m - F_i * dF_m) / F_m^2
    mat = (num * fm[..., None] - fi[..., :, None] * den) / (fm * fm)[..., None]
    return mat, fp


@dataclass(frozen=True)
class DesbovesMap:
    """One member of the family, with its parameter frozen.

    The degenerate lam = 0 member (whose formula is undefined exactly at
    [0:1:0]) can only be built through :meth:`degenerate`; it supports
    plain evaluation for limit experiments but is refused by the sampling,
    preimage and rendering layers.
    """

    lam: complex
    degree: int = 4

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError(
                "lambda = 0 is not an endomorphism; use DesbovesMap.degenerate()"
            )

    @classmethod
    def degenerate(cls) -> "DesbovesMap":
        obj = object.__new__(cls)
        object.__setattr__(obj, "lam", 0j)
        object.__setattr__(obj, "degree", 4)
        return obj

    @property
    def is_degenerate(self) -> bool:
        return self.lam == 0

    def eval(self, p: ProjPoint) -> ProjPoint:
        """Apply the map once.  Lift-independent by homogeneity."""
        lift = eval_lift_rows(self.lam, p.lift()[None, :])[0]
        try:
            return normalize(lift)
        except ZeroVector:
            raise IndeterminacyHit(
                "lambda = 0 is undefined at the pencil center [0:1:0]"
            ) from None

    def eval_rows(self, p: np.ndarray) -> np.ndarray:
        return eval_rows(self.lam, p)

    def iterate(self, p: ProjPoint, n: int) -> ProjPoint:
        for _ in range(n):
            p = self.eval(p)
        return p

    def jacobian_det(self, p: ProjPoint) -> complex:
        """Determinant of the 3x3 lift derivative on the canonical lift."""
        return complex(jacobian_det_rows(self.lam, p.lift()[None, :])[0])

    def differential(self, p: ProjPoint, in_chart=None, out_chart=None) -> np.ndarray:
        """2x2 chart derivative at p; eigenvalue moduli at fixed points are
        chart-independent."""
        from .projective import chart_index

        ic = None if in_chart is None else np.array([chart_index(in_chart)])
        oc = None if out_chart is None else np.array([chart_index(out_chart)])
        mat, _ = differential_rows(self.lam, p.lift()[None, :], ic, oc)
        return mat[0]


def well_defined(a: complex, b: complex, c: complex) -> bool:
    """True when (a, b, c) avoids the seven degeneration hyperplanes

    a b c (a+b+c) (a+1-b) (b+1-c) (c+1-a) = 0,

    i.e. when the general-family formula is a true endomorphism of P^2.
    """
    prod = a * b * c * (a + b + c) * (a + 1 - b) * (b + 1 - c) * (c + 1 - a)
    return prod != 0


def eval_general(a: complex, b: complex, c: complex, p: ProjPoint) -> ProjPoint:
    """Evaluate the general Desboves family member f_{a,b,c} at p.

    With (a, b, c) = (-1, lam, 1) this agrees pointwise with f_lam.  When
    the triple lies on a degeneration hyperplane and p hits a common zero
    of the three components, raises NotEndomorphism.
    """
    x, y, z = p.c0, p.c1, p.c2
    phi = x**3 + y**3 + z**3
    lift = (
        x * (y**3 - z**3 + a * phi),
        y * (z**3 - x**3 + b * phi),
        z * (x**3 - y**3 + c * phi),
    )
    try:
        return normalize(lift)
    except ZeroVector:
        raise NotEndomorphism(
            f"common zero of f_({a},{b},{c}) hit at {p}"
        ) from None


def lattes_g(w) -> complex:
    """The degree-4 Lattes map g(w) = -w(w^3+2)/(2w^3+1) on {y = 0}.

    Accepts and returns extended complex numbers; the pole set 2w^3+1 = 0
    maps to INFINITY and g(INFINITY) = INFINITY.
    """
    if is_infinite(w):
        return INFINITY
    w = complex(w)
    num = -w * (w**3 + 2.0)
    den = 2.0 * w**3 + 1.0
    if den == 0:
        return INFINITY
    return num / den


def lattes_g_pair(x: complex, z: complex) -> tuple[complex, complex]:
    """Projective form of g on [x:z], normalized to max modulus 1."""
    fx = -x * (x**3 + 2.0 * z**3)
    fz = z * (2.0 * x**3 + z**3)
    m = max(abs(fx), abs(fz))
    if m == 0:
        raise ZeroVector("g evaluated at a zero P^1 lift")
    pivot = fx if abs(fx) >= abs(fz) else fz
    return fx / pivot, fz / pivot


def restriction_X(t: complex, lam: complex) -> complex:
    """Restriction of f_lam to the line {x = 0} in the coordinate t = y/z:
    t -> (1 + lam) t + lam t^4."""
    return (1.0 + lam) * t + lam * t**4


@dataclass(frozen=True)
class FixedPointInfo:
    """A fixed (or periodic) point with its two multiplier eigenvalues."""

    location: ProjPoint
    eigenvalues: tuple[complex, complex]
    classification: str
    period: int = 1
    residual: float = 0.0


def classify_multipliers(e1: complex, e2: complex, tol: float = 1e-9) -> str:
    m1, m2 = abs(e1), abs(e2)
    if abs(m1 - 1.0) <= tol or abs(m2 - 1.0) <= tol:
        return "indifferent"
    if m1 > 1.0 and m2 > 1.0:
        return "repelling"
    if m1 < 1.0 and m2 < 1.0:
        return "attracting"
    return "saddle"


def fixed_point_catalog(lam: complex) -> list[FixedPointInfo]:
    """The distinguished fixed points with exact multipliers.

    [0:1:0] is superattracting; [0:0:1] has multipliers (1+lam, -2) and
    [1:0:0] has (1-lam, -2); since the discs |1+lam| <= 1 and |1-lam| <= 1
    meet only at lam = 0, at least one of the two is repelling for every
    admissible parameter.  The three intersections [1:0:-omega^j] of the
    Fermat cubic with {y = 0} carry multipliers (-2, -8) and are always
    repelling.
    """
    if lam == 0:
        raise ValueError("fixed-point catalog requires a nonzero parameter")
    out = [
        FixedPointInfo(PENCIL_CENTER, (0j, 0j), "attracting"),
        FixedPointInfo(
            CORNER_XY, (1.0 + lam, -2.0 + 0j), classify_multipliers(1.0 + lam, -2.0)
        ),
        FixedPointInfo(
            CORNER_YZ, (1.0 - lam, -2.0 + 0j), classify_multipliers(1.0 - lam, -2.0)
        ),
    ]
    for j in range(3):
        loc = normalize(1.0, 0.0, -(OMEGA**j))
        out.append(FixedPointInfo(loc, (-2.0 + 0j, -8.0 + 0j), "repelling"))
    return out


def _cubed_norm(p: ProjPoint) -> float:
    return float(np.linalg.norm(p.lift())) ** 3


def on_line_X(p: ProjPoint, tol: float = 1e-10) -> bool:
    return abs(p.c0) < tol * np.linalg.norm(p.lift())


def on_line_Y(p: ProjPoint, tol: float = 1e-10) -> bool:
    return abs(p.c1) < tol * np.linalg.norm(p.lift())


def on_line_Z(p: ProjPoint, tol: float = 1e-10) -> bool:
    return abs(p.c2) < tol * np.linalg.norm(p.lift())


def on_fermat(p: ProjPoint, tol: float = 1e-10) -> bool:
    """Membership in the Fermat cubic, tolerance scaled by |lift|^3."""
    return abs(p.c0**3 + p.c1**3 + p.c2**3) < tol * _cubed_norm(p)


def fermat_point(x: complex, y: complex, branch: int = 0) -> ProjPoint:
    """A point of the Fermat cubic over (x, y): solves z^3 = -(x^3 + y^3)."""
    rhs = -complex(x) ** 3 - complex(y) ** 3
    if rhs == 0:
        z = 0j
    else:
        z = rhs ** (1.0 / 3.0) * OMEGA ** (branch % 3)
    return normalize(x, y, z)


def sigma(p: ProjPoint) -> ProjPoint:
    """The involution [x:y:z] -> [z:y:x]; conjugates f_lam to f_{-lam}."""
    return normalize(p.c2, p.c1, p.c0)
