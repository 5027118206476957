"""The critical locus of f_lam and its trace on the invariant line {y = 0}.

The lift determinant factors as

    -8 (x^3 - z^3)^2 (-x^3 + z^3 + lam (4y^3 + x^3 + z^3)),

so the critical set splits into the three doubled lines {z = omega^j x}
through the pencil center and a cubic.  On {y = 0} the cubic cuts the three
points [w:0:1] with

    w^3 = (1 + lam) / (1 - lam),

degenerating to the triple point [1:0:0] at lam = 1 and to [0:0:1] at
lam = -1.  Inverting the relation,

    lam = (w^3 - 1) / (w^3 + 1),

every w off the six points with w^6 = 1 is critical for exactly one
nonzero parameter.  This closed-form inversion is what makes the critical
orbit search in :mod:`desboves.bifurcation` a tree enumeration instead of
a two-dimensional root hunt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLambda, PoleInput
from .family import OMEGA
from .projective import INFINITY, ProjPoint, is_infinite

_SIX_TOL = 1e-12


@dataclass(frozen=True)
class CriticalTraceOnY:
    """The three w-values (with multiplicity) cut by the critical cubic on
    {y = 0} for one parameter; w = INFINITY encodes [1:0:0]."""

    lam: complex
    ws: tuple

    def residual(self) -> float:
        """max |(1-lam) w^3 - (1+lam)| over the stored roots, projectively
        interpreted at infinity."""
        worst = 0.0
        for w in self.ws:
            if is_infinite(w):
                worst = max(worst, abs(1.0 - self.lam))
            else:
                worst = max(
                    worst,
                    abs((1.0 - self.lam) * w**3 - (1.0 + self.lam))
                    / max(1.0, abs(w) ** 3),
                )
        return worst


def critical_cubic_on_Y(lam: complex) -> CriticalTraceOnY:
    """Trace of the critical cubic on {y = 0} as three w-values.

    lam = 0 is allowed as a limit case and returns the three cube roots of
    unity (the critical points of the Lattes restriction).
    """
    lam = complex(lam)
    if lam == 1.0:
        return CriticalTraceOnY(lam, (INFINITY, INFINITY, INFINITY))
    if lam == -1.0:
        return CriticalTraceOnY(lam, (0j, 0j, 0j))
    ratio = (1.0 + lam) / (1.0 - lam)
    if ratio == 0:
        return CriticalTraceOnY(lam, (0j, 0j, 0j))
    root = ratio ** (1.0 / 3.0)
    return CriticalTraceOnY(lam, tuple(root * OMEGA**j for j in range(3)))


def lambda_for_critical_w(w) -> complex:
    """The unique nonzero parameter whose critical cubic passes through
    [w:0:1]: lam = (w^3 - 1)/(w^3 + 1), with lam(INFINITY) = 1.

    Raises PoleInput on w^3 = -1 (the always-critical directions of the
    Lattes restriction) and DegenerateLambda on w^3 = 1 (lam = 0 is outside
    the parameter space).
    """
    if is_infinite(w):
        return 1.0 + 0j
    w3 = complex(w) ** 3
    if abs(w3 + 1.0) <= _SIX_TOL * max(1.0, abs(w3)):
        raise PoleInput(f"w^3 = -1 at w = {w}")
    if abs(w3 - 1.0) <= _SIX_TOL * max(1.0, abs(w3)):
        raise DegenerateLambda(f"w^3 = 1 at w = {w} gives lambda = 0")
    return (w3 - 1.0) / (w3 + 1.0)


def lambda_for_critical_w_rows(w: np.ndarray):
    """Vectorized inversion; returns (lam, ok) with ok False on the six
    excluded directions w^6 = 1 (poles and the degenerate parameter).
    Infinite entries are legitimate and map to lam = 1."""
    w = np.asarray(w, dtype=complex)
    finite = np.isfinite(w.real) & np.isfinite(w.imag)
    w3 = np.where(finite, w, 0.0) ** 3
    scale = np.maximum(1.0, np.abs(w3))
    pole = finite & (np.abs(w3 + 1.0) <= _SIX_TOL * scale)
    degen = finite & (np.abs(w3 - 1.0) <= _SIX_TOL * scale)
    lam = np.full(w.shape, 1.0 + 0j)
    good = finite & ~pole & ~degen
    lam[good] = (w3[good] - 1.0) / (w3[good] + 1.0)
    return lam, ~(pole | degen)


def critical_sweep_on_Y(center: complex, radius: float, n_samples: int):
    """Sample the union of critical traces over a parameter disc.

    The disc is swept on a uniform polar grid; each sampled parameter
    contributes its three (or fewer, at the degenerate values) w-points.
    Openness of the union is evidenced by the clustering of the returned
    values, not proved.
    """
    if radius <= 0:
        raise ValueError("sweep disc needs positive radius")
    n_r = max(1, int(math.isqrt(n_samples)))
    n_t = max(1, n_samples // n_r)
    out = []
    for i in range(1, n_r + 1):
        r = radius * i / n_r
        for j in range(n_t):
            lam = center + r * np.exp(2j * np.pi * j / n_t)
            if lam == 0:
                continue
            out.extend(critical_cubic_on_Y(lam).ws)
    return out


def on_critical_set(lam: complex, p: ProjPoint, tol: float = 1e-10) -> str:
    """Tag which component of the critical set contains p.

    Returns 'line0' / 'line1' / 'line2' for the lines {z = omega^j x},
    'cubic' for the parameter-dependent cubic, 'none' otherwise.  Tested
    by which factor of the determinant vanishes, with homogeneity-scaled
    tolerances.
    """
    x, y, z = p.c0, p.c1, p.c2
    norm = float(np.linalg.norm(p.lift()))
    for j in range(3):
        if abs(z - OMEGA**j * x) < tol * norm:
            return f"line{j}"
    cubic = -(x**3) + z**3 + lam * (4.0 * y**3 + x**3 + z**3)
    if abs(cubic) < tol * (1.0 + abs(lam)) * norm**3:
        return "cubic"
    return "none"
