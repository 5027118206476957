"""Exact 16-branch inverse iteration for f_lam.

The map is a skew product over the pencil of lines through [0:1:0]: its
first and third coordinates depend on (x, z) only.  A preimage of a target
[X:Y:Z] is therefore found in two univariate steps:

  base:   solve g([x:z]) = [X:Z] on the line {y = 0}; in the coordinate
          w = x/z this is the quartic  Z w^4 + 2X w^3 + 2Z w + X = 0
          (solved in 1/w when |X| > |Z| so the leading coefficient is the
          larger of the two and all roots stay within modulus 3);

  fiber:  with the base lift (x, z) fixed, the first/third image
          coordinates determine a scale s against the target, and the
          middle coordinate solves the quartic
          lam y^4 + (z^3 - x^3 + lam(x^3 + z^3)) y - s Y = 0.

Four base roots times four fiber roots give the d^2 = 16 preimages, with
the single degeneration f^-1([0:1:0]) = {[0:1:0]} (multiplicity 16)
special-cased exactly.  Each branch is finished with two Newton steps on
the full chart-to-chart system.  Random inverse-branch walks choose
uniformly among the 16 slots, which weights branches by multiplicity and
makes the walk endpoints sample the equilibrium measure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFiber, SolverDiverged, ZeroVector
from .family import differential_rows, eval_lift_rows, eval_rows
from .projective import (
    INFINITY,
    PENCIL_CENTER,
    ProjPoint,
    chordal_distance,
    chordal_rows,
    is_infinite,
    normalize,
    normalize_rows,
)
from .quartic import QuarticRoots, quartic_roots, quartic_roots_batch

_FRAME = np.array([[1, 2], [0, 2], [0, 1]])


def g_preimages(W):
    """The full fiber of the Lattes map over W, as a 4-tuple of w-values
    repeated by multiplicity.

    Derived from g(w) = -w(w^3+2)/(2w^3+1): the fiber of a finite W solves
    w^4 + 2W w^3 + 2w + W = 0, and the fiber of INFINITY is the pole set
    2w^3 + 1 = 0 together with INFINITY itself.
    """
    if is_infinite(W):
        X, Z = 1.0 + 0j, 0j
    else:
        W = complex(W)
        if abs(W) <= 1.0:
            X, Z = W, 1.0 + 0j
        else:
            X, Z = 1.0 + 0j, 1.0 / W
    qr = quartic_roots(Z, 2.0 * X, 0.0, 2.0 * Z, X)
    return qr.with_multiplicity()


def _base_roots_rows(T: np.ndarray) -> np.ndarray:
    """Base-quartic solutions as (n, 4, 2) normalized P^1 lifts (x, z).

    Rows are sorted by the root value in the solved orientation so that
    branch labels vary as little as possible across nearby parameters
    (needed by the common-random-number sweeps).
    """
    X, Z = T[:, 0], T[:, 2]
    solve_w = np.abs(Z) >= np.abs(X)
    # orientation with the larger of |X|, |Z| leading: roots stay bounded
    lead = np.where(solve_w, Z, X)
    sub = np.where(solve_w, X, Z)
    roots = quartic_roots_batch(lead, 2.0 * sub, np.zeros_like(lead), 2.0 * lead, sub)

    n = T.shape[0]
    lifts = np.empty((n, 4, 2), dtype=complex)
    r = roots
    # orientation w = x/z: lift (w, 1); orientation v = z/x: lift (1, v)
    lifts[solve_w, :, 0] = r[solve_w]
    lifts[solve_w, :, 1] = 1.0
    lifts[~solve_w, :, 0] = 1.0
    lifts[~solve_w, :, 1] = r[~solve_w]
    mod = np.abs(lifts)
    pivot = np.take_along_axis(
        lifts, np.argmax(mod, axis=-1)[..., None], axis=-1
    )
    return lifts / pivot


def _fiber_coefficients(lam: complex, T: np.ndarray, lifts: np.ndarray):
    """Scale s and linear coefficient B of the fiber quartic, per base root.

    lifts has shape (n, 4, 2); returns (s, B) with shape (n, 4).
    """
    x, z = lifts[..., 0], lifts[..., 1]
    x3, z3 = x**3, z**3
    F1 = -x * (x3 + 2.0 * z3)
    F3 = z * (2.0 * x3 + z3)
    X, Z = T[:, 0, None], T[:, 2, None]
    use_x = np.abs(X) >= np.abs(Z)
    denom = np.where(use_x, X, Z)
    s = np.where(use_x, F1, F3) / denom
    B = z3 - x3 + lam * (x3 + z3)
    if not np.all(np.isfinite(s.view(float))):
        raise DegenerateFiber("scale against the target is not finite")
    return s, B


def _assemble(lifts, ys):
    """Combine base lifts (n, 4, 2) with fiber roots (n, 4, 4) into
    normalized points of shape (n, 4, 4, 3)."""
    n = lifts.shape[0]
    pts = np.empty((n, 4, 4, 3), dtype=complex)
    pts[..., 0] = lifts[..., 0][:, :, None]
    pts[..., 2] = lifts[..., 1][:, :, None]
    pts[..., 1] = ys
    return normalize_rows(pts)


def polish_rows(lam: complex, Q: np.ndarray, T: np.ndarray, iterations: int = 2):
    """Newton-polish preimage candidates against their targets.

    Works in the best chart at each point: two complex unknowns against
    the two chart coordinates of the image, using the analytic 2x2 chart
    differential.  Rows whose forward chordal residual would worsen keep
    their unpolished value.  Returns (points, forward_residuals).
    """
    Q = np.asarray(Q, dtype=complex)
    T = np.asarray(T, dtype=complex)
    k = np.argmax(np.abs(Q), axis=-1)
    m = np.argmax(np.abs(T), axis=-1)
    free_in = _FRAME[k]
    free_out = _FRAME[m]
    t_out = np.take_along_axis(T, free_out, axis=-1)

    before = chordal_rows(eval_rows(lam, Q), T)
    cur = Q.copy()
    for _ in range(iterations):
        mat, fp = differential_rows(lam, cur, in_chart=k, out_chart=m)
        fm = np.take_along_axis(fp, m[:, None], axis=-1)
        fi = np.take_along_axis(fp, free_out, axis=-1)
        resid = fi / fm - t_out
        det = mat[:, 0, 0] * mat[:, 1, 1] - mat[:, 0, 1] * mat[:, 1, 0]
        ok = np.abs(det) > 1e-30
        det_safe = np.where(ok, det, 1.0)
        d0 = (mat[:, 1, 1] * resid[:, 0] - mat[:, 0, 1] * resid[:, 1]) / det_safe
        d1 = (-mat[:, 1, 0] * resid[:, 0] + mat[:, 0, 0] * resid[:, 1]) / det_safe
        delta = np.stack([d0, d1], axis=-1)
        good = ok & np.all(np.isfinite(delta.view(float)), axis=-1)
        zeta = np.take_along_axis(cur, free_in, axis=-1)
        zeta = zeta - np.where(good[:, None], delta, 0.0)
        nxt = cur.copy()
        np.put_along_axis(nxt, free_in, zeta, axis=-1)
        cur = nxt
    cur = normalize_rows(cur)
    after = chordal_rows(eval_rows(lam, cur), T)
    keep_new = after <= before
    out = np.where(keep_new[:, None], cur, Q)
    return out, np.where(keep_new, after, before)


def preimage_rows_all(lam: complex, T: np.ndarray):
    """All 16 preimages per target row: returns (points, residuals) of
    shapes (n, 16, 3) and (n, 16).  Targets must be canonical lifts and
    must not contain the pencil center."""
    T = np.asarray(T, dtype=complex)
    lifts = _base_roots_rows(T)
    s, B = _fiber_coefficients(lam, T, lifts)
    Yt = T[:, 1, None]
    zeros = np.zeros_like(s)
    ys = quartic_roots_batch(
        np.full_like(s, lam), zeros, zeros, B, -s * Yt
    )
    pts = _assemble(lifts, ys).reshape(-1, 16, 3)
    n = pts.shape[0]
    flat = pts.reshape(-1, 3)
    T16 = np.repeat(T, 16, axis=0)
    polished, resid = polish_rows(lam, flat, T16)
    return polished.reshape(n, 16, 3), resid.reshape(n, 16)


def inverse_step_rows(
    lam: complex, T: np.ndarray, base_choice: np.ndarray, fiber_choice: np.ndarray
):
    """One backward step: per row, pick base root ``base_choice`` and fiber
    root ``fiber_choice`` (both in 0..3, uniform choice = multiplicity
    weighting) and polish the selected branch."""
    T = np.asarray(T, dtype=complex)
    lifts = _base_roots_rows(T)
    idx = np.arange(T.shape[0])
    pick = lifts[idx, base_choice]  # (n, 2)
    pick = pick[:, None, :]
    s, B = _fiber_coefficients(lam, T, pick)
    Yt = T[:, 1, None]
    zeros = np.zeros_like(s)
    ys = quartic_roots_batch(np.full_like(s, lam), zeros, zeros, B, -s * Yt)
    y = ys[idx, 0, fiber_choice]
    pts = np.stack([pick[:, 0, 0], y, pick[:, 0, 1]], axis=-1)
    pts = normalize_rows(pts)
    polished, _ = polish_rows(lam, pts, T)
    return polished


@dataclass(frozen=True)
class PreimageSet:
    """The full inverse image of one target, multiplicity-complete."""

    target: ProjPoint
    points: tuple
    multiplicities: tuple
    forward_residuals: tuple

    def total_multiplicity(self) -> int:
        return sum(self.multiplicities)


def fiber_preimages(map_, target: ProjPoint, tol: float = 1e-9) -> PreimageSet:
    """All preimages of ``target`` under ``map_`` with forward residuals.

    The pencil center is totally invariant and returns itself with full
    multiplicity 16; every other target yields 16 branch slots (generic
    targets give 16 distinct points).  Raises SolverDiverged when any
    polished branch keeps a forward chordal residual above ``tol``.
    """
    if map_.is_degenerate:
        raise ValueError("preimages need a nonzero parameter")
    if abs(target.c0) == 0.0 and abs(target.c2) == 0.0:
        return PreimageSet(target, (PENCIL_CENTER,), (16,), (0.0,))
    pts, resid = preimage_rows_all(map_.lam, target.lift()[None, :])
    worst = float(np.max(resid))
    if worst > tol:
        raise SolverDiverged(
            f"branch forward residual {worst:.3e} above {tol:.1e} at {target}"
        )
    points = tuple(ProjPoint(*row) for row in pts[0])
    return PreimageSet(target, points, (1,) * 16, tuple(float(r) for r in resid[0]))


def walk_rows(
    lam: complex,
    start: np.ndarray,
    n_walkers: int,
    depth: int,
    rng: np.random.Generator,
):
    """Endpoints of ``n_walkers`` independent uniform inverse-branch walks
    of length ``depth`` from a common start row (shape (3,))."""
    P = np.tile(np.asarray(start, dtype=complex)[None, :], (n_walkers, 1))
    choices = rng.integers(0, 4, size=(depth, 2, n_walkers))
    for t in range(depth):
        P = inverse_step_rows(lam, P, choices[t, 0], choices[t, 1])
    return P


def backward_orbit_sample(map_, start: ProjPoint, steps: int, rng) -> ProjPoint:
    """Endpoint of one uniform random inverse-branch walk from ``start``.

    ``rng`` is a seeded numpy Generator (or an int seed); walks with
    distinct seeds are deterministic and independent.
    """
    if map_.is_degenerate:
        raise ValueError("backward walks need a nonzero parameter")
    if chordal_distance(start, PENCIL_CENTER) == 0.0:
        raise ValueError("backward walks cannot start at the totally "
                         "invariant pencil center")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    if steps == 0:
        return start
    end = walk_rows(map_.lam, start.lift(), 1, steps, rng)[0]
    return ProjPoint(*end)
