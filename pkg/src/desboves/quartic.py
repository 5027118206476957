"""Complex quartic root finding, scalar and batched.

The scalar entry point :func:`quartic_roots` is a simultaneous-iteration
(Durand-Kerner) solver with a closed-form Ferrari fallback, followed by
Newton polishing and a residual certificate; degree drops are reported as
roots at infinity.  The batched kernel :func:`quartic_roots_batch` runs
Ferrari's factorization vectorized over coefficient rows (a fixed number
of array operations regardless of batch size), Newton-polishes, and
rescues the rare ill-conditioned rows through numpy's companion-matrix
solver.  Inverse iteration spends essentially all of its time here, which
is why the batched path exists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverDiverged
from .projective import INFINITY, is_infinite

_EPS = np.finfo(float).eps


def _poly_eval(coeffs, w):
    """Horner evaluation; coeffs ordered highest degree first."""
    acc = np.full_like(np.asarray(w, dtype=complex), 0.0) + coeffs[0]
    for c in coeffs[1:]:
        acc = acc * w + c
    return acc


def _newton_polish(coeffs, roots, iterations=3):
    """A few Newton steps on every root; stalls safely at multiple roots."""
    deriv = [c * k for k, c in zip(range(len(coeffs) - 1, 0, -1), coeffs[:-1])]
    for _ in range(iterations):
        val = _poly_eval(coeffs, roots)
        dv = _poly_eval(deriv, roots)
        step = np.where(np.abs(dv) > 1e-300, val / np.where(dv == 0, 1.0, dv), 0.0)
        good = np.isfinite(step)
        roots = roots - np.where(good, step, 0.0)
    return roots


def _quadratic_roots_arr(b, c):
    """Roots of w^2 + b w + c = 0, cancellation-safe, vectorized."""
    disc = np.sqrt(b * b - 4.0 * c)
    # choose the sign that avoids cancellation in -b -/+ disc
    flip = np.real(np.conj(b) * disc) < 0.0
    disc = np.where(flip, -disc, disc)
    r1 = -(b + disc) / 2.0
    # second root from the product, except where r1 vanishes
    tiny = np.abs(r1) < 1e-300
    r2 = np.where(tiny, (-b + disc) / 2.0, c / np.where(tiny, 1.0, r1))
    return r1, r2


def _cubic_roots_arr(b, c, d):
    """All three roots of w^3 + b w^2 + c w + d = 0, vectorized Cardano."""
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    disc = np.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
    # pick the branch that avoids cancellation in -q/2 +/- disc
    s_plus = -q / 2.0 + disc
    s_minus = -q / 2.0 - disc
    s = np.where(np.abs(s_plus) >= np.abs(s_minus), s_plus, s_minus)
    C = s ** (1.0 / 3.0)
    omega = np.exp(2j * np.pi / 3.0)
    roots = []
    for k in range(3):
        Ck = C * omega**k
        safe = np.abs(Ck) > 1e-300
        y = np.where(safe, Ck - p / np.where(safe, 3.0 * Ck, 1.0), 0.0)
        roots.append(y - b / 3.0)
    return np.stack(roots, axis=-1)


def quartic_roots_batch(c4, c3, c2, c1, c0, polish=3):
    """Roots of c4 w^4 + ... + c0 row-wise; returns an (n, 4) array.

    Callers must guarantee a leading coefficient bounded away from zero
    relative to the row scale (the inverse-iteration kernels arrange their
    coefficient orientation so this always holds).  Rows where Ferrari plus
    Newton leaves a visible residual are re-solved through numpy's
    eigenvalue-based root finder.
    """
    c4, c3, c2, c1, c0 = np.broadcast_arrays(
        *(np.asarray(c, dtype=complex) for c in (c4, c3, c2, c1, c0))
    )
    a = c3 / c4
    b = c2 / c4
    c = c1 / c4
    d = c0 / c4

    # depressed quartic u^4 + p u^2 + q u + r, w = u - a/4
    p = b - 3.0 * a * a / 8.0
    q = c - a * b / 2.0 + a**3 / 8.0
    r = d - a * c / 4.0 + a * a * b / 16.0 - 3.0 * a**4 / 256.0

    # resolvent cubic 8 t^3 + 8 p t^2 + (2 p^2 - 8 r) t - q^2 = 0
    tr = _cubic_roots_arr(p, (2.0 * p * p - 8.0 * r) / 8.0, -q * q / 8.0)
    t = np.take_along_axis(tr, np.argmax(np.abs(tr), axis=-1)[..., None], axis=-1)[
        ..., 0
    ]
    s = np.sqrt(2.0 * t)

    scale_dep = 1.0 + np.abs(p) + np.abs(q) + np.abs(r)
    biquad = np.abs(s) <= 1e-8 * np.sqrt(scale_dep)

    # generic Ferrari split: (u^2 + s u + alpha)(u^2 - s u + beta)
    s_safe = np.where(biquad, 1.0, s)
    alpha = p / 2.0 + t - q / (2.0 * s_safe)
    beta = p / 2.0 + t + q / (2.0 * s_safe)
    u1, u2 = _quadratic_roots_arr(s_safe, alpha)
    u3, u4 = _quadratic_roots_arr(-s_safe, beta)

    # biquadratic fallback u^4 + p u^2 + r (valid since q ~ 0 there)
    v1, v2 = _quadratic_roots_arr(p, r)
    sq1, sq2 = np.sqrt(v1), np.sqrt(v2)
    u1 = np.where(biquad, sq1, u1)
    u2 = np.where(biquad, -sq1, u2)
    u3 = np.where(biquad, sq2, u3)
    u4 = np.where(biquad, -sq2, u4)

    roots = np.stack([u1, u2, u3, u4], axis=-1) - (a / 4.0)[..., None]
    coeffs = [np.ones_like(a)[..., None], a[..., None], b[..., None], c[..., None], d[..., None]]
    roots = _newton_polish(coeffs, roots, iterations=polish)

    # residual certificate against the evaluation noise floor
    val = np.abs(_poly_eval(coeffs, roots))
    m = np.abs(roots)
    floor = (
        np.abs(coeffs[0]) * m**4
        + np.abs(coeffs[1]) * m**3
        + np.abs(coeffs[2]) * m**2
        + np.abs(coeffs[3]) * m
        + np.abs(coeffs[4])
    )
    bad = np.any(val > 1e-8 * floor + 1e-280, axis=-1) | ~np.all(
        np.isfinite(roots.view(float)), axis=-1
    )
    if np.any(bad):
        flat = roots.reshape(-1, 4)
        af, bf, cf, df = (x.reshape(-1) for x in (a, b, c, d))
        for i in np.flatnonzero(bad.reshape(-1)):
            rescue = np.roots([1.0, af[i], bf[i], cf[i], df[i]])
            rescue = _newton_polish([1.0, af[i], bf[i], cf[i], df[i]], rescue, 2)
            flat[i] = rescue
        roots = flat.reshape(roots.shape)

    return np.sort(roots, axis=-1)  # lexicographic (real, then imag): stable labels


@dataclass(frozen=True)
class QuarticRoots:
    """Root list of a (possibly degenerate) quartic with multiplicities.

    Degree drops put the missing roots at INFINITY; multiplicities always
    sum to 4.  ``residual`` bounds |p(root)| / max|c_i| over finite roots.
    """

    roots: tuple
    multiplicities: tuple
    residual: float

    def with_multiplicity(self):
        """Flat tuple repeating each root by its multiplicity (length 4)."""
        out = []
        for w, m in zip(self.roots, self.multiplicities):
            out.extend([w] * m)
        return tuple(out)


def _durand_kerner(coeffs, max_iter=400, tol=1e-14):
    """Simultaneous iteration for a monic polynomial (highest first)."""
    n = len(coeffs) - 1
    radius = 1.0 + max(abs(c) for c in coeffs[1:])
    roots = np.array(
        [radius * np.exp(2j * np.pi * (k / n) + 0.4j) for k in range(n)]
    )
    for _ in range(max_iter):
        vals = _poly_eval(coeffs, roots)
        denom = np.ones_like(roots)
        for k in range(n):
            diff = roots[k] - np.delete(roots, k)
            denom[k] = np.prod(diff)
        bad = np.abs(denom) < 1e-280
        denom[bad] = 1.0
        step = vals / denom
        step[bad] = 0.0
        roots = roots - step
        if np.max(np.abs(step)) < tol * max(1.0, np.max(np.abs(roots))):
            break
    return roots


def _cluster_multiplicities(coeffs, roots, scale):
    """Group numerically coincident roots and validate against the
    derivative ladder of the polynomial."""
    roots = sorted(roots, key=lambda r: (r.real, r.imag))
    clusters = []
    for w in roots:
        if clusters and abs(w - clusters[-1][-1]) < 2e-4 * (1.0 + abs(w)):
            clusters[-1].append(w)
        else:
            clusters.append([w])
    out_roots, out_mult = [], []
    for group in clusters:
        center = complex(np.mean(group))
        m = len(group)
        if m > 1:
            # derivative ladder: p, p', ..., p^(m-1) must all nearly vanish
            der = list(coeffs)
            ok = True
            for j in range(m):
                val = _poly_eval(der, np.array([center]))[0]
                bound = sum(abs(c) for c in der) * max(1.0, abs(center)) ** (
                    len(der) - 1
                )
                if abs(val) > 1e-4 * bound:
                    ok = False
                    break
                der = [c * k for k, c in zip(range(len(der) - 1, 0, -1), der[:-1])]
            if not ok:
                for w in group:
                    out_roots.append(w)
                    out_mult.append(1)
                continue
        out_roots.append(center)
        out_mult.append(m)
    return out_roots, out_mult


def quartic_roots(c4, c3, c2, c1, c0, tol=1e-10) -> QuarticRoots:
    """Certified roots of c4 w^4 + c3 w^3 + c2 w^2 + c1 w + c0.

    Simultaneous iteration with a closed-form fallback, then Newton
    polishing.  Leading coefficients that vanish relative to the row scale
    drop the degree; the lost roots are reported at INFINITY.  Raises
    SolverDiverged when the polished residual exceeds ``tol`` relative to
    max|c_i|.
    """
    coeffs = [complex(c) for c in (c4, c3, c2, c1, c0)]
    top = max(abs(c) for c in coeffs)
    if top == 0.0:
        raise ValueError("all five coefficients vanish")
    coeffs = [c / top for c in coeffs]

    lead = 0
    while lead < 4 and abs(coeffs[lead]) <= 1e-14:
        lead += 1
    work = coeffs[lead:]
    n_inf = lead
    degree = len(work) - 1

    if degree == 0:
        return QuarticRoots((INFINITY,), (4,), 0.0)

    monic = [c / work[0] for c in work]
    if degree == 1:
        finite = np.array([-monic[1]])
    elif degree == 2:
        r1, r2 = _quadratic_roots_arr(np.array([monic[1]]), np.array([monic[2]]))
        finite = np.array([r1[0], r2[0]])
    else:
        finite = _durand_kerner(monic)
        finite = _newton_polish(monic, finite, iterations=3)
        val = np.abs(_poly_eval(monic, finite))
        if np.any(val > 1e-9 * sum(abs(c) for c in monic) * (1 + np.max(np.abs(finite))) ** degree):
            if degree == 4:
                finite = quartic_roots_batch(*[np.array([c]) for c in monic])[0]
            else:
                finite = _cubic_roots_arr(
                    np.array([monic[1]]), np.array([monic[2]]), np.array([monic[3]])
                )[0]
    finite = _newton_polish(monic, np.asarray(finite, dtype=complex), iterations=2)

    vals = np.abs(_poly_eval(coeffs, finite))
    residual = float(np.max(vals)) if len(finite) else 0.0
    if residual > tol:
        raise SolverDiverged(
            f"quartic residual {residual:.3e} above tolerance {tol:.1e}"
        )

    roots, mult = _cluster_multiplicities(coeffs, list(finite), top)
    if n_inf:
        roots.append(INFINITY)
        mult.append(n_inf)
    return QuarticRoots(tuple(roots), tuple(mult), residual)
