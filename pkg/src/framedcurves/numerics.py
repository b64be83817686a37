"""Quadrature and root finding used by the geometric constructions.

Integrands and scanned functions are vectorised: they take a float array of
parameters and return an array of the same shape.
"""
import numpy as np

from .config import QUAD_MAX_DEPTH, QUAD_TOL, ROOT_WIDTH, SCAN_POINTS
from .errors import QuadratureFailure


def adaptive_simpson(f, a, b, tol=QUAD_TOL, max_depth=QUAD_MAX_DEPTH, rel=QUAD_TOL):
    """Integrate ``f`` over each interval ``[a[i], b[i]]``.

    A subinterval is accepted when its Richardson error estimate is below
    its share of ``tol`` or below ``rel`` times its own integral magnitude.

    All intervals are refined breadth first so that ``f`` is called on whole
    arrays of nodes.  Intervals still unresolved after ``max_depth`` bisections
    raise :class:`QuadratureFailure`.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    total = np.zeros(a.shape)
    if a.size == 0:
        return total
    m = 0.5 * (a + b)
    fa, fm, fb = np.split(f(np.concatenate([a, m, b])), 3)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    owner = np.arange(a.size)
    tols = np.full(a.size, float(tol))
    for _ in range(max_depth + 1):
        if owner.size == 0:
            return total
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = np.split(f(np.concatenate([lm, rm])), 2)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        done = np.abs(delta) <= 15.0 * np.maximum(tols, rel * np.abs(left + right))
        np.add.at(total, owner[done], (left + right + delta / 15.0)[done])
        keep = ~done
        owner = np.concatenate([owner[keep], owner[keep]])
        a, b = np.concatenate([a[keep], m[keep]]), np.concatenate([m[keep], b[keep]])
        fa, fb = np.concatenate([fa[keep], fm[keep]]), np.concatenate([fm[keep], fb[keep]])
        fm = np.concatenate([flm[keep], frm[keep]])
        whole = np.concatenate([left[keep], right[keep]])
        tols = np.concatenate([tols[keep], tols[keep]]) / 2.0
    if owner.size:
        raise QuadratureFailure(f"adaptive Simpson did not converge within depth {max_depth}")
    return total


def integral_from(f, anchor, t, tol=QUAD_TOL):
    """``int_anchor^t f`` for every entry of ``t`` (any shape).

    The sorted query points are joined by consecutive gaps; each gap is
    integrated to ``tol`` and the pieces are accumulated outward from
    ``anchor``.
    """
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    nodes, inverse = np.unique(np.concatenate([[float(anchor)], flat]), return_inverse=True)
    pieces = adaptive_simpson(f, nodes[:-1], nodes[1:], tol=tol) if nodes.size > 1 else np.zeros(0)
    cumulative = np.concatenate([[0.0], np.cumsum(pieces)])
    cumulative -= cumulative[inverse[0]]
    return cumulative[inverse[1:]].reshape(t.shape)


def scan_grid(domain, n=SCAN_POINTS, endpoint=True):
    lo, hi = domain
    return np.linspace(lo, hi, n, endpoint=endpoint)


def _bisect(f, lo, hi, flo, width):
    """Bisect every bracket ``[lo[i], hi[i]]`` at once; ``flo`` is ``f(lo)``."""
    lo, hi, flo = (np.array(x, dtype=float) for x in (lo, hi, flo))
    exact = np.full(lo.shape, np.nan)
    while lo.size and np.max(hi - lo) > width:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        hit = (fmid == 0.0) & np.isnan(exact)
        exact[hit] = mid[hit]
        same = np.sign(fmid) == np.sign(flo)
        lo, flo = np.where(same, mid, lo), np.where(same, fmid, flo)
        hi = np.where(same, hi, mid)
    return np.where(np.isnan(exact), 0.5 * (lo + hi), exact)


def find_zeros(f, domain, *, df=None, n_scan=SCAN_POINTS, endpoint=True, zero_tol=1e-10,
               width=ROOT_WIDTH, merge=1e-9):
    """Zeros of a scalar function on ``domain``.

    Sign changes on a uniform scan are refined by bisection.  Tangential zeros
    (no sign change) are picked up at strict local minima of ``|f|`` by
    bisecting the sign change of ``df`` and accepted when ``|f| < zero_tol``
    there.  When ``df`` is given, each root gets one Newton polish.
    """
    grid = scan_grid(domain, n_scan, endpoint=endpoint)
    vals = f(grid)
    roots = list(grid[vals == 0.0])
    i = np.flatnonzero(vals[:-1] * vals[1:] < 0)
    roots += list(_bisect(f, grid[i], grid[i + 1], vals[i], width))
    if df is not None:
        absv = np.abs(vals)
        left, mid, right = absv[:-2], absv[1:-1], absv[2:]
        strict = (mid <= left) & (mid <= right) & ((mid < left) | (mid < right))
        # a tangential zero sits at most a few grid steps' worth of curvature above 0
        screen = mid < 1e-2 * max(1.0, float(np.max(absv)))
        k = np.flatnonzero(strict & screen) + 1
        k = k[(vals[k] != 0.0) & (vals[k - 1] * vals[k + 1] > 0)]
        if k.size:
            lo, hi = grid[k - 1], grid[k + 1]
            dlo, dhi = df(lo), df(hi)
            ok = dlo * dhi <= 0
            lo, hi, dlo = lo[ok], hi[ok], dlo[ok]
            cand = np.where(dlo == 0.0, lo, _bisect(df, lo, hi, dlo, width))
            if cand.size:
                roots += list(cand[np.abs(f(cand)) < zero_tol])
    roots = np.sort(np.asarray(roots, dtype=float))
    if df is not None and roots.size:
        fr, dfr = f(roots), df(roots)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dfr != 0.0, fr / dfr, 0.0)
        roots = np.sort(np.where(np.abs(step) < 1e-8, roots - step, roots))
    merged = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= merge:
            continue
        merged.append(r)
    lo, hi = domain
    if not endpoint:
        merged = [r for r in merged if abs(r - hi) > merge]
    return [float(min(max(r, lo), hi)) for r in merged]


def identically_zero(f, domain, tol, n_scan=SCAN_POINTS):
    return bool(np.max(np.abs(f(scan_grid(domain, n_scan)))) < tol)


def split_domain(domain, zeros, delta):
    """Pieces of ``domain`` avoiding each zero by ``delta``."""
    lo, hi = domain
    cuts = [lo] + [z for z in zeros] + [hi]
    pieces = []
    for i, (a, b) in enumerate(zip(cuts[:-1], cuts[1:])):
        a2 = a + delta if i > 0 else a
        b2 = b - delta if i < len(cuts) - 2 else b
        if b2 - a2 > 2 * delta:
            pieces.append((float(a2), float(b2)))
    return pieces


def vanishing_order(derivs, tol):
    """Index of the first entry of ``derivs`` with magnitude above ``tol``."""
    for k, d in enumerate(derivs):
        if abs(d) > tol:
            return k
    return len(derivs)


def polish_root(fn, t, *, max_order=4, loose=1e-4, iters=8):
    """Refine an approximate zero of the jet function ``fn`` by its multiplicity.

    A zero of multiplicity ``k`` is a simple zero of ``f^(k-1)``, so Newton
    runs on that derivative with ``f^(k)`` as slope.  ``loose`` (relative to
    the largest derivative) decides which leading derivatives count as
    vanishing; ``k`` is re-estimated every step and a step that increases
    ``|f|`` beyond rounding level is rejected.  Returns ``(t, k)``.
    """
    t = float(t)
    d = fn(np.array(t), max_order).coeffs
    scale = max(1.0, float(np.max(np.abs(d))))
    k = max(1, vanishing_order(d, loose * scale))
    for _ in range(iters):
        if k > max_order or d[k] == 0.0:
            break
        step = d[k - 1] / d[k]
        if not np.isfinite(step) or abs(step) > 1e-3 or step == 0.0:
            break
        d_new = fn(np.array(t - step), max_order).coeffs
        if abs(d_new[0]) > abs(d[0]) + 64 * np.finfo(float).eps * scale:
            break
        t, d = t - step, d_new
        k = max(1, vanishing_order(d, loose * scale))
    return t, k
