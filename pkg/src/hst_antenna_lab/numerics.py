"""Quadrature and root bracketing used by the metrics and analytic modules."""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, InvalidParameterError


def adaptive_simpson(f, a, b, rel_tol=1e-8, max_doublings=24, min_intervals=16):
    """Integrate vectorised ``f`` over ``[a, b]`` by composite Simpson with interval doubling.

    Each refinement halves the step and only evaluates the new midpoints.
    Iteration stops once two successive estimates agree to ``rel_tol``
    (relative), but never before ``min_intervals`` subintervals, which guards
    against two coarse estimates agreeing by accident on a peaked integrand.

    Returns ``(value, n_intervals)``. Raises :class:`ConvergenceError` carrying
    the last two estimates if ``max_doublings`` refinements are not enough.
    """
    if not rel_tol > 0.0:
        raise InvalidParameterError(f"rel_tol must be > 0, got {rel_tol!r}")
    a, b = float(a), float(b)
    if a == b:
        return 0.0, 0

    n = 2
    h = (b - a) / n
    ends = float(np.sum(f(np.array([a, b]))))
    odd = float(np.sum(f(np.array([a + h]))))
    even = 0.0
    prev = h / 3.0 * (ends + 4.0 * odd + 2.0 * even)
    for _ in range(max_doublings):
        n *= 2
        h = (b - a) / n
        even += odd
        odd = float(np.sum(f(a + h * np.arange(1, n, 2, dtype=float))))
        est = h / 3.0 * (ends + 4.0 * odd + 2.0 * even)
        if n >= min_intervals and abs(est - prev) <= rel_tol * abs(est):
            return est, n
        prev = est
    raise ConvergenceError(
        f"Simpson refinement did not reach rel_tol={rel_tol:g} after {max_doublings} doublings",
        estimates=(prev, est),
    )


def bisect_brackets(f, lo, hi, tol, max_iter=200):
    """Refine many sign-change brackets at once.

    ``lo`` and ``hi`` are arrays of bracket ends with ``f(lo) * f(hi) < 0``;
    ``f`` must accept an array. Returns bracket midpoints once every bracket
    is narrower than ``tol``.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    if lo.size == 0:
        return lo
    flo = np.asarray(f(lo), dtype=float)
    for _ in range(max_iter):
        if np.all(hi - lo <= tol):
            break
        mid = 0.5 * (lo + hi)
        fmid = np.asarray(f(mid), dtype=float)
        left = np.signbit(fmid) == np.signbit(flo)
        left &= fmid != 0.0
        lo = np.where(left, mid, lo)
        flo = np.where(left, fmid, flo)
        hi = np.where(left, hi, mid)
        # exact zeros collapse the bracket onto the root
        lo = np.where(fmid == 0.0, mid, lo)
    else:
        raise ConvergenceError(f"bisection did not reach tol={tol:g} in {max_iter} steps")
    return 0.5 * (lo + hi)


def scan_roots(f, grid, tol):
    """All sign changes of ``f`` on ``grid``, refined by bisection to ``tol``.

    Grid points where ``f`` is exactly zero are returned as roots directly.
    Touches without a sign change are not reported.
    """
    grid = np.asarray(grid, dtype=float)
    vals = np.asarray(f(grid), dtype=float)
    sgn = np.sign(vals)
    exact = grid[sgn == 0]
    # pair each non-zero sample with the next non-zero sample
    nz = np.flatnonzero(sgn != 0)
    change = sgn[nz[:-1]] != sgn[nz[1:]]
    brackets = [(grid[i], grid[j]) for i, j in zip(nz[:-1][change], nz[1:][change]) if j == i + 1]
    lo = np.array([b[0] for b in brackets])
    hi = np.array([b[1] for b in brackets])
    roots = bisect_brackets(f, lo, hi, tol) if brackets else np.empty(0)
    return np.sort(np.concatenate([roots, exact]))
