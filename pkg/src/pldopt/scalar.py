"""Golden-section search for unimodal scalar minimization on a closed interval."""

from __future__ import annotations

import math

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f, lo, hi, tol=1e-9, maxiter=300):
    """Minimize ``f`` on [lo, hi]; returns ``(x, f(x))``.

    ``tol`` is relative to the initial interval width. The endpoints are
    compared against the interior result at the end, so a minimizer sitting
    on a bound (common when a constraint binds) is returned exactly. On ties
    the smaller abscissa wins.
    """
    if hi < lo:
        raise ValueError("empty interval")
    if hi == lo:
        return lo, f(lo)
    width = hi - lo
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= tol * width:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    x, fx = (c, fc) if fc <= fd else (d, fd)
    for e in (lo, hi):
        fe = f(e)
        if fe < fx or (fe == fx and e < x):
            x, fx = e, fe
    return x, fx
