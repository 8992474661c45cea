import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def golden_max(f, a, b, xtol=1e-13, max_iter=200):
    """Maximize a unimodal scalar function on ``[a, b]`` by golden-section search.

    Returns ``(x, f(x))`` for the best point evaluated, endpoints included.
    ``xtol`` is relative to the bracket scale.
    """
    a, b = float(min(a, b)), float(max(a, b))
    best_x, best_f = a, f(a)
    fb = f(b)
    if fb > best_f:
        best_x, best_f = b, fb

    scale = max(abs(a), abs(b), 1e-300)
    c = a + INV_PHI2 * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= xtol * scale:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = a + INV_PHI2 * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx > best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def grid_bracket(values, points):
    """Neighbours of the grid argmax, as a bracket for a unimodal refinement."""
    i = int(np.argmax(values))
    lo = points[max(i - 1, 0)]
    hi = points[min(i + 1, len(points) - 1)]
    return float(lo), float(hi)
