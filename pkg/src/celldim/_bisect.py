"""Bisection on monotone predicates and monotone scalar maps."""
from __future__ import annotations

from .errors import BracketError


def bisect_predicate(pred, lo, hi, tol=1e-10, max_iter=200, rel=False):
    """Shrink ``[lo, hi]`` around the switch point of a monotone predicate.

    ``pred(lo)`` must be false and ``pred(hi)`` true. Returns the final
    ``(lo, hi)`` pair; ``hi`` always satisfies the predicate.
    """
    if pred(lo) or not pred(hi):
        raise BracketError(f"predicate does not switch on [{lo}, {hi}]")
    for _ in range(max_iter):
        width = hi - lo
        if width <= (tol * abs(hi) if rel else tol):
            break
        mid = lo + 0.5 * width
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def solve_increasing(fun, target, lo=0.0, hi=1.0, tol=1e-10, max_iter=400):
    """Smallest-bracket ``x >= lo`` with ``fun(x) >= target`` for increasing ``fun``.

    The upper bracket is doubled until it reaches the target. The returned
    value always satisfies ``fun(x) >= target``.
    """
    if fun(lo) >= target:
        return lo
    for _ in range(2000):
        if fun(hi) >= target:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise BracketError("target not reached while expanding the bracket")
    return bisect_predicate(lambda x: fun(x) >= target, lo, hi, tol=tol,
                            max_iter=max_iter, rel=True)[1]
