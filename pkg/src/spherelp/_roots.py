"""Bracketed root refinement: bisection to isolate, safeguarded Newton to polish."""

import mpmath as mp

from . import _poly
from .errors import NumericError
from .precision import root_tolerance


def refine_root(f, lo, hi, df=None, tol=None):
    """Unique simple root of f in [lo, hi]; endpoints may be exact zeros.

    Bisects until the bracket is small, then switches to Newton steps that are
    rejected (replaced by a bisection step) whenever they leave the bracket.
    """
    lo, hi = mp.mpf(lo), mp.mpf(hi)
    tol = tol if tol is not None else root_tolerance()
    flo = f(lo)
    if flo == 0:
        return lo
    fhi = f(hi)
    if fhi == 0:
        return hi
    if mp.sign(flo) == mp.sign(fhi):
        raise NumericError(f"no sign change on bracket [{lo}, {hi}]")
    sign_lo = mp.sign(flo)
    # coarse bisection
    for _ in range(40):
        if hi - lo <= tol:
            return (lo + hi) / 2
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0:
            return mid
        if mp.sign(fm) == sign_lo:
            lo = mid
        else:
            hi = mid
    x = (lo + hi) / 2
    for _ in range(200):
        if hi - lo <= tol:
            return (lo + hi) / 2
        fx = f(x)
        if fx == 0:
            return x
        if mp.sign(fx) == sign_lo:
            lo = x
        else:
            hi = x
        step_ok = False
        if df is not None:
            d = df(x)
            if d != 0:
                nx = x - fx / d
                if lo < nx < hi:
                    if abs(nx - x) <= tol:
                        return nx
                    x = nx
                    step_ok = True
        if not step_ok:
            x = (lo + hi) / 2
    raise NumericError(f"root refinement did not converge on [{lo}, {hi}]")


def poly_root(p, lo, hi, tol=None):
    dp = _poly.derivative(p)
    return refine_root(
        lambda t: _poly.evaluate(p, t),
        lo,
        hi,
        df=lambda t: _poly.evaluate(dp, t),
        tol=tol,
    )
