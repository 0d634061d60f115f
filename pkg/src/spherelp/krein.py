"""Product-positivity condition gating both bounds, and its threshold in ell.

The condition asks that every product (t - ell) P_i^{1,ell}(t) P_j^{1,ell}(t),
i, j <= k except i = j = k, be strictly positive definite (all expansion
coefficients positive).  It holds at ell = -1 classically, fails once ell
grows past a dimension- and degree-dependent threshold ell*(n, k), and
P_{k+1}^{1,0}(ell)/P_k^{1,0}(ell) < 1 is necessary for it - so a violated
ratio short-circuits to a definitive failure rather than an error.

``ell_star`` estimates the threshold exactly the way a sweep would: the last
passing point on a step-resolution grid walking up from -1, verified against
the first failing point, then sharpened by bisection.  The grid transition is
located by binary search, which assumes the pass region is an interval
ending at the threshold; ``conjecture_scan`` samples that assumption.
"""

from dataclasses import dataclass

import mpmath as mp

from . import _poly
from ._roots import poly_root
from .errors import ArgumentError, NumericError, PreconditionError
from .orthopoly import _check_dimension, _table, expand_gegenbauer
from .precision import boosted_precision, get_working_dps, mpf, working
from .signed import _polys_1l

__all__ = [
    "KreinPair",
    "KreinReport",
    "lsk_check",
    "EllStar",
    "ell_star",
    "ratio_root",
    "conjecture_scan",
    "sweep_table",
]

_MARGINAL_BAND = mp.mpf("1e-6")


@dataclass(frozen=True)
class KreinPair:
    i: int
    j: int
    ok: bool
    min_coeff: object
    max_abs: object
    rechecked: bool


@dataclass(frozen=True)
class KreinReport:
    n: int
    ell: object
    k: int
    tol: object
    mode: str
    pairs: tuple
    overall: bool
    reason: str | None
    ratio_at_ell: object | None

    def pair(self, i, j):
        i, j = max(i, j), min(i, j)
        for p in self.pairs:
            if (p.i, p.j) == (i, j):
                return p
        if (i, j) == (self.k, self.k):
            return None  # excluded by definition
        raise KeyError((i, j))

    def as_dict(self):
        from .serialize import number

        return {
            "n": self.n,
            "ell": number(self.ell),
            "k": self.k,
            "mode": self.mode,
            "overall": self.overall,
            "reason": self.reason,
            "excluded_pair": [self.k, self.k],
            "pairs": [
                {
                    "i": p.i,
                    "j": p.j,
                    "ok": p.ok,
                    "min_coeff": number(p.min_coeff),
                    "max_abs": number(p.max_abs),
                    "rechecked": p.rechecked,
                }
                for p in self.pairs
            ],
        }


def _pair_list(k, mode):
    if mode == "full":
        pairs = [(i, j) for i in range(k + 1) for j in range(i + 1) if not i == j == k]
    elif mode == "weak":
        pairs = [(k, j) for j in range(k)] + [(k - 1, j) for j in range(k)]
    else:
        raise ArgumentError(f"mode must be 'full' or 'weak', got {mode!r}")
    # descending product degree: empirically the first pairs to fail
    pairs.sort(key=lambda ij: (-(ij[0] + ij[1]), ij))
    return pairs


def _pair_stats(polys, ell, n, i, j):
    prod = _poly.mul(polys[i], polys[j])
    prod = _poly.mul(_poly.linear(ell), prod)
    exp = expand_gegenbauer(prod, n)
    mx = max(abs(c) for c in exp.coeffs)
    return min(exp.coeffs), mx


def _check_pair(n, ell, k, i, j, tol, polys):
    """Strict positivity verdict for one pair, with a doubled-precision
    recheck when the failure is within the marginal band."""
    with working():
        mn, mx = _pair_stats(polys, ell, n, i, j)
        ok = mn > tol * mx
        rechecked = False
        if not ok and mn > -_MARGINAL_BAND * mx:
            rechecked = True
            with boosted_precision():
                from .signed import _kernel_polys_1l

                polys2 = _kernel_polys_1l(n, ell, k)
                mn, mx = _pair_stats(polys2, ell, n, i, j)
                ok = mn > tol * mx
    return ok, mn, mx, rechecked


def _necessary_ratio(n, ell, k):
    tab = _table(n, "adjacent10")
    tab.ensure_degree(k + 1)
    tab.ensure_zeros(k)
    with working():
        tk1 = tab.zeros[k][0][0]
        if ell < -1 or not ell < tk1:
            raise PreconditionError(
                f"family undefined: ell={ell} not in [-1, {tk1})",
                condition="family-domain",
            )
        return _poly.evaluate(tab.polys[k + 1], ell) / _poly.evaluate(tab.polys[k], ell)


def lsk_check(n, ell, k, tol=mp.mpf("1e-12"), mode="full") -> KreinReport:
    """Check the product-positivity condition pair by pair.

    The pair (k, k) is excluded by definition.  Products are symmetric in
    (i, j), so only i >= j is evaluated.  A coefficient passes when it
    exceeds tol * max|coefficient| of its own expansion; marginal failures
    are re-decided at doubled precision before being reported.
    """
    _check_dimension(n)
    if not isinstance(k, int) or k < 1:
        raise ArgumentError(f"degree must be an integer >= 1, got {k!r}")
    ell = mpf(ell)
    tol = mpf(tol)
    ratio = _necessary_ratio(n, ell, k)
    if not ratio < 1:
        return KreinReport(
            n=n,
            ell=ell,
            k=k,
            tol=tol,
            mode=mode,
            pairs=(),
            overall=False,
            reason=f"necessary ratio condition fails: {ratio} >= 1",
            ratio_at_ell=ratio,
        )
    polys = _polys_1l(n, ell, k)
    results = []
    overall = True
    for i, j in _pair_list(k, mode):
        ok, mn, mx, re = _check_pair(n, ell, k, i, j, tol, polys)
        results.append(KreinPair(i=i, j=j, ok=ok, min_coeff=mn, max_abs=mx, rechecked=re))
        overall = overall and ok
    results.sort(key=lambda p: (p.i, p.j))
    return KreinReport(
        n=n,
        ell=ell,
        k=k,
        tol=tol,
        mode=mode,
        pairs=tuple(results),
        overall=overall,
        reason=None,
        ratio_at_ell=ratio,
    )


def _lsk_pass(n, ell, k, tol=mp.mpf("1e-12")):
    """Early-exit boolean used by the sweep; same decisions as lsk_check."""
    try:
        ratio = _necessary_ratio(n, ell, k)
    except PreconditionError:
        return False
    if not ratio < 1:
        return False
    polys = _polys_1l(n, ell, k)
    for i, j in _pair_list(k, "full"):
        ok, _, _, _ = _check_pair(n, ell, k, i, j, tol, polys)
        if not ok:
            return False
    return True


def ratio_root(n, k):
    """Smallest solution of P_{k+1}^{1,0}(t) = P_k^{1,0}(t).

    It lies strictly between the smallest zeros of the two polynomials and is
    the ceiling of the admissible ell range for degree k (t = 1 is always the
    trivial solution of the same equation).
    """
    _check_dimension(n)
    if not isinstance(k, int) or k < 1:
        raise ArgumentError(f"degree must be an integer >= 1, got {k!r}")
    tab = _table(n, "adjacent10")
    tab.ensure_zeros(k + 1)
    with working():
        lo = tab.zeros[k + 1][0][0]
        hi = tab.zeros[k][0][0]
        diff = _poly.sub(tab.polys[k + 1], tab.polys[k])
        return poly_root(diff, lo, hi)


@dataclass(frozen=True)
class EllStar:
    """Estimated threshold ell*(n, k) with both verification brackets.

    value is the last grid point (resolution `step`) at which the condition
    was verified to hold, sharpened by bisection when `bisected`; the
    condition fails at value + step (verified).  bracket is the final
    (pass, fail) pair from bisection; grid_bracket the coarse one.
    """

    n: int
    k: int
    value: object
    step: object
    bisected: bool
    bracket: tuple
    grid_bracket: tuple
    ceiling: object
    holds_to_ceiling: bool

    def as_dict(self):
        from .serialize import number, trunc3

        return {
            "n": self.n,
            "k": self.k,
            "value": number(self.value),
            "value_trunc3": trunc3(self.value),
            "step": number(self.step),
            "bisected": self.bisected,
            "bracket": [number(self.bracket[0]), number(self.bracket[1])],
            "grid_bracket": [number(self.grid_bracket[0]), number(self.grid_bracket[1])],
            "ceiling": number(self.ceiling),
            "holds_to_ceiling": self.holds_to_ceiling,
        }


def ell_star(n, k, step=mp.mpf("1e-3"), refine_to=mp.mpf("1e-6"), tol=mp.mpf("1e-12")) -> EllStar:
    """Threshold sweep: grid walk up from -1 at `step`, then bisection.

    The pass/fail transition on the grid is located by binary search (the
    pass region is assumed to be an interval starting at -1, which is what
    ``conjecture_scan`` samples); the returned value is always re-verified to
    pass, and value + step to fail.
    """
    step = mpf(step)
    refine_to = mpf(refine_to)
    with working():
        ceiling = ratio_root(n, k)
        mmax = int(mp.floor((ceiling + 1) / step)) - 1
        if mmax < 0:
            raise NumericError(f"no grid point below the admissibility ceiling {ceiling}")

        def at(m):
            return -1 + m * step

        if not _lsk_pass(n, at(0), k, tol):
            raise NumericError(
                f"condition unexpectedly fails at ell={at(0)} (classical endpoint)"
            )
        if _lsk_pass(n, at(mmax), k, tol):
            return EllStar(
                n=n,
                k=k,
                value=at(mmax),
                step=step,
                bisected=False,
                bracket=(at(mmax), ceiling),
                grid_bracket=(at(mmax), ceiling),
                ceiling=ceiling,
                holds_to_ceiling=True,
            )
        lo_m, hi_m = 0, mmax
        while hi_m - lo_m > 1:
            mid = (lo_m + hi_m) // 2
            if _lsk_pass(n, at(mid), k, tol):
                lo_m = mid
            else:
                hi_m = mid
        grid_bracket = (at(lo_m), at(hi_m))
        lo, hi = grid_bracket
        while hi - lo > refine_to:
            mid = (lo + hi) / 2
            if _lsk_pass(n, mid, k, tol):
                lo = mid
            else:
                hi = mid
        # required invariants: pass at value, fail at value + step
        if not _lsk_pass(n, lo, k, tol):
            raise NumericError(f"bisection end state inconsistent at ell={lo}")
        if _lsk_pass(n, lo + step, k, tol):
            raise NumericError(f"condition unexpectedly holds at ell={lo + step}")
    return EllStar(
        n=n,
        k=k,
        value=lo,
        step=step,
        bisected=True,
        bracket=(lo, hi),
        grid_bracket=grid_bracket,
        ceiling=ceiling,
        holds_to_ceiling=False,
    )


@dataclass(frozen=True)
class ScanResult:
    n: int
    k: int
    ell_hi: object
    points: tuple  # (ell, passed)
    failures: tuple

    @property
    def all_pass(self):
        return not self.failures


def conjecture_scan(n, k, samples, ell_hi=None, tol=mp.mpf("1e-12")) -> ScanResult:
    """Sample the condition on evenly spaced ell in [-1, ell_hi].

    ell_hi defaults to the estimated threshold.  The endpoint -1 is always
    included.  Failures are findings (candidate counterexamples to the
    interval structure of the pass region), never errors.
    """
    if samples < 2:
        raise ArgumentError("samples must be >= 2")
    if ell_hi is None:
        ell_hi = ell_star(n, k).value
    ell_hi = mpf(ell_hi)
    with working():
        pts = []
        fails = []
        for i in range(samples):
            ell = -1 + (ell_hi + 1) * mp.mpf(i) / (samples - 1)
            ok = _lsk_pass(n, ell, k, tol)
            pts.append((ell, ok))
            if not ok:
                fails.append(ell)
    return ScanResult(n=n, k=k, ell_hi=ell_hi, points=tuple(pts), failures=tuple(fails))


def _sweep_cell(args):
    n, k, step, dps = args
    from .precision import set_working_dps

    set_working_dps(dps)
    es = ell_star(n, k, step=step)
    rr = ratio_root(n, k)
    return n, k, es, rr


def sweep_table(ns=range(3, 11), ks=range(1, 11), step=mp.mpf("1e-3"), workers=1):
    """ell*(n, k) and the ratio root for every cell; deterministic order.

    Returns {n: {"ell_star": {k: EllStar}, "ratio_root": {k: value}}}.  With
    workers > 1 the independent cells run in a process pool and are merged by
    index, so the output does not depend on scheduling.
    """
    ns, ks = list(ns), list(ks)
    cells = [(n, k, mpf(step), get_working_dps()) for n in ns for k in ks]
    if workers and workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_cell, cells))
    else:
        results = [_sweep_cell(c) for c in cells]
    out = {n: {"ell_star": {}, "ratio_root": {}} for n in ns}
    for n, k, es, rr in results:
        out[n]["ell_star"][k] = es
        out[n]["ratio_root"][k] = rr
    return out
