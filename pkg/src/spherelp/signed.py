"""Orthogonal polynomials for the signed measures built from a left endpoint.

For ell below the smallest zero of P_k^{1,0}, the signed measures

    dnu_ell(t)   = (t - ell)(1 - t) dmu(t)          (pos. definite to degree k-1)
    dnu_s(t)     = (s - t)(1 - t) dmu(t)            (pos. definite to degree k-1)
    dnu_ells(t)  = (t - ell)(s - t)(1 - t) dmu(t)   (pos. definite to degree k-2)
    dmu_ell(t)   = (t - ell) dmu(t)                 (pos. definite to degree k-1)

admit orthogonal families.  The dnu_ell family P_i^{1,ell} (i <= k) is built
explicitly from the Christoffel-Darboux kernel of the (1,0) companion family,

    P_i^{1,ell}(t) = T_i(t, ell) / T_i(1, ell),
    T_i(x, y) = sum_{j<=i} r_j^{1,0} P_j^{1,0}(x) P_j^{1,0}(y),

so its zeros solve P_{i+1}^{1,0}(t)/P_i^{1,0}(t) = P_{i+1}^{1,0}(ell)/P_i^{1,0}(ell)
and are bracketed by the zeros of the companion family.  On top of it sits the
single degree-(k-1) polynomial orthogonal for dnu_ells, obtained from the
kernel of the P^{1,ell} family itself and normalized at 1; its zeros are the
interior nodes of the bound quadrature.

Everything constructed here is immutable after construction and cached per
(n, ell, k, working precision).
"""

from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

from . import _poly
from ._roots import poly_root
from .errors import ArgumentError, ConditionError, NumericError, PreconditionError, RangeError
from .orthopoly import (
    _check_dimension,
    _table,
    adjacent10_norm,
    mu_integral,
    radau_right_rule,
)
from .precision import get_working_dps, mpf, working

__all__ = [
    "AdmissibleResult",
    "admissible",
    "MaxKResult",
    "max_k_for_ell",
    "SignedFamily1L",
    "build_1l_family",
    "KernelPoly1LS",
    "build_1ls_poly",
    "s_window",
    "gram_schmidt_family",
]

_REC_TOL_DIGITS = 10  # agreement digits sacrificed in dual-path comparisons


@dataclass(frozen=True)
class AdmissibleResult:
    ok: bool
    reason: str | None
    smallest_zero_k: object
    smallest_zero_k1: object
    ratio_at_ell: object | None
    in_interlacing_regime: bool

    def __bool__(self):
        return self.ok


def admissible(n, ell, k) -> AdmissibleResult:
    """Whether the degree-k construction is defined at this left endpoint.

    Requires -1 <= ell < t_{k,1}^{1,0} (the signed measure is then positive
    definite up to degree k-1) and P_{k+1}^{1,0}(ell)/P_k^{1,0}(ell) < 1 (the
    normalization of the top family member does not degenerate and its largest
    zero stays below 1).  The classical endpoint ell = -1 is admissible for
    every k.  The stricter location t_{k+1,1}^{1,0} < ell, under which the
    two-sided interlacing brackets apply, is reported as a flag.
    """
    _check_dimension(n)
    if not isinstance(k, int) or k < 1:
        raise ArgumentError(f"degree must be an integer >= 1, got {k!r}")
    ell = mpf(ell)
    tab = _table(n, "adjacent10")
    tab.ensure_zeros(k + 1)
    with working():
        tk1 = tab.zeros[k][0][0]
        tk11 = tab.zeros[k + 1][0][0]
        if ell < -1:
            return AdmissibleResult(False, f"ell={ell} below -1", tk1, tk11, None, False)
        if not ell < tk1:
            return AdmissibleResult(
                False,
                f"ell={ell} not below the smallest degree-{k} companion zero {tk1}",
                tk1,
                tk11,
                None,
                False,
            )
        ratio = _poly.evaluate(tab.polys[k + 1], ell) / _poly.evaluate(tab.polys[k], ell)
        if not ratio < 1:
            return AdmissibleResult(
                False,
                f"P_{k+1}^{{1,0}}(ell)/P_{k}^{{1,0}}(ell) = {ratio} is not < 1",
                tk1,
                tk11,
                ratio,
                bool(tk11 < ell),
            )
        return AdmissibleResult(True, None, tk1, tk11, ratio, bool(tk11 < ell))


@dataclass(frozen=True)
class MaxKResult:
    k: int
    capped: bool
    cap: int


def max_k_for_ell(n, ell, cap=40) -> MaxKResult:
    """Largest k with ell strictly below the smallest zero of P_k^{1,0}.

    The smallest zero decreases towards -1 with k, so the answer is found by
    walking k upward; k = 0 means no degree qualifies.  At ell = -1 the
    condition holds for every k and the configurable cap is reported instead.
    """
    _check_dimension(n)
    ell = mpf(ell)
    if not -1 <= ell <= 0:
        raise ArgumentError(f"ell must lie in [-1, 0], got {ell}")
    tab = _table(n, "adjacent10")
    with working():
        k = 0
        while k < cap:
            tab.ensure_zeros(k + 1)
            if not ell < tab.zeros[k + 1][0][0]:
                break
            k += 1
    return MaxKResult(k, k == cap, cap)


# ---------------------------------------------------------------------------
# the dnu_ell family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignedFamily1L:
    """P_i^{1,ell} for i = 0..k: power coefficients, recurrence, norms, zeros.

    r[i] holds 1/int (P_i^{1,ell})^2 dnu_ell for i <= k-1 (the degrees where
    the signed measure is positive definite); zeros[d] lists (root, lo, hi)
    with the bracket each root was isolated in.
    """

    n: int
    ell: object
    k: int
    polys: tuple
    a: tuple
    b: tuple
    c: tuple
    r: tuple
    eta: tuple
    zeros: tuple
    ratio_at_ell: object
    in_interlacing_regime: bool

    def poly(self, i):
        return self.polys[i]

    def eval(self, i, t):
        with working():
            return _poly.evaluate(self.polys[i], mpf(t))

    def zero_values(self, degree):
        return [z for z, _, _ in self.zeros[degree]]

    def kernel_sum(self, i, x, y):
        """sum_{j<=i} r_j P_j(x) P_j(y); defined for i <= k-1."""
        x, y = mpf(x), mpf(y)
        with working():
            return mp.fsum(
                self.r[j] * self.eval(j, x) * self.eval(j, y) for j in range(i + 1)
            )

    def kernel_quotient(self, i, x, y):
        """Christoffel-Darboux form r_i b_i (P_{i+1}(x)P_i(y) - P_{i+1}(y)P_i(x))/(x-y)."""
        x, y = mpf(x), mpf(y)
        with working():
            num = self.eval(i + 1, x) * self.eval(i, y) - self.eval(i + 1, y) * self.eval(i, x)
            return self.r[i] * self.b[i] * num / (x - y)

    def as_dict(self):
        from .serialize import number

        return {
            "n": self.n,
            "kind": "signed_1l",
            "params": [number(self.ell)],
            "a": [number(x) for x in self.a],
            "b": [number(x) for x in self.b],
            "c": [number(x) for x in self.c],
            "r": [number(x) for x in self.r],
            "eta": [number(x) for x in self.eta],
            "zeros": [
                [[number(z), number(lo), number(hi)] for z, lo, hi in row]
                for row in self.zeros
            ],
        }


def _kernel_polys_1l(n, ell, k):
    """Power coefficients of P_i^{1,ell}, i = 0..k, from the (1,0) kernel."""
    tab = _table(n, "adjacent10")
    tab.ensure_degree(k + 1)
    with working():
        T = (mp.mpf(0),)
        T1 = mp.mpf(0)
        polys = []
        for j in range(k + 1):
            rj = adjacent10_norm(n, j)
            pj_at_ell = _poly.evaluate(tab.polys[j], ell)
            T = _poly.add(T, _poly.scale(tab.polys[j], rj * pj_at_ell))
            T1 += rj * pj_at_ell
            if T1 == 0:
                raise NumericError(f"kernel normalization vanished at degree {j}")
            polys.append(_poly.scale(T, 1 / T1))
    return tuple(polys)


@lru_cache(maxsize=256)
def _polys_1l_cached(n, ell, k, dps):
    return _kernel_polys_1l(n, ell, k)


def _polys_1l(n, ell, k):
    """Lean cached path for sweeps that only need the polynomials."""
    return _polys_1l_cached(n, mpf(ell), k, get_working_dps())


def _zero_brackets_1l(tab, i, theta):
    """Brackets for the i zeros of P_i^{1,ell} from companion-family zeros.

    Between consecutive zeros of P_i^{1,0} the ratio P_{i+1}^{1,0}/P_i^{1,0}
    sweeps the real line once, crossing zero at the interleaved zero of
    P_{i+1}^{1,0}; the sign of theta (the ratio's target value) decides on
    which side of that crossing the root sits.  theta < 0 reproduces the
    brackets valid for every degree below k, theta in (0,1) the shifted
    brackets of the top degree when ell lies between consecutive smallest
    zeros.
    """
    tab.ensure_zeros(i + 1)
    zi = [z for z, _, _ in tab.zeros[i]]
    zi1 = [z for z, _, _ in tab.zeros[i + 1]]
    out = []
    for j in range(i - 1):
        mid = zi1[j + 1]
        out.append((zi[j], mid) if theta < 0 else (mid, zi[j + 1]))
    top_mid = zi1[i]
    out.append((zi[i - 1], top_mid) if theta < 0 else (top_mid, mp.mpf(1)))
    return out


@lru_cache(maxsize=64)
def _family_1l_cached(n, ell, k, dps):
    adm = admissible(n, ell, k)
    if not adm:
        raise PreconditionError(f"inadmissible configuration: {adm.reason}", condition="admissible")
    tab = _table(n, "adjacent10")
    polys = _kernel_polys_1l(n, ell, k)
    with working():
        eta = tuple(p[-1] for p in polys)
        for i, e in enumerate(eta):
            if e <= 0:
                raise NumericError(f"leading coefficient of degree {i} not positive: {e}")

        # recurrence data by coefficient comparison, then rebuild as cross-check
        rec_tol = mp.mpf(10) ** (-(get_working_dps() - _REC_TOL_DIGITS))
        a = []
        b = []
        c = []
        for i in range(k):
            bi = eta[i] / eta[i + 1]
            q = _poly.sub(_poly.shift_up(polys[i]), _poly.scale(polys[i + 1], bi))
            q = q + (mp.mpf(0),) * (i + 1 - len(q))
            ai = q[i] / polys[i][-1]
            ci = (
                (q[i - 1] - ai * polys[i][i - 1]) / polys[i - 1][-1]
                if i >= 1
                else mp.mpf(0)
            )
            rebuilt = _poly.scale(
                _poly.sub(
                    _poly.sub(_poly.shift_up(polys[i]), _poly.scale(polys[i], ai)),
                    _poly.scale(polys[i - 1], ci) if i >= 1 else (mp.mpf(0),),
                ),
                1 / bi,
            )
            diff = max(abs(x) for x in _poly.sub(rebuilt, polys[i + 1]))
            if diff > rec_tol:
                raise NumericError(
                    f"kernel and recurrence constructions disagree at degree {i + 1}: {diff}"
                )
            a.append(ai)
            b.append(bi)
            c.append(ci)

        # norms: Radau integration of (P_i)^2 (t-ell)(1-t), cross-checked
        # against the recurrence relation r_i = r_{i-1} b_{i-1} / c_i
        weight = _poly.mul(_poly.linear(ell), (mp.mpf(1), mp.mpf(-1)))
        r = []
        for i in range(k):
            rule = radau_right_rule(n, i + 1)
            integ = rule.integrate_poly(_poly.mul(_poly.mul(polys[i], polys[i]), weight))
            if integ <= 0:
                raise NumericError(f"nonpositive squared norm at degree {i}")
            r.append(1 / integ)
        for i in range(1, k):
            rec_r = r[i - 1] * b[i - 1] / c[i]
            if abs(rec_r - r[i]) > rec_tol * abs(r[i]):
                raise NumericError(f"norm cross-check failed at degree {i}")

        # zeros, bracketed degree by degree
        theta_all = [
            _poly.evaluate(tab.polys[i + 1], ell) / _poly.evaluate(tab.polys[i], ell)
            for i in range(k + 1)
        ]
        zeros = [()]
        for i in range(1, k + 1):
            brs = _zero_brackets_1l(tab, i, theta_all[i])
            row = []
            for lo, hi in brs:
                row.append((poly_root(polys[i], lo, hi), lo, hi))
            zeros.append(tuple(row))

    return SignedFamily1L(
        n=n,
        ell=ell,
        k=k,
        polys=polys,
        a=tuple(a),
        b=tuple(b),
        c=tuple(c),
        r=tuple(r),
        eta=eta,
        zeros=tuple(zeros),
        ratio_at_ell=adm.ratio_at_ell,
        in_interlacing_regime=adm.in_interlacing_regime,
    )


def build_1l_family(n, ell, k) -> SignedFamily1L:
    """Construct the dnu_ell family up to degree k (admissibility enforced)."""
    return _family_1l_cached(n, mpf(ell), k, get_working_dps())


def s_window(n, ell, k):
    """Closed admissible window for the right endpoint: [t_{k,k}^{1,0}, t_{k,k}^{1,ell}]."""
    fam = build_1l_family(n, ell, k)
    tab = _table(n, "adjacent10")
    tab.ensure_zeros(k)
    lo = tab.zeros[k][-1][0]
    hi = fam.zeros[k][-1][0]
    return lo, min(mp.mpf(1), hi)


# ---------------------------------------------------------------------------
# the dnu_ells polynomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelPoly1LS:
    """Degree-(k-1) polynomial orthogonal for dnu_ells, normalized at 1.

    betas holds its zeros (root, lo, hi), strictly between ell and the zeros
    of P_{k-1}^{1,ell}; c1 = -P_k^{1,ell}(s)/P_{k-1}^{1,ell}(s) > 0 is the
    quasi-orthogonal mixing coefficient reused by downstream certificates.
    """

    n: int
    ell: object
    s: object
    k: int
    coeffs: tuple
    betas: tuple
    c1: object
    window: tuple
    family: SignedFamily1L

    def beta_values(self):
        return [z for z, _, _ in self.betas]

    def eval(self, t):
        with working():
            return _poly.evaluate(self.coeffs, mpf(t))

    def as_dict(self):
        from .serialize import number

        return {
            "n": self.n,
            "kind": "signed_1ls",
            "params": [number(self.ell), number(self.s)],
            "coeffs": [number(x) for x in self.coeffs],
            "betas": [[number(z), number(lo), number(hi)] for z, lo, hi in self.betas],
            "window": [number(self.window[0]), number(self.window[1])],
        }


_S_WINDOW_SLACK = mp.mpf("1e-14")


def build_1ls_poly(n, ell, s, k) -> KernelPoly1LS:
    ell, s = mpf(ell), mpf(s)
    fam = build_1l_family(n, ell, k)
    lo, hi = s_window(n, ell, k)
    with working():
        if not (lo - _S_WINDOW_SLACK <= s <= hi + _S_WINDOW_SLACK):
            raise RangeError(
                f"s={s} outside the admissible window [{lo}, {hi}]",
                window=(lo, hi),
            )
        ratio_s = fam.eval(k, s) / fam.eval(k - 1, s)
        ratio_ell = fam.eval(k, ell) / fam.eval(k - 1, ell)
        if not ratio_s > ratio_ell:
            raise ConditionError(
                f"ratio condition fails: P_k/P_(k-1) at s gives {ratio_s},"
                f" at ell gives {ratio_ell}",
                condition="quasi-orthogonality ratio",
            )
        c1 = -ratio_s
        R = (mp.mpf(0),)
        for j in range(k):
            R = _poly.add(R, _poly.scale(fam.polys[j], fam.r[j] * fam.eval(j, s)))
        R1 = _poly.evaluate(R, mp.mpf(1))
        if R1 == 0:
            raise NumericError("kernel vanished at t = 1")
        coeffs = _poly.scale(R, 1 / R1)
        # zeros: beta_1 in (ell, t_{k-1,1}), beta_{i+1} between consecutive
        # zeros of P_{k-1}^{1,ell}
        zk1 = fam.zero_values(k - 1)
        brackets = []
        if k >= 2:
            brackets.append((ell, zk1[0]))
            for i in range(k - 2):
                brackets.append((zk1[i], zk1[i + 1]))
        betas = tuple((poly_root(coeffs, blo, bhi), blo, bhi) for blo, bhi in brackets)
        resid = abs(_poly.evaluate(coeffs, mp.mpf(1)) - 1)
        if resid > mp.mpf(10) ** (-(get_working_dps() - 5)):
            raise NumericError(f"normalization residual {resid}")
    return KernelPoly1LS(
        n=n,
        ell=ell,
        s=s,
        k=k,
        coeffs=coeffs,
        betas=betas,
        c1=c1,
        window=(lo, hi),
        family=fam,
    )


# ---------------------------------------------------------------------------
# generic Gram-Schmidt over exact moment inner products (test utility)
# ---------------------------------------------------------------------------

def gram_schmidt_family(n, weight, max_degree, normalize_at_1=True):
    """Orthogonal polynomials for weight(t) dmu(t) built degree by degree.

    The inner product is evaluated exactly through the moment recurrence, so
    this is an independent construction path against which the kernel-based
    families can be checked.  Works for signed weights as long as the squared
    norms stay positive up to max_degree.
    """
    weight = tuple(mpf(w) for w in weight)

    def inner(p, q):
        return mu_integral(n, _poly.mul(_poly.mul(p, q), weight))

    with working():
        polys = []
        sqnorms = []
        for d in range(max_degree + 1):
            p = tuple([mp.mpf(0)] * d + [mp.mpf(1)])
            for q, qq in zip(polys, sqnorms):
                p = _poly.sub(p, _poly.scale(q, inner(p, q) / qq))
            nrm = inner(p, p)
            # projections onto degree d need its norm; the top member only
            # needs orthogonality, so a signed norm is fine there
            if nrm <= 0 and d < max_degree:
                raise NumericError(
                    f"weight is not positive definite at degree {d} (norm {nrm})"
                )
            polys.append(p)
            sqnorms.append(nrm)
        if normalize_at_1:
            out = []
            for p in polys:
                v = _poly.evaluate(p, mp.mpf(1))
                if v == 0:
                    raise NumericError("cannot normalize: polynomial vanishes at 1")
                out.append(_poly.scale(p, 1 / v))
            polys = out
    return polys
