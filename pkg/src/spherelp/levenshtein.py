"""Cardinality bounds for codes with inner products confined to [ell, s].

The feasible polynomial of degree 2k is

    f(t) = (t - ell)(t - s) (P_{k-1}^{1,ell,s}(t))^2,

nonpositive on [ell, s] by construction.  Its zeros ell, beta_1..beta_{k-1}
(double), s, together with the fixed node 1, carry a quadrature with positive
weights rho_i that integrates degree <= 2k polynomials exactly against dmu.
Evaluating the quadrature on f itself gives the bound two ways at once:

    max |C| <= f(1)/f_0 = 1/rho_{k+1},

and both paths are computed and required to agree, so every reported value is
its own cross-check.  The degree-4 case collapses to a closed form
(`bound_u4`), and the classical odd-degree bounds (built from the kernel of
the (1,0) companion family) are provided for comparison curves; the even
bounds here reduce to the classical even bounds exactly at ell = -1.
"""

from dataclasses import dataclass

import mpmath as mp

from . import _poly
from .errors import (
    ArgumentError,
    DegenerateConfigurationError,
    InvariantViolation,
    NumericError,
    RangeError,
)
from .orthopoly import (
    GegenbauerExpansion,
    adjacent10_norm,
    _table,
    expand_gegenbauer,
    is_positive_definite,
    lagrange_mu_weights,
    mu_integral,
    mu_moments,
)
from .precision import get_working_dps, mpf, working
from .signed import KernelPoly1LS, build_1l_family, build_1ls_poly, s_window
from ._roots import poly_root

__all__ = [
    "LevPolynomial",
    "build_f2k",
    "QuadratureRule",
    "build_quadrature",
    "BoundReport",
    "bound_L2k",
    "U4Report",
    "bound_u4",
    "OddBound",
    "classical_odd_bound",
    "bound_curves",
    "regime_crossover",
]


@dataclass(frozen=True)
class LevPolynomial:
    """The degree-2k feasible polynomial with its expansion certificate."""

    n: int
    ell: object
    s: object
    k: int
    coeffs: tuple
    gegenbauer: GegenbauerExpansion
    f0: object
    f0_closed: object
    f_at_1: object
    kernel: KernelPoly1LS

    def eval(self, t):
        with working():
            return _poly.evaluate(self.coeffs, mpf(t))

    def as_dict(self):
        from .serialize import number

        return {
            "n": self.n,
            "ell": number(self.ell),
            "s": number(self.s),
            "k": self.k,
            "coeffs": [number(c) for c in self.coeffs],
            "gegenbauer_coeffs": [number(c) for c in self.gegenbauer.coeffs],
            "f0": number(self.f0),
            "f_at_1": number(self.f_at_1),
        }


def build_f2k(n, ell, s, k) -> LevPolynomial:
    """Assemble f and expand it, computing f_0 along two independent routes.

    The second route integrates (t-ell)(P_k^{1,ell} - rho_s P_{k-1}^{1,ell})
    against dmu, where rho_s is the family ratio at s; it involves no
    squaring, so cancellation behaves differently than in the expansion path.
    """
    ker = build_1ls_poly(n, ell, s, k)
    ell, s = ker.ell, ker.s
    fam = ker.family
    with working():
        f = _poly.mul(
            _poly.mul(_poly.linear(ell), _poly.linear(s)),
            _poly.mul(ker.coeffs, ker.coeffs),
        )
        geg = expand_gegenbauer(f, n)
        f0 = geg.coeffs[0]
        ratio_s = -ker.c1
        integrand = _poly.mul(
            _poly.linear(ell),
            _poly.sub(fam.polys[k], _poly.scale(fam.polys[k - 1], ratio_s)),
        )
        f0_closed = (1 - s) / (1 - ratio_s) * mu_integral(n, integrand)
        # both routes carry absolute error at the coefficient scale; f0 itself
        # may legitimately pass through zero outside the certified regime
        tol = mp.mpf(10) ** (-(get_working_dps() - 10))
        scale = max(mp.mpf(1), max(abs(c) for c in geg.coeffs))
        if abs(f0 - f0_closed) > tol * scale:
            raise NumericError(
                f"f_0 routes disagree: expansion {f0} vs closed {f0_closed}"
            )
        f_at_1 = (1 - ell) * (1 - s)
        if abs(_poly.evaluate(f, mp.mpf(1)) - f_at_1) > tol * f_at_1:
            raise NumericError("f(1) mismatch against (1-ell)(1-s)")
    return LevPolynomial(
        n=n,
        ell=ell,
        s=s,
        k=k,
        coeffs=f,
        gegenbauer=geg,
        f0=f0,
        f0_closed=f0_closed,
        f_at_1=f_at_1,
        kernel=ker,
    )


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes (ell, beta_1..beta_{k-1}, s, 1) and positive weights, exact to 2k."""

    n: int
    ell: object
    s: object
    k: int
    nodes: tuple
    weights: tuple
    exactness_degree: int
    max_exactness_residual: object

    def integrate(self, f):
        with working():
            return mp.fsum(w * f(x) for x, w in zip(self.nodes, self.weights))

    def integrate_poly(self, coeffs):
        return self.integrate(lambda t: _poly.evaluate(coeffs, t))

    def as_dict(self):
        from .serialize import number

        return {
            "nodes": [number(x) for x in self.nodes],
            "rho": [number(w) for w in self.weights],
            "exactness_degree": self.exactness_degree,
        }


def build_quadrature(n, ell, s, k, kernel=None) -> QuadratureRule:
    """Weights by Lagrange-basis integrals against dmu, verified on monomials.

    A nonpositive weight is a theorem violation under the construction's
    hypotheses and aborts with the offending index rather than being clamped.
    """
    ker = kernel if kernel is not None else build_1ls_poly(n, ell, s, k)
    with working():
        nodes = [ker.ell] + ker.beta_values() + [ker.s, mp.mpf(1)]
        weights = lagrange_mu_weights(n, nodes)
        for i, w in enumerate(weights):
            if w <= 0:
                raise InvariantViolation(
                    f"quadrature weight rho_{i} = {w} is not positive", index=i
                )
        moms = mu_moments(n, 2 * k)
        tol = mp.mpf(10) ** (-(get_working_dps() - 10))
        worst = mp.mpf(0)
        for j in range(2 * k + 1):
            got = mp.fsum(w * x**j for x, w in zip(nodes, weights))
            resid = abs(got - moms[j]) / max(mp.mpf(1), abs(moms[j]))
            worst = max(worst, resid)
            if resid > tol:
                raise NumericError(f"exactness residual {resid} at degree {j}")
    return QuadratureRule(
        n=n,
        ell=ker.ell,
        s=ker.s,
        k=k,
        nodes=tuple(nodes),
        weights=tuple(weights),
        exactness_degree=2 * k,
        max_exactness_residual=worst,
    )


@dataclass(frozen=True)
class BoundReport:
    n: int
    ell: object
    s: object
    k: int
    value: object
    value_from_f0: object
    rho: tuple
    nodes: tuple
    pd_certificate: tuple
    checks: dict
    polynomial: LevPolynomial
    quadrature: QuadratureRule

    def as_dict(self):
        from .serialize import number, trunc3

        return {
            "n": self.n,
            "ell": number(self.ell),
            "s": number(self.s),
            "k": self.k,
            "value": number(self.value),
            "value_trunc3": trunc3(self.value),
            "value_from_f0": number(self.value_from_f0),
            "rho": [number(w) for w in self.rho],
            "nodes": [number(x) for x in self.nodes],
            "gegenbauer_coeffs": [number(c) for c in self.pd_certificate],
            "checks": dict(self.checks),
        }


def bound_L2k(n, ell, s, k, krein="weak") -> BoundReport:
    """Upper bound on the cardinality of codes with inner products in [ell, s].

    The value is 1/rho_{k+1}; the alternate route (1-ell)(1-s)/f_0 must agree
    to 1e-10 relative.  `krein` selects which product-positivity hypothesis is
    verified and recorded in the checks ("weak" covers the pairs that the
    positive definiteness of f actually needs, "full" the complete condition,
    "none" skips the check); a failed check is recorded, not enforced.
    """
    if krein not in ("none", "weak", "full"):
        raise ArgumentError(f"krein must be none, weak or full, got {krein!r}")
    lev = build_f2k(n, ell, s, k)
    quad = build_quadrature(n, ell, s, k, kernel=lev.kernel)
    with working():
        value = 1 / quad.weights[-1]
        value_f0 = lev.f_at_1 / lev.f0
        if abs(value - value_f0) > mp.mpf("1e-10") * abs(value):
            raise InvariantViolation(
                f"bound routes disagree: 1/rho = {value}, f(1)/f0 = {value_f0}"
            )
        pd = is_positive_definite(lev.coeffs, n)
    checks = {
        "admissible": True,
        "s_in_window": True,
        "ratio_condition": True,
        "weights_positive": True,
        "f0_routes_agree": True,
        "bound_routes_agree": True,
        "f2k_positive_definite": bool(pd),
        "interlacing_regime": lev.kernel.family.in_interlacing_regime,
    }
    if krein != "none":
        from .krein import lsk_check

        rep = lsk_check(n, ell, k, mode=krein)
        checks[f"krein_{krein}"] = bool(rep.overall)
    return BoundReport(
        n=n,
        ell=lev.ell,
        s=lev.s,
        k=k,
        value=value,
        value_from_f0=value_f0,
        rho=quad.weights,
        nodes=quad.nodes,
        pd_certificate=lev.gegenbauer.coeffs,
        checks=checks,
        polynomial=lev,
        quadrature=quad,
    )


def reassemble_f2k(lev: LevPolynomial):
    """Rebuild f as c (t-ell)(P_k^{1,ell} + c1 P_{k-1}^{1,ell}) K_{k-1}(t, s).

    This is the factorization that exhibits f as a positive combination of
    products (t-ell) P_i^{1,ell} P_j^{1,ell} with i in {k-1, k}, j <= k-1;
    the returned coefficients must match `lev.coeffs`.
    """
    ker = lev.kernel
    fam = ker.family
    k, ell, s = lev.k, lev.ell, lev.s
    with working():
        R = (mp.mpf(0),)
        for j in range(k):
            R = _poly.add(R, _poly.scale(fam.polys[j], fam.r[j] * fam.eval(j, s)))
        c = (1 - s) / ((1 + ker.c1) * _poly.evaluate(R, mp.mpf(1)))
        mix = _poly.add(fam.polys[k], _poly.scale(fam.polys[k - 1], ker.c1))
        return _poly.scale(_poly.mul(_poly.mul(_poly.linear(ell), mix), R), c)


# ---------------------------------------------------------------------------
# degree-4 closed form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class U4Report:
    n: int
    ell: object
    s: object
    value: object
    alpha: object
    constraints: dict

    def as_dict(self):
        from .serialize import number, trunc3

        return {
            "n": self.n,
            "ell": number(self.ell),
            "s": number(self.s),
            "value": number(self.value),
            "value_trunc3": trunc3(self.value),
            "alpha": number(self.alpha),
            "constraints": dict(self.constraints),
        }


def bound_u4(n, ell, s) -> U4Report:
    """Closed-form degree-4 bound with its three side-condition flags.

    The side conditions are evaluated at the interior node alpha and reported
    as flags; they are never silently enforced.  Vanishing denominators (of
    alpha or of the bound itself) raise a degenerate-configuration error.
    """
    ell, s = mpf(ell), mpf(s)
    with working():
        # vanishing is decided to working precision against the term scale,
        # so rational configurations that are not binary-exact still flag
        tiny = mp.mpf(10) ** (-(get_working_dps() - 6))
        alpha_den = (n + 2) * (n * ell * s + ell + s + 1)
        alpha_scale = (n + 2) * (abs(n * ell * s) + abs(ell) + abs(s) + 1)
        if abs(alpha_den) <= tiny * alpha_scale:
            raise DegenerateConfigurationError(
                f"interior node denominator vanishes at n={n}, ell={ell}, s={s}"
            )
        alpha = -(3 + (n + 2) * (ell * s + ell + s)) / alpha_den
        den = (n + 2) * (n * ell**2 * s**2 - (ell - s) ** 2) - 6 * ell * s + 3
        den_scale = (n + 2) * (n * ell**2 * s**2 + (abs(ell) + abs(s)) ** 2) + 6 * abs(ell * s) + 3
        if abs(den) <= tiny * den_scale:
            raise DegenerateConfigurationError(
                f"bound denominator vanishes at n={n}, ell={ell}, s={s}"
            )
        num = n * (1 - ell) * (1 - s) * (
            3 + (n + 2) * (n * ell * s + ell * s + 2 * ell + 2 * s + 1)
        )
        value = num / den
        constraints = {
            "node_sum": bool(ell + s + 2 * alpha <= 0),
            "node_spread": bool(
                alpha**2 + 2 * (ell + s) * alpha + ell * s + mp.mpf(6) / (n + 4) >= 0
            ),
            "node_balance": bool(
                (ell + s) * alpha**2
                + 2 * alpha * (ell * s + mp.mpf(3) / (n + 2))
                + 3 * (ell + s) / (n + 2)
                <= 0
            ),
        }
    return U4Report(n=n, ell=ell, s=s, value=value, alpha=alpha, constraints=constraints)


# ---------------------------------------------------------------------------
# classical odd-degree comparison bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OddBound:
    n: int
    s: object
    k: int
    value: object
    nodes: tuple
    weights: tuple

    @property
    def degree(self):
        return 2 * self.k - 1


def classical_odd_bound(n, s, k) -> OddBound:
    """Degree-(2k-1) bound from f = (t - s) K^2, K the (1,0)-kernel at s.

    Validity is decided by positivity of the weights of the end-point rule on
    (kernel zeros, s, 1); outside the valid range a RangeError is raised.
    k = 1 reproduces (1-s)/(-s).
    """
    if k < 1:
        raise ArgumentError("k must be >= 1")
    s = mpf(s)
    tab = _table(n, "adjacent10")
    tab.ensure_degree(k)
    tab.ensure_zeros(max(1, k - 1))
    with working():
        K = (mp.mpf(0),)
        for j in range(k):
            K = _poly.add(
                K,
                _poly.scale(
                    tab.polys[j], adjacent10_norm(n, j) * _poly.evaluate(tab.polys[j], s)
                ),
            )
        kzeros = []
        if k >= 2:
            guides = [z for z, _, _ in tab.zeros[k - 1]]
            lo = guides[0] - mp.mpf(1) / 2
            vlo = _poly.evaluate(K, lo)
            vg = _poly.evaluate(K, guides[0])
            attempts = 0
            while vlo * vg > 0 and attempts < 12:
                lo -= mp.mpf(1) / 2
                vlo = _poly.evaluate(K, lo)
                attempts += 1
            if vlo * vg > 0:
                raise NumericError("failed to bracket the smallest kernel zero")
            kzeros.append(poly_root(K, lo, guides[0]))
            for i in range(k - 2):
                kzeros.append(poly_root(K, guides[i], guides[i + 1]))
        nodes = kzeros + [s, mp.mpf(1)]
        weights = lagrange_mu_weights(n, nodes)
        bad = [i for i, w in enumerate(weights) if w <= 0]
        if bad:
            raise RangeError(
                f"s={s} outside the validity range of the degree-{2 * k - 1} bound"
                f" (weight {bad[0]} nonpositive)",
                window=None,
            )
        value = 1 / weights[-1]
        f = _poly.mul(_poly.linear(s), _poly.mul(K, K))
        f0 = mu_integral(n, f)
        alt = _poly.evaluate(f, mp.mpf(1)) / f0
        if abs(alt - value) > mp.mpf("1e-10") * abs(value):
            raise InvariantViolation(
                f"odd bound routes disagree: 1/rho = {value}, f(1)/f0 = {alt}"
            )
    return OddBound(n=n, s=s, k=k, value=value, nodes=tuple(nodes), weights=tuple(weights))


# ---------------------------------------------------------------------------
# comparison curves and regime crossovers
# ---------------------------------------------------------------------------

def bound_curves(n, ell, s_values, new_ks=(1, 2, 3, 4), odd_ks=(1, 2, 3, 4), krein="none"):
    """Rows of bound values over an s grid; None where hypotheses fail.

    Each row maps "s", then "L{2u-1}" for the classical odd bounds and
    "L{2k}" for the subinterval bounds at the given ell.
    """
    windows = {}
    for k in new_ks:
        try:
            windows[k] = s_window(n, ell, k)
        except Exception:
            windows[k] = None
    rows = []
    for s in s_values:
        s = mpf(s)
        row = {"s": s}
        for u in odd_ks:
            try:
                row[f"L{2 * u - 1}"] = classical_odd_bound(n, s, u).value
            except (RangeError, NumericError):
                row[f"L{2 * u - 1}"] = None
        for k in new_ks:
            win = windows[k]
            val = None
            if win is not None and win[0] <= s <= win[1]:
                try:
                    val = bound_L2k(n, ell, s, k, krein=krein).value
                except Exception:
                    val = None
            row[f"L{2 * k}"] = val
        rows.append(row)
    return rows


@dataclass(frozen=True)
class Crossover:
    """Where the degree-2k subinterval bound hands over to the next odd bound."""

    n: int
    ell: object
    k: int
    s_cross: object
    left_value: object
    right_value: object
    gap: object


def regime_crossover(n, ell, k) -> Crossover:
    """The handover point is the top of the degree-k window, where the
    subinterval bound meets the classical degree-(2k+1) curve; both are
    evaluated just inside and their gap is reported as a certificate."""
    lo, hi = s_window(n, ell, k)
    with working():
        eps = (hi - lo) * mp.mpf("1e-9")
        left = bound_L2k(n, ell, hi - eps, k, krein="none").value
        right = classical_odd_bound(n, hi - eps, k + 1).value
        return Crossover(
            n=n,
            ell=mpf(ell),
            k=k,
            s_cross=hi,
            left_value=left,
            right_value=right,
            gap=abs(left - right),
        )
