"""Orthogonal polynomials on [-1, 1] for the sphere measure and its (1,0) companion.

The base measure is the probability measure

    dmu(t) = gamma_n (1 - t^2)^((n-3)/2) dt,   gamma_n = Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2)),

whose orthogonal polynomials are the Gegenbauer polynomials P_k^{(n)},
normalized here so that P_k(1) = 1.  Positive-definite functions on the unit
sphere in R^n are exactly those with nonnegative expansion coefficients in
this basis, which makes the expansion the currency of every certificate in
this package.

The companion family P_k^{1,0} (Jacobi parameters ((n-1)/2, (n-3)/2),
normalized at 1) is orthogonal for dchi(t) = (1-t) dmu(t); its zeros supply
the nodes of the two baseline quadratures used throughout:

* ``gauss_rule``       -- Gegenbauer zeros, exact to degree 2k-1,
* ``radau_right_rule`` -- P_k^{1,0} zeros plus the fixed node 1, exact to 2k.

Both integrate against dmu and have positive weights.
"""

from dataclasses import dataclass
from math import comb

import mpmath as mp

from . import _poly
from ._roots import poly_root
from .errors import ArgumentError, NumericError
from .precision import get_working_dps, mpf, working

__all__ = [
    "mu_normalization",
    "mu_moments",
    "mu_integral",
    "gegenbauer_eval",
    "GegenbauerExpansion",
    "expand_gegenbauer",
    "gegenbauer_to_power",
    "is_positive_definite",
    "PDResult",
    "OrthoFamily",
    "gegenbauer_family",
    "adjacent10_family",
    "adjacent10_norm",
    "BaseQuadrature",
    "gauss_rule",
    "radau_right_rule",
    "lagrange_mu_weights",
]


def _check_dimension(n):
    if not isinstance(n, int) or n < 3:
        raise ArgumentError(f"dimension must be an integer >= 3, got {n!r}")


def mu_normalization(n):
    """Constant making (1-t^2)^((n-3)/2) dt a probability measure."""
    _check_dimension(n)
    with working():
        return mp.gamma(mp.mpf(n) / 2) / (mp.sqrt(mp.pi) * mp.gamma(mp.mpf(n - 1) / 2))


def mu_moments(n, jmax):
    """Moments m_j = int t^j dmu for j = 0..jmax.

    Closed recurrence m_0 = 1, m_1 = 0, m_j = m_{j-2} (j-1)/(n+j-2); odd
    moments vanish by symmetry.
    """
    _check_dimension(n)
    if jmax < 0:
        raise ArgumentError("jmax must be >= 0")
    with working():
        m = [mp.mpf(1), mp.mpf(0)]
        for j in range(2, jmax + 1):
            m.append(m[j - 2] * (j - 1) / (n + j - 2))
    return tuple(m[: jmax + 1])


def mu_integral(n, coeffs):
    """Integral of a power-basis polynomial against dmu."""
    moms = mu_moments(n, len(coeffs) - 1)
    with working():
        return mp.fsum(c * moms[j] for j, c in enumerate(coeffs) if c)


# ---------------------------------------------------------------------------
# recurrence data
# ---------------------------------------------------------------------------

def _gegenbauer_bc(n, k):
    # t P_k = b_k P_{k+1} + c_k P_{k-1} for the normalized-at-1 family
    lam = mp.mpf(n - 2) / 2
    return (k + 2 * lam) / (2 * (k + lam)), mp.mpf(k) / (2 * (k + lam))


def _jacobi_normalized_abc(a, b, k):
    """(a_k, b_k, c_k) with (t - a_k) R_k = b_k R_{k+1} + c_k R_{k-1} for
    Jacobi parameters (a, b) renormalized so that R_k(1) = 1."""
    ab = a + b
    if k == 0:
        A = 2 / (ab + 2)
        B = (b - a) / (ab + 2)
        C = mp.mpf(0)
    else:
        A = 2 * (k + 1) * (k + ab + 1) / ((2 * k + ab + 1) * (2 * k + ab + 2))
        B = (b * b - a * a) / ((2 * k + ab) * (2 * k + ab + 2))
        C = 2 * (k + a) * (k + b) / ((2 * k + ab) * (2 * k + ab + 1))
    bk = A * (k + 1 + a) / (k + 1)
    ck = C * k / (k + a) if k else mp.mpf(0)
    return B, bk, ck


def gegenbauer_eval(n, k, t):
    """P_k^{(n)}(t) by three-term recurrence, normalized with P_k(1) = 1."""
    _check_dimension(n)
    if not isinstance(k, int) or k < 0:
        raise ArgumentError(f"degree must be an integer >= 0, got {k!r}")
    t = mpf(t)
    with working():
        if k == 0:
            return mp.mpf(1)
        prev, cur = mp.mpf(1), t
        for j in range(1, k):
            bj, cj = _gegenbauer_bc(n, j)
            prev, cur = cur, (t * cur - cj * prev) / bj
        return cur


# ---------------------------------------------------------------------------
# cached family tables (power-basis coefficients, recurrence, zeros)
# ---------------------------------------------------------------------------

class _FamilyTable:
    """Lazily grown table for one three-term-recurrence family, fixed n.

    Kinds: "gegenbauer" (Jacobi a = b = (n-3)/2, measure dmu),
    "adjacent10" (a = (n-1)/2, b = (n-3)/2, measure (1-t) dmu),
    "adjacent11" (a = b = (n-1)/2, measure (1-t^2) dmu); all normalized at 1.
    """

    _JACOBI = {
        "gegenbauer": lambda n: ((n - 3) / mp.mpf(2), (n - 3) / mp.mpf(2)),
        "adjacent10": lambda n: ((n - 1) / mp.mpf(2), (n - 3) / mp.mpf(2)),
        "adjacent11": lambda n: ((n - 1) / mp.mpf(2), (n - 1) / mp.mpf(2)),
    }

    def __init__(self, n, kind):
        if kind not in self._JACOBI:
            raise ArgumentError(f"unknown family kind {kind!r}")
        self.n = n
        self.kind = kind
        with working():
            a, b = self._JACOBI[kind](n)
            self._abc = lambda k: _jacobi_normalized_abc(a, b, k)
            a0, b0, _ = self._abc(0)
            p1 = (-a0 / b0, 1 / b0)
            # total mass of the family's measure (dmu itself is probability)
            self.mass = mu_integral(n, (mp.mpf(1), mp.mpf(-1))) if kind == "adjacent10" \
                else mu_integral(n, (mp.mpf(1), mp.mpf(0), mp.mpf(-1))) if kind == "adjacent11" \
                else mp.mpf(1)
            self.polys = [(mp.mpf(1),), p1]
            self.rec = [(a0, b0, mp.mpf(0))]
            self.norms = [1 / self.mass]
            self.zeros = [(), ((-p1[0] / p1[1], mp.mpf(-1), mp.mpf(1)),)]

    def ensure_degree(self, kmax):
        with working():
            while len(self.rec) <= kmax:
                self.rec.append(self._abc(len(self.rec)))
            while len(self.polys) <= kmax:
                k = len(self.polys) - 1
                ak, bk, ck = self.rec[k]
                pk, pk1 = self.polys[k], self.polys[k - 1]
                num = _poly.add(_poly.shift_up(pk), _poly.scale(pk, -ak))
                num = _poly.add(num, _poly.scale(pk1, -ck))
                self.polys.append(_poly.scale(num, 1 / bk))

    def ensure_norms(self, kmax):
        # 1 / int P_k^2 dmeasure via r_k = r_{k-1} b_{k-1} / c_k (probability measure)
        self.ensure_degree(kmax)
        with working():
            while len(self.norms) <= kmax:
                k = len(self.norms)
                _, bprev, _ = self.rec[k - 1]
                ck = self.rec[k][2]
                self.norms.append(self.norms[k - 1] * bprev / ck)

    def ensure_zeros(self, kmax):
        """Zeros of every degree <= kmax, bracketed by interlacing."""
        self.ensure_degree(kmax)
        with working():
            while len(self.zeros) <= kmax:
                d = len(self.zeros)
                p = self.polys[d]
                guides = [mp.mpf(-1)] + [z for z, _, _ in self.zeros[d - 1]] + [mp.mpf(1)]
                row = []
                for i in range(d):
                    lo, hi = guides[i], guides[i + 1]
                    row.append((poly_root(p, lo, hi), lo, hi))
                self.zeros.append(tuple(row))

    def zero_list(self, degree):
        self.ensure_zeros(degree)
        return [z for z, _, _ in self.zeros[degree]]


_tables: dict = {}


def _table(n, kind) -> _FamilyTable:
    _check_dimension(n)
    key = (n, kind, get_working_dps())
    tab = _tables.get(key)
    if tab is None:
        tab = _tables[key] = _FamilyTable(n, kind)
    return tab


def adjacent10_norm(n, i):
    """Closed form ((n+2i-1)/(n-1))^2 * binom(n+i-2, i) for 1/int (P_i^{1,0})^2 dchi."""
    with working():
        return (mp.mpf(n + 2 * i - 1) / (n - 1)) ** 2 * comb(n + i - 2, i)


# ---------------------------------------------------------------------------
# public family objects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrthoFamily:
    """Recurrence data for one orthogonal family, normalized to 1 at t = 1.

    (t - a[i]) P_i = b[i] P_{i+1} + c[i] P_{i-1}; r[i] is the reciprocal
    squared norm, eta[i] the leading coefficient, zeros[d] the sorted zeros of
    degree d together with the bracketing interval used to isolate each.
    """

    n: int
    kind: str
    params: tuple
    a: tuple
    b: tuple
    c: tuple
    r: tuple
    eta: tuple
    zeros: tuple
    polys: tuple

    def poly(self, k):
        return self.polys[k]

    def eval(self, k, t):
        with working():
            return _poly.evaluate(self.polys[k], mpf(t))

    def zero_values(self, degree):
        return [z for z, _, _ in self.zeros[degree]]

    def as_dict(self):
        from .serialize import number

        return {
            "n": self.n,
            "kind": self.kind,
            "params": [number(p) for p in self.params],
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


def _family_from_table(tab, kmax, kind, params=(), norms=None):
    tab.ensure_degree(kmax + 1)
    tab.ensure_norms(kmax)
    tab.ensure_zeros(kmax + 1)
    return OrthoFamily(
        n=tab.n,
        kind=kind,
        params=params,
        a=tuple(r[0] for r in tab.rec[: kmax + 1]),
        b=tuple(r[1] for r in tab.rec[: kmax + 1]),
        c=tuple(r[2] for r in tab.rec[: kmax + 1]),
        r=norms if norms is not None else tuple(tab.norms[: kmax + 1]),
        eta=tuple(p[-1] for p in tab.polys[: kmax + 2]),
        zeros=tuple(tab.zeros[: kmax + 2]),
        polys=tuple(tab.polys[: kmax + 2]),
    )


def gegenbauer_family(n, kmax):
    if kmax < 1:
        raise ArgumentError("kmax must be >= 1")
    return _family_from_table(_table(n, "gegenbauer"), kmax, "gegenbauer")


def adjacent10_family(n, kmax):
    """The (1,0)-companion family with norms from the closed form."""
    if kmax < 1:
        raise ArgumentError("kmax must be >= 1")
    tab = _table(n, "adjacent10")
    tab.ensure_norms(kmax)
    with working():
        closed = tuple(adjacent10_norm(n, i) for i in range(kmax + 1))
        for rr, rc in zip(tab.norms[: kmax + 1], closed):
            if abs(rr - rc) > mp.mpf("1e-25") * rc:
                raise NumericError("adjacent norm recurrence disagrees with closed form")
    return _family_from_table(tab, kmax, "adjacent10", norms=closed)


# ---------------------------------------------------------------------------
# basis expansion and positive definiteness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GegenbauerExpansion:
    """Coefficients (f_0, ..., f_m) of f = sum f_k P_k^{(n)}."""

    n: int
    coeffs: tuple

    @property
    def f0(self):
        return self.coeffs[0]

    def value_at_1(self):
        with working():
            return mp.fsum(self.coeffs)

    def evaluate(self, t):
        t = mpf(t)
        with working():
            return mp.fsum(
                c * gegenbauer_eval(self.n, k, t) for k, c in enumerate(self.coeffs) if c
            )

    def as_dict(self):
        from .serialize import number

        return {"n": self.n, "coeffs": [number(c) for c in self.coeffs]}


def expand_gegenbauer(coeffs, n) -> GegenbauerExpansion:
    """Exact change of basis from powers of t to the P_k^{(n)} basis.

    Horner recursion: feed the power coefficients from the top, multiplying
    the running expansion by t via t P_k = b_k P_{k+1} + c_k P_{k-1}.  No
    quadrature is involved, so there is no aliasing.
    """
    _check_dimension(n)
    coeffs = tuple(mpf(c) for c in coeffs)
    with working():
        g = [mp.mpf(0)]
        for a in reversed(coeffs):
            out = [mp.mpf(0)] * (len(g) + 1)
            for k, gk in enumerate(g):
                if gk:
                    bk, ck = _gegenbauer_bc(n, k)
                    out[k + 1] += bk * gk
                    if k:
                        out[k - 1] += ck * gk
            out[0] += a
            g = out
        return GegenbauerExpansion(n, _poly.trim(g))


def gegenbauer_to_power(expansion: GegenbauerExpansion):
    tab = _table(expansion.n, "gegenbauer")
    tab.ensure_degree(len(expansion.coeffs) - 1)
    with working():
        out = (mp.mpf(0),)
        for k, c in enumerate(expansion.coeffs):
            if c:
                out = _poly.add(out, _poly.scale(tab.polys[k], c))
    return _poly.trim(out)


@dataclass(frozen=True)
class PDResult:
    ok: bool
    strict: bool
    coeffs: tuple
    min_coeff: object
    threshold: object

    def __bool__(self):
        return self.ok


def is_positive_definite(coeffs, n, strict=False, tol=mp.mpf("1e-12")) -> PDResult:
    """Decide nonnegativity (strict: positivity) of all expansion coefficients.

    The threshold is relative: a coefficient passes the nonnegative test when
    it exceeds -tol * max|coeff|, and the strict test when it exceeds
    +tol * max|coeff|.  Coefficients that vanish to working precision are
    structural zeros (basis elements, parity) and do not fail the strict
    test; the product-positivity checks in `krein` use their own, stricter
    rule in which any nonpositive coefficient fails.
    """
    exp = expand_gegenbauer(coeffs, n)
    with working():
        mx = max(abs(c) for c in exp.coeffs)
        if mx == 0:
            return PDResult(not strict, strict, exp.coeffs, mp.mpf(0), mp.mpf(0))
        thr = mpf(tol) * mx
        mn = min(exp.coeffs)
        if strict:
            zero_tol = mp.mpf(10) ** (-(get_working_dps() - 5)) * mx
            ok = all(c > thr or abs(c) <= zero_tol for c in exp.coeffs)
        else:
            ok = mn >= -thr
    return PDResult(bool(ok), strict, exp.coeffs, mn, thr)


# ---------------------------------------------------------------------------
# baseline quadratures against dmu
# ---------------------------------------------------------------------------

def lagrange_mu_weights(n, nodes):
    """Weights int L_i dmu for the Lagrange basis on pairwise distinct nodes."""
    nodes = [mpf(x) for x in nodes]
    moms = mu_moments(n, len(nodes) - 1)
    with working():
        ws = []
        for i, xi in enumerate(nodes):
            num = (mp.mpf(1),)
            den = mp.mpf(1)
            for j, xj in enumerate(nodes):
                if j != i:
                    num = _poly.mul(num, _poly.linear(xj))
                    den *= xi - xj
            ws.append(mp.fsum(c * moms[d] for d, c in enumerate(num)) / den)
    return ws


@dataclass(frozen=True)
class BaseQuadrature:
    n: int
    nodes: tuple
    weights: tuple
    exactness_degree: int

    def integrate(self, f):
        with working():
            return mp.fsum(w * f(x) for x, w in zip(self.nodes, self.weights))

    def integrate_poly(self, coeffs):
        return self.integrate(lambda t: _poly.evaluate(coeffs, t))

    def as_dict(self):
        from .serialize import number

        return {
            "n": self.n,
            "nodes": [number(x) for x in self.nodes],
            "weights": [number(w) for w in self.weights],
            "exactness_degree": self.exactness_degree,
        }


def _verified_quadrature(n, nodes, exactness) -> BaseQuadrature:
    weights = lagrange_mu_weights(n, nodes)
    moms = mu_moments(n, exactness)
    with working():
        for i, w in enumerate(weights):
            if w <= 0:
                raise NumericError(f"nonpositive weight {w} at node index {i}")
        tol = mp.mpf(10) ** (-(get_working_dps() - 8))
        for j in range(exactness + 1):
            got = mp.fsum(w * x**j for x, w in zip(nodes, weights))
            if abs(got - moms[j]) > tol * max(1, abs(moms[j])):
                raise NumericError(f"exactness failure at monomial degree {j}")
    return BaseQuadrature(n, tuple(nodes), tuple(weights), exactness)


def gauss_rule(n, k) -> BaseQuadrature:
    """k-node rule on the Gegenbauer zeros, exact for degrees <= 2k-1."""
    if k < 1:
        raise ArgumentError("k must be >= 1")
    tab = _table(n, "gegenbauer")
    return _verified_quadrature(n, tab.zero_list(k), 2 * k - 1)


def radau_right_rule(n, k) -> BaseQuadrature:
    """(k+1)-node rule on the P_k^{1,0} zeros plus t = 1, exact for degrees <= 2k."""
    if k < 1:
        raise ArgumentError("k must be >= 1")
    tab = _table(n, "adjacent10")
    return _verified_quadrature(n, tab.zero_list(k) + [mp.mpf(1)], 2 * k)
