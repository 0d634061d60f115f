"""Lower bounds on pair-potential energy of M-point codes avoiding a polar cap.

For an absolutely monotone potential h (all derivatives nonnegative on
[-1, 1)), the feasible polynomial is the Hermite interpolant g of h at the
zeros of (t - s) f(t), counted with multiplicity: simple at ell, double at
each interior node beta_i and at s.  Exactness of the node quadrature on g
turns the linear-programming bound into a pure node sum:

    E(n, M, ell; h) >= M (M g_0 - g(1)) = M^2 sum_{i<=k} rho_i h(beta_i),

where M is tied to the configuration by f(1) = M f_0, i.e. rho_{k+1} M = 1.
``solve_s_for_M`` inverts that relation: it walks the degree up, brackets M
inside the achievable range of each degree window, and picks the largest
degree whose solution keeps f strictly positive definite.  Both sides of the
displayed identity are always computed and compared; feasibility of g
(positive definiteness, g <= h sampled) is verified and attached to the
report rather than assumed.
"""

from dataclasses import dataclass

import mpmath as mp

from . import _poly
from .errors import (
    ArgumentError,
    HypothesisViolation,
    InvariantViolation,
    MOutOfRangeError,
    NumericError,
    PotentialDomainError,
)
from .levenshtein import BoundReport, bound_L2k, build_f2k
from .orthopoly import GegenbauerExpansion, expand_gegenbauer, is_positive_definite
from .precision import get_working_dps, mpf, working
from .signed import admissible, max_k_for_ell, s_window

__all__ = [
    "Potential",
    "riesz",
    "newton",
    "gaussian",
    "log_potential",
    "custom_potential",
    "potential_from_file",
    "parse_potential",
    "HermiteInterpolant",
    "hermite_interpolate",
    "SolveResult",
    "solve_s_for_M",
    "GVerification",
    "verify_g_in_G",
    "EnergyReport",
    "energy_lower_bound",
]

_FD_STEP = mp.mpf("1e-6")


@dataclass(frozen=True)
class Potential:
    """Interaction h(t) in the inner-product variable, with its derivative.

    h and h' must be finite on [-1, 1); potentials singular at t = 1 (Riesz,
    Newton, logarithmic) refuse evaluation there.  When no derivative is
    supplied, h' falls back to central differences (flagged, step 1e-6).
    """

    name: str
    params: tuple
    h: object
    hprime: object
    hprime_is_approx: bool = False
    singular_at_1: bool = False

    def _check_domain(self, t):
        if t < -1 or t > 1 or (self.singular_at_1 and t >= 1):
            hi = "1)" if self.singular_at_1 else "1]"
            raise PotentialDomainError(f"{self.name}: t={t} outside [-1, {hi}")

    def eval(self, t):
        t = mpf(t)
        self._check_domain(t)
        with working():
            return self.h(t)

    def deriv(self, t):
        t = mpf(t)
        self._check_domain(t)
        with working():
            return self.hprime(t)

    def spec_string(self):
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(str(p) for p in self.params)


def riesz(sigma) -> Potential:
    """h(t) = (2 - 2t)^(-sigma/2), i.e. inverse distance to the power sigma."""
    sigma = mpf(sigma)
    if sigma <= 0:
        raise ArgumentError("riesz exponent must be positive")
    return Potential(
        name="riesz",
        params=(sigma,),
        h=lambda t: (2 - 2 * t) ** (-sigma / 2),
        hprime=lambda t: sigma * (2 - 2 * t) ** (-sigma / 2 - 1),
        singular_at_1=True,
    )


def newton(n) -> Potential:
    """Harmonic kernel in dimension n: Riesz exponent n - 2."""
    p = riesz(n - 2)
    return Potential(
        name="newton",
        params=(mpf(n - 2),),
        h=p.h,
        hprime=p.hprime,
        singular_at_1=True,
    )


def gaussian(c) -> Potential:
    """h(t) = exp(-2c(1 - t)), the Gaussian kernel exp(-c |x-y|^2)."""
    c = mpf(c)
    if c <= 0:
        raise ArgumentError("gaussian width must be positive")
    return Potential(
        name="gaussian",
        params=(c,),
        h=lambda t: mp.e ** (-2 * c * (1 - t)),
        hprime=lambda t: 2 * c * mp.e ** (-2 * c * (1 - t)),
    )


def log_potential() -> Potential:
    """h(t) = log(2/|x-y|) = log(4/(2-2t))/2.

    The additive normalization puts h(-1) = 0, so h is nonnegative on the
    whole range with all derivatives positive (the bare log(1/|x-y|) dips
    negative and is not absolutely monotone as a [0, inf]-valued potential;
    the shift changes any energy by the constant M(M-1) log 2).
    """
    return Potential(
        name="log",
        params=(),
        h=lambda t: (mp.log(4) - mp.log(2 - 2 * t)) / 2,
        hprime=lambda t: 1 / (2 * (1 - t)),
        singular_at_1=True,
    )


def custom_potential(h, hprime=None, name="custom", params=(), singular_at_1=False) -> Potential:
    if hprime is None:
        def hprime(t, _h=h):
            return (_h(t + _FD_STEP) - _h(t - _FD_STEP)) / (2 * _FD_STEP)

        approx = True
    else:
        approx = False
    return Potential(
        name=name,
        params=tuple(params),
        h=h,
        hprime=hprime,
        hprime_is_approx=approx,
        singular_at_1=singular_at_1,
    )


def potential_from_file(path) -> Potential:
    """Tabulated potential: rows "t h [h']", whitespace or comma separated.

    Values are interpolated by a piecewise cubic that matches the tabulated
    derivatives when the third column is present; otherwise slopes come from
    centered differences of the table and the derivative is flagged as
    approximate.
    """
    ts, hs, dhs = [], [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.replace(",", " ").split()
            ts.append(mpf(parts[0]))
            hs.append(mpf(parts[1]))
            if len(parts) > 2:
                dhs.append(mpf(parts[2]))
    if len(ts) < 2:
        raise ArgumentError(f"table {path} needs at least two rows")
    if sorted(ts) != ts:
        raise ArgumentError(f"table {path} must be sorted by t")
    has_deriv = len(dhs) == len(ts)
    if not has_deriv:
        dhs = []
        for i in range(len(ts)):
            if i == 0:
                dhs.append((hs[1] - hs[0]) / (ts[1] - ts[0]))
            elif i == len(ts) - 1:
                dhs.append((hs[-1] - hs[-2]) / (ts[-1] - ts[-2]))
            else:
                dhs.append((hs[i + 1] - hs[i - 1]) / (ts[i + 1] - ts[i - 1]))

    def segment(t):
        if t < ts[0] or t > ts[-1]:
            raise PotentialDomainError(f"t={t} outside table range [{ts[0]}, {ts[-1]}]")
        i = 0
        while i < len(ts) - 2 and t > ts[i + 1]:
            i += 1
        return i

    def h(t):
        i = segment(t)
        w = ts[i + 1] - ts[i]
        u = (t - ts[i]) / w
        h00 = (1 + 2 * u) * (1 - u) ** 2
        h10 = u * (1 - u) ** 2
        h01 = u * u * (3 - 2 * u)
        h11 = u * u * (u - 1)
        return h00 * hs[i] + h10 * w * dhs[i] + h01 * hs[i + 1] + h11 * w * dhs[i + 1]

    def hprime(t):
        i = segment(t)
        w = ts[i + 1] - ts[i]
        u = (t - ts[i]) / w
        d00 = 6 * u * (u - 1) / w
        d10 = (1 - u) * (1 - 3 * u)
        d01 = -d00
        d11 = u * (3 * u - 2)
        return d00 * hs[i] + d10 * dhs[i] + d01 * hs[i + 1] + d11 * dhs[i + 1]

    return Potential(
        name="file",
        params=(str(path),),
        h=h,
        hprime=hprime,
        hprime_is_approx=not has_deriv,
    )


def parse_potential(text, n=None) -> Potential:
    """Mini-grammar: riesz:<sigma>, gaussian:<c>, log, newton, file:<path>."""
    head, _, arg = text.partition(":")
    head = head.strip().lower()
    if head == "riesz":
        if not arg:
            raise ArgumentError("riesz needs an exponent, e.g. riesz:1")
        return riesz(arg)
    if head == "gaussian":
        if not arg:
            raise ArgumentError("gaussian needs a width, e.g. gaussian:0.5")
        return gaussian(arg)
    if head == "log":
        return log_potential()
    if head == "newton":
        if n is None:
            raise ArgumentError("newton potential needs the dimension")
        return newton(n)
    if head == "file":
        if not arg:
            raise ArgumentError("file potential needs a path, e.g. file:table.dat")
        return potential_from_file(arg)
    raise ArgumentError(f"unknown potential spec {text!r}")


# ---------------------------------------------------------------------------
# Hermite interpolation (Newton form, confluent divided differences)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HermiteInterpolant:
    """Interpolant matching h (and h' at double nodes), with its certificate."""

    nodes: tuple  # (x, multiplicity)
    newton_coeffs: tuple
    coeffs: tuple
    n: int | None
    gegenbauer: GegenbauerExpansion | None
    g_at_1: object
    residual_max: object

    @property
    def g0(self):
        return self.gegenbauer.coeffs[0] if self.gegenbauer else None

    def eval(self, t):
        with working():
            return _poly.evaluate(self.coeffs, mpf(t))

    def eval_deriv(self, t):
        with working():
            return _poly.evaluate(_poly.derivative(self.coeffs), mpf(t))

    def as_dict(self):
        from .serialize import number

        return {
            "nodes": [[number(x), m] for x, m in self.nodes],
            "coeffs": [number(c) for c in self.coeffs],
            "gegenbauer_coeffs": [number(c) for c in self.gegenbauer.coeffs]
            if self.gegenbauer
            else None,
            "g_at_1": number(self.g_at_1),
            "residual_max": number(self.residual_max),
        }


def hermite_interpolate(nodes, potential: Potential, n=None) -> HermiteInterpolant:
    """Newton-form interpolant of the potential at nodes with multiplicities.

    Multiplicity 2 consumes h'; higher multiplicities are not supported (the
    constructions here never need them).  Every interpolation condition is
    re-verified; residuals above 1e-10 * max(1, |h(node)|) abort.
    """
    nodes = tuple((mpf(x), int(m)) for x, m in nodes)
    seen = set()
    for x, m in nodes:
        if m not in (1, 2):
            raise ArgumentError(f"multiplicity {m} not supported at node {x}")
        if x in seen:
            raise ArgumentError(f"repeated node {x}")
        seen.add(x)
    with working():
        xs = []
        for x, m in nodes:
            xs.extend([x] * m)
        hvals = {x: potential.eval(x) for x, _ in nodes}
        dvals = {x: potential.deriv(x) for x, m in nodes if m == 2}
        N = len(xs)
        col = [hvals[x] for x in xs]
        table = [col]
        for c in range(1, N):
            prev = table[-1]
            cur = []
            for i in range(N - c):
                if xs[i + c] == xs[i]:
                    cur.append(dvals[xs[i]])
                else:
                    cur.append((prev[i + 1] - prev[i]) / (xs[i + c] - xs[i]))
            table.append(cur)
        newton_coeffs = tuple(table[c][0] for c in range(N))
        coeffs = (mp.mpf(0),)
        basis = (mp.mpf(1),)
        for c in range(N):
            coeffs = _poly.add(coeffs, _poly.scale(basis, newton_coeffs[c]))
            basis = _poly.mul(basis, _poly.linear(xs[c]))
        # verify the interpolation conditions
        dcoeffs = _poly.derivative(coeffs)
        worst = mp.mpf(0)
        for x, m in nodes:
            scale = max(mp.mpf(1), abs(hvals[x]))
            worst = max(worst, abs(_poly.evaluate(coeffs, x) - hvals[x]) / scale)
            if m == 2:
                worst = max(worst, abs(_poly.evaluate(dcoeffs, x) - dvals[x]) / scale)
        if worst > mp.mpf("1e-10"):
            raise NumericError(f"interpolation residual {worst}")
        geg = expand_gegenbauer(coeffs, n) if n is not None else None
        g1 = _poly.evaluate(coeffs, mp.mpf(1))
    return HermiteInterpolant(
        nodes=nodes,
        newton_coeffs=newton_coeffs,
        coeffs=coeffs,
        n=n,
        gegenbauer=geg,
        g_at_1=g1,
        residual_max=worst,
    )


# ---------------------------------------------------------------------------
# inverting f(1) = M f_0
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolveResult:
    n: int
    ell: object
    M: object
    k: int
    s: object
    at_window_bottom: bool
    at_window_top: bool
    pd_strict: bool
    ranges: tuple  # (k, L_low, L_high) per degree tried

    def as_dict(self):
        from .serialize import number

        return {
            "k": self.k,
            "s": number(self.s),
            "at_window_bottom": self.at_window_bottom,
            "at_window_top": self.at_window_top,
            "pd_strict": self.pd_strict,
            "ranges": [[k, number(a), number(b)] for k, a, b in self.ranges],
        }


def _bound_value_f0(n, ell, s, k):
    """Bound value along the f-route; +inf on the branch where f_0 <= 0
    (reachable when the product-positivity condition fails at this ell)."""
    lev = build_f2k(n, ell, s, k)
    if lev.f0 <= 0:
        return mp.inf, lev
    return lev.f_at_1 / lev.f0, lev


def solve_s_for_M(n, ell, M, cap=40, tol=mp.mpf("1e-10")) -> SolveResult:
    """Find (k, s) with the degree-2k bound equal to M at the right endpoint s.

    Walks k upward through the admissible degrees.  Within each degree the
    bound spans a closed range over the s window; once M falls inside, s is
    bisected to |bound - M| <= tol * max(1, M).  Among the degrees that admit
    a solution the largest one with strictly positive definite f is chosen.
    Degrees whose windows start above M terminate the walk; if no degree
    admits a solution the achievable ranges are reported in the error.
    """
    ell = mpf(ell)
    M = mpf(M)
    kcap = max_k_for_ell(n, ell, cap=cap).k
    if kcap == 0:
        raise MOutOfRangeError(
            f"no admissible degree at ell={ell} for n={n}", ranges=[]
        )
    with working():
        slack = tol * max(mp.mpf(1), M)
        ranges = []
        candidates = []
        for k in range(1, kcap + 1):
            if not admissible(n, ell, k):
                break
            lo, hi = s_window(n, ell, k)
            Llo, _ = _bound_value_f0(n, ell, lo, k)
            Lhi, _ = _bound_value_f0(n, ell, hi, k)
            ranges.append((k, Llo, Lhi))
            if M < Llo - slack:
                break
            if M > Lhi + slack:
                continue
            # bisect on s; the bound increases over the window
            if abs(Llo - M) <= slack:
                s_sol = lo
            elif abs(Lhi - M) <= slack:
                s_sol = hi
            else:
                a, b = lo, hi
                fa = Llo - M
                for _ in range(get_working_dps() * 4):
                    mid = (a + b) / 2
                    fm = _bound_value_f0(n, ell, mid, k)[0] - M
                    if abs(fm) <= slack:
                        break
                    if mp.sign(fm) == mp.sign(fa):
                        a, fa = mid, fm
                    else:
                        b = mid
                else:
                    raise NumericError(f"bisection on s did not converge at degree {k}")
                s_sol = mid
            _, lev = _bound_value_f0(n, ell, s_sol, k)
            pd = is_positive_definite(lev.coeffs, n, strict=True)
            candidates.append((k, s_sol, bool(pd), lo, hi))
        chosen = None
        for cand in candidates:
            if cand[2]:
                chosen = cand
        if chosen is None and candidates:
            chosen = candidates[-1]
        if chosen is None:
            raise MOutOfRangeError(
                f"M={M} is not achievable at any degree for n={n}, ell={ell};"
                f" achievable ranges: "
                + ", ".join(f"k={k}: [{float(a):.6g}, {float(b):.6g}]" for k, a, b in ranges),
                ranges=ranges,
            )
        k, s_sol, pd_ok, lo, hi = chosen
        at_bottom = bool(abs(s_sol - lo) <= mp.mpf("1e-12"))
        at_top = bool(abs(s_sol - hi) <= mp.mpf("1e-12"))
    return SolveResult(
        n=n,
        ell=ell,
        M=M,
        k=k,
        s=s_sol,
        at_window_bottom=at_bottom,
        at_window_top=at_top,
        pd_strict=pd_ok,
        ranges=tuple(ranges),
    )


# ---------------------------------------------------------------------------
# feasibility verification and the bound itself
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GVerification:
    ok: bool
    findings: tuple
    g0: object
    g0_positive: bool
    pd_ok: bool
    pd_min_coeff: object
    g_le_h_ok: bool
    worst_gap: object
    worst_gap_at: object
    g0_quadrature_gap: object | None
    grid_size: int

    def as_dict(self):
        from .serialize import number

        return {
            "ok": self.ok,
            "findings": list(self.findings),
            "g0": number(self.g0),
            "g0_positive": self.g0_positive,
            "pd_ok": self.pd_ok,
            "pd_min_coeff": number(self.pd_min_coeff),
            "g_le_h_ok": self.g_le_h_ok,
            "worst_gap": number(self.worst_gap),
            "worst_gap_at": number(self.worst_gap_at),
            "g0_quadrature_gap": number(self.g0_quadrature_gap)
            if self.g0_quadrature_gap is not None
            else None,
            "grid_sampled": self.grid_size,
        }


def verify_g_in_G(interp: HermiteInterpolant, potential: Potential, ell,
                  grid_size=2048, quadrature=None) -> GVerification:
    """Sampled feasibility check: g <= h on [ell, 1), g_0 > 0, g pos. definite.

    The g <= h comparison runs on Chebyshev-distributed points of
    [ell, 1 - 1e-6] plus the midpoints between consecutive nodes; it is a
    sampled check, not a proof.  When the node quadrature is supplied, g_0 is
    also reconciled against the node sum (exactness holds since deg g <= 2k).
    """
    if interp.gegenbauer is None:
        raise ArgumentError("interpolant carries no expansion; pass n to hermite_interpolate")
    ell = mpf(ell)
    with working():
        findings = []
        g0 = interp.gegenbauer.coeffs[0]
        g0_pos = bool(g0 > 0)
        if not g0_pos:
            findings.append(f"g0 = {g0} is not positive")
        pd = is_positive_definite(interp.coeffs, interp.n)
        if not pd.ok:
            findings.append(f"g is not positive definite (min coeff {pd.min_coeff})")
        hi = 1 - mp.mpf("1e-6")
        mid, half = (ell + hi) / 2, (hi - ell) / 2
        points = [mid + half * mp.cos(mp.pi * j / (grid_size - 1)) for j in range(grid_size)]
        node_xs = [x for x, _ in interp.nodes]
        points += [(a + b) / 2 for a, b in zip(node_xs, node_xs[1:])]
        worst = mp.mpf("-inf")
        worst_at = ell
        for x in points:
            gap = interp.eval(x) - potential.eval(x)  # feasible means <= 0
            if gap > worst:
                worst, worst_at = gap, x
        href = abs(potential.eval(worst_at))
        g_le_h = bool(worst <= mp.mpf("1e-12") * max(mp.mpf(1), href))
        if not g_le_h:
            findings.append(
                f"g exceeds h by {worst} at t = {worst_at} (sampled)"
            )
        quad_gap = None
        if quadrature is not None:
            nodes, rho = quadrature.nodes, quadrature.weights
            node_sum = mp.fsum(
                w * interp.eval(x) for x, w in zip(nodes, rho)
            )
            quad_gap = abs(g0 - node_sum)
            if quad_gap > mp.mpf("1e-10") * max(mp.mpf(1), abs(g0)):
                findings.append(f"g0 vs quadrature mismatch {quad_gap}")
    return GVerification(
        ok=not findings,
        findings=tuple(findings),
        g0=g0,
        g0_positive=g0_pos,
        pd_ok=bool(pd.ok),
        pd_min_coeff=pd.min_coeff,
        g_le_h_ok=g_le_h,
        worst_gap=worst,
        worst_gap_at=worst_at,
        g0_quadrature_gap=quad_gap,
        grid_size=len(points),
    )


@dataclass(frozen=True)
class EnergyReport:
    n: int
    M: object
    ell: object
    potential: Potential
    k: int
    s: object
    value: object
    value_dual: object
    bound: BoundReport
    interpolant: HermiteInterpolant
    verification: GVerification
    checks: dict
    status: str  # "ok" | "unverified-hypothesis"

    def as_dict(self):
        from .serialize import number

        return {
            "n": self.n,
            "M": number(self.M),
            "ell": number(self.ell),
            "potential": self.potential.spec_string(),
            "hprime_approximated": self.potential.hprime_is_approx,
            "k": self.k,
            "s": number(self.s),
            "value": number(self.value),
            "value_dual": number(self.value_dual),
            "status": self.status,
            "checks": dict(self.checks),
            "nodes": [number(x) for x in self.bound.nodes],
            "rho": [number(w) for w in self.bound.rho],
            "interpolant": self.interpolant.as_dict(),
            "verification": self.verification.as_dict(),
        }


def energy_lower_bound(n, M, ell, potential: Potential, k=None, s=None,
                       krein="full", grid_size=2048) -> EnergyReport:
    """The energy bound M^2 sum rho_i h(beta_i) with its full certificate.

    (k, s) defaults to ``solve_s_for_M``; passing them explicitly requires
    that they reproduce M through rho_{k+1} M = 1, since the identity between
    the two bound expressions depends on it.  A failed product-positivity
    check downgrades the report status instead of aborting; an interpolant
    that fails positive definiteness aborts, since then nothing is certified.
    """
    ell = mpf(ell)
    M = mpf(M)
    if (k is None) != (s is None):
        raise ArgumentError("pass both k and s, or neither")
    solved = None
    if k is None:
        solved = solve_s_for_M(n, ell, M)
        k, s = solved.k, solved.s
    s = mpf(s)
    rep = bound_L2k(n, ell, s, k, krein="none")
    with working():
        if abs(rep.value - M) > mp.mpf("1e-8") * max(mp.mpf(1), M):
            raise ArgumentError(
                f"configuration (k={k}, s={s}) corresponds to M={rep.value}, not {M}"
            )
        checks = {}
        status = "ok"
        if krein != "none":
            from .krein import lsk_check

            kr = lsk_check(n, ell, k, mode=krein)
            checks[f"krein_{krein}"] = bool(kr.overall)
            if not kr.overall:
                status = "unverified-hypothesis"
        nodes = [(rep.nodes[0], 1)] + [(x, 2) for x in rep.nodes[1:-1]]
        interp = hermite_interpolate(nodes, potential, n=n)
        pd = is_positive_definite(interp.coeffs, n)
        checks["g_positive_definite"] = bool(pd.ok)
        if not pd.ok:
            raise HypothesisViolation(
                f"interpolant is not positive definite (min coeff {pd.min_coeff});"
                " bound not emitted"
            )
        hvals = [potential.eval(x) for x in rep.nodes[:-1]]
        value = M**2 * mp.fsum(w * hv for w, hv in zip(rep.rho[:-1], hvals))
        g0 = interp.gegenbauer.coeffs[0]
        value_dual = M * (M * g0 - interp.g_at_1)
        scale = M**2 * max(abs(hv) for hv in hvals)
        if abs(value - value_dual) > mp.mpf("1e-9") * scale:
            raise InvariantViolation(
                f"energy bound routes disagree: node sum {value}, dual {value_dual}"
            )
        checks["bound_routes_agree"] = True
        rhoM = rep.rho[-1] * M
        checks["rho_times_M_is_1"] = bool(abs(rhoM - 1) <= mp.mpf("1e-8"))
        verification = verify_g_in_G(
            interp, potential, ell, grid_size=grid_size, quadrature=rep.quadrature
        )
        checks["g_le_h_sampled"] = verification.g_le_h_ok
        checks["g0_positive"] = verification.g0_positive
        if solved is not None:
            checks["f2k_strictly_pd"] = solved.pd_strict
    return EnergyReport(
        n=n,
        M=M,
        ell=ell,
        potential=potential,
        k=k,
        s=s,
        value=value,
        value_dual=value_dual,
        bound=rep,
        interpolant=interp,
        verification=verification,
        checks=checks,
        status=status,
    )
