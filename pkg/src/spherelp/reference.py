"""Independent classical constructions at the left endpoint -1.

At ell = -1 the signed measure (t - ell)(1 - t) dmu becomes (1 - t^2) dmu, so
the subinterval machinery must collapse to the classical even-degree bound
built on the (1,1) companion family.  This module rebuilds that classical
path directly from the (1,1) Jacobi recurrence - no signed-measure kernel,
no Radau norms - so agreement with the main pipeline is a genuine
cross-check, not a tautology.  Used by the test suite and available for
spot validation.
"""

from dataclasses import dataclass

import mpmath as mp

from . import _poly
from ._roots import poly_root
from .energy import Potential, hermite_interpolate
from .errors import MOutOfRangeError, NumericError, RangeError
from .orthopoly import _table, lagrange_mu_weights, mu_integral
from .precision import mpf, working

__all__ = ["classical_even_bound", "classical_ulb_energy", "ClassicalEnergy"]


def _kernel11(n, k, s):
    """sum_{j<k} r_j^{1,1} P_j^{1,1}(s) P_j^{1,1}(t) as power coefficients."""
    tab = _table(n, "adjacent11")
    tab.ensure_degree(k)
    tab.ensure_norms(k)
    K = (mp.mpf(0),)
    for j in range(k):
        K = _poly.add(
            K, _poly.scale(tab.polys[j], tab.norms[j] * _poly.evaluate(tab.polys[j], s))
        )
    return K


def _even_nodes(n, k, s):
    """Nodes (-1, zeros of the (1,1)-kernel, s, 1) of the classical rule."""
    s = mpf(s)
    tab = _table(n, "adjacent11")
    tab.ensure_zeros(max(1, k - 1))
    with working():
        K = _kernel11(n, k, s)
        kz = []
        if k >= 2:
            guides = [z for z, _, _ in tab.zeros[k - 1]]
            kz.append(poly_root(K, mp.mpf(-1), guides[0]))
            for i in range(k - 2):
                kz.append(poly_root(K, guides[i], guides[i + 1]))
        return [mp.mpf(-1)] + kz + [s, mp.mpf(1)], K


def classical_even_window(n, k):
    t10 = _table(n, "adjacent10")
    t11 = _table(n, "adjacent11")
    t10.ensure_zeros(k)
    t11.ensure_zeros(k)
    return t10.zeros[k][-1][0], t11.zeros[k][-1][0]


def classical_even_bound(n, s, k):
    """Classical degree-2k bound from f = (t+1)(t-s) K^2 over the (1,1) kernel.

    At the exact bottom of the validity window the weight at the node -1
    vanishes (the rule degenerates to the odd-degree one), so the weight
    check tolerates zeros within working precision.
    """
    s = mpf(s)
    with working():
        nodes, K = _even_nodes(n, k, s)
        weights = lagrange_mu_weights(n, nodes)
        tiny = mp.mpf("1e-20")
        if any(w < -tiny for w in weights):
            raise RangeError(f"s={s} outside the classical degree-{2 * k} range")
        f = _poly.mul(
            _poly.mul(_poly.linear(mp.mpf(-1)), _poly.linear(s)), _poly.mul(K, K)
        )
        value = _poly.evaluate(f, mp.mpf(1)) / mu_integral(n, f)
        if weights[-1] > tiny:
            alt = 1 / weights[-1]
            if abs(value - alt) > mp.mpf("1e-10") * abs(value):
                raise NumericError("classical even bound routes disagree")
    return value, tuple(nodes), tuple(weights)


@dataclass(frozen=True)
class ClassicalEnergy:
    n: int
    M: object
    k: int
    s: object
    value: object
    nodes: tuple
    weights: tuple


def classical_ulb_energy(n, M, potential: Potential, cap=40) -> ClassicalEnergy:
    """Energy bound at ell = -1 through the classical even-degree quadrature."""
    M = mpf(M)
    with working():
        ranges = []
        chosen = None
        for k in range(1, cap + 1):
            lo, hi = classical_even_window(n, k)
            Llo, _, _ = classical_even_bound(n, lo, k)
            Lhi, _, _ = classical_even_bound(n, hi, k)
            ranges.append((k, Llo, Lhi))
            slack = mp.mpf("1e-10") * max(mp.mpf(1), M)
            if M < Llo - slack:
                break
            if M > Lhi + slack:
                continue
            if abs(Llo - M) <= slack:
                s_sol = lo
            elif abs(Lhi - M) <= slack:
                s_sol = hi
            else:
                a, b = lo, hi
                fa = Llo - M
                for _ in range(300):
                    mid = (a + b) / 2
                    fm = classical_even_bound(n, mid, k)[0] - M
                    if abs(fm) <= slack:
                        break
                    if mp.sign(fm) == mp.sign(fa):
                        a, fa = mid, fm
                    else:
                        b = mid
                else:
                    raise NumericError("classical bisection on s did not converge")
                s_sol = mid
            chosen = (k, s_sol)
        if chosen is None:
            raise MOutOfRangeError(
                f"M={M} not achievable classically for n={n}", ranges=ranges
            )
        k, s_sol = chosen
        _, nodes, weights = classical_even_bound(n, s_sol, k)
        interior = [(nodes[0], 1)] + [(x, 2) for x in nodes[1:-1]]
        interp = hermite_interpolate(interior, potential, n=n)
        value = M**2 * mp.fsum(
            w * potential.eval(x) for x, w in zip(nodes[:-1], weights[:-1])
        )
        dual = M * (M * interp.gegenbauer.coeffs[0] - interp.g_at_1)
        if abs(value - dual) > mp.mpf("1e-9") * max(mp.mpf(1), abs(value)):
            raise NumericError("classical energy routes disagree")
    return ClassicalEnergy(
        n=n, M=M, k=k, s=s_sol, value=value, nodes=nodes, weights=weights
    )
