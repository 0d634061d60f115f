"""Dense power-basis polynomial arithmetic over mpmath floats.

A polynomial is a tuple of coefficients, index = power.  Everything here is
pure and allocation-light; degrees stay small (< 50) throughout the package.
"""

import mpmath as mp

ZERO = mp.mpf(0)
ONE = mp.mpf(1)


def trim(p):
    n = len(p)
    while n > 1 and p[n - 1] == 0:
        n -= 1
    return tuple(p[:n])


def add(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, b in enumerate(q):
        out[i] += b
    return tuple(out)


def sub(p, q):
    out = list(p) + [ZERO] * max(0, len(q) - len(p))
    for i, b in enumerate(q):
        out[i] -= b
    return tuple(out)


def scale(p, c):
    c = mp.mpf(c)
    return tuple(a * c for a in p)


def mul(p, q):
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return tuple(out)


def linear(root):
    """(t - root)"""
    return (-mp.mpf(root), ONE)


def evaluate(p, t):
    acc = ZERO
    for a in reversed(p):
        acc = acc * t + a
    return acc


def derivative(p):
    if len(p) == 1:
        return (ZERO,)
    return tuple(p[i] * i for i in range(1, len(p)))


def degree(p):
    return len(trim(p)) - 1


def shift_up(p):
    """t * p(t)"""
    return (ZERO,) + tuple(p)
