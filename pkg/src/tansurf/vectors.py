"""Small-dimension vector helpers shared by curves, frames and surfaces.

The generic functions (dot, cross3, add, sub, scale) only use ``+ - *`` and
therefore work on floats, Fractions, jets and polynomials alike; the norm
and orthonormalization helpers are float-only.
"""

from __future__ import annotations

import math


def dot(u, v):
    acc = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        acc = acc + a * b
    return acc


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(u, c):
    return tuple(a * c for a in u)


def cross3(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def norm(u):
    return math.sqrt(sum(float(a) * float(a) for a in u))


def normalize(u):
    n = norm(u)
    if n == 0:
        raise ZeroDivisionError("cannot normalize the zero vector")
    return tuple(a / n for a in u)


def orthonormality_defect(rows):
    """Max deviation of the Gram matrix of ``rows`` from the identity."""
    worst = 0.0
    for i, a in enumerate(rows):
        for j, b in enumerate(rows[i:], start=i):
            g = dot(a, b)
            target = 1.0 if i == j else 0.0
            worst = max(worst, abs(g - target))
    return worst


def mgs(rows, against=(), drop_tol=1e-10):
    """Modified Gram-Schmidt of ``rows`` against ``against`` and each other.

    Vectors whose residual norm falls below ``drop_tol`` are dropped.
    """
    basis = [tuple(v) for v in against]
    out = []
    for v in rows:
        w = tuple(v)
        for b in basis:
            w = sub(w, scale(b, dot(w, b)))
        # second pass for numerical hygiene
        for b in basis:
            w = sub(w, scale(b, dot(w, b)))
        n = norm(w)
        if n < drop_tol:
            continue
        w = scale(w, 1.0 / n)
        basis.append(w)
        out.append(w)
    return out


def normal_seed(tau, mu, count, drop_tol=1e-6):
    """Deterministic initial normal frame: Gram-Schmidt of the standard
    basis against {tau, mu}, smallest index first."""
    dim = len(tau)
    candidates = [tuple(1.0 if i == j else 0.0 for j in range(dim)) for i in range(dim)]
    got = mgs(candidates, against=(tau, mu), drop_tol=drop_tol)
    if len(got) < count:
        raise ValueError("could not build an initial normal frame from the standard basis")
    return got[:count]
