"""Weierstrass elliptic function p(z) on the real line.

Evaluation strategy, all in plain floats:

1. Laurent series about the origin,

       p(z)  = z^-2 + sum_{k>=2} c_k z^(2k-2),
       p'(z) = -2 z^-3 + sum_{k>=2} (2k-2) c_k z^(2k-3),

   with the classical recurrence c_2 = g2/20, c_3 = g3/28,
   c_k = 3/((2k+1)(k-3)) * sum_{m=2}^{k-2} c_m c_{k-m}.

2. If the tail has not converged at the working radius, halve z until it
   has, then climb back with the algebraic duplication formulas

       p(2z)  = -2 p + p''^2 / (4 p'^2),
       p'(2z) = -p' + 3 p p''/p' - p''^3/(4 p'^3),

   where p'' = 6 p^2 - g2/2 (differentiated curve identity).

3. For the lattice family this package actually needs (g2 = 0, g3 > 0) the
   real period is known, so z is first reduced modulo 2*omega and folded
   into [0, omega] -- after that the series always converges directly.

The real half-period for g2 = 0, g3 = 1 equals Gamma(1/3)^3 / (4 pi)
~ 1.5299540370571884; general g3 > 0 follows by the degree-(-2) homogeneity
p(L z; L^-4 g2, L^-6 g3) = L^-2 p(z; g2, g3).  We compute it by bisecting
p' on [g3^(-1/6), 2 g3^(-1/6)] rather than trusting the Gamma formula; the
tests compare against the Gamma value as an independent oracle.

Real poles:  for g2 = 0, g3 > 0 they sit on 2*omega*Z; for g2 = 0, g3 < 0
the real axis meets the (rotated) lattice on 2*sqrt(3)*omega(|g3|)*Z.
``real_pole_distance`` encodes exactly that and backs the validity margins
of the elliptic solution family.

Near-pole behaviour: any evaluation that climbs above |p| = 1e12 (i.e.
within ~1e-6 of a lattice point) raises PoleError rather than returning
garbage.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import ParameterError, PoleError, PrecisionError
from .jets import Jet1, Jet2, compose

__all__ = [
    "wp", "wp_prime", "wp_pair", "wp_invariant_residual",
    "real_half_period", "real_pole_distance", "wp_jet",
]

_K = 40                  # series truncation order
_POLE_MAG = 1e12         # |p| beyond this counts as "at a pole"
_DEFAULT_MARGIN = 1e-6   # closest admissible approach to z = 0 (and images)


@lru_cache(maxsize=64)
def _coeffs(g2: float, g3: float):
    c = [0.0] * (_K + 1)
    c[2] = g2 / 20.0
    c[3] = g3 / 28.0
    for k in range(4, _K + 1):
        s = 0.0
        for m in range(2, k - 1):
            s += c[m] * c[k - m]
        c[k] = 3.0 * s / ((2 * k + 1) * (k - 3))
    return tuple(c)


def _series(z: float, g2: float, g3: float):
    """Laurent series at z; returns (p, p', converged)."""
    c = _coeffs(g2, g3)
    u = z * z
    p = 1.0 / u
    q = -2.0 / (z * u)
    upow = 1.0                      # u^(k-2) entering iteration k
    tail = [math.inf] * 3
    for k in range(2, _K + 1):
        upow = upow * u if k > 2 else u
        t = c[k] * upow             # c_k z^(2k-2)
        p += t
        q += (2 * k - 2) * c[k] * upow / z
        tail[k % 3] = abs(t)
    scale = max(abs(p), 1.0 / abs(u))
    ok = max(tail) <= 1e-16 * scale
    return p, q, ok


def _duplicate(p: float, q: float, g2: float):
    if q == 0.0:
        # exact half-period: the doubled point is a lattice point
        raise PoleError("duplication from an exact half-period (pole target)")
    pp = 6.0 * p * p - 0.5 * g2
    P = -2.0 * p + pp * pp / (4.0 * q * q)
    Q = -q + 3.0 * p * pp / q - pp ** 3 / (4.0 * q ** 3)
    return P, Q


def _raw_pair(a: float, g2: float, g3: float):
    """Series + duplication for a > 0, no period reduction."""
    w = a
    n = 0
    while True:
        p, q, ok = _series(w, g2, g3)
        if ok:
            break
        n += 1
        w *= 0.5
        if n > 60:
            raise PrecisionError("wp series did not converge after 60 halvings")
    for _ in range(n):
        p, q = _duplicate(p, q, g2)
        if not (math.isfinite(p) and math.isfinite(q)) or abs(p) > _POLE_MAG:
            raise PoleError("wp evaluation ran into a pole (|p| > 1e12)")
    return p, q


@lru_cache(maxsize=None)
def _omega_unit():
    """Real half-period for g2=0, g3=1 by bisection on p'(x) = 0."""
    lo, hi = 1.0, 2.0
    qlo = _raw_pair(lo, 0.0, 1.0)[1]
    qhi = _raw_pair(hi, 0.0, 1.0)[1]
    if not (qlo < 0.0 < qhi):
        raise PrecisionError("half-period bracket lost")   # pragma: no cover
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-16 * lo:
            break
        if _raw_pair(mid, 0.0, 1.0)[1] < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def real_half_period(g3: float) -> float:
    """omega with p'(omega; 0, g3) = 0, for g3 > 0."""
    if g3 <= 0.0:
        raise ParameterError("real_half_period needs g3 > 0")
    return _omega_unit() * g3 ** (-1.0 / 6.0)


def real_pole_distance(z: float, g3: float) -> float:
    """Distance from real z to the nearest real pole of p(.; 0, g3)."""
    if g3 > 0.0:
        L = 2.0 * real_half_period(g3)
    elif g3 < 0.0:
        L = 2.0 * math.sqrt(3.0) * real_half_period(-g3)
    else:
        return np.abs(z)
    return np.abs(z - L * np.round(z / L))


def wp_pair(z, g2: float, g3: float, pole_margin: float = _DEFAULT_MARGIN):
    """(p(z), p'(z)) for real z (scalar or array, evaluated pointwise).

    Raises PoleError within pole_margin of z = 0 (and, for the g2 = 0
    lattices, of every real lattice point) or when the evaluation blows up.
    """
    arr = np.asarray(z, dtype=float)
    if arr.ndim > 0:
        p = np.empty(arr.shape)
        q = np.empty(arr.shape)
        for idx in np.ndindex(arr.shape):
            p[idx], q[idx] = _wp_pair_scalar(float(arr[idx]), g2, g3,
                                             pole_margin)
        return p, q
    return _wp_pair_scalar(float(arr), g2, g3, pole_margin)


def _wp_pair_scalar(z: float, g2: float, g3: float, pole_margin: float):
    sign = 1.0
    a = z
    if a < 0.0:
        a, sign = -a, -1.0          # p is even, p' is odd
    if g2 == 0.0 and g3 > 0.0:
        two_w = 2.0 * real_half_period(g3)
        a -= two_w * math.floor(a / two_w)
        if a > 0.5 * two_w:
            a = two_w - a
            sign = -sign
    if a < pole_margin:
        raise PoleError("wp argument within %g of a pole" % pole_margin)
    p, q = _raw_pair(a, g2, g3)
    return p, sign * q


def wp(z: float, g2: float, g3: float) -> float:
    return wp_pair(z, g2, g3)[0]


def wp_prime(z: float, g2: float, g3: float) -> float:
    return wp_pair(z, g2, g3)[1]


def wp_invariant_residual(z: float, g2: float, g3: float) -> float:
    """p'^2 - (4 p^3 - g2 p - g3), which vanishes identically on the curve."""
    p, q = wp_pair(z, g2, g3)
    return q * q - (4.0 * p ** 3 - g2 * p - g3)


def wp_jet(zj, g2: float, g3: float):
    """p composed with a jet argument.

    Derivatives of p are supplied algebraically from the curve identities
    p'' = 6 p^2 - g2/2 and p''' = 12 p p', so a Jet2/Jet1 argument yields
    exact chain-rule jets of p(z(t, x, y)).  Plain numbers fall through to
    wp().
    """
    if isinstance(zj, Jet2):
        p, q = wp_pair(zj.f, g2, g3)
        return compose(zj, (p, q, 6.0 * p * p - 0.5 * g2))
    if isinstance(zj, Jet1):
        p, q = wp_pair(zj.f, g2, g3)
        return compose(zj, (p, q, 6.0 * p * p - 0.5 * g2, 12.0 * p * q))
    return wp(zj, g2, g3)
