"""Seeded sampling and a step-doubling RK4 integrator.

The whole package draws its random test points from one tiny generator,
splitmix64, so that every certification report is reproducible from its seed
alone -- no dependence on numpy's RNG state or platform.

``rk4_integrate`` is deliberately plain: fixed-step classical RK4, run twice
with doubled resolution until two consecutive answers agree to tolerance.
It integrates one-parameter flows of vector fields, where right-hand sides
are smooth and cheap, so sophistication would buy nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IntegrationError, SamplingError

_MASK = (1 << 64) - 1


def splitmix64(seed: int):
    """Infinite generator of 64-bit splitmix64 outputs."""
    state = seed & _MASK
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        z ^= z >> 31
        yield z


def unit_stream(seed: int):
    """Infinite generator of floats in [0, 1) built from splitmix64."""
    for z in splitmix64(seed):
        yield (z >> 11) * (2.0 ** -53)


@dataclass
class SampleSpec:
    """Where and how to draw test points.

    box is a sequence of (lo, hi) ranges, one per coordinate; a degenerate
    range (lo == hi) pins that coordinate.  margin is forwarded to validity
    predicates by the callers that use one.
    """

    seed: int = 42
    count: int = 200
    box: tuple = (( -3.0, 3.0), (-3.0, 3.0), (-3.0, 3.0))
    margin: float = 1e-2

    def ranges(self):
        return tuple((float(lo), float(hi)) for lo, hi in self.box)


def sample_points(spec: SampleSpec, accept=None):
    """Draw spec.count points uniformly from spec.box, rejecting those the
    optional ``accept(*coords)`` predicate refuses.

    The rejection budget is 100 * count draws; exhausting it raises
    SamplingError (it means the box is almost entirely invalid and the
    caller should rethink the box, not that sampling was unlucky).
    """
    u = unit_stream(spec.seed)
    ranges = spec.ranges()
    pts = []
    budget = 100 * spec.count
    draws = 0
    while len(pts) < spec.count and draws < budget:
        coords = tuple(lo + (hi - lo) * next(u) for lo, hi in ranges)
        draws += 1
        if accept is None or accept(*coords):
            pts.append(coords)
    if len(pts) < spec.count:
        raise SamplingError(
            "collected %d/%d points in %d draws; box is mostly invalid"
            % (len(pts), spec.count, draws))
    return pts


def rk4_integrate(rhs, y0, s0, s1, tol=1e-12, n0=8, n_max=1 << 16):
    """Integrate y' = rhs(s, y) from s0 to s1 with classical RK4.

    Runs fixed-step passes with n, 2n, 4n, ... steps until two consecutive
    passes agree componentwise within tol * (1 + |y|).  Returns the finer
    pass.  Raises IntegrationError when n_max steps are not enough.
    """
    if s1 == s0:
        return np.array(y0, dtype=float)

    def run(n):
        h = (s1 - s0) / n
        y = np.array(y0, dtype=float)
        for i in range(n):
            s = s0 + i * h
            k1 = np.asarray(rhs(s, y), dtype=float)
            k2 = np.asarray(rhs(s + 0.5 * h, y + (0.5 * h) * k1), dtype=float)
            k3 = np.asarray(rhs(s + 0.5 * h, y + (0.5 * h) * k2), dtype=float)
            k4 = np.asarray(rhs(s + h, y + h * k3), dtype=float)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return y

    prev = run(n0)
    n = n0
    while n < n_max:
        n *= 2
        cur = run(n)
        scale = 1.0 + float(np.max(np.abs(cur)))
        if float(np.max(np.abs(cur - prev))) <= tol * scale:
            return cur
        prev = cur
    raise IntegrationError(
        "rk4_integrate: no convergence to tol=%g within %d steps" % (tol, n_max))
