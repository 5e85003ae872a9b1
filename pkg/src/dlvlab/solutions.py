"""Catalog of closed-form solutions for the advected three-species system.

Every entry is a `Solution`: it knows which system it solves (its
``target_system()`` returns a :class:`~dlvlab.systems.SystemSpec`), it can
evaluate its fields at arrays of points, and it can produce full second- or
third-order jets of those fields by jet arithmetic, so the certification
engine can assemble residuals without any finite differencing.

The catalog has three families:

* **Rotating plane waves** (frame ``lab``): fields that depend on space and
  time only through the co-rotating phase

      phi(t, x, y) = (a1 x + a2 y) sin 2t + (a1 y - a2 x) cos 2t,

  which is the straight-line coordinate a1 x* + a2 y* of a frame rotating
  clockwise at angular rate 2.  In that frame the rotational drift of the
  stream ``x^2 + y^2`` disappears, so any profile triple (U, V, W) solving
  the one-dimensional phase system lifts to a solution of the advected
  system.  The profiles here come from a Weierstrass elliptic function, its
  rational degeneration, a secant-squared pulse, and logistic fronts.

* **Radial solutions** (frame ``radial``): rotationally symmetric fields
  u(t, r) of the radially reduced system with drift exponent ``alpha``;
  they include steady states built from rational and secant profiles and
  three self-similar families in the variable r^2/t.  ``to_lab_frame``
  lifts any of them back to the plane, attaching the angular stream that
  induces their drift exponent.

* **Scalar profiles** (frame ``profile``): solutions of the single-unknown
  ODEs that generate steady radial states and travelling logistic fronts.

All catalog entries use unit interaction strength (k = 1); the trivial
entries accept any stream function.  ``scale_component`` wraps an entry
with one field multiplied by a constant -- the standard negative control,
since a scaled field stops solving the coupled system while remaining
perfectly smooth.
"""

from __future__ import annotations

import math
from typing import Callable, Mapping, Sequence

import numpy as np

from . import jets as jm
from .errors import ParameterError
from .jets import Jet1, Jet2
from .numerics import SampleSpec
from .streams import StreamFunction, make_stream
from .systems import KINDS, SystemParams, SystemSpec
from .weierstrass import real_pole_distance, wp, wp_jet

__all__ = [
    "Solution",
    "CallableFields",
    "scale_component",
    "to_lab_frame",
    "CATALOG",
    "catalog_names",
    "make_solution",
]


# --------------------------------------------------------------------------
# shared machinery
# --------------------------------------------------------------------------


def _finite(name: str, value) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"{name} must be a real number, got {value!r}") from exc
    if not math.isfinite(out):
        raise ParameterError(f"{name} must be finite, got {out!r}")
    return out


def seed_jets(spec: SystemSpec, coords: Sequence):
    """Coordinate jets for ``spec``'s kind, in its slot convention."""
    info = spec.info
    arrs = [np.asarray(c, dtype=float) for c in coords]
    if len(arrs) != info.n_coords:
        raise ParameterError(
            f"{spec.kind} takes {info.n_coords} coordinates, got {len(arrs)}")
    if info.n_coords == 1:
        return (Jet1.var_at(arrs[0]),)
    pads = {"t": 0, "x": 1, "y": 2}
    base = [np.zeros(np.broadcast(*arrs).shape) for _ in range(3)]
    for slot, arr in zip(info.slots, arrs):
        base[pads[slot]] = arr
    tri = Jet2.vars_at(*base)
    return tuple(tri[pads[slot]] for slot in info.slots)


def _wp_any(z, g3):
    """Equianharmonic Weierstrass function (g2 = 0) for jets or arrays."""
    if isinstance(z, (Jet1, Jet2)):
        return wp_jet(z, 0.0, g3)
    return wp(z, 0.0, g3)


def _phase(T, X, Y, a1, a2):
    """Co-rotating straight-line coordinate (jet or plain arguments)."""
    s = jm.sin(2.0 * T)
    c = jm.cos(2.0 * T)
    return (a1 * X + a2 * Y) * s + (a1 * Y - a2 * X) * c


class Solution:
    """Base class: a closed-form candidate tied to one target system.

    Subclasses implement ``_fields(*coordinate jets or arrays)`` with jet
    arithmetic only, plus ``is_valid``; ``evaluate`` and ``eval_jet`` are
    derived from ``_fields`` by feeding it plain arrays or seeded jets.
    """

    name = "solution"
    frame = "lab"
    margin = 1e-2
    default_box: tuple = ()

    def __init__(self):
        self.params: dict = {}

    # -- required interface -------------------------------------------------

    def target_system(self) -> SystemSpec:
        raise NotImplementedError

    def _fields(self, *args):
        raise NotImplementedError

    # -- derived interface --------------------------------------------------

    def evaluate(self, *coords):
        args = [np.asarray(c, dtype=float) for c in coords]
        return tuple(np.asarray(f, dtype=float)
                     for f in self._fields(*args))

    def eval_jet(self, *coords):
        return tuple(self._fields(*seed_jets(self.target_system(), coords)))

    def is_valid(self, *coords, margin: float = 1e-2):
        shape = np.broadcast(*[np.asarray(c) for c in coords]).shape
        return np.ones(shape, dtype=bool)

    def describe(self) -> str:
        return self.__doc__.strip().splitlines()[0] if self.__doc__ else self.name

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "frame": self.frame,
            "kind": self.target_system().kind,
            "params": dict(self.params),
            "description": self.describe(),
        }


# --------------------------------------------------------------------------
# rotating plane waves (lab frame, stream x^2 + y^2, k = 1)
# --------------------------------------------------------------------------


class _RotWave(Solution):
    """Common scaffolding for co-rotating phase solutions."""

    frame = "lab"

    def __init__(self, d1: float, d2: float, d3: float,
                 alpha1: float, alpha2: float):
        super().__init__()
        self._params_obj = SystemParams(d1, d2, d3, k=1.0)
        a1 = _finite("alpha1", alpha1)
        a2 = _finite("alpha2", alpha2)
        if a1 * a1 + a2 * a2 <= 0.0:
            raise ParameterError("alpha1 and alpha2 must not both vanish")
        self.a1, self.a2 = a1, a2
        self.rho2 = a1 * a1 + a2 * a2
        self.params = {"d1": d1, "d2": d2, "d3": d3,
                       "alpha1": a1, "alpha2": a2}
        self._spec = SystemSpec("pde_full", self._params_obj,
                                stream=make_stream("case10", {}))

    def target_system(self) -> SystemSpec:
        return self._spec

    def _phase_of(self, T, X, Y):
        return _phase(T, X, Y, self.a1, self.a2)


class RotWaveElliptic(_RotWave):
    """Rotating plane wave through the equianharmonic elliptic function.

    u = 6 d2 rho2 P(phi + C1), v = 6 d1 rho2 P(phi + C1) and
    w = (rho2/d3) [-6 d1 d2 P(phi + C1) + C3 phi + C4], where P is the
    Weierstrass function with invariants (0, C2) and phi the co-rotating
    phase with slope (alpha1, alpha2), rho2 = alpha1^2 + alpha2^2.
    """

    name = "rot_wave_elliptic"
    margin = 5e-2  # pole distance below this is outside the evaluator's
    # validated accuracy window

    def __init__(self, d1=1.0, d2=2.0, d3=3.0, alpha1=0.5, alpha2=0.25,
                 C1=2.0, C2=1.0, C3=-15.0, C4=55.0):
        super().__init__(d1, d2, d3, alpha1, alpha2)
        C2 = _finite("C2", C2)
        if C2 <= 0.0:
            raise ParameterError("C2 (second invariant) must be positive")
        self.C1 = _finite("C1", C1)
        self.C2 = C2
        self.C3 = _finite("C3", C3)
        self.C4 = _finite("C4", C4)
        self.params.update(C1=self.C1, C2=self.C2, C3=self.C3, C4=self.C4)
        self.default_box = ((-1.5, 1.5), (-1.0, 1.0), (-1.0, 1.0))

    def _fields(self, T, X, Y):
        d1, d2, d3 = (self.params[k] for k in ("d1", "d2", "d3"))
        phi = self._phase_of(T, X, Y)
        p = _wp_any(phi + self.C1, self.C2)
        u = 6.0 * d2 * self.rho2 * p
        v = 6.0 * d1 * self.rho2 * p
        w = (self.rho2 / d3) * (-6.0 * d1 * d2 * p
                                + self.C3 * phi + self.C4)
        return u, v, w

    def is_valid(self, t, x, y, margin: float = 1e-2):
        phi = _phase(np.asarray(t, float), np.asarray(x, float),
                     np.asarray(y, float), self.a1, self.a2)
        dist = real_pole_distance(phi + self.C1, self.C2)
        return dist >= max(margin, self.margin)


class RotWaveRational(_RotWave):
    """Rotating plane wave with the rational (degenerate elliptic) profile.

    Same shape as the elliptic wave with P(z) replaced by 1/z^2.
    """

    name = "rot_wave_rational"

    def __init__(self, d1=1.0, d2=2.0, d3=3.0, alpha1=0.5, alpha2=0.25,
                 C1=2.0, C3=-15.0, C4=55.0):
        super().__init__(d1, d2, d3, alpha1, alpha2)
        self.C1 = _finite("C1", C1)
        self.C3 = _finite("C3", C3)
        self.C4 = _finite("C4", C4)
        self.params.update(C1=self.C1, C3=self.C3, C4=self.C4)
        self.default_box = ((-1.5, 1.5), (-1.0, 1.0), (-1.0, 1.0))

    def _fields(self, T, X, Y):
        d1, d2, d3 = (self.params[k] for k in ("d1", "d2", "d3"))
        phi = self._phase_of(T, X, Y)
        z = phi + self.C1
        p = 1.0 / (z * z)
        u = 6.0 * d2 * self.rho2 * p
        v = 6.0 * d1 * self.rho2 * p
        w = (self.rho2 / d3) * (-6.0 * d1 * d2 * p
                                + self.C3 * phi + self.C4)
        return u, v, w

    def is_valid(self, t, x, y, margin: float = 1e-2):
        phi = _phase(np.asarray(t, float), np.asarray(x, float),
                     np.asarray(y, float), self.a1, self.a2)
        return np.abs(phi + self.C1) >= margin


class RotWaveSecant(_RotWave):
    """Rotating plane wave with a secant-squared profile.

    u = 6 d2 rho2 C2^2 sec^2(theta), v = 2 d1 rho2 C2^2 (3 sec^2(theta) - 2),
    w = (rho2/d3) [-6 d1 d2 C2^2 sec^2(theta) + C3 phi + C4] with
    theta = C1 + C2 phi.  The v profile picks up the constant offset that
    the first integral of the phase system forces for this pulse.
    """

    name = "rot_wave_secant"

    def __init__(self, d1=1.0, d2=2.0, d3=3.0, alpha1=0.5, alpha2=0.25,
                 C1=0.3, C2=0.8, C3=-2.0, C4=5.0):
        super().__init__(d1, d2, d3, alpha1, alpha2)
        C2 = _finite("C2", C2)
        if C2 == 0.0:
            raise ParameterError("C2 (profile frequency) must be nonzero")
        self.C1 = _finite("C1", C1)
        self.C2 = C2
        self.C3 = _finite("C3", C3)
        self.C4 = _finite("C4", C4)
        self.params.update(C1=self.C1, C2=self.C2, C3=self.C3, C4=self.C4)
        self.default_box = ((-1.5, 1.5), (-1.0, 1.0), (-1.0, 1.0))

    def _fields(self, T, X, Y):
        d1, d2, d3 = (self.params[k] for k in ("d1", "d2", "d3"))
        phi = self._phase_of(T, X, Y)
        s2 = jm.sec(self.C1 + self.C2 * phi) ** 2
        cc = self.C2 * self.C2
        u = 6.0 * d2 * self.rho2 * cc * s2
        v = 2.0 * d1 * self.rho2 * cc * (3.0 * s2 - 2.0)
        w = (self.rho2 / d3) * (-6.0 * d1 * d2 * cc * s2
                                + self.C3 * phi + self.C4)
        return u, v, w

    def is_valid(self, t, x, y, margin: float = 1e-2):
        phi = _phase(np.asarray(t, float), np.asarray(x, float),
                     np.asarray(y, float), self.a1, self.a2)
        return np.abs(np.cos(self.C1 + self.C2 * phi)) >= margin


class _RotFront(_RotWave):
    """Logistic fronts drifting through the rotating frame (equal d's).

    The front speed locks the time coefficient to C1 = 10 d rho2; u is the
    squared logistic profile, v trails it by the constant 12 C1 / 5 and w
    combines an exponential of the same moving coordinate.
    """

    _SHAPE: Callable = staticmethod(jm.tanh)

    def __init__(self, d=1.0, alpha1=0.5, alpha2=0.25, C2=1.0, C3=0.5,
                 C1=None):
        d = _finite("d", d)
        if d <= 0.0:
            raise ParameterError("d must be positive")
        super().__init__(d, d, d, alpha1, alpha2)
        self.d = d
        self.C1 = 10.0 * d * self.rho2  # locked by the front speed
        if C1 is not None and not np.isclose(_finite("C1", C1), self.C1,
                                             rtol=1e-12, atol=0.0):
            raise ParameterError(
                "the front speed locks C1 to 10*d*(alpha1^2 + alpha2^2) "
                f"= {self.C1!r}; got C1 = {C1!r}")
        self.C2 = _finite("C2", C2)
        self.C3 = _finite("C3", C3)
        self.params = {"d": d, "alpha1": self.a1, "alpha2": self.a2,
                       "C2": self.C2, "C3": self.C3}
        self.default_box = ((-0.5, 0.5), (-1.0, 1.0), (-1.0, 1.0))

    def _arg(self, T, X, Y):
        return self.C1 * T + self._phase_of(T, X, Y)

    def _fields(self, T, X, Y):
        g = self._arg(T, X, Y)
        shape = type(self)._SHAPE
        u = (3.0 * self.C1 / 5.0) * (1.0 + shape(g)) ** 2
        v = u - 12.0 * self.C1 / 5.0
        w = self.C2 + self.C3 * jm.exp(10.0 * g) - u
        return u, v, w

    def _arg_plain(self, t, x, y):
        t = np.asarray(t, float)
        return self.C1 * t + _phase(t, np.asarray(x, float),
                                    np.asarray(y, float), self.a1, self.a2)

    def is_valid(self, t, x, y, margin: float = 1e-2):
        return np.abs(10.0 * self._arg_plain(t, x, y)) <= 500.0


class RotFrontTanh(_RotFront):
    """Smooth logistic front in the rotating frame (tanh branch)."""

    name = "rot_front_tanh"
    _SHAPE = staticmethod(jm.tanh)


class RotFrontCoth(_RotFront):
    """Singular logistic front in the rotating frame (coth branch)."""

    name = "rot_front_coth"
    _SHAPE = staticmethod(jm.coth)

    def is_valid(self, t, x, y, margin: float = 1e-2):
        g = self._arg_plain(t, x, y)
        return (np.abs(10.0 * g) <= 500.0) & (np.abs(g) >= margin)


# --------------------------------------------------------------------------
# radial solutions (frame "radial", coordinates (t, r))
# --------------------------------------------------------------------------


class _Radial(Solution):
    frame = "radial"

    def __init__(self, d1, d2, d3, alpha):
        super().__init__()
        self._params_obj = SystemParams(d1, d2, d3, k=1.0)
        self.alpha = _finite("alpha", alpha)
        self.params = {"d1": self._params_obj.d1, "d2": self._params_obj.d2,
                       "d3": self._params_obj.d3, "alpha": self.alpha}
        self._spec = SystemSpec("pde_radial", self._params_obj,
                                extra={"alpha": self.alpha})

    def target_system(self) -> SystemSpec:
        return self._spec


class RadialSteadyRational(_Radial):
    """Steady radial state with inverse-square populations.

    u = 2(2 d2 - alpha)/r^2, v = 2(2 d1 - alpha)/r^2; the third field takes
    one of three closed forms depending on how the drift exponent alpha
    relates to d3 (generic, alpha = 2 d3 resonance, alpha = 0).
    """

    name = "radial_steady_rational"

    def __init__(self, d1=1.0, d2=2.0, d3=3.0, alpha=0.7, C0=1.0, C1=0.5):
        super().__init__(d1, d2, d3, alpha)
        self.C0 = _finite("C0", C0)
        self.C1 = _finite("C1", C1)
        self.params.update(C0=self.C0, C1=self.C1)
        self.default_box = ((0.2, 2.0), (0.3, 2.5))

    def _w_tail(self, R):
        d1, d2, d3 = (self.params[k] for k in ("d1", "d2", "d3"))
        a = self.alpha
        if a == 0.0:
            return self.C0 + self.C1 * jm.log(R) \
                - 4.0 * d1 * d2 / (d3 * R * R)
        if a == 2.0 * d3:
            return self.C0 + self.C1 / (R * R) \
                + (4.0 * (d1 - d3) * (d2 - d3) / d3) \
                * (1.0 + 2.0 * jm.log(R)) / (R * R)
        return self.C0 + self.C1 * R ** (-a / d3) \
            + 2.0 * (2.0 * d1 - a) * (2.0 * d2 - a) / (a - 2.0 * d3) \
            / (R * R)

    def _fields(self, T, R):
        d1, d2 = self.params["d1"], self.params["d2"]
        a = self.alpha
        u = 2.0 * (2.0 * d2 - a) / (R * R) + 0.0 * T
        v = 2.0 * (2.0 * d1 - a) / (R * R) + 0.0 * T
        w = self._w_tail(R) + 0.0 * T
        return u, v, w

    def is_valid(self, t, r, margin: float = 1e-2):
        return np.asarray(r, dtype=float) >= margin


class RadialSteadySecant(_Radial):
    """Steady radial state with a secant-squared core (unit diffusivities).

    At d1 = d2 = d3 = 1 and drift exponent alpha = -1:
    u = 6 b^2 sec^2(b r), v = 2 b^2 (3 sec^2(b r) - 2),
    w = C4 + C5 r - 6 b^2 sec^2(b r).
    """

    name = "radial_steady_secant"

    def __init__(self, beta=0.6, C4=2.0, C5=0.3):
        super().__init__(1.0, 1.0, 1.0, -1.0)
        beta = _finite("beta", beta)
        if beta == 0.0:
            raise ParameterError("beta must be nonzero")
        self.beta = beta
        self.C4 = _finite("C4", C4)
        self.C5 = _finite("C5", C5)
        self.params.update(beta=beta, C4=self.C4, C5=self.C5)
        self.default_box = ((0.2, 2.0), (0.2, 2.2))

    def _fields(self, T, R):
        b = self.beta
        s2 = jm.sec(b * R) ** 2
        u = 6.0 * b * b * s2 + 0.0 * T
        v = 2.0 * b * b * (3.0 * s2 - 2.0) + 0.0 * T
        w = self.C4 + self.C5 * R - 6.0 * b * b * s2 + 0.0 * T
        return u, v, w

    def is_valid(self, t, r, margin: float = 1e-2):
        r = np.asarray(r, dtype=float)
        return (r >= margin) & (np.abs(np.cos(self.beta * r)) >= margin)


class RadialSelfSimBasic(_Radial):
    """Self-similar radial solution without drift (alpha = 0).

    u = 4 d2 / r^2 and v = 4 d1 / r^2 are steady; the third field adds a
    spreading Gaussian kernel to the steady tail:
    w = (C2/t) exp(-r^2/(4 d3 t)) - 4 d1 d2 / (d3 r^2).
    """

    name = "radial_selfsim_basic"

    def __init__(self, d1=1.0, d2=2.0, d3=3.0, C2=1.5):
        super().__init__(d1, d2, d3, 0.0)
        self.C2 = _finite("C2", C2)
        self.params.update(C2=self.C2)
        self.default_box = ((0.4, 2.0), (0.4, 2.2))

    def _fields(self, T, R):
        d1, d2, d3 = (self.params[k] for k in ("d1", "d2", "d3"))
        r2 = R * R
        u = 4.0 * d2 / r2 + 0.0 * T
        v = 4.0 * d1 / r2 + 0.0 * T
        w = (self.C2 / T) * jm.exp(-r2 / (4.0 * d3 * T)) \
            - 4.0 * d1 * d2 / (d3 * r2)
        return u, v, w

    def is_valid(self, t, r, margin: float = 1e-2):
        return (np.asarray(t, dtype=float) >= margin) \
            & (np.asarray(r, dtype=float) >= margin)


class RadialSelfSimBalanced(_Radial):
    """Self-similar radial solution at drift exponent alpha = d1 + d2.

    u and v decay like 1/t with opposite inverse-square corrections; the
    third field carries a Gaussian-damped power tail.  Requires
    2 d3 != d1 + d2.
    """

    name = "radial_selfsim_balanced"

    def __init__(self, d1=1.0, d2=2.0, d3=1.2, C2=0.7):
        d1f, d2f, d3f = (_finite(n, v) for n, v in
                         (("d1", d1), ("d2", d2), ("d3", d3)))
        if 2.0 * d3f == d1f + d2f:
            raise ParameterError(
                "requires 2 d3 != d1 + d2 (resonant tail not covered)")
        super().__init__(d1, d2, d3, d1f + d2f)
        self.C2 = _finite("C2", C2)
        self.params.update(C2=self.C2)
        self.default_box = ((0.4, 2.0), (0.4, 2.2))

    def _fields(self, T, R):
        d1, d2, d3 = (self.params[k] for k in ("d1", "d2", "d3"))
        r2 = R * R
        dd = d1 - d2
        ss = d1 + d2
        u = 1.0 / T - 2.0 * dd / r2
        v = 1.0 / T + 2.0 * dd / r2
        w = self.C2 * jm.exp(-r2 / (4.0 * d3 * T)) \
            * T ** ((ss - 2.0 * d3) / (2.0 * d3)) * r2 ** (-ss / (2.0 * d3)) \
            - 2.0 * dd * dd / ((ss - 2.0 * d3) * r2) - 1.0 / T
        return u, v, w

    def is_valid(self, t, r, margin: float = 1e-2):
        return (np.asarray(t, dtype=float) >= margin) \
            & (np.asarray(r, dtype=float) >= margin)


class RadialSelfSimLadder(_Radial):
    """Self-similar radial family at drift exponents alpha = 2 n d3.

    The populations are steady inverse squares; the third field is
    W(r^2/t)/t with W combining an exponentially damped power with a
    terminating polynomial in 1/w generated by the recurrence
    a_1 = 4 C1, a_2 = 16[(d1 - n d3)(d2 - n d3) - (n - 1) d3 C1],
    a_{j+1} = -4 d3 (n - j) a_j  (j = 2..n-1).
    """

    name = "radial_selfsim_ladder"

    def __init__(self, d1=1.0, d2=2.0, d3=0.8, n=3, C1=0.4, C2=1.1):
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise ParameterError(f"n must be an integer >= 2, got {n!r}")
        if n < 2:
            raise ParameterError(f"n must be an integer >= 2, got {n}")
        d3f = _finite("d3", d3)
        super().__init__(d1, d2, d3, 2.0 * n * d3f)
        self.n = int(n)
        self.C1 = _finite("C1", C1)
        self.C2 = _finite("C2", C2)
        self.params.update(n=self.n, C1=self.C1, C2=self.C2)
        self.default_box = ((0.4, 2.0), (0.4, 2.2))

    def tail_coefficients(self) -> list:
        """[a_1, ..., a_n] of the 1/w-polynomial tail of W."""
        d1, d2, d3 = (self.params[k] for k in ("d1", "d2", "d3"))
        n, C1 = self.n, self.C1
        coeffs = [4.0 * C1,
                  16.0 * ((d1 - n * d3) * (d2 - n * d3)
                          - (n - 1.0) * d3 * C1)]
        for j in range(2, n):
            coeffs.append(-4.0 * d3 * (n - j) * coeffs[-1])
        return coeffs

    def _fields(self, T, R):
        d1, d2, d3 = (self.params[k] for k in ("d1", "d2", "d3"))
        a = self.alpha
        r2 = R * R
        u = 2.0 * (2.0 * d2 - a) / r2 + 0.0 * T
        v = 2.0 * (2.0 * d1 - a) / r2 + 0.0 * T
        omega = r2 / T
        winv = 1.0 / omega
        tail = 0.0
        for coeff in reversed(self.tail_coefficients()):
            tail = (tail + coeff) * winv
        W = self.C2 * winv ** self.n * jm.exp(-omega / (4.0 * d3)) + tail
        w = W / T
        return u, v, w

    def is_valid(self, t, r, margin: float = 1e-2):
        return (np.asarray(t, dtype=float) >= margin) \
            & (np.asarray(r, dtype=float) >= margin)


# --------------------------------------------------------------------------
# trivial entries
# --------------------------------------------------------------------------


class ZeroSolution(Solution):
    """The zero state (accepts any stream function)."""

    name = "zero"
    frame = "lab"

    def __init__(self, d1=1.0, d2=2.0, d3=3.0, stream: StreamFunction | None = None):
        super().__init__()
        self._params_obj = SystemParams(d1, d2, d3, k=1.0)
        self.stream = stream if stream is not None else make_stream("case10", {})
        self.params = {"d1": self._params_obj.d1, "d2": self._params_obj.d2,
                       "d3": self._params_obj.d3,
                       "stream": self.stream.to_json()}
        self._spec = SystemSpec("pde_full", self._params_obj, stream=self.stream)
        self.default_box = ((-1.0, 1.0), (-2.0, 2.0), (-2.0, 2.0))

    def target_system(self) -> SystemSpec:
        return self._spec

    def _fields(self, T, X, Y):
        zero = 0.0 * (T + X + Y)
        return zero, zero, zero

    def is_valid(self, t, x, y, margin: float = 1e-2):
        return self.stream.is_valid(x, y, margin=margin)


class QuenchedPair(Solution):
    """Constant state with one population extinct: (u, v, w) = (cu, 0, cw).

    The bilinear interaction vanishes identically, so any constants solve
    the system under any stream function.
    """

    name = "uv_quenched"
    frame = "lab"

    def __init__(self, d1=1.0, d2=2.0, d3=3.0, cu=1.3, cw=-0.4,
                 stream: StreamFunction | None = None):
        super().__init__()
        self._params_obj = SystemParams(d1, d2, d3, k=1.0)
        self.cu = _finite("cu", cu)
        self.cw = _finite("cw", cw)
        self.stream = stream if stream is not None else make_stream("case10", {})
        self.params = {"d1": self._params_obj.d1, "d2": self._params_obj.d2,
                       "d3": self._params_obj.d3, "cu": self.cu,
                       "cw": self.cw, "stream": self.stream.to_json()}
        self._spec = SystemSpec("pde_full", self._params_obj, stream=self.stream)
        self.default_box = ((-1.0, 1.0), (-2.0, 2.0), (-2.0, 2.0))

    def target_system(self) -> SystemSpec:
        return self._spec

    def _fields(self, T, X, Y):
        zero = 0.0 * (T + X + Y)
        return self.cu + zero, zero, self.cw + zero

    def is_valid(self, t, x, y, margin: float = 1e-2):
        return self.stream.is_valid(x, y, margin=margin)


# --------------------------------------------------------------------------
# scalar profiles (frame "profile", one coordinate)
# --------------------------------------------------------------------------


class ProfileLogisticFront(Solution):
    """Travelling logistic front profile with the locked speed.

    U(z) = b0 (1 + C exp(sqrt(b0/(6 dstar)) z))^{-2} solves the front
    equation at the specific drift alpha1 = -5 sqrt(b0 dstar / 6).
    """

    name = "profile_logistic_front"
    frame = "profile"

    def __init__(self, dstar=1.0, b0=1.0, C=1.0):
        super().__init__()
        dstar = _finite("dstar", dstar)
        b0 = _finite("b0", b0)
        if dstar <= 0.0 or b0 <= 0.0:
            raise ParameterError("dstar and b0 must be positive")
        self.dstar, self.b0 = dstar, b0
        self.C = _finite("C", C)
        self.alpha1 = -5.0 * math.sqrt(b0 * dstar / 6.0)
        self.rate = math.sqrt(b0 / (6.0 * dstar))
        self.params = {"dstar": dstar, "b0": b0, "C": self.C}
        self._spec = SystemSpec(
            "ode_fisher_profile", SystemParams(1.0, 1.0, 1.0, k=1.0),
            extra={"dstar": dstar, "alpha1": self.alpha1, "b1": 0.0,
                   "b0": b0})
        self.default_box = ((-3.0, 3.0),)

    def target_system(self) -> SystemSpec:
        return self._spec

    def _fields(self, Z):
        den = 1.0 + self.C * jm.exp(self.rate * Z)
        return (self.b0 / (den * den),)

    def is_valid(self, z, margin: float = 1e-2):
        z = np.asarray(z, dtype=float)
        den = 1.0 + self.C * np.exp(self.rate * z)
        return np.abs(den) >= margin


class ProfileSteadyCore(Solution):
    """Inverse-square generating profile of the third-order steady equation.

    f(r) = -2/r^2 solves the third-order generating ODE whenever the
    integration constant C vanishes, for any diffusivities and drift.
    """

    name = "profile_steady_core"
    frame = "profile"

    def __init__(self, d1=1.0, d2=2.0, alpha=0.7):
        super().__init__()
        self.params = {"d1": _finite("d1", d1), "d2": _finite("d2", d2),
                       "alpha": _finite("alpha", alpha)}
        self._spec = SystemSpec(
            "ode_radial_third",
            SystemParams(self.params["d1"], self.params["d2"], 1.0, k=1.0),
            extra={"alpha": self.params["alpha"], "C": 0.0})
        self.default_box = ((0.3, 2.5),)

    def target_system(self) -> SystemSpec:
        return self._spec

    def _fields(self, R):
        return (-2.0 / (R * R),)

    def is_valid(self, r, margin: float = 1e-2):
        return np.asarray(r, dtype=float) >= margin


class ProfileSteadyCoreBasic(Solution):
    """Inverse-square profile of the driftless generating equation.

    f(r) = 4/r^2 solves r f'' + f' - r f^2 + (C0/d2) r f = 0 at C0 = 0.
    """

    name = "profile_steady_core_basic"
    frame = "profile"

    def __init__(self, d2=2.0):
        super().__init__()
        self.params = {"d2": _finite("d2", d2)}
        self._spec = SystemSpec(
            "ode_radial_emden",
            SystemParams(1.0, self.params["d2"], 1.0, k=1.0),
            extra={"C0": 0.0})
        self.default_box = ((0.3, 2.5),)

    def target_system(self) -> SystemSpec:
        return self._spec

    def _fields(self, R):
        return (4.0 / (R * R),)

    def is_valid(self, r, margin: float = 1e-2):
        return np.asarray(r, dtype=float) >= margin


class _ProfileSteadyTrig(Solution):
    frame = "profile"

    def __init__(self, beta, sign):
        super().__init__()
        beta = _finite("beta", beta)
        if beta == 0.0:
            raise ParameterError("beta must be nonzero")
        self.beta = beta
        self.params = {"beta": beta}
        self._spec = SystemSpec(
            "ode_radial_alpha", SystemParams(1.0, 1.0, 1.0, k=1.0),
            extra={"alpha": -1.0, "C1": 0.0,
                   "C0": sign * 4.0 * beta * beta})
        self.default_box = ((0.2, 2.2),)

    def target_system(self) -> SystemSpec:
        return self._spec


class ProfileSteadySecant(_ProfileSteadyTrig):
    """Secant-squared generating profile: f = 2 b^2 (3 sec^2(b r) - 2).

    Solves the unit-diffusivity generating equation with alpha = -1,
    C1 = 0, C0 = +4 b^2.
    """

    name = "profile_steady_secant"

    def __init__(self, beta=0.6):
        super().__init__(beta, +1.0)

    def _fields(self, R):
        b = self.beta
        return (2.0 * b * b * (3.0 * jm.sec(b * R) ** 2 - 2.0),)

    def is_valid(self, r, margin: float = 1e-2):
        r = np.asarray(r, dtype=float)
        return (r >= margin) & (np.abs(np.cos(self.beta * r)) >= margin)


class ProfileSteadySech(_ProfileSteadyTrig):
    """Hyperbolic-secant generating profile: f = 2 b^2 (2 - 3 sech^2(b r)).

    Solves the unit-diffusivity generating equation with alpha = -1,
    C1 = 0, C0 = -4 b^2.
    """

    name = "profile_steady_sech"

    def __init__(self, beta=0.6):
        super().__init__(beta, -1.0)

    def _fields(self, R):
        b = self.beta
        return (2.0 * b * b * (2.0 - 3.0 * jm.sech(b * R) ** 2),)

    def is_valid(self, r, margin: float = 1e-2):
        return np.asarray(r, dtype=float) >= margin


# --------------------------------------------------------------------------
# wrappers: manufactured fields, negative control, radial lift
# --------------------------------------------------------------------------


class CallableFields(Solution):
    """Manufactured candidate built from a jet-generic field function.

    ``fields(*coordinate jets) -> tuple of jets`` must use jet arithmetic
    (the :mod:`dlvlab.jets` module functions), so the same formula serves
    plain evaluation and jet evaluation.
    """

    frame = "manufactured"

    def __init__(self, spec: SystemSpec, fields: Callable, *,
                 name: str = "manufactured", box=None, valid=None):
        super().__init__()
        self._spec = spec
        self._func = fields
        self.name = name
        self._valid = valid
        n = spec.info.n_coords
        self.default_box = tuple(box) if box is not None \
            else tuple((-1.0, 1.0) for _ in range(n))
        self.params = {"kind": spec.kind}

    def target_system(self) -> SystemSpec:
        return self._spec

    def _fields(self, *args):
        out = self._func(*args)
        return out if isinstance(out, tuple) else (out,)

    def is_valid(self, *coords, margin: float = 1e-2):
        if self._valid is not None:
            return self._valid(*coords)
        return super().is_valid(*coords, margin=margin)


class ScaledComponent(Solution):
    """Negative control: one field of a base solution multiplied by a factor.

    Scaling a single field preserves smoothness but breaks the bilinear
    coupling, so certification must fail on the equations containing the
    product (the field's own linear equation may stay satisfied).
    """

    def __init__(self, base: Solution, component: int, factor: float):
        super().__init__()
        n_fields = len(base.target_system().info.field_names)
        if not 0 <= component < n_fields:
            raise ParameterError(
                f"component must be in 0..{n_fields - 1}, got {component}")
        self._base = base
        self._component = int(component)
        self._factor = _finite("factor", factor)
        self.name = f"{base.name}_scaled{component}"
        self.frame = base.frame
        self.margin = base.margin
        self.default_box = base.default_box
        self.params = dict(base.params,
                           scaled_component=self._component,
                           scale_factor=self._factor)

    def target_system(self) -> SystemSpec:
        return self._base.target_system()

    def _scale(self, vals):
        out = list(vals)
        out[self._component] = out[self._component] * self._factor
        return tuple(out)

    def evaluate(self, *coords):
        return self._scale(self._base.evaluate(*coords))

    def eval_jet(self, *coords):
        return self._scale(self._base.eval_jet(*coords))

    def is_valid(self, *coords, margin: float = 1e-2):
        return self._base.is_valid(*coords, margin=margin)

    def describe(self) -> str:
        return (f"field {self._component} of {self._base.name} scaled by "
                f"{self._factor} (negative control)")


def scale_component(base: Solution, component: int, factor: float) -> Solution:
    """Wrap ``base`` with one field multiplied by ``factor``."""
    return ScaledComponent(base, component, factor)


class RadialLift(Solution):
    """A radial solution re-read as a planar solution of the advected system.

    The drift exponent alpha of the radial system is induced in the plane
    by an angular stream component: for alpha != 0 the lift attaches the
    stream alpha*atan(x/y) (pure angular drift), for alpha = 0 the
    rotational stream x^2 + y^2, whose tangential velocity cannot move a
    rotationally symmetric profile.  Fields are evaluated at r =
    sqrt(x^2 + y^2).
    """

    frame = "lab"

    def __init__(self, base: Solution):
        super().__init__()
        rspec = base.target_system()
        if rspec.kind != "pde_radial":
            raise ParameterError(
                f"can only lift pde_radial solutions, got {rspec.kind}")
        alpha = rspec.extra["alpha"]
        if alpha != 0.0:
            stream = make_stream("case5",
                                 {"alpha": alpha, "beta": 0.0, "gamma": 0.0})
        else:
            stream = make_stream("case10", {})
        self._base = base
        self._stream = stream
        self.name = f"{base.name}_lab"
        self.margin = base.margin
        self.params = dict(base.params, stream=stream.to_json())
        self._spec = SystemSpec("pde_full", rspec.params, stream=stream)
        (tlo, thi), (rlo, rhi) = base.default_box
        self.default_box = ((tlo, thi), (-rhi, rhi), (-rhi, rhi))

    def target_system(self) -> SystemSpec:
        return self._spec

    def _fields(self, T, X, Y):
        R = jm.sqrt(X * X + Y * Y)
        return self._base._fields(T, R)

    def is_valid(self, t, x, y, margin: float = 1e-2):
        r = np.hypot(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return self._base.is_valid(t, r, margin=margin) \
            & self._stream.is_valid(x, y, margin=margin)

    def describe(self) -> str:
        return f"planar lift of {self._base.name} with its induced stream"


def to_lab_frame(base: Solution) -> Solution:
    """Lift a radial-frame catalog entry to the plane (see RadialLift)."""
    return RadialLift(base)


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------


CATALOG: dict[str, type] = {
    cls.name: cls for cls in (
        RotWaveElliptic,
        RotWaveRational,
        RotWaveSecant,
        RotFrontTanh,
        RotFrontCoth,
        RadialSteadyRational,
        RadialSteadySecant,
        RadialSelfSimBasic,
        RadialSelfSimBalanced,
        RadialSelfSimLadder,
        ZeroSolution,
        QuenchedPair,
        ProfileLogisticFront,
        ProfileSteadyCore,
        ProfileSteadyCoreBasic,
        ProfileSteadySecant,
        ProfileSteadySech,
    )
}


def catalog_names() -> list:
    return sorted(CATALOG)


def make_solution(name: str, **params) -> Solution:
    """Instantiate a catalog entry by name with parameter overrides."""
    if name not in CATALOG:
        raise ParameterError(
            f"unknown solution {name!r}; known: " + ", ".join(catalog_names()))
    try:
        return CATALOG[name](**params)
    except TypeError as exc:
        raise ParameterError(f"{name}: {exc}") from exc
