"""Numerical verification of the point-symmetry structure of the system.

For the convected three-component bilinear system the symmetry generators
admitted for a given stream function psi(x, y) all fit one template,

    X = (2 c0 t + t0) dt
      + (c0 x + p0(t) y + p1(t)) dx
      + (c0 y - p0(t) x + p2(t)) dy
      - 2 c0 u du - 2 c0 v dv
      + (c1 u + c2 v + (c1 + c2 - 2 c0) w + H(t, x, y)) dw,

subject to four compatibility conditions that this module checks
numerically at seeded sample points:

* field coupling:   (d1 - d3) c1 = 0  and  (d2 - d3) c2 = 0;
* source equation:  H_t + psi_y H_x - psi_x H_y = d3 (H_xx + H_yy);
* two shift equations linking (c0, p0, p1, p2) to second derivatives
  of the stream function,

    xi1 psi_xx + xi2 psi_xy + c0 psi_x - p0 psi_y - x p0' + p2' = 0,
    xi2 psi_yy + xi1 psi_xy + c0 psi_y + p0 psi_x - y p0' - p1' = 0,

  with xi1 = c0 x + p0 y + p1 and xi2 = c0 y - p0 x + p2;
* a balance equation whose inhomogeneity q may depend on time only,

    xi1 psi_x + xi2 psi_y - (x^2 + y^2)/2 p0' + x p2' - y p1' + q(t) = 0.

The stream-function derivatives are exact (automatic differentiation
through the stream's jet), while the time derivatives p_i'(t) come from a
fourth-order central difference, so every check crosses two independent
differentiation routes.

``case_generators`` returns, for each of the eleven admissible stream
families, the extra generators beyond the always-present time shift and
source symmetries; ``verify_case`` certifies them all against the
determining equations, and ``infer_balance`` reconstructs q(t) pointwise
and confirms it carries no (x, y) dependence.  ``bracket_components``
computes Lie brackets numerically for checking commutation relations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

import dlvlab.jets as jm
from dlvlab.errors import ParameterError
from dlvlab.jets import Jet2
from dlvlab.numerics import SampleSpec, sample_points
from dlvlab.streams import StreamFunction, example_stream, make_stream
from dlvlab.systems import SystemParams

__all__ = [
    "TemplateGenerator", "case_generators", "canonical_generators",
    "constant_source", "rotating_source", "conditional_mixing",
    "determining_residuals", "source_residual", "infer_balance",
    "verify_case", "verify_all_cases", "CaseReport", "GeneratorReport",
    "bracket_components", "components_close", "CASES",
]

CASES = tuple(f"case{i}" for i in range(1, 12))

_DT_REL = 1e-3  # relative step for the time-derivative stencil


def _tfunc(value):
    """Normalize a time profile: None -> 0, scalar -> constant, callable."""
    if value is None:
        return lambda t: np.zeros_like(np.asarray(t, dtype=float))
    if np.isscalar(value):
        c = float(value)
        return lambda t: np.full_like(np.asarray(t, dtype=float), c)
    return lambda t: np.asarray(value(t), dtype=float)


def time_derivative(func, t):
    """Fourth-order central derivative with step 1e-3 * (1 + |t|)."""
    t = np.asarray(t, dtype=float)
    h = _DT_REL * (1.0 + np.abs(t))
    return (-func(t + 2.0 * h) + 8.0 * func(t + h)
            - 8.0 * func(t - h) + func(t - 2.0 * h)) / (12.0 * h)


class TemplateGenerator:
    """One admitted generator, stored through the template coefficients.

    Parameters mirror the template: scalars ``c0, t0, c1, c2``, time
    profiles ``p0, p1, p2`` (None, scalar, or vectorized callable), the
    balance inhomogeneity ``q`` (same convention), and an optional source
    term ``H(t, x, y)`` written in jet-generic arithmetic.  ``closed_flow``
    is an optional exact one-parameter group map
    ``(eps, t, x, y) -> (t~, x~, y~)`` in jet-generic arithmetic, used by
    the transport layer and cross-checked against numeric integration.
    """

    def __init__(self, name: str, *, c0: float = 0.0, t0: float = 0.0,
                 p0=None, p1=None, p2=None, c1: float = 0.0, c2: float = 0.0,
                 source=None, q=None, closed_flow=None, case: str = ""):
        self.name = str(name)
        self.case = str(case)
        self.c0 = float(c0)
        self.t0 = float(t0)
        self.c1 = float(c1)
        self.c2 = float(c2)
        self.p0 = _tfunc(p0)
        self.p1 = _tfunc(p1)
        self.p2 = _tfunc(p2)
        self.q = _tfunc(q)
        self.source = source
        self.closed_flow = closed_flow

    # -- components ------------------------------------------------------

    def xi(self, t, x, y):
        """Base-space components (xi0, xi1, xi2) at (t, x, y)."""
        t, x, y = (np.asarray(a, dtype=float) for a in (t, x, y))
        p0, p1, p2 = self.p0(t), self.p1(t), self.p2(t)
        xi0 = 2.0 * self.c0 * t + self.t0
        xi1 = self.c0 * x + p0 * y + p1
        xi2 = self.c0 * y - p0 * x + p2
        return xi0 + 0.0 * x, xi1, xi2

    def eta(self, t, x, y, u, v, w):
        """Fiber components (eta1, eta2, eta3)."""
        u, v, w = (np.asarray(a, dtype=float) for a in (u, v, w))
        eta1 = -2.0 * self.c0 * u
        eta2 = -2.0 * self.c0 * v
        eta3 = (self.c1 * u + self.c2 * v
                + (self.c1 + self.c2 - 2.0 * self.c0) * w)
        if self.source is not None:
            eta3 = eta3 + self.source(t, x, y)
        return eta1, eta2, eta3 + 0.0 * (u + v + w)

    def components(self, t, x, y, u=0.0, v=0.0, w=0.0):
        """All six components, broadcast to a common shape."""
        xi0, xi1, xi2 = self.xi(t, x, y)
        eta1, eta2, eta3 = self.eta(t, x, y, u, v, w)
        return tuple(np.broadcast_arrays(xi0, xi1, xi2, eta1, eta2, eta3))

    # -- compatibility ----------------------------------------------------

    def field_compatibility(self, params: SystemParams):
        """Residuals of the coupling conditions (d1-d3)c1 and (d2-d3)c2."""
        return ((params.d1 - params.d3) * self.c1,
                (params.d2 - params.d3) * self.c2)

    # -- flows -------------------------------------------------------------

    def flow_numeric(self, eps: float, t, x, y, u=0.0, v=0.0, w=0.0,
                     steps: int = 512):
        """Integrate the generator's flow for parameter eps by RK4.

        Returns the transported (t, x, y, u, v, w).  Used to validate
        ``closed_flow`` maps and the fiber action.
        """
        state = [np.asarray(a, dtype=float) + 0.0
                 for a in np.broadcast_arrays(*(np.asarray(c, dtype=float)
                                                for c in (t, x, y, u, v, w)))]
        n = max(int(steps), 8)
        de = float(eps) / n

        def rhs(s):
            return self.components(*s)

        for _ in range(n):
            k1 = rhs(state)
            s2 = [a + 0.5 * de * b for a, b in zip(state, k1)]
            k2 = rhs(s2)
            s3 = [a + 0.5 * de * b for a, b in zip(state, k2)]
            k3 = rhs(s3)
            s4 = [a + de * b for a, b in zip(state, k3)]
            k4 = rhs(s4)
            state = [a + (de / 6.0) * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
                     for a, b1, b2, b3, b4 in zip(state, k1, k2, k3, k4)]
        return tuple(state)

    def flow(self, eps: float, t, x, y):
        """The exact base-space flow map; requires ``closed_flow``."""
        if self.closed_flow is None:
            raise ParameterError(
                f"generator {self.name!r} has no closed-form flow")
        return self.closed_flow(float(eps), t, x, y)

    def describe(self) -> str:
        return f"{self.name} ({self.case or 'generic'})"

    def to_json(self) -> dict:
        return {"name": self.name, "case": self.case, "c0": self.c0,
                "t0": self.t0, "c1": self.c1, "c2": self.c2,
                "has_source": self.source is not None,
                "has_closed_flow": self.closed_flow is not None}

    def __repr__(self):
        return f"TemplateGenerator({self.name!r}, case={self.case!r})"


# --------------------------------------------------------------------------
# determining-equation residuals
# --------------------------------------------------------------------------


def determining_residuals(gen: TemplateGenerator, stream: StreamFunction,
                          t, x, y) -> dict:
    """Absolute residuals of the shift and balance equations at points.

    Stream derivatives are exact (jet route); p_i'(t) are fourth-order
    finite differences.  Returns arrays keyed ``shift_x``, ``shift_y``,
    ``balance``.
    """
    t, x, y = np.broadcast_arrays(*(np.asarray(a, dtype=float)
                                    for a in (t, x, y)))
    jet = stream.jet(x, y)
    p0 = gen.p0(t)
    dp0 = time_derivative(gen.p0, t)
    dp1 = time_derivative(gen.p1, t)
    dp2 = time_derivative(gen.p2, t)
    c0 = gen.c0
    xi1 = c0 * x + p0 * y + gen.p1(t)
    xi2 = c0 * y - p0 * x + gen.p2(t)
    shift_x = (xi1 * jet.fxx + xi2 * jet.fxy + c0 * jet.fx - p0 * jet.fy
               - x * dp0 + dp2)
    shift_y = (xi2 * jet.fyy + xi1 * jet.fxy + c0 * jet.fy + p0 * jet.fx
               - y * dp0 - dp1)
    balance = (xi1 * jet.fx + xi2 * jet.fy
               - 0.5 * (x * x + y * y) * dp0 + x * dp2 - y * dp1
               + gen.q(t))
    return {"shift_x": np.abs(shift_x), "shift_y": np.abs(shift_y),
            "balance": np.abs(balance)}


def source_residual(source, stream: StreamFunction, d3: float, t, x, y):
    """Residual of the source equation H_t + psi_y H_x - psi_x H_y = d3 LH.

    ``source`` must be jet-generic; all H derivatives come from automatic
    differentiation, the stream derivatives from its exact jet.
    """
    t, x, y = np.broadcast_arrays(*(np.asarray(a, dtype=float)
                                    for a in (t, x, y)))
    T, X, Y = Jet2.vars_at(t, x, y)
    H = source(T, X, Y)
    if not isinstance(H, Jet2):
        H = Jet2.const(np.asarray(H, dtype=float) + 0.0 * t)
    sj = stream.jet(x, y)
    res = (H.ft + sj.fy * H.fx - sj.fx * H.fy
           - float(d3) * (H.fxx + H.fyy))
    return np.abs(res)


def infer_balance(gen: TemplateGenerator, stream: StreamFunction, t_values,
                  *, count: int = 40, seed: int = 7, box=None):
    """Reconstruct q(t) pointwise and measure its (x, y) spread.

    For each time in ``t_values`` the balance equation is solved for q at
    ``count`` accepted spatial points; the estimate is the mean and the
    returned spread is the largest deviation from it, which must vanish
    (to tolerance) for a genuine symmetry: the inhomogeneity may depend on
    time but not on position.
    """
    t_values = np.atleast_1d(np.asarray(t_values, dtype=float))
    if box is None:
        box = ((-2.0, 2.0), (-2.0, 2.0))
    pts = sample_points(SampleSpec(seed=seed, count=count, box=box),
                        accept=lambda x, y: bool(stream.is_valid(x, y)))
    x, y = (np.asarray(col) for col in zip(*pts))
    jet = stream.jet(x, y)
    q_hat = np.empty_like(t_values)
    spread = 0.0
    for i, tv in enumerate(t_values):
        tt = np.full_like(x, tv)
        p0 = gen.p0(tt)
        dp0 = time_derivative(gen.p0, tt)
        dp1 = time_derivative(gen.p1, tt)
        dp2 = time_derivative(gen.p2, tt)
        xi1 = gen.c0 * x + p0 * y + gen.p1(tt)
        xi2 = gen.c0 * y - p0 * x + gen.p2(tt)
        phi = (xi1 * jet.fx + xi2 * jet.fy
               - 0.5 * (x * x + y * y) * dp0 + x * dp2 - y * dp1)
        q_hat[i] = -float(np.mean(phi))
        spread = max(spread, float(np.max(np.abs(phi + q_hat[i]))))
    return q_hat, spread


# --------------------------------------------------------------------------
# the generator table for the eleven stream families
# --------------------------------------------------------------------------


def constant_source(value: float = 1.0, case: str = "") -> TemplateGenerator:
    """The additive source symmetry with constant H (valid for any stream)."""
    c = float(value)
    return TemplateGenerator("source_const", source=lambda T, X, Y:
                             c + 0.0 * (T + X + Y), case=case)


def rotating_source() -> TemplateGenerator:
    """Additive source H = x sin 2t + y cos 2t for the rotational stream."""

    def H(T, X, Y):
        return X * jm.sin(2.0 * T) + Y * jm.cos(2.0 * T)

    return TemplateGenerator("source_wave", source=H, case="case10")


def conditional_mixing(which: str) -> TemplateGenerator:
    """The mixing symmetry feeding a population into the product field.

    ``which`` is "u" (requires d1 = d3) or "v" (requires d2 = d3); the
    finite action is w -> (w + f) e^eps - f with f the chosen field.
    """
    if which == "u":
        return TemplateGenerator("mix_u_into_w", c1=1.0)
    if which == "v":
        return TemplateGenerator("mix_v_into_w", c2=1.0)
    raise ParameterError(f"which must be 'u' or 'v', got {which!r}")


def _rotation_flow(rate):
    """Closed flow of p0 = rate(t) with frozen time: rotation by eps*rate."""

    def flow(eps, t, x, y):
        ang = eps * rate(t)
        c, s = jm.cos(ang), jm.sin(ang)
        return t, c * x + s * y, c * y - s * x

    return flow


def _shift_flow(fx, fy):
    """Closed flow of a time-dependent translation (t frozen)."""

    def flow(eps, t, x, y):
        return t, x + eps * fx(t), y + eps * fy(t)

    return flow


def case_generators(stream: StreamFunction, *,
                    sys_params: SystemParams | None = None,
                    include_sources: bool = True) -> list:
    """All template generators admitted by the given stream function.

    Always includes the time shift; the case-specific extra generators
    carry their balance functions q(t) and closed flows.  Source
    symmetries (constant H, plus the rotating-linear H for the rotational
    stream) are appended unless ``include_sources`` is false, and the
    conditional mixing generators only when ``sys_params`` makes them
    admissible.
    """
    case = stream.case
    p = stream.params
    gens = [TemplateGenerator("time_shift", t0=1.0, case=case,
                              closed_flow=lambda eps, t, x, y:
                              (t + eps, x + 0.0 * t, y + 0.0 * t))]

    if case == "case1":
        a, b = p["alpha"], p["beta"]
        rate = lambda t: np.exp(2.0 * b * t)
        jrate = lambda t: jm.exp(2.0 * b * t)
        gens.append(TemplateGenerator(
            "swirl_wave", p0=rate, q=lambda t: -a * np.exp(2.0 * b * t),
            closed_flow=_rotation_flow(jrate), case=case))
    elif case == "case2":
        a1, a2, b, g = p["a1"], p["a2"], p["beta"], p["gamma"]
        rate = a2 * b
        gens.append(TemplateGenerator(
            "drift_wave",
            p1=lambda t: a2 * np.exp(rate * t),
            p2=lambda t: -a1 * np.exp(rate * t),
            q=lambda t: -a2 * g * np.exp(rate * t),
            closed_flow=_shift_flow(lambda t: a2 * jm.exp(rate * t),
                                    lambda t: -a1 * jm.exp(rate * t)),
            case=case))
    elif case == "case3":
        a = p["alpha"]

        def flow3(eps, t, x, y):
            f = math.exp(eps)
            return t * f * f, x * f, y * f

        gens.append(TemplateGenerator("dilation", c0=1.0, q=-a,
                                      closed_flow=flow3, case=case))
    elif case == "case4":
        a0, a = p["a0"], p["alpha"]

        def flow4(eps, t, x, y):
            f = math.exp(eps)
            ang = 2.0 * a0 * eps  # p0 = -2 a0 rotates by +2 a0 eps
            c, s = math.cos(ang), math.sin(ang)
            return t * f * f, f * (c * x - s * y), f * (s * x + c * y)

        gens.append(TemplateGenerator(
            "spiral_dilation", c0=1.0, p0=-2.0 * a0, q=2.0 * a * a0,
            closed_flow=flow4, case=case))
    elif case == "case5":
        a, b, g = p["alpha"], p["beta"], p["gamma"]
        gens.append(TemplateGenerator(
            "rotation", p0=1.0, q=-a,
            closed_flow=_rotation_flow(lambda t: 1.0), case=case))

        def flow5(eps, t, x, y):
            f = math.exp(eps)
            th = (2.0 * g * (f * f - 1.0)) * t
            c, s = jm.cos(th), jm.sin(th)
            return t * f * f, f * (c * x + s * y), f * (c * y - s * x)

        gens.append(TemplateGenerator(
            "swirl_dilation", c0=1.0, p0=lambda t: 4.0 * g * t,
            q=lambda t: -2.0 * b - 4.0 * a * g * t,
            closed_flow=flow5, case=case))
    elif case == "case6":
        a1, a2, g, sgn = p["a1"], p["a2"], p["gamma"], p["sign"]
        gens.append(TemplateGenerator(
            "drift", p1=a2, p2=-a1,
            closed_flow=_shift_flow(lambda t: a2 + 0.0 * t,
                                    lambda t: -a1 + 0.0 * t),
            case=case))

        def flow6(eps, t, x, y):
            f = math.exp(eps)
            ramp = (f * f - f) * t
            return t * f * f, f * x + g * a2 * ramp, f * y - g * a1 * ramp

        gens.append(TemplateGenerator(
            "drift_dilation", c0=1.0,
            p1=lambda t: g * a2 * t, p2=lambda t: -g * a1 * t,
            q=-float(sgn), closed_flow=flow6, case=case))
    elif case == "case7":
        a0 = p["a0"]
        gens.append(TemplateGenerator(
            "libration_a", p1=np.cos, p2=lambda t: -2.0 * a0 * np.sin(t),
            closed_flow=_shift_flow(jm.cos, lambda t: -2.0 * a0 * jm.sin(t)),
            case=case))
        gens.append(TemplateGenerator(
            "libration_b", p1=np.sin, p2=lambda t: 2.0 * a0 * np.cos(t),
            closed_flow=_shift_flow(jm.sin, lambda t: 2.0 * a0 * jm.cos(t)),
            case=case))
    elif case == "case8":
        a0 = p["a0"]
        gens.append(TemplateGenerator(
            "surge_up", p1=np.exp, p2=lambda t: -2.0 * a0 * np.exp(t),
            closed_flow=_shift_flow(jm.exp, lambda t: -2.0 * a0 * jm.exp(t)),
            case=case))
        gens.append(TemplateGenerator(
            "surge_down", p1=lambda t: np.exp(-t),
            p2=lambda t: 2.0 * a0 * np.exp(-t),
            closed_flow=_shift_flow(lambda t: jm.exp(-t),
                                    lambda t: 2.0 * a0 * jm.exp(-t)),
            case=case))
    elif case == "case9":
        a = p["alpha"]
        gens.append(TemplateGenerator(
            "shift_y", p2=1.0, q=-a,
            closed_flow=_shift_flow(lambda t: 0.0 * t, lambda t: 1.0 + 0.0 * t),
            case=case))
        gens.append(TemplateGenerator(
            "galilean", p1=1.0, p2=lambda t: -2.0 * t,
            q=lambda t: 2.0 * a * t,
            closed_flow=_shift_flow(lambda t: 1.0 + 0.0 * t,
                                    lambda t: -2.0 * t),
            case=case))
    elif case == "case10":
        gens.extend(_rotational_generators())
    elif case == "case11":
        a1, a2 = p["a1"], p["a2"]
        gens.append(TemplateGenerator(
            "shift_x", p1=1.0, q=-a1,
            closed_flow=_shift_flow(lambda t: 1.0 + 0.0 * t,
                                    lambda t: 0.0 * t),
            case=case))
        gens.append(TemplateGenerator(
            "shift_y", p2=1.0, q=-a2,
            closed_flow=_shift_flow(lambda t: 0.0 * t,
                                    lambda t: 1.0 + 0.0 * t),
            case=case))

        def flow11(eps, t, x, y):
            f = math.exp(eps)
            ramp = (f * f - f) * t
            return t * f * f, f * x + a2 * ramp, f * y - a1 * ramp

        gens.append(TemplateGenerator(
            "drift_dilation", c0=1.0,
            p1=lambda t: a2 * t, p2=lambda t: -a1 * t, q=0.0,
            closed_flow=flow11, case=case))

        def flow11r(eps, t, x, y):
            # z~ = e^{-i eps}(z - z*) + z*, z* = t (a2 - i a1)
            c, s = math.cos(eps), math.sin(eps)
            xs, ys = a2 * t, -a1 * t
            dx, dy = x - xs, y - ys
            return t, xs + c * dx + s * dy, ys + c * dy - s * dx

        gens.append(TemplateGenerator(
            "drift_rotation", p0=1.0,
            p1=lambda t: a1 * t, p2=lambda t: a2 * t,
            q=lambda t: -(a1 * a1 + a2 * a2) * t,
            closed_flow=flow11r, case=case))

    if include_sources:
        gens.append(constant_source(case=case))
        if case == "case10":
            gens.append(rotating_source())
    if sys_params is not None:
        if sys_params.d1 == sys_params.d3:
            gens.append(conditional_mixing("u"))
        if sys_params.d2 == sys_params.d3:
            gens.append(conditional_mixing("v"))
    return gens


def _rotational_generators() -> list:
    """The finite extra algebra of the plain rotational stream.

    rotation, two oscillating shifts, and a dilation whose spatial part
    swirls with time; brackets among them (and the time shift) close.
    """
    case = "case10"
    rot = TemplateGenerator("rotation", p0=1.0, q=0.0,
                            closed_flow=_rotation_flow(lambda t: 1.0),
                            case=case)
    wave1 = TemplateGenerator(
        "wave_shift_1",
        p1=lambda t: np.sin(2.0 * t), p2=lambda t: np.cos(2.0 * t), q=0.0,
        closed_flow=_shift_flow(lambda t: jm.sin(2.0 * t),
                                lambda t: jm.cos(2.0 * t)),
        case=case)
    wave2 = TemplateGenerator(
        "wave_shift_2",
        p1=lambda t: -np.cos(2.0 * t), p2=lambda t: np.sin(2.0 * t), q=0.0,
        closed_flow=_shift_flow(lambda t: -jm.cos(2.0 * t),
                                lambda t: jm.sin(2.0 * t)),
        case=case)

    def dil_flow(eps, t, x, y):
        f = math.exp(eps)
        th = (2.0 * (f * f - 1.0)) * t
        c, s = jm.cos(th), jm.sin(th)
        return t * f * f, f * (c * x + s * y), f * (c * y - s * x)

    dil = TemplateGenerator("dilation", c0=1.0, p0=lambda t: 4.0 * t,
                            q=0.0, closed_flow=dil_flow, case=case)
    return [rot, wave1, wave2, dil]


def canonical_generators() -> dict:
    """Named generators of the rotational stream's algebra, by role."""
    stream = make_stream("case10", {})
    return {g.name: g for g in case_generators(stream)}


# --------------------------------------------------------------------------
# case verification
# --------------------------------------------------------------------------


@dataclass
class GeneratorReport:
    """Residual summary for one generator against one stream."""

    name: str
    max_shift_x: float
    max_shift_y: float
    max_balance: float
    max_source: float
    field_residuals: tuple
    q_spread: float
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "max_shift_x": self.max_shift_x,
                "max_shift_y": self.max_shift_y,
                "max_balance": self.max_balance,
                "max_source": self.max_source,
                "field_residuals": list(self.field_residuals),
                "q_spread": self.q_spread, "passed": self.passed}


@dataclass
class CaseReport:
    """Verification outcome for one stream family."""

    case: str
    stream: dict
    tol: float
    n_points: int
    seed: int
    generators: list = field(default_factory=list)
    passed: bool = False

    def to_json(self) -> dict:
        return {"case": self.case, "stream": self.stream, "tol": self.tol,
                "n_points": self.n_points, "seed": self.seed,
                "generators": [g.to_json() for g in self.generators],
                "passed": self.passed}


def verify_case(case: str, *, params: dict | None = None, F=None,
                tol: float = 1e-10, count: int = 200, seed: int = 20260819,
                sys_params: SystemParams | None = None) -> CaseReport:
    """Certify every admitted generator of one stream family numerically.

    Samples ``count`` accepted points in t in [-1.5, 1.5], x, y in
    [-2, 2]^2, evaluates the shift/balance residuals for each generator
    (plus the source equation for source generators and the coupling
    residuals for mixing generators), and reconstructs q(t) at five times
    to confirm spatial independence.  All residuals are absolute and must
    stay below ``tol``.
    """
    if case not in CASES:
        raise ParameterError(f"unknown case {case!r}; known: "
                             + ", ".join(CASES))
    stream = (example_stream(case) if params is None
              else make_stream(case, params, F=F))
    d3 = sys_params.d3 if sys_params is not None else 3.0
    spec = SampleSpec(seed=seed, count=count,
                      box=((-1.5, 1.5), (-2.0, 2.0), (-2.0, 2.0)))
    pts = sample_points(spec,
                        accept=lambda t, x, y: bool(stream.is_valid(x, y)))
    t, x, y = (np.asarray(col) for col in zip(*pts))

    report = CaseReport(case=case, stream=stream.to_json(), tol=tol,
                        n_points=len(pts), seed=seed)
    ok = True
    for gen in case_generators(stream, sys_params=sys_params):
        res = determining_residuals(gen, stream, t, x, y)
        m_sx = float(np.max(res["shift_x"]))
        m_sy = float(np.max(res["shift_y"]))
        m_bal = float(np.max(res["balance"]))
        m_src = 0.0
        if gen.source is not None:
            m_src = float(np.max(source_residual(gen.source, stream, d3,
                                                 t, x, y)))
        fields = (0.0, 0.0)
        if sys_params is not None:
            fields = gen.field_compatibility(sys_params)
        _, spread = infer_balance(gen, stream, np.linspace(-1.0, 1.0, 5),
                                  seed=seed + 1)
        g_ok = max(m_sx, m_sy, m_bal, m_src, spread,
                   abs(fields[0]), abs(fields[1])) < tol
        ok = ok and g_ok
        report.generators.append(GeneratorReport(
            name=gen.name, max_shift_x=m_sx, max_shift_y=m_sy,
            max_balance=m_bal, max_source=m_src,
            field_residuals=tuple(float(f) for f in fields),
            q_spread=spread, passed=g_ok))
    report.passed = ok
    return report


def verify_all_cases(*, tol: float = 1e-10, count: int = 200,
                     seed: int = 20260819) -> list:
    """Run verify_case over all eleven families; returns the reports."""
    return [verify_case(c, tol=tol, count=count, seed=seed) for c in CASES]


# --------------------------------------------------------------------------
# Lie brackets
# --------------------------------------------------------------------------


def _stack(gen: TemplateGenerator, state):
    return np.stack(gen.components(*state))


def bracket_components(A: TemplateGenerator, B: TemplateGenerator,
                       t, x, y, u, v, w):
    """Components of [A, B] = A(B) - B(A) at the given points.

    Directional derivatives of the component functions are fourth-order
    central differences along each of the six coordinates, exact to
    roundoff for the polynomial fiber dependence and accurate to ~1e-12
    for the trigonometric/exponential time profiles (the step 2.5e-4 *
    (1 + |coord|) balances fifth-derivative truncation against roundoff).
    """
    state = [np.asarray(a, dtype=float)
             for a in np.broadcast_arrays(t, x, y, u, v, w)]
    a_here = _stack(A, state)
    b_here = _stack(B, state)
    out = np.zeros_like(a_here)
    for j in range(6):
        h = 2.5e-4 * (1.0 + np.abs(state[j]))
        db = np.zeros_like(a_here)
        da = np.zeros_like(a_here)
        for step, coeff in ((2.0, -1.0), (1.0, 8.0), (-1.0, -8.0),
                            (-2.0, 1.0)):
            shifted = list(state)
            shifted[j] = state[j] + step * h
            db += coeff * _stack(B, shifted)
            da += coeff * _stack(A, shifted)
        db /= 12.0 * h
        da /= 12.0 * h
        out += a_here[j] * db - b_here[j] * da
    return tuple(out)


def components_close(parts, target, t, x, y, u, v, w, *,
                     tol: float = 1e-10) -> float:
    """Max deviation between component arrays and a target combination.

    ``parts`` is the tuple from :func:`bracket_components` (or a
    generator's ``components``); ``target`` is a list of (coefficient,
    generator) pairs, possibly empty for the zero field.  Returns the
    worst absolute difference (the caller compares against ``tol``; the
    value is returned so reports can show the margin).
    """
    state = np.broadcast_arrays(t, x, y, u, v, w)
    want = np.zeros_like(np.stack(parts))
    for coeff, gen in target:
        want += float(coeff) * _stack(gen, list(state))
    got = np.stack(parts)
    err = float(np.max(np.abs(got - want)))
    return err
