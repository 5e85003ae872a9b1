"""Moving exact solutions around: flows, equivalence maps, frame changes.

Three distinct ways of producing new solutions from old ones live here,
all exact (jet-generic composition, no interpolation):

* **Group transport** -- pushing a solution forward along the closed flow
  of an admitted symmetry generator.  The transported fields are
  ``fiber(U(flow(-eps, point)))``: for dilation-type generators the fiber
  contracts all three fields by exp(-2 c0 eps); for source generators the
  base point is fixed and the product field gains eps * H; for the
  conditional mixing generators w -> (w + u) e^eps - u (requires d1 = d3,
  or the v variant with d2 = d3).

* **Equivalence maps** -- the scaling/rotation/reflection/shift group of
  the system family itself.  These change the system (diffusivities,
  interaction strength, stream function) along with the solution, so the
  result is certified against the *transformed* spec.  The population
  swap (u, v, d1, d2 exchanged) is included, as is an optional additive
  source on the product field, validated numerically against the
  transformed stream.

* **Frame changes** -- the time-dependent rotation linking the plain
  rotational stream to the convection-free system.  A solution of the
  free system composed with the co-rotating coordinates solves the
  advected system, and vice versa; static profiles of the free system
  become rotating waves.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

import dlvlab.jets as jm
from dlvlab.errors import ParameterError
from dlvlab.jets import Jet2
from dlvlab.solutions import Solution, _wp_any
from dlvlab.streams import StreamFunction
from dlvlab.symmetry import TemplateGenerator, source_residual
from dlvlab.systems import SystemParams, SystemSpec
from dlvlab.weierstrass import real_pole_distance

__all__ = [
    "transport", "TransportedSolution",
    "EquivalenceMap", "random_equivalence", "equivalence_transform",
    "swap_populations", "TransformedStream",
    "corotating_coords", "lab_coords", "lift_rotating", "drop_rotating",
    "StaticWaveProfile",
]


# --------------------------------------------------------------------------
# group transport
# --------------------------------------------------------------------------


class TransportedSolution(Solution):
    """A solution pushed forward along one symmetry generator's flow."""

    def __init__(self, base: Solution, gen: TemplateGenerator, eps: float):
        super().__init__()
        spec = base.target_system()
        if spec.kind != "pde_full":
            raise ParameterError(
                f"transport acts on pde_full solutions, got {spec.kind}")
        if gen.case and spec.stream.case != gen.case:
            raise ParameterError(
                f"generator {gen.name!r} belongs to stream {gen.case!r}, "
                f"but the solution rides {spec.stream.case!r}")
        if gen.c1 and spec.params.d1 != spec.params.d3:
            raise ParameterError("mixing u into w requires d1 = d3")
        if gen.c2 and spec.params.d2 != spec.params.d3:
            raise ParameterError("mixing v into w requires d2 = d3")
        if gen.source is not None and (gen.c0 or gen.c1 or gen.c2):
            raise ParameterError(
                "source generators must not scale or mix fields")
        if gen.closed_flow is None and (gen.c0 or gen.t0
                                        or _moves_space(gen)):
            raise ParameterError(
                f"generator {gen.name!r} moves the base point but has no "
                "closed flow")
        if gen.source is not None:
            res = source_residual(gen.source, spec.stream, spec.params.d3,
                                  *_probe_points())
            if float(np.max(res)) > 1e-8:
                raise ParameterError(
                    f"source of {gen.name!r} does not solve the source "
                    f"equation for stream {spec.stream.case!r} "
                    f"(residual {float(np.max(res)):.2e})")
        self._base = base
        self._gen = gen
        self._eps = float(eps)
        self.name = f"{base.name}~{gen.name}@{self._eps:g}"
        self.frame = base.frame
        self.margin = base.margin
        self.params = dict(base.params, generator=gen.name, eps=self._eps)
        self._spec = spec
        self.default_box = self._pushed_box(base.default_box)

    def target_system(self) -> SystemSpec:
        return self._spec

    # -- geometry ----------------------------------------------------------

    def _back(self, t, x, y):
        """The base point whose value feeds the transported field."""
        if self._gen.closed_flow is None:
            return t, x, y
        return self._gen.flow(-self._eps, t, x, y)

    def _pushed_box(self, box):
        if self._gen.closed_flow is None:
            return box
        corners = np.array(list(itertools.product(*box)), dtype=float).T
        moved = self._gen.flow(self._eps, *corners)
        return tuple((float(np.min(c)), float(np.max(c))) for c in moved)

    # -- fields -------------------------------------------------------------

    def _fields(self, T, X, Y):
        gen, eps = self._gen, self._eps
        u0, v0, w0 = self._base._fields(*self._back(T, X, Y))
        if gen.source is not None:
            return u0, v0, w0 + eps * gen.source(T, X, Y)
        if gen.c1 or gen.c2:
            grow = math.exp(eps)
            if gen.c1:
                return u0, v0, (w0 + u0) * grow - u0
            return u0, v0, (w0 + v0) * grow - v0
        scale = math.exp(-2.0 * gen.c0 * eps)
        return scale * u0, scale * v0, scale * w0

    def is_valid(self, t, x, y, margin: float = 1e-2):
        t0, x0, y0 = self._back(np.asarray(t, dtype=float),
                                np.asarray(x, dtype=float),
                                np.asarray(y, dtype=float))
        return self._base.is_valid(t0, x0, y0, margin=margin)

    def describe(self) -> str:
        return (f"{self._base.name} transported along {self._gen.name} "
                f"by eps = {self._eps:g}")


def _moves_space(gen: TemplateGenerator) -> bool:
    probe = np.array([0.37, -0.81, 1.21])
    vals = [gen.p0(probe), gen.p1(probe), gen.p2(probe)]
    return any(float(np.max(np.abs(v))) > 0.0 for v in vals)


def _probe_points():
    rng = np.random.default_rng(20260819)
    t = rng.uniform(-1.0, 1.0, 25)
    x = rng.uniform(-1.8, 1.8, 25)
    y = rng.uniform(-1.8, 1.8, 25)
    return t, x, y


def transport(base: Solution, gen: TemplateGenerator,
              eps: float) -> Solution:
    """Push ``base`` forward along ``gen``'s one-parameter group."""
    return TransportedSolution(base, gen, eps)


# --------------------------------------------------------------------------
# equivalence maps
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceMap:
    """One element of the system family's equivalence group.

    t* = a0 t + t_shift,
    (x*, y*) = a1/a2 rotation-scale (orient = +1) or its reflection
    (orient = -1) of (x, y), plus shifts; fields scale by a3; the
    diffusivities scale by (a1^2 + a2^2)/a0, the interaction strength by
    1/(a0 a3), and the stream function by +-(a1^2 + a2^2)/a0 plus a
    constant.  Requires a0 > 0, a3 > 0, a1^2 + a2^2 > 0.
    """

    a0: float = 1.0
    a1: float = 1.0
    a2: float = 0.0
    a3: float = 1.0
    t_shift: float = 0.0
    x_shift: float = 0.0
    y_shift: float = 0.0
    orient: int = 1
    psi_shift: float = 0.0

    def __post_init__(self):
        for name in ("a0", "a1", "a2", "a3", "t_shift", "x_shift",
                     "y_shift", "psi_shift"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ParameterError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.a0 <= 0.0:
            raise ParameterError("a0 (time scale) must be positive")
        if self.a3 <= 0.0:
            raise ParameterError("a3 (field scale) must be positive")
        if self.a1 * self.a1 + self.a2 * self.a2 <= 0.0:
            raise ParameterError("(a1, a2) must not both vanish")
        if self.orient not in (1, -1):
            raise ParameterError("orient must be +1 or -1")

    # -- derived quantities -------------------------------------------------

    @property
    def rho2(self) -> float:
        return self.a1 * self.a1 + self.a2 * self.a2

    @property
    def diff_scale(self) -> float:
        return self.rho2 / self.a0

    def map_params(self, params: SystemParams) -> SystemParams:
        lam = self.diff_scale
        return SystemParams(lam * params.d1, lam * params.d2,
                            lam * params.d3,
                            k=params.k / (self.a0 * self.a3))

    # -- point maps ----------------------------------------------------------

    def forward(self, t, x, y):
        """(t, x, y) -> (t*, x*, y*); jet-generic."""
        xs = self.a1 * x + self.a2 * y + self.x_shift
        if self.orient == 1:
            ys = -self.a2 * x + self.a1 * y + self.y_shift
        else:
            ys = self.a2 * x - self.a1 * y + self.y_shift
        return self.a0 * t + self.t_shift, xs, ys

    def inverse(self, ts, xs, ys):
        """(t*, x*, y*) -> (t, x, y); jet-generic."""
        t = (ts - self.t_shift) / self.a0
        dx = xs - self.x_shift
        dy = ys - self.y_shift
        r2 = self.rho2
        if self.orient == 1:
            x = (self.a1 * dx - self.a2 * dy) / r2
            y = (self.a2 * dx + self.a1 * dy) / r2
        else:
            x = (self.a1 * dx + self.a2 * dy) / r2
            y = (self.a2 * dx - self.a1 * dy) / r2
        return t, x, y

    def inverse_jacobian(self):
        """Constant matrix d(x, y)/d(x*, y*) as ((J00, J01), (J10, J11))."""
        r2 = self.rho2
        if self.orient == 1:
            return ((self.a1 / r2, -self.a2 / r2),
                    (self.a2 / r2, self.a1 / r2))
        return ((self.a1 / r2, self.a2 / r2),
                (self.a2 / r2, -self.a1 / r2))

    def to_json(self) -> dict:
        return {"a0": self.a0, "a1": self.a1, "a2": self.a2, "a3": self.a3,
                "t_shift": self.t_shift, "x_shift": self.x_shift,
                "y_shift": self.y_shift, "orient": self.orient,
                "psi_shift": self.psi_shift}


def random_equivalence(seed: int) -> EquivalenceMap:
    """A generic seeded group element (no degenerate parameters)."""
    rng = np.random.default_rng(seed)
    ang = rng.uniform(0.0, 2.0 * np.pi)
    rad = rng.uniform(0.6, 1.6)
    return EquivalenceMap(
        a0=float(rng.uniform(0.5, 2.0)),
        a1=float(rad * np.cos(ang)),
        a2=float(rad * np.sin(ang)),
        a3=float(rng.uniform(0.5, 2.0)),
        t_shift=float(rng.uniform(-1.0, 1.0)),
        x_shift=float(rng.uniform(-1.0, 1.0)),
        y_shift=float(rng.uniform(-1.0, 1.0)),
        orient=int(rng.choice([1, -1])),
        psi_shift=float(rng.uniform(-1.0, 1.0)),
    )


class TransformedStream:
    """The image of a stream function under an equivalence map.

    psi*(x*, y*) = sign * lambda * psi(x, y) + psi_shift with
    lambda = (a1^2 + a2^2)/a0 and sign the orientation; derivative slots
    follow from the constant inverse Jacobian, so the jet stays exact.
    """

    def __init__(self, base: StreamFunction, emap: EquivalenceMap):
        self.base = base
        self.emap = emap
        self.case = f"{base.case}*"
        self.scale = emap.orient * emap.diff_scale

    def _pulled(self, xs, ys):
        t, x, y = self.emap.inverse(0.0, xs, ys)
        return x, y

    def psi(self, xs, ys):
        x, y = self._pulled(np.asarray(xs, dtype=float),
                            np.asarray(ys, dtype=float))
        return self.scale * self.base.psi(x, y) + self.emap.psi_shift

    def jet(self, xs, ys) -> Jet2:
        x, y = self._pulled(np.asarray(xs, dtype=float),
                            np.asarray(ys, dtype=float))
        b = self.base.jet(x, y)
        (j00, j01), (j10, j11) = self.emap.inverse_jacobian()
        s = self.scale
        return Jet2(
            s * b.f + self.emap.psi_shift,
            fx=s * (b.fx * j00 + b.fy * j10),
            fy=s * (b.fx * j01 + b.fy * j11),
            fxx=s * (b.fxx * j00 * j00 + 2.0 * b.fxy * j00 * j10
                     + b.fyy * j10 * j10),
            fxy=s * (b.fxx * j00 * j01 + b.fxy * (j00 * j11 + j01 * j10)
                     + b.fyy * j10 * j11),
            fyy=s * (b.fxx * j01 * j01 + 2.0 * b.fxy * j01 * j11
                     + b.fyy * j11 * j11),
        )

    def is_valid(self, xs, ys, margin: float = 1e-2):
        x, y = self._pulled(np.asarray(xs, dtype=float),
                            np.asarray(ys, dtype=float))
        return self.base.is_valid(x, y, margin=margin)

    def velocity(self, xs, ys):
        j = self.jet(xs, ys)
        return j.fy, -j.fx

    def to_json(self) -> dict:
        return {"case": self.case, "base": self.base.to_json(),
                "map": self.emap.to_json()}

    def __repr__(self):
        return f"TransformedStream({self.base!r}, {self.emap!r})"


class EquivalentSolution(Solution):
    """The image of a solution under an equivalence map (new system)."""

    def __init__(self, base: Solution, emap: EquivalenceMap,
                 extra_source=None):
        super().__init__()
        spec = base.target_system()
        if spec.kind != "pde_full":
            raise ParameterError(
                f"equivalence maps act on pde_full solutions, got {spec.kind}")
        self._base = base
        self._emap = emap
        self._extra = extra_source
        stream = TransformedStream(spec.stream, emap)
        params = emap.map_params(spec.params)
        self._spec = SystemSpec("pde_full", params, stream=stream)
        if extra_source is not None:
            res = source_residual(extra_source, stream, params.d3,
                                  *_probe_points())
            if float(np.max(res)) > 1e-8:
                raise ParameterError(
                    "extra_source does not solve the transformed source "
                    f"equation (residual {float(np.max(res)):.2e})")
        self.name = f"{base.name}*"
        self.frame = base.frame
        self.margin = base.margin
        self.params = dict(base.params, equivalence=emap.to_json())
        box = base.default_box
        corners = np.array(list(itertools.product(*box)), dtype=float).T
        moved = emap.forward(*corners)
        self.default_box = tuple((float(np.min(c)), float(np.max(c)))
                                 for c in moved)

    def target_system(self) -> SystemSpec:
        return self._spec

    def _fields(self, T, X, Y):
        t, x, y = self._emap.inverse(T, X, Y)
        u, v, w = self._base._fields(t, x, y)
        a3 = self._emap.a3
        w = a3 * w
        if self._extra is not None:
            w = w + self._extra(T, X, Y)
        return a3 * u, a3 * v, w

    def is_valid(self, ts, xs, ys, margin: float = 1e-2):
        t, x, y = self._emap.inverse(np.asarray(ts, dtype=float),
                                     np.asarray(xs, dtype=float),
                                     np.asarray(ys, dtype=float))
        return self._base.is_valid(t, x, y, margin=margin)

    def describe(self) -> str:
        return f"equivalence image of {self._base.name}"


def equivalence_transform(base: Solution, emap: EquivalenceMap,
                          extra_source=None) -> Solution:
    """Map a solution (and its system) through an equivalence element."""
    return EquivalentSolution(base, emap, extra_source=extra_source)


class SwappedSolution(Solution):
    """The populations exchanged: (u, v) -> (v, u) with d1 <-> d2."""

    def __init__(self, base: Solution):
        super().__init__()
        spec = base.target_system()
        if spec.kind != "pde_full":
            raise ParameterError(
                f"the swap acts on pde_full solutions, got {spec.kind}")
        p = spec.params
        self._base = base
        self._spec = SystemSpec(
            "pde_full", SystemParams(p.d2, p.d1, p.d3, k=p.k),
            stream=spec.stream)
        self.name = f"{base.name}_swapped"
        self.frame = base.frame
        self.margin = base.margin
        self.params = dict(base.params, swapped=True)
        self.default_box = base.default_box

    def target_system(self) -> SystemSpec:
        return self._spec

    def _fields(self, T, X, Y):
        u, v, w = self._base._fields(T, X, Y)
        return v, u, w

    def is_valid(self, t, x, y, margin: float = 1e-2):
        return self._base.is_valid(t, x, y, margin=margin)

    def describe(self) -> str:
        return f"population swap of {self._base.name}"


def swap_populations(base: Solution) -> Solution:
    """Exchange the two consumed populations (and their diffusivities)."""
    return SwappedSolution(base)


# --------------------------------------------------------------------------
# rotating frame
# --------------------------------------------------------------------------


def corotating_coords(t, x, y):
    """Lab coordinates -> co-rotating coordinates (jet-generic)."""
    s, c = jm.sin(2.0 * t), jm.cos(2.0 * t)
    return x * s + y * c, y * s - x * c


def lab_coords(t, xs, ys):
    """Co-rotating coordinates -> lab coordinates (jet-generic)."""
    s, c = jm.sin(2.0 * t), jm.cos(2.0 * t)
    return s * xs - c * ys, c * xs + s * ys


class RotatingLift(Solution):
    """A convection-free solution composed with the co-rotating frame.

    If (u, v, w)(t, x*, y*) solves the convection-free system, then the
    same fields read at x* = x sin 2t + y cos 2t, y* = y sin 2t - x cos 2t
    solve the system advected by the plain rotational stream.
    """

    frame = "lab"

    def __init__(self, base: Solution):
        super().__init__()
        spec = base.target_system()
        if spec.kind != "pde_rotated_free":
            raise ParameterError(
                f"lift_rotating expects a pde_rotated_free solution, "
                f"got {spec.kind}")
        from dlvlab.streams import make_stream

        self._base = base
        self._spec = SystemSpec("pde_full", spec.params,
                                stream=make_stream("case10", {}))
        self.name = f"{base.name}_corotating"
        self.margin = base.margin
        self.params = dict(base.params)
        (tlo, thi), (xlo, xhi), (ylo, yhi) = base.default_box
        # the frame map is an isometry in space: keep a centred box of the
        # same radius
        r = max(abs(xlo), abs(xhi), abs(ylo), abs(yhi))
        self.default_box = ((tlo, thi), (-r, r), (-r, r))

    def target_system(self) -> SystemSpec:
        return self._spec

    def _fields(self, T, X, Y):
        XS, YS = corotating_coords(T, X, Y)
        return self._base._fields(T, XS, YS)

    def is_valid(self, t, x, y, margin: float = 1e-2):
        t = np.asarray(t, dtype=float)
        xs, ys = corotating_coords(t, np.asarray(x, dtype=float),
                                   np.asarray(y, dtype=float))
        return self._base.is_valid(t, xs, ys, margin=margin)

    def describe(self) -> str:
        return f"{self._base.name} advected by the rotational stream"


class RotatingDrop(Solution):
    """The inverse frame change: un-rotating a rotational-stream solution."""

    frame = "corotating"

    def __init__(self, base: Solution):
        super().__init__()
        spec = base.target_system()
        if spec.kind != "pde_full" or spec.stream.case != "case10":
            raise ParameterError(
                "drop_rotating expects a solution riding the plain "
                "rotational stream")
        self._base = base
        self._spec = SystemSpec("pde_rotated_free", spec.params)
        self.name = f"{base.name}_derotated"
        self.margin = base.margin
        self.params = dict(base.params)
        (tlo, thi), (xlo, xhi), (ylo, yhi) = base.default_box
        r = max(abs(xlo), abs(xhi), abs(ylo), abs(yhi))
        self.default_box = ((tlo, thi), (-r, r), (-r, r))

    def target_system(self) -> SystemSpec:
        return self._spec

    def _fields(self, T, XS, YS):
        X, Y = lab_coords(T, XS, YS)
        return self._base._fields(T, X, Y)

    def is_valid(self, t, xs, ys, margin: float = 1e-2):
        t = np.asarray(t, dtype=float)
        x, y = lab_coords(t, np.asarray(xs, dtype=float),
                          np.asarray(ys, dtype=float))
        return self._base.is_valid(t, x, y, margin=margin)

    def describe(self) -> str:
        return f"{self._base.name} read in the co-rotating frame"


def lift_rotating(base: Solution) -> Solution:
    """Convection-free solution -> rotational-stream solution."""
    return RotatingLift(base)


def drop_rotating(base: Solution) -> Solution:
    """Rotational-stream solution -> convection-free solution."""
    return RotatingDrop(base)


class StaticWaveProfile(Solution):
    """A static plane-wave profile solving the convection-free system.

    shape = "elliptic": u = 6 d2 rho2 P(z), v = 6 d1 rho2 P(z),
    w = (rho2/d3)(-6 d1 d2 P(z) + C3 zeta + C4) with z = zeta + C1,
    zeta = alpha1 x + alpha2 y, and P the Weierstrass function with
    invariants (0, C2); shape = "rational" replaces P by 1/z^2.
    Composing with the co-rotating frame turns these into the rotating
    waves of the catalog.
    """

    frame = "corotating"

    def __init__(self, shape="elliptic", d1=1.0, d2=2.0, d3=3.0,
                 alpha1=0.5, alpha2=0.25, C1=2.0, C2=1.0,
                 C3=-15.0, C4=55.0):
        super().__init__()
        if shape not in ("elliptic", "rational"):
            raise ParameterError(
                f"shape must be 'elliptic' or 'rational', got {shape!r}")
        self.shape = shape
        self.name = f"static_wave_{shape}"
        a1, a2 = float(alpha1), float(alpha2)
        if a1 * a1 + a2 * a2 <= 0.0:
            raise ParameterError("(alpha1, alpha2) must not both vanish")
        if shape == "elliptic" and float(C2) <= 0.0:
            raise ParameterError("C2 (second invariant) must be positive")
        self.a1, self.a2 = a1, a2
        self.rho2 = a1 * a1 + a2 * a2
        self.C1, self.C2 = float(C1), float(C2)
        self.C3, self.C4 = float(C3), float(C4)
        self.margin = 5e-2
        self.params = {"shape": shape, "d1": float(d1), "d2": float(d2),
                       "d3": float(d3), "alpha1": a1, "alpha2": a2,
                       "C1": self.C1, "C2": self.C2, "C3": self.C3,
                       "C4": self.C4}
        self._spec = SystemSpec(
            "pde_rotated_free",
            SystemParams(float(d1), float(d2), float(d3), k=1.0))
        self.default_box = ((-1.5, 1.5), (-1.0, 1.0), (-1.0, 1.0))

    def target_system(self) -> SystemSpec:
        return self._spec

    def _zeta(self, X, Y):
        return self.a1 * X + self.a2 * Y

    def _fields(self, T, X, Y):
        d1 = self.params["d1"]
        d2 = self.params["d2"]
        d3 = self.params["d3"]
        zeta = self._zeta(X, Y)
        z = zeta + self.C1
        if self.shape == "elliptic":
            p = _wp_any(z, self.C2)
        else:
            p = 1.0 / (z * z)
        u = 6.0 * d2 * self.rho2 * p
        v = 6.0 * d1 * self.rho2 * p
        w = (self.rho2 / d3) * (-6.0 * d1 * d2 * p
                                + self.C3 * zeta + self.C4)
        zero = 0.0 * T
        return u + zero, v + zero, w + zero

    def is_valid(self, t, x, y, margin: float = 1e-2):
        z = self._zeta(np.asarray(x, dtype=float),
                       np.asarray(y, dtype=float)) + self.C1
        lim = max(margin, self.margin)
        if self.shape == "elliptic":
            return real_pole_distance(z, self.C2) >= lim
        return np.abs(z) >= lim
