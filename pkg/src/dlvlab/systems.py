"""System specifications and residual certification.

This module defines every differential system the laboratory can test a
candidate solution against, and the machinery that performs the test.  The
flagship system is a three-species reaction--diffusion model on the plane in
which two populations ``u`` and ``v`` are consumed by a bilinear encounter
term while a third field ``w`` receives it, all advected by an incompressible
planar drift derived from a stream function ``psi``::

    u_t + psi_y u_x - psi_x u_y = d1 (u_xx + u_yy) - k u v
    v_t + psi_y v_x - psi_x v_y = d2 (v_xx + v_yy) - k u v
    w_t + psi_y w_x - psi_x w_y = d3 (w_xx + w_yy) + k u v

Alongside it the registry carries the convection-free variant, the radially
symmetric variant produced by angular drift, a stationary variant, and the
invariant-profile reductions (spiral, travelling, swirling, phase-plane,
self-similar, steady radial) that turn the PDE system into ODE systems for
profile functions.  Each entry records how many coordinates and fields it
has, which extra constants it needs, and whether a stream function is part
of the specification.

Residuals are assembled from jets: a candidate supplies second-order Taylor
data (:class:`~dlvlab.jets.Jet2` for PDE kinds, :class:`~dlvlab.jets.Jet1`
for ODE kinds) at each sample point, and ``assemble_residual`` evaluates the
left-hand side of every equation term by term.  Each equation also reports a
scale -- the largest magnitude among its additive terms -- so that residuals
can be judged relative to the size of the quantities being cancelled:

    rel = |residual| / (1 + max_j |term_j|)

``certify`` drives the full test: it draws a seeded sample of admissible
points, evaluates the candidate's own jets there (the "analytic" route), and
re-derives the jets for a deterministic subsample by high-order finite
differences of the candidate's plain ``evaluate`` (the "stencil" route).
The two routes share no differentiation code, so agreement between them
guards against a candidate whose hand-coded derivatives are self-consistent
but wrong.  The stencil route is run at two step sizes and the Richardson
error model of the fourth-order stencils decides how close the routes must
agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json
import math
from typing import Callable, Mapping, Sequence

import numpy as np

from . import jets as jm
from .errors import ParameterError
from .jets import Jet1, Jet2, fd_jet, fd_jet1
from .numerics import SampleSpec, sample_points
from .streams import StreamFunction

__all__ = [
    "SystemParams",
    "SystemSpec",
    "KINDS",
    "KindInfo",
    "assemble_residual",
    "domain_mask",
    "CertReport",
    "certify",
]


# --------------------------------------------------------------------------
# parameters and specifications
# --------------------------------------------------------------------------


def _require_finite(name: str, value: float) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"{name} must be a real number, got {value!r}") from exc
    if not math.isfinite(out):
        raise ParameterError(f"{name} must be finite, got {out!r}")
    return out


@dataclass(frozen=True)
class SystemParams:
    """Diffusivities and interaction strength shared by every system kind.

    ``d1``, ``d2``, ``d3`` are the diffusivities of the three fields and must
    be positive.  ``k`` is the encounter coefficient; ``k = 0`` decouples the
    fields into plain advection--diffusion equations, which is useful as a
    control, so it is allowed.
    """

    d1: float
    d2: float
    d3: float
    k: float = 1.0

    def __post_init__(self) -> None:
        for name in ("d1", "d2", "d3"):
            val = _require_finite(name, getattr(self, name))
            if val <= 0.0:
                raise ParameterError(f"{name} must be positive, got {val}")
            object.__setattr__(self, name, val)
        kv = _require_finite("k", self.k)
        if kv < 0.0:
            raise ParameterError(f"k must be nonnegative, got {kv}")
        object.__setattr__(self, "k", kv)

    def to_json(self) -> dict:
        return {"d1": self.d1, "d2": self.d2, "d3": self.d3, "k": self.k}


@dataclass(frozen=True)
class KindInfo:
    """Registry entry describing one system kind.

    ``slots`` maps the kind's coordinates onto the (t, x, y) slots of
    :class:`Jet2` for second-order kinds with fewer than three coordinates;
    unused slots are padded with zero.  One-coordinate kinds use
    :class:`Jet1` instead and ``slots`` is ``("z",)``.
    """

    n_coords: int
    coord_names: tuple[str, ...]
    field_names: tuple[str, ...]
    slots: tuple[str, ...]
    needs_stream: bool
    extras: tuple[str, ...]
    unit_k_only: bool
    description: str


KINDS: dict[str, KindInfo] = {
    "pde_full": KindInfo(
        3, ("t", "x", "y"), ("u", "v", "w"), ("t", "x", "y"), True, (),
        False, "planar three-species system with stream-function drift"),
    "pde_rotated_free": KindInfo(
        3, ("t", "x", "y"), ("u", "v", "w"), ("t", "x", "y"), False, (),
        False, "convection-free planar three-species system"),
    "pde_radial": KindInfo(
        2, ("t", "r"), ("u", "v", "w"), ("t", "x"), False, ("alpha",),
        False, "radially symmetric system induced by angular drift"),
    "pde_stationary": KindInfo(
        2, ("x", "y"), ("u", "v", "w"), ("x", "y"), False, (),
        False, "time-independent convection-free system"),
    "pde_reduced_spiral": KindInfo(
        2, ("w1", "w2"), ("U", "V", "W"), ("x", "y"), False, ("beta",),
        False, "spiral-invariant reduction of the convection-free system"),
    "pde_reduced_travel": KindInfo(
        2, ("w", "y"), ("U", "V", "W"), ("x", "y"), False, ("t0",),
        False, "travelling-profile reduction of the convection-free system"),
    "pde_reduced_swirl": KindInfo(
        2, ("w1", "w2"), ("U", "V", "W"), ("x", "y"), False, ("t0",),
        False, "swirling-profile reduction of the convection-free system"),
    "ode_phase_triple": KindInfo(
        1, ("z",), ("U", "V", "W"), ("z",), False, ("rho2",),
        False, "phase-line profiles of rotating plane-wave solutions"),
    "ode_phase_scalar": KindInfo(
        1, ("z",), ("U",), ("z",), False, ("rho2", "b21", "b20"),
        False, "scalar integral of the phase-line profile system"),
    "ode_fisher_profile": KindInfo(
        1, ("z",), ("U",), ("z",), False, ("dstar", "alpha1", "b1", "b0"),
        False, "logistic-wave profile equation for equal diffusivities"),
    "ode_travel_triple": KindInfo(
        1, ("z",), ("U", "V", "W"), ("z",), False, ("t0", "alpha1", "alpha2"),
        False, "straight-line profiles of swirl-invariant solutions"),
    "ode_radial_steady": KindInfo(
        1, ("r",), ("u", "v", "w"), ("r",), False, ("alpha",),
        False, "steady states of the radially symmetric system"),
    "ode_radial_third": KindInfo(
        1, ("r",), ("f",), ("r",), False, ("alpha", "C"),
        True, "third-order equation for the steady radial generating profile"),
    "ode_radial_emden": KindInfo(
        1, ("r",), ("f",), ("r",), False, ("C0",),
        True, "steady radial generating profile without angular drift"),
    "ode_radial_alpha": KindInfo(
        1, ("r",), ("f",), ("r",), False, ("alpha", "C1", "C0"),
        True, "steady radial generating profile at unit diffusivities"),
    "ode_selfsim": KindInfo(
        1, ("w",), ("U", "V", "W"), ("w",), False, ("alpha",),
        False, "self-similar profiles of the radially symmetric system"),
}


@dataclass(frozen=True)
class SystemSpec:
    """A concrete system: a kind, its parameters, and kind-specific extras.

    ``stream`` must be provided exactly for the kinds that advect
    (``needs_stream`` in the registry).  ``extra`` must supply exactly the
    constants the kind requires -- e.g. the drift exponent ``alpha`` for the
    radial system or the wave slope ``t0`` for the travelling reduction.
    """

    kind: str
    params: SystemParams
    stream: StreamFunction | None = None
    extra: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ParameterError(
                f"unknown system kind {self.kind!r}; known kinds: "
                + ", ".join(sorted(KINDS)))
        info = KINDS[self.kind]
        if info.needs_stream and self.stream is None:
            raise ParameterError(f"{self.kind} requires a stream function")
        if not info.needs_stream and self.stream is not None:
            raise ParameterError(f"{self.kind} does not take a stream function")
        got = set(self.extra)
        want = set(info.extras)
        if got != want:
            missing = ", ".join(sorted(want - got)) or "none"
            unknown = ", ".join(sorted(got - want)) or "none"
            raise ParameterError(
                f"{self.kind} extras mismatch (missing: {missing}; "
                f"unexpected: {unknown})")
        clean = {name: _require_finite(f"extra[{name!r}]", self.extra[name])
                 for name in info.extras}
        object.__setattr__(self, "extra", clean)
        if info.unit_k_only and self.params.k != 1.0:
            raise ParameterError(
                f"{self.kind} is derived for unit interaction strength; "
                f"got k={self.params.k}")
        if self.kind in ("ode_phase_triple", "ode_phase_scalar") \
                and clean["rho2"] <= 0.0:
            raise ParameterError("rho2 must be positive")
        if self.kind == "ode_fisher_profile" and clean["dstar"] <= 0.0:
            raise ParameterError("dstar must be positive")
        if self.kind == "ode_travel_triple":
            t0, a1, a2 = clean["t0"], clean["alpha1"], clean["alpha2"]
            if t0 * t0 * a1 * a1 + a2 * a2 <= 0.0:
                raise ParameterError(
                    "ode_travel_triple needs t0^2 alpha1^2 + alpha2^2 > 0")

    @property
    def info(self) -> KindInfo:
        return KINDS[self.kind]

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "params": self.params.to_json(),
            "extra": dict(self.extra),
        }
        if self.stream is not None:
            out["stream"] = self.stream.to_json()
        return out


# --------------------------------------------------------------------------
# residual assembly
# --------------------------------------------------------------------------


def _tally(terms: Sequence) -> tuple:
    """Sum the signed terms of one equation and record the largest |term|."""
    total = terms[0]
    scale = np.abs(np.asarray(terms[0], dtype=float))
    for term in terms[1:]:
        total = total + term
        scale = np.maximum(scale, np.abs(np.asarray(term, dtype=float)))
    return total, scale


def assemble_residual(spec: SystemSpec, coords: Sequence, jets: Sequence):
    """Evaluate every equation of ``spec`` from per-field jets.

    ``coords`` holds one array per coordinate of the kind, ``jets`` one jet
    per field (``Jet2`` for two- and three-coordinate kinds in the slot
    convention of the registry, ``Jet1`` for one-coordinate kinds).  Returns
    ``(residuals, scales)`` -- two lists with one array per equation, where
    ``scales[i]`` is the largest magnitude among the additive terms of
    equation ``i`` at each point.
    """
    p = spec.params
    d1, d2, d3, k = p.d1, p.d2, p.d3, p.k
    ex = spec.extra
    kind = spec.kind

    if kind in ("pde_full", "pde_rotated_free"):
        ju, jv, jw = jets
        t, x, y = coords
        uv = k * ju.f * jv.f
        if kind == "pde_full":
            js = spec.stream.jet(x, y)
            psx, psy = js.fx, js.fy
            conv = lambda j: [psy * j.fx, -psx * j.fy]
        else:
            conv = lambda j: []
        r1, s1 = _tally([ju.ft, *conv(ju), -d1 * (ju.fxx + ju.fyy), uv])
        r2, s2 = _tally([jv.ft, *conv(jv), -d2 * (jv.fxx + jv.fyy), uv])
        r3, s3 = _tally([jw.ft, *conv(jw), -d3 * (jw.fxx + jw.fyy), -uv])
        return [r1, r2, r3], [s1, s2, s3]

    if kind == "pde_radial":
        ju, jv, jw = jets
        t, r = coords
        alpha = ex["alpha"]
        uv = k * ju.f * jv.f
        rows = []
        for j, d, sgn in ((ju, d1, 1.0), (jv, d2, 1.0), (jw, d3, -1.0)):
            rows.append(_tally([j.ft, -d * j.fxx, -(d + alpha) * j.fx / r,
                                sgn * uv]))
        return [row[0] for row in rows], [row[1] for row in rows]

    if kind == "pde_stationary":
        ju, jv, jw = jets
        uv = k * ju.f * jv.f
        r1, s1 = _tally([d1 * (ju.fxx + ju.fyy), -uv])
        r2, s2 = _tally([d2 * (jv.fxx + jv.fyy), -uv])
        r3, s3 = _tally([d3 * (jw.fxx + jw.fyy), uv])
        return [r1, r2, r3], [s1, s2, s3]

    if kind == "pde_reduced_spiral":
        ju, jv, jw = jets
        w1, w2 = coords
        beta = ex["beta"]
        ang = 1.0 + beta * beta
        uv = k * ju.f * jv.f
        rows = []
        for j, d, react in ((ju, d1, [-uv, ju.f]), (jv, d2, [-uv, jv.f]),
                            (jw, d3, [uv, jw.f])):
            rows.append(_tally([4.0 * d * w1 * j.fxx,
                                d * ang * j.fyy / w1,
                                4.0 * beta * d * j.fxy,
                                (4.0 * d + w1) * j.fx,
                                *react]))
        return [row[0] for row in rows], [row[1] for row in rows]

    if kind == "pde_reduced_travel":
        ju, jv, jw = jets
        t0 = ex["t0"]
        uv = k * ju.f * jv.f
        rows = []
        for j, d, sgn in ((ju, d1, -1.0), (jv, d2, -1.0), (jw, d3, 1.0)):
            rows.append(_tally([d * (t0 * t0 * j.fxx + j.fyy), -j.fx,
                                sgn * uv]))
        return [row[0] for row in rows], [row[1] for row in rows]

    if kind == "pde_reduced_swirl":
        ju, jv, jw = jets
        w1, w2 = coords
        t0 = ex["t0"]
        uv = k * ju.f * jv.f
        rows = []
        for j, d, sgn in ((ju, d1, -1.0), (jv, d2, -1.0), (jw, d3, 1.0)):
            rows.append(_tally([4.0 * d * w1 * j.fxx,
                                d * t0 * t0 * j.fyy / w1,
                                4.0 * d * j.fx,
                                -j.fy,
                                sgn * uv]))
        return [row[0] for row in rows], [row[1] for row in rows]

    if kind == "ode_phase_triple":
        ju, jv, jw = jets
        rho2 = ex["rho2"]
        uv = k * ju.f * jv.f
        r1, s1 = _tally([d1 * rho2 * ju.dd, -uv])
        r2, s2 = _tally([d2 * rho2 * jv.dd, -uv])
        r3, s3 = _tally([d3 * rho2 * jw.dd, uv])
        return [r1, r2, r3], [s1, s2, s3]

    if kind == "ode_phase_scalar":
        (ju,) = jets
        (z,) = coords
        rho2, b21, b20 = ex["rho2"], ex["b21"], ex["b20"]
        ds1, ds2 = d1 * rho2, d2 * rho2
        r1, s1 = _tally([ds1 * ds2 * ju.dd,
                         -k * ju.f * (ds1 * ju.f + b21 * z + b20)])
        return [r1], [s1]

    if kind == "ode_fisher_profile":
        (ju,) = jets
        (z,) = coords
        dstar, a1, b1, b0 = ex["dstar"], ex["alpha1"], ex["b1"], ex["b0"]
        hom = b1 * np.exp(a1 * np.asarray(z, dtype=float) / dstar)
        r1, s1 = _tally([dstar * ju.dd, -a1 * ju.d,
                         -k * ju.f * (ju.f - hom - b0)])
        return [r1], [s1]

    if kind == "ode_travel_triple":
        ju, jv, jw = jets
        t0, a1, a2 = ex["t0"], ex["alpha1"], ex["alpha2"]
        fac = t0 * t0 * a1 * a1 + a2 * a2
        uv = k * ju.f * jv.f
        rows = []
        for j, d, sgn in ((ju, d1, -1.0), (jv, d2, -1.0), (jw, d3, 1.0)):
            rows.append(_tally([d * fac * j.dd, -a1 * j.d, sgn * uv]))
        return [row[0] for row in rows], [row[1] for row in rows]

    if kind == "ode_radial_steady":
        ju, jv, jw = jets
        (r,) = coords
        alpha = ex["alpha"]
        uv = k * ju.f * jv.f
        rows = []
        for j, d, sgn in ((ju, d1, -1.0), (jv, d2, -1.0), (jw, d3, 1.0)):
            rows.append(_tally([d * j.dd, (d + alpha) * j.d / r, sgn * uv]))
        return [row[0] for row in rows], [row[1] for row in rows]

    if kind == "ode_radial_third":
        (jf,) = jets
        (r,) = coords
        alpha, C = ex["alpha"], ex["C"]
        r2 = r * r
        r1, s1 = _tally([
            d1 * d2 * r2 * jf.ddd,
            (3.0 * d1 * d2 + (d1 + d2) * alpha) * r * jf.dd,
            -d1 * d2 * r * r2 * jf.d * jf.d,
            -alpha * (d1 + d2) * r2 * jf.f * jf.d,
            -2.0 * C * d1 * d2 * r2 * jf.d,
            (alpha + d1) * (alpha + d2) * jf.d,
            -alpha * alpha * r * jf.f * jf.f,
            -alpha * C * (d1 + d2) * r * jf.f,
            -C * C * d1 * d2 * r,
        ])
        return [r1], [s1]

    if kind == "ode_radial_emden":
        (jf,) = jets
        (r,) = coords
        C0 = ex["C0"]
        r1, s1 = _tally([r * jf.dd, jf.d, -r * jf.f * jf.f,
                         (C0 / d2) * r * jf.f])
        return [r1], [s1]

    if kind == "ode_radial_alpha":
        (jf,) = jets
        (r,) = coords
        alpha, C1, C0 = ex["alpha"], ex["C1"], ex["C0"]
        rr = np.asarray(r, dtype=float)
        lin = C1 * rr ** (-alpha) + C0
        r1, s1 = _tally([r * jf.dd, (1.0 + alpha) * jf.d,
                         -r * jf.f * jf.f, -lin * r * jf.f])
        return [r1], [s1]

    if kind == "ode_selfsim":
        ju, jv, jw = jets
        (w,) = coords
        alpha = ex["alpha"]
        uv = k * ju.f * jv.f
        rows = []
        for j, d, sgn in ((ju, d1, -1.0), (jv, d2, -1.0), (jw, d3, 1.0)):
            rows.append(_tally([4.0 * d * w * j.dd,
                                (4.0 * d + 2.0 * alpha + w) * j.d,
                                j.f, sgn * uv]))
        return [row[0] for row in rows], [row[1] for row in rows]

    raise ParameterError(f"no residual assembly for kind {spec.kind!r}")


def domain_mask(spec: SystemSpec, coords: Sequence, margin: float = 1e-2):
    """Boolean mask of points where the system itself is well defined.

    This is the system-side admissibility (positive similarity variables,
    radii away from the axis, stream-function domain); candidates impose
    their own validity on top of it.
    """
    shape = np.broadcast(*[np.asarray(c) for c in coords]).shape
    ok = np.ones(shape, dtype=bool)
    if spec.kind == "pde_full":
        t, x, y = coords
        ok = ok & spec.stream.is_valid(x, y, margin=margin)
    elif spec.kind in ("pde_reduced_spiral", "pde_reduced_swirl"):
        w1 = np.asarray(coords[0], dtype=float)
        ok = ok & (w1 >= margin)
    elif spec.kind == "pde_radial":
        r = np.asarray(coords[1], dtype=float)
        ok = ok & (np.abs(r) >= margin)
    elif spec.kind in ("ode_radial_steady", "ode_radial_third",
                       "ode_radial_emden", "ode_radial_alpha"):
        r = np.asarray(coords[0], dtype=float)
        ok = ok & (np.abs(r) >= margin)
    elif spec.kind == "ode_selfsim":
        w = np.asarray(coords[0], dtype=float)
        ok = ok & (w >= margin)
    return ok


# --------------------------------------------------------------------------
# certification
# --------------------------------------------------------------------------


def _analytic_jets(sol, spec: SystemSpec, coords):
    out = sol.eval_jet(*coords)
    n_fields = len(spec.info.field_names)
    if len(out) != n_fields:
        raise ParameterError(
            f"eval_jet returned {len(out)} jets, expected {n_fields}")
    return out


def _stencil_jets(sol, spec: SystemSpec, coords, h: float):
    """Re-derive the candidate's jets by finite differences of evaluate()."""
    info = spec.info
    if info.n_coords == 1:
        (z,) = coords
        vals = [fd_jet1(lambda s, i=i: _field(sol, i, (s,)), z, h=h)
                for i in range(len(info.field_names))]
        return vals
    pads = {"t": 0, "x": 1, "y": 2}
    idx = [pads[s] for s in info.slots]
    base = [np.zeros(np.shape(coords[0])) for _ in range(3)]
    for slot, c in zip(idx, coords):
        base[slot] = np.asarray(c, dtype=float)

    def wrap(i):
        def func(t, x, y):
            args3 = (t, x, y)
            return _field(sol, i, tuple(args3[s] for s in idx))
        return func

    return [fd_jet(wrap(i), base[0], base[1], base[2], h=h)
            for i in range(len(info.field_names))]


def _field(sol, i: int, coords):
    vals = sol.evaluate(*coords)
    return vals[i]


@dataclass
class CertReport:
    """Outcome of one certification run."""

    kind: str
    passed: bool
    tol: float
    n_points: int
    seed: int
    max_rel: float
    max_abs: float
    worst_point: tuple
    worst_equation: int
    fd_points: int
    fd_worst_ratio: float
    fd_passed: bool
    solution: str

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "passed": bool(self.passed),
            "tol": self.tol,
            "n_points": self.n_points,
            "seed": self.seed,
            "max_rel": self.max_rel,
            "max_abs": self.max_abs,
            "worst_point": list(self.worst_point),
            "worst_equation": self.worst_equation,
            "fd_points": self.fd_points,
            "fd_worst_ratio": self.fd_worst_ratio,
            "fd_passed": bool(self.fd_passed),
            "solution": self.solution,
        }

    def __str__(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def certify(sol, *, tol: float = 1e-9, sample: SampleSpec | None = None,
            fd_fraction: float = 0.1, fd_h: float = 1e-2,
            margin: float | None = None) -> CertReport:
    """Test a candidate solution against its target system.

    Draws ``sample`` (defaulting to the candidate's ``default_box`` with the
    standard count and seed), keeps the points admissible for both the
    system and the candidate, and evaluates the relative residual of every
    equation from the candidate's analytic jets.  A deterministic subsample
    of roughly ``fd_fraction`` of the points is re-checked with jets built
    by fourth-order finite differences of ``evaluate`` at steps ``fd_h`` and
    ``fd_h / 2``; the two-step Richardson estimate bounds how far the
    stencil route may sit from the analytic route.

    The report passes only if the largest relative residual is below
    ``tol`` and the stencil route agrees within its error allowance.
    """
    spec = sol.target_system()
    info = spec.info
    if sample is None:
        sample = SampleSpec(box=sol.default_box)
    if margin is None:
        margin = getattr(sol, "margin", 1e-2)

    def accept(*coords):
        return domain_mask(spec, coords, margin=margin) \
            & sol.is_valid(*coords, margin=margin)

    pts = sample_points(sample, accept=accept)
    coords = tuple(np.asarray(col, dtype=float) for col in zip(*pts))

    jets_ad = _analytic_jets(sol, spec, coords)
    res, scales = assemble_residual(spec, coords, jets_ad)
    res = [np.broadcast_to(np.asarray(r, dtype=float), coords[0].shape)
           for r in res]
    scales = [np.broadcast_to(np.asarray(s, dtype=float), coords[0].shape)
              for s in scales]
    rel_stack = np.stack([np.abs(r) / (1.0 + s) for r, s in zip(res, scales)])
    flat = int(np.argmax(rel_stack))
    worst_eq, worst_idx = np.unravel_index(flat, rel_stack.shape)
    max_rel = float(rel_stack[worst_eq, worst_idx])
    max_abs = float(max(np.max(np.abs(r)) for r in res))
    worst_point = tuple(float(c[worst_idx]) for c in coords)

    # --- stencil cross-check on a deterministic subsample ----------------
    if fd_fraction > 0.0:
        step = max(1, int(round(1.0 / fd_fraction)))
        # The stencil reaches ~2.5 fd_h (1 + |coord|) away from each point,
        # so points that barely clear the validity margin can put stencil
        # nodes across a pole.  The subsample therefore demands a wider
        # margin; the analytic residual above still covers the near-margin
        # points.
        margin_fd = max(margin, 10.0 * fd_h)
        sub_all = tuple(c[::step] for c in coords)
        keep = np.asarray(domain_mask(spec, sub_all, margin=margin_fd)
                          & sol.is_valid(*sub_all, margin=margin_fd))
        sub = tuple(c[keep] for c in sub_all)
        n_fd = sub[0].size
        res_ad_sub = [r[::step][keep] for r in res]
        scale_sub = [s[::step][keep] for s in scales]
        if n_fd == 0:
            jets_h = jets_h2 = None
            res_h = res_h2 = [np.empty(0)] * len(res)
        else:
            jets_h = _stencil_jets(sol, spec, sub, fd_h)
            jets_h2 = _stencil_jets(sol, spec, sub, fd_h / 2.0)
            res_h = assemble_residual(spec, sub, jets_h)[0]
            res_h2 = assemble_residual(spec, sub, jets_h2)[0]
        worst_ratio = 0.0
        # Fourth-order stencils: err(h/2) ~ (R_h - R_h/2)/15, valid while
        # truncation dominates.  Second-derivative stencils also carry
        # roundoff of order eps/h^2 times the size of the terms, which is
        # why the default step is 1e-2 and the allowance keeps an explicit
        # roundoff floor.
        floor = 300.0 * np.finfo(float).eps / (fd_h * fd_h)
        for r_ad, r_h, r_h2, s in zip(res_ad_sub, res_h, res_h2, scale_sub):
            r_h = np.asarray(r_h, dtype=float)
            r_h2 = np.asarray(r_h2, dtype=float)
            if r_h.size == 0:
                continue
            allow = 10.0 * np.abs(r_h - r_h2) / 15.0 + floor * (1.0 + s)
            ratio = np.abs(r_h2 - r_ad) / allow
            worst_ratio = max(worst_ratio, float(np.max(ratio)))
        fd_passed = worst_ratio <= 1.0
    else:
        n_fd = 0
        worst_ratio = 0.0
        fd_passed = True

    return CertReport(
        kind=spec.kind,
        passed=bool(max_rel < tol and fd_passed),
        tol=tol,
        n_points=int(coords[0].size),
        seed=sample.seed,
        max_rel=max_rel,
        max_abs=max_abs,
        worst_point=worst_point,
        worst_equation=int(worst_eq),
        fd_points=int(n_fd),
        fd_worst_ratio=worst_ratio,
        fd_passed=bool(fd_passed),
        solution=getattr(sol, "name", sol.__class__.__name__),
    )
