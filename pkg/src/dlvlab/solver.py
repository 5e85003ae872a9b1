"""Finite-difference validation solver for the advected bilinear system.

Method of lines on a uniform tensor grid: second-order central stencils
for diffusion and convection (plus a first-order upwind debug variant for
the convection term), and time-dependent Dirichlet boundary data taken
from an exact catalog solution -- the manufactured-solution pattern.  The
solver exists to *validate* the exact solutions and the discretization
against each other: with smooth exact data the central scheme must
converge at second order in h, the upwind variant at first order.

Two explicit time integrators are provided:

``rk4`` (default)
    Classical fourth-order Runge-Kutta with the diffusive step bound
    dt = cfl * min(hx, hy)^2 / (4 dmax), additionally capped by the
    convective bound cfl * min(hx, hy) / vmax.  The combined stability
    estimate 4 dmax dt (1/hx^2 + 1/hy^2) + vmax dt (1/hx + 1/hy) must
    stay below the RK4 real-axis limit 2.785 or the march refuses to
    start.  Boundary nodes are overwritten with the exact trace on every
    stage input.

``rkc``
    Damped second-order Runge-Kutta-Chebyshev (RKC2, in the
    Sommeijer-Shampine-Verwer formulation), the standard explicit scheme
    for diffusion-dominated semidiscretizations: its real-axis stability
    interval grows like 0.65 (s^2 - 1) in the stage count s, so the step
    can be chosen on the convective/accuracy scale dt = cfl * h /
    max(1, vmax) while the stage count absorbs the diffusive spectral
    radius.  Because dt is proportional to h, the O(dt^2) time error
    refines at the same second-order rate as the spatial stencils and
    the observed order of the central scheme remains 2.  Used by the
    large refinement studies, where rk4's dt ~ h^2 step count is
    needlessly expensive for a second-order spatial answer.

Either way a blow-up detected while marching (non-finite values or
magnitudes beyond 1e8), an advective Courant number above 1, a stability
estimate past the integrator's limit, or a Chebyshev stage count past 64
raises :class:`~dlvlab.errors.SolverError`.

A one-dimensional radial variant handles the axisymmetric system with
drift exponent alpha (u_t = d u'' + (d + alpha)/r u' -+ k u v).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from dlvlab.errors import ParameterError, SolverError
from dlvlab.solutions import Solution

__all__ = ["SolveResult", "stencil_rhs", "radial_rhs", "solve_planar",
           "solve_radial", "convergence_study", "ConvergenceReport",
           "observed_orders"]

_BLOWUP = 1e8
_RK4_REAL_AXIS = 2.785
_MAX_STAGES = 64
_RKC_BETA = 0.58  # usable fraction of the damped bound 0.65 (s^2 - 1)
_MIN_POINTS = 8


def _check_scheme(scheme: str) -> str:
    if scheme not in ("central", "upwind"):
        raise ParameterError(
            f"scheme must be 'central' or 'upwind', got {scheme!r}")
    return scheme


# --------------------------------------------------------------------------
# spatial semidiscretization
# --------------------------------------------------------------------------


def stencil_rhs(S: np.ndarray, hx: float, hy: float, velx, vely,
                params, scheme: str = "central") -> np.ndarray:
    """Semidiscrete right-hand side on a planar grid.

    ``S`` has shape (3, ny, nx) and already carries the boundary values
    its stencils read.  Diffusion uses second-order central differences;
    convection is central (default) or first-order upwind; the bilinear
    reaction acts pointwise.  The boundary ring of the result is zero --
    boundary nodes are owned by the Dirichlet closure, not the ODE
    system.
    """
    _check_scheme(scheme)
    S = np.asarray(S, dtype=float)
    dvec = np.array([params.d1, params.d2, params.d3])[:, None, None]
    ix = slice(1, -1)
    C = S[:, ix, ix]
    E = S[:, ix, 2:]
    W = S[:, ix, :-2]
    N = S[:, 2:, ix]
    So = S[:, :-2, ix]
    lap = (E + W - 2.0 * C) / (hx * hx) + (N + So - 2.0 * C) / (hy * hy)
    vxi = np.broadcast_to(np.asarray(velx, dtype=float), S.shape[1:])[ix, ix]
    vyi = np.broadcast_to(np.asarray(vely, dtype=float), S.shape[1:])[ix, ix]
    if scheme == "central":
        adv = vxi * (E - W) / (2.0 * hx) + vyi * (N - So) / (2.0 * hy)
    else:
        adv = (np.maximum(vxi, 0.0) * (C - W) / hx
               + np.minimum(vxi, 0.0) * (E - C) / hx
               + np.maximum(vyi, 0.0) * (C - So) / hy
               + np.minimum(vyi, 0.0) * (N - C) / hy)
    inter = dvec * lap - adv
    prod = params.k * (C[0] * C[1])
    inter[0] -= prod
    inter[1] -= prod
    inter[2] += prod
    out = np.zeros_like(S)
    out[:, ix, ix] = inter
    return out


def radial_rhs(S: np.ndarray, hr: float, drift: np.ndarray, params,
               scheme: str = "central") -> np.ndarray:
    """Semidiscrete right-hand side for the axisymmetric line system.

    ``S`` has shape (3, nr); ``drift`` holds (d_i + alpha)/r on the
    interior nodes, shape (3, nr - 2).  Boundary entries of the result
    are zero.
    """
    _check_scheme(scheme)
    S = np.asarray(S, dtype=float)
    dvec = np.array([params.d1, params.d2, params.d3])[:, None]
    C = S[:, 1:-1]
    E = S[:, 2:]
    W = S[:, :-2]
    inter = dvec * (E + W - 2.0 * C) / (hr * hr)
    if scheme == "central":
        inter += drift * (E - W) / (2.0 * hr)
    else:
        inter += (np.maximum(drift, 0.0) * (C - W) / hr
                  + np.minimum(drift, 0.0) * (E - C) / hr)
    prod = params.k * (C[0] * C[1])
    inter[0] -= prod
    inter[1] -= prod
    inter[2] += prod
    out = np.zeros_like(S)
    out[:, 1:-1] = inter
    return out


# --------------------------------------------------------------------------
# time integrators
# --------------------------------------------------------------------------


def _check_blowup(state: np.ndarray, t: float, n: int, steps: int) -> None:
    peak = float(np.max(np.abs(state)))
    if not np.isfinite(peak) or peak > _BLOWUP:
        raise SolverError(f"march blew up at t={t:.6g} "
                          f"(step {n + 1}/{steps}, peak {peak:.3g})")


def _rk4_march(state, rhs, with_boundary, t0: float, t1: float, steps: int):
    """Classical RK4 with exact Dirichlet traces on every stage input."""
    dt = (t1 - t0) / steps
    check_every = max(steps // 50, 1)
    for n in range(steps):
        t = t0 + n * dt
        k1 = rhs(t, state)
        y2 = with_boundary(state + (0.5 * dt) * k1, t + 0.5 * dt)
        k2 = rhs(t + 0.5 * dt, y2)
        y3 = with_boundary(state + (0.5 * dt) * k2, t + 0.5 * dt)
        k3 = rhs(t + 0.5 * dt, y3)
        y4 = with_boundary(state + dt * k3, t + dt)
        k4 = rhs(t + dt, y4)
        state = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        with_boundary(state, t + dt)
        if n % check_every == 0 or n == steps - 1:
            _check_blowup(state, t + dt, n, steps)
    return state, dt


def _plan_rk4(t0, t1, hx, hy, dmax, vmax, cfl):
    if cfl <= 0.0:
        raise ParameterError("cfl must be positive")
    h = min(hx, hy)
    dt = cfl * h * h / (4.0 * dmax)
    if vmax > 0.0:
        dt = min(dt, cfl * h / vmax)
    steps = max(int(np.ceil((t1 - t0) / dt)), 2)
    dt = (t1 - t0) / steps
    lam = 4.0 * dmax * dt * (1.0 / hx ** 2 + 1.0 / hy ** 2) \
        + vmax * dt * (1.0 / hx + 1.0 / hy)
    if lam > _RK4_REAL_AXIS:
        raise SolverError(
            f"stability estimate {lam:.3f} exceeds the RK4 limit "
            f"{_RK4_REAL_AXIS}; reduce cfl")
    return steps, 4


def _rkc_coefficients(s: int, eps: float = 2.0 / 13.0):
    """Coefficient arrays of the damped s-stage RKC2 scheme.

    Returns (mu_tilde, mu, nu, gamma_tilde, c) indexed by stage 1..s
    (index 0 unused), from the Chebyshev three-term recurrences at
    w0 = 1 + eps/s^2.
    """
    w0 = 1.0 + eps / (s * s)
    tj = np.empty(s + 1)   # T_j(w0)
    dj = np.empty(s + 1)   # T_j'(w0)
    d2j = np.empty(s + 1)  # T_j''(w0)
    tj[0], dj[0], d2j[0] = 1.0, 0.0, 0.0
    tj[1], dj[1], d2j[1] = w0, 1.0, 0.0
    for j in range(2, s + 1):
        tj[j] = 2.0 * w0 * tj[j - 1] - tj[j - 2]
        dj[j] = 2.0 * tj[j - 1] + 2.0 * w0 * dj[j - 1] - dj[j - 2]
        d2j[j] = 4.0 * dj[j - 1] + 2.0 * w0 * d2j[j - 1] - d2j[j - 2]
    w1 = dj[s] / d2j[s]

    b = np.empty(s + 1)
    for j in range(2, s + 1):
        b[j] = d2j[j] / (dj[j] * dj[j])
    b[0] = b[1] = b[2]
    a = 1.0 - b * tj

    mu_t = np.zeros(s + 1)
    mu = np.zeros(s + 1)
    nu = np.zeros(s + 1)
    gam = np.zeros(s + 1)
    c = np.zeros(s + 1)
    mu_t[1] = b[1] * w1
    c[1] = mu_t[1]
    for j in range(2, s + 1):
        mu[j] = 2.0 * b[j] * w0 / b[j - 1]
        nu[j] = -b[j] / b[j - 2]
        mu_t[j] = 2.0 * b[j] * w1 / b[j - 1]
        gam[j] = -a[j - 1] * mu_t[j]
        c[j] = w1 * d2j[j] / dj[j] if j < s else 1.0
    return mu_t, mu, nu, gam, c


def _stage_count(z: float) -> int:
    """Smallest stage count whose stability interval covers z = dt * rho."""
    s = int(np.ceil(np.sqrt(z / _RKC_BETA + 1.0)))
    return max(s, 2)


def _rkc_march(state, rhs, with_boundary, t0: float, t1: float,
               steps: int, s: int):
    """Advance with s-stage RKC2 steps; boundary reset at stage times."""
    dt = (t1 - t0) / steps
    mu_t, mu, nu, gam, c = _rkc_coefficients(s)
    check_every = max(steps // 20, 1)
    for n in range(steps):
        t = t0 + n * dt
        f0 = rhs(t, state)
        older = state
        newer = with_boundary(state + (mu_t[1] * dt) * f0, t + c[1] * dt)
        for j in range(2, s + 1):
            fj = rhs(t + c[j - 1] * dt, newer)
            yj = ((1.0 - mu[j] - nu[j]) * state + mu[j] * newer
                  + nu[j] * older + (mu_t[j] * dt) * fj
                  + (gam[j] * dt) * f0)
            with_boundary(yj, t + c[j] * dt)
            older = newer
            newer = yj
        state = newer
        if n % check_every == 0 or n == steps - 1:
            _check_blowup(state, t + dt, n, steps)
    return state, dt


def _plan_rkc(t0, t1, h, vmax, rho, cfl):
    if cfl <= 0.0:
        raise ParameterError("cfl must be positive")
    dt = cfl * h / max(1.0, vmax)
    steps = max(int(np.ceil((t1 - t0) / dt)), 2)
    dt = (t1 - t0) / steps
    if vmax * dt / h > 1.0:
        raise SolverError(
            f"advective Courant number {vmax * dt / h:.2f} exceeds 1; "
            "reduce cfl")
    s = _stage_count(dt * rho)
    if s > _MAX_STAGES:
        raise SolverError(
            f"step dt={dt:.3e} needs {s} Chebyshev stages (max "
            f"{_MAX_STAGES}); reduce cfl")
    return steps, s


def _plan(integrator, t0, t1, hx, hy, dmax, vmax, rho, cfl):
    if integrator == "rk4":
        return _plan_rk4(t0, t1, hx, hy, dmax, vmax, cfl)
    if integrator == "rkc":
        return _plan_rkc(t0, t1, min(hx, hy), vmax, rho, cfl)
    raise ParameterError(
        f"integrator must be 'rk4' or 'rkc', got {integrator!r}")


def _march(integrator, state, rhs, with_boundary, t0, t1, steps, stages):
    if integrator == "rk4":
        return _rk4_march(state, rhs, with_boundary, t0, t1, steps)
    return _rkc_march(state, rhs, with_boundary, t0, t1, steps, stages)


# --------------------------------------------------------------------------
# result containers
# --------------------------------------------------------------------------


@dataclass
class SolveResult:
    """Final state of a manufactured-solution march."""

    kind: str
    scheme: str
    integrator: str
    t0: float
    t_final: float
    dt: float
    steps: int
    stages: int
    axes: tuple
    fields: tuple
    exact: tuple
    error_linf: float
    error_l2: float
    solution: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "scheme": self.scheme,
                "integrator": self.integrator, "t0": self.t0,
                "t_final": self.t_final, "dt": self.dt, "steps": self.steps,
                "stages": self.stages,
                "shape": [int(n) for n in self.fields[0].shape],
                "error_linf": self.error_linf, "error_l2": self.error_l2,
                "solution": self.solution}


def _grid(lo: float, hi: float, n: int):
    if n < _MIN_POINTS:
        raise ParameterError(
            f"need at least {_MIN_POINTS} grid points per axis, got {n}")
    if not hi > lo:
        raise ParameterError("grid interval must have positive length")
    axis = np.linspace(float(lo), float(hi), int(n))
    return axis, axis[1] - axis[0]


def _errors(fields, exact):
    diff = np.stack([np.abs(np.asarray(f) - np.asarray(e))
                     for f, e in zip(fields, exact)])
    linf = float(np.max(diff))
    l2 = float(np.sqrt(np.mean(diff * diff)))
    return linf, l2


# --------------------------------------------------------------------------
# planar solver
# --------------------------------------------------------------------------


def solve_planar(sol: Solution, *, box=None, nx: int = 65,
                 ny: int | None = None, cfl: float = 0.4,
                 scheme: str = "central",
                 integrator: str = "rk4") -> SolveResult:
    """March the advected system with initial/boundary data from ``sol``.

    ``box`` is ((t0, t1), (xlo, xhi), (ylo, yhi)); by default the
    solution's own box.  Every grid node must be valid for the exact
    solution, which supplies the initial state, the Dirichlet traces at
    every stage time, and the final-time reference for the error.
    """
    scheme = _check_scheme(scheme)
    spec = sol.target_system()
    if spec.kind != "pde_full":
        raise ParameterError(
            f"solve_planar needs a pde_full solution, got {spec.kind}")
    if box is None:
        box = sol.default_box
    (t0, t1), (xlo, xhi), (ylo, yhi) = box
    if not t1 > t0:
        raise ParameterError("time interval must have positive length")
    ny = int(nx) if ny is None else int(ny)
    x, hx = _grid(xlo, xhi, nx)
    y, hy = _grid(ylo, yhi, ny)
    X, Y = np.meshgrid(x, y, indexing="xy")   # shape (ny, nx)

    valid = np.asarray(sol.is_valid(np.full_like(X, t0), X, Y))
    if not bool(np.all(valid)):
        raise ParameterError(
            "exact solution is invalid somewhere on the requested grid; "
            "shrink the box away from poles")

    params = spec.params
    dmax = float(max(params.d1, params.d2, params.d3))

    # stream-induced velocity, constant in time
    sj = spec.stream.jet(X, Y)
    velx = np.broadcast_to(np.asarray(sj.fy, dtype=float), X.shape).copy()
    vely = np.broadcast_to(-np.asarray(sj.fx, dtype=float), X.shape).copy()
    vmax = float(max(np.max(np.abs(velx)), np.max(np.abs(vely))))

    rho = 4.0 * dmax * (1.0 / hx ** 2 + 1.0 / hy ** 2) \
        + vmax * (1.0 / hx + 1.0 / hy)
    steps, stages = _plan(integrator, t0, t1, hx, hy, dmax, vmax, rho, cfl)

    def exact_at(t: float):
        return tuple(np.asarray(f, dtype=float)
                     for f in sol.evaluate(np.full_like(X, t), X, Y))

    # boundary nodes: evaluated separately each stage (full-grid traces
    # would cost more than the stencil work)
    edge = np.zeros_like(X, dtype=bool)
    edge[0, :] = edge[-1, :] = True
    edge[:, 0] = edge[:, -1] = True
    edge_x = X[edge]
    edge_y = Y[edge]

    def with_boundary(S: np.ndarray, t: float) -> np.ndarray:
        vals = sol.evaluate(np.full_like(edge_x, t), edge_x, edge_y)
        for i in range(3):
            S[i][edge] = vals[i]
        return S

    def rhs(t: float, S: np.ndarray) -> np.ndarray:
        return stencil_rhs(S, hx, hy, velx, vely, params, scheme)

    state = np.stack(exact_at(t0))
    state, dt = _march(integrator, state, rhs, with_boundary,
                       t0, t1, steps, stages)

    exact = exact_at(t1)
    linf, l2 = _errors(state, exact)
    return SolveResult(kind="pde_full", scheme=scheme, integrator=integrator,
                       t0=t0, t_final=t1, dt=dt, steps=steps, stages=stages,
                       axes=(x, y), fields=tuple(state), exact=exact,
                       error_linf=linf, error_l2=l2, solution=sol.name)


# --------------------------------------------------------------------------
# radial solver
# --------------------------------------------------------------------------


def solve_radial(sol: Solution, *, box=None, nr: int = 65, cfl: float = 0.4,
                 scheme: str = "central",
                 integrator: str = "rk4") -> SolveResult:
    """March the axisymmetric system with data from a radial solution."""
    scheme = _check_scheme(scheme)
    spec = sol.target_system()
    if spec.kind != "pde_radial":
        raise ParameterError(
            f"solve_radial needs a pde_radial solution, got {spec.kind}")
    if box is None:
        box = sol.default_box
    (t0, t1), (rlo, rhi) = box
    if not t1 > t0:
        raise ParameterError("time interval must have positive length")
    if rlo <= 0.0:
        raise ParameterError("radial grid must stay at r > 0")
    r, hr = _grid(rlo, rhi, nr)

    valid = np.asarray(sol.is_valid(np.full_like(r, t0), r))
    if not bool(np.all(valid)):
        raise ParameterError(
            "exact solution is invalid somewhere on the requested grid")

    params = spec.params
    dmax = float(max(params.d1, params.d2, params.d3))
    alpha = spec.extra["alpha"]
    dvec = np.array([params.d1, params.d2, params.d3])
    drift = (dvec[:, None] + alpha) / r[None, 1:-1]
    vmax = float(np.max(np.abs(drift)))

    rho = 4.0 * dmax / hr ** 2 + vmax / hr
    steps, stages = _plan(integrator, t0, t1, hr, hr, dmax, vmax, rho, cfl)

    def exact_at(t: float):
        return tuple(np.asarray(f, dtype=float)
                     for f in sol.evaluate(np.full_like(r, t), r))

    ends = np.array([r[0], r[-1]])

    def with_boundary(S: np.ndarray, t: float) -> np.ndarray:
        vals = sol.evaluate(np.full_like(ends, t), ends)
        for i in range(3):
            S[i, 0] = vals[i][0]
            S[i, -1] = vals[i][1]
        return S

    def rhs(t: float, S: np.ndarray) -> np.ndarray:
        return radial_rhs(S, hr, drift, params, scheme)

    state = np.stack(exact_at(t0))
    state, dt = _march(integrator, state, rhs, with_boundary,
                       t0, t1, steps, stages)

    exact = exact_at(t1)
    linf, l2 = _errors(state, exact)
    return SolveResult(kind="pde_radial", scheme=scheme,
                       integrator=integrator, t0=t0, t_final=t1, dt=dt,
                       steps=steps, stages=stages, axes=(r,),
                       fields=tuple(state), exact=exact,
                       error_linf=linf, error_l2=l2, solution=sol.name)


# --------------------------------------------------------------------------
# convergence study
# --------------------------------------------------------------------------


def observed_orders(resolutions, errors) -> list:
    """log error ratios between successive refinements."""
    orders = []
    for (n0, e0), (n1, e1) in zip(zip(resolutions, errors),
                                  zip(resolutions[1:], errors[1:])):
        ratio = (n1 - 1) / (n0 - 1)
        if e1 <= 0.0 or e0 <= 0.0:
            raise SolverError("error vanished; cannot estimate an order")
        orders.append(float(np.log(e0 / e1) / np.log(ratio)))
    return orders


@dataclass
class ConvergenceReport:
    """Errors and observed orders across a refinement sequence."""

    kind: str
    scheme: str
    integrator: str
    solution: str
    resolutions: tuple
    errors_linf: tuple
    errors_l2: tuple
    orders: list = field(default_factory=list)

    @property
    def final_order(self) -> float:
        return self.orders[-1]

    def to_json(self) -> dict:
        return {"kind": self.kind, "scheme": self.scheme,
                "integrator": self.integrator, "solution": self.solution,
                "resolutions": [int(n) for n in self.resolutions],
                "errors_linf": list(self.errors_linf),
                "errors_l2": list(self.errors_l2),
                "orders": list(self.orders)}


def convergence_study(sol: Solution, *, resolutions=(33, 65, 129),
                      box=None, cfl: float = 0.4, scheme: str = "central",
                      integrator: str = "rk4") -> ConvergenceReport:
    """Run the matching solver at each resolution and estimate the order.

    Dispatches on the solution's system kind (planar or radial).  With
    either integrator the time error refines at least as fast as the
    spatial truncation, so the observed order reflects the stencils:
    2 for central differences, 1 for upwind convection.
    """
    if len(resolutions) < 2:
        raise ParameterError("need at least two resolutions")
    kind = sol.target_system().kind
    errors_linf = []
    errors_l2 = []
    for n in resolutions:
        if kind == "pde_radial":
            res = solve_radial(sol, box=box, nr=int(n), cfl=cfl,
                               scheme=scheme, integrator=integrator)
        else:
            res = solve_planar(sol, box=box, nx=int(n), cfl=cfl,
                               scheme=scheme, integrator=integrator)
        errors_linf.append(res.error_linf)
        errors_l2.append(res.error_l2)
    report = ConvergenceReport(kind=kind, scheme=scheme,
                               integrator=integrator, solution=sol.name,
                               resolutions=tuple(int(n) for n in resolutions),
                               errors_linf=tuple(errors_linf),
                               errors_l2=tuple(errors_l2))
    report.orders = observed_orders(report.resolutions, report.errors_linf)
    return report
