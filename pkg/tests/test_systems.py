"""Tests for system specifications and residual certification.

The centrepiece here is a family of manufactured-equivalence checks: a
smooth profile that is NOT a solution is pushed through each invariant
ansatz with exact jet arithmetic, and the parent system's residual is
compared against the reduced system's residual.  The reductions were
derived by hand, so these identities holding to machine precision for
arbitrary profiles is strong evidence both residual assemblies are right.
"""

import numpy as np
import pytest

from dlvlab import jets as jm
from dlvlab.errors import ParameterError
from dlvlab.jets import Jet1, Jet2
from dlvlab.numerics import SampleSpec
from dlvlab.streams import FChoice, make_stream
from dlvlab.systems import (KINDS, SystemParams, SystemSpec,
                            assemble_residual, certify, domain_mask)


# --------------------------------------------------------------------------
# manufactured profiles (deliberately NOT solutions of anything)
# --------------------------------------------------------------------------


def _trio(a, b):
    """Three smooth fields of two jet (or plain) arguments."""
    u = jm.sin(a) * jm.cos(b) + 2.0
    v = jm.exp(0.2 * b) + 0.3 * a
    w = jm.cos(a + 0.5 * b) + 1.5
    return u, v, w


def _trio1(a):
    """Three smooth fields of one jet (or plain) argument."""
    u = jm.sin(a) + 2.0
    v = jm.exp(-0.4 * a) + 0.5
    w = jm.cos(0.7 * a) + 1.2
    return u, v, w


def _lab_points():
    t = np.array([0.7, 1.1, 1.6, 2.2, 0.9, 1.4])
    x = np.array([0.5, 0.9, 1.3, 0.7, 1.7, 1.1])
    y = np.array([-1.1, 0.4, 0.8, -0.6, 1.2, -0.3])
    return t, x, y


PARAMS = SystemParams(1.0, 2.0, 3.0, k=1.3)


def _allclose(a, b):
    np.testing.assert_allclose(np.asarray(a, dtype=float),
                               np.asarray(b, dtype=float),
                               rtol=1e-12, atol=1e-11)


# --------------------------------------------------------------------------
# reduction equivalences
# --------------------------------------------------------------------------


def test_spiral_reduction_matches_parent():
    # u(t,x,y) = U(w1, w2)/t with w1 = (x^2+y^2)/t, w2 = atan(y/x) + beta ln r
    # must satisfy: parent residual = -(reduced residual)/t^2, identically.
    beta = 0.7
    t, x, y = _lab_points()
    T, X, Y = Jet2.vars_at(t, x, y)
    r2 = X * X + Y * Y
    w1 = r2 / T
    w2 = jm.arctan(Y / X) + (beta / 2.0) * jm.log(r2)
    fields = tuple(f / T for f in _trio(w1, w2))
    spec_parent = SystemSpec("pde_rotated_free", PARAMS)
    res_parent, _ = assemble_residual(spec_parent, (t, x, y), fields)

    w1v, w2v = w1.f, w2.f
    _, A, B = Jet2.vars_at(np.zeros_like(w1v), w1v, w2v)
    spec_red = SystemSpec("pde_reduced_spiral", PARAMS, extra={"beta": beta})
    res_red, _ = assemble_residual(spec_red, (w1v, w2v), _trio(A, B))

    for rp, rr in zip(res_parent, res_red):
        _allclose(rp, -rr / t ** 2)


def test_travel_reduction_matches_parent():
    # u(t,x,y) = U(w, y) with w = t - t0 x: parent residual = -(reduced).
    t0 = 0.8
    t, x, y = _lab_points()
    T, X, Y = Jet2.vars_at(t, x, y)
    fields = _trio(T - t0 * X, Y)
    spec_parent = SystemSpec("pde_rotated_free", PARAMS)
    res_parent, _ = assemble_residual(spec_parent, (t, x, y), fields)

    wv = t - t0 * x
    _, A, B = Jet2.vars_at(np.zeros_like(wv), wv, y)
    spec_red = SystemSpec("pde_reduced_travel", PARAMS, extra={"t0": t0})
    res_red, _ = assemble_residual(spec_red, (wv, y), _trio(A, B))

    for rp, rr in zip(res_parent, res_red):
        _allclose(rp, -rr)


def test_swirl_reduction_matches_parent():
    # u(t,x,y) = U(w1, w2), w1 = x^2+y^2, w2 = t + t0 atan(y/x):
    # parent residual = -(reduced residual).
    t0 = 1.3
    t, x, y = _lab_points()
    T, X, Y = Jet2.vars_at(t, x, y)
    w1 = X * X + Y * Y
    w2 = T + t0 * jm.arctan(Y / X)
    fields = _trio(w1, w2)
    spec_parent = SystemSpec("pde_rotated_free", PARAMS)
    res_parent, _ = assemble_residual(spec_parent, (t, x, y), fields)

    w1v, w2v = w1.f, w2.f
    _, A, B = Jet2.vars_at(np.zeros_like(w1v), w1v, w2v)
    spec_red = SystemSpec("pde_reduced_swirl", PARAMS, extra={"t0": t0})
    res_red, _ = assemble_residual(spec_red, (w1v, w2v), _trio(A, B))

    for rp, rr in zip(res_parent, res_red):
        _allclose(rp, -rr)


def test_stationary_reduction_matches_parent():
    # Time-independent fields: parent residual = -(stationary residual).
    t, x, y = _lab_points()
    T, X, Y = Jet2.vars_at(t, x, y)
    fields = _trio(X, Y)
    spec_parent = SystemSpec("pde_rotated_free", PARAMS)
    res_parent, _ = assemble_residual(spec_parent, (t, x, y), fields)

    _, A, B = Jet2.vars_at(np.zeros_like(x), x, y)
    spec_red = SystemSpec("pde_stationary", PARAMS)
    res_red, _ = assemble_residual(spec_red, (x, y), _trio(A, B))

    for rp, rr in zip(res_parent, res_red):
        _allclose(rp, -rr)


def test_radial_reduction_matches_streamed_parent():
    # A rotationally symmetric field u(t, r) in the advected system whose
    # stream is F(r^2) + alpha*atan(x/y) satisfies exactly the radial
    # system with drift exponent alpha: residuals agree point by point.
    alpha = 0.9
    stream = make_stream("case1", dict(alpha=alpha, beta=0.0),
                         F=FChoice("sin"))
    t, x, y = _lab_points()
    T, X, Y = Jet2.vars_at(t, x, y)
    R = jm.sqrt(X * X + Y * Y)
    fields = _trio(T, R)
    spec_parent = SystemSpec("pde_full", PARAMS, stream=stream)
    res_parent, _ = assemble_residual(spec_parent, (t, x, y), fields)

    rv = np.sqrt(x * x + y * y)
    T2, R2, _ = Jet2.vars_at(t, rv, np.zeros_like(rv))
    spec_rad = SystemSpec("pde_radial", PARAMS, extra={"alpha": alpha})
    res_rad, _ = assemble_residual(spec_rad, (t, rv), _trio(T2, R2))

    for rp, rr in zip(res_parent, res_rad):
        _allclose(rp, rr)


def test_selfsim_reduction_matches_radial():
    # u(t, r) = U(w)/t with w = r^2/t: radial residual = -(profile
    # residual)/t^2 for the matching drift exponent.
    alpha = 0.6
    t = np.array([0.8, 1.2, 1.7, 2.5])
    r = np.array([0.9, 1.4, 0.6, 1.1])
    T2, R2, _ = Jet2.vars_at(t, r, np.zeros_like(r))
    W1 = R2 * R2 / T2
    fields = tuple(f / T2 for f in _trio1(W1))
    spec_rad = SystemSpec("pde_radial", PARAMS, extra={"alpha": alpha})
    res_rad, _ = assemble_residual(spec_rad, (t, r), fields)

    wv = r * r / t
    Z = Jet1.var_at(wv)
    spec_ss = SystemSpec("ode_selfsim", PARAMS, extra={"alpha": alpha})
    res_ss, _ = assemble_residual(spec_ss, (wv,), _trio1(Z))

    for rp, rr in zip(res_rad, res_ss):
        _allclose(rp, -rr / t ** 2)


def test_steady_profiles_match_radial():
    # Time-independent radial fields: radial residual = -(steady residual).
    alpha = -0.4
    t = np.array([0.5, 1.0, 2.0, 3.0])
    r = np.array([0.7, 1.3, 0.9, 1.8])
    T2, R2, _ = Jet2.vars_at(t, r, np.zeros_like(r))
    fields = _trio1(R2)
    spec_rad = SystemSpec("pde_radial", PARAMS, extra={"alpha": alpha})
    res_rad, _ = assemble_residual(spec_rad, (t, r), fields)

    Z = Jet1.var_at(r)
    spec_st = SystemSpec("ode_radial_steady", PARAMS, extra={"alpha": alpha})
    res_st, _ = assemble_residual(spec_st, (r,), _trio1(Z))

    for rp, rr in zip(res_rad, res_st):
        _allclose(rp, -rr)


def test_travel_triple_matches_swirl_profiles():
    # U(z) with z = a1 w2 + a2 y ... exercised instead through the parent
    # chain: straight-line profiles U(a1*w + a2*y) of the travelling
    # reduction satisfy the phase ODE system with the squared slope factor.
    t0, a1, a2 = 0.8, 0.6, 1.1
    w = np.array([0.3, 1.0, -0.7, 1.9])
    y = np.array([-0.5, 0.8, 1.4, 0.2])
    _, A, B = Jet2.vars_at(np.zeros_like(w), w, y)
    Zj = a1 * A + a2 * B
    fields = _trio1(Zj)
    spec_tr = SystemSpec("pde_reduced_travel", PARAMS, extra={"t0": t0})
    res_tr, _ = assemble_residual(spec_tr, (w, y), fields)

    zv = a1 * w + a2 * y
    Z = Jet1.var_at(zv)
    spec_tt = SystemSpec("ode_travel_triple", PARAMS,
                         extra={"t0": t0, "alpha1": a1, "alpha2": a2})
    res_tt, _ = assemble_residual(spec_tt, (zv,), _trio1(Z))

    for rp, rr in zip(res_tr, res_tt):
        _allclose(rp, rr)


def test_phase_scalar_integral_consistency():
    # If d2* V = d1* U + b21 z + b20 (the first integral), the scalar
    # second-order equation residual equals d2* times the U-equation
    # residual of the triple system.
    rho2 = 0.52
    b21, b20 = 0.7, -0.4
    d1s, d2s = PARAMS.d1 * rho2, PARAMS.d2 * rho2
    z = np.array([-1.0, -0.2, 0.5, 1.3])
    Z = Jet1.var_at(z)
    U = jm.sin(Z) + 2.0
    V = (d1s * U + b21 * Z + b20) / d2s
    W = Jet1.const(np.zeros_like(z))

    spec_tri = SystemSpec("ode_phase_triple", PARAMS, extra={"rho2": rho2})
    res_tri, _ = assemble_residual(spec_tri, (z,), (U, V, W))
    spec_sc = SystemSpec("ode_phase_scalar", PARAMS,
                         extra={"rho2": rho2, "b21": b21, "b20": b20})
    res_sc, _ = assemble_residual(spec_sc, (z,), (U,))

    _allclose(res_sc[0], d2s * res_tri[0])


# --------------------------------------------------------------------------
# hand-checked exact zeros
# --------------------------------------------------------------------------


def test_stationary_harmonic_tail_is_exact():
    # u = v = 0 and w harmonic solve the stationary system exactly.
    x = np.array([0.3, 1.0, -0.7])
    y = np.array([0.4, -1.2, 0.9])
    _, X, Y = Jet2.vars_at(np.zeros_like(x), x, y)
    zero = Jet2.const(np.zeros_like(x))
    w = X * X - Y * Y
    spec = SystemSpec("pde_stationary", PARAMS)
    res, _ = assemble_residual(spec, (x, y), (zero, zero, w))
    for r in res:
        assert np.all(np.asarray(r) == 0.0)


def test_phase_triple_linear_tail_is_exact():
    z = np.array([-0.5, 0.2, 1.1])
    Z = Jet1.var_at(z)
    zero = Jet1.const(np.zeros_like(z))
    W = 0.7 * Z + 1.9
    spec = SystemSpec("ode_phase_triple", PARAMS, extra={"rho2": 2.0})
    res, _ = assemble_residual(spec, (z,), (zero, zero, W))
    for r in res:
        assert np.all(np.asarray(r) == 0.0)


def test_fisher_profile_forced_solution_is_exact():
    # U = b1 exp(a1 z / dstar) + b0 solves the profile equation exactly.
    dstar, a1, b1, b0 = 1.7, -0.9, 0.8, 1.4
    z = np.linspace(-1.0, 1.5, 7)
    Z = Jet1.var_at(z)
    U = b1 * jm.exp((a1 / dstar) * Z) + b0
    spec = SystemSpec(
        "ode_fisher_profile", SystemParams(1.0, 1.0, 1.0, k=1.0),
        extra={"dstar": dstar, "alpha1": a1, "b1": b1, "b0": b0})
    res, _ = assemble_residual(spec, (z,), (U,))
    np.testing.assert_allclose(res[0], 0.0, atol=1e-12)


# --------------------------------------------------------------------------
# specification validation
# --------------------------------------------------------------------------


def test_params_validation():
    with pytest.raises(ParameterError):
        SystemParams(0.0, 1.0, 1.0)
    with pytest.raises(ParameterError):
        SystemParams(1.0, -2.0, 1.0)
    with pytest.raises(ParameterError):
        SystemParams(1.0, 1.0, float("nan"))
    with pytest.raises(ParameterError):
        SystemParams(1.0, 1.0, 1.0, k=-0.5)
    p = SystemParams(1, 2, 3)
    assert p.k == 1.0 and isinstance(p.d2, float)


def test_spec_validation():
    with pytest.raises(ParameterError):
        SystemSpec("pde_bogus", PARAMS)
    with pytest.raises(ParameterError):
        SystemSpec("pde_full", PARAMS)  # stream required
    with pytest.raises(ParameterError):
        SystemSpec("pde_radial", PARAMS, stream=make_stream("case10", {}),
                   extra={"alpha": 1.0})
    with pytest.raises(ParameterError):
        SystemSpec("pde_radial", PARAMS)  # missing alpha
    with pytest.raises(ParameterError):
        SystemSpec("pde_radial", PARAMS, extra={"alpha": 1.0, "junk": 2.0})
    with pytest.raises(ParameterError):
        SystemSpec("pde_radial", PARAMS, extra={"alpha": float("inf")})


def test_unit_k_enforcement():
    k2 = SystemParams(1.0, 2.0, 3.0, k=2.0)
    with pytest.raises(ParameterError):
        SystemSpec("ode_radial_third", k2, extra={"alpha": 1.0, "C": 0.0})
    with pytest.raises(ParameterError):
        SystemSpec("ode_radial_emden", k2, extra={"C0": 1.0})
    with pytest.raises(ParameterError):
        SystemSpec("ode_radial_alpha", k2,
                   extra={"alpha": 1.0, "C1": 0.0, "C0": 1.0})
    SystemSpec("ode_radial_emden", SystemParams(1.0, 2.0, 3.0),
               extra={"C0": 1.0})


def test_side_condition_validation():
    with pytest.raises(ParameterError):
        SystemSpec("ode_phase_triple", PARAMS, extra={"rho2": 0.0})
    with pytest.raises(ParameterError):
        SystemSpec("ode_fisher_profile", PARAMS,
                   extra={"dstar": -1.0, "alpha1": 1.0, "b1": 0.0, "b0": 1.0})
    with pytest.raises(ParameterError):
        SystemSpec("ode_travel_triple", PARAMS,
                   extra={"t0": 1.0, "alpha1": 0.0, "alpha2": 0.0})


def test_registry_shape():
    for kind, info in KINDS.items():
        assert info.n_coords == len(info.coord_names)
        spec_fields = len(info.field_names)
        assert spec_fields in (1, 3)
        if info.n_coords > 1:
            assert len(info.slots) == info.n_coords


# --------------------------------------------------------------------------
# domain masks
# --------------------------------------------------------------------------


def test_domain_masks():
    spec = SystemSpec("pde_reduced_spiral", PARAMS, extra={"beta": 0.0})
    m = domain_mask(spec, (np.array([0.005, 0.5]), np.array([0.0, 1.0])))
    assert m.tolist() == [False, True]

    spec = SystemSpec("pde_radial", PARAMS, extra={"alpha": 1.0})
    m = domain_mask(spec, (np.array([1.0, 1.0]), np.array([0.001, 0.5])))
    assert m.tolist() == [False, True]

    spec = SystemSpec("ode_selfsim", PARAMS, extra={"alpha": 1.0})
    m = domain_mask(spec, (np.array([-0.2, 0.3]),))
    assert m.tolist() == [False, True]

    stream = make_stream("case10", {})
    spec = SystemSpec("pde_full", PARAMS, stream=stream)
    m = domain_mask(spec, (np.array([1.0]), np.array([0.5]),
                           np.array([0.5])))
    assert m.tolist() == [True]


# --------------------------------------------------------------------------
# certification end to end
# --------------------------------------------------------------------------


class GaussianPuff:
    """Heat-kernel triple: exact solution when the interaction is off.

    With k = 0 each field independently satisfies its advection-diffusion
    equation; a rotationally symmetric profile is untouched by the
    rotational stream, so the same object certifies against both the
    convection-free and the streamed system.
    """

    margin = 1e-2

    def __init__(self, params, stream=None, kind="pde_rotated_free"):
        self._spec = SystemSpec(kind, params, stream=stream)
        self.name = "gaussian_puff"
        self.default_box = ((0.5, 2.0), (-1.5, 1.5), (-1.5, 1.5))

    def target_system(self):
        return self._spec

    def evaluate(self, t, x, y):
        p = self._spec.params
        r2 = np.asarray(x) ** 2 + np.asarray(y) ** 2
        t = np.asarray(t, dtype=float)
        return tuple(np.exp(-r2 / (4.0 * d * t)) / t
                     for d in (p.d1, p.d2, p.d3))

    def eval_jet(self, t, x, y):
        p = self._spec.params
        T, X, Y = Jet2.vars_at(t, x, y)
        r2 = X * X + Y * Y
        return tuple(jm.exp(-r2 / (4.0 * d * T)) / T
                     for d in (p.d1, p.d2, p.d3))

    def is_valid(self, t, x, y, margin=1e-2):
        return np.asarray(t, dtype=float) >= margin


def test_certify_heat_kernel_free():
    params = SystemParams(1.0, 2.0, 3.0, k=0.0)
    rep = certify(GaussianPuff(params))
    assert rep.passed
    assert rep.max_rel < 1e-11
    assert rep.fd_passed and rep.fd_points > 0
    assert rep.n_points == 200


def test_certify_heat_kernel_streamed():
    # The rotational stream advects tangentially; a radial profile does not
    # feel it, so the full advected system is satisfied too.
    params = SystemParams(1.0, 2.0, 3.0, k=0.0)
    sol = GaussianPuff(params, stream=make_stream("case10", {}),
                       kind="pde_full")
    rep = certify(sol)
    assert rep.passed
    assert rep.max_rel < 1e-11


def test_certify_detects_nonsolution():
    # Same profiles with the interaction switched on: the residual is the
    # bilinear term, which both differentiation routes must agree on.
    params = SystemParams(1.0, 2.0, 3.0, k=1.0)
    rep = certify(GaussianPuff(params))
    assert not rep.passed
    assert rep.max_rel > 1e-3
    assert rep.fd_passed  # the stencil route confirms the failure is real


def test_certify_deterministic():
    params = SystemParams(1.0, 2.0, 3.0, k=0.0)
    rep1 = certify(GaussianPuff(params))
    rep2 = certify(GaussianPuff(params))
    assert rep1.to_json() == rep2.to_json()


def test_certify_custom_sample():
    params = SystemParams(1.0, 2.0, 3.0, k=0.0)
    spec = SampleSpec(seed=7, count=60,
                      box=((0.6, 1.4), (-1.0, 1.0), (-1.0, 1.0)))
    rep = certify(GaussianPuff(params), sample=spec)
    assert rep.n_points == 60
    assert rep.seed == 7
    assert rep.passed


def test_certify_report_json_roundtrip():
    params = SystemParams(1.0, 2.0, 3.0, k=0.0)
    rep = certify(GaussianPuff(params))
    blob = rep.to_json()
    assert blob["kind"] == "pde_rotated_free"
    assert blob["solution"] == "gaussian_puff"
    assert isinstance(blob["worst_point"], list) and len(blob["worst_point"]) == 3
    assert set(blob) >= {"passed", "tol", "max_rel", "max_abs", "seed",
                         "fd_points", "fd_worst_ratio"}
