"""Tests for the numerical symmetry verification layer.

Covers the determining-equation residuals for all eleven admissible
stream families, the reconstruction of the balance inhomogeneity q(t)
and its spatial-independence check, source and mixing symmetries, closed
flows against RK4 integration, and the commutator table of the
rotational stream's algebra.
"""

import numpy as np
import pytest

from dlvlab.errors import ParameterError
from dlvlab.streams import example_stream, make_stream
from dlvlab.symmetry import (CASES, TemplateGenerator, bracket_components,
                             canonical_generators, case_generators,
                             components_close, conditional_mixing,
                             constant_source, determining_residuals,
                             infer_balance, rotating_source, source_residual,
                             time_derivative, verify_case)
from dlvlab.systems import SystemParams

EXPECTED_GENS = {
    "case1": ["time_shift", "swirl_wave", "source_const"],
    "case2": ["time_shift", "drift_wave", "source_const"],
    "case3": ["time_shift", "dilation", "source_const"],
    "case4": ["time_shift", "spiral_dilation", "source_const"],
    "case5": ["time_shift", "rotation", "swirl_dilation", "source_const"],
    "case6": ["time_shift", "drift", "drift_dilation", "source_const"],
    "case7": ["time_shift", "libration_a", "libration_b", "source_const"],
    "case8": ["time_shift", "surge_up", "surge_down", "source_const"],
    "case9": ["time_shift", "shift_y", "galilean", "source_const"],
    "case10": ["time_shift", "rotation", "wave_shift_1", "wave_shift_2",
               "dilation", "source_const", "source_wave"],
    "case11": ["time_shift", "shift_x", "shift_y", "drift_dilation",
               "drift_rotation", "source_const"],
}


# --------------------------------------------------------------------------
# classification verification
# --------------------------------------------------------------------------


@pytest.mark.parametrize("case", CASES)
def test_case_verifies(case):
    rep = verify_case(case)
    assert rep.passed, rep.to_json()
    assert rep.n_points == 200
    names = [g.name for g in rep.generators]
    assert names == EXPECTED_GENS[case]
    for g in rep.generators:
        assert max(g.max_shift_x, g.max_shift_y, g.max_balance,
                   g.max_source, g.q_spread) < 1e-10


def test_conditional_mixing_admission():
    rep = verify_case("case10", sys_params=SystemParams(3.0, 2.0, 3.0))
    names = [g.name for g in rep.generators]
    assert "mix_u_into_w" in names and "mix_v_into_w" not in names
    assert rep.passed

    rep = verify_case("case10", sys_params=SystemParams(1.0, 3.0, 3.0))
    names = [g.name for g in rep.generators]
    assert "mix_v_into_w" in names and "mix_u_into_w" not in names

    rep = verify_case("case10", sys_params=SystemParams(1.0, 2.0, 3.0))
    names = [g.name for g in rep.generators]
    assert "mix_u_into_w" not in names and "mix_v_into_w" not in names


def test_field_compatibility_residuals():
    mix = conditional_mixing("u")
    r1, r2 = mix.field_compatibility(SystemParams(1.0, 2.0, 3.0))
    assert abs(r1 - (1.0 - 3.0)) < 1e-15 and r2 == 0.0
    r1, r2 = mix.field_compatibility(SystemParams(3.0, 2.0, 3.0))
    assert r1 == 0.0
    with pytest.raises(ParameterError):
        conditional_mixing("w")


def test_unknown_case_rejected():
    with pytest.raises(ParameterError):
        verify_case("case12")


@pytest.mark.parametrize("case,bad", [
    ("case4", {"a0": 0.0, "alpha": 1.0}),
    ("case5", {"alpha": 0.0, "beta": 0.0, "gamma": 0.0}),
    ("case6", {"a1": 0.0, "a2": 0.0, "gamma": 1.0, "sign": 1.0}),
    ("case6", {"a1": 1.0, "a2": 0.5, "gamma": 1.0, "sign": 2.0}),
    ("case7", {"a0": 0.5}),
    ("case7", {"a0": -0.5}),
    ("case7", {"a0": 0.0}),
    ("case8", {"a0": 0.0}),
])
def test_excluded_parameters_rejected(case, bad):
    with pytest.raises(ParameterError):
        make_stream(case, bad)


def test_verify_case_with_custom_parameters():
    rep = verify_case("case5", params={"alpha": -1.1, "beta": 2.0,
                                       "gamma": -0.7})
    assert rep.passed


# --------------------------------------------------------------------------
# balance reconstruction
# --------------------------------------------------------------------------


def _find(gens, name):
    return next(g for g in gens if g.name == name)


def test_infer_balance_matches_closed_forms():
    tgrid = np.linspace(-1.0, 1.0, 7)

    stream = example_stream("case5")  # alpha=0.8, beta=0.5, gamma=0.3
    gen = _find(case_generators(stream), "swirl_dilation")
    q_hat, spread = infer_balance(gen, stream, tgrid)
    np.testing.assert_allclose(q_hat, -2.0 * 0.5 - 4.0 * 0.8 * 0.3 * tgrid,
                               atol=1e-11)
    assert spread < 1e-10

    stream = example_stream("case1")  # alpha=0.7, beta=0.3
    gen = _find(case_generators(stream), "swirl_wave")
    q_hat, spread = infer_balance(gen, stream, tgrid)
    np.testing.assert_allclose(q_hat, -0.7 * np.exp(2.0 * 0.3 * tgrid),
                               atol=1e-11)
    assert spread < 1e-10

    stream = example_stream("case9")  # alpha=1.3
    gen = _find(case_generators(stream), "galilean")
    q_hat, spread = infer_balance(gen, stream, tgrid)
    np.testing.assert_allclose(q_hat, 2.0 * 1.3 * tgrid, atol=1e-11)
    assert spread < 1e-10


def test_infer_balance_flags_position_dependence():
    # A bare rotation is not admitted by the linear stream: the would-be
    # balance term a1 y - a2 x depends on position, so the spread blows up.
    stream = example_stream("case11")
    fake = TemplateGenerator("bare_rotation", p0=1.0)
    _, spread = infer_balance(fake, stream, [0.0])
    assert spread > 1e-2


def test_wrong_balance_detected():
    # The correct generator with its q zeroed must fail the balance check.
    stream = example_stream("case5")
    good = _find(case_generators(stream), "rotation")
    bad = TemplateGenerator("rotation_no_q", p0=1.0, q=0.0)
    t = np.array([0.2, -0.6]); x = np.array([0.8, 1.1]); y = np.array([0.5, -0.9])
    res_good = determining_residuals(good, stream, t, x, y)
    res_bad = determining_residuals(bad, stream, t, x, y)
    assert np.max(res_good["balance"]) < 1e-11
    assert np.min(res_bad["balance"]) > 0.1  # = |alpha| = 0.8


# --------------------------------------------------------------------------
# source symmetries
# --------------------------------------------------------------------------


@pytest.mark.parametrize("case", CASES)
def test_constant_source_solves_every_stream(case):
    stream = example_stream(case)
    gen = constant_source(2.5)
    t = np.linspace(-1.0, 1.0, 9)
    x = np.linspace(-1.8, 1.8, 9) + 0.05
    y = np.linspace(1.8, -1.8, 9) + 0.11
    keep = stream.is_valid(x, y)
    res = source_residual(gen.source, stream, 3.0, t[keep], x[keep], y[keep])
    assert np.max(res) < 1e-12


def test_rotating_source_only_fits_the_rotational_stream():
    gen = rotating_source()
    t = np.array([0.3, -0.4, 0.9])
    x = np.array([0.6, 1.2, -0.8])
    y = np.array([0.9, -0.5, 1.1])
    ok = source_residual(gen.source, example_stream("case10"), 3.0, t, x, y)
    assert np.max(ok) < 1e-12
    bad = source_residual(gen.source, example_stream("case9"), 3.0, t, x, y)
    assert np.min(bad) > 1e-2


# --------------------------------------------------------------------------
# flows
# --------------------------------------------------------------------------


def test_closed_flows_match_rk4_everywhere():
    t = np.array([0.3, -0.7, 1.1])
    x = np.array([0.5, -1.2, 0.8])
    y = np.array([-0.4, 0.9, 1.3])
    for case in CASES:
        stream = example_stream(case)
        for gen in case_generators(stream, include_sources=False):
            assert gen.closed_flow is not None, (case, gen.name)
            tc, xc, yc = gen.flow(0.35, t, x, y)
            tn, xn, yn, *_ = gen.flow_numeric(0.35, t, x, y, steps=1024)
            err = max(np.max(np.abs(tc - tn)), np.max(np.abs(xc - xn)),
                      np.max(np.abs(yc - yn)))
            assert err < 1e-10, (case, gen.name, err)


def test_canonical_flows_tight():
    gens = canonical_generators()
    t = np.array([0.3, -0.7, 1.1])
    x = np.array([0.5, -1.2, 0.8])
    y = np.array([-0.4, 0.9, 1.3])
    for name in ("time_shift", "rotation", "wave_shift_1", "wave_shift_2",
                 "dilation"):
        gen = gens[name]
        for eps in (0.1, 0.5):
            tc, xc, yc = gen.flow(eps, t, x, y)
            tn, xn, yn, *_ = gen.flow_numeric(eps, t, x, y, steps=4096)
            err = max(np.max(np.abs(tc - tn)), np.max(np.abs(xc - xn)),
                      np.max(np.abs(yc - yn)))
            assert err < 1e-12, (name, eps, err)


def test_flow_inverse_round_trip():
    t = np.array([0.4, -0.9])
    x = np.array([0.7, 1.3])
    y = np.array([-0.2, 0.6])
    for gen in canonical_generators().values():
        if gen.closed_flow is None:
            continue
        tf, xf, yf = gen.flow(0.4, t, x, y)
        tb, xb, yb = gen.flow(-0.4, tf, xf, yf)
        np.testing.assert_allclose([tb, xb, yb], [t, x, y],
                                   rtol=1e-13, atol=1e-13)


def test_dilation_fiber_contracts_fields():
    gen = canonical_generators()["dilation"]
    eps = 0.3
    out = gen.flow_numeric(eps, 0.5, 0.4, -0.2, 2.0, 3.0, -1.0, steps=2048)
    scale = np.exp(-2.0 * eps)
    np.testing.assert_allclose(out[3], 2.0 * scale, rtol=1e-12)
    np.testing.assert_allclose(out[4], 3.0 * scale, rtol=1e-12)
    np.testing.assert_allclose(out[5], -1.0 * scale, rtol=1e-12)


def test_mixing_fiber_closed_form():
    # d(w)/d(eps) = u + w with u frozen: w(eps) = (w0 + u0) e^eps - u0.
    gen = conditional_mixing("u")
    u0, w0, eps = 1.7, -0.4, 0.6
    out = gen.flow_numeric(eps, 0.1, 0.2, 0.3, u0, 0.9, w0, steps=2048)
    np.testing.assert_allclose(out[3], u0, rtol=1e-14)            # u frozen
    np.testing.assert_allclose(out[5], (w0 + u0) * np.exp(eps) - u0,
                               rtol=1e-12)


def test_source_fiber_adds_h():
    gen = rotating_source()
    t0, x0, y0, eps = 0.7, 0.5, -0.3, 0.25
    out = gen.flow_numeric(eps, t0, x0, y0, 0.0, 0.0, 1.0, steps=512)
    h_val = x0 * np.sin(2.0 * t0) + y0 * np.cos(2.0 * t0)
    np.testing.assert_allclose(out[5], 1.0 + eps * h_val, rtol=1e-12)
    # base point does not move
    np.testing.assert_allclose(out[:3], [t0, x0, y0], rtol=1e-14)


def test_flow_requires_closed_form():
    gen = conditional_mixing("u")
    with pytest.raises(ParameterError):
        gen.flow(0.1, 0.0, 0.0, 0.0)


# --------------------------------------------------------------------------
# commutator table
# --------------------------------------------------------------------------


def _algebra():
    g = canonical_generators()
    return (g["time_shift"], g["wave_shift_1"], g["wave_shift_2"],
            g["rotation"], g["dilation"])


def _points():
    rng = np.random.default_rng(3)
    return [rng.uniform(-1.5, 1.5, 40) for _ in range(6)]


def test_required_bracket_table():
    Pt, P1, P2, J, D = _algebra()
    pts = _points()
    table = [
        (J, P1, [(1.0, P2)]),
        (J, P2, [(-1.0, P1)]),
        (P1, P2, []),
        (D, P1, [(-1.0, P1)]),
        (D, P2, [(-1.0, P2)]),
        (D, J, []),
    ]
    for A, B, target in table:
        err = components_close(bracket_components(A, B, *pts), target, *pts)
        assert err < 1e-10, (A.name, B.name, err)


def test_time_shift_brackets_close_in_the_algebra():
    Pt, P1, P2, J, D = _algebra()
    pts = _points()
    assert components_close(bracket_components(Pt, P1, *pts),
                            [(-2.0, P2)], *pts) < 1e-10
    assert components_close(bracket_components(Pt, P2, *pts),
                            [(2.0, P1)], *pts) < 1e-10
    assert components_close(bracket_components(Pt, J, *pts), [], *pts) < 1e-10
    assert components_close(bracket_components(Pt, D, *pts),
                            [(2.0, Pt), (4.0, J)], *pts) < 1e-10


def test_bracket_antisymmetry():
    Pt, P1, P2, J, D = _algebra()
    pts = _points()
    ab = bracket_components(D, P1, *pts)
    ba = bracket_components(P1, D, *pts)
    err = float(np.max(np.abs(np.stack(ab) + np.stack(ba))))
    assert err < 1e-10


# --------------------------------------------------------------------------
# machinery details
# --------------------------------------------------------------------------


def test_time_derivative_accuracy():
    t = np.linspace(-1.5, 1.5, 11)
    # exact for low-degree polynomials
    err = np.max(np.abs(time_derivative(lambda s: s ** 4, t) - 4.0 * t ** 3))
    assert err < 1e-12
    # near machine precision for smooth transcendental profiles
    err = np.max(np.abs(time_derivative(np.sin, t) - np.cos(t)))
    assert err < 5e-12


def test_generator_components_shapes_and_json():
    gen = canonical_generators()["dilation"]
    comps = gen.components(0.5, 0.2, -0.1, 1.0, 2.0, 3.0)
    assert len(comps) == 6
    xi0, xi1, xi2, e1, e2, e3 = comps
    assert abs(xi0 - 1.0) < 1e-15           # 2 c0 t = 1
    assert abs(xi1 - (0.2 + 2.0 * (-0.1))) < 1e-15   # x + 4 t y
    assert abs(e1 + 2.0) < 1e-15            # -2 u
    blob = gen.to_json()
    assert blob["name"] == "dilation" and blob["c0"] == 1.0
    assert blob["has_closed_flow"]
    assert gen.describe().startswith("dilation")


def test_case_report_json_round_trip():
    import json

    rep = verify_case("case3", count=60)
    text = json.dumps(rep.to_json())
    back = json.loads(text)
    assert back["case"] == "case3" and back["passed"] is True
    assert len(back["generators"]) == 3
