from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from gauss_uniform import (
    ComputationError,
    DomainError,
    apply_fp,
    assemble_fp,
    build_node_system,
    compute_rule,
    fp_convergence,
    midpoint_ivp,
    moment_check,
    observation_check,
    partial_moment_check,
)
from gauss_uniform.fokker_planck import TEST_FUNCTIONS, gauss_zbar_mesh, uniform_mesh

from . import oracles


def _dense_mp(n, variant):
    """Operator matrix from the flux-form definition in mpmath."""
    rule = compute_rule(n)
    with mpmath.workdps(40):
        xw = [oracles.gauss_node_weight(n, float(t)) for t in rule.thetas]
        x = [a for a, _ in xw]
        w = [b for _, b in xw]
        zbar = [mpmath.mpf(-1)]
        for wi in w:
            zbar.append(zbar[-1] + wi)
        if variant == "hl":
            coef = [1 - z * z for z in zbar]
        else:
            coef = [2 * mpmath.fsum(x[j] * w[j] for j in range(i, n)) for i in range(n + 1)]
        a = mpmath.zeros(n, n)
        for f in range(1, n):
            g = coef[f] / (x[f] - x[f - 1])
            # flux through face f leaves cell f-1 and enters cell f
            a[f - 1, f - 1] -= g / w[f - 1]
            a[f - 1, f] += g / w[f - 1]
            a[f, f] -= g / w[f]
            a[f, f - 1] += g / w[f]
    return np.array(a.tolist(), dtype=float)


@pytest.mark.parametrize("variant", ["hl", "morel"])
@pytest.mark.parametrize("n", [2, 3, 8, 15])
def test_operator_against_mpmath(variant, n):
    op = assemble_fp(compute_rule(n), None, variant)
    want = _dense_mp(n, variant)
    got = op.to_dense()
    scale = np.max(np.abs(want))
    assert np.max(np.abs(got - want)) <= 1e-13 * scale
    assert op.n == n and op.variant == variant


def test_stencil_structure():
    op = assemble_fp(compute_rule(20), None, "morel")
    assert op.lower[0] == 0.0 and op.upper[-1] == 0.0
    assert np.all(op.lower >= 0) and np.all(op.upper >= 0)
    assert np.array_equal(op.diag, -(op.lower + op.upper))
    # weighted symmetry: w_i A_{i,i+1} = w_{i+1} A_{i+1,i}
    w = op.rule.weights
    assert np.allclose(w[:-1] * op.upper[:-1], w[1:] * op.lower[1:], rtol=1e-15)


def test_variant_aliases_and_domain():
    rule = compute_rule(6)
    assert assemble_fp(rule, None, "Haldy-Ligou").variant == "hl"
    assert assemble_fp(rule, None, "MOREL").variant == "morel"
    with pytest.raises(DomainError):
        assemble_fp(rule, None, "upwind")
    with pytest.raises(DomainError):
        assemble_fp(compute_rule(1), None, "hl")
    op = assemble_fp(rule, None, "hl")
    with pytest.raises(DomainError):
        apply_fp(op, np.ones(5))


def test_constants_map_to_zero():
    for variant in ("hl", "morel"):
        op = assemble_fp(compute_rule(33), None, variant)
        assert np.all(apply_fp(op, np.full(33, 3.7)) == 0.0)


@pytest.mark.parametrize("n", [10, 100, 1000])
@pytest.mark.parametrize("name", ["one", "x", "x2", "exp"])
def test_moments(n, name):
    rule = compute_rule(n)
    f = TEST_FUNCTIONS[name][0](rule.nodes)
    fmax = max(1.0, float(np.max(np.abs(f))))
    m0, m1 = moment_check(assemble_fp(rule, None, "morel"), f)
    assert abs(m0) < 1e-12 * fmax and abs(m1) < 1e-12 * fmax
    h0, h1 = moment_check(assemble_fp(rule, None, "hl"), f)
    assert abs(h0) < 1e-12 * fmax


def test_hl_first_moment_not_preserved():
    rule = compute_rule(10)
    _, h1 = moment_check(assemble_fp(rule, None, "hl"), np.exp(rule.nodes))
    assert abs(h1) > 1e-6
    # an even f has zero first moment in either scheme by symmetry
    _, h1_even = moment_check(assemble_fp(rule, None, "hl"), rule.nodes**2)
    assert abs(h1_even) < 1e-14


@pytest.mark.parametrize("n", [2, 5, 64, 500, 2000])
def test_morel_linear_exactness(n):
    rule = compute_rule(n)
    lf = apply_fp(assemble_fp(rule, None, "morel"), rule.nodes)
    assert np.max(np.abs(lf + 2.0 * rule.nodes)) <= 1e-13 * n


def test_hl_not_exact_on_linear():
    rule = compute_rule(20)
    lf = apply_fp(assemble_fp(rule, None, "hl"), rule.nodes)
    assert np.max(np.abs(lf + 2.0 * rule.nodes)) > 1e-6


@pytest.mark.parametrize("variant", ["hl", "morel"])
@pytest.mark.parametrize("name", ["x2", "exp"])
def test_second_order(variant, name):
    f, lf = TEST_FUNCTIONS[name]
    out = fp_convergence(variant, f, lf, [32, 64, 128, 256])
    assert out["slope"] == pytest.approx(-2.0, abs=0.3)
    out = fp_convergence(variant, f, lf, [32, 64, 128, 256], norm="max_interior")
    assert out["slope"] == pytest.approx(-2.0, abs=0.3)


def test_exact_image_table():
    # check the symbolic images numerically against a finite difference of (1 - x^2) f'
    x = np.linspace(-0.9, 0.9, 7)
    h = 1e-4
    for name, (f, lf) in TEST_FUNCTIONS.items():
        flux = lambda t: (1 - t * t) * (f(t + h) - f(t - h)) / (2 * h)
        approx = (flux(x + h) - flux(x - h)) / (2 * h)
        assert np.allclose(approx, lf(x), atol=1e-5), name


def test_fp_convergence_domain():
    f, lf = TEST_FUNCTIONS["x"]
    with pytest.raises(DomainError):
        fp_convergence("morel", f, lf, [32, 64, 128])  # exact: no usable errors
    with pytest.raises(DomainError):
        fp_convergence("hl", *TEST_FUNCTIONS["x2"], [64, 32, 128])
    with pytest.raises(DomainError):
        fp_convergence("hl", *TEST_FUNCTIONS["x2"], [32, 64, 128], norm="l1")


# midpoint scheme


def test_zbar_mesh_midpoints_are_partial_moments():
    rule = compute_rule(40)
    sys = build_node_system(rule)
    mesh, h, d = gauss_zbar_mesh(rule, sys)
    run = midpoint_ivp(mesh, d, lambda t: -2.0 * t, steps=h)
    assert np.allclose(run.values, sys.pm, atol=1e-15)
    assert run.max_step == float(np.max(rule.weights))


def test_midpoint_second_order_uniform():
    f = lambda t: -np.pi * np.sin(np.pi * t)
    exact = lambda t: np.cos(np.pi * t) + 1.0
    errs = []
    ns = [64, 128, 256, 512]
    for n in ns:
        mesh, h, d = uniform_mesh(n)
        errs.append(midpoint_ivp(mesh, d, f, eta=0.0, steps=h, exact=exact).max_error)
    slope = np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert slope == pytest.approx(-2.0, abs=0.15)


def test_midpoint_first_order_with_offsets():
    f = lambda t: -np.pi * np.sin(np.pi * t) + 1.0
    exact = lambda t: np.cos(np.pi * t) + 1.0 + t + 1.0
    errs = []
    ns = [64, 128, 256, 512]
    for n in ns:
        mesh, h, d = uniform_mesh(n, offset_fraction=0.5)
        errs.append(midpoint_ivp(mesh, d, f, eta=0.0, steps=h, exact=exact).max_error)
    slope = np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.15)


def test_midpoint_second_order_zbar_mesh():
    f = lambda t: -np.pi * np.sin(np.pi * t)
    exact = lambda t: np.cos(np.pi * t) + 1.0
    errs, ns = [], [64, 128, 256, 512]
    for n in ns:
        mesh, h, d = gauss_zbar_mesh(compute_rule(n))
        errs.append(midpoint_ivp(mesh, d, f, steps=h, exact=exact).max_error)
    slope = np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert slope == pytest.approx(-2.0, abs=0.15)


def test_midpoint_domain():
    with pytest.raises(DomainError):
        midpoint_ivp([0.0], [], np.sin)
    with pytest.raises(DomainError):
        midpoint_ivp([0.0, 0.0, 1.0], [0.0, 0.0], np.sin)
    with pytest.raises(DomainError):
        midpoint_ivp([0.0, 0.5, 1.0], [0.0], np.sin)
    with pytest.raises(DomainError):
        uniform_mesh(0)
    with pytest.raises(ValueError):
        midpoint_ivp([0.0, 1.0], [0.0], np.sin).max_error


# D(zbar) against m


def test_observation_check():
    out = observation_check([100, 200, 400, 800])
    assert out["slope"] == pytest.approx(-2.0, abs=0.15)
    for n, dev, i, centre, extreme in out["rows"]:
        sys = build_node_system(compute_rule(n))
        ref = np.max(np.abs(sys.d_zbar - sys.pm))
        assert dev == pytest.approx(ref, rel=1e-6)
        rep = partial_moment_check(compute_rule(n))
        assert extreme == rep.row(n - 1).scaled
        assert centre == pytest.approx(math.pi**2 / 12, abs=1e-2)


def test_observation_check_domain():
    with pytest.raises(DomainError):
        observation_check([100, 200])
    with pytest.raises(DomainError):
        observation_check([1, 2, 3])
