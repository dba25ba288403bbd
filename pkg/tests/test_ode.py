import math

import numpy as np
import pytest

import isocurv as ic
from isocurv import expr
from isocurv.errors import BlowUp, DomainError, InvalidConstants, RadicandNonpositive


def test_cmc_trajectory_matches_sqrt():
    # g'' = 2*h0*f0^2*(g')^3 with h0 = -1, f0 = 1 is solved by g = sqrt(z)
    tab = ic.ode_generate_cmc(-1.0, 1.0, z0=1.0, g0=1.0, r0=0.5, z_end=4.0, steps=4000)
    assert tab.g[-1] == pytest.approx(2.0, abs=1e-8)
    assert float(np.max(np.abs(tab.g - np.sqrt(tab.z)))) <= 1e-8
    assert float(np.max(np.abs(tab.r - 0.5 / np.sqrt(tab.z)))) <= 1e-8


def test_cmc_zero_length_integration_keeps_state():
    tab = ic.ode_generate_cmc(-1.0, 1.0, z0=1.0, g0=1.0, r0=0.5, z_end=1.0, steps=1)
    assert list(tab.z) == [1.0]
    assert list(tab.g) == [1.0]
    assert list(tab.r) == [0.5]
    assert tab.eval_with_derivatives(1.0) == (1.0, 0.5, 0.0)


def test_cmc_blowup_detected():
    # positive coefficient drives (g')^3 growth past the slope limit
    with pytest.raises(BlowUp):
        ic.ode_generate_cmc(50.0, 1.0, z0=0.0, g0=1.0, r0=1.0, z_end=1.0, steps=2000)


def test_cmc_invalid_inputs():
    with pytest.raises(InvalidConstants):
        ic.ode_generate_cmc(0.0, 1.0, 0.0, 1.0, 0.5, 1.0, 10)
    with pytest.raises(InvalidConstants):
        ic.ode_generate_cmc(-1.0, 0.0, 0.0, 1.0, 0.5, 1.0, 10)
    with pytest.raises(InvalidConstants):
        ic.ode_generate_cmc(-1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 10)


def test_cmc_patch_reaches_target_mean_curvature():
    tab = ic.ode_generate_cmc(-1.0, 1.0, z0=1.0, g0=1.0, r0=0.5, z_end=4.0, steps=4000)
    spec = ic.FactorableSpec(
        ic.PHI3, expr.parse("1", {"y"}), tab, ic.Rectangle(0.5, 1.5, 1.0, 4.0), f_text="1"
    )
    patch = ic.make_patch(spec)
    worst = 0.0
    for u in np.linspace(0.6, 1.4, 4):
        for v in tab.z[100:-100:500]:
            c = ic.curvatures_at(patch, float(u), float(v))
            worst = max(worst, abs(c.H + 1.0))
    assert worst <= 1e-6


def test_k0_initial_slope_value():
    tab = ic.ode_generate_k0(-1.0, 1.0, 1.0, g0=1.0, sign=1, z0=0.0, z_end=2.0, steps=100)
    assert tab.r[0] == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)


def test_k0_slope_satisfies_reduced_equation():
    # (k0/c2^2) r^3 + r = 2 g dr/dg along the trajectory, checked by
    # finite differences of r against g
    k0, c2, c4 = -1.0, 1.0, 1.0
    tab = ic.ode_generate_k0(k0, c2, c4, g0=1.0, sign=1, z0=0.0, z_end=2.0, steps=4000)
    g = tab.g[500:-500:250]
    r = tab.r[500:-500:250]

    def r_of_g(gv):
        q = c4 * c4 / gv - k0 / (c2 * c2)
        return 1.0 / math.sqrt(q)

    h = 1e-6
    for gv, rv in zip(g, r):
        drdg = (r_of_g(gv + h) - r_of_g(gv - h)) / (2 * h)
        lhs = (k0 / c2**2) * rv**3 + rv
        assert lhs == pytest.approx(2.0 * gv * drdg, rel=1e-7)


def test_k0_radicand_rejection():
    with pytest.raises(RadicandNonpositive):
        ic.ode_generate_k0(1.0, 1.0, 1.0, g0=2.0, sign=1, z0=0.0, z_end=1.0, steps=10)


def test_k0_surface_reaches_target_gauss_curvature():
    fam = ic.FamilySpec(
        "T2_II2",
        {"K0": -1.0, "c2": 1.0, "c4": 1.0, "g0": 1.0, "sign": 1.0},
        domain=ic.Rectangle(0.5, 2.0, 0.0, 2.0),
        ode_steps=2000,
    )
    rep = ic.verify_family(fam, ic.GridSpec(10, 10, margin=0.02))
    assert rep.tolerance == 1e-6
    assert rep.passed


def test_samples_are_ordered_triples():
    tab = ic.ode_generate_cmc(-1.0, 1.0, z0=1.0, g0=1.0, r0=0.5, z_end=2.0, steps=8)
    triples = tab.samples()
    assert len(triples) == 9
    assert all(len(t) == 3 for t in triples)
    zs = [t[0] for t in triples]
    assert zs == sorted(zs)


def test_tabulated_interpolation_accuracy():
    # tabulate sin with exact slopes; the Hermite pieces must recover
    # value, slope and curvature to the expected orders
    z = np.linspace(0.0, 2.0, 201)
    tab = ic.TabulatedFunction(z, np.sin(z), np.cos(z))
    for x in (0.123, 0.5005, 1.23456, 1.999):
        val, d1, d2 = tab.eval_with_derivatives(x)
        assert val == pytest.approx(math.sin(x), abs=1e-9)
        assert d1 == pytest.approx(math.cos(x), abs=1e-6)
        assert d2 == pytest.approx(-math.sin(x), abs=1e-4)


def test_tabulated_rejects_out_of_range():
    tab = ic.ode_generate_cmc(-1.0, 1.0, z0=1.0, g0=1.0, r0=0.5, z_end=2.0, steps=8)
    with pytest.raises(DomainError):
        tab.eval_with_derivatives(0.5)
    with pytest.raises(DomainError):
        tab.eval_with_derivatives(2.5)
    # endpoints are allowed
    tab.eval_with_derivatives(1.0)
    tab.eval_with_derivatives(2.0)


def test_tabulated_requires_increasing_abscissae():
    with pytest.raises(ValueError):
        ic.TabulatedFunction(np.array([0.0, 0.0, 1.0]), np.zeros(3), np.ones(3))
