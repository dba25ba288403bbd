import math

import pytest

import isocurv as ic
from isocurv import expr


def spec_of(f_text, g_text, dom):
    return ic.FactorableSpec(
        ic.PHI3,
        expr.parse(f_text, {"y"}),
        expr.parse(g_text, {"z"}),
        ic.Rectangle(*dom),
        f_text=f_text,
        g_text=g_text,
    )


def test_probe_tags_minimal_surface():
    rep = ic.ratio_probe(spec_of("1/y", "z", (1.0, math.pi, 1.0, 2 * math.pi)), ic.GridSpec(12, 12))
    assert rep.degenerate == "H_zero"
    assert rep.best_lambda is None


def test_probe_tags_flat_surface():
    rep = ic.ratio_probe(
        spec_of("-0.25*y^2", "1/z", (1.0, 1.4, 1.0, 2 * math.pi)), ic.GridSpec(12, 12)
    )
    assert rep.degenerate == "K_zero"


def test_probe_reports_no_constant_ratio():
    rep = ic.ratio_probe(spec_of("y^2+2", "z^2+z+1", (1.0, 2.0, 1.0, 2.0)), ic.GridSpec(50, 50))
    assert rep.degenerate is None
    assert rep.ratio_stddev > 0.01
    assert rep.min_scaled_residual > 1e-3
    assert abs(rep.best_lambda) <= 1e4


def test_probe_canonical_families_degenerate_or_spread():
    canonical = [
        ic.FamilySpec("T1_I1", {}),
        ic.FamilySpec("T1_I2", {"c": 1.0}),
        ic.FamilySpec("T1_I3", {"c": 1.0}),
        ic.FamilySpec("T1_II", {"H0": -1.0, "sign": -1.0}),
        ic.FamilySpec("T2_I1", {"c1": 1.0}),
        ic.FamilySpec("T2_I2", {"c1": 1.0, "c2": 1.0, "c3": 1.0}),
        ic.FamilySpec("T2_I3", {"c1": 1.0, "c2": 2.0, "c3": -1.0}),
        ic.FamilySpec("T2_II1", {"K0": -1.0}),
        ic.FamilySpec("T2_II2", {"K0": -1.0, "c2": 1.0}),
    ]
    for fam in canonical:
        rep = ic.ratio_probe(ic.instantiate_family(fam), ic.GridSpec(10, 10))
        assert rep.degenerate is not None or rep.ratio_stddev > 0.0, fam.family_id


def test_compare_types_reciprocal_pair():
    rep = ic.compare_types(
        expr.parse("1/t", {"t"}), expr.parse("t", {"t"}), ic.Rectangle(1.0, 2.0, 1.0, 2.0),
        ic.GridSpec(8, 8),
    )
    assert rep.max_K_diff <= 1e-10
    assert rep.max_absH_diff <= 1e-10


def test_compare_types_sqrt_pair():
    rep = ic.compare_types(
        expr.parse("-1", {"t"}), expr.parse("sqrt(t)", {"t"}),
        ic.Rectangle(0.5, 2.0, 0.5, 2.0), ic.GridSpec(8, 8),
    )
    assert rep.max_absH_diff <= 1e-10
    # both embeddings carry |H| = 1 on this pair
    spec3 = ic.FactorableSpec(
        ic.PHI3, expr.parse("-1", {"t"}), expr.parse("sqrt(t)", {"t"}),
        ic.Rectangle(0.5, 2.0, 0.5, 2.0), f_var="t", g_var="t",
    )
    c = ic.curvatures_at(ic.make_patch(spec3), 1.0, 1.0)
    assert abs(c.H) == pytest.approx(1.0, rel=1e-12)


def test_compare_types_tangent_pair():
    rep = ic.compare_types(
        expr.parse("t", {"t"}), expr.parse("tan(t)", {"t"}),
        ic.Rectangle(0.1, 1.0, 0.1, 1.0), ic.GridSpec(8, 8),
    )
    assert rep.max_K_diff <= 1e-10
    assert rep.max_absH_diff <= 1e-10


def test_compare_types_rejects_multivariate_factor():
    with pytest.raises(ValueError):
        ic.compare_types(
            expr.parse("y*z", {"y", "z"}), expr.parse("t", {"t"}),
            ic.Rectangle(1.0, 2.0, 1.0, 2.0),
        )
