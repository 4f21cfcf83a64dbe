import math
from fractions import Fraction

import pytest

from errors import (CenterOnBoundary, DegreeBoundViolated, InputError, InvalidTau, NonpositiveA,
                    SphericalParameters, UnsupportedQ)
from generators import generate_gpq, generate_tree
from growth import (bishop_comparison, bp_lower_bound, gpq_sphere_sizes, mu_closed_forms, sigma_recursion,
                    sphere_difference_residuals, sphere_series)
from planar_core import load_truncation


def test_sigma_recursion():
    assert sigma_recursion(6, 6, 4) == [1, 6, 29, 139, 666]
    assert sigma_recursion(4, 4, 6) == [3 * n + 1 for n in range(7)]
    with pytest.raises(UnsupportedQ):
        sigma_recursion(6, 5, 3)
    with pytest.raises(SphericalParameters):
        sigma_recursion(3, 4, 3)


def test_gpq_sphere_sizes():
    assert gpq_sphere_sizes(6, 6, 6) == [1, 6, 30, 144, 690, 3306, 15840]
    assert gpq_sphere_sizes(4, 4, 5) == [1, 4, 8, 12, 16, 20]
    assert gpq_sphere_sizes(6, 3, 4) == [1, 6, 12, 18, 24]


@pytest.mark.parametrize("p", range(3, 11))
@pytest.mark.parametrize("q", [3, 4, 6])
def test_recursion_ratio_converges_to_mu(p, q):
    if Fraction(1, p) + Fraction(1, q) >= Fraction(1, 2):
        pytest.skip("not hyperbolic")
    sigma = sigma_recursion(p, q, 41)
    assert abs(math.log(sigma[41] / sigma[40]) - mu_closed_forms(p, q).mu_gpq) < 1e-2


def test_closed_forms():
    assert mu_closed_forms(3).mu_tree == pytest.approx(math.log(2))
    assert mu_closed_forms(5, 6).mu_gpq == pytest.approx(math.log(2 + math.sqrt(3)), abs=1e-12)
    forms = mu_closed_forms(6, 6)
    assert forms.tau_gpq == Fraction(5, 2)
    assert forms.mu_gpq == pytest.approx(1.5669, abs=1e-4)
    assert forms.mu_gpq == pytest.approx(math.log((5 + math.sqrt(21)) / 2), abs=1e-12)
    assert mu_closed_forms(4, 4).mu_gpq == 0
    curvature = mu_closed_forms(b=Fraction(1), q=6)
    assert curvature.tau_curv == Fraction(5, 2)
    assert curvature.mu_curv == pytest.approx(forms.mu_gpq)


def test_closed_form_errors():
    with pytest.raises(InputError):
        mu_closed_forms()
    with pytest.raises(UnsupportedQ):
        mu_closed_forms(5, 5)
    with pytest.raises(InvalidTau):
        mu_closed_forms(b=Fraction(-1), q=6)


@pytest.mark.parametrize("p", range(3, 13))
def test_curvature_growth_bound_is_sharp_for_trees(p):
    assert bp_lower_bound(Fraction(p, 2) - 1, math.inf) == pytest.approx(math.log(p - 1), abs=1e-12)


def test_curvature_growth_bound_on_g66():
    bound = bp_lower_bound(Fraction(1), 6)
    assert bound == pytest.approx(math.log(Fraction(17, 5)), abs=1e-12)
    assert bound <= mu_closed_forms(6, 6).mu_gpq
    with pytest.raises(NonpositiveA):
        bp_lower_bound(Fraction(0), 6)


def test_tree_series():
    series = sphere_series(generate_tree(3, 5))
    assert list(series.sphere_sizes) == [1, 3, 6, 12, 24, 48]
    assert list(series.volumes) == [3, 12, 30, 66, 138]
    assert series.monotone
    assert series.ratio_estimates[-1] == pytest.approx(math.log(2))


def test_flat_ratios_decay(g44):
    series = sphere_series(g44)
    assert series.ratio_estimates[-1] < series.ratio_estimates[1]
    assert series.cumulative_estimates[-1] < series.cumulative_estimates[0]


def test_center_on_boundary(fixture_doc):
    doc = fixture_doc("cube.json")
    doc["interior"] = [1, 2]
    with pytest.raises(CenterOnBoundary):
        sphere_series(load_truncation(doc))


def test_sphere_difference_identity(g66):
    residuals = sphere_difference_residuals(g66, sphere_series(g66))
    assert residuals
    assert all(value == 0 for _, value in residuals)


def test_sphere_difference_identity_needs_supported_q():
    trunc = generate_gpq(4, 5, 3)
    with pytest.raises(UnsupportedQ):
        sphere_difference_residuals(trunc, sphere_series(trunc))


def test_bishop_comparison_consistent(g66, t3, trihex):
    assert bishop_comparison(sphere_series(g66), 6, 6).verdict == "consistent"
    assert bishop_comparison(sphere_series(t3), 3, math.inf).verdict == "consistent"
    assert bishop_comparison(sphere_series(trihex), 4, 6).verdict == "consistent"


def test_bishop_comparison_detects_faster_growth():
    series = sphere_series(generate_tree(4, 6))
    verdict = bishop_comparison(series, 4, 6)
    assert verdict.verdict.startswith("violated-at-")
    assert verdict.estimate > verdict.comparison_mu


def test_bishop_comparison_degree_bound(g66):
    with pytest.raises(DegreeBoundViolated):
        bishop_comparison(sphere_series(g66), 5, 6)
    with pytest.raises(DegreeBoundViolated):
        bishop_comparison(sphere_series(g66), 6, 4)


def test_bishop_comparison_unavailable_without_closed_form():
    series = sphere_series(generate_gpq(4, 5, 4))
    assert bishop_comparison(series, 4, 5).verdict == "unavailable"
