from types import SimpleNamespace

import numpy as np
import pytest

from swallowdev.classify import (
    MixedCase,
    TheoremInapplicable,
    classify_nd_origin,
    classify_od_origin,
    detect_shape,
)
from swallowdev.darboux import frame_series
from swallowdev.jets import Jet1

from conftest import developable, frame, perturbed_swex


def _frame(kg, kn, kt):
    """Stand-in frame data: Taylor coefficients at 0."""
    j = lambda c: Jet1(list(c) + [0.0] * (6 - len(c)))  # noqa: E731
    return SimpleNamespace(kg=j(kg), kn=j(kn), kt=j(kt))


def test_od_swallowtail_witnesses():
    c = classify_od_origin(frame("std-swallowtail"))
    assert c.outcome == "swallowtail"
    assert c.witnesses["swallowtail_discriminant"] == pytest.approx(-2.0, abs=1e-9)
    c = classify_od_origin(frame("swex"))
    assert c.outcome == "swallowtail"
    assert c.witnesses["swallowtail_discriminant"] == pytest.approx(-4.0, abs=1e-9)
    assert c.witnesses["delta_o"] == pytest.approx(2.0, abs=1e-9)


@pytest.mark.parametrize(
    "kg, kn, kt, outcome",
    [
        ([3.0], [0.0, 1.0], [1.0], "degenerate"),  # delta != 0, discriminant 0
        ([1.0, 1.0], [0.0, 1.0], [1.0], "cuspidal_beaks"),  # delta = 0, beaks discriminant 1
        ([1.0], [0.0, 1.0, 0.0], [1.0], "degenerate"),  # delta = 0, beaks discriminant 0
        ([0.5], [0.0, 2.0], [-1.0], "swallowtail"),
    ],
)
def test_od_decision_table(kg, kn, kt, outcome):
    assert classify_od_origin(_frame(kg, kn, kt)).outcome == outcome


def test_od_needs_nonzero_torsion():
    with pytest.raises(TheoremInapplicable):
        classify_od_origin(_frame([1.0], [0.0, 1.0], [0.0, 1.0]))


@pytest.mark.parametrize(
    "kg, kn, kt, outcome",
    [
        ([1.0, 0.0], [0.0], [-1.0, 1.0], "cuspidal_edge"),
        ([0.0, 1.0], [0.0], [1.0], "swallowtail"),
        ([1.0], [0.0], [1.0], "degenerate"),
    ],
)
def test_nd_decision_table(kg, kn, kt, outcome):
    c = classify_nd_origin(_frame(kg, kn, kt))
    assert c.outcome == outcome
    if outcome == "degenerate":
        assert "cuspidal beaks excluded" in c.notes


def test_nd_needs_a_direction():
    with pytest.raises(TheoremInapplicable):
        classify_nd_origin(_frame([0.0, 1.0], [0.0], [0.0, 1.0]))


def test_swex_normal_obstruction_vanishes_at_the_origin():
    c = classify_nd_origin(frame("swex"))
    assert abs(c.witnesses["delta_n"]) < 1e-12
    assert c.outcome == "degenerate"


@pytest.mark.parametrize("index", range(8))
def test_perturbed_swallowtails(index):
    rng = np.random.default_rng(1000 + index)
    d = frame_series(perturbed_swex(rng, index), degree=6)
    od = classify_od_origin(d)
    assert od.outcome == "swallowtail"
    nd = classify_nd_origin(d)
    assert abs(nd.witnesses["delta_n"]) > 1e-9
    assert nd.outcome == "cuspidal_edge"


def test_shape_of_the_standard_swallowtail():
    r = detect_shape(developable("std-swallowtail", "osculating"), samples=41)
    assert r.shape == "generic"
    assert r.axis_or_apex is None


def test_cylinder_report_fields():
    r = detect_shape(developable("swodfcyl", "osculating"), samples=41)
    assert r.shape == "cylinder"
    np.testing.assert_allclose(r.axis_or_apex, (1, 0, 0), atol=1e-9)
    assert r.contour_residual < 1e-7 and r.variation < 1e-7 and r.delta_max < 1e-8


def test_cone_report_fields():
    r = detect_shape(developable("sphere-whitney", "normal"), samples=41)
    assert r.shape == "cone"
    np.testing.assert_allclose(r.axis_or_apex, (0, 0, 1), atol=1e-9)
    assert r.contour_residual < 1e-7 and r.sigma_max < 1e-8


def test_mixed_case_is_reported():
    # a negative tolerance rejects the cylinder test; this cylinder has no striction
    # curve, so sigma is undefined and neither test applies
    dev = developable("swodfcyl", "osculating")
    with pytest.raises(MixedCase):
        detect_shape(dev, samples=5, tol=-1.0)
