import numpy as np
import pytest

from swallowdev.catalog import ENTRIES
from swallowdev.developable import (
    build_developable,
    derivative_identity_check,
    eval_point,
    grid_triangles,
    jet_ratio,
    sample_developable,
    sample_mesh,
    snap_to_base,
    striction_closed_form,
    striction_data,
)
from swallowdev.errors import DegeneracyError, JetError
from swallowdev.jets import Jet1, det3, multiply_by_parameter

from conftest import developable, frame

KINDS = ("osculating", "normal")
DEFINED = [(n, k) for n in ENTRIES for k in KINDS if developable(n, k) is not None]
WITH_STRICTION = [(n, k) for n, k in DEFINED if developable(n, k).striction_available()]


def _times_t(j, k):
    for _ in range(k):
        j = multiply_by_parameter(j)
    return j


def test_undefined_directions_are_exactly_the_flat_cases():
    undefined = {(n, k) for n in ENTRIES for k in KINDS} - set(DEFINED)
    assert undefined == {("ndfcyl", "osculating"), ("plane-whitney", "osculating")}
    with pytest.raises(DegeneracyError, match="direction undefined"):
        build_developable(frame("ndfcyl"), "od")


def test_unknown_kind():
    with pytest.raises(JetError):
        build_developable(frame("swex"), "binormal")


@pytest.mark.parametrize("name, kind", DEFINED)
def test_direction_field_identities(name, kind):
    dev = developable(name, kind)
    D = dev.direction
    assert (D.dot(D) - 1.0).scale() < 1e-10
    # the ruling lies in the plane orthogonal to the companion vector
    assert D.dot(dev.companion.truncate(D.degree)).scale() < 1e-10
    assert derivative_identity_check(dev) < 1e-9
    k = D.degree - 1
    assert det3(dev.base.deriv().truncate(k), D.truncate(k), D.deriv()).scale() < 1e-9


@pytest.mark.parametrize("name, kind", DEFINED)
def test_spherical_image_identity(name, kind):
    dev = developable(name, kind)
    w = dev.companion
    sph = det3(w, w.deriv(), w.deriv().deriv())
    sign = 1.0 if kind == "osculating" else -1.0
    delta = _times_t(dev.delta, 2 * dev.order)
    k = min(sph.degree, delta.degree)
    assert (sph.truncate(k) - delta.truncate(k) * sign).scale() < 1e-9


def test_desingularisation_orders():
    orders = {(n, k): developable(n, k).order for n, k in DEFINED}
    assert {key for key, o in orders.items() if o} == {
        ("cylinder-whitney", "osculating"),
        ("cone-whitney", "osculating"),
        ("sphere-whitney", "osculating"),
    }
    assert all(o == 1 for o in orders.values() if o)


@pytest.mark.parametrize("name, kind", WITH_STRICTION)
def test_striction_closed_form_and_singular_locus(name, kind):
    dev = developable(name, kind)
    t_star, s, _ = striction_data(dev)
    cf = striction_closed_form(dev)
    k = min(s.degree, cf.degree)
    assert (s.truncate(k) - cf.truncate(k)).max_abs() < 1e-9
    c0, c1 = dev.lambda_ruled
    k = min(c0.degree, c1.degree, t_star.degree)
    lam = c0.truncate(k) + c1.truncate(k) * t_star.truncate(k)
    assert lam.scale() < 1e-9


@pytest.mark.parametrize("name, kind", WITH_STRICTION)
def test_striction_derivative_matches_sigma(name, kind):
    dev = developable(name, kind)
    d = dev.frame
    sign = -1.0 if kind == "osculating" else 1.0
    h = 1e-5
    for t in (-0.2, 0.07, 0.15):
        loc = build_developable(d.at(t, 5), kind, order=dev.order)
        _, s, sigma = striction_data(loc)
        sp, sm = (striction_data(build_developable(d.at(t + e), kind, order=dev.order))[1].value() for e in (h, -h))
        fd = (sp - sm) / (2 * h)
        want = sign * sigma.value * loc.norm.value / loc.delta.value**2 * loc.direction.value()
        assert np.linalg.norm(fd - want) <= 1e-5 * max(1.0, np.linalg.norm(want))


@pytest.mark.parametrize("name", ["std-swallowtail", "swex", "swndfcyl"])
def test_osculating_striction_starts_at_the_cusp(name):
    t_star, _, sigma = striction_data(developable(name, "osculating"))
    assert abs(t_star.value) < 1e-12 and abs(sigma.value) < 1e-12


def test_removable_ratio_and_poles():
    t = Jet1.variable(0.0, 4)
    r = jet_ratio(t * (2.0 + t), t * (1.0 + t))
    assert r.value == pytest.approx(2.0)
    with pytest.raises(DegeneracyError, match="pole"):
        jet_ratio(1.0 + t, t)


def test_snap():
    np.testing.assert_array_equal(snap_to_base([1e-17, 0.2], 0.0), [0.0, 0.2])


def test_sampling_matches_series_near_the_base():
    dev = developable("swex", "normal")
    S = sample_developable(dev, [0.0, 0.02])
    np.testing.assert_allclose(S.delta, [dev.delta.value, float(dev.delta(0.02))], atol=1e-9)
    np.testing.assert_allclose(S.direction[1], dev.direction(0.02), atol=1e-9)


def test_mesh_layout():
    dev = developable("swex", "osculating")
    m = sample_mesh(dev, nu=5, nv=3)
    assert m.vertices.shape == (15, 3) and m.triangles.shape == (16, 3)
    np.testing.assert_allclose(m.vertices[1], eval_point(dev, -0.4, 0.0))
    assert grid_triangles(2, 2).tolist() == [[0, 2, 3], [0, 3, 1]]
    with pytest.raises(JetError, match="trust radius"):
        sample_mesh(dev, u_range=(-0.8, 0.4))
