import numpy as np
import pytest

from swallowdev import expr as ex
from swallowdev.catalog import ENTRIES, catalog_get, catalog_names, emit
from swallowdev.errors import SpecError
from swallowdev.frontal import lambda_jet

from conftest import check_expected, frontal

NAMES = [
    "std-swallowtail",
    "swex",
    "swodfcyl",
    "swndfcyl",
    "ndfcyl",
    "cylinder-whitney",
    "cone-whitney",
    "plane-whitney",
    "sphere-whitney",
]


def test_names():
    assert catalog_names() == NAMES


def test_unknown_name_lists_the_catalog():
    with pytest.raises(SpecError) as info:
        catalog_get("foo")
    assert all(n in str(info.value) for n in NAMES)


def test_emitted_text_parses_to_the_same_surface(entry_name):
    spec = ex.parse_spec(emit(entry_name))
    ref = ENTRIES[entry_name].spec
    assert spec.name == entry_name
    assert spec.f == ref.f and spec.nu == ref.nu and spec.gamma == ref.gamma


def test_standard_swallowtail_entry():
    e = catalog_get("std-swallowtail")
    assert e.expected["od_class"] == "swallowtail"
    assert any("coincides with f" in n for n in e.notes)
    assert [ex.evaluate(g, {"t": 0.5}) for g in e.spec.gamma] == [-1.5, 0.5]
    assert not e.spec.auto_normal


def test_quasi_swallowtail_entry():
    e = catalog_get("ndfcyl")
    assert e.expected == {"kind": "second", "front": False, "nd_shape": "cylinder", "nd_axis": (0.0, 0.0, 1.0)}
    assert any("homeomorphic to the swallowtail" in n for n in e.notes)


@pytest.mark.parametrize("t", np.linspace(-0.3, 0.3, 13))
def test_standard_swallowtail_singular_set(t):
    spec = ENTRIES["std-swallowtail"].spec
    lam = lambda_jet(spec, (-6 * t * t, t), degree=0, frontal=frontal("std-swallowtail"))
    assert abs(lam.value) < 1e-10


def test_expected_maps_hold(entry_name):
    assert check_expected(entry_name) == []
