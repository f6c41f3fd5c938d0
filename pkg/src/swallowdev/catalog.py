"""Built-in frontal germs with their expected properties."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SpecError
from .expr import SurfaceSpec, format_spec, parse_spec

__all__ = ["CatalogEntry", "ENTRIES", "catalog_get", "catalog_names", "emit"]

# Whitney cusp (u, v^3 + u v), singular along u = -3 v^2
_WX = "u"
_WY = "(v^3 + u*v)"
_W_GAMMA = ("-3*t^2", "t")
_SQ = f"sqrt(1 - u^2 - {_WY}^2)"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    spec: SurfaceSpec
    expected: dict = field(default_factory=dict)
    notes: tuple = ()


def _entry(name, f, nu, gamma, expected, notes=(), comment=None):
    text = format_spec(name, f, nu, gamma, comment)
    return CatalogEntry(name, parse_spec(text), expected, tuple(notes))


_STD_N = "sqrt(1 + v^2 + v^4)"

ENTRIES = {
    e.name: e
    for e in [
        _entry(
            "std-swallowtail",
            ("u", "4*v^3 + 2*u*v", "3*v^4 + u*v^2"),
            (f"v^2/{_STD_N}", f"-v/{_STD_N}", f"1/{_STD_N}"),
            ("-6*t^2", "t"),
            {"kind": "second", "front": True, "od_class": "swallowtail", "od_shape": "generic"},
            ["OD_f coincides with f: the standard swallowtail is a tangent developable"],
            "standard swallowtail; S(f) = {u = -6 v^2}",
        ),
        _entry(
            "swex",
            ("v + u^2/2 - u^2*v/2 - u^4/8", "u^3/3 + u*v", "v^2/2"),
            "auto",
            ("t", "0"),
            {
                "kind": "second",
                "front": True,
                "od_class": "swallowtail",
                "nd_class": "degenerate",
                "od_shape": "generic",
            },
            ["kappa_g' = kappa_t' = 0 at 0, so delta_n(0) = 0: the normal-developable theorem takes its degenerate branch"],
            "swallowtail in an adapted chart S(f) = {v = 0}",
        ),
        _entry(
            "swodfcyl",
            ("-u^2/2 + v", "u^3/3 - u*v", "u^4/8 + (u^2/2 - v)^2/2 - u^2*v/2"),
            "auto",
            ("t", "0"),
            {"kind": "second", "front": True, "od_shape": "cylinder", "od_axis": (1.0, 0.0, 0.0)},
            comment="swallowtail whose osculating developable is a cylinder",
        ),
        _entry(
            "swndfcyl",
            ("-u^2/2 + v", "u^3/3 - u*v", "u^4/8 - u^2*v/2"),
            "auto",
            ("t", "0"),
            {"kind": "second", "front": True, "nd_shape": "cylinder"},
            comment="swallowtail whose normal developable is a cylinder",
        ),
        _entry(
            "ndfcyl",
            ("u^2 - v", "-u^3 + 3*u*(u^2 - v)", "(2*u^2 - v)^3*v^3"),
            "auto",
            ("t", "0"),
            {"kind": "second", "front": False, "nd_shape": "cylinder", "nd_axis": (0.0, 0.0, 1.0)},
            ["second kind but not a swallowtail; the image is locally homeomorphic to the swallowtail"],
            "quasi-swallowtail with a cylindrical normal developable",
        ),
        _entry(
            "cylinder-whitney",
            (f"sin({_WX})", f"1 - cos({_WX})", _WY),
            ("sin(u)", "-cos(u)", "0"),
            _W_GAMMA,
            {"kind": "second", "front": False, "od_shape": "cylinder", "od_axis": (0.0, 0.0, 1.0)},
            ["Whitney cusp composed into the cylinder (sin x, 1 - cos x, y)"],
            "Whitney cusp (u, v^3 + u v) on the unit cylinder",
        ),
        _entry(
            "cone-whitney",
            (f"(1 + {_WY})*cos({_WX}) - 1", f"(1 + {_WY})*sin({_WX})", _WY),
            ("cos(u)/sqrt(2)", "sin(u)/sqrt(2)", "-1/sqrt(2)"),
            _W_GAMMA,
            {"kind": "second", "front": False, "od_shape": "cone", "od_apex": (-1.0, 0.0, -1.0)},
            ["Whitney cusp composed into the cone z = sqrt(x^2 + y^2), translated so f(0) = 0"],
            "Whitney cusp (u, v^3 + u v) on a cone with apex (-1, 0, -1)",
        ),
        _entry(
            "plane-whitney",
            (_WX, _WY, "0"),
            ("0", "0", "1"),
            _W_GAMMA,
            {"kind": "second", "front": False, "nd_shape": "cylinder", "nd_axis": (0.0, 0.0, 1.0)},
            ["Whitney frontal; the source labels this case by the cylinder map, read here as the plane"],
            "Whitney cusp (u, v^3 + u v) in the plane z = 0",
        ),
        _entry(
            "sphere-whitney",
            (_WX, _WY, f"1 - {_SQ}"),
            (_WX, _WY, f"-{_SQ}"),
            _W_GAMMA,
            {"kind": "second", "front": False, "nd_shape": "cone", "nd_apex": (0.0, 0.0, 1.0)},
            ["Whitney frontal; the source labels this case by the cone map, read here as the sphere"],
            "Whitney cusp (u, v^3 + u v) on the unit sphere centred at (0, 0, 1)",
        ),
    ]
}


def catalog_names():
    return list(ENTRIES)


def catalog_get(name) -> CatalogEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        raise SpecError(f"unknown catalog entry {name!r}; valid names: {', '.join(ENTRIES)}") from None


def emit(name) -> str:
    """Surface-file text of a catalog entry."""
    return catalog_get(name).spec.source
