"""Decision tables for the developables at the origin, and cylinder/cone detection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .darboux import DarbouxData
from .developable import Developable, sample_developable, striction_data
from .errors import DegeneracyError
from .jets import Jet1

__all__ = [
    "Classification",
    "ShapeReport",
    "TheoremInapplicable",
    "MixedCase",
    "classify_od_origin",
    "classify_nd_origin",
    "detect_shape",
]

THEOREM_TOL = 1e-9


class TheoremInapplicable(DegeneracyError):
    pass


class MixedCase(DegeneracyError):
    pass


def _nonzero(value, *terms, tol=THEOREM_TOL):
    """``value != 0`` relative to the size of the terms it was assembled from."""
    scale = 1.0 + sum(abs(t) for t in terms)
    return abs(value) > tol * scale


@dataclass(frozen=True)
class Classification:
    target: str
    outcome: str  # cuspidal_edge | swallowtail | cuspidal_beaks | degenerate
    witnesses: dict
    notes: tuple = ()


def _d(jet: Jet1, k=0):
    return float(jet.derivative_at_base(k))


def classify_od_origin(d: DarbouxData) -> Classification:
    kg0, kt0 = _d(d.kg), _d(d.kt)
    kg1, kt1 = _d(d.kg, 1), _d(d.kt, 1)
    kn0, kn1, kn2 = _d(d.kn), _d(d.kn, 1), _d(d.kn, 2)
    if not _nonzero(kt0, kt0, kg0, kn1):
        raise TheoremInapplicable("theorem inapplicable: kappa_t(0) = 0")
    delta0 = kg0 * (kn0**2 + kt0**2) - kt0 * kn1 + kt1 * kn0
    disc = kg0 * kt0 - 3.0 * kn1
    beak = kt0 * kg1 + 2.0 * kg0 * kt1 - kn2
    w = {
        "delta_o": delta0,
        "delta_o_prime": kt0 * beak,
        "swallowtail_discriminant": disc,
        "beaks_discriminant": beak,
        "kappa_g": kg0,
        "kappa_t": kt0,
        "kappa_nu_prime": kn1,
    }
    notes = ["away from u = 0 the singular points are cuspidal edges (not verified)"]
    if _nonzero(delta0, kt0 * kg0 * kt0, kt0 * kn1):
        outcome = "swallowtail" if _nonzero(disc, kg0 * kt0, 3 * kn1) else "degenerate"
    else:
        ok = _nonzero(beak, kt0 * kg1, 2 * kg0 * kt1, kn2) and _nonzero(kn1, kn1)
        outcome = "cuspidal_beaks" if ok else "degenerate"
    return Classification("osculating", outcome, w, tuple(notes))


def classify_nd_origin(d: DarbouxData) -> Classification:
    kg0, kt0 = _d(d.kg), _d(d.kt)
    kg1, kt1 = _d(d.kg, 1), _d(d.kt, 1)
    kn0 = _d(d.kn)
    if not _nonzero(abs(kg0) + abs(kt0), kg0, kt0, kg1, kt1):
        raise TheoremInapplicable("theorem inapplicable: (kappa_t, kappa_g)(0) = (0, 0)")
    delta0 = kn0 * (kg0**2 + kt0**2) - kg0 * kt1 + kt0 * kg1
    w = {"delta_n": delta0, "kappa_g": kg0, "kappa_t": kt0, "kappa_g_prime": kg1, "kappa_t_prime": kt1}
    notes = []
    if _nonzero(delta0, kg0 * kt1, kt0 * kg1):
        outcome = "cuspidal_edge" if _nonzero(kg0, kg0, kt0) else "swallowtail"
    else:
        outcome = "degenerate"
        notes.append("cuspidal beaks excluded")
    return Classification("normal", outcome, w, tuple(notes))


@dataclass(frozen=True)
class ShapeReport:
    target: str
    shape: str  # cylinder | cone | generic
    axis_or_apex: Optional[tuple]
    contour_residual: Optional[float]
    spherical_image_residual: float
    delta_max: float
    sigma_max: Optional[float] = None
    variation: Optional[float] = None  # max |D(u) - D(0)| or max |s(u) - s(0)|
    notes: tuple = field(default=())


def _below(values, jet, tol):
    return float(np.max(np.abs(values))) < tol * (1.0 + jet.scale())


def detect_shape(dev: Developable, samples=201, tol=1e-8, t_range=(-0.4, 0.4)) -> ShapeReport:
    """Cylinder if ``delta`` vanishes on the sample range, else cone if ``sigma`` does, else generic.

    All sampled quantities are exact values at each parameter (see
    :func:`sample_developable`), not truncated-series values.
    """
    ts = np.linspace(*t_range, samples)
    S = sample_developable(dev, ts)
    sph = float(np.max(np.abs(S.spherical)))
    delta_max = float(np.max(np.abs(S.delta)))
    if _below(S.delta, dev.delta, tol):
        axis = dev.direction.value()
        resid = float(np.max(np.abs(S.companion @ axis)))
        var = float(np.max(np.linalg.norm(S.direction - axis, axis=1)))
        return ShapeReport(dev.kind, "cylinder", tuple(axis), resid, sph, delta_max, None, var)
    if np.any(np.isnan(S.sigma)):
        raise MixedCase("mixed case: neither theorem applies on the whole interval")
    _, s, sigma = striction_data(dev)
    sigma_max = float(np.max(np.abs(S.sigma)))
    if _below(S.sigma, sigma, tol):
        apex = s.value()
        resid = float(np.max(np.abs(np.einsum("ij,ij->i", S.base - apex, S.companion))))
        var = float(np.max(np.linalg.norm(S.striction - apex, axis=1)))
        return ShapeReport(dev.kind, "cone", tuple(apex), resid, sph, delta_max, sigma_max, var)
    return ShapeReport(dev.kind, "generic", None, None, sph, delta_max, sigma_max, None)
