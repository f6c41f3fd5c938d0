"""Darboux frame along the singular curve through a second-kind point."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, SpecError
from .frontal import Frontal, classify_kind, is_zero
from .jets import CURVE_DEGREE, Jet1, Vec3Jet, divide_by_parameter, multiply_by_parameter

__all__ = ["DarbouxData", "OracleInvariants", "frame_series", "invariant_series", "oracle_invariants"]


@dataclass(frozen=True)
class DarbouxData:
    """Jets in ``t`` of the frame and its invariants.

    ``kg``, ``kn`` and ``kt`` are the modified geodesic, normal and torsion
    invariants; ``alpha = t |gamma_hat'(t) / t|``.
    """

    gamma_hat: Vec3Jet
    nu_bar: Vec3Jet
    h: Vec3Jet
    e: Vec3Jet
    b: Vec3Jet
    alpha: Jet1
    kg: Jet1
    kn: Jet1
    kt: Jet1
    t_flipped: bool
    det0: float
    base: float = 0.0
    name: str = ""
    spec: object = field(default=None, compare=False, repr=False)
    frontal: object = field(default=None, compare=False, repr=False)

    def at(self, t, degree=4) -> "DarbouxData":
        """The frame rebuilt about parameter ``t`` with the same orientation."""
        if self.spec is None:
            raise SpecError("frame was built without its surface")
        return frame_series(self.spec, degree, t, self.t_flipped, self.frontal, check_kind=False)

    def structure_residual(self) -> float:
        """Max coefficient of the three structure-equation residuals."""
        e1, b1, n1 = self.e.deriv(), self.b.deriv(), self.nu_bar.deriv()
        r1 = e1 - (self.b * self.kg + self.nu_bar * self.kn)
        r2 = b1 - (self.e * (-self.kg) + self.nu_bar * self.kt)
        r3 = n1 - (self.e * (-self.kn) + self.b * (-self.kt))
        return max(r1.max_abs(), r2.max_abs(), r3.max_abs())

    def orthonormality_residual(self) -> float:
        e, b, n = self.e, self.b, self.nu_bar
        one = [e.dot(e) - 1.0, b.dot(b) - 1.0, n.dot(n) - 1.0, e.dot(b), e.dot(n), b.dot(n)]
        return max(j.scale() for j in one)

    def invariants_at(self, t):
        """Polynomial values ``(kg, kn, kt, alpha)`` at offset ``t`` from the base."""
        return tuple(float(j(t)) for j in (self.kg, self.kn, self.kt, self.alpha))


def _raw_frame(frontal: Frontal, base, degree, flipped):
    p = Frontal.parameter(base, degree, flipped)
    ghat = frontal.along_curve(0, 0, p)
    d1 = ghat.deriv()
    if base == 0.0:
        atol = 1e-10 * (1 + d1.max_abs())
        h = Vec3Jet(*(divide_by_parameter(c, atol) for c in d1))
        alpha = multiply_by_parameter(h.norm())
    else:
        T = Jet1.variable(base, d1.degree)
        h = d1 / T
        alpha = T * h.norm()
    nu = frontal.normal.along(p)
    return ghat, h, nu, alpha


def _cusp_determinant(frontal: Frontal) -> float:
    ghat, _, nu, _ = _raw_frame(frontal, 0.0, 4, False)
    g2 = np.array([2.0 * c.coeffs[2] for c in ghat])
    g3 = np.array([6.0 * c.coeffs[3] for c in ghat])
    return float(np.linalg.det(np.column_stack([g2, g3, nu.value()])))


def frame_series(spec, degree=CURVE_DEGREE, base=0.0, flip=None, frontal=None, check_kind=True) -> DarbouxData:
    """Build the frame jets about parameter ``base``.

    The orientation is fixed once at ``t = 0`` so that
    ``det(gamma_hat'', gamma_hat''', nu)(0) > 0``, by substituting ``t -> -t``
    if needed.  The normal's sign is never changed.
    """
    frontal = frontal or Frontal(spec)
    if check_kind:
        kind = classify_kind(spec, frontal).kind
        if kind != "second":
            raise DegeneracyError(f"frame needs a second-kind point at t = 0, found kind {kind}")
    det0 = _cusp_determinant(frontal) if (flip is None or base == 0.0) else float("nan")
    if flip is None:
        ghat = frontal.along_curve(0, 0, Frontal.parameter(0.0, 3))
        scale = ghat.max_abs() ** 2
        if is_zero(det0, scale):
            raise DegeneracyError("degenerate: frame undefined (det(gamma'', gamma''', nu)(0) = 0)")
        flip = det0 < 0
    ghat, h, nu, alpha = _raw_frame(frontal, float(base), degree, flip)
    hn = h.norm()
    e = h / hn
    k = min(e.degree, nu.degree)
    e, nu_t = e.truncate(k), nu.truncate(k)
    b = nu_t.cross(e)  # b = -e x nu
    e1, b1 = e.deriv(), b.deriv()
    kg = e1.dot(b.truncate(e1.degree))
    kn = e1.dot(nu.truncate(e1.degree))
    kt = b1.dot(nu.truncate(b1.degree))
    return DarbouxData(
        gamma_hat=ghat,
        nu_bar=nu,
        h=h,
        e=e,
        b=b,
        alpha=alpha,
        kg=kg,
        kn=kn,
        kt=kt,
        t_flipped=bool(flip),
        det0=-det0 if flip else det0,
        base=float(base),
        name=spec.name,
        spec=spec,
        frontal=frontal,
    )


def invariant_series(d: DarbouxData):
    return d.kg, d.kn, d.kt, d.alpha


@dataclass(frozen=True)
class OracleInvariants:
    t: float
    kappa_s: float
    kappa_nu: float
    kappa_t: float


def oracle_invariants(spec, t, frontal=None) -> OracleInvariants:
    """Singular curvature, limiting normal curvature and cuspidal torsion at ``(t, 0)``.

    Computed from the surface partials and ``eps`` alone, without the frame.
    """
    frontal = frontal or Frontal(spec)
    if not frontal.adapted:
        raise SpecError("unsupported: oracle invariants need an adapted chart gamma = (t, 0)")
    if t == 0:
        raise DegeneracyError("oracle invariants are defined only at t != 0")
    U = Jet1.variable(float(t), 3)
    P = {ij: frontal.along_curve(*ij, U) for ij in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]}
    fu, fv, fuu, fuv, fvv = (P[k] for k in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)])
    eps = -fu.dot(fv) / fv.dot(fv)
    nu = frontal.normal.along(U).value()
    Fu, Fv, Fuu, Fuv, Fvv = (x.value() for x in (fu, fv, fuu, fuv, fvv))
    e0 = eps.value
    nfu = np.linalg.norm(Fu)
    if nfu <= 1e-12:
        raise DegeneracyError("oracle invariants need f_u != 0")
    det = lambda a, b, c: float(np.linalg.det(np.column_stack([a, b, c])))  # noqa: E731
    kappa_nu = float(Fuu @ nu) / nfu**2
    eta_lam = det(Fuu + e0 * Fuv, Fv, nu) + det(Fu, Fuv + e0 * Fvv, nu)
    kappa_s = float(np.sign(e0) * np.sign(eta_lam)) * det(Fu, Fuu, nu) / nfu**3
    # eta eta f along the axis, then its u-derivative
    nnf = fuu + fv * eps.deriv() + fuv * (2.0 * eps) + fvv * (eps * eps)
    nnf_u = nnf.deriv().value()
    N = nnf.value()
    cr = np.cross(Fu, N)
    c2 = float(cr @ cr)
    if c2 <= 1e-24:
        raise DegeneracyError("torsion undefined: f_u x eta eta f vanishes")
    kappa_t = det(Fu, N, nnf_u) / c2 - det(Fu, N, Fuu) * float(Fu @ N) / (nfu**2 * c2)
    return OracleInvariants(float(t), kappa_s, kappa_nu, kappa_t)
