"""Singular-set analysis of a frontal germ in its domain.

Quantities along the singular curve are jets in the curve parameter ``t``,
obtained by substituting the curve jets into symbolically differentiated
expression trees, so no derivative order is lost to truncation.  Quantities
near a point of the domain are two-variable jets.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from . import expr as ex
from . import jets
from .errors import ConsistencyError, DegeneracyError, JetDomainError, SpecError
from .jets import CURVE_DEGREE, SURFACE_DEGREE, Jet1, Jet2, Vec3Jet, det3

__all__ = [
    "Frontal",
    "NormalField",
    "FrontalDiagnostics",
    "KindResult",
    "is_zero",
    "lambda_jet",
    "null_data",
    "compute_normal",
    "classify_kind",
    "is_front",
]

ZERO_TOL = 1e-9


def is_zero(x, scale=0.0, tol=ZERO_TOL):
    """Zero test relative to the size of the quantity it came from."""
    return abs(x) <= tol * (1.0 + scale)


class Frontal:
    """Jet evaluator for the map, its partial derivatives and the singular curve."""

    def __init__(self, spec: ex.SurfaceSpec):
        self.spec = spec
        self._partials = {(0, 0): spec.f}

    def partial_trees(self, i, j):
        key = (i, j)
        if key not in self._partials:
            if j > 0:
                prev = self.partial_trees(i, j - 1)
                self._partials[key] = tuple(ex.diff(c, "v") for c in prev)
            else:
                prev = self.partial_trees(i - 1, 0)
                self._partials[key] = tuple(ex.diff(c, "u") for c in prev)
        return self._partials[key]

    @staticmethod
    def parameter(base=0.0, degree=CURVE_DEGREE, flipped=False):
        """Jet of the substitution ``t -> t`` (or ``t -> -t``) about ``base``."""
        if flipped:
            coeffs = np.zeros(degree + 1)
            coeffs[0] = -base
            if degree >= 1:
                coeffs[1] = -1.0
            return Jet1(coeffs, base)
        return Jet1.variable(base, degree)

    def curve(self, param: Jet1):
        """Jets of the domain curve ``gamma`` composed with ``param``."""
        return tuple(ex.eval_ast(g, {"t": param}) for g in self.spec.gamma)

    def along_curve(self, i, j, param: Jet1) -> Vec3Jet:
        """Jet in ``t`` of ``d^i/du^i d^j/dv^j f`` along the singular curve."""
        cu, cv = self.curve(param)
        return Vec3Jet(*(ex.eval_ast(c, {"u": cu, "v": cv}) for c in self.partial_trees(i, j)))

    def at_point(self, base, degree=SURFACE_DEGREE) -> Vec3Jet:
        """Two-variable jet of ``f`` about a domain point."""
        b = {"u": Jet2.variable("u", base, degree), "v": Jet2.variable("v", base, degree)}
        return Vec3Jet(*(ex.eval_ast(c, b) for c in self.spec.f))

    def value(self, i, j, u, v):
        return np.array([ex.evaluate(c, {"u": u, "v": v}) for c in self.partial_trees(i, j)])

    @cached_property
    def adapted(self) -> bool:
        """Whether the domain curve is exactly ``gamma(t) = (t, 0)``."""
        p = Jet1.variable(0.0, 3)
        cu, cv = self.curve(p)
        return bool(np.allclose(cu.coeffs, p.coeffs, atol=1e-14) and np.allclose(cv.coeffs, 0.0, atol=1e-14))

    @cached_property
    def normal(self) -> "NormalField":
        return NormalField(self)


class NormalField:
    """The unit normal: explicit from the surface file or reconstructed.

    In an adapted chart ``f_u + eps f_v = v g`` and the normal is
    ``(f_v x g) / |f_v x g|``, which stays smooth across the singular curve.
    """

    def __init__(self, frontal: Frontal):
        self.frontal = frontal
        spec = frontal.spec
        self.auto = spec.auto_normal
        if self.auto and not frontal.adapted:
            raise SpecError("explicit normal required: nu = auto needs gamma = (t, 0)")
        self.sign_vs_auto: Optional[int] = None
        if self.auto:
            self._check_adapted()
        elif frontal.adapted:
            self.sign_vs_auto = self._compare_with_auto()

    # -- adapted-chart pieces --------------------------------------------
    def epsilon(self, param: Jet1) -> Jet1:
        fu = self.frontal.along_curve(1, 0, param)
        fv = self.frontal.along_curve(0, 1, param)
        return -fu.dot(fv) / fv.dot(fv)

    def g(self, param: Jet1, eps=None) -> Vec3Jet:
        if eps is None:
            eps = self.epsilon(param)
        return self.frontal.along_curve(1, 1, param) + self.frontal.along_curve(0, 2, param) * eps

    def _check_adapted(self):
        p = Frontal.parameter(0.0, 6)
        eps = self.epsilon(p)
        fu = self.frontal.along_curve(1, 0, p)
        fv = self.frontal.along_curve(0, 1, p)
        resid = (fu + fv * eps).max_abs()
        if resid > 1e-9 * (1 + fu.max_abs() + fv.max_abs()):
            raise SpecError(
                f"not an adapted chart: f_u + eps f_v does not vanish on v = 0 (residual {resid:.3e})"
            )
        for u0 in (-0.1, -0.05, 0.05, 0.1):
            lam = lambda_jet(self.frontal.spec, (u0, 0.0), degree=0, frontal=self.frontal)
            if not is_zero(lam.value, lam.scale(), 1e-8):
                raise SpecError(f"lambda does not vanish on v = 0 at u = {u0}")

    def _auto_along(self, param):
        eps = self.epsilon(param)
        fv = self.frontal.along_curve(0, 1, param)
        n = fv.cross(self.g(param, eps))
        norm0 = np.linalg.norm(n.value())
        if norm0 <= 1e-12 * (1 + fv.max_abs()):
            raise DegeneracyError("degenerate normal: |f_v x g| vanishes")
        return n.normalized()

    def _compare_with_auto(self):
        p = Frontal.parameter(0.0, 2)
        try:
            auto = self._auto_along(p).value()
        except (DegeneracyError, JetDomainError):  # f_v = 0 on the curve: first kind, no reconstruction
            return None
        given = self._explicit(self.frontal.curve(p)).value()
        d = float(np.dot(auto, given))
        if abs(abs(d) - 1.0) > 1e-8:
            raise SpecError("explicit nu is not the normal of the frontal along the singular curve")
        return 1 if d > 0 else -1

    def _explicit(self, coords):
        cu, cv = coords
        nu = Vec3Jet(*(ex.eval_ast(c, {"u": cu, "v": cv}) for c in self.frontal.spec.nu))
        return nu.normalized()

    # -- public evaluators ----------------------------------------------
    def along(self, param: Jet1) -> Vec3Jet:
        """Jet in ``t`` of the normal along the singular curve."""
        if self.auto:
            return self._auto_along(param)
        return self._explicit(self.frontal.curve(param))

    def near(self, base, degree=SURFACE_DEGREE) -> Vec3Jet:
        """Two-variable jet of the normal about a domain point."""
        if not self.auto:
            b = {"u": Jet2.variable("u", base, degree), "v": Jet2.variable("v", base, degree)}
            return Vec3Jet(*(ex.eval_ast(c, b) for c in self.frontal.spec.nu)).normalized()
        if abs(base[1]) > 1e-12:
            # off the singular curve the normal is the normalised f_u x f_v, oriented
            # continuously from the curve
            F = self.frontal.at_point(base, degree + 1)
            n = F.du().cross(F.dv())
            ref = self.at(base[0], 0.0)
            sign = 1.0 if np.dot(n.value(), ref) >= 0 else -1.0
            return n.normalized() * sign
        return _auto_near(self.frontal, base, degree)

    def at(self, u, v) -> np.ndarray:
        """Plain value of the normal at a domain point."""
        return self.near((u, v), degree=0).value()


def compute_normal(spec: ex.SurfaceSpec) -> NormalField:
    return Frontal(spec).normal


def lambda_jet(spec, point, degree=SURFACE_DEGREE, frontal=None) -> Jet2:
    """Jet of ``lambda = det(f_u, f_v, nu)`` about ``point``."""
    frontal = frontal or Frontal(spec)
    F = frontal.at_point(point, degree + 1)
    fu, fv = F.du(), F.dv()
    if frontal.spec.auto_normal and abs(point[1]) <= 1e-12:
        # avoid recursion from the adaptedness check itself
        nu = _auto_near(frontal, point, degree)
    else:
        nu = frontal.normal.near(point, degree)
    k = min(fu.degree, nu.degree)
    return det3(fu.truncate(k), fv.truncate(k), nu.truncate(k))


def _auto_near(frontal, base, degree):
    """Normal on the axis ``v = 0`` of an adapted chart, from ``(f_u + eps f_v) / v``."""
    F = frontal.at_point(base, degree + 2)
    fu, fv = F.du(), F.dv()
    fu1, fv1 = fu.restrict_v0(), fv.restrict_v0()
    eps = Jet2.from_u_jet(-fu1.dot(fv1) / fv1.dot(fv1), base[1]).truncate(fu.degree)
    G = Vec3Jet(*(c.divide_by_v(1e-9 * (1 + fu.max_abs())) for c in fu + fv * eps))
    return fv.truncate(G.degree).cross(G).normalized()


# ----------------------------------------------------------------------
# null direction and kind


@dataclass(frozen=True)
class KindResult:
    kind: str  # "first" | "second" | "degenerate"
    phi0: float
    dphi0: float
    dlambda: tuple
    eta_lambda: float
    eta_eta_lambda: float
    kind_by_phi: str
    kind_by_lambda: str


@dataclass(frozen=True)
class FrontalDiagnostics:
    lam: Jet2
    eta: tuple  # two Jet1, unit, oriented so that phi'(0) > 0
    phi: Jet1
    epsilon: Optional[Jet1]
    g: Optional[Vec3Jet]
    kind: KindResult
    is_front_at_origin: bool


def _null_direction(frontal: Frontal, degree=CURVE_DEGREE):
    p = Frontal.parameter(0.0, degree)
    a = frontal.along_curve(1, 0, p)
    b = frontal.along_curve(0, 1, p)
    na, nb = np.linalg.norm(a.value()), np.linalg.norm(b.value())
    scale = 1.0 + a.max_abs() + b.max_abs()
    if max(na, nb) <= 1e-9 * scale:
        raise DegeneracyError("corank-2 singular point: df vanishes at the base point")
    if nb >= na:
        e1 = Jet1.constant(1.0, degree)
        e2 = -a.dot(b) / b.dot(b)
    else:
        e1 = -a.dot(b) / a.dot(a)
        e2 = Jet1.constant(1.0, degree)
    resid = (a * e1 + b * e2).max_abs()
    if resid > 1e-8 * scale:
        raise SpecError(f"gamma is not a corank-1 singular curve of f (kernel residual {resid:.3e})")
    n = jets.sqrt(e1 * e1 + e2 * e2)
    e1, e2 = e1 / n, e2 / n
    cu, cv = frontal.curve(p)
    du, dv = cu.deriv(), cv.deriv()
    phi = du * e2 - dv * e1
    orient = phi.coeffs[1] if is_zero(phi.coeffs[0], phi.scale()) else phi.coeffs[0]
    if orient < 0:
        e1, e2, phi = -e1, -e2, -phi
    return (e1, e2), phi


def _kind_from_phi(phi: Jet1):
    s = phi.scale()
    if not is_zero(phi.coeffs[0], s):
        return "first"
    if not is_zero(phi.coeffs[1], s):
        return "second"
    return "degenerate"


def classify_kind(spec, frontal=None) -> KindResult:
    """First/second kind by the ``phi`` test and, independently, by ``lambda``."""
    frontal = frontal or Frontal(spec)
    (e1, e2), phi = _null_direction(frontal)
    by_phi = _kind_from_phi(phi)
    base = spec.base_point()
    lam = lambda_jet(spec, base, degree=4, frontal=frontal)
    grad = lam.gradient()
    hess = lam.hessian()
    scale = lam.scale()
    eta0 = np.array([e1.value, e2.value])
    deta0 = np.array([e1.derivative_at_base(1), e2.derivative_at_base(1)])
    cu, cv = frontal.curve(Frontal.parameter(0.0, 2))
    g1 = np.array([cu.derivative_at_base(1), cv.derivative_at_base(1)])
    n_lam = float(grad @ eta0)
    # eta extended off the curve constant along the normal line of gamma
    c_t = float(eta0 @ g1) / float(g1 @ g1)
    nn_lam = float(eta0 @ hess @ eta0 + c_t * (grad @ deta0))
    if np.linalg.norm(grad) <= ZERO_TOL * (1 + scale):
        by_lam = "degenerate"
    elif not is_zero(n_lam, scale):
        by_lam = "first"
    elif not is_zero(nn_lam, scale):
        by_lam = "second"
    else:
        by_lam = "degenerate"
    if np.linalg.norm(grad) <= ZERO_TOL * (1 + scale):
        kind = "degenerate"
    elif by_phi != by_lam:
        raise ConsistencyError(f"phi test says {by_phi}, lambda test says {by_lam}")
    else:
        kind = by_phi
    return KindResult(
        kind=kind,
        phi0=float(phi.coeffs[0]),
        dphi0=float(phi.coeffs[1]),
        dlambda=(float(grad[0]), float(grad[1])),
        eta_lambda=n_lam,
        eta_eta_lambda=nn_lam,
        kind_by_phi=by_phi,
        kind_by_lambda=by_lam,
    )


def is_front(spec, t=0.0, frontal=None) -> bool:
    """Whether ``(df, dnu)`` has rank 2 at ``gamma(t)``."""
    frontal = frontal or Frontal(spec)
    p = [ex.evaluate(g, {"t": t}) for g in spec.gamma]
    F = frontal.at_point(tuple(p), 2)
    nu = frontal.normal.near(tuple(p), 1)
    col_u = np.concatenate([F.du().value(), nu.du().value()])
    col_v = np.concatenate([F.dv().value(), nu.dv().value()])
    s = np.linalg.svd(np.column_stack([col_u, col_v]), compute_uv=False)
    return bool(s[-1] > 1e-8 * max(1.0, s[0]))


def null_data(spec, frontal=None) -> FrontalDiagnostics:
    frontal = frontal or Frontal(spec)
    eta, phi = _null_direction(frontal)
    kind = classify_kind(spec, frontal)
    eps = g = None
    if frontal.adapted:
        p = Frontal.parameter(0.0, CURVE_DEGREE)
        eps = frontal.normal.epsilon(p) if frontal.spec.auto_normal else _epsilon(frontal, p)
        g = frontal.along_curve(1, 1, p) + frontal.along_curve(0, 2, p) * eps
    return FrontalDiagnostics(
        lam=lambda_jet(spec, spec.base_point(), frontal=frontal),
        eta=eta,
        phi=phi,
        epsilon=eps,
        g=g,
        kind=kind,
        is_front_at_origin=is_front(spec, 0.0, frontal),
    )


def _epsilon(frontal, p):
    fu = frontal.along_curve(1, 0, p)
    fv = frontal.along_curve(0, 1, p)
    return -fu.dot(fv) / fv.dot(fv)


def eta_eta_lambda_adapted(spec, frontal=None) -> float:
    """``-(1 / (2 eps'(0))) det(f_uu, f_uuu, nu)(0)`` for an adapted chart.

    With ``eta = d_u + eps d_v`` one has ``eta eta lambda(0) = eps'(0) lambda_v(0)``;
    the factor is 1, not 3 (checked against finite differences of ``lambda``).
    """
    frontal = frontal or Frontal(spec)
    p = Frontal.parameter(0.0, 3)
    eps = _epsilon(frontal, p)
    nu = frontal.normal.along(p).value()
    fuu = frontal.value(2, 0, 0.0, 0.0)
    fuuu = frontal.value(3, 0, 0.0, 0.0)
    return -1.0 / (2.0 * eps.derivative_at_base(1)) * float(np.linalg.det(np.column_stack([fuu, fuuu, nu])))
