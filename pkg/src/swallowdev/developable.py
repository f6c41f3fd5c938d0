"""Osculating and normal developable surfaces along the singular curve.

With invariants ``(kg, kn, kt)`` and ``alpha = t |h|``:

* osculating: direction ``(kt e - kn b) / N``, ``N = sqrt(kt^2 + kn^2)``;
* normal: direction ``(kt e + kg nu) / N``, ``N = sqrt(kt^2 + kg^2)``.

Writing the direction pair as ``(p, q)`` (``q = kn`` or ``kg``), the
cylinder obstruction is ``delta = c N^2 - p q' + p' q`` for the osculating
surface (``c = kg``) and ``delta = c N^2 + p q' - p' q`` for the normal one
(``c = kn``).

If ``p`` and ``q`` both vanish to order ``k`` at ``t = 0`` they are divided by
``t^k`` first.  The ruled surface is unchanged up to reparametrising the
ruling, every formula keeps its form, and ``delta`` is divided by ``t^{2k}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .darboux import DarbouxData
from .errors import DegeneracyError, JetError
from .frontal import is_zero
from .jets import Jet1, Vec3Jet, divide_by_parameter, sqrt

__all__ = [
    "Developable",
    "Mesh",
    "TRUST_RADIUS",
    "build_developable",
    "derivative_identity_check",
    "striction_data",
    "striction_closed_form",
    "eval_point",
    "sample_mesh",
    "jet_ratio",
    "Samples",
    "sample_developable",
]

TRUST_RADIUS = 0.5
KINDS = ("osculating", "normal")


def jet_ratio(num: Jet1, den: Jet1, tol=1e-9) -> Jet1:
    """``num / den``, cancelling common powers of ``t`` at the base.

    Raises :class:`DegeneracyError` when ``den`` vanishes to higher order
    than ``num`` (a genuine pole).
    """
    ns, ds = 1.0 + num.scale(), 1.0 + den.scale()
    while abs(den.coeffs[0]) <= tol * ds:
        if abs(num.coeffs[0]) > tol * ns:
            raise DegeneracyError("ratio has a pole at the base point")
        if den.degree == 0 or num.degree == 0:
            raise DegeneracyError("denominator vanishes to the truncation order")
        num = divide_by_parameter(num, np.inf)
        den = divide_by_parameter(den, np.inf)
    return num / den


def _vanishing_order(p: Jet1, q: Jet1, tol=1e-9):
    scale = 1.0 + max(p.scale(), q.scale())
    for k in range(min(p.degree, q.degree) + 1):
        if max(abs(p.coeffs[k]), abs(q.coeffs[k])) > tol * scale:
            return k
    return None


@dataclass(frozen=True)
class Developable:
    kind: str
    frame: DarbouxData
    base: Vec3Jet
    direction: Vec3Jet
    p: Jet1
    q: Jet1
    norm: Jet1
    delta: Jet1
    lambda_ruled: tuple  # (c0, c1) with lambda_* = c0 + c1 r
    order: int = 0
    striction_error: Optional[str] = field(default=None, compare=False)

    @property
    def osculating(self) -> bool:
        return self.kind == "osculating"

    @property
    def companion(self) -> Vec3Jet:
        """The unit vector ``w`` whose great circle carries the rulings: ``nu`` or ``b``."""
        return self.frame.nu_bar if self.osculating else self.frame.b

    def derivative_companion(self) -> Vec3Jet:
        """``(q e + p b)`` (osculating) or ``(-q e + p nu)`` (normal), so that ``D' = delta/N^3`` times it."""
        d = self.frame
        if self.osculating:
            return d.e * self.q + d.b * self.p
        return d.e * (-self.q) + d.nu_bar * self.p

    @cached_property
    def _striction(self):
        d = self.frame
        alpha, a1 = d.alpha, d.alpha.deriv()
        p, q, delta = self.p, self.q, self.delta
        q1, d1 = q.deriv(), delta.deriv()
        if self.osculating:
            num = -(alpha * q * self.norm)
            sigma = -(alpha * q * d1) - (-(a1 * q) + alpha * d.kg * p - 2.0 * alpha * q1) * delta
        else:
            num = alpha * q * self.norm
            sigma = -(alpha * q * d1) + (a1 * q + alpha * p * d.kn + 2.0 * alpha * q1) * delta
        try:
            t_star = jet_ratio(num, delta)
        except DegeneracyError:
            return None
        s = self.base + self.direction * t_star
        return t_star, s, sigma

    def striction_available(self) -> bool:
        return self._striction is not None

    def __call__(self, u, r):
        return eval_point(self, u, r)


def build_developable(d: DarbouxData, kind: str, order=None) -> Developable:
    """Direction field, obstruction ``delta`` and singular identifier of a developable.

    About ``t = 0`` the desingularisation order is found from the jets.  About
    another base it must be passed as ``order`` to stay consistent with the
    germ at 0 (it defaults to 0 there).
    """
    if kind in ("od", "o"):
        kind = "osculating"
    elif kind in ("nd", "n"):
        kind = "normal"
    if kind not in KINDS:
        raise JetError(f"unknown developable kind {kind!r}")
    p = d.kt
    q = d.kn if kind == "osculating" else d.kg
    if d.base == 0.0:
        k = _vanishing_order(p, q)
        if k is None:
            raise DegeneracyError(f"direction undefined: the {kind} direction pair vanishes to jet order")
        for _ in range(k):
            p, q = divide_by_parameter(p, np.inf), divide_by_parameter(q, np.inf)
    else:
        k = order or 0
        if k:
            Tk = Jet1.variable(d.base, p.degree) ** k
            p, q = p / Tk, q / Tk
        if is_zero(abs(p.value) + abs(q.value), max(p.scale(), q.scale())):
            raise DegeneracyError(f"direction undefined at t = {d.base}")
    if p.degree < 1:
        raise DegeneracyError("direction pair vanishes beyond the usable jet order")
    N = sqrt(p * p + q * q)
    p1, q1 = p.deriv(), q.deriv()
    if kind == "osculating":
        direction = (d.e.truncate(p.degree) * p - d.b * q) / N
        delta = d.kg * N * N - p * q1 + p1 * q
        lam = (q * d.alpha * N, delta)
    else:
        direction = (d.e.truncate(p.degree) * p + d.nu_bar * q) / N
        delta = d.kn * N * N + p * q1 - p1 * q
        lam = (q * d.alpha * N, -delta)
    return Developable(
        kind=kind,
        frame=d,
        base=d.gamma_hat,
        direction=direction,
        p=p,
        q=q,
        norm=N,
        delta=delta,
        lambda_ruled=lam,
        order=k,
    )


def derivative_identity_check(dev: Developable) -> float:
    """Max coefficient of ``D' - delta / N^3 * companion``."""
    lhs = dev.direction.deriv()
    rhs = dev.derivative_companion() * (dev.delta / (dev.norm * dev.norm * dev.norm))
    return (lhs - rhs).max_abs()


def striction_data(dev: Developable):
    """``(t_star, striction, sigma)`` jets; needs ``delta(0) != 0`` up to a removable factor."""
    out = dev._striction
    if out is None:
        raise DegeneracyError(
            "striction undefined: all points on the ruling through gamma_hat(0) are singular"
        )
    return out


def striction_closed_form(dev: Developable) -> Vec3Jet:
    """``gamma_hat - <gamma_hat', D'> / <D', D'> D`` with the same removable-factor handling."""
    D1 = dev.direction.deriv()
    g1 = dev.base.deriv()
    ratio = jet_ratio(g1.dot(D1), D1.dot(D1))
    return dev.base + dev.direction * (-ratio)


@dataclass(frozen=True)
class Samples:
    """Exact values of a developable's data at sample parameters.

    Each sample rebuilds the frame about that parameter, so nothing depends
    on how far the sample is from ``t = 0``.
    """

    t: np.ndarray
    delta: np.ndarray
    sigma: np.ndarray  # nan where the striction is undefined
    t_star: np.ndarray
    base: np.ndarray
    direction: np.ndarray
    striction: np.ndarray
    companion: np.ndarray
    spherical: np.ndarray  # det(w, w', w'')


def snap_to_base(ts, base=0.0, atol=1e-12):
    """Samples within rounding distance of the base are moved onto it.

    Rebuilding a frame about ``1e-17`` would divide by that offset.
    """
    ts = np.array(ts, dtype=float)
    ts[np.abs(ts - base) < atol] = base
    return ts


def _local(dev: Developable, t):
    if t == dev.frame.base:
        return dev
    return build_developable(dev.frame.at(float(t)), dev.kind, order=dev.order)


def sample_developable(dev: Developable, ts) -> Samples:
    ts = snap_to_base(ts, dev.frame.base)
    n = len(ts)
    out = {k: np.full(n, np.nan) for k in ("delta", "sigma", "t_star", "spherical")}
    vec = {k: np.full((n, 3), np.nan) for k in ("base", "direction", "striction", "companion")}
    for i, t in enumerate(ts):
        loc = _local(dev, t)
        w = loc.companion
        w1 = w.deriv()
        w2 = w1.deriv()
        out["delta"][i] = loc.delta.value
        out["spherical"][i] = np.linalg.det(np.stack([w.value(), w1.value(), w2.value()]))
        vec["base"][i] = loc.base.value()
        vec["direction"][i] = loc.direction.value()
        vec["companion"][i] = w.value()
        st = loc._striction
        if st is not None:
            out["t_star"][i] = st[0].value
            vec["striction"][i] = st[1].value()
            out["sigma"][i] = st[2].value
    return Samples(ts, **out, **vec)


def _check_radius(u, radius):
    if np.max(np.abs(np.asarray(u, dtype=float))) > radius + 1e-12:
        raise JetError(f"parameter outside the jet trust radius |u| <= {radius}")


def eval_point(dev: Developable, u, r, radius=TRUST_RADIUS) -> np.ndarray:
    """``gamma_hat(u) + r D(u)`` by evaluating the truncated series."""
    _check_radius(u, radius)
    return dev.base(u) + r * dev.direction(u)


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray  # (n, 3)
    triangles: np.ndarray  # (m, 3), 0-based

    def __post_init__(self):
        if self.triangles.size and (self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices)):
            raise ValueError("triangle index out of range")


def grid_triangles(nu, nv):
    """Row-major grid faces, each quad split into two triangles."""
    tris = []
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j
            b, c, d = a + nv, a + nv + 1, a + 1
            tris.append((a, b, c))
            tris.append((a, c, d))
    return np.array(tris, dtype=np.int64).reshape(-1, 3)


def sample_mesh(dev: Developable, u_range=(-0.4, 0.4), r_range=(-0.5, 0.5), nu=81, nv=21, radius=TRUST_RADIUS) -> Mesh:
    if nu < 2 or nv < 2:
        raise JetError("mesh needs at least 2 samples in each direction")
    if not (u_range[1] > u_range[0]) or not (r_range[1] > r_range[0]):
        raise JetError("empty mesh range")
    us = np.linspace(*u_range, nu)
    rs = np.linspace(*r_range, nv)
    _check_radius(us, radius)
    base = np.array([dev.base(u) for u in us])
    dirs = np.array([dev.direction(u) for u in us])
    verts = (base[:, None, :] + rs[None, :, None] * dirs[:, None, :]).reshape(-1, 3)
    return Mesh(verts, grid_triangles(nu, nv))
