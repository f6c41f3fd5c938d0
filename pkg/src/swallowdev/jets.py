"""Truncated Taylor series ("jets") in one and two variables.

A :class:`Jet1` of degree ``K`` stores the Taylor coefficients ``a_0..a_K`` of a
scalar function of one parameter about a base parameter, a :class:`Jet2`
stores ``a_ij`` (``i + j <= K``) about a base point ``(u0, v0)``.  Arithmetic
is exact up to truncation, so derivatives of composite expressions are exact
to rounding:  ``k``-th derivative at the base is ``k! * a_k``.

Binary operators truncate to the smaller degree of their operands, since only
that many coefficients of the result are known.  The named functions
:func:`jet_mul` and :func:`jet_div` are strict and refuse mismatched degrees.
"""

from __future__ import annotations

import math
from functools import lru_cache
from numbers import Real

import numpy as np
from scipy.signal import convolve2d

from .errors import JetDomainError, JetError

__all__ = [
    "Jet1",
    "Jet2",
    "Vec3Jet",
    "jet_mul",
    "jet_div",
    "jet_elementary",
    "sin",
    "cos",
    "tan",
    "exp",
    "log",
    "sqrt",
    "pow_int",
    "divide_by_parameter",
    "multiply_by_parameter",
    "compose_surface_with_curve",
    "ELEMENTARY",
]

CURVE_DEGREE = 9
SURFACE_DEGREE = 6


def _check_finite(arr):
    # the sum is non-finite iff some entry is (or the sum overflows, also worth rejecting)
    if not math.isfinite(arr.sum()):
        raise JetDomainError("jet coefficient is not finite")


class _Jet:
    """Arithmetic shared by one- and two-variable jets."""

    __slots__ = ("coeffs", "base")
    __array_priority__ = 1000

    # -- hooks implemented by subclasses ---------------------------------
    def _new(self, coeffs):
        raise NotImplementedError

    def _conv(self, a, b, degree):
        raise NotImplementedError

    def truncate(self, degree):
        raise NotImplementedError

    @property
    def degree(self):
        raise NotImplementedError

    # -- helpers ----------------------------------------------------------
    @property
    def value(self) -> float:
        return float(self.coeffs.flat[0])

    def _coerce(self, other):
        if isinstance(other, _Jet):
            if type(other) is not type(self):
                raise JetError("cannot combine jets of different kinds")
            if other.base != self.base:
                raise JetError(f"base point mismatch: {self.base} vs {other.base}")
            return other
        if isinstance(other, (Real, np.floating, np.integer)):
            return self.constant(float(other), self.degree, self.base)
        return NotImplemented

    def _pair(self, other):
        if type(other) is type(self) and other.coeffs.shape == self.coeffs.shape:
            if other.base != self.base:
                raise JetError(f"base point mismatch: {self.base} vs {other.base}")
            return self, other
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented, NotImplemented
        k = min(self.degree, other.degree)
        return self.truncate(k), other.truncate(k)

    def nilpotent(self):
        """The jet minus its constant term."""
        c = self.coeffs.copy()
        c.flat[0] = 0.0
        return self._new(c)

    def is_zero(self, atol=0.0):
        return bool(np.max(np.abs(self.coeffs)) <= atol)

    def scale(self):
        return float(np.max(np.abs(self.coeffs)))

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a._new(a.coeffs + b.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a._new(a.coeffs - b.coeffs)

    def __rsub__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a._new(b.coeffs - a.coeffs)

    def __neg__(self):
        return self._new(-self.coeffs)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (Real, np.floating, np.integer)):
            return self._new(self.coeffs * float(other))
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a._new(a._conv(a.coeffs, b.coeffs, a.degree))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (Real, np.floating, np.integer)):
            if other == 0:
                raise JetDomainError("division by vanishing jet")
            return self._new(self.coeffs / float(other))
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a * reciprocal(b)

    def __rtruediv__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return b * reciprocal(a)

    def __pow__(self, n):
        if isinstance(n, (int, np.integer)):
            return pow_int(self, int(n))
        raise JetError("jets support integer exponents only")

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.base == other.base and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def allclose(self, other, atol=1e-12, rtol=0.0):
        a, b = self._pair(other)
        return bool(np.allclose(a.coeffs, b.coeffs, atol=atol, rtol=rtol))


class Jet1(_Jet):
    """Taylor coefficients ``a_0..a_K`` in one variable about ``base``."""

    __slots__ = ()

    def __init__(self, coeffs, base: float = 0.0):
        c = np.array(coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise JetError("Jet1 needs a non-empty 1-D coefficient sequence")
        _check_finite(c)
        self.coeffs = c
        self.base = float(base)

    @classmethod
    def constant(cls, c, degree=CURVE_DEGREE, base=0.0):
        coeffs = np.zeros(degree + 1)
        coeffs[0] = c
        return cls(coeffs, base)

    @classmethod
    def variable(cls, x0=0.0, degree=CURVE_DEGREE):
        """The identity function ``t`` expanded about ``x0``."""
        coeffs = np.zeros(degree + 1)
        coeffs[0] = x0
        if degree >= 1:
            coeffs[1] = 1.0
        return cls(coeffs, x0)

    def _new(self, coeffs):
        # internal results of finite arithmetic: skip re-validation
        out = object.__new__(Jet1)
        out.coeffs = coeffs
        out.base = self.base
        return out

    def _conv(self, a, b, degree):
        return np.convolve(a, b)[: degree + 1]

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def truncate(self, degree):
        if degree > self.degree:
            raise JetError(f"cannot raise jet degree {self.degree} to {degree}")
        if degree == self.degree:
            return self
        return Jet1(self.coeffs[: degree + 1], self.base)

    def derivative_at_base(self, k: int) -> float:
        if k > self.degree:
            raise JetError(f"derivative of order {k} exceeds jet degree {self.degree}")
        return math.factorial(k) * float(self.coeffs[k])

    def deriv(self) -> "Jet1":
        """Jet of the derivative; one degree is lost."""
        if self.degree == 0:
            raise JetError("a degree-0 jet carries no derivative information")
        k = np.arange(1, self.degree + 1)
        return Jet1(self.coeffs[1:] * k, self.base)

    def __call__(self, x):
        """Evaluate the truncated polynomial at offset ``x`` from the base."""
        return np.polynomial.polynomial.polyval(x, self.coeffs)

    def reflect(self) -> "Jet1":
        """Jet of ``t -> a(-t)`` (base must be 0)."""
        if self.base != 0.0:
            raise JetError("reflection is only defined about base 0")
        signs = (-1.0) ** np.arange(self.degree + 1)
        return Jet1(self.coeffs * signs, 0.0)

    def order(self, atol=0.0):
        """Index of the first coefficient exceeding ``atol`` (None if all vanish)."""
        idx = np.nonzero(np.abs(self.coeffs) > atol)[0]
        return int(idx[0]) if idx.size else None

    def __repr__(self):
        return f"Jet1({np.array2string(self.coeffs, precision=6)}, base={self.base})"


@lru_cache(maxsize=None)
def _mask(degree):
    i, j = np.indices((degree + 1, degree + 1))
    return (i + j) <= degree


class Jet2(_Jet):
    """Taylor coefficients ``a_ij`` (``i + j <= K``) about ``base = (u0, v0)``."""

    __slots__ = ()

    def __init__(self, coeffs, base=(0.0, 0.0)):
        c = np.array(coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1] or c.size == 0:
            raise JetError("Jet2 needs a square (K+1)x(K+1) coefficient array")
        _check_finite(c)
        c = np.where(_mask(c.shape[0] - 1), c, 0.0)
        self.coeffs = c
        self.base = (float(base[0]), float(base[1]))

    @classmethod
    def constant(cls, c, degree=SURFACE_DEGREE, base=(0.0, 0.0)):
        coeffs = np.zeros((degree + 1, degree + 1))
        coeffs[0, 0] = c
        return cls(coeffs, base)

    @classmethod
    def variable(cls, name, base=(0.0, 0.0), degree=SURFACE_DEGREE):
        """The coordinate function ``u`` or ``v`` expanded about ``base``."""
        coeffs = np.zeros((degree + 1, degree + 1))
        if name == "u":
            coeffs[0, 0] = base[0]
            if degree >= 1:
                coeffs[1, 0] = 1.0
        elif name == "v":
            coeffs[0, 0] = base[1]
            if degree >= 1:
                coeffs[0, 1] = 1.0
        else:
            raise JetError(f"unknown coordinate {name!r}")
        return cls(coeffs, base)

    @classmethod
    def from_coefficients(cls, mapping, degree=SURFACE_DEGREE, base=(0.0, 0.0)):
        coeffs = np.zeros((degree + 1, degree + 1))
        for (i, j), a in mapping.items():
            coeffs[i, j] = a
        return cls(coeffs, base)

    @classmethod
    def from_u_jet(cls, jet: Jet1, v0=0.0):
        """Embed a jet in ``u`` as a two-variable jet independent of ``v``."""
        k = jet.degree
        coeffs = np.zeros((k + 1, k + 1))
        coeffs[:, 0] = jet.coeffs
        return cls(coeffs, (jet.base, v0))

    def _new(self, coeffs):
        # products can fill entries above the total degree; clear them
        out = object.__new__(Jet2)
        out.coeffs = np.where(_mask(coeffs.shape[0] - 1), coeffs, 0.0)
        out.base = self.base
        return out

    def _conv(self, a, b, degree):
        return convolve2d(a, b)[: degree + 1, : degree + 1]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def truncate(self, degree):
        if degree > self.degree:
            raise JetError(f"cannot raise jet degree {self.degree} to {degree}")
        if degree == self.degree:
            return self
        return Jet2(self.coeffs[: degree + 1, : degree + 1], self.base)

    def coefficient(self, i, j) -> float:
        return float(self.coeffs[i, j])

    def partial(self, i: int, j: int) -> float:
        """``d^i/du^i d^j/dv^j`` at the base point."""
        if i + j > self.degree:
            raise JetError(f"partial ({i},{j}) exceeds jet degree {self.degree}")
        return math.factorial(i) * math.factorial(j) * float(self.coeffs[i, j])

    def gradient(self):
        return np.array([self.partial(1, 0), self.partial(0, 1)])

    def hessian(self):
        return np.array(
            [
                [self.partial(2, 0), self.partial(1, 1)],
                [self.partial(1, 1), self.partial(0, 2)],
            ]
        )

    def du(self) -> "Jet2":
        if self.degree == 0:
            raise JetError("a degree-0 jet carries no derivative information")
        k = self.degree
        c = self.coeffs[1:, :k] * np.arange(1, k + 1)[:, None]
        return Jet2(c, self.base)

    def dv(self) -> "Jet2":
        if self.degree == 0:
            raise JetError("a degree-0 jet carries no derivative information")
        k = self.degree
        c = self.coeffs[:k, 1:] * np.arange(1, k + 1)[None, :]
        return Jet2(c, self.base)

    def restrict_v0(self) -> Jet1:
        """Jet in ``u`` of the restriction to the line ``v = v0``."""
        return Jet1(self.coeffs[:, 0], self.base[0])

    def divide_by_v(self, atol=None) -> "Jet2":
        """Hadamard quotient by ``v - v0`` of a jet vanishing on ``v = v0``."""
        col = self.coeffs[:, 0]
        if atol is None:
            atol = 1e-10 * self.scale()
        if np.max(np.abs(col)) > atol:
            raise JetDomainError("nonvanishing constant term: jet does not vanish on v = v0")
        if self.degree == 0:
            raise JetError("cannot divide a degree-0 jet")
        k = self.degree
        return Jet2(self.coeffs[:k, 1:], self.base)

    def __call__(self, du, dv):
        """Evaluate the truncated polynomial at offset ``(du, dv)``."""
        return np.polynomial.polynomial.polyval2d(du, dv, self.coeffs)

    def __repr__(self):
        return f"Jet2(degree={self.degree}, base={self.base}, a00={self.value:.6g})"


# ----------------------------------------------------------------------
# named operations


def _same_degree(a, b):
    if type(a) is not type(b):
        raise JetError("operands must be jets of the same kind")
    if a.degree != b.degree:
        raise JetError(f"degree mismatch: {a.degree} vs {b.degree}")


def jet_mul(a, b):
    """Truncated Cauchy product of two jets of equal kind and degree."""
    _same_degree(a, b)
    return a * b


def jet_div(a, b):
    """Quotient ``a / b``; ``b`` must have a nonvanishing constant term."""
    _same_degree(a, b)
    return a / b


def _compose(a, taylor):
    """Evaluate ``sum taylor[k] * n**k`` with ``n`` the nilpotent part of ``a``."""
    n = a.nilpotent()
    out = a.constant(taylor[-1], a.degree, a.base)
    for c in reversed(taylor[:-1]):
        out = out * n + c
    return out


def reciprocal(a):
    a0 = a.value
    if abs(a0) <= 1e-300:
        raise JetDomainError("division by vanishing jet")
    k = a.degree
    return _compose(a, [(-1.0) ** i / a0 ** (i + 1) for i in range(k + 1)])


def exp(a):
    e0 = math.exp(a.value)
    return _compose(a, [e0 / math.factorial(i) for i in range(a.degree + 1)])


def sin(a):
    x = a.value
    return _compose(a, [math.sin(x + i * math.pi / 2) / math.factorial(i) for i in range(a.degree + 1)])


def cos(a):
    x = a.value
    return _compose(a, [math.cos(x + i * math.pi / 2) / math.factorial(i) for i in range(a.degree + 1)])


def tan(a):
    return sin(a) / cos(a)


def log(a):
    a0 = a.value
    if a0 <= 0:
        raise JetDomainError(f"log of jet with non-positive constant term {a0}")
    taylor = [math.log(a0)] + [(-1.0) ** (i - 1) / (i * a0**i) for i in range(1, a.degree + 1)]
    return _compose(a, taylor)


def sqrt(a):
    a0 = a.value
    if a0 <= 0:
        raise JetDomainError(f"sqrt of jet with non-positive constant term {a0}")
    taylor = []
    binom = 1.0
    for i in range(a.degree + 1):
        taylor.append(binom * a0 ** (0.5 - i))
        binom *= (0.5 - i) / (i + 1)
    return _compose(a, taylor)


def pow_int(a, n: int):
    if n < 0:
        return reciprocal(pow_int(a, -n))
    result = a.constant(1.0, a.degree, a.base)
    base = a
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


ELEMENTARY = {
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
}


def jet_elementary(name, a, n=None):
    """Apply an elementary function by name (``pow_int`` takes exponent ``n``)."""
    if name == "pow_int":
        if n is None:
            raise JetError("pow_int needs an integer exponent")
        return pow_int(a, n)
    try:
        fn = ELEMENTARY[name]
    except KeyError:
        raise JetError(f"unknown elementary function {name!r}") from None
    return fn(a)


def divide_by_parameter(a: Jet1, atol=None) -> Jet1:
    """Hadamard quotient ``a(t) / t`` of a jet vanishing at the base."""
    if atol is None:
        atol = 1e-10 * a.scale()
    if abs(a.coeffs[0]) > atol:
        raise JetDomainError(f"nonvanishing constant term {a.coeffs[0]:.3e}")
    if a.degree == 0:
        raise JetError("cannot divide a degree-0 jet by the parameter")
    return Jet1(a.coeffs[1:], a.base)


def multiply_by_parameter(a: Jet1) -> Jet1:
    """Exact product ``(t - base) * a``; the degree grows by one."""
    return Jet1(np.concatenate([[0.0], a.coeffs]), a.base)


def compose_surface_with_curve(F, gamma, atol=1e-12):
    """Restrict a two-variable jet (or a :class:`Vec3Jet` of them) to a curve.

    ``gamma`` is a pair of :class:`Jet1` whose constant terms must equal the
    base point of ``F``.  The output degree is ``min(curve degree, surface
    degree)``: terms of total order above the surface degree only reach
    powers of ``t`` above it.
    """
    if isinstance(F, Vec3Jet):
        return Vec3Jet(*(compose_surface_with_curve(c, gamma, atol) for c in F))
    g1, g2 = gamma
    u0, v0 = F.base
    if abs(g1.value - u0) > atol * (1 + abs(u0)) or abs(g2.value - v0) > atol * (1 + abs(v0)):
        raise JetError(f"curve passes through ({g1.value}, {g2.value}), jet is based at {F.base}")
    k = min(g1.degree, g2.degree, F.degree)
    p = g1.truncate(k).nilpotent()
    q = g2.truncate(k).nilpotent()
    ppow = [p.constant(1.0, k, p.base)]
    qpow = [q.constant(1.0, k, q.base)]
    for _ in range(k):
        ppow.append(ppow[-1] * p)
        qpow.append(qpow[-1] * q)
    out = np.zeros(k + 1)
    for i in range(k + 1):
        for j in range(k + 1 - i):
            a = F.coeffs[i, j]
            if a:
                out += a * (ppow[i] * qpow[j]).coeffs
    return Jet1(out, g1.base)


# ----------------------------------------------------------------------
# vectors of jets


class Vec3Jet:
    """Three jets of the same kind, treated as a vector in R^3."""

    __slots__ = ("x", "y", "z")
    __array_priority__ = 1000

    def __init__(self, x, y, z):
        if not (type(x) is type(y) is type(z)):
            raise JetError("Vec3Jet components must be jets of the same kind")
        k = min(x.degree, y.degree, z.degree)
        self.x, self.y, self.z = x.truncate(k), y.truncate(k), z.truncate(k)

    @classmethod
    def constant(cls, vec, like):
        return cls(*(like.constant(float(c), like.degree, like.base) for c in vec))

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __getitem__(self, i):
        return (self.x, self.y, self.z)[i]

    @property
    def degree(self):
        return self.x.degree

    @property
    def base(self):
        return self.x.base

    def truncate(self, degree):
        return Vec3Jet(*(c.truncate(degree) for c in self))

    def value(self):
        return np.array([c.value for c in self])

    def coefficients(self):
        """Array of shape ``(3, ...)`` holding the component coefficients."""
        return np.stack([c.coeffs for c in self])

    def __add__(self, other):
        return Vec3Jet(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other):
        return Vec3Jet(*(a - b for a, b in zip(self, other)))

    def __neg__(self):
        return Vec3Jet(-self.x, -self.y, -self.z)

    def __mul__(self, s):
        """Scale by a scalar or a scalar jet."""
        return Vec3Jet(self.x * s, self.y * s, self.z * s)

    __rmul__ = __mul__

    def __truediv__(self, s):
        if isinstance(s, _Jet):
            s = reciprocal(s)
            return self * s
        return Vec3Jet(self.x / s, self.y / s, self.z / s)

    def dot(self, other):
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other):
        return Vec3Jet(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self):
        return sqrt(self.dot(self))

    def normalized(self):
        return self / self.norm()

    def deriv(self):
        return Vec3Jet(*(c.deriv() for c in self))

    def du(self):
        return Vec3Jet(*(c.du() for c in self))

    def dv(self):
        return Vec3Jet(*(c.dv() for c in self))

    def restrict_v0(self):
        return Vec3Jet(*(c.restrict_v0() for c in self))

    def reflect(self):
        return Vec3Jet(*(c.reflect() for c in self))

    def __call__(self, *offset):
        return np.array([c(*offset) for c in self])

    def max_abs(self):
        return float(max(np.max(np.abs(c.coeffs)) for c in self))

    def __repr__(self):
        return f"Vec3Jet(degree={self.degree}, value={self.value()})"


def det3(a: Vec3Jet, b: Vec3Jet, c: Vec3Jet):
    """Scalar triple product ``det(a, b, c)`` as a jet."""
    return a.dot(b.cross(c))
