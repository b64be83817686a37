"""Truncated Taylor arithmetic (jets) for exact high-order derivatives.

A :class:`Jet` holds a function value and its first ``K`` derivatives at a
basepoint.  Basepoints may be arrays, in which case every operation is
vectorised over the leading axes and the Taylor coefficients live on the last
axis.  Internally coefficients are stored normalised (``f^(k)/k!``) so that
products are plain truncated Cauchy products.
"""
from math import factorial

import numpy as np

from .config import DEFAULT_ORDER, EPS_DIV
from .errors import DivisionNearZero, DomainError

_FACT = np.array([float(factorial(k)) for k in range(32)])


def _cauchy(a, b):
    n = min(a.shape[-1], b.shape[-1])
    a = a[..., :n]
    b = b[..., :n]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
    for j in range(n):
        out[..., j:] += a[..., j : j + 1] * b[..., : n - j]
    return out


def _same_points(p, q):
    if p is q:
        return True
    if p.shape == q.shape and p.strides == q.strides and p.ctypes.data == q.ctypes.data:
        return True
    return np.array_equal(*np.broadcast_arrays(p, q))


class Jet:
    """Value and derivatives ``(f, f', ..., f^(K))`` of a scalar at ``basepoint``."""

    __slots__ = ("basepoint", "tc")
    __array_priority__ = 100

    def __init__(self, basepoint, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.ndim == 0:
            raise ValueError("coeffs needs at least one entry")
        k = coeffs.shape[-1]
        self.tc = coeffs / _FACT[:k]
        self.basepoint = np.broadcast_to(np.asarray(basepoint, dtype=float), coeffs.shape[:-1])

    @classmethod
    def _raw(cls, basepoint, tc):
        jet = cls.__new__(cls)
        jet.tc = tc
        if not (isinstance(basepoint, np.ndarray) and basepoint.shape == tc.shape[:-1]):
            basepoint = np.broadcast_to(basepoint, tc.shape[:-1])
        jet.basepoint = basepoint
        return jet

    @classmethod
    def variable(cls, t, order=DEFAULT_ORDER):
        t = np.asarray(t, dtype=float)
        tc = np.zeros(t.shape + (order + 1,))
        tc[..., 0] = t
        if order >= 1:
            tc[..., 1] = 1.0
        return cls._raw(t, tc)

    @classmethod
    def constant(cls, c, t, order=DEFAULT_ORDER):
        t = np.asarray(t, dtype=float)
        c = np.asarray(c, dtype=float)
        shape = np.broadcast_shapes(t.shape, c.shape)
        tc = np.zeros(shape + (order + 1,))
        tc[..., 0] = c
        return cls._raw(t, tc)

    @property
    def order(self):
        return self.tc.shape[-1] - 1

    @property
    def shape(self):
        return self.tc.shape[:-1]

    @property
    def coeffs(self):
        return self.tc * _FACT[: self.order + 1]

    @property
    def value(self):
        return self.tc[..., 0]

    def d(self, k):
        """k-th derivative at the basepoint."""
        if k > self.order:
            raise ValueError(f"derivative {k} exceeds jet order {self.order}")
        return self.tc[..., k] * _FACT[k]

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot raise jet order {self.order} to {order}")
        return Jet._raw(self.basepoint, self.tc[..., : order + 1])

    def deriv(self):
        """Jet of the derivative; one order lower."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1, dtype=float)
        return Jet._raw(self.basepoint, self.tc[..., 1:] * k)

    def integrate(self, value):
        """Jet of the antiderivative taking ``value`` at the basepoint; one order higher."""
        value = np.asarray(value, dtype=float)
        k = np.arange(1, self.order + 2, dtype=float)
        head = np.broadcast_to(value, self.shape)[..., None]
        tc = np.concatenate([head, self.tc / k], axis=-1)
        return Jet._raw(self.basepoint, tc)

    def _coerce(self, other):
        """Return (self_tc, other_tc, basepoint) ready for elementwise work."""
        if isinstance(other, Jet):
            if not _same_points(self.basepoint, other.basepoint):
                raise ValueError("jet arithmetic needs a shared basepoint")
            n = min(self.order, other.order) + 1
            return self.tc[..., :n], other.tc[..., :n], self.basepoint
        c = np.asarray(other, dtype=float)
        b = np.zeros(c.shape + (self.order + 1,))
        b[..., 0] = c
        return self.tc, b, self.basepoint

    def __add__(self, other):
        if isinstance(other, JetVec3):
            return NotImplemented
        a, b, bp = self._coerce(other)
        return Jet._raw(bp, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, JetVec3):
            return NotImplemented
        a, b, bp = self._coerce(other)
        return Jet._raw(bp, a - b)

    def __rsub__(self, other):
        a, b, bp = self._coerce(other)
        return Jet._raw(bp, b - a)

    def __neg__(self):
        return Jet._raw(self.basepoint, -self.tc)

    def __mul__(self, other):
        if isinstance(other, JetVec3):
            return NotImplemented
        if not isinstance(other, Jet):
            c = np.asarray(other, dtype=float)
            return Jet._raw(self.basepoint, self.tc * c[..., None])
        a, b, bp = self._coerce(other)
        return Jet._raw(bp, _cauchy(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            c = np.asarray(other, dtype=float)
            return self * (1.0 / c)
        a, b, bp = self._coerce(other)
        return Jet._raw(bp, _divide(a, b))

    def __rtruediv__(self, other):
        b, a, bp = self._coerce(other)
        return Jet._raw(bp, _divide(a, b))

    def __pow__(self, p):
        if not isinstance(p, (int, np.integer)) or p < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = Jet._raw(self.basepoint, np.zeros_like(self.tc))
        out.tc[..., 0] = 1.0
        base = self
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out

    def __repr__(self):
        return f"Jet(basepoint={self.basepoint!r}, coeffs={self.coeffs!r})"


def _divide(a, b):
    b0 = b[..., 0]
    guard = EPS_DIV * np.maximum(1.0, np.abs(a[..., 0]))
    if np.any(np.abs(b0) <= guard):
        raise DivisionNearZero("jet division by a value within the pole guard")
    n = a.shape[-1]
    shape = np.broadcast_shapes(a.shape, b.shape)
    q = np.empty(shape)
    q[..., 0] = a[..., 0] / b0
    for k in range(1, n):
        q[..., k] = (a[..., k] - np.sum(b[..., 1 : k + 1] * q[..., k - 1 :: -1], axis=-1)) / b0
    return q


def _sincos(x):
    u = x.tc
    n = u.shape[-1]
    s = np.empty_like(u)
    c = np.empty_like(u)
    s[..., 0] = np.sin(u[..., 0])
    c[..., 0] = np.cos(u[..., 0])
    for k in range(1, n):
        j = np.arange(1, k + 1, dtype=float)
        ju = j * u[..., 1 : k + 1]
        s[..., k] = np.sum(ju * c[..., k - 1 :: -1][..., :k], axis=-1) / k
        c[..., k] = -np.sum(ju * s[..., k - 1 :: -1][..., :k], axis=-1) / k
    return Jet._raw(x.basepoint, s), Jet._raw(x.basepoint, c)


def sin(x):
    if isinstance(x, Jet):
        return _sincos(x)[0]
    return np.sin(x)


def cos(x):
    if isinstance(x, Jet):
        return _sincos(x)[1]
    return np.cos(x)


def tan(x):
    if not isinstance(x, Jet):
        return np.tan(x)
    s, c = _sincos(x)
    if np.any(np.abs(c.value) <= EPS_DIV):
        raise DomainError("tan evaluated at a pole")
    return s / c


def sqrt(x):
    if not isinstance(x, Jet):
        return np.sqrt(x)
    u = x.tc
    if np.any(u[..., 0] <= 0):
        raise DomainError("sqrt needs a positive value")
    r = np.empty_like(u)
    r[..., 0] = np.sqrt(u[..., 0])
    for k in range(1, u.shape[-1]):
        inner = np.sum(r[..., 1:k] * r[..., k - 1 : 0 : -1], axis=-1) if k > 1 else 0.0
        r[..., k] = (u[..., k] - inner) / (2.0 * r[..., 0])
    return Jet._raw(x.basepoint, r)


def atan2(y, x):
    """Principal-value ``atan2`` of two jets (or a jet and a constant)."""
    if not isinstance(y, Jet) and not isinstance(x, Jet):
        return np.arctan2(y, x)
    ref = y if isinstance(y, Jet) else x
    if not isinstance(y, Jet):
        y = Jet._raw(ref.basepoint, np.zeros_like(ref.tc)) + y
    if not isinstance(x, Jet):
        x = Jet._raw(ref.basepoint, np.zeros_like(ref.tc)) + x
    r2 = x * x + y * y
    if np.any(r2.value <= 0.0):
        raise DomainError("atan2 with both arguments zero")
    value = np.arctan2(y.value, x.value)
    if min(x.order, y.order) == 0:
        return Jet._raw(r2.basepoint, value[..., None])
    rate = (x.truncate(x.order - 1) * y.deriv() - y.truncate(y.order - 1) * x.deriv()) / r2.truncate(r2.order - 1)
    return rate.integrate(value)


def value(x):
    """Plain value of a jet, or the argument itself when it is already a number."""
    return x.value if isinstance(x, Jet) else np.asarray(x, dtype=float)


class JetVec3:
    """Componentwise jet of a map into R^3."""

    __slots__ = ("x", "y", "z")
    __array_priority__ = 100

    def __init__(self, x, y, z):
        self.x, self.y, self.z = x, y, z

    @classmethod
    def from_array(cls, t, arr, order=DEFAULT_ORDER):
        """Constant vector field ``arr`` (shape (..., 3)) as a jet."""
        arr = np.asarray(arr, dtype=float)
        return cls(*(Jet.constant(arr[..., i], t, order) for i in range(3)))

    @classmethod
    def from_coeffs(cls, basepoint, coeffs):
        """``coeffs`` has shape (..., 3, K+1) of derivatives."""
        coeffs = np.asarray(coeffs, dtype=float)
        return cls(*(Jet(basepoint, coeffs[..., i, :]) for i in range(3)))

    def components(self):
        return (self.x, self.y, self.z)

    @property
    def order(self):
        return min(c.order for c in self.components())

    @property
    def value(self):
        return np.stack([c.value for c in self.components()], axis=-1)

    def d(self, k):
        return np.stack([c.d(k) for c in self.components()], axis=-1)

    @property
    def coeffs(self):
        return np.stack([c.coeffs for c in self.components()], axis=-2)

    def deriv(self):
        return JetVec3(*(c.deriv() for c in self.components()))

    def truncate(self, order):
        return JetVec3(*(c.truncate(order) for c in self.components()))

    def _zip(self, other, op):
        if isinstance(other, JetVec3):
            return JetVec3(*(op(a, b) for a, b in zip(self.components(), other.components())))
        other = np.asarray(other, dtype=float)
        return JetVec3(*(op(a, other[..., i]) for i, a in enumerate(self.components())))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._zip(other, lambda a, b: b - a)

    def __neg__(self):
        return JetVec3(-self.x, -self.y, -self.z)

    def __mul__(self, s):
        """Scale by a jet or a scalar (array) field."""
        if isinstance(s, JetVec3):
            return NotImplemented
        return JetVec3(*(_scale(c, s) for c in self.components()))

    __rmul__ = __mul__

    def __truediv__(self, s):
        return JetVec3(*(c / s for c in self.components()))

    def dot(self, other):
        if isinstance(other, JetVec3):
            return self.x * other.x + self.y * other.y + self.z * other.z
        other = np.asarray(other, dtype=float)
        return self.x * other[..., 0] + self.y * other[..., 1] + self.z * other[..., 2]

    def cross(self, other):
        a, b = self, other
        return JetVec3(a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x)

    def norm(self):
        return sqrt(self.dot(self))

    def __repr__(self):
        return f"JetVec3(value={self.value!r}, order={self.order})"


def _scale(c, s):
    if isinstance(s, Jet) and not isinstance(c, Jet):
        return s * c
    return c * s


def det3(a, b, c):
    """Jet of det(a, b, c) for three JetVec3 columns."""
    return a.dot(b.cross(c))


def jet_arith(a, b, op):
    """Named-operation front end: ``op`` is one of add, sub, mul, div."""
    ops = {"add": Jet.__add__, "sub": Jet.__sub__, "mul": Jet.__mul__, "div": Jet.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown jet operation {op!r}")
    return ops[op](a, b)


def jet_elem(a, f, b=None):
    """Named elementary function: sin, cos, tan, sqrt, or atan2 (with ``b`` as x)."""
    if f == "atan2":
        if b is None:
            raise ValueError("atan2 needs a second jet")
        return atan2(a, b)
    funcs = {"sin": sin, "cos": cos, "tan": tan, "sqrt": sqrt}
    if f not in funcs:
        raise ValueError(f"unknown elementary function {f!r}")
    return funcs[f](a)
