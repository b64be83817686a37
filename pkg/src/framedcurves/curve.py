"""Framed curves, their curvature, rotated and Bishop frames, reconstruction.

A framed curve is a triple ``(gamma, nu1, nu2)`` with ``nu1, nu2`` orthonormal
and normal to ``gamma'``.  With ``mu = nu1 x nu2`` the frame moves by

    nu1' =        l nu2 + m mu
    nu2' = -l nu1       + n mu
    mu'  = -m nu1 - n nu2,          gamma' = alpha mu.

All maps are evaluated as jets: ``evaluator(t, order) -> JetVec3`` where ``t``
is an array of parameters.  Scalar fields follow the same convention
(``fn(t, order) -> Jet``).
"""
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import jets
from .config import DEFAULT_ORDER, QUAD_TOL, RK_STEPS, eps_zero
from .errors import EvaluationError, ODEFailure, PreconditionError
from .jets import Jet, JetVec3
from .numerics import adaptive_simpson, integral_from, scan_grid

JetFn = Callable[[np.ndarray, int], Jet]


@dataclass(frozen=True)
class SmoothMap3:
    evaluator: Callable[[np.ndarray, int], JetVec3]
    domain: tuple

    def jet(self, t, order=DEFAULT_ORDER):
        t = np.asarray(t, dtype=float)
        try:
            out = self.evaluator(t, order)
        except (FloatingPointError, ZeroDivisionError) as exc:
            raise EvaluationError(str(exc)) from exc
        if not np.all(np.isfinite(out.coeffs)):
            raise EvaluationError("map produced non-finite values")
        return out

    def __call__(self, t):
        return self.jet(t, 0).value

    def sample(self, n):
        t = scan_grid(self.domain, n)
        return t, self(t)


def _rebase(j, t):
    if isinstance(j, JetVec3):
        return JetVec3(*(_rebase(c, t) for c in j.components()))
    return Jet._raw(np.asarray(t, dtype=float), j.tc)


class FramedCurve:
    """``(gamma, nu1, nu2)`` on a closed parameter interval.

    ``joint`` optionally evaluates all three maps in one pass; it is what the
    constructions use internally.
    """

    def __init__(self, gamma, nu1, nu2, *, name="", periodic=False, joint=None):
        self.gamma, self.nu1, self.nu2 = gamma, nu1, nu2
        self.name = name
        self.periodic = periodic
        if joint is None:
            def joint(t, order):
                return gamma.jet(t, order), nu1.jet(t, order), nu2.jet(t, order)
        self._joint = joint

    @classmethod
    def from_joint(cls, joint, domain, **kw):
        def pick(i):
            return SmoothMap3(lambda t, order: joint(np.asarray(t, float), order)[i], tuple(domain))

        return cls(pick(0), pick(1), pick(2), joint=joint, **kw)

    @property
    def domain(self):
        return self.gamma.domain

    def jets(self, t, order=DEFAULT_ORDER):
        """(gamma, nu1, nu2, mu) jets at ``t``."""
        g, n1, n2 = self._joint(np.asarray(t, dtype=float), order)
        return g, n1, n2, n1.cross(n2)

    @property
    def mu(self):
        return SmoothMap3(lambda t, order: self.jets(t, order)[3], self.domain)

    def restricted(self, domain):
        return FramedCurve.from_joint(self._joint, domain, name=self.name, periodic=False)

    def reparametrized(self, shift):
        """The same curve in the parameter ``s = t - shift``."""

        def joint(s, order):
            return tuple(_rebase(j, s) for j in self._joint(np.asarray(s, float) + shift, order))

        lo, hi = self.domain
        return FramedCurve.from_joint(joint, (lo - shift, hi - shift), name=self.name,
                                      periodic=self.periodic)


@dataclass
class ValidationReport:
    nu1_norm: float
    nu2_norm: float
    nu_orthogonal: float
    tangent_nu1: float
    tangent_nu2: float
    orientation_positive: bool

    @property
    def max_residual(self):
        return max(self.nu1_norm, self.nu2_norm, self.nu_orthogonal, self.tangent_nu1, self.tangent_nu2)

    def ok(self, tol=1e-6):
        return self.max_residual < tol


def validate(curve, sample_count=1000):
    """Maximum violation of the framed-curve conditions on a uniform grid."""
    if sample_count < 2:
        raise PreconditionError("sample_count must be at least 2")
    t = scan_grid(curve.domain, sample_count)
    g, n1, n2, mu = curve.jets(t, 1)
    dg = g.d(1)
    a, b, c = n1.value, n2.value, mu.value
    for arr in (dg, a, b):
        if not np.all(np.isfinite(arr)):
            raise EvaluationError("non-finite curve data")
    return ValidationReport(
        nu1_norm=float(np.max(np.abs(np.sum(a * a, -1) - 1))),
        nu2_norm=float(np.max(np.abs(np.sum(b * b, -1) - 1))),
        nu_orthogonal=float(np.max(np.abs(np.sum(a * b, -1)))),
        tangent_nu1=float(np.max(np.abs(np.sum(dg * a, -1)))),
        tangent_nu2=float(np.max(np.abs(np.sum(dg * b, -1)))),
        orientation_positive=bool(np.all(np.linalg.det(np.stack([a, b, c], -2)) > 0)),
    )


@dataclass
class CurvatureQuadruple:
    ell: JetFn
    m: JetFn
    n: JetFn
    alpha: JetFn
    _joint: Callable = field(default=None, repr=False)

    def at(self, t, order=DEFAULT_ORDER):
        t = np.asarray(t, dtype=float)
        if self._joint is not None:
            return self._joint(t, order)
        return self.ell(t, order), self.m(t, order), self.n(t, order), self.alpha(t, order)

    @classmethod
    def from_functions(cls, ell, m, n, alpha):
        """Build from functions of the parameter jet, e.g. ``m=lambda T: -jets.cos(T)``."""

        def wrap(f):
            def fn(t, order=DEFAULT_ORDER):
                T = Jet.variable(t, order)
                return f(T) + 0.0 * T
            return fn

        return cls(wrap(ell), wrap(m), wrap(n), wrap(alpha))


def _curvature_jets(curve, t, order):
    g, n1, n2, mu = curve.jets(t, order + 1)
    dn1, dn2, dg = n1.deriv(), n2.deriv(), g.deriv()
    return dn1.dot(n2), dn1.dot(mu), dn2.dot(mu), dg.dot(mu)


def curvature(curve):
    """Curvature quadruple ``(l, m, n, alpha)`` as jet functions of ``t``."""

    def joint(t, order=DEFAULT_ORDER):
        return _curvature_jets(curve, t, order)

    def pick(i):
        return lambda t, order=DEFAULT_ORDER: joint(t, order)[i]

    return CurvatureQuadruple(pick(0), pick(1), pick(2), pick(3), _joint=joint)


@dataclass
class FrameJets:
    """Everything about a rotated frame at a set of parameters, as jets."""

    gamma: JetVec3
    v: JetVec3
    w: JetVec3
    mu: JetVec3
    theta: Jet
    ell_bar: Jet
    m_bar: Jet
    n_bar: Jet
    alpha: Jet


class AdaptedFrame:
    """Frame ``{v, w, mu}`` obtained by rotating ``(nu1, nu2)`` by ``theta``."""

    def __init__(self, curve, theta, *, sample_count=1000):
        self.curve = curve
        self.theta = theta
        self.v = SmoothMap3(lambda t, order: self.at(t, order).v, curve.domain)
        self.w = SmoothMap3(lambda t, order: self.at(t, order).w, curve.domain)
        self.ell_bar = lambda t, order=DEFAULT_ORDER: self.at(t, order).ell_bar
        self.m_bar = lambda t, order=DEFAULT_ORDER: self.at(t, order).m_bar
        self.n_bar = lambda t, order=DEFAULT_ORDER: self.at(t, order).n_bar
        grid = scan_grid(curve.domain, sample_count)
        self.max_ell_bar = float(np.max(np.abs(self.at(grid, 0).ell_bar.value)))
        self.is_bishop = self.max_ell_bar < eps_zero()

    @property
    def domain(self):
        return self.curve.domain

    def at(self, t, order=DEFAULT_ORDER):
        t = np.asarray(t, dtype=float)
        g, n1, n2, mu = self.curve.jets(t, order + 1)
        dn1, dn2, dg = n1.deriv(), n2.deriv(), g.deriv()
        ell, m, n, alpha = dn1.dot(n2), dn1.dot(mu), dn2.dot(mu), dg.dot(mu)
        th = self.theta(t, order + 1)
        c, s = jets.cos(th.truncate(order)), jets.sin(th.truncate(order))
        n1, n2, mu = n1.truncate(order), n2.truncate(order), mu.truncate(order)
        return FrameJets(
            gamma=g.truncate(order),
            v=n1 * c - n2 * s,
            w=n1 * s + n2 * c,
            mu=mu,
            theta=th.truncate(order),
            ell_bar=ell - th.deriv(),
            m_bar=m * c - n * s,
            n_bar=m * s + n * c,
            alpha=alpha,
        )

    def as_framed_curve(self, name=""):
        """``(gamma, v, w)`` as a framed curve in its own right."""

        def joint(t, order):
            fj = self.at(t, order)
            return fj.gamma, fj.v, fj.w

        return FramedCurve.from_joint(joint, self.domain, name=name or self.curve.name)


def constant_angle(c):
    def theta(t, order=DEFAULT_ORDER):
        return Jet.constant(c, t, order)
    return theta


def rotated_frame(curve, theta, *, sample_count=1000):
    if not callable(theta):
        theta = constant_angle(float(theta))
    return AdaptedFrame(curve, theta, sample_count=sample_count)


def primitive(fn, anchor, c0=0.0, *, domain=None, tol=QUAD_TOL, nodes=256):
    """``F(t) = c0 + int_anchor^t fn``.

    Values come from adaptive quadrature of ``fn``; derivative coefficients
    are the jet of ``fn`` itself (``F' = fn``, ``F'' = fn'``, ...).  When a
    ``domain`` is given the integral is tabulated once on a uniform node grid
    and each query only integrates from its nearest node.
    """

    def value(x):
        return fn(x, 0).value

    table = {}

    def base_values(t):
        if domain is None:
            return c0 + integral_from(value, anchor, t, tol=tol)
        if not table:
            grid = np.linspace(*domain, nodes + 1)
            table["grid"] = grid
            table["cum"] = c0 + integral_from(value, anchor, grid, tol=tol)
        grid, cum = table["grid"], table["cum"]
        h = grid[1] - grid[0]
        idx = np.clip(np.rint((t - grid[0]) / h).astype(int), 0, nodes)
        flat_t, flat_i = t.ravel(), idx.ravel()
        gap = adaptive_simpson(value, grid[flat_i], flat_t, tol=tol)
        return (cum[flat_i] + gap).reshape(t.shape)

    def F(t, order=DEFAULT_ORDER):
        t = np.asarray(t, dtype=float)
        base = base_values(t)
        if order == 0:
            return Jet.constant(base, t, 0)
        return fn(t, order - 1).integrate(base)

    return F


def bishop_angle(curve, theta0=0.0, *, tol=QUAD_TOL):
    """Angle with ``theta' = l`` and ``theta(t_min) = theta0``.

    The rotated ``l-bar = l - theta'`` then vanishes identically.
    """
    quad = curvature(curve)
    return primitive(quad.ell, curve.domain[0], theta0, domain=curve.domain, tol=tol)


def bishop_frame(curve, theta0=0.0, **kw):
    return rotated_frame(curve, bishop_angle(curve, theta0), **kw)


def _gram_schmidt(F):
    n1 = F[..., 0, :] / np.linalg.norm(F[..., 0, :], axis=-1, keepdims=True)
    n2 = F[..., 1, :] - np.sum(F[..., 1, :] * n1, -1, keepdims=True) * n1
    n2 /= np.linalg.norm(n2, axis=-1, keepdims=True)
    return np.stack([n1, n2, np.cross(n1, n2)], axis=-2)


def _generator(ell, m, n):
    z = np.zeros_like(ell)
    return np.stack([
        np.stack([z, ell, m], -1),
        np.stack([-ell, z, n], -1),
        np.stack([-m, -n, z], -1),
    ], -2)


def reconstruct_from_curvature(quad, gamma0, frame0, domain, *, steps=RK_STEPS, name="reconstructed"):
    """Framed curve whose curvature is ``quad`` with prescribed initial data at ``domain[0]``.

    The frame and position are integrated by fixed-step RK4 with
    re-orthonormalisation after every step.  Evaluation at an arbitrary ``t``
    takes one RK4 step from the nearest node; derivatives of every order come
    from the Taylor recursion of the linear system driven by the jets of
    ``quad``.
    """
    F0 = np.asarray(frame0, dtype=float).reshape(3, 3)
    if np.max(np.abs(F0 @ F0.T - np.eye(3))) > 1e-10 or np.linalg.det(F0) < 0:
        raise PreconditionError("frame0 must be orthonormal with determinant +1")
    g0 = np.asarray(gamma0, dtype=float).reshape(3)
    lo, hi = map(float, domain)
    h = (hi - lo) / steps
    nodes = lo + h * np.arange(steps + 1)

    def rhs_values(t):
        ell, m, n, alpha = (j.value for j in quad.at(t, 0))
        return _generator(ell, m, n), alpha

    stage_t = np.concatenate([nodes[:-1], nodes[:-1] + 0.5 * h, nodes[1:]])
    C_all, a_all = rhs_values(stage_t)
    C0, Cm, C1 = np.split(C_all, 3)
    a0, am, a1 = np.split(a_all, 3)

    frames = np.empty((steps + 1, 3, 3))
    points = np.empty((steps + 1, 3))
    frames[0], points[0] = F0, g0
    F, g = F0, g0
    for i in range(steps):
        F, g = _rk4_step(F, g, h, (C0[i], a0[i]), (Cm[i], am[i]), (C1[i], a1[i]))
        if not (np.all(np.isfinite(F)) and np.all(np.isfinite(g))):
            raise ODEFailure(f"non-finite state at t={nodes[i + 1]}")
        F = _gram_schmidt(F)
        frames[i + 1], points[i + 1] = F, g

    def joint(t, order):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.rint((t - lo) / h).astype(int), 0, steps)
        dt = t - nodes[idx]
        Cs, As = rhs_values(np.stack([nodes[idx], nodes[idx] + 0.5 * dt, t]))
        Fi, gi = _rk4_step(frames[idx], points[idx], dt[..., None],
                           (Cs[0], As[0]), (Cs[1], As[1]), (Cs[2], As[2]))
        Fi = _gram_schmidt(Fi)
        return _taylor_frame(quad, t, Fi, gi, order)

    return FramedCurve.from_joint(joint, (lo, hi), name=name)


def _rk4_step(F, g, h, s0, sm, s1):
    def f(state_F, C, a):
        return C @ state_F, a[..., None] * state_F[..., 2, :]

    hh = np.asarray(h)
    hF = hh[..., None] if hh.ndim else hh
    k1F, k1g = f(F, *s0)
    k2F, k2g = f(F + 0.5 * hF * k1F, *sm)
    k3F, k3g = f(F + 0.5 * hF * k2F, *sm)
    k4F, k4g = f(F + hF * k3F, *s1)
    F = F + hF / 6.0 * (k1F + 2 * k2F + 2 * k3F + k4F)
    g = g + hh / 6.0 * (k1g + 2 * k2g + 2 * k3g + k4g)
    return F, g


def _taylor_frame(quad, t, F, g, order):
    """Jets of the frame rows and position from the linear ODE's Taylor recursion."""
    shape = t.shape
    Ftc = np.zeros(shape + (order + 1, 3, 3))
    gtc = np.zeros(shape + (order + 1, 3))
    Ftc[..., 0, :, :] = F
    gtc[..., 0, :] = g
    if order > 0:
        ell, m, n, alpha = quad.at(t, order - 1)
        Ctc = _generator(ell.tc, m.tc, n.tc)  # (..., K, 3, 3)
        atc = alpha.tc
        for k in range(order):
            acc = np.zeros(shape + (3, 3))
            gacc = np.zeros(shape + (3,))
            for j in range(k + 1):
                acc += Ctc[..., j, :, :] @ Ftc[..., k - j, :, :]
                gacc += atc[..., j, None] * Ftc[..., k - j, 2, :]
            Ftc[..., k + 1, :, :] = acc / (k + 1)
            gtc[..., k + 1, :] = gacc / (k + 1)

    def vec(tc):
        return JetVec3(*(Jet._raw(t, tc[..., :, i]) for i in range(3)))

    return vec(gtc), vec(Ftc[..., :, 0, :]), vec(Ftc[..., :, 1, :])
