"""Closed-form framed curves used throughout the examples and tests.

Every evaluator composes elementary jets of the parameter, so derivatives of
any order are exact to rounding.
"""
import math

import numpy as np

from .curve import FramedCurve
from .jets import Jet, JetVec3, cos, sin

SQRT3 = math.sqrt(3.0)
TWO_PI = 2.0 * math.pi


def _zero(T):
    return 0.0 * T


def nephroid():
    """Spherical nephroid on [0, 2pi): a Bishop-framed curve with 3/2-cusps at 0 and pi."""

    def joint(t, order):
        T = Jet.variable(t, order)
        c, s = cos(T), sin(T)
        c3, s3 = cos(3 * T), sin(3 * T)
        gamma = JetVec3(0.75 * c - 0.25 * c3, 0.75 * s - 0.25 * s3, SQRT3 / 2 * c)
        nu1 = JetVec3(-0.75 * s - 0.25 * s3, c ** 3, SQRT3 / 2 * s)
        nu2 = JetVec3(0.75 * c - 0.25 * c3, s ** 3, SQRT3 / 2 * c)
        return gamma, nu1, nu2

    return FramedCurve.from_joint(joint, (0.0, TWO_PI), name="nephroid", periodic=True)


def astroid():
    """Spatial astroid on [0, 2pi): curvature (4/5, 3/5, 0, 5 cos t sin t)."""

    def joint(t, order):
        T = Jet.variable(t, order)
        c, s = cos(T), sin(T)
        gamma = JetVec3(c ** 3, s ** 3, cos(2 * T))
        nu1 = JetVec3(-s, -c, _zero(T))
        nu2 = JetVec3(-0.8 * c, 0.8 * s, _zero(T) + 0.6)
        return gamma, nu1, nu2

    return FramedCurve.from_joint(joint, (0.0, TWO_PI), name="astroid", periodic=True)


def circle():
    """Planar unit circle with nu1 radial and nu2 = e3: curvature (0, -1, 0, -1)."""

    def joint(t, order):
        T = Jet.variable(t, order)
        c, s = cos(T), sin(T)
        z = _zero(T)
        return JetVec3(c, s, z), JetVec3(c, s, z), JetVec3(z, z, z + 1.0)

    return FramedCurve.from_joint(joint, (0.0, TWO_PI), name="circle", periodic=True)


def line(domain=(-1.0, 1.0)):
    """Straight line (t, 0, 0) with the constant frame e2, e3."""

    def joint(t, order):
        T = Jet.variable(t, order)
        z = _zero(T)
        return JetVec3(T, z, z), JetVec3(z, z + 1.0, z), JetVec3(z, z, z + 1.0)

    return FramedCurve.from_joint(joint, domain, name="line")


def tangential_cusp_curve(domain=(-1.0, 1.0)):
    """Planar curve with alpha = t^2 under the circle's frame.

    ``gamma' = t^2 (sin t, -cos t, 0)`` so ``alpha(0) = alpha'(0) = 0`` and
    ``alpha''(0) = 2``: a 4/3-cusp at ``t = 0`` with ``l = 0``, ``m = -1``.
    """

    def joint(t, order):
        T = Jet.variable(t, order)
        c, s = cos(T), sin(T)
        z = _zero(T)
        T2 = T * T
        gamma = JetVec3(-T2 * c + 2 * T * s + 2 * c - 2.0, -(T2 * s + 2 * T * c - 2 * s), z)
        return gamma, JetVec3(c, s, z), JetVec3(z, z, z + 1.0)

    return FramedCurve.from_joint(joint, domain, name="tangential_cusp")


CATALOG = {
    "nephroid": (nephroid, "spherical nephroid: gamma = (3/4 cos t - 1/4 cos 3t, 3/4 sin t - 1/4 sin 3t, sqrt(3)/2 cos t), t in [0, 2pi)"),
    "astroid": (astroid, "spatial astroid: gamma = (cos^3 t, sin^3 t, cos 2t), t in [0, 2pi)"),
    "circle": (circle, "unit circle: gamma = (cos t, sin t, 0), nu1 = gamma, nu2 = e3, t in [0, 2pi)"),
    "line": (line, "straight line: gamma = (t, 0, 0), nu1 = e2, nu2 = e3, t in [-1, 1]"),
}


def get(curve_id):
    try:
        factory, _ = CATALOG[curve_id]
    except KeyError:
        raise KeyError(f"unknown curve {curve_id!r}; choose from {sorted(CATALOG)}") from None
    return factory()


def describe():
    return [{"id": k, "description": d} for k, (_, d) in CATALOG.items()]


def sample_polyline(curve, n):
    """Rows ``t, gamma(3), nu1(3), nu2(3)`` on a uniform grid."""
    t = np.linspace(*curve.domain, n)
    g, n1, n2, _ = curve.jets(t, 0)
    return t, np.concatenate([g.value, n1.value, n2.value], axis=-1)
