"""Parallel curves, circular evolutes, involutes and the support function.

With an adapted frame ``{v, w, mu}`` of a framed curve:

* parallel curve   ``P = gamma + lam v``, framed by ``(v, cos(phi) w - sin(phi) mu)``;
* circular evolute ``E = gamma - (alpha / m_bar) v`` (Bishop frames, ``m_bar != 0``),
  framed by ``(w, mu)`` with ``E' = sigma v``;
* involute         ``I = gamma - A mu`` with ``A(t) = int_t0^t alpha``, framed by
  ``(xi, mu)`` where ``xi = (n nu1 - m nu2) / sqrt(m^2 + n^2)``.
"""
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import jets
from .config import DEFAULT_ORDER, GUARD_DELTA, eps_zero
from .curve import FramedCurve, SmoothMap3, bishop_frame, curvature, primitive, rotated_frame
from .errors import FrameUndefined, FramingUndefined, MNearZero, PreconditionError
from .jets import Jet, JetVec3
from .numerics import find_zeros, identically_zero, polish_root, scan_grid, split_domain
from .singularity import classify_curve_point
from .surface import m_bar_zeros, sigma_scalar, striction_ratio

HALF_PI = 0.5 * math.pi


def _f(x):
    return float(np.asarray(x).reshape(-1)[0])


# ---------------------------------------------------------------- parallel curves


class ParallelCurve:
    """``P = gamma + lam v`` with its framing and curvature."""

    def __init__(self, base, frame, lam):
        self.base, self.frame, self.lam = base, frame, float(lam)
        self.bishop = frame.is_bishop
        self.framed = FramedCurve.from_joint(self._joint, frame.domain, name=f"parallel({base.name})")
        self.curve = self.framed.gamma

    def _phi(self, fj):
        if self.bishop:
            return 0.0 * fj.alpha
        y, x = fj.ell_bar * self.lam, fj.alpha + fj.m_bar * self.lam
        if np.any(np.maximum(np.abs(y.value), np.abs(x.value)) < eps_zero()):
            raise FramingUndefined("parallel curve framing undefined: lam*l_bar and alpha + lam*m_bar vanish")
        return jets.atan2(y, x)

    def _joint(self, t, order):
        fj = self.frame.at(t, order)
        phi = self._phi(fj)
        n = fj.w * jets.cos(phi) - fj.mu * jets.sin(phi)
        return fj.gamma + fj.v * self.lam, fj.v, n

    def quadruple(self, t, order=DEFAULT_ORDER):
        """``(l_P, m_P, n_P, alpha_P)`` from the rotated-frame data and ``phi``."""
        fj = self.frame.at(t, order + 1)
        phi = self._phi(fj)
        c, s = jets.cos(phi), jets.sin(phi)
        l, m, n, a = fj.ell_bar, fj.m_bar, fj.n_bar, fj.alpha
        lam = self.lam
        return (
            (l * c - m * s).truncate(order),
            (l * s + m * c).truncate(order),
            n - phi.deriv(),
            (l * lam * s + (a + m * lam) * c).truncate(order),
        )


def parallel_curve(curve, frame, lam):
    if lam == 0:
        raise PreconditionError("the offset lam must be nonzero")
    if frame.curve is not curve:
        raise PreconditionError("frame was built for a different curve")
    if not frame.is_bishop:
        def ell_bar(x, order=0):
            return frame.at(x, order).ell_bar

        zeros = find_zeros(lambda x: ell_bar(x).value, frame.domain, df=lambda x: ell_bar(x, 1).d(1))
        for z in zeros:
            z, _ = polish_root(ell_bar, z)
            fj = frame.at(np.array(z), 0)
            if abs(_f(fj.alpha.value + lam * fj.m_bar.value)) < eps_zero():
                raise FramingUndefined(f"parallel curve framing undefined at t={z:.12g}: "
                                       "lam*l_bar and alpha + lam*m_bar vanish together")
    return ParallelCurve(curve, frame, lam)


# ---------------------------------------------------------------- circular evolutes


def _require_m_bar(frame, delta=GUARD_DELTA):
    dom = frame.domain

    def m(x):
        return frame.at(x, 0).m_bar.value

    if identically_zero(m, dom, eps_zero()):
        raise MNearZero("m̄ vanishes identically")
    zeros = m_bar_zeros(frame)
    if zeros:
        raise MNearZero(f"m̄ vanishes at t = {', '.join(f'{z:.12g}' for z in zeros)}",
                        zeros, split_domain(dom, zeros, delta))


class CircularEvolute:
    """``E = gamma - (alpha/m_bar) v`` framed by ``(w, mu)``, plus its Bishop lift."""

    def __init__(self, base, frame, theta_E0=0.0):
        self.base, self.frame, self.theta_E0 = base, frame, float(theta_E0)
        self.sigma = sigma_scalar(frame)
        self._ratio = striction_ratio(frame)
        self.framed = FramedCurve.from_joint(self._joint, frame.domain, name=f"evolute({base.name})")
        self.curve = self.framed.gamma

    @cached_property
    def bishop(self):
        return bishop_frame(self.framed, self.theta_E0)

    @property
    def theta_E(self):
        return self.bishop.theta

    def _joint(self, t, order):
        fj = self.frame.at(t, order)
        return fj.gamma - fj.v * (fj.alpha / fj.m_bar), fj.w, fj.mu

    @property
    def v_E(self):
        return self.bishop.v

    @property
    def w_E(self):
        return self.bishop.w

    def quadruple_wm(self, t, order=DEFAULT_ORDER):
        """Curvature of ``(E, w, mu)``: ``(n_bar, 0, -m_bar, sigma)``."""
        fj = self.frame.at(t, order)
        return fj.n_bar, 0.0 * fj.n_bar, -fj.m_bar, self.sigma(t, order)

    def quadruple(self, t, order=DEFAULT_ORDER):
        """Curvature of the Bishop lift: ``(0, m_bar sin th_E, -m_bar cos th_E, sigma)``."""
        fj = self.frame.at(t, order)
        th = self.theta_E(t, order)
        return (0.0 * fj.m_bar, fj.m_bar * jets.sin(th), -fj.m_bar * jets.cos(th), self.sigma(t, order))

    def alpha_E(self, t, order=DEFAULT_ORDER):
        """``-(alpha' m_bar - alpha m_bar') / m_bar^2``."""
        fj = self.frame.at(t, order + 1)
        a, m = fj.alpha, fj.m_bar
        return -(a.deriv() * m.truncate(order) - a.truncate(order) * m.deriv()) / (m * m).truncate(order)


def circular_evolute(curve, frame, theta_E0=0.0):
    if frame.curve is not curve:
        raise PreconditionError("frame was built for a different curve")
    if not frame.is_bishop:
        raise PreconditionError("circular evolutes need a Bishop frame")
    _require_m_bar(frame)
    return CircularEvolute(curve, frame, theta_E0)


# ---------------------------------------------------------------- involutes


class Involute:
    """``I = gamma - A mu`` framed by ``(xi, mu)`` and rotated by the constant ``theta_I``."""

    def __init__(self, base, t0, theta_I=HALF_PI):
        self.base, self.t0, self.theta_I = base, float(t0), float(theta_I)
        self.quad = curvature(base)
        self.A = primitive(self.quad.alpha, self.t0, 0.0, domain=base.domain)
        self.framed = FramedCurve.from_joint(self._joint, base.domain, name=f"involute({base.name})")
        self.curve = self.framed.gamma
        self.xi = self.framed.nu1
        self.eta = self.framed.mu
        self.frame = rotated_frame(self.framed, self.theta_I)

    def _parts(self, t, order):
        g, n1, n2, mu = self.base.jets(t, order + 1)
        dn1, dn2 = n1.deriv(), n2.deriv()
        m, n = dn1.dot(mu), dn2.dot(mu)
        n1, n2, mu = n1.truncate(order), n2.truncate(order), mu.truncate(order)
        return g.truncate(order), n1, n2, mu, m, n

    def _joint(self, t, order):
        g, n1, n2, mu, m, n = self._parts(t, order)
        r = jets.sqrt(m * m + n * n)
        xi = (n1 * n - n2 * m) / r
        return g - mu * self.A(t, order), xi, mu

    def f(self, t, order=DEFAULT_ORDER):
        """``(m' n - m n' - (m^2 + n^2) l) / (m^2 + n^2)``."""
        ell, m, n, _ = self.quad.at(t, order + 1)
        r2 = (m * m + n * n).truncate(order)
        return ((m.deriv() * n.truncate(order) - m.truncate(order) * n.deriv()) - r2 * ell.truncate(order)) / r2

    def quadruple_xi(self, t, order=DEFAULT_ORDER):
        """Curvature of ``(I, xi, mu)``: ``(0, f, sqrt(m^2+n^2), -A sqrt(m^2+n^2))``."""
        _, m, n, _ = self.quad.at(t, order)
        r = jets.sqrt(m * m + n * n)
        return 0.0 * r, self.f(t, order), r, -(self.A(t, order) * r)

    def quadruple(self, t, order=DEFAULT_ORDER):
        """Curvature of ``(I, v_I, w_I)``."""
        _, f, r, a = self.quadruple_xi(t, order)
        c, s = math.cos(self.theta_I), math.sin(self.theta_I)
        return 0.0 * r, f * c - r * s, f * s + r * c, a

    def alpha_I(self, t, order=DEFAULT_ORDER):
        return self.quadruple_xi(t, order)[3]


def involute(curve, t0, theta_I=HALF_PI, *, sample_count=1000):
    lo, hi = curve.domain
    if not lo <= t0 <= hi:
        raise PreconditionError(f"t0={t0} lies outside the domain {curve.domain}")
    q = curvature(curve)
    grid = scan_grid(curve.domain, sample_count)
    _, m, n, _ = q.at(grid, 0)
    if np.min(m.value ** 2 + n.value ** 2) <= eps_zero() ** 2:
        raise FrameUndefined("m^2 + n^2 vanishes on the domain")
    return Involute(curve, t0, theta_I)


# ---------------------------------------------------------------- support function


@dataclass
class ContactPoint:
    t: float
    order: int
    derivatives: tuple
    components: tuple
    hypotheses_hold: bool

    def to_dict(self):
        return {"t": self.t, "order": self.order, "derivatives": list(self.derivatives),
                "components_v_w_mu": list(self.components), "hypotheses_hold": self.hypotheses_hold}


class SupportFunction:
    """``g(t) = (x0 - gamma(t)) . w(t)`` for a Bishop frame."""

    def __init__(self, frame):
        if not frame.is_bishop:
            raise PreconditionError("support function needs a Bishop frame")
        self.frame = frame

    def g(self, t, x0, order=DEFAULT_ORDER):
        fj = self.frame.at(t, order)
        return (fj.gamma * -1.0 + np.asarray(x0, float)).dot(fj.w)

    def closed_form(self, t, x0):
        """``(g', g'')`` from the frame equations."""
        fj = self.frame.at(t, 1)
        d = np.asarray(x0, float) - fj.gamma.value
        a, m, n, dn = fj.alpha.value, fj.m_bar.value, fj.n_bar.value, fj.n_bar.d(1)
        v, w, mu = fj.v.value, fj.w.value, fj.mu.value
        g1 = np.sum(d * (n[..., None] * mu), -1)
        second = -(m * n)[..., None] * v - (n * n)[..., None] * w + dn[..., None] * mu
        return g1, -a * n + np.sum(d * second, -1)


def support_function_contact(curve, frame, x0, *, n_scan=4096):
    """Zeros of ``g`` and their contact order (number of further vanishing derivatives)."""
    if frame.curve is not curve:
        raise PreconditionError("frame was built for a different curve")
    sf = SupportFunction(frame)
    x0 = np.asarray(x0, dtype=float)

    def gj(t, order=DEFAULT_ORDER):
        return sf.g(t, x0, order)

    roots = find_zeros(lambda x: gj(x, 0).value, frame.domain,
                       df=lambda x: gj(x, 1).d(1), n_scan=n_scan, endpoint=not curve.periodic)
    out = []
    for r in roots:
        t, _ = polish_root(gj, r)
        fj = frame.at(np.array(t), 0)
        d = x0 - fj.gamma.value
        scale = max(1.0, float(np.linalg.norm(d)))
        derivs = tuple(float(x) for x in gj(np.array(t), 3).coeffs)
        order = 0
        for k in (1, 2):
            if abs(derivs[k]) <= eps_zero() * scale:
                order = k
            else:
                break
        comps = tuple(float(np.dot(d, b)) for b in (fj.v.value, fj.w.value, fj.mu.value))
        hyp = abs(_f(fj.m_bar.value)) > eps_zero() and abs(_f(fj.n_bar.value)) > eps_zero()
        out.append(ContactPoint(float(t), order, derivs, comps, hyp))
    return out


# ---------------------------------------------------------------- identities and cusps


@dataclass
class IdentityReport:
    evolute_of_parallel: float
    involute_of_evolute: float
    evolute_of_involute: float
    lam: float
    lam_involute: float
    t0: float
    samples: int

    @property
    def max_residual(self):
        return max(self.evolute_of_parallel, self.involute_of_evolute, self.evolute_of_involute)

    def to_dict(self):
        return {
            "t0": self.t0, "lambda": self.lam, "lambda_from_t0": self.lam_involute,
            "samples": self.samples,
            "evolute_of_parallel": self.evolute_of_parallel,
            "involute_of_evolute": self.involute_of_evolute,
            "evolute_of_involute": self.evolute_of_involute,
        }


def verify_identities(curve, frame, t0, lam, *, samples=500):
    """Max distances for ``E_P = E``, ``I_E[t0] = P`` and ``E_I = gamma``.

    ``E_P`` uses the offset ``lam``; ``I_E[t0]`` is compared with the parallel
    curve at ``-alpha(t0)/m_bar(t0)``; ``E_I`` uses ``theta_I = pi/2``.
    """
    ev = circular_evolute(curve, frame)
    t = scan_grid(frame.domain, samples)
    E = ev.curve(t)

    P = parallel_curve(curve, frame, lam)
    p_frame = rotated_frame(P.framed, 0.0)
    E_P = circular_evolute(P.framed, p_frame).curve(t)

    lam0 = -_f(striction_ratio(frame)(np.array(float(t0)), 0).value)
    fj = frame.at(t, 0)
    P0 = fj.gamma.value + lam0 * fj.v.value
    I_E = involute(ev.framed, t0).curve(t)

    inv = involute(curve, t0, HALF_PI)
    E_I = circular_evolute(inv.framed, inv.frame).curve(t)

    def dist(a, b):
        return float(np.max(np.linalg.norm(a - b, axis=-1)))

    return IdentityReport(dist(E_P, E), dist(I_E, P0), dist(E_I, fj.gamma.value),
                          float(lam), lam0, float(t0), samples)


@dataclass
class CuspCorrespondence:
    t0: float
    gamma: object
    evolute: object = None
    involute: object = None
    propositions: dict = field(default_factory=dict)
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "t0": self.t0,
            "gamma": self.gamma.to_dict(),
            "evolute": self.evolute.to_dict() if self.evolute else None,
            "involute": self.involute.to_dict() if self.involute else None,
            "propositions": dict(self.propositions),
            "evidence": dict(self.evidence),
        }


def _iff(a_label, a_kind, b_label, b_kind):
    # a degenerate label is singular and neither cusp, so membership is still decided
    if a_label is None or b_label is None:
        return None
    return (a_label.kind == a_kind) == (b_label.kind == b_kind)


def _local_piece(frame, t0, window):
    lo, hi = frame.domain
    dom = (max(lo, t0 - window), min(hi, t0 + window))
    sub = rotated_frame(frame.curve.restricted(dom), frame.theta)
    zeros = m_bar_zeros(sub)
    for piece in split_domain(dom, zeros, GUARD_DELTA) if zeros else [dom]:
        if piece[0] <= t0 <= piece[1]:
            return rotated_frame(frame.curve.restricted(piece), frame.theta)
    return None


def cusp_correspondence(curve, frame, t0, *, window=0.25):
    """Labels of ``gamma``, ``E`` and ``I_gamma[t0]`` at ``t0`` and the four equivalences.

    The evolute equivalences need a singular point ``t0`` of ``gamma`` and a
    Bishop frame with ``m_bar(t0) != 0``; the involute equivalences use the
    anchor ``t0``, which is always singular for ``I_gamma[t0]``.  ``None``
    marks an equivalence that does not apply.
    """
    t0 = float(t0)
    q = curvature(curve)
    g_lab = classify_curve_point(curve.gamma, t0, alpha=q.alpha)
    out = CuspCorrespondence(t0, g_lab)
    a = q.alpha(np.array(t0), 2)
    singular = abs(_f(a.value)) <= eps_zero()
    m0 = _f(frame.at(np.array(t0), 0).m_bar.value)
    out.evidence.update(alpha=_f(a.value), alpha_dot=_f(a.d(1)), alpha_ddot=_f(a.d(2)), m_bar=m0)

    e_lab = None
    if frame.is_bishop and singular and abs(m0) > eps_zero():
        sub = _local_piece(frame, t0, window)
        if sub is not None:
            ev = CircularEvolute(sub.curve, sub)
            aE = ev.alpha_E(np.array(t0), 1)
            e_lab = classify_curve_point(ev.curve, t0, alpha=ev.sigma)
            out.evolute = e_lab
            out.evidence.update(alpha_E=_f(aE.value), alpha_E_dot=_f(aE.d(1)))
    out.propositions["gamma_cusp32_iff_evolute_regular"] = _iff(g_lab, "cusp32", e_lab, "regular")
    out.propositions["gamma_cusp43_iff_evolute_cusp32"] = _iff(g_lab, "cusp43", e_lab, "cusp32")

    inv = involute(curve, t0)
    aI = inv.alpha_I(np.array(t0), 2)
    i_lab = classify_curve_point(inv.curve, t0, alpha=inv.alpha_I)
    out.involute = i_lab
    out.evidence.update(alpha_I=_f(aI.value), alpha_I_dot=_f(aI.d(1)), alpha_I_ddot=_f(aI.d(2)))
    out.propositions["gamma_regular_iff_involute_cusp32"] = _iff(g_lab, "regular", i_lab, "cusp32")
    out.propositions["gamma_cusp32_iff_involute_cusp43"] = _iff(g_lab, "cusp32", i_lab, "cusp43")
    return out
