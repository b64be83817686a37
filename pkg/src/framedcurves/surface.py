"""Normal surfaces ``NS(t, lam) = gamma(t) + lam v(t)`` of framed curves.

The surface is framed by ``(n, s) = (cos(phi) w - sin(phi) mu, v)`` where the
angle ``phi`` solves

    lam l_bar cos(phi) - (alpha + lam m_bar) sin(phi) = 0.

For a Bishop frame ``phi = 0`` and ``n = w``.  Otherwise
``phi = atan2(lam l_bar, alpha + lam m_bar)``, which is undefined exactly on
the singular set.

Partial derivatives are exact: ``t``-partials come from jets in ``t`` at fixed
``lam`` and ``lam``-partials from jets in ``lam`` at fixed ``t`` (the surface
is affine in ``lam``, so the ``lam``-jets only need values and first
``t``-derivatives of the frame data).
"""
from dataclasses import dataclass, field

import numpy as np

from . import jets
from .config import DEFAULT_ORDER, GUARD_DELTA, SCAN_POINTS, eps_zero
from .curve import SmoothMap3
from .errors import FramingUndefined, MNearZero, PreconditionError
from .jets import Jet
from .numerics import find_zeros, identically_zero, scan_grid, split_domain

INVARIANT_NAMES = ("a1", "b1", "e1", "f1", "g1", "a2", "b2", "e2", "f2", "g2")


def _grid(t, lam):
    t, lam = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(lam, dtype=float))
    return np.array(t), np.array(lam)


class NormalSurface:
    """Ruled surface swept by the ``v`` direction of an adapted frame."""

    def __init__(self, base, frame, lambda_range=(-2.0, 2.0), *, sample_count=1000):
        self.base = base
        self.frame = frame
        self.lambda_range = tuple(map(float, lambda_range))
        grid = scan_grid(base.domain, sample_count)
        fj = frame.at(grid, 0)
        self.max_alpha_ell_bar = float(np.max(np.abs(fj.alpha.value * fj.ell_bar.value)))
        self.developable = self.max_alpha_ell_bar < eps_zero()

    @property
    def domain(self):
        return self.base.domain

    @property
    def is_bishop(self):
        return self.frame.is_bishop

    def jets(self, t, lam, order=DEFAULT_ORDER):
        """``(NS, NS_lam, frame jets)`` as jets in ``t`` at fixed ``lam``."""
        t, lam = _grid(t, lam)
        fj = self.frame.at(t, order)
        return fj.gamma + fj.v * lam, fj.v, fj

    def map(self, t, lam, order=DEFAULT_ORDER):
        return self.jets(t, lam, order)[0]

    def __call__(self, t, lam):
        return self.jets(t, lam, 0)[0].value

    def cross_tl(self, t, lam):
        """``NS_t x NS_lam`` from jets."""
        x, x_lam, _ = self.jets(t, lam, 1)
        return np.cross(x.d(1), x_lam.value)

    def cross_tl_closed_form(self, t, lam):
        """``(alpha + lam m_bar) w - lam l_bar mu``."""
        t, lam = _grid(t, lam)
        fj = self.frame.at(t, 0)
        jac = fj.alpha.value + lam * fj.m_bar.value
        return jac[..., None] * fj.w.value - (lam * fj.ell_bar.value)[..., None] * fj.mu.value

    def singular_conditions(self, t, lam):
        """``(lam l_bar, alpha + lam m_bar)``; both vanish exactly at singular points."""
        t, lam = _grid(t, lam)
        fj = self.frame.at(t, 0)
        return lam * fj.ell_bar.value, fj.alpha.value + lam * fj.m_bar.value


def build_normal_surface(curve, frame, lambda_range=(-2.0, 2.0)):
    if frame.curve is not curve:
        raise PreconditionError("frame was built for a different curve")
    lo, hi = lambda_range
    if not hi > lo:
        raise PreconditionError("lambda_range must be a nonempty interval")
    return NormalSurface(curve, frame, lambda_range)


@dataclass
class TJets:
    """Frame data and framing angle as jets in ``t`` at fixed ``lam``."""

    lam: np.ndarray
    ell_bar: Jet
    m_bar: Jet
    n_bar: Jet
    alpha: Jet
    phi: Jet
    phi_lam: Jet


@dataclass
class LJets:
    """Framing angle as jets in ``lam`` at fixed ``t`` plus frame scalars there."""

    lam: Jet
    ell_bar: np.ndarray
    m_bar: np.ndarray
    n_bar: np.ndarray
    alpha: np.ndarray
    phi: Jet
    phi_t: Jet


class SurfaceFraming:
    """Framing angle ``phi`` of a normal surface, with exact partials.

    ``kind`` is ``"bishop"`` (``phi = 0``) or ``"atan2"``.
    """

    def __init__(self, ns, kind):
        if kind not in ("bishop", "atan2"):
            raise ValueError(f"unknown framing kind {kind!r}")
        self.ns = ns
        self.kind = kind

    def _check_defined(self, lam, ell_bar, x):
        if self.kind == "atan2":
            bad = np.maximum(np.abs(lam * ell_bar), np.abs(x)) < eps_zero()
            if np.any(bad):
                raise FramingUndefined(
                    "framing angle undefined where lam*l_bar and alpha + lam*m_bar both vanish"
                )

    def t_jets(self, t, lam, order=DEFAULT_ORDER):
        t, lam = _grid(t, lam)
        fj = self.ns.frame.at(t, order)
        ell, m, n, a = fj.ell_bar, fj.m_bar, fj.n_bar, fj.alpha
        if self.kind == "bishop":
            zero = Jet.constant(0.0, t, order)
            return TJets(lam, ell, m, n, a, zero, zero)
        y, x = ell * lam, a + m * lam
        self._check_defined(lam, ell.value, x.value)
        return TJets(lam, ell, m, n, a, jets.atan2(y, x), a * ell / (x * x + y * y))

    def l_jets(self, t, lam, order=DEFAULT_ORDER):
        t, lam = _grid(t, lam)
        fj = self.ns.frame.at(t, 1)
        ell, m, n, a = fj.ell_bar, fj.m_bar, fj.n_bar, fj.alpha
        L = Jet.variable(lam, order)
        vals = (ell.value, m.value, n.value, a.value)
        if self.kind == "bishop":
            zero = Jet.constant(0.0, lam, order)
            return LJets(L, *vals, zero, zero)
        y, x = L * ell.value, L * m.value + a.value
        dy, dx = L * ell.d(1), L * m.d(1) + a.d(1)
        self._check_defined(lam, ell.value, x.value)
        r2 = x * x + y * y
        return LJets(L, *vals, jets.atan2(y, x), (x * dy - y * dx) / r2)

    def partials(self, t, lam):
        """Values of ``phi, phi_t, phi_tt, phi_lam, phi_tlam``."""
        tj = self.t_jets(t, lam, 2)
        lj = self.l_jets(t, lam, 1)
        return {
            "phi": tj.phi.value,
            "phi_t": tj.phi.d(1),
            "phi_tt": tj.phi.d(2),
            "phi_lam": tj.phi_lam.value,
            "phi_tlam": lj.phi_t.d(1),
        }

    def phi(self, t, lam):
        return self.t_jets(t, lam, 0).phi.value

    def n(self, t, lam):
        t, lam = _grid(t, lam)
        fj = self.ns.frame.at(t, 0)
        p = self.phi(t, lam)[..., None]
        return np.cos(p) * fj.w.value - np.sin(p) * fj.mu.value

    def s(self, t, lam):
        t, lam = _grid(t, lam)
        return self.ns.frame.at(t, 0).v.value

    def residual(self, t, lam):
        """``|lam l_bar cos(phi) - (alpha + lam m_bar) sin(phi)|``."""
        tj = self.t_jets(t, lam, 0)
        p = tj.phi.value
        x = tj.alpha.value + tj.lam * tj.m_bar.value
        return np.abs(tj.lam * tj.ell_bar.value * np.cos(p) - x * np.sin(p))


def solve_framing(ns):
    """Bishop frames get ``phi = 0``; any other frame gets the atan2 angle."""
    return SurfaceFraming(ns, "bishop" if ns.is_bishop else "atan2")


def _invariants_from(lam, ell, m, n, a, phi, phi_t, f2, zero, one):
    c, s = jets.cos(phi), jets.sin(phi)
    x = a + m * lam
    return {
        "a1": zero,
        "b1": -(ell * lam) * s - x * c,
        "e1": -ell * c + m * s,
        "f1": phi_t - n,
        "g1": -ell * s - m * c,
        "a2": one,
        "b2": zero,
        "e2": zero,
        "f2": f2,
        "g2": zero,
    }


class BasicInvariants:
    """The ten basic invariants of ``(NS, n, v)`` with exact partials."""

    def __init__(self, ns, framing):
        self.ns = ns
        self.framing = framing

    def t_jets(self, t, lam, order=2):
        """Invariants as jets in ``t`` at fixed ``lam``."""
        tj = self.framing.t_jets(t, lam, order + 1)

        def cut(j):
            return j.truncate(order)

        lam_ = tj.lam
        zero = Jet.constant(0.0, np.broadcast_to(np.asarray(t, float), lam_.shape), order)
        return _invariants_from(
            lam_, cut(tj.ell_bar), cut(tj.m_bar), cut(tj.n_bar), cut(tj.alpha),
            cut(tj.phi), tj.phi.deriv(), cut(tj.phi_lam), zero, zero + 1.0,
        )

    def l_jets(self, t, lam, order=2):
        """Invariants as jets in ``lam`` at fixed ``t``."""
        lj = self.framing.l_jets(t, lam, order + 1)
        L = lj.lam.truncate(order)
        zero = 0.0 * L
        return _invariants_from(
            L, lj.ell_bar, lj.m_bar, lj.n_bar, lj.alpha,
            lj.phi.truncate(order), lj.phi_t.truncate(order), lj.phi.deriv(), zero, zero + 1.0,
        )

    def evaluate(self, t, lam):
        """``name -> (value, d/dt, d/dlam)``."""
        tj = self.t_jets(t, lam, 1)
        lj = self.l_jets(t, lam, 1)
        return {k: (tj[k].value, tj[k].d(1), lj[k].d(1)) for k in INVARIANT_NAMES}


def basic_invariants(ns, framing):
    return BasicInvariants(ns, framing)


@dataclass
class IntegrabilityReport:
    residuals: dict
    undefined_points: int = 0

    @property
    def max_residual(self):
        return max(self.residuals.values())


def integrability_residuals(bi, t, lam):
    """The six compatibility residuals at each point, as arrays."""
    v = bi.evaluate(t, lam)

    def val(k):
        return v[k][0]

    def dt(k):
        return v[k][1]

    def dl(k):
        return v[k][2]

    return {
        "a1_lam": dl("a1") - val("b1") * val("g2") - (dt("a2") - val("b2") * val("g1")),
        "b1_lam": dl("b1") - val("a2") * val("g1") - (dt("b2") - val("a1") * val("g2")),
        "ab_ef": val("a1") * val("e2") + val("b1") * val("f2") - (val("a2") * val("e1") + val("b2") * val("f1")),
        "e1_lam": dl("e1") - val("f1") * val("g2") - (dt("e2") - val("f2") * val("g1")),
        "f1_lam": dl("f1") - val("e2") * val("g1") - (dt("f2") - val("e1") * val("g2")),
        "g1_lam": dl("g1") - val("e1") * val("f2") - (dt("g2") - val("e2") * val("f1")),
    }


def check_integrability(bi, t_samples, lam_samples):
    """Maximum of each compatibility residual over the grid ``t_samples x lam_samples``.

    Grid points where the framing angle is undefined (singular points of a
    non-Bishop surface) are skipped and counted.
    """
    T, L = np.meshgrid(np.asarray(t_samples, float), np.asarray(lam_samples, float), indexing="ij")
    T, L = T.ravel(), L.ravel()
    skipped = 0
    if bi.framing.kind == "atan2":
        y, x = bi.ns.singular_conditions(T, L)
        ok = np.maximum(np.abs(y), np.abs(x)) >= eps_zero()
        skipped = int(np.sum(~ok))
        T, L = T[ok], L[ok]
    res = integrability_residuals(bi, T, L)
    return IntegrabilityReport({k: float(np.max(np.abs(r))) for k, r in res.items()}, skipped)


class SurfaceCurvature:
    """``(J, K, H)`` from the basic invariants by their defining determinants."""

    def __init__(self, bi):
        self.bi = bi

    def evaluate(self, t, lam):
        v = {k: x[0] for k, x in self.bi.evaluate(t, lam).items()}
        J = v["a1"] * v["b2"] - v["a2"] * v["b1"]
        K = v["e1"] * v["f2"] - v["e2"] * v["f1"]
        H = -0.5 * ((v["a1"] * v["f2"] - v["a2"] * v["f1"]) - (v["b1"] * v["e2"] - v["b2"] * v["e1"]))
        return J, K, H

    def JF(self, t, lam):
        return self.evaluate(t, lam)[0]

    def KF(self, t, lam):
        return self.evaluate(t, lam)[1]

    def HF(self, t, lam):
        return self.evaluate(t, lam)[2]


def surface_curvature(ns, framing):
    return SurfaceCurvature(BasicInvariants(ns, framing))


@dataclass
class StrictionData:
    domain: tuple
    dev_type: str
    sigma_curve: SmoothMap3 = None
    sigma_scalar: object = None
    pieces: list = field(default_factory=list)
    m_bar_zeros: list = field(default_factory=list)


def striction_ratio(frame):
    """Jet function ``alpha / m_bar``."""

    def ratio(t, order=DEFAULT_ORDER):
        fj = frame.at(t, order)
        return fj.alpha / fj.m_bar

    return ratio


def sigma_scalar(frame):
    """``sigma = -(alpha / m_bar)'`` as a jet function."""
    ratio = striction_ratio(frame)

    def sigma(t, order=DEFAULT_ORDER):
        return -ratio(t, order + 1).deriv()

    return sigma


def striction_curve(frame, domain=None):
    """``gamma - (alpha / m_bar) v``."""

    def ev(t, order):
        fj = frame.at(t, order)
        return fj.gamma - fj.v * (fj.alpha / fj.m_bar)

    return SmoothMap3(ev, tuple(domain or frame.domain))


def m_bar_zeros(frame, domain=None, n_scan=SCAN_POINTS):
    domain = domain or frame.domain

    def m(x):
        return frame.at(x, 0).m_bar.value

    def dm(x):
        return frame.at(x, 1).m_bar.d(1)

    return find_zeros(m, domain, df=dm, n_scan=n_scan)


def _classify_piece(frame, domain):
    sig = sigma_scalar(frame)
    grid = scan_grid(domain, SCAN_POINTS)
    kind = "cone" if np.max(np.abs(sig(grid, 0).value)) < eps_zero() else "tangent"
    return StrictionData(tuple(domain), kind, striction_curve(frame, domain), sig)


def classify_developable(ns, *, split=False, delta=GUARD_DELTA):
    """Cylinder, cone or tangent type of a Bishop normal surface.

    When ``m_bar`` vanishes somewhere but not identically this raises
    :class:`MNearZero`, unless ``split`` is set: then each ``m_bar``-free
    piece is classified and the result is ``"mixed"``.
    """
    frame = ns.frame
    if not frame.is_bishop:
        raise PreconditionError("developable classification needs a Bishop frame")
    dom = frame.domain

    def m(x):
        return frame.at(x, 0).m_bar.value

    if identically_zero(m, dom, eps_zero()):
        return StrictionData(dom, "cylinder")
    zeros = m_bar_zeros(frame)
    if not zeros:
        return _classify_piece(frame, dom)
    pieces = split_domain(dom, zeros, delta)
    if not split:
        raise MNearZero(f"m_bar vanishes at {len(zeros)} point(s) of the domain", zeros, pieces)
    return StrictionData(dom, "mixed", pieces=[_classify_piece(frame, p) for p in pieces],
                         m_bar_zeros=zeros)


@dataclass
class Mesh:
    vertices: np.ndarray
    faces: np.ndarray
    t: np.ndarray
    lam: np.ndarray

    @property
    def shape(self):
        return self.t.size, self.lam.size

    def face_normals(self):
        a, b, c = (self.vertices[self.faces[:, i]] for i in range(3))
        return np.cross(b - a, c - a)


def grid_faces(nt, nl):
    """Two triangles per grid cell; vertex ``(i, j)`` has index ``i * nl + j``."""
    i, j = np.meshgrid(np.arange(nt - 1), np.arange(nl - 1), indexing="ij")
    p00 = (i * nl + j).ravel()
    p01, p10, p11 = p00 + 1, p00 + nl, p00 + nl + 1
    tri1 = np.stack([p00, p10, p11], axis=-1)
    tri2 = np.stack([p00, p11, p01], axis=-1)
    return np.stack([tri1, tri2], axis=1).reshape(-1, 3)


def export_mesh(ns, nt, nl, *, t_range=None, lambda_range=None):
    """Triangulated ``nt x nl`` grid of the surface, vertices row-major in ``(t, lam)``."""
    if nt < 2 or nl < 2:
        raise PreconditionError("mesh needs at least 2 samples in each direction")
    t = np.linspace(*(t_range or ns.domain), nt)
    lam = np.linspace(*(lambda_range or ns.lambda_range), nl)
    T, L = np.meshgrid(t, lam, indexing="ij")
    verts = ns(T.ravel(), L.ravel())
    return Mesh(verts, grid_faces(nt, nl), t, lam)
