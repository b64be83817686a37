"""Singular points of framed curves and of their normal surfaces.

Curve points are labelled ``regular``, ``cusp32`` (``gamma' = 0`` with
``gamma''``, ``gamma'''`` independent), ``cusp43`` (``gamma' = gamma'' = 0``
with ``gamma'''``, ``gamma''''`` independent) or ``degenerate``.

Surface points are labelled ``cross_cap``, ``cuspidal_edge``,
``swallowtail``, ``cuspidal_cross_cap`` or ``unresolved``.  Every label
carries the criterion values that decided it.
"""
from dataclasses import dataclass, field

import numpy as np

from .config import EPS_RANK, GUARD_DELTA, SCAN_POINTS, eps_zero
from .errors import DegenerateSingularity, FramingUndefined, MNearZero, NotFramed, NotSingular
from .numerics import find_zeros, identically_zero, polish_root, split_domain
from .surface import SurfaceCurvature, BasicInvariants, m_bar_zeros, sigma_scalar, striction_ratio

CURVE_KINDS = ("regular", "cusp32", "cusp43", "degenerate")
SURFACE_KINDS = ("cross_cap", "cuspidal_edge", "swallowtail", "cuspidal_cross_cap", "degenerate", "unresolved")


def _f(x):
    return float(np.asarray(x).reshape(-1)[0])


# ---------------------------------------------------------------- curves


@dataclass
class CurveSingularity:
    t0: float
    kind: str
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return {"t0": self.t0, "kind": self.kind, "evidence": dict(self.evidence)}


def find_curve_singularities(alpha, domain, *, periodic=False, n_scan=SCAN_POINTS):
    """Zeros of ``alpha`` on ``domain``.

    For periodic curves the right end is the same point as the left one and
    is not reported twice.
    """

    def f(x):
        return alpha(x, 0).value

    def df(x):
        return alpha(x, 1).d(1)

    roots = find_zeros(f, domain, df=df, n_scan=n_scan, endpoint=not periodic)
    lo, hi = domain
    out = []
    for r in roots:
        r2, _ = polish_root(alpha, r)
        out.append(float(min(max(r2, lo), hi)))
    return out


def singular_point_multiplicity(alpha, t0, max_order=4):
    """Number of leading derivatives of ``alpha`` vanishing at ``t0``."""
    d = alpha(np.array(float(t0)), max_order).coeffs
    for k, x in enumerate(d):
        if abs(x) > eps_zero():
            return k
    return max_order + 1


def _rank2(a, b, tiny):
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    cross = float(np.linalg.norm(np.cross(a, b)))
    ok = na > tiny and nb > tiny and cross > EPS_RANK * na * nb
    return ok, cross / (na * nb) if na * nb > 0 else 0.0


def classify_curve_point(curve_map, t0, alpha=None):
    """Label the point ``t0`` of a space curve from its derivatives up to order 4.

    Zero tests are relative to the largest of those derivatives (floored at
    1); rank-2 tests compare ``|a x b|`` with ``EPS_RANK |a| |b|``.
    """
    j = curve_map.jet(np.array(float(t0)), 4)
    d = [j.d(k) for k in range(1, 5)]
    norms = [float(np.linalg.norm(x)) for x in d]
    scale = max(1.0, max(norms))
    tiny = eps_zero() * scale
    r23, s23 = _rank2(d[1], d[2], tiny)
    r34, s34 = _rank2(d[2], d[3], tiny)
    ev = {
        "norm_d1": norms[0], "norm_d2": norms[1], "norm_d3": norms[2], "norm_d4": norms[3],
        "sin_angle_d2_d3": s23, "sin_angle_d3_d4": s34,
    }
    if alpha is not None:
        a = alpha(np.array(float(t0)), 2)
        ev.update(alpha=_f(a.value), alpha_dot=_f(a.d(1)), alpha_ddot=_f(a.d(2)))
    if norms[0] > tiny:
        kind = "regular"
    elif r23:
        kind = "cusp32"
    elif norms[1] <= tiny and r34:
        kind = "cusp43"
    else:
        kind = "degenerate"
    return CurveSingularity(float(t0), kind, ev)


# ---------------------------------------------------------------- surfaces


@dataclass
class SingularLocus:
    """Singular curve ``lam = psi(t) = -alpha/m_bar`` of a Bishop normal surface."""

    ns: object
    domain: tuple
    special_points: list = field(default_factory=list)

    def psi(self, t, order=0):
        return -striction_ratio(self.ns.frame)(t, order)

    def sample(self, n):
        t = np.linspace(*self.domain, n)
        return t, self.psi(t).value

    def Lambda(self, t):
        """Signed area density ``alpha + lam m_bar`` along the locus."""
        fj = self.ns.frame.at(t, 0)
        return fj.alpha.value + self.psi(t).value * fj.m_bar.value

    def image(self, t):
        return self.ns(t, self.psi(t).value)

    def Phi(self, t):
        """``det((NS o c)', n o c, dn(eta))`` with ``c(t) = (t, psi(t))``, ``eta = (1, 0)``, ``n = w``."""
        t = np.asarray(t, dtype=float)
        psi = self.psi(t, 1)
        x, x_lam, fj = self.ns.jets(t, psi.value, 1)
        tangent = x.d(1) + psi.d(1)[..., None] * x_lam.value
        n, dn = fj.w.value, fj.w.d(1)
        return np.linalg.det(np.stack([tangent, n, dn], axis=-1))


@dataclass
class SurfaceSingularSet:
    points: list = field(default_factory=list)
    loci: list = field(default_factory=list)
    rulings: list = field(default_factory=list)
    m_bar_zeros: list = field(default_factory=list)


def _in_range(lam, rng):
    lo, hi = rng
    return lo - 1e-12 <= lam <= hi + 1e-12


def _zeros_of(fn, domain, endpoint):
    def f(x):
        return fn(x, 0).value

    def df(x):
        return fn(x, 1).d(1)

    return [polish_root(fn, r)[0] for r in find_zeros(f, domain, df=df, endpoint=endpoint)]


def _frame_scalar(frame, name):
    def fn(t, order=0):
        return getattr(frame.at(t, order), name)
    return fn


def find_surface_singularities(ns, *, delta=GUARD_DELTA):
    """Singular set of ``NS``: points with ``lam l_bar = 0`` and ``alpha + lam m_bar = 0``.

    Bishop frames give a singular curve on each ``m_bar``-free piece of the
    domain; ``points`` then lists where the classification can change
    (zeros of ``n_bar`` and ``sigma``).  Other frames give isolated points.
    A whole ruling is singular where ``alpha`` and ``m_bar`` vanish together.
    """
    frame = ns.frame
    dom = frame.domain
    periodic = bool(getattr(ns.base, "periodic", False))
    alpha = _frame_scalar(frame, "alpha")
    m_bar = _frame_scalar(frame, "m_bar")
    out = SurfaceSingularSet()
    eps = eps_zero()

    def m_val(x):
        return m_bar(x).value

    if identically_zero(m_val, dom, eps):
        if frame.is_bishop:
            out.rulings = find_curve_singularities(alpha, dom, periodic=periodic)
            return out
        zm = []
    else:
        zm = m_bar_zeros(frame)
    out.m_bar_zeros = zm
    out.rulings = [z for z in zm if abs(_f(alpha(np.array(z)).value)) < eps]

    if frame.is_bishop:
        n_bar = _frame_scalar(frame, "n_bar")
        sigma = sigma_scalar(frame)
        for piece in split_domain(dom, zm, delta) if zm else [dom]:
            locus = SingularLocus(ns, piece)
            at_end = periodic and piece[1] == dom[1]
            specials = [(t, "n_bar") for t in _zeros_of(n_bar, piece, not at_end)]
            specials += [(t, "sigma") for t in _zeros_of(sigma, piece, not at_end)]
            for t, why in sorted(specials):
                lam = _f(locus.psi(np.array(t)).value)
                locus.special_points.append((t, lam, why))
                if _in_range(lam, ns.lambda_range):
                    out.points.append((t, lam))
            out.loci.append(locus)
        return out

    ell_bar = _frame_scalar(frame, "ell_bar")
    cand = [(t, 0.0) for t in find_curve_singularities(alpha, dom, periodic=periodic)]
    for t in _zeros_of(ell_bar, dom, not periodic):
        m = _f(m_bar(np.array(t)).value)
        if abs(m) > eps:
            cand.append((t, -_f(alpha(np.array(t)).value) / m))
    seen = []
    for t, lam in sorted(cand):
        if not _in_range(lam, ns.lambda_range):
            continue
        if any(abs(t - a) < 1e-9 and abs(lam - b) < 1e-9 for a, b in seen):
            continue
        seen.append((t, lam))
    out.points = seen
    return out


@dataclass
class CrossCapResult:
    is_cross_cap: bool
    evidence: float
    determinant: float


def _check_singular(ns, t0, lam0):
    y, x = ns.singular_conditions(np.array(float(t0)), np.array(float(lam0)))
    if max(abs(_f(y)), abs(_f(x))) > eps_zero():
        raise NotSingular(f"({t0}, {lam0}) is not a singular point: lam*l_bar={_f(y):.3e}, "
                          f"alpha+lam*m_bar={_f(x):.3e}")


def cross_cap_test(ns, t0, lam0):
    """Whitney-type test: cross cap iff ``alpha l_bar' + alpha' l_bar != 0`` at ``t0``.

    ``determinant`` is ``det(NS_lam, NS_tlam, NS_tt)`` from jets, an
    independent evaluation of the same quantity.
    """
    _check_singular(ns, t0, lam0)
    t, lam = np.array(float(t0)), np.array(float(lam0))
    x, x_lam, fj = ns.jets(t, lam, 2)
    ev = _f(fj.alpha.value * fj.ell_bar.d(1) + fj.alpha.d(1) * fj.ell_bar.value)
    det = float(np.linalg.det(np.stack([x_lam.value, x_lam.d(1), x.d(2)], axis=-1)))
    return CrossCapResult(abs(ev) > eps_zero(), ev, det)


def front_status(ns, framing, t0, lam0):
    """``"front"`` or ``"frontal_not_front"`` at a singular point."""
    _check_singular(ns, t0, lam0)
    t, lam = np.array(float(t0)), np.array(float(lam0))
    if framing.kind == "bishop":
        n_bar = _f(ns.frame.at(t, 0).n_bar.value)
        return ("front" if abs(n_bar) > eps_zero() else "frontal_not_front"), {"n_bar": n_bar}
    try:
        J, K, H = (_f(v) for v in SurfaceCurvature(BasicInvariants(ns, framing)).evaluate(t, lam))
    except FramingUndefined as exc:
        raise NotFramed(str(exc)) from exc
    norm = float(np.sqrt(J * J + K * K + H * H))
    return ("front" if norm > eps_zero() else "frontal_not_front"), {"JF": J, "KF": K, "HF": H}


@dataclass
class SurfaceSingularity:
    point: tuple
    kind: str
    front_status: str = None
    criterion: str = ""
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "t0": self.point[0],
            "lambda0": self.point[1],
            "kind": self.kind,
            "front_status": self.front_status,
            "criterion": self.criterion,
            "evidence": dict(self.evidence),
        }


def general_criteria(ns, framing, t0, lam0):
    """Criterion values of the general classification at a singular point.

    Uses the framing angle's partials; valid only at singular points, where
    the terms multiplied by ``lam l_bar`` or ``alpha + lam m_bar`` drop out.
    """
    t, lam = np.array(float(t0)), float(lam0)
    fj = ns.frame.at(t, 2)
    a, l, m, n = fj.alpha, fj.ell_bar, fj.m_bar, fj.n_bar
    p = {k: _f(v) for k, v in framing.partials(t, np.array(lam)).items()}
    c, s = np.cos(p["phi"]), np.sin(p["phi"])
    X, Xd, Xdd = (_f(a.d(k) + lam * m.d(k)) for k in range(3))
    l0, l1, l2 = (_f(l.d(k)) for k in range(3))
    m0 = _f(m.value)
    n0, n1 = _f(n.value), _f(n.d(1))
    b1_t = -Xd * c - lam * l1 * s
    b1_tt = -(Xdd + 2 * lam * l1 * p["phi_t"]) * c - (lam * l2 - 2 * Xd * p["phi_t"]) * s
    b1_lam = -l0 * s - m0 * c - (lam * l0 * c - X * s) * p["phi_lam"]
    f1_t = p["phi_tt"] - n1
    f1_lam = p["phi_tlam"]
    bracket = (-(Xd * p["phi_tlam"] - m0 * (p["phi_tt"] - n1)) * c
               - (lam * l0 * p["phi_tlam"] - l0 * (p["phi_tt"] - n1)) * s)
    return {
        "phi": p["phi"], "phi_t": p["phi_t"], "phi_tt": p["phi_tt"],
        "phi_lam": p["phi_lam"], "phi_tlam": p["phi_tlam"],
        "b1_t": b1_t, "b1_tt": b1_tt, "b1_lam": b1_lam,
        "f1_t": f1_t, "f1_lam": f1_lam, "bracket": bracket,
        "HF": 0.5 * (p["phi_t"] - n0), "n_bar": n0, "n_bar_dot": n1,
        "Lambda_t": -b1_t, "Lambda_lam": -b1_lam,
    }


def bishop_criteria(ns, t0):
    t = np.array(float(t0))
    fj = ns.frame.at(t, 1)
    sig = sigma_scalar(ns.frame)(t, 1)
    return {
        "sigma": _f(sig.value), "sigma_dot": _f(sig.d(1)),
        "n_bar": _f(fj.n_bar.value), "n_bar_dot": _f(fj.n_bar.d(1)),
        "m_bar": _f(fj.m_bar.value),
    }


def _general_label(ev, front):
    eps = eps_zero()
    if front == "front":
        if abs(ev["b1_t"]) > eps:
            return "cuspidal_edge"
        if abs(ev["b1_tt"]) > eps:
            return "swallowtail"
        return "unresolved"
    # frontal, not a front: record which branch of the argument applies
    ev["case"] = "a" if abs(ev["b1_lam"]) > eps else "b"
    if abs(ev["b1_t"]) > eps and abs(ev["bracket"]) > eps:
        return "cuspidal_cross_cap"
    return "unresolved"


def _bishop_label(ev):
    eps = eps_zero()
    if abs(ev["n_bar"]) > eps:
        if abs(ev["sigma"]) > eps:
            return "cuspidal_edge"
        if abs(ev["sigma_dot"]) > eps:
            return "swallowtail"
        return "unresolved"
    if abs(ev["n_bar_dot"]) > eps and abs(ev["sigma"]) > eps:
        return "cuspidal_cross_cap"
    return "unresolved"


def classify_surface_point(ns, framing, t0, lam0, *, method="auto"):
    """Label a singular point of a normal surface.

    Cross caps are tested first.  Bishop frames with ``m_bar(t0) != 0`` use
    the ``sigma``/``n_bar`` criteria unless ``method="general"``, which
    forces the criteria in terms of ``b1`` and ``f1``.
    """
    if method not in ("auto", "general"):
        raise ValueError(f"unknown method {method!r}")
    cc = cross_cap_test(ns, t0, lam0)
    point = (float(t0), float(lam0))
    base = {"cross_cap_value": cc.evidence, "cross_cap_det": cc.determinant}
    if cc.is_cross_cap:
        return SurfaceSingularity(point, "cross_cap", "not_frontal", "cross_cap", base)
    try:
        status, fev = front_status(ns, framing, t0, lam0)
        gev = general_criteria(ns, framing, t0, lam0)
    except FramingUndefined:
        base["framing"] = "undefined"
        return SurfaceSingularity(point, "unresolved", None, "no_framing", base)
    if max(abs(gev["Lambda_t"]), abs(gev["Lambda_lam"])) <= eps_zero():
        raise DegenerateSingularity(f"dLambda vanishes at {point}")
    ev = {**base, **fev, **gev}
    use_bishop = (method == "auto" and framing.kind == "bishop"
                  and abs(_f(ns.frame.at(np.array(float(t0)), 0).m_bar.value)) > eps_zero())
    if use_bishop:
        ev.update(bishop_criteria(ns, t0))
        return SurfaceSingularity(point, _bishop_label(ev), status, "bishop", ev)
    return SurfaceSingularity(point, _general_label(ev, status), status, "general", ev)


def classify_surface(ns, framing):
    """Classify every isolated singular point found by :func:`find_surface_singularities`."""
    sset = find_surface_singularities(ns)
    out = []
    for t0, lam0 in sset.points:
        try:
            out.append(classify_surface_point(ns, framing, t0, lam0))
        except DegenerateSingularity as exc:
            out.append(SurfaceSingularity((t0, lam0), "degenerate", None, "degenerate",
                                          {"message": str(exc)}))
    return sset, out
