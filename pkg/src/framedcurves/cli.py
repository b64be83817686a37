"""Command-line entry point: ``framedcurves <subcommand> [options]``.

Exit codes: 0 success, 1 mathematical precondition or IO failure, 2 bad
arguments.
"""
import argparse
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, catalog
from .config import GUARD_DELTA, eps_zero
from .curve import bishop_frame, curvature, rotated_frame
from .errors import FramedCurveError, MNearZero, PreconditionError
from .evolute_involute import (circular_evolute, cusp_correspondence, involute, parallel_curve,
                               verify_identities)
from .export import dumps, obj_text, polyline_csv, polyline_json, write_text
from .numerics import identically_zero, split_domain
from .singularity import (classify_curve_point, classify_surface_point, find_curve_singularities,
                          find_surface_singularities)
from .surface import build_normal_surface, export_mesh, m_bar_zeros, solve_framing

CONSTRUCTIONS = ("normal", "evolute", "involute", "parallel", "involute-tangent")
TOOL = f"framedcurves {__version__}"
IDENTITY_TOL = 1e-7


@dataclass
class RunConfig:
    command: str
    curve: str = "nephroid"
    construction: str = "normal"
    t0: float = None
    lam: float = 1.0
    theta0: float = 0.0
    tmin: float = None
    tmax: float = None
    lmin: float = -2.0
    lmax: float = 2.0
    nt: int = 200
    nl: int = 21
    samples: int = 500
    out: str = None
    json: bool = False


def _grid_size(text):
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError(f"grid size must be at least 2, got {n}")
    return n


def build_parser():
    p = argparse.ArgumentParser(prog="framedcurves", description="Framed curves, normal surfaces and their singularities.")
    p.add_argument("--version", action="version", version=TOOL)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list the built-in curves")
    c.add_argument("--json", action="store_true")

    def common(sp, construction=True):
        sp.add_argument("--curve", default="nephroid", choices=sorted(catalog.CATALOG))
        if construction:
            sp.add_argument("--construction", default="normal", choices=CONSTRUCTIONS)
        sp.add_argument("--t0", type=float, default=None, help="involute anchor / evolute piece selector")
        sp.add_argument("--lambda", dest="lam", type=float, default=1.0, help="parallel offset")
        sp.add_argument("--theta0", type=float, default=0.0, help="constant frame rotation")
        sp.add_argument("--tmin", type=float, default=None)
        sp.add_argument("--tmax", type=float, default=None)
        sp.add_argument("--lmin", type=float, default=-2.0)
        sp.add_argument("--lmax", type=float, default=2.0)
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        sp.add_argument("--json", action="store_true")

    common(sub.add_parser("classify", help="curve and surface singularities with evidence"))
    m = sub.add_parser("surface-mesh", help="OBJ mesh of a normal surface")
    common(m)
    m.add_argument("--nt", type=_grid_size, default=200)
    m.add_argument("--nl", type=_grid_size, default=21)
    pl = sub.add_parser("polyline", help="sampled curve as CSV (or JSON with --json)")
    common(pl)
    pl.add_argument("--nt", type=_grid_size, default=1000)
    v = sub.add_parser("verify", aliases=["verify-identities"], help="identity residuals and cusp correspondences")
    common(v, construction=False)
    v.add_argument("--samples", type=_grid_size, default=500)
    return p


def parse_config(argv):
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__})
    if cfg.command != "catalog":
        if not cfg.lmin < cfg.lmax:
            parser.error("--lmin must be smaller than --lmax")
        if cfg.tmin is not None and cfg.tmax is not None and not cfg.tmin < cfg.tmax:
            parser.error("--tmin must be smaller than --tmax")
        for name in ("t0", "lam", "theta0", "tmin", "tmax", "lmin", "lmax"):
            val = getattr(cfg, name)
            if val is not None and not math.isfinite(val):
                parser.error(f"--{name} must be finite")
    return cfg


# ---------------------------------------------------------------- constructions


def base_curve(cfg):
    curve = catalog.get(cfg.curve)
    if cfg.tmin is None and cfg.tmax is None:
        return curve
    lo, hi = curve.domain
    dom = (lo if cfg.tmin is None else cfg.tmin, hi if cfg.tmax is None else cfg.tmax)
    if not dom[0] < dom[1]:
        raise PreconditionError(f"empty parameter range {dom}")
    return curve.restricted(dom)


def m_free_pieces(curve, frame):
    """``m_bar``-free pieces of the domain; raises when ``m_bar`` vanishes identically."""
    if identically_zero(lambda x: frame.at(x, 0).m_bar.value, frame.domain, eps_zero()):
        raise MNearZero("m̄ vanishes identically")
    zeros = m_bar_zeros(frame)
    return zeros, (split_domain(frame.domain, zeros, GUARD_DELTA) if zeros else [frame.domain])


def m_free_piece(curve, frame, t0):
    """Restriction of a Bishop frame to the ``m_bar``-free piece containing ``t0``."""
    zeros, pieces = m_free_pieces(curve, frame)
    if not zeros:
        return curve, frame
    if t0 is None:
        piece = pieces[0]
    else:
        hits = [p for p in pieces if p[0] <= t0 <= p[1]]
        if not hits:
            raise MNearZero(f"t0={t0} is within {GUARD_DELTA} of a zero of m̄", zeros, pieces)
        piece = hits[0]
    sub = curve.restricted(piece)
    return sub, rotated_frame(sub, frame.theta)


def build_construction(cfg):
    """``(framed curve, adapted frame, description)`` for the requested construction."""
    curve = base_curve(cfg)
    kind = cfg.construction
    info = {"construction": kind, "base_domain": list(curve.domain)}
    if kind == "normal":
        return curve, rotated_frame(curve, cfg.theta0), info
    if kind == "evolute":
        sub, frame = m_free_piece(curve, bishop_frame(curve), cfg.t0)
        ev = circular_evolute(sub, frame, cfg.theta0)
        info["piece"] = list(sub.domain)
        return ev.framed, ev.bishop, info
    if kind in ("involute", "involute-tangent"):
        t0 = curve.domain[0] if cfg.t0 is None else cfg.t0
        theta = math.pi / 2 if kind == "involute-tangent" else cfg.theta0
        inv = involute(curve, t0, theta)
        info.update(t0=t0, theta_I=theta)
        return inv.framed, inv.frame, info
    if kind == "parallel":
        pc = parallel_curve(curve, rotated_frame(curve, cfg.theta0), cfg.lam)
        info["lambda"] = cfg.lam
        return pc.framed, rotated_frame(pc.framed, 0.0), info
    raise ValueError(kind)


def curvature_summary(framed, n=1000):
    t = np.linspace(*framed.domain, n)
    vals = curvature(framed).at(t, 0)
    return {k: {"min": float(np.min(v.value)), "max": float(np.max(v.value))}
            for k, v in zip(("ell", "m", "n", "alpha"), vals)}


def _header(cfg):
    d = asdict(cfg)
    d.pop("out")
    d.pop("json")
    d["eps_zero"] = eps_zero()
    return {"tool": TOOL, "config": d}


# ---------------------------------------------------------------- subcommands


def cmd_catalog(cfg):
    entries = catalog.describe()
    if cfg.json:
        return dumps(entries)
    return "".join(f"{e['id']:10s} {e['description']}\n" for e in entries)


def _locus_segments(ns, framing, locus):
    cuts = [locus.domain[0], *(p[0] for p in locus.special_points), locus.domain[1]]
    segs = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a < 1e-9:
            continue
        mid = 0.5 * (a + b)
        lam = float(locus.psi(np.array(mid)).value)
        try:
            lab = classify_surface_point(ns, framing, mid, lam)
            segs.append({"t_range": [a, b], "sample": lab.to_dict()})
        except FramedCurveError as exc:
            segs.append({"t_range": [a, b], "error": str(exc)})
    return segs


def cmd_classify(cfg):
    framed, frame, info = build_construction(cfg)
    q = curvature(framed)
    cs = find_curve_singularities(q.alpha, framed.domain, periodic=framed.periodic)
    curve_pts = [classify_curve_point(framed.gamma, t, alpha=q.alpha) for t in cs]

    ns = build_normal_surface(framed, frame, (cfg.lmin, cfg.lmax))
    framing = solve_framing(ns)
    sset = find_surface_singularities(ns)
    labels = []
    for t0, lam0 in sset.points:
        try:
            labels.append(classify_surface_point(ns, framing, t0, lam0).to_dict())
        except FramedCurveError as exc:
            labels.append({"t0": t0, "lambda0": lam0, "kind": "degenerate", "error": str(exc)})
    loci = [{
        "domain": list(L.domain),
        "special_points": [{"t": t, "lambda": lam, "reason": why} for t, lam, why in L.special_points],
        "segments": _locus_segments(ns, framing, L),
    } for L in sset.loci]
    return {
        **_header(cfg),
        "construction": info,
        "curve": {
            "name": framed.name,
            "domain": list(framed.domain),
            "curvature_summary": curvature_summary(framed),
            "singularities": [p.to_dict() for p in curve_pts],
        },
        "surface": {
            "frame": {"bishop": frame.is_bishop, "max_ell_bar": frame.max_ell_bar, "framing": framing.kind},
            "lambda_range": [cfg.lmin, cfg.lmax],
            "m_bar_zeros": sset.m_bar_zeros,
            "singular_rulings": sset.rulings,
            "singularities": labels,
            "singular_loci": loci,
        },
    }


def cmd_surface_mesh(cfg):
    framed, frame, info = build_construction(cfg)
    ns = build_normal_surface(framed, frame, (cfg.lmin, cfg.lmax))
    mesh = export_mesh(ns, cfg.nt, cfg.nl)
    text = obj_text(mesh, comment=f"{TOOL} {cfg.curve} {cfg.construction} nt={cfg.nt} nl={cfg.nl}")
    summary = {**_header(cfg), "construction": info, "vertices": int(mesh.vertices.shape[0]),
               "faces": int(mesh.faces.shape[0])}
    return text, summary


def cmd_polyline(cfg):
    curve = base_curve(cfg)
    if cfg.construction == "evolute" and cfg.t0 is None:
        # every m-bar-free piece, one after another
        frame = bishop_frame(curve)
        zeros, pieces = m_free_pieces(curve, frame)
        ts, pts = [], []
        for piece in pieces:
            sub = curve.restricted(piece) if zeros else curve
            ev = circular_evolute(sub, rotated_frame(sub, frame.theta) if zeros else frame)
            n = max(2, int(round(cfg.nt * (piece[1] - piece[0]) / (curve.domain[1] - curve.domain[0]))))
            t = np.linspace(*piece, n)
            ts.append(t)
            pts.append(ev.curve(t))
        t, pts = np.concatenate(ts), np.concatenate(pts)
        info = {"construction": "evolute", "pieces": [list(p) for p in pieces]}
    else:
        framed, _, info = build_construction(cfg)
        t = np.linspace(*framed.domain, cfg.nt)
        pts = framed.gamma(t)
    if cfg.json:
        text = polyline_json(t, pts, **_header(cfg), construction=info)
    else:
        text = polyline_csv(t, pts)
    return text, {**_header(cfg), "construction": info, "points": int(t.size)}


def cmd_verify(cfg):
    curve = base_curve(cfg)
    t0 = curve.domain[0] if cfg.t0 is None else cfg.t0
    frame = bishop_frame(curve)
    sub, sub_frame = m_free_piece(curve, frame, t0)
    rep = verify_identities(sub, sub_frame, t0, cfg.lam, samples=cfg.samples)
    cc = cusp_correspondence(curve, frame, t0)
    res = rep.to_dict()
    return {
        **_header(cfg),
        "piece": list(sub.domain),
        "identities": res,
        "identities_within_tolerance": rep.max_residual < IDENTITY_TOL,
        "tolerance": IDENTITY_TOL,
        "cusp_correspondence": cc.to_dict(),
    }


def _emit(text, cfg, summary=None):
    if cfg.out:
        write_text(cfg.out, text)
        if summary is not None:
            sys.stdout.write(dumps({**summary, "out": cfg.out}))
    else:
        sys.stdout.write(text)


def main(argv=None):
    cfg = parse_config(sys.argv[1:] if argv is None else argv)
    try:
        if cfg.command == "catalog":
            _emit(cmd_catalog(cfg), cfg)
        elif cfg.command == "classify":
            _emit(dumps(cmd_classify(cfg)), cfg)
        elif cfg.command in ("verify", "verify-identities"):
            _emit(dumps(cmd_verify(cfg)), cfg)
        elif cfg.command == "surface-mesh":
            text, summary = cmd_surface_mesh(cfg)
            _emit(text, cfg, summary)
        elif cfg.command == "polyline":
            text, summary = cmd_polyline(cfg)
            _emit(text, cfg, summary)
    except (FramedCurveError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
