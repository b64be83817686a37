"""Recompute the worked examples and export their figures as data.

    python scripts/reproduce_examples.py [--out DIR]

Prints the labels for the astroid and nephroid normal surfaces, the
nephroid evolute/involute checks, and writes OBJ meshes and CSV polylines
to ``DIR`` (default ``./examples_out``).
"""
import argparse
import math
import os

import numpy as np

from framedcurves import catalog
from framedcurves.curve import bishop_frame, rotated_frame
from framedcurves.evolute_involute import circular_evolute, cusp_correspondence, involute
from framedcurves.export import obj_text, polyline_csv, write_text
from framedcurves.singularity import classify_curve_point, classify_surface
from framedcurves.surface import build_normal_surface, export_mesh, solve_framing

PI = math.pi
SQRT3 = math.sqrt(3.0)


def labels(ns):
    _, found = classify_surface(ns, solve_framing(ns))
    return [(round(s.point[0], 6) + 0.0, round(s.point[1], 6) + 0.0, s.kind) for s in found]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="examples_out")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    astroid = catalog.astroid()
    ns_a = build_normal_surface(astroid, rotated_frame(astroid, 0.0))
    print("astroid normal surface:", labels(ns_a))
    write_text(os.path.join(args.out, "astroid_normal.obj"), obj_text(export_mesh(ns_a, 200, 21)))

    neph = catalog.nephroid()
    ns_n = build_normal_surface(neph, bishop_frame(neph))
    print("nephroid normal surface:", labels(ns_n))
    write_text(os.path.join(args.out, "nephroid_normal.obj"), obj_text(export_mesh(ns_n, 200, 21)))

    piece = (-PI / 2 + 1e-3, PI / 2 - 1e-3)
    half = neph.restricted(piece)
    ev = circular_evolute(half, bishop_frame(half))
    t = np.linspace(*piece, 1000)
    err = np.max(np.linalg.norm(ev.curve(t) - (neph.gamma(t) + np.tan(t)[:, None] * neph.nu1(t)), axis=-1))
    print(f"nephroid evolute vs gamma + tan t nu1: {err:.2e}")
    write_text(os.path.join(args.out, "nephroid_evolute.csv"), polyline_csv(t, ev.curve(t)))

    inv = involute(neph, 0.0, PI / 2)
    t = np.linspace(0, 2 * PI - 1e-3, 1000)
    closed = neph.gamma(t) - (SQRT3 * (1 - np.cos(t)))[:, None] * neph.mu(t)
    print(f"nephroid involute vs closed form: {np.max(np.linalg.norm(inv.curve(t) - closed, axis=-1)):.2e}")
    print("involute at t=0:", classify_curve_point(inv.curve, 0.0, alpha=inv.alpha_I).kind)
    write_text(os.path.join(args.out, "nephroid_involute.csv"), polyline_csv(t, inv.curve(t)))

    ns_i = build_normal_surface(inv.framed, inv.frame, (-4.0, 4.0))
    print("involute tangent surface (anchor 0):", labels(ns_i))
    write_text(os.path.join(args.out, "nephroid_involute_tangent.obj"), obj_text(export_mesh(ns_i, 256, 33)))
    inv_pi = involute(neph, PI, PI / 2)
    print("involute tangent surface (anchor pi):",
          labels(build_normal_surface(inv_pi.framed, inv_pi.frame, (-4.0, 4.0))))

    cc = cusp_correspondence(neph, bishop_frame(neph), 0.0)
    print("cusp correspondence at t=0:", cc.gamma.kind, cc.evolute.kind, cc.involute.kind, cc.propositions)
    print(f"wrote files to {args.out}")


if __name__ == "__main__":
    main()
