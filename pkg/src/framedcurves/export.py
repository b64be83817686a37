"""Plain-text exports: OBJ meshes, CSV/JSON polylines and JSON reports."""
import csv
import io
import json
import math

import numpy as np


def _num(x):
    x = float(x)
    return x if math.isfinite(x) else None


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays and tuples into JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return obj


def dumps(report):
    """Deterministic JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def obj_text(mesh, comment=None):
    """Wavefront OBJ with 1-based face indices."""
    out = io.StringIO()
    if comment:
        out.write(f"# {comment}\n")
    for x, y, z in mesh.vertices:
        out.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
    for a, b, c in mesh.faces + 1:
        out.write(f"f {a} {b} {c}\n")
    return out.getvalue()


def read_obj(text):
    """Vertices and 0-based faces of an OBJ produced by :func:`obj_text`."""
    verts, faces = [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(p) for p in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
    return np.array(verts).reshape(-1, 3), np.array(faces, dtype=int).reshape(-1, 3)


def polyline_csv(t, points, columns=("x", "y", "z")):
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["t", *columns])
    for ti, row in zip(np.asarray(t), np.asarray(points)):
        w.writerow([f"{ti:.17g}", *(f"{v:.17g}" for v in row)])
    return out.getvalue()


def read_polyline_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], np.array(rows[1:], dtype=float).reshape(-1, len(rows[0]))
    return header, body


def polyline_json(t, points, **meta):
    return dumps({**meta, "t": np.asarray(t), "points": np.asarray(points)})


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
