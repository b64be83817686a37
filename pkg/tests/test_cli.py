import json
import math

import numpy as np
import pytest

from framedcurves import catalog
from framedcurves.cli import main, parse_config
from framedcurves.export import dumps, obj_text, polyline_csv, read_obj, read_polyline_csv
from framedcurves.surface import Mesh


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_catalog_lists_four_curves(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    ids = [line.split()[0] for line in out.splitlines()]
    assert ids == ["nephroid", "astroid", "circle", "line"]


def test_catalog_json(capsys):
    entries = run_json(capsys, "catalog", "--json")
    assert isinstance(entries, list) and len(entries) == 4
    assert {e["id"] for e in entries} == {"nephroid", "astroid", "circle", "line"}


@pytest.mark.parametrize("argv", [
    ["catalog", "--bogus"],
    ["classify", "--curve", "trefoil"],
    ["surface-mesh", "--nl", "1"],
    ["surface-mesh", "--nt", "0"],
    ["classify", "--lmin", "1", "--lmax", "1"],
    ["classify", "--tmin", "2", "--tmax", "1"],
    ["classify", "--lambda", "nan"],
    ["polyline", "--construction", "spiral"],
])
def test_bad_arguments_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    capsys.readouterr()


def test_parse_config_defaults():
    cfg = parse_config(["surface-mesh", "--curve", "astroid"])
    assert (cfg.curve, cfg.construction, cfg.nt, cfg.nl) == ("astroid", "normal", 200, 21)


def test_classify_astroid_cross_caps(capsys):
    rep = run_json(capsys, "classify", "--curve", "astroid")
    pts = rep["surface"]["singularities"]
    assert [p["kind"] for p in pts] == ["cross_cap"] * 4
    ts = sorted(p["t0"] for p in pts)
    assert np.allclose(ts, [k * math.pi / 2 for k in range(4)], atol=1e-10)
    assert all(abs(p["lambda0"]) < 1e-10 for p in pts)
    assert all(abs(abs(p["evidence"]["cross_cap_value"]) - 4.0) < 1e-8 for p in pts)
    assert rep["tool"].startswith("framedcurves ")


def test_classify_nephroid_cuspidal_cross_caps(capsys):
    rep = run_json(capsys, "classify", "--curve", "nephroid")
    surf = rep["surface"]
    ccr = sorted((p["t0"], p["lambda0"]) for p in surf["singularities"] if p["kind"] == "cuspidal_cross_cap")
    assert np.allclose(ccr, [(0.0, 0.0), (math.pi, 0.0)], atol=1e-8)
    kinds = {seg["sample"]["kind"] for L in surf["singular_loci"] for seg in L["segments"] if "sample" in seg}
    assert kinds == {"cuspidal_edge"}
    curve_kinds = sorted(p["kind"] for p in rep["curve"]["singularities"])
    assert curve_kinds == ["cusp32", "cusp32"]


def test_classify_line_is_empty(capsys):
    rep = run_json(capsys, "classify", "--curve", "line")
    assert rep["curve"]["singularities"] == []
    assert rep["surface"]["singularities"] == []
    assert rep["surface"]["singular_loci"] == []


def test_surface_mesh_vertex_count(tmp_path, capsys):
    path = tmp_path / "inv.obj"
    code, out, _ = run(capsys, "surface-mesh", "--curve", "nephroid", "--construction", "involute-tangent",
                       "--nt", "128", "--nl", "17", "--out", str(path))
    assert code == 0
    summary = json.loads(out)
    assert summary["vertices"] == 2176
    verts, faces = read_obj(path.read_text())
    assert verts.shape == (128 * 17, 3)
    assert faces.min() >= 0 and faces.max() < verts.shape[0]
    assert np.all(np.isfinite(verts))


def test_polyline_evolute_matches_closed_form(capsys):
    code, out, _ = run(capsys, "polyline", "--curve", "nephroid", "--construction", "evolute", "--t0", "0.3")
    assert code == 0
    header, body = read_polyline_csv(out)
    assert header == ["t", "x", "y", "z"]
    t, pts = body[:, 0], body[:, 1:]
    f = catalog.nephroid()
    expected = f.gamma(t) + np.tan(t)[:, None] * f.nu1(t)
    assert np.max(np.linalg.norm(pts - expected, axis=1)) < 1e-8


def test_polyline_evolute_all_pieces(capsys):
    code, out, _ = run(capsys, "polyline", "--curve", "nephroid", "--construction", "evolute")
    assert code == 0
    _, body = read_polyline_csv(out)
    t = body[:, 0]
    assert np.all(np.abs(np.cos(t)) > 1e-4)
    assert t.min() < 1.0 and t.max() > 5.0


def test_polyline_json(capsys):
    rep = run_json(capsys, "polyline", "--curve", "circle", "--nt", "5", "--json")
    pts = np.array(rep["points"])
    assert pts.shape == (5, 3)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0)


def test_verify_nephroid(capsys):
    rep = run_json(capsys, "verify", "--curve", "nephroid", "--t0", "0.3")
    res = rep["identities"]
    for key in ("evolute_of_parallel", "involute_of_evolute", "evolute_of_involute"):
        assert res[key] < 1e-7
    assert rep["identities_within_tolerance"] is True


def test_verify_line_fails(capsys):
    code, out, err = run(capsys, "verify", "--curve", "line")
    assert code == 1
    assert "m̄ vanishes identically" in err
    assert out == ""


def test_verify_circle_involute_correspondence(capsys):
    rep = run_json(capsys, "verify-identities", "--curve", "circle", "--t0", "0")
    props = rep["cusp_correspondence"]["propositions"]
    assert props["gamma_regular_iff_involute_cusp32"] is True


def test_evolute_near_m_zero_exits_1(capsys):
    code, _, err = run(capsys, "classify", "--curve", "nephroid", "--construction", "evolute",
                       "--t0", str(math.pi / 2))
    assert code == 1 and err.startswith("error:")


def test_io_error_exits_1(tmp_path, capsys):
    bad = tmp_path / "missing" / "out.obj"
    code, _, err = run(capsys, "surface-mesh", "--curve", "circle", "--nt", "4", "--nl", "2", "--out", str(bad))
    assert code == 1 and "error" in err


@pytest.mark.parametrize("argv", [
    ["classify", "--curve", "astroid"],
    ["verify", "--curve", "nephroid", "--t0", "0.3", "--samples", "50"],
    ["polyline", "--curve", "nephroid", "--construction", "involute", "--nt", "50", "--json"],
])
def test_reports_are_deterministic(argv, capsys):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_fg_tol_is_echoed(monkeypatch, capsys):
    monkeypatch.setenv("FG_TOL", "1e-6")
    rep = run_json(capsys, "classify", "--curve", "line")
    assert rep["config"]["eps_zero"] == 1e-6


def test_obj_round_trip():
    verts = np.array([[0.1, 0.2, 0.3], [1.0 / 3.0, 2.0, -1e-300], [4.0, 5.0, 6.0]])
    faces = np.array([[0, 1, 2]])
    text = obj_text(Mesh(verts, faces, np.zeros(3), np.zeros(1)), comment="tri")
    v2, f2 = read_obj(text)
    assert np.array_equal(v2, verts) and np.array_equal(f2, faces)
    assert "f 1 2 3" in text


def test_csv_round_trip():
    t = np.linspace(0, 1, 7)
    pts = np.column_stack([np.sin(t), np.cos(t), t ** 3 / 7])
    header, body = read_polyline_csv(polyline_csv(t, pts))
    assert header == ["t", "x", "y", "z"]
    assert np.array_equal(body[:, 0], t) and np.array_equal(body[:, 1:], pts)


def test_dumps_sorts_keys_and_maps_nonfinite():
    text = dumps({"b": np.float64(np.inf), "a": (np.int64(1), np.bool_(True))})
    assert json.loads(text) == {"a": [1, True], "b": None}
    assert text.index('"a"') < text.index('"b"') and text.endswith("\n")
