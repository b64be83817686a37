import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given

from framedcurves import catalog
from framedcurves.curve import bishop_frame, rotated_frame
from framedcurves.errors import FramingUndefined, MNearZero, PreconditionError
from framedcurves.surface import (BasicInvariants, basic_invariants, build_normal_surface,
                                  check_integrability, classify_developable, export_mesh,
                                  solve_framing, striction_curve, surface_curvature)

from conftest import HALF_PIECE, SQRT3


def normal_surface(curve, theta=0.0, lam=(-2.0, 2.0)):
    return build_normal_surface(curve, rotated_frame(curve, theta), lam)


def all_surfaces():
    """Every catalog curve with its given frame and with a Bishop frame."""
    out = []
    for cid in sorted(catalog.CATALOG):
        c = catalog.get(cid)
        out.append((f"{cid}-given", build_normal_surface(c, rotated_frame(c, 0.0))))
        out.append((f"{cid}-bishop", build_normal_surface(c, bishop_frame(c, 0.3))))
    return out


SURFACES = all_surfaces()


class ShiftedB1(BasicInvariants):
    """Negative control: b1 replaced by b1 + 0.1 lam."""

    def t_jets(self, t, lam, order=2):
        out = super().t_jets(t, lam, order)
        out["b1"] = out["b1"] + 0.1 * np.broadcast_to(np.asarray(lam, float), out["b1"].shape)
        return out

    def l_jets(self, t, lam, order=2):
        out = super().l_jets(t, lam, order)
        L = out["a2"] * 0.0
        L.tc[..., 0] = lam
        if L.order >= 1:
            L.tc[..., 1] = 1.0
        out["b1"] = out["b1"] + 0.1 * L
        return out


# ---------------------------------------------------------------- the map


def test_astroid_map(astroid):
    ns = normal_surface(astroid)
    t, lam = np.meshgrid(np.linspace(0, 6, 20), np.linspace(-2, 2, 9), indexing="ij")
    expect = np.stack([np.cos(t) ** 3 - lam * np.sin(t), np.sin(t) ** 3 - lam * np.cos(t), np.cos(2 * t)], -1)
    np.testing.assert_allclose(ns(t, lam), expect, atol=1e-14)
    assert not ns.developable


def test_line_is_plane(line):
    ns = normal_surface(line)
    t, lam = np.meshgrid(np.linspace(-1, 1, 7), np.linspace(-2, 2, 5), indexing="ij")
    np.testing.assert_allclose(ns(t, lam), np.stack([t, lam, 0 * t], -1), atol=1e-15)


def test_nephroid_developable(nephroid):
    assert normal_surface(nephroid).developable


@pytest.mark.parametrize("name,ns", SURFACES, ids=[s[0] for s in SURFACES])
def test_cross_product_identity(name, ns):
    t, lam = np.meshgrid(np.linspace(*ns.domain, 60), np.linspace(-2, 2, 11), indexing="ij")
    assert np.max(np.abs(ns.cross_tl(t, lam) - ns.cross_tl_closed_form(t, lam))) < 1e-9


def test_cross_product_fd_oracle(astroid):
    ns = normal_surface(astroid)
    t, lam, h = np.linspace(0.1, 6, 25), 0.7, 1e-6
    Xt = (ns(t + h, lam) - ns(t - h, lam)) / (2 * h)
    Xl = (ns(t, lam + h) - ns(t, lam - h)) / (2 * h)
    assert np.max(np.abs(np.cross(Xt, Xl) - ns.cross_tl_closed_form(t, lam))) < 1e-8


def test_construction_preconditions(nephroid, astroid):
    with pytest.raises(PreconditionError):
        build_normal_surface(nephroid, rotated_frame(astroid, 0.0))
    with pytest.raises(PreconditionError):
        build_normal_surface(nephroid, rotated_frame(nephroid, 0.0), (1.0, 1.0))


# ---------------------------------------------------------------- framing


def test_bishop_framing_is_w(nephroid):
    ns = normal_surface(nephroid)
    fr = solve_framing(ns)
    assert fr.kind == "bishop"
    t = np.linspace(0, 6, 30)
    assert np.all(fr.phi(t, 1.3) == 0.0)
    np.testing.assert_allclose(fr.n(t, 1.3), ns.frame.at(t, 0).w.value, atol=1e-15)


def test_line_framing_residual(line):
    fr = solve_framing(normal_surface(line))
    assert np.max(fr.residual(np.linspace(-1, 1, 11), 0.5)) == 0.0


def test_astroid_framing_angle(astroid):
    fr = solve_framing(normal_surface(astroid))
    assert fr.kind == "atan2"
    t = math.pi / 4
    assert abs(fr.phi(t, 1.0) - math.atan2(0.8, 2.5 + 0.6)) < 1e-14
    assert fr.residual(t, 1.0) < 1e-12


def test_astroid_framing_undefined_at_cross_cap(astroid):
    fr = solve_framing(normal_surface(astroid))
    with pytest.raises(FramingUndefined):
        fr.phi(0.0, 0.0)


def test_phi_partials_fd_oracle(astroid):
    fr = solve_framing(normal_surface(astroid))
    h = 1e-6
    for t, lam in [(0.4, 0.5), (2.0, -1.2), (4.0, 1.7)]:
        p = fr.partials(t, lam)
        assert abs(p["phi_t"] - (fr.phi(t + h, lam) - fr.phi(t - h, lam)) / (2 * h)) < 1e-7
        assert abs(p["phi_lam"] - (fr.phi(t, lam + h) - fr.phi(t, lam - h)) / (2 * h)) < 1e-7
        dphi_t = lambda L: fr.partials(t, L)["phi_t"]
        assert abs(p["phi_tlam"] - (dphi_t(lam + h) - dphi_t(lam - h)) / (2 * h)) < 1e-6


@given(st.floats(0.05, 6.2), st.floats(0.1, 2.0), st.sampled_from([0.0, 0.9, 2.5]))
def test_framing_is_orthonormal(t, lam, theta):
    ns = normal_surface(catalog.astroid(), theta)
    fr = solve_framing(ns)
    n, s = fr.n(t, lam), fr.s(t, lam)
    assert abs(np.dot(n, n) - 1) < 1e-12 and abs(np.dot(n, s)) < 1e-12
    assert fr.residual(t, lam) < 1e-8
    # n is normal to the surface wherever it is regular
    cross = ns.cross_tl(t, lam)
    assert np.linalg.norm(np.cross(cross, n)) < 1e-9 * max(1.0, np.linalg.norm(cross))


# ---------------------------------------------------------------- invariants


def test_nephroid_invariants(nephroid):
    ns = normal_surface(nephroid)
    bi = basic_invariants(ns, solve_framing(ns))
    t, lam = np.meshgrid(np.linspace(0, 6, 25), np.linspace(-2, 2, 7), indexing="ij")
    v = bi.evaluate(t.ravel(), lam.ravel())
    tt, ll = t.ravel(), lam.ravel()
    np.testing.assert_allclose(v["b1"][0], -(SQRT3 * np.sin(tt) - ll * SQRT3 * np.cos(tt)), atol=1e-12)
    np.testing.assert_allclose(v["f1"][0], -SQRT3 * np.sin(tt), atol=1e-12)
    np.testing.assert_allclose(v["g1"][0], SQRT3 * np.cos(tt), atol=1e-12)
    assert np.max(np.abs(v["e1"][0])) < 1e-15
    for k, const in [("a1", 0), ("a2", 1), ("b2", 0), ("e2", 0), ("g2", 0)]:
        assert np.all(v[k][0] == const)


def test_line_invariants(line):
    ns = normal_surface(line)
    v = basic_invariants(ns, solve_framing(ns)).evaluate(np.linspace(-1, 1, 5), 0.7)
    np.testing.assert_array_equal(v["b1"][0], -1.0)
    np.testing.assert_array_equal(v["g1"][0], 0.0)


def test_b1_is_minus_signed_area(astroid):
    ns = normal_surface(astroid)
    bi = basic_invariants(ns, solve_framing(ns))
    t, lam = np.linspace(0.2, 6, 30), 0.9
    n = solve_framing(ns).n(t, lam)
    area = np.sum(ns.cross_tl(t, lam) * n, -1)
    np.testing.assert_allclose(bi.evaluate(t, lam)["b1"][0], -area, atol=1e-12)


def test_nephroid_integrability(nephroid):
    ns = normal_surface(nephroid)
    rep = check_integrability(basic_invariants(ns, solve_framing(ns)), np.linspace(0, 2 * math.pi, 100),
                              np.linspace(-2, 2, 100))
    assert rep.max_residual < 1e-9 and rep.undefined_points == 0


def test_line_integrability_exact(line):
    ns = normal_surface(line)
    rep = check_integrability(basic_invariants(ns, solve_framing(ns)), np.linspace(-1, 1, 20), np.linspace(-2, 2, 20))
    assert rep.max_residual == 0.0


@pytest.mark.parametrize("name,ns", SURFACES, ids=[s[0] for s in SURFACES])
def test_integrability_all_catalog(name, ns):
    rep = check_integrability(basic_invariants(ns, solve_framing(ns)), np.linspace(*ns.domain, 100),
                              np.linspace(-2, 2, 100))
    assert rep.max_residual < 1e-8


def test_corrupted_b1_breaks_integrability(nephroid):
    ns = normal_surface(nephroid)
    rep = check_integrability(ShiftedB1(ns, solve_framing(ns)), np.linspace(0, 6, 30), np.linspace(-2, 2, 30))
    assert rep.residuals["b1_lam"] >= 0.1 - 1e-9


# ---------------------------------------------------------------- curvature of the framed surface


def test_nephroid_surface_curvature(nephroid):
    ns = normal_surface(nephroid)
    sc = surface_curvature(ns, solve_framing(ns))
    t = np.linspace(0, 6, 40)
    J, K, H = sc.evaluate(t, 0.8)
    np.testing.assert_allclose(H, -SQRT3 * np.sin(t) / 2, atol=1e-12)
    assert np.max(np.abs(K)) < 1e-15
    np.testing.assert_allclose(J, SQRT3 * np.sin(t) - 0.8 * SQRT3 * np.cos(t), atol=1e-12)


def test_line_surface_curvature(line):
    ns = normal_surface(line)
    J, K, H = surface_curvature(ns, solve_framing(ns)).evaluate(np.linspace(-1, 1, 9), -1.5)
    np.testing.assert_array_equal(J, 1.0)
    np.testing.assert_array_equal(H, 0.0)


def test_astroid_jf_is_area_density(astroid):
    ns = normal_surface(astroid)
    t, lam = np.linspace(0.3, 6, 30), 1.1
    J = surface_curvature(ns, solve_framing(ns)).JF(t, lam)
    np.testing.assert_allclose(np.abs(J), np.linalg.norm(ns.cross_tl(t, lam), axis=-1), atol=1e-12)


@given(st.floats(-1.4, 1.4), st.floats(-3, 3))
def test_jf_vanishes_exactly_on_singular_set(t, e):
    c = catalog.nephroid().restricted(HALF_PIECE)
    ns = normal_surface(c, lam=(-10, 10))
    sc = surface_curvature(ns, solve_framing(ns))
    lam = math.tan(t) + 10.0 ** e * 1e-6
    x = ns.singular_conditions(t, lam)[1]
    J = sc.JF(t, lam)
    assert (abs(J) < 1e-8) == (abs(x) < 1e-8)
    assert abs(J - x) < 1e-12


# ---------------------------------------------------------------- developable type


def test_nephroid_tangent_type(nephroid_half):
    c, fr = nephroid_half
    sd = classify_developable(build_normal_surface(c, fr))
    assert sd.dev_type == "tangent"
    t = np.linspace(*HALF_PIECE, 200)
    np.testing.assert_allclose(sd.sigma_scalar(t, 0).value, 1 / np.cos(t) ** 2, rtol=1e-12)


def test_line_cylinder(line):
    assert classify_developable(normal_surface(line)).dev_type == "cylinder"


def test_circle_cone(circle):
    sd = classify_developable(normal_surface(circle))
    assert sd.dev_type == "cone"
    assert np.max(np.abs(sd.sigma_curve(np.linspace(0, 6, 50)))) < 1e-14


def test_nephroid_full_domain_needs_split(nephroid):
    ns = normal_surface(nephroid)
    with pytest.raises(MNearZero) as err:
        classify_developable(ns)
    np.testing.assert_allclose(err.value.zeros, [math.pi / 2, 3 * math.pi / 2], atol=1e-12)
    mixed = classify_developable(ns, split=True)
    assert mixed.dev_type == "mixed"
    assert [p.dev_type for p in mixed.pieces] == ["tangent"] * 3


def test_developable_needs_bishop(astroid):
    with pytest.raises(PreconditionError):
        classify_developable(normal_surface(astroid))


def test_singular_values_are_striction_curve(nephroid_half):
    c, fr = nephroid_half
    ns = build_normal_surface(c, fr)
    t = np.linspace(*HALF_PIECE, 500)
    fj = fr.at(t, 0)
    lam = -fj.alpha.value / fj.m_bar.value
    assert np.max(np.abs(ns(t, lam) - striction_curve(fr)(t))) < 1e-10


# ---------------------------------------------------------------- meshes


def test_astroid_mesh_counts(astroid):
    mesh = export_mesh(normal_surface(astroid), 64, 16)
    assert mesh.vertices.shape == (1024, 3)
    assert mesh.faces.shape == (1890, 3)
    assert mesh.faces.min() == 0 and mesh.faces.max() == 1023


def test_mesh_vertices_row_major(astroid):
    ns = normal_surface(astroid)
    mesh = export_mesh(ns, 5, 3)
    np.testing.assert_allclose(mesh.vertices[1 * 3 + 2], ns(mesh.t[1], mesh.lam[2]), atol=1e-15)


def test_line_mesh_planar(line):
    normals = export_mesh(normal_surface(line), 10, 6).face_normals()
    unit = normals / np.linalg.norm(normals, axis=-1, keepdims=True)
    np.testing.assert_allclose(np.abs(unit[:, 2]), 1.0, atol=1e-14)


def test_nephroid_degenerate_cells_on_singular_set(nephroid_half):
    c, fr = nephroid_half
    ns = build_normal_surface(c, fr)
    nt, nl = 40, 401
    t_range = (-1.0, 1.0)
    mesh = export_mesh(ns, nt, nl, t_range=t_range)
    V = mesh.vertices.reshape(nt, nl, 3)
    # parallelogram area of each (t, lam) cell
    area = np.linalg.norm(np.cross(V[1:, :-1] - V[:-1, :-1], V[:-1, 1:] - V[:-1, :-1]), axis=-1)
    thinnest = np.argmin(area, axis=1)
    lam_sing = np.tan(0.5 * (mesh.t[:-1] + mesh.t[1:]))
    cell = np.clip(np.searchsorted(mesh.lam, lam_sing) - 1, 0, nl - 2)
    assert np.all(np.abs(thinnest - cell) <= 1)


def test_mesh_needs_two_samples(line):
    with pytest.raises(PreconditionError):
        export_mesh(normal_surface(line), 5, 1)
