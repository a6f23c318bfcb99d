import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from timecausal.errors import JetError, ParameterError
from timecausal.features import (FEATURES, FeatureParams, JetSlice, canonical, compute_jet,
                                 dethessian_temporal, directional_coefficients, directional_derivative,
                                 evaluate_feature, gaussian_curvature, lgn_operators,
                                 max_temporal_order, needed_partials, spatial_invariant,
                                 spatiotemporal_operators, velocity_unwarp, velocity_warp)
from timecausal.spatial import smooth_separable

ALL = sorted(needed_partials(FEATURES))
INNER = (slice(3, -3), slice(3, -3))


def grid(shape=(15, 17)):
    y, x = np.mgrid[: shape[0], : shape[1]].astype(float)
    return x - shape[1] // 2, y - shape[0] // 2


def jet_from(L, Lt, Ltt, needed=ALL, **kw):
    return compute_jet(L, Lt, Ltt, needed, alpha={1: 1.0, 2: 1.0}, **kw)


def random_jet(rng, shape=(16, 16)):
    L, Lt, Ltt = (smooth_separable(rng.normal(size=shape), 2.0) for _ in range(3))
    return L, Lt, Ltt


def test_names():
    assert canonical("tyx") == "xyt"
    assert canonical("ttxx") == "xxtt"
    with pytest.raises(JetError):
        canonical("xz")
    assert max_temporal_order(["q3"]) == 2
    assert max_temporal_order(["laplacian"]) == 0
    with pytest.raises(ParameterError):
        needed_partials(["nope"])


def test_params():
    with pytest.raises(ParameterError):
        FeatureParams(kappa=-1)
    with pytest.raises(ParameterError):
        FeatureParams(C=0)


def test_jet_errors():
    j = JetSlice({"x": np.zeros((3, 3))})
    with pytest.raises(JetError):
        j.raw("xx")
    with pytest.raises(JetError):
        JetSlice({"xt": np.zeros((3, 3))}).norm("xt")
    with pytest.raises(ParameterError):
        JetSlice({"x": np.zeros((3, 3)), "y": np.zeros((4, 3))})
    with pytest.raises(JetError):
        compute_jet(np.zeros((5, 5)), None, None, ["xt"])


def test_normalized_partial():
    j = JetSlice({"xxt": np.ones((3, 3))}, s=4.0, alpha={1: 0.5})
    assert j.factor("xxt") == pytest.approx(4.0 * 0.5)
    np.testing.assert_allclose(j.norm("xxt"), 2.0)
    assert np.all(j.get("xxt", normalized=False) == 1)


@pytest.mark.parametrize("name", FEATURES)
def test_constant_volume_gives_zero(name):
    c = np.full((12, 12), 7.0)
    z = np.zeros_like(c)
    out = evaluate_feature(jet_from(c, z, z), name)
    assert np.all(out == 0)


def test_quadratic_spatial_examples():
    x, y = grid()
    j = jet_from(x * x + y * y, np.zeros_like(x), np.zeros_like(x))
    inner = (slice(1, -1), slice(1, -1))
    assert np.all(spatial_invariant(j, "laplacian")[inner] == 4)
    assert np.all(spatial_invariant(j, "dethessian")[inner] == 4)
    np.testing.assert_allclose(spatial_invariant(j, "gradmag")[inner], 2 * np.hypot(x, y)[inner], atol=1e-12)
    with pytest.raises(ParameterError):
        spatial_invariant(j, "foo")


def test_deth3_quadratic():
    # f = x^2 + y^2 + t^2 has Hessian diag(2, 2, 2)
    x, y = grid()
    t = 3.0
    L = x * x + y * y + t * t
    Lt = np.full_like(x, 2 * t)
    Ltt = np.full_like(x, 2.0)
    out = spatiotemporal_operators(jet_from(L, Lt, Ltt))
    assert np.all(out["deth3"][1:-1, 1:-1] == 8)


def test_st_laplacian_kappa_zero():
    rng = np.random.default_rng(0)
    j = jet_from(*random_jet(rng))
    st0 = evaluate_feature(j, "stlap", FeatureParams(kappa=0))
    assert np.array_equal(st0, evaluate_feature(j, "laplacian"))
    st2 = evaluate_feature(j, "stlap", FeatureParams(kappa=2))
    np.testing.assert_allclose(st2 - st0, 4 * j.norm("tt"), atol=1e-14)


def test_gaussian_curvature_bordered_hessian_oracle():
    rng = np.random.default_rng(1)
    vals = rng.normal(size=(9, 9, 9, 9))
    Lx, Ly, Lt, Lxx, Lxy, Lyy, Lxt, Lyt, Ltt = vals
    got = gaussian_curvature(*vals)
    for idx in np.ndindex(9, 9, 9):
        H = np.array([[Lxx[idx], Lxy[idx], Lxt[idx]], [Lxy[idx], Lyy[idx], Lyt[idx]],
                      [Lxt[idx], Lyt[idx], Ltt[idx]]])
        B = np.zeros((4, 4))
        B[:3, :3] = H
        B[:3, 3] = B[3, :3] = (Lx[idx], Ly[idx], Lt[idx])
        assert got[idx] == pytest.approx(-np.linalg.det(B), rel=1e-9, abs=1e-9)


def test_gaussian_curvature_guard():
    out = gaussian_curvature(*(np.ones(3),) * 2, np.array([0.0, 1e-12, 1.0]), *(np.ones(3),) * 6, guard=1e-9)
    assert out[0] == 0 and out[1] == 0 and np.isfinite(out).all()


def test_rotation_commutes():
    rng = np.random.default_rng(2)
    L, Lt, Ltt = random_jet(rng, (32, 32))
    rot = [np.rot90(a) for a in (L, Lt, Ltt)]
    j, jr = jet_from(L, Lt, Ltt), jet_from(*rot)
    for name in ("dethessian", "laplacian", "gradmag", "kappa", "quasiq", "dtlap", "qtlap", "dtdeth",
                 "qtdeth", "deth3", "stlap", "q1", "q2", "q3", "gausscurv"):
        np.testing.assert_allclose(evaluate_feature(jr, name), np.rot90(evaluate_feature(j, name)),
                                   atol=1e-12, err_msg=name)


INVARIANT = ("dtlap", "dttlap", "qtlap", "dtdeth", "dttdeth", "qtdeth", "deth3", "stlap", "q3")


def _with_ramp(L, Lt, Ltt, A, B, C):
    x, y = grid(L.shape)
    return L + A * x + B * y, Lt + C, Ltt


@settings(max_examples=20, deadline=None)
@given(A=st.floats(-1, 1), B=st.floats(-1, 1), C=st.floats(-1, 1), seed=st.integers(0, 1000))
def test_additive_ramp_invariance(A, B, C, seed):
    L, Lt, Ltt = random_jet(np.random.default_rng(seed))
    scale = max(np.abs(a).max() for a in (L, Lt, Ltt))
    L, Lt, Ltt = L / scale, Lt / scale, Ltt / scale
    j0, j1 = jet_from(L, Lt, Ltt), jet_from(*_with_ramp(L, Lt, Ltt, A, B, C))
    for name in INVARIANT:
        a, b = evaluate_feature(j0, name)[INNER], evaluate_feature(j1, name)[INNER]
        assert np.max(np.abs(a - b)) <= 1e-9, name


def test_q1_q2_not_ramp_invariant():
    L, Lt, Ltt = random_jet(np.random.default_rng(3))
    j0, j1 = jet_from(L, Lt, Ltt), jet_from(*_with_ramp(L, Lt, Ltt, 0.5, -0.3, 0.7))
    for name in ("q1", "q2"):
        assert np.max(np.abs(evaluate_feature(j0, name) - evaluate_feature(j1, name))[INNER]) > 1e-3


def test_gausscurv_not_ramp_invariant():
    # at a point with L_x = L_y = 0, L_t = 1 and Hessian diag(2, 2, 2), G = 4;
    # adding A x to L gives L_x = A and G = 4 + 4 A^2
    one = np.ones(1)
    z = np.zeros(1)
    base = gaussian_curvature(z, z, one, 2 * one, z, 2 * one, z, z, 2 * one)
    A = 0.5
    ramped = gaussian_curvature(A * one, z, one, 2 * one, z, 2 * one, z, z, 2 * one)
    assert base[0] == pytest.approx(4.0)
    assert ramped[0] == pytest.approx(4.0 + 4 * A * A)


def test_temporal_variation_free_scene():
    L, _, _ = random_jet(np.random.default_rng(4))
    z = np.zeros_like(L)
    j = jet_from(L, z, z)
    assert np.all(evaluate_feature(j, "q2") == 0)
    assert np.all(evaluate_feature(j, "q3") == 0)
    for name in ("dtlap", "dttlap", "qtlap", "dtdeth", "dttdeth", "qtdeth"):
        assert np.all(evaluate_feature(j, name) == 0)
    C = FeatureParams().C
    spatial = j.norm("x") ** 2 + j.norm("y") ** 2 + C * (j.norm("xx") ** 2 + 2 * j.norm("xy") ** 2 + j.norm("yy") ** 2)
    np.testing.assert_allclose(evaluate_feature(j, "q1"), spatial, rtol=1e-14)


def test_uniform_flicker():
    shape = (12, 12)
    j = jet_from(np.full(shape, 0.5), np.full(shape, 0.2), np.full(shape, -0.1))
    assert np.all(evaluate_feature(j, "q2") == 0)
    assert np.all(evaluate_feature(j, "q3") == 0)
    assert np.all(evaluate_feature(j, "qtlap") == 0)
    assert np.all(evaluate_feature(j, "q1") > 0)


def test_linear_scene_deth_families_vanish():
    x, y = grid()
    j = jet_from(0.3 * x - 0.2 * y, 0.1 * x, 0.05 * y)
    for name in ("dtdeth", "dttdeth", "qtdeth"):
        assert np.max(np.abs(evaluate_feature(j, name)[INNER])) < 1e-15


def test_separable_dethessian_temporal_oracle():
    # L = g(x, y) m(t): detH(t) = m^2 detH_g, so d_t = 2 m m' detH_g, d_tt = 2 (m'^2 + m m'') detH_g
    rng = np.random.default_rng(5)
    gxx, gxy, gyy = rng.normal(size=(3, 6, 6))
    m, dm, ddm = 1.3, -0.4, 0.9
    parts = {"xx": gxx * m, "xy": gxy * m, "yy": gyy * m, "xxt": gxx * dm, "xyt": gxy * dm,
             "yyt": gyy * dm, "xxtt": gxx * ddm, "xytt": gxy * ddm, "yytt": gyy * ddm}
    out = dethessian_temporal(JetSlice(parts, alpha={1: 1.0, 2: 1.0}))
    det_g = gxx * gyy - gxy ** 2
    np.testing.assert_allclose(out["dtdeth"], 2 * m * dm * det_g, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(out["dttdeth"], 2 * (dm * dm + m * ddm) * det_g, rtol=1e-12, atol=1e-14)
    C = FeatureParams().C
    np.testing.assert_allclose(out["qtdeth"], out["dtdeth"] ** 2 + C * out["dttdeth"] ** 2)


def test_dethessian_temporal_without_second_order():
    parts = {k: np.ones((3, 3)) for k in ("xx", "xy", "yy", "xxt", "xyt", "yyt")}
    out = dethessian_temporal(JetSlice(parts, alpha={1: 1.0}))
    assert set(out) == {"dtdeth"}


def test_lgn_qt_peaks_at_modulated_blob():
    x, y = grid((31, 31))
    g = np.exp(-(x * x + y * y) / (2 * 3.0 ** 2))
    j = jet_from(g * 0.5, g * 0.3, g * -0.2, s=2.0)
    q = lgn_operators(j)["qtlap"]
    assert np.unravel_index(np.argmax(q), q.shape) == (15, 15)


def test_scaling_homogeneity_of_normalized_dethessian():
    def peak(sigma, s, n):
        x, y = grid((n, n))
        blob = np.exp(-(x * x + y * y) / (2 * sigma ** 2))
        L = smooth_separable(blob, s)
        j = compute_jet(L, needed=["xx", "xy", "yy"], s=s)
        return spatial_invariant(j, "dethessian")[n // 2, n // 2]

    a = peak(4.0, 9.0, 81)
    b = peak(8.0, 36.0, 161)
    assert b == pytest.approx(a, rel=0.02)


def test_directional_conventions():
    rng = np.random.default_rng(6)
    j = jet_from(*random_jet(rng))
    np.testing.assert_allclose(directional_derivative(j, 0.0, 2, 0), j.norm("xx"), atol=1e-15)
    # the perpendicular direction is (sin phi, -cos phi)
    np.testing.assert_allclose(directional_derivative(j, 0.0, 1, 1), -j.norm("xy"), atol=1e-15)
    np.testing.assert_allclose(directional_derivative(j, math.pi / 2, 1, 0), j.norm("y"), atol=1e-15)
    np.testing.assert_allclose(directional_derivative(j, 0.3, 1, 0, n=1),
                               math.cos(0.3) * j.norm("xt") + math.sin(0.3) * j.norm("yt"), atol=1e-15)
    assert directional_coefficients(0.0, 0, 1) == {(0, 1): -1.0}


@given(phi=st.floats(-math.pi, math.pi))
@settings(max_examples=25, deadline=None)
def test_rotational_energy_identity(phi):
    j = jet_from(*random_jet(np.random.default_rng(7)))
    a = directional_derivative(j, phi, 1, 0) ** 2 + directional_derivative(j, phi, 0, 1) ** 2
    np.testing.assert_allclose(a, j.norm("x") ** 2 + j.norm("y") ** 2, rtol=1e-10, atol=1e-14)


def test_warp_identity_and_integer_shift():
    rng = np.random.default_rng(8)
    f = rng.normal(size=(20, 24))
    assert np.array_equal(velocity_warp(f, (0, 0), 5), f)
    w = velocity_warp(f, (1.0, 2.0), 2.0)
    # output at x equals input at x + v t
    np.testing.assert_allclose(w[2:10, 4:12], f[6:14, 6:14], atol=1e-10)


def test_warp_stabilizes_translation():
    size = (48, 64)
    y, x = np.mgrid[: size[0], : size[1]].astype(float)
    v = (0.6, 0.35)

    def frame(t):
        cx, cy = 20 + v[0] * t, 20 + v[1] * t
        return np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * 3.0 ** 2))

    warped = [velocity_warp(frame(t), v, t) for t in range(10)]
    inner = (slice(8, -8), slice(8, -8))
    for a, b in zip(warped, warped[1:]):
        assert np.max(np.abs(b - a)[inner]) <= 1e-3


def test_unwarp_inverts_warp():
    y, x = np.mgrid[:40, :40].astype(float)
    f = np.exp(-((x - 20) ** 2 + (y - 18) ** 2) / 30.0)
    back = velocity_unwarp(velocity_warp(f, (0.7, -0.4), 3.0), (0.7, -0.4), 3.0)
    assert np.max(np.abs(back - f)[8:-8, 8:-8]) < 1e-3
