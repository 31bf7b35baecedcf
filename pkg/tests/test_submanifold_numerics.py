import numpy as np
import pytest

from momentangle.charts import (
    NonConvergenceError,
    TorusSpreadChart,
    c2r,
    project_complex,
    project_real,
)
from momentangle.quadric_config import QuadricConfiguration, membership_residual
from momentangle.reduction_catalog import catalog_quadrics
from momentangle.submanifold_numerics import (
    DEFAULT_SPEC,
    ChartPatch,
    InvarianceError,
    chart_N,
    chart_point,
    coarea_orbit_volume_check,
    frame_symplectic_residual,
    hamiltonian_field,
    hamiltonian_pairing_residual,
    hminimality_residual,
    lagrangian_residual,
    mean_curvature_ambient,
    minimality_residual_in_Z,
    noether_drift,
    patch_volume,
    patch_volume_derivative,
    project_to_quadrics,
    sample_chart_points,
    tangent_frame_N,
    tangent_frame_Z,
)
from momentangle.procedures import ellipse_control, unequal_torus_control

spec = DEFAULT_SPEC
TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# Newton retraction


def test_projection_radial():
    Q = catalog_quadrics("one-quadric:3")
    z = project_to_quadrics(Q, np.array([1.1, 0, 0], complex))
    assert np.allclose(z, [1, 0, 0], atol=1e-12)
    z0 = np.array([0.6, 0.8, 0.0], complex)
    assert np.allclose(project_to_quadrics(Q, z0), z0, atol=1e-13)


def test_projection_stacked_two_quadrics():
    stacked = QuadricConfiguration.from_rows([(1, 1, 1), (1, 1, 2)], [2, 3])
    rng = np.random.default_rng(0)
    base = np.array([1.0, 0.0, 1.0])
    start = base + 0.05 * (rng.standard_normal(3) + 1j * rng.standard_normal(3))
    z = project_complex(stacked, start)
    assert membership_residual(stacked, z) < 1e-12


def test_projection_nonconvergence():
    Q = catalog_quadrics("one-quadric:2")
    with pytest.raises(NonConvergenceError):
        project_real(Q, np.zeros(2), max_iter=5)  # gradient vanishes at the origin


# ---------------------------------------------------------------------------
# charts and frames


def test_chart_phase_examples():
    Q2 = QuadricConfiguration.from_rows([(1, 1)], [1])
    r = 1 / np.sqrt(2)
    p = chart_N(Q2, [r, r], [0.0], [0.25])
    assert np.allclose(p.point, [1j * r, 1j * r], atol=1e-12)
    p = chart_N(Q2, [r, r], [0.0], [0.0])
    assert np.allclose(p.point, [r, r], atol=1e-13)
    Q3 = catalog_quadrics("one-quadric:3")
    p = chart_N(Q3, [1, 0, 0], [0.0, 0.0], [0.5])
    assert np.allclose(p.point, [-1, 0, 0], atol=1e-12)


def test_frame_orthonormal_and_annihilating():
    rng = np.random.default_rng(4)
    for name in ("one-quadric:3", "two-quadrics:2,2"):
        Q = catalog_quadrics(name)
        for p in sample_chart_points(Q, 5, rng, spec):
            fr = tangent_frame_N(Q, p, spec)
            V = np.concatenate([fr.vectors.real, fr.vectors.imag], axis=1)
            gram = V @ V.T
            assert np.abs(gram - np.eye(len(V))).max() < 1e-12
            grads = 2.0 * Q.gamma_float() * p.point[None, :]
            pairing = np.real(fr.vectors @ np.conj(grads).T)
            assert np.abs(pairing).max() < 1e-10


def test_lagrangian_residual_examples():
    Q2 = QuadricConfiguration.from_rows([(1, 1)], [1])
    r = 1 / np.sqrt(2)
    p = chart_N(Q2, [r, r], [0.0], [0.0])
    assert lagrangian_residual(Q2, p, spec) < 1e-13
    Q3 = catalog_quadrics("one-quadric:3")
    rng = np.random.default_rng(5)
    worst = max(lagrangian_residual(Q3, q, spec) for q in sample_chart_points(Q3, 100, rng, spec))
    assert worst < 1e-10
    # negative control: the quadric set itself is not Lagrangian
    z = sample_chart_points(Q3, 1, rng, spec)[0].point
    assert frame_symplectic_residual(tangent_frame_Z(Q3, z, spec), spec) > 0.1


def test_mean_curvature_examples():
    Q2 = QuadricConfiguration.from_rows([(1, 1)], [1])
    r = 1 / np.sqrt(2)
    p = chart_N(Q2, [r, r], [0.0], [0.0])
    H = mean_curvature_ambient(Q2, p, spec)
    assert np.allclose(H, [-np.sqrt(2), -np.sqrt(2)], atol=1e-7)
    assert abs(np.linalg.norm(c2r(H)) - 2.0) < 1e-7

    # circle of radius r in C: H = -z / r^2
    Q1 = QuadricConfiguration.from_rows([(1,)], [1])
    pc = chart_N(Q1, [1.0], [], [0.3])
    Hc = mean_curvature_ambient(Q1, pc, spec)
    assert np.allclose(Hc, -pc.point, atol=1e-8)


def test_mean_curvature_scaling_law():
    lam = 1.7
    Qa = QuadricConfiguration.from_rows([(1, 1)], [1])
    Qb = QuadricConfiguration.from_rows([(1, 1)], [lam**2])
    r = 1 / np.sqrt(2)
    pa = chart_N(Qa, [r, r], [0.0], [0.17])
    pb = chart_N(Qb, [lam * r, lam * r], [0.0], [0.17])
    Ha = mean_curvature_ambient(Qa, pa, spec)
    Hb = mean_curvature_ambient(Qb, pb, spec)
    assert np.allclose(Hb, Ha / lam, atol=1e-7)


def test_mean_curvature_is_normal():
    rng = np.random.default_rng(6)
    Q = catalog_quadrics("one-quadric:3")
    for p in sample_chart_points(Q, 10, rng, spec):
        H = mean_curvature_ambient(Q, p, spec)
        fr = tangent_frame_N(Q, p, spec)
        Hr = c2r(H)
        V = np.concatenate([fr.vectors.real, fr.vectors.imag], axis=1)
        assert np.abs(V @ Hr).max() < 1e-6


def test_minimality_residual_examples():
    Q2 = QuadricConfiguration.from_rows([(1, 1)], [1])
    r = 1 / np.sqrt(2)
    p = chart_N(Q2, [r, r], [0.0], [0.0])
    assert minimality_residual_in_Z(Q2, p, spec) < 1e-8
    Q3 = catalog_quadrics("one-quadric:3")
    rng = np.random.default_rng(7)
    worst = max(
        minimality_residual_in_Z(Q3, q, spec) for q in sample_chart_points(Q3, 100, rng, spec)
    )
    assert worst < 1e-4
    assert unequal_torus_control(spec) > 0.1


def test_conjugation_symmetry_of_residuals():
    # the involution acts on a spread chart by negating the phase parameters
    Q = catalog_quadrics("one-quadric:3")
    rng = np.random.default_rng(8)
    for p in sample_chart_points(Q, 5, rng, spec):
        params_c = p.params.copy()
        params_c[p.chart.nv :] *= -1.0
        pc = chart_point(p.chart, params_c, Q=Q, spec=spec)
        assert np.allclose(pc.point, np.conj(p.point), atol=1e-12)
        assert abs(lagrangian_residual(Q, p, spec) - lagrangian_residual(Q, pc, spec)) < 1e-10
        assert (
            abs(minimality_residual_in_Z(Q, p, spec) - minimality_residual_in_Z(Q, pc, spec))
            < 1e-10
        )


# ---------------------------------------------------------------------------
# Hamiltonian fields


def test_hamiltonian_field_linear():
    z = np.array([0.3 + 0.4j, 0.1 - 0.2j, 0.5 + 0.0j])
    f = lambda zz: zz[..., 0].real
    X = hamiltonian_field(f, z, spec)
    # i_X omega = d(Re z_1): with omega scaled so the moment map is exact,
    # X = (i pi) e_1 (the convention constant folded in)
    assert np.allclose(X, [1j * np.pi, 0, 0], atol=1e-9)
    assert hamiltonian_pairing_residual(f, z, X, spec) < 1e-8


def test_hamiltonian_field_constant_and_moment():
    z = np.array([0.5 + 0.1j, -0.2 + 0.3j])
    Xc = hamiltonian_field(lambda zz: 0.0 * zz[..., 0].real + 3.0, z, spec)
    assert np.abs(Xc).max() < 1e-9
    Xm = hamiltonian_field(lambda zz: np.abs(zz[..., 0]) ** 2, z, spec)
    assert np.allclose(Xm, [2j * np.pi * z[0], 0], atol=1e-9)  # first rotation circle


def test_noether_drift():
    Q = catalog_quadrics("one-quadric:3")
    rng = np.random.default_rng(9)
    z = sample_chart_points(Q, 1, rng, spec)[0].point
    f = lambda zz: (np.abs(zz) ** 2).sum(axis=-1)
    assert noether_drift(Q, f, z, spec) < 1e-8
    fc = lambda zz: 0.0 * zz[..., 0].real + 1.0
    assert noether_drift(Q, fc, z, spec) < 1e-12
    with pytest.raises(InvarianceError):
        noether_drift(Q, lambda zz: zz[..., 0].real, z, spec)


# ---------------------------------------------------------------------------
# variations


def test_circle_first_variation():
    Q1 = QuadricConfiguration.from_rows([(1,)], [1])
    chart = TorusSpreadChart(Q1, [1.0], newton_tol=spec.newton_tol)
    patch = ChartPatch(chart=chart, lo=[0.0], hi=[1.0], nodes=32)
    dv, comp = patch_volume_derivative(patch, lambda z: z / np.abs(z), spec=spec)
    assert abs(dv - TWO_PI) < 1e-4
    assert abs(comp - TWO_PI) < 1e-4


def test_tangential_field_preserves_volume():
    Q2 = QuadricConfiguration.from_rows([(1, 1)], [1])
    from momentangle.reduction_catalog import one_quadric_torus_chart

    chart = one_quadric_torus_chart(Q2)
    patch = ChartPatch(chart=chart, lo=[0.0, 0.0], hi=list(chart.periods), nodes=24)
    dv, _ = patch_volume_derivative(patch, lambda z: 1j * z, spec=spec)  # orbit direction
    assert abs(dv) < 1e-6


def test_equivariant_curvature_direction_consistency():
    # variation along (the in-quadric-set part of) the curvature direction:
    # for the balanced torus both the derivative and the squared-norm
    # quadrature vanish
    Q2 = QuadricConfiguration.from_rows([(1, 1)], [1])
    from momentangle.reduction_catalog import one_quadric_torus_chart

    chart = one_quadric_torus_chart(Q2)
    patch = ChartPatch(
        chart=chart, lo=[0.5, 0.1], hi=[5.5, 0.9], nodes=20, bump_axes=(0, 1)
    )

    def in_Z_curvature_field(Sb):
        from momentangle.submanifold_numerics import _curvature_batch

        Hr, Jr, _ = _curvature_batch(chart, Sb, spec)
        P = chart.value(np.atleast_2d(Sb))
        out = np.empty((Hr.shape[0], 2), complex)
        for i in range(Hr.shape[0]):
            grads = c2r(2.0 * Q2.gamma_float() * P[i][None, :])
            stacked = np.concatenate([Jr[i], grads.T], axis=1)
            Qm, _ = np.linalg.qr(stacked)
            h = Hr[i] - Qm @ (Qm.T @ Hr[i])
            out[i] = h[:2] + 1j * h[2:]
        return out

    dv, comp = patch_volume_derivative(patch, in_Z_curvature_field, spec=spec, field_on_params=True)
    assert abs(dv) < 1e-3
    assert abs(comp) < 1e-3


def test_hminimality_examples():
    Q2 = QuadricConfiguration.from_rows([(1, 1)], [1])
    r = 1 / np.sqrt(2)
    p = chart_N(Q2, [r, r], [0.0], [0.0])
    assert hminimality_residual(Q2, p, spec) < 1e-4

    # circle: curvature constant, codifferential vanishes
    Q1 = QuadricConfiguration.from_rows([(1,)], [1])
    pc = chart_N(Q1, [1.0], [], [0.2])
    assert hminimality_residual(Q1, pc, spec) < 1e-6

    numeric, oracle = ellipse_control(spec=spec)
    assert numeric > 1e-2
    assert abs(numeric - oracle) / oracle < 1e-3


def test_coarea_identity():
    Q2 = catalog_quadrics("one-quadric:2")
    up, fib = coarea_orbit_volume_check(Q2, np.array([1.0, 0.0]), [-0.45], [0.55], nodes=20, spec=spec)
    assert abs(up - fib) / up < 1e-4
    Q3 = catalog_quadrics("one-quadric:3")
    up, fib = coarea_orbit_volume_check(
        Q3, np.array([1.0, 0.0, 0.0]), [-0.45, -0.4], [0.55, 0.5], nodes=16, spec=spec
    )
    assert abs(up - fib) / up < 1e-3
    # degenerate zero-width patch
    up, fib = coarea_orbit_volume_check(Q2, np.array([1.0, 0.0]), [0.2], [0.2], nodes=8, spec=spec)
    assert up == 0.0 and fib == 0.0


def test_coarea_nontrivial_dual_covolume():
    from momentangle.exact_linalg import IntegerMatrix

    Q = QuadricConfiguration(IntegerMatrix([[2, 2]], cols=2), [2])
    base = np.array([1.0, 1.0]) / np.sqrt(2)
    up, fib = coarea_orbit_volume_check(Q, base, [-0.4], [0.5], nodes=16, spec=spec)
    assert abs(up - fib) / up < 1e-6


def test_patch_volume_double_cover():
    Q2 = QuadricConfiguration.from_rows([(1, 1)], [1])
    from momentangle.reduction_catalog import one_quadric_torus_chart

    chart = one_quadric_torus_chart(Q2)
    patch = ChartPatch(chart=chart, lo=[0.0, 0.0], hi=list(chart.periods), nodes=24)
    # the (theta, phi) box covers the spread torus twice: 2 * 2 pi^2
    assert abs(patch_volume(patch, spec) - 4 * np.pi**2) < 1e-8


def test_conformal_factor():
    from momentangle.submanifold_numerics import MetricSpec

    ms = MetricSpec(conformal_dim=2)
    assert ms.conformal_factor(4.0) == 4.0
    with pytest.raises(ValueError):
        DEFAULT_SPEC.conformal_factor(1.0)


def test_frame_spans_expected_directions():
    # balanced-point frame of the spread circle spans {(-1,1)/sqrt2, (i,i)/sqrt2}
    Q2 = QuadricConfiguration.from_rows([(1, 1)], [1])
    r = 1 / np.sqrt(2)
    p = chart_N(Q2, [r, r], [0.0], [0.0])
    fr = tangent_frame_N(Q2, p, spec)
    V = np.concatenate([fr.vectors.real, fr.vectors.imag], axis=1)  # (2, 4)
    for target in (np.array([-1.0, 1.0, 0.0, 0.0]) / np.sqrt(2),
                   np.array([0.0, 0.0, 1.0, 1.0]) / np.sqrt(2)):
        coeffs = V @ target
        assert abs(np.linalg.norm(coeffs) - 1.0) < 1e-10  # target lies in the span

    # sphere chart at a coordinate point contains the rotation direction
    Q3 = catalog_quadrics("one-quadric:3")
    p3 = chart_N(Q3, [1.0, 0.0, 0.0], [0.0, 0.0], [0.0])
    fr3 = tangent_frame_N(Q3, p3, spec)
    V3 = np.concatenate([fr3.vectors.real, fr3.vectors.imag], axis=1)
    rot = np.zeros(6)
    rot[3] = 1.0  # the direction i * e_1
    assert abs(np.linalg.norm(V3 @ rot) - 1.0) < 1e-10


def test_project_to_quadrics_real_mode():
    Q = catalog_quadrics("one-quadric:3")
    u = project_to_quadrics(Q, np.array([1.2, 0.1, -0.3]), mode="real")
    assert u.dtype.kind == "f"
    assert abs((u * u).sum() - 1.0) < 1e-12


def test_monte_carlo_patch_fallback():
    # boxes of dimension > 4 switch to seeded Monte Carlo nodes
    from momentangle.charts import FunctionChart

    chart = FunctionChart(lambda S: S[:, :3].astype(complex), dim=5, ambient_dim=3)
    patch = ChartPatch(chart=chart, lo=[0.0] * 5, hi=[1.0] * 5, nodes=4, mc_points=500)
    assert patch.S.shape == (500, 5)
    assert abs(patch.w.sum() - 1.0) < 1e-12
    patch2 = ChartPatch(chart=chart, lo=[0.0] * 5, hi=[1.0] * 5, nodes=4, mc_points=500)
    assert np.array_equal(patch.S, patch2.S)  # seeded, reproducible
