"""Composite verification procedures.

Each procedure runs one family of checks over a configured instance and
returns a ``VerificationReport``; the command-line driver and the test
suite both dispatch through these. All randomness is drawn from explicit
seeds, so reports are bit-reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

import numpy as np

from . import fd
from .charts import FunctionChart, TorusSpreadChart, c2r
from .polytope import PolytopePresentation, embed_point, is_delzant, is_simple
from .quadric_config import (
    QuadricConfiguration,
    boundedness_check,
    gale_dual,
    nondegeneracy_check,
)
from .reduction_catalog import (
    DoubleConfiguration,
    cp_chart_verify,
    ntilde_chart,
    ntilde_lagrangian_residual,
    one_quadric_torus_chart,
    stacked_tangent_horizontal_residual,
)
from .report import VerificationReport
from .submanifold_numerics import (
    DEFAULT_SPEC,
    stationarity_ratio,
    support_leak_check,
    ChartPatch,
    MetricSpec,
    chart_point,
    coarea_orbit_volume_check,
    frame_symplectic_residual,
    hamiltonian_field_batch,
    hminimality_residual,
    lagrangian_residual,
    minimality_residual_in_Z,
    noether_drift,
    patch_volume,
    patch_volume_derivative,
    sample_chart_points,
    tangent_frame_Z,
    InvarianceError,
)
from .torus_actions import freeness_check, orbit_volume

TWO_PI = 2.0 * np.pi

# residual tolerances used by the standard reports
TOL_LAGRANGIAN = 1e-8
TOL_MINIMAL = 1e-4
TOL_HMINIMAL = 1e-4
TOL_NOETHER = 1e-8
TOL_VO_SYMMETRY = 1e-12
TOL_COAREA_REL = 1e-3
TOL_VARIATION_REL = 1e-3
TOL_VARIATION_CIRCLE = 1e-4
TOL_STATIONARITY = 1e-3
CONTROL_BOUND = 0.1


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# exact reports


def gale_report(P: PolytopePresentation, seed: int = 0, samples: int = 20) -> VerificationReport:
    """Exact orthogonality of the dual and constancy of the embedded image."""
    rep = VerificationReport(seed=seed)
    Q = gale_dual(P)
    prod = Q.gamma.to_rational().matmul(P.normal_matrix().transpose())
    rep.add_bool("gale-orthogonality-exact", prod.is_zero())
    rng = _rng(seed)
    ok = True
    for _ in range(samples):
        x = [
            Fraction(int(rng.integers(-40, 41)), int(rng.integers(1, 17)))
            for _ in range(P.dim)
        ]
        y = embed_point(P, x)
        img = [
            sum(
                (Fraction(Q.gamma.entries[j][k]) * y[k] for k in range(P.num_facets)),
                Fraction(0),
            )
            for j in range(Q.num_quadrics)
        ]
        ok = ok and tuple(img) == Q.c
    rep.add_bool("gale-image-level-exact", ok)
    return rep


def polytope_report(P: PolytopePresentation) -> VerificationReport:
    rep = VerificationReport()
    simple = is_simple(P)
    rep.add_bool("simple", bool(simple), detail=str(simple.witness) if not simple else "")
    if simple:
        delz = is_delzant(P)
        rep.add_bool("delzant", bool(delz), detail=str(delz.witness) if not delz else "")
    return rep


def quadrics_core_report(Q: QuadricConfiguration) -> VerificationReport:
    rep = VerificationReport()
    rep.add_bool("bounded", boundedness_check(Q))
    nd = nondegeneracy_check(Q)
    rep.add_bool("nondegenerate-a", nd.cond_a)
    rep.add_bool("nondegenerate-b", nd.cond_b, detail=str(nd.witness_b) if not nd.cond_b else "")
    rep.add_bool("nondegenerate-c", nd.cond_c)
    free = freeness_check(Q)
    rep.add_bool("torus-free", bool(free), detail=str(free.witness) if not free else "")
    return rep


def delzant_freeness_report(P: PolytopePresentation) -> VerificationReport:
    rep = VerificationReport()
    rep.add_bool("delzant-equals-freeness", bool(is_delzant(P)) == bool(freeness_check(gale_dual(P))))
    return rep


# ---------------------------------------------------------------------------
# pointwise numeric reports


def point_residual_report(
    Q: QuadricConfiguration,
    samples: int = 100,
    seed: int = 0,
    spec: MetricSpec = DEFAULT_SPEC,
    with_minimal: bool = True,
) -> VerificationReport:
    """Lagrangian and in-quadric-set minimality residuals at random chart points."""
    rep = VerificationReport(seed=seed)
    rng = _rng(seed)
    pts = sample_chart_points(Q, samples, rng, spec)
    lag = max(lagrangian_residual(Q, p, spec) for p in pts)
    rep.add("lagrangian-residual", lag, TOL_LAGRANGIAN, samples=samples)
    ctrl = max(
        frame_symplectic_residual(tangent_frame_Z(Q, p.point, spec), spec) for p in pts[:5]
    )
    rep.add_lower_bound("lagrangian-negative-control", ctrl, CONTROL_BOUND)
    if with_minimal:
        mini = max(minimality_residual_in_Z(Q, p, spec) for p in pts)
        rep.add("minimality-in-Z-residual", mini, TOL_MINIMAL, samples=samples)
    return rep


def unequal_torus_control(spec: MetricSpec = DEFAULT_SPEC) -> float:
    """In-sphere mean-curvature norm of the unequal-radii product torus.

    The torus with radius ratio 0.9 : 1.1, rescaled onto the unit 3-sphere,
    is a torus-invariant product but not the balanced one, so it is far
    from minimal in the sphere.
    """
    Q = QuadricConfiguration.from_rows([(1, 1)], [1])
    rho = np.array([0.9, 1.1]) / np.sqrt(0.81 + 1.21)

    def fn(S):
        return rho * np.exp(1j * S)

    chart = FunctionChart(fn, dim=2, ambient_dim=2)
    p = chart_point(chart, np.array([0.4, 1.1]), Q=Q, spec=spec)
    return minimality_residual_in_Z(Q, p, spec)


def hminimality_report(
    Q: QuadricConfiguration,
    points: int = 20,
    seed: int = 0,
    spec: MetricSpec = DEFAULT_SPEC,
) -> VerificationReport:
    rep = VerificationReport(seed=seed)
    rng = _rng(seed)
    pts = sample_chart_points(Q, points, rng, spec)
    worst = max(hminimality_residual(Q, p, spec) for p in pts)
    rep.add("hminimality-residual", worst, TOL_HMINIMAL, samples=points)
    return rep


def ellipse_control(
    a: float = 1.0, b: float = 0.6, t: float = np.pi / 4, spec: MetricSpec = DEFAULT_SPEC
) -> tuple[float, float]:
    """Codifferential residual of an ellipse and its closed-form value.

    For a plane curve the 1-form contraction of the mean curvature has
    codifferential proportional to the arclength derivative of the
    curvature, so any noncircular ellipse is a sharp negative control.
    Returns (numeric residual, |omega_scale| * |dkappa/ds|).
    """

    def fn(S):
        return (a * np.cos(S[:, 0]) + 1j * b * np.sin(S[:, 0]))[:, None]

    chart = FunctionChart(fn, dim=1, ambient_dim=1)
    p = chart_point(chart, np.array([t]), spec=spec)
    numeric = hminimality_residual(None, p, spec)
    w = a * a * np.sin(t) ** 2 + b * b * np.cos(t) ** 2
    dkappa_dt = a * b * (-1.5) * (a * a - b * b) * np.sin(2 * t) / w**2.5
    ds_dt = np.sqrt(w)
    oracle = abs(spec.omega_scale) * abs(dkappa_dt / ds_dt)
    return numeric, oracle


def noether_report(
    Q: QuadricConfiguration, seed: int = 0, spec: MetricSpec = DEFAULT_SPEC
) -> VerificationReport:
    """Moment drift along invariant Hamiltonian fields; rejection of a non-invariant one."""
    rep = VerificationReport(seed=seed)
    rng = _rng(seed)
    z = sample_chart_points(Q, 1, rng, spec)[0].point

    fields: list[tuple[str, Callable]] = [
        ("sum-moduli", lambda zz: (np.abs(zz) ** 2).sum(axis=-1)),
        ("sum-moduli-squared", lambda zz: (np.abs(zz) ** 4).sum(axis=-1)),
        ("weighted-moduli", lambda zz: (np.arange(1.0, zz.shape[-1] + 1) * np.abs(zz) ** 2).sum(axis=-1)),
    ]
    worst = 0.0
    for name, f in fields:
        worst = max(worst, noether_drift(Q, f, z, spec, rng=_rng(seed + 1)))
    rep.add("noether-drift", worst, TOL_NOETHER, samples=len(fields))
    rejected = False
    try:
        noether_drift(Q, lambda zz: zz[..., 0].real, z, spec, rng=_rng(seed + 2))
    except InvarianceError:
        rejected = True
    rep.add_bool("noninvariant-rejected", rejected)
    return rep


def vo_symmetry_report(
    Q: QuadricConfiguration, samples: int = 100, seed: int = 0, spec: MetricSpec = DEFAULT_SPEC
) -> VerificationReport:
    """Orbit volume is invariant under coordinatewise conjugation."""
    rep = VerificationReport(seed=seed)
    rng = _rng(seed)
    pts = sample_chart_points(Q, samples, rng, spec)
    Z = np.stack([p.point for p in pts])
    diff = np.abs(np.asarray(orbit_volume(Q, Z)) - np.asarray(orbit_volume(Q, np.conj(Z))))
    rep.add("orbit-volume-conjugation", float(diff.max()), TOL_VO_SYMMETRY, samples=samples)
    return rep


def coarea_report(
    Q: QuadricConfiguration, seed: int = 0, spec: MetricSpec = DEFAULT_SPEC, nodes: int = 20
) -> VerificationReport:
    """Patch volume upstairs vs integral of the orbit volume over the base patch."""
    rep = VerificationReport(seed=seed)
    rng = _rng(seed)
    base = sample_chart_points(Q, 1, rng, spec)[0].base
    nv = Q.ambient_dim - Q.num_quadrics
    up, fib = coarea_orbit_volume_check(Q, base, [-0.45] * nv, [0.55] * nv, nodes=nodes, spec=spec)
    rel = abs(up - fib) / max(abs(up), abs(fib), 1e-12)
    rep.add("coarea-relative-mismatch", rel, TOL_COAREA_REL)
    return rep


# ---------------------------------------------------------------------------
# variational reports


def circle_variation_values(spec: MetricSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """(dVol/dt, -integral <H, X>) for the unit circle under the radial field."""
    Q = QuadricConfiguration.from_rows([(1,)], [1])
    chart = TorusSpreadChart(Q, [1.0], newton_tol=spec.newton_tol)
    patch = ChartPatch(chart=chart, lo=[0.0], hi=[1.0], nodes=32)
    dv, comp = patch_volume_derivative(patch, lambda z: z / np.abs(z), spec=spec)
    return dv, comp


def _random_matrix_field(m: int, rng: np.random.Generator) -> Callable:
    A = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    B = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    c0 = rng.standard_normal(m) + 1j * rng.standard_normal(m)

    def X(z):
        return z @ A.T + np.conj(z) @ B.T + c0

    return X


def first_variation_report(
    Q: QuadricConfiguration, seed: int = 0, spec: MetricSpec = DEFAULT_SPEC, n_fields: int = 5
) -> VerificationReport:
    """Volume derivative against the curvature quadrature for bump-localized fields.

    Supported on the circle (ambient dim 1: the sharp radial-field values)
    and on the spread torus of the one-quadric system in C^2 (random
    matrix-valued fields under a two-axis bump).
    """
    rep = VerificationReport(seed=seed)
    if Q.num_quadrics != 1:
        raise ValueError("first-variation report runs on one-quadric configurations")
    if Q.ambient_dim == 1:
        dv, comp = circle_variation_values(spec)
        rep.add("circle-dvol", abs(dv - TWO_PI), TOL_VARIATION_CIRCLE)
        rep.add("circle-curvature-integral", abs(comp - TWO_PI), TOL_VARIATION_CIRCLE)
        rep.add("circle-consistency", abs(dv - comp), TOL_VARIATION_CIRCLE)
        return rep
    if Q.ambient_dim != 2:
        raise ValueError("first-variation report implemented for ambient dimension 1 or 2")
    chart = one_quadric_torus_chart(Q)
    lo = [0.3, 0.05]
    hi = [5.9, 0.95]
    patch = ChartPatch(chart=chart, lo=lo, hi=hi, nodes=24, bump_axes=(0, 1))
    rng = _rng(seed)
    for i in range(n_fields):
        X = _random_matrix_field(Q.ambient_dim, rng)
        dv, comp = patch_volume_derivative(patch, X, spec=spec)
        rel = abs(dv - comp) / (abs(dv) + abs(comp) + 1e-9)
        rep.add(f"first-variation-field-{i}", rel, TOL_VARIATION_REL)
    return rep


def _poly_scalar(m: int, rng: np.random.Generator) -> Callable:
    """Random real polynomial of degree <= 2 in the real coordinates (batched)."""
    lin = rng.standard_normal(2 * m)
    quad = rng.standard_normal((2 * m, 2 * m))
    quad = 0.5 * (quad + quad.T)

    def f(z):
        xr = c2r(np.atleast_2d(np.asarray(z, dtype=complex)))
        return xr @ lin + np.einsum("ni,ij,nj->n", xr, quad, xr)

    return f


def _normal_baseline_field(chart, rng: np.random.Generator, scale: float, spec: MetricSpec) -> Callable:
    """Pointwise-normal field built from the chart frame (Lagrangian: i * tangent)."""
    d = chart.dim
    coefs = rng.standard_normal(d) + 0.3 * rng.standard_normal(d)

    def Y(Sb):
        J = chart.jacobian(np.atleast_2d(Sb), spec.step_chart, spec.fd_order)
        a = np.broadcast_to(coefs, (J.shape[0], d))
        field = 1j * np.einsum("nmd,nd->nm", J, a)
        norms = np.abs(field).max()
        return field * (scale / max(norms, 1e-12))

    return Y


def hamiltonian_stationarity_report(
    Q: QuadricConfiguration,
    seed: int = 0,
    spec: MetricSpec = DEFAULT_SPEC,
    n_fields: int = 5,
) -> VerificationReport:
    """Volume stationarity of the spread Lagrangian under Hamiltonian fields.

    For the closed surface (one quadric in C^2) global polynomial
    Hamiltonians act on a full covering chart; in C^3, where the real locus
    has no global chart, the Hamiltonians are localized by an ambient cutoff
    so the variation vanishes outside one chart patch. Each ratio divides
    |dVol/dt| by a genuinely volume-changing scale (see
    ``stationarity_ratio``).
    """
    rep = VerificationReport(seed=seed)
    rng = _rng(seed)
    if Q.num_quadrics != 1 or Q.ambient_dim not in (2, 3):
        raise ValueError("stationarity report implemented for one quadric in C^2 or C^3")
    if Q.ambient_dim == 2:
        chart = one_quadric_torus_chart(Q)
        patch = ChartPatch(chart=chart, lo=[0.0, 0.0], hi=list(chart.periods), nodes=24)
        patch_base = patch
        localize = None
    else:
        base = sample_chart_points(Q, 1, rng, spec)[0].base
        chart = TorusSpreadChart(Q, base, newton_tol=spec.newton_tol)
        lo = [-0.65, -0.65, -0.15]
        hi = [0.65, 0.65, 0.15]
        # the ambient cutoff is narrow in the phase direction: resolve it harder
        patch = ChartPatch(chart=chart, lo=lo, hi=hi, nodes=[20, 20, 36])
        patch_base = ChartPatch(chart=chart, lo=lo, hi=hi, nodes=[20, 20, 36], bump_axes=(0, 1, 2))
        z0 = chart.value(np.zeros((1, 3)))[0]
        rho = 0.4

        def localize(poly):
            def f(z):
                z = np.atleast_2d(np.asarray(z, dtype=complex))
                dist2 = np.sum(np.abs(z - z0) ** 2, axis=-1) / rho**2
                from .quadrature import bump_poly

                return bump_poly(np.sqrt(dist2)) * poly(z)

            return f

    for i in range(n_fields):
        poly = _poly_scalar(Q.ambient_dim, rng)
        f = localize(poly) if localize is not None else poly
        Xf = lambda z: hamiltonian_field_batch(f, z, spec)
        if localize is not None:
            support_leak_check(patch, Xf(chart.value(patch.S)))
        Xvals = Xf(chart.value(patch.S))
        xmax = float(np.abs(Xvals).max())
        Y = _normal_baseline_field(chart, rng, xmax, spec)
        ratio = stationarity_ratio(patch, patch_base, chart, Xf, Y, spec)
        rep.add(f"hamiltonian-stationarity-{i}", ratio, TOL_STATIONARITY)
    return rep


# ---------------------------------------------------------------------------
# double-configuration reports


def ntilde_report(
    D: DoubleConfiguration, samples: int = 100, seed: int = 0, spec: MetricSpec = DEFAULT_SPEC
) -> VerificationReport:
    """Lagrangian residual of the reduced submanifold, tested through the lift."""
    rep = VerificationReport(seed=seed)
    rng = _rng(seed)
    base = _double_base_point(D)
    nv = D.ambient_dim - D.stacked.num_quadrics
    k_delta = D.delta_cfg.num_quadrics
    worst = 0.0
    for _ in range(samples):
        v = 0.35 * rng.uniform(-1.0, 1.0, nv)
        ph = rng.uniform(0.0, 1.0, k_delta)
        p = ntilde_chart(D, base, v, ph, spec)
        worst = max(worst, ntilde_lagrangian_residual(D, p, spec))
    rep.add("ntilde-lagrangian-residual", worst, TOL_LAGRANGIAN, samples=samples)
    p0 = ntilde_chart(D, base, np.zeros(nv), 0.17 * np.ones(k_delta), spec)
    ctrl = stacked_tangent_horizontal_residual(D, p0.point, spec)
    rep.add_lower_bound("ntilde-negative-control", ctrl, CONTROL_BOUND)
    return rep


def _double_base_point(D: DoubleConfiguration) -> np.ndarray:
    from .submanifold_numerics import real_base_point

    return real_base_point(D.stacked)


# the projective-chart verification lives with the catalog machinery
cp_chart_report = cp_chart_verify
