"""Numerical differential geometry on quadric intersections and their
torus-spread Lagrangians: frames, symplectic pairings, mean curvature,
variational derivatives, codifferential residuals, conserved-quantity drift.

Conventions live in one place (``MetricSpec``). The symplectic form is
omega(u, v) = omega_scale * sum_k (x_k(u) y_k(v) - y_k(u) x_k(v)); the
default scale -1/pi makes z -> (|z_k|^2) exactly the moment map for torus
generators parametrized as exp(2 pi i <gamma_k, phi>). Every verdict
computed here is invariant under that scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import fd, lp, quadrature
from .charts import (
    Chart,
    NonConvergenceError,
    TorusSpreadChart,
    c2r,
    project_complex,
    project_real,
    r2c,
)
from .quadric_config import QuadricConfiguration, membership_residual, moment_map
from .torus_actions import orbit_volume, torus_point

TWO_PI = 2.0 * np.pi


class InvarianceError(ValueError):
    """A function claimed invariant under the torus action is not."""


@dataclass
class MetricSpec:
    """Symplectic/metric conventions, steps and the tolerance bundle."""

    omega_scale: float = -1.0 / np.pi
    conformal_dim: int | None = None  # base dimension in the conformal factor Vo^(2/n)
    tol_membership: float = 1e-10
    tol_frame: float = 1e-10
    tol_curvature: float = 1e-6
    tol_variation: float = 1e-3
    step: float = 1e-4  # t-derivatives of deformed volumes
    step_chart: float = 1e-3  # chart jacobians / hessians
    step_divergence: float = 3e-3  # outer derivative in the codifferential
    step_gradient: float = 3e-3  # gradients of ambient scalar functions
    fd_order: int = 4
    newton_tol: float = 1e-10
    newton_max_iter: int = 60

    def conformal_factor(self, vo: float) -> float:
        if not self.conformal_dim:
            raise ValueError("conformal_dim is not set")
        return float(vo) ** (2.0 / self.conformal_dim)


DEFAULT_SPEC = MetricSpec()


@dataclass
class ChartPoint:
    """A point of a constructed submanifold with the chart that produced it."""

    chart: Chart
    params: np.ndarray
    point: np.ndarray
    base: np.ndarray | None = None


@dataclass
class TangentFrame:
    vectors: np.ndarray  # (dim, m) complex, orthonormal as real 2m-vectors
    jacobian: np.ndarray  # (m, dim) complex chart jacobian


# ---------------------------------------------------------------------------
# symplectic pairing helpers


def omega_matrix(m: int, spec: MetricSpec = DEFAULT_SPEC) -> np.ndarray:
    """Matrix of the symplectic form on R^{2m} in the (x..., y...) stacking."""
    Om = np.zeros((2 * m, 2 * m))
    Om[:m, m:] = np.eye(m)
    Om[m:, :m] = -np.eye(m)
    return spec.omega_scale * Om


def omega_pair(u, v, spec: MetricSpec = DEFAULT_SPEC) -> float | np.ndarray:
    """omega(u, v) for complex vectors; equals omega_scale * Im <u, v>_Hermitian."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    return spec.omega_scale * np.imag(np.sum(np.conj(u) * v, axis=-1))


def frame_symplectic_residual(vectors: np.ndarray, spec: MetricSpec = DEFAULT_SPEC) -> float:
    """max |omega(e_i, e_j)| over all pairs from a set of complex vectors."""
    V = np.asarray(vectors, dtype=complex)
    gram = V.conj() @ V.T
    return float(np.abs(spec.omega_scale * np.imag(gram)).max())


# ---------------------------------------------------------------------------
# chart points and frames


def chart_point(
    chart: Chart,
    params: Sequence[float],
    Q: QuadricConfiguration | None = None,
    spec: MetricSpec = DEFAULT_SPEC,
) -> ChartPoint:
    params = np.asarray(params, dtype=float)
    z = chart.value(params[None, :])[0]
    if Q is not None and chart.ambient == "complex":
        res = membership_residual(Q, z)
        if res > spec.tol_membership:
            raise ValueError(f"chart point violates the quadric system: residual {res:.3e}")
    return ChartPoint(chart=chart, params=params, point=z, base=getattr(chart, "u0", None))


def chart_N(
    Q: QuadricConfiguration,
    u0,
    v: Sequence[float],
    phi: Sequence[float],
    spec: MetricSpec = DEFAULT_SPEC,
) -> ChartPoint:
    """Point of the torus-spread Lagrangian over base u0 at parameters (v, phi)."""
    chart = TorusSpreadChart(
        Q, u0, newton_tol=spec.newton_tol, fd_step=spec.step_chart, fd_order=spec.fd_order
    )
    params = np.concatenate([np.asarray(v, dtype=float), np.asarray(phi, dtype=float)])
    return chart_point(chart, params, Q=Q, spec=spec)


def _real_jacobian(chart: Chart, S: np.ndarray, spec: MetricSpec) -> np.ndarray:
    J = chart.jacobian(np.atleast_2d(S), spec.step_chart, spec.fd_order)
    if chart.ambient == "complex":
        return np.concatenate([J.real, J.imag], axis=-2)
    return np.asarray(J, dtype=float)


def tangent_frame_N(
    Q: QuadricConfiguration | None, p: ChartPoint, spec: MetricSpec = DEFAULT_SPEC
) -> TangentFrame:
    """Orthonormal tangent frame spanning the chart jacobian's column space."""
    J = p.chart.jacobian(p.params[None, :], spec.step_chart, spec.fd_order)[0]  # (m, d)
    Jr = np.concatenate([J.real, J.imag], axis=0)  # (2m, d)
    Qm, R = np.linalg.qr(Jr)
    diag = np.abs(np.diag(R))
    if diag.min() < 1e-8 * max(1.0, diag.max()):
        raise NonConvergenceError("chart jacobian is rank deficient; chart degenerate here")
    vectors = r2c(Qm.T)
    if Q is not None:
        # frame vectors must annihilate the quadric differentials
        grads = 2.0 * Q.gamma_float() * p.point[None, :]  # complex rows <-> real gradients
        pair = np.real(vectors @ np.conj(grads).T)
        if np.abs(pair).max() > 1e-6:
            raise NonConvergenceError("frame fails to annihilate the constraint differentials")
    return TangentFrame(vectors=vectors, jacobian=J)


def tangent_frame_Z(
    Q: QuadricConfiguration, z, spec: MetricSpec = DEFAULT_SPEC
) -> np.ndarray:
    """Orthonormal frame of the tangent space of the quadric intersection at z."""
    z = np.asarray(z, dtype=complex)
    m, k = Q.ambient_dim, Q.num_quadrics
    grads = c2r(2.0 * Q.gamma_float() * z[None, :])  # (k, 2m)
    full, _ = np.linalg.qr(grads.T, mode="complete")
    return r2c(full[:, k:].T)


def lagrangian_residual(
    Q: QuadricConfiguration | None, p: ChartPoint, spec: MetricSpec = DEFAULT_SPEC
) -> float:
    """max |omega(e_i, e_j)| over an orthonormal tangent frame at the point."""
    frame = tangent_frame_N(Q, p, spec)
    return frame_symplectic_residual(frame.vectors, spec)


# ---------------------------------------------------------------------------
# curvature


def _curvature_batch(chart: Chart, S: np.ndarray, spec: MetricSpec):
    """Mean curvature trace data for a batch of chart parameters.

    Returns (H_real (N, D), Jr (N, D, d), g (N, d, d)) with D the real
    ambient dimension. H = trace_g of the normal projection of the chart's
    second derivatives, the unnormalized mean curvature vector.
    """
    S = np.atleast_2d(S)
    J = chart.jacobian(S, spec.step_chart, spec.fd_order)
    Hess = chart.hessian(S, spec.step_chart, spec.fd_order)
    if chart.ambient == "complex":
        Jr = np.concatenate([J.real, J.imag], axis=-2)
        Hr = np.concatenate([Hess.real, Hess.imag], axis=-3)
    else:
        Jr = np.asarray(J, dtype=float)
        Hr = np.asarray(Hess, dtype=float)
    g = np.einsum("nia,nib->nab", Jr, Jr)
    ginv = np.linalg.inv(g)
    tr = np.einsum("nab,niab->ni", ginv, Hr)
    Qm, _ = np.linalg.qr(Jr)
    tang = np.einsum("nia,na->ni", Qm, np.einsum("nia,ni->na", Qm, tr))
    return tr - tang, Jr, g


def mean_curvature_ambient(
    Q: QuadricConfiguration | None, p: ChartPoint, spec: MetricSpec = DEFAULT_SPEC
) -> np.ndarray:
    """Unnormalized mean curvature vector of the chart's submanifold in flat space."""
    H, Jr, _ = _curvature_batch(p.chart, p.params[None, :], spec)
    h = H[0]
    norm = np.linalg.norm(h)
    if norm > 0:
        resid = np.abs(Jr[0].T @ h).max()
        if resid > spec.tol_curvature * max(1.0, norm):
            raise NonConvergenceError(
                f"mean curvature not numerically normal to the submanifold ({resid:.3e})"
            )
    return r2c(h)


def minimality_residual_in_Z(
    Q: QuadricConfiguration, p: ChartPoint, spec: MetricSpec = DEFAULT_SPEC
) -> float:
    """Norm of the mean curvature component tangent to the quadric set.

    The second fundamental form of the submanifold inside the quadric
    intersection is the intersection-tangential part of the flat one, so
    this is |H| of the embedding into the quadric set.
    """
    H, Jr, _ = _curvature_batch(p.chart, p.params[None, :], spec)
    h = H[0]
    z = p.point
    grads = c2r(2.0 * Q.gamma_float() * z[None, :])  # (k, 2m), span of the normals to Z
    stacked = np.concatenate([Jr[0], grads.T], axis=1)
    Qm, _ = np.linalg.qr(stacked)
    return float(np.linalg.norm(h - Qm @ (Qm.T @ h)))


# ---------------------------------------------------------------------------
# Hamiltonian fields


def hamiltonian_field(
    f: Callable[[np.ndarray], np.ndarray],
    z,
    spec: MetricSpec = DEFAULT_SPEC,
    grad: Callable | None = None,
    check: bool = True,
) -> np.ndarray:
    """The vector field X with i_X omega = df at z (flat ambient space).

    ``f`` maps a batch (N, m) of complex points to real values. ``grad``,
    if given, must return the real gradient packaged as a complex vector
    (d/dx + i d/dy). The solution is spot-checked against a direct
    directional derivative of f unless ``check`` is disabled.
    """
    z = np.asarray(z, dtype=complex)
    m = z.shape[-1]
    if grad is not None:
        df = c2r(np.asarray(grad(z), dtype=complex))
    else:
        df = fd.gradient(lambda xr: np.asarray(f(r2c(xr))), c2r(z), spec.step_gradient, spec.fd_order)
    Om = omega_matrix(m, spec)
    X = r2c(np.linalg.solve(-Om, df))
    if check:
        rng = np.random.default_rng(1729)
        scale = float(np.abs(df).max()) + 1e-12
        for _ in range(3):
            v = r2c(rng.standard_normal(2 * m))
            v = v / np.linalg.norm(c2r(v))
            step = spec.step_gradient
            line = lambda t: np.asarray(f(z[None, :] + np.reshape(t, (-1, 1)) * v))
            offs, wts = fd._D1[spec.fd_order]
            dfi = sum(w * line(o * step) for o, w in zip(offs, wts))[0] / step
            if abs(omega_pair(X, v, spec) - dfi) > 1e-6 * max(1.0, scale):
                raise NonConvergenceError("hamiltonian field failed the pairing spot-check")
    return X


def hamiltonian_field_batch(
    f: Callable[[np.ndarray], np.ndarray], Z, spec: MetricSpec = DEFAULT_SPEC
) -> np.ndarray:
    """Vectorized ``hamiltonian_field`` over a batch of points (no spot-check)."""
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    m = Z.shape[-1]
    df = fd.gradient(lambda xr: np.asarray(f(r2c(xr))), c2r(Z), spec.step_gradient, spec.fd_order)
    Om = omega_matrix(m, spec)
    return r2c(np.linalg.solve(-Om, df.T).T)


def hamiltonian_pairing_residual(
    f, z, X, spec: MetricSpec = DEFAULT_SPEC, probes: int = 8, seed: int = 99
) -> float:
    """max over random directions |omega(X, v) - direction derivative of f|."""
    z = np.asarray(z, dtype=complex)
    m = z.shape[-1]
    rng = np.random.default_rng(seed)
    worst = 0.0
    offs, wts = fd._D1[spec.fd_order]
    for _ in range(probes):
        v = r2c(rng.standard_normal(2 * m))
        v = v / np.linalg.norm(c2r(v))
        line = lambda t: np.asarray(f(z[None, :] + np.reshape(t, (-1, 1)) * v))
        dfi = sum(w * line(o * spec.step_gradient) for o, w in zip(offs, wts))[0] / spec.step_gradient
        worst = max(worst, abs(float(omega_pair(X, v, spec)) - float(dfi)))
    return worst


def noether_drift(
    Q: QuadricConfiguration,
    f: Callable[[np.ndarray], np.ndarray],
    p: ChartPoint | np.ndarray,
    spec: MetricSpec = DEFAULT_SPEC,
    rng: np.random.Generator | None = None,
    grad: Callable | None = None,
) -> float:
    """Drift of the quadric moment values along the Hamiltonian field of f.

    ``f`` must be invariant under the configuration's torus; invariance is
    spot-checked at random torus elements and an ``InvarianceError`` is
    raised on violation.
    """
    z = np.asarray(p.point if isinstance(p, ChartPoint) else p, dtype=complex)
    rng = np.random.default_rng(7) if rng is None else rng
    f0 = float(np.asarray(f(z[None, :]))[0])
    for _ in range(8):
        phases = torus_point(Q, rng.uniform(0.0, 1.0, Q.num_quadrics))
        fv = float(np.asarray(f((phases * z)[None, :]))[0])
        if abs(fv - f0) > 1e-8 * (1.0 + abs(f0)):
            raise InvarianceError("function is not invariant under the configuration torus")
    X = hamiltonian_field(f, z, spec, grad=grad, check=False)
    h = 1e-3
    mu_plus = moment_map(Q, z + h * X)
    mu_minus = moment_map(Q, z - h * X)
    return float(np.abs((mu_plus - mu_minus) / (2.0 * h)).max())


# ---------------------------------------------------------------------------
# patches and variations


@dataclass
class ChartPatch:
    """Quadrature grid on a chart box, with optional compact bump weights.

    ``bump_axes`` lists the parameter axes along which the deformation must
    vanish at the boundary (periodic/full axes carry no bump). For real
    ambient charts an ``ambient_metric`` callable gives the metric matrix
    field; the flat metric is used otherwise. Boxes of dimension > 4 fall
    back to seeded Monte Carlo.
    """

    chart: Chart
    lo: np.ndarray
    hi: np.ndarray
    nodes: int | Sequence[int] = 16
    bump_axes: tuple[int, ...] = ()
    ambient_metric: Callable[[np.ndarray], np.ndarray] | None = None
    mc_points: int = 20000
    mc_seed: int = 0
    S: np.ndarray = field(init=False)
    w: np.ndarray = field(init=False)

    def __post_init__(self):
        self.lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        self.hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if self.lo.size != self.chart.dim:
            raise ValueError("box dimension disagrees with the chart")
        if self.chart.dim > 4:
            self.S, self.w = quadrature.monte_carlo_grid(
                self.lo, self.hi, self.mc_points, np.random.default_rng(self.mc_seed)
            )
        else:
            self.S, self.w = quadrature.tensor_grid(self.lo, self.hi, self.nodes)

    def bump_at(self, S: np.ndarray) -> np.ndarray:
        if not self.bump_axes:
            return np.ones(np.atleast_2d(S).shape[0])
        return quadrature.box_bump(S, self.lo, self.hi, self.bump_axes)


def _ambient_real(chart: Chart, vals: np.ndarray) -> np.ndarray:
    return c2r(vals) if chart.ambient == "complex" else np.asarray(vals, dtype=float)


def patch_volume(patch: ChartPatch, spec: MetricSpec = DEFAULT_SPEC) -> float:
    Jr = _real_jacobian(patch.chart, patch.S, spec)
    if patch.ambient_metric is None:
        g = np.einsum("nia,nib->nab", Jr, Jr)
    else:
        G = patch.ambient_metric(patch.chart.value(patch.S))
        g = np.einsum("nia,nij,njb->nab", Jr, G, Jr)
    return float(np.sum(patch.w * np.sqrt(np.linalg.det(g))))


def patch_volume_derivative(
    patch: ChartPatch,
    X: Callable[[np.ndarray], np.ndarray],
    t_step: float | None = None,
    spec: MetricSpec = DEFAULT_SPEC,
    field_on_params: bool = False,
) -> tuple[float, float | None]:
    """d/dt at t=0 of the patch volume under z -> z + t * bump * X(z).

    Returns the central-difference derivative together with the companion
    quadrature of -<H, X> * bump over the patch (the first-variation
    integrand); the companion is None for metric (non-flat) ambients where
    the mean curvature is out of scope.

    With ``field_on_params`` the field is sampled as X(chart parameters)
    instead of X(ambient point); that admits variation fields built from the
    chart frame (e.g. pointwise-normal baselines).

    The variation is free: deformed points are not re-projected onto the
    quadric set.
    """
    h = spec.step if t_step is None else t_step
    chart = patch.chart

    def field_at(Sb, P):
        return np.asarray(X(Sb) if field_on_params else X(P))

    def deformed(t):
        def fn(Sb):
            P = chart.value(Sb)
            bump = patch.bump_at(Sb)
            shape = bump.reshape(-1, *([1] * (P.ndim - 1)))
            return _ambient_real(chart, P + t * shape * field_at(Sb, P))

        return fn

    def vol(t):
        f = deformed(t)
        J = fd.jacobian(f, patch.S, spec.step_chart, spec.fd_order)
        if patch.ambient_metric is None:
            g = np.einsum("nia,nib->nab", J, J)
        else:
            G = patch.ambient_metric(f(patch.S))
            g = np.einsum("nia,nij,njb->nab", J, G, J)
        return float(np.sum(patch.w * np.sqrt(np.linalg.det(g))))

    dvol = (vol(h) - vol(-h)) / (2.0 * h)

    companion = None
    if patch.ambient_metric is None:
        Hr, Jr, g = _curvature_batch(chart, patch.S, spec)
        P0 = chart.value(patch.S)
        Xr = _ambient_real(chart, field_at(patch.S, P0))
        elem = np.sqrt(np.linalg.det(g))
        companion = -float(
            np.sum(patch.w * patch.bump_at(patch.S) * np.einsum("ni,ni->n", Hr, Xr) * elem)
        )
    return dvol, companion


def support_leak_check(patch: ChartPatch, Xvals: np.ndarray, margin: float = 0.08) -> None:
    """A localized field must vanish on the outermost shell of the patch box."""
    span = patch.hi - patch.lo
    near = np.zeros(patch.S.shape[0], dtype=bool)
    for a in range(patch.S.shape[1]):
        near |= patch.S[:, a] < patch.lo[a] + margin * span[a]
        near |= patch.S[:, a] > patch.hi[a] - margin * span[a]
    xmax = float(np.abs(Xvals).max())
    leak = float(np.abs(Xvals[near]).max()) if near.any() else 0.0
    if leak > 1e-8 * max(xmax, 1e-12):
        raise RuntimeError("localized field leaks outside the chart patch")


def stationarity_ratio(
    patch: ChartPatch,
    patch_bumped: ChartPatch,
    chart,
    Xf: Callable,
    Y: Callable,
    spec: MetricSpec,
) -> float:
    """|dVol/dt| of a candidate field, normalized to a volume-changing scale.

    The denominator is the larger of the same derivative under a
    pointwise-normal comparator field of equal magnitude and the
    dimensional scale max|X| * vol(patch) (a unit-curvature submanifold
    would change volume at that rate). The second term keeps the ratio
    meaningful where the submanifold happens to be minimal, so every
    variation, including the comparator, is stationary.
    """
    Xvals = np.asarray(Xf(chart.value(patch.S)))
    xmax = float(np.abs(Xvals).max())
    vol0 = patch_volume(patch, spec)
    dv_h, _ = patch_volume_derivative(patch, Xf, spec=spec)
    dv_b, _ = patch_volume_derivative(patch_bumped, Y, spec=spec, field_on_params=True)
    denom = max(abs(dv_b), xmax * vol0)
    return abs(dv_h) / denom


def hminimality_residual(
    Q: QuadricConfiguration | None, p: ChartPoint, spec: MetricSpec = DEFAULT_SPEC
) -> float:
    """|delta(i_H omega)| at the point, computed in chart coordinates.

    The 1-form alpha = i_H omega is restricted to the submanifold, sharped
    with the induced metric, and its codifferential is the negative
    divergence -(1/sqrt g) d_a (sqrt g W^a), evaluated by central
    differences of the chart quantities.
    """
    chart = p.chart
    m = chart.ambient_dim
    Om = omega_matrix(m, spec)

    def sqrtg_W(Sb):
        Hr, Jr, g = _curvature_batch(chart, Sb, spec)
        alpha = np.einsum("ni,ij,nja->na", Hr, Om, Jr)
        W = np.linalg.solve(g, alpha[..., None])[..., 0]
        return np.sqrt(np.linalg.det(g))[:, None] * W

    Jout = fd.jacobian(sqrtg_W, p.params[None, :], spec.step_divergence, spec.fd_order)[0]
    div = float(np.trace(Jout))
    _, _, g0 = _curvature_batch(chart, p.params[None, :], spec)
    sqrtg0 = float(np.sqrt(np.linalg.det(g0[0])))
    return abs(div / sqrtg0)


# ---------------------------------------------------------------------------
# co-area

def coarea_orbit_volume_check(
    Q: QuadricConfiguration,
    base,
    v_lo,
    v_hi,
    nodes: int = 20,
    spec: MetricSpec = DEFAULT_SPEC,
) -> tuple[float, float]:
    """Volume of a chart patch of the spread submanifold vs the fiber integral.

    Upstairs: Riemannian volume of the chart box (v-box) x (one fundamental
    domain of the phase torus, reached by running the unit phi-box through a
    dual-lattice basis so each orbit is covered exactly once).
    Downstairs: integral of the orbit-volume function over the same v-box of
    the real locus. Both sides run over the same covering chart in v, so the
    deck-group multiplicity there cancels and the two numbers agree on the
    nose.
    """
    from .torus_actions import torus_subgroup

    T = torus_subgroup(Q)
    dual = np.array(
        [[float(x) for x in row] for row in T.dual_basis.entries], dtype=float
    ).reshape(T.dim, T.dim)
    chart = TorusSpreadChart(
        Q,
        base,
        phase_rows=dual @ Q.gamma_float(),
        newton_tol=spec.newton_tol,
        fd_step=spec.step_chart,
        fd_order=spec.fd_order,
    )
    k = Q.num_quadrics
    v_lo = np.atleast_1d(np.asarray(v_lo, dtype=float))
    v_hi = np.atleast_1d(np.asarray(v_hi, dtype=float))
    lo = np.concatenate([v_lo, np.zeros(k)])
    hi = np.concatenate([v_hi, np.ones(k)])
    patch = ChartPatch(chart=chart, lo=lo, hi=hi, nodes=nodes)
    upstairs = patch_volume(patch, spec)

    Sv, wv = quadrature.tensor_grid(v_lo, v_hi, nodes)
    U = chart.u_map(Sv)
    Ju = fd.jacobian(chart.u_map, Sv, spec.step_chart, spec.fd_order)
    gbase = np.einsum("nia,nib->nab", Ju, Ju)
    elem = np.sqrt(np.linalg.det(gbase))
    vo = orbit_volume(Q, U.astype(complex))
    fiber_integral = float(np.sum(wv * np.asarray(vo) * elem))
    return upstairs, fiber_integral


# ---------------------------------------------------------------------------
# sampling


def real_base_point(Q: QuadricConfiguration) -> np.ndarray:
    """A strictly positive point of the real quadric locus, from an exact LP."""
    t = lp.positive_combination(Q.gamma.columns(), Q.c)
    if t is None:
        raise ValueError("no strictly positive solution; configuration has empty interior")
    return np.sqrt(np.array([float(x) for x in t]))


def sample_real_points(
    Q: QuadricConfiguration,
    count: int,
    rng: np.random.Generator,
    spec: MetricSpec = DEFAULT_SPEC,
    walk_steps: int = 3,
    walk_size: float = 0.3,
) -> np.ndarray:
    """Seeded random walk with Newton retraction over the real quadric locus."""
    u = np.tile(real_base_point(Q), (count, 1))
    for _ in range(walk_steps):
        u = project_real(Q, u + walk_size * rng.standard_normal(u.shape), tol=spec.newton_tol)
    return u


def sample_chart_points(
    Q: QuadricConfiguration,
    count: int,
    rng: np.random.Generator,
    spec: MetricSpec = DEFAULT_SPEC,
    v_radius: float = 0.15,
) -> list[ChartPoint]:
    """Random chart points: random base on the real locus, random (v, phi)."""
    bases = sample_real_points(Q, count, rng, spec)
    out = []
    for i in range(count):
        chart = TorusSpreadChart(
            Q, bases[i], newton_tol=spec.newton_tol, fd_step=spec.step_chart, fd_order=spec.fd_order
        )
        v = v_radius * rng.uniform(-1.0, 1.0, chart.nv)
        phi = rng.uniform(0.0, 1.0, chart.nphi)
        out.append(chart_point(chart, np.concatenate([v, phi]), Q=Q, spec=spec))
    return out


def project_to_quadrics(
    Q: QuadricConfiguration, point, mode: str | None = None, spec: MetricSpec = DEFAULT_SPEC
) -> np.ndarray:
    """Newton retraction of an ambient point onto the quadric set (either mode)."""
    mode = Q.mode if mode is None else mode
    if mode == "real":
        return project_real(Q, np.asarray(point, dtype=float), tol=spec.tol_membership,
                            max_iter=spec.newton_max_iter)
    return project_complex(Q, np.asarray(point, dtype=complex), tol=spec.tol_membership,
                           max_iter=spec.newton_max_iter)
