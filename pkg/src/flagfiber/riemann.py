"""Riemannian structure on the equal-rank bundle component: vertical and
horizontal projectors, quotient and ambient metrics, exponential and
logarithm maps, covariant derivative and sectional curvature."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import bundle as bd
from . import operator_core as oc
from .bundle import BundlePoint, TangentVector
from .operator_core import DEFAULT_TOL, InvariantViolation, inner, rank_one

__all__ = [
    "NoConvergence",
    "OutOfRadius",
    "MetricKind",
    "HorizontalVector",
    "vertical_project_Q",
    "horizontal_project",
    "horizontal_lift_kappa",
    "orth_project_Pi",
    "orth_project_closed",
    "pi_matrix",
    "tangent_projection_matrix",
    "pair_to_vec",
    "vec_to_pair",
    "metric_norm",
    "metric_norm_blocks",
    "exp_map",
    "geodesic",
    "log_map",
    "dexp_F",
    "g_func",
    "find_r0",
    "contraction_gap",
    "covariant_derivative",
    "sectional_curvature",
    "ambient_geodesic_residual",
    "random_horizontal",
]

MetricKind = Literal["quotient", "ambient"]


class NoConvergence(RuntimeError):
    """The shooting solver exhausted its budget."""


class OutOfRadius(ValueError):
    """The target point is certified to lie beyond the geodesic radius."""


@dataclass(frozen=True)
class HorizontalVector:
    """Anti-Hermitian matrix orthogonal to the vertical space, stored by blocks.

    Blocks refer to the adapted frame: ``t`` the real number at the (f, f)
    entry (times i), ``g`` the column below it inside range(p), ``y1`` the row
    from ker(p) into span(f), ``y2`` the block from ker(p) into the rest of
    range(p).  The two diagonal slots vanish for horizontal matrices.
    """

    t: float
    g: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    frame: oc.AdaptedFrame

    def matrix(self) -> np.ndarray:
        """Assembled matrix in standard coordinates."""
        n = self.frame.dim
        r = self.frame.rank
        m = np.zeros((n, n), dtype=complex)
        m[0, 0] = 1j * self.t
        if r > 1:
            m[1:r, 0] = self.g
            m[0, 1:r] = -np.conj(self.g)
        if n > r:
            m[0, r:] = self.y1.reshape(-1)
            m[r:, 0] = -np.conj(self.y1.reshape(-1))
            if r > 1:
                m[1:r, r:] = self.y2
                m[r:, 1:r] = -self.y2.conj().T
        return self.frame.basis @ m @ self.frame.basis.conj().T

    def to_vector(self) -> np.ndarray:
        """Real coordinates (t, Re g, Im g, Re y1, Im y1, Re y2, Im y2)."""
        return np.concatenate([
            [self.t],
            np.real(self.g), np.imag(self.g),
            np.real(self.y1).ravel(), np.imag(self.y1).ravel(),
            np.real(self.y2).ravel(), np.imag(self.y2).ravel(),
        ])

    @staticmethod
    def from_vector(theta: np.ndarray, frame: oc.AdaptedFrame) -> "HorizontalVector":
        _, w, k = frame.dims
        theta = np.asarray(theta, dtype=float)
        pos = 1
        t = float(theta[0])
        g = theta[pos:pos + w] + 1j * theta[pos + w:pos + 2 * w]
        pos += 2 * w
        y1 = (theta[pos:pos + k] + 1j * theta[pos + k:pos + 2 * k]).reshape(1, k)
        pos += 2 * k
        y2 = (theta[pos:pos + w * k] + 1j * theta[pos + w * k:pos + 2 * w * k]).reshape(w, k)
        return HorizontalVector(t=t, g=g, y1=y1, y2=y2, frame=frame)

    @staticmethod
    def dof(frame: oc.AdaptedFrame) -> int:
        _, w, k = frame.dims
        return 1 + 2 * w + 2 * k + 2 * w * k


def vertical_project_Q(pt: BundlePoint, z: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projection (real trace inner product) onto the vertical space.

    Vertical matrices commute with p and annihilate f; the projection is the
    five-term compression p z p + q z q + F z F - F z p - p z F with
    F = f f*.
    """
    z = oc.require_antihermitian(z, tol, "z")
    p, f = pt.p, pt.f
    q = np.eye(pt.dim) - p
    ff = rank_one(f, f)
    return p @ z @ p + q @ z @ q + ff @ z @ ff - ff @ z @ p - p @ z @ ff


def horizontal_project(pt: BundlePoint, z: np.ndarray, tol: float = DEFAULT_TOL) -> HorizontalVector:
    """Complementary projection of an anti-Hermitian matrix, split into blocks."""
    z = oc.require_antihermitian(z, tol, "z")
    h = z - vertical_project_Q(pt, z, tol)
    frame = oc.adapted_frame(pt.p, pt.f)
    blocks = oc.block_decompose(h, frame)
    return HorizontalVector(
        t=float(np.imag(blocks[0][0][0, 0])),
        g=blocks[1][0].reshape(-1).copy(),
        y1=blocks[0][2].copy(),
        y2=blocks[1][2].copy(),
        frame=frame,
    )


def horizontal_lift_kappa(pt: BundlePoint, v: TangentVector) -> HorizontalVector:
    """The unique horizontal matrix mapping to v under the action differential."""
    v = bd.validate_tangent(pt, v.x, v.g)
    return horizontal_project(pt, bd.some_lifting(pt, v))


# ---------------------------------------------------------------------------
# ambient-orthogonal projection onto the tangent space
# ---------------------------------------------------------------------------

def pair_to_vec(x: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Isometric real coordinates of a (Hermitian, vector) pair for the
    ambient inner product tr(xy) + Re<f, g>."""
    return np.concatenate([oc.herm_to_vec(x), np.real(h), np.imag(h)])


def vec_to_pair(v: np.ndarray, n: int):
    x = oc.vec_to_herm(v[:n * n], n)
    h = v[n * n:n * n + n] + 1j * v[n * n + n:]
    return x, h


def tangent_projection_matrix(pt: BundlePoint) -> np.ndarray:
    """Real matrix of the (non-orthogonal) tangent projection in pair coordinates."""
    n = pt.dim
    dim = n * n + 2 * n
    cols = np.empty((dim, dim))
    for j in range(dim):
        e = np.zeros(dim)
        e[j] = 1.0
        x, h = vec_to_pair(e, n)
        out = bd.tangent_project_E(pt, x, h)
        cols[:, j] = pair_to_vec(out.x, out.g)
    return cols


def pi_matrix(pt: BundlePoint) -> np.ndarray:
    """Real matrix of the ambient-orthogonal projection onto the tangent space.

    Computed from the idempotent tangent projection e as e (e + e* - 1)^{-1},
    which is the orthogonal projection with the same range.
    """
    e = tangent_projection_matrix(pt)
    dim = e.shape[0]
    return e @ np.linalg.inv(e + e.T - np.eye(dim))


def orth_project_Pi(pt: BundlePoint, x, h) -> TangentVector:
    """Ambient-orthogonal projection of a (Hermitian, vector) pair."""
    a = oc.require_hermitian(x, name="x")
    v = np.asarray(h, dtype=complex)
    out = pi_matrix(pt) @ pair_to_vec(a, v)
    xo, ho = vec_to_pair(out, pt.dim)
    return TangentVector(x=xo, g=ho)


def orth_project_closed(pt: BundlePoint, x, h) -> TangentVector:
    """Closed-form expression of the ambient-orthogonal tangent projection."""
    a = oc.require_hermitian(x, name="x")
    v = np.asarray(h, dtype=complex)
    p, f = pt.p, pt.f
    q = np.eye(pt.dim) - p
    qv = q @ v
    qaf = q @ (a @ f)
    x_out = (
        q @ a @ p + p @ a @ q
        + (rank_one(f, qv) + rank_one(qv, f)) / 3.0
        - (rank_one(f, qaf) + rank_one(qaf, f)) / 3.0
    )
    g_out = (
        1j * np.imag(inner(v, f)) * f
        + (p - rank_one(f, f)) @ v
        + 2.0 / 3.0 * qaf
        + qv / 3.0
    )
    return TangentVector(x=x_out, g=g_out)


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def metric_norm(pt: BundlePoint, v: TangentVector, kind: MetricKind) -> float:
    """Quotient norm (Hilbert-Schmidt norm of the horizontal lift) or ambient
    norm (Frobenius/vector norm of the tangent pair)."""
    if kind == "quotient":
        return oc.frobenius_norm(horizontal_lift_kappa(pt, v).matrix())
    if kind == "ambient":
        return float(np.sqrt(oc.frobenius_norm(v.x) ** 2 + np.linalg.norm(v.g) ** 2))
    raise InvariantViolation(f"unknown metric kind {kind!r}")


def metric_norm_blocks(hv: HorizontalVector, kind: MetricKind) -> float:
    """Closed-form norms from the horizontal blocks."""
    t2 = hv.t ** 2
    g2 = float(np.linalg.norm(hv.g) ** 2)
    y1 = oc.frobenius_norm(hv.y1) ** 2
    y2 = oc.frobenius_norm(hv.y2) ** 2
    if kind == "quotient":
        return float(np.sqrt(t2 + 2.0 * g2 + 2.0 * y1 + 2.0 * y2))
    if kind == "ambient":
        return float(np.sqrt(t2 + g2 + 3.0 * y1 + 2.0 * y2))
    raise InvariantViolation(f"unknown metric kind {kind!r}")


# ---------------------------------------------------------------------------
# exponential, logarithm, connection
# ---------------------------------------------------------------------------

def exp_map(pt: BundlePoint, v: TangentVector) -> BundlePoint:
    """Quotient-metric exponential: push pt along the horizontal lift's flow."""
    z = horizontal_lift_kappa(pt, v).matrix()
    return bd.act(oc.mat_exp(z), pt)


def geodesic(pt: BundlePoint, v: TangentVector, t: float) -> BundlePoint:
    return exp_map(pt, t * v)


def _entire_F(lam: complex) -> complex:
    if abs(lam) < 1e-6:
        return 1.0 - lam / 2.0 + lam ** 2 / 6.0 - lam ** 3 / 24.0
    return (1.0 - np.exp(-lam)) / lam


def _dexp_applier(z: np.ndarray):
    """Factored application of F(ad z) in the eigenbasis of z."""
    w, vz = np.linalg.eigh(1j * np.asarray(z, dtype=complex))
    mu = -1j * w
    diff = mu[:, None] - mu[None, :]
    factors = np.vectorize(_entire_F)(diff)

    def apply(mat: np.ndarray) -> np.ndarray:
        inner_mat = vz.conj().T @ mat @ vz
        return vz @ (factors * inner_mat) @ vz.conj().T

    return apply


def dexp_F(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """F(ad z) applied to w, with F(lambda) = (1 - exp(-lambda)) / lambda.

    The exponential's differential is exp(z) times this value.
    """
    return _dexp_applier(z)(np.asarray(w, dtype=complex))


def g_func(t: float) -> float:
    """The even function sin(t)/t + (cos(t) - 1)/t^2, with value 1/2 at zero.

    Evaluated as sinc(t) - sinc(t/2)^2 / 2, which removes the cancellation of
    the raw second term near zero and is exact at t = 0.
    """
    return float(np.sinc(t / np.pi) - 0.5 * np.sinc(t / (2.0 * np.pi)) ** 2)


def find_r0() -> float:
    """First positive root of g_func, by bisection on t sin(t) + cos(t) - 1.

    The auxiliary function shares the positive roots of g_func and is better
    conditioned near the root.
    """
    def h(t):
        return t * np.sin(t) + np.cos(t) - 1.0

    lo, hi = 2.0, 2.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if h(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def contraction_gap(z: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """Deviation of F(ad z) from the identity, in operator norm on the
    trace-inner-product space.

    Computed from the spectrum: ad z is normal with eigenvalues the pairwise
    differences of the eigenvalues of z.
    """
    z = oc.require_antihermitian(z, tol, "z")
    w, _ = np.linalg.eigh(1j * z)
    mu = -1j * w
    diff = (mu[:, None] - mu[None, :]).ravel()
    return float(max(abs(_entire_F(d) - 1.0) for d in diff))


def covariant_derivative(curve, field, i: int, dt: float,
                         max_step: float = 1e-2) -> TangentVector:
    """Covariant derivative of a tangent field along a sampled curve.

    Central finite differences of the horizontal lift along the curve feed
    the reductive-connection formula with the half-commutator correction
    term.  Requires an interior index on a uniform grid.
    """
    if dt <= 0.0 or dt > max_step:
        raise InvariantViolation(f"grid step {dt} is too coarse (max {max_step})")
    m = len(curve)
    if not 1 <= i <= m - 2:
        raise InvariantViolation("covariant derivative needs an interior sample index")
    k_prev = horizontal_lift_kappa(curve[i - 1], field[i - 1]).matrix()
    k_next = horizontal_lift_kappa(curve[i + 1], field[i + 1]).matrix()
    dk = (k_next - k_prev) / (2.0 * dt)
    dp = (curve[i + 1].p - curve[i - 1].p) / (2.0 * dt)
    df = (curve[i + 1].f - curve[i - 1].f) / (2.0 * dt)
    vel = bd.tangent_project_E(curve[i], (dp + dp.conj().T) / 2.0, df)
    x_dot = horizontal_lift_kappa(curve[i], vel).matrix()
    y = horizontal_lift_kappa(curve[i], field[i]).matrix()
    w = dk - 0.5 * (x_dot @ y - y @ x_dot)
    w = (w - w.conj().T) / 2.0
    return bd.delta(curve[i], w)


def sectional_curvature(pt: BundlePoint, v: TangentVector, w: TangentVector,
                        tol: float = DEFAULT_TOL) -> float:
    """Sectional curvature of the plane spanned by two tangent vectors.

    Uses the homogeneous-submersion formula: a quarter of the squared
    horizontal part plus the squared vertical part of the lift bracket, after
    orthonormalizing the lifts in the quotient inner product.
    """
    zv = horizontal_lift_kappa(pt, v).matrix()
    zw = horizontal_lift_kappa(pt, w).matrix()
    nv = oc.frobenius_norm(zv)
    if nv <= tol:
        raise InvariantViolation("first direction vanishes")
    a = zv / nv
    b = zw - oc.trace_inner(a, zw) * a
    nb = oc.frobenius_norm(b)
    if nb <= tol * max(1.0, oc.frobenius_norm(zw)):
        raise InvariantViolation("directions span a degenerate plane")
    b /= nb
    bracket = a @ b - b @ a
    vert = vertical_project_Q(pt, bracket)
    horiz = bracket - vert
    return float(0.25 * oc.frobenius_norm(horiz) ** 2 + oc.frobenius_norm(vert) ** 2)


def ambient_geodesic_residual(pt: BundlePoint, z: np.ndarray,
                              tol: float = DEFAULT_TOL) -> TangentVector:
    """Ambient-metric geodesic defect of the one-parameter orbit generated by z.

    The orbit is an ambient geodesic exactly when the orthogonal projection of
    its second derivative at time zero vanishes.
    """
    z = oc.require_antihermitian(z, tol, "z")
    p, f = pt.p, pt.f
    z2 = z @ z
    first = z2 @ p - 2.0 * z @ p @ z + p @ z2
    return orth_project_Pi(pt, (first + first.conj().T) / 2.0, z2 @ f)


def log_map(pt0: BundlePoint, pt1: BundlePoint, tol: float = 1e-10,
            max_iter: int = 100) -> HorizontalVector:
    """Horizontal initial velocity of the geodesic from pt0 to pt1.

    Shooting with Newton steps on the horizontal coordinates; the Jacobian
    comes from the differential of the exponential.  Raises OutOfRadius when
    the ambient chordal distance already certifies that the quotient distance
    is at least pi/4, or when the solution found lies outside that radius;
    raises NoConvergence when the iteration budget is exhausted.
    """
    chord = float(np.sqrt(oc.frobenius_norm(pt1.p - pt0.p) ** 2
                          + np.linalg.norm(pt1.f - pt0.f) ** 2))
    if chord * np.sqrt(2.0 / 3.0) >= np.pi / 4.0:
        raise OutOfRadius(
            f"quotient distance at least {chord * np.sqrt(2.0 / 3.0):.4f} >= pi/4"
        )
    frame = oc.adapted_frame(pt0.p, pt0.f)
    n = pt0.dim
    dof = HorizontalVector.dof(frame)
    target = pair_to_vec(pt1.p, pt1.f)

    v0 = orth_project_Pi(pt0, (pt1.p - pt0.p + (pt1.p - pt0.p).conj().T) / 2.0,
                         pt1.f - pt0.f)
    theta = horizontal_lift_kappa(pt0, v0).to_vector()

    basis_mats = []
    for l in range(dof):
        e = np.zeros(dof)
        e[l] = 1.0
        basis_mats.append(HorizontalVector.from_vector(e, frame).matrix())

    def residual_of(th):
        zm = HorizontalVector.from_vector(th, frame).matrix()
        u = oc.mat_exp(zm)
        moved = bd.act(u, pt0)
        return pair_to_vec(moved.p, moved.f) - target, zm, u

    res, zmat, u = residual_of(theta)
    for _ in range(max_iter):
        if np.linalg.norm(res) <= tol:
            break
        apply_t = _dexp_applier(zmat)
        jac = np.empty((target.shape[0], dof))
        for l, wmat in enumerate(basis_mats):
            tw = apply_t(wmat)
            dp = u @ (tw @ pt0.p - pt0.p @ tw) @ u.conj().T
            df = u @ (tw @ pt0.f)
            jac[:, l] = pair_to_vec((dp + dp.conj().T) / 2.0, df)
        step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        alpha = 1.0
        for _ in range(40):
            cand = theta + alpha * step
            cres, czm, cu = residual_of(cand)
            if np.linalg.norm(cres) < np.linalg.norm(res):
                theta, res, zmat, u = cand, cres, czm, cu
                break
            alpha /= 2.0
        else:
            raise NoConvergence("damped Newton step failed to reduce the residual")
    else:
        raise NoConvergence(f"no convergence within {max_iter} iterations")
    hv = HorizontalVector.from_vector(theta, frame)
    if oc.frobenius_norm(hv.matrix()) > np.pi / 4.0 + 1e-8:
        raise OutOfRadius("solution lies outside the certified geodesic radius")
    return hv


def random_horizontal(rng: np.random.Generator, pt: BundlePoint,
                      scale: float = 1.0) -> HorizontalVector:
    """Random horizontal vector with independent normal block entries."""
    frame = oc.adapted_frame(pt.p, pt.f)
    theta = scale * rng.standard_normal(HorizontalVector.dof(frame))
    return HorizontalVector.from_vector(theta, frame)
