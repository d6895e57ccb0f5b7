"""Batch front-end: invariant verification suites, lifting and geodesic
computations, machine-readable JSON/CSV reports.

Exit codes: 0 success, 1 invariant failure, 2 malformed configuration,
3 input invariant violation, 4 solver divergence, 5 out of radius.
Parallelism over samples is capped by the FLAGFIBER_THREADS environment
variable; outputs are byte-identical for any thread count because every
sample draws from its own counter-split random stream and results are
reduced in sample order.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bundle as bd
from . import finsler as fin
from . import operator_core as oc
from . import riemann as rm
from .bundle import BundlePoint, TangentVector

__all__ = ["RunConfig", "main", "run_verify", "sample_rng"]

EXIT_OK = 0
EXIT_INVARIANT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_SOLVER = 4
EXIT_RADIUS = 5


@dataclass(frozen=True)
class RunConfig:
    """Shared options: dimension, sample count, seed and tolerance override.

    ``tol = None`` keeps each check's own tolerance; a value replaces all of
    them (useful for stress runs).
    """

    dim: int = 3
    samples: int = 50
    seed: int = 1
    tol: float | None = None

    def validate(self) -> "RunConfig":
        if self.dim < 2:
            raise ConfigError(f"dim must be >= 2, got {self.dim}")
        if self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        if self.tol is not None and not self.tol > 0.0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        return self


class ConfigError(ValueError):
    pass


def sample_rng(seed: int, *key: int) -> np.random.Generator:
    """Split random stream: Philox keyed by (seed, key...), counter at zero.

    Streams for distinct keys are independent, so per-sample work can run in
    any order or thread without changing results.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))


def thread_count() -> int:
    raw = os.environ.get("FLAGFIBER_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_indexed(fn, count: int):
    """Apply fn(i) for i in range(count), in-order results, optional threads."""
    workers = min(thread_count(), count) if count else 1
    if workers <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


# ---------------------------------------------------------------------------
# JSON encoding of the wire types
# ---------------------------------------------------------------------------

def _cplx(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def matrix_to_json(m: np.ndarray) -> list:
    a = np.asarray(m, dtype=complex)
    return [[_cplx(a[i, j]) for j in range(a.shape[1])] for i in range(a.shape[0])]


def vector_to_json(v: np.ndarray) -> list:
    return [_cplx(z) for z in np.asarray(v, dtype=complex)]


def json_to_matrix(data) -> np.ndarray:
    return np.array([[complex(c[0], c[1]) for c in row] for row in data], dtype=complex)


def json_to_vector(data) -> np.ndarray:
    return np.array([complex(c[0], c[1]) for c in data], dtype=complex)


def point_to_json(pt: BundlePoint) -> dict:
    return {"p": matrix_to_json(pt.p), "f": vector_to_json(pt.f)}


def tangent_to_json(v: TangentVector) -> dict:
    return {"x": matrix_to_json(v.x), "g": vector_to_json(v.g)}


def load_point(path: str) -> BundlePoint:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return bd.validate_point(json_to_matrix(data["p"]), json_to_vector(data["f"]))


def load_tangent(path: str, pt: BundlePoint) -> TangentVector:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return bd.validate_tangent(pt, json_to_matrix(data["x"]), json_to_vector(data["g"]))


def horizontal_to_json(hv: rm.HorizontalVector) -> dict:
    return {
        "t": float(hv.t),
        "g": vector_to_json(hv.g),
        "y1": matrix_to_json(hv.y1),
        "y2": matrix_to_json(hv.y2),
        "frame": matrix_to_json(hv.frame.basis),
    }


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# invariant suites
# ---------------------------------------------------------------------------

def _rand_point(rng, dim: int) -> BundlePoint:
    rank = int(rng.integers(1, dim))
    return bd.random_point(rng, dim, rank)


def _count(cfg: RunConfig, divisor: int, floor: int = 2) -> int:
    return max(floor, cfg.samples // divisor)


def _chk_mat_exp_unitary(cfg, rng):
    z = oc.random_antihermitian(rng, cfg.dim, scale=rng.uniform(0.1, 5.0))
    u = oc.mat_exp(z)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(cfg.dim)))


def _chk_mat_exp_inverse(cfg, rng):
    z = oc.random_antihermitian(rng, cfg.dim)
    return float(np.linalg.norm(oc.mat_exp(z) @ oc.mat_exp(-z) - np.eye(cfg.dim)))


def _chk_snorm_submult(cfg, rng):
    a = oc.random_hermitian(rng, cfg.dim) + 1j * oc.random_hermitian(rng, cfg.dim)
    b = oc.random_hermitian(rng, cfg.dim) + 1j * oc.random_hermitian(rng, cfg.dim)
    return max(0.0, oc.spectral_norm(a @ b) - oc.spectral_norm(a) * oc.spectral_norm(b))


def _chk_snorm_unitary(cfg, rng):
    a = oc.random_hermitian(rng, cfg.dim) + 1j * oc.random_hermitian(rng, cfg.dim)
    u = oc.random_unitary(rng, cfg.dim)
    v = oc.random_unitary(rng, cfg.dim)
    return abs(oc.spectral_norm(u @ a @ v) - oc.spectral_norm(a))


def _chk_inv_sqrt(cfg, rng):
    a = oc.random_hermitian(rng, cfg.dim)
    spd = a @ a.conj().T + 0.5 * np.eye(cfg.dim)
    s = oc.principal_inv_sqrt(spd)
    return float(np.linalg.norm(s @ spd @ s - np.eye(cfg.dim)))


def _chk_frame_unitary(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    b = oc.adapted_frame(pt.p, pt.f).basis
    return float(np.linalg.norm(b.conj().T @ b - np.eye(cfg.dim)))


def _chk_index_antisym(cfg, rng):
    p = _rand_point(rng, cfg.dim).p
    q = _rand_point(rng, cfg.dim).p
    return float(abs(oc.projection_pair_index(p, q) + oc.projection_pair_index(q, p)))


def _chk_block_roundtrip(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    frame = oc.adapted_frame(pt.p, pt.f)
    z = oc.random_antihermitian(rng, cfg.dim)
    back = oc.block_compose(oc.block_decompose(z, frame), frame)
    return float(np.linalg.norm(back - z))


def _chk_E_idempotent(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    x = oc.random_hermitian(rng, cfg.dim)
    h = rng.standard_normal(cfg.dim) + 1j * rng.standard_normal(cfg.dim)
    once = bd.tangent_project_E(pt, x, h)
    twice = bd.tangent_project_E(pt, once.x, once.g)
    return max(float(np.linalg.norm(twice.x - once.x)), float(np.linalg.norm(twice.g - once.g)))


def _chk_E_fixes_delta(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    v = bd.random_tangent(rng, pt)
    out = bd.tangent_project_E(pt, v.x, v.g)
    return max(float(np.linalg.norm(out.x - v.x)), float(np.linalg.norm(out.g - v.g)))


def _random_vertical(rng, pt: BundlePoint) -> np.ndarray:
    return rm.vertical_project_Q(pt, oc.random_antihermitian(rng, pt.dim))


def _chk_kernel_vertical(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    v = bd.delta(pt, _random_vertical(rng, pt))
    return max(float(np.linalg.norm(v.x)), float(np.linalg.norm(v.g)))


def _chk_kernel_horizontal(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    h = rm.random_horizontal(rng, pt).matrix()
    back = rm.horizontal_lift_kappa(pt, bd.delta(pt, h)).matrix()
    return float(np.linalg.norm(back - h))


def _chk_action_composition(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    u = oc.random_unitary(rng, cfg.dim)
    v = oc.random_unitary(rng, cfg.dim)
    lhs = bd.act(u @ v, pt)
    rhs = bd.act(u, bd.act(v, pt))
    return max(float(np.linalg.norm(lhs.p - rhs.p)), float(np.linalg.norm(lhs.f - rhs.f)))


def _chk_cross_section(cfg, rng):
    base = _rand_point(rng, cfg.dim)
    pt = bd.act(oc.mat_exp(oc.random_antihermitian(rng, cfg.dim, scale=0.2)), base)
    w = bd.cross_section(base, pt)
    moved = bd.act(w, base)
    return max(float(np.linalg.norm(moved.p - pt.p)), float(np.linalg.norm(moved.f - pt.f)))


def _chk_trivialize_roundtrip(cfg, rng):
    base = _rand_point(rng, cfg.dim)
    pt = bd.act(oc.mat_exp(oc.random_antihermitian(rng, cfg.dim, scale=0.2)), base)
    p, h = bd.trivialize(base, pt)
    back = bd.trivialize_inverse(base, p, h)
    membership = float(np.linalg.norm(base.p @ h - h))
    return max(membership, float(np.linalg.norm(back.p - pt.p)),
               float(np.linalg.norm(back.f - pt.f)))


def _chk_some_lifting(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    v = bd.random_tangent(rng, pt)
    out = bd.delta(pt, bd.some_lifting(pt, v))
    return max(float(np.linalg.norm(out.x - v.x)), float(np.linalg.norm(out.g - v.g)))


def _chk_lower_bound(cfg, rng):
    dim = min(cfg.dim, 4)
    pt = _rand_point(rng, dim)
    v = bd.random_tangent(rng, pt)
    norm = fin.finsler_norm(pt, v)
    return max(0.0, max(oc.spectral_norm(v.x), float(np.linalg.norm(v.g))) - norm)


def _chk_homogeneity(cfg, rng):
    dim = min(cfg.dim, 4)
    pt = _rand_point(rng, dim)
    v = bd.random_tangent(rng, pt)
    c = float(rng.uniform(-3.0, 3.0))
    return abs(fin.finsler_norm(pt, c * v) - abs(c) * fin.finsler_norm(pt, v))


def _chk_triangle(cfg, rng):
    dim = min(cfg.dim, 4)
    pt = _rand_point(rng, dim)
    v = bd.random_tangent(rng, pt)
    w = bd.random_tangent(rng, pt)
    return max(0.0, fin.finsler_norm(pt, v + w)
               - fin.finsler_norm(pt, v) - fin.finsler_norm(pt, w))


def _chk_finsler_unitary(cfg, rng):
    dim = min(cfg.dim, 4)
    pt = _rand_point(rng, dim)
    v = bd.random_tangent(rng, pt)
    u = oc.random_unitary(rng, dim)
    return abs(fin.finsler_norm(bd.act(u, pt), bd.transport_tangent(u, v))
               - fin.finsler_norm(pt, v))


def _chk_krein_parrott(cfg, rng):
    r = int(rng.integers(1, cfg.dim))
    m = cfg.dim - r
    b = oc.random_antihermitian(rng, r) if r > 1 else 1j * rng.standard_normal((1, 1))
    a = rng.standard_normal((r, m)) + 1j * rng.standard_normal((r, m))
    z0, mu = fin.krein_complete(b, a)
    full = np.block([[b, a], [-a.conj().T, z0]])
    return max(0.0, oc.spectral_norm(full) - mu)


def _chk_two_step_joint(cfg, rng):
    dim = min(cfg.dim, 4)
    pt = _rand_point(rng, dim)
    v = bd.random_tangent(rng, pt)
    lift = fin.minimal_lifting(pt, v)
    tpl = fin.template_from_tangent(pt, v)
    return max(0.0, lift.norm - fin.joint_oracle(tpl, n_starts=10))


def _chk_dkw_orientation(cfg, rng):
    g0 = float(rng.uniform(0.2, 2.0))
    gamma = rng.standard_normal(max(1, cfg.dim - 2)) \
        + 1j * rng.standard_normal(max(1, cfg.dim - 2))
    rep = fin.orientation_report(g0, gamma)
    return abs(rep["lifting_orientation_central_norm"] - rep["target_norm"]) \
        + abs(rep["lifting_oracle_minimum"] - rep["target_norm"])


def _chk_split_orthogonal(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    z = oc.random_antihermitian(rng, cfg.dim)
    q = rm.vertical_project_Q(pt, z)
    return abs(float(np.real(np.trace(q.conj().T @ (z - q)))))


def _chk_pythagoras(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    z = oc.random_antihermitian(rng, cfg.dim)
    q = rm.vertical_project_Q(pt, z)
    return abs(oc.frobenius_norm(z) ** 2 - oc.frobenius_norm(q) ** 2
               - oc.frobenius_norm(z - q) ** 2)


def _chk_metric_equivalence(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    hv = rm.random_horizontal(rng, pt)
    vq = rm.metric_norm_blocks(hv, "quotient")
    va = rm.metric_norm_blocks(hv, "ambient")
    if vq == 0.0:
        return 0.0
    ratio = va / vq
    return max(0.0, 1.0 / np.sqrt(2.0) - ratio, ratio - np.sqrt(1.5))


def _chk_submersion_isometry(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    v = bd.random_tangent(rng, pt)
    hv = rm.horizontal_lift_kappa(pt, v)
    return abs(rm.metric_norm(pt, v, "quotient") - oc.frobenius_norm(hv.matrix()))


def _chk_exp_log(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    hv = rm.random_horizontal(rng, pt)
    z = hv.matrix()
    nz = oc.frobenius_norm(z)
    if nz > 0:
        z = z * (rng.uniform(0.05, 0.7) / nz)
    v = bd.delta(pt, z)
    back = rm.log_map(pt, rm.exp_map(pt, v))
    return float(np.linalg.norm(back.matrix() - z))


def _chk_dexp_fd(cfg, rng):
    z = oc.random_antihermitian(rng, cfg.dim)
    w = oc.random_antihermitian(rng, cfg.dim)
    h = 1e-4
    import scipy.linalg
    fd = scipy.linalg.expm(-z) @ (scipy.linalg.expm(z + h * w)
                                  - scipy.linalg.expm(z - h * w)) / (2 * h)
    return float(np.linalg.norm(rm.dexp_F(z, w) - fd))


def _chk_pi_idempotent(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    mat = rm.pi_matrix(pt)
    return float(np.linalg.norm(mat @ mat - mat))


def _chk_pi_selfadjoint(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    mat = rm.pi_matrix(pt)
    return float(np.linalg.norm(mat - mat.T))


def _chk_pi_closed(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    x = oc.random_hermitian(rng, cfg.dim)
    h = rng.standard_normal(cfg.dim) + 1j * rng.standard_normal(cfg.dim)
    a = rm.orth_project_Pi(pt, x, h)
    b = rm.orth_project_closed(pt, x, h)
    return max(float(np.linalg.norm(a.x - b.x)), float(np.linalg.norm(a.g - b.g)))


def _chk_geodesic_speed(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    hv = rm.random_horizontal(rng, pt)
    z = hv.matrix()
    nz = oc.frobenius_norm(z)
    if nz == 0.0:
        return 0.0
    z /= nz
    speeds = []
    for t in (0.0, 0.4, 0.9):
        gamma = bd.act(oc.mat_exp(t * z), pt)
        vel = bd.delta(gamma, z)
        speeds.append(rm.metric_norm(gamma, vel, "quotient"))
    return float(np.max(np.abs(np.array(speeds) - speeds[0])))


def _chk_f_gap_identity(cfg, rng):
    t = float(rng.uniform(0.01, 6.0))
    lhs = abs(rm._entire_F(1j * t) - 1.0) ** 2
    rhs = 1.0 - 2.0 * rm.g_func(t)
    base = abs(lhs - rhs)
    r0 = rm.find_r0()
    base = max(base, abs(rm.g_func(0.0) - 0.5))
    base = max(base, abs(r0 * np.sin(r0) + np.cos(r0) - 1.0))
    return base


def _chk_contraction_small(cfg, rng):
    r0 = rm.find_r0()
    z = oc.random_antihermitian(rng, cfg.dim)
    z *= rng.uniform(0.1, 0.999) * (r0 / 2.0) / max(oc.spectral_norm(z), 1e-12)
    return max(0.0, rm.contraction_gap(z) - (1.0 - 1e-12))


def _chk_curvature_nonneg(cfg, rng):
    pt = _rand_point(rng, cfg.dim)
    v = bd.random_tangent(rng, pt)
    w = bd.random_tangent(rng, pt)
    try:
        k = rm.sectional_curvature(pt, v, w)
    except oc.InvariantViolation:
        return 0.0
    return max(0.0, -k)


def _chk_ambient_residual(cfg, rng):
    pt = bd.validate_point(np.diag([1.0, 1.0, 0.0]), np.array([1.0, 0.0, 0.0]))
    e = np.eye(3)
    single = oc.rank_one(e[:, 2], e[:, 0]) - oc.rank_one(e[:, 0], e[:, 2])
    res = rm.ambient_geodesic_residual(pt, single)
    return max(float(np.linalg.norm(res.x)), float(np.linalg.norm(res.g)))


CHECKS = [
    ("operator_core", "mat_exp_unitary", 1e-11, _chk_mat_exp_unitary, 1),
    ("operator_core", "mat_exp_inverse_identity", 1e-12, _chk_mat_exp_inverse, 1),
    ("operator_core", "spectral_norm_submultiplicative", 1e-10, _chk_snorm_submult, 1),
    ("operator_core", "spectral_norm_unitary_invariance", 1e-10, _chk_snorm_unitary, 1),
    ("operator_core", "principal_inv_sqrt_identity", 1e-11, _chk_inv_sqrt, 1),
    ("operator_core", "adapted_frame_unitary", 1e-12, _chk_frame_unitary, 1),
    ("operator_core", "projection_index_antisymmetry", 1e-12, _chk_index_antisym, 1),
    ("operator_core", "block_roundtrip", 1e-12, _chk_block_roundtrip, 1),
    ("bundle", "tangent_projection_idempotent", 1e-10, _chk_E_idempotent, 1),
    ("bundle", "tangent_projection_fixes_differential", 1e-10, _chk_E_fixes_delta, 1),
    ("bundle", "kernel_contains_vertical", 1e-11, _chk_kernel_vertical, 1),
    ("bundle", "kernel_excludes_horizontal", 1e-10, _chk_kernel_horizontal, 1),
    ("bundle", "action_composition", 1e-11, _chk_action_composition, 1),
    ("bundle", "cross_section_action", 1e-10, _chk_cross_section, 1),
    ("bundle", "trivialize_roundtrip", 1e-11, _chk_trivialize_roundtrip, 1),
    ("bundle", "some_lifting_differential", 1e-11, _chk_some_lifting, 1),
    ("finsler", "lower_bound_law", 1e-10, _chk_lower_bound, 5),
    ("finsler", "absolute_homogeneity", 1e-8, _chk_homogeneity, 10),
    ("finsler", "triangle_inequality", 1e-8, _chk_triangle, 10),
    ("finsler", "unitary_invariance", 1e-8, _chk_finsler_unitary, 10),
    ("finsler", "krein_attains_bound", 1e-8, _chk_krein_parrott, 2),
    ("finsler", "two_step_matches_joint_oracle", 1e-6, _chk_two_step_joint, 25),
    ("finsler", "completion_orientation_certified", 1e-8, _chk_dkw_orientation, 10),
    ("riemann", "splitting_trace_orthogonal", 1e-11, _chk_split_orthogonal, 1),
    ("riemann", "splitting_pythagoras", 1e-10, _chk_pythagoras, 1),
    ("riemann", "metric_equivalence_band", 1e-12, _chk_metric_equivalence, 1),
    ("riemann", "submersion_isometry", 1e-12, _chk_submersion_isometry, 1),
    ("riemann", "exp_log_roundtrip", 1e-8, _chk_exp_log, 5),
    ("riemann", "dexp_finite_difference", 1e-6, _chk_dexp_fd, 5),
    ("riemann", "orth_projection_idempotent", 1e-10, _chk_pi_idempotent, 5),
    ("riemann", "orth_projection_selfadjoint", 1e-10, _chk_pi_selfadjoint, 5),
    ("riemann", "orth_projection_closed_forms", 1e-10, _chk_pi_closed, 5),
    ("riemann", "geodesic_constant_speed", 1e-8, _chk_geodesic_speed, 5),
    ("riemann", "flow_factor_eigenvalue_identity", 1e-12, _chk_f_gap_identity, 1),
    ("riemann", "flow_factor_contraction", 1e-12, _chk_contraction_small, 2),
    ("riemann", "curvature_nonnegative", 1e-12, _chk_curvature_nonneg, 2),
    ("riemann", "ambient_geodesic_residual_zero_case", 1e-11, _chk_ambient_residual, 25),
]


def run_verify(cfg: RunConfig) -> dict:
    """Run every invariant suite and assemble the JSON-able report."""
    cfg.validate()
    tasks = []
    for ci, (section, name, tol, fn, divisor) in enumerate(CHECKS):
        for si in range(_count(cfg, divisor)):
            tasks.append((ci, si))

    def eval_task(idx):
        ci, si = tasks[idx]
        _, _, _, fn, _ = CHECKS[ci]
        rng = sample_rng(cfg.seed, ci, si)
        return fn(cfg, rng)

    values = _map_indexed(eval_task, len(tasks))
    errors: dict[int, float] = {}
    for (ci, _), val in zip(tasks, values):
        errors[ci] = max(errors.get(ci, 0.0), float(val))

    sections: dict[str, list] = {}
    overall = True
    for ci, (section, name, tol, _, _) in enumerate(CHECKS):
        eff_tol = cfg.tol if cfg.tol is not None else tol
        err = errors[ci]
        ok = err <= eff_tol
        overall = overall and ok
        sections.setdefault(section, []).append(
            {"name": name, "max_error": err, "tolerance": eff_tol, "pass": ok}
        )
    return {
        "config": {"dim": cfg.dim, "samples": cfg.samples, "seed": cfg.seed,
                   "tol": cfg.tol},
        "sections": [{"module": k, "checks": v} for k, v in sections.items()],
        "pass": overall,
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    cfg = RunConfig(dim=args.dim, samples=args.samples, seed=args.seed, tol=args.tol)
    report = run_verify(cfg)
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK if report["pass"] else EXIT_INVARIANT_FAILURE


def cmd_lift(args) -> int:
    pt = load_point(args.point)
    v = load_tangent(args.vector, pt)
    lift = fin.minimal_lifting(pt, v, certify=pt.dim <= 4)
    payload = {
        "matrix": matrix_to_json(lift.x0matrix),
        "norm": lift.norm,
        "oracle_gap": lift.oracle_gap,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_geodesic(args) -> int:
    if args.steps < 1:
        raise ConfigError(f"steps must be >= 1, got {args.steps}")
    pt = load_point(args.point)
    v = load_tangent(args.vector, pt)
    if args.metric == "finsler":
        gen = fin.minimal_lifting(pt, v).x0matrix
    else:
        gen = rm.horizontal_lift_kappa(pt, v).matrix()
    n = pt.dim
    buf = io.StringIO()
    writer = csv.writer(buf)
    header = ["s"]
    header += [f"p_{k}_{l}_{part}" for k in range(n) for l in range(n)
               for part in ("re", "im")]
    header += [f"f_{k}_{part}" for k in range(n) for part in ("re", "im")]
    header.append("speed")
    writer.writerow(header)
    for j in range(args.steps + 1):
        s = args.t * j / args.steps
        gamma = bd.act(oc.mat_exp(s * gen), pt)
        vel = bd.delta(gamma, gen)
        if args.metric == "finsler":
            speed = fin.finsler_norm(gamma, vel)
        else:
            speed = rm.metric_norm(gamma, vel, "quotient")
        row = [repr(float(s))]
        for k in range(n):
            for l in range(n):
                row += [repr(float(np.real(gamma.p[k, l]))), repr(float(np.imag(gamma.p[k, l])))]
        for k in range(n):
            row += [repr(float(np.real(gamma.f[k]))), repr(float(np.imag(gamma.f[k])))]
        row.append(repr(float(speed)))
        writer.writerow(row)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_logmap(args) -> int:
    pt0 = load_point(getattr(args, "from"))
    pt1 = load_point(args.to)
    hv = rm.log_map(pt0, pt1)
    _emit(json.dumps(horizontal_to_json(hv), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_norms(args) -> int:
    cfg = RunConfig(dim=args.dim, samples=args.samples, seed=args.seed, tol=args.tol)
    cfg.validate()

    def one(i: int):
        rng = sample_rng(cfg.seed, 1000, i)
        pt = _rand_point(rng, cfg.dim)
        frame = oc.adapted_frame(pt.p, pt.f)
        kind = i % 3
        if kind == 1 and frame.dims[1] > 0:
            theta = np.zeros(rm.HorizontalVector.dof(frame))
            theta[1] = 1.0  # pure g direction
            hv = rm.HorizontalVector.from_vector(theta, frame)
        elif kind == 2 and frame.dims[2] > 0:
            theta = np.zeros(rm.HorizontalVector.dof(frame))
            theta[1 + 2 * frame.dims[1]] = 1.0  # pure y1 direction
            hv = rm.HorizontalVector.from_vector(theta, frame)
        else:
            hv = rm.random_horizontal(rng, pt)
        vq = rm.metric_norm_blocks(hv, "quotient")
        va = rm.metric_norm_blocks(hv, "ambient")
        return vq, va, (va / vq if vq > 0 else 1.0)

    rows = _map_indexed(one, cfg.samples)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["index", "quotient", "ambient", "ratio"])
    for i, (vq, va, ratio) in enumerate(rows):
        writer.writerow([i, repr(float(vq)), repr(float(va)), repr(float(ratio))])
    ratios = [r for (_, _, r) in rows]
    writer.writerow(["min_ratio", "", "", repr(float(min(ratios)))])
    writer.writerow(["max_ratio", "", "", repr(float(max(ratios)))])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_curvature(args) -> int:
    cfg = RunConfig(dim=args.dim, samples=args.samples, seed=args.seed, tol=args.tol)
    cfg.validate()

    def one(i: int):
        rng = sample_rng(cfg.seed, 2000, i)
        pt = _rand_point(rng, cfg.dim)
        v = bd.random_tangent(rng, pt)
        w = bd.random_tangent(rng, pt)
        try:
            return rm.sectional_curvature(pt, v, w)
        except oc.InvariantViolation:
            return 0.0

    values = _map_indexed(one, cfg.samples)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["index", "curvature"])
    for i, k in enumerate(values):
        writer.writerow([i, repr(float(k))])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", type=str, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flagfiber",
        description="Verification suites and geometry computations for the "
                    "bundle of (projection, unit vector) pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run all invariant suites, emit a JSON report")
    _add_config_flags(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("lift", help="norm-minimal lifting of a tangent vector")
    p.add_argument("point", help="JSON file with the base point")
    p.add_argument("vector", help="JSON file with the tangent vector")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(fn=cmd_lift)

    p = sub.add_parser("geodesic", help="sample a geodesic as CSV")
    p.add_argument("point")
    p.add_argument("vector")
    p.add_argument("--metric", choices=["finsler", "quotient"], default="finsler")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(fn=cmd_geodesic)

    p = sub.add_parser("logmap", help="horizontal velocity joining two points")
    p.add_argument("from")
    p.add_argument("to")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(fn=cmd_logmap)

    p = sub.add_parser("norms", help="sample quotient/ambient norms and ratios as CSV")
    _add_config_flags(p)
    p.set_defaults(fn=cmd_norms)

    p = sub.add_parser("curvature", help="sample sectional curvatures as CSV")
    _add_config_flags(p)
    p.set_defaults(fn=cmd_curvature)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (fin.SolverDiverged, rm.NoConvergence) as exc:
        print(f"solver divergence: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except rm.OutOfRadius as exc:
        print(f"out of radius: {exc}", file=sys.stderr)
        return EXIT_RADIUS
    except oc.InvariantViolation as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
