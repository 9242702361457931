"""Ensemble experiments on the numerically sampled global attractor.

The attractor itself is not computable; its stand-in here is a cloud of
post-burn-in snapshots.  Two seeding strategies are provided:

* ``"ball"`` -- initial data uniform in the invariant L2 ball (the absorbing
  radius); after a long burn-in these snapshots sit at the stable equilibria.
  This is the right sample for checking the invariant-set inequalities.
* ``"unstable"`` -- initial data on the unstable subspace of the origin with
  amplitudes pre-scaled by exp(-(lam - lambda_j) * burn_in), so the ensemble
  arrives at finite amplitude exactly at the burn-in time and the snapshots
  trace the unstable-manifold skeleton of the attractor.  This is the sample
  with enough geometric spread for the box-counting estimator; a "ball"
  sample collapses onto two points to machine precision (the measured
  linearisation gap at the stable equilibria times any admissible burn-in far
  exceeds the 52-bit mantissa).

The box-counting dimension uses one farthest-point ordering of the cloud:
the greedy cover at radius eps is exactly the prefix of picks whose
insertion radius exceeds eps, so all grid resolutions share one O(n^2) pass.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend
from .bounds import ReactionParams, smoothing_constant_parabolic
from .errors import ConfigurationError, DivergenceError, VerificationError
from .galerkin import SolverConfig, evolve_ensemble, get_basis

__all__ = [
    "AttractorSample",
    "BoundCheck",
    "BoxCountReport",
    "SmoothingCheck",
    "box_counting_dimension",
    "l2_radius",
    "sample_attractor",
    "verify_l2_bound",
    "verify_linf_bound",
    "verify_smoothing",
    "write_boxcount_csv",
    "write_cloud_csv",
]


def l2_radius(params: ReactionParams, cfg: SolverConfig) -> float:
    """Invariant-ball radius: sqrt((2(p-2)/p^2) |Omega| lam^(p/(p-2)) / (beta lam_1))."""
    lam1 = (math.pi / cfg.length) ** 2
    return math.sqrt(params.l2_radius_sq * cfg.length / lam1)


@dataclass(frozen=True)
class AttractorSample:
    """Post-burn-in snapshot cloud; rows of ``points`` are coefficient vectors."""

    points: np.ndarray
    times: np.ndarray
    traj: np.ndarray
    params: ReactionParams
    cfg: SolverConfig
    seed: int
    burn_in: float
    ensemble_size: int
    init: str

    @property
    def count(self) -> int:
        return int(self.points.shape[0])


def _ball_rows(rng: np.random.Generator, count: int, dim: int, radius: float) -> np.ndarray:
    y = rng.standard_normal((count, dim))
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    r = radius * rng.uniform(0.0, 1.0, size=count) ** (1.0 / dim)
    return y * r[:, None]


def _evolve_chunked(C, nl, lam, T, cfg, jobs: int) -> None:
    """Advance independent trajectory rows, partitioned across ``jobs`` workers.

    Chunks are contiguous row views evolved in place and merged by position,
    so the result does not depend on the scheduling order.
    """
    if jobs <= 1 or C.shape[0] < 2:
        evolve_ensemble(C, nl, lam, T, cfg)
        return
    chunks = np.array_split(C, min(jobs, C.shape[0]))
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(evolve_ensemble, ch, nl, lam, T, cfg) for ch in chunks]
        for f in futures:
            f.result()


def sample_attractor(
    params: ReactionParams,
    cfg: SolverConfig,
    ensemble_size: int,
    burn_in: float,
    snapshots_per_traj: int,
    seed: int,
    init: str = "ball",
    snapshot_spacing: float = 0.05,
    burn_in_floor_factor: float = 5.0,
    unstable_radius_range: tuple[float, float] = (0.05, 1.0),
    jobs: int = 1,
) -> AttractorSample:
    """Evolve a seeded ensemble past burn_in and record spaced snapshots.

    Every returned point is the image of its initial datum under the
    semigroup for a time >= burn_in; the sample is reproducible from
    (seed, config).
    """
    if ensemble_size < 1 or snapshots_per_traj < 1:
        raise ConfigurationError("ensemble_size and snapshots_per_traj must be >= 1")
    if init not in ("ball", "unstable"):
        raise ConfigurationError(f"unknown init strategy {init!r}")
    basis = get_basis(cfg)
    lam1 = float(basis.lamj[0])
    floor = burn_in_floor_factor / lam1
    if burn_in < floor:
        raise ConfigurationError(f"burn_in {burn_in} below the floor {floor:g} = 5/lambda_1")

    rng = np.random.default_rng(seed)
    nl = params_nonlinearity(params)
    M = cfg.modes
    if init == "ball":
        C = _ball_rows(rng, ensemble_size, M, l2_radius(params, cfg))
    else:
        n_u = int(np.searchsorted(basis.lamj, params.lam, side="left"))
        if n_u == 0:
            # no unstable subspace: the attractor is the origin
            C = _ball_rows(rng, ensemble_size, M, min(1e-2, l2_radius(params, cfg)))
        else:
            lead = (params.lam - lam1) * burn_in
            if lead > 55.0:
                raise ConfigurationError(
                    f"arrival scheduling over {lead:.1f} e-folds exceeds double "
                    "precision; lower burn_in for the unstable-seeded sample"
                )
            a = rng.standard_normal((ensemble_size, n_u))
            a /= np.linalg.norm(a, axis=1, keepdims=True)
            lo, hi = unstable_radius_range
            a *= rng.uniform(lo, hi, size=(ensemble_size, 1))
            C = np.zeros((ensemble_size, M))
            C[:, :n_u] = a * np.exp(-(params.lam - basis.lamj[:n_u]) * burn_in)

    try:
        _evolve_chunked(C, nl, params.lam, burn_in, cfg, jobs)
    except DivergenceError as err:
        bad = _diverged_rows(C, nl, params, cfg)
        raise DivergenceError(
            f"{err} (diverged ensemble rows: {bad})", dt=err.dt, modes=err.modes
        ) from err

    snaps = [C.copy()]
    for _ in range(snapshots_per_traj - 1):
        _evolve_chunked(C, nl, params.lam, snapshot_spacing, cfg, jobs)
        snaps.append(C.copy())
    points = np.concatenate(snaps, axis=0)
    times = np.repeat(
        burn_in + snapshot_spacing * np.arange(snapshots_per_traj), ensemble_size
    )
    traj = np.tile(np.arange(ensemble_size), snapshots_per_traj)
    return AttractorSample(
        points=points,
        times=times,
        traj=traj,
        params=params,
        cfg=cfg,
        seed=seed,
        burn_in=burn_in,
        ensemble_size=ensemble_size,
        init=init,
    )


def params_nonlinearity(params: ReactionParams):
    from .galerkin import Nonlinearity

    return Nonlinearity.power_law(params.beta, params.p)


def _diverged_rows(C, nl, params, cfg) -> list[int]:
    from .galerkin import _blowup_limit_sq

    w = np.sum(C * C, axis=1)
    limit = _blowup_limit_sq(nl, params.lam, cfg)
    return [int(i) for i in np.nonzero(~np.isfinite(w) | (w > limit))[0]]


# ---------------------------------------------------------------------------
# invariant-set inequality checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundCheck:
    kind: str
    bound: float
    worst: float
    tol: float
    passed: bool
    worst_index: int

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "bound": self.bound,
            "worst": self.worst,
            "tol": self.tol,
            "passed": self.passed,
            "worst_index": self.worst_index,
        }


def verify_l2_bound(sample: AttractorSample, tol: float = 0.02) -> BoundCheck:
    """Every snapshot must satisfy |a|_L2 <= invariant-ball radius * (1 + tol)."""
    if sample.count == 0:
        raise ConfigurationError("empty sample")
    radius = l2_radius(sample.params, sample.cfg)
    norms = np.linalg.norm(sample.points, axis=1)
    i = int(np.argmax(norms))
    return BoundCheck(
        kind="l2",
        bound=radius,
        worst=float(norms[i]),
        tol=tol,
        passed=bool(norms[i] <= radius * (1.0 + tol)),
        worst_index=i,
    )


def verify_linf_bound(sample: AttractorSample, tol: float = 0.02) -> BoundCheck:
    """Every snapshot must satisfy |a|_sup <= (lam/beta)^(1/(p-2)) * (1 + tol);
    the sup-norm is evaluated on the quadrature grid."""
    if sample.count == 0:
        raise ConfigurationError("empty sample")
    basis = get_basis(sample.cfg)
    bound = sample.params.sup_bound
    worst = -1.0
    worst_i = 0
    chunk = 512
    for start in range(0, sample.count, chunk):
        vals = basis.synth(sample.points[start : start + chunk])
        sups = np.max(np.abs(vals), axis=1)
        i = int(np.argmax(sups))
        if sups[i] > worst:
            worst = float(sups[i])
            worst_i = start + i
    return BoundCheck(
        kind="linf",
        bound=bound,
        worst=worst,
        tol=tol,
        passed=bool(worst <= bound * (1.0 + tol)),
        worst_index=worst_i,
    )


@dataclass(frozen=True)
class SmoothingCheck:
    bound: float
    time_star: float
    max_ratio: float
    tol: float
    passed: bool
    pairs_used: int
    pairs_skipped: int

    def to_json_dict(self) -> dict:
        return {
            "bound": self.bound,
            "time_star": self.time_star,
            "max_ratio": self.max_ratio,
            "tol": self.tol,
            "passed": self.passed,
            "pairs_used": self.pairs_used,
            "pairs_skipped": self.pairs_skipped,
        }


def verify_smoothing(
    sample: AttractorSample, pair_count: int, seed: int, tol: float = 0.02
) -> SmoothingCheck:
    """Weak-to-strong smoothing on random snapshot pairs at t* = c_gb / lam:
    |S(t*)u0 - S(t*)v0|_H1 <= sqrt(2 lam (1 + gamma/beta)) |u0 - v0|_L2 (1 + tol)."""
    if sample.count < 2:
        raise ConfigurationError("need at least two snapshots")
    sc = smoothing_constant_parabolic(sample.params)
    rng = np.random.default_rng(seed)
    basis = get_basis(sample.cfg)
    idx = rng.integers(0, sample.count, size=(pair_count, 2))
    u = sample.points[idx[:, 0]]
    v = sample.points[idx[:, 1]]
    denom = np.linalg.norm(u - v, axis=1)
    scale = max(1.0, float(np.max(np.linalg.norm(sample.points, axis=1))))
    keep = denom > 1e-12 * scale
    skipped = int(np.sum(~keep))
    if not np.any(keep):
        raise VerificationError("all drawn snapshot pairs are degenerate")
    u, v, denom = u[keep], v[keep], denom[keep]
    block = np.empty((2 * u.shape[0], sample.cfg.modes))
    block[0::2] = u
    block[1::2] = v
    nl = params_nonlinearity(sample.params)
    evolve_ensemble(block, nl, sample.params.lam, sc.time_star, sample.cfg)
    w = block[0::2] - block[1::2]
    ratios = np.sqrt(np.sum(basis.lamj * w * w, axis=1)) / denom
    return SmoothingCheck(
        bound=sc.C,
        time_star=sc.time_star,
        max_ratio=float(np.max(ratios)),
        tol=tol,
        passed=bool(np.max(ratios) <= sc.C * (1.0 + tol)),
        pairs_used=int(u.shape[0]),
        pairs_skipped=skipped,
    )


# ---------------------------------------------------------------------------
# box-counting dimension
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoxCountReport:
    eps_grid: np.ndarray     # decreasing
    counts: np.ndarray       # nondecreasing along the grid
    slope: float
    fit_range: tuple[int, int]
    r_squared: float
    admissible_window: bool

    def to_json_dict(self) -> dict:
        return {
            "eps_grid": self.eps_grid.tolist(),
            "counts": self.counts.tolist(),
            "slope": self.slope,
            "fit_range": list(self.fit_range),
            "r_squared": self.r_squared,
            "admissible_window": self.admissible_window,
        }


def greedy_cover_counts(points: np.ndarray, eps_grid: np.ndarray) -> np.ndarray:
    """Greedy farthest-point cover sizes at every radius from one ordering pass.

    The cloud is put into canonical lexicographic order first, so the result
    is invariant under permutations and duplicate points.
    """
    order = np.lexsort(points.T[::-1])
    pts = np.ascontiguousarray(points[order])
    _, radii = backend.fps_radii(pts, stop_radius=0.0, start_index=0)
    return np.array([int(np.sum(radii > eps)) for eps in eps_grid], dtype=int)


def box_counting_dimension(
    sample: AttractorSample | np.ndarray,
    eps_grid: np.ndarray | None = None,
    min_points: int = 100,
) -> BoxCountReport:
    """Least-squares box-counting slope on log2 N_eps vs log2 (1/eps).

    The fit window keeps grid points with 10 <= N_eps <= n/10.  A cloud whose
    counts never reach 10 is treated as dimension ~ 0 and fitted over the
    whole grid (a single point has dimension zero); a cloud with large counts
    but an empty window raises, advising a larger ensemble.
    """
    is_sample = isinstance(sample, AttractorSample)
    points = sample.points if is_sample else np.asarray(sample)
    n = points.shape[0]
    if n < min_points:
        raise ConfigurationError(f"box counting needs >= {min_points} points, got {n}")
    if eps_grid is None:
        if is_sample:
            # anchor at the a-priori invariant-ball diameter, so a trivial
            # attractor reports dimension ~ 0 instead of the geometry of its
            # collapse transient at microscopic scales
            top = 2.0 * l2_radius(sample.params, sample.cfg)
        else:
            # raw cloud: max distance from the canonical first point (>= diam/2)
            order = np.lexsort(points.T[::-1])
            pts = points[order]
            top = float(np.max(np.linalg.norm(pts - pts[0], axis=1)))
        if top == 0.0:
            top = 1.0
        eps_grid = top * 10.0 ** (-np.arange(0, 37) / 12.0)
    eps_grid = np.asarray(eps_grid, dtype=float)
    if np.any(np.diff(eps_grid) >= 0):
        raise ConfigurationError("eps grid must be strictly decreasing")
    counts = greedy_cover_counts(points, eps_grid)

    lo_c, hi_c = 10, n / 10.0
    admissible = (counts >= lo_c) & (counts <= hi_c)
    if np.count_nonzero(admissible) >= 2:
        idx = np.nonzero(admissible)[0]
        window = True
    else:
        if counts.max() >= lo_c:
            raise VerificationError(
                "no admissible eps range with 10 <= N_eps <= n/10; "
                "enlarge the ensemble or refine the eps grid"
            )
        idx = np.arange(len(eps_grid))
        window = False
    xs = np.log2(1.0 / eps_grid[idx])
    ys = np.log2(counts[idx].astype(float))
    if np.all(ys == ys[0]):
        slope, r2 = 0.0, 1.0
    else:
        A = np.vstack([xs, np.ones_like(xs)]).T
        coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
        slope = float(coef[0])
        fit = A @ coef
        ss_res = float(np.sum((ys - fit) ** 2))
        ss_tot = float(np.sum((ys - np.mean(ys)) ** 2))
        r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return BoxCountReport(
        eps_grid=eps_grid,
        counts=counts,
        slope=slope,
        fit_range=(int(idx[0]), int(idx[-1])),
        r_squared=r2,
        admissible_window=window,
    )


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

def write_cloud_csv(path, sample: AttractorSample) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["point", "traj", "t"] + [f"c{j}" for j in range(1, sample.cfg.modes + 1)]
        )
        for i in range(sample.count):
            writer.writerow(
                [i, int(sample.traj[i]), f"{sample.times[i]:.17g}"]
                + [f"{c:.17g}" for c in sample.points[i]]
            )


def write_boxcount_csv(path, report: BoxCountReport) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["eps", "count", "in_fit_range"])
        i0, i1 = report.fit_range
        for i, (eps, cnt) in enumerate(zip(report.eps_grid, report.counts)):
            writer.writerow([f"{eps:.17g}", int(cnt), int(i0 <= i <= i1)])
