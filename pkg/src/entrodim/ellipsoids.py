"""Entropy bounds and certified covers for compact Hilbert-space ellipsoids.

The central object is the ellipsoid E = { u : sum_j u_j^2 / mu_j <= 1 } with
nonincreasing semi-axes-squared mu_j -> 0.  For mu_j = (c j^alpha)^-1 the
bit-entropy of E in the ambient L2 norm satisfies the closed-form upper bound
``entropy_upper_bound`` and, when the eigenvalues also grow at most like
C j^alpha, the lower bound ``entropy_lower_bound``.

``build_cover`` realises the bound constructively: truncate to the smallest d
with mu_{d+1} <= eps^2 (the discarded tail then contributes at most eps^2 to
any squared distance) and cover the truncated ellipsoid explicitly, giving a
certified sqrt(2)*eps cover of the full body.  ``covering_oracle`` brackets
the true covering number in d <= 2 with an explicit cover (upper) and an
explicit 2eps-separated packing (lower).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import backend
from .errors import (
    BoundsError,
    ConfigurationError,
    CoverConstructionError,
    TailNotResolvedError,
)
from .spectra import EigenSequence

__all__ = [
    "CoverPlan",
    "CoverVerification",
    "Ellipsoid",
    "EntropyReport",
    "OracleBracket",
    "VolumetricBound",
    "build_cover",
    "covering_oracle",
    "entropy_lower_bound",
    "entropy_report",
    "entropy_upper_bound",
    "truncation_dim",
    "verify_cover",
    "write_entropy_csv",
]

LN2 = math.log(2.0)
LN3 = math.log(3.0)


# ---------------------------------------------------------------------------
# ellipsoid model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ellipsoid:
    """Semi-axis-squared sequence mu_j, nonincreasing and positive.

    ``source`` is ``("power_law", (c, alpha))`` for mu_j = (c j^alpha)^-1,
    ``("spectrum", EigenSequence)`` for mu_j = 1/lambda_j, or
    ``("explicit", tuple_of_mu)``.
    """

    source: tuple
    _explicit: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def power_law(cls, c: float, alpha: float) -> "Ellipsoid":
        if c <= 0 or alpha <= 0:
            raise ConfigurationError("power-law constants must be positive")
        return cls(source=("power_law", (float(c), float(alpha))))

    @classmethod
    def from_spectrum(cls, seq: EigenSequence) -> "Ellipsoid":
        return cls(source=("spectrum", seq))

    @classmethod
    def explicit(cls, mu) -> "Ellipsoid":
        arr = np.asarray(mu, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ConfigurationError("mu must be a nonempty 1-d sequence")
        if np.any(arr <= 0) or np.any(np.diff(arr) > 0):
            raise ConfigurationError("mu must be positive and nonincreasing")
        arr.setflags(write=False)
        return cls(source=("explicit", None), _explicit=arr)

    @property
    def kind(self) -> str:
        return self.source[0]

    def mu(self, j: int) -> float:
        """1-based semi-axis squared."""
        if j < 1:
            raise ConfigurationError("axis index must be >= 1")
        kind = self.kind
        if kind == "power_law":
            c, alpha = self.source[1]
            return 1.0 / (c * float(j) ** alpha)
        if kind == "spectrum":
            seq: EigenSequence = self.source[1]
            return 1.0 / seq[j]
        if j > self._explicit.size:
            raise BoundsError(f"explicit mu list has only {self._explicit.size} entries")
        return float(self._explicit[j - 1])

    def mu_head(self, d: int) -> np.ndarray:
        return np.array([self.mu(j) for j in range(1, d + 1)], dtype=float)

    def source_json(self) -> dict:
        kind = self.kind
        if kind == "power_law":
            c, alpha = self.source[1]
            return {"kind": "power_law", "c": c, "alpha": alpha}
        if kind == "spectrum":
            seq: EigenSequence = self.source[1]
            return {"kind": "explicit", "mu": (1.0 / seq.values).tolist()}
        return {"kind": "explicit", "mu": self._explicit.tolist()}

    @classmethod
    def from_source_json(cls, data: dict) -> "Ellipsoid":
        if data["kind"] == "power_law":
            return cls.power_law(data["c"], data["alpha"])
        return cls.explicit(data["mu"])


def truncation_dim(e: Ellipsoid, eps: float) -> int:
    """Smallest d >= 0 with mu_{d+1} <= eps^2 (ties included)."""
    if eps <= 0:
        raise ConfigurationError("eps must be positive")
    target = eps * eps
    if e.kind == "power_law":
        c, alpha = e.source[1]
        # d+1 is the smallest k with (c k^alpha)^-1 <= eps^2
        t = (1.0 / (c * target)) ** (1.0 / alpha)
        k = max(1, int(math.floor(t)) - 2)
        while e.mu(k) > target:
            k += 1
        return k - 1
    if e.kind == "spectrum":
        seq: EigenSequence = e.source[1]
        vals = seq.values
        # smallest k with lambda_k >= 1/eps^2
        k = int(np.searchsorted(vals, 1.0 / target, side="left"))
        if k >= vals.size and vals[-1] < 1.0 / target:
            raise BoundsError(
                "spectrum too short to resolve the tail at this eps; request more eigenvalues"
            )
        return k
    arr = e._explicit
    idx = np.nonzero(arr <= target)[0]
    if idx.size == 0:
        raise TailNotResolvedError(
            f"explicit semi-axes never drop below eps^2 = {target}; tail not resolved"
        )
    return int(idx[0])


# ---------------------------------------------------------------------------
# closed-form bounds
# ---------------------------------------------------------------------------

def entropy_upper_bound(c: float, alpha: float, eps: float) -> float:
    """Bit-entropy upper bound ((ln3 + alpha)/ln2) * (2/(c eps^2))^(1/alpha)."""
    if c <= 0 or alpha <= 0 or eps <= 0:
        raise ConfigurationError("all arguments must be positive")
    return ((LN3 + alpha) / LN2) * (2.0 / (c * eps * eps)) ** (1.0 / alpha)


def entropy_lower_bound(upper_C: float, alpha: float, eps: float) -> float:
    """Bit-entropy lower bound (1/(4 C eps^2))^(1/alpha) - 1 (may be negative)."""
    if upper_C <= 0 or alpha <= 0 or eps <= 0:
        raise ConfigurationError("all arguments must be positive")
    return (1.0 / (4.0 * upper_C * eps * eps)) ** (1.0 / alpha) - 1.0


class VolumetricBound(NamedTuple):
    """Volume-packing covering bound for the truncated ellipsoid."""

    exact: float    # (3/eps)^d * prod_j sqrt(mu_j)
    relaxed: float  # 3^d * e^(alpha d), via d! >= (d/e)^d
    d: int


def volumetric_count_bound(e: Ellipsoid, eps: float) -> VolumetricBound:
    """The proof's intermediate covering-count bound for the truncated ellipsoid.

    Requires eps^2 < mu_d so the truncated body contains an eps-ball; for the
    degenerate d = 0 a single ball suffices and this bound does not apply.
    """
    if e.kind != "power_law":
        raise ConfigurationError("volumetric bound is defined for power-law ellipsoids")
    d = truncation_dim(e, eps)
    if d == 0:
        raise ConfigurationError(
            "eps^2 >= mu_1: use the degenerate single-ball cover, the volumetric "
            "bound needs eps^2 < mu_d"
        )
    mu = e.mu_head(d)
    if not (eps * eps < mu[-1]):
        raise ConfigurationError("eps^2 must be below mu_d for the inclusion argument")
    _, alpha = e.source[1]
    log_exact = d * math.log(3.0 / eps) + 0.5 * float(np.sum(np.log(mu)))
    log_relaxed = d * (LN3 + alpha)
    exact = math.exp(log_exact) if log_exact < 700 else math.inf
    relaxed = math.exp(log_relaxed) if log_relaxed < 700 else math.inf
    return VolumetricBound(exact=exact, relaxed=relaxed, d=d)


# ---------------------------------------------------------------------------
# cover plans
# ---------------------------------------------------------------------------

@dataclass
class CoverPlan:
    """Explicit cover of the full ellipsoid at radius sqrt(2) * target_eps.

    ``centers`` is an (n, d) array of points of the truncated ellipsoid; the
    coverage certificate is: in-plane distance^2 (first ``grid_d0`` axes for
    grid plans) plus the tail bound never exceeds radius^2.
    """

    d: int
    target_eps: float
    radius: float
    centers: np.ndarray
    method: str                      # "single" | "lattice-greedy" | "grid"
    mu_head_: np.ndarray             # mu_1..mu_d
    mu_next: float                   # mu_{d+1}
    in_plane_radius: float
    grid_d0: int | None = None
    grid_axes: list | None = None    # per-axis center offsets before projection
    count_bound: float | None = None  # 3^d e^(alpha d) for power-law sources
    vol_bound: VolumetricBound | None = None
    slack_factor: float | None = None

    @property
    def count(self) -> int:
        return int(self.centers.shape[0])

    def to_json_dict(self, e: Ellipsoid | None = None) -> dict:
        data = {
            "d": self.d,
            "radius": self.radius,
            "target_eps": self.target_eps,
            "method": self.method,
            "mu": self.mu_head_.tolist() + [self.mu_next],
            "centers": [list(map(float, row)) for row in self.centers],
        }
        if e is not None:
            data["source"] = e.source_json()
        return data

    def save_json(self, path, e: Ellipsoid | None = None) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(e), fh)

    @classmethod
    def load_json(cls, path) -> tuple["CoverPlan", Ellipsoid | None]:
        with open(path) as fh:
            data = json.load(fh)
        mu = np.asarray(data["mu"], dtype=float)
        d = int(data["d"])
        centers = np.asarray(data["centers"], dtype=float).reshape(-1, d)
        plan = cls(
            d=d,
            target_eps=float(data["target_eps"]),
            radius=float(data["radius"]),
            centers=centers,
            method=data.get("method", "unknown"),
            mu_head_=mu[:d],
            mu_next=float(mu[d]) if mu.size > d else float(mu[-1]),
            in_plane_radius=float(data["target_eps"]),
        )
        ellipsoid = (
            Ellipsoid.from_source_json(data["source"]) if "source" in data else None
        )
        return plan, ellipsoid


def _project_into_ellipsoid(points: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """Euclidean projection of rows onto {x : sum x_j^2/mu_j <= 1}.

    The projection onto a convex body is 1-Lipschitz, so replacing an outside
    center by its projection never increases its distance to any point of the
    body; coverage radii are preserved.
    """
    pts = np.array(points, dtype=float)
    s = np.sum(pts * pts / mu, axis=1)
    out = s > 1.0
    if not np.any(out):
        return pts
    x = pts[out]
    lo = np.zeros(x.shape[0])
    hi = np.full(x.shape[0], 1e-12)
    # z_j(theta) = x_j mu_j/(mu_j + theta); grow hi until constraint < 1
    for _ in range(200):
        val = np.sum((x * mu / (mu + hi[:, None])) ** 2 / mu, axis=1)
        if np.all(val <= 1.0):
            break
        grow = val > 1.0
        hi[grow] *= 4.0
    for _ in range(120):
        mid = 0.5 * (lo + hi)
        val = np.sum((x * mu / (mu + mid[:, None])) ** 2 / mu, axis=1)
        high = val > 1.0
        lo[high] = mid[high]
        hi[~high] = mid[~high]
    theta = 0.5 * (lo + hi)
    pts[out] = x * mu / (mu + theta[:, None])
    return pts


def _stretched_lattice_candidates(mu: np.ndarray, h: float, cap: int) -> np.ndarray:
    """Axis-aligned lattice of spacing h in stretched (unit-ball) coordinates,
    kept within the ball plus half a cell, mapped back and projected inside."""
    d = mu.size
    margin = 1.0 + h * math.sqrt(d) / 2.0
    per_axis = np.arange(-math.floor(margin / h), math.floor(margin / h) + 1) * h
    total = float(len(per_axis)) ** d
    if total > cap * 64:
        raise CoverConstructionError(
            f"lattice of {total:.3g} raw points exceeds the candidate budget"
        )
    grids = np.meshgrid(*([per_axis] * d), indexing="ij")
    y = np.stack([g.ravel() for g in grids], axis=1)
    keep = np.sum(y * y, axis=1) <= margin * margin
    y = y[keep]
    if y.shape[0] > cap:
        raise CoverConstructionError(
            f"{y.shape[0]} lattice candidates exceed the cap {cap}; increase eps"
        )
    x = y * np.sqrt(mu)
    return _project_into_ellipsoid(x, mu)


def _grid_allocation(a: np.ndarray, budget: float) -> np.ndarray | None:
    """Per-axis interval counts n_j covering [-a_j, a_j] with
    sum (a_j/n_j)^2 <= budget, greedily thinned from the equal-radius start."""
    d0 = a.size
    if budget <= 0:
        return None
    n = np.ceil(a * math.sqrt(d0 / budget)).astype(np.int64)
    n = np.maximum(n, 1)
    r2 = np.sum((a / n) ** 2)
    if r2 > budget:
        return None
    improved = True
    while improved:
        improved = False
        order = np.argsort(-n)
        for j in order:
            if n[j] <= 1:
                continue
            delta = (a[j] / (n[j] - 1)) ** 2 - (a[j] / n[j]) ** 2
            if r2 + delta <= budget:
                r2 += delta
                n[j] -= 1
                improved = True
    return n


def build_cover(
    e: Ellipsoid,
    eps: float,
    d_max: int = 12,
    max_centers: int = 1_000_000,
    candidate_cap: int = 4_000_000,
) -> CoverPlan:
    """Constructive cover of the full ellipsoid at radius sqrt(2)*eps.

    d <= 3 uses the proof-style construction: greedy farthest-point selection
    over a fine lattice (spacing eps/8 in stretched coordinates), certified
    through the lattice mesh slack.  Larger d uses a product grid over a head
    block of d0 <= d axes, with the remaining axes absorbed into the tail
    bound (squared budget 2 eps^2 - mu_{d0+1}); this keeps center counts
    tractable up to d_max while remaining a provable cover.
    """
    d = truncation_dim(e, eps)
    if d > d_max:
        raise CoverConstructionError(
            f"truncation dimension {d} exceeds d_max={d_max}: dimension too large "
            "for a constructive cover"
        )
    radius = math.sqrt(2.0) * eps
    mu_next = e.mu(d + 1)

    if d == 0:
        plan = CoverPlan(
            d=0,
            target_eps=eps,
            radius=radius,
            centers=np.zeros((1, 0)),
            method="single",
            mu_head_=np.zeros(0),
            mu_next=mu_next,
            in_plane_radius=0.0,
        )
        _attach_power_law_bounds(plan, e, eps)
        return plan

    mu = e.mu_head(d)

    if d <= 3:
        h = eps / 8.0
        for _ in range(6):
            slack = (h / 2.0) * math.sqrt(float(np.sum(mu)))
            if slack <= eps / 2.0:
                break
            h /= 2.0
        else:
            raise CoverConstructionError(
                "lattice refinement cap reached without certifiable mesh slack"
            )
        r_c = eps - slack
        cand = _stretched_lattice_candidates(mu, h, candidate_cap)
        start = int(np.argmin(np.sum(cand * cand, axis=1)))
        sel, _ = backend.fps_radii(cand, stop_radius=r_c, start_index=start)
        centers = cand[np.sort(sel)]
        plan = CoverPlan(
            d=d,
            target_eps=eps,
            radius=radius,
            centers=centers,
            method="lattice-greedy",
            mu_head_=mu,
            mu_next=mu_next,
            in_plane_radius=eps,
        )
    else:
        best = None
        for d0 in range(1, d + 1):
            budget = 2.0 * eps * eps - e.mu(d0 + 1)
            n = _grid_allocation(np.sqrt(mu[:d0]), budget)
            if n is None:
                continue
            count = float(np.prod(n.astype(float)))
            if best is None or count < best[0]:
                best = (count, d0, n, budget)
        if best is None:
            raise CoverConstructionError("no feasible grid allocation found")
        count, d0, n, budget = best
        if count > max_centers:
            raise CoverConstructionError(
                f"grid cover needs {count:.3g} centers (> {max_centers}); "
                "increase eps or the center budget"
            )
        axes = [
            np.sqrt(mu[j]) * (2.0 * np.arange(n[j]) + 1.0 - n[j]) / n[j]
            for j in range(d0)
        ]
        # self-certificate: worst cell corner plus the full tail budget
        worst_sq = float(np.sum(mu[:d0] / n.astype(float) ** 2)) + e.mu(d0 + 1)
        if worst_sq > 2.0 * eps * eps * (1.0 + 1e-12):
            raise CoverConstructionError("grid allocation violates its radius budget")
        grids = np.meshgrid(*axes, indexing="ij")
        head = np.stack([g.ravel() for g in grids], axis=1)
        head = _project_into_ellipsoid(head, mu[:d0])
        centers = np.zeros((head.shape[0], d))
        centers[:, :d0] = head
        plan = CoverPlan(
            d=d,
            target_eps=eps,
            radius=radius,
            centers=centers,
            method="grid",
            mu_head_=mu,
            mu_next=mu_next,
            in_plane_radius=math.sqrt(budget),
            grid_d0=d0,
            grid_axes=axes,
        )

    _attach_power_law_bounds(plan, e, eps)
    return plan


def _attach_power_law_bounds(plan: CoverPlan, e: Ellipsoid, eps: float) -> None:
    if e.kind != "power_law":
        return
    _, alpha = e.source[1]
    log_bound = plan.d * (LN3 + alpha)
    plan.count_bound = math.exp(log_bound) if log_bound < 700 else math.inf
    if plan.count > 1 and math.log(plan.count) > log_bound:
        raise CoverConstructionError(
            f"cover count {plan.count} exceeds the 3^d e^(alpha d) bound"
        )
    if plan.d >= 1:
        plan.vol_bound = volumetric_count_bound(e, eps)
        plan.slack_factor = plan.count / plan.vol_bound.exact


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverVerification:
    passed: bool
    samples: int
    max_distance: float
    radius: float
    witness: np.ndarray | None = None
    witness_tail: float | None = None

    def __str__(self):
        verdict = "pass" if self.passed else "FAIL"
        return (
            f"cover verification {verdict}: {self.samples} samples, "
            f"max distance {self.max_distance:.6g} vs radius {self.radius:.6g}"
        )


def _sample_truncated(rng: np.random.Generator, mu: np.ndarray, count: int) -> np.ndarray:
    """Uniform draws from the truncated ellipsoid, half projected to the boundary
    (covering is tightest there)."""
    d = mu.size
    y = rng.standard_normal((count, d))
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    r = rng.uniform(0.0, 1.0, size=count) ** (1.0 / d)
    n_boundary = count // 2
    r[:n_boundary] = 1.0
    return y * r[:, None] * np.sqrt(mu)


def verify_cover(
    plan: CoverPlan,
    e: Ellipsoid,
    samples: int = 100_000,
    seed: int = 0,
    chunk: int = 2048,
) -> CoverVerification:
    """Seeded sample check that the plan covers the full ellipsoid.

    Draws points of the truncated body (boundary-biased) and gives every
    sample the worst admissible tail mass mu_{d+1} * (1 - stretched_norm^2);
    each augmented point must lie within ``plan.radius`` of some center.  For
    grid plans the distance is evaluated against the (projected) center of
    the sample's own grid cell, which upper-bounds the nearest-center
    distance.
    """
    rng = np.random.default_rng(seed)
    radius = plan.radius
    guard = radius * (1.0 + 1e-12)
    if plan.d == 0:
        # every point of E has squared norm at most mu_1 <= eps^2
        tail = math.sqrt(plan.mu_next)
        passed = tail <= guard
        return CoverVerification(
            passed=passed,
            samples=samples,
            max_distance=tail,
            radius=radius,
            witness=None if passed else np.zeros(0),
            witness_tail=None if passed else tail,
        )

    mu = plan.mu_head_
    worst = -1.0
    witness = None
    witness_tail = None
    done = 0
    while done < samples:
        b = min(chunk, samples - done)
        pts = _sample_truncated(rng, mu, b)
        stretched = np.sum(pts * pts / mu, axis=1)
        tail_sq = plan.mu_next * np.clip(1.0 - stretched, 0.0, None)
        if plan.method == "grid" and plan.grid_axes is not None:
            # per-cell shortcut; plans loaded from JSON lack the grid
            # structure and take the generic pairwise branch below
            d0 = plan.grid_d0
            near = np.empty((b, d0))
            for j, ax in enumerate(plan.grid_axes):
                idx = np.clip(np.searchsorted(ax, pts[:, j]), 1, ax.size - 1) if ax.size > 1 else np.zeros(b, dtype=int)
                if ax.size > 1:
                    left = ax[idx - 1]
                    right = ax[idx]
                    pick = np.where(pts[:, j] - left <= right - pts[:, j], idx - 1, idx)
                    near[:, j] = ax[pick]
                else:
                    near[:, j] = ax[0]
            near = _project_into_ellipsoid(near, mu[: d0])
            diff = pts[:, :d0] - near
            in_plane_sq = np.sum(diff * diff, axis=1) + np.sum(
                pts[:, d0:] * pts[:, d0:], axis=1
            )
        else:
            c = plan.centers
            cross = pts @ c.T
            in_plane_sq = (
                np.sum(pts * pts, axis=1)[:, None]
                + np.sum(c * c, axis=1)[None, :]
                - 2.0 * cross
            ).min(axis=1)
            in_plane_sq = np.clip(in_plane_sq, 0.0, None)
        dist = np.sqrt(in_plane_sq + tail_sq)
        i = int(np.argmax(dist))
        if dist[i] > worst:
            worst = float(dist[i])
            witness = pts[i].copy()
            witness_tail = float(math.sqrt(tail_sq[i]))
        done += b
    passed = worst <= guard
    return CoverVerification(
        passed=passed,
        samples=samples,
        max_distance=worst,
        radius=radius,
        witness=None if passed else witness,
        witness_tail=None if passed else witness_tail,
    )


# ---------------------------------------------------------------------------
# covering-number oracle (d <= 2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OracleBracket:
    lo: int
    hi: int
    d: int
    eps: float
    widened: bool = False


def covering_oracle(e: Ellipsoid, eps: float, d: int) -> OracleBracket:
    """Certified bracket lo <= N_eps(truncated E, first d axes) <= hi.

    The upper certificate is an explicit eps-cover; the lower one an explicit
    set of pairwise (> 2 eps)-separated points, each eps-ball holding at most
    one of them.  d = 1 is solved exactly in closed form.
    """
    if d not in (1, 2):
        raise ConfigurationError("covering oracle supports d in {1, 2} only")
    if eps <= 0:
        raise ConfigurationError("eps must be positive")
    mu = e.mu_head(d)

    if d == 1:
        a = math.sqrt(mu[0])
        n = max(1, int(math.ceil(a / eps - 1e-12)))
        return OracleBracket(lo=n, hi=n, d=1, eps=eps)

    h = eps / 8.0
    widened = False
    for _ in range(6):
        slack = (h / 2.0) * math.sqrt(float(np.sum(mu)))
        if slack <= eps / 4.0:
            break
        h /= 2.0
    else:
        widened = True
    cand = _stretched_lattice_candidates(mu, h, cap=4_000_000)
    start = int(np.argmin(np.sum(cand * cand, axis=1)))
    sel_cover, _ = backend.fps_radii(cand, stop_radius=eps - slack, start_index=start)
    # packing from an extreme point: a center start wastes one ball of slack
    far = int(np.argmax(np.sum(cand * cand, axis=1)))
    sel_pack, _ = backend.fps_radii(cand, stop_radius=2.0 * eps, start_index=far)
    return OracleBracket(
        lo=len(sel_pack), hi=len(sel_cover), d=2, eps=eps, widened=widened
    )


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EntropyReport:
    eps: float
    upper_bits: float
    lower_bits: float | None = None
    oracle_bracket: tuple[int, int] | None = None


def entropy_report(
    c: float,
    alpha: float,
    eps: float,
    upper_C: float | None = None,
    oracle: OracleBracket | None = None,
) -> EntropyReport:
    upper = entropy_upper_bound(c, alpha, eps)
    lower = entropy_lower_bound(upper_C, alpha, eps) if upper_C is not None else None
    bracket = None
    if oracle is not None:
        bracket = (oracle.lo, oracle.hi)
        if oracle.lo > oracle.hi:
            raise ConfigurationError("oracle bracket inverted")
        if math.log2(oracle.lo) > upper:
            raise ConfigurationError(
                f"oracle lower count {oracle.lo} contradicts the entropy upper bound"
            )
    return EntropyReport(
        eps=eps, upper_bits=upper, lower_bits=lower, oracle_bracket=bracket
    )


def write_entropy_csv(path, reports: list[EntropyReport]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["eps", "upper_bits", "lower_bits", "lo", "hi"])
        for r in reports:
            lo, hi = r.oracle_bracket if r.oracle_bracket else ("", "")
            lower = f"{r.lower_bits:.17g}" if r.lower_bits is not None else ""
            writer.writerow([f"{r.eps:.17g}", f"{r.upper_bits:.17g}", lower, lo, hi])
