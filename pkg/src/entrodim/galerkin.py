"""Spectral Galerkin semigroup for u_t - u_xx + g(u) = lam*u on (0, L), Dirichlet.

States are coefficient vectors in the orthonormal sine eigenbasis
w_j(x) = sqrt(2/L) sin(j pi x / L), so |u|_L2^2 = sum u_j^2 and
|u_x|_L2^2 = sum lambda_j u_j^2 with lambda_j = (j pi / L)^2.  The power-law
nonlinearity is evaluated pseudo-spectrally on a node grid wide enough to
integrate cubic products exactly (default 3M - 1 nodes); the linear stiff
part is treated implicitly (IMEX-Euler default, ETDRK2 optional).

Also provides the Newton equilibrium solver for lam*u = -u_xx + g(u) with
deterministic multi-start enumeration, and the weak-to-strong smoothing
ratio used by the attractor experiments.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import (
    ConfigurationError,
    DivergenceError,
    NewtonError,
    NumericsError,
)

__all__ = [
    "EnergyTrace",
    "GalerkinState",
    "Nonlinearity",
    "SineBasis",
    "SolverConfig",
    "difference_energy_trace",
    "enumerate_equilibria",
    "equilibrium_residual",
    "evolve",
    "evolve_ensemble",
    "get_basis",
    "pair_energy_traces",
    "smoothing_ratio",
    "solve_equilibrium",
    "traced_pair_evolution",
    "verify_equilibrium_lipschitz",
    "write_state_csv",
    "write_trace_csv",
]


# ---------------------------------------------------------------------------
# model types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Nonlinearity:
    """Either g(s) = beta |s|^(p-2) s ("power_law") or the linear spectral
    construction g(u) = sum_{j<=n} (lam - lambda_j) P_j u ("spectral_projection")."""

    kind: str
    beta: float | None = None
    p: float | None = None
    lam: float | None = None
    n: int | None = None

    @classmethod
    def power_law(cls, beta: float, p: float) -> "Nonlinearity":
        if beta <= 0 or not p > 2:
            raise ConfigurationError("power law needs beta > 0 and p > 2")
        return cls(kind="power_law", beta=float(beta), p=float(p))

    @classmethod
    def spectral_projection(cls, lam: float, n: int) -> "Nonlinearity":
        if lam <= 0 or n < 1:
            raise ConfigurationError("spectral projection needs lam > 0 and n >= 1")
        return cls(kind="spectral_projection", lam=float(lam), n=int(n))

    @property
    def gamma(self) -> float:
        """Lipschitz factor gamma = beta (p - 1) of the canonical power law."""
        if self.kind != "power_law":
            raise ConfigurationError("gamma is defined for the power law only")
        return self.beta * (self.p - 1.0)

    def sup_bound(self, lam: float) -> float:
        if self.kind != "power_law":
            raise ConfigurationError("sup bound is defined for the power law only")
        return (lam / self.beta) ** (1.0 / (self.p - 2.0))


@dataclass(frozen=True)
class GalerkinState:
    """Coefficients in the sine eigenbasis at a given time."""

    coeffs: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1:
            raise ConfigurationError("coefficients must be a 1-d vector")
        if not np.all(np.isfinite(c)):
            raise NumericsError("non-finite coefficients in state")
        object.__setattr__(self, "coeffs", c)

    @property
    def modes(self) -> int:
        return int(self.coeffs.size)

    def l2(self) -> float:
        return float(np.linalg.norm(self.coeffs))


@dataclass(frozen=True)
class SolverConfig:
    """Discretization parameters; dt and quadrature_nodes default from modes."""

    modes: int = 64
    length: float = math.pi
    dt: float | None = None
    quadrature_nodes: int | None = None
    integrator: str = "imex_euler"
    newton_tol: float = 1e-11
    newton_max_iter: int = 60

    def __post_init__(self):
        if self.modes < 1:
            raise ConfigurationError("modes must be >= 1")
        if self.length <= 0:
            raise ConfigurationError("interval length must be positive")
        if self.dt is not None and not self.dt > 0:
            raise ConfigurationError("dt must be positive")
        if self.integrator not in ("imex_euler", "etdrk2"):
            raise ConfigurationError(f"unknown integrator {self.integrator!r}")
        k = self.effective_quadrature_nodes
        if k < math.ceil(1.5 * self.modes):
            raise ConfigurationError(
                f"quadrature_nodes={k} below the dealiasing floor {math.ceil(1.5*self.modes)}"
            )
        if self.newton_tol <= 0 or self.newton_max_iter < 1:
            raise ConfigurationError("invalid Newton settings")

    @property
    def effective_quadrature_nodes(self) -> int:
        # 3M - 1 nodes integrate products of cubic sine polynomials exactly
        return self.quadrature_nodes if self.quadrature_nodes is not None else 3 * self.modes - 1

    @property
    def lambda_max(self) -> float:
        return (self.modes * math.pi / self.length) ** 2

    @property
    def effective_dt(self) -> float:
        return self.dt if self.dt is not None else min(1e-3, 0.1 / self.lambda_max)


class SineBasis:
    """Precomputed transforms between coefficients and quadrature-node values."""

    def __init__(self, length: float, modes: int, nodes: int):
        self.length = length
        self.modes = modes
        self.nodes = nodes
        j = np.arange(1, modes + 1, dtype=float)
        self.lamj = (j * math.pi / length) ** 2
        x = np.arange(1, nodes + 1, dtype=float) * (length / (nodes + 1))
        self.x = x
        # (K, M) synthesis matrix; the discrete sine orthogonality makes
        # weight * S^T S the identity exactly (up to rounding)
        self.S = np.sqrt(2.0 / length) * np.sin(np.outer(x, j * math.pi / length))
        self.weight = length / (nodes + 1)

    def synth(self, coeffs: np.ndarray) -> np.ndarray:
        return coeffs @ self.S.T

    def project(self, values: np.ndarray) -> np.ndarray:
        return self.weight * (values @ self.S)

    def l2(self, coeffs: np.ndarray) -> float:
        return float(np.linalg.norm(coeffs))

    def h1(self, coeffs: np.ndarray) -> float:
        return float(math.sqrt(np.sum(self.lamj * coeffs * coeffs)))

    def sup(self, coeffs: np.ndarray) -> float:
        return float(np.max(np.abs(self.synth(coeffs))))


_BASIS_CACHE: dict[tuple, SineBasis] = {}


def get_basis(cfg: SolverConfig) -> SineBasis:
    key = (cfg.length, cfg.modes, cfg.effective_quadrature_nodes)
    if key not in _BASIS_CACHE:
        _BASIS_CACHE[key] = SineBasis(*key)
    return _BASIS_CACHE[key]


# ---------------------------------------------------------------------------
# time stepping
# ---------------------------------------------------------------------------

def _blowup_limit_sq(nl: Nonlinearity, lam: float, cfg: SolverConfig) -> float:
    if nl.kind == "power_law":
        lam1 = (math.pi / cfg.length) ** 2
        radius_sq = (
            2.0 * (nl.p - 2.0) / nl.p**2 / (nl.beta * lam1)
            * cfg.length * lam ** (nl.p / (nl.p - 2.0))
        )
        return (1e3**2) * radius_sq
    return 1e16


def _step_plan(T: float, dt: float) -> tuple[int, float]:
    """Number of steps and length of the final (possibly shorter) step."""
    if T <= 0:
        raise ConfigurationError("horizon T must be positive")
    n = max(1, int(math.ceil(T / dt - 1e-12)))
    last = T - (n - 1) * dt
    return n, last


def _advance_imex(
    C: np.ndarray,
    nl: Nonlinearity,
    lam: float,
    T: float,
    cfg: SolverConfig,
    basis: SineBasis,
    w_out: np.ndarray | None = None,
    v_out: np.ndarray | None = None,
    pair_mode: bool = False,
    record_offset: int = 0,
) -> tuple[int, float]:
    dt = cfg.effective_dt
    nsteps, last = _step_plan(T, dt)
    blow_sq = _blowup_limit_sq(nl, lam, cfg)
    lamj = basis.lamj

    if nl.kind == "spectral_projection":
        # diagonal exact update: modes j <= n are frozen, the rest decay
        n = min(nl.n, cfg.modes)
        def run(steps: int, step_dt: float, offset: int):
            denom = 1.0 + step_dt * (lamj - lam)
            numer = np.ones_like(lamj)
            numer[:n] = 1.0 - step_dt * (lam - lamj[:n])
            factor = numer / denom
            for i in range(1, steps + 1):
                np.multiply(C, factor, out=C)
                if w_out is not None:
                    d = C[0::2] - C[1::2] if pair_mode else C
                    w_out[offset + i] = np.sum(d * d, axis=1)
                    v_out[offset + i] = np.sum(lamj * d * d, axis=1)
            if not np.all(np.isfinite(C)):
                raise NumericsError("non-finite state in spectral-projection evolution")
        if nsteps > 1:
            run(nsteps - 1, dt, record_offset)
        run(1, last, record_offset + nsteps - 1)
        return nsteps, dt

    def run_kernel(steps: int, step_dt: float, offset: int):
        denom = 1.0 + step_dt * (lamj - lam)
        status, done = backend.imex_steps(
            C,
            basis.S,
            denom,
            step_dt * basis.weight,
            nl.beta,
            nl.p,
            steps,
            blow_sq,
            1,
            lamj=lamj,
            w_out=w_out,
            v_out=v_out,
            pair_mode=pair_mode,
            offset=offset,
        )
        if status == backend.STATUS_BLOWUP:
            raise DivergenceError(
                f"trajectory exceeded the blow-up threshold after {offset + done} steps "
                f"(dt={step_dt:g}, modes={cfg.modes}); reduce dt or refine modes",
                dt=step_dt,
                modes=cfg.modes,
            )
        if status == backend.STATUS_NAN:
            raise NumericsError(
                f"non-finite state after {offset + done} steps (dt={step_dt:g}, modes={cfg.modes})"
            )

    if nsteps > 1:
        run_kernel(nsteps - 1, dt, record_offset)
    run_kernel(1, last, record_offset + nsteps - 1)
    return nsteps, dt


def _phi1(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    small = np.abs(z) < 1e-5
    zs = z[small]
    out[small] = 1.0 + zs / 2.0 + zs * zs / 6.0
    zb = z[~small]
    out[~small] = np.expm1(zb) / zb
    return out


def _phi2(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    small = np.abs(z) < 1e-4
    zs = z[small]
    out[small] = 0.5 + zs / 6.0 + zs * zs / 24.0
    zb = z[~small]
    out[~small] = (np.expm1(zb) - zb) / (zb * zb)
    return out


def _advance_etdrk2(
    C: np.ndarray,
    nl: Nonlinearity,
    lam: float,
    T: float,
    cfg: SolverConfig,
    basis: SineBasis,
) -> tuple[int, float]:
    if nl.kind != "power_law":
        raise ConfigurationError("etdrk2 is implemented for the power-law nonlinearity")
    dt = cfg.effective_dt
    nsteps, last = _step_plan(T, dt)
    blow_sq = _blowup_limit_sq(nl, lam, cfg)
    Ldiag = lam - basis.lamj

    def ghat(block: np.ndarray) -> np.ndarray:
        v = basis.synth(block)
        if nl.p == 4.0:
            g = nl.beta * (v * v * v)
        else:
            g = nl.beta * v * np.abs(v) ** (nl.p - 2.0)
        return basis.project(g)

    for i in range(1, nsteps + 1):
        h = dt if i < nsteps else last
        z = h * Ldiag
        ez = np.exp(z)
        f1 = h * _phi1(z)
        f2 = h * _phi2(z)
        g0 = ghat(C)
        a = ez * C - f1 * g0
        C[...] = a - f2 * (ghat(a) - g0)
        if i % 64 == 0 or i == nsteps:
            w = np.sum(C * C, axis=1)
            if not np.all(np.isfinite(w)):
                raise NumericsError("non-finite state in etdrk2 evolution")
            if np.any(w > blow_sq):
                raise DivergenceError(
                    f"etdrk2 trajectory blew up (dt={h:g}, modes={cfg.modes})",
                    dt=h,
                    modes=cfg.modes,
                )
    return nsteps, dt


def evolve_ensemble(
    C: np.ndarray,
    nl: Nonlinearity,
    lam: float,
    T: float,
    cfg: SolverConfig,
    w_out: np.ndarray | None = None,
    v_out: np.ndarray | None = None,
    pair_mode: bool = False,
) -> np.ndarray:
    """Advance a block of trajectories (rows) by T in place; returns the block."""
    if lam <= 0:
        raise ConfigurationError("lam must be positive")
    basis = get_basis(cfg)
    if C.shape[1] != cfg.modes:
        raise ConfigurationError("state width disagrees with cfg.modes")
    if cfg.integrator == "etdrk2":
        if w_out is not None:
            raise ConfigurationError("per-step recording is an imex_euler feature")
        _advance_etdrk2(C, nl, lam, T, cfg, basis)
    else:
        _advance_imex(C, nl, lam, T, cfg, basis, w_out, v_out, pair_mode)
    return C


def evolve(
    state: GalerkinState, nl: Nonlinearity, lam: float, T: float, cfg: SolverConfig
) -> GalerkinState:
    """Approximate the semigroup S(T) applied to one state."""
    C = state.coeffs[None, :].copy()
    evolve_ensemble(C, nl, lam, T, cfg)
    return GalerkinState(coeffs=C[0], time=state.time + T)


# ---------------------------------------------------------------------------
# energy traces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyTrace:
    """Per-step squared norms W(t) = |w|_L2^2 and V(t) = |w_x|_L2^2."""

    times: np.ndarray
    W: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        if not (len(self.times) == len(self.W) == len(self.V)):
            raise ConfigurationError("trace arrays must share a length")
        if np.any(np.diff(self.times) <= 0):
            raise ConfigurationError("trace times must increase")

    def integral_V(self) -> np.ndarray:
        """Cumulative trapezoid integral of V on the trace grid."""
        inc = 0.5 * (self.V[1:] + self.V[:-1]) * np.diff(self.times)
        return np.concatenate(([0.0], np.cumsum(inc)))

    def growth_ratio(self, lam: float) -> float:
        """max_t (W(t) + 2 int_0^t V) / (e^(2 lam t) W(0)); 0 for a zero trace."""
        lhs = self.W + 2.0 * self.integral_V()
        if self.W[0] == 0.0:
            return 0.0 if np.all(lhs == 0.0) else math.inf
        rhs = np.exp(2.0 * lam * self.times) * self.W[0]
        return float(np.max(lhs / rhs))


def difference_energy_trace(
    u0: GalerkinState,
    v0: GalerkinState,
    nl: Nonlinearity,
    lam: float,
    T: float,
    cfg: SolverConfig,
) -> EnergyTrace:
    """Evolve both states jointly and record the difference energies each step."""
    basis = get_basis(cfg)
    dt = cfg.effective_dt
    nsteps, last = _step_plan(T, dt)
    C = np.stack([u0.coeffs, v0.coeffs]).astype(float)
    W = np.empty((nsteps + 1, 1))
    V = np.empty((nsteps + 1, 1))
    d = C[0] - C[1]
    W[0, 0] = float(np.sum(d * d))
    V[0, 0] = float(np.sum(basis.lamj * d * d))
    evolve_ensemble(C, nl, lam, T, cfg, w_out=W, v_out=V, pair_mode=True)
    times = np.concatenate((np.arange(nsteps, dtype=float) * dt, [(nsteps - 1) * dt + last]))
    return EnergyTrace(times=times, W=W[:, 0], V=V[:, 0])


def pair_energy_traces(
    pairs: np.ndarray,  # (2*npairs, M), adjacent rows form pairs
    nl: Nonlinearity,
    lam: float,
    T: float,
    cfg: SolverConfig,
) -> tuple[np.ndarray, list[EnergyTrace], np.ndarray]:
    """Batched difference traces for many pairs; returns (times, traces, final states)."""
    basis = get_basis(cfg)
    dt = cfg.effective_dt
    nsteps, last = _step_plan(T, dt)
    npairs = pairs.shape[0] // 2
    C = np.array(pairs, dtype=float)
    W = np.empty((nsteps + 1, npairs))
    V = np.empty((nsteps + 1, npairs))
    d = C[0::2] - C[1::2]
    W[0] = np.sum(d * d, axis=1)
    V[0] = np.sum(basis.lamj * d * d, axis=1)
    evolve_ensemble(C, nl, lam, T, cfg, w_out=W, v_out=V, pair_mode=True)
    times = np.concatenate((np.arange(nsteps, dtype=float) * dt, [(nsteps - 1) * dt + last]))
    traces = [EnergyTrace(times=times, W=W[:, i], V=V[:, i]) for i in range(npairs)]
    return times, traces, C


def traced_pair_evolution(
    pairs: np.ndarray,
    nl: Nonlinearity,
    lam: float,
    T: float,
    cfg: SolverConfig,
    snapshots: int = 64,
) -> tuple[list[EnergyTrace], list[tuple[float, np.ndarray]]]:
    """Pair traces plus strided difference snapshots (for Linf columns).

    Returns one EnergyTrace per pair (per-step W, V of the difference) and a
    list of (t, diffs) rows with ``diffs`` of shape (npairs, modes), sampled
    at about ``snapshots`` evenly spaced step indices including both ends.
    """
    basis = get_basis(cfg)
    dt = cfg.effective_dt
    nsteps, last = _step_plan(T, dt)
    npairs = pairs.shape[0] // 2
    C = np.array(pairs, dtype=float)
    W = np.empty((nsteps + 1, npairs))
    V = np.empty((nsteps + 1, npairs))
    d = C[0::2] - C[1::2]
    W[0] = np.sum(d * d, axis=1)
    V[0] = np.sum(basis.lamj * d * d, axis=1)
    marks = np.unique(np.linspace(0, nsteps, min(snapshots, nsteps) + 1).astype(int))
    snaps = [(0.0, d.copy())]
    prev = 0
    for m in marks[1:]:
        seg_steps = int(m - prev)
        seg_T = seg_steps * dt if m < nsteps else (nsteps - 1) * dt + last - prev * dt
        _advance_imex(
            C, nl, lam, seg_T, cfg, basis,
            w_out=W, v_out=V, pair_mode=True, record_offset=prev,
        )
        t = m * dt if m < nsteps else (nsteps - 1) * dt + last
        snaps.append((float(t), (C[0::2] - C[1::2]).copy()))
        prev = m
    times = np.concatenate(
        (np.arange(nsteps, dtype=float) * dt, [(nsteps - 1) * dt + last])
    )
    traces = [EnergyTrace(times=times, W=W[:, i], V=V[:, i]) for i in range(npairs)]
    return traces, snaps


def smoothing_ratio(
    u0: GalerkinState,
    v0: GalerkinState,
    nl: Nonlinearity,
    lam: float,
    cfg: SolverConfig,
    t_star: float | None = None,
) -> float:
    """|S(t*) u0 - S(t*) v0|_H1 / |u0 - v0|_L2 at the smoothing time t*.

    For the canonical power law t* defaults to 1/((2 + gamma/beta) lam)
    = 1/((p + 1) lam); for the spectral projection pass t_star explicitly.
    """
    basis = get_basis(cfg)
    w0 = u0.coeffs - v0.coeffs
    denom = float(np.linalg.norm(w0))
    if denom == 0.0 or not np.isfinite(denom):
        raise ConfigurationError("degenerate pair: identical initial states")
    if t_star is None:
        if nl.kind != "power_law":
            raise ConfigurationError("t_star is required for non-power-law nonlinearities")
        t_star = 1.0 / ((2.0 + nl.gamma / nl.beta) * lam)
    C = np.stack([u0.coeffs, v0.coeffs]).astype(float)
    evolve_ensemble(C, nl, lam, t_star, cfg)
    w = C[0] - C[1]
    return float(math.sqrt(np.sum(basis.lamj * w * w))) / denom


# ---------------------------------------------------------------------------
# equilibria
# ---------------------------------------------------------------------------

def _ghat_and_slope(
    c: np.ndarray, nl: Nonlinearity, lam: float, basis: SineBasis
) -> tuple[np.ndarray, np.ndarray | None]:
    if nl.kind == "spectral_projection":
        g = np.zeros_like(c)
        n = min(nl.n, c.size)
        g[:n] = (lam - basis.lamj[:n]) * c[:n]
        return g, None
    v = basis.synth(c)
    if nl.p == 4.0:
        g = nl.beta * (v * v * v)
    else:
        g = nl.beta * v * np.abs(v) ** (nl.p - 2.0)
    return basis.project(g), nl.beta * (nl.p - 1.0) * np.abs(v) ** (nl.p - 2.0)


def equilibrium_residual(
    c: np.ndarray, nl: Nonlinearity, lam: float, basis: SineBasis
) -> np.ndarray:
    """Galerkin residual of lam*u = A u + g(u): F(c) = (lambda_j - lam) c + ghat(c)."""
    g, _ = _ghat_and_slope(c, nl, lam, basis)
    return (basis.lamj - lam) * c + g


def solve_equilibrium(
    guess: GalerkinState, nl: Nonlinearity, lam: float, cfg: SolverConfig
) -> GalerkinState:
    """Damped Newton for the Galerkin equilibrium equation."""
    basis = get_basis(cfg)
    c = guess.coeffs.astype(float).copy()
    tol = cfg.newton_tol
    res = equilibrium_residual(c, nl, lam, basis)
    rnorm = float(np.linalg.norm(res))
    for _ in range(cfg.newton_max_iter):
        if rnorm <= tol:
            return GalerkinState(coeffs=c, time=guess.time)
        if nl.kind == "spectral_projection":
            jac = np.diag(basis.lamj - lam)
            n = min(nl.n, c.size)
            jac[:n, :n] += np.diag(lam - basis.lamj[:n])
        else:
            v = basis.synth(c)
            slope = nl.beta * (nl.p - 1.0) * np.abs(v) ** (nl.p - 2.0)
            jac = np.diag(basis.lamj - lam) + basis.weight * (basis.S.T * slope) @ basis.S
        try:
            step = np.linalg.solve(jac, res)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jac, res, rcond=None)[0]
        scale = 1.0
        for _ in range(12):
            trial = c - scale * step
            tres = equilibrium_residual(trial, nl, lam, basis)
            tnorm = float(np.linalg.norm(tres))
            if tnorm < rnorm or tnorm <= tol:
                c, res, rnorm = trial, tres, tnorm
                break
            scale *= 0.5
        else:
            raise NewtonError(
                f"Newton line search stalled at residual {rnorm:.3e}", residual=rnorm
            )
    if rnorm <= tol:
        return GalerkinState(coeffs=c, time=guess.time)
    raise NewtonError(
        f"Newton did not reach tolerance {tol:g} in {cfg.newton_max_iter} iterations "
        f"(last residual {rnorm:.3e})",
        residual=rnorm,
    )


def enumerate_equilibria(
    nl: Nonlinearity, lam: float, cfg: SolverConfig
) -> list[GalerkinState]:
    """Deterministic multi-start Newton enumeration.

    Seeds: zero plus +-a w_j for j up to the number of unstable modes plus
    one and a in {0.1, 1, sup bound}.  Results are deduplicated at pairwise
    L2 distance 10 * newton_tol.
    """
    basis = get_basis(cfg)
    n_low = int(np.searchsorted(basis.lamj, lam, side="left"))
    amps = [0.1, 1.0]
    if nl.kind == "power_law":
        amps.append(nl.sup_bound(lam))
    seeds = [np.zeros(cfg.modes)]
    for j in range(min(n_low + 1, cfg.modes)):
        for a in amps:
            for sign in (1.0, -1.0):
                s = np.zeros(cfg.modes)
                s[j] = sign * a
                seeds.append(s)
    found: list[GalerkinState] = []
    for s in seeds:
        try:
            eq = solve_equilibrium(GalerkinState(coeffs=s), nl, lam, cfg)
        except NewtonError:
            continue
        if all(
            np.linalg.norm(eq.coeffs - f.coeffs) > 10.0 * cfg.newton_tol for f in found
        ):
            found.append(eq)
    return found


@dataclass(frozen=True)
class LipschitzReport:
    worst_ratio: float
    bound: float
    passed: bool
    pair_count: int
    worst_index: int | None = None


def verify_equilibrium_lipschitz(
    pairs: list[tuple[GalerkinState, GalerkinState]],
    lam: float,
    cfg: SolverConfig,
    tol: float = 0.02,
) -> LipschitzReport:
    """Check |u - v|_H1 <= sqrt(lam) |u - v|_L2 (1 + tol) over equilibrium pairs."""
    basis = get_basis(cfg)
    bound = math.sqrt(lam)
    worst = -1.0
    worst_index = None
    used = 0
    for k, (u, v) in enumerate(pairs):
        d = u.coeffs - v.coeffs
        l2 = float(np.linalg.norm(d))
        if l2 == 0.0:
            continue
        ratio = math.sqrt(float(np.sum(basis.lamj * d * d))) / l2
        used += 1
        if ratio > worst:
            worst = ratio
            worst_index = k
    return LipschitzReport(
        worst_ratio=worst,
        bound=bound,
        passed=worst <= bound * (1.0 + tol),
        pair_count=used,
        worst_index=worst_index,
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def write_state_csv(path, state: GalerkinState) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["j", "coeff"])
        for j, c in enumerate(state.coeffs, start=1):
            writer.writerow([j, f"{c:.17g}"])


def write_trace_csv(path, rows: list[tuple[float, np.ndarray]], cfg: SolverConfig) -> None:
    """Trace rows (t, coeffs) -> CSV with columns t, W, V, L2, Linf, H1."""
    basis = get_basis(cfg)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "W", "V", "L2", "Linf", "H1"])
        for t, c in rows:
            w = float(np.sum(c * c))
            v = float(np.sum(basis.lamj * c * c))
            writer.writerow(
                [
                    f"{t:.17g}",
                    f"{w:.17g}",
                    f"{v:.17g}",
                    f"{math.sqrt(w):.17g}",
                    f"{basis.sup(c):.17g}",
                    f"{math.sqrt(v):.17g}",
                ]
            )
