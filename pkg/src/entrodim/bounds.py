"""Closed-form fractal-dimension bounds for invariant sets of monotone semilinear problems.

The route is always the same: a smoothing constant C (weak-to-strong norm
Lipschitz constant of some map that fixes the invariant set) composed with
the ellipsoid entropy bound at eps = 1/(4C) gives

    dim_F <= ((ln3 + alpha)/ln2) * (32 C^2 / c)^(1/alpha).

Specialisations: C = sqrt(lam) for the equilibria set, C = sqrt(2 lam (1 +
gamma/beta)) for the parabolic semigroup at the time t* = 1/((2 +
gamma/beta) lam), and (c, alpha) from the explicit Dirichlet-Laplacian
eigenvalue lower bound on a bounded domain.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

from .ellipsoids import entropy_upper_bound
from .errors import ConfigurationError
from .spectra import DomainParams, EigenSequence, counting_function, li_yau_constant

__all__ = [
    "DimensionBoundReport",
    "ReactionParams",
    "SmoothingConstant",
    "bounds_table",
    "elliptic_dim_bound",
    "equilibria_dim_bound",
    "equilibrium_lipschitz_constant",
    "li_yau_constants",
    "optimality_lower",
    "parabolic_bound",
    "smoothing_constant_parabolic",
    "write_bounds_csv",
    "zelik_bound",
]

LN2 = math.log(2.0)
LN3 = math.log(3.0)


@dataclass(frozen=True)
class ReactionParams:
    """Parameters (lam, beta, gamma, p) of u_t - Lap u + g(u) = lam u with
    g(s) s >= beta |s|^p and Lipschitz slope gamma M^(p-2) on [-M, M]."""

    lam: float
    beta: float
    gamma: float
    p: float

    def __post_init__(self):
        if self.lam <= 0 or self.beta <= 0 or self.gamma <= 0:
            raise ConfigurationError("lam, beta, gamma must be positive")
        if not self.p > 2:
            raise ConfigurationError(f"p must exceed 2, got {self.p}")

    @classmethod
    def canonical(cls, lam: float, beta: float, p: float) -> "ReactionParams":
        """For g(s) = beta |s|^(p-2) s one may take gamma = beta (p - 1)."""
        return cls(lam=lam, beta=beta, gamma=beta * (p - 1.0), p=p)

    @property
    def gamma_over_beta(self) -> float:
        return self.gamma / self.beta

    @property
    def sup_bound(self) -> float:
        """Uniform bound M = (lam/beta)^(1/(p-2)) on invariant states."""
        return (self.lam / self.beta) ** (1.0 / (self.p - 2.0))

    @property
    def l2_radius_sq(self) -> float:
        """Squared L2 bound (2(p-2)/p^2) |Omega| lam^(p/(p-2)) / (beta lam_1),
        per unit |Omega|/lam_1 (multiply by volume, divide by lam_1)."""
        return (
            2.0 * (self.p - 2.0) / self.p**2 / self.beta
            * self.lam ** (self.p / (self.p - 2.0))
        )


@dataclass(frozen=True)
class SmoothingConstant:
    """Weak-to-strong Lipschitz constant of the smoothing map, plus the
    parabolic bookkeeping constants when they apply."""

    C: float
    time_star: float | None = None
    c_gamma_beta: float | None = None
    c_tilde: float | None = None

    def __post_init__(self):
        if self.C <= 0:
            raise ConfigurationError("smoothing constant must be positive")
        if self.c_gamma_beta is not None and not self.c_gamma_beta <= 1.0 / 3.0 + 1e-15:
            raise ConfigurationError("1/(2 + gamma/beta) cannot exceed 1/3")


def zelik_bound(C: float, c: float, alpha: float) -> float:
    """dim_F bound from a smoothing constant C: the entropy bound at 1/(4C)."""
    if C <= 0:
        raise ConfigurationError("smoothing constant must be positive")
    return entropy_upper_bound(c, alpha, 1.0 / (4.0 * C))


def equilibria_dim_bound(lam: float, c: float, alpha: float) -> float:
    """((ln3 + alpha)/ln2) * (32 lam / c)^(1/alpha)."""
    if lam <= 0 or c <= 0 or alpha <= 0:
        raise ConfigurationError("all arguments must be positive")
    return ((LN3 + alpha) / LN2) * (32.0 * lam / c) ** (1.0 / alpha)


def equilibrium_lipschitz_constant(lam: float) -> float:
    """sqrt(lam): the weak-to-strong constant of the identity on the
    equilibria set (difference of equilibria paired with itself)."""
    if lam <= 0:
        raise ConfigurationError("lam must be positive")
    return math.sqrt(lam)


def li_yau_constants(domain: DomainParams) -> tuple[float, float]:
    """(alpha, c) = (2/N, (4 pi N/(N+2)) Gamma(1+N/2)^(2/N) |Omega|^(-2/N))."""
    return (2.0 / domain.N, li_yau_constant(domain))


def elliptic_dim_bound(domain: DomainParams, lam: float) -> float:
    """Explicit equilibria-set bound on a bounded domain:
    32^(N/2) ((ln3 + 2/N)/ln2) ((N+2)/(4 pi N))^(N/2) |Omega| lam^(N/2) / Gamma(1+N/2)."""
    if lam <= 0:
        raise ConfigurationError("lam must be positive")
    N = domain.N
    return (
        32.0 ** (N / 2.0)
        * ((LN3 + 2.0 / N) / LN2)
        * ((N + 2.0) / (4.0 * math.pi * N)) ** (N / 2.0)
        / math.gamma(1.0 + N / 2.0)
        * domain.volume
        * lam ** (N / 2.0)
    )


def smoothing_constant_parabolic(params: ReactionParams) -> SmoothingConstant:
    """Smoothing constants of the parabolic semigroup:
    C = sqrt(2 lam (1 + gamma/beta)) at t* = c_gb / lam, c_gb = 1/(2 + gamma/beta).

    The closed-form cap on c_tilde rests on c_gb >= (2/3)/(1 + gamma/beta),
    which holds iff gamma/beta >= 1 (always true for the canonical
    nonlinearity, where gamma/beta = p - 1 > 1); it is only asserted there.
    """
    q = params.gamma_over_beta
    c_gb = 1.0 / (2.0 + q)
    c_tilde = math.exp(2.0 * c_gb) / (2.0 * c_gb) + (c_gb / 2.0) * (1.0 + q) ** 2
    cap = (0.75 * math.exp(2.0 / 3.0) + 0.5) * (1.0 + q)
    if q >= 1.0 and c_tilde > cap * (1.0 + 1e-12):
        raise ConfigurationError(
            f"c_tilde {c_tilde} exceeds its certified cap {cap}"
        )
    return SmoothingConstant(
        C=math.sqrt(2.0 * params.lam * (1.0 + q)),
        time_star=c_gb / params.lam,
        c_gamma_beta=c_gb,
        c_tilde=c_tilde,
    )


def parabolic_bound(domain: DomainParams, params: ReactionParams) -> float:
    """Attractor dimension bound:
    8^N ((ln3 + 2/N)/ln2) ((N+2)/(4 pi N))^(N/2) |Omega| (1+gamma/beta)^(N/2)
    lam^(N/2) / Gamma(1+N/2)."""
    N = domain.N
    q = params.gamma_over_beta
    return (
        8.0**N
        * ((LN3 + 2.0 / N) / LN2)
        * ((N + 2.0) / (4.0 * math.pi * N)) ** (N / 2.0)
        / math.gamma(1.0 + N / 2.0)
        * domain.volume
        * (1.0 + q) ** (N / 2.0)
        * params.lam ** (N / 2.0)
    )


def optimality_lower(
    lam: float, upper_C: float, alpha: float, seq: EigenSequence
) -> tuple[float, int]:
    """Lower-bound pair for the attainable equilibria-set dimension:
    the closed form (lam/C)^(1/alpha) - 1 and the counted N(lam)."""
    if upper_C <= 0 or alpha <= 0:
        raise ConfigurationError("upper_C and alpha must be positive")
    formula = (lam / upper_C) ** (1.0 / alpha) - 1.0
    counted = counting_function(seq, lam)
    return formula, counted


# ---------------------------------------------------------------------------
# reporting
# ---------------------------------------------------------------------------

BOUND_KINDS = (
    "equilibria",
    "elliptic",
    "parabolic",
    "zelik",
)


@dataclass(frozen=True)
class DimensionBoundReport:
    bound_kind: str
    value: float
    inputs: dict = field(default_factory=dict)
    lower_optimality: float | None = None

    def __post_init__(self):
        if self.bound_kind not in BOUND_KINDS:
            raise ConfigurationError(f"unknown bound kind {self.bound_kind!r}")
        if not self.value > 0:
            raise ConfigurationError("bound value must be positive")
        if self.lower_optimality is not None and self.lower_optimality > self.value:
            raise ConfigurationError("optimality lower bound exceeds the upper bound")

    def to_json_dict(self) -> dict:
        return {
            "bound_kind": self.bound_kind,
            "value": self.value,
            "inputs": self.inputs,
            "lower_optimality": self.lower_optimality,
        }


def bounds_table(
    domain: DomainParams, params: ReactionParams, seq: EigenSequence | None = None
) -> list[DimensionBoundReport]:
    """All closed-form bounds for one parameter point."""
    alpha, c = li_yau_constants(domain)
    inputs = {
        "N": domain.N,
        "volume": domain.volume,
        "lam": params.lam,
        "beta": params.beta,
        "gamma": params.gamma,
        "p": params.p,
        "alpha": alpha,
        "c": c,
    }
    lower = None
    if seq is not None:
        # certified upper growth over the available range
        j = range(1, seq.count_available + 1)
        upper_c = max(seq[i] / i**alpha for i in j)
        formula, counted = optimality_lower(params.lam, upper_c, alpha, seq)
        lower = float(max(formula, counted))
    reports = [
        DimensionBoundReport(
            "equilibria",
            equilibria_dim_bound(params.lam, c, alpha),
            inputs,
            lower_optimality=lower,
        ),
        DimensionBoundReport("elliptic", elliptic_dim_bound(domain, params.lam), inputs),
        DimensionBoundReport("parabolic", parabolic_bound(domain, params), inputs),
        DimensionBoundReport(
            "zelik",
            zelik_bound(smoothing_constant_parabolic(params).C, c, alpha),
            inputs,
        ),
    ]
    return reports


def write_bounds_csv(path, reports: list[DimensionBoundReport]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["bound_kind", "value", "lam", "beta", "gamma", "p", "N", "volume",
             "alpha", "c", "lower_optimality"]
        )
        for r in reports:
            i = r.inputs
            writer.writerow(
                [
                    r.bound_kind,
                    f"{r.value:.17g}",
                    i.get("lam", ""),
                    i.get("beta", ""),
                    i.get("gamma", ""),
                    i.get("p", ""),
                    i.get("N", ""),
                    i.get("volume", ""),
                    i.get("alpha", ""),
                    i.get("c", ""),
                    "" if r.lower_optimality is None else f"{r.lower_optimality:.17g}",
                ]
            )


def write_bounds_json(path, reports: list[DimensionBoundReport]) -> None:
    with open(path, "w") as fh:
        json.dump([r.to_json_dict() for r in reports], fh, indent=2)
