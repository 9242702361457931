"""Eigenvalue sequences of the Dirichlet Laplacian and polynomial growth certificates.

Provides exact spectra for box domains, the Li-Yau lower bound
``lambda_j >= c * j^(2/N)`` with its explicit constant, certification of
polynomial eigenvalue growth ``c * j^alpha <= lambda_j <= C * j^alpha`` over a
finite range, and the counting function ``N(lam) = min{n : lambda_{n+1} >= lam}``.

All values are plain floats; everything here is pure and deterministic.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundsError, ConfigurationError

__all__ = [
    "DomainParams",
    "EigenSequence",
    "GrowthCertificate",
    "box_eigenvalues",
    "counting_function",
    "growth_certificate",
    "li_yau_bound",
    "li_yau_constant",
    "power_law_sequence",
    "unit_ball_volume",
    "write_spectrum_csv",
]


@dataclass(frozen=True)
class DomainParams:
    """Bounded box-like domain: space dimension, measure, optional side lengths."""

    N: int
    volume: float
    side_lengths: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.N < 1:
            raise ConfigurationError(f"space dimension must be >= 1, got {self.N}")
        if not (self.volume > 0):
            raise ConfigurationError(f"domain volume must be positive, got {self.volume}")
        if self.side_lengths is not None:
            sides = tuple(float(s) for s in self.side_lengths)
            if len(sides) != self.N:
                raise ConfigurationError(
                    f"expected {self.N} side lengths, got {len(sides)}"
                )
            if any(s <= 0 for s in sides):
                raise ConfigurationError("side lengths must be positive")
            prod = math.prod(sides)
            if not math.isclose(prod, self.volume, rel_tol=1e-9):
                raise ConfigurationError(
                    f"volume {self.volume} inconsistent with side lengths (product {prod})"
                )
            object.__setattr__(self, "side_lengths", sides)

    @classmethod
    def box(cls, side_lengths) -> "DomainParams":
        sides = tuple(float(s) for s in side_lengths)
        return cls(N=len(sides), volume=math.prod(sides), side_lengths=sides)

    @classmethod
    def interval(cls, length: float = math.pi) -> "DomainParams":
        return cls.box((length,))


@dataclass(frozen=True)
class EigenSequence:
    """Nondecreasing positive eigenvalues with a record of where they came from.

    ``source`` is one of ``("box", DomainParams)``, ``("power_law", (c, alpha))``
    or ``("explicit", None)``.
    """

    values: np.ndarray
    source: tuple = ("explicit", None)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise ConfigurationError("eigenvalue sequence must be a nonempty 1-d array")
        if not np.all(np.isfinite(vals)):
            raise ConfigurationError("eigenvalues must be finite")
        if vals[0] <= 0:
            raise ConfigurationError("eigenvalues must be strictly positive")
        if np.any(np.diff(vals) < 0):
            raise ConfigurationError("eigenvalues must be nondecreasing")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def count_available(self) -> int:
        return int(self.values.size)

    @property
    def lambda_1(self) -> float:
        return float(self.values[0])

    def __getitem__(self, j: int) -> float:
        """1-based access: seq[j] is the j-th smallest eigenvalue."""
        if j < 1 or j > self.count_available:
            raise BoundsError(f"eigenvalue index {j} outside 1..{self.count_available}")
        return float(self.values[j - 1])


def power_law_sequence(c: float, alpha: float, count: int) -> EigenSequence:
    """Exact power spectrum lambda_j = c * j**alpha."""
    if c <= 0 or alpha <= 0:
        raise ConfigurationError("power-law constants must be positive")
    j = np.arange(1, count + 1, dtype=float)
    return EigenSequence(values=c * j**alpha, source=("power_law", (float(c), float(alpha))))


def box_eigenvalues(domain: DomainParams, count: int) -> EigenSequence:
    """The ``count`` smallest Dirichlet eigenvalues of a box, with multiplicity.

    Eigenvalues are pi^2 * sum_i (k_i / L_i)^2 over positive integer
    multi-indices k.  The lattice search radius is grown until at least
    ``count`` values are enclosed, so the returned prefix is exact.
    """
    if domain.side_lengths is None:
        raise ConfigurationError("box_eigenvalues requires side_lengths on the domain")
    if count < 1:
        raise ConfigurationError("count must be >= 1")
    sides = np.asarray(domain.side_lengths, dtype=float)

    # Search threshold T on sum (k_i/L_i)^2.  Start from the Weyl-law guess and
    # double until enough lattice points fall inside.
    t = (count ** (2.0 / domain.N)) / np.min(sides) ** 2 + np.sum(1.0 / sides**2)
    for _ in range(64):
        kmax = np.floor(sides * math.sqrt(t)).astype(int)
        if np.any(kmax < 1):
            t *= 2.0
            continue
        total = np.prod(kmax.astype(float))
        if total > 5e8:
            raise BoundsError(
                f"box eigenvalue search region too large ({total:.3g} lattice points) "
                f"for count={count}; reduce count"
            )
        grids = np.meshgrid(
            *[np.arange(1, k + 1, dtype=float) for k in kmax], indexing="ij"
        )
        q = np.zeros(grids[0].shape, dtype=float)
        for g, length in zip(grids, sides):
            q += (g / length) ** 2
        q = q.ravel()
        q = q[q <= t]
        if q.size >= count:
            q.sort()
            vals = (math.pi**2) * q[:count]
            return EigenSequence(values=vals, source=("box", domain))
        t *= 2.0
    raise BoundsError("box eigenvalue lattice search failed to enclose enough values")


def unit_ball_volume(N: int) -> float:
    """Volume of the unit ball in R^N: pi^(N/2) / Gamma(1 + N/2)."""
    return math.pi ** (N / 2.0) / math.gamma(1.0 + N / 2.0)


def li_yau_constant(domain: DomainParams) -> float:
    """The constant c with lambda_j >= c * j^(2/N):
    c = (4 pi N / (N+2)) * Gamma(1+N/2)^(2/N) * |Omega|^(-2/N)."""
    N = domain.N
    return (
        (4.0 * math.pi * N / (N + 2.0))
        * math.gamma(1.0 + N / 2.0) ** (2.0 / N)
        * domain.volume ** (-2.0 / N)
    )


def li_yau_bound(domain: DomainParams, j: int) -> float:
    """Lower bound (N C_N / (N+2)) j^(2/N) V^(-2/N) with C_N = (2 pi)^2 B_N^(-2/N)."""
    if j < 1:
        raise ConfigurationError("eigenvalue index must be >= 1")
    N = domain.N
    c_n = (2.0 * math.pi) ** 2 * unit_ball_volume(N) ** (-2.0 / N)
    return (N * c_n / (N + 2.0)) * j ** (2.0 / N) * domain.volume ** (-2.0 / N)


@dataclass(frozen=True)
class GrowthCertificate:
    """Checked constants of the polynomial growth lambda_j >= c j^alpha.

    ``upper_C`` additionally certifies lambda_j <= C j^alpha over the same range.
    """

    c: float
    alpha: float
    checked_up_to: int
    upper_C: float | None = None
    source: EigenSequence | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.c <= 0 or self.alpha <= 0 or self.checked_up_to < 1:
            raise ConfigurationError("certificate constants must be positive")
        if self.upper_C is not None and self.upper_C < self.c:
            raise ConfigurationError("upper growth constant below lower constant")


def growth_certificate(seq: EigenSequence, alpha: float, check_range: int) -> GrowthCertificate:
    """Certify lambda_j >= c j^alpha (and <= C j^alpha) for all j <= check_range.

    c and C are the extreme ratios lambda_j / j^alpha, so the certificate
    invariants hold by construction.
    """
    if alpha <= 0:
        raise ConfigurationError("alpha must be positive")
    if check_range < 1:
        raise ConfigurationError("check range must be >= 1")
    if check_range > seq.count_available:
        raise BoundsError(
            f"range {check_range} exceeds the {seq.count_available} available eigenvalues"
        )
    j = np.arange(1, check_range + 1, dtype=float)
    ratios = seq.values[:check_range] / j**alpha
    return GrowthCertificate(
        c=float(ratios.min()),
        alpha=float(alpha),
        checked_up_to=check_range,
        upper_C=float(ratios.max()),
        source=seq,
    )


def counting_function(seq: EigenSequence, lam: float) -> int:
    """N(lam) = min{n : lambda_{n+1} >= lam}, i.e. the number of eigenvalues
    strictly below lam."""
    if lam <= 0:
        raise ConfigurationError("lam must be positive")
    vals = seq.values
    if vals[-1] < lam:
        raise BoundsError(
            f"lam={lam} exceeds the largest available eigenvalue "
            f"{vals[-1]}; request a larger count"
        )
    return int(np.searchsorted(vals, lam, side="left"))


def write_spectrum_csv(path, seq: EigenSequence, domain: DomainParams | None = None) -> None:
    """CSV export with columns j, lambda_j, li_yau_lower (blank without a domain)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["j", "lambda_j", "li_yau_lower"])
        for i, lam in enumerate(seq.values, start=1):
            lower = f"{li_yau_bound(domain, i):.17g}" if domain is not None else ""
            writer.writerow([i, f"{lam:.17g}", lower])
