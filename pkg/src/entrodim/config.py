"""Run configuration: a TOML document with sections mirroring the modules.

Example:

    seed = 42
    output_dir = "out"
    jobs = 1

    [domain]
    N = 1
    length = 3.141592653589793

    [reaction]
    lam = 10.0
    beta = 1.0
    gamma = 3.0
    p = 4.0

    [solver]
    modes = 64
    integrator = "imex_euler"

    [entropy]
    c = 1.0
    alpha = 2.0
    eps = [0.5, 0.3, 0.2, 0.1]

    [attractor]
    ensemble = 64
    burn_in = 10.0

    [tolerances]
    l2 = 0.02

Unknown keys anywhere are rejected.  Command-line flags override file values;
the effective configuration is echoed into report.json.
"""

from __future__ import annotations

import math
import os
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigurationError
from .bounds import ReactionParams
from .galerkin import SolverConfig

_SECTIONS = {
    "domain": {"N", "length", "volume", "side_lengths"},
    "reaction": {"lam", "lambda", "beta", "gamma", "p"},
    "solver": {
        "modes",
        "length",
        "dt",
        "quadrature_nodes",
        "integrator",
        "newton_tol",
        "newton_max_iter",
    },
    "entropy": {"c", "alpha", "upper_C", "eps", "oracle_d"},
    "attractor": {
        "ensemble",
        "burn_in",
        "snapshots",
        "dim_ensemble",
        "dim_burn_in",
        "dim_snapshots",
        "dim_spacing",
        "smoothing_pairs",
        "energy_pairs",
        "energy_horizon",
        "init",
    },
    "tolerances": {"l2", "linf", "smoothing", "energy"},
}
_TOP_KEYS = {"seed", "output_dir", "jobs"}


@dataclass
class RunConfig:
    seed: int = 0
    output_dir: str = "out"
    jobs: int = os.cpu_count() or 1
    domain: dict = field(default_factory=dict)
    reaction: dict = field(default_factory=dict)
    solver: dict = field(default_factory=dict)
    entropy: dict = field(default_factory=dict)
    attractor: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def solver_config(self) -> SolverConfig:
        s = dict(self.solver)
        length = s.pop("length", None)
        if length is None:
            length = self.domain.get("length", math.pi)
        try:
            return SolverConfig(length=float(length), **s)
        except TypeError as err:
            raise ConfigurationError(f"bad [solver] settings: {err}") from None

    def reaction_params(self) -> ReactionParams:
        r = dict(self.reaction)
        if "lambda" in r:
            if "lam" in r:
                raise ConfigurationError("give either lam or lambda, not both")
            r["lam"] = r.pop("lambda")
        missing = {"lam", "beta", "p"} - r.keys()
        if missing:
            raise ConfigurationError(f"[reaction] missing keys: {sorted(missing)}")
        if "gamma" not in r:
            return ReactionParams.canonical(r["lam"], r["beta"], r["p"])
        return ReactionParams(lam=r["lam"], beta=r["beta"], gamma=r["gamma"], p=r["p"])


def load_config(path: str | None) -> RunConfig:
    cfg = RunConfig()
    if path is None:
        return cfg
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    for key, value in data.items():
        if key in _TOP_KEYS:
            setattr(cfg, key, value)
        elif key in _SECTIONS:
            if not isinstance(value, dict):
                raise ConfigurationError(f"[{key}] must be a table")
            unknown = set(value) - _SECTIONS[key]
            if unknown:
                raise ConfigurationError(f"unknown keys in [{key}]: {sorted(unknown)}")
            setattr(cfg, key, dict(value))
        else:
            raise ConfigurationError(f"unknown top-level config key {key!r}")
    return cfg
