"""End-to-end experiment bundle: sample, verify, bound, estimate, and write files.

``full_report`` runs two attractor samples (a "ball" sample for the
invariant-set inequality checks and an "unstable" sample for the dimension
estimate), the pairwise difference-energy inequality, and the closed-form
dimension bounds, then writes a deterministic bundle under the output
directory:

    report.json   all bounds, check verdicts, config echo, failure flags
    cloud.csv     the dimension sample (one row per snapshot)
    boxcount.csv  greedy cover counts per eps with the fitted window marked
    trace_*.csv   difference traces (t, W, V, L2, Linf, H1) for the energy pairs
    boxcount.svg  log-log counts with the fitted slope
    traces.svg    difference energies W(t) of the checked pairs

Any stage failure is recorded under "failures" and the bundle is still
emitted.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass

import numpy as np

from . import backend
from .attractor import (
    AttractorSample,
    box_counting_dimension,
    sample_attractor,
    verify_l2_bound,
    verify_linf_bound,
    verify_smoothing,
    write_boxcount_csv,
    write_cloud_csv,
)
from .bounds import ReactionParams, bounds_table, parabolic_bound
from .errors import EntrodimError, VerificationError
from .galerkin import SolverConfig, get_basis, traced_pair_evolution
from .spectra import DomainParams
from .svgplot import Figure

__all__ = ["ReportOptions", "full_report", "sub_seed"]


def sub_seed(seed: int, k: int) -> int:
    """Stable child seed for stage k of a run seeded with ``seed``."""
    return int(np.random.SeedSequence([seed, k]).generate_state(1)[0])


@dataclass(frozen=True)
class ReportOptions:
    ensemble: int = 64
    burn_in: float | None = None          # default 10 / lambda_1
    snapshots: int = 4
    dim_ensemble: int = 64
    dim_burn_in: float | None = None      # default 5 / lambda_1 (the floor)
    dim_snapshots: int = 48
    dim_spacing: float = 0.05
    smoothing_pairs: int = 32
    energy_pairs: int = 16
    energy_horizon: float = 0.25
    tol_l2: float = 0.02
    tol_linf: float = 0.02
    tol_smoothing: float = 0.02
    tol_energy: float = 1e-4
    jobs: int = 1


def _config_echo(params: ReactionParams, cfg: SolverConfig, opts: ReportOptions, seed: int) -> dict:
    return {
        "reaction": asdict(params),
        "solver": {
            "modes": cfg.modes,
            "length": cfg.length,
            "dt": cfg.effective_dt,
            "quadrature_nodes": cfg.effective_quadrature_nodes,
            "integrator": cfg.integrator,
            "newton_tol": cfg.newton_tol,
            "newton_max_iter": cfg.newton_max_iter,
        },
        "options": asdict(opts),
        "seed": seed,
        "backend": backend.BACKEND,
    }


def _energy_stage(
    sample: AttractorSample,
    params: ReactionParams,
    cfg: SolverConfig,
    opts: ReportOptions,
    seed: int,
    outdir: str,
) -> dict:
    rng = np.random.default_rng(seed)
    n = sample.count
    # draw with margin and keep pairs whose initial separation is above the
    # rounding floor: below it W(t) measures accumulated round-off, not the
    # dynamics of an actual difference (sub-floor pairs are exact duplicates
    # up to noise and satisfy the inequality trivially as W == 0)
    scale = max(1.0, float(np.max(np.linalg.norm(sample.points, axis=1))))
    candidates = rng.integers(0, n, size=(16 * opts.energy_pairs, 2))
    sep = np.linalg.norm(
        sample.points[candidates[:, 0]] - sample.points[candidates[:, 1]], axis=1
    )
    good = candidates[sep > 1e-9 * scale]
    idx = good[: opts.energy_pairs]
    while idx.shape[0] < opts.energy_pairs:
        # degenerate cloud: pad with identical pairs (exact-zero difference)
        k = int(rng.integers(0, n))
        idx = np.vstack([idx, [k, k]])
    block = np.empty((2 * opts.energy_pairs, cfg.modes))
    block[0::2] = sample.points[idx[:, 0]]
    block[1::2] = sample.points[idx[:, 1]]
    from .attractor import params_nonlinearity

    nl = params_nonlinearity(params)
    traces, snaps = traced_pair_evolution(
        block, nl, params.lam, opts.energy_horizon, cfg, snapshots=64
    )
    ratios = [t.growth_ratio(params.lam) for t in traces]
    basis = get_basis(cfg)
    for i in range(opts.energy_pairs):
        path = os.path.join(outdir, f"trace_{i}.csv")
        with open(path, "w", newline="") as fh:
            fh.write("t,W,V,L2,Linf,H1\n")
            for t, diffs in snaps:
                d = diffs[i]
                w = float(np.sum(d * d))
                v = float(np.sum(basis.lamj * d * d))
                sup = float(np.max(np.abs(basis.synth(d))))
                fh.write(
                    f"{t:.17g},{w:.17g},{v:.17g},{math.sqrt(w):.17g},"
                    f"{sup:.17g},{math.sqrt(v):.17g}\n"
                )
    fig = Figure(
        title="difference energies",
        xlabel="t",
        ylabel="log10 W(t)",
    )
    times = traces[0].times
    stride = max(1, len(times) // 512)
    for i, tr in enumerate(traces[:6]):
        w = np.maximum(tr.W[::stride], 1e-300)
        fig.line(times[::stride], np.log10(w), label=f"pair {i}" if i < 3 else "")
    fig.save(os.path.join(outdir, "traces.svg"))
    max_ratio = max(ratios)
    return {
        "pairs": opts.energy_pairs,
        "horizon": opts.energy_horizon,
        "max_ratio": max_ratio,
        "tol": opts.tol_energy,
        "passed": bool(max_ratio <= 1.0 + opts.tol_energy),
    }


def full_report(
    params: ReactionParams,
    cfg: SolverConfig,
    seed: int,
    outdir: str,
    opts: ReportOptions = ReportOptions(),
) -> dict:
    """Run every verifier and bound, write the artifact bundle, return the report."""
    os.makedirs(outdir, exist_ok=True)
    basis = get_basis(cfg)
    lam1 = float(basis.lamj[0])
    burn_in = opts.burn_in if opts.burn_in is not None else 10.0 / lam1
    dim_burn_in = opts.dim_burn_in if opts.dim_burn_in is not None else 5.0 / lam1

    report: dict = {
        "config": _config_echo(params, cfg, opts, seed),
        "checks": {},
        "failures": [],
    }

    domain = DomainParams.interval(cfg.length)
    report["bounds"] = [r.to_json_dict() for r in bounds_table(domain, params)]
    dim_upper = parabolic_bound(domain, params)

    ball = None
    try:
        ball = sample_attractor(
            params,
            cfg,
            ensemble_size=opts.ensemble,
            burn_in=burn_in,
            snapshots_per_traj=opts.snapshots,
            seed=sub_seed(seed, 0),
            init="ball",
            jobs=opts.jobs,
        )
        report["checks"]["l2"] = verify_l2_bound(ball, opts.tol_l2).to_json_dict()
        report["checks"]["linf"] = verify_linf_bound(ball, opts.tol_linf).to_json_dict()
        try:
            report["checks"]["smoothing"] = verify_smoothing(
                ball, opts.smoothing_pairs, sub_seed(seed, 1), opts.tol_smoothing
            ).to_json_dict()
        except VerificationError as err:
            # a fully collapsed trivial attractor has no usable pairs
            report["checks"]["smoothing"] = {"skipped": str(err), "passed": True}
        report["checks"]["energy"] = _energy_stage(
            ball, params, cfg, opts, sub_seed(seed, 2), outdir
        )
    except EntrodimError as err:
        report["failures"].append(f"ball-sample stage: {err}")

    try:
        dim_sample = sample_attractor(
            params,
            cfg,
            ensemble_size=opts.dim_ensemble,
            burn_in=dim_burn_in,
            snapshots_per_traj=opts.dim_snapshots,
            seed=sub_seed(seed, 3),
            init="unstable",
            snapshot_spacing=opts.dim_spacing,
            jobs=opts.jobs,
        )
        write_cloud_csv(os.path.join(outdir, "cloud.csv"), dim_sample)
        box = box_counting_dimension(dim_sample)
        write_boxcount_csv(os.path.join(outdir, "boxcount.csv"), box)
        n_unstable = int(np.searchsorted(basis.lamj, params.lam, side="left"))
        floor = 0.5 if n_unstable >= 1 else None
        passed = box.slope <= dim_upper and (floor is None or box.slope >= floor)
        report["dimension"] = {
            "slope": box.slope,
            "r_squared": box.r_squared,
            "fit_range": list(box.fit_range),
            "admissible_window": box.admissible_window,
            "upper_bound": dim_upper,
            "nondegeneracy_floor": floor,
            "sample_points": dim_sample.count,
            "burn_in": dim_burn_in,
            "passed": bool(passed),
        }
        xs = np.log2(1.0 / box.eps_grid)
        ys = np.log2(np.maximum(box.counts.astype(float), 1.0))
        fig = Figure(
            title=f"box counting: slope {box.slope:.3f} (bound {dim_upper:.1f})",
            xlabel="log2 (1/eps)",
            ylabel="log2 N_eps",
        )
        fig.scatter(xs, ys, label="counts")
        i0, i1 = box.fit_range
        if i1 > i0 and box.counts[i1] > box.counts[i0] > 0:
            cx = xs[i0 : i1 + 1]
            A = np.vstack([cx, np.ones_like(cx)]).T
            coef, *_ = np.linalg.lstsq(A, ys[i0 : i1 + 1], rcond=None)
            fig.line(cx, A @ coef, label=f"fit {box.slope:.3f}")
        fig.save(os.path.join(outdir, "boxcount.svg"))
    except EntrodimError as err:
        report["failures"].append(f"dimension stage: {err}")

    checks = report["checks"]
    report["all_passed"] = (
        not report["failures"]
        and all(c.get("passed", False) for c in checks.values())
        and report.get("dimension", {}).get("passed", False)
    )
    with open(os.path.join(outdir, "report.json"), "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
    return report
