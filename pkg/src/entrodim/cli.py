"""Command-line front end.

Subcommands: entropy, cover, bounds, simulate, attractor, report.
Shared flags: --config PATH, --seed INT, --jobs INT, --output DIR.
Exit codes: 0 success, 1 computation or verification failure, 2 bad configuration.
All outputs land under the output directory; reruns with the same
configuration overwrite the same bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .attractor import (
    box_counting_dimension,
    sample_attractor,
    verify_l2_bound,
    verify_linf_bound,
    verify_smoothing,
    write_boxcount_csv,
    write_cloud_csv,
)
from .bounds import (
    bounds_table,
    elliptic_dim_bound,
    equilibria_dim_bound,
    li_yau_constants,
    parabolic_bound,
    smoothing_constant_parabolic,
    write_bounds_csv,
    zelik_bound,
)
from .config import RunConfig, load_config
from .ellipsoids import (
    CoverPlan,
    Ellipsoid,
    build_cover,
    covering_oracle,
    entropy_report,
    verify_cover,
    write_entropy_csv,
)
from .errors import ConfigurationError, EntrodimError
from .galerkin import GalerkinState, evolve, write_state_csv, write_trace_csv
from .report import ReportOptions, full_report, sub_seed
from .spectra import DomainParams, box_eigenvalues, growth_certificate


def _out(cfg: RunConfig, name: str) -> str:
    os.makedirs(cfg.output_dir, exist_ok=True)
    return os.path.join(cfg.output_dir, name)


def _merge(cfg_section: dict, args: argparse.Namespace, keys: dict) -> dict:
    """File values overridden by any explicitly given CLI flags."""
    merged = dict(cfg_section)
    for flag, key in keys.items():
        val = getattr(args, flag, None)
        if val is not None:
            merged[key] = val
    return merged


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_entropy(cfg: RunConfig, args) -> int:
    section = _merge(
        cfg.entropy,
        args,
        {"c": "c", "alpha": "alpha", "upper_C": "upper_C", "oracle_d": "oracle_d"},
    )
    eps_list = args.eps if args.eps else section.get("eps")
    if not eps_list:
        raise ConfigurationError("no eps values given (flag --eps or [entropy].eps)")
    eps_list = [float(e) for e in eps_list]
    if any(e <= 0 for e in eps_list):
        raise ConfigurationError("eps values must be positive")

    if args.spectrum == "box":
        n = int(section.get("N", args.N or 1))
        sides = args.L if args.L else [math.pi] * n
        domain = DomainParams.box(sides)
        seq = box_eigenvalues(domain, args.count)
        alpha = float(section.get("alpha", 2.0 / n))
        cert = growth_certificate(seq, alpha, seq.count_available)
        c, upper_c = cert.c, cert.upper_C
        ellipsoid = Ellipsoid.from_spectrum(seq)
    else:
        if "c" not in section or "alpha" not in section:
            raise ConfigurationError("entropy needs --c and --alpha (or [entropy] keys)")
        c, alpha = float(section["c"]), float(section["alpha"])
        if c <= 0 or alpha <= 0:
            raise ConfigurationError("c and alpha must be positive")
        upper_c = section.get("upper_C")
        ellipsoid = Ellipsoid.power_law(c, alpha)

    oracle_d = int(section.get("oracle_d", 0))
    reports = []
    for eps in eps_list:
        oracle = None
        if oracle_d in (1, 2):
            oracle = covering_oracle(ellipsoid, eps, oracle_d)
        reports.append(entropy_report(c, alpha, eps, upper_C=upper_c, oracle=oracle))
    path = _out(cfg, "entropy.csv")
    write_entropy_csv(path, reports)
    for r in reports:
        lower = "" if r.lower_bits is None else f" lower={r.lower_bits:.6g}"
        bracket = f" bracket={r.oracle_bracket}" if r.oracle_bracket else ""
        print(f"eps={r.eps:g} upper={r.upper_bits:.6g} bits{lower}{bracket}")
    print(f"wrote {path}")
    return 0


def cmd_cover(cfg: RunConfig, args) -> int:
    if args.verify_plan:
        plan, ellipsoid = CoverPlan.load_json(args.verify_plan)
        if ellipsoid is None:
            raise ConfigurationError("plan file lacks the ellipsoid source")
        rep = verify_cover(plan, ellipsoid, samples=args.samples, seed=cfg.seed)
        print(rep)
        return 0 if rep.passed else 1

    section = _merge(cfg.entropy, args, {"c": "c", "alpha": "alpha"})
    if "c" not in section or "alpha" not in section:
        raise ConfigurationError("cover needs --c and --alpha")
    eps = args.eps[0] if args.eps else None
    if eps is None:
        eps_list = section.get("eps")
        if not eps_list:
            raise ConfigurationError("cover needs one --eps")
        eps = float(eps_list[0])
    if eps <= 0:
        raise ConfigurationError("eps must be positive")
    ellipsoid = Ellipsoid.power_law(float(section["c"]), float(section["alpha"]))
    plan = build_cover(ellipsoid, eps, d_max=args.d_max)
    rep = verify_cover(plan, ellipsoid, samples=args.samples, seed=cfg.seed)
    path = _out(cfg, "cover_plan.json")
    plan.save_json(path, ellipsoid)
    print(
        f"d={plan.d} method={plan.method} centers={plan.count} radius={plan.radius:.6g}"
    )
    print(rep)
    print(f"wrote {path}")
    return 0 if rep.passed else 1


def cmd_bounds(cfg: RunConfig, args) -> int:
    params = _reaction(cfg, args)
    n = int(cfg.domain.get("N", args.N or 1))
    if "side_lengths" in cfg.domain:
        domain = DomainParams.box(cfg.domain["side_lengths"])
    elif "volume" in cfg.domain:
        domain = DomainParams(N=n, volume=float(cfg.domain["volume"]))
    elif n == 1:
        domain = DomainParams.interval(float(cfg.domain.get("length", math.pi)))
    else:
        domain = DomainParams(N=n, volume=float(args.volume or 1.0))

    lams = args.lam_sweep or [params.lam]
    rows = []
    for lam in lams:
        from dataclasses import replace

        p = replace(params, lam=float(lam))
        rows.extend(bounds_table(domain, p))
    path = _out(cfg, "bounds.csv")
    write_bounds_csv(path, rows)
    print(f"{'kind':<12} {'lam':>8} {'value':>14}")
    for r in rows:
        print(f"{r.bound_kind:<12} {r.inputs['lam']:>8g} {r.value:>14.6g}")
    print(f"wrote {path}")

    if args.verify:
        alpha, c = li_yau_constants(domain)
        worst = 0.0
        for lam in np.geomspace(0.5, 50.0, 40):
            a = equilibria_dim_bound(lam, c, alpha)
            b = zelik_bound(math.sqrt(lam), c, alpha)
            e = elliptic_dim_bound(domain, lam)
            worst = max(worst, abs(a - b) / a, abs(a - e) / a)
            sc = smoothing_constant_parabolic(
                type(params)(lam=lam, beta=params.beta, gamma=params.gamma, p=params.p)
            )
            pb = parabolic_bound(
                domain,
                type(params)(lam=lam, beta=params.beta, gamma=params.gamma, p=params.p),
            )
            zb = zelik_bound(sc.C, c, alpha)
            worst = max(worst, abs(pb - zb) / pb)
        print(f"composition identities: worst relative error {worst:.3e}")
        if worst > 1e-9:
            return 1
    return 0


def _reaction(cfg: RunConfig, args):
    section = dict(cfg.reaction)
    for key in ("lam", "beta", "gamma", "p"):
        val = getattr(args, key, None)
        if val is not None:
            section[key] = val
    sub = RunConfig(reaction=section)
    return sub.reaction_params()


def cmd_simulate(cfg: RunConfig, args) -> int:
    params = _reaction(cfg, args)
    solver = cfg.solver_config()
    if args.dt is not None:
        from dataclasses import replace

        solver = replace(solver, dt=args.dt)
    from .attractor import params_nonlinearity

    nl = params_nonlinearity(params)
    c0 = np.zeros(solver.modes)
    mode = max(1, min(args.ic_mode, solver.modes))
    c0[mode - 1] = args.ic_amp
    state = GalerkinState(coeffs=c0)
    rows = []
    t = 0.0
    steps = max(1, args.trace_points)
    horizon = args.T / steps
    rows.append((t, state.coeffs.copy()))
    for _ in range(steps):
        state = evolve(state, nl, params.lam, horizon, solver)
        t = state.time
        rows.append((t, state.coeffs.copy()))
    write_trace_csv(_out(cfg, "trace.csv"), rows, solver)
    write_state_csv(_out(cfg, "final_state.csv"), state)
    print(f"evolved to t={t:g}; |u|_L2={state.l2():.6g}")
    print(f"wrote {_out(cfg, 'trace.csv')} and {_out(cfg, 'final_state.csv')}")
    return 0


def _attractor_sample(cfg: RunConfig, args, params, solver):
    a = dict(cfg.attractor)
    ensemble = int(args.ensemble or a.get("ensemble", 64))
    lam1 = (math.pi / solver.length) ** 2
    burn_in = float(args.burn_in or a.get("burn_in", 10.0 / lam1))
    snapshots = int(args.snapshots or a.get("snapshots", 4))
    init = args.init or a.get("init", "ball")
    return sample_attractor(
        params,
        solver,
        ensemble_size=ensemble,
        burn_in=burn_in,
        snapshots_per_traj=snapshots,
        seed=cfg.seed,
        init=init,
        snapshot_spacing=float(a.get("dim_spacing", 0.05)),
        jobs=cfg.jobs,
    )


def cmd_attractor(cfg: RunConfig, args) -> int:
    params = _reaction(cfg, args)
    solver = cfg.solver_config()
    sample = _attractor_sample(cfg, args, params, solver)
    tol = cfg.tolerances
    checks = {
        "l2": verify_l2_bound(sample, float(tol.get("l2", 0.02))),
        "linf": verify_linf_bound(sample, float(tol.get("linf", 0.02))),
    }
    out = {k: v.to_json_dict() for k, v in checks.items()}
    try:
        pairs = int(cfg.attractor.get("smoothing_pairs", 32))
        out["smoothing"] = verify_smoothing(
            sample, pairs, sub_seed(cfg.seed, 1), float(tol.get("smoothing", 0.02))
        ).to_json_dict()
    except EntrodimError as err:
        out["smoothing"] = {"skipped": str(err), "passed": True}
    write_cloud_csv(_out(cfg, "cloud.csv"), sample)
    if args.boxcount:
        box = box_counting_dimension(sample)
        write_boxcount_csv(_out(cfg, "boxcount.csv"), box)
        out["boxcount"] = box.to_json_dict()
    with open(_out(cfg, "checks.json"), "w") as fh:
        json.dump(out, fh, indent=2, sort_keys=True)
    ok = all(c.get("passed", False) for c in out.values() if isinstance(c, dict) and "passed" in c)
    for name, c in out.items():
        verdict = c.get("passed", "-") if isinstance(c, dict) else "-"
        print(f"{name}: passed={verdict}")
    print(f"wrote {_out(cfg, 'cloud.csv')} and {_out(cfg, 'checks.json')}")
    return 0 if ok else 1


def cmd_report(cfg: RunConfig, args) -> int:
    params = _reaction(cfg, args)
    solver = cfg.solver_config()
    a = dict(cfg.attractor)
    t = cfg.tolerances
    kwargs = {}
    for key, name in (
        ("ensemble", "ensemble"),
        ("burn_in", "burn_in"),
        ("snapshots", "snapshots"),
        ("dim_ensemble", "dim_ensemble"),
        ("dim_burn_in", "dim_burn_in"),
        ("dim_snapshots", "dim_snapshots"),
        ("dim_spacing", "dim_spacing"),
        ("smoothing_pairs", "smoothing_pairs"),
        ("energy_pairs", "energy_pairs"),
        ("energy_horizon", "energy_horizon"),
    ):
        if key in a:
            kwargs[name] = a[key]
    for key, name in (("l2", "tol_l2"), ("linf", "tol_linf"),
                      ("smoothing", "tol_smoothing"), ("energy", "tol_energy")):
        if key in t:
            kwargs[name] = t[key]
    if args.ensemble:
        kwargs["ensemble"] = args.ensemble
    if args.burn_in:
        kwargs["burn_in"] = args.burn_in
    opts = ReportOptions(jobs=cfg.jobs, **kwargs)
    rep = full_report(params, solver, cfg.seed, cfg.output_dir, opts)
    print(f"report: all_passed={rep['all_passed']}  failures={rep['failures']}")
    if "dimension" in rep:
        d = rep["dimension"]
        print(f"box-count slope {d['slope']:.3f} vs upper bound {d['upper_bound']:.1f}")
    print(f"wrote bundle under {cfg.output_dir}/")
    return 0 if rep["all_passed"] else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--seed", type=int, help="run seed")
    p.add_argument("--jobs", type=int, help="parallelism degree for ensembles")
    p.add_argument("--output", help="output directory")


def _add_reaction_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lam", type=float, help="linear gain lambda")
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--p", type=float, dest="p")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="entrodim",
        description="entropy bounds for ellipsoids and attractor-dimension experiments",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="closed-form entropy bounds plus oracle brackets")
    _add_common(p)
    p.add_argument("--c", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--upper-C", dest="upper_C", type=float)
    p.add_argument("--eps", type=float, action="append")
    p.add_argument("--oracle-d", dest="oracle_d", type=int, choices=(0, 1, 2))
    p.add_argument("--spectrum", choices=("power_law", "box"), default="power_law")
    p.add_argument("--N", type=int)
    p.add_argument("--L", type=float, action="append")
    p.add_argument("--count", type=int, default=1000)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("cover", help="build and verify a constructive cover")
    _add_common(p)
    p.add_argument("--c", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--eps", type=float, action="append")
    p.add_argument("--d-max", dest="d_max", type=int, default=12)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--verify-plan", dest="verify_plan", help="re-verify a plan JSON file")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("bounds", help="closed-form dimension bounds table")
    _add_common(p)
    _add_reaction_flags(p)
    p.add_argument("--N", type=int)
    p.add_argument("--volume", type=float)
    p.add_argument("--lam-sweep", dest="lam_sweep", type=float, nargs="+")
    p.add_argument("--verify", action="store_true", help="check composition identities")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("simulate", help="evolve one state and write its trace")
    _add_common(p)
    _add_reaction_flags(p)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--dt", type=float)
    p.add_argument("--ic-mode", dest="ic_mode", type=int, default=1)
    p.add_argument("--ic-amp", dest="ic_amp", type=float, default=0.1)
    p.add_argument("--trace-points", dest="trace_points", type=int, default=200)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("attractor", help="sample the attractor and verify its bounds")
    _add_common(p)
    _add_reaction_flags(p)
    p.add_argument("--ensemble", type=int)
    p.add_argument("--burn-in", dest="burn_in", type=float)
    p.add_argument("--snapshots", type=int)
    p.add_argument("--init", choices=("ball", "unstable"))
    p.add_argument("--boxcount", action="store_true")
    p.set_defaults(func=cmd_attractor)

    p = sub.add_parser("report", help="full verification bundle")
    _add_common(p)
    _add_reaction_flags(p)
    p.add_argument("--ensemble", type=int)
    p.add_argument("--burn-in", dest="burn_in", type=float)
    p.set_defaults(func=cmd_report)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.jobs is not None:
            cfg.jobs = args.jobs
        if args.output is not None:
            cfg.output_dir = args.output
        return args.func(cfg, args)
    except ConfigurationError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2
    except EntrodimError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
