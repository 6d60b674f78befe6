"""Command-line front door: theory, coalition, empirics, ingest.

Every command writes machine-readable reports into --out. Reports embed a
metadata block (tool version, config hash, seed, tolerances) and carry no
timestamps, so identical configurations produce byte-identical files.
Exit codes: 0 success, 2 input/config error, 3 numerical failure,
4 partial success (some fitted rows failed and were marked).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .charts import scatter_svg, spec_chart_svg
from .coalition import CoalitionError, LQParams, brute_force_equilibria, enumerate_equilibria
from .dataset import (
    CONTROL_COLUMNS,
    FOCAL_COLUMN,
    LOGICAL_COLUMNS,
    CountryDataset,
    IngestError,
    load_dataset,
    subset,
    summary_stats,
)
from .economy import (
    EconomyError,
    EconomySpec,
    LinearBenefit,
    LogBenefit,
    PopulationProfile,
    PowerBenefit,
    PowerCost,
    QuadraticCost,
)
from .imputation import ImputationError, impute_chained, pool_rubin
from .regimes import (
    SolverConfig,
    SolverError,
    price_ratio,
    solve_global_optimum,
    solve_mixed_motives,
    solve_noncooperative,
)
from .regression import RegressionError, filter_collinear, ols_fit, pearson_matrix, vif
from .reports import run_metadata, write_csv, write_json
from .speccurve import (
    SPEC_CSV_HEADER,
    spec_rows_to_records,
    specification_chart,
    specification_chart_casewise,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_PARTIAL = 4

SEED_ENV_VAR = "FREERIDER_SEED"


class ConfigError(ValueError):
    pass


def _parse_populations(text: str) -> list:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad population list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("population list is empty")
    return values


def _parse_benefit(text: str):
    family, _, raw = text.partition(":")
    try:
        params = [float(v) for v in raw.split(",")] if raw else []
        if family == "linear" and len(params) == 1:
            return LinearBenefit(params[0])
        if family == "log" and len(params) == 1:
            return LogBenefit(params[0])
        if family == "power" and len(params) == 2:
            return PowerBenefit(params[0], params[1])
    except (ValueError, EconomyError) as exc:
        raise argparse.ArgumentTypeError(f"bad benefit spec {text!r}: {exc}")
    raise argparse.ArgumentTypeError(
        f"bad benefit spec {text!r} (expected linear:BETA, log:KAPPA, or power:KAPPA,RHO)"
    )


def _parse_cost(text: str):
    family, _, raw = text.partition(":")
    try:
        params = [float(v) for v in raw.split(",")] if raw else []
        if family == "quad" and len(params) == 1:
            return QuadraticCost(params[0])
        if family == "power" and len(params) == 2:
            return PowerCost(params[0], params[1])
    except (ValueError, EconomyError) as exc:
        raise argparse.ArgumentTypeError(f"bad cost spec {text!r}: {exc}")
    raise argparse.ArgumentTypeError(
        f"bad cost spec {text!r} (expected quad:GAMMA or power:GAMMA,ETA)"
    )


def _formats(text: str) -> set:
    parts = {p.strip() for p in text.split(",") if p.strip()}
    unknown = parts - {"json", "csv", "svg"}
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown formats: {sorted(unknown)}")
    return parts


def _resolve_seed(args) -> int | None:
    if getattr(args, "seed", None) is not None:
        return int(args.seed)
    env = os.environ.get(SEED_ENV_VAR)
    return int(env) if env else None


def _econ_dict(econ: EconomySpec) -> dict:
    b, c = econ.benefit, econ.cost
    benefit = {"family": type(b).__name__}
    benefit.update({k: getattr(b, k) for k in ("beta", "kappa", "rho") if hasattr(b, k)})
    cost = {"family": type(c).__name__}
    cost.update({k: getattr(c, k) for k in ("gamma", "eta") if hasattr(c, k)})
    return {"benefit": benefit, "cost": cost}


def _outcome_dict(outcome) -> dict:
    return {
        "abatement": outcome.abatement,
        "aggregate": outcome.aggregate,
        "prices": outcome.prices,
        "utilities": outcome.utilities,
        "residual": outcome.residual,
        "converged": outcome.converged,
        "iterations": outcome.iterations,
        "altruist": None if outcome.altruist is None else outcome.altruist + 1,
    }


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# theory


def cmd_theory(args) -> int:
    out = _out_dir(args)
    profile = PopulationProfile(args.pop)
    econ = EconomySpec(args.benefit, args.cost)
    config = SolverConfig(f_tol=args.f_tol, a_rtol=args.a_rtol, max_iter=args.max_iter)
    altruist = args.altruist - 1
    if not 0 <= altruist < len(profile):
        raise ConfigError(f"--altruist {args.altruist} out of range for {len(profile)} countries")

    non = solve_noncooperative(profile, econ, config)
    opt = solve_global_optimum(profile, econ, config)
    mixed = solve_mixed_motives(profile, econ, altruist, config)

    ratios = []
    for i in range(len(profile)):
        for j in range(i + 1, len(profile)):
            ratios.append(
                {
                    "country_i": i + 1,
                    "country_j": j + 1,
                    "price_ratio": price_ratio(non, i, j),
                    "population_ratio": float(profile.sizes[i] / profile.sizes[j]),
                }
            )

    config_dict = {
        "command": "theory",
        "pop": list(args.pop),
        "economy": _econ_dict(econ),
        "altruist": args.altruist,
        "f_tol": args.f_tol,
        "a_rtol": args.a_rtol,
        "max_iter": args.max_iter,
    }
    tolerances = {"f_tol": args.f_tol, "a_rtol": args.a_rtol}
    report = {
        "metadata": run_metadata(config_dict, seed=None, tolerances=tolerances),
        "profile": {"populations": profile.sizes, "total": profile.total},
        "economy": _econ_dict(econ),
        "regimes": {
            "noncooperative": _outcome_dict(non),
            "global_optimum": _outcome_dict(opt),
            "mixed_motives": _outcome_dict(mixed),
        },
        "price_ratios": ratios,
        "altruist_price_exceeds_uniform": bool(
            mixed.prices[altruist] > opt.prices[altruist] + 1e-15 * opt.prices[altruist]
        ),
    }
    if "json" in args.format:
        write_json(out / "theory_report.json", report)
    if "csv" in args.format:
        rows = []
        for name, outcome in (
            ("noncooperative", non),
            ("global_optimum", opt),
            ("mixed_motives", mixed),
        ):
            for k in range(len(profile)):
                rows.append(
                    (
                        name,
                        k + 1,
                        float(profile.sizes[k]),
                        float(outcome.abatement[k]),
                        float(outcome.prices[k]),
                        float(outcome.utilities[k]),
                    )
                )
        write_csv(
            out / "theory_regimes.csv",
            ("regime", "country", "population", "abatement", "price", "utility"),
            rows,
        )
        write_csv(
            out / "theory_ratios.csv",
            ("country_i", "country_j", "price_ratio", "population_ratio"),
            [(r["country_i"], r["country_j"], r["price_ratio"], r["population_ratio"]) for r in ratios],
        )
    print(f"theory: wrote report for {len(profile)} countries to {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# coalition


def _coalition_dict(result) -> dict:
    return {
        "members": sorted(i + 1 for i in result.members),
        "coalition_population": result.coalition_population,
        "member_abatement": result.member_abatement,
        "member_utility": result.member_utility,
        "coalition_total": result.coalition_total,
        "outsider_total": result.outsider_total,
        "aggregate": result.aggregate,
        "abatement": result.abatement,
        "prices": result.prices,
        "utilities": result.utilities,
        "internally_stable": result.internally_stable,
        "externally_stable": result.externally_stable,
    }


def cmd_coalition(args) -> int:
    out = _out_dir(args)
    profile = PopulationProfile(args.pop)
    params = LQParams(args.beta, args.gamma)

    enumerated = None
    if profile.is_strictly_decreasing:
        enumerated = enumerate_equilibria(profile, params)
    elif not args.oracle:
        raise ConfigError(
            "population sizes are not strictly decreasing; re-run with --oracle "
            "to use the subset-scan stability check"
        )
    oracle = brute_force_equilibria(profile, params) if args.oracle else None

    agreement = None
    if enumerated is not None and oracle is not None:
        agreement = {r.members for r in enumerated} == {r.members for r in oracle}

    config_dict = {
        "command": "coalition",
        "pop": list(args.pop),
        "beta": args.beta,
        "gamma": args.gamma,
        "oracle": bool(args.oracle),
    }
    report = {
        "metadata": run_metadata(config_dict),
        "profile": {"populations": profile.sizes, "total": profile.total},
        "params": {"beta": args.beta, "gamma": args.gamma},
        "enumerated": None if enumerated is None else [_coalition_dict(r) for r in enumerated],
        "oracle": None if oracle is None else [_coalition_dict(r) for r in oracle],
        "agreement": agreement,
        "stable_sizes": sorted(
            {len(r.members) for r in (oracle if oracle is not None else enumerated)}
        ),
    }
    if "json" in args.format:
        write_json(out / "coalition_report.json", report)
    if "csv" in args.format:
        rows = []
        for source, results in (("enumerated", enumerated), ("oracle", oracle)):
            for r in results or []:
                rows.append(
                    (
                        source,
                        ";".join(str(i + 1) for i in sorted(r.members)),
                        r.coalition_population,
                        r.member_abatement,
                        float(params.beta * r.coalition_population),
                        r.member_utility,
                        r.aggregate,
                    )
                )
        write_csv(
            out / "coalition_equilibria.csv",
            (
                "source",
                "members",
                "coalition_population",
                "member_abatement",
                "member_price",
                "member_utility",
                "aggregate",
            ),
            rows,
        )
    found = oracle if oracle is not None else enumerated
    sets = ", ".join("{" + ",".join(str(i + 1) for i in sorted(r.members)) + "}" for r in found)
    suffix = "" if agreement is None else f" (agreement={agreement})"
    print(f"coalition: equilibria {sets}{suffix}; wrote report to {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# empirics


_PANELS = (
    ("all", ("all", None), False),
    ("all_positive", ("all", None), True),
    ("drop_largest_2", ("drop_largest_k", 2), False),
    ("drop_largest_2_positive", ("drop_largest_k", 2), True),
    ("europe", ("europe_only", None), False),
    ("europe_positive", ("europe_only", None), True),
)


def _panel_fits(ds: CountryDataset):
    """Univariate price-on-share fits per country subset (scatter panels)."""
    has_region = not ds.frame["region"].isna().all()
    panels = []
    for name, (kind, k), positive in _PANELS:
        if kind == "europe_only" and not has_region:
            continue
        try:
            panel_ds = subset(ds, kind, k)
            if positive:
                panel_ds = subset(panel_ds, "positive_price")
            used = panel_ds.frame[["ecp", FOCAL_COLUMN]].dropna()
            fit = ols_fit(used, "ecp", [FOCAL_COLUMN])
            panels.append(
                {
                    "panel": name,
                    "n_obs": fit.n_obs,
                    "coefficient": fit.coefficient(FOCAL_COLUMN),
                    "intercept": fit.coefficient("intercept"),
                    "p_value": fit.p_value(FOCAL_COLUMN),
                    "r_squared": fit.r_squared,
                    "error": None,
                    "points": used,
                }
            )
        except (RegressionError, IngestError) as exc:
            panels.append(
                {
                    "panel": name,
                    "n_obs": 0,
                    "coefficient": float("nan"),
                    "intercept": float("nan"),
                    "p_value": float("nan"),
                    "r_squared": float("nan"),
                    "error": str(exc),
                    "points": None,
                }
            )
    return panels


def cmd_empirics(args) -> int:
    out = _out_dir(args)
    seed = _resolve_seed(args)
    if args.missing == "impute" and seed is None:
        raise ConfigError(
            f"imputation needs a seed: pass --seed or set {SEED_ENV_VAR}"
        )
    if not args.corr_threshold > 0:
        raise ConfigError("--corr-threshold must be positive")

    ds = load_dataset(args.data_config, latest=args.latest)
    stats_table = summary_stats(ds)

    panels = _panel_fits(ds)

    positive = subset(ds, "positive_price")
    missing_counts = {c: int(positive.mask[c].sum()) for c in CONTROL_COLUMNS}
    corr = pearson_matrix(positive, CONTROL_COLUMNS)
    retained = filter_collinear(corr, threshold=args.corr_threshold, priority=missing_counts)
    dropped = [c for c in CONTROL_COLUMNS if c not in retained]

    if args.missing == "impute":
        # imputation precondition violations are input errors and fail fast
        run = impute_chained(positive, m=args.m, iterations=args.iterations, seed=seed)
        datasets = run.completed
        spec_rows = specification_chart(run, "ecp", FOCAL_COLUMN, retained)
    else:
        complete = positive.copy_with(
            positive.frame[~positive.frame[["ecp", FOCAL_COLUMN, *retained]].isna().any(axis=1)]
        )
        datasets = [complete]
        spec_rows = specification_chart_casewise(positive, "ecp", FOCAL_COLUMN, retained)

    # a subset too degenerate for the full model still ships a report with
    # the per-spec rows; the failure is marked and the exit code says partial
    full_model_failed = False
    try:
        vif_tables = [vif(d, [FOCAL_COLUMN, *retained]) for d in datasets]
        vif_max = {
            col: float(max(table[col] for table in vif_tables))
            for col in [FOCAL_COLUMN, *retained]
        }
        fits = [ols_fit(d, "ecp", [FOCAL_COLUMN, *retained]) for d in datasets]
        pooled_full = pool_rubin(fits)
        full_model = {
            "names": pooled_full.names,
            "coefficients": pooled_full.coefficients,
            "standard_errors": pooled_full.standard_errors,
            "p_values": pooled_full.p_values,
            "m": pooled_full.m,
            "n_obs": pooled_full.n_obs,
        }
    except (RegressionError, ImputationError) as exc:
        full_model_failed = True
        full_model = {"error": str(exc)}
        vif_max = {}

    failed_rows = sum(1 for r in spec_rows if r.failed)
    failed_panels = sum(1 for p in panels if p["error"])

    config_dict = {
        "command": "empirics",
        "data_config": str(args.data_config),
        "latest": bool(args.latest),
        "missing": args.missing,
        "m": args.m,
        "iterations": args.iterations,
        "seed": seed,
        "corr_threshold": args.corr_threshold,
    }
    report = {
        "metadata": run_metadata(
            config_dict, seed=seed, tolerances={"corr_threshold": args.corr_threshold}
        ),
        "manifest": ds.manifest(),
        "summary_stats": {col: dict(stats_table.loc[col]) for col in stats_table.index},
        "panels": [{k: v for k, v in p.items() if k != "points"} for p in panels],
        "correlation": {
            "threshold": args.corr_threshold,
            "matrix": {a: dict(corr.loc[a]) for a in corr.index},
            "retained": list(retained),
            "dropped": dropped,
            "missing_counts": missing_counts,
        },
        "vif_max": vif_max,
        "missing_handling": args.missing,
        "imputation": (
            {"m": args.m, "iterations": args.iterations, "seed": seed}
            if args.missing == "impute"
            else None
        ),
        "full_model": full_model,
        "spec_chart": [
            dict(zip(SPEC_CSV_HEADER, record)) for record in spec_rows_to_records(spec_rows)
        ],
        "n_spec_rows_failed": failed_rows,
        "n_panels_failed": failed_panels,
        "full_model_failed": full_model_failed,
    }

    if "json" in args.format:
        write_json(out / "empirics_report.json", report)
    if "csv" in args.format:
        write_csv(
            out / "summary_stats.csv",
            ("column", "min", "p25", "median", "mean", "p75", "max", "n_missing"),
            [
                (
                    col,
                    *[float(stats_table.loc[col, f]) for f in ("min", "p25", "median", "mean", "p75", "max")],
                    int(stats_table.loc[col, "n_missing"]),
                )
                for col in stats_table.index
            ],
        )
        write_csv(
            out / "panel_fits.csv",
            ("panel", "n_obs", "coefficient", "intercept", "p_value", "r_squared", "error"),
            [
                (
                    p["panel"],
                    p["n_obs"],
                    p["coefficient"],
                    p["intercept"],
                    p["p_value"],
                    p["r_squared"],
                    p["error"] or "",
                )
                for p in panels
            ],
        )
        write_csv(out / "spec_chart.csv", SPEC_CSV_HEADER, spec_rows_to_records(spec_rows))
        for panel in panels:
            if panel["points"] is None:
                continue
            write_csv(
                out / f"scatter_{panel['panel']}.csv",
                (FOCAL_COLUMN, "ecp"),
                list(panel["points"][[FOCAL_COLUMN, "ecp"]].itertuples(index=False, name=None)),
            )
    if "svg" in args.format:
        (out / "spec_chart.svg").write_text(
            spec_chart_svg(spec_rows, retained), encoding="utf-8"
        )
        for panel in panels:
            if panel["points"] is None:
                continue
            caption = (
                f"R2={panel['r_squared']:.3f}; beta={panel['coefficient']:.2f}; "
                f"p={panel['p_value']:.2f}; N={panel['n_obs']}"
            )
            svg = scatter_svg(
                panel["points"][FOCAL_COLUMN],
                panel["points"]["ecp"],
                panel["coefficient"],
                panel["intercept"],
                caption,
                "population share (% of world)",
                "carbon price (USD/tCO2e)",
            )
            (out / f"scatter_{panel['panel']}.svg").write_text(svg, encoding="utf-8")

    print(
        f"empirics: {ds.n} countries, {len(spec_rows)} spec rows "
        f"({failed_rows} failed), wrote reports to {out}"
    )
    return EXIT_PARTIAL if (failed_rows or failed_panels or full_model_failed) else EXIT_OK


# ---------------------------------------------------------------------------
# ingest


def cmd_ingest(args) -> int:
    out = _out_dir(args)
    ds = load_dataset(args.data_config, latest=args.latest)
    ds.to_canonical_csv(out / "dataset.csv")
    config_dict = {
        "command": "ingest",
        "data_config": str(args.data_config),
        "latest": bool(args.latest),
    }
    write_json(
        out / "manifest.json",
        {"metadata": run_metadata(config_dict), **ds.manifest()},
    )
    print(f"ingest: {ds.n} countries -> {out / 'dataset.csv'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser / entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freerider",
        description="Carbon-pricing regimes, coalition stability, and the "
        "country-size regression pipeline.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    theory = sub.add_parser("theory", help="solve the three pricing regimes")
    theory.add_argument("--pop", type=_parse_populations, required=True,
                        help="comma-separated population sizes, e.g. 331e6,126e6,10e6")
    theory.add_argument("--benefit", type=_parse_benefit, default=_parse_benefit("linear:1"),
                        help="linear:BETA | log:KAPPA | power:KAPPA,RHO")
    theory.add_argument("--cost", type=_parse_cost, default=_parse_cost("quad:1"),
                        help="quad:GAMMA | power:GAMMA,ETA")
    theory.add_argument("--altruist", type=int, default=1,
                        help="1-based country index of the globally minded policy-maker")
    theory.add_argument("--f-tol", type=float, default=1e-12)
    theory.add_argument("--a-rtol", type=float, default=1e-10)
    theory.add_argument("--max-iter", type=int, default=200)
    theory.set_defaults(func=cmd_theory)

    coalition = sub.add_parser("coalition", help="participation equilibria of the coalition game")
    coalition.add_argument("--pop", type=_parse_populations, required=True)
    coalition.add_argument("--beta", type=float, default=1.0)
    coalition.add_argument("--gamma", type=float, default=1.0)
    coalition.add_argument("--oracle", action="store_true",
                           help="also run the subset-scan stability oracle")
    coalition.set_defaults(func=cmd_coalition)

    empirics = sub.add_parser("empirics", help="run the full regression pipeline")
    empirics.add_argument("--data-config", required=True,
                          help="JSON mapping of logical columns to (file, column)")
    empirics.add_argument("--missing", choices=("impute", "deletion"), default="impute")
    empirics.add_argument("--m", type=int, default=5, help="number of imputed datasets")
    empirics.add_argument("--iterations", type=int, default=10)
    empirics.add_argument("--seed", type=int, default=None,
                          help=f"imputation seed (falls back to ${SEED_ENV_VAR})")
    empirics.add_argument("--corr-threshold", type=float, default=0.75)
    empirics.add_argument("--latest", action="store_true",
                          help="collapse multi-year sources to the latest year per country")
    empirics.set_defaults(func=cmd_empirics)

    ingest = sub.add_parser("ingest", help="join sources into the canonical dataset")
    ingest.add_argument("--data-config", required=True)
    ingest.add_argument("--latest", action="store_true")
    ingest.set_defaults(func=cmd_ingest)

    for command in (theory, coalition, empirics, ingest):
        command.add_argument("--out", required=True, help="output directory")
        command.add_argument("--format", type=_formats, default={"json", "csv", "svg"},
                             help="comma-separated subset of json,csv,svg")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, IngestError, EconomyError, CoalitionError, ImputationError,
            RegressionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"numerical failure: {exc} (residual {exc.residual!r})", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
