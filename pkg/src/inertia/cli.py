"""
===============
 inertia.cli
===============

    inertia fit        --data-dir data/ --out out/
    inertia predict    --model out/model.json --data-dir future/ --out out/
    inertia anticipate --candidates candidates.csv --baseline 109.9
    inertia synth      --n-plants 50 --seed 7 --out data/
    inertia oracle-check

Results are JSON on stdout, logs go to stderr. Exit codes: 0 success,
1 failed oracle check or solver failure, 2 input error, 3 model error,
4 infeasible plan.

"""

import argparse
import datetime as dt
import json
import logging
import pathlib
import sys
from typing import Any, Dict, List, Optional, Sequence

import pydantic

from inertia import anticipate, checks, estimator, forecast, ingest, synth, utils
from inertia.config import RunConfig
from inertia.exceptions import (
    AlignmentError,
    InertiaError,
    InfeasiblePlanError,
    InputError,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def _emit(document: Dict[str, Any]) -> None:
    sys.stdout.write(json.dumps(document, indent=2, default=utils.json_default))
    sys.stdout.write("\n")


def _out_dir(config: RunConfig) -> pathlib.Path:
    try:
        config.out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise InputError(f"cannot create output directory {config.out}: {e}") from e
    return config.out


def _restrict(series: ingest.AggregateSeries, config: RunConfig):
    if config.since is None and config.until is None:
        return series
    restricted = series.between(config.since, config.until)
    if not len(restricted):
        raise AlignmentError(
            f"no period between {config.since} and {config.until}"
        )
    return restricted


def cmd_fit(config: RunConfig) -> int:
    positions = ingest.load_positions(config.required("positions"))
    series = ingest.load_aggregate(
        config.required("market"),
        config.required("outturn"),
        config.required("demand"),
    )
    actions_path = config.optional("actions")
    actions = ingest.load_actions(actions_path) if actions_path else None
    plants_path = config.optional("plants")
    plants = ingest.load_plants(plants_path) if plants_path else None

    series = _restrict(series, config)
    ind = ingest.build_indicators(
        positions, actions, series, config.on_threshold_mw, plants
    )
    groups = ingest.group_colinear(ind, config.agreement) if config.group else None

    options = dict(
        mode=config.mode,
        use_tso_rows=config.use_tso_rows,
        exact_limit=config.exact_limit,
    )
    if config.lam is not None:
        sol = estimator.fit(ind, series, groups, config.lam, **options)
    else:
        _, sol = estimator.select_lambda(
            ind,
            series,
            groups,
            grid=config.lambda_grid,
            validation_split=config.validation_split,
            tie_rtol=config.lambda_tie_rtol,
            **options,
        )

    out = _out_dir(config)
    model = estimator.save_model(
        out / "model.json", sol, plants, fuels=dict(zip(ind.plants, ind.fuels))
    )
    estimator.plant_report(model).to_csv(
        out / "plants_report.csv", index=False, na_rep="", lineterminator="\n"
    )
    estimator.fuel_summary(model).to_csv(
        out / "fuel_summary.csv", index=False, na_rep="", lineterminator="\n"
    )

    _emit(
        {
            "model": str(out / "model.json"),
            "lambda": model.lam,
            "n_nonzero": model.diagnostics.n_nonzero,
            "rmse_gvas": model.diagnostics.rmse_gvas,
            "mae_gvas": model.diagnostics.mae_gvas,
            "exact": model.diagnostics.exact,
            "dropped_periods": series.dropped,
            "warnings": ind.warnings,
            "degenerate": sol.diagnostics.degenerate,
            "colinear": sol.diagnostics.colinear,
        }
    )
    return 0


def cmd_predict(config: RunConfig, model_path: pathlib.Path) -> int:
    model = estimator.load_model(model_path)
    positions = ingest.load_positions(config.required("positions"))
    demand = ingest.load_demand(config.required("demand"))
    market_path = config.optional("market")
    market = ingest.load_inertia(market_path) if market_path else None

    series = _restrict(ingest.AggregateSeries.from_demand(demand, market), config)
    ind = ingest.build_indicators(positions, None, series, config.on_threshold_mw)
    f = forecast.predict(model, ind, series, trigger=config.trigger_gvas)

    out = _out_dir(config)
    forecast.write_forecast(out / "forecast.csv", f)

    document: Dict[str, Any] = {
        "forecast": str(out / "forecast.csv"),
        "trigger_gvas": config.trigger_gvas,
        "low_periods": [str(p) for p in forecast.detect_low(f)],
    }
    if f.has_actuals:
        document["evaluation"] = forecast.evaluate(f).to_dict()
    _emit(document)
    return 0


def cmd_anticipate(
    config: RunConfig, candidates_path: pathlib.Path, baseline: float
) -> int:
    cands = anticipate.load_candidates(candidates_path)
    p = anticipate.plan(cands, baseline, config.trigger_gvas, config.lead_minutes)

    out = _out_dir(config)
    anticipate.write_plan(out / "plan.json", p)
    _emit(p.model_dump(mode="json"))

    if not p.feasible:
        raise InfeasiblePlanError(
            f"best plan reaches {p.achieved_gvas:.3f} GVAs, below the "
            f"{config.trigger_gvas} GVAs trigger"
        )
    return 0


def cmd_synth(config: RunConfig) -> int:
    cfg = config.scenario
    if "seed" in config.model_fields_set:
        cfg = cfg.model_copy(update={"seed": config.seed})
    scenario = synth.generate(cfg)
    try:
        paths = synth.export_scenario(scenario, config.out)
    except OSError as e:
        raise InputError(f"cannot write scenario to {config.out}: {e}") from e

    _emit(
        {
            "files": {key: str(path) for key, path in paths.items()},
            "plants": cfg.n_plants,
            "nonzero": sum(1 for p in scenario.plants if p.true_inertia),
            "periods": cfg.n_periods,
            "seed": cfg.seed,
        }
    )
    return 0


def cmd_oracle_check(config: RunConfig, instances: int) -> int:
    report = checks.oracle_check(config.seed, instances)
    _emit(report)
    return 0 if report["passed"] else 1


def _grid(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a comma separated list: {text}") from e


def _date(text: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not an ISO date: {text}") from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=pathlib.Path, help="JSON/YAML RunConfig")
    common.add_argument("--log-level", default="WARNING")
    common.add_argument("--out", type=pathlib.Path)
    common.add_argument("--seed", type=int)

    files = argparse.ArgumentParser(add_help=False)
    files.add_argument("--data-dir", type=pathlib.Path)
    for name in ("positions", "market", "outturn", "demand", "actions", "plants"):
        files.add_argument(f"--{name}", type=pathlib.Path)
    files.add_argument("--on-threshold-mw", type=float)
    files.add_argument("--since", type=_date)
    files.add_argument("--until", type=_date)

    parser = argparse.ArgumentParser(
        prog="inertia", description="Per-plant inertia from aggregate grid inertia."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", parents=[common, files], help="fit plant inertia")
    fit.add_argument("--lambda", dest="lam", type=float)
    fit.add_argument("--lambda-grid", type=_grid)
    fit.add_argument("--mode", choices=["exact", "heuristic", "auto"])
    fit.add_argument("--agreement", type=float)
    fit.add_argument("--validation-split", type=float)
    fit.add_argument("--lambda-tie-rtol", type=float)
    fit.add_argument("--exact-limit", type=int)
    fit.add_argument(
        "--no-tso-rows", dest="use_tso_rows", action="store_const", const=False
    )
    fit.add_argument("--no-grouping", dest="group", action="store_const", const=False)

    predict = sub.add_parser("predict", parents=[common, files], help="forecast")
    predict.add_argument("--model", type=pathlib.Path, required=True)
    predict.add_argument("--trigger-gvas", type=float)

    plan = sub.add_parser("anticipate", parents=[common], help="plan TSO actions")
    plan.add_argument("--candidates", type=pathlib.Path, required=True)
    plan.add_argument("--baseline", type=float, required=True)
    plan.add_argument("--trigger-gvas", type=float)
    plan.add_argument("--lead-minutes", type=float)

    gen = sub.add_parser("synth", parents=[common], help="synthetic scenario")
    gen.add_argument("--n-plants", type=int)
    gen.add_argument("--zero-fraction", type=float)
    gen.add_argument("--n-periods", type=int)
    gen.add_argument("--noise-sigma", type=float)
    gen.add_argument("--w-dem", dest="w_dem_true", type=float)
    gen.add_argument("--duty-cycle", type=float)
    gen.add_argument("--tso-action-rate", type=float)
    gen.add_argument("--colinear-pairs", type=int)
    gen.add_argument("--start-date", type=_date)

    oracle = sub.add_parser("oracle-check", parents=[common], help="solver oracles")
    oracle.add_argument("--instances", type=int, default=20)

    return parser


SCENARIO_FLAGS = (
    "n_plants",
    "zero_fraction",
    "n_periods",
    "noise_sigma",
    "w_dem_true",
    "duty_cycle",
    "tso_action_rate",
    "colinear_pairs",
    "start_date",
)
NOT_CONFIG = {
    "command",
    "config",
    "log_level",
    "model",
    "candidates",
    "baseline",
    "instances",
}


def load_config(args: argparse.Namespace) -> RunConfig:
    base = RunConfig.from_file(args.config) if args.config else None
    values = {k: v for k, v in vars(args).items() if k not in NOT_CONFIG}
    scenario = {k: values.pop(k) for k in SCENARIO_FLAGS if k in values}
    values["scenario"] = {k: v for k, v in scenario.items() if v is not None}
    return RunConfig.merged(base, values)


def run(args: argparse.Namespace) -> int:
    config = load_config(args)
    if args.command == "fit":
        return cmd_fit(config)
    if args.command == "predict":
        return cmd_predict(config, args.model)
    if args.command == "anticipate":
        return cmd_anticipate(config, args.candidates, args.baseline)
    if args.command == "synth":
        return cmd_synth(config)
    return cmd_oracle_check(config, args.instances)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=str(args.log_level).upper(), stream=sys.stderr, format=LOG_FORMAT
    )

    try:
        return run(args)
    except InertiaError as e:
        sys.stderr.write(f"inertia {args.command}: {e}\n")
        return e.exit_code
    except pydantic.ValidationError as e:
        sys.stderr.write(f"inertia {args.command}: invalid settings\n{e}\n")
        return 2


__all__ = [
    "build_parser",
    "cmd_anticipate",
    "cmd_fit",
    "cmd_oracle_check",
    "cmd_predict",
    "cmd_synth",
    "main",
]
