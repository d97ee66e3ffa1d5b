import math

from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import ujson as json

from core.logger import info
from core.commands.cmd_abstract import Command, UsageError
from core.commands.cmd_utils import add_run_arguments, run_flag_values, resolve_config, write_run_metadata, emit
from core.sweeps.s_models import SweepConfig
from core.sweeps.s_point import STREAM_NOISE, build_pair, draw_dataset, theory_row
from estimators.exact import exact_risk_report, plug_in_report
from estimators.fit import condition_number, fit
from estimators.monte_carlo import monte_carlo_risk
from hmm_model.diagnostics import check_assumption1
from hmm_model.exports import write_dataset_csv, write_dataset_json
from hmm_model.sampling import make_rng


EMPIRICAL_DEFAULTS: Dict[str, Any] = {
    "name": "empirical",
    "d": 10,
    "p_grid": [50],
    "n_values": [100],
    "noise_levels": [1.0],
    "x_redraws": 1,
}


def _single_point(config: SweepConfig):
    if len(config.p_grid) != 1 or len(config.n_values) != 1 or len(config.noise_levels) != 1:
        raise UsageError("empirical evaluates one point: p_grid, n_values and noise_levels must each hold one value")
    return config.n_values[0], config.p_grid[0], config.noise_levels[0]


class CmdEmpirical(Command):
    """Fit one estimator on drawn data and compare exact, plug-in, Monte Carlo and theory risks."""
    name = "empirical"
    help = "fit the estimator at one (n, p, noise) point and report its risks"

    def add_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("--n", type=int, help="training sample size")
        parser.add_argument("--p", type=int, help="representation dimension")
        parser.add_argument("--d", type=int, help="token dimension")
        parser.add_argument("--noise", type=float, help="noise level (sigma_eps scalar or sigma_xi2)")
        add_run_arguments(parser)

    def run(self, args: Namespace) -> int:
        doc = resolve_config(
            EMPIRICAL_DEFAULTS,
            args.config,
            {
                "n_values": [args.n] if args.n is not None else None,
                "p_grid": [args.p] if args.p is not None else None,
                "d": args.d,
                "noise_levels": [args.noise] if args.noise is not None else None,
                **run_flag_values(args),
            },
            args.overrides,
        )
        config = SweepConfig.model_validate(doc)
        n, p, noise_level = _single_point(config)

        pair = build_pair(config, p, noise_level)
        assumption = check_assumption1(pair, n, config.assumption_m)
        theory = theory_row(config, pair, n)

        draws: List[Dict[str, Any]] = []
        first_dataset = None
        for redraw in range(config.x_redraws):
            dataset = draw_dataset(config, pair, n, redraw, noise_level)
            if redraw == 0:
                first_dataset = dataset
            cond = condition_number(dataset.X)
            draw = {
                "redraw": redraw,
                "cond_number": cond if math.isfinite(cond) else "inf",
                "exact": exact_risk_report(dataset.X, pair, config.estimator).model_dump(mode="json"),
                "plug_in": plug_in_report(fit(dataset.X, dataset.Y, config.estimator), pair).model_dump(mode="json"),
                "monte_carlo": None,
            }
            if config.trials >= 2:
                rng = make_rng(config.seed, STREAM_NOISE, n, p, 0, redraw)
                report = monte_carlo_risk(dataset.X, pair, config.estimator, config.trials, rng)
                draw["monte_carlo"] = report.model_dump(mode="json")
            draws.append(draw)

        exact_mean = float(np.mean([d["exact"]["risk"] for d in draws]))
        emit(f"estimator: {config.estimator.label}, n={n}, p={p}, gamma={p / n!r}, noise={noise_level!r}")
        for draw in draws:
            exact = draw["exact"]
            line = f"redraw {draw['redraw']}: exact bias={exact['bias']!r} variance={exact['variance']!r} risk={exact['risk']!r}"
            line += f" plug-in={draw['plug_in']['risk']!r}"
            if draw["monte_carlo"] is not None:
                line += f" monte-carlo={draw['monte_carlo']['risk']!r}±{draw['monte_carlo']['stderr']!r}"
            emit(line)
        emit(f"mean exact risk: {exact_mean!r}")
        emit(f"theory: bias={theory.bias!r} variance={theory.variance!r} risk={theory.risk!r} {theory.tag}".rstrip())

        if args.out is None:
            return 0

        out = Path(args.out)
        report = {
            "n": n,
            "p": p,
            "gamma": p / n,
            "noise_level": noise_level,
            "estimator": config.estimator.model_dump(mode="json"),
            "mean_exact_risk": exact_mean,
            "theory": theory.to_json_dict(),
            "assumption": assumption.model_dump(mode="json"),
            "draws": draws,
        }
        out.mkdir(parents=True, exist_ok=True)
        with (out / "report.json").open("w") as f:
            f.write(json.dumps(report, indent=2))
        if "csv" in args.formats:
            write_dataset_csv(first_dataset, out / "dataset.csv")
        if "json" in args.formats:
            write_dataset_json(first_dataset, out / "dataset.json")
        write_run_metadata(out, self.name, config.model_dump(mode="json"), config.seed)
        info(f"Empirical report written to {out}")
        return 0
