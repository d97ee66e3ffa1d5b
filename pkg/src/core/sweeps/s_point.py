"""Evaluation of a single (n, p, noise level) sweep grid point.

Random streams are addressed by coordinates so that points can run in any
order: designs depend on (seed, n, p, redraw) only and are shared by all
noise levels; Monte Carlo noise depends on (seed, n, p, noise index, redraw)
with one child stream per trial.
"""
import math

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from core.logger import debug
from core.sweeps.s_models import SweepConfig, SweepRow
from asymptotics.context import SpectrumContext
from asymptotics.curve import theoretical_risk_curve, THRESHOLD_BAND
from estimators.exact import exact_risk_report
from estimators.fit import condition_number
from estimators.monte_carlo import monte_carlo_risk
from hmm_model.diagnostics import check_assumption1
from hmm_model.population import RegressionPair, build_population_model, covariance_recipe, coefficient_recipe
from hmm_model.sampling import Dataset, make_rng, sample_direct_linear, sample_iid_rows, sample_sequence


__all__ = ["GridPoint", "grid_points", "build_pair", "draw_dataset", "draw_design", "theory_row", "evaluate_point", "error_row"]


STREAM_COVARIANCE = 0
STREAM_COEFFICIENT = 1
STREAM_DESIGN = 2
STREAM_NOISE = 3


@dataclass(frozen=True)
class GridPoint:
    n: int
    p: int
    noise_index: int
    noise_level: float

    @property
    def gamma(self) -> float:
        return self.p / self.n


def grid_points(config: SweepConfig) -> List[GridPoint]:
    return [
        GridPoint(n=n, p=p, noise_index=k, noise_level=level)
        for k, level in enumerate(config.noise_levels)
        for n in config.n_values
        for p in config.p_grid
    ]


def build_pair(config: SweepConfig, p: int, noise_level: float) -> RegressionPair:
    """Regression problem at representation size p.

    direct-linear: Σ_x and B from the recipes, Σ_ε = noise·I_d.
    hmm modes: the population model of the template with σ_ξ² = noise.
    """
    if config.data_mode != "direct-linear":
        return build_population_model(config.model_spec(p, noise_level))

    sigma_x = covariance_recipe(
        p,
        config.sigma_x_recipe,
        config.spectrum_low,
        config.spectrum_high,
        make_rng(config.seed, STREAM_COVARIANCE, p),
    )
    if config.b_recipe == "zero":
        B = np.zeros((p, config.d))
    else:
        B = coefficient_recipe(p, config.d, make_rng(config.seed, STREAM_COEFFICIENT, p))
    return RegressionPair.direct(sigma_x, B, noise_level)


def draw_dataset(config: SweepConfig, pair: RegressionPair, n: int, redraw: int, noise_level: float) -> Dataset:
    """Design and targets of one redraw; X does not depend on the noise level."""
    rng = make_rng(config.seed, STREAM_DESIGN, n, pair.p, redraw)
    match config.data_mode:
        case "direct-linear":
            return sample_direct_linear(pair.sigma_x, pair.B, noise_level, n, rng)
        case "iid-gaussian":
            return sample_iid_rows(pair, n, rng)
        case _:
            return sample_sequence(pair, config.model_spec(pair.p, noise_level), n, rng)


def draw_design(config: SweepConfig, pair: RegressionPair, n: int, redraw: int) -> np.ndarray:
    return draw_dataset(config, pair, n, redraw, config.noise_levels[0]).X


def _mean_se(values: List[float]) -> Tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        return float(arr.mean()), 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / np.sqrt(arr.size))


def theory_row(config: SweepConfig, pair: RegressionPair, n: int):
    ctx = SpectrumContext.from_pair(pair, n)
    lam = config.estimator.lam if config.estimator.kind == "ridge" else None
    (row,) = theoretical_risk_curve(ctx, [ctx.gamma], lam=lam, threshold_band=THRESHOLD_BAND)
    return row


def evaluate_point(config: SweepConfig, point: GridPoint) -> SweepRow:
    """Exact-conditional risk averaged over redrawn designs, plus theory at γ = p/n."""
    pair = build_pair(config, point.p, point.noise_level)
    check_assumption1(pair, point.n, config.assumption_m)

    biases, variances, risks, conds, mc_risks = [], [], [], [], []
    for redraw in range(config.x_redraws):
        X = draw_design(config, pair, point.n, redraw)
        report = exact_risk_report(X, pair, config.estimator)
        biases.append(report.bias)
        variances.append(report.variance)
        risks.append(report.risk)
        conds.append(condition_number(X))

        if config.trials >= 2:
            rng = make_rng(config.seed, STREAM_NOISE, point.n, point.p, point.noise_index, redraw)
            mc_risks.append(monte_carlo_risk(X, pair, config.estimator, config.trials, rng).risk)

    theory = theory_row(config, pair, point.n)
    bias_mean, bias_se = _mean_se(biases)
    var_mean, var_se = _mean_se(variances)
    risk_mean, risk_se = _mean_se(risks)
    mc_mean, mc_se = _mean_se(mc_risks) if mc_risks else (None, None)
    cond = float("inf") if any(math.isinf(c) for c in conds) else float(np.mean(conds))

    debug(f"point n={point.n} p={point.p} noise={point.noise_level}: risk={risk_mean:.6g}, theory={theory.risk}")
    return SweepRow(
        n=point.n,
        p=point.p,
        gamma=point.gamma,
        noise_level=point.noise_level,
        emp_bias_mean=bias_mean,
        emp_bias_se=bias_se,
        emp_var_mean=var_mean,
        emp_var_se=var_se,
        emp_risk_mean=risk_mean,
        emp_risk_se=risk_se,
        theory_bias=theory.bias,
        theory_variance=theory.variance,
        theory_risk=theory.risk,
        c0_or_blank=theory.c0,
        threshold_tag=theory.tag,
        mc_risk_mean=mc_mean,
        mc_risk_se=mc_se,
        cond_number=cond,
    )


def error_row(point: GridPoint) -> SweepRow:
    return SweepRow(
        n=point.n,
        p=point.p,
        gamma=point.gamma,
        noise_level=point.noise_level,
        threshold_tag="error",
    )
