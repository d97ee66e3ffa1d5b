"""Numerical self-check of the deterministic theory and the ridge/ridgeless bridge.

Each check returns (passed, detail); the command prints one PASS/FAIL line
per check and exits nonzero when any check fails.
"""
from argparse import Namespace
from pathlib import Path
from typing import Callable, List, Tuple

import numpy as np
import ujson as json

from core.logger import info, error
from core.commands.cmd_abstract import Command, UsageError
from core.commands.cmd_utils import write_run_metadata, emit
from asymptotics.context import SpectrumContext
from asymptotics.fixed_point import RESIDUAL_TOL, solve_c0, solve_mn, mn_derivative, mn_derivative_fd
from asymptotics.functionals import (
    asymptotic_bias,
    asymptotic_variance,
    underparam_risk,
    ridge_bridge_gap,
    variance_slope,
    variance_slope_direct,
)
from asymptotics.kernels import c0_residual, mn_residual
from estimators.fit import fit_min_norm, fit_ridge
from hmm_model.sampling import make_rng


CheckResult = Tuple[bool, str]

BRIDGE_LAMBDAS = (1e-2, 1e-3, 1e-4)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _random_context(rng: np.random.Generator, max_p: int = 500) -> SpectrumContext:
    p = int(rng.integers(10, max_p + 1))
    return SpectrumContext(
        eigs=rng.uniform(0.5, 3.0, size=p),
        gamma=float(rng.uniform(1.1, 10.0)),
        trace_sigma_eps=1.0,
        b_weights=np.full(p, 1.0 / p),
    )


def _decreasing(values: List[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def check_isotropic_c0(seed: int) -> CheckResult:
    worst = 0.0
    for gamma in (1.5, 2.0, 4.0, 10.0):
        c0 = solve_c0(SpectrumContext.isotropic(400, gamma)).value
        worst = max(worst, _rel(c0, 1.0 / (gamma * (gamma - 1.0))))
    return worst <= 1e-8, f"max relative error of c0 vs 1/(gamma(gamma-1)): {worst:.3e}"


def check_isotropic_closed_forms(seed: int) -> CheckResult:
    ctx = SpectrumContext.isotropic(400, 2.0, trace_sigma_eps=1.0, b_norm2=1.0)
    bias, variance = asymptotic_bias(ctx), asymptotic_variance(ctx)
    under = underparam_risk(0.5, 1.0)
    ok = _rel(bias, 0.5) <= 1e-8 and _rel(variance, 1.0) <= 1e-8 and _rel(under, 1.0) <= 1e-12
    return ok, f"gamma=2: bias={bias!r} variance={variance!r}; gamma=0.5: risk={under!r}"


def check_fixed_point_residuals(seed: int) -> CheckResult:
    rng = make_rng(seed, 10)
    worst_c0, worst_mn = 0.0, 0.0
    for _ in range(100):
        ctx = _random_context(rng)
        c0 = solve_c0(ctx).value
        worst_c0 = max(worst_c0, abs(c0_residual(c0, ctx.gamma, ctx.eigs)))
        m = solve_mn(1e-2, ctx).value
        worst_mn = max(worst_mn, abs(mn_residual(m, 1e-2, ctx.gamma, ctx.eigs)) / max(1.0, m))
    ok = worst_c0 <= RESIDUAL_TOL and worst_mn <= RESIDUAL_TOL
    return ok, f"100 spectra: max c0 residual {worst_c0:.3e}, max m_n residual {worst_mn:.3e}"


def check_derivative_oracle(seed: int) -> CheckResult:
    rng = make_rng(seed, 11)
    worst = 0.0
    for _ in range(20):
        ctx = _random_context(rng, max_p=200)
        lam = float(rng.uniform(0.05, 1.0))
        worst = max(worst, _rel(mn_derivative(lam, ctx), mn_derivative_fd(lam, ctx)))
    return worst <= 1e-6, f"20 spectra: max relative gap implicit vs finite difference {worst:.3e}"


def check_variance_slope(seed: int) -> CheckResult:
    rng = make_rng(seed, 12)
    worst = 0.0
    for _ in range(10):
        ctx = _random_context(rng, max_p=200)
        lam = float(rng.uniform(0.1, 1.0))
        worst = max(worst, abs(variance_slope(lam, ctx) - variance_slope_direct(lam, ctx)))
    return worst <= 1e-6, f"10 spectra: max |identity - direct| {worst:.3e}"


def check_small_lambda_expansion(seed: int) -> CheckResult:
    ctx = SpectrumContext.isotropic(400, 2.0)
    c0 = solve_c0(ctx).value
    gaps = [
        abs(solve_mn(lam, ctx).value - (1.0 - 1.0 / ctx.gamma) / lam - c0)
        for lam in BRIDGE_LAMBDAS
    ]
    ok = _decreasing(gaps) and gaps[-1] <= 1e-3
    return ok, "gaps " + ", ".join(f"{g:.3e}" for g in gaps)


def check_ridge_bridge(seed: int) -> CheckResult:
    rng = make_rng(seed, 13)
    p = 200
    ctx = SpectrumContext(
        eigs=rng.uniform(0.5, 3.0, size=p),
        gamma=2.0,
        trace_sigma_eps=1.0,
        b_weights=rng.dirichlet(np.ones(p)),
    )
    gaps = [ridge_bridge_gap(ctx, lam) for lam in BRIDGE_LAMBDAS]
    bias_gaps = [g[0] for g in gaps]
    variance_gaps = [g[1] for g in gaps]
    ok = _decreasing(bias_gaps) and _decreasing(variance_gaps)
    detail = "bias gaps " + ", ".join(f"{g:.3e}" for g in bias_gaps)
    detail += "; variance gaps " + ", ".join(f"{g:.3e}" for g in variance_gaps)
    return ok, detail


def check_estimator_bridge(seed: int) -> CheckResult:
    rng = make_rng(seed, 14)
    X = rng.standard_normal((100, 200))
    Y = rng.standard_normal((100, 5))
    ridgeless = fit_min_norm(X, Y).Bhat
    ridge = fit_ridge(X, Y, 1e-10).Bhat
    rel = float(np.linalg.norm(ridge - ridgeless) / np.linalg.norm(ridgeless))
    return rel <= 1e-6, f"||B_lambda - B||_F / ||B||_F = {rel:.3e} at lambda=1e-10"


CHECKS: List[Tuple[str, Callable[[int], CheckResult]]] = [
    ("isotropic-c0", check_isotropic_c0),
    ("isotropic-closed-forms", check_isotropic_closed_forms),
    ("fixed-point-residuals", check_fixed_point_residuals),
    ("derivative-oracle", check_derivative_oracle),
    ("variance-slope-identity", check_variance_slope),
    ("small-lambda-expansion", check_small_lambda_expansion),
    ("ridge-bridge", check_ridge_bridge),
    ("estimator-bridge", check_estimator_bridge),
]


def run_checks(seed: int = 0) -> List[Tuple[str, bool, str]]:
    results = []
    for name, check in CHECKS:
        try:
            passed, detail = check(seed)
        except Exception as e:
            error(f"check '{name}' raised: {e}")
            passed, detail = False, f"{type(e).__name__}: {e}"
        results.append((name, bool(passed), detail))
    return results


class CmdSelfcheck(Command):
    name = "selfcheck"
    help = "run the closed-form, fixed-point, derivative and bridge checks; nonzero exit on failure"

    def run(self, args: Namespace) -> int:
        if args.config is not None or args.overrides:
            raise UsageError("selfcheck takes no --config or --set")
        seed = args.seed if args.seed is not None else 0
        results = run_checks(seed)
        for name, passed, detail in results:
            emit(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")

        failed = [name for name, passed, _ in results if not passed]
        if args.out is not None:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            with (out / "selfcheck.json").open("w") as f:
                f.write(json.dumps([{"check": n, "passed": p, "detail": d} for n, p, d in results], indent=2))
            write_run_metadata(out, self.name, {}, seed, failed=failed)

        if failed:
            error(f"{len(failed)} of {len(results)} checks failed: {', '.join(failed)}")
            return 1
        info(f"All {len(results)} checks passed")
        return 0
