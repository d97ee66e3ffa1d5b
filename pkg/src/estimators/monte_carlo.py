"""Fresh-noise Monte Carlo risk for a fixed design.

Every trial redraws E ~ N(0, Σ_ε), refits on Y = XB + E and records the
whitened deviation v_t = Σ_x^{1/2}(B̂_t − B), so that ‖v_t‖² is the plug-in
risk of trial t. From the T deviations:

    risk      mean of ‖v_t‖²
    variance  Σ_t‖v_t − v̄‖²/(T − 1)
    bias      ‖v̄‖² − variance/T, clipped at 0

The bias estimate is the risk of the trial-averaged B̂ with its finite-T
noise share removed; risk − bias − variance vanishes up to that clipping
and the (T − 1)/T factor on the variance.
"""
import numpy as np

from core.logger import debug
from estimators.fit import DEFAULT_REL_CUTOFF, check_design, smoother_matrix
from estimators.models import EstimatorSpec, RiskReport
from hmm_model.population import RegressionPair, gaussian_factor
from hmm_model.sampling import SeedLike, resolve_rng


__all__ = ["monte_carlo_risk", "summarize_deviations"]


def summarize_deviations(deviations: np.ndarray) -> RiskReport:
    """Risk, bias and variance estimates (with standard errors) from a T×k deviation matrix.

    variance is the unbiased trial spread; bias is the risk of the trial-averaged estimate
    ‖v̄‖² minus its own noise share variance/T, so bias + variance equals the mean risk
    unless the bias is clipped at 0.
    """
    T = deviations.shape[0]
    if T < 2:
        raise ValueError(f"need at least 2 trials, got {T}")

    risks = np.sum(deviations ** 2, axis=1)
    mean_dev = deviations.mean(axis=0)
    centered = deviations - mean_dev
    spreads = np.sum(centered ** 2, axis=1)

    variance = float(np.sum(spreads) / (T - 1))
    bias = max(float(mean_dev @ mean_dev) - variance / T, 0.0)

    # first- and second-order terms of the pairwise-product estimator of ‖E v‖²
    projections = centered @ mean_dev
    gram = centered @ centered.T
    bias_var = (
        4.0 * float(np.var(projections, ddof=1)) / T
        + 2.0 * float(np.sum(gram ** 2)) / ((T - 1) ** 2 * T * (T - 1))
    )

    return RiskReport(
        bias=bias,
        variance=variance,
        risk=float(risks.mean()),
        method="monte-carlo",
        stderr=float(np.std(risks, ddof=1) / np.sqrt(T)),
        trials=T,
        bias_stderr=float(np.sqrt(max(bias_var, 0.0))),
        variance_stderr=float(np.std(spreads, ddof=1) / np.sqrt(T) * T / (T - 1)),
    )


def monte_carlo_risk(
        X: np.ndarray,
        model: RegressionPair,
        estimator: EstimatorSpec,
        trials: int,
        rng: SeedLike,
        rel_cutoff: float = DEFAULT_REL_CUTOFF
) -> RiskReport:
    """Average plug-in risk over `trials` fresh noise draws with X held fixed.

    Trial t draws its noise from the t-th child stream of `rng`, so results
    do not depend on how trials are scheduled.
    """
    if trials < 2:
        raise ValueError(f"monte carlo risk needs trials >= 2, got {trials}")
    X, _ = check_design(X)
    if X.shape[1] != model.p:
        raise ValueError(f"X has {X.shape[1]} columns, model has p={model.p}")

    gen, _ = resolve_rng(rng)
    n, d = X.shape[0], model.d
    lam = estimator.lam if estimator.kind == "ridge" else 0.0

    H, _, _ = smoother_matrix(X, lam, rel_cutoff)
    noise_factor = gaussian_factor(model.sigma_eps)
    whiten = model.sigma_x_sqrt
    # B̂_t − B = (HX − I)B + H·E_t; the first term is shared by every trial
    shared = whiten @ (H @ (X @ model.B) - model.B)
    noise_map = whiten @ H

    deviations = np.empty((trials, model.p * d))
    for t, child in enumerate(gen.spawn(trials)):
        E = child.standard_normal((n, d)) @ noise_factor.T
        deviations[t] = (shared + noise_map @ E).ravel()

    report = summarize_deviations(deviations)
    debug(f"monte carlo {estimator.label}: trials={trials}, risk={report.risk:.6g} ± {report.stderr:.2g}")
    return report
