import math

from pathlib import Path
from typing import List, Literal, Optional

import matplotlib

matplotlib.use("Agg")

from matplotlib.figure import Figure

from asymptotics.curve import CurveRow
from core.sweeps.s_models import SweepResult, SweepRow


__all__ = ["render_svg", "render_curve_svg"]


SVG_RC = {
    "svg.hashsalt": "hmm-double-descent",
    "svg.fonttype": "path",
}


def _finite(value: Optional[float]) -> float:
    return value if value is not None and math.isfinite(value) else math.nan


def _series_label(noise_level: float, n: int, multi_n: bool, multi_noise: bool) -> str:
    parts = []
    if multi_noise or not multi_n:
        parts.append(f"noise={noise_level:g}")
    if multi_n:
        parts.append(f"n={n}")
    return ", ".join(parts)


def render_svg(
        result: SweepResult,
        path: Path,
        y_scale: Literal["linear", "log"] = "linear",
        series: Optional[List[tuple]] = None
) -> None:
    """Risk against p: empirical means with error bars, theory as lines, p = n as a vertical rule.

    `series` restricts the plot to the given (noise_level, n) pairs.
    """
    if not result.rows:
        raise ValueError("cannot render an empty sweep result")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    selected = series if series is not None else result.series
    multi_n = len({n for _, n in selected}) > 1
    multi_noise = len({noise for noise, _ in selected}) > 1

    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=(7.0, 4.5))
        ax = fig.subplots()
        theory_peak = 0.0

        for index, (noise_level, n) in enumerate(selected):
            rows: List[SweepRow] = result.select(n=n, noise_level=noise_level)
            color = f"C{index % 10}"
            label = _series_label(noise_level, n, multi_n, multi_noise)
            p = [r.p for r in rows]

            ax.errorbar(
                p,
                [_finite(r.emp_risk_mean) for r in rows],
                yerr=[_finite(r.emp_risk_se) if r.emp_risk_se is not None else 0.0 for r in rows],
                fmt="o",
                markersize=3,
                capsize=2,
                color=color,
                label=f"empirical {label}",
            )

            theory = [_finite(r.theory_risk) for r in rows]
            finite_theory = [t for t in theory if not math.isnan(t)]
            if finite_theory:
                theory_peak = max(theory_peak, max(finite_theory))
                (line,) = ax.plot(p, theory, "-", color=color, linewidth=1.2, label=f"theory {label}")
                line.set_gid(f"theory-{noise_level:g}-n{n}")

        for n in sorted({n for _, n in selected}):
            ax.axvline(n, color="0.4", linestyle="--", linewidth=0.8).set_gid(f"threshold-n{n}")

        ax.set_xlabel("p (model size)")
        ax.set_ylabel("risk")
        ax.set_yscale(y_scale)
        if y_scale == "linear" and theory_peak > 0:
            ax.set_ylim(0.0, 1.5 * theory_peak)
        ax.legend(fontsize="small")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})


def render_curve_svg(rows: List[CurveRow], path: Path, y_scale: Literal["linear", "log"] = "linear") -> None:
    """Theoretical bias, variance and risk against γ; threshold rows are left as gaps."""
    if not rows:
        raise ValueError("cannot render an empty theory curve")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    gamma = [r.gamma for r in rows]

    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=(7.0, 4.5))
        ax = fig.subplots()
        for name, style in (("risk", "-"), ("bias", "--"), ("variance", ":")):
            (line,) = ax.plot(gamma, [_finite(getattr(r, name)) for r in rows], style, linewidth=1.2, label=name)
            line.set_gid(f"curve-{name}")
        if min(gamma) < 1.0 < max(gamma):
            ax.axvline(1.0, color="0.4", linestyle="--", linewidth=0.8).set_gid("threshold")

        ax.set_xlabel("gamma = p/n")
        ax.set_ylabel("risk")
        ax.set_yscale(y_scale)
        finite_risk = [r.risk for r in rows if r.risk is not None and math.isfinite(r.risk)]
        if y_scale == "linear" and finite_risk:
            ax.set_ylim(0.0, 1.5 * max(finite_risk))
        ax.legend(fontsize="small")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
