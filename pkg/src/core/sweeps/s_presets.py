from typing import Callable, Dict, List

from more_itertools import numeric_range

from core.sweeps.s_models import SweepConfig


__all__ = ["figure1_preset", "figure2_preset", "PRESETS"]


def _grid(start: int, stop: int, step: int) -> List[int]:
    """Inclusive integer grid start..stop."""
    return [int(p) for p in numeric_range(start, stop + 1, step)]


def figure1_preset(step: int = 5) -> SweepConfig:
    """Risk against p at n = 100, d = 50 for three noise levels (min-norm, direct-linear)."""
    return SweepConfig(
        name="figure1",
        d=50,
        p_grid=_grid(50, 150, step),
        n_values=[100],
        noise_levels=[0.25, 0.5, 1.0],
        data_mode="direct-linear",
        estimator={"kind": "min-norm"},
    )


def figure2_preset(step: int = 10) -> SweepConfig:
    """Risk against p at noise 0.5, d = 50 for four training sizes; the peak follows p = n."""
    return SweepConfig(
        name="figure2",
        d=50,
        p_grid=_grid(50, 350, step),
        n_values=[100, 150, 200, 250],
        noise_levels=[0.5],
        data_mode="direct-linear",
        estimator={"kind": "min-norm"},
    )


PRESETS: Dict[str, Callable[[], SweepConfig]] = {
    "figure1": figure1_preset,
    "figure2": figure2_preset,
}
