from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Any, Dict, Optional

from core.globals import RUNS_DIR
from core.logger import info, warn
from core.commands.cmd_abstract import Command
from core.commands.cmd_utils import add_run_arguments, run_flag_values, resolve_config, write_run_metadata, emit
from core.sweeps.s_models import SweepConfig, SweepResult
from core.sweeps.s_persist import write_csv, write_json
from core.sweeps.s_presets import PRESETS
from core.sweeps.s_render import render_svg
from core.sweeps.s_runner import run_sweep
from core.sweeps.s_shape import peak_p
from telemetry.tele_writer import TeleWriter


def summarize_peaks(result: SweepResult) -> Dict[str, Optional[int]]:
    peaks = {}
    for noise_level, n in result.series:
        peak = peak_p(result, n, noise_level)
        peaks[f"noise={noise_level:g},n={n}"] = peak
        info(f"Series noise={noise_level:g} n={n}: empirical risk peaks at p={peak}")
    return peaks


class CmdSweep(Command):
    """Run a sweep from a config file, or from a built-in preset in the subclasses."""
    name = "sweep"
    help = "run a risk sweep over the (n, p, noise) grid of a config file"
    preset: Optional[str] = None

    def add_arguments(self, parser: ArgumentParser) -> None:
        add_run_arguments(parser)

    def base_config(self) -> Dict[str, Any]:
        if self.preset is None:
            return {}
        return PRESETS[self.preset]().model_dump(mode="json")

    def run(self, args: Namespace) -> int:
        doc = resolve_config(self.base_config(), args.config, run_flag_values(args), args.overrides)
        config = SweepConfig.model_validate(doc)
        out = Path(args.out) if args.out is not None else RUNS_DIR / config.name

        result = run_sweep(config, TeleWriter(out / "telemetry"))
        errors = sum(1 for row in result.rows if row.threshold_tag == "error")

        outputs = []
        if "csv" in args.formats:
            write_csv(result, out / "sweep.csv")
            outputs.append("sweep.csv")
        if "json" in args.formats:
            write_json(result, out / "sweep.json")
            outputs.append("sweep.json")
        if "svg" in args.formats:
            render_svg(result, out / "sweep.svg")
            outputs.append("sweep.svg")

        peaks = summarize_peaks(result)
        write_run_metadata(
            out,
            self.name,
            config.model_dump(mode="json"),
            config.seed,
            outputs=outputs,
            peaks=peaks,
            error_rows=errors,
            **{k: v for k, v in result.metadata.items() if k != "config"},
        )

        for key, peak in peaks.items():
            emit(f"{key}: peak p={peak}")
        emit(f"outputs written to {out}")
        if errors:
            warn(f"{errors} grid points failed; see the logs and telemetry under {out}")
            return 1
        return 0


class CmdFigure1(CmdSweep):
    name = "figure1"
    help = "risk against p at n = 100 for three noise levels (preset, overridable)"
    preset = "figure1"


class CmdFigure2(CmdSweep):
    name = "figure2"
    help = "risk against p at noise 0.5 for four training sizes (preset, overridable)"
    preset = "figure2"
