from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import List, Literal, Optional

import numpy as np

from more_itertools import numeric_range
from pydantic import BaseModel, ConfigDict, Field, field_validator

from core.logger import info
from core.commands.cmd_abstract import Command
from core.commands.cmd_utils import parse_float_list, resolve_config, write_run_metadata, emit
from core.sweeps.s_render import render_curve_svg
from asymptotics.context import SpectrumContext
from asymptotics.curve import (
    CURVE_CSV_HEADER,
    THRESHOLD_BAND,
    CurveRow,
    format_cell,
    theoretical_risk_curve,
    write_curve_csv,
    write_curve_json,
)
from hmm_model.population import covariance_recipe
from hmm_model.sampling import make_rng


def _default_gammas() -> List[float]:
    return [round(g, 6) for g in numeric_range(0.1, 4.05, 0.1)]


class TheoryConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    gammas: List[float] = Field(default_factory=_default_gammas, min_length=1, description="Ratios p/n to evaluate")
    p: int = Field(200, ge=1, description="Spectrum size used for the spectral averages")
    trace_sigma_eps: float = Field(1.0, ge=0)
    b_norm2: float = Field(1.0, ge=0, description="Squared Frobenius norm of B, spread evenly over the eigenbasis")
    sigma_x_recipe: Literal["identity", "uniform-spectrum"] = "identity"
    spectrum_low: float = Field(0.5, gt=0)
    spectrum_high: float = Field(3.0, gt=0)
    lam: Optional[float] = Field(None, gt=0, description="Ridge penalty; ridgeless curve when absent")
    threshold_band: float = Field(THRESHOLD_BAND, gt=0)
    seed: int = Field(0, ge=0, lt=2 ** 64)

    @field_validator("gammas")
    @classmethod
    def _check_gammas(cls, v: List[float]) -> List[float]:
        if any(not g > 0 for g in v):
            raise ValueError("gammas must be > 0")
        return v

    def context(self) -> SpectrumContext:
        if self.sigma_x_recipe == "identity":
            return SpectrumContext.isotropic(self.p, 1.0, self.trace_sigma_eps, self.b_norm2)
        sigma_x = covariance_recipe(
            self.p,
            "uniform-spectrum",
            self.spectrum_low,
            self.spectrum_high,
            make_rng(self.seed, 0, self.p),
        )
        return SpectrumContext(
            eigs=np.linalg.eigvalsh(sigma_x),
            gamma=1.0,
            trace_sigma_eps=self.trace_sigma_eps,
            b_weights=np.full(self.p, self.b_norm2 / self.p),
        )


class CmdTheory(Command):
    name = "theory"
    help = "evaluate the deterministic bias/variance/risk curve over a gamma grid"

    def add_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("--gamma", type=parse_float_list, help="comma list of ratios p/n")
        parser.add_argument("--trace-eps", dest="trace_eps", type=float, help="Tr(Sigma_eps)")
        parser.add_argument("--b-norm2", dest="b_norm2", type=float, help="squared Frobenius norm of B")
        parser.add_argument("--p", type=int, help="spectrum size")
        parser.add_argument("--lambda", dest="lam", type=float, help="ridge penalty; selects the ridge functionals")

    def run(self, args: Namespace) -> int:
        doc = resolve_config(
            {},
            args.config,
            {
                "gammas": args.gamma,
                "trace_sigma_eps": args.trace_eps,
                "b_norm2": args.b_norm2,
                "p": args.p,
                "lam": args.lam,
                "seed": args.seed,
            },
            args.overrides,
        )
        config = TheoryConfig.model_validate(doc)
        rows: List[CurveRow] = theoretical_risk_curve(config.context(), config.gammas, config.lam, config.threshold_band)

        emit(",".join(CURVE_CSV_HEADER))
        for row in rows:
            emit(",".join(format_cell(getattr(row, name)) for name in CURVE_CSV_HEADER))

        if args.out is None:
            return 0

        out = Path(args.out)
        if "csv" in args.formats:
            write_curve_csv(rows, out / "theory.csv")
        if "json" in args.formats:
            write_curve_json(rows, out / "theory.json")
        if "svg" in args.formats:
            render_curve_svg(rows, out / "theory.svg")
        write_run_metadata(out, self.name, config.model_dump(mode="json"), config.seed)
        info(f"Theory curve with {len(rows)} rows written to {out}")
        return 0
