from argparse import ArgumentParser, Namespace
from pathlib import Path

import ujson as json

from core.logger import info
from core.commands.cmd_abstract import Command
from core.commands.cmd_utils import DATA_MODES, resolve_config, write_run_metadata, emit
from hmm_model.diagnostics import check_assumption1
from hmm_model.exports import write_dataset_csv, write_dataset_json, write_population_model
from hmm_model.population import build_population_model, spectral_radius
from hmm_model.sampling import sample_dataset
from hmm_model.spec import ModelSpec, write_model_spec


def _position(value: str):
    return value if value == "stationary" else int(value)


class CmdModel(Command):
    """Build the population model of a ModelSpec and report its summary statistics."""
    name = "model"
    help = "build the HMM population model, check the regularity conditions, optionally sample data"

    def add_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("--d", type=int, help="token dimension")
        parser.add_argument("--p", type=int, help="representation dimension")
        parser.add_argument("--position", type=_position, help="token index i or 'stationary'")
        parser.add_argument("--rho", type=float, help="spectral radius of the transition matrix")
        parser.add_argument("--sigma-xi2", dest="sigma_xi2", type=float, help="target noise variance")
        parser.add_argument("--n", type=int, help="sample size for the regularity check and the sample dataset")
        parser.add_argument("--mode", choices=DATA_MODES, default="iid-gaussian", help="how the sample dataset is drawn")

    def run(self, args: Namespace) -> int:
        doc = resolve_config(
            {},
            args.config,
            {
                "d": args.d,
                "p": args.p,
                "position": args.position,
                "a_recipe.rho": args.rho,
                "sigma_xi2": args.sigma_xi2,
                "seed": args.seed,
            },
            args.overrides,
        )
        spec = ModelSpec.model_validate(doc)
        model = build_population_model(spec)

        summary = {
            "d": model.d,
            "p": model.p,
            "spectral_radius": spectral_radius(model.A),
            "trace_sigma_eps": model.trace_sigma_eps,
            "null_risk": model.null_risk(),
            "signal_to_noise": model.signal_to_noise(),
            "sigma_x_max_eig": float(model.sigma_x_eigs[0]),
            "sigma_x_min_eig": float(model.sigma_x_eigs[-1]),
        }
        for key, value in summary.items():
            emit(f"{key}: {value!r}")

        assumption = None
        if args.n is not None:
            assumption = check_assumption1(model, args.n)
            emit(f"regularity: {'ok' if assumption.ok else 'violated'} {json.dumps(assumption.flags)}")

        if args.out is None:
            return 0

        out = Path(args.out)
        write_model_spec(spec, out / "spec.json")
        write_population_model(model, out / "model.json")
        if assumption is not None:
            with (out / "assumption.json").open("w") as f:
                f.write(json.dumps(assumption.model_dump(mode="json"), indent=2))

            dataset = sample_dataset(model, args.mode, args.n, spec.seed, spec=spec)
            if "csv" in args.formats:
                write_dataset_csv(dataset, out / "dataset.csv")
            if "json" in args.formats:
                write_dataset_json(dataset, out / "dataset.json")

        write_run_metadata(out, self.name, spec.model_dump(mode="json"), spec.seed, summary=summary)
        info(f"Model written to {out}")
        return 0
