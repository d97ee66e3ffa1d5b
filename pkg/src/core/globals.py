from pathlib import Path
from importlib.metadata import version, PackageNotFoundError


try:
    VERSION = version("hmm-double-descent")
except PackageNotFoundError:
    # running from a source checkout (pythonpath=src)
    VERSION = "0.0.0+local"


BASE_DIR: Path = Path(__file__).resolve().parent.parent.parent
RUNS_DIR = BASE_DIR / "runs"
LOGS_DIR = BASE_DIR / "logs"

ENV_DEBUG = "HMMDD_DEBUG"
