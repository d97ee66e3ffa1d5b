import threading

from datetime import datetime
from pathlib import Path

import ujson as json

from telemetry.models import TeleSweepPoint


class TeleWriter:
    """Appends telemetry records to <directory>/YYYYMMDD.jsonl."""
    def __init__(
            self,
            directory: Path
    ):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        # sweep points report from executor threads
        self._lock = threading.Lock()

    def current_file_path(self) -> Path:
        today = datetime.now().strftime("%Y%m%d")
        filename = f"{today}.jsonl"
        return self.directory / filename

    def write(self, line: TeleSweepPoint):
        record = json.dumps(line.to_dict()) + '\n'
        with self._lock, self.current_file_path().open('a') as f:
            f.write(record)
