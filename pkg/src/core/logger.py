import sys
import logging

from datetime import datetime
from pathlib import Path
from typing import Optional

from termcolor import colored

__all__ = ['init_logger', 'info', 'error', 'warn', 'debug', 'exception']

logger = logging.getLogger("HMMDD")
info = logger.info
error = logger.error
warn = logger.warning
debug = logger.debug
exception = logger.exception

FMT = '%(asctime)s %(levelname)s [%(filename)s] %(message)s'
DATE_FMT = '%Y%m%d %H:%M:%S'


# Third-party loggers that flood DEBUG output
EXCLUDED_LOGGERS = (
    'numba',
    'matplotlib',
    'PIL',
)


class ExcludeFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        # Return False to exclude the record from logging
        return not record.name.startswith(EXCLUDED_LOGGERS)


class ColoredConsoleHandler(logging.Handler):
    def __init__(self, debug_on: bool):
        super().__init__()
        self.debug_on = debug_on

    def emit(self, record: logging.LogRecord) -> None:
        if not self.debug_on and record.levelno == logging.DEBUG:
            return

        level_colors = {
            logging.ERROR: 'red',
            logging.WARNING: 'yellow'
        }

        original_levelname = record.levelname
        if record.levelno in level_colors:
            record.levelname = colored(record.levelname, level_colors[record.levelno])

        log_entry = self.format(record)
        record.levelname = original_levelname

        sys.stderr.write(f"{log_entry}\n")
        sys.stderr.flush()


class DailyFileHandler(logging.Handler):
    def __init__(self, log_dir: Path, encoding: str = 'utf-8'):
        super().__init__()
        self.log_dir = Path(log_dir)
        self.encoding = encoding
        self.current_date = None
        self.file_handler = None
        self._update_file_handler()

    def _update_file_handler(self):
        today = datetime.now().strftime("%Y%m%d")

        if today != self.current_date or self.file_handler is None:
            if self.file_handler:
                self.file_handler.close()

            self.file_handler = logging.FileHandler(
                filename=self.log_dir / f"{today}.log",
                encoding=self.encoding
            )
            self.file_handler.setFormatter(self.formatter)
            self.current_date = today

    def emit(self, record):
        self._update_file_handler()
        self.file_handler.emit(record)

    def setFormatter(self, formatter):
        super().setFormatter(formatter)
        if self.file_handler:
            self.file_handler.setFormatter(formatter)

    def close(self):
        if self.file_handler:
            self.file_handler.close()
        super().close()


def init_logger(debug_on: bool, log_dir: Optional[Path] = None) -> None:
    """Initialize the application logger with a console handler and, optionally, a daily file handler.

    Args:
        debug_on: Whether to enable debug logging
        log_dir: Directory for YYYYMMDD.log files; no file logging when None
    """
    exclude_filter = ExcludeFilter()

    console_handler = ColoredConsoleHandler(debug_on)
    console_handler.setFormatter(logging.Formatter(FMT, DATE_FMT))
    console_handler.addFilter(exclude_filter)
    handlers = [console_handler]

    if log_dir is not None:
        log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = DailyFileHandler(log_dir, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(FMT, DATE_FMT))
        file_handler.addFilter(exclude_filter)
        handlers.append(file_handler)

    logging.basicConfig(
        level=logging.DEBUG if debug_on else logging.INFO,
        format=FMT,
        datefmt=DATE_FMT,
        handlers=handlers,
        force=True,
    )
