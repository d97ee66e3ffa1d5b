from abc import ABC, abstractmethod
from argparse import ArgumentParser, Namespace


__all__ = ["Command", "UsageError"]


class UsageError(ValueError):
    """Invocation problem the user can fix by changing flags or config."""


class Command(ABC):
    """One CLI subcommand: its flags and the function that runs it."""
    name: str
    help: str

    def add_arguments(self, parser: ArgumentParser) -> None:
        pass

    @abstractmethod
    def run(self, args: Namespace) -> int:
        """Execute the subcommand; returns the process exit code."""
        ...
