from typing import List

from core.commands.cmd_abstract import Command
from core.commands.cmd_empirical import CmdEmpirical
from core.commands.cmd_model import CmdModel
from core.commands.cmd_selfcheck import CmdSelfcheck
from core.commands.cmd_sweep import CmdSweep, CmdFigure1, CmdFigure2
from core.commands.cmd_theory import CmdTheory


__all__ = ["COMMANDS", "get_command"]


COMMANDS: List[Command] = [
    CmdModel(),
    CmdTheory(),
    CmdEmpirical(),
    CmdSweep(),
    CmdFigure1(),
    CmdFigure2(),
    CmdSelfcheck(),
]


def get_command(name: str) -> Command:
    command = next((c for c in COMMANDS if c.name == name), None)
    if command is None:
        raise KeyError(f"unknown command '{name}'")
    return command
