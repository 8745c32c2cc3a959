from .base import BaseCommand, CommandContext, CommandError, CommandFailure, CommandResult
from .bench import BenchCommand
from .command_manager import CommandManager
from .evaluate import EvalCommand
from .plot import PlotCommand
from .scale import ScaleCommand
from .simulate import SimulateCommand
from .spectrum import SpectrumCommand
from .train import TrainCommand

ALL_COMMANDS = (SimulateCommand, ScaleCommand, SpectrumCommand, TrainCommand, EvalCommand, BenchCommand, PlotCommand)

__all__ = [
    'ALL_COMMANDS',
    'BaseCommand',
    'BenchCommand',
    'CommandContext',
    'CommandError',
    'CommandFailure',
    'CommandManager',
    'CommandResult',
    'EvalCommand',
    'PlotCommand',
    'ScaleCommand',
    'SimulateCommand',
    'SpectrumCommand',
    'TrainCommand',
]
