"""Exception types raised across the signal, dynamics, network and pipeline layers."""

from typing import Sequence


class SurrogateError(Exception):
    """Root of every error raised by this package."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ArgumentError(SurrogateError):
    """An argument violates an operation's precondition."""


class ParseError(SurrogateError):
    """Raised when a ground-motion file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None, token: int | None = None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if token is not None:
            location.append(f"token {token}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.line = line
        self.token = token


class CountMismatchError(ParseError):
    """The number of parsed samples differs from the declared NPTS."""

    def __init__(self, declared: int, found: int):
        super().__init__(f"header declares NPTS={declared} but {found} values were found")
        self.declared = declared
        self.found = found


class DegenerateInputError(SurrogateError):
    """Input carries no signal to work with (zero record, zero scale, zero truth)."""


class ModelError(SurrogateError):
    """A structural model is not physically valid."""


class UnsupportedGeometryError(ModelError):
    """Block geometry outside the range of the impact law."""


class CalibrationError(SurrogateError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class StepFailureError(SurrogateError):
    """Newton iterations of a single time step did not converge."""

    def __init__(self, time: float, trace: Sequence[float]):
        super().__init__(
            f"Newton iteration failed at t={time:.6g} s after {len(trace)} iterations "
            f"(last residual {trace[-1] if trace else float('nan'):.3e})"
        )
        self.time = time
        self.trace = tuple(trace)


class IntegrationError(SurrogateError):
    def __init__(self, message: str, time: float):
        super().__init__(f"{message} at t={time:.6g} s")
        self.time = time


class DivergenceError(SurrogateError):
    """Training produced a non-finite loss."""


class RolloutDivergenceError(SurrogateError):
    def __init__(self, step: int):
        super().__init__(f"closed-loop rollout produced a non-finite prediction at step {step}")
        self.step = step


class ConfigError(SurrogateError):
    """Invalid experiment configuration; `key` is the dotted key or the offending path."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key
