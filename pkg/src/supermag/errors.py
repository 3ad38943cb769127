"""Exception hierarchy shared across the package.

Every error raised by the library derives from SupermagError and carries
an ``exit_code`` so the command-line tools can map failures onto stable
process exit codes:

    2 -- input could not be parsed or failed validation
    3 -- the requested operating point is physically infeasible
    4 -- electrical fault during simulation (short circuit, unstable loop)
"""


class SupermagError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ValidationError(SupermagError):
    """Malformed input: bad file syntax, schema violation, illegal argument."""

    exit_code = 2


class InfeasibleError(SupermagError):
    """A physics or sizing constraint cannot be met with the given materials."""

    exit_code = 3


class NoOperatingWindowError(InfeasibleError):
    """The bias window is empty: no external field satisfies all constraints."""


class ShortCircuitError(SupermagError):
    """A zero-resistance component connects drivers at different levels."""

    exit_code = 4

    def __init__(self, message, nodes=()):
        super().__init__(message)
        self.nodes = tuple(nodes)


class OscillationError(SupermagError):
    """Evaluation failed to reach a fixed point (combinational feedback)."""

    exit_code = 4
