"""Exceptions shared by the benchmark toolkit and the exit codes the CLI maps them to."""

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_VERIFY = 3


class BenchmarkError(Exception):
    """Base class for every error raised by the toolkit"""


class DimensionMismatchError(BenchmarkError, ValueError):
    """Point length does not fit the function's dimension rules"""


class UnknownFunctionError(BenchmarkError, KeyError):
    """Function id is not in the catalog"""


class NoCanonicalPointError(BenchmarkError):
    """No optimum pattern can be generated for the requested function"""


class BudgetExhaustedError(BenchmarkError):
    """Raised when an optimizer asks for an evaluation past max_fes.

    Optimizers treat this as normal termination.
    """


class ConfigError(BenchmarkError):
    """Invalid experiment configuration or command-line input"""


class UnknownOptimizerError(ConfigError):
    """Algorithm name is not registered"""
