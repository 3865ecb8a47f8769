"""Exception types raised by emflow computations.

Invalid arguments (bad construction parameters, malformed requests) raise
the builtin ValueError; the classes here mark failures that can only occur
once a computation is under way.
"""


class EmflowError(Exception):
    """Base class for computation errors raised by this package."""


class ConsistencyError(EmflowError):
    """The energy radicand U^2 - |S|^2 fell far below zero.

    Mathematically U^2 - |S|^2 >= 0 for every electromagnetic field sample,
    so a markedly negative radicand indicates corrupted inputs or an
    internal bug, never ordinary rounding noise.
    """


class SingularityError(EmflowError):
    """A field evaluation was requested at a singular point of the source."""


class UnderflowError(EmflowError):
    """Sampled values are too small to carry usable information."""


class SampleBudgetError(EmflowError):
    """A scan request exceeds the configured sample budget."""
