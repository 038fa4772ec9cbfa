# persuade_net/exceptions.py


class PersuadeNetError(Exception):
    """Base class for every error raised by persuade-net."""


class CapExceeded(PersuadeNetError):
    """An exhaustive enumeration was requested on a graph above its node cap."""

    def __init__(self, what: str, n: int, cap: int):
        self.what = what
        self.n = n
        self.cap = cap
        super().__init__(f"{what} is capped at n <= {cap}, got n = {n}.")


class SingularAfterReduction(PersuadeNetError):
    """(A+I)x = 1 has no solution even after twin reduction."""


class BracketFailure(PersuadeNetError):
    """The mixed marginal benefit never dropped below the cost within the bracket cap."""


class InteriorRequired(PersuadeNetError):
    """A derivative-based quantity was requested where e*(mu) is clamped at 0."""


class DegenerateDerivative(PersuadeNetError):
    """A risk-aversion style ratio has a (numerically) zero denominator."""


class NotMaximalIndependent(PersuadeNetError):
    """A node set passed as a maximal independent set is not one."""


class NotAnEquilibrium(PersuadeNetError):
    """A profile passed for classification fails the Nash (LCP) check."""


class PriorOnBoundary(PersuadeNetError):
    """The prior is 0 or 1, so there is nothing to persuade about."""


class ConfigInvalid(PersuadeNetError):
    """The run configuration failed validation."""


class InvalidGraph(PersuadeNetError):
    """Edge list or generator parameters do not describe a simple undirected graph."""


class InvalidBenefit(PersuadeNetError):
    """A benefit pair violates the saturation / ordering / concavity invariants."""
