"""Exception hierarchy shared by the pipeline."""


class PadovanError(Exception):
    """Base class for every failure raised by this package."""


class PrecisionError(PadovanError):
    """A certified decision could not be made within the precision cap."""


class Undecided(PrecisionError):
    """An interval comparison or floor is undecided at the current precision.

    Callers are expected to retry at a higher precision (see
    :func:`padovan_repdigits.balls.escalate`).
    """


class BoundViolation(PadovanError):
    """A certified computation contradicts an inequality that must hold."""


class PublishedBoundError(PadovanError):
    """A published constant fails to dominate the value recomputed from its inputs."""


class ReductionFailure(PadovanError):
    """Dujella-Petho reduction could not certify a positive epsilon."""


class ClosureGapError(PadovanError):
    """The reduced bound does not fall inside the exhaustively searched range."""

    def __init__(self, n_reduced: int, n_search: int, message: str | None = None):
        super().__init__(
            message or f"reduced bound n <= {n_reduced} is not below the search cutoff {n_search}"
        )
        self.n_reduced = n_reduced
        self.n_search = n_search
