"""Exception hierarchy shared across the engine.

Two broad families matter to callers: input problems (bad parameters,
unparseable or inconsistent files) and numeric/runtime failures inside a
simulation. The CLI maps the former to exit code 2 and the latter to 3.
"""


class SmirError(Exception):
    """Base class for all engine errors."""


class InputError(SmirError):
    """Invalid parameters, configuration, or data files (CLI exit code 2)."""


class NumericError(SmirError):
    """A simulation failed numerically or structurally (CLI exit code 3)."""


class InvalidParamsError(InputError):
    pass


class ParseError(InputError):
    """A file could not be parsed; carries the offending line number."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class ValidationError(InputError):
    """Parsed data violates an invariant; the message names it."""


class NoScoredNodesError(InputError):
    """Alignment propagation needs at least one node with a known score."""


class MissingPartyPoolError(InputError):
    """A county has no information-network node of a party that sampling requires."""

    def __init__(self, county, party):
        super().__init__(f"county {county} has no {party} node to sample from")
        self.county = county
        self.party = party


class ZeroMobilityError(InputError):
    """Mobility matrix sums to zero; edge allocation is undefined."""


class InsufficientMisinformedError(InputError):
    """Fewer misinformed nodes than requested initial infections."""

    def __init__(self, available, requested):
        super().__init__(
            f"cannot seed {requested} infections: only {available} misinformed nodes"
        )
        self.available = available
        self.requested = requested


class NonfiniteStateError(NumericError):
    """An ODE trajectory left [0, 1] by more than tolerance (step-size or parameter pathology)."""


class SaturationError(NumericError):
    """A county block was allocated more edges than a simple graph can hold."""


class RetryBudgetError(NumericError):
    """Rejection sampling of simple edges exhausted its retry budget."""
