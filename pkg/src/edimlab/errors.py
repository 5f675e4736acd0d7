"""Exception hierarchy shared by all edimlab modules."""


class EdimlabError(Exception):
    """Base class for every error raised by edimlab."""


class EdgeListFormatError(EdimlabError, ValueError):
    """Malformed edge-list file. ``line`` is 1-based."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InfeasibleError(EdimlabError):
    """Some pair of objects cannot be distinguished by any vertex."""

    def __init__(self, pairs):
        self.pairs = list(pairs)
        super().__init__(f"INFEASIBLE: {len(self.pairs)} pair(s) have no distinguishing vertex")


class CapExceededError(EdimlabError):
    """No cover exists within the requested size cap."""


class SearchTooLargeError(EdimlabError):
    """Enumeration guard tripped (search space above the configured limit)."""


class DegenerateSamplingError(EdimlabError):
    """Rejection sampling failed too often for the requested (n, p)."""
