"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each class corresponds to one
failure category rather than one call site.
"""


class DepChoiceError(Exception):
    """Base class for all library errors."""


class DomainError(DepChoiceError, ValueError):
    """An argument names an event or element outside the structure."""


class SizeCapError(DepChoiceError):
    """An enumeration would exceed its configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class ContractError(DepChoiceError, ValueError):
    """An operation's precondition does not hold (e.g. not a morphism)."""


class ValidationError(DepChoiceError, ValueError):
    """A structure fails its axioms; ``report`` carries the witnesses."""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class ResolutionError(DepChoiceError, ValueError):
    """A manifest dependency matches no package in the manifest."""
