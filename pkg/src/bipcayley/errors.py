"""Exception types shared across the package.

Exit-code mapping used by the CLI: usage/validation errors -> 2,
cap/budget errors -> 3, falsification events -> 4.
"""


class BipCayleyError(Exception):
    """Base class for all package errors."""


# --- group construction ---

class EmptyOrders(BipCayleyError):
    """A group needs at least one cyclic factor."""


class OrderBelowTwo(BipCayleyError):
    """Every cyclic factor order must be >= 2."""


class SizeCapExceeded(BipCayleyError):
    """Group size exceeds the configured construction cap."""


class GroupSpecError(BipCayleyError):
    """Malformed group/subgroup/set specification string."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None
                         else f"{message} (at position {position})")
        self.position = position


# --- validation ---

class BadParameter(BipCayleyError):
    """Parameter outside its documented range."""


class BadSubgroup(BipCayleyError):
    """Subgroup does not satisfy the required hypotheses (e.g. index 2)."""


class SetOutOfRange(BipCayleyError):
    """Connection set refers to elements outside the group."""


class SetNotAvoidingB(BipCayleyError):
    """Connection set intersects the index-2 subgroup it must avoid."""


class NotInverseClosed(BipCayleyError):
    """Operation requires an inverse-closed connection set."""


class ExceptionalPair(BipCayleyError):
    """(A, B) is one of the two exceptional families; the undirected
    classification does not apply."""


class HypothesisViolated(BipCayleyError):
    """A lemma's hypotheses are not met by the given arguments."""


class OddOrder(BipCayleyError):
    """Group of odd order has no index-2 subgroup."""


# --- caps, budgets, timeouts ---

class CapExceeded(BipCayleyError):
    """Problem size exceeds a configured cap."""


class AutCapExceeded(CapExceeded):
    """Automorphism enumeration cap exceeded."""


class BudgetExceeded(BipCayleyError):
    """Search budget exhausted; carries progress information when available."""

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress


class Timeout(BipCayleyError):
    """Wall-clock budget for a search exceeded."""


# --- falsification ---

class FalsificationError(BipCayleyError):
    """A machine-checked assertion from the underlying theory failed.

    This is never expected to fire; it exists so that a genuine
    counterexample is reported loudly (CLI exit code 4) instead of being
    silently swallowed.
    """
