"""Exception hierarchy.

Every error raised by the library derives from :class:`StrongTreeError`,
which is a :class:`ValueError` so callers that only care about bad input can
catch that.
"""


class StrongTreeError(ValueError):
    pass


class EmptySet(StrongTreeError):
    pass


class EmptyInput(StrongTreeError):
    pass


class NotRooted(StrongTreeError):
    pass


class LevelMismatch(StrongTreeError):
    pass


class BranchingViolation(StrongTreeError):
    pass


class NodeOutsideUniverse(StrongTreeError):
    pass


OutsideUniverse = NodeOutsideUniverse


class LevelSetMismatch(StrongTreeError):
    pass


class RootCollision(StrongTreeError):
    pass


class RoutingViolation(StrongTreeError):
    pass


class NotInitialSegment(StrongTreeError):
    pass


class NoSibling(StrongTreeError):
    pass


class SameRoot(StrongTreeError):
    pass


class ConstraintViolation(StrongTreeError):
    """A node-level set with ``L_N < L`` failing, or similar."""


class NoRoom(StrongTreeError):
    pass


class NonTotalColoring(StrongTreeError):
    """A coloring is missing a member of the domain it is checked on."""
