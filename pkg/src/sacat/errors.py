"""Exception hierarchy.

Every error raised by the library derives from :class:`SacatError`.  The CLI
maps :class:`UsageError` subclasses to exit code 2 and everything else to 1.
"""


class SacatError(Exception):
    pass


class UsageError(SacatError):
    """Malformed input: bad DSL, bad JSON, unknown names."""


class ParseError(UsageError):
    pass


class UnsupportedName(UsageError):
    pass


class SchemaError(UsageError):
    pass


class GroupAxiomError(SacatError):
    pass


class NotClosed(GroupAxiomError):
    pass


class NotAssociative(GroupAxiomError):
    pass


class NoIdentity(GroupAxiomError):
    pass


class NoInverse(GroupAxiomError):
    pass


class NotAHomomorphism(SacatError):
    pass


class ClosureTooLarge(SacatError):
    pass


class ForeignSubgroup(SacatError):
    pass


class NotNormal(SacatError):
    pass


class NotNested(SacatError):
    pass


class NonAbelianQuotient(SacatError):
    pass


class InfiniteCokernel(SacatError):
    pass


class OrderCapExceeded(SacatError):
    pass


class SolverCapExceeded(SacatError):
    pass


class NotSurjective(SacatError):
    pass


class NotCentral(SacatError):
    pass


class KernelMismatch(SacatError):
    pass


class BaseMismatch(SacatError):
    pass


class NotACycle(SacatError):
    pass


class NotComposable(SacatError):
    pass


class NotPerfect(SacatError):
    pass


class CatalogIncomplete(SacatError):
    pass


class NotACocycle(SacatError):
    pass
