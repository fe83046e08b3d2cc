"""Exception hierarchy shared across the package."""


class BraceEngineError(Exception):
    """Base class for all domain errors raised by this package."""


class ShapeMismatch(BraceEngineError):
    """Operands live over different group shapes."""


class DivisibilityViolation(BraceEngineError):
    """Matrix entry breaks the p^(e_i - e_j) | a_ij constraint."""


class BoundExceeded(BraceEngineError):
    """A configured search or generation bound was hit."""


class EnumerationBoundExceeded(BoundExceeded):
    """Automorphism enumeration candidate space exceeds the bound."""


class TimeBudgetExceeded(BoundExceeded):
    """Wall-clock budget for a long-running search ran out."""


class FamilyMismatch(BraceEngineError):
    """Presented elements belong to different 2-group families."""


class UnsupportedFamily(BraceEngineError):
    """Operation implemented only for the modular maximal-cyclic family."""


class RelationViolation(BraceEngineError):
    """A required cocycle/presentation relation fails.

    `condition` names the failed relation (e.g. "pp4").
    """

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        super().__init__(f"{condition}: {detail}" if detail else condition)


class NotBijective(BraceEngineError):
    """A map required to be a bijection has a collision."""


class NotRegular(BraceEngineError):
    """Subgroup translation parts do not biject onto the group."""


class NotABrace(BraceEngineError):
    """Table fails the brace axioms."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"brace axiom failure: {witness}")


class AdditiveShapeMismatch(BraceEngineError):
    """Additive table is not the canonical table of the claimed shape."""


class IncompleteCensus(BraceEngineError):
    """Operation requires a census that finished exhaustively."""
