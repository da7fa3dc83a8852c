"""Exception types shared across the package."""


class AaglabError(Exception):
    """Base class for all package-specific errors."""


class AlphabetMismatch(AaglabError):
    """A word uses letters outside the declared alphabet."""


class IdentityInput(AaglabError):
    """An operation that needs a nontrivial word received the identity."""


class NotConjugate(AaglabError):
    """conj_search was asked to relate two non-conjugate words."""


class NotMember(AaglabError):
    """A word does not belong to the subgroup it was traced against."""


class GraphComplete(AaglabError):
    """A commutation graph is complete, so no rank-2 free image exists."""


class NotFreePlatform(AaglabError):
    """A free-group-only operation was invoked on another platform."""


class SchemaError(AaglabError):
    """An input file failed validation.

    Carries a JSON-path style location so CLI users can find the offending
    field, e.g. ``$.pairs[0][1]: letters must be nonzero integers``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")
