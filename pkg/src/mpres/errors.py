"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a structural precondition."""


class HypothesisError(ValidationError):
    """A mathematical hypothesis required by a construction fails.

    Raised, for example, when an action that should be lifted to a cover
    fixes no vertex, or acts nontrivially on mod-p first homology.
    """
