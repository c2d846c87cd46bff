"""Exception hierarchy.

Every error carries a machine-readable ``code`` (the class name) and a
``detail`` dict so the CLI can print it as structured JSON.
"""


class MacrospaceError(Exception):
    """Base class for all library errors."""

    def __init__(self, message="", **detail):
        super().__init__(message or self.__class__.__name__)
        self.detail = detail

    @property
    def code(self):
        return self.__class__.__name__

    def to_dict(self):
        out = {"error": self.code, "message": str(self)}
        if self.detail:
            out["detail"] = self.detail
        return out


class InputError(MacrospaceError, ValueError):
    """Malformed input (maps to CLI exit code 2)."""


class ConstructionError(MacrospaceError):
    """A mathematical construction could not be carried out (exit code 1)."""


# metric validation
class AsymmetricMatrix(InputError):
    pass


class TriangleViolation(InputError):
    pass


class NonzeroDiagonal(InputError):
    pass


class ZeroDistanceDistinctPoints(InputError):
    pass


class BudgetExceeded(InputError):
    pass


class UnknownPoint(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class EmptySubset(InputError):
    pass


# towers and morphisms
class EmptyLevelSet(InputError):
    pass


class NotPruned(ConstructionError):
    pass


class NotDirected(ConstructionError):
    pass


class TowerMismatch(InputError):
    pass


class BadLevelPair(InputError):
    pass


class TopLevelDropped(InputError):
    pass


class SpaceMismatch(InputError):
    pass


class EmptyRelation(InputError):
    pass


class DegreeConditionViolated(ConstructionError):
    pass


class LevelMapNotSurjective(ConstructionError):
    pass


class InvalidMorphism(ConstructionError):
    pass


# constructions
class InsufficientCapacity(ConstructionError):
    pass


class NotHomogeneousAtSchedule(ConstructionError):
    pass


class SeparationShortfall(ConstructionError):
    pass


class MacroConnectedSource(ConstructionError):
    pass


class EmptyTarget(InputError):
    pass


class CertificateError(ConstructionError):
    """A certificate failed re-validation; ``code`` names the broken property."""

    def __init__(self, code, message="", **detail):
        super().__init__(message or code, **detail)
        self._code = code

    @property
    def code(self):
        return self._code
