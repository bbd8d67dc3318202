"""Exception hierarchy.

Every error raised on purpose by the package derives from ``BilliardError``
so callers (and the CLI) can separate numerical/dynamical failures from bugs.
"""


class BilliardError(Exception):
    pass


# geometry
class BranchViolationError(BilliardError):
    pass


class ParabolaAxisSingularityError(BilliardError):
    pass


class HillBoundaryError(BilliardError):
    pass


class NotEllipticError(BilliardError):
    pass


class TangencyError(BilliardError):
    """The orbit touches the wall at the current point only."""

    def __init__(self, phi, msg="orbit tangent to the wall"):
        super().__init__(f"{msg} at phi={phi!r}")
        self.phi = phi


class NoSecondIntersectionError(BilliardError):
    pass


class RootFindFailureError(BilliardError):
    pass


class DegeneratePointsError(BilliardError):
    pass


# foci
class ParabolicWallError(BilliardError):
    pass


class UnsupportedCombinationError(BilliardError):
    pass


class NoRealR2Error(BilliardError):
    pass


class NoRealChordError(BilliardError):
    pass


# elliptic
class SingularPencilError(BilliardError):
    def __init__(self, degeneracy: str):
        super().__init__(f"singular pencil ({degeneracy})")
        self.degeneracy = degeneracy


class QuadratureFailureError(BilliardError):
    pass


class BranchError(BilliardError):
    pass


# cayley
class ZeroA0Error(BilliardError):
    pass


class SeriesTooShortError(BilliardError):
    pass


class UnsupportedNError(BilliardError):
    pass


# sim
class InsideCausticError(BilliardError):
    pass


class TangentDegeneracyError(BilliardError):
    pass
