"""Exception hierarchy shared by every towerlab module."""


class TowerLabError(Exception):
    """Base class for all library errors."""


class NonPrime(TowerLabError, ValueError):
    pass


class DegreeZero(TowerLabError, ValueError):
    pass


class CapExceeded(TowerLabError, ValueError):
    """Requested object is larger than the exhaustive-enumeration cap."""


class SpecMismatch(TowerLabError, ValueError):
    """Operands live in different fields (or Ore rings with different twists)."""


class DivisionByZero(TowerLabError, ZeroDivisionError):
    pass


class NoSuchSubfield(TowerLabError, ValueError):
    pass


class ZeroArgument(TowerLabError, ValueError):
    pass


class NoSolution(TowerLabError, ArithmeticError):
    pass


class Ambiguous(TowerLabError, ArithmeticError):
    pass


class DegenerateDenominator(TowerLabError, ArithmeticError):
    pass


class IdentityViolation(TowerLabError, AssertionError):
    """A checked algebraic identity failed; the message names the identity."""


class WildIndex(TowerLabError, ValueError):
    pass


class BothWild(TowerLabError, ValueError):
    pass


class NotPPower(TowerLabError, ValueError):
    pass


class NotApplicable(TowerLabError, ValueError):
    pass


class DefectNonzero(TowerLabError, ValueError):
    pass


class ZeroDivisor(TowerLabError, ZeroDivisionError):
    pass


class DegenerateZ(TowerLabError, ArithmeticError):
    pass


class ValidationError(TowerLabError, ValueError):
    """Invalid tower parameters; the message names the violated constraint."""
