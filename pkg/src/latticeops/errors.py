"""Exception hierarchy.

Every failure mode of the library is a subclass of LatticeOpsError so the
CLI can turn any of them into a structured report entry instead of a
traceback.
"""


class LatticeOpsError(Exception):
    """Base class for all library errors."""


class NonZeroRemainder(LatticeOpsError):
    """Polynomial division left a nonzero remainder."""

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


class DuplicateNode(LatticeOpsError):
    """Interpolation nodes are not pairwise distinct."""


class VariableMismatch(LatticeOpsError):
    """Arithmetic between polynomials in different variables."""


class InternalSymmetryViolation(LatticeOpsError):
    """A carrier-domain quotient failed to re-expand in the lattice variable.

    This always signals an implementation or lattice-consistency bug,
    never a user error.
    """


class DegenerateLattice(LatticeOpsError):
    """The lattice map is constant; difference operators are undefined."""


class NotMonic(LatticeOpsError):
    """An operation requiring a monic polynomial received a non-monic one."""


class WindowExhausted(LatticeOpsError):
    """A functional was paired with a polynomial beyond its moment window."""


class SingularBasis(LatticeOpsError):
    """Dual-basis extraction hit a sequence that is not a simple set."""


class NotRegular(LatticeOpsError):
    """A moment functional has a vanishing norm; no orthogonal sequence exists."""

    def __init__(self, message, n=None):
        super().__init__(message)
        self.n = n


class InsufficientDepth(LatticeOpsError):
    """Recurrence data is too shallow for the requested moment window."""


class RegularityViolation(LatticeOpsError):
    """A family parameter choice makes some recurrence coefficient vanish."""

    def __init__(self, message, n=None):
        super().__init__(message)
        self.n = n


class ZeroBeta(LatticeOpsError):
    """A construction that divides by beta received beta = 0."""


class ConstraintViolation(LatticeOpsError):
    """Family parameters violate an exact defining constraint."""


class DegenerateDenominator(LatticeOpsError):
    """A closed-form recurrence denominator vanished in the requested range."""

    def __init__(self, message, n=None):
        super().__init__(message)
        self.n = n


class NoSolution(LatticeOpsError):
    """An exact linear solve for relation coefficients is infeasible."""

    def __init__(self, message, n=None, residual=None):
        super().__init__(message)
        self.n = n
        self.residual = residual


class MismatchError(LatticeOpsError):
    """Closed-form coefficients disagree with direct expansion."""

    def __init__(self, message, n=None, j=None):
        super().__init__(message)
        self.n = n
        self.j = j


class MissingData(LatticeOpsError):
    """A residual evaluation lacks a required recurrence coefficient."""


class NoneFound(LatticeOpsError):
    """No nontrivial Pearson pair exists on the examined window."""


class SingularA(LatticeOpsError):
    """The witness matrix is singular; the banded-relation hypothesis fails."""


class DegreeCollapse(LatticeOpsError):
    """A constructed certificate polynomial has lower degree than required."""


class HypothesisFailure(LatticeOpsError):
    """A nondegeneracy assumption of the semiclassical certificate fails."""

    def __init__(self, message, assumption=None):
        super().__init__(message)
        self.assumption = assumption


class ConfigError(LatticeOpsError):
    """A check configuration is malformed."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location
