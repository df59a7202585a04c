"""Moment-window representation of linear functionals.

A functional u is stored as its moments <u, z^j> for j = 0..N.  The
window N is bookkept exactly through every operation: the dual
divided-difference operator D maps window N to N + 1 (it pairs against
polynomials one degree lower), the dual averaging operator S preserves
the window, and left multiplication by a polynomial of degree d costs d
moments.  Pairing beyond the window raises WindowExhausted; nothing is
ever silently truncated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SingularBasis, WindowExhausted
from .lattice import LatticeSpec
from .operators import dx_monomial, sx_monomial
from .poly import DensePoly
from .scalars import format_scalar, parse_scalar


@dataclass(frozen=True)
class MomentFunctional:
    moments: tuple[Fraction, ...]
    lattice: LatticeSpec

    def __post_init__(self):
        object.__setattr__(self, "moments", tuple(Fraction(m) for m in self.moments))
        if not self.moments:
            raise ValueError("a moment functional needs at least the 0th moment")

    @property
    def window(self) -> int:
        return len(self.moments) - 1

    def moment(self, j: int) -> Fraction:
        if j > self.window:
            raise WindowExhausted(f"moment {j} beyond window {self.window}")
        return self.moments[j]

    def to_json(self) -> dict:
        return {"moments": [format_scalar(m) for m in self.moments]}

    @classmethod
    def from_json(cls, data: dict, lattice: LatticeSpec) -> MomentFunctional:
        return cls(tuple(parse_scalar(m) for m in data["moments"]), lattice)


def pair(u: MomentFunctional, p: DensePoly) -> Fraction:
    """<u, p>; exact and linear in p."""
    if p.is_zero():
        return Fraction(0)
    if p.degree > u.window:
        raise WindowExhausted(
            f"polynomial degree {p.degree} exceeds moment window {u.window}"
        )
    return sum((c * u.moments[j] for j, c in enumerate(p.coeffs)), Fraction(0))


def poly_mul(pi: DensePoly, u: MomentFunctional) -> MomentFunctional:
    """Left multiplication: <pi*u, z^j> = <u, pi * z^j>."""
    if pi.is_zero():
        raise ValueError("left multiplication by the zero polynomial")
    d = pi.degree
    if d > u.window:
        raise WindowExhausted(
            f"multiplier degree {d} exceeds moment window {u.window}"
        )
    new = [
        sum((c * u.moments[j + i] for i, c in enumerate(pi.coeffs)), Fraction(0))
        for j in range(u.window - d + 1)
    ]
    return MomentFunctional(tuple(new), u.lattice)


def functional_op(which: str, u: MomentFunctional) -> MomentFunctional:
    """Dual operator action: which = "D" gains one moment, "S" keeps the window.

    <D u, f> = -<u, dx f> and <S u, f> = <u, sx f>.
    """
    lat = u.lattice
    if which == "D":
        new = [-pair(u, dx_monomial(lat, j)) for j in range(u.window + 2)]
    elif which == "S":
        new = [pair(u, sx_monomial(lat, j)) for j in range(u.window + 1)]
    else:
        raise ValueError("which must be 'D' or 'S'")
    return MomentFunctional(tuple(new), lat)


def dual_basis(seq: list[DensePoly], n: int, window: int, lattice: LatticeSpec) -> MomentFunctional:
    """The unique window-N functional r_n with <r_n, seq[m]> = delta_{nm}, m <= N.

    seq must be a simple set covering degrees 0..N.
    """
    if n < 0 or n > window:
        raise ValueError("dual basis index must lie within the window")
    if len(seq) <= window:
        raise SingularBasis("sequence does not span the requested window")
    for m in range(window + 1):
        q = seq[m]
        if q.is_zero() or q.degree != m:
            raise SingularBasis(f"element {m} does not have degree {m}")
    # Triangular forward substitution on <r, Q_m> = delta_{nm}.
    nu = [Fraction(0)] * (window + 1)
    for m in range(window + 1):
        q = seq[m]
        acc = Fraction(1) if m == n else Fraction(0)
        acc -= sum((q.coeff(j) * nu[j] for j in range(m)), Fraction(0))
        nu[m] = acc / q.lead
    return MomentFunctional(tuple(nu), lattice)


def functionals_equal_on(u: MomentFunctional, v: MomentFunctional) -> tuple[bool, int]:
    """Compare two functionals on the intersection of their windows.

    Returns (equal, common_window).
    """
    w = min(u.window, v.window)
    return u.moments[: w + 1] == v.moments[: w + 1], w
