"""Lattice definitions and their derived constants.

A lattice is the map

    x(s) = 4*beta*s^2 + c5*s + c6          (quadratic)
    x(s) = c1*q^-s + c2*q^s + c3           (q-quadratic, q = p^2)

Half-integer shifts must stay rational, so the q-quadratic kind stores
p = q^(1/2) as its primitive parameter and never stores q itself.  The
carrier of a quadratic lattice is a polynomial in s; the q-quadratic
carrier is a Laurent polynomial in t = q^s whose p^(+-1) factors are
absorbed into the coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .poly import DensePoly, LaurentPoly
from .scalars import parse_scalar, format_scalar

Shift = Fraction

QUADRATIC = "quadratic"
Q_QUADRATIC = "q-quadratic"


@dataclass(frozen=True)
class LatticeSpec:
    """Immutable lattice description; hashable so operator actions cache."""

    kind: str
    beta_q: Optional[Fraction] = None   # quadratic: beta = c4/4
    c5: Optional[Fraction] = None
    c6: Optional[Fraction] = None
    p: Optional[Fraction] = None        # q-quadratic: p = q^(1/2)
    c1: Optional[Fraction] = None
    c2: Optional[Fraction] = None
    c3: Optional[Fraction] = None

    @classmethod
    def quadratic(cls, beta, c5=0, c6=0) -> LatticeSpec:
        return cls(
            kind=QUADRATIC,
            beta_q=Fraction(beta),
            c5=Fraction(c5),
            c6=Fraction(c6),
        )

    @classmethod
    def q_quadratic(cls, p, c1, c2, c3=0) -> LatticeSpec:
        p = Fraction(p)
        if p <= 0:
            raise ValueError("p must be positive")
        if p == 1:
            raise ValueError("p = 1 is the quadratic kind, not q-quadratic")
        c1, c2 = Fraction(c1), Fraction(c2)
        if c1 == 0 and c2 == 0:
            raise ValueError("(c1, c2) must not both vanish")
        return cls(kind=Q_QUADRATIC, p=p, c1=c1, c2=c2, c3=Fraction(c3))

    @property
    def is_quadratic(self) -> bool:
        return self.kind == QUADRATIC

    @property
    def alpha(self) -> Fraction:
        if self.is_quadratic:
            return Fraction(1)
        return (self.p + 1 / self.p) / 2

    @property
    def beta(self) -> Fraction:
        if self.is_quadratic:
            return self.beta_q
        return (1 - self.alpha) * self.c3

    def alpha_gamma(self, n: int) -> tuple[Fraction, Fraction]:
        """(alpha_n, gamma_n); the n = -1 sentinels (alpha, -1) fall out
        of the same formulas."""
        if n < -1:
            raise ValueError("alpha_gamma is defined for n >= -1")
        if self.is_quadratic:
            return Fraction(1), Fraction(n)
        pn = self.p**n
        a_n = (pn + 1 / pn) / 2
        g_n = (pn - 1 / pn) / (self.p - 1 / self.p)
        return a_n, g_n

    def gamma_factorial(self, n: int) -> Fraction:
        """gamma_n! with gamma_0! = 1."""
        if n < 0:
            raise ValueError("gamma factorial needs n >= 0")
        acc = Fraction(1)
        for k in range(1, n + 1):
            acc *= self.alpha_gamma(k)[1]
        return acc

    def u_polys(self) -> tuple[DensePoly, DensePoly]:
        """The companion polynomials (U1, U2) in the lattice variable z."""
        z = DensePoly.variable("z")
        if self.is_quadratic:
            u1 = DensePoly.constant(2 * self.beta_q, "z")
            u2 = (z - self.c6) * (4 * self.beta_q) + Fraction(self.c5**2, 4)
            return u1, u2
        w = self.alpha**2 - 1
        u1 = (z - self.c3) * w
        u2 = ((z - self.c3) * (z - self.c3) - 4 * self.c1 * self.c2) * w
        return u1, u2

    def carrier(self, shift: Shift | int = 0) -> Union[DensePoly, LaurentPoly]:
        """x(s + shift) in the carrier domain (s-poly or t-Laurent)."""
        shift = Fraction(shift)
        if self.is_quadratic:
            s = DensePoly.variable("s") + shift
            return s * s * (4 * self.beta_q) + s * self.c5 + self.c6
        two_shift = 2 * shift
        if two_shift.denominator != 1:
            raise ValueError("q-quadratic shifts must be half-integers")
        k = two_shift.numerator  # p^(2*shift) stays rational
        return LaurentPoly({-1: self.c1 * self.p ** (-k), 0: self.c3, 1: self.c2 * self.p**k})

    def shifted_carrier(self, poly: DensePoly, shift: Shift) -> Union[DensePoly, LaurentPoly]:
        """Exact representation of poly(x(s + shift))."""
        from .poly import compose

        if poly.var != "z":
            raise ValueError("shifted_carrier expects a polynomial in z")
        return compose(poly, self.carrier(shift))

    def node(self, j: int) -> Fraction:
        """x(j) for an integer node index."""
        if self.is_quadratic:
            return 4 * self.beta_q * j * j + self.c5 * j + self.c6
        t = self.p ** (2 * j)
        return self.c1 / t + self.c2 * t + self.c3

    def eval_carrier(self, carrier_value, j: int) -> Fraction:
        """Evaluate a carrier-domain function at integer node index j."""
        if isinstance(carrier_value, LaurentPoly):
            return carrier_value.evaluate(self.p ** (2 * j))
        return carrier_value.evaluate(Fraction(j))

    def to_json(self) -> dict:
        if self.is_quadratic:
            return {
                "kind": QUADRATIC,
                "beta": format_scalar(self.beta_q),
                "c5": format_scalar(self.c5),
                "c6": format_scalar(self.c6),
            }
        return {
            "kind": Q_QUADRATIC,
            "p": format_scalar(self.p),
            "c1": format_scalar(self.c1),
            "c2": format_scalar(self.c2),
            "c3": format_scalar(self.c3),
        }

    @classmethod
    def from_json(cls, data: dict) -> LatticeSpec:
        kind = data.get("kind")
        if kind == QUADRATIC:
            return cls.quadratic(
                parse_scalar(data["beta"]),
                parse_scalar(data.get("c5", "0")),
                parse_scalar(data.get("c6", "0")),
            )
        if kind == Q_QUADRATIC:
            return cls.q_quadratic(
                parse_scalar(data["p"]),
                parse_scalar(data["c1"]),
                parse_scalar(data["c2"]),
                parse_scalar(data.get("c3", "0")),
            )
        raise ValueError(f"unknown lattice kind: {kind!r}")
