"""Closed-form recurrence generators for the classical quadratic-lattice families.

Covers continuous dual Hahn and Wilson (coefficient data transcribed from
the standard hypergeometric reference tables), the two branch families
solving the degree-one structure relation on x(s) = 4*beta*s^2 + c5*s,
the generator that builds a recurrence straight from Pearson data
(phi, psi), and monic affine conjugation between all of them.

A note on branch 1's product form: C_{n+1} carries the factor (n + 1),

    C_{n+1} = 4 beta^2 (n+1) (n+a+b) (2n+2a+1) (2n+2b+1),

cross-validated three independent ways in the tests: against the generic
quartic closed form for C_{n+1}, against the Pearson-data generator, and
against the structure-relation solver at n = 2, 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ConstraintViolation,
    DegenerateDenominator,
    RegularityViolation,
    ZeroBeta,
)
from .lattice import LatticeSpec
from .poly import DensePoly
from .recurrence import RecurrenceData


@dataclass(frozen=True)
class InstanceBundle:
    """A branch family instance: recurrence plus its structure-relation data.

    pi_shift is the constant c in the relation
    (z + c) dx(P_n) = b_n sx(P_n) + c_n sx(P_{n-1}).
    """

    lattice: LatticeSpec
    recurrence: RecurrenceData
    pi_shift: Fraction
    b_seq: tuple[Fraction, ...]
    c_seq: tuple[Fraction, ...]
    phi: DensePoly
    psi: DensePoly


def cdh_recurrence(a, b, c, n_max: int) -> RecurrenceData:
    """Monic continuous dual Hahn recurrence.

    B_n = (n+a+b)(n+a+c) + n(n+b+c-1) - a^2
    C_{n+1} = (n+1)(n+a+b)(n+a+c)(n+b+c)
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    bs, cs = [], []
    for n in range(n_max + 1):
        bs.append((n + a + b) * (n + a + c) + n * (n + b + c - 1) - a * a)
        if n < n_max:
            c_next = (n + 1) * (n + a + b) * (n + a + c) * (n + b + c)
            if c_next == 0:
                raise RegularityViolation(
                    f"continuous dual Hahn C_{n + 1} vanishes", n=n + 1
                )
            cs.append(c_next)
    return RecurrenceData(
        tuple(bs), tuple(cs), "cdh", (("a", a), ("b", b), ("c", c))
    )


def wilson_recurrence(a, b, c, d, n_max: int) -> RecurrenceData:
    """Monic Wilson recurrence in the squared variable.

    With S = a+b+c+d,
      A_n = (n+S-1)(n+a+b)(n+a+c)(n+a+d) / ((2n+S-1)(2n+S))
      E_n = n(n+b+c-1)(n+b+d-1)(n+c+d-1) / ((2n+S-2)(2n+S-1))
    give B_n = A_n + E_n - a^2 and C_{n+1} = A_n E_{n+1}.
    """
    a, b, c, d = Fraction(a), Fraction(b), Fraction(c), Fraction(d)
    s = a + b + c + d

    def a_coef(n):
        den = (2 * n + s - 1) * (2 * n + s)
        if den == 0:
            raise DegenerateDenominator(f"Wilson A_{n} denominator vanishes", n=n)
        return (n + s - 1) * (n + a + b) * (n + a + c) * (n + a + d) / den

    def e_coef(n):
        if n == 0:
            return Fraction(0)  # numerator factor n; it never multiplies anything
        den = (2 * n + s - 2) * (2 * n + s - 1)
        if den == 0:
            raise DegenerateDenominator(f"Wilson E_{n} denominator vanishes", n=n)
        return n * (n + b + c - 1) * (n + b + d - 1) * (n + c + d - 1) / den

    bs, cs = [], []
    for n in range(n_max + 1):
        bs.append(a_coef(n) + e_coef(n) - a * a)
        if n < n_max:
            c_next = a_coef(n) * e_coef(n + 1)
            if c_next == 0:
                raise RegularityViolation(f"Wilson C_{n + 1} vanishes", n=n + 1)
            cs.append(c_next)
    return RecurrenceData(
        tuple(bs), tuple(cs), "wilson", (("a", a), ("b", b), ("c", c), ("d", d))
    )


def _branch_pearson(b0: Fraction, b1: Fraction, c1: Fraction, beta: Fraction):
    """Pearson pair shared by both branches: psi monic of degree 1."""
    z = DensePoly.variable("z")
    psi = z - b0
    phi = (z - b0) * (-(b1 - b0 + 4 * beta) / 2) - c1
    return phi, psi


def corollary_branch1(beta, c5, a, b, n_max: int) -> InstanceBundle:
    """Branch-1 family of the degree-one structure relation.

    B_n = -2 beta (4n(n+a+b) + 2ab + a + b) - c5^2/(16 beta)
    C_{n+1} = 4 beta^2 (n+1)(n+a+b)(2n+2a+1)(2n+2b+1)
    c_n = -beta n (2n+2a-1)(2n+2b-1),  b_n = n,  pi shift c = c5^2/(16 beta)
    """
    beta, c5, a, b = Fraction(beta), Fraction(c5), Fraction(a), Fraction(b)
    if beta == 0:
        raise ZeroBeta("branch 1 requires beta != 0")
    shift = c5 * c5 / (16 * beta)
    bs, cs, b_seq, c_seq = [], [], [], []
    for n in range(n_max + 1):
        bs.append(-2 * beta * (4 * n * (n + a + b) + 2 * a * b + a + b) - shift)
        b_seq.append(Fraction(n))
        c_seq.append(-beta * n * (2 * n + 2 * a - 1) * (2 * n + 2 * b - 1))
        if n < n_max:
            c_next = 4 * beta**2 * (n + 1) * (n + a + b) * (2 * n + 2 * a + 1) * (2 * n + 2 * b + 1)
            if c_next == 0:
                raise RegularityViolation(f"branch-1 C_{n + 1} vanishes", n=n + 1)
            cs.append(c_next)
    rec = RecurrenceData(
        tuple(bs), tuple(cs), "branch1",
        (("beta", beta), ("c5", c5), ("a", a), ("b", b)),
    )
    lattice = LatticeSpec.quadratic(beta, c5, 0)
    phi, psi = _branch_pearson(rec.b(0), rec.b(1), rec.c(1), beta)
    return InstanceBundle(lattice, rec, shift, tuple(b_seq), tuple(c_seq), phi, psi)


def corollary_branch2(beta, c5, d, e, n_max: int) -> InstanceBundle:
    """Branch-2 family; (d, e) must satisfy (d+1)(e+1) = 1 - c5^2/(64 beta^2).

    B_n = -8 beta n^2 - 8 beta (d+e-1) n + beta (1-4de) - c5^2/(16 beta)
    C_{n+1} = 16 beta^2 (n+1)(n+d+e-1)(n+d)(n+e)
    c_n = -(4/3) n beta (7n^2 + 6(d+e-1)n + 3de - 1),  b_n = n
    """
    beta, c5, d, e = Fraction(beta), Fraction(c5), Fraction(d), Fraction(e)
    if beta == 0:
        raise ZeroBeta("branch 2 requires beta != 0")
    lhs = (d + 1) * (e + 1)
    rhs = 1 - c5 * c5 / (64 * beta**2)
    if lhs != rhs:
        raise ConstraintViolation(
            f"(d+1)(e+1) = {lhs} but the lattice requires {rhs}"
        )
    shift = c5 * c5 / (16 * beta)
    bs, cs, b_seq, c_seq = [], [], [], []
    for n in range(n_max + 1):
        bs.append(
            -8 * beta * n * n - 8 * beta * (d + e - 1) * n + beta * (1 - 4 * d * e) - shift
        )
        b_seq.append(Fraction(n))
        c_seq.append(
            -Fraction(4, 3) * n * beta * (7 * n * n + 6 * (d + e - 1) * n + 3 * d * e - 1)
        )
        if n < n_max:
            c_next = 16 * beta**2 * (n + 1) * (n + d + e - 1) * (n + d) * (n + e)
            if c_next == 0:
                raise RegularityViolation(f"branch-2 C_{n + 1} vanishes", n=n + 1)
            cs.append(c_next)
    rec = RecurrenceData(
        tuple(bs), tuple(cs), "branch2",
        (("beta", beta), ("c5", c5), ("d", d), ("e", e)),
    )
    lattice = LatticeSpec.quadratic(beta, c5, 0)
    phi, psi = _branch_pearson(rec.b(0), rec.b(1), rec.c(1), beta)
    return InstanceBundle(lattice, rec, shift, tuple(b_seq), tuple(c_seq), phi, psi)


def recurrence_from_pearson(
    phi: DensePoly, psi: DensePoly, lat: LatticeSpec, n_max: int
) -> RecurrenceData:
    """Recurrence of the monic OPS for a functional with Pearson data (phi, psi).

    phi = a z^2 + b z + c (degree <= 2), psi = d z + e (degree exactly 1),
    on a quadratic lattice with c6 = 0.  With

        d_n = a n + d,   e_n = b n + e + 2 beta d n^2,

    the coefficients are

        B_n = n e_{n-1}/d_{2n-2} - (n+1) e_n/d_{2n} - 2 beta n (n-1)
        C_{n+1} = -(n+1) d_{n-1}/(d_{2n-1} d_{2n+1}) *
                  phi_n(-beta n^2 - e_n/d_{2n})

    where phi_n(z) = a z^2 + (b + 6 beta n d_n) z + phi(beta n^2)
                     + 2 beta n psi(beta n^2) + (n/4) c5^2 d_n.
    """
    if not lat.is_quadratic:
        raise ValueError("Pearson-data recurrence is a quadratic-lattice construction")
    if lat.c6 != 0:
        raise ValueError("quadratic lattice must have c6 = 0 here")
    if phi.is_zero() or phi.degree > 2:
        raise ValueError("phi must be nonzero of degree <= 2")
    if psi.is_zero() or psi.degree != 1:
        raise DegenerateDenominator("psi must have exact degree 1")
    a, b = phi.coeff(2), phi.coeff(1)
    d, e = psi.coeff(1), psi.coeff(0)
    beta, c5 = lat.beta_q, lat.c5

    def d_coef(n):
        return a * n + d

    def e_coef(n):
        return b * n + e + 2 * beta * d * n * n

    def phi_n_at(n, z0):
        val = a * z0 * z0 + (b + 6 * beta * n * d_coef(n)) * z0
        val += phi.evaluate(beta * n * n)
        val += 2 * beta * n * psi.evaluate(beta * n * n)
        val += Fraction(n, 4) * c5 * c5 * d_coef(n)
        return val

    bs, cs = [], []
    for n in range(n_max + 1):
        if d_coef(2 * n) == 0 or (n > 0 and d_coef(2 * n - 2) == 0):
            raise DegenerateDenominator(f"d_{2 * n} vanishes", n=n)
        b_n = -(n + 1) * e_coef(n) / d_coef(2 * n) - 2 * beta * n * (n - 1)
        if n > 0:
            b_n += n * e_coef(n - 1) / d_coef(2 * n - 2)
        bs.append(b_n)
        if n < n_max:
            den = d_coef(2 * n - 1) * d_coef(2 * n + 1)
            if den == 0:
                raise DegenerateDenominator(f"d_{2 * n + 1} d_{2 * n - 1} vanishes", n=n)
            arg = -beta * n * n - e_coef(n) / d_coef(2 * n)
            c_next = -(n + 1) * d_coef(n - 1) / den * phi_n_at(n, arg)
            if c_next == 0:
                raise RegularityViolation(f"Pearson-data C_{n + 1} vanishes", n=n + 1)
            cs.append(c_next)
    return RecurrenceData(tuple(bs), tuple(cs), "pearson", ())


def affine_conjugate(rec: RecurrenceData, lam, tau) -> RecurrenceData:
    """Recurrence of P~_n(z) = lam^n P_n((z - tau)/lam): B -> lam B + tau, C -> lam^2 C."""
    lam, tau = Fraction(lam), Fraction(tau)
    if lam == 0:
        raise ValueError("affine conjugation needs lam != 0")
    return RecurrenceData(
        tuple(lam * b + tau for b in rec.B),
        tuple(lam * lam * c for c in rec.C),
        rec.family,
        rec.params,
    )
