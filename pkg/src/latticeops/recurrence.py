"""Monic orthogonal sequences from three-term recurrence data.

RecurrenceData holds B_0..B_nmax and C_1..C_nmax for

    P_{n+1}(z) = (z - B_n) P_n(z) - C_n P_{n-1}(z),   C_n != 0.

The module converts between recurrence data and moment windows in both
directions, exactly:

* moments_from_recurrence solves the triangular system given by the
  orthogonality relations <u, P_n z^(n-1)> = 0 and <u, P_n z^n> =
  C_1...C_n, which pins moments up to index 2*nmax.
* recurrence_from_moments runs the inner-product (Stieltjes-style)
  recursion, O(n^2) pairings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InsufficientDepth, NotRegular, RegularityViolation, WindowExhausted
from .functionals import MomentFunctional, pair, poly_mul
from .lattice import LatticeSpec
from .poly import DensePoly
from .scalars import format_scalar, parse_scalar


@dataclass(frozen=True)
class RecurrenceData:
    """B_0..B_nmax and C_1..C_nmax of a monic TTRR, plus family metadata."""

    B: tuple[Fraction, ...]
    C: tuple[Fraction, ...]  # C[i] holds C_{i+1}
    family: str = ""
    params: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "B", tuple(Fraction(b) for b in self.B))
        object.__setattr__(self, "C", tuple(Fraction(c) for c in self.C))
        if len(self.C) != len(self.B) - 1:
            raise ValueError("need exactly one more B than C")
        for i, c in enumerate(self.C):
            if c == 0:
                raise RegularityViolation(f"C_{i + 1} = 0 breaks regularity", n=i + 1)

    @property
    def n_max(self) -> int:
        return len(self.B) - 1

    def b(self, n: int) -> Fraction:
        if not 0 <= n <= self.n_max:
            raise InsufficientDepth(f"B_{n} outside stored range 0..{self.n_max}")
        return self.B[n]

    def c(self, n: int) -> Fraction:
        if not 1 <= n <= self.n_max:
            raise InsufficientDepth(f"C_{n} outside stored range 1..{self.n_max}")
        return self.C[n - 1]

    def norm(self, n: int) -> Fraction:
        """<u, P_n^2> with mu_0 = 1, i.e. C_1 * ... * C_n."""
        acc = Fraction(1)
        for k in range(1, n + 1):
            acc *= self.c(k)
        return acc

    def with_overrides(self, b_over=None, c_over=None) -> RecurrenceData:
        """Copy with individual B_n / C_n entries replaced (for fault injection)."""
        bs = list(self.B)
        cs = list(self.C)
        for n, val in (b_over or {}).items():
            bs[int(n)] = Fraction(val)
        for n, val in (c_over or {}).items():
            cs[int(n) - 1] = Fraction(val)
        return RecurrenceData(tuple(bs), tuple(cs), self.family, self.params)

    def to_json(self) -> dict:
        return {
            "B": [format_scalar(b) for b in self.B],
            "C": [format_scalar(c) for c in self.C],
        }

    @classmethod
    def from_json(cls, data: dict, family: str = "", params: tuple = ()) -> RecurrenceData:
        return cls(
            tuple(parse_scalar(b) for b in data["B"]),
            tuple(parse_scalar(c) for c in data["C"]),
            family,
            params,
        )


def generate_ops(rec: RecurrenceData, n_max: int) -> list[DensePoly]:
    """Monic P_0..P_{n_max} via the recurrence."""
    if n_max > rec.n_max + 1:
        raise InsufficientDepth(
            f"P_{n_max} needs B_{n_max - 1}; data stops at B_{rec.n_max}"
        )
    z = DensePoly.variable("z")
    polys = [DensePoly.constant(1, "z")]
    if n_max >= 1:
        polys.append(z - rec.b(0))
    for n in range(1, n_max):
        polys.append((z - rec.b(n)) * polys[n] - polys[n - 1] * rec.c(n))
    return polys


def moments_from_recurrence(
    rec: RecurrenceData, window: int, lattice: LatticeSpec
) -> MomentFunctional:
    """Moments mu_0..mu_window (mu_0 = 1) of the functional normalized for rec."""
    if window > 2 * rec.n_max:
        raise InsufficientDepth(
            f"window {window} needs recurrence depth > {rec.n_max}"
        )
    top = (window + 1) // 2
    polys = generate_ops(rec, top)
    mu = [Fraction(1)] + [Fraction(0)] * window
    for m in range(1, window + 1):
        n = (m + 1) // 2
        j = m - n  # m odd: j = n - 1, rhs 0;  m even: j = n, rhs the norm
        rhs = rec.norm(n) if m % 2 == 0 else Fraction(0)
        p = polys[n]
        acc = rhs - sum(
            (p.coeff(i) * mu[i + j] for i in range(n)), Fraction(0)
        )
        mu[m] = acc / p.lead
    return MomentFunctional(tuple(mu), lattice)


def recurrence_from_moments(u: MomentFunctional, n_max: int) -> RecurrenceData:
    """Extract B_0..B_nmax, C_1..C_nmax from moments by exact inner products."""
    if 2 * n_max + 1 > u.window:
        raise WindowExhausted(
            f"recurrence to depth {n_max} needs window {2 * n_max + 1}, have {u.window}"
        )
    z = DensePoly.variable("z")
    p_before = DensePoly.zero("z")
    p_cur = DensePoly.constant(1, "z")
    norm_cur = pair(u, p_cur * p_cur)
    if norm_cur == 0:
        raise NotRegular("<u, 1> = 0: functional is not regular", n=0)
    bs = []
    cs = []
    for n in range(n_max + 1):
        b_n = pair(u, z * p_cur * p_cur) / norm_cur
        bs.append(b_n)
        if n == n_max:
            break
        c_term = p_before * cs[-1] if cs else DensePoly.zero("z")
        p_next = (z - b_n) * p_cur - c_term
        norm_next = pair(u, p_next * p_next)
        if norm_next == 0:
            raise NotRegular(f"<u, P_{n + 1}^2> = 0: functional is not regular", n=n + 1)
        cs.append(norm_next / norm_cur)
        p_before, p_cur = p_cur, p_next
        norm_cur = norm_next
    return RecurrenceData(tuple(bs), tuple(cs))


@dataclass(frozen=True)
class OpsInstance:
    """A monic OPS together with its lattice, moments and norms."""

    lattice: LatticeSpec
    recurrence: RecurrenceData
    polys: tuple[DensePoly, ...]
    functional: MomentFunctional

    @property
    def n_max(self) -> int:
        return len(self.polys) - 1

    def norm(self, n: int) -> Fraction:
        return self.recurrence.norm(n)


def make_instance(
    rec: RecurrenceData, lattice: LatticeSpec, n_polys: int, window: int
) -> OpsInstance:
    """Bundle polynomials and the normalized functional for checker pipelines."""
    polys = tuple(generate_ops(rec, n_polys))
    functional = moments_from_recurrence(rec, window, lattice)
    return OpsInstance(lattice, rec, polys, functional)
