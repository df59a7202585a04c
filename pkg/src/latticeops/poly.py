"""Exact univariate polynomial arithmetic.

Two representations:

* `DensePoly` — a dense coefficient vector indexed by exponent, tagged
  with its variable ("z" for the lattice variable, "s" for the step
  variable).  `DensePoly([1, 10, 5], "z")` is 5z^2 + 10z + 1.
* `LaurentPoly` — a sparse map from signed exponent to coefficient in
  the variable t = q^s, used as the carrier on q-quadratic lattices.

All coefficients are exact rationals; equality is exact coefficient
equality.  The degree of the zero polynomial is the sentinel `None`,
forcing callers to treat the zero case explicitly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .errors import DuplicateNode, NonZeroRemainder, VariableMismatch

ScalarLike = Union[Fraction, int]


def _as_scalar(value: ScalarLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class DensePoly:
    """Dense polynomial with exact rational coefficients."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable[ScalarLike] = (), var: str = "z"):
        cs = [_as_scalar(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def zero(cls, var: str = "z") -> DensePoly:
        return cls((), var)

    @classmethod
    def constant(cls, value: ScalarLike, var: str = "z") -> DensePoly:
        return cls((value,), var)

    @classmethod
    def monomial(cls, exponent: int, coeff: ScalarLike = 1, var: str = "z") -> DensePoly:
        if exponent < 0:
            raise ValueError("DensePoly exponents are nonnegative")
        return cls((0,) * exponent + (coeff,), var)

    @classmethod
    def variable(cls, var: str = "z") -> DensePoly:
        return cls((0, 1), var)

    @property
    def degree(self) -> Optional[int]:
        """Degree, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def lead(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, exponent: int) -> Fraction:
        if 0 <= exponent < len(self.coeffs):
            return self.coeffs[exponent]
        return Fraction(0)

    def _check_var(self, other: DensePoly) -> None:
        if self.var != other.var:
            raise VariableMismatch(f"cannot mix variables {self.var!r} and {other.var!r}")

    def __add__(self, other):
        if isinstance(other, DensePoly):
            self._check_var(other)
            n = max(len(self.coeffs), len(other.coeffs))
            return DensePoly(
                (self.coeff(i) + other.coeff(i) for i in range(n)), self.var
            )
        return self + DensePoly.constant(_as_scalar(other), self.var)

    __radd__ = __add__

    def __neg__(self):
        return DensePoly((-c for c in self.coeffs), self.var)

    def __sub__(self, other):
        return self + (-other if isinstance(other, DensePoly) else -_as_scalar(other))

    def __rsub__(self, other):
        return (-self) + _as_scalar(other)

    def __mul__(self, other):
        if isinstance(other, DensePoly):
            self._check_var(other)
            if self.is_zero() or other.is_zero():
                return DensePoly.zero(self.var)
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return DensePoly(out, self.var)
        c = _as_scalar(other)
        return DensePoly((c * a for a in self.coeffs), self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = DensePoly.constant(1, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, DensePoly):
            return self.var == other.var and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == DensePoly.constant(other, self.var)
        return NotImplemented

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def evaluate(self, x: ScalarLike) -> Fraction:
        x = _as_scalar(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, den: DensePoly) -> tuple[DensePoly, DensePoly]:
        self._check_var(den)
        if den.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = den.degree
        lead = den.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dd, 0)
        for i in range(len(rem) - 1, dd - 1, -1):
            if rem[i] == 0:
                continue
            q = rem[i] / lead
            quot[i - dd] = q
            for j, c in enumerate(den.coeffs):
                rem[i - dd + j] -= q * c
        return DensePoly(quot, self.var), DensePoly(rem, self.var)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                term = str(c)
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                sign = "-" if c < 0 else ""
                pow_ = self.var if i == 1 else f"{self.var}^{i}"
                term = f"{sign}{mag}{pow_}"
                if parts and not term.startswith("-"):
                    term = term
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out

    def __repr__(self):
        return f"DensePoly({list(self.coeffs)!r}, {self.var!r})"


class LaurentPoly:
    """Sparse Laurent polynomial in t = q^s with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, ScalarLike] = ()):
        data = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for k, v in items:
            v = _as_scalar(v)
            if v != 0:
                data[int(k)] = data.get(int(k), Fraction(0)) + v
        self.coeffs = {k: v for k, v in sorted(data.items()) if v != 0}

    @classmethod
    def zero(cls) -> LaurentPoly:
        return cls({})

    @classmethod
    def constant(cls, value: ScalarLike) -> LaurentPoly:
        return cls({0: value})

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, exponent: int) -> Fraction:
        return self.coeffs.get(exponent, Fraction(0))

    @property
    def min_exp(self) -> int:
        if not self.coeffs:
            raise ValueError("the zero Laurent polynomial has no support")
        return min(self.coeffs)

    @property
    def max_exp(self) -> int:
        if not self.coeffs:
            raise ValueError("the zero Laurent polynomial has no support")
        return max(self.coeffs)

    def __add__(self, other):
        if isinstance(other, LaurentPoly):
            out = dict(self.coeffs)
            for k, v in other.coeffs.items():
                out[k] = out.get(k, Fraction(0)) + v
            return LaurentPoly(out)
        return self + LaurentPoly.constant(_as_scalar(other))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, LaurentPoly) else -_as_scalar(other))

    def __rsub__(self, other):
        return (-self) + _as_scalar(other)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            out: dict[int, Fraction] = {}
            for i, a in self.coeffs.items():
                for j, b in other.coeffs.items():
                    out[i + j] = out.get(i + j, Fraction(0)) + a * b
            return LaurentPoly(out)
        c = _as_scalar(other)
        return LaurentPoly({k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def evaluate(self, t: ScalarLike) -> Fraction:
        t = _as_scalar(t)
        if t == 0:
            raise ZeroDivisionError("Laurent polynomial evaluated at t = 0")
        return sum((v * t**k for k, v in self.coeffs.items()), Fraction(0))

    def shifted(self, amount: int) -> LaurentPoly:
        """Multiply by t**amount."""
        return LaurentPoly({k + amount: v for k, v in self.coeffs.items()})

    def to_dense(self, var: str = "t") -> DensePoly:
        if self.is_zero():
            return DensePoly.zero(var)
        if self.min_exp < 0:
            raise ValueError("Laurent polynomial has negative exponents")
        out = [Fraction(0)] * (self.max_exp + 1)
        for k, v in self.coeffs.items():
            out[k] = v
        return DensePoly(out, var)

    def __repr__(self):
        return f"LaurentPoly({self.coeffs!r})"


PolyLike = Union[DensePoly, LaurentPoly]


def exact_div(num: PolyLike, den: PolyLike) -> PolyLike:
    """Divide exactly, raising NonZeroRemainder if the division is inexact.

    An inexact division here almost always means a lattice-symmetry
    invariant was broken upstream, so the remainder is attached to the
    error for diagnosis.
    """
    if isinstance(num, LaurentPoly) or isinstance(den, LaurentPoly):
        if not (isinstance(num, LaurentPoly) and isinstance(den, LaurentPoly)):
            raise VariableMismatch("cannot divide Laurent by dense or vice versa")
        if den.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if num.is_zero():
            return LaurentPoly.zero()
        shift = num.min_exp - den.min_exp
        dnum = num.shifted(-num.min_exp).to_dense()
        dden = den.shifted(-den.min_exp).to_dense()
        q, r = dnum.divmod(dden)
        if not r.is_zero():
            raise NonZeroRemainder("inexact Laurent division", remainder=r)
        return LaurentPoly(dict(enumerate(q.coeffs))).shifted(shift)
    q, r = num.divmod(den)
    if not r.is_zero():
        raise NonZeroRemainder("inexact polynomial division", remainder=r)
    return q


def interpolate(samples: list[tuple[ScalarLike, ScalarLike]], var: str = "z") -> DensePoly:
    """Unique polynomial of degree < len(samples) through the given points.

    Newton divided differences over exact rationals.
    """
    if not samples:
        raise ValueError("interpolation needs at least one sample")
    nodes = [_as_scalar(x) for x, _ in samples]
    values = [_as_scalar(y) for _, y in samples]
    if len(set(nodes)) != len(nodes):
        raise DuplicateNode("interpolation nodes must be pairwise distinct")
    # Divided-difference table, one diagonal at a time.
    table = list(values)
    for level in range(1, len(nodes)):
        for i in range(len(nodes) - 1, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (nodes[i] - nodes[i - level])
    poly = DensePoly.zero(var)
    basis = DensePoly.constant(1, var)
    x = DensePoly.variable(var)
    for i, coeff in enumerate(table):
        poly = poly + basis * coeff
        if i < len(nodes) - 1:
            basis = basis * (x - nodes[i])
    return poly


def compose(outer: DensePoly, inner: PolyLike) -> PolyLike:
    """Substitute `inner` for the variable of `outer` (Horner form)."""
    if isinstance(inner, LaurentPoly):
        acc: PolyLike = LaurentPoly.zero()
    else:
        acc = DensePoly.zero(inner.var)
    for c in reversed(outer.coeffs):
        acc = acc * inner + c
    return acc
