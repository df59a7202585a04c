"""Divided-difference and averaging operators on polynomials in z.

Both operators act through the carrier domain:

    dx(f) at z = x(s)  is  (f(x(s+1/2)) - f(x(s-1/2))) / (x(s+1/2) - x(s-1/2))
    sx(f) at z = x(s)  is  (f(x(s+1/2)) + f(x(s-1/2))) / 2

The quotient (an s-polynomial, or a Laurent polynomial in t = q^s) is
re-expanded in z by exact interpolation at the lattice nodes x(0), x(1),
... and the result is verified at one extra node, so a broken symmetry
invariant raises instead of silently corrupting coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import (
    DegenerateLattice,
    InternalSymmetryViolation,
    NonZeroRemainder,
    NotMonic,
)
from .lattice import LatticeSpec
from .poly import DensePoly, LaurentPoly, exact_div, interpolate

HALF = Fraction(1, 2)


def _interp_nodes(lat: LatticeSpec, count: int) -> list[tuple[int, Fraction]]:
    """First `count` node indices with pairwise distinct x(s) values."""
    nodes = []
    seen = set()
    j = 0
    # The node map is at most 2-to-1, so 2*count + 2 indices always suffice.
    while len(nodes) < count and j < 2 * count + 2:
        x = lat.node(j)
        if x not in seen:
            seen.add(x)
            nodes.append((j, x))
        j += 1
    if len(nodes) < count:
        raise DegenerateLattice("lattice does not provide enough distinct nodes")
    return nodes


def _reexpand(carrier_value, lat: LatticeSpec, expected_degree: int) -> DensePoly:
    """Interpolate a carrier-domain function back to a polynomial in z."""
    nodes = _interp_nodes(lat, expected_degree + 2)
    samples = [(x, lat.eval_carrier(carrier_value, j)) for j, x in nodes[:-1]]
    poly = interpolate(samples, "z")
    j_check, x_check = nodes[-1]
    if poly.evaluate(x_check) != lat.eval_carrier(carrier_value, j_check):
        raise InternalSymmetryViolation(
            "carrier quotient is not a polynomial in the lattice variable"
        )
    if not poly.is_zero() and poly.degree > expected_degree:
        raise InternalSymmetryViolation("carrier quotient exceeded the expected degree")
    return poly


def dx(poly: DensePoly, lat: LatticeSpec) -> DensePoly:
    """Divided-difference operator; drops degree by exactly one."""
    if poly.is_zero() or poly.degree == 0:
        return DensePoly.zero("z")
    upper = lat.shifted_carrier(poly, HALF)
    lower = lat.shifted_carrier(poly, -HALF)
    den = lat.carrier(HALF) - lat.carrier(-HALF)
    if den.is_zero():
        raise DegenerateLattice("constant lattice: divided difference undefined")
    try:
        quotient = exact_div(upper - lower, den)
    except NonZeroRemainder as exc:
        raise InternalSymmetryViolation("divided difference is not exact") from exc
    return _reexpand(quotient, lat, poly.degree - 1)


def sx(poly: DensePoly, lat: LatticeSpec) -> DensePoly:
    """Averaging operator; preserves degree."""
    if poly.is_zero():
        return DensePoly.zero("z")
    if poly.degree == 0:
        return poly
    upper = lat.shifted_carrier(poly, HALF)
    lower = lat.shifted_carrier(poly, -HALF)
    return _reexpand((upper + lower) * HALF, lat, poly.degree)


def dx_power(poly: DensePoly, lat: LatticeSpec, k: int) -> DensePoly:
    """k-fold divided difference; k = 0 is the identity."""
    if k < 0:
        raise ValueError("dx_power needs k >= 0")
    for _ in range(k):
        poly = dx(poly, lat)
    return poly


@lru_cache(maxsize=None)
def dx_monomial(lat: LatticeSpec, n: int) -> DensePoly:
    """Cached dx(z^n); dx is linear so this resolves general actions fast."""
    return dx(DensePoly.monomial(n), lat)


@lru_cache(maxsize=None)
def sx_monomial(lat: LatticeSpec, n: int) -> DensePoly:
    """Cached sx(z^n)."""
    return sx(DensePoly.monomial(n), lat)


def monic_kth(poly: DensePoly, lat: LatticeSpec, k: int) -> DensePoly:
    """Monic renormalization of the k-th divided difference.

    For monic input of degree n + k returns the monic degree-n polynomial
    (gamma_n!/gamma_{n+k}!) * dx^k(poly).
    """
    if k < 0:
        raise ValueError("monic_kth needs k >= 0")
    if poly.is_zero() or not poly.is_monic():
        raise NotMonic("monic_kth expects a monic polynomial")
    if poly.degree < k:
        raise ValueError("degree must be at least k")
    if k == 0:
        return poly
    n = poly.degree - k
    scale = lat.gamma_factorial(n) / lat.gamma_factorial(n + k)
    return dx_power(poly, lat, k) * scale
