"""Structure-relation solvers and theorem checkers.

Everything in this module is exact linear algebra over the rationals:
a relation either holds coefficient-by-coefficient or a certified
infeasibility (with residual) is reported.  No tolerances exist.

The main surfaces:

* solve_structure_relation — per-n solve of
  pi(z) dx(P_n) = a_n sx(P_{n+1}) + b_n sx(P_n) + c_n sx(P_{n-1}).
* degree_two_rewrite_tables — closed-form coefficient tables of the
  rewritten relation sum_j a_{n,j} sx(P_j) = sum_j b_{n,j} P_j^[1],
  verified against direct operator expansion.
* condition_residuals — the exact admissibility conditions tying the
  relation constants to the recurrence coefficients.
* pearson_residuals / recover_pearson — the distributional equation
  D(phi u) = S(psi u) on a moment window, checked or solved for.
* sturm_liouville_residuals — phi dx^2 P_n + psi sx(dx P_n) = lambda_n P_n.
* RelationWitness / witness_matrix / relation_polynomials /
  functional_relation_residuals / semiclassical_certificate — the
  banded-relation pipeline that certifies semiclassical character.
* discover_banded — exact search for a banded witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import linalg
from .errors import (
    DegreeCollapse,
    HypothesisFailure,
    MismatchError,
    MissingData,
    NoneFound,
    NoSolution,
    SingularA,
    WindowExhausted,
)
from .functionals import MomentFunctional, functional_op, pair, poly_mul
from .lattice import LatticeSpec
from .operators import dx, dx_monomial, dx_power, monic_kth, sx, sx_monomial
from .poly import DensePoly
from .recurrence import OpsInstance


# ---------------------------------------------------------------------------
# basis expansion helpers

def expand_in_simple_set(p: DensePoly, basis: list[DensePoly]) -> list[Fraction]:
    """Coefficients of p in a simple set (basis[j] has degree j). Exact."""
    if p.is_zero():
        return []
    if p.degree >= len(basis):
        raise ValueError("basis does not span the degree of p")
    out = [Fraction(0)] * (p.degree + 1)
    rem = p
    while not rem.is_zero():
        d = rem.degree
        q = basis[d]
        if q.is_zero() or q.degree != d:
            raise ValueError(f"basis element {d} does not have degree {d}")
        c = rem.coeff(d) / q.lead
        out[d] = c
        rem = rem - q * c
    return out


def derived_family(inst: OpsInstance, k: int) -> list[DensePoly]:
    """The monic k-th divided-difference family P_n^[k], n = 0..n_max-k."""
    return [
        monic_kth(inst.polys[n + k], inst.lattice, k)
        for n in range(len(inst.polys) - k)
    ]


# ---------------------------------------------------------------------------
# degree-two structure relation

def solve_structure_relation(
    polys: list[DensePoly],
    lat: LatticeSpec,
    pi: DensePoly,
    n_max: int,
) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Solve pi dx(P_n) = a_n sx(P_{n+1}) + b_n sx(P_n) + c_n sx(P_{n-1}) per n.

    Returns (a_n, b_n, c_n) for n = 0..n_max; raises NoSolution with the
    offending n and the certified residual if some n is infeasible.
    (P_{-1} = 0, so c_0 is reported as 0.)
    """
    if pi.is_zero() or pi.degree > 2:
        raise ValueError("pi must be nonzero of degree <= 2")
    if len(polys) <= n_max + 1:
        raise ValueError("need polynomials up to P_{n_max + 1}")
    sx_basis = [sx(p, lat) for p in polys[: n_max + 2]]
    results = []
    for n in range(n_max + 1):
        lhs = pi * dx(polys[n], lat)
        exp = expand_in_simple_set(lhs, sx_basis)
        exp += [Fraction(0)] * (n + 2 - len(exp))
        in_band = {n + 1, n} | ({n - 1} if n >= 1 else set())
        off = [(j, c) for j, c in enumerate(exp) if c != 0 and j not in in_band]
        if off:
            residual = sum(
                (sx_basis[j] * c for j, c in off), DensePoly.zero("z")
            )
            raise NoSolution(
                f"structure relation infeasible at n = {n}", n=n, residual=residual
            )
        results.append((exp[n + 1], exp[n], exp[n - 1] if n >= 1 else Fraction(0)))
    return results


def find_deg2_relation(
    inst: OpsInstance, n_max: int
) -> tuple[DensePoly, list[tuple[Fraction, Fraction, Fraction]]]:
    """Jointly solve for pi = a z^2 + b z + c and the per-n coefficients.

    Sets up the full homogeneous system over (a, b, c, a_0, b_0, c_0, ...)
    and returns a nontrivial normalized solution, or raises NoneFound.
    """
    if len(inst.polys) <= n_max + 1:
        raise ValueError("need polynomials up to P_{n_max + 1}")
    lat = inst.lattice
    z = DensePoly.variable("z")
    pi_basis = [DensePoly.constant(1, "z"), z, z * z]
    unknowns = 3 + 3 * (n_max + 1)
    rows = []
    for n in range(n_max + 1):
        dxp = dx(inst.polys[n], lat)
        pi_cols = [b * dxp for b in pi_basis]
        rel_cols = [sx(inst.polys[n + 1], lat), sx(inst.polys[n], lat)]
        rel_cols.append(
            sx(inst.polys[n - 1], lat) if n >= 1 else DensePoly.zero("z")
        )
        for j in range(n + 2):
            row = [Fraction(0)] * unknowns
            for i in range(3):
                row[i] = pi_cols[i].coeff(j)
            for i in range(3):
                row[3 + 3 * n + i] = -rel_cols[i].coeff(j)
            rows.append(row)
    basis = linalg.nullspace(rows)
    # Ignore pure gauge directions (c_0 is unconstrained since P_{-1} = 0).
    candidates = []
    for vec in basis:
        if any(x != 0 for x in vec[:3]):
            candidates.append(vec)
    if not candidates:
        raise NoneFound("no degree-two structure relation on this instance")
    vec = candidates[0]
    scale = next(x for x in (vec[2], vec[1], vec[0]) if x != 0)
    vec = [x / scale for x in vec]
    pi = DensePoly(vec[:3], "z")
    rel = []
    for n in range(n_max + 1):
        a_n, b_n, c_n = vec[3 + 3 * n : 6 + 3 * n]
        rel.append((a_n, b_n, Fraction(0) if n == 0 else c_n))
    return pi, rel


# ---------------------------------------------------------------------------
# rewrite of the degree-two relation (closed forms vs direct expansion)

def degree_two_rewrite_tables(
    inst: OpsInstance,
    pi: DensePoly,
    relation: list[tuple[Fraction, Fraction, Fraction]],
    n: int,
) -> dict:
    """Coefficient tables of  sum_j a_{n,j} sx(P_j) = sum_j b_{n,j} P_j^[1].

    Computes the closed forms

      a_{n,n+1} = 2a + a_n                 b_{n,n+1} = a(n+2)
      a_{n,n}   = b_n + 2aB_n + b'         b_{n,n}   = (n+1)(a(B_{n+1}+B_n) + b')
      a_{n,n-1} = c_n + 2aC_n              b_{n,n-2} = (n-1)C_n(a(B_{n-1}+B_n) + b')
                                           b_{n,n-3} = a(n-2) C_n C_{n-1}
      b_{n,n-1} = n[a(C_{n+1}+B_n^2+C_n) + b'(B_n-beta) + c - a(beta^2-c5^2/4)]

    with b' = b + 2 a beta, and checks them against the coefficients
    obtained by directly expanding both sides with the operator calculus.
    Raises MismatchError at the first disagreeing (n, j).

    Quadratic lattices only.
    """
    lat = inst.lattice
    if not lat.is_quadratic:
        raise ValueError("rewrite tables are a quadratic-lattice construction")
    beta, c5 = lat.beta_q, lat.c5
    a, b, c = pi.coeff(2), pi.coeff(1), pi.coeff(0)
    bp = b + 2 * a * beta
    rec = inst.recurrence
    a_n, b_n, c_n = relation[n]

    closed_a = {
        n + 1: 2 * a + a_n,
        n: b_n + 2 * a * rec.b(n) + bp,
    }
    if n >= 1:
        closed_a[n - 1] = c_n + 2 * a * rec.c(n)
    closed_b = {
        n + 1: a * (n + 2),
        n: (n + 1) * (a * (rec.b(n + 1) + rec.b(n)) + bp),
    }
    if n >= 1:
        closed_b[n - 1] = n * (
            a * (rec.c(n + 1) + rec.b(n) ** 2 + rec.c(n))
            + bp * (rec.b(n) - beta)
            + c
            - a * (beta**2 - c5**2 / 4)
        )
    if n >= 2:
        closed_b[n - 2] = (n - 1) * rec.c(n) * (a * (rec.b(n - 1) + rec.b(n)) + bp)
    if n >= 3:
        closed_b[n - 3] = a * (n - 2) * rec.c(n) * rec.c(n - 1)

    # Direct expansion.  By the product rule for dx, both displays equal
    #   pi dx(P_n) + sx(dx(pi) P_n)  and  dx[(sx(pi) - 2 beta dx(pi)) P_n],
    # expanded in the simple sets {sx(P_j)} and {P_j^[1]} respectively.
    p_n = inst.polys[n]
    dpi = dx(pi, lat)
    lhs_poly = pi * dx(p_n, lat) + sx(dpi * p_n, lat)
    rhs_poly = dx((sx(pi, lat) - dpi * (2 * beta)) * p_n, lat)
    if lhs_poly != rhs_poly:
        raise MismatchError("product-rule rewrite failed to close", n=n)

    sx_basis = [sx(p, lat) for p in inst.polys[: n + 2]]
    d1_basis = derived_family(inst, 1)[: n + 2]
    direct_a = expand_in_simple_set(lhs_poly, sx_basis)
    direct_b = expand_in_simple_set(rhs_poly, d1_basis)

    for j in range(n + 2):
        want = closed_a.get(j, Fraction(0))
        got = direct_a[j] if j < len(direct_a) else Fraction(0)
        if want != got:
            raise MismatchError(
                f"a-table mismatch at (n, j) = ({n}, {j}): closed {want}, direct {got}",
                n=n,
                j=j,
            )
        want = closed_b.get(j, Fraction(0))
        got = direct_b[j] if j < len(direct_b) else Fraction(0)
        if want != got:
            raise MismatchError(
                f"b-table mismatch at (n, j) = ({n}, {j}): closed {want}, direct {got}",
                n=n,
                j=j,
            )
    return {"a": closed_a, "b": closed_b}


# ---------------------------------------------------------------------------
# admissibility condition residuals

CONDITION_NAMES = ("deg2-1", "deg2-2", "deg1", "c1-relation")


def condition_residuals(which: str, data: dict) -> Fraction:
    """Left-minus-right residual of a named admissibility condition.

    data carries rationals under keys among
    a, b, c, beta, c5, B0, B1, B2, C1, C2, C3, b2, c2, c3.
    """

    def need(*keys):
        missing = [k for k in keys if k not in data]
        if missing:
            raise MissingData(f"{which} needs {', '.join(missing)}")
        return [Fraction(data[k]) for k in keys]

    if which == "deg2-1":
        a, c2_, c3_, C1, C2, C3, B0, B1, beta, c5 = need(
            "a", "c2", "c3", "C1", "C2", "C3", "B0", "B1", "beta", "c5"
        )
        if a == 0:
            raise MissingData("deg2-1 applies only when a != 0")
        r3 = c3_ + 2 * a * C3
        return (
            6 * a * C2 * C3
            + 2 * (1 + 1 / a) * r3 * (C1 - c5**2 / 4)
            + r3 * ((B1 - B0) ** 2 - 8 * beta * (B0 + B1 - 2 * beta) - 2 * C2)
        )
    if which == "deg2-2":
        a, b, b2_, c2_, c3_, C1, C2, C3, B0, B1, B2, beta = need(
            "a", "b", "b2", "c2", "c3", "C1", "C2", "C3", "B0", "B1", "B2", "beta"
        )
        bp = b + 2 * a * beta
        r2 = c2_ + 2 * a * C2
        r3 = c3_ + 2 * a * C3
        return a * C2 * C3 * (b2_ + 2 * a * B2 + bp) - r3 * (
            a * (B2 + B1) * C2 + bp * C2 - r2 / 2 * (B1 - B0)
        )
    if which == "deg1":
        c, C2, B0, B1, beta = need("c", "C2", "B0", "B1", "beta")
        return 2 * (C2 + (B0 - B1) * c) - ((B1 - 5 * beta) ** 2 - (B0 - 5 * beta) ** 2)
    if which == "c1-relation":
        C1, B0, B1, beta, c5 = need("C1", "B0", "B1", "beta", "c5")
        return 2 * beta * C1 - (B1 - B0 + 8 * beta) * ((B0 - beta) * beta + c5**2 / 16)
    raise ValueError(f"unknown condition {which!r}")


# ---------------------------------------------------------------------------
# Pearson equation

@dataclass(frozen=True)
class PearsonData:
    """A Pearson pair: phi of degree <= 2, psi of degree 1."""

    phi: DensePoly
    psi: DensePoly

    def __post_init__(self):
        if self.phi.is_zero() and self.psi.is_zero():
            raise ValueError("Pearson pair must be nonzero")
        if not self.phi.is_zero() and self.phi.degree > 2:
            raise ValueError("phi must have degree <= 2")
        if not self.psi.is_zero() and self.psi.degree > 1:
            raise ValueError("psi must have degree <= 1")


def pearson_residuals(
    pd: PearsonData, u: MomentFunctional, test_degree: int
) -> list[Fraction]:
    """Moments of D(phi u) - S(psi u) against z^j for j = 0..test_degree.

    residual_j = -<u, phi dx(z^j)> - <u, psi sx(z^j)>; the all-zero vector
    certifies the Pearson equation on the window.
    """
    if test_degree + 2 > u.window:
        raise WindowExhausted(
            f"test degree {test_degree} needs window {test_degree + 2}, have {u.window}"
        )
    lat = u.lattice
    out = []
    for j in range(test_degree + 1):
        val = -pair(u, pd.phi * dx_monomial(lat, j)) - pair(u, pd.psi * sx_monomial(lat, j))
        out.append(val)
    return out


@dataclass(frozen=True)
class RecoveredPearson:
    data: PearsonData
    nullity: int


def _instance_functional(inst: OpsInstance, min_window: int) -> MomentFunctional:
    if inst.functional.window < min_window:
        raise WindowExhausted(
            f"instance window {inst.functional.window} < required {min_window}"
        )
    return inst.functional


def recover_pearson(inst: OpsInstance, probe_degree: int = 5) -> RecoveredPearson:
    """Solve for a nonzero (phi, psi) with D(phi u) = S(psi u) on the window.

    Sets up the exact linear system residual_j = 0 for j = 0..probe_degree
    over the five unknown coefficients, and returns a null-space element
    normalized so psi is monic (falling back to the leading nonzero
    coefficient when psi degenerates).  Raises NoneFound when only the
    trivial solution exists.  Ties (nullity > 1) resolve to the candidate
    with smallest phi degree, then lexicographically smallest coefficients.
    """
    u = _instance_functional(inst, probe_degree + 2)
    lat = inst.lattice
    z = DensePoly.variable("z")
    phi_basis = [DensePoly.constant(1, "z"), z, z * z]
    psi_basis = [DensePoly.constant(1, "z"), z]
    rows = []
    for j in range(probe_degree + 1):
        dxj = dx_monomial(lat, j)
        sxj = sx_monomial(lat, j)
        row = [-pair(u, b * dxj) for b in phi_basis]
        row += [-pair(u, b * sxj) for b in psi_basis]
        rows.append(row)
    basis = linalg.nullspace(rows)
    if not basis:
        raise NoneFound("Pearson system has only the trivial solution")

    def build(vec):
        return PearsonData(DensePoly(vec[:3], "z"), DensePoly(vec[3:], "z"))

    def norm_vec(vec):
        lead = next((x for x in reversed(vec) if x != 0), None)
        return [x / lead for x in vec]

    candidates = sorted(
        (norm_vec(v) for v in basis),
        key=lambda v: (
            DensePoly(v[:3], "z").degree if any(x != 0 for x in v[:3]) else -1,
            v,
        ),
    )
    vec = candidates[0]
    if vec[4] != 0:
        vec = [x / vec[4] for x in vec]
    return RecoveredPearson(build(vec), len(basis))


# ---------------------------------------------------------------------------
# Sturm-Liouville equation

def sturm_liouville_residuals(
    phi: DensePoly,
    psi: DensePoly,
    curvature: Fraction,
    polys: list[DensePoly],
    lat: LatticeSpec,
    n_max: int,
) -> list[DensePoly]:
    """residual_n = phi dx^2 P_n + psi sx(dx P_n) - lambda_n P_n.

    lambda_n = n (1 + (n-1) * curvature).
    """
    if len(polys) <= n_max:
        raise ValueError("need polynomials up to P_{n_max}")
    out = []
    for n in range(n_max + 1):
        p = polys[n]
        lam = Fraction(n) * (1 + (n - 1) * curvature)
        res = phi * dx_power(p, lat, 2) + psi * sx(dx(p, lat), lat) - p * lam
        out.append(res)
    return out


def fit_sl_curvature(
    phi: DensePoly, psi: DensePoly, polys: list[DensePoly], lat: LatticeSpec
) -> Fraction:
    """Exact curvature fit from n = 2: lambda_2 = 2 (1 + curvature).

    lambda_2 is read off as the leading coefficient of the operator image
    of the monic P_2; the caller should confirm with the residual sweep.
    """
    p2 = polys[2]
    image = phi * dx_power(p2, lat, 2) + psi * sx(dx(p2, lat), lat)
    if image.is_zero() or image.degree != 2:
        raise DegreeCollapse("operator image of P_2 does not have degree 2")
    lam2 = image.lead / p2.lead
    return lam2 / 2 - 1


# ---------------------------------------------------------------------------
# banded-relation witness and pipeline

@dataclass(frozen=True)
class RelationWitness:
    """Coefficients of  sum_{j<=M} a_{j,n} sx(P_{n-j}^[k]) = sum_{j<=N} b_{j,n} Q_{n-j}^[m].

    a and b map (offset j, index n) to exact rationals; coverage is
    n = 0..n_hi.  Offsets whose polynomial vanished (n - j < 0) carry the
    conventional value 1 so the corner normalization stays meaningful.
    """

    M: int
    N: int
    k: int
    m: int
    a: dict
    b: dict
    n_hi: int

    def __post_init__(self):
        for n in range(self.n_hi + 1):
            if self.a.get((0, n)) != 1 or self.b.get((0, n)) != 1:
                raise ValueError(f"witness must have a_0,n = b_0,n = 1 (n = {n})")
            if self.a.get((self.M, n), Fraction(0)) == 0 or self.b.get(
                (self.N, n), Fraction(0)
            ) == 0:
                raise ValueError(f"witness corners must not vanish (n = {n})")

    def a_at(self, j: int, n: int) -> Fraction:
        if j < 0 or j > self.M or n > self.n_hi or n < 0:
            return Fraction(0)
        return self.a[(j, n)]

    def b_at(self, j: int, n: int) -> Fraction:
        if j < 0 or j > self.N or n > self.n_hi or n < 0:
            return Fraction(0)
        return self.b[(j, n)]


def witness_matrix(w: RelationWitness) -> tuple[list[list[Fraction]], Fraction]:
    """The order-(M+N) matrix tying the two dual-basis expansions, plus det.

    Row i < N holds a_{j-i, j} for i <= j <= M+i; row i >= N holds
    b_{j-i+N, j} for i-N <= j <= i; all other entries are zero.  The
    empty (M = N = 0) matrix has determinant 1.
    """
    size = w.M + w.N
    mat = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            if i < w.N and i <= j <= w.M + i:
                mat[i][j] = w.a_at(j - i, j)
            elif i >= w.N and i - w.N <= j <= i:
                mat[i][j] = w.b_at(j - i + w.N, j)
    return mat, linalg.determinant(mat)


def _bridge_coefficients(w: RelationWitness, n: int):
    """Solve for the bridge coefficients (a'_{n,i}, b'_{n,j}) linking the
    two dual-basis expansions, with the corner values pinned to
    a'_{n,n+N} = b_{N, M+N+n} and b'_{n,n+M} = a_{M, M+N+n}."""
    top = w.M + w.N + n
    if top > w.n_hi:
        raise MissingData(
            f"witness covers n <= {w.n_hi}, bridge at n = {n} needs {top}"
        )
    na, nb = n + w.N + 1, n + w.M + 1  # unknown counts
    rows, rhs = [], []
    pin_a, pin_b = w.b_at(w.N, top), w.a_at(w.M, top)
    for l in range(top + 1):
        row = [Fraction(0)] * (na + nb)
        for i in range(na):
            row[i] = w.a_at(l - i, l)
        for j in range(nb):
            row[na + j] = -w.b_at(l - j, l)
        rows.append(row)
        rhs.append(Fraction(0))
    # corner pins
    for col, val in ((na - 1, pin_a), (na + nb - 1, pin_b)):
        row = [Fraction(0)] * (na + nb)
        row[col] = Fraction(1)
        rows.append(row)
        rhs.append(val)
    sol = linalg.solve(rows, rhs)
    if sol is None:
        raise SingularA(f"bridge system infeasible at n = {n}")
    return sol[:na], sol[na:]


def relation_polynomials(
    n: int,
    w: RelationWitness,
    p_inst: OpsInstance,
    q_inst: OpsInstance,
) -> tuple[DensePoly, DensePoly, DensePoly]:
    """The three certificate polynomials (psi, phi, rho) for index n.

    They realize  psi u = D^(k-m) (phi D v + rho S v)  and have exact
    degrees N+k+n, M+m+n+1 and M+m+n; on quadratic lattices the phi
    degree drops to M+m+n because the companion polynomial U2 has degree
    one there.  DegreeCollapse reports any further collapse.
    """
    if w.k < w.m:
        raise ValueError("pipeline requires k >= m")
    lat = p_inst.lattice
    _, det = witness_matrix(w)
    if det == 0:
        raise SingularA("witness matrix is singular")
    a_bridge, b_bridge = _bridge_coefficients(w, n)

    alpha = lat.alpha
    u1, u2 = lat.u_polys()
    a_m1, g_m = lat.alpha_gamma(w.m + 1)[0], lat.alpha_gamma(w.m)[1]

    psi = DensePoly.zero("z")
    for i in range(n + w.N + 1):
        scale = (
            (-1) ** w.k
            * lat.gamma_factorial(w.k + i)
            / lat.gamma_factorial(i)
            / p_inst.norm(w.k + i)
        )
        psi = psi + p_inst.polys[w.k + i] * (scale * a_bridge[i])

    phi = DensePoly.zero("z")
    rho = DensePoly.zero("z")
    phi_core = u2 * (alpha * a_m1) - u1 * u1 * ((a_m1 + g_m) / alpha)
    for j in range(n + w.M + 1):
        q = q_inst.polys[w.m + j]
        dq, sq = dx(q, lat), sx(q, lat)
        scale = (
            (-1) ** w.m
            * lat.gamma_factorial(w.m + j)
            / lat.gamma_factorial(j)
            / (alpha * q_inst.norm(w.m + j))
        )
        weight = scale * b_bridge[j]
        phi = phi + (phi_core * dq + u1 * sq * g_m) * weight
        rho = rho + (sq * a_m1 + u1 * dq * ((a_m1 + g_m) / alpha)) * weight

    # deg phi = M + m + n - 1 + deg(U2): the stated M+m+n+1 presumes the
    # q-quadratic U2 of degree two; a quadratic lattice drops it by one.
    expected_phi = w.M + w.m + n - 1 + (u2.degree if not u2.is_zero() else 0)
    for poly, expected, name in (
        (psi, w.N + w.k + n, "psi"),
        (phi, expected_phi, "phi"),
        (rho, w.M + w.m + n, "rho"),
    ):
        if poly.is_zero() or poly.degree != expected:
            raise DegreeCollapse(
                f"{name} has degree {None if poly.is_zero() else poly.degree},"
                f" expected {expected} at n = {n}"
            )
    return psi, phi, rho


def functional_relation_residuals(
    psi: DensePoly,
    phi: DensePoly,
    rho: DensePoly,
    u: MomentFunctional,
    v: MomentFunctional,
    k: int,
    m: int,
) -> tuple[list[Fraction], int]:
    """Moment residuals of  psi u - D^(k-m) (phi D v + rho S v).

    Returns (residuals, window): the comparison window after exact
    window arithmetic on both sides.
    """
    left = poly_mul(psi, u)
    inner = _add_functionals(
        poly_mul(phi, functional_op("D", v)), poly_mul(rho, functional_op("S", v))
    )
    for _ in range(k - m):
        inner = functional_op("D", inner)
    window = min(left.window, inner.window)
    res = [left.moments[j] - inner.moments[j] for j in range(window + 1)]
    return res, window


def _add_functionals(x: MomentFunctional, y: MomentFunctional) -> MomentFunctional:
    window = min(x.window, y.window)
    return MomentFunctional(
        tuple(x.moments[j] + y.moments[j] for j in range(window + 1)), x.lattice
    )


@dataclass(frozen=True)
class Certificate:
    phi2: DensePoly
    psi2: DensePoly
    pi: DensePoly
    rho: DensePoly
    b4_det: DensePoly
    pearson_residuals: tuple[Fraction, ...]
    link_residuals: tuple[Fraction, ...]
    window: int


def semiclassical_certificate(
    psi_list: list[DensePoly],
    phi_list: list[DensePoly],
    rho_list: list[DensePoly],
    u: MomentFunctional,
    v: MomentFunctional,
    lat: LatticeSpec,
) -> Certificate:
    """Build the semiclassical certificate from four consecutive relations.

    With lists indexed by n = 0..3 the determinant combinations are

        phi2 = phi[0] psi[1] - phi[1] psi[0]
        psi2 = rho[1] psi[0] - rho[0] psi[1]
        pi   = phi[1] psi[0] - phi[0] psi[1]
        rho  = phi[1] rho[0] - phi[0] rho[1]

    and the checker reports the moment residuals of phi2 D v - psi2 S v
    and pi u - rho S v, plus the order-four polynomial matrix determinant
    whose nonvanishing closes the argument for u.
    """
    if not (len(psi_list) >= 4 and len(phi_list) >= 4 and len(rho_list) >= 4):
        raise ValueError("certificate needs relation polynomials for n = 0..3")
    for n in range(3):
        cond = phi_list[n] * rho_list[n + 1] - phi_list[n + 1] * rho_list[n]
        if cond.is_zero():
            raise HypothesisFailure(
                f"phi/rho combination vanishes identically at n = {n}",
                assumption="phi-rho",
            )
    phi2 = phi_list[0] * psi_list[1] - phi_list[1] * psi_list[0]
    psi2 = rho_list[1] * psi_list[0] - rho_list[0] * psi_list[1]
    pi = phi_list[1] * psi_list[0] - phi_list[0] * psi_list[1]
    rho = phi_list[1] * rho_list[0] - phi_list[0] * rho_list[1]

    alpha = lat.alpha
    u1, _ = lat.u_polys()
    b4 = []
    for i in range(4):
        k_i = sx(rho_list[i], lat) - u1 * dx(rho_list[i], lat) * (1 / alpha)
        row = [
            u1 * dx(psi_list[i], lat) - sx(psi_list[i], lat) * alpha,
            sx(phi_list[i], lat) * alpha - u1 * (dx(phi_list[i], lat) - k_i),
            dx(phi_list[i], lat) + k_i * (2 * alpha**2 - 1),
            dx(rho_list[i], lat),
        ]
        b4.append(row)
    b4_det = _poly_det4(b4)
    if b4_det.is_zero():
        raise HypothesisFailure(
            "order-four matrix determinant vanishes identically", assumption="det-B4"
        )

    dv = functional_op("D", v)
    sv = functional_op("S", v)
    lhs = poly_mul(phi2, dv)
    rhs = poly_mul(psi2, sv)
    w1 = min(lhs.window, rhs.window)
    pearson_res = tuple(lhs.moments[j] - rhs.moments[j] for j in range(w1 + 1))

    lhs2 = poly_mul(pi, u)
    rhs2 = poly_mul(rho, sv)
    w2 = min(lhs2.window, rhs2.window)
    link_res = tuple(lhs2.moments[j] - rhs2.moments[j] for j in range(w2 + 1))
    return Certificate(phi2, psi2, pi, rho, b4_det, pearson_res, link_res, min(w1, w2))


def _poly_det4(mat: list[list[DensePoly]]) -> DensePoly:
    # cofactor expansion; 4x4 of small polynomials, done once per certificate
    def det2(a, b, c, d):
        return a * d - b * c

    def det3(m):
        return (
            m[0][0] * det2(m[1][1], m[1][2], m[2][1], m[2][2])
            - m[0][1] * det2(m[1][0], m[1][2], m[2][0], m[2][2])
            + m[0][2] * det2(m[1][0], m[1][1], m[2][0], m[2][1])
        )

    total = DensePoly.zero("z")
    for col in range(4):
        minor = [
            [mat[r][c] for c in range(4) if c != col] for r in range(1, 4)
        ]
        term = mat[0][col] * det3(minor)
        total = total + (term if col % 2 == 0 else -term)
    return total


# ---------------------------------------------------------------------------
# banded witness search

@dataclass(frozen=True)
class BandedSearchResult:
    witness: Optional[RelationWitness]
    transcript: tuple[str, ...]


def discover_banded(
    p_inst: OpsInstance,
    q_inst: OpsInstance,
    k: int,
    m: int,
    m_max: int,
    n_max_band: int,
    n_hi: int,
) -> BandedSearchResult:
    """Search for the smallest banded witness with M <= m_max, N <= n_max_band.

    For each candidate (M, N) ordered by M+N then M, solves the exact
    per-n systems

        sx(P_n^[k]) - Q_n^[m] = -sum_{j>=1} a_{j,n} sx(P_{n-j}^[k])
                               + sum_{j>=1} b_{j,n} Q_{n-j}^[m]

    for every n = 0..n_hi.  Coefficients multiplying vanished polynomials
    (n - j < 0) are set to 1 by convention.  A candidate is rejected when
    some n is infeasible or a corner coefficient vanishes; the transcript
    records every rejection.  Returns the first surviving witness or None.
    """
    if k < m or m < 0:
        raise ValueError("search requires k >= m >= 0")
    lat = p_inst.lattice
    p_fam = derived_family(p_inst, k)
    q_fam = derived_family(q_inst, m)
    need = n_hi + 1
    if len(p_fam) < need or len(q_fam) < need:
        raise ValueError("instances too shallow for the requested n range")
    sx_p = [sx(p, lat) for p in p_fam[:need]]
    transcript = []
    candidates = sorted(
        ((M, N) for M in range(m_max + 1) for N in range(n_max_band + 1)),
        key=lambda mn: (mn[0] + mn[1], mn[0]),
    )
    for M, N in candidates:
        a_tab, b_tab = {}, {}
        ok = True
        for n in range(n_hi + 1):
            target = q_fam[n] - sx_p[n]
            cols = []
            slots = []
            for j in range(1, M + 1):
                if n - j >= 0:
                    cols.append(sx_p[n - j])
                    slots.append(("a", j))
                else:
                    a_tab[(j, n)] = Fraction(1)  # vacuous term
            for j in range(1, N + 1):
                if n - j >= 0:
                    cols.append(-q_fam[n - j])
                    slots.append(("b", j))
                else:
                    b_tab[(j, n)] = Fraction(1)
            rows = n + 1  # the z^n row is 0 = 0 when alpha_n = 1, honest otherwise
            mat = [[col.coeff(d) for col in cols] for d in range(rows)]
            rhs = [target.coeff(d) for d in range(rows)]
            if cols:
                sol = linalg.solve(mat, rhs)
            else:
                sol = [] if all(x == 0 for x in rhs) else None
            if sol is None:
                transcript.append(f"(M={M}, N={N}): infeasible at n = {n}")
                ok = False
                break
            a_tab[(0, n)] = Fraction(1)
            b_tab[(0, n)] = Fraction(1)
            for (kind, j), val in zip(slots, sol):
                (a_tab if kind == "a" else b_tab)[(j, n)] = val
            if a_tab.get((M, n), Fraction(0)) == 0 or b_tab.get((N, n), Fraction(0)) == 0:
                transcript.append(f"(M={M}, N={N}): corner vanished at n = {n}")
                ok = False
                break
        if ok:
            witness = RelationWitness(M, N, k, m, a_tab, b_tab, n_hi)
            transcript.append(f"(M={M}, N={N}): witness found")
            return BandedSearchResult(witness, tuple(transcript))
    transcript.append("search exhausted: no banded witness")
    return BandedSearchResult(None, tuple(transcript))
