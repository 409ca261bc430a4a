"""Canonical point model and exact bounded-height enumeration.

An integral point is a pair of primitive lattices: a rank-1 lattice spanned by
a primitive linear form, and a rank-4 lattice of quadrics containing all
degree-1 multiples of that form.  A point is stored canonically as the
sign-normalized form together with the coset coordinates ``qbar`` of its
quadric in the quotient lattice, so two defining systems give equal HilbPoint
values exactly when they cut out the same pair of lattices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterator, Sequence

from .exactlin import as_matrix, gram_det2, saturate
from .lattice import (
    IntLattice,
    LinearForm,
    QuotientLattice,
    count_primitive_form,
    enumerate_form_le,
    min_form_value,
    quotient,
)


class PointValidationError(ValueError):
    """Input does not define an integral point."""


class QInSpanError(PointValidationError):
    """The quadric lies in the span of the degree-1 multiples of the form."""


class NonPrimitiveIdealError(PointValidationError):
    """The degree-2 lattice is not primitive (e.g. the X0, 2*X1^2 obstruction)."""


@lru_cache(maxsize=8)
def monomials(d: int) -> tuple[tuple[int, int, int], ...]:
    """Degree-d monomial exponents in descending lexicographic order."""
    out = []
    for i in range(d, -1, -1):
        for j in range(d - i, -1, -1):
            out.append((i, j, d - i - j))
    return tuple(out)


def dim_forms(d: int) -> int:
    return (d + 2) * (d + 1) // 2


def poly_mul(p: Sequence[int], dp: int, q: Sequence[int], dq: int) -> tuple[int, ...]:
    """Multiply coefficient vectors over the canonical monomial bases."""
    index = {m: k for k, m in enumerate(monomials(dp + dq))}
    out = [0] * len(index)
    for cp, (i1, j1, k1) in zip(p, monomials(dp), strict=True):
        if cp == 0:
            continue
        for cq, (i2, j2, k2) in zip(q, monomials(dq), strict=True):
            if cq:
                out[index[(i1 + i2, j1 + j2, k1 + k2)]] += cp * cq
    return tuple(out)


def eval_quadratic(coeffs: Sequence[int], v: Sequence[int]) -> int:
    """Evaluate a quadric (six canonical coefficients) at an integer triple."""
    x, y, z = v
    c0, c1, c2, c3, c4, c5 = coeffs
    return c0 * x * x + c1 * x * y + c2 * x * z + c3 * y * y + c4 * y * z + c5 * z * z


def _sign_canonical(vec: Sequence[int]) -> tuple[int, ...]:
    for v in vec:
        if v:
            return tuple(vec) if v > 0 else tuple(-x for x in vec)
    return tuple(vec)


@dataclass(frozen=True)
class HilbPoint:
    """Canonical representative of an integral point.

    ``qbar`` holds the coset coordinates of the quadric in the lift basis of
    ``quotient(ell)``; it is primitive and sign-canonical, and ``covol2_I2``
    caches the exact squared covolume of the degree-2 ideal lattice.
    """

    ell: LinearForm
    qbar: tuple[int, int, int]
    covol2_I2: int

    def __post_init__(self) -> None:
        if self.qbar == (0, 0, 0):
            raise QInSpanError("q in span")
        if gcd(gcd(self.qbar[0], self.qbar[1]), self.qbar[2]) != 1:
            raise NonPrimitiveIdealError("non-primitive Lambda_2")
        if self.qbar != _sign_canonical(self.qbar):
            raise ValueError("qbar must be sign-canonical")

    @property
    def covol2_I1(self) -> int:
        return self.ell.norm2

    def quotient(self) -> QuotientLattice:
        return quotient(self.ell)

    def q_lift(self) -> tuple[int, ...]:
        """Canonical monomial-coordinate lift of the quadric."""
        return self.quotient().lift(self.qbar)

    def record(self) -> dict:
        """Serialization record (consumed by the CLI point emitter)."""
        return {
            "ell": self.ell.triple,
            "qbar": self.qbar,
            "q_lift": self.q_lift(),
            "covol2_I1": self.covol2_I1,
            "covol2_I2": self.covol2_I2,
        }


def canonicalize(ell_raw: Sequence[int], q: Sequence[int]) -> HilbPoint:
    """Build the canonical point from a raw linear form and quadric.

    The form is divided by its content and sign-normalized; the quadric is
    reduced modulo the degree-1 multiples of the form to coset coordinates.
    Raises QInSpanError if the quadric is a multiple of the form, and
    NonPrimitiveIdealError when the resulting degree-2 lattice is not
    primitive (the mod-p obstruction).
    """
    if len(ell_raw) != 3 or len(q) != 6:
        raise PointValidationError("expected a linear triple and six quadric coefficients")
    ell = LinearForm.from_raw(*ell_raw)
    quo = quotient(ell)
    qbar = quo.coset_coords(q)
    if qbar == (0, 0, 0):
        raise QInSpanError("q in span")
    g = gcd(gcd(qbar[0], qbar[1]), qbar[2])
    if g != 1:
        raise NonPrimitiveIdealError("non-primitive Lambda_2")
    qbar = _sign_canonical(qbar)
    return HilbPoint(ell=ell, qbar=qbar, covol2_I2=quo.covol2_with(qbar))


def ideal_lattice(z: HilbPoint, e: int) -> IntLattice:
    """Saturated lattice of degree-e forms in the point's ideal.

    Rank is dim(degree-e forms) - 2 for every e >= 1.
    """
    if e < 1:
        raise ValueError("degree must be >= 1")
    a, b, c = z.ell.triple
    if e == 1:
        basis = as_matrix([(a, b, c)])
        return IntLattice(ambient_dim=3, basis=basis, covol2=gram_det2(basis))
    ell_coeffs = (a, b, c)
    q_coeffs = z.q_lift()
    gens = [poly_mul(ell_coeffs, 1, _monomial_vec(e - 1, k), e - 1) for k in range(dim_forms(e - 1))]
    if e >= 2:
        gens += [poly_mul(q_coeffs, 2, _monomial_vec(e - 2, k), e - 2) for k in range(dim_forms(e - 2))]
    basis = saturate(gens)
    return IntLattice(ambient_dim=dim_forms(e), basis=basis, covol2=gram_det2(basis))


@lru_cache(maxsize=64)
def _monomial_vec(d: int, k: int) -> tuple[int, ...]:
    vec = [0] * dim_forms(d)
    vec[k] = 1
    return tuple(vec)


def fiber_count(ell: LinearForm, bound: float | Fraction | int) -> int:
    """Number of degree-2 primitive lattices over the form with covolume <= bound."""
    y = Fraction(bound)
    if y <= 0:
        return 0
    quo = quotient(ell)
    t = y * y  # threshold on the exact squared covolume, an integer form value
    scaled = [[t.denominator * x for x in row] for row in quo.gram_int]
    n = count_primitive_form(scaled, t.numerator, strict=False)
    assert n % 2 == 0
    return n // 2


# ---------------------------------------------------------------------------
# bounded-height enumeration
# ---------------------------------------------------------------------------


def _height_exponents(s: Fraction, t: Fraction) -> tuple[int, int, int]:
    """Clear denominators: H^(2L) = covol2_I1^a * covol2_I2^b with b > 0."""
    from math import lcm

    big_l = lcm(s.denominator, t.denominator)
    a = int(big_l * (s - t))
    b = int(big_l * t)
    return big_l, a, b


def max_covol2_I2(cv1_sq: int, s: Fraction, t: Fraction, bound: Fraction) -> int:
    """Largest integer k with covol2_I1^(s-t) * k^t <= bound^2 (exact)."""
    big_l, a, b = _height_exponents(s, t)
    rhs = bound ** (2 * big_l)
    base = Fraction(cv1_sq) ** a

    def ok(k: int) -> bool:
        return base * Fraction(k) ** b <= rhs

    if not ok(1):
        return 0
    hi = 1
    while ok(hi * 2):
        hi *= 2
    lo = hi
    hi = hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def m_cutoff(s: Fraction, t: Fraction, bound: Fraction) -> int:
    """Rigorous cutoff: forms with max-coordinate beyond this bound have
    every point of height > bound.

    Uses covol2_I2 >= covol2_product * lambda_1^2 >= (2/3)M^6 / (49 M^4)
    = (2/147) M^2 and M^2 <= covol2_I1 <= 3 M^2, so
    H^2 >= min(1, 3^(s-t)) * (2/147)^t * M^(2s).
    """
    big_l, a, b = _height_exponents(s, t)
    rhs = bound ** (2 * big_l)
    k_pow = Fraction(2, 147) ** b
    if a < 0:
        k_pow *= Fraction(3) ** a
    exp = int(2 * big_l * s)

    def ok(m: int) -> bool:
        return k_pow * Fraction(m) ** exp <= rhs

    if not ok(1):
        return 0
    hi = 1
    while ok(hi * 2):
        hi *= 2
    lo = hi
    hi = hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def canonical_forms(m_max: int) -> list[LinearForm]:
    """All primitive sign-canonical forms with max |coordinate| <= m_max, in
    lexicographic order of (a, b, c)."""
    out = []
    rng = range(-m_max, m_max + 1)
    for a in range(0, m_max + 1):
        bs = rng if a > 0 else range(0, m_max + 1)
        for b in bs:
            if a == 0 and b == 0:
                if m_max >= 1:
                    out.append(LinearForm(0, 0, 1))
                continue
            for c in rng:
                if gcd(gcd(a, b), c) == 1:
                    out.append(LinearForm(a, b, c))
    out.sort(key=lambda f: f.triple)
    return out


def fiber_points(
    ell: LinearForm, s: Fraction, t: Fraction, bound: Fraction
) -> list[HilbPoint]:
    """All points over a fixed form with height <= bound, qbar-lexicographic."""
    quo = quotient(ell)
    t_max = max_covol2_I2(ell.norm2, s, t, bound)
    if t_max < 1:
        return []
    m0 = min_form_value(quo)
    # cutoff premise (first-minimum lower bound), asserted on every fiber
    assert m0 * 49 * ell.M**4 >= quo.covol2_product
    if t_max < m0:
        return []
    pts = []
    for x in enumerate_form_le(quo.gram_int, t_max):
        if gcd(gcd(x[0], x[1]), x[2]) != 1:
            continue
        if _sign_canonical(x) != x:
            continue
        pts.append(HilbPoint(ell=ell, qbar=x, covol2_I2=quo.covol2_with(x)))
    pts.sort(key=lambda p: p.qbar)
    return pts


def fiber_point_count(ell: LinearForm, s: Fraction, t: Fraction, bound: Fraction) -> int:
    """Exact |fiber_points| without materializing the points."""
    quo = quotient(ell)
    t_max = max_covol2_I2(ell.norm2, s, t, bound)
    if t_max < 1:
        return 0
    m0 = min_form_value(quo)
    assert m0 * 49 * ell.M**4 >= quo.covol2_product
    if t_max < m0:
        return 0
    n = count_primitive_form(quo.gram_int, t_max, strict=False)
    assert n % 2 == 0
    return n // 2


def enumerate_points(
    s: float | Fraction,
    t: float | Fraction,
    bound: float | Fraction,
) -> Iterator[HilbPoint]:
    """Yield every point of height at most ``bound`` exactly once.

    Order is deterministic: forms lexicographic, then qbar lexicographic.
    Heights use the non-strict convention (<= bound) with exact comparisons;
    s and t must be positive (the point count is infinite otherwise).
    """
    s = Fraction(s)
    t = Fraction(t)
    bound = Fraction(bound)
    if s <= 0 or t <= 0:
        raise ValueError("s and t must be positive")
    if bound < 1:
        return
    m_max = m_cutoff(s, t, bound)
    for ell in canonical_forms(m_max):
        yield from fiber_points(ell, s, t, bound)
