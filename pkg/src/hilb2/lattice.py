"""Product and quotient lattices attached to a primitive linear form.

For a primitive integer form l = a*X0 + b*X1 + c*X2 the degree-2 polynomial
lattice Z^6 (monomial order X0^2, X0X1, X0X2, X1^2, X1X2, X2^2) contains the
rank-3 product lattice spanned by X0*l, X1*l, X2*l.  This module computes

  * the exact squared covolume of that product lattice (both from the Gram
    determinant and from the closed-form degree-6 polynomial in a, b, c),
  * the rank-3 quotient Z^6 / (product lattice) with the inner product
    inherited from the orthogonal complement, held exactly as an *integer*
    Gram matrix scaled by the product covolume,
  * exact successive minima with certified witnesses,
  * exact counts of primitive vectors in balls (Moebius + interval counting),
  * exact squared distances to the real span of the product lattice.

All lattice arithmetic is exact; floats appear only in gon_main_term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt
from typing import Iterator, Sequence

from .constants import PI, ZETA3
from .exactlin import (
    Matrix,
    Row,
    as_matrix,
    complement_basis,
    det_bareiss,
    dot,
    gram_det2,
    gram_matrix,
    kernel_basis,
    mat_vec,
    unimodular_inverse,
)


@dataclass(frozen=True)
class LinearForm:
    """Primitive, sign-canonical integer linear form a*X0 + b*X1 + c*X2."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        t = (self.a, self.b, self.c)
        if t == (0, 0, 0):
            raise ValueError("zero form")
        if gcd(gcd(self.a, self.b), self.c) != 1:
            raise ValueError("form must be primitive")
        first = next(x for x in t if x != 0)
        if first < 0:
            raise ValueError("form must be sign-canonical (first nonzero coordinate positive)")

    @classmethod
    def from_raw(cls, a: int, b: int, c: int) -> "LinearForm":
        """Divide out the content and fix the sign of an arbitrary nonzero triple."""
        if (a, b, c) == (0, 0, 0):
            raise ValueError("zero form")
        g = gcd(gcd(a, b), c)
        a, b, c = a // g, b // g, c // g
        first = next(x for x in (a, b, c) if x != 0)
        if first < 0:
            a, b, c = -a, -b, -c
        return cls(a, b, c)

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def M(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c))

    @property
    def norm2(self) -> int:
        """Squared covolume of the rank-1 lattice spanned by the form."""
        return self.a * self.a + self.b * self.b + self.c * self.c


@dataclass(frozen=True)
class IntLattice:
    """Integer sublattice given by an independent row basis, with cached covol^2."""

    ambient_dim: int
    basis: Matrix
    covol2: int


@dataclass(frozen=True)
class SuccessiveMinima:
    lam1_sq: Fraction
    lam2_sq: Fraction
    lam3_sq: Fraction
    witnesses: tuple[Row, Row, Row]


def product_covol2_formula(a: int, b: int, c: int) -> int:
    """Closed-form squared covolume of span{X0*l, X1*l, X2*l}."""
    a2, b2, c2 = a * a, b * b, c * c
    return (
        a2**3
        + 2 * b2 * a2**2
        + 2 * c2 * a2**2
        + 2 * b2**2 * a2
        + 5 * c2 * b2 * a2
        + 2 * c2**2 * a2
        + b2**3
        + 2 * c2 * b2**2
        + 2 * c2**2 * b2
        + c2**3
    )


def product_basis(ell: LinearForm) -> Matrix:
    a, b, c = ell.triple
    return as_matrix([
        (a, b, c, 0, 0, 0),
        (0, a, 0, b, c, 0),
        (0, 0, a, 0, b, c),
    ])


def product_lattice(ell: LinearForm) -> IntLattice:
    basis = product_basis(ell)
    return IntLattice(ambient_dim=6, basis=basis, covol2=gram_det2(basis))


def _adjugate3(m: Sequence[Sequence[int]]) -> list[list[int]]:
    (a, b, c), (d, e, f), (g, h, i) = m
    return [
        [e * i - f * h, c * h - b * i, b * f - c * e],
        [f * g - d * i, a * i - c * g, c * d - a * f],
        [d * h - e * g, b * g - a * h, a * e - b * d],
    ]


@dataclass(frozen=True)
class QuotientLattice:
    """Z^6 / (degree-1 multiples of the form), with its projected inner product.

    ``gram_int`` is covol2_product * gram, an exact positive definite integer
    matrix: the squared covolume of the rank-4 lattice generated by the
    product lattice and a coset vector u is exactly u^T gram_int u.
    ``lift_basis`` holds the three canonical coset representatives in Z^6.
    """

    source: LinearForm
    lift_basis: Matrix
    gram_int: Matrix
    covol2_product: int

    @cached_property
    def basis_inverse(self) -> Matrix:
        """Inverse of the 6x6 row matrix [product basis; lift basis]."""
        full = as_matrix(list(product_basis(self.source)) + list(self.lift_basis))
        return as_matrix(unimodular_inverse(full))

    @property
    def rank(self) -> int:
        return 3

    @property
    def covol2(self) -> Fraction:
        return Fraction(1, self.covol2_product)

    @property
    def gram(self) -> tuple[tuple[Fraction, ...], ...]:
        d = self.covol2_product
        return tuple(tuple(Fraction(x, d) for x in row) for row in self.gram_int)

    def coset_coords(self, vec6: Sequence[int]) -> tuple[int, int, int]:
        """Coordinates of the coset of ``vec6`` in the lift basis."""
        coeffs = [dot(vec6, col) for col in zip(*self.basis_inverse)]
        return (coeffs[3], coeffs[4], coeffs[5])

    def lift(self, coords: Sequence[int]) -> Row:
        """Canonical monomial-coordinate lift of a coset vector."""
        u1, u2, u3 = coords
        w1, w2, w3 = self.lift_basis
        return tuple(u1 * x + u2 * y + u3 * z for x, y, z in zip(w1, w2, w3))

    def covol2_with(self, coords: Sequence[int]) -> int:
        """Squared covolume of product lattice + Z*coset; equals x^T gram_int x."""
        return _form_value(self.gram_int, coords)

    def norm_sq(self, coords: Sequence[int]) -> Fraction:
        return Fraction(self.covol2_with(coords), self.covol2_product)


def _form_value(g: Sequence[Sequence[int]], x: Sequence[int]) -> int:
    x0, x1, x2 = x
    return (
        g[0][0] * x0 * x0
        + g[1][1] * x1 * x1
        + g[2][2] * x2 * x2
        + 2 * (g[0][1] * x0 * x1 + g[0][2] * x0 * x2 + g[1][2] * x1 * x2)
    )


@lru_cache(maxsize=4096)
def _quotient_cached(a: int, b: int, c: int) -> QuotientLattice:
    ell = LinearForm(a, b, c)
    p = product_basis(ell)
    g3 = gram_matrix(p)
    covol2p = det_bareiss(g3)
    adj = _adjugate3(g3)
    lift = complement_basis(p)
    pw = [mat_vec(p, w) for w in lift]
    gram_int = []
    for i in range(3):
        row = []
        for j in range(3):
            proj = dot(mat_vec(adj, pw[i]), pw[j])
            row.append(covol2p * dot(lift[i], lift[j]) - proj)
        gram_int.append(tuple(row))
    q = QuotientLattice(
        source=ell,
        lift_basis=lift,
        gram_int=as_matrix(gram_int),
        covol2_product=covol2p,
    )
    # exact sanity: det(gram_int) = covol2p^2, i.e. covol(quotient) = 1/covol(product)
    assert det_bareiss(q.gram_int) == covol2p * covol2p
    return q


def quotient(ell: LinearForm) -> QuotientLattice:
    return _quotient_cached(*ell.triple)


# ---------------------------------------------------------------------------
# exact counting and enumeration for positive definite integer ternary forms
# ---------------------------------------------------------------------------


def _nearest_div(p: int, q: int) -> int:
    """Nearest integer to p/q for q > 0 (ties toward +infinity)."""
    return (2 * p + q) // (2 * q)


def reduce_gram(g: Matrix) -> tuple[Matrix, Matrix]:
    """Greedy reduction of a PD integer 3x3 Gram matrix.

    Returns (g_reduced, u) with g_reduced = u^T g u, u unimodular, diagonal
    nondecreasing.  The reduced diagonal tightly brackets the successive
    minima in practice; correctness downstream never relies on optimality
    (minima are certified by exact counts).
    """
    gm = [list(row) for row in g]
    u = [[1 if i == j else 0 for j in range(3)] for i in range(3)]

    def addmul(j: int, i: int, k: int) -> None:
        # b_j <- b_j + k b_i
        for r in range(3):
            u[r][j] += k * u[r][i]
        for r in range(3):
            gm[r][j] += k * gm[r][i]
        for r in range(3):
            gm[j][r] += k * gm[i][r]

    def swap(i: int, j: int) -> None:
        for r in range(3):
            u[r][i], u[r][j] = u[r][j], u[r][i]
        gm[i], gm[j] = gm[j], gm[i]
        for r in range(3):
            gm[r][i], gm[r][j] = gm[r][j], gm[r][i]

    for _ in range(10_000):
        changed = False
        # keep diagonal sorted
        for i, j in ((0, 1), (1, 2), (0, 1)):
            if gm[i][i] > gm[j][j]:
                swap(i, j)
                changed = True
        # pairwise size reduction
        for i, j in ((0, 1), (0, 2), (1, 2)):
            k = _nearest_div(gm[i][j], gm[i][i])
            if k and gm[j][j] - 2 * k * gm[i][j] + k * k * gm[i][i] < gm[j][j]:
                addmul(j, i, -k)
                changed = True
        # greedy 3-dimensional step on the longest vector
        best = None
        for e1 in (-1, 0, 1):
            for e2 in (-1, 0, 1):
                if e1 == e2 == 0:
                    continue
                val = (
                    gm[2][2]
                    + e1 * e1 * gm[0][0]
                    + e2 * e2 * gm[1][1]
                    + 2 * (e1 * gm[0][2] + e2 * gm[1][2] + e1 * e2 * gm[0][1])
                )
                if val < gm[2][2] and (best is None or val < best[0]):
                    best = (val, e1, e2)
        if best is not None:
            _, e1, e2 = best
            if e1:
                addmul(2, 0, e1)
            if e2:
                addmul(2, 1, e2)
            changed = True
        if not changed:
            break
    else:  # pragma: no cover - reduction always terminates quickly
        raise AssertionError("gram reduction failed to terminate")
    return as_matrix(gm), as_matrix(u)


def count_form_le(g: Sequence[Sequence[int]], t: int) -> int:
    """#{x in Z^3 : x^T g x <= t}, including x = 0, by exact interval counting."""
    if t < 0:
        return 0
    a = g[0][0]
    a2 = a * g[1][1] - g[0][1] ** 2
    b2 = a * g[1][2] - g[0][1] * g[0][2]
    c2 = a * g[2][2] - g[0][2] ** 2
    detg = det_bareiss(g)
    # x3 range: x3^2 * det(g) <= t * det(top-left 2x2 block)
    m3 = isqrt((t * a2) // detg)
    total = 0
    at = a * t
    adet = a * detg
    for x3 in range(-m3, m3 + 1):
        d2 = a2 * at - x3 * x3 * adet
        if d2 < 0:
            continue
        s2 = isqrt(d2)
        bb = b2 * x3
        lo2 = -((bb + s2) // a2)
        hi2 = (s2 - bb) // a2
        for x2 in range(lo2, hi2 + 1):
            beta = g[0][1] * x2 + g[0][2] * x3
            rest = g[1][1] * x2 * x2 + 2 * g[1][2] * x2 * x3 + g[2][2] * x3 * x3
            d1 = a * t - a * rest + beta * beta
            if d1 < 0:
                continue
            s1 = isqrt(d1)
            total += (s1 - beta) // a + ((s1 + beta) // a) + 1
    return total


def count_form_nonzero(g: Sequence[Sequence[int]], t: int, strict: bool) -> int:
    """#{x != 0 : x^T g x <= t} (or < t when strict)."""
    bound = t - 1 if strict else t
    if bound < 0:
        return 0
    return count_form_le(g, bound) - 1


def count_primitive_form(g: Sequence[Sequence[int]], t: int, strict: bool) -> int:
    """#{x != 0 primitive : x^T g x <= t (or < t)}, by Moebius inversion."""
    bound = t - 1 if strict else t
    if bound < 0:
        return 0
    total = 0
    d = 1
    mu = _moebius_upto(isqrt(bound // min(g[i][i] for i in range(3))) + 1 if bound else 1)
    while True:
        sub = bound // (d * d)
        n = count_form_le(g, sub) - 1 if sub >= 0 else 0
        if n == 0:
            break
        if d < len(mu):
            m = mu[d]
        else:  # pragma: no cover - sieve always long enough by construction
            m = _moebius_single(d)
        if m:
            total += m * n
        d += 1
    return total


def _moebius_upto(n: int) -> list[int]:
    mu = [0] * (n + 1)
    if n >= 1:
        mu[1] = 1
    primes: list[int] = []
    is_comp = [False] * (n + 1)
    for i in range(2, n + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if i * p > n:
                break
            is_comp[i * p] = True
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    return mu


def _moebius_single(n: int) -> int:
    res = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            res = -res
        d += 1
    if n > 1:
        res = -res
    return res


def enumerate_form_le(g: Sequence[Sequence[int]], t: int) -> Iterator[Row]:
    """Yield every nonzero x in Z^3 with x^T g x <= t (both signs)."""
    if t < 0:
        return
    a = g[0][0]
    a2 = a * g[1][1] - g[0][1] ** 2
    b2 = a * g[1][2] - g[0][1] * g[0][2]
    detg = det_bareiss(g)
    m3 = isqrt((t * a2) // detg)
    at = a * t
    adet = a * detg
    for x3 in range(-m3, m3 + 1):
        d2 = a2 * at - x3 * x3 * adet
        if d2 < 0:
            continue
        s2 = isqrt(d2)
        bb = b2 * x3
        lo2 = -((bb + s2) // a2)
        hi2 = (s2 - bb) // a2
        for x2 in range(lo2, hi2 + 1):
            beta = g[0][1] * x2 + g[0][2] * x3
            rest = g[1][1] * x2 * x2 + 2 * g[1][2] * x2 * x3 + g[2][2] * x3 * x3
            d1 = a * t - a * rest + beta * beta
            if d1 < 0:
                continue
            s1 = isqrt(d1)
            lo1 = -((beta + s1) // a)
            hi1 = (s1 - beta) // a
            for x1 in range(lo1, hi1 + 1):
                if x1 or x2 or x3:
                    yield (x1, x2, x3)


def _is_canonical_sign(x: Sequence[int]) -> bool:
    for v in x:
        if v:
            return v > 0
    return False


# ---------------------------------------------------------------------------
# successive minima with exact certificates
# ---------------------------------------------------------------------------


def _polar(g: Sequence[Sequence[int]], x: Sequence[int], y: Sequence[int]) -> int:
    return sum(g[i][j] * x[i] * y[j] for i in range(3) for j in range(3))


def _count_line_lt(l1: int, t: int) -> int:
    """#{k != 0 : k^2 * l1 < t} for the line through a vector of form value l1."""
    if t <= l1:
        return 0
    return 2 * isqrt((t - 1) // l1)


def _count_plane_lt(g2: Sequence[Sequence[int]], t: int) -> int:
    """#{(k,l) != 0 : [k,l] g2 [k,l]^T < t} for a PD integer 2x2 Gram matrix."""
    bound = t - 1
    if bound < 0:
        return 0
    a, b = g2[0][0], g2[0][1]
    c = g2[1][1]
    det2 = a * c - b * b
    ml = isqrt((bound * a) // det2)
    total = 0
    for l in range(-ml, ml + 1):
        d = a * bound - l * l * det2
        if d < 0:
            continue
        s = isqrt(d)
        bl = b * l
        total += (s - bl) // a + ((s + bl) // a) + 1
    return total - 1


def _minima_from_candidates(cands: list[tuple[int, Row]]) -> tuple[list[int], list[Row]] | None:
    """Greedy independent triple of minimal form values from (value, x) pairs
    sorted by value; independence of the third witness is tested against the
    plane normal of the first two."""
    vals: list[int] = []
    wits: list[Row] = []
    normal: Row | None = None
    for val, x in cands:
        if not wits:
            wits.append(x)
            vals.append(val)
        elif normal is None:
            w = wits[0]
            cr = (
                w[1] * x[2] - w[2] * x[1],
                w[2] * x[0] - w[0] * x[2],
                w[0] * x[1] - w[1] * x[0],
            )
            if cr != (0, 0, 0):
                wits.append(x)
                vals.append(val)
                normal = cr
        elif normal[0] * x[0] + normal[1] * x[1] + normal[2] * x[2] != 0:
            wits.append(x)
            vals.append(val)
            return vals, wits
    return None


@lru_cache(maxsize=8)
def _box_vectors_canonical(k: int) -> tuple[Row, ...]:
    out = []
    for x0 in range(-k, k + 1):
        for x1 in range(-k, k + 1):
            for x2 in range(-k, k + 1):
                if _is_canonical_sign((x0, x1, x2)):
                    out.append((x0, x1, x2))
    return tuple(out)


def _certify_minima(g: Sequence[Sequence[int]], vals: list[int], wits: list[Row]) -> bool:
    l1, l2, l3 = vals
    if count_form_nonzero(g, l1, strict=True) != 0:
        return False
    if count_form_nonzero(g, l2, strict=True) != _count_line_lt(l1, l2):
        return False
    w1, w2 = wits[0], wits[1]
    g2 = [
        [_form_value(g, w1), _polar(g, w1, w2)],
        [_polar(g, w1, w2), _form_value(g, w2)],
    ]
    if count_form_nonzero(g, l3, strict=True) != _count_plane_lt(g2, l3):
        return False
    return True


def successive_minima(q: QuotientLattice) -> SuccessiveMinima:
    """Exact successive minima of the quotient lattice with witness cosets.

    Candidate short vectors come from a reduced basis; the claimed minima are
    then *certified* by exact interval counts (no nonzero vector below the
    first minimum, only multiples of the first witness below the second, only
    plane vectors below the third).  If certification fails the search bound
    is enlarged until it succeeds, so the result never depends on the quality
    of the reduction.
    """
    g = q.gram_int
    gred, u = reduce_gram(g)
    # fast path: a small coefficient box around the reduced basis almost
    # always contains the minima witnesses; certification keeps it honest
    cands = []
    for x in _box_vectors_canonical(2):
        cands.append((_form_value(gred, x), x))
    cands.sort()
    got = _minima_from_candidates(cands)
    done = False
    if got is not None and _certify_minima(gred, *got):
        vals, wits = got
        done = True
    if not done:
        bound = max(gred[i][i] for i in range(3))
        while True:
            cands = []
            for x in enumerate_form_le(gred, bound):
                if _is_canonical_sign(x):
                    cands.append((_form_value(gred, x), x))
            cands.sort()
            got = _minima_from_candidates(cands)
            if got is not None:
                vals, wits = got
                if _certify_minima(gred, vals, wits):
                    break
            bound *= 2
    d = q.covol2_product
    wits_orig = tuple(tuple(dot(u[r], y) for r in range(3)) for y in wits)
    return SuccessiveMinima(
        lam1_sq=Fraction(vals[0], d),
        lam2_sq=Fraction(vals[1], d),
        lam3_sq=Fraction(vals[2], d),
        witnesses=wits_orig,  # type: ignore[arg-type]
    )


def min_form_value(q: QuotientLattice) -> int:
    """Minimal nonzero value of gram_int, i.e. lambda_1^2 * covol2_product."""
    gred, _ = reduce_gram(q.gram_int)
    bound = min(gred[i][i] for i in range(3))
    best = bound
    for x in enumerate_form_le(gred, bound):
        v = _form_value(gred, x)
        if v < best:
            best = v
    return best


# ---------------------------------------------------------------------------
# public counting operations
# ---------------------------------------------------------------------------


def count_primitive(q: QuotientLattice, radius: float | Fraction | int) -> int:
    """Number of primitive coset vectors of norm strictly below ``radius``.

    Both v and -v are counted, 0 is excluded; comparisons are exact (the
    radius is converted to an exact Fraction).
    """
    r = Fraction(radius)
    if r <= 0:
        return 0
    t = r * r * q.covol2_product
    scaled = [[t.denominator * x for x in row] for row in q.gram_int]
    return count_primitive_form(scaled, t.numerator, strict=True)


def count_primitive_le(q: QuotientLattice, norm2_bound: Fraction) -> int:
    """Primitive coset vectors with squared norm <= bound (both signs counted)."""
    t = Fraction(norm2_bound) * q.covol2_product
    if t < 0:
        return 0
    scaled = [[t.denominator * x for x in row] for row in q.gram_int]
    return count_primitive_form(scaled, t.numerator, strict=False)


def gon_main_term(q: QuotientLattice, radius: float) -> float:
    """Main term (4 pi / 3 zeta(3)) R^3 / covol for the primitive-vector count."""
    covol = 1.0 / (q.covol2_product ** 0.5)
    return (4.0 * PI / (3.0 * ZETA3)) * radius**3 / covol


@lru_cache(maxsize=4096)
def _kernel_basis_cached(a: int, b: int, c: int) -> tuple[Row, Row]:
    return kernel_basis(a, b, c)


def kernel_basis_of(ell: LinearForm) -> tuple[Row, Row]:
    """Oriented HNF basis (e, f) of the integer kernel of the form."""
    return _kernel_basis_cached(*ell.triple)


def dist_to_span(x: Sequence[int], ell: LinearForm) -> Fraction:
    """Exact squared Euclidean distance from x in Z^6 to the real span of
    {X0*l, X1*l, X2*l}."""
    if len(x) != 6:
        raise ValueError("expected a vector in Z^6")
    p = product_basis(ell)
    g3 = gram_matrix(p)
    d = det_bareiss(g3)
    adj = _adjugate3(g3)
    px = mat_vec(p, x)
    proj = dot(mat_vec(adj, px), px)
    return Fraction(dot(x, x) * d - proj, d)
