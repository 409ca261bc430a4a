from fractions import Fraction

import pytest

from hilb2.asymptotics import (
    CountQuery,
    bm_exponents,
    constant_c,
    convergence_report,
    count_Nst,
    le_count,
    le_count_detailed,
    le_rudulier_prediction,
)
from hilb2.hilb import enumerate_points
from hilb2.oracles import oracle_count_points


def test_constant_first_shell_value():
    # 26 primitive triples at M = 1: axes 6*1, face diagonals 12*2^-1.5/6,
    # space diagonals 8*3^-1.5/20, scaled by pi/(3 zeta(3))
    est = constant_c(2.0, 1)
    assert abs(est.partial - 5.910102161783023) < 1e-12
    assert est.tail_bound > 0


def test_constant_brackets_are_nested():
    e10 = constant_c(2.0, 10)
    e20 = constant_c(2.0, 20)
    assert e10.partial <= e20.partial
    assert e20.hi <= e10.hi + 1e-12
    assert e20.lo <= e20.hi


def test_constant_validation():
    with pytest.raises(ValueError):
        constant_c(0.0, 10)
    with pytest.raises(ValueError):
        constant_c(2.0, 0)


def test_count_query_validation():
    with pytest.raises(ValueError):
        CountQuery(Fraction(0), Fraction(1), Fraction(2))
    with pytest.raises(ValueError):
        count_Nst(2, 0, 5)


def test_count_below_floor():
    assert count_Nst(2, 1, Fraction(99, 100)) == 0


def test_count_matches_enumeration():
    for (s, t, b) in ((2, 1, 8), (3, 1, 6), (3, 2, 4)):
        assert count_Nst(s, t, b) == len(list(enumerate_points(s, t, b)))


def test_count_matches_oracle_small():
    for (s, t, b) in ((2, 1, 5), (3, 1, 3), (3, 2, 3)):
        assert count_Nst(s, t, b) == oracle_count_points(s, t, b)


def test_fiber_sum_identity():
    # the global count is the sum over forms of per-fiber counts at the
    # separated threshold covol(L2) <= B^(1/t) covol(L1)^(1-s/t); for
    # (s, t) = (2, 1) that is covol2(L2) * covol2(L1) <= B^2 exactly
    from hilb2.hilb import canonical_forms, m_cutoff
    from hilb2.lattice import count_primitive_form, quotient

    b = 8
    total = 0
    for f in canonical_forms(m_cutoff(Fraction(2), Fraction(1), Fraction(b))):
        q = quotient(f)
        cv1 = f.norm2
        scaled = [[cv1 * x for x in row] for row in q.gram_int]
        n = count_primitive_form(scaled, b * b, strict=False)
        assert n % 2 == 0
        total += n // 2
    assert total == count_Nst(2, 1, b)


def test_count_scaling_law():
    assert count_Nst(2, 1, 7) == count_Nst(4, 2, 49)
    assert count_Nst(3, 2, 4) == count_Nst(6, 4, 16)
    assert count_Nst(2, 1, 7) == count_Nst(6, 3, 343)


def test_count_threads_invariant():
    assert count_Nst(2, 1, 10, threads=2) == count_Nst(2, 1, 10, threads=1)


def test_bm_exponents():
    assert bm_exponents(2, 1) == (Fraction(3), 0)
    assert bm_exponents(4, 2) == (Fraction(3, 2), 0)
    assert bm_exponents(3, 1) == (Fraction(3), 0)
    with pytest.raises(ValueError):
        bm_exponents(-1, 1)
    with pytest.raises(ValueError):
        bm_exponents(1, 0)


def test_convergence_report_shape_and_regime():
    rep = convergence_report(2, 1, [5, 10], const_m_max=20)
    assert rep["regime"] == "asymptotic"
    assert [row["B"] for row in rep["rows"]] == [5.0, 10.0]
    for row in rep["rows"]:
        assert row["N"] == count_Nst(2, 1, Fraction(row["B"]).limit_denominator())
        assert row["c_low"] <= row["c_high"]
        assert row["envelope"] > 0
    # s/t <= 1 is labeled as the upper-bound regime (no counting requested)
    rep = convergence_report(1, 1, [], const_m_max=10)
    assert rep["regime"] == "upper-bound regime"


def test_le_count_small_values():
    # B = 1: the three unordered pairs of coordinate points
    assert le_count(1) == 3
    rep = le_count_detailed(8)
    assert rep == {
        "schema_version": 1,
        "B": 8.0,
        "split": 48,
        "nonsplit": 9,
        "total": 57,
        "min_ratio": 1.0,
    }
    assert le_count(27) == 271


def test_le_count_below_one():
    assert le_count(Fraction(1, 2)) == 0


def test_le_count_nonreduced_excluded():
    # the pencil member at a=1 is nonreduced with anticanonical height
    # 14^3 = 2744; its fiber worker must skip it even when the bound passes it
    from fractions import Fraction as F

    from hilb2.asymptotics import _le_region_worker
    from hilb2.heights import classify, le_height2, PointClass
    from hilb2.verify import za_point

    za = za_point(1)
    assert classify(za) is PointClass.NONREDUCED
    b = F(2800)
    assert le_height2(za) ** 3 <= b * b
    n_split, n_nonsplit, _ = _le_region_worker((za.ell.triple, b))
    # recount the same fiber including nonreduced points
    from hilb2.asymptotics import _REGION_INV, _icbrt
    from hilb2.lattice import enumerate_form_le, quotient
    from hilb2.hilb import HilbPoint
    from math import gcd

    quo = quotient(za.ell)
    t_f = _icbrt(F(za.covol2_I1) ** 3 * (_REGION_INV * b) ** 2)
    n_all = 0
    seen_za = False
    for x in enumerate_form_le(quo.gram_int, t_f):
        if gcd(gcd(x[0], x[1]), x[2]) != 1:
            continue
        first = next(v for v in x if v)
        if first < 0:
            continue
        z = HilbPoint(ell=za.ell, qbar=x, covol2_I2=quo.covol2_with(x))
        if le_height2(z) ** 3 <= b * b:
            n_all += 1
            if z == za:
                seen_za = True
    assert seen_za
    assert n_split + n_nonsplit < n_all


def test_le_rudulier_prediction_constant():
    # 2 (24 + pi^2) / (3 zeta(3)^2) = 15.62675529119955659... (mpmath, 30 digits)
    assert abs(le_rudulier_prediction(1000.0) / (1000.0 * 6.907755278982137) - 15.626755291199557) < 1e-12
