from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nilrigid.poly import (
    PolynomialDomainError,
    RatPoly,
    count_real_roots_between,
    isolate_real_roots,
    is_squarefree,
    poly_gcd,
    real_root_count,
    refine_isolating_interval,
    squarefree_part,
    sturm_chain,
)

SMALE_QUARTIC = RatPoly([1, -10202, 525300, -57854, 1])


def test_construction_strips_trailing_zeros():
    assert RatPoly([1, 2, 0, 0]).coeffs == (Fraction(1), Fraction(2))
    assert RatPoly([0, 0]).is_zero()
    assert RatPoly([]).degree == -1


def test_arithmetic_roundtrip():
    p = RatPoly([1, -3, 1])
    q = RatPoly(["1/2", 2])
    prod = p * q
    quo, rem = prod.divmod(q)
    assert quo == p and rem.is_zero()
    assert (p + q) - q == p
    assert p * RatPoly([1]) == p


def test_divmod_remainder():
    p = RatPoly([1, 0, 1])  # x^2 + 1
    d = RatPoly([1, 1])  # x + 1
    q, r = p.divmod(d)
    assert q == RatPoly([-1, 1])
    assert r == RatPoly([2])


def test_exact_div_rejects_nondivisor():
    with pytest.raises(PolynomialDomainError):
        RatPoly([1, 0, 1]).exact_div(RatPoly([1, 1]))


def test_eval_exact():
    p = RatPoly([1, -3, 1])
    assert p.eval(Fraction(3)) == 1
    assert p.eval(Fraction(1, 2)) == Fraction(-1, 4)


def test_gcd_and_squarefree():
    p = RatPoly([-1, 0, 1])  # (x-1)(x+1)
    q = RatPoly([1, 1]) * RatPoly([1, 1])
    g = poly_gcd(p, q)
    assert g == RatPoly([1, 1])
    sq = squarefree_part(q)
    assert sq == RatPoly([1, 1])
    assert is_squarefree(p) and not is_squarefree(q)


def test_real_root_count_no_real_roots():
    assert real_root_count(RatPoly([1, 0, 1])) == 0


def test_real_root_count_quadratic():
    # discriminant 9 - 4 = 5 > 0
    assert real_root_count(RatPoly([1, -3, 1])) == 2


def test_real_root_count_smale_quartic():
    assert real_root_count(SMALE_QUARTIC) == 4


def test_real_root_count_applies_squarefree_part():
    doubled = RatPoly([1, -3, 1]) * RatPoly([1, -3, 1])
    assert real_root_count(doubled) == 2


def test_real_root_count_rejects_zero():
    with pytest.raises(PolynomialDomainError):
        real_root_count(RatPoly([]))


def test_isolation_intervals_disjoint_and_complete():
    p = RatPoly([1, -3, 1])
    ivs = isolate_real_roots(p)
    assert len(ivs) == 2
    chain = sturm_chain(p)
    for a, b in ivs:
        assert count_real_roots_between(chain, a, b) == 1
    (a1, b1), (a2, b2) = ivs
    assert b1 <= a2


def test_isolation_finds_exact_rational_roots():
    p = RatPoly([-2, 1]) * RatPoly([3, 1])  # roots 2 and -3
    ivs = isolate_real_roots(p)
    roots = set()
    for a, b in ivs:
        if a == b:
            roots.add(a)
    chain = sturm_chain(p)
    for a, b in ivs:
        if a != b:
            assert count_real_roots_between(chain, a, b) == 1
    assert len(ivs) == 2


def test_refine_isolating_interval():
    p = RatPoly([1, -3, 1])
    iv = isolate_real_roots(p)[0]
    a, b = refine_isolating_interval(p, iv, Fraction(1, 2**30))
    assert b - a <= Fraction(1, 2**30)
    chain = sturm_chain(p)
    if a != b:
        assert count_real_roots_between(chain, a, b) == 1


def test_is_cyclotomic():
    from nilrigid.poly import is_cyclotomic

    assert is_cyclotomic(RatPoly([-1, 1]))          # x - 1
    assert is_cyclotomic(RatPoly([1, 1]))           # x + 1
    assert is_cyclotomic(RatPoly([1, 1, 1]))        # x^2 + x + 1
    assert is_cyclotomic(RatPoly([1, -1, 1]))       # x^2 - x + 1
    assert is_cyclotomic(RatPoly([1, 0, -1, 0, 1]))  # x^4 - x^2 + 1 (12th)
    assert not is_cyclotomic(RatPoly([1, -3, 1]))
    assert not is_cyclotomic(RatPoly([2, 1]))
    assert not is_cyclotomic(RatPoly([1, -10202, 525300, -57854, 1]))
    # Lehmer's polynomial: unimodular complex roots but not cyclotomic
    lehmer = RatPoly([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    assert not is_cyclotomic(lehmer)


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=6))
def test_sturm_count_matches_isolation(coeffs):
    p = RatPoly(coeffs)
    if p.is_zero() or p.degree == 0:
        return
    n = real_root_count(p)
    assert 0 <= n <= p.degree
    assert len(isolate_real_roots(p)) == n
