import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nilrigid.algebra import (
    AlgebraError,
    LieAlgebra,
    abelian,
    bracket,
    direct_sum,
    free32_algebra,
    free_nilpotent,
    heisenberg,
    smale_algebra,
    validate,
)
from nilrigid.linalg import Subspace, span

ALL_BUILDERS = [
    ("abelian4", lambda: abelian(4)),
    ("heisenberg", heisenberg),
    ("free32", free32_algebra),
    ("free_nilpotent_3_2", lambda: free_nilpotent(3, 2)),
    ("free_nilpotent_4_2", lambda: free_nilpotent(4, 2)),
    ("smale", smale_algebra),
    ("sum", lambda: direct_sum(heisenberg(), abelian(2))),
]


@pytest.mark.parametrize("name,builder", ALL_BUILDERS)
def test_builders_validate_with_zero_jacobi_residual(name, builder):
    rep = validate(builder())
    assert rep.valid
    assert rep.jacobi_ok and rep.nilpotent
    assert rep.failures == ()


def test_validate_abelian_step_1():
    rep = validate(abelian(4))
    assert rep.step == 1


def test_validate_heisenberg_step_2():
    rep = validate(heisenberg())
    assert rep.step == 2


def test_corrupted_heisenberg_fails_jacobi():
    bad = LieAlgebra(3, ["X", "Y", "Z"], {(0, 1): [0, 0, 1], (0, 2): [1, 0, 0]})
    rep = validate(bad)
    assert not rep.valid
    assert not rep.jacobi_ok
    assert any("X" in f and "Jacobi" in f for f in rep.failures)


def test_bracket_defining_relation():
    h = heisenberg()
    z = bracket(h.element_by_name("X"), h.element_by_name("Y"))
    assert z.coords == (Fraction(0), Fraction(0), Fraction(1))


def test_bracket_antisymmetry_on_self():
    h = heisenberg()
    x = h.element([1, 2, 3])
    assert bracket(x, x).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_bracket_bilinearity(data):
    h = free32_algebra()
    vec = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=6, max_size=6)
    x = h.element(data.draw(vec))
    y = h.element(data.draw(vec))
    z = h.element(data.draw(vec))
    assert bracket(x + y, z).coords == (bracket(x, z) + bracket(y, z)).coords
    assert bracket(z, x + y).coords == (bracket(z, x) + bracket(z, y)).coords


def test_bracket_rejects_mismatched_algebras():
    with pytest.raises(AlgebraError):
        bracket(heisenberg().element([1, 0, 0]), abelian(3).element([1, 0, 0]))


def test_lcs_dims_heisenberg():
    assert [s.dim for s in heisenberg().lower_central_series()] == [3, 1, 0]


def test_lcs_dims_free32():
    assert [s.dim for s in free32_algebra().lower_central_series()] == [6, 3, 0]


def test_lcs_dims_smale():
    assert [s.dim for s in smale_algebra().lower_central_series()] == [6, 2, 0]


def test_lcs_terms_are_ideals_and_recursive():
    for _, builder in ALL_BUILDERS:
        alg = builder()
        chain = alg.lower_central_series()
        full = Subspace.full(alg.dim)
        for i in range(len(chain) - 1):
            nxt = alg.bracket_span(full, chain[i])
            assert nxt == chain[i + 1]
            assert chain[i].contains(nxt)


def test_non_nilpotent_detected():
    # sl2: [h, e] = 2e, [h, f] = -2f, [e, f] = h with basis order (e, f, h)
    sl2 = LieAlgebra(3, ["e", "f", "h"], {(0, 1): [0, 0, 1], (0, 2): [-2, 0, 0], (1, 2): [0, 2, 0]})
    rep = validate(sl2)
    assert not rep.nilpotent


def test_center_heisenberg():
    h = heisenberg()
    c = h.center()
    assert c == span(3, [[0, 0, 1]])


def test_quotient_heisenberg_by_center_is_abelian2():
    h = heisenberg()
    q, proj = h.quotient(h.center())
    assert q.dim == 2
    assert q.step == 1
    assert validate(q).valid
    assert proj.apply([3, 4, 9]) == (Fraction(3), Fraction(4))


def test_quotient_rejects_non_ideal():
    h = heisenberg()
    with pytest.raises(AlgebraError):
        h.quotient(span(3, [[1, 0, 0]]))


def test_quotients_revalidate():
    for _, builder in ALL_BUILDERS:
        alg = builder()
        derived = alg.derived_subalgebra(Subspace.full(alg.dim))
        q, _ = alg.quotient(derived)
        assert validate(q).valid


def test_derived_subalgebra_free32():
    alg = free32_algebra()
    derived = alg.derived_subalgebra(Subspace.full(6))
    assert derived.dim == 3
    assert derived == alg.center()


def test_free_nilpotent_dims():
    assert free_nilpotent(3, 2).dim == 6
    assert free_nilpotent(4, 2).dim == 10
    with pytest.raises(NotImplementedError):
        free_nilpotent(3, 3)
    with pytest.raises(AlgebraError):
        free_nilpotent(1, 2)


def test_smale_structure():
    alg = smale_algebra()
    assert alg.dim == 6
    assert alg.center().dim == 2
    # defining brackets in the lattice basis
    e = lambda k: tuple(Fraction(int(i == k)) for i in range(6))
    assert alg.bracket_coords(e(0), e(2)) == e(4)
    assert alg.bracket_coords(e(0), e(3)) == e(5)
    assert alg.bracket_coords(e(1), e(2)) == e(5)
    assert alg.bracket_coords(e(1), e(3)) == tuple(3 * c for c in e(4))


def test_direct_sum_dims_and_blocks():
    s = direct_sum(abelian(2), abelian(3))
    assert s.dim == 5
    assert s.step == 1
    hh = direct_sum(heisenberg(), heisenberg())
    assert hh.dim == 6
    assert [x.dim for x in hh.lower_central_series()] == [6, 2, 0]


def test_graded_filtration_property_random_samples():
    rng = random.Random(4)
    for _, builder in ALL_BUILDERS:
        alg = builder()
        chain = alg.lower_central_series()
        depth = len(chain) - 1
        for _ in range(10):
            i = rng.randint(1, depth)
            j = rng.randint(1, depth)
            target_idx = min(i + j, depth + 1)
            target = chain[target_idx - 1] if target_idx <= depth else chain[-1]
            xi = _random_in(rng, alg, chain[i - 1])
            xj = _random_in(rng, alg, chain[j - 1])
            br = alg.bracket_coords(xi, xj)
            assert target.contains_vector(br)


def _random_in(rng, alg, sub):
    out = [Fraction(0)] * alg.dim
    for row in sub.basis_rows():
        c = Fraction(rng.randint(-3, 3))
        out = [a + c * b for a, b in zip(out, row)]
    return tuple(out)
