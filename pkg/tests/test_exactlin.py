from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from logpi1.exactlin import (
    CochainComplex,
    Echelon,
    GradedMap,
    GradedSpace,
    Matrix,
    choose_section,
    cohomology,
    cone,
)
from oracles import rank as oracle_rank

small = st.integers(-3, 3).map(Fraction)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_identity_kernel_is_zero():
    assert Matrix.identity(3).kernel() == []


def test_zero_kernel_is_everything():
    assert len(Matrix.zero(3, 3).kernel()) == 3


def test_rank_three_four_by_five():
    rows = [[1, 2, 0, 1, 3], [0, 1, 1, 0, 2], [1, 3, 1, 1, 5], [2, 0, 1, 0, 1]]
    m = Matrix.from_rows(rows)
    assert oracle_rank(rows) == 3
    assert m.rank() == 3
    assert len(m.kernel()) == 2
    for v in m.kernel():
        assert m.apply(v) == {}


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity_against_sympy(rows):
    m = Matrix.from_rows(rows)
    assert m.rank() == oracle_rank(rows)
    assert m.rank() + len(m.kernel()) == m.ncols
    for v in m.kernel():
        assert m.apply(v) == {}


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_solve_returns_preimage(rows):
    m = Matrix.from_rows(rows)
    b = m.apply({j: Fraction(j + 1) for j in range(m.ncols)})
    x = m.solve(b)
    assert x is not None and m.apply(x) == b


def test_echelon_relation_and_coordinates():
    e = Echelon()
    assert e.insert({0: Fraction(1), 1: Fraction(1)}, "a") is None
    assert e.insert({1: Fraction(1)}, "b") is None
    rel = e.insert({0: Fraction(2), 1: Fraction(3)}, "c")
    assert rel == {"a": 2, "b": 1}
    assert e.coordinates({0: Fraction(1), 1: Fraction(2)}) == {"a": 1, "b": 1}


def _two_term(d: Matrix, n0=0):
    space = GradedSpace({n0: tuple(range(d.ncols)), n0 + 1: tuple(range(d.nrows))})
    return CochainComplex(space, {n0: d})


def test_identity_complex_is_acyclic():
    c = _two_term(Matrix.identity(1))
    assert cohomology(c, 0).dim == 0 and cohomology(c, 1).dim == 0


def test_row_matrix_complex():
    c = _two_term(Matrix.from_rows([[1, 1]]))
    assert cohomology(c, 0).dim == 1 and cohomology(c, 1).dim == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=4))
def test_zero_differential_gives_terms(dims):
    space = GradedSpace({n: tuple(range(k)) for n, k in enumerate(dims)})
    c = CochainComplex(space, {})
    assert [cohomology(c, n).dim for n in range(len(dims))] == dims


def test_cone_of_identity_is_acyclic():
    a = _two_term(Matrix.from_rows([[1, 0], [0, 0]]))
    ident = GradedMap(a.space, a.space, 0, {0: Matrix.identity(2), 1: Matrix.identity(2)})
    c = cone(ident, a, a)
    c.check()
    assert all(cohomology(c, n).dim == 0 for n in range(0, 3))


def test_cone_of_zero_from_degree_two():
    a = CochainComplex(GradedSpace({2: ("x",)}), {})
    b = CochainComplex(GradedSpace({}), {})
    phi = GradedMap(a.space, b.space, 0, {})
    assert cohomology(cone(phi, a, b), 2).dim == 1


def test_cone_of_genus_one_cup_is_acyclic_in_degree_two():
    # Lambda^2 of a 2-dim space mapping onto the 1-dim top class
    a = CochainComplex(GradedSpace({2: ("v1v2",)}), {})
    b = CochainComplex(GradedSpace({2: ("w",)}), {})
    phi = GradedMap(a.space, b.space, 0, {2: Matrix.identity(1)})
    assert cohomology(cone(phi, a, b), 2).dim == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.lists(small, min_size=9, max_size=9), st.lists(small, min_size=9, max_size=9))
def test_cone_euler_characteristic(na, nb, fa, fb):
    # A: Q^na -> Q^na (degrees 0,1), B likewise; the cone's Euler
    # characteristic is chi(B) - chi(A), whatever the chain map
    da = Matrix.from_rows([[fa[i * 3 + j] for j in range(na)] for i in range(na)])
    db = Matrix.zero(nb, nb)
    a = _two_term(da)
    b = _two_term(db)
    f0 = Matrix.zero(nb, na)
    f1 = Matrix.zero(nb, na)
    phi = GradedMap(a.space, b.space, 0, {0: f0, 1: f1})
    c = cone(phi, a, b)
    c.check()
    chi = lambda cx, degs: sum((-1) ** n * cohomology(cx, n).dim for n in degs)
    assert chi(c, range(0, 3)) == chi(b, range(0, 2)) - chi(a, range(0, 2))


def test_section_of_identity():
    assert choose_section(Matrix.identity(3)) == Matrix.identity(3)


def test_section_of_projection_uses_first_pivot():
    s = choose_section(Matrix.from_rows([[1, 0]]))
    assert s.to_rows() == [[1], [0]]


def test_section_of_zero_dim_target():
    s = choose_section(Matrix.zero(0, 2))
    assert (s.nrows, s.ncols) == (2, 0)


def test_section_rejects_non_surjection():
    with pytest.raises(ValueError):
        choose_section(Matrix.from_rows([[1, 1], [1, 1]]))


@settings(max_examples=60, deadline=None)
@given(matrices(4, 6))
def test_section_is_right_inverse(rows):
    m = Matrix.from_rows(rows)
    if m.rank() < m.nrows:
        return
    assert m @ choose_section(m) == Matrix.identity(m.nrows)
