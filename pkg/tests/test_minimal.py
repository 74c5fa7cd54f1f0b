import pytest

from logpi1.cdga import marked_curve_model, stock_models, unmarked_curve_model
from logpi1.exactlin import Matrix
from logpi1.minimal import (
    build,
    check_minimality,
    cone_dimension,
    dual_lie,
    extend_morphism,
    homotopy_lift_check,
    identity_morphism,
    model_from_json,
)
from oracles import one_relator_dims, witt


@pytest.mark.parametrize("g,r", [(0, 2), (0, 3), (1, 1), (0, 4), (1, 2), (2, 1), (0, 5)])
def test_marked_stages_follow_witt(g, r):
    k = 2 * g + r - 1
    m = build(marked_curve_model(g, r), 3)
    assert m.stage_dims() == [witt(k, n) for n in (1, 2, 3)]
    assert dual_lie(m).gr_dims() == [witt(k, n) for n in (1, 2, 3)]


@pytest.mark.parametrize("g", [1, 2])
def test_unmarked_stages_follow_one_relator(g):
    m = build(unmarked_curve_model(g), 3)
    assert m.stage_dims() == one_relator_dims(2 * g, 3)


@pytest.mark.parametrize("name", sorted(stock_models()))
def test_minimality_rechecks(name):
    a = stock_models()[name]
    for section in ("pivot", "reverse"):
        assert check_minimality(build(a, 3, section=section), a)


@pytest.mark.parametrize("name", sorted(stock_models()))
def test_relative_cohomology_of_cone(name):
    a = stock_models()[name]
    m3, m4 = build(a, 3), build(a, 4)
    assert cone_dimension(m3, a, 3, 0) == 0
    assert cone_dimension(m3, a, 3, 1) == 0
    # what survives in relative H^2 is exactly what the next stage kills
    assert cone_dimension(m3, a, 3, 2) == m4.stage_dims()[3]


@pytest.mark.parametrize("name", sorted(stock_models()))
def test_section_choice_gives_homotopic_models(name):
    a = stock_models()[name]
    m, r = build(a, 3), build(a, 3, section="reverse")
    R = Matrix(a.dim(1), r.stages[0].dim, [dict(v) for v in r.stages[0].rho1])
    stage1 = [R.solve(v) for v in m.stages[0].rho1]
    f = identity_morphism(a)
    phi, h = extend_morphism(f, m, r, stage1)
    assert h.exists and h.proven
    assert homotopy_lift_check(f, m, r, phi)


def test_wrong_stage_one_map_has_no_homotopy():
    a = marked_curve_model(0, 3)
    m = build(a, 2)
    n = m.algebra().ngens
    phi = [{i: 1} for i in range(n)]
    phi[0], phi[2] = {0: 2}, {2: 2}
    res = homotopy_lift_check(identity_morphism(a), m, m, phi)
    assert not res.exists and res.proven


def test_non_morphism_candidate_rejected():
    a = marked_curve_model(0, 3)
    m = build(a, 2)
    phi = [{i: 1} for i in range(m.algebra().ngens)]
    phi[0] = {0: 2}
    with pytest.raises(ValueError):
        homotopy_lift_check(identity_morphism(a), m, m, phi)


def test_json_roundtrip():
    m = build(marked_curve_model(1, 1), 3)
    again = model_from_json(m.to_json())
    assert again.stage_dims() == m.stage_dims()
    assert again.to_json() == m.to_json()


def test_build_rejects_bad_input():
    with pytest.raises(ValueError):
        build(marked_curve_model(0, 3), 0)
    with pytest.raises(ValueError):
        build(marked_curve_model(0, 3), 2, section="random")


@pytest.mark.parametrize("name", ["marked_0_3", "marked_1_1", "marked_0_4", "unmarked_2"])
def test_homotopic_extension_is_unique_on_small_models(name):
    # phi + (closed stage-1 element) on a later generator is still a cdga
    # morphism; only the unperturbed extension admits a homotopy
    a = stock_models()[name]
    m = build(a, 2)
    f = identity_morphism(a)
    n, n1 = m.algebra().ngens, m.stages[0].dim
    assert homotopy_lift_check(f, m, m, [{i: 1} for i in range(n)])
    for k in range(n1, n):
        for j in range(n1):
            phi = [{i: 1} for i in range(n)]
            phi[k] = {k: 1, j: 1}
            assert not homotopy_lift_check(f, m, m, phi).exists, (k, j)


@pytest.mark.parametrize("name", sorted(stock_models()))
def test_assembled_model_axioms_and_minimality(name):
    from logpi1.cdga import validate

    from logpi1.exactlin import add_to

    a = stock_models()[name]
    m = build(a, 4)
    # every axiom is weight-homogeneous; generators have weight <= 4
    assert validate(m.assembled(cap=3, max_weight=4))
    ext = m.algebra()
    for i in range(ext.ngens):
        dd: dict = {}
        for mono, c in ext.d_monomial((i,)).items():
            add_to(dd, ext.d_monomial(mono), c)
        assert not dd, ext.labels[i]
    first = 0
    for s in m.stages:
        for attach in s.attach:
            assert all(x < y < first for x, y in attach)
        first += s.dim
    assert dual_lie(m).check_jacobi()


@pytest.mark.parametrize("g,r", [(0, 2), (0, 3), (1, 1), (0, 4), (1, 2), (0, 5), (1, 3), (2, 1)])
def test_marked_stage_dims_through_four(g, r):
    k = 2 * g + r - 1
    assert build(marked_curve_model(g, r), 4).stage_dims() == [witt(k, n) for n in range(1, 5)]


def test_build_after_reserialisation_is_identical():
    from logpi1.cdga import from_json, to_json

    for name, a in stock_models().items():
        m1, m2 = build(a, 3), build(from_json(to_json(a)), 3)
        assert m1.stage_dims() == m2.stage_dims()
        assert [s.attach for s in m1.stages] == [s.attach for s in m2.stages], name


def test_swapped_generators_have_no_homotopy():
    # swapping the two classes (and fixing the sign on the bracket generator so
    # the candidate is still a morphism) contradicts f = identity on H^1
    a = marked_curve_model(0, 3)
    m = build(a, 2)
    phi = [{1: 1}, {0: 1}, {2: -1}]
    res = homotopy_lift_check(identity_morphism(a), m, m, phi)
    assert not res.exists and res.proven
