import pytest
from hypothesis import assume, given, settings, strategies as st

from logpi1.cli import load_json
from logpi1.curve import (
    DualGraph,
    Edge,
    GoodPoint,
    GraphError,
    MarkedPoint,
    NilpotentPair,
    TangentialSide,
    Vertex,
    analyze,
    base_from_json,
    base_to_json,
    find_loop,
    graph_from_json,
    loop_check,
    presentation,
    reduce,
    validate_graph,
)
from oracles import one_relator_dims, witt


def expected_dims(g: DualGraph, q: int) -> list[int]:
    """Lower central series dims of a punctured surface group."""
    genus = sum(v.genus for v in g.vertices) + len(g.edges) - len(g.vertices) + 1
    r = sum(v.marked for v in g.vertices)
    if r:
        return [witt(2 * genus + r - 1, n) for n in range(1, q + 1)]
    return one_relator_dims(2 * genus, q)


@st.composite
def graphs(draw, max_vertices=3, loops=None):
    n = draw(st.integers(1, max_vertices))
    vs = [Vertex(f"V{i}", draw(st.integers(0, 1)), draw(st.integers(0, 2))) for i in range(n)]
    edges = [Edge(f"t{i}", (f"V{draw(st.integers(0, i - 1))}", f"V{i}")) for i in range(1, n)]
    extra = draw(st.integers(1 if loops else 0, 0 if loops is False else 2))
    for k in range(extra):
        a, b = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        edges.append(Edge(f"c{k}", (f"V{a}", f"V{b}")))
    g = DualGraph(vs, edges)
    assume(validate_graph(g))
    genus = sum(v.genus for v in vs) + len(edges) - n + 1
    assume(2 * genus + sum(v.marked for v in vs) <= 6)
    return g


def test_bundled_presentations():
    for name, dims in [("two_genus1.json", [4, 5, 16]), ("y_tree.json", [6, 14, 64]), ("self_loop.json", [2, 1, 2])]:
        g, _, _ = graph_from_json(load_json(name))
        p = presentation(g, 3)
        assert p.algebra.gr_dims() == dims == expected_dims(g, 3)
        assert p.residue_check()


@settings(max_examples=30, deadline=None)
@given(graphs())
def test_presentation_dims_and_residues(g):
    p = presentation(g, 3)
    assert p.algebra.gr_dims() == expected_dims(g, 3)
    assert p.residue_check()


@settings(max_examples=20, deadline=None)
@given(graphs(), st.randoms(use_true_random=False))
def test_relabelling_invariance(g, rnd):
    names = [v.id for v in g.vertices]
    new = dict(zip(names, rnd.sample([f"W{i}" for i in range(len(names))], len(names))))
    vs = [Vertex(new[v.id], v.genus, v.marked) for v in g.vertices]
    rnd.shuffle(vs)
    es = [Edge(f"x{e.id}", tuple(new[x] for x in e.ends)) for e in g.edges]
    h = DualGraph(vs, es)
    assert presentation(h, 3).algebra.gr_dims() == presentation(g, 3).algebra.gr_dims()
    assert validate_graph(h).ok == validate_graph(g).ok


@settings(max_examples=15, deadline=None)
@given(graphs(loops=True))
def test_any_loop_is_nontrivial(g):
    rep = analyze(g, GoodPoint(g.vertices[0].id), 3)
    assert rep.nontrivial
    assert rep.loop_pairing == 2 * len(find_loop(g))


def test_validation_kinds():
    two_rational = DualGraph([Vertex("A", 0, 1), Vertex("B", 0, 1)], [Edge("e", ("A", "B"))])
    assert not validate_graph(two_rational)
    bridge = DualGraph([Vertex("A", 1, 0), Vertex("P", 0, 0), Vertex("B", 1, 0)],
                       [Edge("e", ("A", "P")), Edge("f", ("P", "B"))])
    assert validate_graph(bridge, "minimal_semistable")
    assert not validate_graph(bridge, "stable")
    assert not validate_graph(DualGraph([Vertex("E", 1, 0)], []))
    nodal = DualGraph([Vertex("A", 0, 1)], [Edge("s", ("A", "A"))])
    assert validate_graph(nodal, "stable")
    with pytest.raises(GraphError):
        validate_graph(DualGraph([Vertex("A", 1, 1), Vertex("B", 1, 1)], []))
    with pytest.raises(ValueError):
        validate_graph(nodal, "smooth")


def test_graph_construction_errors():
    with pytest.raises(GraphError):
        DualGraph([Vertex("A", 0, 3), Vertex("A", 1, 0)], [])
    with pytest.raises(GraphError):
        DualGraph([Vertex("A", 0, 3)], [Edge("e", ("A", "B"))])


def test_reduce_keeps_the_line_between_terminals():
    g, _, _ = graph_from_json(load_json("y_tree.json"))
    instances, trace = reduce(g)
    assert instances and trace
    for inst in instances:
        ids = [v.id for v in inst.graph.vertices]
        assert inst.n == len(inst.edges) == len(ids) - 1
        assert all(inst.graph.valence(x) <= 2 for x in ids)


def test_reduce_refuses_loops_and_skips_smooth():
    g, _, _ = graph_from_json(load_json("loop2.json"))
    with pytest.raises(GraphError):
        reduce(g)
    assert reduce(DualGraph([Vertex("A", 2, 0)], []))[0] == []


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_loop_pairing(n):
    vs = [Vertex(f"V{i}", 0, 1) for i in range(n)]
    es = [Edge(f"e{i}", (f"V{i}", f"V{(i + 1) % n}")) for i in range(n)]
    g = DualGraph(vs, es)
    assert len(find_loop(g)) == n
    assert loop_check(g) == 2 * n


def test_no_loop():
    g, _, _ = graph_from_json(load_json("two_genus1.json"))
    with pytest.raises(GraphError):
        find_loop(g)


def test_nilpotent_pair_validation():
    with pytest.raises(ValueError):
        NilpotentPair([[[1, 0], [0, 0]]])
    with pytest.raises(ValueError):
        NilpotentPair([[[0, 1], [0, 0]], [[0, 0], [1, 0]]])
    assert NilpotentPair([[[0, 1], [0, 0]], [[0, -1], [0, 0]]]).dim == 2


def test_smooth_verdicts():
    g = DualGraph([Vertex("A", 2, 0)], [])
    assert analyze(g, GoodPoint("A"), 4).verdict == "trivial in Aut"
    g = DualGraph([Vertex("A", 1, 1)], [])
    rep = analyze(g, MarkedPoint("A", 2), 4)
    assert rep.verdict == "inner (trivial in Out)" and not rep.witness["identity"]


def test_chain_through_rational_bridge():
    g, base, q = graph_from_json(load_json("chain_genus1_rational_genus1.json"))
    rep = analyze(g, base, q)
    assert rep.nontrivial


def test_base_json_roundtrip():
    for b in (GoodPoint("A"), MarkedPoint("A", 3), TangentialSide("e", 1)):
        assert base_from_json(base_to_json(b)) == b


def test_bad_base_rejected():
    g = DualGraph([Vertex("A", 2, 0)], [])
    with pytest.raises(GraphError):
        analyze(g, MarkedPoint("A", 1), 4)
    with pytest.raises(ValueError):
        presentation(g, 1)


def test_parallel_analysis_matches_serial():
    g, _, _ = graph_from_json(load_json("y_tree.json"))
    assert analyze(g, None, 3, jobs=2).to_json() == analyze(g, None, 3).to_json()


def test_monodromy_is_unipotent_automorphism():
    from logpi1.curve import line_presentation, monodromy_automorphism

    for name in ("two_genus1.json", "chain_genus1_rational_genus1.json", "y_tree.json"):
        g, _, _ = graph_from_json(load_json(name))
        for inst in reduce(g)[0]:
            phi = monodromy_automorphism(line_presentation(inst, 3))
            assert phi.check() and phi.is_automorphism() and phi.is_unipotent()


def test_renaming_ids_keeps_structure_constants():
    g, _, _ = graph_from_json(load_json("y_tree.json"))
    new = {v.id: f"n{v.id}" for v in g.vertices}
    h = DualGraph([Vertex(new[v.id], v.genus, v.marked) for v in g.vertices],
                  [Edge(f"x{e.id}", tuple(new[x] for x in e.ends)) for e in g.edges])
    pa, pb = presentation(g, 3).algebra, presentation(h, 3).algebra
    assert pa.labels == pb.labels and pa.table == pb.table
