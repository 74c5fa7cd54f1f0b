"""Dual graphs of semistable log curves, presentations of their truncated
fundamental Lie algebras, and the monodromy decision pipeline.

Each component of genus g with p >= 1 special points (edge branches first,
then marked points) contributes free generators a1, b1, .., ag, bg and loops
l1, .., l_{p-1}.  Special point j < p maps to l_j; the last one maps to
sum [a_i, b_i] - sum l_j.  An edge identifies the images on its two sides
with opposite signs.  An isolated unmarked component gets the symplectic
relator instead.
"""
from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .exactlin import ONE
from .nilpotent_lie import (
    LieAlgebra,
    LieAutomorphism,
    LieElement,
    LieHom,
    ad_exp,
    free_nilpotent,
    is_inner,
    project_to_quotient,
    quotient,
)

PREFIXES = ["v", "w", "u", "x", "y", "z"]


class GraphError(ValueError):
    """Input graph or base datum is invalid."""


# Graph data


@dataclass(frozen=True)
class Vertex:
    id: str
    genus: int = 0
    marked: int = 0


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple


@dataclass
class DualGraph:
    vertices: list
    edges: list = field(default_factory=list)

    def __post_init__(self):
        self.vertices = [v if isinstance(v, Vertex) else Vertex(**v) for v in self.vertices]
        self.edges = [e if isinstance(e, Edge) else Edge(e["id"], tuple(e["ends"])) for e in self.edges]
        ids = [v.id for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise GraphError("vertex ids must be unique")
        eids = [e.id for e in self.edges]
        if len(set(eids)) != len(eids):
            raise GraphError("edge ids must be unique")
        for v in self.vertices:
            if v.genus < 0 or v.marked < 0:
                raise GraphError(f"vertex {v.id}: negative genus or marked count")
        for e in self.edges:
            if len(e.ends) != 2 or any(x not in ids for x in e.ends):
                raise GraphError(f"edge {e.id}: endpoints must be two vertex ids")

    def vertex(self, vid) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise GraphError(f"unknown vertex {vid}")

    def edge(self, eid) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise GraphError(f"unknown edge {eid}")

    def branches(self, vid) -> list[tuple]:
        """Edge sides (edge id, side) at a vertex; a self-loop gives two."""
        return [(e.id, s) for e in self.edges for s in (0, 1) if e.ends[s] == vid]

    def valence(self, vid) -> int:
        return len(self.branches(vid))

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.vertices[0].id}
        todo = [self.vertices[0].id]
        while todo:
            x = todo.pop()
            for e in self.edges:
                if x in e.ends:
                    for y in e.ends:
                        if y not in seen:
                            seen.add(y)
                            todo.append(y)
        return len(seen) == len(self.vertices)

    def spanning_tree(self) -> tuple[list, list]:
        """(tree edge ids, remaining edge ids), breadth first from the first vertex."""
        root = self.vertices[0].id
        seen = {root}
        tree = []
        todo = deque([root])
        while todo:
            x = todo.popleft()
            for e in self.edges:
                if e.id in tree or x not in e.ends:
                    continue
                y = e.ends[1] if e.ends[0] == x else e.ends[0]
                if y not in seen:
                    seen.add(y)
                    tree.append(e.id)
                    todo.append(y)
        rest = [e.id for e in self.edges if e.id not in tree]
        return tree, rest

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == len(self.vertices) - 1

    def tree_path(self, a, b, tree: list) -> list:
        """Edge ids on the tree path from a to b."""
        prev = {a: None}
        todo = deque([a])
        while todo:
            x = todo.popleft()
            for eid in tree:
                e = self.edge(eid)
                if x in e.ends:
                    y = e.ends[1] if e.ends[0] == x else e.ends[0]
                    if y not in prev:
                        prev[y] = (x, eid)
                        todo.append(y)
        path = []
        x = b
        while prev[x] is not None:
            x, eid = prev[x]
            path.append(eid)
        return path[::-1]

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v.id, "genus": v.genus, "marked": v.marked} for v in self.vertices],
            "edges": [{"id": e.id, "ends": list(e.ends)} for e in self.edges],
        }


@dataclass(frozen=True)
class GoodPoint:
    vertex: str


@dataclass(frozen=True)
class MarkedPoint:
    vertex: str
    slope: int = 1


@dataclass(frozen=True)
class TangentialSide:
    edge: str
    side: int = 0


def base_from_json(d: dict):
    kind = d.get("kind")
    if kind == "good":
        return GoodPoint(str(d["vertex"]))
    if kind == "marked":
        return MarkedPoint(str(d["vertex"]), int(d.get("slope", 1)))
    if kind == "tangential":
        return TangentialSide(str(d["edge"]), int(d.get("side", 0)))
    raise GraphError(f"unknown base kind {kind!r}")


def base_to_json(b) -> dict:
    if isinstance(b, GoodPoint):
        return {"kind": "good", "vertex": b.vertex}
    if isinstance(b, MarkedPoint):
        return {"kind": "marked", "vertex": b.vertex, "slope": b.slope}
    return {"kind": "tangential", "edge": b.edge, "side": b.side}


def graph_from_json(d: dict) -> tuple[DualGraph, object, int]:
    """(graph, base or None, q) from the input format."""
    try:
        verts = [Vertex(str(v["id"]), int(v.get("genus", 0)), int(v.get("marked", 0))) for v in d["vertices"]]
        edges = [Edge(str(e["id"]), tuple(str(x) for x in e["ends"])) for e in d.get("edges", [])]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph: {exc}") from exc
    g = DualGraph(verts, edges)
    base = base_from_json(d["base"]) if "base" in d else None
    return g, base, int(d.get("q", 4))


# Validation


@dataclass
class GraphVerdict:
    ok: bool
    problems: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate_graph(g: DualGraph, kind: str = "minimal_semistable") -> GraphVerdict:
    if kind not in ("stable", "minimal_semistable"):
        raise ValueError(f"unknown kind {kind!r}")
    if not g.is_connected():
        raise GraphError("graph is not connected")
    problems = []
    if len(g.vertices) == 1 and not g.edges and g.vertices[0].genus == 1 and g.vertices[0].marked == 0:
        problems.append("smooth genus 1 curve without marked points")
    for v in g.vertices:
        if v.genus > 0:
            continue
        k = g.valence(v.id)
        others = sum(1 for e, s in g.branches(v.id) if g.edge(e).ends[0] != g.edge(e).ends[1])
        if kind == "stable":
            if k + v.marked < 3:
                problems.append(f"rational vertex {v.id}: {k} branches + {v.marked} marked < 3")
        elif others <= 1 and k + v.marked < 3:
            problems.append(f"terminal rational vertex {v.id}: {k} branches + {v.marked} marked < 3")
    return GraphVerdict(not problems, problems)


# Presentation


@dataclass
class CurvePresentation:
    graph: DualGraph
    algebra: LieAlgebra
    q: int
    order: list  # vertex ids in block order
    blocks: dict  # vertex id -> list of generator labels of that block
    sides: dict  # (edge id, side) -> LieElement
    points: dict  # (vertex id, j) -> LieElement, image of special point j
    cycle_generators: list
    images: dict  # original generator label -> LieElement in the algebra

    def e(self, edge, side) -> LieElement:
        return self.sides[(edge, side)]

    def residue_check(self) -> bool:
        """e(edge, 0) + e(edge, 1) = 0 on tree edges; on cycle edges up to
        conjugation by the cycle generator."""
        tree, _ = self.graph.spanning_tree()
        for eid in tree:
            if self.e(eid, 0) + self.e(eid, 1):
                return False
        for k, eid in enumerate(self.cycle_generators):
            t = self.images[f"t{k + 1}"]
            if self.e(eid, 0) + ad_exp(t, -1, self.e(eid, 1)):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "algebra": self.algebra.to_json(),
            "blocks": {vid: labs for vid, labs in self.blocks.items()},
            "order": list(self.order),
            "sides": {f"{eid}:{s}": x.to_json() for (eid, s), x in sorted(self.sides.items())},
            "generator_images": {lab: x.to_json() for lab, x in self.images.items()},
        }


def _prefix(k: int) -> str:
    return PREFIXES[k] if k < len(PREFIXES) else f"p{k}_"


def presentation(g: DualGraph, q: int = 4, order: list | None = None, base=None) -> CurvePresentation:
    """Truncated Lie algebra of the curve by amalgamating component blocks.

    `order` fixes the block order of vertices (default: graph order).  A
    marked-point base at a vertex is taken as that vertex's last special point.
    """
    if q < 2:
        raise ValueError("q must be >= 2")
    if not g.is_connected():
        raise GraphError("graph is not connected")
    order = list(order) if order is not None else [v.id for v in g.vertices]
    if sorted(order) != sorted(v.id for v in g.vertices):
        raise GraphError("order must list every vertex once")
    labels: list[str] = []
    blocks: dict = {}
    local: dict = {}  # vid -> (symplectic pairs, loop labels, special points)
    for k, vid in enumerate(order):
        v = g.vertex(vid)
        pre = _prefix(k)
        pts = [("branch", b) for b in g.branches(vid)] + [("marked", j) for j in range(v.marked)]
        n_loops = max(len(pts) - 1, 0)
        labs = [f"{pre}{i + 1}" for i in range(2 * v.genus + n_loops)]
        blocks[vid] = labs
        labels.extend(labs)
        sym = [(labs[2 * i], labs[2 * i + 1]) for i in range(v.genus)]
        local[vid] = (sym, labs[2 * v.genus:], pts)
    tree, rest = g.spanning_tree()
    cyc = [f"t{k + 1}" for k in range(len(rest))]
    labels.extend(cyc)
    if not labels:
        raise GraphError("curve has trivial fundamental group")
    F = free_nilpotent(tuple(labels), q)
    gen = {lab: F.gen(lab) for lab in labels}

    def symplectic(sym):
        out = F.zero()
        for a, b in sym:
            out = out + gen[a].bracket(gen[b])
        return out

    point_img: dict = {}
    side_img: dict = {}
    relators = []
    for vid in order:
        sym, loops, pts = local[vid]
        if not pts:
            relators.append(symplectic(sym))
            continue
        last = symplectic(sym)
        for j, (kind, ref) in enumerate(pts):
            if j < len(pts) - 1:
                img = gen[loops[j]]
                last = last - img
            else:
                img = last
            point_img[(vid, j)] = img
            if kind == "branch":
                side_img[ref] = img
    for eid in tree:
        relators.append(side_img[(eid, 0)] + side_img[(eid, 1)])
    for k, eid in enumerate(rest):
        relators.append(side_img[(eid, 0)] + ad_exp(gen[cyc[k]], -1, side_img[(eid, 1)]))
    alg, phi = _eliminate_and_quotient(F, relators)
    return CurvePresentation(
        graph=g,
        algebra=alg,
        q=q,
        order=order,
        blocks=blocks,
        sides={key: phi(x) for key, x in side_img.items()},
        points={key: phi(x) for key, x in point_img.items()},
        cycle_generators=rest,
        images={lab: phi(gen[lab]) for lab in labels},
    )


def _eliminate_and_quotient(F: LieAlgebra, relators: list):
    """Solve relators with a linear part for their last generator, then take
    the quotient by what remains.  Returns the algebra and a map from F."""
    rels = [r.coords for r in relators]
    subst = LieHom(F, F, [{g: ONE} for g in F.gens])
    gone: set = set()
    while True:
        pick = None
        for r in rels:
            lin = [p for p, g in enumerate(F.gens) if g in r]
            if lin:
                pick = (r, max(lin))
                break
        if pick is None:
            break
        r, p = pick
        g = F.gens[p]
        c = r[g]
        rest = {i: -x / c for i, x in r.items() if i != g}
        # fixed point g = rest(g); the images of g stay free of g
        x: dict = {}
        for _ in range(F.q + 1):
            hom = LieHom(F, F, [x if k == p else {gg: ONE} for k, gg in enumerate(F.gens)])
            x = hom.apply_vec(rest)
        step = LieHom(F, F, [x if k == p else {gg: ONE} for k, gg in enumerate(F.gens)])
        subst = LieHom(F, F, [step.apply_vec(v) for v in subst.images])
        rels = [v for v in (step.apply_vec(r2) for r2 in rels if r2 is not r) if v]
        gone.add(p)
    names = F.generator_labels
    keep = [lab for k, lab in enumerate(names) if k not in gone]
    if not keep:
        raise GraphError("presentation collapses to the zero algebra")
    target = free_nilpotent(tuple(keep), F.q)
    relabel = LieHom(F, target, [({} if k in gone else target.gen(lab).coords) for k, lab in enumerate(names)])
    rels = [v for v in (relabel.apply_vec(r) for r in rels) if v]
    alg = quotient(target, [LieElement(target, r) for r in rels]) if rels else target
    total = LieHom(F, target, [relabel.apply_vec(v) for v in subst.images])

    def phi(y: LieElement) -> LieElement:
        v = total.apply_vec(y.coords)
        if alg is target:
            return LieElement(alg, v)
        return project_to_quotient(alg, LieElement(target, v))

    return alg, phi


# Reduction to lines


@dataclass
class LineInstance:
    graph: DualGraph  # a line: vertices in order Y, interior..., Z
    edges: list  # edge ids along the line, from Y
    note: str = ""

    @property
    def n(self) -> int:
        return len(self.edges)

    def to_json(self) -> dict:
        return {"graph": self.graph.to_json(), "edges": list(self.edges), "note": self.note}


def reduce(g: DualGraph, start=None) -> tuple[list[LineInstance], list[str]]:
    """Line instances surjected onto by the graph's Lie algebra, with a trace.

    Takes two terminal vertices (`start` first if it is terminal), keeps the
    path between them, discards branches off the path, erases marked points
    on interior vertices and splits at interior components of positive genus.
    """
    trace: list[str] = []
    if not g.edges:
        trace.append("smooth: nothing to reduce")
        return [], trace
    if not g.is_tree():
        raise GraphError("graph has a loop; use loop_check")
    leaves = [v.id for v in g.vertices if g.valence(v.id) == 1]
    if start in leaves:
        y = start
    else:
        y = leaves[0]
    z = next(x for x in leaves if x != y)
    tree, _ = g.spanning_tree()
    path = g.tree_path(y, z, tree)
    verts = [y]
    for eid in path:
        e = g.edge(eid)
        verts.append(e.ends[1] if e.ends[0] == verts[-1] else e.ends[0])
    trace.append(f"terminals {y}, {z}; line {'-'.join(verts)}")
    dropped = [e.id for e in g.edges if e.id not in path]
    if dropped:
        trace.append(f"discarded off-line edges {', '.join(dropped)}")
    new_vertices = []
    for k, vid in enumerate(verts):
        v = g.vertex(vid)
        if 0 < k < len(verts) - 1 and v.marked:
            trace.append(f"erased {v.marked} marked points on {vid}")
            v = Vertex(v.id, v.genus, 0)
        new_vertices.append(v)
    cuts = [k for k in range(1, len(verts) - 1) if new_vertices[k].genus > 0]
    if cuts:
        trace.append(f"split at {', '.join(verts[k] for k in cuts)}")
    bounds = [0] + cuts + [len(verts) - 1]
    out = []
    for a, b in zip(bounds, bounds[1:]):
        vs = new_vertices[a:b + 1]
        es = [g.edge(eid) for eid in path[a:b]]
        out.append(LineInstance(DualGraph(vs, es), [e.id for e in es], note=f"{vs[0].id}..{vs[-1].id}"))
    return out, trace


# Monodromy


def line_presentation(inst: LineInstance, q: int) -> CurvePresentation:
    ids = [v.id for v in inst.graph.vertices]
    order = [ids[0], ids[-1]] + ids[1:-1]
    return presentation(inst.graph, q, order=order)


def monodromy_automorphism(p: CurvePresentation, inst: LineInstance | None = None) -> LieAutomorphism:
    """Identity on the Y block, b -> exp(-n ad e0) b on the Z block, where
    e0 is the Y-side element of the first edge and n the number of edges."""
    g = p.graph
    ids = [v.id for v in g.vertices]
    if not g.is_tree() or any(g.valence(x) > 2 for x in ids):
        raise GraphError("monodromy_automorphism needs a line")
    if len(ids) == 1:
        return LieAutomorphism.identity(p.algebra)
    y, z = p.order[0], p.order[1]
    path = g.tree_path(y, z, [e.id for e in g.edges])
    first = g.edge(path[0])
    e0 = p.e(first.id, 0 if first.ends[0] == y else 1)
    n = len(path)
    alg = p.algebra
    zlabs = set(p.blocks[z])
    images = []
    for lab in alg.generator_labels:
        x = alg.gen(lab)
        images.append(ad_exp(e0, n, x).coords if lab in zlabs else x.coords)
    phi = LieAutomorphism(alg, images)
    if not phi.is_automorphism():
        raise ArithmeticError("monodromy formula does not give an automorphism")
    return phi


# Loops


@dataclass
class NilpotentPair:
    """A vector space with nilpotent endomorphisms (one, or two commuting)."""

    N: list  # list of square matrices as row lists

    def __post_init__(self):
        n = len(self.N[0])
        for M in self.N:
            if len(M) != n or any(len(r) != n for r in M):
                raise ValueError("endomorphisms must be square of equal size")
            P = M
            for _ in range(n):
                P = _matmul(P, M)
            if any(x for r in P for x in r):
                raise ValueError("endomorphism is not nilpotent")
        if len(self.N) == 2 and _matmul(self.N[0], self.N[1]) != _matmul(self.N[1], self.N[0]):
            raise ValueError("endomorphisms must commute")

    @property
    def dim(self) -> int:
        return len(self.N[0])


def _matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(len(B[0]))] for i in range(len(A))]


def _matexp(N):
    n = len(N)
    out = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    term = [r[:] for r in out]
    for k in range(1, n + 1):
        term = [[x / k for x in r] for r in _matmul(term, N)]
        out = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(out, term)]
    return out


def find_loop(g: DualGraph) -> list:
    """Edge ids of the cycle closed by the first edge outside a spanning tree."""
    tree, rest = g.spanning_tree()
    if not rest:
        raise GraphError("no loop")
    e = g.edge(rest[0])
    if e.ends[0] == e.ends[1]:
        return [e.id]
    return g.tree_path(e.ends[1], e.ends[0], tree) + [e.id]


def loop_check(g: DualGraph, loop: list | None = None) -> int:
    """Upper-corner exponent of the defect eta_n .. eta_1 on the rank-2
    witness with residues E12 and -E12 on the two sides of every node."""
    loop = find_loop(g) if loop is None else list(loop)
    if not loop:
        raise GraphError("no loop")
    E = [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]]
    defect = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    for _ in loop:
        pair = NilpotentPair([E, [[-x for x in r] for r in E]])
        N1, N2 = pair.N
        eta = _matexp([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(N1, N2)])
        defect = _matmul(eta, defect)
    val = defect[0][1]
    return int(val) if val.denominator == 1 else val


# Analysis


@dataclass
class MonodromyReport:
    smooth: bool
    verdict: str
    q: int
    trace: list = field(default_factory=list)
    instances: list = field(default_factory=list)  # per instance dicts
    witness: dict | None = None
    loop_pairing: int | None = None

    @property
    def nontrivial(self) -> bool:
        return self.verdict.startswith("NONTRIVIAL")

    def to_json(self) -> dict:
        return {
            "smooth": self.smooth,
            "verdict": self.verdict,
            "q": self.q,
            "trace": list(self.trace),
            "instances": list(self.instances),
            "witness": self.witness,
            "loop_pairing": self.loop_pairing,
        }


def analyze_instance(inst: LineInstance, q: int) -> dict:
    p = line_presentation(inst, q)
    phi = monodromy_automorphism(p)
    verdict = is_inner(phi, q)
    return {
        "instance": inst.to_json(),
        "generators": list(p.algebra.generator_labels),
        "gr_dims": p.algebra.gr_dims(),
        "inner": verdict.inner,
        "summary": verdict.summary(),
        "verdict": verdict.to_json(),
    }


def analyze(g: DualGraph, base=None, q: int = 4, jobs: int = 1) -> MonodromyReport:
    """Decide whether the monodromy is trivial in Out(L/Fil^{q+1})."""
    v = validate_graph(g, "minimal_semistable")
    if not v:
        raise GraphError("; ".join(v.problems))
    if base is None:
        base = GoodPoint(g.vertices[0].id)
    _check_base(g, base)
    if not g.edges:
        vid = g.vertices[0].id
        p = presentation(g, q)
        if isinstance(base, GoodPoint):
            return MonodromyReport(True, "trivial in Aut", q, ["smooth, good base"], witness={"identity": True})
        k = g.vertex(vid).marked - 1
        e = p.points[(vid, k)]
        phi = LieAutomorphism.inner(base.slope * e)
        ver = is_inner(phi, q)
        if not ver.inner:
            raise ArithmeticError("inner monodromy not recognised as inner")
        verdict = "inner (trivial in Out)"
        return MonodromyReport(
            True,
            verdict,
            q,
            [f"smooth, base at a marked point of {vid} with slope {base.slope}"],
            witness={"log_delta": (base.slope * e).to_json(), "recovered": ver.witness.to_json(),
                     "identity": not (base.slope * e)},
        )
    if not g.is_tree():
        loop = find_loop(g)
        val = loop_check(g, loop)
        return MonodromyReport(
            False,
            f"NONTRIVIAL in Out (loop pairing {val})",
            q,
            [f"loop through edges {', '.join(loop)} of length {len(loop)}"],
            witness={"loop": loop},
            loop_pairing=val,
        )
    start = _base_vertex(g, base)
    instances, trace = reduce(g, start)
    trace.append("base transferred to the tangential side of the first edge of each instance")
    if jobs > 1 and len(instances) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(analyze_instance, instances, [q] * len(instances)))
    else:
        results = [analyze_instance(inst, q) for inst in instances]
    bad = [r for r in results if not r["inner"]]
    if bad:
        d = bad[0]["verdict"]["obstruction_degree"]
        verdict = f"NONTRIVIAL in Out (obstruction degree {d}→{d + 1})"
        witness = bad[0]["verdict"]
    else:
        verdict = f"trivial up to Fil^{q + 1}"
        witness = None
    return MonodromyReport(False, verdict, q, trace, results, witness)


def _check_base(g: DualGraph, base) -> None:
    if isinstance(base, GoodPoint):
        g.vertex(base.vertex)
    elif isinstance(base, MarkedPoint):
        if g.vertex(base.vertex).marked < 1:
            raise GraphError("marked base needs a marked point at the vertex")
        if base.slope < 1:
            raise GraphError("slope must be >= 1")
    elif isinstance(base, TangentialSide):
        e = g.edge(base.edge)
        if base.side not in (0, 1):
            raise GraphError("side must be 0 or 1")
        del e
    else:
        raise GraphError("unknown base datum")


def _base_vertex(g: DualGraph, base):
    if isinstance(base, TangentialSide):
        return g.edge(base.edge).ends[base.side]
    return base.vertex
