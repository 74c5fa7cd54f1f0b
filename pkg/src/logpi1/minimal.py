"""Inductive 1-minimal models of augmented cdgas.

Stage 1 adjoins generators for H^1(A) with zero differential.  Stage q
adjoins one generator per class of the relative group
ker(H^2(M(q-1)) -> H^2(A)), attached along a cocycle representative.  When A
carries a weight grading (for instance weight = degree on an algebra with
zero differential) generators inherit weights and every linear problem
splits by weight.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .cdga import Cdga, CdgaMorphism, Report, make_cdga, validate
from .exactlin import (
    ONE,
    ZERO,
    CochainComplex,
    Echelon,
    GradedMap,
    GradedSpace,
    Matrix,
    add_to,
    cohomology_of,
    cone_cohomology,
)
from .nilpotent_lie import LieAlgebra

# Free graded-commutative algebra on degree-1 generators


def wedge_sort(t: tuple) -> tuple[int, tuple]:
    """Sign and sorted form of a product of degree-1 generators (0 if repeated)."""
    if len(set(t)) != len(t):
        return 0, ()
    sign = 1
    lst = list(t)
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                sign = -sign
    return sign, tuple(lst)


class Exterior:
    """Exterior algebra on weighted degree-1 generators with d given on
    generators as combinations of pairs (a, b), a < b."""

    def __init__(self, labels, weights, dgen):
        self.labels = list(labels)
        self.weights = list(weights)
        self.dgen = [dict(x) for x in dgen]
        self._basis_cache: dict = {}

    @property
    def ngens(self) -> int:
        return len(self.labels)

    def basis(self, n: int, w: int | None = None) -> list[tuple]:
        """Increasing n-tuples of generator indices of total weight w (any if None)."""
        key = (n, w, self.ngens)
        got = self._basis_cache.get(key)
        if got is not None:
            return got
        if w is None:
            out = list(combinations(range(self.ngens), n))
        else:
            out = []
            ws = self.weights

            def rec(start, left, rem, acc):
                if left == 0:
                    if rem == 0:
                        out.append(tuple(acc))
                    return
                for i in range(start, self.ngens):
                    if ws[i] > rem:
                        continue
                    acc.append(i)
                    rec(i + 1, left - 1, rem - ws[i], acc)
                    acc.pop()

            rec(0, n, w, [])
        self._basis_cache[key] = out
        return out

    def d_monomial(self, t: tuple) -> dict:
        """d of a product of generators, keyed by sorted tuples."""
        out: dict = {}
        for k, i in enumerate(t):
            if not self.dgen[i]:
                continue
            sgn = -1 if k % 2 else 1
            for (a, b), c in self.dgen[i].items():
                s, m = wedge_sort(t[:k] + (a, b) + t[k + 1:])
                if s:
                    add_to(out, {m: c * sgn * s})
        return out

    def d_block(self, n: int, w: int | None) -> Matrix:
        src = self.basis(n, w)
        tgt = {m: k for k, m in enumerate(self.basis(n + 1, w))}
        cols = []
        for t in src:
            cols.append({tgt[m]: c for m, c in self.d_monomial(t).items()})
        return Matrix(len(tgt), len(src), cols)

    def to_cdga(self, cap: int = 3, max_weight: int | None = None) -> Cdga:
        """Materialize degrees <= cap (and weights <= max_weight) as a table cdga."""
        basis_t, index = {}, {}
        for n in range(cap + 1):
            ts = [t for t in combinations(range(self.ngens), n)
                  if max_weight is None or sum(self.weights[i] for i in t) <= max_weight]
            basis_t[n] = ts
            index[n] = {t: k for k, t in enumerate(ts)}
        labels = {n: tuple("^".join(self.labels[i] for i in t) or "1" for t in basis_t[n]) for n in basis_t}
        prods = {}
        for p in range(1, cap + 1):
            for q in range(1, cap + 1 - p):
                for t1, i in index[p].items():
                    for t2, j in index[q].items():
                        s, m = wedge_sort(t1 + t2)
                        if s and m in index[p + q]:
                            prods[(p, i, q, j)] = {index[p + q][m]: s}
        diff = {}
        for n in range(cap):
            cols = []
            for t in basis_t[n]:
                col = {}
                for m, c in self.d_monomial(t).items():
                    if m in index[n + 1]:
                        col[index[n + 1][m]] = c
                cols.append(col)
            diff[n] = Matrix(len(basis_t[n + 1]), len(basis_t[n]), cols)
        weights = {n: tuple(sum(self.weights[i] for i in t) for t in basis_t[n]) for n in basis_t}
        out = make_cdga(labels, prods, diff, cap=cap, weights=weights)
        out._monomials = basis_t
        return out


# The model


@dataclass
class HirschStage:
    q: int
    labels: list
    weights: list
    attach: list  # per generator: {(a, b): c} with a < b earlier generators
    rho1: list  # per generator: sparse vector on A^1

    @property
    def dim(self) -> int:
        return len(self.labels)


@dataclass
class MinimalModel:
    source: Cdga
    stages: list = field(default_factory=list)
    weighted: bool = True

    @property
    def Q(self) -> int:
        return len(self.stages)

    def stage_dims(self) -> list[int]:
        return [s.dim for s in self.stages]

    def algebra(self, upto: int | None = None) -> Exterior:
        upto = self.Q if upto is None else upto
        labels, weights, dgen = [], [], []
        for s in self.stages[:upto]:
            labels += s.labels
            weights += s.weights
            dgen += s.attach
        return Exterior(labels, weights, dgen)

    def rho(self, upto: int | None = None) -> list[dict]:
        upto = self.Q if upto is None else upto
        out = []
        for s in self.stages[:upto]:
            out += s.rho1
        return out

    def assembled(self, cap: int = 3, max_weight: int | None = None) -> Cdga:
        return self.algebra().to_cdga(cap, max_weight)

    def to_json(self) -> dict:
        from .cdga import to_json
        from .jsonio import rat

        doc = to_json(self.source)
        stages = []
        offset = 0
        for s in self.stages:
            prev = self.algebra(s.q - 1)
            pairs = list(combinations(range(prev.ngens), 2))
            attach = [[rat(v.get(p, ZERO)) for v in s.attach] for p in pairs]
            rho1 = [[rat(v.get(k, ZERO)) for v in s.rho1] for k in range(self.source.dim(1))]
            stages.append({
                "dim": s.dim,
                "labels": list(s.labels),
                "weights": list(s.weights),
                "attach_basis": ["^".join((prev.labels[a], prev.labels[b])) for a, b in pairs],
                "attach": attach,
                "rho1": rho1,
            })
            offset += s.dim
        doc["stages"] = stages
        doc["weighted"] = self.weighted
        return doc


def model_from_json(doc: dict) -> MinimalModel:
    from .cdga import from_json
    from .jsonio import parse_rat

    a = from_json({k: v for k, v in doc.items() if k not in ("stages", "weighted")})
    m = MinimalModel(a, [], bool(doc.get("weighted", True)))
    n = 0
    for q, st in enumerate(doc.get("stages", []), start=1):
        pairs = list(combinations(range(n), 2))
        dim = int(st["dim"])
        attach = [{} for _ in range(dim)]
        for r, row in enumerate(st["attach"]):
            for k, x in enumerate(row):
                x = parse_rat(x)
                if x:
                    attach[k][pairs[r]] = x
        rho1 = [{} for _ in range(dim)]
        for r, row in enumerate(st["rho1"]):
            for k, x in enumerate(row):
                x = parse_rat(x)
                if x:
                    rho1[k][r] = x
        m.stages.append(HirschStage(q, list(st["labels"]), [int(x) for x in st["weights"]], attach, rho1))
        n += dim
    return m


def _weight_blocks(a: Cdga, weighted: bool) -> dict:
    """degree -> weight -> list of basis indices."""
    out = {}
    for n in range(a.cap + 1):
        blocks: dict = {}
        for i in range(a.dim(n)):
            w = a.weight(n, i) if weighted else 0
            blocks.setdefault(w, []).append(i)
        out[n] = blocks
    return out


def _submatrix(m: Matrix, rows: list, cols: list) -> Matrix:
    pos = {r: k for k, r in enumerate(rows)}
    return Matrix(len(rows), len(cols), [{pos[i]: c for i, c in m.cols[j].items() if i in pos} for j in cols])


def _rho_products(a: Cdga, rho: list, pairs: list, rows: list) -> Matrix:
    """Matrix of e_a e_b -> rho(e_a) rho(e_b) restricted to A^2 indices ``rows``."""
    pos = {r: k for k, r in enumerate(rows)}
    cols = []
    for x, y in pairs:
        v = a.mul_vec(1, rho[x], 1, rho[y])
        cols.append({pos[i]: c for i, c in v.items() if i in pos})
    return Matrix(len(rows), len(pairs), cols)


def _has_zero_differential(a: Cdga) -> bool:
    return all(a.d(n).is_zero() for n in range(a.cap + 1))


def build(a: Cdga, Q: int = 4, section: str = "pivot") -> MinimalModel:
    """Stages 1..Q of the 1-minimal model of a.

    ``section`` selects the deterministic representative rule: "pivot" scans
    basis vectors in order, "reverse" in reverse order."""
    if Q < 1:
        raise ValueError("need at least one stage")
    rep = validate(a)
    if not rep:
        raise ValueError(f"invalid input algebra: {rep.failure} at {rep.where}")
    if a.cohomology(0).dim != 1:
        raise ValueError("H^0 of the input is not Q")
    if a.weights is None and _has_zero_differential(a):
        a = Cdga(a.cap, a.basis, a.mult, a.diff, a.augmentation, a.unit,
                 {n: (n,) * a.dim(n) for n in range(a.cap + 1)}, a.filt, a.filt_cap)
    weighted = a.weights is not None
    order = (lambda i: -i) if section == "reverse" else None
    if section not in ("pivot", "reverse"):
        raise ValueError(f"unknown section rule {section!r}")
    blocks = _weight_blocks(a, weighted)
    model = MinimalModel(a, [], weighted)

    # stage 1: H^1(A), weight by weight
    labels, weights, rho1 = [], [], []
    for w in sorted(blocks[1]):
        i1 = blocks[1][w]
        i0 = blocks[0].get(w, [])
        i2 = blocks[2].get(w, []) if a.cap >= 2 else []
        d0 = _submatrix(a.d(0), i1, i0)
        d1 = _submatrix(a.d(1), i2, i1)
        h = cohomology_of(d0, d1, 1)
        reps = _order_reps(h.reps, order, d0, d1)
        for r in reps:
            v = {i1[k]: c for k, c in r.items()}
            rho1.append(v)
            weights.append(w)
            labels.append(_class_label(a, v, len(labels)))
    model.stages.append(HirschStage(1, labels, weights, [{} for _ in labels], rho1))

    for q in range(2, Q + 1):
        model.stages.append(_next_stage(model, a, blocks, q, order, weighted))
    return model


def _order_reps(reps, order, d_in, d_out):
    if order is None:
        return reps
    # reverse rule: rebuild representatives scanning kernel vectors backwards
    cyc = d_out.kernel()
    ech = Echelon()
    nb = 0
    for b in d_in.image():
        ech.insert(b, nb)
        nb += 1
    out = []
    for z in reversed(cyc):
        if ech.insert(z, nb + len(out)) is None:
            out.append(z)
    return out


def _class_label(a: Cdga, v: dict, k: int) -> str:
    if len(v) == 1:
        (i, c), = v.items()
        if c == ONE:
            return a.labels(1)[i]
    return f"h{k + 1}"


def relative_classes(model: MinimalModel, a: Cdga, blocks: dict, upto: int, w: int):
    """Representatives (z, a) of ker(H^2(M(upto)) -> H^2(A)) in weight w, plus
    the ambient data.  z is in Lambda^2, rho(z) = d_A a."""
    ext = model.algebra(upto)
    rho = model.rho(upto)
    wsel = w if model.weighted else None
    pairs = ext.basis(2, wsel)
    if not pairs:
        return [], ext
    d2 = ext.d_block(2, wsel)
    cycles = d2.kernel()
    i1 = blocks[1].get(w, []) if model.weighted else list(range(a.dim(1)))
    i2 = blocks[2].get(w, []) if model.weighted else list(range(a.dim(2)))
    R = _rho_products(a, rho, pairs, i2)
    dA = _submatrix(a.d(1), i2, i1)
    # kernel of (c, x) -> R(sum c z) - dA x
    zmat = Matrix(len(pairs), len(cycles), cycles)
    Rz = R @ zmat
    big = Matrix(len(i2), len(cycles) + len(i1), Rz.cols + [{k: -c for k, c in col.items()} for col in dA.cols])
    ker = big.kernel()
    K = []
    for v in ker:
        cpart = {k: c for k, c in v.items() if k < len(cycles)}
        if cpart:
            K.append(zmat.apply(cpart))
    gens1 = ext.basis(1, wsel)
    d1 = ext.d_block(1, wsel)
    return (K, d1, pairs, gens1, R, dA, i1), ext


def _next_stage(model, a, blocks, q, order, weighted) -> HirschStage:
    prev = model.algebra(q - 1)
    if weighted:
        wlist = sorted({sum(prev.weights[i] for i in t) for t in combinations(range(prev.ngens), 2)})
    else:
        wlist = [0]
    labels, weights, attach, rho1 = [], [], [], []
    for w in wlist:
        data, ext = relative_classes(model, a, blocks, q - 1, w)
        if not data:
            continue
        K, d1, pairs, gens1, R, dA, i1 = data
        ech = Echelon()
        nb = 0
        for b in d1.image():
            ech.insert(b, nb)
            nb += 1
        cands = list(reversed(K)) if order else K
        chosen = []
        for z in cands:
            if ech.insert(z, nb + len(chosen)) is None:
                chosen.append(z)
        for z in chosen:
            target = R.apply(z)
            x = dA.solve(target)
            if x is None:
                raise ArithmeticError("relative class without a lift")
            attach.append({pairs[k]: c for k, c in z.items()})
            rho1.append({i1[k]: c for k, c in x.items()})
            weights.append(w if weighted else q)
            labels.append(f"e{q}_{len(labels) + 1}")
    return HirschStage(q, labels, weights, attach, rho1)


# Checks


def check_minimality(m: MinimalModel, a: Cdga | None = None) -> Report:
    """Re-verify the defining properties stage by stage."""
    a = m.source if a is None else a
    weighted = m.weighted
    blocks = _weight_blocks(a, weighted)
    n_before = 0
    for s in m.stages:
        q = s.q
        if q == 1 and any(s.attach):
            return Report(False, "stage 1 generators must be closed", (1,))
        for v in s.attach:
            if any(b >= n_before for (_, b) in v):
                return Report(False, "attaching map leaves earlier generators", (q,))
        ext = m.algebra(q)
        rho = m.rho(q)
        wl = sorted(set(ext.weights)) if weighted else [None]
        # d^2 = 0 and rho is a chain map on generators
        for k in range(ext.ngens):
            if _d_of_pairs(ext, ext.dgen[k]):
                return Report(False, "d^2 != 0", (q, ext.labels[k]))
            lhs = a.d(1).apply(rho[k])
            rhs: dict = {}
            for (x, y), c in ext.dgen[k].items():
                add_to(rhs, a.mul_vec(1, rho[x], 1, rho[y]), c)
            if lhs != rhs:
                return Report(False, "rho is not a chain map", (q, ext.labels[k]))
        # H^1(M(q)) -> H^1(A) is an isomorphism
        z1 = []
        for w in wl:
            d1 = ext.d_block(1, w)
            g1 = ext.basis(1, w)
            for v in d1.kernel():
                z1.append({g1[k][0]: c for k, c in v.items()})
        ech = Echelon()
        nb = 0
        for b in a.d(0).image():
            ech.insert(b, nb)
            nb += 1
        images = []
        for v in z1:
            img: dict = {}
            for k, c in v.items():
                add_to(img, rho[k], c)
            images.append(img)
        for img in images:
            if ech.insert(img) is not None:
                return Report(False, "H^1 map not injective", (q,))
        if len(images) != a.cohomology(1).dim:
            return Report(False, "H^1 map not surjective", (q,))
        # relative H^2 of stage q-1 dies in stage q
        if q >= 2:
            rep = _check_relative_kill(m, a, blocks, q)
            if not rep:
                return rep
        n_before += s.dim
    return Report(True)


def _d_of_pairs(ext: Exterior, v: dict) -> dict:
    out: dict = {}
    for (x, y), c in v.items():
        add_to(out, ext.d_monomial((x, y)), c)
    return out


def _cone_pieces(m: MinimalModel, a: Cdga, blocks: dict, upto: int, w):
    """Cone of rho: M(upto) -> A in degrees 1..3 at weight w as an exactlin complex."""
    ext = m.algebra(upto)
    rho = m.rho(upto)
    wsel = w if m.weighted else None
    sel = (lambda n: blocks[n].get(w, [])) if m.weighted else (lambda n: list(range(a.dim(n))))
    mb = {n: ext.basis(n, wsel) for n in range(0, 4)}
    mb[0] = [()] if not m.weighted or w == 0 else []
    ab = {n: sel(n) if n <= a.cap else [] for n in range(0, 4)}
    mspace = GradedSpace({n: tuple(mb[n]) for n in range(4)})
    aspace = GradedSpace({n: tuple(ab[n]) for n in range(4)})
    mdiff = {0: Matrix.zero(len(mb[1]), len(mb[0]))}
    for n in (1, 2):
        mdiff[n] = ext.d_block(n, wsel)
    adiff = {n: _submatrix(a.d(n), ab[n + 1], ab[n]) for n in range(3)}
    blocks_rho = {}
    for n in range(4):
        pos = {r: k for k, r in enumerate(ab[n])}
        cols = []
        for t in mb[n]:
            v = {next(iter(a.unit)): ONE}
            for k, x in enumerate(t):
                v = a.mul_vec(k, v, 1, rho[x])
            cols.append({pos[i]: c for i, c in v.items() if i in pos})
        blocks_rho[n] = Matrix(len(ab[n]), len(mb[n]), cols)
    A = CochainComplex(mspace, mdiff)
    B = CochainComplex(aspace, adiff)
    phi = GradedMap(mspace, aspace, 0, blocks_rho)
    return A, B, phi


def cone_dimension(m: MinimalModel, a: Cdga, upto: int, n: int = 2) -> int:
    """dim H^n of the cone of rho on M(upto), summed over weights."""
    blocks = _weight_blocks(a, m.weighted)
    ext = m.algebra(upto)
    wl = sorted({sum(ext.weights[i] for i in t) for t in combinations(range(ext.ngens), 2)} | {1, 0}) if m.weighted else [0]
    total = 0
    for w in wl:
        A, B, phi = _cone_pieces(m, a, blocks, upto, w)
        total += cone_cohomology(phi, A, B, n).dim
    return total


def _check_relative_kill(m: MinimalModel, a: Cdga, blocks: dict, q: int) -> Report:
    prev = m.algebra(q - 1)
    wl = sorted({sum(prev.weights[i] for i in t) for t in combinations(range(prev.ngens), 2)}) if m.weighted else [0]
    for w in wl:
        data, _ = relative_classes(m, a, blocks, q - 1, w)
        if not data:
            continue
        K, d1, pairs, gens1, R, dA, i1 = data
        if not K:
            continue
        ext = m.algebra(q)
        wsel = w if m.weighted else None
        new_pairs = {t: k for k, t in enumerate(ext.basis(2, wsel))}
        dnew = ext.d_block(1, wsel)
        ech = Echelon()
        for j, col in enumerate(dnew.cols):
            ech.insert(col, j)
        for z in K:
            zz = {new_pairs[pairs[k]]: c for k, c in z.items()}
            if not ech.contains(zz):
                return Report(False, "relative H^2 class survives", (q, w))
    return Report(True)


# Dual Lie algebra


def dual_lie(m: MinimalModel) -> LieAlgebra:
    """Lie algebra on the dual basis of the generators, bracket dual to -d."""
    ext = m.algebra()
    n = ext.ngens
    table: dict = {}
    for k in range(n):
        for (a, b), c in ext.dgen[k].items():
            v = table.setdefault((a, b), {})
            add_to(v, {k: -c})
    table = {key: v for key, v in table.items() if v}
    labels = [f"{lab}*" for lab in ext.labels]
    return lie_from_structure(labels, table, m.Q)


def lie_from_structure(labels, table, q: int, name: str = "dual") -> LieAlgebra:
    """Re-base a nilpotent Lie algebra given by structure constants on the
    lower central series, preferring original basis vectors."""
    n = len(labels)

    def br(u, v):
        out: dict = {}
        for i, x in u.items():
            for j, y in v.items():
                if i == j:
                    continue
                if i < j:
                    add_to(out, table.get((i, j), {}), x * y)
                else:
                    add_to(out, table.get((j, i), {}), -x * y)
        return out

    fil = [[{i: ONE} for i in range(n)]]
    while fil[-1]:
        ech = Echelon()
        for u in fil[-1]:
            for i in range(n):
                ech.insert(br({i: ONE}, u))
        fil.append(ech.basis())
        if len(fil) > q + 1:
            raise ValueError("nilpotency class exceeds the stage count")
    top = len(fil) - 1
    new_basis, degrees, new_labels = [], [], []
    for deg in range(1, top + 1):
        lower = Echelon()
        for v in fil[deg]:
            lower.insert(v)
        chosen = []
        for i in range(n):
            e = {i: ONE}
            inside = Echelon()
            for v in fil[deg - 1]:
                inside.insert(v)
            if not inside.contains(e):
                continue
            if lower.insert(e) is None:
                chosen.append((e, labels[i]))
        for v in fil[deg - 1]:
            if lower.insert(v) is None:
                chosen.append((v, f"c{deg}_{len(chosen) + 1}"))
        for v, lab in chosen:
            new_basis.append(v)
            degrees.append(deg)
            new_labels.append(lab)
    P = Echelon()
    for k, v in enumerate(new_basis):
        P.insert(v, k)
    new_table = {}
    for i in range(len(new_basis)):
        for j in range(i + 1, len(new_basis)):
            v = br(new_basis[i], new_basis[j])
            if v:
                new_table[(i, j)] = P.coordinates(v)
    gens = [k for k, d in enumerate(degrees) if d == 1]
    return LieAlgebra(new_labels, degrees, q, gens, new_table, None, name=name)


# Homotopies


@dataclass
class HomotopyResult:
    exists: bool
    proven: bool
    stage: int | None = None
    cap: int | None = None
    h: list = field(default_factory=list)  # per generator: (a_k list, b_k list)

    def __bool__(self) -> bool:
        return self.exists


def _poly_mul(x, y, a2: Cdga):
    """Product of two degree-1 elements of Q[t,dt] (x) A' written as
    (a: {k: vec in A^1}, b: {k: vec in A^0}); returns (p: {k: vec in A^2},
    r: {k: vec in A^1}) for t^k and t^k dt parts."""
    xa, xb = x
    ya, yb = y
    p: dict = {}
    r: dict = {}
    for i, u in xa.items():
        for j, v in ya.items():
            add_to(p.setdefault(i + j, {}), a2.mul_vec(1, u, 1, v))
        for j, v in yb.items():
            # (t^i a)(t^j dt b) = - t^{i+j} dt a b
            add_to(r.setdefault(i + j, {}), a2.mul_vec(1, u, 0, v), -ONE)
    for i, u in xb.items():
        for j, v in ya.items():
            add_to(r.setdefault(i + j, {}), a2.mul_vec(0, u, 1, v))
    return p, r


def _solve_generator(f_rho, rho_phi, hde, a2: Cdga, D: int, extra=None):
    """Unknowns a_0..a_D in A'^1, b_0..b_{D-1} in A'^0 (then optional extra
    columns).  Returns solution dict or None."""
    n1, n0, n2 = a2.dim(1), a2.dim(0), a2.dim(2)
    ncols = (D + 1) * n1 + D * n0
    p, r = hde
    if any(k > D and v for k, v in p.items()) or any(k > D - 1 and v for k, v in r.items()):
        return None
    eqs: list = []

    def acol(k, i):
        return k * n1 + i

    def bcol(k, i):
        return (D + 1) * n1 + k * n0 + i

    # t^k (x) A^2 : d a_k = p_k
    dA1 = a2.d(1)
    for k in range(D + 1):
        block = {}
        for i in range(n1):
            for row, c in dA1.cols[i].items():
                block.setdefault(row, {})[acol(k, i)] = c
        for row in range(n2):
            eqs.append((block.get(row, {}), p.get(k, {}).get(row, ZERO)))
    # t^k dt (x) A^1 : (k+1) a_{k+1} - d b_k = r_k
    dA0 = a2.d(0)
    for k in range(D):
        block = {}
        for i in range(n1):
            block.setdefault(i, {})[acol(k + 1, i)] = Fraction(k + 1)
        for i in range(n0):
            for row, c in dA0.cols[i].items():
                block.setdefault(row, {})[bcol(k, i)] = block.get(row, {}).get(bcol(k, i), ZERO) - c
        for row in range(n1):
            eqs.append((block.get(row, {}), r.get(k, {}).get(row, ZERO)))
    # p0 and p1
    for i in range(n1):
        eqs.append(({acol(0, i): ONE}, f_rho.get(i, ZERO)))
    extra_cols = 0
    if extra is not None:
        extra_cols = len(extra)
    for i in range(n1):
        row = {acol(k, i): ONE for k in range(D + 1)}
        for e, col in enumerate(extra or []):
            c = col.get(i)
            if c:
                row[ncols + e] = -c
        eqs.append((row, rho_phi.get(i, ZERO)))
    total = ncols + extra_cols
    return eqs, total, acol, bcol


def _solve_eqs(eqs, total, more=()):
    eqs = list(eqs) + list(more)
    cols = [{} for _ in range(total)]
    rhs = {}
    for r, (row, b) in enumerate(eqs):
        for j, c in row.items():
            if c:
                cols[j][r] = c
        if b:
            rhs[r] = b
    M = Matrix(len(eqs), total, cols)
    return M.solve(rhs)


def _h_of_dgen(dgen: dict, hs: list, a2: Cdga):
    p: dict = {}
    r: dict = {}
    for (x, y), c in dgen.items():
        pp, rr = _poly_mul(hs[x], hs[y], a2)
        for k, v in pp.items():
            add_to(p.setdefault(k, {}), v, c)
        for k, v in rr.items():
            add_to(r.setdefault(k, {}), v, c)
    return {k: v for k, v in p.items() if v}, {k: v for k, v in r.items() if v}


def _apply_rho(rho_target: list, x: dict) -> dict:
    out: dict = {}
    for k, c in x.items():
        add_to(out, rho_target[k], c)
    return out


def _check_phi(phi: list, m1: Exterior, m2: Exterior) -> bool:
    """phi on generators (vectors over m2 generators) commutes with d."""
    for k in range(m1.ngens):
        lhs: dict = {}
        for (x, y), c in m1.dgen[k].items():
            for i, a in phi[x].items():
                for j, b in phi[y].items():
                    s, t = wedge_sort((i, j))
                    if s:
                        add_to(lhs, {t: a * b * c * s})
        rhs: dict = {}
        for i, a in phi[k].items():
            add_to(rhs, m2.dgen[i], a)
        if lhs != rhs:
            return False
    return True


def homotopy_lift_check(f: CdgaMorphism, mA: MinimalModel, mB: MinimalModel, phi: list) -> HomotopyResult:
    """Is there a Sullivan homotopy between f o rho and rho' o phi?

    phi lists, per generator of mA, its image as a combination of generators
    of mB.  h is solved generator by generator with polynomial cap q+1,
    retried once at twice the cap."""
    m1, m2 = mA.algebra(), mB.algebra()
    if len(phi) != m1.ngens or not _check_phi(phi, m1, m2):
        raise ValueError("candidate is not a cdga morphism between the models")
    rho_a, rho_b = mA.rho(), mB.rho()
    a2 = f.target
    Q = mA.Q
    result = None
    for D in (Q + 1, 2 * (Q + 1)):
        result = _homotopy_at_cap(f, m1, rho_a, rho_b, phi, a2, D, mA)
        if result.exists or result.proven:
            return result
    return result


def _homotopy_at_cap(f, m1, rho_a, rho_b, phi, a2, D, mA) -> HomotopyResult:
    hs: list = []
    free_so_far = False
    stage_of = []
    for s in mA.stages:
        stage_of += [s.q] * s.dim
    for k in range(m1.ngens):
        f_rho = f.apply(1, rho_a[k])
        rho_phi = _apply_rho(rho_b, phi[k])
        hde = _h_of_dgen(m1.dgen[k], hs, a2)
        built = _solve_generator(f_rho, rho_phi, hde, a2, D)
        if built is None:
            # h(de) needs more powers of t than the cap allows
            return HomotopyResult(False, False, stage_of[k], D, hs)
        eqs, total, acol, bcol = built
        sol = _solve_eqs(eqs, total)
        if sol is None:
            # inconsistency is a proof only if no earlier choice was free
            return HomotopyResult(False, not free_so_far, stage_of[k], D, hs)
        if _has_freedom(eqs, total):
            free_so_far = True
        n1, n0 = a2.dim(1), a2.dim(0)
        av = {kk: {i: sol.get(acol(kk, i), ZERO) for i in range(n1) if sol.get(acol(kk, i))} for kk in range(D + 1)}
        bv = {kk: {i: sol.get(bcol(kk, i), ZERO) for i in range(n0) if sol.get(bcol(kk, i))} for kk in range(D)}
        hs.append(({kk: v for kk, v in av.items() if v}, {kk: v for kk, v in bv.items() if v}))
    return HomotopyResult(True, True, None, D, hs)


def _has_freedom(eqs, total) -> bool:
    cols = [{} for _ in range(total)]
    for r, (row, _) in enumerate(eqs):
        for j, c in row.items():
            if c:
                cols[j][r] = c
    return Matrix(len(eqs), total, cols).rank() < total


def extend_morphism(f: CdgaMorphism, mA: MinimalModel, mB: MinimalModel, stage1: list) -> tuple[list, HomotopyResult]:
    """Extend a stage-1 map (images of stage-1 generators of mA over stage-1
    generators of mB) to all stages together with a homotopy.

    For each later generator e the unknowns are phi(e) in M'^1 and h(e); the
    conditions d' phi(e) = phi(d e), p0 h(e) = f rho(e), p1 h(e) = rho' phi(e)
    and d h(e) = h(d e) are linear once earlier generators are fixed."""
    m1, m2 = mA.algebra(), mB.algebra()
    rho_a, rho_b = mA.rho(), mB.rho()
    a2 = f.target
    D = mA.Q + 1
    n1_stage = mA.stages[0].dim
    phi = [dict(v) for v in stage1]
    if len(phi) != n1_stage:
        raise ValueError("stage-1 map has the wrong size")
    hs: list = []
    pairs2 = {t: k for k, t in enumerate(combinations(range(m2.ngens), 2))}
    for k in range(m1.ngens):
        f_rho = f.apply(1, rho_a[k])
        hde = _h_of_dgen(m1.dgen[k], hs, a2)
        if k < n1_stage:
            rho_phi = _apply_rho(rho_b, phi[k])
            built = _solve_generator(f_rho, rho_phi, hde, a2, D)
            if built is None:
                raise ArithmeticError("no homotopy for the stage-1 map")
            eqs, total, acol, bcol = built
            sol = _solve_eqs(eqs, total)
        else:
            extra = [rho_b[j] for j in range(m2.ngens)]
            built = _solve_generator(f_rho, {}, hde, a2, D, extra)
            if built is None:
                raise ArithmeticError("polynomial cap exhausted")
            eqs, total, acol, bcol = built
            base = total - m2.ngens
            # d' phi(e) = phi(d e)
            target: dict = {}
            for (x, y), c in m1.dgen[k].items():
                for i, a in phi[x].items():
                    for j, b in phi[y].items():
                        s, t = wedge_sort((i, j))
                        if s:
                            add_to(target, {pairs2[t]: a * b * c * s})
            more = []
            rows: dict = {}
            for j in range(m2.ngens):
                for t, c in m2.dgen[j].items():
                    rows.setdefault(pairs2[t], {})[base + j] = c
            for r in set(rows) | set(target):
                more.append((rows.get(r, {}), target.get(r, ZERO)))
            sol = _solve_eqs(eqs, total, more)
            if sol is None:
                raise ArithmeticError("cannot extend the morphism")
            phi.append({j: sol[base + j] for j in range(m2.ngens) if sol.get(base + j)})
        if sol is None:
            raise ArithmeticError("no homotopy for the stage-1 map")
        n1, n0 = a2.dim(1), a2.dim(0)
        av = {kk: {i: sol[acol(kk, i)] for i in range(n1) if sol.get(acol(kk, i))} for kk in range(D + 1)}
        bv = {kk: {i: sol[bcol(kk, i)] for i in range(n0) if sol.get(bcol(kk, i))} for kk in range(D)}
        hs.append(({kk: v for kk, v in av.items() if v}, {kk: v for kk, v in bv.items() if v}))
    return phi, HomotopyResult(True, True, None, D, hs)


def identity_morphism(a: Cdga) -> CdgaMorphism:
    return CdgaMorphism(a, a, {n: Matrix.identity(a.dim(n)) for n in range(a.cap + 1)})


def extend_algebraically(mA: MinimalModel, mB: MinimalModel, stage1: list) -> list:
    """Extend a stage-1 map to a cdga morphism M -> M' ignoring the targets:
    each later generator goes to the pivot solution of d' x = phi(d e)."""
    m1, m2 = mA.algebra(), mB.algebra()
    pairs2 = {t: k for k, t in enumerate(combinations(range(m2.ngens), 2))}
    dmat = Matrix(len(pairs2), m2.ngens, [{pairs2[t]: c for t, c in m2.dgen[j].items()} for j in range(m2.ngens)])
    phi = [dict(v) for v in stage1]
    for k in range(len(phi), m1.ngens):
        target: dict = {}
        for (x, y), c in m1.dgen[k].items():
            for i, a in phi[x].items():
                for j, b in phi[y].items():
                    s, t = wedge_sort((i, j))
                    if s:
                        add_to(target, {pairs2[t]: a * b * c * s})
        x = dmat.solve(target)
        if x is None:
            raise ArithmeticError(f"generator {m1.labels[k]} has no image")
        phi.append(x)
    return phi
