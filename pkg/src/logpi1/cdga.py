"""Finite graded-commutative dg algebras over Q with a degree cap.

An algebra stores, per degree n <= cap, a list of basis labels, the product
of basis elements as sparse vectors, the differential as matrices and an
augmentation row on degree 0.  Optional per-basis ``weights`` record an extra
grading preserved by product and differential (used to split computations).
Optional ``filt`` values with ``filt_cap`` describe a second truncation: a
product whose filtration exceeds ``filt_cap`` is set to zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from .exactlin import (
    ONE,
    ZERO,
    CochainComplex,
    GradedSpace,
    Matrix,
    add_to,
    cohomology,
    scaled,
)


@dataclass
class Report:
    ok: bool
    failure: str | None = None
    where: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class Cdga:
    cap: int
    basis: dict  # degree -> tuple of labels
    mult: dict  # (p, q) -> table[i][j] sparse vector in degree p + q
    diff: dict  # n -> Matrix  dim(n+1) x dim(n)
    augmentation: tuple  # row over degree 0
    unit: dict = field(default_factory=lambda: {0: ONE})
    weights: dict | None = None  # degree -> tuple of ints
    filt: dict | None = None
    filt_cap: int | None = None

    def dim(self, n: int) -> int:
        if n < 0 or n > self.cap:
            return 0
        return len(self.basis.get(n, ()))

    def labels(self, n: int) -> tuple:
        return tuple(self.basis.get(n, ())) if 0 <= n <= self.cap else ()

    @property
    def space(self) -> GradedSpace:
        return GradedSpace({n: self.labels(n) for n in range(self.cap + 1)})

    def d(self, n: int) -> Matrix:
        m = self.diff.get(n)
        if m is None:
            return Matrix.zero(self.dim(n + 1), self.dim(n))
        return m

    def weight(self, n: int, i: int) -> int:
        return self.weights[n][i] if self.weights else 0

    def mul(self, p: int, i: int, q: int, j: int) -> dict:
        if p + q > self.cap:
            return {}
        t = self.mult.get((p, q))
        if t is None:
            return {}
        return t[i][j]

    def mul_vec(self, p: int, x: dict, q: int, y: dict) -> dict:
        out: dict = {}
        if p + q > self.cap:
            return out
        for i, a in x.items():
            for j, b in y.items():
                add_to(out, self.mul(p, i, q, j), a * b)
        return out

    def truncated(self, p: int, i: int, q: int, j: int) -> bool:
        """True if the product of these two basis elements is cut by a cap."""
        if p + q > self.cap:
            return True
        if self.filt is None or self.filt_cap is None:
            return False
        return self.filt[p][i] + self.filt[q][j] > self.filt_cap

    def complex(self) -> CochainComplex:
        return CochainComplex(self.space, {n: self.d(n) for n in range(self.cap + 1)})

    def cohomology(self, n: int):
        return cohomology(self.complex(), n)

    def augmentation_ideal_dim(self, n: int) -> int:
        return self.dim(n) - (1 if n == 0 else 0)


def _zero_table(a_dim: int, b_dim: int) -> list:
    return [[{} for _ in range(b_dim)] for _ in range(a_dim)]


def make_cdga(
    basis: dict,
    products: dict | None = None,
    diff: dict | None = None,
    cap: int | None = None,
    weights: dict | None = None,
) -> Cdga:
    """Build an algebra with basis label 0 of degree 0 as the unit.

    ``products`` maps (p, i, q, j) to a sparse vector for p, q >= 1 with i, j
    indices; graded-commuted entries are filled in automatically.  Products
    with the unit are implied."""
    cap = max(basis) if cap is None else cap
    basis = {n: tuple(basis.get(n, ())) for n in range(cap + 1)}
    if not basis[0]:
        raise ValueError("degree 0 must contain the unit")
    mult = {}
    for p in range(cap + 1):
        for q in range(cap + 1 - p):
            mult[(p, q)] = _zero_table(len(basis[p]), len(basis[q]))
    for q in range(cap + 1):
        for j in range(len(basis[q])):
            mult[(0, q)][0][j] = {j: ONE}
            mult[(q, 0)][j][0] = {j: ONE}
    for (p, i, q, j), v in (products or {}).items():
        v = {k: Fraction(c) for k, c in v.items() if c}
        mult[(p, q)][i][j] = v
        mult[(q, p)][j][i] = scaled(v, (-1) ** (p * q))
    diffs = {}
    for n in range(cap + 1):
        m = (diff or {}).get(n)
        diffs[n] = m if m is not None else Matrix.zero(len(basis.get(n + 1, ())) if n < cap else 0, len(basis[n]))
    aug = tuple(ONE if i == 0 else ZERO for i in range(len(basis[0])))
    return Cdga(cap, basis, mult, diffs, aug, weights=weights)


def validate(a: Cdga) -> Report:
    """Check the cdga axioms on all basis pairs and triples inside the cap."""
    cap = a.cap
    for n in range(cap + 1):
        dn = a.d(n)
        tgt = a.dim(n + 1) if n < cap else 0
        if (dn.nrows, dn.ncols) != (tgt, a.dim(n)):
            return Report(False, "differential shape", (n,))
    for n in range(cap - 1):
        sq = a.d(n + 1) @ a.d(n)
        for j, c in enumerate(sq.cols):
            if c:
                return Report(False, "d^2 != 0", (n, a.labels(n)[j]))
    for (p, q), t in a.mult.items():
        if len(t) != a.dim(p) or any(len(r) != a.dim(q) for r in t):
            return Report(False, "multiplication table shape", (p, q))
    unit = dict(a.unit)
    for n in range(cap + 1):
        for i in range(a.dim(n)):
            e = {i: ONE}
            if a.mul_vec(0, unit, n, e) != e or a.mul_vec(n, e, 0, unit) != e:
                return Report(False, "unit law", (n, a.labels(n)[i]))
    if sum(a.augmentation[k] * c for k, c in unit.items()) != ONE:
        return Report(False, "augmentation of unit", ())
    for i in range(a.dim(0)):
        for j in range(a.dim(0)):
            if a.truncated(0, i, 0, j):
                continue
            xy = a.mul(0, i, 0, j)
            lhs = sum(a.augmentation[k] * c for k, c in xy.items())
            if lhs != a.augmentation[i] * a.augmentation[j]:
                return Report(False, "augmentation not multiplicative", (a.labels(0)[i], a.labels(0)[j]))
    for p in range(cap + 1):
        for q in range(cap + 1 - p):
            for i, j in iproduct(range(a.dim(p)), range(a.dim(q))):
                if a.truncated(p, i, q, j):
                    continue
                if a.mul(p, i, q, j) != scaled(a.mul(q, j, p, i), (-1) ** (p * q)):
                    return Report(False, "graded commutativity", (a.labels(p)[i], a.labels(q)[j]))
    for p in range(cap):
        for q in range(cap - p):
            dp, dq = a.d(p), a.d(q)
            for i, j in iproduct(range(a.dim(p)), range(a.dim(q))):
                if a.truncated(p, i, q, j):
                    continue
                if _leibniz_cut(a, p, i, q, j):
                    continue
                lhs = a.d(p + q).apply(a.mul(p, i, q, j))
                rhs = a.mul_vec(p + 1, dp.cols[i], q, {j: ONE})
                add_to(rhs, a.mul_vec(p, {i: ONE}, q + 1, dq.cols[j]), (-1) ** p)
                if lhs != rhs:
                    return Report(False, "Leibniz rule", (a.labels(p)[i], a.labels(q)[j]))
    for p in range(cap + 1):
        for q in range(cap + 1 - p):
            for r in range(cap + 1 - p - q):
                for i, j, k in iproduct(range(a.dim(p)), range(a.dim(q)), range(a.dim(r))):
                    if _assoc_cut(a, p, i, q, j, r, k):
                        continue
                    left = a.mul_vec(p + q, a.mul(p, i, q, j), r, {k: ONE})
                    right = a.mul_vec(p, {i: ONE}, q + r, a.mul(q, j, r, k))
                    if left != right:
                        return Report(
                            False, "associativity", (a.labels(p)[i], a.labels(q)[j], a.labels(r)[k])
                        )
    if a.weights is not None:
        rep = _check_weights(a)
        if not rep:
            return rep
    return Report(True)


def _filt_ok(a: Cdga, total: int) -> bool:
    return a.filt is None or a.filt_cap is None or total <= a.filt_cap


def _leibniz_cut(a: Cdga, p, i, q, j) -> bool:
    if a.filt is None:
        return False
    # d preserves the filtration value, so all terms share filt(x)+filt(y)
    return not _filt_ok(a, a.filt[p][i] + a.filt[q][j])


def _assoc_cut(a: Cdga, p, i, q, j, r, k) -> bool:
    if a.filt is None:
        return False
    return not _filt_ok(a, a.filt[p][i] + a.filt[q][j] + a.filt[r][k])


def _check_weights(a: Cdga) -> Report:
    w = a.weights
    for n in range(a.cap + 1):
        if len(w.get(n, ())) != a.dim(n):
            return Report(False, "weight list shape", (n,))
        for j, c in enumerate(a.d(n).cols):
            for i in c:
                if w[n + 1][i] != w[n][j]:
                    return Report(False, "differential breaks weight", (a.labels(n)[j],))
    for (p, q), t in a.mult.items():
        for i, row in enumerate(t):
            for j, v in enumerate(row):
                for k in v:
                    if w[p + q][k] != w[p][i] + w[q][j]:
                        return Report(False, "product breaks weight", (a.labels(p)[i], a.labels(q)[j]))
    return Report(True)


# Stock models


def marked_curve_model(g: int, r: int, cap: int = 3) -> Cdga:
    """Q in degree 0, a (2g + r - 1)-dimensional degree 1, nothing above."""
    if r < 1:
        raise ValueError("marked model needs r >= 1; use unmarked_curve_model")
    if g < 0:
        raise ValueError("genus must be nonnegative")
    n = 2 * g + r - 1
    basis = {0: ("1",), 1: tuple(f"v{i + 1}" for i in range(n))}
    weights = {0: (0,), 1: (1,) * n}
    for k in range(2, cap + 1):
        weights[k] = ()
    return make_cdga(basis, cap=cap, weights=weights)


def unmarked_curve_model(g: int, cap: int = 3) -> Cdga:
    """Cohomology ring of a closed genus-g surface with symplectic basis."""
    if g < 1:
        raise ValueError("unmarked model needs g >= 1")
    basis = {0: ("1",), 1: tuple(f"v{i + 1}" for i in range(2 * g)), 2: ("w",)}
    prods = {(1, 2 * i, 1, 2 * i + 1): {0: 1} for i in range(g)}
    weights = {0: (0,), 1: (1,) * (2 * g), 2: (2,)}
    for k in range(3, cap + 1):
        weights[k] = ()
    return make_cdga(basis, prods, cap=max(cap, 2), weights=weights)


def exterior_model(n: int = 1, cap: int = 3) -> Cdga:
    """Exterior algebra on n degree-1 generators with zero differential."""
    from itertools import combinations

    basis, index = {}, {}
    for k in range(cap + 1):
        combos = list(combinations(range(n), k))
        basis[k] = tuple("".join(f"x{i + 1}" for i in c) or "1" for c in combos)
        index[k] = {c: m for m, c in enumerate(combos)}
    prods = {}
    for p in range(1, cap + 1):
        for q in range(1, cap + 1 - p):
            for c1, i in index[p].items():
                for c2, j in index[q].items():
                    if set(c1) & set(c2):
                        continue
                    merged = c1 + c2
                    sign = _perm_sign(merged)
                    prods[(p, i, q, j)] = {index[p + q][tuple(sorted(merged))]: sign}
    weights = {k: (k,) * len(basis[k]) for k in range(cap + 1)}
    return make_cdga(basis, prods, cap=cap, weights=weights)


def _perm_sign(seq) -> int:
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def interval_algebra(D: int) -> Cdga:
    """Polynomial forms Q[t] + Q[t]dt modulo everything of t-degree > D,
    counting dt as degree one in t."""
    if D < 1:
        raise ValueError("polynomial cap must be >= 1")
    b0 = tuple(f"t^{k}" for k in range(D + 1))
    b1 = tuple(f"t^{k}dt" for k in range(D))
    mult = {
        (0, 0): [[{i + j: ONE} if i + j <= D else {} for j in range(D + 1)] for i in range(D + 1)],
        (0, 1): [[{i + j: ONE} if i + j <= D - 1 else {} for j in range(D)] for i in range(D + 1)],
        (1, 0): [[{i + j: ONE} if i + j <= D - 1 else {} for j in range(D + 1)] for i in range(D)],
    }
    d0 = Matrix(D, D + 1, [({k - 1: Fraction(k)} if k else {}) for k in range(D + 1)])
    return Cdga(
        cap=1,
        basis={0: b0, 1: b1},
        mult=mult,
        diff={0: d0, 1: Matrix.zero(0, D)},
        augmentation=tuple(ONE if k == 0 else ZERO for k in range(D + 1)),
        filt={0: tuple(range(D + 1)), 1: tuple(range(1, D + 1))},
        filt_cap=D,
    )


def tensor(a: Cdga, b: Cdga, cap: int | None = None) -> Cdga:
    """Graded tensor product with Koszul signs."""
    cap = min(a.cap + b.cap, max(a.cap, b.cap)) if cap is None else cap
    index, basis = {}, {}
    for n in range(cap + 1):
        pairs = [(p, i, n - p, j) for p in range(n + 1) for i in range(a.dim(p)) for j in range(b.dim(n - p))]
        index[n] = {pr: k for k, pr in enumerate(pairs)}
        basis[n] = tuple(f"{a.labels(p)[i]}*{b.labels(q)[j]}" for p, i, q, j in pairs)
    mult = {}
    for n1 in range(cap + 1):
        for n2 in range(cap + 1 - n1):
            table = _zero_table(len(basis[n1]), len(basis[n2]))
            for (p1, i1, q1, j1), k1 in index[n1].items():
                for (p2, i2, q2, j2), k2 in index[n2].items():
                    ab = a.mul(p1, i1, p2, i2)
                    bb = b.mul(q1, j1, q2, j2)
                    if not ab or not bb:
                        continue
                    sign = (-1) ** (q1 * p2)
                    out = table[k1][k2]
                    for x, cx in ab.items():
                        for y, cy in bb.items():
                            k = index[n1 + n2][(p1 + p2, x, q1 + q2, y)]
                            add_to(out, {k: sign * cx * cy})
            mult[(n1, n2)] = table
    diff = {}
    for n in range(cap + 1):
        cols = []
        for (p, i, q, j), _ in sorted(index[n].items(), key=lambda t: t[1]):
            col: dict = {}
            if n < cap:
                for x, c in a.d(p).cols[i].items():
                    add_to(col, {index[n + 1][(p + 1, x, q, j)]: c})
                for y, c in b.d(q).cols[j].items():
                    add_to(col, {index[n + 1][(p, i, q + 1, y)]: c * (-1) ** p})
            cols.append(col)
        diff[n] = Matrix(len(basis[n + 1]) if n < cap else 0, len(basis[n]), cols)
    aug = tuple(
        a.augmentation[i] * b.augmentation[j] if p == 0 else ZERO
        for (p, i, q, j), _ in sorted(index[0].items(), key=lambda t: t[1])
    )
    unit_idx = index[0][(0, next(iter(a.unit)), 0, next(iter(b.unit)))]
    filt = None
    if a.filt is not None or b.filt is not None:
        fa = a.filt or {n: (0,) * a.dim(n) for n in range(a.cap + 1)}
        fb = b.filt or {n: (0,) * b.dim(n) for n in range(b.cap + 1)}
        filt = {
            n: tuple(fa[p][i] + fb[q][j] for (p, i, q, j), _ in sorted(index[n].items(), key=lambda t: t[1]))
            for n in range(cap + 1)
        }
    fcap = a.filt_cap if a.filt_cap is not None else b.filt_cap
    weights = None
    if a.weights is not None or b.weights is not None:
        wa = a.weights or {n: (0,) * a.dim(n) for n in range(a.cap + 1)}
        wb = b.weights or {n: (0,) * b.dim(n) for n in range(b.cap + 1)}
        weights = {
            n: tuple(wa[p][i] + wb[q][j] for (p, i, q, j), _ in sorted(index[n].items(), key=lambda t: t[1]))
            for n in range(cap + 1)
        }
    out = Cdga(cap, basis, mult, diff, aug, {unit_idx: ONE}, weights, filt, fcap)
    out._pairs = index
    return out


@dataclass
class CdgaMorphism:
    source: Cdga
    target: Cdga
    blocks: dict  # degree -> Matrix

    def block(self, n: int) -> Matrix:
        m = self.blocks.get(n)
        if m is None:
            return Matrix.zero(self.target.dim(n), self.source.dim(n))
        return m

    def apply(self, n: int, v: dict) -> dict:
        return self.block(n).apply(v)


def validate_morphism(f: CdgaMorphism, augmentation: bool = True) -> Report:
    """Chain map, multiplicative, unital and (optionally) augmentation-preserving;
    product identities cut by a cap on either side are skipped."""
    a, b = f.source, f.target
    cap = min(a.cap, b.cap)
    for n in range(cap):
        if f.block(n + 1) @ a.d(n) != b.d(n) @ f.block(n):
            return Report(False, "not a chain map", (n,))
    if f.apply(0, a.unit) != b.unit:
        return Report(False, "not unital", ())
    for i in range(a.dim(0) if augmentation else 0):
        img = f.block(0).cols[i]
        if sum(b.augmentation[k] * c for k, c in img.items()) != a.augmentation[i]:
            return Report(False, "augmentation not preserved", (a.labels(0)[i],))
    for p in range(cap + 1):
        for q in range(cap + 1 - p):
            for i, j in iproduct(range(a.dim(p)), range(a.dim(q))):
                if a.truncated(p, i, q, j):
                    continue
                x, y = f.block(p).cols[i], f.block(q).cols[j]
                if any(b.truncated(p, s, q, t) for s in x for t in y):
                    continue
                if f.apply(p + q, a.mul(p, i, q, j)) != b.mul_vec(p, x, q, y):
                    return Report(False, "not multiplicative", (a.labels(p)[i], a.labels(q)[j]))
    return Report(True)


@dataclass
class Cylinder:
    algebra: Cdga
    p0: CdgaMorphism
    p1: CdgaMorphism
    include: CdgaMorphism

    def check(self) -> Report:
        """Axioms for the cylinder and both evaluations.  The cylinder is
        augmented over the interval algebra, so p_s is compared with
        evaluation at s of that relative augmentation."""
        for rep in (validate(self.algebra), validate_morphism(self.p0), validate_morphism(self.include)):
            if not rep:
                return rep
        rep = validate_morphism(self.p1, augmentation=False)
        if not rep:
            return rep
        a = self.p1.target
        for (p, i, q, j), k in self.algebra._pairs[0].items():
            img = self.p1.block(0).cols[k]
            got = sum(a.augmentation[m] * c for m, c in img.items())
            if got != a.augmentation[j]:
                return Report(False, "evaluation at 1 breaks augmentation", (self.algebra.labels(0)[k],))
        return Report(True)


def tensor_with_interval(a: Cdga, D: int) -> Cylinder:
    """Interval algebra (t-degree <= D) tensored with a, and the two
    evaluations t -> 0, t -> 1 back to a."""
    r = interval_algebra(D)
    c = tensor(r, a, cap=a.cap)
    pairs = c._pairs
    p0, p1, inc = {}, {}, {}
    for n in range(c.cap + 1):
        cols0, cols1 = [], []
        for (p, i, q, j), k in sorted(pairs[n].items(), key=lambda t: t[1]):
            if p == 0:
                cols0.append({j: ONE} if i == 0 else {})
                cols1.append({j: ONE})
            else:
                cols0.append({})
                cols1.append({})
        p0[n] = Matrix(a.dim(n), c.dim(n), cols0)
        p1[n] = Matrix(a.dim(n), c.dim(n), cols1)
        inc[n] = Matrix(c.dim(n), a.dim(n), [{pairs[n][(0, 0, n, j)]: ONE} for j in range(a.dim(n))])
    return Cylinder(c, CdgaMorphism(c, a, p0), CdgaMorphism(c, a, p1), CdgaMorphism(a, c, inc))


def stock_models() -> dict:
    """Named stock algebras used across the test matrix."""
    out = {"exterior1": exterior_model(1)}
    for g, r in [(0, 2), (0, 3), (1, 1), (0, 4), (1, 2), (2, 1)]:
        out[f"marked_{g}_{r}"] = marked_curve_model(g, r)
    for g in (1, 2):
        out[f"unmarked_{g}"] = unmarked_curve_model(g)
    return out


# JSON


def to_json(a: Cdga) -> dict:
    from .jsonio import matrix_to_json, rat

    n0 = a.dim(0)
    doc = {
        "cap": a.cap,
        "basis": {str(n): list(a.labels(n)) for n in range(a.cap + 1)},
        "diff": {str(n): matrix_to_json(a.d(n)) for n in range(a.cap + 1)},
        "mult": [
            {
                "p": p,
                "q": q,
                "table": [[[rat(v.get(k, ZERO)) for k in range(a.dim(p + q))] for v in row] for row in t],
            }
            for (p, q), t in sorted(a.mult.items())
            if p + q <= a.cap
        ],
        "augmentation": [rat(x) for x in a.augmentation],
        "unit": [rat(a.unit.get(k, ZERO)) for k in range(n0)],
    }
    if a.weights is not None:
        doc["weights"] = {str(n): list(a.weights.get(n, ())) for n in range(a.cap + 1)}
    if a.filt is not None:
        doc["filtration"] = {str(n): list(a.filt.get(n, ())) for n in range(a.cap + 1)}
        doc["filtration_cap"] = a.filt_cap
    return doc


def from_json(doc: dict) -> Cdga:
    """Parse a serialized algebra, or a stock-model shorthand such as
    ``{"model": "unmarked", "genus": 2}``."""
    from .jsonio import matrix_from_json, parse_rat

    if "model" in doc:
        return stock_from_shorthand(doc)
    cap = int(doc["cap"])
    basis = {n: tuple(doc["basis"].get(str(n), ())) for n in range(cap + 1)}
    dims = {n: len(basis[n]) for n in range(cap + 1)}
    diff = {}
    for n in range(cap + 1):
        rows = doc.get("diff", {}).get(str(n))
        tgt = dims.get(n + 1, 0) if n < cap else 0
        diff[n] = matrix_from_json(rows, tgt, dims[n]) if rows is not None else Matrix.zero(tgt, dims[n])
    mult = {}
    for p in range(cap + 1):
        for q in range(cap + 1 - p):
            mult[(p, q)] = _zero_table(dims[p], dims[q])
    for entry in doc.get("mult", []):
        p, q = int(entry["p"]), int(entry["q"])
        table = entry["table"]
        if len(table) != dims[p] or any(len(r) != dims[q] for r in table):
            raise ValueError(f"multiplication table ({p},{q}) has the wrong shape")
        mult[(p, q)] = [
            [{k: parse_rat(x) for k, x in enumerate(v) if parse_rat(x)} for v in row] for row in table
        ]
    aug = tuple(parse_rat(x) for x in doc["augmentation"])
    unit = {k: parse_rat(x) for k, x in enumerate(doc.get("unit", ["1"] + ["0"] * (dims[0] - 1))) if parse_rat(x)}
    weights = None
    if "weights" in doc:
        weights = {n: tuple(int(x) for x in doc["weights"].get(str(n), ())) for n in range(cap + 1)}
    filt = fcap = None
    if "filtration" in doc:
        filt = {n: tuple(int(x) for x in doc["filtration"].get(str(n), ())) for n in range(cap + 1)}
        fcap = doc.get("filtration_cap")
    return Cdga(cap, basis, mult, diff, aug, unit, weights, filt, fcap)


def stock_from_shorthand(doc: dict) -> Cdga:
    kind = doc["model"]
    cap = int(doc.get("cap", 3))
    if kind == "marked":
        return marked_curve_model(int(doc.get("genus", 0)), int(doc["marked"]), cap)
    if kind == "unmarked":
        return unmarked_curve_model(int(doc["genus"]), cap)
    if kind == "exterior":
        return exterior_model(int(doc.get("generators", 1)), cap)
    if kind == "interval":
        return interval_algebra(int(doc["degree"]))
    raise ValueError(f"unknown stock model {kind!r}")
