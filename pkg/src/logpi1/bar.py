"""Bar construction of a connected augmented cdga, its H^0 Hopf algebra,
indecomposables and the comparison with degree 1 of the algebra.

Words are tuples of letters (degree, index) of the augmentation ideal.  With
J(a) = (-1)^deg(a) a the differentials are

    d_I[a1|..|as] = sum_i (-1)^i     [Ja1|..|Ja_{i-1}|d a_i|a_{i+1}|..|as]
    d_C[a1|..|as] = sum_i (-1)^(i+1) [Ja1|..|Ja_{i-1}|(Ja_i) a_{i+1}|..|as]

with i counted from 1.

If the algebra is weighted (all positive-degree basis elements of weight
>= 1), every computation splits by the weight of a word and level l of the
bar filtration on H^0 is the weight-l part.  Otherwise levels are lengths.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .cdga import Cdga, Report
from .exactlin import ONE, ZERO, Echelon, Matrix, add_to, cohomology_of


def _letters(m: Cdga, W: int | None):
    """Positive-degree basis letters grouped by degree, with weights."""
    out = {}
    for n in range(1, m.cap + 1):
        out[n] = [(n, i) for i in range(m.dim(n)) if W is None or m.weight(n, i) <= W]
    return out


@dataclass
class BarState:
    algebra: Cdga
    S: int
    weighted: bool
    W: int | None
    tmax: int
    pieces: dict = field(default_factory=dict)  # (s, t, w) -> list of words
    index: dict = field(default_factory=dict)  # word -> position in its piece

    def word_weight(self, word) -> int:
        if not self.weighted:
            return 0
        return sum(self.algebra.weight(n, i) for n, i in word)

    def piece(self, s: int, t: int, w: int = 0) -> list:
        return self.pieces.get((s, t, w), [])

    def weights(self) -> list[int]:
        return sorted({k[2] for k in self.pieces})

    def dim(self, s: int, t: int) -> int:
        return sum(len(v) for (s2, t2, _), v in self.pieces.items() if (s2, t2) == (s, t))

    # differentials on single words

    def d_internal(self, word) -> dict:
        m = self.algebra
        out: dict = {}
        sign = 1
        for i, (n, k) in enumerate(word):
            col = m.d(n).cols[k]
            for j, c in col.items():
                if self.W is not None and m.weight(n + 1, j) > self.W:
                    continue
                nw = word[:i] + ((n + 1, j),) + word[i + 1:]
                add_to(out, {nw: (-1) ** (i + 1) * sign * c})
            if n % 2:
                sign = -sign
        return out

    def d_comb(self, word) -> dict:
        m = self.algebra
        out: dict = {}
        sign = 1
        for i in range(len(word) - 1):
            (p, a), (q, b) = word[i], word[i + 1]
            jsign = (-1) ** i * sign * (-1) ** p
            for j, c in m.mul(p, a, q, b).items():
                if self.W is not None and m.weight(p + q, j) > self.W:
                    continue
                nw = word[:i] + ((p + q, j),) + word[i + 2:]
                add_to(out, {nw: jsign * c})
            if p % 2:
                sign = -sign
        return out

    def apply(self, op, v: dict) -> dict:
        out: dict = {}
        for w, c in v.items():
            add_to(out, op(w), c)
        return out

    def matrix(self, op, src: list, tgt: list) -> Matrix:
        pos = {w: k for k, w in enumerate(tgt)}
        cols = []
        for w in src:
            col = {}
            for u, c in op(w).items():
                if u not in pos:
                    raise AssertionError(f"differential leaves the materialized range: {u}")
                col[pos[u]] = c
            cols.append(col)
        return Matrix(len(tgt), len(src), cols)


def build_bar(m: Cdga, S: int, W: int | None = None, tmax: int | None = None) -> BarState:
    """Materialize B^{-s,t} for s <= S, t <= tmax (default S + 1) and verify
    d_I^2 = 0, d_C^2 = 0 and d_C d_I + d_I d_C = 0 on every piece."""
    if S < 1:
        raise ValueError("word cap must be >= 1")
    if m.dim(0) != 1:
        raise ValueError("bar construction needs a connected algebra")
    weighted = m.weights is not None and all(
        m.weight(n, i) >= 1 for n in range(1, m.cap + 1) for i in range(m.dim(n))
    )
    if weighted and W is None:
        W = S
    if not weighted:
        W = None
    tmax = S + 1 if tmax is None else tmax
    b = BarState(m, S, weighted, W, tmax)
    letters = _letters(m, W)
    for s in range(0, S + 1):
        for t in range(s, tmax + 2):
            for degs in _compositions(t, s, m.cap):
                for word, w in _words(m, [letters.get(d, []) for d in degs], W, weighted):
                    b.pieces.setdefault((s, t, w), []).append(word)
    for key, words in b.pieces.items():
        for k, w in enumerate(words):
            b.index[w] = k
    rep = check_bar(b)
    if not rep:
        raise AssertionError(f"bar differential identity fails: {rep.failure} at {rep.where}")
    return b


def _words(m: Cdga, slots: list, W: int | None, weighted: bool):
    """Words with one letter per slot, in product order, pruned by weight."""
    if not slots:
        yield (), 0
        return
    for x in slots[0]:
        wx = m.weight(*x) if weighted else 0
        if W is not None and wx > W:
            continue
        rest_cap = None if W is None else W - wx
        for tail, wt in _words(m, slots[1:], rest_cap, weighted):
            yield (x,) + tail, wx + wt


def _compositions(t: int, s: int, cap: int):
    if s == 0:
        if t == 0:
            yield ()
        return
    for first in range(1, min(cap, t - (s - 1)) + 1):
        for rest in _compositions(t - first, s - 1, cap):
            yield (first,) + rest


def check_bar(b: BarState) -> Report:
    for (s, t, w), words in b.pieces.items():
        if t > b.tmax:
            continue
        for word in words:
            v = {word: ONE}
            di, dc = b.apply(b.d_internal, v), b.apply(b.d_comb, v)
            if b.apply(b.d_internal, di):
                return Report(False, "d_I^2 != 0", (s, t, word))
            if b.apply(b.d_comb, dc):
                return Report(False, "d_C^2 != 0", (s, t, word))
            anti = b.apply(b.d_comb, di)
            add_to(anti, b.apply(b.d_internal, dc))
            if anti:
                return Report(False, "d_C d_I + d_I d_C != 0", (s, t, word))
    return Report(True)


# Shuffles and deconcatenation on degree-1 words


def shuffle(u: tuple, v: tuple) -> dict:
    """Shuffle of two words of degree-1 letters.  Such letters sit in bar
    degree 0, so no Koszul signs appear."""
    out: dict = {}
    n, m = len(u), len(v)
    for pos in combinations(range(n + m), n):
        word, iu, iv = [], 0, 0
        posset = set(pos)
        for k in range(n + m):
            if k in posset:
                word.append(u[iu])
                iu += 1
            else:
                word.append(v[iv])
                iv += 1
        add_to(out, {tuple(word): ONE})
    return out


def shuffle_vec(x: dict, y: dict) -> dict:
    out: dict = {}
    for u, a in x.items():
        for v, b in y.items():
            add_to(out, shuffle(u, v), a * b)
    return out


def deconcat(x: dict) -> dict:
    out: dict = {}
    for u, a in x.items():
        for k in range(len(u) + 1):
            key = (u[:k], u[k:])
            out[key] = out.get(key, ZERO) + a
    return {k: c for k, c in out.items() if c}


# H^0


@dataclass
class HopfH0:
    bar: BarState
    levels: list  # level -> list of word vectors (basis of a complement)
    _ech: Echelon = field(repr=False, default=None)
    _tags: list = field(default_factory=list)

    @property
    def gr_dims(self) -> list[int]:
        return [len(v) for v in self.levels]

    def basis(self) -> list[tuple[int, int, dict]]:
        return [(lvl, k, v) for lvl, vs in enumerate(self.levels) for k, v in enumerate(vs)]

    def level_of_word(self, word) -> int:
        return self.bar.word_weight(word) if self.bar.weighted else len(word)

    def coordinates(self, v: dict) -> dict:
        """Coordinates of an H^0 element over basis() positions."""
        return self._ech.coordinates(v)

    def product(self, x: dict, y: dict) -> dict:
        return shuffle_vec(x, y)

    def coproduct(self, x: dict) -> dict:
        return deconcat(x)

    def unit(self) -> dict:
        return {(): ONE}

    def counit(self, x: dict) -> Fraction:
        return x.get((), ZERO)

    def in_h0(self, v: dict) -> bool:
        b = self.bar
        tot = b.apply(b.d_internal, v)
        add_to(tot, b.apply(b.d_comb, v))
        return not tot

    def product_table(self) -> dict:
        """(i, j) -> coordinates of b_i * b_j for basis positions within the cap."""
        basis = self.basis()
        out = {}
        for i, (li, _, x) in enumerate(basis):
            for j, (lj, _, y) in enumerate(basis):
                if li + lj <= self.bar.S:
                    out[(i, j)] = self.coordinates(self.product(x, y))
        return out

    def coproduct_table(self) -> dict:
        """i -> {(j, k): c} with Delta b_i = sum c b_j (x) b_k."""
        return {i: self.tensor_coordinates(self.coproduct(x)) for i, (_, _, x) in enumerate(self.basis())}

    def tensor_coordinates(self, t: dict) -> dict:
        cols: dict = {}
        for (u, v), c in t.items():
            cols.setdefault(v, {})
            cols[v][u] = cols[v].get(u, ZERO) + c
        rows: dict = {}
        for v, col in cols.items():
            for i, c in self.coordinates({u: x for u, x in col.items() if x}).items():
                rows.setdefault(i, {})[v] = rows.get(i, {}).get(v, ZERO) + c
        out = {}
        for i, row in rows.items():
            for j, c in self.coordinates({v: x for v, x in row.items() if x}).items():
                if c:
                    out[(i, j)] = c
        return out

    def check_hopf(self) -> Report:
        """Associativity, commutativity, coassociativity, counit and the
        bialgebra law on all basis elements inside the cap."""
        basis = self.basis()
        S = self.bar.S
        for i, (li, _, x) in enumerate(basis):
            if not self.in_h0(x):
                return Report(False, "basis element not closed", (i,))
            for j, (lj, _, y) in enumerate(basis):
                if li + lj > S:
                    continue
                xy = self.product(x, y)
                if not self.in_h0(xy):
                    return Report(False, "product leaves H^0", (i, j))
                if xy != self.product(y, x):
                    return Report(False, "product not commutative", (i, j))
                dxy = self.coproduct(xy)
                dx, dy = self.coproduct(x), self.coproduct(y)
                prod: dict = {}
                for (a, b), c in dx.items():
                    for (a2, b2), c2 in dy.items():
                        for u, s1 in shuffle(a, a2).items():
                            for v, s2 in shuffle(b, b2).items():
                                add_to(prod, {(u, v): c * c2 * s1 * s2})
                if prod != dxy:
                    return Report(False, "bialgebra law", (i, j))
                for k, (lk, _, z) in enumerate(basis):
                    if li + lj + lk > S:
                        continue
                    if self.product(xy, z) != self.product(x, self.product(y, z)):
                        return Report(False, "product not associative", (i, j, k))
            dx = self.coproduct(x)
            left: dict = {}
            right: dict = {}
            for (a, b), c in dx.items():
                for k in range(len(a) + 1):
                    add_to(left, {(a[:k], a[k:], b): c})
                for k in range(len(b) + 1):
                    add_to(right, {(a, b[:k], b[k:]): c})
            if left != right:
                return Report(False, "coproduct not coassociative", (i,))
            counit_l = {b: c for (a, b), c in dx.items() if a == ()}
            counit_r = {a: c for (a, b), c in dx.items() if b == ()}
            if counit_l != x or counit_r != x:
                return Report(False, "counit law", (i,))
        if self.counit(self.unit()) != ONE:
            return Report(False, "counit of unit", ())
        return Report(True)


def h0(b: BarState) -> HopfH0:
    """H^0 of the total complex, level by level."""
    S = b.S
    ech = Echelon()
    levels: list = []
    tags = []
    if b.weighted:
        for lvl in range(0, S + 1):
            words = [w for s in range(0, lvl + 1) for w in b.piece(s, s, lvl)]
            targets = [w for s in range(0, lvl + 1) for w in b.piece(s, s + 1, lvl)]
            ker = _total_kernel(b, words, targets)
            found = []
            for v in ker:
                if ech.insert(v, len(tags)) is None:
                    tags.append((lvl, len(found)))
                    found.append(v)
            levels.append(found)
    else:
        for lvl in range(0, S + 1):
            words = [w for s in range(0, lvl + 1) for w in b.piece(s, s, 0)]
            targets = [w for s in range(0, lvl + 1) for w in b.piece(s, s + 1, 0)]
            ker = _total_kernel(b, words, targets)
            found = []
            for v in ker:
                if ech.insert(v, len(tags)) is None:
                    tags.append((lvl, len(found)))
                    found.append(v)
            levels.append(found)
    return HopfH0(b, levels, ech, tags)


def _total_kernel(b: BarState, words: list, targets: list) -> list[dict]:
    def total(w):
        out = b.d_internal(w)
        add_to(out, b.d_comb(w))
        return out

    mat = b.matrix(total, words, targets)
    return [{words[k]: c for k, c in v.items()} for v in mat.kernel()]


# Indecomposables


@dataclass
class Indecomposables:
    hopf: HopfH0
    reps: list  # level -> list of word vectors representing a basis of QH^0
    _ech: Echelon = field(repr=False, default=None)
    _ndec: int = 0
    _tags: list = field(default_factory=list)

    @property
    def gr_dims(self) -> list[int]:
        return [len(v) for v in self.reps][1:]

    def basis(self) -> list[tuple[int, dict]]:
        return [(lvl, v) for lvl, vs in enumerate(self.reps) for v in vs]

    def project(self, v: dict) -> dict:
        """Class of an augmentation-ideal element in QH^0, over basis() positions."""
        combo = self._ech.coordinates(v)
        return {t - self._ndec: c for t, c in combo.items() if t >= self._ndec}

    def cobracket(self, x: dict) -> dict:
        """(Delta - tau Delta) x with both factors projected to QH^0."""
        out: dict = {}
        red = {k: c for k, c in deconcat(x).items() if k[0] and k[1]}
        cols: dict = {}
        for (u, v), c in red.items():
            cols.setdefault(v, {})
            cols[v][u] = cols[v].get(u, ZERO) + c
        rows: dict = {}
        for v, col in cols.items():
            for i, c in self.project({u: a for u, a in col.items() if a}).items():
                rows.setdefault(i, {})
                rows[i][v] = rows[i].get(v, ZERO) + c
        for i, row in rows.items():
            for j, c in self.project({v: a for v, a in row.items() if a}).items():
                add_to(out, {(i, j): c})
                add_to(out, {(j, i): -c})
        return out

    def cobracket_table(self) -> dict:
        return {i: self.cobracket(v) for i, (_, v) in enumerate(self.basis())}

    def check_cojacobi(self) -> bool:
        """sum over cyclic permutations of (delta (x) id) delta = 0."""
        table = self.cobracket_table()
        for i, delta in table.items():
            acc: dict = {}
            for (a, b), c in delta.items():
                for (x, y), c2 in table[a].items():
                    for perm in ((x, y, b), (y, b, x), (b, x, y)):
                        add_to(acc, {perm: c * c2})
            if acc:
                return False
        return True


def dual_lie_of_indecomposables(ind: Indecomposables, q: int | None = None):
    """Lie algebra dual to the cobracket: [f_i, f_j] = sum_k <delta b_k, b_i (x) b_j> f_k."""
    from .minimal import lie_from_structure

    table: dict = {}
    for k, delta in ind.cobracket_table().items():
        for (i, j), c in delta.items():
            if i < j:
                add_to(table.setdefault((i, j), {}), {k: c})
    table = {key: v for key, v in table.items() if v}
    labels = [f"q{lvl}_{k}" for k, (lvl, _) in enumerate(ind.basis())]
    return lie_from_structure(labels, table, q or ind.hopf.bar.S, name="indecomposables")


def indecomposables(h: HopfH0) -> Indecomposables:
    S = h.bar.S
    basis = h.basis()
    dec = Echelon()
    ndec = 0
    for i, (li, _, x) in enumerate(basis):
        if li == 0:
            continue
        for j, (lj, _, y) in enumerate(basis):
            if lj == 0 or li + lj > S or j < i:
                continue
            if dec.insert(h.product(x, y), ndec) is None:
                ndec += 1
    reps: list = [[] for _ in range(S + 1)]
    tags = []
    for lvl, _, x in basis:
        if lvl == 0:
            continue
        if dec.insert(x, ndec + len(tags)) is None:
            tags.append(lvl)
            reps[lvl].append(x)
    return Indecomposables(h, reps, dec, ndec, tags)


# Comparison with M^1


@dataclass
class Comparison:
    matrix: Matrix  # QH^0 basis -> degree-1 letters
    gr_qh0: list
    gr_m1: list
    isomorphism: list  # per level
    intertwines: bool

    @property
    def ok(self) -> bool:
        return all(self.isomorphism) and self.intertwines


def compare_to_M1(ind: Indecomposables) -> Comparison:
    """Length-one projection QH^0 -> M^1 and the cobracket check against -d."""
    b = ind.hopf.bar
    m = b.algebra
    S = b.S
    letters = [(1, i) for i in range(m.dim(1))]
    if b.weighted:
        letters = [x for x in letters if m.weight(1, x[1]) <= S]
    pos = {x: k for k, x in enumerate(letters)}
    basis = ind.basis()
    cols = []
    for _, v in basis:
        cols.append({pos[w[0]]: c for w, c in v.items() if len(w) == 1})
    mat = Matrix(len(letters), len(basis), cols)

    def level_of_letter(x):
        return m.weight(1, x[1]) if b.weighted else None

    gr_q = ind.gr_dims
    iso = []
    if b.weighted:
        gr_m = [sum(1 for x in letters if level_of_letter(x) == lvl) for lvl in range(1, S + 1)]
        for lvl in range(1, S + 1):
            src = [k for k, (l2, _) in enumerate(basis) if l2 == lvl]
            rows = [pos[x] for x in letters if level_of_letter(x) == lvl]
            rpos = {r: k for k, r in enumerate(rows)}
            sub = Matrix(len(rows), len(src), [{rpos[r]: c for r, c in mat.cols[j].items() if r in rpos} for j in src])
            leak = any(r not in rpos for j in src for r in mat.cols[j])
            iso.append(not leak and len(src) == len(rows) and sub.rank() == len(rows))
    else:
        gr_m = [len(letters)]
        iso.append(len(basis) == len(letters) and mat.rank() == len(letters))
    # cobracket: (pi1 (x) pi1)(Delta - tau Delta) x  versus  -d(pi1 x) with a^b -> a(x)b - b(x)a
    ok = True
    for _, v in basis:
        lhs: dict = {}
        for (u, w), c in deconcat(v).items():
            if len(u) == 1 and len(w) == 1:
                add_to(lhs, {(u[0], w[0]): c})
                add_to(lhs, {(w[0], u[0]): -c})
        x1 = {w[0][1]: c for w, c in v.items() if len(w) == 1}
        dx = m.d(1).apply(x1)
        rhs: dict = {}
        for k, c in dx.items():
            for (a, bb), coeff in _as_tensor(m, k).items():
                add_to(rhs, {((1, a), (1, bb)): -c * coeff})
        if lhs != rhs:
            ok = False
            break
    return Comparison(mat, gr_q, gr_m, iso, ok)


def _as_tensor(m: Cdga, k: int) -> dict:
    """Basis element k of degree 2 written as a combination of a(x)b - b(x)a
    over degree-1 letters, using the product table (needs M^2 spanned by
    products, true for algebras generated in degree 1)."""
    cache = getattr(m, "_wedge_cache", None)
    if cache is None:
        n1 = m.dim(1)
        pairs = [(a, b) for a in range(n1) for b in range(a + 1, n1)]
        ech = Echelon()
        for t, (a, b) in enumerate(pairs):
            ech.insert(m.mul(1, a, 1, b), t)
        cache = {"ech": ech, "pairs": pairs}
        m._wedge_cache = cache
    combo = cache["ech"].coordinates({k: ONE})
    out: dict = {}
    for t, c in combo.items():
        a, b = cache["pairs"][t]
        add_to(out, {(a, b): c})
        add_to(out, {(b, a): -c})
    return out


# Eilenberg-Moore E_1


@dataclass
class E1Table:
    bar_side: dict  # (s, t, w) -> dim
    kunneth_side: dict
    agree: bool


def eilenberg_moore_E1(b: BarState, smax: int | None = None) -> E1Table:
    """E_1^{-s,t} twice: as d_I-cohomology of the length-s tensors, and as
    the degree-t part of the s-fold tensor power of H(augmentation ideal)."""
    smax = b.S if smax is None else smax
    m = b.algebra
    hm: dict = {}
    for n in range(1, m.cap + 1):
        for w in (sorted({m.weight(n, i) for i in range(m.dim(n))}) if b.weighted else [0]):
            if b.W is not None and w > b.W:
                continue
            idx = lambda k, w=w: [i for i in range(m.dim(k)) if (m.weight(k, i) == w if b.weighted else True)]
            i_prev = idx(n - 1) if n >= 2 else []
            i_cur, i_next = idx(n), idx(n + 1) if n < m.cap else []
            d_in = _sub(m.d(n - 1), i_cur, i_prev) if n >= 2 else Matrix.zero(len(i_cur), 0)
            d_out = _sub(m.d(n), i_next, i_cur) if n < m.cap else Matrix.zero(0, len(i_cur))
            hm[(n, w)] = cohomology_of(d_in, d_out, n).dim
    bar_side, kun = {}, {}
    weights = b.weights()
    for s in range(0, smax + 1):
        for t in range(s, b.tmax + 1):
            for w in weights:
                src = b.piece(s, t, w)
                prev = b.piece(s, t - 1, w)
                nxt = b.piece(s, t + 1, w)
                if not src and not prev:
                    dimb = 0
                else:
                    d_in = b.matrix(b.d_internal, prev, src)
                    d_out = b.matrix(b.d_internal, src, nxt)
                    dimb = cohomology_of(d_in, d_out, t).dim
                dimk = _kunneth(hm, s, t, w, b.weighted)
                if dimb or dimk:
                    bar_side[(s, t, w)] = dimb
                    kun[(s, t, w)] = dimk
    return E1Table(bar_side, kun, bar_side == kun)


def _sub(mat: Matrix, rows, cols) -> Matrix:
    pos = {r: k for k, r in enumerate(rows)}
    return Matrix(len(rows), len(cols), [{pos[i]: c for i, c in mat.cols[j].items() if i in pos} for j in cols])


def _kunneth(hm: dict, s: int, t: int, w: int, weighted: bool) -> int:
    if s == 0:
        return 1 if t == 0 and w == 0 else 0
    total = 0
    for (n, wt), d in hm.items():
        if d == 0 or n > t or (weighted and wt > w):
            continue
        total += d * _kunneth(hm, s - 1, t - n, w - wt if weighted else 0, weighted)
    return total


# Filtered duals


@dataclass
class DualPiece:
    n: int
    dim: int
    product: dict  # (i, j) -> {k: c}: f_i f_j = sum c f_k


def dual_filtered_hopf(h: HopfH0) -> list[DualPiece]:
    """Duals of F^{-n} H^0 with the product dual to the coproduct."""
    basis = h.basis()
    cop = h.coproduct_table()
    out = []
    for n in range(0, h.bar.S + 1):
        idx = [k for k, (lvl, _, _) in enumerate(basis) if lvl <= n]
        sel = set(idx)
        prod: dict = {}
        for k in idx:
            for (i, j), c in cop[k].items():
                if i in sel and j in sel:
                    add_to(prod.setdefault((i, j), {}), {k: c})
        out.append(DualPiece(n, len(idx), prod))
    return out


def pbw_dims(lie_dims: list[int], S: int) -> list[int]:
    """Graded dims of U(L) through degree S from dims of gr L (PBW)."""
    series = [1] + [0] * S
    for n, d in enumerate(lie_dims, start=1):
        for _ in range(d):
            # multiply by 1/(1 - t^n)
            for k in range(n, S + 1):
                series[k] += series[k - n]
    return series


def bar_report(b: BarState) -> dict:
    from .jsonio import rat

    h = h0(b)
    ind = indecomposables(h)
    cmp = compare_to_M1(ind)
    e1 = eilenberg_moore_E1(b)
    return {
        "S": b.S,
        "gr_dims": h.gr_dims,
        "qh0_gr_dims": ind.gr_dims,
        "m1_gr_dims": cmp.gr_m1,
        "product_table": {f"{i},{j}": {str(k): rat(c) for k, c in sorted(v.items())}
                          for (i, j), v in sorted(h.product_table().items())},
        "coproduct_table": {str(i): {f"{a},{bb}": rat(c) for (a, bb), c in sorted(v.items())}
                            for i, v in sorted(h.coproduct_table().items())},
        "verdicts": {
            "hopf_axioms": bool(h.check_hopf()),
            "cojacobi": ind.check_cojacobi(),
            "comparison_isomorphism": cmp.isomorphism,
            "cobracket_intertwined": cmp.intertwines,
            "eilenberg_moore_agree": e1.agree,
        },
    }


def bar_of_model(m, S: int) -> BarState:
    """Bar construction of a minimal model's assembled algebra; in the
    weighted case only weights <= S are kept, which is exact there."""
    if m.weighted:
        return build_bar(m.assembled(cap=S + 1, max_weight=S), S)
    return build_bar(m.assembled(cap=3), S)
