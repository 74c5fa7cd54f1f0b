"""Truncated nilpotent Lie algebras over Q.

An algebra is a finite basis with a filtration degree per basis element,
ordered so that Fil^n is spanned by the basis elements of degree >= n, and a
table of brackets of basis elements.  Free algebras use the Lyndon basis with
standard bracketing; quotients keep the non-pivot Lyndon elements.

Elements are sparse coordinate dicts wrapped in :class:`LieElement`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exactlin import ONE, ZERO, Echelon, Matrix, add_to, scaled, stack

# Lyndon words and the free associative algebra


def mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def lyndon_dims(k: int, q: int) -> list[int]:
    """Witt formula: dim of the degree-n part of the free Lie algebra on k letters."""
    out = []
    for n in range(1, q + 1):
        s = sum(mobius(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0)
        out.append(s // n)
    return out


def lyndon_words(k: int, n: int) -> list[tuple]:
    """Lyndon words of length <= n over 0..k-1 (Duval), sorted by length then lex."""
    out = []
    if k == 0:
        return out
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return sorted(out, key=lambda t: (len(t), t))


def standard_factorization(w: tuple) -> tuple[tuple, tuple]:
    """w = uv with v the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if _is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError("word of length 1 has no factorization")


def _is_lyndon(w: tuple) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w))) if len(w) > 1 else len(w) == 1


def lyndon_tree(w: tuple):
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return (lyndon_tree(u), lyndon_tree(v))


def assoc_mul(a: dict, b: dict, q: int) -> dict:
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            if len(u) + len(v) <= q:
                w = u + v
                c = out.get(w, ZERO) + x * y
                if c:
                    out[w] = c
                else:
                    out.pop(w, None)
    return out


def assoc_commutator(a: dict, b: dict, q: int) -> dict:
    return add_to(assoc_mul(a, b, q), assoc_mul(b, a, q), -ONE)


def tree_expansion(t, q: int, letters=None) -> dict:
    """Noncommutative polynomial of a bracket tree; letters maps leaves to polynomials."""
    if isinstance(t, int):
        return dict(letters[t]) if letters is not None else {(t,): ONE}
    return assoc_commutator(tree_expansion(t[0], q, letters), tree_expansion(t[1], q, letters), q)


def assoc_exp(a: dict, q: int) -> dict:
    out = {(): ONE}
    term = {(): ONE}
    for k in range(1, q + 1):
        term = {w: c / k for w, c in assoc_mul(term, a, q).items()}
        if not term:
            break
        add_to(out, term)
    return out


def assoc_log(a: dict, q: int) -> dict:
    """log of a series with constant term 1."""
    z = dict(a)
    if z.get((), ZERO) != ONE:
        raise ValueError("log needs constant term 1")
    del z[()]
    out: dict = {}
    power = {(): ONE}
    for k in range(1, q + 1):
        power = assoc_mul(power, z, q)
        if not power:
            break
        add_to(out, power, Fraction((-1) ** (k + 1), k))
    return out


# Algebras


class LieAlgebra:
    """Finite-dimensional nilpotent Lie algebra with a filtration-adapted basis.

    ``table[(i, j)]`` for i < j holds [b_i, b_j]; missing pairs bracket to 0.
    ``words[i]`` expresses b_i through the generators as a list of
    (coefficient, bracket tree) pairs, trees having generator positions as
    leaves."""

    def __init__(self, labels, degrees, q, gens, table, words=None, name="L"):
        self.labels = tuple(labels)
        self.degrees = tuple(degrees)
        self.q = q
        self.gens = tuple(gens)
        self.table = table
        self.name = name
        if list(self.degrees) != sorted(self.degrees):
            raise ValueError("basis must be sorted by degree")
        self._words = words
        self.relators: list = []
        self.parent = None
        self.lift_map = None
        self._reduce = None

    def __repr__(self) -> str:
        return f"<{self.name}: gr dims {self.gr_dims()}>"

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def generator_labels(self) -> tuple:
        return tuple(self.labels[i] for i in self.gens)

    def gr_dims(self, q: int | None = None) -> list[int]:
        q = self.q if q is None else q
        return [sum(1 for d in self.degrees if d == n) for n in range(1, q + 1)]

    def basis_of_degree(self, n: int) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == n]

    def bracket_basis(self, i: int, j: int) -> dict:
        if i == j:
            return {}
        if i < j:
            return self.table.get((i, j), {})
        return scaled(self.table.get((j, i), {}), -1)

    def bracket_vec(self, u: dict, v: dict) -> dict:
        out: dict = {}
        deg = self.degrees
        for i, a in u.items():
            di = deg[i]
            for j, b in v.items():
                if i == j or di + deg[j] > self.q:
                    continue
                add_to(out, self.bracket_basis(i, j), a * b)
        return out

    def element(self, coords=None) -> "LieElement":
        return LieElement(self, dict(coords or {}))

    def basis_element(self, i: int) -> "LieElement":
        return LieElement(self, {i: ONE})

    def gen(self, k) -> "LieElement":
        """Generator by position or label."""
        if isinstance(k, str):
            return self.basis_element(self.labels.index(k))
        return self.basis_element(self.gens[k])

    def generators(self) -> list["LieElement"]:
        return [self.basis_element(i) for i in self.gens]

    def zero(self) -> "LieElement":
        return LieElement(self, {})

    def truncate(self, v: dict, n: int) -> dict:
        """Reduce modulo Fil^{n+1}."""
        return {i: c for i, c in v.items() if self.degrees[i] <= n}

    def from_tree(self, tree) -> "LieElement":
        return LieElement(self, self.eval_tree(tree, [unit_vec(i) for i in self.gens], {}))

    def eval_tree(self, tree, images, memo) -> dict:
        if isinstance(tree, int):
            return images[tree]
        got = memo.get(tree)
        if got is None:
            got = self.bracket_vec(self.eval_tree(tree[0], images, memo), self.eval_tree(tree[1], images, memo))
            memo[tree] = got
        return got

    @property
    def words(self) -> list:
        if self._words is None:
            self._words = _spanning_words(self)
        return self._words

    def check_jacobi(self) -> bool:
        """Antisymmetry is built in; check Jacobi on all basis triples."""
        n = self.dim
        deg = self.degrees
        for i in range(n):
            for j in range(i + 1, n):
                if deg[i] + deg[j] >= self.q:
                    continue
                bij = self.bracket_basis(i, j)
                for k in range(j + 1, n):
                    if deg[i] + deg[j] + deg[k] > self.q:
                        continue
                    s = self.bracket_vec(bij, {k: ONE})
                    add_to(s, self.bracket_vec(self.bracket_basis(j, k), {i: ONE}))
                    add_to(s, self.bracket_vec(self.bracket_basis(k, i), {j: ONE}))
                    if s:
                        return False
        return True

    def check_filtration(self) -> bool:
        """[Fil^a, Fil^b] inside Fil^{a+b} on basis pairs."""
        for (i, j), v in self.table.items():
            lo = self.degrees[i] + self.degrees[j]
            if any(self.degrees[k] < lo for k in v):
                return False
        return True

    def center(self) -> list[dict]:
        """Basis of the center, as kernels of bracketing with all generators."""
        blocks = []
        for g in self.gens:
            cols = [self.bracket_vec({j: ONE}, {g: ONE}) for j in range(self.dim)]
            blocks.append(Matrix(self.dim, self.dim, cols))
        if not blocks:
            return [{i: ONE} for i in range(self.dim)]
        return stack(blocks).kernel()

    def to_json(self) -> dict:
        from .jsonio import vec_to_json

        return {
            "name": self.name,
            "q": self.q,
            "generators": list(self.generator_labels),
            "basis": list(self.labels),
            "degrees": list(self.degrees),
            "gr_dims": self.gr_dims(),
            "relators": [vec_to_json(r.coords, r.algebra.labels) for r in self.relators],
        }


def unit_vec(i: int) -> dict:
    return {i: ONE}


def _spanning_words(alg: LieAlgebra) -> list:
    """Express every basis element through left-normed brackets of generators."""
    ech = Echelon()
    trees = []
    level = []
    for p, g in enumerate(alg.gens):
        trees.append(p)
        if ech.insert({g: ONE}, len(trees) - 1) is None:
            level.append(p)
    images = [unit_vec(g) for g in alg.gens]
    memo: dict = {}
    for _ in range(2, alg.q + 1):
        nxt = []
        for p in range(len(alg.gens)):
            for t in level:
                tree = (p, t)
                v = alg.eval_tree(tree, images, memo)
                if not v:
                    continue
                trees.append(tree)
                if ech.insert(v, len(trees) - 1) is None:
                    nxt.append(tree)
        level = nxt
        if not level:
            break
    if len(ech) != alg.dim:
        raise ValueError("generators do not generate the algebra")
    out = []
    for i in range(alg.dim):
        combo = ech.coordinates({i: ONE})
        out.append([(c, trees[t]) for t, c in sorted(combo.items())])
    return out


@dataclass(eq=False)
class LieElement:
    algebra: LieAlgebra
    coords: dict = field(default_factory=dict)

    def _check(self, other: "LieElement") -> None:
        if not isinstance(other, LieElement) or other.algebra is not self.algebra:
            raise ValueError("elements live in different algebras")

    def __add__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        return LieElement(self.algebra, add_to(dict(self.coords), other.coords))

    def __sub__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        return LieElement(self.algebra, add_to(dict(self.coords), other.coords, -ONE))

    def __neg__(self) -> "LieElement":
        return LieElement(self.algebra, scaled(self.coords, -1))

    def __rmul__(self, c) -> "LieElement":
        return LieElement(self.algebra, scaled(self.coords, Fraction(c)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coords == other.coords

    def __hash__(self):
        return hash(frozenset(self.coords.items()))

    def __bool__(self) -> bool:
        return bool(self.coords)

    def bracket(self, other: "LieElement") -> "LieElement":
        self._check(other)
        return LieElement(self.algebra, self.algebra.bracket_vec(self.coords, other.coords))

    def truncate(self, n: int) -> "LieElement":
        """Image modulo Fil^{n+1}."""
        return LieElement(self.algebra, self.algebra.truncate(self.coords, n))

    def part(self, n: int) -> "LieElement":
        deg = self.algebra.degrees
        return LieElement(self.algebra, {i: c for i, c in self.coords.items() if deg[i] == n})

    def lowest_degree(self) -> int | None:
        if not self.coords:
            return None
        return min(self.algebra.degrees[i] for i in self.coords)

    def __repr__(self) -> str:
        if not self.coords:
            return "0"
        labs = self.algebra.labels
        return " + ".join(f"{c}*{labs[i]}" for i, c in sorted(self.coords.items()))

    def to_json(self) -> dict:
        from .jsonio import vec_to_json

        return vec_to_json(self.coords, self.algebra.labels)


def bracket(x: LieElement, y: LieElement) -> LieElement:
    return x.bracket(y)


def free_nilpotent(generators, q: int) -> LieAlgebra:
    """Free Lie algebra on the given labels modulo Fil^{q+1}, Lyndon basis."""
    if q < 1:
        raise ValueError("q must be >= 1")
    generators = tuple(generators)
    if len(set(generators)) != len(generators):
        raise ValueError("generator labels must be distinct")
    return _free_cached(generators, q)


@lru_cache(maxsize=64)
def _free_structure(k: int, q: int):
    """Lyndon words, expansions, decomposition and bracket table; these
    depend only on the number of generators."""
    words = lyndon_words(k, q)
    index = {w: i for i, w in enumerate(words)}
    # integer arithmetic: Lyndon expansions and their brackets are integral
    expansions = [_int_expansion(lyndon_tree(w), q) for w in words]

    def decompose(p: dict) -> dict:
        p = dict(p)
        out = {}
        while p:
            w = min(p, key=lambda u: (len(u), u))
            i = index.get(w)
            if i is None:
                raise ArithmeticError("not a Lie polynomial")
            c = p[w]
            out[i] = c
            add_to(p, expansions[i], -c)
        return out

    def decompose_int(p: dict) -> dict:
        out = {}
        while p:
            w = min(p, key=lambda u: (len(u), u))
            i = index[w]
            c = p[w]
            out[i] = Fraction(c)
            for u, x in expansions[i].items():
                y = p.get(u, 0) - c * x
                if y:
                    p[u] = y
                else:
                    p.pop(u, None)
        return out

    table = {}
    for i, u in enumerate(words):
        for j in range(i + 1, len(words)):
            v = words[j]
            if len(u) + len(v) > q:
                break
            br = _int_commutator(expansions[i], expansions[j], q)
            if br:
                table[(i, j)] = decompose_int(br)
    return words, index, expansions, decompose, table


def _int_commutator(a: dict, b: dict, q: int) -> dict:
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            if len(u) + len(v) <= q:
                for w, c in ((u + v, x * y), (v + u, -x * y)):
                    z = out.get(w, 0) + c
                    if z:
                        out[w] = z
                    else:
                        out.pop(w, None)
    return out


def _int_expansion(t, q: int) -> dict:
    if isinstance(t, int):
        return {(t,): 1}
    return _int_commutator(_int_expansion(t[0], q), _int_expansion(t[1], q), q)


@lru_cache(maxsize=64)
def _free_cached(generators: tuple, q: int) -> LieAlgebra:
    k = len(generators)
    words, index, expansions, decompose, table = _free_structure(k, q)
    labels = [_word_label(w, generators) for w in words]
    alg = LieAlgebra(
        labels,
        [len(w) for w in words],
        q,
        [index[(a,)] for a in range(k)],
        table,
        [[(ONE, lyndon_tree(w))] for w in words],
        name=f"L({','.join(generators)})",
    )
    alg.lyndon = words
    alg.expansions = expansions
    alg.decompose = decompose
    return alg


def _word_label(w: tuple, gens: tuple) -> str:
    def show(t):
        if isinstance(t, int):
            return gens[t]
        return f"[{show(t[0])},{show(t[1])}]"

    return show(lyndon_tree(w))


def quotient(alg: LieAlgebra, relators) -> LieAlgebra:
    """Quotient by the ideal generated by relators (components of degree >= 2)."""
    rels = []
    for r in relators:
        v = r.coords if isinstance(r, LieElement) else dict(r)
        if isinstance(r, LieElement) and r.algebra is not alg:
            raise ValueError("relator from another algebra")
        if any(alg.degrees[i] < 2 for i in v):
            raise ValueError("relators must lie in Fil^2")
        rels.append(v)
    # pivot on the latest basis element of lowest degree, so early Lyndon
    # elements survive in the quotient basis
    ech = Echelon(key=lambda i: (alg.degrees[i], -i))
    queue = list(rels)
    gen_vecs = [unit_vec(g) for g in alg.gens]
    while queue:
        v = queue.pop()
        rem, _ = ech.reduce(v)
        if not rem:
            continue
        ech.insert(rem)
        for g in gen_vecs:
            w = alg.bracket_vec(g, rem)
            if w:
                queue.append(w)
    pivots = set(ech.rows)
    keep = [i for i in range(alg.dim) if i not in pivots]
    new_index = {i: k for k, i in enumerate(keep)}

    def project(v: dict) -> dict:
        rem, _ = ech.reduce(v)
        return {new_index[i]: c for i, c in rem.items()}

    table = {}
    for a in range(len(keep)):
        for b in range(a + 1, len(keep)):
            i, j = keep[a], keep[b]
            if alg.degrees[i] + alg.degrees[j] > alg.q:
                continue
            v = project(alg.bracket_basis(i, j))
            if v:
                table[(a, b)] = v
    words = None
    if alg._words is not None:
        words = [alg._words[i] for i in keep]
    out = LieAlgebra(
        [alg.labels[i] for i in keep],
        [alg.degrees[i] for i in keep],
        alg.q,
        [new_index[g] for g in alg.gens],
        table,
        words,
        name=f"{alg.name}/<{len(rels)} rel>",
    )
    out.parent = alg
    out.lift_map = keep
    out._reduce = project
    out.relators = [LieElement(alg, r) for r in rels]
    out.ideal = ech
    return out


def project_to_quotient(quo: LieAlgebra, x: LieElement) -> LieElement:
    if quo.parent is None or x.algebra is not quo.parent:
        raise ValueError("element does not come from the parent algebra")
    return LieElement(quo, quo._reduce(x.coords))


def lift_from_quotient(quo: LieAlgebra, x: LieElement) -> LieElement:
    return LieElement(quo.parent, {quo.lift_map[i]: c for i, c in x.coords.items()})


def in_ideal(quo: LieAlgebra, x: LieElement) -> bool:
    return not quo._reduce(x.coords)


# Homomorphisms


class LieHom:
    """Homomorphism determined by generator images; call check() to verify."""

    def __init__(self, source: LieAlgebra, target: LieAlgebra, images):
        if len(images) != len(source.gens):
            raise ValueError("need one image per generator")
        self.source = source
        self.target = target
        self.images = [x.coords if isinstance(x, LieElement) else dict(x) for x in images]
        for x in images:
            if isinstance(x, LieElement) and x.algebra is not target:
                raise ValueError("generator image in the wrong algebra")
        self._cache: dict = {}
        self._memo: dict = {}

    def image_of(self, i: int) -> dict:
        """Image of basis element i, computed through its spanning words."""
        got = self._cache.get(i)
        if got is None:
            got = {}
            for c, t in self.source.words[i]:
                add_to(got, self.target.eval_tree(t, self.images, self._memo), c)
            self._cache[i] = got
        return got

    @property
    def basis_images(self) -> list[dict]:
        return [self.image_of(i) for i in range(self.source.dim)]

    def apply_vec(self, v: dict) -> dict:
        out: dict = {}
        for i, c in v.items():
            add_to(out, self.image_of(i), c)
        return out

    def __call__(self, x: LieElement) -> LieElement:
        if x.algebra is not self.source:
            raise ValueError("element not in the source algebra")
        return LieElement(self.target, self.apply_vec(x.coords))

    def matrix(self) -> Matrix:
        return Matrix(self.target.dim, self.source.dim, [dict(v) for v in self.basis_images])

    def check(self) -> bool:
        """Bracket preservation on (generator, basis) pairs.

        That suffices: the u with f[u, y] = [fu, fy] for all y form a
        subspace closed under brackets (Jacobi), so it is everything once it
        holds on generators."""
        src, tgt = self.source, self.target
        for p, g in enumerate(src.gens):
            if self.image_of(g) != self.images[p]:
                return False
        for p, g in enumerate(src.gens):
            for j in range(src.dim):
                if self.apply_vec(src.bracket_basis(g, j)) != tgt.bracket_vec(self.images[p], self.image_of(j)):
                    return False
        return True

    def is_bijective(self) -> bool:
        return self.source.dim == self.target.dim and self.matrix().rank() == self.source.dim


class LieAutomorphism(LieHom):
    def __init__(self, algebra: LieAlgebra, images):
        super().__init__(algebra, algebra, images)
        self._verdict = None

    @property
    def algebra(self) -> LieAlgebra:
        return self.source

    def is_automorphism(self) -> bool:
        if self._verdict is None:
            self._verdict = self.check() and self.is_bijective()
        return self._verdict

    def is_bijective(self) -> bool:
        """An endomorphism of a nilpotent Lie algebra is onto iff it is onto
        modulo brackets, so only the degree-one block needs a rank."""
        alg = self.source
        pos = {g: k for k, g in enumerate(alg.basis_of_degree(1))}
        cols = [{pos[i]: c for i, c in alg.truncate(v, 1).items()} for v in self.images]
        return Matrix(len(pos), len(cols), cols).rank() == len(pos)

    def is_unipotent(self) -> bool:
        """Identity modulo Fil^2 on generators, i.e. on gr^1."""
        alg = self.source
        return all(alg.truncate(self.images[p], 1) == {g: ONE} for p, g in enumerate(alg.gens))

    def compose(self, other: "LieAutomorphism") -> "LieAutomorphism":
        """self after other."""
        return LieAutomorphism(self.source, [self.apply_vec(v) for v in other.images])

    @classmethod
    def identity(cls, algebra: LieAlgebra) -> "LieAutomorphism":
        return cls(algebra, [unit_vec(g) for g in algebra.gens])

    @classmethod
    def inner(cls, d: LieElement) -> "LieAutomorphism":
        """x -> exp(-ad d) x, the Lie form of x -> d^-1 x d."""
        alg = d.algebra
        return cls(alg, [ad_exp(d, 1, g).coords for g in alg.generators()])

    def to_json(self) -> dict:
        from .jsonio import vec_to_json

        labs = self.source.labels
        return {lab: vec_to_json(v, labs) for lab, v in zip(self.source.generator_labels, self.images)}


# BCH and conjugation


@lru_cache(maxsize=16)
def bch_terms(q: int) -> tuple:
    """Coefficients of log(e^X e^Y) on Lyndon brackets in X=0, Y=1, degrees <= q.

    Generated from the truncated free associative algebra; nothing is copied
    from a table."""
    X, Y = {(0,): ONE}, {(1,): ONE}
    z = assoc_log(assoc_mul(assoc_exp(X, q), assoc_exp(Y, q), q), q)
    free = free_nilpotent(("X", "Y"), q)
    coords = free.decompose(z)
    return tuple((c, lyndon_tree(free.lyndon[i])) for i, c in sorted(coords.items()))


def bch_vec(alg: LieAlgebra, x: dict, y: dict) -> dict:
    memo: dict = {}
    out: dict = {}
    for c, t in bch_terms(alg.q):
        add_to(out, alg.eval_tree(t, [x, y], memo), c)
    return out


@dataclass(eq=False)
class GroupElement:
    """exp(log) in the Malcev group of a truncated nilpotent Lie algebra."""

    log: LieElement

    @property
    def algebra(self) -> LieAlgebra:
        return self.log.algebra

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return bch(self, other)

    def inverse(self) -> "GroupElement":
        return GroupElement(-self.log)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and self.log == other.log

    def __hash__(self):
        return hash(self.log)


def bch(x: GroupElement, y: GroupElement) -> GroupElement:
    if x.algebra is not y.algebra:
        raise ValueError("group elements from different algebras")
    return GroupElement(LieElement(x.algebra, bch_vec(x.algebra, x.log.coords, y.log.coords)))


def exp(x: LieElement) -> GroupElement:
    return GroupElement(x)


def conjugate(g: GroupElement, h: GroupElement) -> GroupElement:
    """h^-1 g h."""
    return h.inverse() * g * h


def ad_exp(e: LieElement, n, x: LieElement) -> LieElement:
    """sum_k (-n)^k / k! (ad e)^k x = exp(-n ad e) x."""
    if e.algebra is not x.algebra:
        raise ValueError("elements live in different algebras")
    alg = e.algebra
    n = Fraction(n)
    out = dict(x.coords)
    term = dict(x.coords)
    for k in range(1, alg.q + 1):
        term = alg.bracket_vec(e.coords, term)
        if not term:
            break
        add_to(out, term, (-n) ** k / factorial(k))
    return LieElement(alg, out)


# Inner automorphism decision


@dataclass
class InnerVerdict:
    inner: bool
    witness: LieElement | None = None
    center: list = field(default_factory=list)
    obstruction_degree: int | None = None
    trace: list = field(default_factory=list)
    q: int = 0
    pinned_mod: int | None = None  # fixed generators force d modulo Fil^pinned_mod
    pinned_value: LieElement | None = None
    blocking_generator: str | None = None
    blocking_element: LieElement | None = None

    def summary(self) -> str:
        if self.inner:
            return "inner"
        d = self.obstruction_degree
        return f"not inner (obstruction degree {d}→{d + 1})"

    def to_json(self) -> dict:
        from .jsonio import vec_to_json

        alg = self.witness.algebra if self.witness is not None else None
        return {
            "inner": self.inner,
            "q": self.q,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "center": [vec_to_json(c, alg.labels) for c in self.center] if alg else [],
            "obstruction_degree": self.obstruction_degree,
            "trace": list(self.trace),
            "pinned_mod": self.pinned_mod,
            "pinned_value": self.pinned_value.to_json() if self.pinned_value is not None else None,
            "blocking_generator": self.blocking_generator,
            "blocking_element": self.blocking_element.to_json() if self.blocking_element is not None else None,
        }


def is_inner(phi: LieAutomorphism, q: int | None = None) -> InnerVerdict:
    """Decide whether phi(x) = exp(-ad d) x for some d, modulo Fil^{q+1}.

    Level m fixes d modulo Fil^{m+1}.  A lift d~ of a level m-1 solution is
    corrected to d~ * exp(z) with [z, x] in Fil^m for every generator x, and
    the equations [z, x] = conj_d~(x) - phi(x) (mod Fil^{m+1}) are linear in z.
    All level-m solutions arise this way, so an inconsistent system proves
    that no d exists."""
    alg = phi.algebra
    q = alg.q if q is None else q
    if q > alg.q:
        raise ValueError("q beyond the truncation of the algebra")
    if not phi.is_automorphism():
        raise ValueError("input is not an automorphism")
    deg = alg.degrees
    d: dict = {}
    trace = []
    gens = list(alg.gens)
    for m in range(1, q + 1):
        unknowns = [i for i in range(alg.dim) if deg[i] <= m]
        rows = [i for i in range(alg.dim) if deg[i] <= m]
        row_pos = {i: k for k, i in enumerate(rows)}
        nrow = len(rows)
        cols = []
        for j in unknowns:
            col = {}
            for gi, g in enumerate(gens):
                for i, c in alg.truncate(alg.bracket_basis(j, g), m).items():
                    col[gi * nrow + row_pos[i]] = c
            cols.append(col)
        rhs = {}
        conj = LieAutomorphism.inner(LieElement(alg, d))
        for gi, g in enumerate(gens):
            diff = add_to(dict(conj.images[gi]), phi.images[gi], -ONE)
            for i, c in alg.truncate(diff, m).items():
                if deg[i] < m:
                    raise AssertionError("lower level not solved")
                rhs[gi * nrow + row_pos[i]] = c
        A = Matrix(nrow * len(gens), len(unknowns), cols)
        z = A.solve(rhs)
        if z is None:
            trace.append(f"level {m}: inconsistent (Fil^{m}/Fil^{m + 1})")
            verdict = InnerVerdict(False, None, [], m, trace, q)
            _explain(alg, verdict, A, rhs, unknowns, nrow, m, d)
            return verdict
        zvec = {unknowns[k]: c for k, c in z.items()}
        free = len(unknowns) - A.rank()
        forced = "forced" if free == 0 else f"{free} free directions"
        trace.append(f"level {m}: solved mod Fil^{m + 1} ({forced})")
        if zvec:
            d = bch_vec(alg, d, zvec)
    witness = LieElement(alg, alg.truncate(d, q))
    center = alg.center()
    return InnerVerdict(True, witness, center, None, trace, q)


def _explain(alg, verdict, A, rhs, unknowns, nrow, m, d) -> None:
    """Locate the failure: the generators with zero right-hand side pin down
    part of d; the first other generator whose equation then fails blocks."""
    ngen = len(alg.gens)
    fixed = [gi for gi in range(ngen) if not any(gi * nrow <= r < (gi + 1) * nrow for r in rhs)]

    def rows_of(gis):
        keep = [r for gi in gis for r in range(gi * nrow, (gi + 1) * nrow)]
        pos = {r: k for k, r in enumerate(keep)}
        cols = [{pos[r]: c for r, c in col.items() if r in pos} for col in A.cols]
        return Matrix(len(keep), A.ncols, cols), {pos[r]: c for r, c in rhs.items() if r in pos}

    sub, _ = rows_of(fixed)
    ker = sub.kernel()
    low = [alg.degrees[unknowns[k]] for v in ker for k in v]
    verdict.pinned_mod = min(low) if low else m + 1
    verdict.pinned_value = LieElement(alg, alg.truncate(d, verdict.pinned_mod - 1))
    for gi in range(ngen):
        if gi in fixed:
            continue
        sub2, b2 = rows_of(fixed + [gi])
        if sub2.solve(b2) is None:
            verdict.blocking_generator = alg.labels[alg.gens[gi]]
            br = {}
            for r, c in rhs.items():
                if gi * nrow <= r < (gi + 1) * nrow:
                    br[r - gi * nrow] = c
            rows = [i for i in range(alg.dim) if alg.degrees[i] <= m]
            verdict.blocking_element = LieElement(alg, {rows[k]: -c for k, c in br.items()})
            break
