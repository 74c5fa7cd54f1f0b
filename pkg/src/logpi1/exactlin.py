"""Exact linear algebra over Q on sparse vectors.

A vector is a ``dict`` mapping a coordinate index to a nonzero ``Fraction``.
Everything here is deterministic: pivots are always the smallest coordinate
under a fixed ordering, so repeated runs give identical bases.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

Vec = dict

ZERO = Fraction(0)
ONE = Fraction(1)


def vec(items: Iterable[tuple[int, object]] = ()) -> Vec:
    out: Vec = {}
    for k, c in items:
        add_to(out, {k: Fraction(c)})
    return out


def add_to(target: Vec, other: Vec, scale=ONE) -> Vec:
    """target += scale * other, in place."""
    if not scale:
        return target
    for k, c in other.items():
        v = target.get(k, ZERO) + scale * c
        if v:
            target[k] = v
        else:
            target.pop(k, None)
    return target


def vsum(*vs: Vec) -> Vec:
    out: Vec = {}
    for v in vs:
        add_to(out, v)
    return out


def scaled(v: Vec, c) -> Vec:
    c = Fraction(c)
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def sub(a: Vec, b: Vec) -> Vec:
    return add_to(dict(a), b, -ONE)


def unit(i: int) -> Vec:
    return {i: ONE}


class Echelon:
    """Incrementally maintained reduced row echelon basis of a subspace.

    ``key`` orders coordinates; the pivot of a new row is its smallest
    coordinate under ``key``.  Each row remembers how it was built from the
    inserted vectors (by tag), so membership tests can also return
    coordinates.
    """

    def __init__(self, key: Callable[[int], object] | None = None):
        self.key = key or (lambda i: i)
        self.rows: dict[int, Vec] = {}
        self.combos: dict[int, Vec] = {}
        self.order: list[int] = []

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return list(self.order)

    def reduce(self, v: Vec) -> tuple[Vec, Vec]:
        """Return (remainder, combo) with v = remainder + sum combo[t] * inserted[t]."""
        rem = dict(v)
        combo: Vec = {}
        for p in [k for k in rem if k in self.rows]:
            c = rem.get(p)
            if c:
                add_to(rem, self.rows[p], -c)
                add_to(combo, self.combos[p], c)
        return rem, combo

    def insert(self, v: Vec, tag=None) -> Vec | None:
        """Add v.  Returns None if v was independent, else the linear relation
        expressing v in terms of earlier tags."""
        rem, combo = self.reduce(v)
        if not rem:
            return combo
        p = min(rem, key=self.key)
        c = rem[p]
        row = {k: x / c for k, x in rem.items()}
        own: Vec = {tag: ONE} if tag is not None else {}
        add_to(own, combo, -ONE)
        own = scaled(own, 1 / c)
        for q, other in self.rows.items():
            f = other.get(p)
            if f:
                add_to(other, row, -f)
                add_to(self.combos[q], own, -f)
        self.rows[p] = row
        self.combos[p] = own
        self.order.append(p)
        return None

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)[0]

    def coordinates(self, v: Vec) -> Vec:
        rem, combo = self.reduce(v)
        if rem:
            raise ValueError("vector is not in the span")
        return combo

    def basis(self) -> list[Vec]:
        return [dict(self.rows[p]) for p in sorted(self.rows, key=self.key)]


@dataclass
class Matrix:
    """A linear map Q^ncols -> Q^nrows stored by sparse columns."""

    nrows: int
    ncols: int
    cols: list = field(default_factory=list)

    def __post_init__(self):
        if not self.cols:
            self.cols = [{} for _ in range(self.ncols)]
        if len(self.cols) != self.ncols:
            raise ValueError("column count mismatch")

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(nrows, ncols, [{} for _ in range(ncols)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [{i: ONE} for i in range(n)])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols = [{} for _ in range(ncols)]
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                x = Fraction(x)
                if x:
                    cols[j][i] = x
        return cls(nrows, ncols, cols)

    def to_rows(self) -> list[list[Fraction]]:
        rows = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, x in c.items():
                rows[i][j] = x
        return rows

    def entry(self, i: int, j: int) -> Fraction:
        return self.cols[j].get(i, ZERO)

    def apply(self, v: Vec) -> Vec:
        out: Vec = {}
        for j, c in v.items():
            add_to(out, self.cols[j], c)
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        return Matrix(self.nrows, other.ncols, [self.apply(c) for c in other.cols])

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return Matrix(self.nrows, self.ncols, [vsum(a, b) for a, b in zip(self.cols, other.cols)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.nrows, self.ncols, [scaled(c, -1) for c in self.cols])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and all(
            a == b for a, b in zip(self.cols, other.cols)
        )

    def is_zero(self) -> bool:
        return not any(self.cols)

    def transpose(self) -> "Matrix":
        cols = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, x in c.items():
                cols[i][j] = x
        return Matrix(self.ncols, self.nrows, cols)

    def echelon(self) -> Echelon:
        e = Echelon()
        for j, c in enumerate(self.cols):
            e.insert(c, j)
        return e

    def rank(self) -> int:
        return len(self.echelon())

    def kernel(self) -> list[Vec]:
        """RREF null space basis: one vector per non-pivot column, in column order."""
        e = Echelon()
        out = []
        for j, c in enumerate(self.cols):
            rel = e.insert(c, j)
            if rel is not None:
                k = scaled(rel, -1)
                k[j] = ONE
                out.append(k)
        return out

    def image(self) -> list[Vec]:
        return self.echelon().basis()

    def solve(self, b: Vec) -> Vec | None:
        """Some x with self.apply(x) == b, or None.  The solution is supported
        on pivot columns, so it is deterministic."""
        e = self.echelon()
        rem, combo = e.reduce(b)
        if rem:
            return None
        return combo


def stack(blocks: Sequence[Matrix]) -> Matrix:
    """Vertical concatenation of maps with a common source."""
    if not blocks:
        raise ValueError("nothing to stack")
    ncols = blocks[0].ncols
    cols = [{} for _ in range(ncols)]
    off = 0
    for b in blocks:
        if b.ncols != ncols:
            raise ValueError("shape mismatch")
        for j, c in enumerate(b.cols):
            for i, x in c.items():
                cols[j][i + off] = x
        off += b.nrows
    return Matrix(off, ncols, cols)


# Graded vector spaces, maps and complexes


@dataclass(frozen=True)
class GradedSpace:
    """Finite graded space with labelled bases, concentrated in degrees >= 0."""

    basis: dict  # degree -> tuple of labels

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, ()))

    def labels(self, n: int) -> tuple:
        return tuple(self.basis.get(n, ()))

    def degrees(self) -> list[int]:
        return sorted(d for d, b in self.basis.items() if b)

    def index(self, n: int, label) -> int:
        return self.labels(n).index(label)


@dataclass
class GradedMap:
    """Degree-shifting linear map: degree n of the source goes to n + shift."""

    source: GradedSpace
    target: GradedSpace
    shift: int
    blocks: dict  # source degree -> Matrix

    def block(self, n: int) -> Matrix:
        m = self.blocks.get(n)
        if m is None:
            return Matrix.zero(self.target.dim(n + self.shift), self.source.dim(n))
        return m

    def check_shapes(self) -> None:
        for n, m in self.blocks.items():
            if (m.nrows, m.ncols) != (self.target.dim(n + self.shift), self.source.dim(n)):
                raise ValueError(f"dimension mismatch in degree {n}")


@dataclass
class CochainComplex:
    """C^n with differential d^n : C^n -> C^{n+1}."""

    space: GradedSpace
    diff: dict  # n -> Matrix

    def d(self, n: int) -> Matrix:
        m = self.diff.get(n)
        if m is None:
            return Matrix.zero(self.space.dim(n + 1), self.space.dim(n))
        return m

    def check(self) -> None:
        for n in self.space.degrees():
            dn = self.d(n)
            if (dn.nrows, dn.ncols) != (self.space.dim(n + 1), self.space.dim(n)):
                raise ValueError(f"dimension mismatch in degree {n}")
            if not (self.d(n + 1) @ dn).is_zero():
                raise ValueError(f"d^2 != 0 in degree {n}")


@dataclass
class Cohomology:
    degree: int
    dim: int
    reps: list  # cocycle representatives (vectors in C^n)
    _ech: Echelon = field(repr=False, default=None)
    _nb: int = 0

    def project(self, z: Vec) -> Vec:
        """Class coordinates of a cocycle in the basis given by ``reps``."""
        combo = self._ech.coordinates(z)
        return {t - self._nb: c for t, c in combo.items() if t >= self._nb}

    def is_coboundary(self, z: Vec) -> bool:
        return not self.project(z)


def cohomology_of(d_in: Matrix, d_out: Matrix, degree: int = 0) -> Cohomology:
    """H = ker d_out / im d_in, with representatives chosen greedily from the
    RREF kernel basis."""
    cycles = d_out.kernel()
    ech = Echelon()
    bnd = d_in.image()
    for i, b in enumerate(bnd):
        ech.insert(b, i)
    nb = len(bnd)
    reps = []
    for z in cycles:
        if ech.insert(z, nb + len(reps)) is None:
            reps.append(z)
    return Cohomology(degree, len(reps), reps, ech, nb)


def cohomology(c: CochainComplex, n: int) -> Cohomology:
    return cohomology_of(c.d(n - 1), c.d(n), n)


def cone(phi: GradedMap, a: CochainComplex, b: CochainComplex) -> CochainComplex:
    """Mapping cone of a chain map phi: A -> B.

    C^n = A^n + B^{n-1}, d(x, y) = (dx, phi(x) - dy)."""
    if phi.shift != 0:
        raise ValueError("cone needs a degree-preserving map")
    degs = set(a.space.degrees()) | {n + 1 for n in b.space.degrees()}
    basis = {}
    for n in sorted(degs):
        basis[n] = tuple(("A", x) for x in a.space.labels(n)) + tuple(
            ("B", y) for y in b.space.labels(n - 1)
        )
    space = GradedSpace(basis)
    diff = {}
    for n in sorted(degs):
        da, db, f = a.d(n), b.d(n - 1), phi.block(n)
        na, nb_ = a.space.dim(n), b.space.dim(n - 1)
        ma = a.space.dim(n + 1)
        cols = []
        for j in range(na):
            col = dict(da.cols[j])
            for i, x in f.cols[j].items():
                col[ma + i] = x
            cols.append(col)
        for j in range(nb_):
            cols.append({ma + i: -x for i, x in db.cols[j].items()})
        diff[n] = Matrix(space.dim(n + 1), space.dim(n), cols)
    return CochainComplex(space, diff)


def cone_cohomology(phi: GradedMap, a: CochainComplex, b: CochainComplex, n: int) -> Cohomology:
    return cohomology(cone(phi, a, b), n)


def kernel_basis(m: GradedMap, n: int) -> list[Vec]:
    return m.block(n).kernel()


def choose_section(m: Matrix, key: Callable[[int], object] | None = None) -> Matrix:
    """Right inverse of a surjection.

    Source basis vectors are scanned in ``key`` order (basis order by default);
    the first ones with independent images are the pivot preimages, and each
    target basis vector is written through them."""
    order = sorted(range(m.ncols), key=key) if key else range(m.ncols)
    ech = Echelon()
    for j in order:
        ech.insert(m.cols[j], j)
    if len(ech) != m.nrows:
        raise ValueError("map is not surjective")
    cols = [ech.coordinates({i: ONE}) for i in range(m.nrows)]
    return Matrix(m.ncols, m.nrows, cols)
