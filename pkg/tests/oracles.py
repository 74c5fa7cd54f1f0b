"""Independent reference computations for the tests.

Nothing here imports the package under test.  Ranks go through sympy,
free Lie dimensions through the necklace formula or brute-force spanning,
BCH through noncommutative sympy series.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb

import sympy


def mobius(n: int) -> int:
    res, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    if m > 1:
        res = -res
    return res


def witt(k: int, n: int) -> int:
    return sum(mobius(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


def rank(rows) -> int:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    return sympy.Matrix(rows).rank()


def _word_poly_commutator(a: dict, b: dict) -> dict:
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            out[u + v] = out.get(u + v, 0) + x * y
            out[v + u] = out.get(v + u, 0) - x * y
    return {w: c for w, c in out.items() if c}


def free_lie_dims_bruteforce(k: int, q: int) -> list[int]:
    """Rank of all left-normed brackets of each length, as polynomials."""
    dims = []
    for n in range(1, q + 1):
        polys = []
        for letters in product(range(k), repeat=n):
            p = {(letters[-1],): 1}
            for a in reversed(letters[:-1]):
                p = _word_poly_commutator({(a,): 1}, p)
            polys.append(p)
        words = sorted({w for p in polys for w in p})
        pos = {w: i for i, w in enumerate(words)}
        rows = [[p.get(w, 0) for w in words] for p in polys]
        dims.append(rank(rows) if words else 0)
        del pos
    return dims


def one_relator_dims(n_gens: int, q: int) -> list[int]:
    """gr dims of a one-relator Lie algebra with a quadratic relator whose
    enveloping algebra has Hilbert series 1/(1 - n t + t^2), recovered by
    inverting the PBW product formula."""
    u = [1, n_gens]
    for m in range(2, q + 1):
        u.append(n_gens * u[-1] - u[-2])
    dims: list[int] = []
    for m in range(1, q + 1):
        dims.append(0)
        pbw = pbw_series(dims, m)
        dims[-1] = u[m] - pbw[m]
    return dims


def pbw_series(lie_dims: list[int], S: int) -> list[int]:
    """Coefficients of prod_n (1 - t^n)^(-l_n) through t^S, via binomials."""
    series = [1] + [0] * S
    for n, l in enumerate(lie_dims, start=1):
        new = [0] * (S + 1)
        for k in range(S + 1):
            for j in range(0, k // n + 1):
                new[k] += series[k - j * n] * comb(l + j - 1, j) if l else (series[k] if j == 0 else 0)
        series = new
    return series


def bch_oracle(q: int) -> dict:
    """Homogeneous pieces of log(e^X e^Y) as {word: Fraction} in X=0, Y=1."""
    X, Y = sympy.symbols("X Y", commutative=False)

    def cut(expr):
        keep = [t for t in sympy.Add.make_args(sympy.expand(expr)) if _length(t) <= q]
        return sympy.Add(*keep)

    def trunc_exp(Z):
        out, term = sympy.Integer(1), sympy.Integer(1)
        for k in range(1, q + 1):
            term = cut(term * Z) / k
            out += term
        return out

    z = cut(trunc_exp(X) * trunc_exp(Y)) - 1
    out, power = sympy.Integer(0), sympy.Integer(1)
    for k in range(1, q + 1):
        power = cut(power * z)
        out += sympy.Rational((-1) ** (k + 1), k) * power
    return _to_words(sympy.expand(out), X, Y)


def _length(term) -> int:
    _, factors = term.args_cnc()
    return sum(int(f.as_base_exp()[1]) for f in factors)


def _to_words(expr, X, Y) -> dict:
    out: dict = {}
    for term in sympy.Add.make_args(expr):
        if term == 0:
            continue
        coeff, factors = term.args_cnc()
        c = sympy.Mul(*coeff)
        word = []
        for f in factors:
            base, exp = f.as_base_exp()
            word += [0 if base == X else 1] * int(exp)
        key = tuple(word)
        out[key] = out.get(key, Fraction(0)) + Fraction(int(c.p), int(c.q))
    return {w: c for w, c in out.items() if c}


def tree_to_words(tree) -> dict:
    """Expand a bracket tree with integer leaves into words."""
    if isinstance(tree, int):
        return {(tree,): 1}
    return _word_poly_commutator(tree_to_words(tree[0]), tree_to_words(tree[1]))
