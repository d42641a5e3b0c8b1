"""Free nilpotent Lie algebras on a Lyndon basis and relation-ideal profiles.

Basis elements are Lyndon words of length <= R, each standing for its
standard bracketing.  Brackets are computed by expanding both sides in the
free associative algebra and reading off Lyndon coordinates by
triangularity: the standard bracketing of a Lyndon word w equals w plus
lexicographically larger words of the same length.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import flint

from . import linalg
from .algebra import AlgebraError, GradedLieAlgebra, ensure_valid, is_filtered

Word = Tuple[int, ...]
Poly = Dict[Word, int]

_LETTERS = "XYZUVW"


def mobius(n: int) -> int:
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def witt_dimension(k: int, w: int) -> int:
    """(1/w) Σ_(d | w) μ(d) k^(w/d)."""
    if k < 1 or w < 1:
        raise ValueError("need k >= 1 and w >= 1")
    total = sum(mobius(d) * k ** (w // d) for d in range(1, w + 1) if w % d == 0)
    return total // w


def lyndon_words(k: int, n: int) -> List[Word]:
    """All Lyndon words over k letters of length <= n, by Duval's algorithm."""
    out: List[Word] = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return sorted(out, key=lambda x: (len(x), x))


def standard_factorization(w: Word) -> Tuple[Word, Word]:
    """w = uv with v the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        v = w[i:]
        if _is_lyndon(v):
            return w[:i], v
    raise ValueError(f"{w} has length 1")


def _is_lyndon(w: Word) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def _poly_bracket(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for u, x in a.items():
        for v, y in b.items():
            out[u + v] = out.get(u + v, 0) + x * y
            out[v + u] = out.get(v + u, 0) - x * y
    return {w: c for w, c in out.items() if c}


@dataclass(frozen=True)
class HallBasis:
    generators: int
    rank: int
    words: Tuple[Word, ...]
    algebra: GradedLieAlgebra

    def tree(self, i: int) -> str:
        return _tree(self.words[i], self.generators)

    def layer_dims(self) -> Dict[int, int]:
        dims: Dict[int, int] = {}
        for w in self.words:
            dims[len(w)] = dims.get(len(w), 0) + 1
        return dims

    def to_json(self) -> dict:
        return {"generators": self.generators, "rank": self.rank,
                "dims": [self.layer_dims().get(w, 0) for w in range(1, self.rank + 1)],
                "basis": [self.tree(i) for i in range(len(self.words))]}


def _letter(i: int, k: int) -> str:
    return _LETTERS[i] if k <= len(_LETTERS) else f"X{i + 1}"


def _tree(w: Word, k: int) -> str:
    if len(w) == 1:
        return _letter(w[0], k)
    u, v = standard_factorization(w)
    return f"[{_tree(u, k)},{_tree(v, k)}]"


def _label(w: Word, k: int) -> str:
    if k <= len(_LETTERS):
        return "".join(_LETTERS[i] for i in w)
    return ".".join(str(i + 1) for i in w)


@lru_cache(maxsize=None)
def hall_basis(k: int, R: int) -> HallBasis:
    """Lyndon basis of the free nilpotent Lie algebra with k generators, truncated above weight R."""
    if k < 1 or R < 1:
        raise ValueError("need k >= 1 and R >= 1")
    words = lyndon_words(k, R)
    index = {w: i for i, w in enumerate(words)}
    polys: Dict[Word, Poly] = {}
    for w in words:
        if len(w) == 1:
            polys[w] = {w: 1}
        else:
            u, v = standard_factorization(w)
            polys[w] = _poly_bracket(polys[u], polys[v])

    def coords(p: Poly) -> Dict[int, int]:
        p = dict(p)
        out: Dict[int, int] = {}
        while p:
            lead = min(p)
            c = p[lead]
            if lead not in index:
                raise ArithmeticError(f"leading word {lead} is not Lyndon")
            out[index[lead]] = c
            for t, x in polys[lead].items():
                y = p.get(t, 0) - c * x
                if y:
                    p[t] = y
                else:
                    p.pop(t, None)
        return out

    brackets = {}
    for i, a in enumerate(words):
        for j in range(i + 1, len(words)):
            b = words[j]
            if len(a) + len(b) > R:
                continue
            row = coords(_poly_bracket(polys[a], polys[b]))
            if row:
                brackets[(i, j)] = row
    labels = [_label(w, k) for w in words]
    alg = GradedLieAlgebra(f"free({k},{R})", labels, [len(w) for w in words], brackets)
    return HallBasis(k, R, tuple(words), ensure_valid(alg))


def free_nilpotent(k: int, R: int) -> GradedLieAlgebra:
    return hall_basis(k, R).algebra


# ---------------------------------------------------------------------------
# relation profile


@dataclass(frozen=True)
class RelationProfile:
    algebra: str
    truncation: int
    kernel_dims: Dict[int, int]
    bracket_dims: Dict[int, int]
    generator_counts: Dict[int, int]
    surjective: bool

    @property
    def weights(self) -> List[int]:
        return [w for w, g in sorted(self.generator_counts.items()) for _ in range(g)]

    def to_json(self) -> dict:
        def keyed(d):
            return {str(w): v for w, v in sorted(d.items())}
        return {"algebra": self.algebra, "truncation": self.truncation,
                "kernel_dims": keyed(self.kernel_dims), "bracket_dims": keyed(self.bracket_dims),
                "generator_counts": keyed(self.generator_counts), "weights": self.weights,
                "surjective": self.surjective}


def _vec(d: Mapping[int, Fraction], idx: Sequence[int]) -> List[Fraction]:
    return [Fraction(d.get(i, 0)) for i in idx]


def relation_profile(alg: GradedLieAlgebra, truncation: Optional[int] = None) -> RelationProfile:
    """Weights of a minimal generating set of the relation ideal of alg.

    The free algebra on dim g_1 generators is truncated at the largest
    weight occurring in H^2(alg), unless given explicitly.
    """
    if not is_filtered(alg):
        raise AlgebraError(f"{alg.name} is not generated by its weight-one layer")
    from .cohomology import h2_weights
    gens = alg.layer(1)
    k = len(gens)
    R = truncation if truncation is not None else max(h2_weights(alg) + [alg.rank])
    hb = hall_basis(k, R)
    free = hb.algebra
    image: List[Dict[int, Fraction]] = []
    for w in hb.words:
        if len(w) == 1:
            image.append({gens[w[0]]: Fraction(1)})
        else:
            u, v = standard_factorization(w)
            image.append(alg.bracket_vectors(image[hb.words.index(u)], image[hb.words.index(v)]))

    kernel_dims: Dict[int, int] = {}
    bracket_dims: Dict[int, int] = {}
    counts: Dict[int, int] = {}
    kernels: Dict[int, List[Dict[int, Fraction]]] = {}
    surjective = True
    for w in range(1, R + 1):
        cols = free.layer(w)
        rows = alg.layer(w)
        if rows:
            m = linalg.dense([_vec(image[c], rows) for c in cols]).transpose() if cols else None
            rk = linalg.rank(m) if m is not None else 0
            surjective = surjective and rk == len(rows)
        if not cols:
            continue
        if rows:
            null = linalg.nullspace(m)
        else:
            null = [[Fraction(int(i == j)) for i in range(len(cols))] for j in range(len(cols))]
        kernels[w] = [{cols[i]: c for i, c in enumerate(v) if c} for v in null]
        kernel_dims[w] = len(null)
        spans = []
        for a in range(1, w):
            for x in kernels.get(a, []):
                for y in free.layer(w - a):
                    b = free.bracket_vectors(x, {y: Fraction(1)})
                    if b:
                        spans.append(_vec(b, cols))
        bdim = linalg.rank(linalg.dense(spans)) if spans else 0
        bracket_dims[w] = bdim
        if len(null) - bdim:
            counts[w] = len(null) - bdim
    return RelationProfile(alg.name, R, kernel_dims, bracket_dims, counts, surjective)
