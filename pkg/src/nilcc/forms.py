"""Invariant forms on a graded Lie algebra: d0, its adjoint, its partial inverse, Hodge star.

The monomials theta^I (I strictly increasing) are declared orthonormal and
ordered lexicographically; the volume form theta^0 ^ ... ^ theta^(n-1)
fixes the orientation.  All matrices are exact.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from . import linalg
from .algebra import GradedLieAlgebra
from .linalg import QMatrix, fmt_frac, frac

Monomial = Tuple[int, ...]


def sort_sign(seq: Sequence[int]) -> Tuple[int, Monomial]:
    """Sign of the permutation sorting ``seq`` and the sorted tuple; sign 0 on repeats."""
    s = list(seq)
    if len(set(s)) != len(s):
        return 0, ()
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(s)):
        j = i
        while j > 0 and s[j - 1] > s[j]:
            s[j - 1], s[j] = s[j], s[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(s)


class FormSpace:
    """Basis of Lambda^k g^*: lexicographic monomials with their weights."""

    def __init__(self, alg: GradedLieAlgebra, k: int):
        self.alg = alg
        self.degree = k
        self.monomials: List[Monomial] = list(itertools.combinations(range(alg.dim), k)) if 0 <= k <= alg.dim else []
        self.index: Dict[Monomial, int] = {m: i for i, m in enumerate(self.monomials)}
        self.weights: List[int] = [sum(alg.weights[i] for i in m) for m in self.monomials]
        blocks: Dict[int, List[int]] = {}
        for i, w in enumerate(self.weights):
            blocks.setdefault(w, []).append(i)
        self.blocks = blocks

    def __len__(self):
        return len(self.monomials)

    def label(self, i: int) -> str:
        m = self.monomials[i]
        if not m:
            return "1"
        return "^".join(f"θ_{self.alg.labels[j]}" for j in m)


def form_space(alg: GradedLieAlgebra, k: int) -> FormSpace:
    return alg.memo(("space", k), lambda: FormSpace(alg, k))


class InvariantForm:
    """Element of Lambda^k g^* with exact coefficients."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Mapping[Sequence[int], object] | None = None):
        self.degree = degree
        clean: Dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = frac(c)
            if not c:
                continue
            if len(mono) != degree:
                raise ValueError(f"monomial {mono} does not have degree {degree}")
            sign, key = sort_sign(mono)
            if sign == 0:
                continue
            clean[key] = clean.get(key, 0) + sign * c
        self.terms = {m: c for m, c in sorted(clean.items()) if c}

    @classmethod
    def monomial(cls, *indices: int, coeff=1) -> "InvariantForm":
        return cls(len(indices), {tuple(indices): coeff})

    @classmethod
    def from_vector(cls, space: FormSpace, vec) -> "InvariantForm":
        if isinstance(vec, Mapping):
            items = vec.items()
        else:
            items = enumerate(vec)
        return cls(space.degree, {space.monomials[i]: c for i, c in items if c})

    def to_vector(self, space: FormSpace) -> Dict[int, Fraction]:
        return {space.index[m]: c for m, c in self.terms.items()}

    def __add__(self, other: "InvariantForm") -> "InvariantForm":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return InvariantForm(self.degree, t)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "InvariantForm":
        s = frac(s)
        return InvariantForm(self.degree, {m: c * s for m, c in self.terms.items()})

    def __rmul__(self, s):
        return self.scale(s)

    def wedge(self, other: "InvariantForm") -> "InvariantForm":
        out: Dict[Monomial, Fraction] = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                sign, key = sort_sign(a + b)
                if sign:
                    out[key] = out.get(key, 0) + sign * x * y
        return InvariantForm(self.degree + other.degree, out)

    def __xor__(self, other):
        return self.wedge(other)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, InvariantForm):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, tuple(self.terms.items())))

    def to_json(self) -> list:
        return [{"monomial": list(m), "c": fmt_frac(c)} for m, c in self.terms.items()]

    def pretty(self, alg: GradedLieAlgebra | None = None) -> str:
        if not self.terms:
            return "0"
        out = ""
        for m, c in self.terms.items():
            name = "^".join(f"θ_{alg.labels[i]}" if alg else f"θ{i}" for i in m) or "1"
            mag = abs(c)
            body = name if mag == 1 else f"{fmt_frac(mag)}*{name}"
            if not out:
                out = body if c > 0 else f"-{body}"
            else:
                out += f" + {body}" if c > 0 else f" - {body}"
        return out

    def __repr__(self):
        return f"InvariantForm({self.degree}, {self.pretty()})"


def d0_theta(alg: GradedLieAlgebra) -> List[List[Tuple[Tuple[int, int], Fraction]]]:
    """d0 theta^k as a list of ((i, j), coefficient), i < j: d0 theta^k = -sum c_ij^k theta^i ^ theta^j."""
    def build():
        out: List[List[Tuple[Tuple[int, int], Fraction]]] = [[] for _ in range(alg.dim)]
        for (i, j), row in alg.brackets.items():
            for k, c in row.items():
                out[k].append(((i, j), -c))
        return out
    return alg.memo("d0theta", build)


def d0_monomial(alg: GradedLieAlgebra, mono: Monomial) -> Dict[Monomial, Fraction]:
    """Antiderivation extension of d0 on a single monomial."""
    dth = d0_theta(alg)
    out: Dict[Monomial, Fraction] = {}
    for pos, k in enumerate(mono):
        if not dth[k]:
            continue
        head, tail = mono[:pos], mono[pos + 1:]
        base_sign = -1 if pos % 2 else 1
        for (i, j), c in dth[k]:
            sign, key = sort_sign(head + (i, j) + tail)
            if sign:
                out[key] = out.get(key, 0) + base_sign * sign * c
    return {m: c for m, c in out.items() if c}


def d0_matrix(alg: GradedLieAlgebra, k: int) -> QMatrix:
    """Matrix of d0 : Lambda^k -> Lambda^(k+1) in the lexicographic monomial bases."""
    def build():
        src, dst = form_space(alg, k), form_space(alg, k + 1)
        cols = {}
        for c, mono in enumerate(src.monomials):
            img = d0_monomial(alg, mono)
            if img:
                cols[c] = {dst.index[m]: v for m, v in img.items()}
        return QMatrix(len(dst), len(src), cols)
    return alg.memo(("d0", k), build)


def delta0_matrix(alg: GradedLieAlgebra, k: int) -> QMatrix:
    """delta0 : Lambda^k -> Lambda^(k-1), the transpose of d0 in the orthonormal monomial basis."""
    if k <= 0:
        return QMatrix(0, len(form_space(alg, k)))
    return alg.memo(("delta0", k), lambda: d0_matrix(alg, k - 1).transpose())


def d0_block(alg: GradedLieAlgebra, k: int, w: int):
    """Dense block of d0 from weight-w k-forms to weight-w (k+1)-forms, with row/col index lists."""
    def build():
        src, dst = form_space(alg, k), form_space(alg, k + 1)
        cols = src.blocks.get(w, [])
        rows = dst.blocks.get(w, [])
        return rows, cols, d0_matrix(alg, k).block(rows, cols)
    return alg.memo(("d0block", k, w), build)


def d0_pinv_block(alg: GradedLieAlgebra, k: int, w: int):
    """Pseudoinverse of the weight-w block of d0 on k-forms: (cols of Lambda^k, rows of Lambda^(k+1), matrix)."""
    def build():
        rows, cols, block = d0_block(alg, k, w)
        return cols, rows, linalg.pinv(block)
    return alg.memo(("d0pinvblock", k, w), build)


def d0_pinv(alg: GradedLieAlgebra, k: int) -> QMatrix:
    """Exact Moore-Penrose pseudoinverse of d0 on k-forms, as a map Lambda^(k+1) -> Lambda^k.

    d0 preserves weight and the monomial basis is orthonormal and
    weight-graded, so the pseudoinverse is assembled block by block.
    """
    def build():
        src, dst = form_space(alg, k), form_space(alg, k + 1)
        cols: Dict[int, Dict[int, Fraction]] = {}
        for w in src.blocks:
            out_rows, in_cols, p = d0_pinv_block(alg, k, w)
            if not in_cols or not out_rows:
                continue
            for j, c in enumerate(in_cols):
                for i, r in enumerate(out_rows):
                    v = p[i, j]
                    if v != 0:
                        cols.setdefault(c, {})[r] = frac(v)
        return QMatrix(len(src), len(dst), cols)
    return alg.memo(("d0pinv", k), build)


def star_monomial(n: int, mono: Monomial) -> Tuple[int, Monomial]:
    """*theta^I = sign * theta^(I^c) with theta^I ^ *theta^I = vol."""
    comp = tuple(i for i in range(n) if i not in set(mono))
    sign, _ = sort_sign(mono + comp)
    return sign, comp


def hodge_star(alg: GradedLieAlgebra, form: InvariantForm) -> InvariantForm:
    n = alg.dim
    out = {}
    for m, c in form.terms.items():
        sign, comp = star_monomial(n, m)
        out[comp] = sign * c
    return InvariantForm(n - form.degree, out)


def star_matrix(alg: GradedLieAlgebra, k: int) -> QMatrix:
    """Hodge star Lambda^k -> Lambda^(n-k) as a signed permutation matrix."""
    def build():
        n = alg.dim
        src, dst = form_space(alg, k), form_space(alg, n - k)
        cols = {}
        for c, m in enumerate(src.monomials):
            sign, comp = star_monomial(n, m)
            cols[c] = {dst.index[comp]: Fraction(sign)}
        return QMatrix(len(dst), len(src), cols)
    return alg.memo(("star", k), build)


def form_weight(alg: GradedLieAlgebra, mono: Iterable[int]) -> int:
    return sum(alg.weights[i] for i in mono)


def weight_split(alg: GradedLieAlgebra, form: InvariantForm) -> Dict[int, InvariantForm]:
    parts: Dict[int, Dict[Monomial, Fraction]] = {}
    for m, c in form.terms.items():
        parts.setdefault(form_weight(alg, m), {})[m] = c
    return {w: InvariantForm(form.degree, t) for w, t in sorted(parts.items())}


def theta(alg: GradedLieAlgebra, *labels: str, coeff=1) -> InvariantForm:
    """Monomial form from basis labels, e.g. ``theta(engel, "X", "Y")``."""
    return InvariantForm(len(labels), {tuple(alg.index(l) for l in labels): coeff})


def d0(alg: GradedLieAlgebra, form: InvariantForm) -> InvariantForm:
    out: Dict[Monomial, Fraction] = {}
    for m, c in form.terms.items():
        for key, v in d0_monomial(alg, m).items():
            out[key] = out.get(key, 0) + c * v
    return InvariantForm(form.degree + 1, out)


@dataclass(frozen=True)
class FormSpaceBasis:
    degree: int
    monomials: Tuple[Monomial, ...]
    weights: Tuple[int, ...]


def form_space_basis(alg: GradedLieAlgebra, k: int) -> FormSpaceBasis:
    s = form_space(alg, k)
    return FormSpaceBasis(k, tuple(s.monomials), tuple(s.weights))
