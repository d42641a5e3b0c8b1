"""Exact rational linear algebra.

Dense kernels go through ``flint.fmpq_mat``; everything that leaves this
module is plain ``fractions.Fraction`` so callers never see flint types.
Sparse matrices are stored column-wise as ``{col: {row: Fraction}}``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import flint

Vector = Dict[int, Fraction]


def frac(x) -> Fraction:
    """Coerce ints, strings ("p/q"), Fractions and flint rationals."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted as exact coefficients")
    return Fraction(x)


def fmt_frac(x: Fraction) -> str:
    x = frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_fmpq(x: Fraction) -> flint.fmpq:
    return flint.fmpq(x.numerator, x.denominator)


def dense(rows: Sequence[Sequence]) -> flint.fmpq_mat:
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    m = flint.fmpq_mat(nr, nc)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v:
                v = frac(v)
                m[i, j] = to_fmpq(v)
    return m


def to_rows(m: flint.fmpq_mat) -> List[List[Fraction]]:
    return [[frac(m[i, j]) for j in range(m.ncols())] for i in range(m.nrows())]


class QMatrix:
    """Sparse rational matrix, column-major.

    Immutable by convention: the operations below return new objects.
    """

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: Mapping[int, Mapping[int, Fraction]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols: Dict[int, Vector] = {}
        if cols:
            for c, col in cols.items():
                clean = {r: frac(v) for r, v in col.items() if v}
                if clean:
                    self.cols[c] = clean

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QMatrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        cols: Dict[int, Vector] = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    cols.setdefault(j, {})[i] = frac(v)
        return cls(nr, nc, cols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, {i: {i: Fraction(1)} for i in range(n)})

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        r, c = key
        return self.cols.get(c, {}).get(r, Fraction(0))

    def entries(self) -> Iterable[Tuple[int, int, Fraction]]:
        for c, col in self.cols.items():
            for r, v in col.items():
                yield r, c, v

    def nnz(self) -> int:
        return sum(len(col) for col in self.cols.values())

    def is_zero(self) -> bool:
        return not self.cols

    def transpose(self) -> "QMatrix":
        out: Dict[int, Vector] = {}
        for r, c, v in self.entries():
            out.setdefault(r, {})[c] = v
        return QMatrix(self.ncols, self.nrows, out)

    T = property(transpose)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out: Dict[int, Vector] = {}
        for c, col in other.cols.items():
            acc: Vector = {}
            for m, v in col.items():
                left = self.cols.get(m)
                if not left:
                    continue
                for r, u in left.items():
                    acc[r] = acc.get(r, 0) + u * v
            out[c] = acc
        return QMatrix(self.nrows, other.ncols, out)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self._combine(other, -1)

    def _combine(self, other: "QMatrix", sign: int) -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = {c: dict(col) for c, col in self.cols.items()}
        for r, c, v in other.entries():
            col = out.setdefault(c, {})
            col[r] = col.get(r, 0) + sign * v
        return QMatrix(self.nrows, self.ncols, out)

    def scale(self, s) -> "QMatrix":
        s = frac(s)
        return QMatrix(self.nrows, self.ncols, {c: {r: v * s for r, v in col.items()} for c, col in self.cols.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.nnz()))

    def apply(self, vec: Mapping[int, Fraction]) -> Vector:
        acc: Vector = {}
        for c, v in vec.items():
            for r, u in self.cols.get(c, {}).items():
                acc[r] = acc.get(r, 0) + u * v
        return {r: v for r, v in acc.items() if v}

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> flint.fmpq_mat:
        rpos = {r: i for i, r in enumerate(rows)}
        m = flint.fmpq_mat(len(rows), len(cols))
        for j, c in enumerate(cols):
            for r, v in self.cols.get(c, {}).items():
                i = rpos.get(r)
                if i is not None:
                    m[i, j] = to_fmpq(v)
        return m

    def to_rows(self) -> List[List[Fraction]]:
        rows = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for r, c, v in self.entries():
            rows[r][c] = v
        return rows

    def __repr__(self):
        return f"QMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def rref(m: flint.fmpq_mat) -> Tuple[flint.fmpq_mat, List[int]]:
    """Reduced row echelon form and pivot columns."""
    if m.nrows() == 0 or m.ncols() == 0:
        return m, []
    r, rank = m.rref()
    pivots = []
    row = 0
    for j in range(m.ncols()):
        if row < rank and r[row, j] != 0:
            pivots.append(j)
            row += 1
    return r, pivots


def rank(m: flint.fmpq_mat) -> int:
    if m.nrows() == 0 or m.ncols() == 0:
        return 0
    return m.rank()


def to_fmpz_rows(m: flint.fmpq_mat) -> flint.fmpz_mat:
    """Scale each row by the lcm of its denominators; the row space is unchanged."""
    nr, nc = m.nrows(), m.ncols()
    vals = []
    for i in range(nr):
        row = [m[i, j] for j in range(nc)]
        den = 1
        for v in row:
            q = int(v.q)
            if q != 1:
                den = den * q // math.gcd(den, q)
        vals.extend(int(v.p) * (den // int(v.q)) for v in row)
    return flint.fmpz_mat(nr, nc, vals)


def nullspace(m: flint.fmpq_mat) -> List[List[Fraction]]:
    """Kernel basis read off the rref: one vector per free column, in column order.

    Each vector has a 1 in its free column and zeros in the other free
    columns, so the basis is canonical for a fixed column order.
    """
    ncols = m.ncols()
    if m.nrows() == 0:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    return nullspace_int(to_fmpz_rows(m))


def nullspace_int(z: flint.fmpz_mat) -> List[List[Fraction]]:
    """Same as ``nullspace`` for an integer matrix."""
    ncols = z.ncols()
    if z.nrows() == 0:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, den, rk = z.rref()
    den = int(den)
    pivots = pivot_columns(r, rk)
    pset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x = int(r[i, f])
            if x:
                v[p] = Fraction(-x, den)
        basis.append(v)
    return basis


def sparse_stack_int(parts: Sequence[Tuple[QMatrix, Sequence[int]]], cols: Sequence[int]) -> flint.fmpz_mat:
    """Integer matrix stacking the given row selections of sparse matrices on ``cols``.

    The whole stack is scaled by one positive integer, which leaves its
    kernel unchanged.
    """
    entries = []
    den = 1
    r0 = 0
    for mat, rows in parts:
        pos = {r: i for i, r in enumerate(rows)}
        for j, c in enumerate(cols):
            for r, v in mat.cols.get(c, {}).items():
                i = pos.get(r)
                if i is not None:
                    entries.append((r0 + i, j, v))
                    if v.denominator != 1:
                        den = den * v.denominator // math.gcd(den, v.denominator)
        r0 += len(rows)
    z = flint.fmpz_mat(r0, len(cols))
    for i, j, v in entries:
        z[i, j] = int(v * den)
    return z


def row_space(m: flint.fmpq_mat) -> List[List[Fraction]]:
    """Basis of the row space (nonzero rows of the rref)."""
    r, pivots = rref(m)
    return [[frac(r[i, j]) for j in range(m.ncols())] for i in range(len(pivots))]


def pivot_columns(r: flint.fmpz_mat, rk: int) -> List[int]:
    pivots = []
    row = 0
    for j in range(r.ncols()):
        if row < rk and r[row, j] != 0:
            pivots.append(j)
            row += 1
    return pivots


def pinv(m: flint.fmpq_mat) -> flint.fmpq_mat:
    """Exact Moore-Penrose pseudoinverse.

    With A = Z / D (Z integral) and R a maximal set of independent rows of
    Z, the pseudoinverse is D * R^T (R Z^T Z R^T)^-1 R Z^T: the answer lies
    in the row space and solves the normal equations there.
    """
    nr, nc = m.nrows(), m.ncols()
    if nr == 0 or nc == 0:
        return flint.fmpq_mat(nc, nr)
    den = 1
    for i in range(nr):
        for j in range(nc):
            q = int(m[i, j].q)
            if q != 1:
                den = den * q // math.gcd(den, q)
    z = flint.fmpz_mat(nr, nc, [int(m[i, j].p) * (den // int(m[i, j].q)) for i in range(nr) for j in range(nc)])
    zt = z.transpose()
    r, _, rk = zt.rref()
    if rk == 0:
        return flint.fmpq_mat(nc, nr)
    rows = pivot_columns(r, rk)
    rmat = flint.fmpz_mat([[z[i, j] for j in range(nc)] for i in rows])
    art = z * rmat.transpose()
    gram = art.transpose() * art
    x = gram.solve(rmat * zt)
    return flint.fmpq_mat(rmat.transpose()) * x * den


def solve_in_span(basis: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> List[Fraction] | None:
    """Coefficients x with sum x_i basis_i = target, or None if target is not in the span.

    ``basis`` must be linearly independent.
    """
    if not basis:
        return [] if not any(target) else None
    n = len(target)
    a = flint.fmpq_mat(n, len(basis) + 1)
    for j, b in enumerate(basis):
        for i in range(n):
            if b[i]:
                a[i, j] = to_fmpq(frac(b[i]))
    for i in range(n):
        if target[i]:
            a[i, len(basis)] = to_fmpq(frac(target[i]))
    r, pivots = rref(a)
    if len(basis) in pivots:
        return None
    x = [Fraction(0)] * len(basis)
    for i, p in enumerate(pivots):
        x[p] = frac(r[i, len(basis)])
    return x
