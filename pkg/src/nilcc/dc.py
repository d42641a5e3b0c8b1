"""The complex (E0, d_c) as matrices of left-invariant differential operators.

An ``OperatorMatrix`` is a finite sum of rational matrices tensored with
normal-ordered PBW monomials.  Entry (r, c) is the operator applied to the
coefficient of basis vector c to produce the coefficient of basis vector r;
composition A ∘ B multiplies symbols as a·b (b acts first).

Coefficients are differentiated by the frame: d(u θ^I) = Σ_i (X_i u) θ^i ∧ θ^I + u d0 θ^I.
The lift Π_E of a weight-p harmonic form α is α + β_(p+1) + β_(p+2) + ...
with β_q = -d0^+ [d (α + ... + β_(q-1))]_q, and d_c is the orthogonal
projection onto E0 of d Π_E.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import flint

from . import linalg
from .algebra import GradedLieAlgebra, layer_profile
from .cohomology import E0Basis, e0_basis
from .forms import d0_matrix, d0_pinv, d0_pinv_block, form_space, sort_sign, star_matrix
from .linalg import QMatrix, frac
from .pbw import Exponent, PbwElement, format_pbw, ring

Components = Dict[Exponent, QMatrix]


def _zero(m: flint.fmpq_mat) -> bool:
    return m == flint.fmpq_mat(m.nrows(), m.ncols())


def _to_qmatrix(m: flint.fmpq_mat, rows: Sequence[int], cols: Sequence[int], nrows: int, ncols: int,
                into: Optional[Dict[int, Dict[int, Fraction]]] = None, scale: Fraction = Fraction(1)):
    out = into if into is not None else {}
    for j in range(m.ncols()):
        col = None
        for i in range(m.nrows()):
            v = m[i, j]
            if v != 0:
                if col is None:
                    col = out.setdefault(cols[j], {})
                r = rows[i]
                col[r] = col.get(r, 0) + scale * frac(v)
    return out


def _matmul(a: QMatrix, b: QMatrix) -> QMatrix:
    """Sparse product, switching to flint when the operands are dense enough."""
    if a.ncols != b.nrows:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    work = sum(len(a.cols.get(m, ())) * len(col) for col in b.cols.values() for m in col)
    if work < 200000:
        return a @ b
    rows = sorted({r for col in a.cols.values() for r in col})
    mids = sorted(set(a.cols) & {m for col in b.cols.values() for m in col})
    cols = sorted(b.cols)
    fa = a.block(rows, mids)
    fb = b.block(mids, cols)
    return QMatrix(a.nrows, b.ncols, _to_qmatrix(fa * fb, rows, cols, a.nrows, b.ncols))


class OperatorMatrix:
    """Linear map between graded bases with PBW-valued entries."""

    def __init__(self, alg: GradedLieAlgebra, target_weights: Sequence[int], source_weights: Sequence[int],
                 components: Mapping[Exponent, QMatrix] | None = None,
                 target_labels: Sequence[str] | None = None, source_labels: Sequence[str] | None = None):
        self.alg = alg
        self.target_weights = tuple(target_weights)
        self.source_weights = tuple(source_weights)
        self.target_labels = tuple(target_labels) if target_labels is not None else tuple(f"e{i}" for i in range(len(self.target_weights)))
        self.source_labels = tuple(source_labels) if source_labels is not None else tuple(f"e{i}" for i in range(len(self.source_weights)))
        self.components: Components = {}
        for mono, m in (components or {}).items():
            if m.shape != self.shape:
                raise ValueError(f"component shape {m.shape} differs from {self.shape}")
            if not m.is_zero():
                self.components[tuple(mono)] = m

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.target_weights), len(self.source_weights))

    def _like(self, components: Mapping[Exponent, QMatrix], target=None, source=None) -> "OperatorMatrix":
        t = target or (self.target_weights, self.target_labels)
        s = source or (self.source_weights, self.source_labels)
        return OperatorMatrix(self.alg, t[0], s[0], components, t[1], s[1])

    # -- entries -----------------------------------------------------------
    def entry_terms(self) -> Dict[Tuple[int, int], Dict[Exponent, Fraction]]:
        out: Dict[Tuple[int, int], Dict[Exponent, Fraction]] = {}
        for mono, m in self.components.items():
            for r, c, v in m.entries():
                out.setdefault((r, c), {})[mono] = v
        return out

    def entry(self, r: int, c: int) -> PbwElement:
        return PbwElement(self.alg, {mono: m[r, c] for mono, m in self.components.items() if m[r, c]})

    def entries(self) -> Iterable[Tuple[int, int, PbwElement]]:
        for (r, c), terms in sorted(self.entry_terms().items(), key=lambda x: (x[0][1], x[0][0])):
            yield r, c, PbwElement(self.alg, terms)

    def nonzero_columns(self) -> set:
        return {c for m in self.components.values() for c in m.cols}

    def is_zero(self) -> bool:
        return not self.components

    # -- algebra -----------------------------------------------------------
    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        out = dict(self.components)
        for mono, m in other.components.items():
            out[mono] = out[mono] + m if mono in out else m
        return self._like(out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "OperatorMatrix":
        return self._like({mono: m.scale(s) for mono, m in self.components.items()})

    def compose(self, other: "OperatorMatrix") -> "OperatorMatrix":
        """self ∘ other (other acts first)."""
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        rg = ring(self.alg)
        acc: Dict[Exponent, QMatrix] = {}
        for u, a in self.components.items():
            for v, b in other.components.items():
                prod = _matmul(a, b)
                if prod.is_zero():
                    continue
                terms = {v: Fraction(1)} if not any(u) else ({u: Fraction(1)} if not any(v) else rg.times_mono(u, v))
                for t, c in terms.items():
                    piece = prod if c == 1 else prod.scale(c)
                    acc[t] = acc[t] + piece if t in acc else piece
        return OperatorMatrix(self.alg, self.target_weights, other.source_weights, acc,
                              self.target_labels, other.source_labels)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return self.compose(other)
        return self.right_scalar(other)

    def left_scalar(self, q: QMatrix, target_weights=None, target_labels=None) -> "OperatorMatrix":
        tw = target_weights if target_weights is not None else self.target_weights
        tl = target_labels if target_labels is not None else None
        return OperatorMatrix(self.alg, tw, self.source_weights,
                              {mono: _matmul(q, m) for mono, m in self.components.items()},
                              tl, self.source_labels)

    def right_scalar(self, q: QMatrix, source_weights=None, source_labels=None) -> "OperatorMatrix":
        sw = source_weights if source_weights is not None else self.source_weights
        return OperatorMatrix(self.alg, self.target_weights, sw,
                              {mono: _matmul(m, q) for mono, m in self.components.items()},
                              self.target_labels, source_labels)

    def adjoint_transpose(self) -> "OperatorMatrix":
        """Entrywise formal adjoint of the transpose: (A^†)_(c,r) = (A_(r,c))^†."""
        rg = ring(self.alg)
        acc: Dict[Exponent, QMatrix] = {}
        for u, m in self.components.items():
            mt = m.transpose()
            for t, c in rg.adjoint({u: Fraction(1)}).items():
                piece = mt.scale(c)
                acc[t] = acc[t] + piece if t in acc else piece
        return OperatorMatrix(self.alg, self.source_weights, self.target_weights, acc,
                              self.source_labels, self.target_labels)

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return self.shape == other.shape and self.components == other.components

    # -- weights -----------------------------------------------------------
    def increment_components(self) -> Dict[int, "OperatorMatrix"]:
        """Split by weight increment (row weight minus column weight)."""
        parts: Dict[int, Dict[Exponent, Dict[int, Dict[int, Fraction]]]] = {}
        for mono, m in self.components.items():
            for r, c, v in m.entries():
                inc = self.target_weights[r] - self.source_weights[c]
                parts.setdefault(inc, {}).setdefault(mono, {}).setdefault(c, {})[r] = v
        return {inc: self._like({mono: QMatrix(*self.shape, cols) for mono, cols in comps.items()})
                for inc, comps in sorted(parts.items())}

    def increments(self) -> List[int]:
        return sorted(self.increment_components())

    def homogeneity_violations(self) -> List[Tuple[int, int]]:
        """Entries whose symbol weight differs from target weight minus source weight."""
        rg = ring(self.alg)
        bad = []
        for mono, m in self.components.items():
            w = rg.weight(mono)
            for r, c, _ in m.entries():
                if self.target_weights[r] - self.source_weights[c] != w:
                    bad.append((r, c))
        return sorted(set(bad))

    # -- output ------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "source": list(self.source_labels),
            "target": list(self.target_labels),
            "source_weights": list(self.source_weights),
            "target_weights": list(self.target_weights),
            "entries": [{"row": r, "col": c, "symbol": str(e)} for r, c, e in self.entries()],
        }

    def diagram(self) -> str:
        """One arrow per nonzero entry: source --[symbol]--> target."""
        lines = []
        for r, c, e in self.entries():
            lines.append(f"{self.source_labels[c]} --[{e}]--> {self.target_labels[r]}")
        return "\n".join(lines) if lines else "(zero map)"

    def __repr__(self):
        return f"OperatorMatrix({self.shape[0]}x{self.shape[1]}, monomials={len(self.components)})"


# ---------------------------------------------------------------------------
# the full differential


def ext_matrix(alg: GradedLieAlgebra, k: int, i: int) -> QMatrix:
    """theta^i ^ . : Lambda^k -> Lambda^(k+1)."""
    def build():
        src, dst = form_space(alg, k), form_space(alg, k + 1)
        cols = {}
        for c, mono in enumerate(src.monomials):
            sign, key = sort_sign((i,) + mono)
            if sign:
                cols[c] = {dst.index[key]: Fraction(sign)}
        return QMatrix(len(dst), len(src), cols)
    return alg.memo(("ext", k, i), build)


def _unit(alg: GradedLieAlgebra, i: Optional[int] = None) -> Exponent:
    e = [0] * alg.dim
    if i is not None:
        e[i] = 1
    return tuple(e)


def _space_labels(alg: GradedLieAlgebra, k: int) -> List[str]:
    s = form_space(alg, k)
    return [s.label(i) for i in range(len(s))]


def full_d(alg: GradedLieAlgebra, k: int) -> OperatorMatrix:
    """d : Lambda^k -> Lambda^(k+1) with operator coefficients."""
    def build():
        src, dst = form_space(alg, k), form_space(alg, k + 1)
        comps = {_unit(alg): d0_matrix(alg, k)}
        for i in range(alg.dim):
            comps[_unit(alg, i)] = ext_matrix(alg, k, i)
        return OperatorMatrix(alg, dst.weights, src.weights, comps, _space_labels(alg, k + 1), _space_labels(alg, k))
    return alg.memo(("full_d", k), build)


def scalar_operator(alg: GradedLieAlgebra, q: QMatrix, target_weights, source_weights,
                    target_labels=None, source_labels=None) -> OperatorMatrix:
    return OperatorMatrix(alg, target_weights, source_weights, {_unit(alg): q}, target_labels, source_labels)


# ---------------------------------------------------------------------------
# lift and d_c


@dataclass
class _DegreeData:
    lift: OperatorMatrix
    dc: OperatorMatrix


def _e0_labels(basis: E0Basis) -> List[str]:
    return basis.labels()


def _ext_block(alg: GradedLieAlgebra, k: int, i: int, q: int):
    src, dst = form_space(alg, k), form_space(alg, k + 1)
    cols = src.blocks.get(q)
    rows = dst.blocks.get(q + alg.weights[i])
    if not cols or not rows:
        return None
    key = ("extblock", k, i, q)
    big = len(rows) * len(cols) > 400000
    if not big:
        return alg.memo(key, lambda: ext_matrix(alg, k, i).block(rows, cols))
    return ext_matrix(alg, k, i).block(rows, cols)


def _degree_data(alg: GradedLieAlgebra, k: int) -> _DegreeData:
    def build():
        n = alg.dim
        src = e0_basis(alg, k)
        dst = e0_basis(alg, k + 1)
        sp, sp1 = form_space(alg, k), form_space(alg, k + 1)
        rg = ring(alg)
        one = _unit(alg)
        lift_cols: Dict[Exponent, Dict[int, Dict[int, Fraction]]] = {}
        dc_cols: Dict[Exponent, Dict[int, Dict[int, Fraction]]] = {}
        left_mult: Dict[Tuple[int, Exponent], Dict[Exponent, Fraction]] = {}

        def x_times(i, mono):
            key = (i, mono)
            hit = left_mult.get(key)
            if hit is None:
                hit = rg.gen_times(i, {mono: Fraction(1)})
                left_mult[key] = hit
            return hit

        for p, (rows_p, b) in src.blocks.items():
            cols_e0 = list(range(src.offset[p], src.offset[p] + b.ncols()))
            beta: Dict[int, Dict[Exponent, flint.fmpq_mat]] = {p: {one: b}}
            acc: Dict[int, Dict[Exponent, flint.fmpq_mat]] = {}

            def push(q):
                for mono, m in beta[q].items():
                    for i in range(n):
                        e = _ext_block(alg, k, i, q)
                        if e is None:
                            continue
                        prod = e * m
                        if _zero(prod):
                            continue
                        s = q + alg.weights[i]
                        slot = acc.setdefault(s, {})
                        for t, c in x_times(i, mono).items():
                            piece = prod if c == 1 else prod * linalg.to_fmpq(c)
                            slot[t] = slot[t] + piece if t in slot else piece

            push(p)
            for q in sorted(w for w in sp.blocks if w > p):
                rhs = acc.get(q)
                if not rhs:
                    continue
                _, _, pinv = d0_pinv_block(alg, k, q)
                if pinv.nrows() == 0 or pinv.ncols() == 0:
                    continue
                step = {}
                for t, v in rhs.items():
                    x = -(pinv * v)
                    if not _zero(x):
                        step[t] = x
                if step:
                    beta[q] = step
                    push(q)
            for q, parts in beta.items():
                rows_q = sp.blocks[q]
                for mono, m in parts.items():
                    _to_qmatrix(m, rows_q, cols_e0, len(sp), len(src), lift_cols.setdefault(mono, {}))
            for s, (rows_s, _) in dst.blocks.items():
                parts = acc.get(s)
                if not parts:
                    continue
                proj = dst.projector(s)
                rows_e0 = list(range(dst.offset[s], dst.offset[s] + dst.blocks[s][1].ncols()))
                for mono, v in parts.items():
                    c = proj * v
                    if not _zero(c):
                        _to_qmatrix(c, rows_e0, cols_e0, len(dst), len(src), dc_cols.setdefault(mono, {}))

        src_labels = _e0_labels(src)
        lift = OperatorMatrix(alg, sp.weights, src.weights,
                              {m: QMatrix(len(sp), len(src), cols) for m, cols in lift_cols.items()},
                              _space_labels(alg, k), src_labels)
        dc = OperatorMatrix(alg, dst.weights, src.weights,
                            {m: QMatrix(len(dst), len(src), cols) for m, cols in dc_cols.items()},
                            _e0_labels(dst), src_labels)
        return _DegreeData(lift, dc)
    return alg.memo(("dcdata", k), build)


def lift_matrix(alg: GradedLieAlgebra, k: int) -> OperatorMatrix:
    """Π_E restricted to E0^k, as a map E0^k -> Lambda^k."""
    return _degree_data(alg, k).lift


def dc_matrix(alg: GradedLieAlgebra, k: int) -> OperatorMatrix:
    """d_c : E0^k -> E0^(k+1) in the harmonic bases."""
    if k >= alg.dim:
        src = e0_basis(alg, k)
        return OperatorMatrix(alg, (), src.weights, {}, (), _e0_labels(src))
    return _degree_data(alg, k).dc


# ---------------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class ComplexCheck:
    ok: bool
    degree: Optional[int] = None
    row: Optional[int] = None
    col: Optional[int] = None
    symbol: str = ""

    def to_json(self) -> dict:
        return {"ok": self.ok, "degree": self.degree, "row": self.row, "col": self.col, "symbol": self.symbol}


def _first_entry(m: OperatorMatrix, k: int) -> ComplexCheck:
    for r, c, e in m.entries():
        return ComplexCheck(False, k, r, c, str(e))
    return ComplexCheck(True)


def verify_dc_complex(alg: GradedLieAlgebra, degrees: Optional[Iterable[int]] = None) -> ComplexCheck:
    """d_c^(k+1) ∘ d_c^(k) = 0 for every k; returns the first offending entry otherwise."""
    ks = range(alg.dim - 1) if degrees is None else degrees
    for k in ks:
        sq = dc_matrix(alg, k + 1).compose(dc_matrix(alg, k))
        if not sq.is_zero():
            return _first_entry(sq, k)
    return ComplexCheck(True)


def verify_d_squared(alg: GradedLieAlgebra) -> ComplexCheck:
    for k in range(alg.dim - 1):
        sq = full_d(alg, k + 1).compose(full_d(alg, k))
        if not sq.is_zero():
            return _first_entry(sq, k)
    return ComplexCheck(True)


def _gram_qmatrix(basis: E0Basis, inverse: bool = False) -> QMatrix:
    cols: Dict[int, Dict[int, Fraction]] = {}
    for w, (_, b) in basis.blocks.items():
        g = basis.gram_inv(w) if inverse else b.transpose() * b
        off = basis.offset[w]
        for j in range(g.ncols()):
            cols[off + j] = {off + i: frac(g[i, j]) for i in range(g.nrows()) if g[i, j] != 0}
    return QMatrix(len(basis), len(basis), cols)


def delta_c_adjoint(alg: GradedLieAlgebra, k: int) -> OperatorMatrix:
    """δ_c on E0^k as the L2 adjoint of d_c^(k-1): G_(k-1)^-1 (d_c)^†T G_k."""
    lower, upper = e0_basis(alg, k - 1), e0_basis(alg, k)
    at = dc_matrix(alg, k - 1).adjoint_transpose()
    out = at.right_scalar(_gram_qmatrix(upper)).left_scalar(_gram_qmatrix(lower, inverse=True))
    return out


def star_e0(alg: GradedLieAlgebra, k: int) -> QMatrix:
    """Hodge star E0^k -> E0^(n-k) in harmonic coordinates."""
    def build():
        src, dst = e0_basis(alg, k), e0_basis(alg, alg.dim - k)
        images = _matmul(star_matrix(alg, k), src.matrix())
        cols = {}
        for c, col in images.cols.items():
            coords = dst.coords(col)
            back = dst.matrix().apply(coords)
            if back != {r: v for r, v in col.items() if v}:
                raise ArithmeticError("Hodge star does not preserve E0")
            cols[c] = coords
        return QMatrix(len(dst), len(src), cols)
    return alg.memo(("star_e0", k), build)


def duality_sign(k: int) -> int:
    """δ = (-1)^k *^-1 d * on k-forms, for every dimension."""
    return -1 if k % 2 else 1


def delta_c_star(alg: GradedLieAlgebra, k: int) -> OperatorMatrix:
    """δ_c on E0^k as (-1)^k S_(k-1)^-1 d_c^(n-k) S_k with S the star on E0."""
    n = alg.dim
    s_k = star_e0(alg, k)
    s_back = star_e0(alg, n - k + 1)  # inverse of S_(k-1) up to sign
    # *^-1 on (n-k+1)-forms equals (-1)^((k-1)(n-k+1)) *
    sign = duality_sign(k) * (-1 if ((k - 1) * (n - k + 1)) % 2 else 1)
    d = dc_matrix(alg, n - k)
    lower, upper = e0_basis(alg, k - 1), e0_basis(alg, k)
    out = d.right_scalar(s_k, upper.weights, _e0_labels(upper)).left_scalar(s_back, lower.weights, _e0_labels(lower))
    return out.scale(sign)


@dataclass(frozen=True)
class DualityCheck:
    ok: bool
    degree: Optional[int] = None
    detail: str = ""


def verify_delta_c(alg: GradedLieAlgebra, degrees: Optional[Iterable[int]] = None) -> DualityCheck:
    """The adjoint and star-conjugate constructions of δ_c agree, and δ_c^2 = 0."""
    ks = range(1, alg.dim + 1) if degrees is None else degrees
    prev = None
    for k in ks:
        a = delta_c_star(alg, k)
        b = delta_c_adjoint(alg, k)
        if a != b:
            diff = a - b
            r, c, e = next(iter(diff.entries()))
            return DualityCheck(False, k, f"entry ({r},{c}) differs by {e}")
        if prev is not None and prev[0] == k - 1:
            sq = prev[1].compose(a)
            if not sq.is_zero():
                return DualityCheck(False, k, "delta_c^2 != 0")
        prev = (k, a)
    return DualityCheck(True)


# ---------------------------------------------------------------------------
# retraction


def retraction(alg: GradedLieAlgebra, k: int, m: OperatorMatrix) -> OperatorMatrix:
    """r = id - d0^+ d - d d0^+ applied to a Lambda^k-valued operator matrix."""
    sp = form_space(alg, k)
    out = m - full_d(alg, k).compose(m).left_scalar(d0_pinv(alg, k), sp.weights, _space_labels(alg, k))
    if k >= 1:
        sp0 = form_space(alg, k - 1)
        lowered = m.left_scalar(d0_pinv(alg, k - 1), sp0.weights, _space_labels(alg, k - 1))
        out = out - full_d(alg, k - 1).compose(lowered)
    return out


@dataclass(frozen=True)
class RetractionCheck:
    fixed_point: bool
    steps_to_converge: Optional[int]
    bound: int

    @property
    def ok(self) -> bool:
        return self.fixed_point and self.steps_to_converge is not None


def retraction_check(alg: GradedLieAlgebra, k: int) -> RetractionCheck:
    """Π_E α is fixed by r, and r^j(α) reaches it within N(G) steps."""
    lift = lift_matrix(alg, k)
    fixed = retraction(alg, k, lift) == lift
    bound = layer_profile(alg).homogeneous_dim
    src = e0_basis(alg, k)
    cur = scalar_operator(alg, src.matrix(), form_space(alg, k).weights, src.weights,
                          _space_labels(alg, k), _e0_labels(src))
    steps = None
    for j in range(bound + 1):
        if cur == lift:
            steps = j
            break
        cur = retraction(alg, k, cur)
    return RetractionCheck(fixed, steps, bound)


# ---------------------------------------------------------------------------
# cut-offs


@dataclass
class CutoffFamily:
    degree: int
    components: Dict[int, OperatorMatrix]
    total: OperatorMatrix

    @property
    def increments(self) -> List[int]:
        return sorted(self.components)

    def partial(self, r: int) -> OperatorMatrix:
        """d_c^[r]: the sum of the components of increment <= r."""
        out = OperatorMatrix(self.total.alg, self.total.target_weights, self.total.source_weights, {},
                             self.total.target_labels, self.total.source_labels)
        for inc, m in self.components.items():
            if inc <= r:
                out = out + m
        return out


def cutoff_family(alg: GradedLieAlgebra, k: int) -> CutoffFamily:
    d = dc_matrix(alg, k)
    return CutoffFamily(k, d.increment_components(), d)


def audible_lower_bound(alg: GradedLieAlgebra, k: int) -> Optional[int]:
    """Largest r with a column of d_c^[r] identically zero while the column of d_c is not.

    Returns None when E0^k has mixed weight or no such r exists; a value r
    means beta_k >= r + 1.
    """
    src = e0_basis(alg, k)
    if len(set(src.weights)) != 1:
        return None
    fam = cutoff_family(alg, k)
    if not fam.components:
        return None
    live = fam.total.nonzero_columns()
    top = max(fam.increments)
    for r in range(top - 1, 0, -1):
        nz = fam.partial(r).nonzero_columns()
        if live - nz:
            return r
    return None
