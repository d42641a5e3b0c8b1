"""Weight-graded Lie algebra cohomology, pinching intervals and presentation predicates.

Cohomology classes are represented by harmonic forms, E0 = ker d0 ∩ ker δ0,
computed weight block by weight block so every basis form is homogeneous.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import flint

from . import linalg
from .algebra import AlgebraError, GradedLieAlgebra, is_filtered, layer_profile
from .forms import InvariantForm, d0_block, d0_matrix, delta0_matrix, form_space
from .linalg import QMatrix, fmt_frac, frac

# ---------------------------------------------------------------------------
# harmonic bases


class E0Basis:
    """Exact basis of E0^k, grouped by weight (ascending)."""

    def __init__(self, alg: GradedLieAlgebra, k: int, blocks: Dict[int, Tuple[List[int], flint.fmpq_mat]]):
        self.alg = alg
        self.degree = k
        self.blocks = {w: blocks[w] for w in sorted(blocks)}
        self.offset: Dict[int, int] = {}
        weights: List[int] = []
        for w, (_, b) in self.blocks.items():
            self.offset[w] = len(weights)
            weights.extend([w] * b.ncols())
        self.weights = tuple(weights)
        self._gram_inv: Dict[int, flint.fmpq_mat] = {}

    def __len__(self):
        return len(self.weights)

    @property
    def forms(self) -> List[InvariantForm]:
        space = form_space(self.alg, self.degree)
        out = []
        for w, (rows, b) in self.blocks.items():
            for j in range(b.ncols()):
                out.append(InvariantForm.from_vector(space, {rows[i]: frac(b[i, j]) for i in range(len(rows)) if b[i, j] != 0}))
        return out

    def matrix(self) -> QMatrix:
        """Inclusion E0^k -> Lambda^k as a sparse matrix."""
        cols: Dict[int, Dict[int, Fraction]] = {}
        for w, (rows, b) in self.blocks.items():
            off = self.offset[w]
            for j in range(b.ncols()):
                cols[off + j] = {rows[i]: frac(b[i, j]) for i in range(len(rows)) if b[i, j] != 0}
        return QMatrix(len(form_space(self.alg, self.degree)), len(self), cols)

    def gram_inv(self, w: int) -> flint.fmpq_mat:
        hit = self._gram_inv.get(w)
        if hit is None:
            b = self.blocks[w][1]
            hit = (b.transpose() * b).inv()
            self._gram_inv[w] = hit
        return hit

    def projector(self, w: int) -> flint.fmpq_mat:
        """Coordinates of the orthogonal projection of a weight-w block vector onto E0."""
        return self.gram_inv(w) * self.blocks[w][1].transpose()

    def gram(self) -> QMatrix:
        cols: Dict[int, Dict[int, Fraction]] = {}
        for w, (_, b) in self.blocks.items():
            g = b.transpose() * b
            off = self.offset[w]
            for j in range(g.ncols()):
                cols[off + j] = {off + i: frac(g[i, j]) for i in range(g.nrows()) if g[i, j] != 0}
        return QMatrix(len(self), len(self), cols)

    def coords(self, vec: Mapping[int, Fraction]) -> Dict[int, Fraction]:
        """E0 coordinates of the orthogonal projection of a Lambda^k vector."""
        space = form_space(self.alg, self.degree)
        out: Dict[int, Fraction] = {}
        for w, (rows, b) in self.blocks.items():
            if not any(space.weights[r] == w for r in vec):
                continue
            v = flint.fmpq_mat(len(rows), 1)
            for i, r in enumerate(rows):
                x = vec.get(r)
                if x:
                    v[i, 0] = linalg.to_fmpq(frac(x))
            c = self.projector(w) * v
            for i in range(c.nrows()):
                if c[i, 0] != 0:
                    out[self.offset[w] + i] = frac(c[i, 0])
        return out

    def labels(self) -> List[str]:
        return [f.pretty(self.alg) for f in self.forms]


def _e0_block(alg: GradedLieAlgebra, k: int, w: int) -> Tuple[List[int], flint.fmpq_mat]:
    space = form_space(alg, k)
    cols = space.blocks.get(w, [])
    parts = []
    up = form_space(alg, k + 1).blocks.get(w, [])
    if up:
        parts.append((d0_matrix(alg, k), up))
    down = form_space(alg, k - 1).blocks.get(w, []) if k >= 1 else []
    if down:
        parts.append((delta0_matrix(alg, k), down))
    if not parts:
        kernel = [[Fraction(int(i == j)) for i in range(len(cols))] for j in range(len(cols))]
    else:
        z = linalg.sparse_stack_int(parts, cols)
        # an exact rank is much cheaper than the rref when the kernel is zero
        if z.rank() == len(cols):
            return cols, flint.fmpq_mat(len(cols), 0)
        kernel = linalg.nullspace_int(z)
    b = flint.fmpq_mat(len(cols), len(kernel))
    for j, v in enumerate(kernel):
        for i, x in enumerate(v):
            if x:
                b[i, j] = linalg.to_fmpq(x)
    return cols, b


def e0_basis(alg: GradedLieAlgebra, k: int) -> E0Basis:
    """Harmonic basis of H^k: exact, weight-homogeneous, rref-canonical per block."""
    def build():
        space = form_space(alg, k)
        blocks = {}
        for w in sorted(space.blocks):
            cols, b = _e0_block(alg, k, w)
            if b.ncols():
                blocks[w] = (cols, b)
        return E0Basis(alg, k, blocks)
    return alg.memo(("e0", k), build)


# ---------------------------------------------------------------------------
# summaries


@dataclass(frozen=True)
class DegreeSummary:
    degree: int
    dim: int
    weights: Tuple[int, ...]

    @property
    def min_weight(self) -> Optional[int]:
        return min(self.weights) if self.weights else None

    @property
    def max_weight(self) -> Optional[int]:
        return max(self.weights) if self.weights else None

    @property
    def pure(self) -> bool:
        return len(set(self.weights)) == 1

    def to_json(self) -> dict:
        return {"degree": self.degree, "dim": self.dim, "weights": list(self.weights),
                "min_weight": self.min_weight, "max_weight": self.max_weight, "pure_weight": self.pure}


@dataclass(frozen=True)
class CohomologySummary:
    degrees: Tuple[DegreeSummary, ...]

    def __getitem__(self, k: int) -> DegreeSummary:
        return self.degrees[k]

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** d.degree * d.dim for d in self.degrees)

    def dims(self) -> List[int]:
        return [d.dim for d in self.degrees]

    def to_json(self) -> dict:
        return {"degrees": [d.to_json() for d in self.degrees], "euler_characteristic": self.euler_characteristic}


def degree_summary(alg: GradedLieAlgebra, k: int) -> DegreeSummary:
    b = e0_basis(alg, k)
    return DegreeSummary(k, len(b), tuple(b.weights))


def cohomology_summary(alg: GradedLieAlgebra, degrees: Optional[Sequence[int]] = None) -> CohomologySummary:
    ks = range(alg.dim + 1) if degrees is None else degrees
    return CohomologySummary(tuple(degree_summary(alg, k) for k in ks))


def h2_weights(alg: GradedLieAlgebra) -> List[int]:
    return sorted(e0_basis(alg, 2).weights)


# ---------------------------------------------------------------------------
# pinching


@dataclass(frozen=True)
class PinchingEntry:
    degree: int
    dim: int
    weights: Tuple[int, ...]
    applicable: bool
    reason: str = ""
    beta: Optional[Tuple[Fraction, Fraction]] = None
    alpha: Optional[Tuple[Fraction, Fraction]] = None
    beta_algebraic: Optional[Tuple[Fraction, Fraction]] = None
    audible_lower_bound: Optional[int] = None

    def to_json(self) -> dict:
        pair = (lambda p: [fmt_frac(p[0]), fmt_frac(p[1])] if p else None)
        return {"degree": self.degree, "dim": self.dim, "weights": sorted(self.weights),
                "applicable": self.applicable, "reason": self.reason,
                "beta": pair(self.beta), "alpha": pair(self.alpha),
                "beta_algebraic": pair(self.beta_algebraic),
                "audible_lower_bound": self.audible_lower_bound}


@dataclass(frozen=True)
class PinchingReport:
    algebra: str
    homogeneous_dim: int
    entries: Tuple[PinchingEntry, ...]

    def degree(self, k: int) -> PinchingEntry:
        for e in self.entries:
            if e.degree == k:
                return e
        raise KeyError(k)

    def to_json(self) -> dict:
        return {"algebra": self.algebra, "homogeneous_dim": self.homogeneous_dim,
                "degrees": [e.to_json() for e in self.entries]}


def pinching_entry(alg: GradedLieAlgebra, k: int, audible: bool = True) -> PinchingEntry:
    """Interval for beta_k (and alpha_k = N / beta_k) at one degree 1 <= k <= n-1."""
    n_g = layer_profile(alg).homogeneous_dim
    src = degree_summary(alg, k)
    if not src.pure:
        return PinchingEntry(k, src.dim, src.weights, False, "mixed weight")
    nxt = degree_summary(alg, k + 1)
    nk = src.weights[0]
    lo = max(nxt.min_weight - nk, 1)
    hi = nxt.max_weight - nk
    if hi < lo:
        return PinchingEntry(k, src.dim, src.weights, False, "no weight gap")
    algebraic = (Fraction(lo), Fraction(hi))
    bound = None
    if audible:
        from .dc import audible_lower_bound
        bound = audible_lower_bound(alg, k)
        if bound is not None:
            lo = max(lo, bound + 1)
    beta = (Fraction(lo), Fraction(hi))
    alpha = (Fraction(n_g, hi), Fraction(n_g, lo))
    return PinchingEntry(k, src.dim, src.weights, True, "", beta, alpha, algebraic, bound)


def pinching_report(alg: GradedLieAlgebra, audible: bool = True, degrees: Optional[Sequence[int]] = None) -> PinchingReport:
    """Pinching intervals for degrees 1..n-1; degrees 0 and n are not reported."""
    ks = range(1, alg.dim) if degrees is None else [k for k in degrees if 1 <= k < alg.dim]
    return PinchingReport(alg.name, layer_profile(alg).homogeneous_dim,
                          tuple(pinching_entry(alg, k, audible) for k in ks))


# ---------------------------------------------------------------------------
# presentation predicates


def is_quadratically_presented(alg: GradedLieAlgebra) -> bool:
    """True iff every harmonic 2-form has weight 2."""
    if not is_filtered(alg):
        raise AlgebraError(f"{alg.name} is not generated by its weight-one layer")
    return all(w == 2 for w in e0_basis(alg, 2).weights)


@dataclass(frozen=True)
class WeightThreeMap:
    """d0 from D* ^ g2* to Lambda^3 D*, the weight-three part of Lambda^2 -> Lambda^3."""
    source_dim: int
    target_dim: int
    rank: int

    @property
    def injective(self) -> bool:
        return self.rank == self.source_dim

    @property
    def bijective(self) -> bool:
        return self.injective and self.rank == self.target_dim


def weight_three_map(alg: GradedLieAlgebra) -> WeightThreeMap:
    if alg.rank != 2:
        raise AlgebraError("the weight-three map is defined for two-step algebras")
    rows, cols, block = d0_block(alg, 2, 3)
    return WeightThreeMap(len(cols), len(rows), linalg.rank(block))


def _two_step_check(alg: GradedLieAlgebra):
    if alg.rank != 2 or set(alg.weights) != {1, 2}:
        raise AlgebraError(f"{alg.name} is not a two-step algebra with weights 1 and 2")


def _vec(alg: GradedLieAlgebra, v) -> Dict[int, Fraction]:
    if isinstance(v, Mapping):
        return {(alg.index(k) if isinstance(k, str) else int(k)): frac(c) for k, c in v.items() if frac(c)}
    if isinstance(v, str):
        return {alg.index(v): Fraction(1)}
    vals = list(v)
    d = alg.layer(1)
    if len(vals) == len(d) and len(vals) != alg.dim:
        return {d[i]: frac(c) for i, c in enumerate(vals) if frac(c)}
    return {i: frac(c) for i, c in enumerate(vals) if frac(c)}


def omega_regular_verify(alg: GradedLieAlgebra, x1, x2) -> bool:
    """[X1, X2] = 0, X1 ^ X2 != 0 and X -> ([X, X1], [X, X2]) onto g2 + g2."""
    _two_step_check(alg)
    a, b = _vec(alg, x1), _vec(alg, x2)
    horizontal = set(alg.layer(1))
    if not set(a) <= horizontal or not set(b) <= horizontal:
        raise AlgebraError("X1 and X2 must be horizontal")
    if alg.bracket_vectors(a, b):
        return False
    d = alg.layer(1)
    pair = linalg.dense([[a.get(i, 0) for i in d], [b.get(i, 0) for i in d]])
    if linalg.rank(pair) < 2:
        return False
    g2 = alg.layer(2)
    rows = []
    for x in d:
        ba = alg.bracket_vectors({x: Fraction(1)}, a)
        bb = alg.bracket_vectors({x: Fraction(1)}, b)
        rows.append([ba.get(t, 0) for t in g2] + [bb.get(t, 0) for t in g2])
    return linalg.rank(linalg.dense(rows)) == 2 * len(g2)


@dataclass(frozen=True)
class OmegaSearch:
    status: str  # "found" | "inconclusive"
    pair: Optional[Tuple[Dict[int, Fraction], Dict[int, Fraction]]]
    seed: int
    trials: int

    def to_json(self, alg: GradedLieAlgebra) -> dict:
        pair = None
        if self.pair:
            pair = [{alg.labels[i]: fmt_frac(c) for i, c in sorted(v.items())} for v in self.pair]
        return {"status": self.status, "pair": pair, "seed": self.seed, "trials": self.trials}


def omega_regular_search(alg: GradedLieAlgebra, seed: int = 0, trials: int = 100) -> OmegaSearch:
    """Sample X1, solve [X1, X2] = 0 for X2, verify.  Failure is inconclusive, never a proof."""
    _two_step_check(alg)
    rng = random.Random(seed)
    d = alg.layer(1)
    g2 = alg.layer(2)
    for _ in range(trials):
        x1 = {i: Fraction(rng.randint(-3, 3)) for i in d}
        x1 = {i: c for i, c in x1.items() if c}
        if not x1:
            continue
        # kernel of X -> [X1, X] on D
        rows = []
        for x in d:
            br = alg.bracket_vectors(x1, {x: Fraction(1)})
            rows.append([br.get(t, 0) for t in g2])
        ad = linalg.dense([[rows[j][i] for j in range(len(d))] for i in range(len(g2))]) if g2 else flint.fmpq_mat(0, len(d))
        kernel = linalg.nullspace(ad)
        if len(kernel) < 2:
            continue
        coeffs = [rng.randint(-3, 3) for _ in kernel]
        x2 = {}
        for c, v in zip(coeffs, kernel):
            for i, x in enumerate(v):
                if x and c:
                    x2[d[i]] = x2.get(d[i], 0) + c * x
        x2 = {i: c for i, c in x2.items() if c}
        if x2 and omega_regular_verify(alg, x1, x2):
            return OmegaSearch("found", (x1, x2), seed, trials)
    return OmegaSearch("inconclusive", None, seed, trials)


# -- rank-two forms in a span ------------------------------------------------


@dataclass(frozen=True)
class Rank2Verdict:
    status: str  # "found" | "none_certified" | "inconclusive"
    form: Optional[InvariantForm] = None
    note: str = ""

    def to_json(self) -> dict:
        return {"status": self.status, "form": self.form.to_json() if self.form else None, "note": self.note}


def _square_forms(basis: Sequence[InvariantForm]):
    """Quadratic forms Q_m(c) = coefficient of theta^m in (sum c_i w_i)^2, as symmetric matrices."""
    p = len(basis)
    table: Dict[Tuple[int, ...], List[List[Fraction]]] = {}
    for i in range(p):
        for j in range(i, p):
            prod = basis[i] ^ basis[j]
            for m, c in prod.terms.items():
                q = table.setdefault(m, [[Fraction(0)] * p for _ in range(p)])
                if i == j:
                    q[i][i] += c
                else:
                    q[i][j] += c
                    q[j][i] += c
    return [table[m] for m in sorted(table)]


def _combine(basis: Sequence[InvariantForm], coeffs: Sequence[Fraction]) -> InvariantForm:
    out = InvariantForm(2)
    for c, w in zip(coeffs, basis):
        if c:
            out = out + w.scale(c)
    return out


def _definite(q: List[List[Fraction]]) -> bool:
    n = len(q)
    minors = [linalg.dense([row[:k] for row in q[:k]]).det() for k in range(1, n + 1)]
    if all(m > 0 for m in minors):
        return True
    return all((m < 0) if k % 2 == 0 else (m > 0) for k, m in enumerate(minors))


def _binary_roots(forms: Sequence[Tuple[Fraction, Fraction, Fraction]]):
    """Common projective roots of binary quadratics A a^2 + B ab + C b^2.

    Returns ("all", None), ("rational", [points]), ("irrational", None)
    or ("none", None).
    """
    nonzero = [f for f in forms if any(f)]
    if not nonzero:
        return "all", None
    a0, b0, c0 = nonzero[0]
    if a0 == 0:
        cands = [(Fraction(1), Fraction(0))]
        if b0 != 0:
            cands.append((c0, -b0))
    else:
        disc = b0 * b0 - 4 * a0 * c0
        if disc < 0:
            return "none", None
        num, den = disc.numerator, disc.denominator
        rn, rd = flint.fmpz(num).isqrt(), flint.fmpz(den).isqrt()
        if int(rn) ** 2 == num and int(rd) ** 2 == den:
            s = Fraction(int(rn), int(rd))
            cands = [((-b0 + s) / (2 * a0), Fraction(1)), ((-b0 - s) / (2 * a0), Fraction(1))]
        else:
            proportional = all(a0 * f[1] == b0 * f[0] and a0 * f[2] == c0 * f[0] for f in nonzero)
            return ("irrational", None) if proportional else ("none", None)
    good = []
    for a, b in cands:
        if all(f[0] * a * a + f[1] * a * b + f[2] * b * b == 0 for f in nonzero) and (a, b) not in good:
            good.append((a, b))
    return ("rational", good) if good else ("none", None)


def _reduce(forms: Sequence[InvariantForm]) -> List[InvariantForm]:
    monos = sorted({m for f in forms for m in f.terms})
    if not monos:
        return []
    rows = linalg.row_space(linalg.dense([[f.terms.get(m, 0) for m in monos] for f in forms]))
    return [InvariantForm(2, {m: c for m, c in zip(monos, row) if c}) for row in rows]


def _numeric_search(quads, p: int, seed: int, restarts: int, fixed_last: bool = False):
    """Seeded minimisation of sum Q_m(c)^2 on the unit sphere; yields float candidates."""
    import numpy as np
    from scipy.optimize import minimize

    qs = [np.array([[float(x) for x in row] for row in q]) for q in quads]
    rng = np.random.default_rng(seed)

    def objective(c):
        if fixed_last:
            c = np.append(c, 1.0)
        nrm = float(c @ c)
        return sum(float(c @ q @ c) ** 2 for q in qs) / (nrm * nrm if not fixed_last else 1.0)

    dim = p - 1 if fixed_last else p
    for _ in range(restarts):
        x0 = rng.normal(size=dim)
        res = minimize(objective, x0, method="BFGS", options={"gtol": 1e-14, "maxiter": 2000})
        if res.fun < 1e-16:
            c = np.append(res.x, 1.0) if fixed_last else res.x
            yield c


def _rationalize(c, max_den: int = 64) -> List[Fraction]:
    import numpy as np
    big = float(np.max(np.abs(c)))
    return [Fraction(float(x) / big).limit_denominator(max_den) for x in c]


def rank2_in_span(alg: GradedLieAlgebra, forms: Sequence[InvariantForm], seed: int = 0, restarts: int = 20) -> Rank2Verdict:
    """Look for a nonzero w in span(forms) with w ^ w = 0, i.e. w = a ^ b.

    Spans of dimension <= 2 are decided exactly.  Larger spans are certified
    empty when one coordinate of w ^ w is a definite quadratic form;
    otherwise a seeded numerical search proposes candidates that are
    verified exactly, and failure is reported as inconclusive.
    """
    horizontal = set(alg.layer(1))
    for f in forms:
        if f.degree != 2 or any(not set(m) <= horizontal for m in f.terms):
            raise AlgebraError("rank2_in_span expects 2-forms on the weight-one layer")
    basis = _reduce(forms)
    p = len(basis)
    if p == 0:
        return Rank2Verdict("none_certified", note="zero span")
    quads = _square_forms(basis)
    if p == 1:
        if not quads:
            return Rank2Verdict("found", basis[0])
        return Rank2Verdict("none_certified", note="single form of rank > 2")
    if p == 2:
        kind, pts = _binary_roots([(q[0][0], 2 * q[0][1], q[1][1]) for q in quads])
        if kind == "all":
            return Rank2Verdict("found", basis[0])
        if kind == "rational":
            return Rank2Verdict("found", _combine(basis, pts[0]))
        if kind == "irrational":
            return Rank2Verdict("found", None, note="decomposable form with irrational coefficients")
        return Rank2Verdict("none_certified", note="exact binary quadratic solve")
    for q in quads:
        if _definite(q):
            return Rank2Verdict("none_certified", note="a coordinate of w^w is a definite quadratic form")
    for c in _numeric_search(quads, p, seed, restarts):
        cand = _combine(basis, _rationalize(c))
        if cand.terms and (cand ^ cand).is_zero():
            return Rank2Verdict("found", cand)
    return Rank2Verdict("inconclusive", note=f"seed={seed} restarts={restarts}")


@dataclass(frozen=True)
class ExtensionStep:
    index: int
    rank: int
    condition1: bool
    condition2: Optional[bool]  # None = inconclusive
    witness: Optional[InvariantForm] = None
    note: str = ""

    def to_json(self) -> dict:
        return {"p": self.index, "rank": self.rank, "condition1": self.condition1,
                "condition2": "inconclusive" if self.condition2 is None else self.condition2,
                "witness": self.witness.to_json() if self.witness else None, "note": self.note}


def form_rank(form: InvariantForm, dim: int) -> int:
    m = [[Fraction(0)] * dim for _ in range(dim)]
    for (i, j), c in form.terms.items():
        m[i][j] += c
        m[j][i] -= c
    return linalg.rank(linalg.dense(m))


def extension_family_check(dim: int, omegas: Sequence[InvariantForm], seed: int = 0, restarts: int = 20) -> List[ExtensionStep]:
    """Check, for each p, rank(w_p) >= 2(p+1) and w_p not in L_(p-1) + decomposables.

    Condition 2 asks for t != 0 with t w_p - sum c_i w_i decomposable
    (zero included).  Two unknowns are solved exactly; more use a
    definiteness certificate, then a verified numerical search.
    """
    out = []
    for p in range(1, len(omegas) + 1):
        w = omegas[p - 1]
        rk = form_rank(w, dim)
        cond1 = rk >= 2 * (p + 1)
        prev = list(omegas[:p - 1])
        basis_prev = _reduce(prev) if prev else []
        # membership in L_(p-1)
        monos = sorted({m for f in basis_prev + [w] for m in f.terms})
        if not w.terms:
            out.append(ExtensionStep(p, rk, cond1, False, InvariantForm(2), "w_p = 0"))
            continue
        if basis_prev:
            target = [w.terms.get(m, Fraction(0)) for m in monos]
            if linalg.solve_in_span([[f.terms.get(m, Fraction(0)) for m in monos] for f in basis_prev], target) is not None:
                out.append(ExtensionStep(p, rk, cond1, False, InvariantForm(2), "w_p lies in L_(p-1)"))
                continue
        family = basis_prev + [w]  # the last coordinate is t
        quads = _square_forms(family)
        q = len(family)
        if q == 1:
            ok = bool(quads)
            out.append(ExtensionStep(p, rk, cond1, ok, None if ok else w, "" if ok else "w_1 is decomposable"))
            continue
        if q == 2:
            kind, pts = _binary_roots([(m[0][0], 2 * m[0][1], m[1][1]) for m in quads])
            if kind == "all":
                out.append(ExtensionStep(p, rk, cond1, False, w, "every combination is decomposable"))
            elif kind == "rational":
                hits = [pt for pt in pts if pt[1] != 0]
                if hits:
                    out.append(ExtensionStep(p, rk, cond1, False, _combine(family, hits[0])))
                else:
                    out.append(ExtensionStep(p, rk, cond1, True, note="exact binary quadratic solve"))
            elif kind == "irrational":
                out.append(ExtensionStep(p, rk, cond1, False, None, "irrational decomposable combination"))
            else:
                out.append(ExtensionStep(p, rk, cond1, True, note="exact binary quadratic solve"))
            continue
        if any(_definite(m) for m in quads):
            out.append(ExtensionStep(p, rk, cond1, True, note="definite coordinate of w^w"))
            continue
        found = None
        for c in _numeric_search(quads, q, seed, restarts, fixed_last=True):
            coeffs = _rationalize(c)
            if coeffs[-1] == 0:
                continue
            cand = _combine(family, coeffs)
            if (cand ^ cand).is_zero():
                found = cand
                break
        if found is not None:
            out.append(ExtensionStep(p, rk, cond1, False, found))
        else:
            out.append(ExtensionStep(p, rk, cond1, None, note=f"seed={seed} restarts={restarts}"))
    return out


def generic_weight_profile(k: int, n: int) -> Tuple[int, Tuple[int, int]]:
    """r with n(k, r-1) <= n < n(k, r) and the interval [r-1, r] for beta_1."""
    from .freelie import witt_dimension
    if k < 2 or n < k:
        raise ValueError("need k >= 2 and n >= k")
    if n == k:
        return 1, (1, 1)
    total = 0
    r = 0
    while True:
        r += 1
        prev = total
        total += witt_dimension(k, r)
        if prev <= n < total:
            return r, (r - 1, r)
