"""Graded nilpotent Lie algebras given by rational structure constants."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from . import linalg
from .linalg import fmt_frac, frac

Bracket = Dict[int, Fraction]


class AlgebraError(ValueError):
    """Raised when an algebra cannot be built or transformed."""


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # "antisymmetry" | "jacobi" | "grading" | "order" | "shape"
    indices: Tuple[int, ...]
    message: str


class GradedLieAlgebra:
    """Finite-dimensional graded nilpotent Lie algebra.

    Brackets are stored for ``i < j`` only; ``bracket(j, i)`` is derived, so
    antisymmetry holds by construction.  Basis order doubles as the PBW normal
    order, so weights must be nondecreasing along the basis.

    Instances are immutable by convention.  Two algebras with the same
    brackets but different weights compare unequal.
    """

    def __init__(self, name: str, labels: Sequence[str], weights: Sequence[int],
                 brackets: Mapping[Tuple[int, int], Mapping[int, object]]):
        self.name = str(name)
        self.labels = tuple(str(x) for x in labels)
        self.weights = tuple(int(w) for w in weights)
        if len(self.labels) != len(self.weights):
            raise AlgebraError("labels and weights differ in length")
        table: Dict[Tuple[int, int], Bracket] = {}
        for (i, j), terms in brackets.items():
            if i == j:
                if any(frac(c) for c in terms.values()):
                    raise AlgebraError(f"[{self.labels[i]},{self.labels[i]}] must vanish")
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            row = table.setdefault((i, j), {})
            for k, c in terms.items():
                c = sign * frac(c)
                row[int(k)] = row.get(int(k), 0) + c
        self._brackets = {key: {k: c for k, c in sorted(row.items()) if c}
                          for key, row in sorted(table.items())}
        self._brackets = {key: row for key, row in self._brackets.items() if row}
        self._key = (self.labels, self.weights,
                     tuple((key, tuple(row.items())) for key, row in self._brackets.items()))
        self._memo: Dict[object, object] = {}

    # -- basic accessors -------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def rank(self) -> int:
        return max(self.weights)

    @property
    def brackets(self) -> Dict[Tuple[int, int], Bracket]:
        return {key: dict(row) for key, row in self._brackets.items()}

    def bracket(self, i: int, j: int) -> Bracket:
        if i == j:
            return {}
        if i < j:
            return dict(self._brackets.get((i, j), {}))
        return {k: -c for k, c in self._brackets.get((j, i), {}).items()}

    def bracket_vectors(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> Bracket:
        out: Bracket = {}
        for i, a in u.items():
            if not a:
                continue
            for j, b in v.items():
                if not b or i == j:
                    continue
                for k, c in self.bracket(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: c for k, c in out.items() if c}

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def layer(self, w: int) -> List[int]:
        return [i for i, wi in enumerate(self.weights) if wi == w]

    def memo(self, key, build):
        """Idempotent per-instance cache; concurrent builders produce equal values."""
        try:
            return self._memo[key]
        except KeyError:
            return self._memo.setdefault(key, build())

    def __eq__(self, other):
        if not isinstance(other, GradedLieAlgebra):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"GradedLieAlgebra({self.name!r}, dim={self.dim}, weights={self.weights})"

    # -- serialisation ---------------------------------------------------
    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "labels": list(self.labels),
            "weights": list(self.weights),
            "brackets": [
                {"i": i, "j": j, "terms": [{"k": k, "c": fmt_frac(c)} for k, c in row.items()]}
                for (i, j), row in self._brackets.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "GradedLieAlgebra":
        return algebra_from_json(data)


def algebra_from_json(data) -> GradedLieAlgebra:
    """Parse the JSON algebra schema; raises AlgebraError naming the bad field."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise AlgebraError("top level must be an object")
    for key in ("name", "dim", "labels", "weights", "brackets"):
        if key not in data:
            raise AlgebraError(f"missing field '{key}'")
    dim = data["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise AlgebraError("field 'dim' must be a positive integer")
    labels, weights = data["labels"], data["weights"]
    if not isinstance(labels, list) or len(labels) != dim:
        raise AlgebraError("field 'labels' must list dim strings")
    if not isinstance(weights, list) or len(weights) != dim or not all(isinstance(w, int) and w >= 1 for w in weights):
        raise AlgebraError("field 'weights' must list dim positive integers")
    table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    if not isinstance(data["brackets"], list):
        raise AlgebraError("field 'brackets' must be a list")
    for n, entry in enumerate(data["brackets"]):
        where = f"brackets[{n}]"
        try:
            i, j, terms = entry["i"], entry["j"], entry["terms"]
        except (KeyError, TypeError) as exc:
            raise AlgebraError(f"field '{where}' needs i, j, terms") from exc
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < j < dim):
            raise AlgebraError(f"field '{where}': need 0 <= i < j < dim")
        row = table.setdefault((i, j), {})
        for t in terms:
            try:
                k, c = t["k"], t["c"]
                if not (isinstance(k, int) and 0 <= k < dim):
                    raise ValueError("k out of range")
                if not isinstance(c, (str, int)) or (isinstance(c, str) and "." in c):
                    raise ValueError("c must be an integer or 'p/q' string")
                row[k] = row.get(k, 0) + Fraction(c)
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                raise AlgebraError(f"field '{where}.terms': {exc}") from exc
    return GradedLieAlgebra(data["name"], labels, weights, table)


# ---------------------------------------------------------------------------
# validation


def _full_table(alg: GradedLieAlgebra):
    n = alg.dim
    return {(i, j): alg.bracket(i, j) for i in range(n) for j in range(n) if i != j}


def validate_structure(alg: GradedLieAlgebra, full_table: Mapping[Tuple[int, int], Mapping[int, object]] | None = None) -> List[Diagnostic]:
    """Return every violated axiom with a witness; an empty list means valid.

    ``full_table`` lets callers check a user-supplied table containing both
    ``(i, j)`` and ``(j, i)`` entries for antisymmetry before it is folded
    into an algebra.
    """
    diags: List[Diagnostic] = []
    n = alg.dim
    if n < 1:
        return [Diagnostic("shape", (), "dimension must be at least 1")]
    for i, w in enumerate(alg.weights):
        if w < 1:
            diags.append(Diagnostic("shape", (i,), f"weight of {alg.labels[i]} must be positive"))
    for i in range(n - 1):
        if alg.weights[i] > alg.weights[i + 1]:
            diags.append(Diagnostic("order", (i, i + 1),
                                    f"weights must be nondecreasing along the basis ({alg.labels[i]}, {alg.labels[i + 1]})"))
    if full_table is not None:
        table = {(i, j): {k: frac(c) for k, c in row.items() if frac(c)} for (i, j), row in full_table.items()}
        for i in range(n):
            for j in range(i, n):
                a = table.get((i, j), {})
                b = table.get((j, i), {})
                for k in sorted(set(a) | set(b)):
                    if a.get(k, 0) != -b.get(k, 0):
                        diags.append(Diagnostic("antisymmetry", (i, j, k),
                                                f"c[{i},{j}]^{k} != -c[{j},{i}]^{k}"))
    else:
        table = _full_table(alg)
    for (i, j), row in sorted(table.items()):
        if i >= j and full_table is None:
            continue
        for k, c in row.items():
            if alg.weights[k] != alg.weights[i] + alg.weights[j]:
                diags.append(Diagnostic("grading", (i, j, k),
                                        f"[{alg.labels[i]},{alg.labels[j]}] has a {alg.labels[k]} component but "
                                        f"{alg.weights[i]}+{alg.weights[j]} != {alg.weights[k]}"))

    def br(a, b):
        return table.get((a, b), {})

    for i, j, k in itertools.combinations(range(n), 3):
        total: Dict[int, Fraction] = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, x in br(a, b).items():
                for l, y in br(m, c).items():
                    total[l] = total.get(l, 0) + x * y
        bad = {l: v for l, v in total.items() if v}
        if bad:
            comps = " + ".join(f"{fmt_frac(v)}*{alg.labels[l]}" for l, v in sorted(bad.items()))
            diags.append(Diagnostic("jacobi", (i, j, k),
                                    f"Jacobi sum for ({alg.labels[i]},{alg.labels[j]},{alg.labels[k]}) = {comps}"))
    return diags


def ensure_valid(alg: GradedLieAlgebra) -> GradedLieAlgebra:
    diags = validate_structure(alg)
    if diags:
        raise AlgebraError(f"{alg.name}: " + "; ".join(d.message for d in diags[:5]))
    return alg


# ---------------------------------------------------------------------------
# derived invariants


@dataclass(frozen=True)
class LayerProfile:
    rank: int
    layer_dims: Dict[int, int]
    homogeneous_dim: int
    filtered: bool

    def to_json(self) -> dict:
        return {"rank": self.rank, "layer_dims": {str(w): d for w, d in sorted(self.layer_dims.items())},
                "homogeneous_dim": self.homogeneous_dim, "filtered": self.filtered}


def generated_layers(alg: GradedLieAlgebra) -> Dict[int, int]:
    """Dimension of the span of iterated brackets of the weight-one layer, per weight."""
    n = alg.dim
    current = [{i: Fraction(1)} for i in alg.layer(1)]
    dims = {1: len(current)} if current else {}
    gens = [{i: Fraction(1)} for i in alg.layer(1)]
    w = 1
    while current:
        w += 1
        vecs = []
        for g in gens:
            for v in current:
                b = alg.bracket_vectors(g, v)
                if b:
                    vecs.append([b.get(i, Fraction(0)) for i in range(n)])
        if not vecs:
            break
        basis = linalg.row_space(linalg.dense(vecs))
        current = [{i: c for i, c in enumerate(row) if c} for row in basis]
        if current:
            dims[w] = len(current)
    return dims


def is_filtered(alg: GradedLieAlgebra) -> bool:
    def build():
        gen = generated_layers(alg)
        return all(gen.get(w, 0) == len(alg.layer(w)) for w in set(alg.weights))
    return alg.memo("filtered", build)


def layer_profile(alg: GradedLieAlgebra) -> LayerProfile:
    dims: Dict[int, int] = {}
    for w in alg.weights:
        dims[w] = dims.get(w, 0) + 1
    return LayerProfile(rank=alg.rank, layer_dims=dict(sorted(dims.items())),
                        homogeneous_dim=sum(alg.weights), filtered=is_filtered(alg))


def regrade(alg: GradedLieAlgebra, new_weights: Sequence[int], name: str | None = None) -> GradedLieAlgebra:
    """Same brackets, new weights.  Raises AlgebraError naming a violating bracket."""
    new_weights = [int(w) for w in new_weights]
    if len(new_weights) != alg.dim:
        raise AlgebraError("need one weight per basis vector")
    for (i, j), row in alg.brackets.items():
        for k in row:
            if new_weights[k] != new_weights[i] + new_weights[j]:
                raise AlgebraError(f"grading violated by [{alg.labels[i]},{alg.labels[j]}] -> {alg.labels[k]}: "
                                   f"{new_weights[i]}+{new_weights[j]} != {new_weights[k]}")
    if list(alg.weights) == new_weights and name is None:
        return alg
    out = GradedLieAlgebra(name or f"{alg.name}'", alg.labels, new_weights, alg.brackets)
    return ensure_valid(out)


@dataclass(frozen=True)
class Quotient:
    algebra: GradedLieAlgebra
    projection: linalg.QMatrix  # dim(quotient) x dim(alg)
    kept: Tuple[int, ...]
    ideal_dims: Dict[int, int] = field(default_factory=dict)


def _as_vector(alg: GradedLieAlgebra, v) -> Dict[int, Fraction]:
    if isinstance(v, Mapping):
        return {int(k): frac(c) for k, c in v.items() if frac(c)}
    if isinstance(v, str):
        return {alg.index(v): Fraction(1)}
    vals = list(v)
    if len(vals) != alg.dim:
        raise AlgebraError("generator vector has the wrong length")
    return {i: frac(c) for i, c in enumerate(vals) if frac(c)}


def quotient_by_ideal(alg: GradedLieAlgebra, generators: Iterable, name: str | None = None) -> Quotient:
    """Quotient by the ideal generated by weight-homogeneous vectors.

    Per weight, the quotient keeps the lexicographically first basis vectors
    that complement the ideal.
    """
    n = alg.dim
    by_weight: Dict[int, List[List[Fraction]]] = {}
    for g in generators:
        vec = _as_vector(alg, g)
        if not vec:
            continue
        ws = {alg.weights[i] for i in vec}
        if len(ws) != 1:
            raise AlgebraError("ideal generators must be weight-homogeneous")
        by_weight.setdefault(ws.pop(), []).append([vec.get(i, Fraction(0)) for i in range(n)])

    ideal: Dict[int, List[List[Fraction]]] = {}
    for w in sorted(set(alg.weights)):
        vecs = list(by_weight.get(w, []))
        for u, basis in ideal.items():
            for b in basis:
                bv = {i: c for i, c in enumerate(b) if c}
                for x in alg.layer(w - u):
                    br = alg.bracket_vectors({x: Fraction(1)}, bv)
                    if br:
                        vecs.append([br.get(i, Fraction(0)) for i in range(n)])
        if vecs:
            ideal[w] = linalg.row_space(linalg.dense(vecs))

    kept: List[int] = []
    for w in sorted(set(alg.weights)):
        span = list(ideal.get(w, []))
        r = linalg.rank(linalg.dense(span)) if span else 0
        for i in alg.layer(w):
            e = [Fraction(int(j == i)) for j in range(n)]
            r2 = linalg.rank(linalg.dense(span + [e]))
            if r2 > r:
                span.append(e)
                r = r2
                kept.append(i)

    pos = {i: p for p, i in enumerate(kept)}
    proj_cols: Dict[int, Dict[int, Fraction]] = {}
    for w in sorted(set(alg.weights)):
        ib = ideal.get(w, [])
        kb = [[Fraction(int(j == i)) for j in range(n)] for i in alg.layer(w) if i in pos]
        kidx = [i for i in alg.layer(w) if i in pos]
        for i in alg.layer(w):
            e = [Fraction(int(j == i)) for j in range(n)]
            x = linalg.solve_in_span(kb + ib, e)
            proj_cols[i] = {pos[kidx[a]]: x[a] for a in range(len(kb)) if x[a]}
    projection = linalg.QMatrix(len(kept), n, proj_cols)

    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for a, b in itertools.combinations(range(len(kept)), 2):
        br = alg.bracket(kept[a], kept[b])
        img = projection.apply(br)
        if img:
            brackets[(a, b)] = img
    q = GradedLieAlgebra(name or f"{alg.name}/I", [alg.labels[i] for i in kept],
                         [alg.weights[i] for i in kept], brackets)
    ensure_valid(q)
    return Quotient(q, projection, tuple(kept), {w: len(b) for w, b in ideal.items()})


def from_differentials(name: str, labels: Sequence[str], weights: Sequence[int],
                       dtheta: Mapping[str, Mapping[Tuple[str, str], object]]) -> GradedLieAlgebra:
    """Build an algebra from the differentials of its dual coframe.

    ``dtheta[k][(i, j)] = c`` means the coefficient of theta_i ^ theta_j in
    d theta_k.  Uses d theta(X, Y) = -theta([X, Y]).
    """
    idx = {l: n for n, l in enumerate(labels)}
    table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for k, terms in dtheta.items():
        for (a, b), c in terms.items():
            i, j = idx[a], idx[b]
            row = table.setdefault((i, j), {})
            row[idx[k]] = row.get(idx[k], 0) - frac(c)
    return ensure_valid(GradedLieAlgebra(name, labels, weights, table))
