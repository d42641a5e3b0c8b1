"""Named graded nilpotent Lie algebras.

Conventions: d theta(X, Y) = -theta([X, Y]).  For H-type algebras
theta_l([X, Y]) = -<J_l X, Y>, so d0 theta_l = g(J_l ., .).

The octonion table is the Cayley-Dickson double of the quaternions with
(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)); basis e0 = 1, e1..e3 the
quaternion units i, j, k, e4 = (0, 1), e5..e7 = e1 e4, e2 e4, e3 e4.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Dict, List, Sequence, Tuple

from .algebra import (AlgebraError, GradedLieAlgebra, ensure_valid, from_differentials,
                      quotient_by_ideal, regrade)

Matrix = Tuple[Tuple[Fraction, ...], ...]


class CatalogError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Clifford data


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class CliffordData:
    """Matrices J_1..J_k on R^n with J_i J_j + J_j J_i = -2 delta_ij and J_i^T = -J_i."""

    n: int
    k: int
    matrices: Tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.matrices) != self.k:
            raise CatalogError("need k matrices")
        for a, m in enumerate(self.matrices):
            if len(m) != self.n or any(len(r) != self.n for r in m):
                raise CatalogError(f"J_{a + 1} is not {self.n}x{self.n}")
            if any(m[i][j] != -m[j][i] for i in range(self.n) for j in range(self.n)):
                raise CatalogError(f"J_{a + 1} is not antisymmetric")
        for a in range(self.k):
            for b in range(a, self.k):
                ab = _matmul(self.matrices[a], self.matrices[b])
                ba = _matmul(self.matrices[b], self.matrices[a])
                target = -2 if a == b else 0
                for i in range(self.n):
                    for j in range(self.n):
                        if ab[i][j] + ba[i][j] != (target if i == j else 0):
                            raise CatalogError(f"anticommutation fails for (J_{a + 1}, J_{b + 1})")


def _left_mult_matrix(mult: Callable[[int, int], Tuple[int, int]], dim: int, u: int) -> Matrix:
    """Matrix of x -> e_u x; mult(a, b) = (sign, index) for e_a e_b."""
    m = [[Fraction(0)] * dim for _ in range(dim)]
    for b in range(dim):
        s, c = mult(u, b)
        m[c][b] = Fraction(s)
    return tuple(tuple(r) for r in m)


def _quaternion_mult(a: int, b: int) -> Tuple[int, int]:
    table = {
        (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
        (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
        (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2),
    }
    if a == 0:
        return (1, b)
    if b == 0:
        return (1, a)
    return table[(a, b)]


def _octonion_mult(a: int, b: int) -> Tuple[int, int]:
    # e_a = (p, q) with components in H; index = 4*half + quaternion index
    def vec(i):
        v = [0] * 8
        v[i] = 1
        return v

    def qmul(x, y):
        out = [0] * 4
        for i in range(4):
            for j in range(4):
                if x[i] and y[j]:
                    s, k = _quaternion_mult(i, j)
                    out[k] += s * x[i] * y[j]
        return out

    def qconj(x):
        return [x[0], -x[1], -x[2], -x[3]]

    x, y = vec(a), vec(b)
    p, q, r, s = x[:4], x[4:], y[:4], y[4:]
    first = [u - v for u, v in zip(qmul(p, r), qmul(qconj(s), q))]
    second = [u + v for u, v in zip(qmul(s, p), qmul(q, qconj(r)))]
    out = first + second
    nz = [(i, c) for i, c in enumerate(out) if c]
    assert len(nz) == 1 and abs(nz[0][1]) == 1
    return (nz[0][1], nz[0][0])


def quaternion_clifford() -> CliffordData:
    return CliffordData(4, 3, tuple(_left_mult_matrix(_quaternion_mult, 4, u) for u in (1, 2, 3)))


def octonion_clifford() -> CliffordData:
    return CliffordData(8, 7, tuple(_left_mult_matrix(_octonion_mult, 8, u) for u in range(1, 8)))


def curvature_forms(data: CliffordData):
    """The 2-forms g(J_l ., .) on D = R^n as {(a, b): c} with a < b."""
    out = []
    for m in data.matrices:
        # g(J X, Y) on (e_a, e_b) = <J e_a, e_b> = J[b][a]
        out.append({(a, b): m[b][a] for a, b in itertools.combinations(range(data.n), 2) if m[b][a]})
    return out


# ---------------------------------------------------------------------------
# builders


def abelian(n: int) -> GradedLieAlgebra:
    if n < 1:
        raise CatalogError("abelian(n) needs n >= 1")
    return GradedLieAlgebra(f"abelian({n})", [f"X{i + 1}" for i in range(n)], [1] * n, {})


def heisenberg(n: int = 1) -> GradedLieAlgebra:
    """H^(2n+1): [X_i, Y_i] = T.  Basis X1, Y1, ..., Xn, Yn, T."""
    if n < 1:
        raise CatalogError("heisenberg(n) needs n >= 1")
    if n == 1:
        labels = ["X", "Y", "T"]
    else:
        labels = [lab for i in range(1, n + 1) for lab in (f"X{i}", f"Y{i}")] + ["T"]
    t = 2 * n
    brackets = {(2 * i, 2 * i + 1): {t: 1} for i in range(n)}
    return ensure_valid(GradedLieAlgebra(f"heisenberg({n})", labels, [1] * t + [2], brackets))


def engel() -> GradedLieAlgebra:
    """[X, Y] = Z, [X, Z] = T with weights 1, 1, 2, 3."""
    return ensure_valid(GradedLieAlgebra("engel", ["X", "Y", "Z", "T"], [1, 1, 2, 3],
                                         {(0, 1): {2: 1}, (0, 2): {3: 1}}))


def engel_regraded() -> GradedLieAlgebra:
    return regrade(engel(), [1, 2, 3, 4], name="engel_regraded")


def free(k: int, r: int) -> GradedLieAlgebra:
    from .freelie import free_nilpotent
    return free_nilpotent(k, r)


def triangular(n: int) -> GradedLieAlgebra:
    """Strictly upper triangular n x n real matrices, E_ij of weight j - i.

    Weight-one vectors are labelled X_i = E_(i,i+1), weight two Y_i = E_(i,i+2),
    the rest E_ij.
    """
    if n < 2:
        raise CatalogError("triangular(n) needs n >= 2")
    pairs = sorted(((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)), key=lambda p: (p[1] - p[0], p[0]))

    def name(i, j):
        if j - i == 1:
            return f"X{i}"
        if j - i == 2:
            return f"Y{i}"
        return f"E{i}{j}" if n < 10 else f"E{i}_{j}"

    idx = {p: a for a, p in enumerate(pairs)}
    brackets: Dict[Tuple[int, int], Dict[int, int]] = {}
    for (a, (i, j)), (b, (k, l)) in itertools.combinations(enumerate(pairs), 2):
        terms = {}
        if j == k:
            terms[idx[(i, l)]] = 1
        if l == i:
            terms[idx[(k, j)]] = terms.get(idx[(k, j)], 0) - 1
        if terms:
            brackets[(a, b)] = terms
    return ensure_valid(GradedLieAlgebra(f"triangular({n})", [name(*p) for p in pairs],
                                         [j - i for i, j in pairs], brackets))


def htype(data: CliffordData, name: str | None = None) -> GradedLieAlgebra:
    """Two-step algebra D + R^k with theta_l([X, Y]) = -<J_l X, Y>."""
    n, k = data.n, data.k
    labels = [f"X{i + 1}" for i in range(n)] + [f"T{l + 1}" for l in range(k)]
    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for l, m in enumerate(data.matrices):
        for a, b in itertools.combinations(range(n), 2):
            c = -m[b][a]
            if c:
                brackets.setdefault((a, b), {})[n + l] = c
    return ensure_valid(GradedLieAlgebra(name or f"htype({n},{k})", labels, [1] * n + [2] * k, brackets))


def quaternionic_q7() -> GradedLieAlgebra:
    return htype(quaternion_clifford(), name="quaternionic_q7")


def octonionic_15() -> GradedLieAlgebra:
    return htype(octonion_clifford(), name="octonionic_15")


def chen(n: int, k: int) -> GradedLieAlgebra:
    """Rank k+1 algebra with d y_a = sum_i y_(a+e_i) ^ x_i for |a| < k.

    Y_a has weight k - |a| + 1; labels spell the multi-index, e.g. Y20.
    """
    if n < 1 or k < 1:
        raise CatalogError("chen(n, k) needs n >= 1, k >= 1")

    def multi(total):
        out = []
        for combo in itertools.product(range(total + 1), repeat=n):
            if sum(combo) == total:
                out.append(combo)
        return sorted(out, reverse=True)

    def lab(alpha):
        sep = "_" if any(a > 9 for a in alpha) else ""
        return "Y" + sep.join(str(a) for a in alpha)

    labels = [f"X{i + 1}" for i in range(n)]
    weights = [1] * n
    for total in range(k, -1, -1):
        for alpha in multi(total):
            labels.append(lab(alpha))
            weights.append(k - total + 1)
    dtheta = {}
    for total in range(k):
        for alpha in multi(total):
            terms = {}
            for i in range(n):
                beta = tuple(a + (1 if j == i else 0) for j, a in enumerate(alpha))
                terms[(lab(beta), f"X{i + 1}")] = 1
            dtheta[lab(alpha)] = terms
    return from_differentials(f"chen({n},{k})", labels, weights, dtheta)


def carlson_toledo() -> GradedLieAlgebra:
    labels = ["X1", "X2", "X3", "X4", "X5", "Y1", "Y2", "Z"]
    dtheta = {
        "Y1": {("X1", "X3"): 1, ("X2", "X4"): 1},
        "Y2": {("X1", "X4"): 1, ("X2", "X5"): 1},
        "Z": {("X1", "Y1"): 1, ("X2", "Y2"): 1},
    }
    return from_differentials("carlson_toledo", labels, [1, 1, 1, 1, 1, 2, 2, 3], dtheta)


def g6() -> GradedLieAlgebra:
    q = quaternionic_q7()
    return quotient_by_ideal(q, ["T3"], name="g6").algebra


BUILDERS: Dict[str, Callable[..., GradedLieAlgebra]] = {
    "abelian": abelian,
    "heisenberg": heisenberg,
    "engel": engel,
    "engel_regraded": engel_regraded,
    "free": free,
    "triangular": triangular,
    "quaternionic_q7": quaternionic_q7,
    "q7": quaternionic_q7,
    "octonionic_15": octonionic_15,
    "chen": chen,
    "carlson_toledo": carlson_toledo,
    "g6": g6,
}


def build(name: str, *params) -> GradedLieAlgebra:
    """Build a catalog algebra by name, e.g. ``build("heisenberg", 2)``."""
    if name == "htype":
        if len(params) != 1 or not isinstance(params[0], CliffordData):
            raise CatalogError("htype needs a CliffordData argument")
        return htype(params[0])
    try:
        builder = BUILDERS[name]
    except KeyError:
        raise CatalogError(f"unknown catalog name {name!r}; known: {', '.join(sorted(BUILDERS))}") from None
    try:
        return builder(*[int(p) for p in params])
    except TypeError as exc:
        raise CatalogError(f"bad parameters for {name}: {exc}") from exc


def parse_spec(spec: str) -> GradedLieAlgebra:
    """Parse ``name[,p1,p2...]`` (the part after ``catalog:``)."""
    parts = [p.strip() for p in spec.split(",") if p.strip()]
    if not parts:
        raise CatalogError("empty catalog name")
    try:
        params = [int(p) for p in parts[1:]]
    except ValueError:
        raise CatalogError(f"catalog parameters must be integers: {spec!r}") from None
    return build(parts[0], *params)


# ---------------------------------------------------------------------------
# headline numbers


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: Tuple[int, ...]
    expected: Dict[str, object]
    source: str = ""

    @property
    def spec(self) -> str:
        return ",".join([self.name] + [str(p) for p in self.params])

    def build(self) -> GradedLieAlgebra:
        return build(self.name, *self.params)


def catalog_list() -> List[CatalogEntry]:
    """Catalog algebras with the values the regression command checks.

    Keys: ``N`` homogeneous dimension; ``h2_weights`` sorted multiset;
    ``beta:k`` / ``alpha:k`` interval endpoints as "p/q" strings;
    ``quadratic``; ``e0_dims`` dims of E0^k for all k; ``relations``
    relation weights.
    """
    def hz(n):
        dims = [comb(2 * n, k) - (comb(2 * n, k - 2) if k >= 2 else 0) for k in range(n + 1)]
        dims = dims + dims[::-1]
        n_g = 2 * n + 2
        exp = {"N": n_g, "e0_dims": dims, "quadratic": n >= 2}
        for k in range(1, n):
            exp[f"beta:{k}"] = ["1", "1"]
            exp[f"alpha:{k}"] = [str(n_g), str(n_g)]
        exp[f"beta:{n}"] = ["2", "2"]
        exp[f"alpha:{n}"] = [f"{n_g // 2}" if n_g % 2 == 0 else f"{n_g}/2"] * 2
        return exp

    return [
        CatalogEntry("abelian", (3,), {"N": 3, "e0_dims": [1, 3, 3, 1], "beta:1": ["1", "1"]}, "trivial"),
        CatalogEntry("heisenberg", (1,), {**hz(1), "h2_weights": [3, 3], "alpha:1": ["2", "2"],
                                          "relations": [3, 3]}, "alpha_1(H^3) = 2"),
        CatalogEntry("heisenberg", (2,), hz(2), "alpha_k = N except alpha_n = N/2"),
        CatalogEntry("heisenberg", (3,), hz(3), "alpha_k = N except alpha_n = N/2"),
        CatalogEntry("engel", (), {"N": 7, "h2_weights": [3, 4], "beta:1": ["2", "3"],
                                   "alpha:1": ["7/3", "7/2"], "quadratic": False, "relations": [3, 4]},
                     "7/3 <= alpha_1 <= 7/2"),
        CatalogEntry("engel_regraded", (), {"N": 10, "h2_weights": [5, 5], "e0_weights:3": [8, 9],
                                            "beta:2": ["3", "4"], "alpha:2": ["5/2", "10/3"]},
                     "10/4 <= alpha_2 <= 10/3"),
        CatalogEntry("free", (2, 2), {"beta:1": ["2", "2"], "relations": [3, 3]}, "beta_1(G^{k,r}) = r"),
        CatalogEntry("free", (2, 3), {"N": 10, "beta:1": ["3", "3"], "relations": [4, 4, 4]},
                     "beta_1(G^{k,r}) = r"),
        CatalogEntry("free", (3, 2), {"beta:1": ["2", "2"]}, "beta_1(G^{k,r}) = r"),
        CatalogEntry("triangular", (4,), {"N": 10, "h2_weights": [2, 3, 3, 3, 3], "beta:1": ["2", "2"],
                                          "quadratic": False, "relations": [2, 3, 3, 3, 3]},
                     "beta_1(N_4) = 2"),
        CatalogEntry("triangular", (5,), {"quadratic": False}, "quadratic and cubic relations"),
        CatalogEntry("quaternionic_q7", (), {"N": 10, "e0_dims": [1, 4, 11, 14, 14, 11, 4, 1],
                                             "h2_weights": [2] * 3 + [3] * 8, "beta:3": ["2", "2"]},
                     "dim E0^3 = 14, beta_3(Q7) = 2"),
        CatalogEntry("g6", (), {"N": 8}, "quotient of Q7 by a central direction"),
        CatalogEntry("carlson_toledo", (), {"N": 12, "quadratic": True}, "quadratically presented"),
        CatalogEntry("chen", (2, 2), {"quadratic": True, "beta:1": ["1", "1"]}, "Chen examples have beta_1 = 1"),
        CatalogEntry("octonionic_15", (), {"N": 22, "quadratic": True}, "both spaces have dimension 56"),
    ]
