"""Normal-ordered elements of the universal enveloping algebra U(g).

A monomial is an exponent vector ``(a_0, ..., a_{n-1})`` meaning
``X_0^a_0 ... X_{n-1}^a_{n-1}``.  Products are rewritten eagerly with
``X_j X_i -> X_i X_j + [X_j, X_i]`` for ``j > i``, so equality with zero is a
syntactic test.  Operator composition reads left to right: in ``u * v`` the
factor ``v`` acts first.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Mapping, Tuple

from .algebra import GradedLieAlgebra
from .linalg import fmt_frac, frac

Exponent = Tuple[int, ...]
Terms = Dict[Exponent, Fraction]


class PbwRing:
    """Rewriting engine for one algebra; caches monomial products."""

    def __init__(self, alg: GradedLieAlgebra):
        self.alg = alg
        self.n = alg.dim
        self.one: Exponent = (0,) * self.n
        self._gen_cache: Dict[Tuple[Exponent, int], Terms] = {}
        self._mono_cache: Dict[Tuple[Exponent, Exponent], Terms] = {}
        # [X_j, X_i] for j > i as a list of (k, c)
        self._swap = {}
        for (i, j), row in alg.brackets.items():
            self._swap[(j, i)] = [(k, -c) for k, c in row.items()]

    def weight(self, mono: Exponent) -> int:
        w = self.alg.weights
        return sum(a * w[i] for i, a in enumerate(mono) if a)

    def times_gen(self, mono: Exponent, i: int) -> Terms:
        """mono * X_i in normal form."""
        key = (mono, i)
        hit = self._gen_cache.get(key)
        if hit is not None:
            return hit
        j = -1
        for idx in range(self.n - 1, -1, -1):
            if mono[idx]:
                j = idx
                break
        if j <= i:
            m = list(mono)
            m[i] += 1
            out: Terms = {tuple(m): Fraction(1)}
        else:
            m = list(mono)
            m[j] -= 1
            prefix = tuple(m)
            out = {}
            for t, c in self.times_gen(prefix, i).items():
                for t2, c2 in self.times_gen(t, j).items():
                    out[t2] = out.get(t2, 0) + c * c2
            for k, c in self._swap.get((j, i), ()):
                for t, c2 in self.times_gen(prefix, k).items():
                    out[t] = out.get(t, 0) + c * c2
            out = {t: c for t, c in out.items() if c}
        self._gen_cache[key] = out
        return out

    def times_mono(self, left: Exponent, right: Exponent) -> Terms:
        key = (left, right)
        hit = self._mono_cache.get(key)
        if hit is not None:
            return hit
        cur: Terms = {left: Fraction(1)}
        for i, a in enumerate(right):
            for _ in range(a):
                nxt: Terms = {}
                for t, c in cur.items():
                    for t2, c2 in self.times_gen(t, i).items():
                        nxt[t2] = nxt.get(t2, 0) + c * c2
                cur = {t: c for t, c in nxt.items() if c}
        self._mono_cache[key] = cur
        return cur

    def mul(self, u: Mapping[Exponent, Fraction], v: Mapping[Exponent, Fraction]) -> Terms:
        out: Terms = {}
        for m1, c1 in u.items():
            for m2, c2 in v.items():
                if not any(m2):
                    out[m1] = out.get(m1, 0) + c1 * c2
                    continue
                if not any(m1):
                    out[m2] = out.get(m2, 0) + c1 * c2
                    continue
                for t, c in self.times_mono(m1, m2).items():
                    out[t] = out.get(t, 0) + c1 * c2 * c
        return {t: c for t, c in out.items() if c}

    def gen_times(self, i: int, u: Mapping[Exponent, Fraction]) -> Terms:
        """X_i * u."""
        e = [0] * self.n
        e[i] = 1
        return self.mul({tuple(e): Fraction(1)}, u)

    def adjoint(self, u: Mapping[Exponent, Fraction]) -> Terms:
        """Formal adjoint: the antihomomorphism X_i -> -X_i."""
        out: Terms = {}
        for mono, c in u.items():
            deg = sum(mono)
            cur: Terms = {self.one: Fraction(-1 if deg % 2 else 1) * c}
            for i in range(self.n - 1, -1, -1):
                for _ in range(mono[i]):
                    nxt: Terms = {}
                    for t, c1 in cur.items():
                        for t2, c2 in self.times_gen(t, i).items():
                            nxt[t2] = nxt.get(t2, 0) + c1 * c2
                    cur = nxt
            for t, c1 in cur.items():
                out[t] = out.get(t, 0) + c1
        return {t: c for t, c in out.items() if c}


def ring(alg: GradedLieAlgebra) -> PbwRing:
    return alg.memo("pbw", lambda: PbwRing(alg))


class PbwElement:
    """Immutable normal-ordered element of U(g)."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: GradedLieAlgebra, terms: Mapping[Exponent, object] | None = None):
        self.alg = alg
        self.terms: Terms = {tuple(m): frac(c) for m, c in (terms or {}).items() if frac(c)}

    # -- constructors ------------------------------------------------------
    @classmethod
    def const(cls, alg: GradedLieAlgebra, c=1) -> "PbwElement":
        return cls(alg, {(0,) * alg.dim: c})

    @classmethod
    def gen(cls, alg: GradedLieAlgebra, label) -> "PbwElement":
        i = label if isinstance(label, int) else alg.index(label)
        e = [0] * alg.dim
        e[i] = 1
        return cls(alg, {tuple(e): 1})

    @classmethod
    def parse(cls, alg: GradedLieAlgebra, text: str) -> "PbwElement":
        return parse(alg, text)

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> "PbwElement":
        if isinstance(other, PbwElement):
            return other
        return PbwElement.const(self.alg, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return PbwElement(self.alg, t)

    __radd__ = __add__

    def __neg__(self):
        return PbwElement(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, PbwElement):
            return PbwElement(self.alg, ring(self.alg).mul(self.terms, other.terms))
        s = frac(other)
        return PbwElement(self.alg, {m: c * s for m, c in self.terms.items()})

    def __rmul__(self, other):
        s = frac(other)
        return PbwElement(self.alg, {m: c * s for m, c in self.terms.items()})

    def __pow__(self, k: int):
        out = PbwElement.const(self.alg)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, PbwElement):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == PbwElement.const(self.alg, other) if other else not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def adjoint(self) -> "PbwElement":
        return formal_adjoint(self)

    def weight_components(self) -> Dict[int, "PbwElement"]:
        r = ring(self.alg)
        parts: Dict[int, Terms] = {}
        for m, c in self.terms.items():
            parts.setdefault(r.weight(m), {})[m] = c
        return {w: PbwElement(self.alg, t) for w, t in sorted(parts.items())}

    def __str__(self):
        return format_pbw(self.alg, self.terms)

    def __repr__(self):
        return f"PbwElement({self})"


def multiply(u: PbwElement, v: PbwElement) -> PbwElement:
    return u * v


def formal_adjoint(u: PbwElement) -> PbwElement:
    return PbwElement(u.alg, ring(u.alg).adjoint(u.terms))


def operator_order(u: PbwElement) -> Tuple[int, int] | None:
    """Weight interval [min, max] over the monomials of ``u``; None for zero."""
    if not u.terms:
        return None
    r = ring(u.alg)
    ws = [r.weight(m) for m in u.terms]
    return (min(ws), max(ws))


# ---------------------------------------------------------------------------
# printing and parsing


def _mono_str(alg: GradedLieAlgebra, mono: Exponent) -> str:
    sep = "" if all(len(l) == 1 for l in alg.labels) else "*"
    parts = []
    for i, a in enumerate(mono):
        if a == 1:
            parts.append(alg.labels[i])
        elif a > 1:
            parts.append(f"{alg.labels[i]}^{a}")
    return sep.join(parts)


def _sort_key(alg: GradedLieAlgebra, mono: Exponent):
    w = sum(a * alg.weights[i] for i, a in enumerate(mono))
    return (w, tuple(-a for a in mono))


def format_pbw(alg: GradedLieAlgebra, terms: Mapping[Exponent, Fraction]) -> str:
    """Render in the style ``X^2``, ``XY+Z``, ``-(XY+Z)`` is written ``-XY-Z``."""
    if not terms:
        return "0"
    out = []
    for n, mono in enumerate(sorted(terms, key=lambda m: _sort_key(alg, m))):
        c = terms[mono]
        body = _mono_str(alg, mono)
        sign = "-" if c < 0 else ("+" if n else "")
        mag = abs(c)
        if not body:
            coef = fmt_frac(mag)
        elif mag == 1:
            coef = ""
        else:
            coef = fmt_frac(mag) + ("*" if "/" in fmt_frac(mag) or not body[0].isalpha() else "")
        out.append(f"{sign}{coef}{body}")
    return "".join(out)


_NUM = re.compile(r"\d+(?:/\d+)?")


def parse(alg: GradedLieAlgebra, text: str) -> PbwElement:
    """Parse sums of products such as ``"XY+Z"``, ``"-X^2"``, ``"3/2*X1*X3"``, ``"YX"``.

    Juxtaposed letters are composed as operators, then normal-ordered.
    """
    labels = sorted(alg.labels, key=len, reverse=True)
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty expression")
    pos = 0
    total = PbwElement(alg)

    def read_term(pos):
        coeff = Fraction(1)
        m = _NUM.match(s, pos)
        if m:
            coeff = Fraction(m.group())
            pos = m.end()
            if pos < len(s) and s[pos] == "*":
                pos += 1
        prod = PbwElement.const(alg, coeff)
        while pos < len(s) and s[pos] not in "+-":
            if s[pos] == "*":
                pos += 1
                continue
            for lab in labels:
                if s.startswith(lab, pos):
                    pos += len(lab)
                    g = PbwElement.gen(alg, lab)
                    power = 1
                    if pos < len(s) and s[pos] == "^":
                        m = re.compile(r"\d+").match(s, pos + 1)
                        if not m:
                            raise ValueError(f"bad exponent at {pos} in {text!r}")
                        power = int(m.group())
                        pos = m.end()
                    prod = prod * g ** power
                    break
            else:
                raise ValueError(f"unexpected {s[pos:]!r} in {text!r}")
        return prod, pos

    first = True
    while pos < len(s):
        sign = 1
        if s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
        elif not first:
            raise ValueError(f"expected + or - at {pos} in {text!r}")
        term, pos = read_term(pos)
        total = total + term * sign
        first = False
    return total
