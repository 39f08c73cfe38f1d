"""Exact GSp(4) arithmetic and genus-2 congruence subgroup membership.

Matrices are 4x4 tuples of :class:`fractions.Fraction`.  The symplectic form is
``J = [[0, 1_2], [-1_2, 0]]`` and ``g`` is a similitude when ``g^T J g = mu J``.
Nothing in this module touches floating point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import NotSimilitude, ParseError, SingularMatrix

Matrix = tuple  # tuple[tuple[Fraction, ...], ...]

J = (
    (Fraction(0), Fraction(0), Fraction(1), Fraction(0)),
    (Fraction(0), Fraction(0), Fraction(0), Fraction(1)),
    (Fraction(-1), Fraction(0), Fraction(0), Fraction(0)),
    (Fraction(0), Fraction(-1), Fraction(0), Fraction(0)),
)


def as_matrix(rows) -> Matrix:
    m = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if len(m) != 4 or any(len(r) != 4 for r in m):
        raise ValueError("expected a 4x4 matrix")
    return m


def identity() -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(4)) for i in range(4))


def diag(*d) -> Matrix:
    return tuple(tuple(Fraction(d[i]) if i == j else Fraction(0) for j in range(4)) for i in range(4))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(4)), Fraction(0)) for j in range(4))
        for i in range(4)
    )


def transpose(a: Matrix) -> Matrix:
    return tuple(tuple(a[j][i] for j in range(4)) for i in range(4))


def _gram(g: Matrix) -> Matrix:
    return matmul(matmul(transpose(g), J), g)


def similitude(g) -> Fraction:
    """Return mu with ``g^T J g = mu J``; raise :class:`NotSimilitude` otherwise."""
    g = as_matrix(g)
    gram = _gram(g)
    mu = gram[0][2]
    if mu == 0 or any(gram[i][j] != mu * J[i][j] for i in range(4) for j in range(4)):
        raise NotSimilitude("g^T J g is not a nonzero scalar multiple of J")
    return mu


@dataclass(frozen=True)
class SimilitudeMatrix:
    """A 4x4 rational matrix together with its (validated) similitude factor."""

    entries: Matrix
    mu: Fraction = field(default=None)

    def __post_init__(self):
        entries = as_matrix(self.entries)
        mu = similitude(entries)
        if self.mu is not None and Fraction(self.mu) != mu:
            raise NotSimilitude(f"cached mu={self.mu} disagrees with recomputed mu={mu}")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "mu", mu)

    @classmethod
    def from_rows(cls, rows) -> "SimilitudeMatrix":
        return cls(as_matrix(rows))

    def __matmul__(self, other: "SimilitudeMatrix") -> "SimilitudeMatrix":
        return SimilitudeMatrix(matmul(self.entries, other.entries))

    def inverse(self) -> "SimilitudeMatrix":
        # g^{-1} = J^{-1} g^T J / mu, and J^{-1} = -J
        neg_j = tuple(tuple(-x for x in row) for row in J)
        m = matmul(matmul(neg_j, transpose(self.entries)), J)
        return SimilitudeMatrix(tuple(tuple(x / self.mu for x in row) for row in m))

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.entries for x in row)

    def int_rows(self) -> list[list[int]]:
        if not self.is_integral():
            raise ValueError("matrix has non-integral entries")
        return [[int(x) for x in row] for row in self.entries]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


class SubgroupKind(str, enum.Enum):
    BOREL = "borel"
    SIEGEL = "siegel"
    KLINGEN = "klingen"
    PARAMODULAR = "paramodular"


# Minimal power of N (globally) or p^r (locally) allowed in each slot.
# 0 -> Z, 1 -> N Z, -1 -> N^{-1} Z.
PATTERNS = {
    SubgroupKind.BOREL: (
        (0, 1, 0, 0),
        (0, 0, 0, 0),
        (1, 1, 0, 0),
        (1, 1, 1, 0),
    ),
    SubgroupKind.SIEGEL: (
        (0, 0, 0, 0),
        (0, 0, 0, 0),
        (1, 1, 0, 0),
        (1, 1, 0, 0),
    ),
    SubgroupKind.KLINGEN: (
        (0, 1, 0, 0),
        (0, 0, 0, 0),
        (0, 1, 0, 0),
        (1, 1, 1, 0),
    ),
    SubgroupKind.PARAMODULAR: (
        (0, 1, 0, 0),
        (0, 0, 0, -1),
        (0, 1, 0, 0),
        (1, 1, 1, 0),
    ),
}


@dataclass(frozen=True)
class SubgroupSpec:
    kind: SubgroupKind
    level: int

    def __post_init__(self):
        object.__setattr__(self, "kind", SubgroupKind(self.kind))
        if int(self.level) != self.level or self.level < 1:
            raise ValueError(f"level must be a positive integer, got {self.level!r}")
        object.__setattr__(self, "level", int(self.level))

    @classmethod
    def parse(cls, text: str) -> "SubgroupSpec":
        """Parse ``kind:N``, e.g. ``paramodular:4``."""
        try:
            kind, level = text.strip().split(":")
            return cls(SubgroupKind(kind.strip().lower()), int(level))
        except ValueError as exc:
            raise ParseError(f"bad subgroup spec {text!r}: expected kind:N") from exc

    def __str__(self):
        return f"{self.kind.value}:{self.level}"


def valuation(x, p: int) -> float:
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def exact_power(n: int, p: int) -> int:
    return int(valuation(n, p))


@dataclass(frozen=True)
class ValuationPattern:
    prime: int
    exponent: int
    kind: SubgroupKind

    def __post_init__(self):
        object.__setattr__(self, "kind", SubgroupKind(self.kind))
        if self.exponent < 1:
            raise ValueError("exponent r_p must be >= 1")

    @classmethod
    def for_level(cls, kind, level: int, p: int) -> "ValuationPattern":
        r = exact_power(level, p)
        if r < 1:
            raise ValueError(f"{p} does not divide {level}")
        return cls(p, r, kind)


def _as_similitude(g) -> SimilitudeMatrix | None:
    if isinstance(g, SimilitudeMatrix):
        return g
    try:
        return SimilitudeMatrix(as_matrix(g))
    except NotSimilitude:
        return None


def is_member(g, spec: SubgroupSpec) -> bool:
    """Membership of ``g`` in B(N), Gamma_0(N), Q(N) or K(N)."""
    g = _as_similitude(g)
    if g is None or g.mu != 1:
        return False
    n = spec.level
    pattern = PATTERNS[spec.kind]
    for i in range(4):
        for j in range(4):
            # x in N^k Z  <=>  x / N^k is an integer
            scaled = g.entries[i][j] / Fraction(n) ** pattern[i][j]
            if scaled.denominator != 1:
                return False
    return True


def is_local_member(g, pat: ValuationPattern) -> bool:
    """Membership in the local factor at p (B_p, Gamma^2_{0,p}, Q_p, K_p)."""
    g = _as_similitude(g)
    if g is None or g.mu != 1:
        return False
    pattern = PATTERNS[pat.kind]
    for i in range(4):
        for j in range(4):
            if valuation(g.entries[i][j], pat.prime) < pattern[i][j] * pat.exponent:
                return False
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_member_via_local(g, spec: SubgroupSpec) -> bool:
    """Same predicate as :func:`is_member`, assembled from the local conditions.

    For p | N the local pattern is checked; away from N every entry must be
    p-integral, which is the statement that denominators only involve primes of N.
    """
    g = _as_similitude(g)
    if g is None or g.mu != 1:
        return False
    primes = prime_factors(spec.level)
    for p in primes:
        if not is_local_member(g, ValuationPattern.for_level(spec.kind, spec.level, p)):
            return False
    for row in g.entries:
        for x in row:
            den = x.denominator
            for p in primes:
                while den % p == 0:
                    den //= p
            if den != 1:
                return False
    return True


def smith_normal_form(g: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Elementary divisors of a nonsingular square integer matrix.

    Plain pivoting with Euclidean row/column operations; the result is
    positive and satisfies d_1 | d_2 | ... .
    """
    a = [[int(x) for x in row] for row in g]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("smith_normal_form expects a square matrix")
    if any(Fraction(x).denominator != 1 for row in g for x in row):
        raise ValueError("smith_normal_form expects integer entries")

    for t in range(n):
        while True:
            nonzero = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, n) if a[i][j]]
            if not nonzero:
                raise SingularMatrix(f"matrix has rank {t} < {n}")
            _, pi, pj = min(nonzero)
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]

            done = True
            piv = a[t][t]
            for i in range(t + 1, n):
                q = a[i][t] // piv
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // piv
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if not done:
                continue
            # pivot must divide the remaining block
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, n) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
    return tuple(abs(a[i][i]) for i in range(n))


def parse_matrix(text: str) -> Matrix:
    """Read 4 rows of 4 rationals (``a/b`` or integers), whitespace separated."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append(tuple(Fraction(tok) for tok in line.split()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad matrix entry: {exc}", line=lineno) from exc
        if len(rows[-1]) != 4:
            raise ParseError(f"expected 4 entries, got {len(rows[-1])}", line=lineno)
    if len(rows) != 4:
        raise ParseError(f"expected 4 rows, got {len(rows)}")
    return tuple(rows)


def format_matrix(m) -> str:
    return "\n".join(" ".join(str(Fraction(x)) for x in row) for row in m)
