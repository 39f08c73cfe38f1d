"""Right-coset decomposition of the genus-2 Hecke operator T(p).

``Gamma diag(1,1,p,p) Gamma`` splits into 1 + p + p^2 + p^3 cosets ``Gamma g_i``
with ``g_i = [[A, B], [0, D]]``.  The eigenvalue of T(p) is read off the
diagonal exponents of each D block.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotPrime, ParseError
from .satake import SatakeParams
from .symplectic import SimilitudeMatrix, smith_normal_form


class Family(str, enum.Enum):
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"
    G4 = "G4"


D_EXPONENTS = {
    Family.G1: (0, 0),
    Family.G2: (1, 0),
    Family.G3: (0, 1),
    Family.G4: (1, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class CosetRep:
    matrix: SimilitudeMatrix
    family: Family
    params: tuple
    d: tuple

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "params", tuple(int(x) for x in self.params))
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        m = self.matrix.entries
        if any(m[i][j] != 0 for i in (2, 3) for j in (0, 1)):
            raise ValueError("coset representative must be block upper triangular")
        if self.d != D_EXPONENTS[self.family]:
            raise ValueError(f"family {self.family.value} has d-exponents {D_EXPONENTS[self.family]}")
        if not self.matrix.is_integral():
            raise ValueError("coset representative must be integral")

    def d_block_exponents(self, p: int) -> tuple:
        """Exponents read from the diagonal of the D block."""
        m = self.matrix.entries
        out = []
        for i in (2, 3):
            v, x = 0, int(m[i][i])
            while x % p == 0:
                x //= p
                v += 1
            out.append(v)
        return tuple(out)


@dataclass(frozen=True)
class HeckeDecomposition:
    prime: int
    reps: tuple

    def __len__(self):
        return len(self.reps)

    def by_family(self, family) -> list:
        family = Family(family)
        return [r for r in self.reps if r.family is family]

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "reps": [
                {
                    "family": r.family.value,
                    "params": list(r.params),
                    "matrix": r.matrix.int_rows(),
                    "d": list(r.d),
                }
                for r in self.reps
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HeckeDecomposition":
        try:
            p = int(obj["prime"])
            reps = tuple(
                CosetRep(
                    SimilitudeMatrix.from_rows(r["matrix"]),
                    Family(r["family"]),
                    tuple(r["params"]),
                    tuple(r["d"]),
                )
                for r in obj["reps"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed decomposition: {exc}") from exc
        return cls(p, reps)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def _rep(rows, family, params) -> CosetRep:
    return CosetRep(SimilitudeMatrix.from_rows(rows), family, params, D_EXPONENTS[family])


def decompose_Tp(p: int) -> HeckeDecomposition:
    """The four families of right-coset representatives of T(p)."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    reps = [_rep([[p, 0, 0, 0], [0, p, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], Family.G1, ())]
    for a in range(p):
        reps.append(_rep(
            [[1, 0, a, 0], [0, p, 0, 0], [0, 0, p, 0], [0, 0, 0, 1]],
            Family.G2, (a,)))
    for alpha in range(p):
        for d in range(p):
            reps.append(_rep(
                [[p, 0, 0, 0], [-alpha, 1, 0, d], [0, 0, 1, alpha], [0, 0, 0, p]],
                Family.G3, (alpha, d)))
    for a in range(p):
        for b in range(p):
            for d in range(p):
                reps.append(_rep(
                    [[1, 0, a, b], [0, 1, b, d], [0, 0, p, 0], [0, 0, 0, p]],
                    Family.G4, (a, b, d)))
    return HeckeDecomposition(p, tuple(reps))


_J = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]], dtype=np.int64)


def verify_disjoint(dec: HeckeDecomposition) -> bool:
    """True iff no two representatives define the same coset Sp4(Z) g.

    ``Gamma g_i = Gamma g_j`` iff ``g_i g_j^{-1}`` lies in Sp4(Z).  With
    ``g^{-1} = -J g^T J / mu`` the product is ``g_i (-J g_j^T J) / mu_j``; it has
    similitude ``mu_i / mu_j`` and is integral iff the integer product is
    divisible by mu_j.  All arithmetic is exact (int64 on small entries).
    """
    reps = dec.reps
    if not reps:
        return True
    if not all(r.matrix.is_integral() for r in reps):
        raise ValueError("representatives must be integral")
    mats = np.array([r.matrix.int_rows() for r in reps], dtype=np.int64)
    mus = np.array([int(r.matrix.mu) for r in reps], dtype=np.int64)
    adj = np.einsum("ab,nbc,cd->nad", -_J, mats.transpose(0, 2, 1), _J)
    n = len(reps)
    for i in range(n):
        prod = np.einsum("ab,nbc->nac", mats[i], adj)
        same_mu = mus == mus[i]
        divisible = np.all(prod % mus[:, None, None] == 0, axis=(1, 2))
        clash = same_mu & divisible
        clash[i] = False
        if clash.any():
            return False
    return True


def verify_double_coset(dec: HeckeDecomposition) -> bool:
    """Every rep has similitude p and elementary divisors (1, 1, p, p)."""
    p = dec.prime
    target = (1, 1, p, p)
    for r in dec.reps:
        if r.matrix.mu != p or not r.matrix.is_integral():
            return False
        if smith_normal_form(r.matrix.int_rows()) != target:
            return False
    return True


def _coset_term(d, params, p):
    """prod_j (a_j p^{-j})^{d_j} for one representative."""
    term = 1
    for j, (dj, aj) in enumerate(zip(d, params), start=1):
        if dj:
            if isinstance(aj, (int, Fraction)):
                term = term * (Fraction(aj) / p ** j) ** dj
            else:
                term = term * (aj * p ** (-j)) ** dj
    return term


def family_contributions(dec: HeckeDecomposition, s: SatakeParams) -> dict:
    """a0 * sum over the family of prod_j (a_j p^-j)^{d_ij}, per family.

    Exact when the parameters are Fractions.  The four values are a0, a0 a1,
    a0 a2 and a0 a1 a2.
    """
    out = {f: 0 for f in Family}
    for r in dec.reps:
        out[r.family] = out[r.family] + _coset_term(r.d, (s.a1, s.a2), dec.prime)
    return {f: s.a0 * v for f, v in out.items()}


def normalized_from_decomposition(dec: HeckeDecomposition, s: SatakeParams):
    """a0 * sum_i prod_j (a_j p^-j)^{d_ij}; the eigenvalue without p^{2k-3/2}."""
    total = 0
    for v in family_contributions(dec, s).values():
        total = total + v
    return total


def weight_factor(p: int, k: int, n: int = 2) -> float:
    """p^{nk - n(n+1)/4}; equals p^{2k - 3/2} for genus 2."""
    return float(p) ** (n * k - n * (n + 1) / 4)


def eigenvalue_from_decomposition(dec: HeckeDecomposition, s: SatakeParams, k: int) -> complex:
    """mu_F(p) evaluated by running over the coset representatives."""
    return weight_factor(dec.prime, k) * complex(normalized_from_decomposition(dec, s))


def hecke_eigenvalue(exponents, params, p: int, k: int, r: int = 1) -> complex:
    """General evaluator ``(p^{nk-n(n+1)/4} a_0)^r * sum_i prod_j (a_j p^-j)^{d_ij}``.

    ``exponents`` is a list of d-exponent tuples (one per coset, length n) and
    ``params`` is (a_0, ..., a_n).  No cosets are enumerated here.
    """
    a0, *rest = params
    n = len(rest)
    total = 0
    for d in exponents:
        if len(d) != n:
            raise ValueError(f"exponent tuple {d!r} does not have length {n}")
        total = total + _coset_term(d, rest, p)
    return complex((weight_factor(p, k, n) * complex(a0)) ** r * complex(total))


def lambda_normalized(s: SatakeParams):
    a0, a1, a2 = s
    return a0 + a0 * a1 + a0 * a2 + a0 * a1 * a2
