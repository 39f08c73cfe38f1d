"""Satake parameters, spin Euler factors and their Dirichlet coefficients."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

WEISSAUER_BOUND = 4.0


@dataclass(frozen=True)
class SatakeParams:
    """The triple (a0, a1, a2) at one prime.  Entries may be complex or Fraction."""

    a0: Number
    a1: Number
    a2: Number

    def __iter__(self):
        return iter((self.a0, self.a1, self.a2))

    def is_exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for x in self)


@dataclass(frozen=True)
class SpinFactor:
    """Local spin factor prod(1 - root * p^-s)^-1; zero roots model a lower degree."""

    roots: tuple
    prime: int | None = None

    def __post_init__(self):
        roots = tuple(self.roots)
        if len(roots) > 4:
            raise ValueError("a spin factor has at most 4 roots")
        object.__setattr__(self, "roots", roots)

    @property
    def degree(self) -> int:
        return sum(1 for r in self.roots if r != 0)

    def polynomial(self) -> list:
        """Coefficients c_0..c_4 of prod(1 - root*X), c_0 = 1."""
        coeffs = [1]
        for r in self.roots:
            nxt = coeffs + [0]
            for i in range(len(coeffs)):
                nxt[i + 1] -= r * coeffs[i]
            coeffs = nxt
        return coeffs


def spin_roots(s: SatakeParams, prime: int | None = None) -> SpinFactor:
    a0, a1, a2 = s
    return SpinFactor((a0, a0 * a1, a0 * a2, a0 * a1 * a2), prime)


def elementary_symmetric(roots) -> list:
    """e_0..e_n of the roots."""
    e = [1] + [0] * len(roots)
    for r in roots:
        for k in range(len(roots), 0, -1):
            e[k] = e[k] + r * e[k - 1]
    return e


def dirichlet_coeffs(f: SpinFactor, rmax: int) -> list:
    """a(p^r) for r = 0..rmax from inverting the Euler polynomial as a power series.

    With exact (int/Fraction) roots the result is exact.
    """
    if rmax < 1:
        raise ValueError("rmax must be >= 1")
    c = f.polynomial()
    out = [1]
    for r in range(1, rmax + 1):
        acc = 0
        for k in range(1, min(r, len(c) - 1) + 1):
            acc -= c[k] * out[r - k]
        out.append(acc)
    return out


def lambda_p(f: SpinFactor):
    total = 0
    for r in f.roots:
        total = total + r
    return total


def check_ramanujan(s: SatakeParams, tol: float = 1e-9) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return all(abs(abs(complex(a)) - 1.0) <= tol for a in s)


def check_weissauer(lam) -> bool:
    return abs(lam) <= WEISSAUER_BOUND + 1e-12


def has_trivial_central_character(s: SatakeParams, tol: float = 1e-9) -> bool:
    """Optional predicate a0^2 a1 a2 == 1; never enforced."""
    a0, a1, a2 = s
    val = a0 * a0 * a1 * a2
    if s.is_exact():
        return val == 1
    return abs(complex(val) - 1) <= tol


def tempered_pair_params(theta: float, phi: float) -> SatakeParams:
    """Unit-modulus parameters whose spin roots are e^{+-i theta}, e^{+-i phi}.

    The roots come out in the order (e^{i theta}, e^{i phi}, e^{-i phi}, e^{-i theta}).
    """
    a0 = cmath.exp(1j * theta)
    a1 = cmath.exp(1j * (phi - theta))
    a2 = cmath.exp(-1j * (phi + theta))
    return SatakeParams(a0, a1, a2)


# JSON helpers: complex numbers as [re, im], exact rationals as "a/b" strings.

def encode_number(x):
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return str(Fraction(x))
    z = complex(x)
    return [z.real, z.imag]


def decode_number(obj):
    if isinstance(obj, str):
        text = obj.strip()
        try:
            return Fraction(text)
        except ValueError:
            return complex(text.replace(" ", "").replace("i", "j"))
    if isinstance(obj, (list, tuple)):
        if len(obj) != 2:
            raise ValueError(f"complex numbers are [re, im] pairs, got {obj!r}")
        return complex(float(obj[0]), float(obj[1]))
    if isinstance(obj, bool):
        raise ValueError("booleans are not numbers here")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, float):
        return complex(obj)
    raise ValueError(f"cannot decode number from {obj!r}")
