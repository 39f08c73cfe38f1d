"""Normalized eigenvalue streams lambda(p) for class G and class Y eigenforms.

A class-Y stream is the sum of two unitary GL(2) sequences (a newform's
normalized a(p), or a synthetic 2cos(theta_p) stream).  A class-G stream comes
from a single source: an explicit root table, a synthetic USp(4) sampler, or a
single GL(2) source.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DistinctnessError, MissingCoefficient, ParseError
from .newforms import NewformGL2, delta_newform, guess_format, load_newform
from .satake import decode_number
from .symplectic import prime_factors

DISTINCTNESS_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for q in range(3, math.isqrt(n) + 1, 2):
        if is_p[q]:
            is_p[q * q::2 * q] = False
    return np.flatnonzero(is_p).astype(np.int64)


class AngleModel(str, enum.Enum):
    SEMICIRCLE = "semicircle"
    UNIFORM = "uniform"
    FIXED = "fixed"


@dataclass(frozen=True)
class AngleStreamModel:
    """Reproducible angle stream theta_p in [0, pi], one value per prime.

    Random kinds draw one uniform per prime in increasing order, so the stream
    up to a smaller bound is a prefix of the stream up to a larger one.
    """

    kind: AngleModel
    seed: int = 0
    table: dict = field(default_factory=dict)  # FIXED: p -> theta
    default: float | None = None  # FIXED: theta for primes not in table

    def __post_init__(self):
        object.__setattr__(self, "kind", AngleModel(self.kind))


def semicircle_ppf(u: np.ndarray, iters: int = 64) -> np.ndarray:
    """Inverse CDF of (2/pi) sin^2(theta) on [0, pi] by bisection.

    The CDF is (2 theta - sin 2 theta) / (2 pi); it is strictly increasing,
    which makes bisection safe everywhere including the flat ends.
    """
    u = np.asarray(u, dtype=float)
    lo = np.zeros_like(u)
    hi = np.full_like(u, math.pi)
    target = 2 * math.pi * u
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below = 2 * mid - np.sin(2 * mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def _rng(seed, salt=None) -> np.random.Generator:
    if salt is None:
        return np.random.default_rng(seed)
    return np.random.default_rng([int(salt), int(seed)])


def sample_angles(model: AngleStreamModel, pmax: int, primes=None, salt=None) -> np.ndarray:
    """theta_p for each prime p <= pmax (or for the given ascending primes)."""
    if primes is None:
        primes = primes_upto(pmax)
    primes = np.asarray(primes, dtype=np.int64)
    if model.kind is AngleModel.FIXED:
        out = np.empty(len(primes))
        for i, p in enumerate(primes.tolist()):
            if p in model.table:
                out[i] = model.table[p]
            elif model.default is not None:
                out[i] = model.default
            else:
                raise MissingCoefficient(p, "fixed angle table")
        return out
    # index by position in the full prime sequence to keep streams prefix-stable
    full = primes_upto(int(primes[-1])) if len(primes) else primes
    u = _rng(model.seed, salt).random(len(full))
    idx = np.searchsorted(full, primes)
    u = u[idx]
    if model.kind is AngleModel.UNIFORM:
        return math.pi * u
    return semicircle_ppf(u)


def sample_usp4_angles(seed: int, n: int, salt=None) -> tuple[np.ndarray, np.ndarray]:
    """n conjugacy classes of Haar-random USp(4), as angle pairs (theta1, theta2).

    The Weyl density is proportional to (cos t1 - cos t2)^2 sin^2 t1 sin^2 t2.
    Candidate cosines are semicircle-distributed (x-coordinate of a uniform
    point in the unit disk) and accepted with probability (x1 - x2)^2 / 4.
    """
    rng = _rng(seed, salt)
    x1 = np.empty(0)
    x2 = np.empty(0)
    while len(x1) < n:
        batch = max(9 * (n - len(x1)), 1024)
        u = rng.random((batch, 5))
        a = np.sqrt(u[:, 0]) * np.cos(2 * math.pi * u[:, 1])
        b = np.sqrt(u[:, 2]) * np.cos(2 * math.pi * u[:, 3])
        keep = 4.0 * u[:, 4] < (a - b) ** 2
        x1 = np.concatenate([x1, a[keep]])
        x2 = np.concatenate([x2, b[keep]])
    return np.arccos(x1[:n]), np.arccos(x2[:n])


# ---------------------------------------------------------------- sources


class Source:
    """One GL(m) constituent: produces values at primes."""

    label: str = ""
    certified: bool = False  # values are known to be Ramanujan-bounded

    @property
    def ramified(self) -> frozenset:
        return frozenset()

    def values(self, primes: np.ndarray, salt=None) -> np.ndarray:
        raise NotImplementedError


@dataclass
class NewformSource(Source):
    newform: NewformGL2

    @property
    def label(self):
        return self.newform.label

    @property
    def certified(self):
        return not self.newform.violations

    @property
    def ramified(self):
        return frozenset(prime_factors(self.newform.level))

    def values(self, primes, salt=None):
        f = self.newform
        out = np.empty(len(primes))
        for i, p in enumerate(np.asarray(primes).tolist()):
            if p not in f.coeffs:
                raise MissingCoefficient(p, f.label)
            out[i] = f.coeffs[p] * p ** (-(f.weight - 1) / 2)
        return out


@dataclass
class DeltaSource(Source):
    """The discriminant form, coefficients computed on demand up to the largest prime."""

    nterms: int | None = None
    label: str = "Delta"
    certified: bool = True

    def newform(self, pmax: int) -> NewformGL2:
        n = max(self.nterms or 0, pmax, 2)
        cached = getattr(self, "_cache", None)
        if cached is None or max(cached.table) < n:
            cached = delta_newform(n)
            self._cache = cached
        return cached

    def values(self, primes, salt=None):
        primes = np.asarray(primes)
        top = int(primes[-1]) if len(primes) else 2
        return NewformSource(self.newform(top)).values(primes)


@dataclass
class AngleSource(Source):
    """2 cos(theta_p) for a synthetic angle stream."""

    model: AngleStreamModel
    label: str = ""
    certified: bool = True

    def values(self, primes, salt=None):
        primes = np.asarray(primes)
        if not len(primes):
            return np.zeros(0)
        return 2.0 * np.cos(sample_angles(self.model, int(primes[-1]), primes, salt))


@dataclass
class USp4Source(Source):
    """Synthetic GL(4)-type stream 2cos(t1) + 2cos(t2) with USp(4) Haar angles."""

    seed: int = 0
    label: str = ""
    certified: bool = True

    def values(self, primes, salt=None):
        primes = np.asarray(primes)
        if not len(primes):
            return np.zeros(0)
        full = primes_upto(int(primes[-1]))
        t1, t2 = sample_usp4_angles(self.seed, len(full), salt)
        idx = np.searchsorted(full, primes)
        return 2.0 * np.cos(t1[idx]) + 2.0 * np.cos(t2[idx])


@dataclass
class RootTableSource(Source):
    """lambda(p) = sum of the spin roots from an explicit table."""

    default: tuple | None = None
    table: dict = field(default_factory=dict)  # p -> roots
    label: str = ""

    @property
    def certified(self):
        rows = list(self.table.values()) + ([self.default] if self.default is not None else [])
        return all(abs(abs(complex(r)) - 1) <= 1e-12 for row in rows for r in row)

    def values(self, primes, salt=None):
        out = np.empty(len(primes))
        for i, p in enumerate(np.asarray(primes).tolist()):
            roots = self.table.get(p, self.default)
            if roots is None:
                raise MissingCoefficient(p, self.label or "root table")
            z = sum(complex(r) for r in roots)
            if abs(z.imag) > 1e-9:
                raise ValueError(f"lambda({p}) = {z} is not real")
            out[i] = z.real
        return out


# ---------------------------------------------------------------- specs


class EigenformClass(str, enum.Enum):
    G = "G"
    Y = "Y"


@dataclass
class EigenformSpec:
    cls: EigenformClass
    sources: tuple
    ramified: frozenset = frozenset()
    label: str = ""
    salt: int | None = None  # global seed mixed into every synthetic source

    def __post_init__(self):
        self.cls = EigenformClass(self.cls)
        self.sources = tuple(self.sources)
        want = 2 if self.cls is EigenformClass.Y else 1
        if len(self.sources) != want:
            raise ValueError(f"class {self.cls.value} takes {want} source(s), got {len(self.sources)}")
        ram = set(self.ramified)
        for s in self.sources:
            ram |= s.ramified
        self.ramified = frozenset(int(p) for p in ram)
        if self.cls is EigenformClass.Y:
            check_distinct(self.sources, self.ramified, self.salt)
        if not self.label:
            self.label = "+".join(s.label for s in self.sources)

    @property
    def certified(self) -> bool:
        return all(s.certified for s in self.sources)


def check_distinct(sources, ramified=frozenset(), salt=None) -> None:
    """Reject sources that look isomorphic.

    Labels must differ pairwise and every pair must disagree at one of the
    first ten unramified primes.
    """
    labels = [s.label for s in sources]
    if len(set(labels)) != len(labels):
        raise DistinctnessError(f"sources must be distinct (labels {labels})")
    ps = np.array([p for p in DISTINCTNESS_PRIMES if p not in ramified], dtype=np.int64)
    vals = [s.values(ps, salt) for s in sources]
    for i in range(len(sources)):
        for j in range(i + 1, len(sources)):
            if np.allclose(vals[i], vals[j], rtol=0, atol=1e-12):
                raise DistinctnessError(
                    f"sources must be distinct ({labels[i]} and {labels[j]} agree at the first primes)"
                )


@dataclass
class LambdaSeries:
    """lambda(p) at ascending primes, with the primes that were left out."""

    primes: np.ndarray
    values: np.ndarray
    excluded: frozenset = frozenset()
    label: str = ""
    certified: bool = False

    def __post_init__(self):
        self.primes = np.asarray(self.primes, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=float)
        if self.primes.shape != self.values.shape:
            raise ValueError("primes and values differ in length")

    def __neg__(self):
        return LambdaSeries(self.primes, -self.values, self.excluded, f"-{self.label}", self.certified)

    def scaled(self, t: float) -> "LambdaSeries":
        return LambdaSeries(self.primes, t * self.values, self.excluded, f"{t}*{self.label}",
                            self.certified and abs(t) <= 1)

    def as_dict(self) -> dict:
        return dict(zip(self.primes.tolist(), self.values.tolist()))


def lambda_stream(spec: EigenformSpec, pmax: int) -> LambdaSeries:
    """lambda(p) for p <= pmax outside the spec's ramified set."""
    primes = primes_upto(pmax)
    if spec.ramified:
        primes = primes[~np.isin(primes, sorted(spec.ramified))]
    total = np.zeros(len(primes))
    for s in spec.sources:
        total = total + s.values(primes, spec.salt)
    return LambdaSeries(primes, total, spec.ramified, spec.label, spec.certified)


# ---------------------------------------------------------------- JSON specs


def _source_from_json(obj: dict, base: Path) -> Source:
    kind = obj.get("type")
    label = obj.get("label", "")
    if kind == "delta":
        return DeltaSource(obj.get("nterms"))
    if kind == "newform":
        path = base / obj["path"]
        f = load_newform(path, obj.get("format") or guess_format(path), label=label or None)
        return NewformSource(f)
    if kind == "angles":
        table = {int(p): float(t) for p, t in obj.get("table", {}).items()}
        model = AngleStreamModel(AngleModel(obj.get("model", "semicircle")), int(obj.get("seed", 0)),
                                 table, obj.get("default"))
        return AngleSource(model, label or f"{model.kind.value}:{model.seed}")
    if kind == "usp4":
        seed = int(obj.get("seed", 0))
        return USp4Source(seed, label or f"usp4:{seed}")
    if kind == "roots":
        default = obj.get("roots")
        default = tuple(decode_number(r) for r in default) if default is not None else None
        table = {int(p): tuple(decode_number(r) for r in rs) for p, rs in obj.get("table", {}).items()}
        return RootTableSource(default, table, label or "roots")
    raise ParseError(f"unknown source type {kind!r}")


def spec_from_json(obj: dict, base=".", salt=None) -> EigenformSpec:
    base = Path(base)
    try:
        raw = obj.get("sources")
        if raw is None and "source" in obj:
            raw = [obj["source"]]
        if not raw:
            raise ParseError("spec has no sources")
        sources = [_source_from_json(s, base) for s in raw]
        return EigenformSpec(
            EigenformClass(obj["class"]),
            tuple(sources),
            frozenset(int(p) for p in obj.get("ramified", [])),
            obj.get("label", ""),
            salt,
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed eigenform spec: {exc!r}") from exc
    except ValueError as exc:
        raise ParseError(f"malformed eigenform spec: {exc}") from exc


def load_spec(path, salt=None) -> EigenformSpec:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except OSError as exc:
        raise ParseError(f"cannot read spec: {exc.strerror}", path=path) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, path=path) from exc
    return spec_from_json(obj, path.parent, salt)
