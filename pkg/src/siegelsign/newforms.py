"""Genus-1 newform data: the built-in Delta engine and file ingestion."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MissingCoefficient, ParseError, RamifiedPrime
from .hecke import is_prime

log = logging.getLogger(__name__)


def _pack(coeffs, width_bytes: int) -> int:
    pos = bytearray()
    neg = bytearray()
    for c in coeffs:
        if c >= 0:
            pos += c.to_bytes(width_bytes, "little")
            neg += bytes(width_bytes)
        else:
            pos += bytes(width_bytes)
            neg += (-c).to_bytes(width_bytes, "little")
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def mul_trunc(a: list[int], b: list[int], n: int) -> list[int]:
    """Product of two integer power series modulo q^n.

    Kronecker substitution: both series are packed into one big integer each,
    multiplied once, and the signed digits are read back.
    """
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return [0] * n
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    width = (bound.bit_length() + 2 + 7) // 8
    prod = _pack(a, width) * _pack(b, width)
    half = 1 << (8 * width - 1)
    offset = int.from_bytes(half.to_bytes(width, "little") * n, "little")
    digits = ((prod + offset) & ((1 << (8 * width * n)) - 1)).to_bytes(width * n, "little")
    return [int.from_bytes(digits[i * width:(i + 1) * width], "little") - half for i in range(n)]


def euler_product_series(n: int) -> list[int]:
    """prod_{m>=1} (1 - q^m) mod q^n via the pentagonal-number theorem."""
    out = [0] * n
    k = 0
    while True:
        hit = False
        for j in ((k, -k) if k else (0,)):
            e = j * (3 * j - 1) // 2
            if e < n:
                out[e] += -1 if j % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return out


def delta_qexp(nterms: int) -> list[int]:
    """[tau(0), tau(1), ..., tau(nterms)] with tau(0) = 0."""
    if nterms < 1:
        raise ValueError("nterms must be >= 1")
    n = nterms  # q * P^24 needs P^24 mod q^nterms
    p1 = euler_product_series(n)
    p2 = mul_trunc(p1, p1, n)
    p4 = mul_trunc(p2, p2, n)
    p8 = mul_trunc(p4, p4, n)
    p16 = mul_trunc(p8, p8, n)
    p24 = mul_trunc(p16, p8, n)
    return [0] + p24


@dataclass(frozen=True)
class RamanujanViolation:
    p: int
    ap: int
    normalized: float

    def __str__(self):
        return f"p={self.p}: |a(p)| p^-(k-1)/2 = {abs(self.normalized):.6g} > 2"


@dataclass
class NewformGL2:
    level: int
    weight: int
    coeffs: dict  # p -> a(p)
    label: str = ""
    table: dict | None = None  # n -> a(n)
    violations: list = field(default_factory=list)

    def __post_init__(self):
        if self.level < 1 or self.weight < 1:
            raise ValueError("level and weight must be positive")
        if self.table is not None and self.table.get(1) != 1:
            raise ValueError("a(1) must be 1")
        self.violations = ramanujan_violations(self)
        for v in self.violations:
            log.warning("%s: Ramanujan bound violated at %s", self.label or "newform", v)


def ramanujan_violations(f: NewformGL2) -> list[RamanujanViolation]:
    out = []
    for p, ap in sorted(f.coeffs.items()):
        if f.level % p == 0:
            continue
        if not sqrt_bound_ok(ap, p, f.weight):
            out.append(RamanujanViolation(p, ap, ap * p ** (-(f.weight - 1) / 2)))
    return out


def delta_newform(nterms: int) -> NewformGL2:
    tau = delta_qexp(nterms)
    table = {n: tau[n] for n in range(1, nterms + 1)}
    coeffs = {n: t for n, t in table.items() if is_prime(n)}
    return NewformGL2(1, 12, coeffs, "Delta", table)


def normalized_ap(f: NewformGL2, p: int) -> float:
    """a(p) p^{-(k-1)/2}, which lies in [-2, 2] under Ramanujan-Deligne."""
    if f.level % p == 0:
        raise RamifiedPrime(f"p={p} divides the level {f.level}")
    if p not in f.coeffs:
        raise MissingCoefficient(p, f.label)
    return f.coeffs[p] * p ** (-(f.weight - 1) / 2)


def _parse_header(text: str, lineno: int, path) -> dict:
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ParseError(f"bad header field {part!r}", lineno, path)
        key, val = (s.strip() for s in part.split("=", 1))
        out[key.lower()] = val
    return out


def _header_ints(hdr: dict, lineno, path) -> tuple[int, int]:
    try:
        return int(hdr["level"]), int(hdr["weight"])
    except KeyError as exc:
        raise ParseError(f"header lacks {exc.args[0]}", lineno, path) from None
    except ValueError as exc:
        raise ParseError(f"bad header value: {exc}", lineno, path) from None


def load_newform(path, format: str = "csv", *, level=None, weight=None, label=None) -> NewformGL2:
    """Read a newform export.

    ``csv``: first line ``level=<N>,weight=<k>[,label=<text>]``, then ``p,a(p)``
    lines.  ``qexp_text``: ``n a(n)`` lines, with level/weight from a
    ``# level=..,weight=..`` comment or from the keyword arguments.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path=path) from exc
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, ln) for i, ln in lines if ln]

    if format == "csv":
        if not lines:
            raise ParseError("empty file", path=path)
        hline, htext = lines[0]
        hdr = _parse_header(htext, hline, path)
        lvl, wt = _header_ints(hdr, hline, path)
        coeffs = {}
        for i, ln in lines[1:]:
            if ln.startswith("#"):
                continue
            parts = [s.strip() for s in ln.split(",")]
            if len(parts) != 2:
                raise ParseError(f"expected 'p,a(p)', got {ln!r}", i, path)
            try:
                p, ap = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"non-integer field in {ln!r}", i, path) from None
            if not is_prime(p):
                raise ParseError(f"{p} is not prime", i, path)
            if p in coeffs:
                raise ParseError(f"duplicate entry for p={p}", i, path)
            coeffs[p] = ap
        if not coeffs:
            raise ParseError("no coefficients in file", path=path)
        return NewformGL2(lvl, wt, coeffs, label or hdr.get("label", path.stem))

    if format == "qexp_text":
        hdr = {}
        hline = None
        table = {}
        for i, ln in lines:
            if ln.startswith("#"):
                body = ln.lstrip("#").strip()
                if "=" in body:
                    hdr.update(_parse_header(body, i, path))
                    hline = i
                continue
            parts = ln.split()
            if len(parts) != 2:
                raise ParseError(f"expected 'n a(n)', got {ln!r}", i, path)
            try:
                n, an = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"non-integer field in {ln!r}", i, path) from None
            if n < 1 or n in table:
                raise ParseError(f"bad or duplicate index {n}", i, path)
            table[n] = an
        if not table:
            raise ParseError("no coefficients in file", path=path)
        if level is not None and weight is not None:
            lvl, wt = int(level), int(weight)
        else:
            lvl, wt = _header_ints(hdr, hline, path)
        if table.get(1) != 1:
            raise ParseError("a(1) must equal 1", path=path)
        coeffs = {n: a for n, a in table.items() if is_prime(n)}
        return NewformGL2(lvl, wt, coeffs, label or hdr.get("label", path.stem), table)

    raise ValueError(f"unknown format {format!r}")


def write_qexp(path, f: NewformGL2) -> None:
    if f.table is None:
        raise ValueError("newform has no full coefficient table")
    with open(path, "w") as fh:
        fh.write(f"# level={f.level},weight={f.weight},label={f.label}\n")
        for n in sorted(f.table):
            fh.write(f"{n} {f.table[n]}\n")


def guess_format(path) -> str:
    return "csv" if str(path).lower().endswith(".csv") else "qexp_text"


def sqrt_bound_ok(ap: int, p: int, k: int) -> bool:
    """Exact integer form of |a(p)| <= 2 p^{(k-1)/2}: a(p)^2 <= 4 p^{k-1}."""
    return ap * ap <= 4 * p ** (k - 1)

