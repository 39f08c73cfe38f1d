"""Command line entry point: ``siegelsign <subcommand> ...``.

Exit status is 0 on success, 1 on domain errors (one line on stderr) and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import hecke, satake
from .errors import ParseError, SiegelSignError
from .newforms import delta_newform, guess_format, load_newform, write_qexp
from .streams import check_distinct, lambda_stream, load_spec
from .sums import sieve, sign_change_report


class UsageError(Exception):
    pass


def _dump(obj, out, deterministic=True):
    if not deterministic:
        obj = dict(obj, generatedAt=datetime.now(timezone.utc).isoformat())
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _numbers(tokens):
    try:
        return [satake.decode_number(t) for t in tokens]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ------------------------------------------------------------ subcommands


def cmd_decompose(args):
    dec = hecke.decompose_Tp(args.prime)
    _dump(dec.to_json(), args.out)


def cmd_verify(args):
    try:
        obj = json.loads(Path(args.inp).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, args.inp) from exc
    dec = hecke.HeckeDecomposition.from_json(obj)
    p = dec.prime
    result = {
        "prime": p,
        "count": len(dec),
        "expectedCount": 1 + p + p * p + p ** 3,
        "disjoint": hecke.verify_disjoint(dec),
        "doubleCoset": hecke.verify_double_coset(dec),
    }
    _dump(result, args.out)
    if not (result["disjoint"] and result["doubleCoset"] and result["count"] == result["expectedCount"]):
        raise SiegelSignError("decomposition failed verification")


def cmd_eigenvalue(args):
    s = satake.SatakeParams(*_numbers(args.satake))
    dec = hecke.decompose_Tp(args.prime)
    mu = hecke.eigenvalue_from_decomposition(dec, s, args.weight)
    fam = hecke.family_contributions(dec, s)
    _dump({
        "prime": args.prime,
        "weight": args.weight,
        "satake": [satake.encode_number(a) for a in s],
        "eigenvalue": satake.encode_number(mu),
        "normalized": satake.encode_number(hecke.normalized_from_decomposition(dec, s)),
        "families": {f.value: satake.encode_number(v) for f, v in fam.items()},
    }, args.out)


def cmd_lfactor(args):
    if args.roots:
        f = satake.SpinFactor(tuple(_numbers(args.roots)), args.prime)
        s = None
    else:
        s = satake.SatakeParams(*_numbers(args.satake))
        f = satake.spin_roots(s, args.prime)
    coeffs = satake.dirichlet_coeffs(f, args.rmax)
    out = {
        "prime": args.prime,
        "roots": [satake.encode_number(r) for r in f.roots],
        "coefficients": [satake.encode_number(c) for c in coeffs],
        "lambda": satake.encode_number(satake.lambda_p(f)),
    }
    if s is not None:
        out["ramanujan"] = satake.check_ramanujan(s, args.tol)
    _dump(out, args.out)


def cmd_delta(args):
    f = delta_newform(args.nterms)
    if args.out:
        write_qexp(args.out, f)
    else:
        for n in sorted(f.table):
            print(n, f.table[n])


def cmd_newform_check(args):
    f = load_newform(args.file, args.format or guess_format(args.file))
    _dump({
        "label": f.label,
        "level": f.level,
        "weight": f.weight,
        "primes": len(f.coeffs),
        "violations": [{"p": v.p, "ap": v.ap, "normalized": v.normalized} for v in f.violations],
    }, args.out)


def cmd_stream(args):
    spec = load_spec(args.spec, args.seed)
    series = lambda_stream(spec, args.pmax)
    fh = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "lambda"])
        for p, v in zip(series.primes.tolist(), series.values.tolist()):
            w.writerow([p, repr(v)])
    finally:
        if fh is not sys.stdout:
            fh.close()


def _write_per_prime(path, sf, sg, x):
    mask_f = sf.primes <= x
    g = dict(zip(sg.primes.tolist(), sg.values.tolist()))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "lambdaF", "lambdaG", "sign"])
        for p, lf in zip(sf.primes[mask_f].tolist(), sf.values[mask_f].tolist()):
            if p in g:
                w.writerow([p, repr(lf), repr(g[p]), int(np.sign(lf * g[p]))])


def _experiment(spec_f, spec_g, x, c, m, epsilon, out, per_prime, deterministic, extra=None):
    xi = int(x)
    sf = lambda_stream(spec_f, xi)
    sg = lambda_stream(spec_g, xi)
    table = sieve(max(xi, 2))
    rep = sign_change_report(sf, sg, table, x, c, m, epsilon=epsilon).to_json()
    if extra:
        rep.update(extra)
    _dump(rep, out, deterministic)
    if per_prime:
        _write_per_prime(per_prime, sf, sg, xi)
    return rep


def cmd_sums(args):
    try:
        f_path, g_path = args.pair.split(",")
    except ValueError:
        raise UsageError("--pair expects specF.json,specG.json") from None
    if not 0 < args.c < 4:
        raise UsageError("--c must lie in (0, 4)")
    spec_f = load_spec(f_path, args.seed)
    spec_g = load_spec(g_path, args.seed)
    _experiment(spec_f, spec_g, args.x, args.c, args.m, args.epsilon, args.out, args.csv,
                args.deterministic)


@dataclass
class ExperimentConfig:
    specF: str
    specG: str
    x: float
    c: float = 0.5
    m: int = 2
    epsilon: float = 0.1
    seed: int | None = None
    out: str | None = None
    csv: str | None = None

    def __post_init__(self):
        if not 0 < self.c < 4:
            raise ValueError("config: c must lie in (0, 4)")
        if self.x < 100:
            raise ValueError("config: x must be >= 100")
        if self.m not in (1, 2):
            raise ValueError("config: m must be 1 or 2")

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        path = Path(path)
        try:
            obj = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, path) from exc
        try:
            cfg = cls(**obj)
        except TypeError as exc:
            raise ParseError(f"bad config: {exc}", path=path) from exc
        base = path.parent
        cfg.specF = str(base / cfg.specF)
        cfg.specG = str(base / cfg.specG)
        return cfg


def cmd_density(args):
    cfg = ExperimentConfig.load(args.config)
    seed = args.seed if args.seed is not None else cfg.seed
    spec_f = load_spec(cfg.specF, seed)
    spec_g = load_spec(cfg.specG, seed)
    # all constituents of F and G must be pairwise distinct
    excluded = spec_f.ramified | spec_g.ramified
    check_distinct(spec_f.sources + spec_g.sources, excluded, seed)
    out = args.out if args.out is not None else cfg.out
    extra = {"config": {"x": cfg.x, "c": cfg.c, "m": cfg.m, "epsilon": cfg.epsilon, "seed": seed,
                        "specF": spec_f.label, "specG": spec_g.label}}
    _experiment(spec_f, spec_g, cfg.x, cfg.c, cfg.m, cfg.epsilon, out, cfg.csv, args.deterministic, extra)


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="siegelsign", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="coset representatives of T(p) as JSON")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="check a decomposition JSON file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eigenvalue", help="T(p) eigenvalue from Satake parameters")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--satake", nargs=3, required=True, metavar=("A0", "A1", "A2"),
                   help="'a/b' rationals or complex literals like 0.6+0.8j")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eigenvalue)

    p = sub.add_parser("lfactor", help="spin Euler factor and its Dirichlet coefficients")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--satake", nargs=3, metavar=("A0", "A1", "A2"))
    g.add_argument("--roots", nargs="+")
    p.add_argument("--prime", type=int)
    p.add_argument("--rmax", type=int, default=4)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lfactor)

    p = sub.add_parser("delta", help="q-expansion of the discriminant form")
    p.add_argument("--nterms", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("newform", help="newform file tools")
    nsub = p.add_subparsers(dest="action", required=True)
    q = nsub.add_parser("check", help="parse a file and report Ramanujan violations")
    q.add_argument("file")
    q.add_argument("--format", choices=["csv", "qexp_text"])
    q.add_argument("--out")
    q.set_defaults(func=cmd_newform_check)

    p = sub.add_parser("stream", help="dump lambda(p) for an eigenform spec as CSV")
    p.add_argument("--spec", required=True)
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stream)

    p = sub.add_parser("sums", help="prime sums and sign-change report for two specs")
    p.add_argument("--pair", required=True, help="specF.json,specG.json")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--m", type=int, default=2, choices=[1, 2])
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--seed", type=int)
    p.add_argument("--csv", help="per-prime dump")
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sums)

    p = sub.add_parser("density", help="run a sign-change experiment from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_density)
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"siegelsign: error: {exc}", file=sys.stderr)
        return 2
    except (SiegelSignError, ValueError, OSError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
