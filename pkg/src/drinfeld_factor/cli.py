"""Command-line front end.

Results go to stdout as JSON (or key=value text for experiments with
``--format text``); diagnostics go to stderr. Exit status is 0 on success,
1 on bad input and 2 when a randomized routine runs out of attempts.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import secrets
import sys
import time
from collections import Counter

from .drinfeld import (
    DrinfeldContext,
    DrinfeldModule,
    EvenCharacteristicError,
    FactorFound,
    chi,
    new_random,
    order_of,
    random_element,
)
from .experiments import (
    cyclicity_rate,
    interval_census,
    split_balance,
    success_rate_alg1,
    trace_census,
)
from .factor import (
    ALGORITHMS,
    BudgetExhausted,
    carlitz_estimate,
    classical_factor,
    estimate_smallest_degree,
    factor,
)
from .field import FieldSpec, gf
from .poly import Poly, Residue, is_irreducible, is_squarefree, random_squarefree_with_known_factors

__all__ = ["PolySyntaxError", "parse_field", "parse_poly", "parse_element", "build_parser", "run", "main"]


class PolySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def parse_field(q: str, modulus: str | None = None) -> FieldSpec:
    """'P' or 'P^K', with an optional comma-separated monic modulus c0,...,cK."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:\^\s*(\d+))?\s*", q)
    if not m:
        raise ValueError(f"field must look like P or P^K, got {q!r}")
    p, k = int(m.group(1)), int(m.group(2) or 1)
    mod = None
    if modulus is not None:
        if k == 1:
            raise ValueError("--modulus only applies to extension fields")
        mod = [int(c) for c in modulus.split(",")]
    return gf(p, k, mod)


_TOKEN = re.compile(r"\s*(?:(\d+)|([tu])|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only whitespace left
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("var", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise PolySyntaxError(f"unexpected character {ch!r}", m.start(3))
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, F: FieldSpec):
        self.F = F
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise PolySyntaxError(f"expected {op!r}", pos)

    def parse(self) -> Poly:
        out = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise PolySyntaxError("unexpected trailing input", pos)
        return out

    def expr(self) -> Poly:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        out = self.term()
        if sign < 0:
            out = -out
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                out = out + rhs if val == "+" else out - rhs
            else:
                return out

    def term(self) -> Poly:
        out = self.power()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            out = out * self.power()
        return out

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise PolySyntaxError("exponent must be a nonnegative integer", pos)
            return base**val
        return base

    def atom(self) -> Poly:
        F = self.F
        kind, val, pos = self.take()
        if kind == "int":
            if val >= F.p:
                raise PolySyntaxError(f"coefficient {val} is not reduced mod {F.p}", pos)
            return Poly.const(F, val)
        if kind == "var":
            if val == "t":
                return Poly.t(F)
            if F.is_prime:
                raise PolySyntaxError("'u' only exists in extension fields", pos)
            return Poly.const(F, F.from_vector([0, 1]))
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise PolySyntaxError("expected a number, t, u or '('", pos)


def parse_element(text: str, F: FieldSpec) -> int:
    p = _Parser(text, F).parse()
    if p.degree > 0:
        raise ValueError(f"{text!r} is not a field element")
    return p.coeffs[0] if p.coeffs else 0


def parse_poly(text: str, F: FieldSpec) -> Poly:
    """Parse 't^3+2*t+1', '(1+2*u)*t+u' or the coefficient list '1,2,0,1'
    (lowest degree first)."""
    if "," in text:
        return Poly(F, [parse_element(part, F) for part in text.split(",")])
    if not text.strip():
        raise PolySyntaxError("empty polynomial", 0)
    return _Parser(text, F).parse()


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _field_json(F: FieldSpec) -> dict:
    out = {"p": F.p, "k": F.k}
    if F.modulus is not None:
        out["modulus"] = list(F.modulus)
    return out


def _emit(args, payload) -> None:
    if isinstance(payload, str):
        text = payload
    else:
        text = json.dumps(payload, indent=2, sort_keys=False)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _read_poly(args, F: FieldSpec) -> tuple[str, Poly]:
    text = sys.stdin.read().strip() if args.poly == "-" else args.poly
    h = parse_poly(text, F)
    if h.degree < 1:
        raise ValueError("input polynomial must have degree >= 1")
    return text, h


def _module_json(phi: DrinfeldModule) -> dict:
    if phi.rank == 1:
        return {"rank": 1, "name": "carlitz"}
    return {"rank": 2, "g": str(phi.g), "delta": str(phi.delta)}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_factor(args, F, rng):
    text, h = _read_poly(args, F)
    stats: Counter = Counter()
    result = factor(h, args.algo, rng, stats)
    if result.expand() != h:
        raise AssertionError("factorization does not reconstruct the input")
    stats_out = dict(sorted(stats.items()))
    stats_out["unit"] = F.format(result.unit)
    return {
        "field": _field_json(F),
        "input": text,
        "algo": args.algo,
        "seed": args.seed,
        "factors": [{"poly": str(f), "multiplicity": m} for f, m in result],
        "stats": stats_out,
    }


def _module_from_args(args, F, ctx, rng) -> DrinfeldModule:
    if args.algo == "carlitz":
        return DrinfeldModule.carlitz(F)
    if args.g is not None or args.delta is not None:
        g = parse_poly(args.g or "0", F)
        delta = parse_poly(args.delta or "1", F)
        return DrinfeldModule(g, delta, 2)
    return new_random(ctx, rng)


def cmd_chi(args, F, rng):
    text, h = _read_poly(args, F)
    out = {"field": _field_json(F), "input": text, "algo": args.algo, "seed": args.seed}
    h = h.monic()
    ctx = DrinfeldContext(h)
    try:
        phi = _module_from_args(args, F, ctx, rng)
    except FactorFound as exc:
        out["found_factor"] = str(exc.factor)
        return out
    out["module"] = _module_json(phi)
    out["chi"] = str(chi(ctx, phi))
    return out


def cmd_order(args, F, rng):
    text, h = _read_poly(args, F)
    out = {"field": _field_json(F), "input": text, "algo": args.algo, "seed": args.seed}
    h = h.monic()
    ctx = DrinfeldContext(h)
    try:
        phi = _module_from_args(args, F, ctx, rng)
    except FactorFound as exc:
        out["found_factor"] = str(exc.factor)
        return out
    alpha = Residue(h, parse_poly(args.alpha, F)) if args.alpha else random_element(ctx, rng)
    out["module"] = _module_json(phi)
    out["alpha"] = str(alpha.value)
    out["trials"] = args.trials
    out["order"] = str(order_of(ctx, phi, alpha, trials=args.trials, rng=rng))
    return out


def cmd_estimate(args, F, rng):
    text, h = _read_poly(args, F)
    h = h.monic()
    if not is_squarefree(h):
        raise ValueError("degree estimation needs a squarefree polynomial")
    out = {"field": _field_json(F), "input": text, "estimator": args.estimator, "seed": args.seed}
    if args.estimator == "carlitz":
        out["smallest_degree_estimate"] = carlitz_estimate(h)
        return out
    stats: Counter = Counter()
    try:
        est = estimate_smallest_degree(h, rng, args.estimator, stats)
    except FactorFound as exc:
        out["found_factor"] = str(exc.factor)
        return out
    out.update({"half_degree": est.half_degree, "smallest_degree": est.resolved, "attempts": est.attempts})
    return out


def cmd_experiment(args, F, rng):
    kind = args.kind
    seed = args.seed
    if kind == "interval-census":
        f = parse_poly(args.poly, F)
        rep = interval_census(f, args.m, args.mode, args.samples, seed)
    elif kind == "success-rate":
        h = parse_poly(args.poly, F)
        s_h = min(fac.degree for fac, _ in classical_factor(h))
        rep = success_rate_alg1(h.monic(), s_h, args.trials, seed, args.threads)
    elif kind == "cyclicity":
        p = parse_poly(args.poly, F).monic()
        if not is_irreducible(p):
            raise ValueError("cyclicity census needs an irreducible polynomial")
        rep = cyclicity_rate(p, args.trials, seed, args.threads)
    elif kind == "split-balance":
        h = parse_poly(args.poly, F).monic()
        primes = [f for f, _ in classical_factor(h)]
        rep = split_balance(h, primes, args.trials, seed)
    elif kind == "trace-census":
        p = parse_poly(args.poly, F).monic()
        if not is_irreducible(p):
            raise ValueError("trace census needs an irreducible polynomial")
        rep = trace_census(p, args.trials, seed, exhaustive=args.exhaustive)
    else:
        raise ValueError(f"unknown experiment {kind!r}")
    if args.format == "text":
        return rep.to_text()
    return rep.to_dict()


def cmd_bench(args, F, rng):
    algos = args.algos.split(",")
    for a in algos:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}")
    rows = []
    for deg in (int(x) for x in args.degrees.split(",")):
        for i in range(args.count):
            profile = _random_profile(deg, rng)
            h, known = random_squarefree_with_known_factors(F, profile, rng)
            row = {"degree": deg, "profile": sorted(profile), "input": str(h), "results": {}}
            for a in algos:
                stats: Counter = Counter()
                start = time.perf_counter()
                got = factor(h, a, random.Random(f"{args.seed}:{deg}:{i}:{a}"), stats)
                elapsed = time.perf_counter() - start
                print(f"bench degree={deg} case={i} algo={a} seconds={elapsed:.4f}", file=sys.stderr)
                entry = {"correct": got == known, "stats": dict(sorted(stats.items()))}
                if args.timings:
                    entry["seconds"] = round(elapsed, 6)
                row["results"][a] = entry
            rows.append(row)
    return {"field": _field_json(F), "seed": args.seed, "algos": algos, "cases": rows}


def _random_profile(n: int, rng: random.Random) -> list:
    """Random composition of n into factor degrees."""
    parts = []
    rest = n
    while rest:
        d = rng.randint(1, rest)
        parts.append(d)
        rest -= d
    return parts


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", required=True, help="field size: P or P^K")
    common.add_argument("--modulus", help="extension modulus c0,...,cK (monic, low degree first)")
    common.add_argument("--seed", help="random seed (echoed in the output; default: fresh entropy)")
    common.add_argument("--out", help="write the result to this file instead of stdout")
    common.add_argument("--threads", type=int, default=1, help="worker threads for experiment trials")

    parser = argparse.ArgumentParser(prog="drinfeld-factor",
                                     description="Factor polynomials over finite fields with Drinfeld modules.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factor", parents=[common], help="complete factorization")
    p.add_argument("poly", help="polynomial, or - to read stdin")
    p.add_argument("--algo", default="hybrid", choices=ALGORITHMS)
    p.set_defaults(func=cmd_factor)

    for name, func, help_text in (("chi", cmd_chi, "characteristic of phi(F_h)"),
                                  ("order", cmd_order, "order of an element of phi(F_h)")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("poly")
        p.add_argument("--algo", default="random", choices=("random", "carlitz"),
                       help="module: random rank 2 (or given by --g/--delta) or Carlitz")
        p.add_argument("--g", help="rank-2 coefficient g")
        p.add_argument("--delta", help="rank-2 coefficient delta")
        if name == "order":
            p.add_argument("--alpha", help="element of F_q[t]/(h); random nonzero if omitted")
            p.add_argument("--trials", type=int, default=20)
        p.set_defaults(func=func)

    p = sub.add_parser("estimate-degree", parents=[common], help="smallest factor degree")
    p.add_argument("poly")
    p.add_argument("--estimator", default="order", choices=("chi", "order", "carlitz"))
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("experiment", parents=[common], help="run an empirical census")
    p.add_argument("kind", choices=("success-rate", "cyclicity", "split-balance", "interval-census", "trace-census"))
    p.add_argument("poly", help="h, p or f depending on the experiment")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--m", type=int, default=2, help="interval census: deg a <= m")
    p.add_argument("--mode", default="sample", choices=("exhaustive", "sample"))
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--exhaustive", action="store_true", help="trace census over all modules")
    p.add_argument("--format", default="json", choices=("json", "text"))
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("bench", parents=[common], help="compare algorithms on random inputs")
    p.add_argument("--degrees", default="8,16")
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--algos", default=",".join(ALGORITHMS))
    p.add_argument("--timings", action="store_true", help="include wall-clock times (not reproducible)")
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for budget exhaustion
        return 0 if exc.code in (0, None) else 1
    if args.seed is None:
        args.seed = secrets.token_hex(8)
    try:
        F = parse_field(args.q, args.modulus)
        if args.modulus is None and F.k > 1:
            print(f"using modulus {','.join(map(str, F.modulus))}", file=sys.stderr)
        rng = random.Random(args.seed)
        payload = args.func(args, F, rng)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EvenCharacteristicError as exc:
        print(f"error: {exc} (the Drinfeld-module methods assume odd characteristic; use --algo classical)",
              file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(args, payload)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
