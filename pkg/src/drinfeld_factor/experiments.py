"""Empirical checks of the probabilistic and structural claims.

Every census takes a seed and derives one random stream per trial from
(seed, trial index), so results are reproducible and independent of how
trials are scheduled.
"""

from __future__ import annotations

import json
import math
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .drinfeld import (
    DrinfeldContext,
    DrinfeldModule,
    FactorFound,
    InconsistencyError,
    module_structure,
    require_odd,
    trace_data,
)
from .factor import (
    classical_factor,
    distinct_degree_factor,
    drinfeld_berlekamp_split,
    estimate_half_degree_chi,
)
from .poly import Poly, is_squarefree, powmod, random_poly

__all__ = [
    "CycleType",
    "CensusReport",
    "partitions",
    "cycle_type_probability",
    "cycle_type_of",
    "interval_census",
    "success_rate_alg1",
    "cyclicity_rate",
    "split_balance",
    "trace_census",
    "trial_rng",
]


def trial_rng(seed, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


def _map_trials(fn, count: int, threads: int = 1) -> list:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, range(count)))
    return [fn(i) for i in range(count)]


@dataclass(frozen=True, order=True)
class CycleType:
    """A partition of d, parts in non-increasing order."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(sorted((int(x) for x in self.parts), reverse=True))
        if not parts or any(x < 1 for x in parts):
            raise ValueError("a cycle type is a nonempty tuple of positive integers")
        object.__setattr__(self, "parts", parts)

    @property
    def degree(self) -> int:
        return sum(self.parts)

    def multiplicities(self) -> Counter:
        return Counter(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def partitions(d: int):
    """All partitions of d as CycleTypes, largest parts first."""
    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for part in range(min(rest, cap), 0, -1):
            for tail in rec(rest - part, part):
                yield (part,) + tail
    for parts in rec(d, d):
        yield CycleType(parts)


def cycle_type_probability(lam: CycleType) -> Fraction:
    """Fraction of permutations of S_d with cycle type lam."""
    denom = 1
    for j, m in lam.multiplicities().items():
        denom *= j**m * math.factorial(m)
    return Fraction(1, denom)


def cycle_type_of(g: Poly) -> CycleType:
    """Degrees of the irreducible factors of g, counted with multiplicity."""
    if is_squarefree(g):
        parts = []
        for d, piece in distinct_degree_factor(g.monic())[0]:
            parts.extend([d] * (piece.degree // d))
        return CycleType(tuple(parts))
    return CycleType(tuple(classical_factor(g).degrees))


@dataclass
class CensusReport:
    """Outcome of one experiment: parameters, summary metrics and an optional
    per-row table. ``in_regime`` says whether the parameters satisfy the
    hypotheses of the bound being probed; otherwise the run is exploratory."""

    name: str
    params: dict
    in_regime: bool
    metrics: dict = field(default_factory=dict)
    table: list = field(default_factory=list)

    @property
    def regime(self) -> str:
        return "in-regime" if self.in_regime else "exploratory"

    def to_dict(self) -> dict:
        return {
            "experiment": self.name,
            "params": self.params,
            "regime": self.regime,
            "metrics": self.metrics,
            "table": self.table,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"experiment={self.name}", f"regime={self.regime}"]
        lines += [f"param.{k}={_fmt(v)}" for k, v in sorted(self.params.items())]
        lines += [f"{k}={_fmt(v)}" for k, v in sorted(self.metrics.items())]
        for i, row in enumerate(self.table):
            lines.append(f"row.{i}=" + " ".join(f"{k}:{_fmt(v)}" for k, v in row.items()))
        return "\n".join(lines)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _bernoulli(successes: int, total: int) -> tuple[float, float]:
    if total == 0:
        return float("nan"), float("nan")
    r = successes / total
    return r, math.sqrt(r * (1 - r) / total)


# ---------------------------------------------------------------------------
# factorization patterns in short intervals
# ---------------------------------------------------------------------------

EXHAUSTIVE_BUDGET = 2_000_000


def interval_census(f: Poly, m: int, mode: str = "exhaustive", samples: int = 10_000,
                    seed=0, budget: int = EXHAUSTIVE_BUDGET) -> CensusReport:
    """Cycle-type frequencies over {f + a : deg a <= m} against P(lambda)."""
    F = f.field
    d = f.degree
    if not f.is_monic() or not (d > m >= 2):
        raise ValueError("need f monic with deg f > m >= 2")
    size = F.q ** (m + 1)
    base = list(f.coeffs)

    def member(digits):
        coeffs = list(base)
        for i, a in enumerate(digits):
            coeffs[i] = F.add(coeffs[i], a)
        return Poly._raw(F, coeffs)

    counts: Counter = Counter()
    if mode == "exhaustive":
        if size > budget:
            raise ValueError(f"exhaustive census needs {size} factorizations, budget is {budget}")
        for digits in product(range(F.q), repeat=m + 1):
            counts[cycle_type_of(member(digits))] += 1
        total = size
    elif mode == "sample":
        rng = random.Random(f"{seed}:interval")
        for _ in range(samples):
            g = member([F.random(rng) for _ in range(m + 1)])
            if g.degree != d or not g.is_monic():
                raise InconsistencyError("interval member lost its leading term")
            counts[cycle_type_of(g)] += 1
        total = samples
    else:
        raise ValueError(f"unknown mode {mode!r}")

    table = []
    max_abs = max_rel = 0.0
    for lam in partitions(d):
        prob = cycle_type_probability(lam)
        freq = counts.get(lam, 0) / total
        dev = abs(freq - float(prob))
        rel = dev / float(prob)
        max_abs, max_rel = max(max_abs, dev), max(max_rel, rel)
        table.append({"cycle_type": str(lam), "count": counts.get(lam, 0), "frequency": freq,
                      "probability": str(prob), "abs_dev": dev, "rel_dev": rel})
    in_regime = math.log(F.q) >= 3 * d * math.log(d) if d > 1 else True
    metrics = {
        "total": total,
        "interval_size": size,
        "max_abs_dev": max_abs,
        "max_rel_dev": max_rel,
        "band_rel": 1 / math.sqrt(F.q),
    }
    params = {"q": F.q, "f": str(f), "m": m, "mode": mode, "seed": str(seed)}
    if mode == "sample":
        params["samples"] = samples
    return CensusReport("interval-census", params, in_regime, metrics, table)


# ---------------------------------------------------------------------------
# degree estimation success rate
# ---------------------------------------------------------------------------

def success_rate_alg1(h: Poly, s_h: int, trials: int, seed=0, threads: int = 1) -> CensusReport:
    """Fraction of fresh modules for which the chi estimator returns
    exactly ceil(s_h/2). An output below that value is a hard error."""
    F = h.field
    require_odd(F)
    target = -(-s_h // 2)
    ctx = DrinfeldContext(h)

    def run(i):
        rng = trial_rng(seed, i)
        try:
            value = estimate_half_degree_chi(h, rng, ctx)
        except FactorFound:
            return "found"
        if value is None:
            return "retry"
        if value < target:
            raise InconsistencyError(f"estimate {value} below ceil(s_h/2) = {target} for {h}")
        return "success" if value == target else "over"

    outcomes = Counter(_map_trials(run, trials, threads))
    rate, se = _bernoulli(outcomes["success"], trials)
    lower = 0.25 - 3 * math.sqrt(0.25 * 0.75 / trials)
    metrics = {
        "trials": trials,
        "success": outcomes["success"],
        "overestimate": outcomes["over"],
        "retry": outcomes["retry"],
        "found_factor": outcomes["found"],
        "rate": rate,
        "stderr": se,
        "bound": 0.25,
        "lower_band": lower,
        "meets_band": rate >= lower,
    }
    params = {"q": F.q, "h": str(h), "s_h": s_h, "target": target, "seed": str(seed)}
    return CensusReport("success-rate", params, F.q >= 4 * h.degree**2, metrics)


# ---------------------------------------------------------------------------
# cyclicity of reductions at a prime
# ---------------------------------------------------------------------------

def _random_reduction(p: Poly, rng: random.Random) -> DrinfeldModule:
    F = p.field
    g = random_poly(F, p.degree, rng)
    while True:
        delta = random_poly(F, p.degree, rng)
        if delta.coeffs:
            return DrinfeldModule(g, delta, 2)


def cyclicity_rate(p: Poly, trials: int, seed=0, threads: int = 1) -> CensusReport:
    """Fraction of modules mod p (g uniform, delta uniform nonzero) whose
    group of points is A-cyclic, and agreement with the trace criterion."""
    F = p.field
    require_odd(F)
    d = p.degree

    def run(i):
        phi = _random_reduction(p, trial_rng(seed, i))
        ms = module_structure(p, phi)
        return ms.cyclic, ms.trace_m.is_one()

    results = _map_trials(run, trials, threads)
    cyclic = sum(1 for c, _ in results if c)
    disagree = sum(1 for c, t in results if c != t)
    rate, se = _bernoulli(cyclic, trials)
    bound = 1 - (d + 0.5) / (2 * (F.q - 1))
    sigma = math.sqrt(max(bound * (1 - bound), 0.0) / trials)
    metrics = {
        "trials": trials,
        "cyclic": cyclic,
        "rate": rate,
        "stderr": se,
        "bound": bound,
        "lower_band": bound - 3 * sigma,
        "meets_band": rate >= bound - 3 * sigma,
        "criterion_disagreements": disagree,
    }
    params = {"q": F.q, "p": str(p), "deg_p": d, "seed": str(seed)}
    return CensusReport("cyclicity", params, True, metrics)


# ---------------------------------------------------------------------------
# balance of the Berlekamp-style splitter
# ---------------------------------------------------------------------------

def split_balance(h: Poly, primes, trials: int, seed=0, max_attempts: int | None = None) -> CensusReport:
    """For each known prime of h, the fraction of productive splitter trials
    in which it lands in the returned gcd. Stops after ``trials`` productive
    trials or ``max_attempts`` attempts."""
    F = h.field
    require_odd(F)
    primes = [p.monic() for p in primes]
    max_attempts = max_attempts or 50 * trials
    ctx = DrinfeldContext(h)
    hits = Counter()
    productive = retries = found = attempts = 0
    while productive < trials and attempts < max_attempts:
        rng = trial_rng(seed, attempts)
        attempts += 1
        try:
            res = drinfeld_berlekamp_split(h, rng, ctx)
        except FactorFound as exc:
            found += 1
            res = (exc.factor, h.exact_div(exc.factor))
        if res is None:
            retries += 1
            continue
        productive += 1
        for j, p in enumerate(primes):
            if p.divides(res[0]):
                hits[j] += 1
    table = []
    for j, p in enumerate(primes):
        rate = hits[j] / productive if productive else float("nan")
        table.append({"prime": str(p), "divides": hits[j], "rate": rate})
    n = h.degree
    metrics = {
        "productive_trials": productive,
        "attempts": attempts,
        "retries": retries,
        "found_factor": found,
        "retry_fraction": retries / attempts if attempts else float("nan"),
        "completed": productive >= trials,
    }
    params = {"q": F.q, "h": str(h), "trials": trials, "seed": str(seed)}
    in_regime = math.log(F.q) >= 5 * n * math.log(n)
    return CensusReport("split-balance", params, in_regime, metrics, table)


# ---------------------------------------------------------------------------
# distribution of Frobenius traces
# ---------------------------------------------------------------------------

def trace_census(p: Poly, trials: int = 1000, seed=0, exhaustive: bool = False) -> CensusReport:
    """Joint distribution of (a, eps) over modules mod p."""
    F = p.field
    require_odd(F)
    d = p.degree
    ctx = DrinfeldContext(p)
    norm_exp = (F.q**d - 1) // (F.q - 1)

    if exhaustive:
        elems = [Poly(F, c) for c in _all_residues(F, d)]
        modules = [DrinfeldModule(g, delta, 2) for g in elems for delta in elems if delta.coeffs]
    else:
        modules = [_random_reduction(p, trial_rng(seed, i)) for i in range(trials)]

    cells: Counter = Counter()
    full_degree = 0
    for phi in modules:
        td = trace_data(p, phi, ctx)
        if td.a.degree > d // 2:
            raise InconsistencyError(f"deg a too large at {p}")
        nrm = powmod(phi.delta, norm_exp, p)
        if nrm.degree != 0:
            raise InconsistencyError("norm of delta is not a constant")
        sign = F.neg(1) if d % 2 else 1
        if F.mul(td.eps, F.mul(sign, nrm.coeffs[0])) != 1:
            raise InconsistencyError("eps disagrees with the norm of delta")
        cells[(td.a.coeffs, td.eps)] += 1
        if td.discriminant.degree == d:
            full_degree += 1
    total = len(modules)
    freqs = sorted(cells.values())
    table = [{"a": str(Poly._raw(F, a)), "eps": F.format(e), "count": c}
             for (a, e), c in sorted(cells.items(), key=lambda kv: (len(kv[0][0]), kv[0]))]
    metrics = {
        "modules": total,
        "cells": len(cells),
        "min_cell": freqs[0] / total,
        "max_cell": freqs[-1] / total,
        "full_degree_fraction": full_degree / total,
    }
    params = {"q": F.q, "p": str(p), "exhaustive": exhaustive, "seed": str(seed)}
    if not exhaustive:
        params["trials"] = trials
    return CensusReport("trace-census", params, d <= 3, metrics, table)


def _all_residues(F, d):
    for digits in product(range(F.q), repeat=d):
        yield list(digits)
