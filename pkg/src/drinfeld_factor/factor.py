"""Polynomial factorization: classical baseline and Drinfeld-module methods.

Conventions for the randomized building blocks: a proper factor found by
accident is raised as :class:`FactorFound`; a trial that produced nothing
usable returns ``None`` and the caller draws again.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass

from .drinfeld import (
    DrinfeldContext,
    DrinfeldModule,
    FactorFound,
    chi,
    new_random,
    order_of,
    phi_a,
    random_element,
    require_odd,
)
from .field import Embedding, FieldSpec, gf, is_prime
from .poly import (
    Factorization,
    Poly,
    _frobenius_sequence,
    _gcd,
    _monic,
    _powmod,
    _sub,
    gcd,
    is_irreducible,
    powmod,
    random_poly,
    squarefree_decomposition,
)

__all__ = [
    "BudgetExhausted",
    "DegreeEstimate",
    "ALGORITHMS",
    "ESTIMATION_BUDGET",
    "SPLIT_BUDGET",
    "estimate_half_degree_chi",
    "estimate_half_degree_order",
    "estimate_smallest_degree",
    "resolve_smallest_degree",
    "extract_factors_of_degree",
    "equal_degree_split",
    "distinct_degree_factor",
    "drinfeld_berlekamp_split",
    "drinfeld_berlekamp_factor",
    "carlitz_estimate",
    "factor_squarefree_drinfeld",
    "classical_factor",
    "factor",
    "factor_via_extension",
    "extension_degree",
    "hybrid_threshold",
    "needs_extension",
]

ESTIMATION_BUDGET = 64
ESTIMATES_PER_ROUND = 8
RESOLUTION_ROUNDS = 8
SPLIT_BUDGET = 128
EDF_BUDGET = 256

ALGORITHMS = ("classical", "drinfeld-chi", "drinfeld-order", "drinfeld-berlekamp", "hybrid")


class BudgetExhausted(RuntimeError):
    """A randomized loop used up its attempt budget."""


@dataclass
class DegreeEstimate:
    half_degree: int
    resolved: int | None = None
    attempts: int = 0


def _check_squarefree_input(h: Poly, min_degree: int = 1):
    if not h.is_monic():
        raise ValueError("expected a monic polynomial")
    if h.degree < min_degree:
        raise ValueError(f"expected degree >= {min_degree}, got {h.degree}")


def _count(stats, key, by=1):
    if stats is not None:
        stats[key] += by


# ---------------------------------------------------------------------------
# degree estimation
# ---------------------------------------------------------------------------

def estimate_half_degree_chi(h: Poly, rng: random.Random, ctx: DrinfeldContext | None = None) -> int | None:
    """n - deg(h - chi) for a fresh random module; None when h == chi.

    The value is never below ceil(s_h / 2).
    """
    require_odd(h.field)
    _check_squarefree_input(h, 2)
    ctx = ctx or DrinfeldContext(h)
    phi = new_random(ctx, rng)
    diff = h - chi(ctx, phi)
    if diff.is_zero():
        return None
    return h.degree - diff.degree


def estimate_half_degree_order(h: Poly, rng: random.Random, ctx: DrinfeldContext | None = None,
                               trials: int = 20) -> int | None:
    """Like the chi estimator, with chi replaced by Ord(alpha) for a random
    nonzero alpha; None unless deg Ord(alpha) = deg h."""
    require_odd(h.field)
    _check_squarefree_input(h, 2)
    ctx = ctx or DrinfeldContext(h)
    phi = new_random(ctx, rng)
    alpha = random_element(ctx, rng)
    r = order_of(ctx, phi, alpha, trials=trials, rng=rng)
    if r.degree < h.degree:
        return None
    diff = h - r
    if diff.is_zero():
        return None
    return h.degree - diff.degree


_ESTIMATORS = {"chi": estimate_half_degree_chi, "order": estimate_half_degree_order}


def _min_estimate(h: Poly, rng: random.Random, estimator: str, ctx: DrinfeldContext, stats=None) -> tuple[int, int]:
    """Minimum over up to ESTIMATES_PER_ROUND numeric estimates.

    Returns (estimate, attempts). FactorFound propagates.
    """
    fn = _ESTIMATORS[estimator]
    best = None
    got = 0
    for attempt in range(1, ESTIMATION_BUDGET + 1):
        _count(stats, "estimator_calls")
        value = fn(h, rng, ctx)
        if value is None:
            continue
        got += 1
        best = value if best is None else min(best, value)
        if best == 1 or got >= ESTIMATES_PER_ROUND:
            return best, attempt
    if best is None:
        raise BudgetExhausted(f"no usable degree estimate in {ESTIMATION_BUDGET} attempts for {h}")
    return best, ESTIMATION_BUDGET


def resolve_smallest_degree(h: Poly, half_degree: int) -> int | None:
    """First s in (2*half_degree - 1, 2*half_degree) such that h has a
    factor of degree exactly s; None if neither qualifies.

    A candidate s counts when gcd(t^(q^s) - t, h) is nontrivial while
    gcd(t^(q^e) - t, h) = 1 for every proper divisor e of s.
    """
    if half_degree < 1:
        raise ValueError("half-degree estimate must be >= 1")
    _check_squarefree_input(h)
    F = h.field
    hl = list(h.coeffs)
    top = 2 * half_degree
    if top - 1 > h.degree:
        return None
    seq = _frobenius_sequence(F, hl, min(top, h.degree))
    hits = {}

    def nontrivial(e):
        if e not in hits:
            hits[e] = len(_gcd(F, hl, _sub(F, seq[e - 1], [0, 1]))) > 1
        return hits[e]

    for s in (top - 1, top):
        if s < 1 or s > h.degree:
            continue
        if nontrivial(s) and not any(nontrivial(e) for e in range(1, s) if s % e == 0):
            return s
    return None


def estimate_smallest_degree(h: Poly, rng: random.Random, estimator: str = "order", stats=None) -> DegreeEstimate:
    """Estimate ceil(s_h/2), then resolve it to s_h; re-estimates on an
    inconsistent resolution. FactorFound propagates."""
    require_odd(h.field)
    ctx = DrinfeldContext(h)
    attempts = 0
    for _ in range(RESOLUTION_ROUNDS):
        est, used = _min_estimate(h, rng, estimator, ctx, stats)
        attempts += used
        s = resolve_smallest_degree(h, est)
        if s is not None:
            return DegreeEstimate(est, s, attempts)
        _count(stats, "inconsistent_resolutions")
    raise BudgetExhausted(f"degree resolution failed {RESOLUTION_ROUNDS} times for {h}")


def carlitz_estimate(h: Poly) -> int | None:
    """n - deg(h - chi_C) with the Carlitz module: exactly s_h unless the
    characteristic divides the number of factors of minimal degree."""
    _check_squarefree_input(h, 1)
    ctx = DrinfeldContext(h)
    diff = h - chi(ctx, DrinfeldModule.carlitz(h.field))
    if diff.is_zero():
        return None
    return h.degree - diff.degree


# ---------------------------------------------------------------------------
# classical building blocks
# ---------------------------------------------------------------------------

def distinct_degree_factor(h: Poly, upto: int | None = None) -> tuple[list, Poly]:
    """[(d, product of the degree-d factors)] for d <= upto, and the rest.

    Without ``upto`` the sweep is complete and the rest is 1.
    """
    _check_squarefree_input(h, 0)
    F = h.field
    rest = list(h.coeffs)
    out = []
    x = [0, 1]
    d = 0
    while len(rest) > 1:
        d += 1
        if upto is not None and d > upto:
            break
        if 2 * d > len(rest) - 1:
            if upto is None or len(rest) - 1 <= upto:
                out.append((len(rest) - 1, Poly._raw(F, rest)))
                rest = [1]
            break
        x = _powmod(F, x, F.q, rest)
        g = _gcd(F, rest, _sub(F, x, [0, 1]))
        if len(g) > 1:
            out.append((d, Poly._raw(F, g)))
            rest = list((Poly._raw(F, rest).exact_div(Poly._raw(F, g))).coeffs)
            x = list((Poly._raw(F, x) % Poly._raw(F, rest)).coeffs) if len(rest) > 1 else []
    return out, Poly._raw(F, rest)


def _split_exponent_poly(r: Poly, g: Poly, s: int) -> Poly:
    F = g.field
    if F.p == 2:
        # additive trace r + r^2 + ... + r^(2^(k s - 1))
        acc, cur = r % g, r % g
        for _ in range(F.k * s - 1):
            cur = (cur * cur) % g
            acc = acc + cur
        return acc
    return powmod(r, (F.q**s - 1) // 2, g) - 1


def equal_degree_split(g: Poly, s: int, rng: random.Random) -> list:
    """Complete split of a product of distinct degree-s irreducibles."""
    if s < 1 or g.degree < 1 or g.degree % s:
        raise ValueError(f"degree {g.degree} is not a positive multiple of {s}")
    g = g.monic()
    done, todo = [], [g]
    rounds = 0
    while todo:
        piece = todo.pop()
        if piece.degree == s:
            done.append(piece)
            continue
        rounds += 1
        if rounds > EDF_BUDGET * max(1, g.degree // s):
            raise BudgetExhausted(f"equal-degree split of {g} did not finish")
        r = random_poly(g.field, piece.degree, rng)
        if r.degree < 1:
            todo.append(piece)
            continue
        d = gcd(piece, r)
        if d.is_one():
            d = gcd(piece, _split_exponent_poly(r, piece, s))
        if d.is_one() or d == piece:
            todo.append(piece)
        else:
            todo.extend([d, piece.exact_div(d)])
    return sorted(done, key=Poly.sort_key)


def extract_factors_of_degree(h: Poly, s: int, rng: random.Random) -> tuple[list, Poly]:
    """All irreducible factors of degree s, assuming no factor of h has a
    degree properly dividing s; returns (factors, cofactor)."""
    _check_squarefree_input(h)
    F = h.field
    x = _frobenius_sequence(F, list(h.coeffs), s)[-1]
    g = Poly._raw(F, _gcd(F, list(h.coeffs), _sub(F, x, [0, 1])))
    if g.is_one():
        raise ValueError(f"h has no factor of degree dividing {s}")
    if g.degree % s:
        raise ValueError(f"h has factors of degree properly dividing {s}")
    return equal_degree_split(g, s, rng), h.exact_div(g)


def _split_squarefree_classical(h: Poly, rng: random.Random) -> list:
    out = []
    pieces, _ = distinct_degree_factor(h)
    for d, g in pieces:
        out.extend(equal_degree_split(g, d, rng))
    return out


def classical_factor(h: Poly, rng: random.Random | None = None) -> Factorization:
    """Squarefree decomposition, distinct-degree sweep, equal-degree split."""
    rng = rng or random.Random(0)
    F = h.field
    if h.degree < 1:
        raise ValueError("cannot factor a constant")
    unit = h.lc
    factors = []
    for part, mult in squarefree_decomposition(h):
        factors.extend((f, mult) for f in _split_squarefree_classical(part, rng))
    return Factorization(F, factors, unit)


# ---------------------------------------------------------------------------
# Drinfeld-module factoring
# ---------------------------------------------------------------------------

def hybrid_threshold(n: int) -> int:
    """ceil(n^(2/3)), computed exactly."""
    k = max(1, round(n ** (2 / 3)))
    while k**3 < n * n:
        k += 1
    while k > 1 and (k - 1) ** 3 >= n * n:
        k -= 1
    return k


def factor_squarefree_drinfeld(h: Poly, rng: random.Random, estimator: str = "order",
                               phase1: bool = True, stats: Counter | None = None) -> Factorization:
    """Factor monic squarefree h by repeated smallest-degree extraction.

    With ``phase1`` the factors of degree up to ceil(n^(2/3)) are first
    removed by a classical distinct-degree sweep.
    """
    require_odd(h.field)
    _check_squarefree_input(h)
    if estimator not in _ESTIMATORS:
        raise ValueError(f"unknown estimator {estimator!r}")
    F = h.field
    found: list = []
    todo = [h]
    if phase1 and h.degree > 1:
        pieces, rest = distinct_degree_factor(h, upto=hybrid_threshold(h.degree))
        for d, g in pieces:
            found.extend(equal_degree_split(g, d, rng))
        _count(stats, "phase1_factors", len(found))
        todo = [rest]
    while todo:
        piece = todo.pop()
        if piece.degree < 1:
            continue
        if is_irreducible(piece):
            found.append(piece)
            continue
        try:
            est = estimate_smallest_degree(piece, rng, estimator, stats)
        except FactorFound as exc:
            _count(stats, "lucky_factors")
            todo.extend([exc.factor, piece.exact_div(exc.factor)])
            continue
        _count(stats, "extractions")
        facs, rest = extract_factors_of_degree(piece, est.resolved, rng)
        found.extend(facs)
        todo.append(rest)
    return Factorization(F, [(f, 1) for f in found])


def drinfeld_berlekamp_split(h: Poly, rng: random.Random, ctx: DrinfeldContext | None = None):
    """One splitting attempt: gcd(h, phi_{Ord(alpha)/f}(alpha)) with f the
    product of the linear factors of Ord(alpha). Returns (d, h/d) or None."""
    require_odd(h.field)
    _check_squarefree_input(h, 2)
    ctx = ctx or DrinfeldContext(h)
    phi = new_random(ctx, rng)
    alpha = random_element(ctx, rng)
    r = order_of(ctx, phi, alpha, rng=rng)
    if r.degree < 1:
        return None
    f = gcd(powmod(Poly.t(h.field), h.field.q, r) - Poly.t(h.field), r)
    if f.is_one() or f == r:
        return None
    beta = phi_a(ctx, phi, r.exact_div(f), alpha)
    if beta.is_zero():
        return None
    d = gcd(h, beta.lift())
    if d.is_one() or d == h:
        return None
    return d, h.exact_div(d)


def drinfeld_berlekamp_factor(h: Poly, rng: random.Random, budget: int = SPLIT_BUDGET,
                              stats: Counter | None = None) -> Factorization:
    """Recursive splitting with :func:`drinfeld_berlekamp_split`.

    Linear factors never separate in that splitter (their orders are always
    absorbed by f), so they are peeled off first with gcd(t^q - t, h).
    """
    require_odd(h.field)
    _check_squarefree_input(h)
    F = h.field
    found: list = []
    pieces, rest = distinct_degree_factor(h, upto=1)
    for d, g in pieces:
        found.extend(equal_degree_split(g, d, rng))
    todo = [(rest, 0)]
    max_depth = 0
    while todo:
        piece, depth = todo.pop()
        max_depth = max(max_depth, depth)
        if piece.degree < 1:
            continue
        if is_irreducible(piece):
            found.append(piece)
            continue
        ctx = DrinfeldContext(piece)
        for _ in range(budget):
            _count(stats, "split_attempts")
            try:
                res = drinfeld_berlekamp_split(piece, rng, ctx)
            except FactorFound as exc:
                _count(stats, "lucky_factors")
                res = (exc.factor, piece.exact_div(exc.factor))
            if res is not None:
                todo.extend((part, depth + 1) for part in res)
                break
        else:
            raise BudgetExhausted(f"splitter made no progress on {piece} in {budget} attempts")
    if stats is not None:
        stats["max_depth"] = max(stats.get("max_depth", 0), max_depth)
    return Factorization(F, [(f, 1) for f in found])


# ---------------------------------------------------------------------------
# extension lift
# ---------------------------------------------------------------------------

def needs_extension(F: FieldSpec, n: int) -> bool:
    """True when sqrt(q) < 2n."""
    return F.q < 4 * n * n


def extension_degree(q: int, n: int) -> int:
    """Smallest prime c with q^c >= (2n)^2."""
    c = 2
    while not (is_prime(c) and q**c >= 4 * n * n):
        c += 1
    return c


def _inner_factor(h: Poly, rng: random.Random, method: str, stats) -> Factorization:
    if method == "drinfeld-berlekamp":
        return drinfeld_berlekamp_factor(h, rng, stats=stats)
    if method == "drinfeld-chi":
        return factor_squarefree_drinfeld(h, rng, "chi", phase1=False, stats=stats)
    if method == "drinfeld-order":
        return factor_squarefree_drinfeld(h, rng, "order", phase1=False, stats=stats)
    if method == "hybrid":
        return factor_squarefree_drinfeld(h, rng, "order", phase1=True, stats=stats)
    raise ValueError(f"unknown algorithm {method!r}")


def factor_via_extension(h: Poly, rng: random.Random, method: str = "hybrid",
                         stats: Counter | None = None) -> Factorization:
    """Factor over F_{q^c} (c the smallest prime with q^c >= (2n)^2) and
    bring the factors back down to F_q."""
    F = h.field
    require_odd(F)
    _check_squarefree_input(h)
    n = h.degree
    c = extension_degree(F.q, n)
    big = gf(F.p, F.k * c)
    emb = Embedding(F, big)
    lifted = Poly._raw(big, [emb.up(x) for x in h.coeffs])
    over_big = _inner_factor(lifted, rng, method, stats)
    out: list = []
    groups: dict = {}
    for f, _ in over_big:
        if all(emb.contains(x) for x in f.coeffs):
            out.append(Poly._raw(F, [emb.down(x) for x in f.coeffs]))
        else:
            groups.setdefault(f.degree, Poly.one(big))
            groups[f.degree] = groups[f.degree] * f
    for e, prod in sorted(groups.items()):
        down = Poly._raw(F, [emb.down(x) for x in prod.coeffs])
        out.extend(equal_degree_split(down, e * c, rng))
    _count(stats, "extension_degree", c)
    return Factorization(F, [(f, 1) for f in out])


# ---------------------------------------------------------------------------
# dispatcher
# ---------------------------------------------------------------------------

def factor(h: Poly, algo: str = "hybrid", rng: random.Random | None = None,
           stats: Counter | None = None) -> Factorization:
    """Complete factorization with the selected algorithm.

    Drinfeld selectors are applied to each squarefree part; parts over too
    small a field go through :func:`factor_via_extension`.
    """
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}")
    if h.degree < 1:
        raise ValueError("cannot factor a constant")
    rng = rng or random.Random()
    if algo == "classical":
        return classical_factor(h, rng)
    F = h.field
    require_odd(F)
    factors = []
    for part, mult in squarefree_decomposition(h):
        if part.degree == 1:
            sub = [part]
        elif needs_extension(F, part.degree):
            _count(stats, "extension_lifts")
            sub = [f for f, _ in factor_via_extension(part, rng, algo, stats)]
        else:
            sub = [f for f, _ in _inner_factor(part, rng, algo, stats)]
        factors.extend((f, mult) for f in sub)
    return Factorization(F, factors, h.lc)
