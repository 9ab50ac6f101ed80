"""Rank-2 (and Carlitz) Drinfeld modules reduced modulo a squarefree h.

The module structure on F_h = F_q[t]/(h) is given by
phi_t(beta) = t*beta + g*tau(beta) + delta*tau^2(beta) with tau the q-th
power map, which on F_h is composition with t^q mod h.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .field import FieldSpec
from .linalg import Matrix, berlekamp_massey, charpoly, krylov_order, matvec, random_functional
from .poly import (
    Poly,
    Residue,
    _add,
    _apply_table,
    _mulmod,
    _power_table,
    _powmod,
    _rem,
    _strip,
    gcd,
    largest_square_divisor,
    lcm,
    random_poly,
)

__all__ = [
    "EvenCharacteristicError",
    "FactorFound",
    "InconsistencyError",
    "DrinfeldModule",
    "DrinfeldContext",
    "TraceData",
    "ModuleStructure",
    "require_odd",
    "new_random",
    "random_element",
    "phi_t",
    "phi_a",
    "action_matrix",
    "chi",
    "order_of",
    "annihilator",
    "trace_data",
    "module_structure",
    "norm_to_base",
    "exact_order",
    "trace_structure_m",
    "frobenius_identity_defect",
    "DEFAULT_ORDER_TRIALS",
]

DEFAULT_ORDER_TRIALS = 20


class EvenCharacteristicError(ValueError):
    """Drinfeld-module algorithms here assume odd q."""


class InconsistencyError(AssertionError):
    """An identity that must hold for reductions of Drinfeld modules failed."""


class FactorFound(Exception):
    """A nontrivial factor of the modulus turned up as a side effect."""

    def __init__(self, factor: Poly):
        super().__init__(f"found factor {factor}")
        self.factor = factor


def require_odd(F: FieldSpec):
    if F.p == 2:
        raise EvenCharacteristicError(
            f"Drinfeld-module algorithms require odd characteristic; got q = {F.q}"
        )


@dataclass(frozen=True)
class DrinfeldModule:
    """phi_t = t + g*tau + delta*tau^2 (rank 2) or t + tau (Carlitz).

    ``g`` and ``delta`` are polynomials in A = F_q[t]; they are reduced
    modulo whatever h the module is evaluated at.
    """

    g: Poly
    delta: Poly
    rank: int = 2

    def __post_init__(self):
        if self.rank == 1:
            if not (self.g.is_one() and self.delta.is_zero()):
                raise ValueError("rank 1 is reserved for the Carlitz module (g = 1, delta = 0)")
        elif self.rank == 2:
            if self.delta.is_zero():
                raise ValueError("rank 2 needs a nonzero delta")
        else:
            raise ValueError("rank must be 1 or 2")

    @classmethod
    def carlitz(cls, F: FieldSpec) -> "DrinfeldModule":
        return cls(Poly.one(F), Poly.zero(F), rank=1)

    @property
    def field(self) -> FieldSpec:
        return self.g.field

    def reduce(self, h: Poly) -> "DrinfeldModule":
        if self.rank == 1:
            return self
        return DrinfeldModule(self.g % h, self.delta % h, 2)


class DrinfeldContext:
    """Precomputed Frobenius data for F_h: t^q and t^(q^2) mod h and their
    power tables, so that tau and tau^2 cost one matrix-vector product."""

    def __init__(self, h: Poly):
        if not h.is_monic() or h.degree < 1:
            raise ValueError("modulus must be monic of degree >= 1")
        self.h = h
        self.field = F = h.field
        self.n = n = h.degree
        hl = list(h.coeffs)
        self._h = hl
        xq = _powmod(F, [0, 1], F.q, hl)
        self.tau_table = _power_table(F, xq, hl)
        xq2 = _apply_table(F, xq, self.tau_table)
        self.tau2_table = _power_table(F, xq2, hl)
        self.xq = Poly._raw(F, xq)
        self.xq2 = Poly._raw(F, xq2)
        self._matrices: dict = {}

    def __repr__(self):
        return f"DrinfeldContext(h={self.h})"

    def residue(self, value) -> Residue:
        if isinstance(value, Residue):
            if value.modulus != self.h:
                raise ValueError("residue lives modulo a different polynomial")
            return value
        return Residue(self.h, value)

    def vector(self, beta) -> list:
        coeffs = list(self.residue(beta).value.coeffs)
        return coeffs + [0] * (self.n - len(coeffs))

    def from_vector(self, vec) -> Residue:
        return Residue.from_vector(self.h, vec)

    def tau(self, vec: list) -> list:
        return _apply_table(self.field, _strip(list(vec)), self.tau_table)

    def tau2(self, vec: list) -> list:
        return _apply_table(self.field, _strip(list(vec)), self.tau2_table)


def _pad(vec: list, n: int) -> list:
    return vec + [0] * (n - len(vec))


def _phi_t_raw(ctx: DrinfeldContext, phi: DrinfeldModule, vec: list) -> list:
    F, hl = ctx.field, ctx._h
    beta = _strip(list(vec))
    if not beta:
        return [0] * ctx.n
    out = _rem(F, [0] + beta, hl)
    tb = ctx.tau(beta)
    if phi.rank == 1:
        return _pad(_add(F, out, tb), ctx.n)
    g = list((phi.g % ctx.h).coeffs)
    d = list((phi.delta % ctx.h).coeffs)
    out = _add(F, out, _mulmod(F, g, tb, hl))
    out = _add(F, out, _mulmod(F, d, ctx.tau2(beta), hl))
    return _pad(out, ctx.n)


def action_matrix(ctx: DrinfeldContext, phi: DrinfeldModule) -> Matrix:
    """Matrix of phi_t on the monomial basis 1, t, ..., t^(n-1) of F_h."""
    key = (phi.g.coeffs, phi.delta.coeffs, phi.rank)
    M = ctx._matrices.get(key)
    if M is None:
        n = ctx.n
        cols = [_phi_t_raw(ctx, phi, [0] * j + [1]) for j in range(n)]
        M = Matrix.from_columns(ctx.field, cols)
        # callers usually draw a fresh module per trial; keep the cache small
        if len(ctx._matrices) >= 4:
            ctx._matrices.clear()
        ctx._matrices[key] = M
    return M


def phi_t(ctx: DrinfeldContext, phi: DrinfeldModule, beta) -> Residue:
    return ctx.from_vector(_phi_t_raw(ctx, phi, ctx.vector(beta)))


def phi_a(ctx: DrinfeldContext, phi: DrinfeldModule, a: Poly, beta) -> Residue:
    """phi_a(beta) = sum a_i phi_t^i(beta)."""
    F = ctx.field
    M = action_matrix(ctx, phi)
    w = ctx.vector(beta)
    acc = [0] * ctx.n
    for i, c in enumerate(a.coeffs):
        if c:
            acc = [F.add(x, F.mul(c, y)) for x, y in zip(acc, w)]
        if i < len(a.coeffs) - 1:
            w = matvec(M, w)
    return ctx.from_vector(acc)


def chi(ctx: DrinfeldContext, phi: DrinfeldModule) -> Poly:
    """Euler-Poincare characteristic of phi(F_h): charpoly of phi_t."""
    return charpoly(action_matrix(ctx, phi))


def _krylov(ctx: DrinfeldContext, phi: DrinfeldModule, vec: list, length: int) -> list:
    M = action_matrix(ctx, phi)
    seq = [list(vec)]
    for _ in range(length - 1):
        seq.append(matvec(M, seq[-1]))
    return seq


def order_of(ctx: DrinfeldContext, phi: DrinfeldModule, alpha, trials: int = DEFAULT_ORDER_TRIALS,
             rng: random.Random | None = None) -> Poly:
    """Monte Carlo Ord(alpha): lcm of Berlekamp-Massey minimal polynomials of
    random projections U(phi_t^j(alpha)).

    Always a divisor of the true order; equal to it except with probability
    at most 2^-trials.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = rng or random.Random()
    F, n = ctx.field, ctx.n
    vec = ctx.vector(alpha)
    if not any(vec):
        return Poly.one(F)
    # 2n terms pin down a recurrence of order <= n uniquely.
    seq = _krylov(ctx, phi, vec, 2 * n)
    result = Poly.one(F)
    for _ in range(trials):
        U = random_functional(n, F, rng)
        result = lcm(result, berlekamp_massey([U(w) for w in seq], F))
    return result


def exact_order(ctx: DrinfeldContext, phi: DrinfeldModule, alpha) -> Poly:
    """Deterministic Ord(alpha) by Krylov elimination."""
    M = action_matrix(ctx, phi)
    return krylov_order(lambda v: matvec(M, v), ctx.vector(alpha), ctx.field)


def annihilator(ctx: DrinfeldContext, phi: DrinfeldModule) -> Poly:
    """Exact Ann(phi(F_h)): lcm of the orders of the basis vectors."""
    F, n = ctx.field, ctx.n
    M = action_matrix(ctx, phi)
    result = Poly.one(F)
    for j in range(n):
        e = [0] * n
        e[j] = 1
        result = lcm(result, krylov_order(lambda v: matvec(M, v), e, F))
    return result


def random_element(ctx: DrinfeldContext, rng: random.Random, nonzero: bool = True) -> Residue:
    while True:
        r = random_poly(ctx.field, ctx.n, rng)
        if r.coeffs or not nonzero:
            return Residue(ctx.h, r)


def new_random(ctx: DrinfeldContext, rng: random.Random) -> DrinfeldModule:
    """Uniform g, nonzero delta of degree < deg h.

    Raises :class:`FactorFound` when gcd(delta, h) is a proper factor.
    """
    require_odd(ctx.field)
    g = random_poly(ctx.field, ctx.n, rng)
    while True:
        delta = random_poly(ctx.field, ctx.n, rng)
        if delta.coeffs:
            break
    d = gcd(delta, ctx.h)
    if not d.is_one():
        raise FactorFound(d)
    return DrinfeldModule(g, delta, 2)


def norm_to_base(x: Poly, p: Poly) -> int:
    """Norm of x mod p from F_p = F_q[t]/(p) down to F_q, as a field code.

    Computed as the product of the Frobenius conjugates of x.
    """
    F, hl = p.field, list(p.coeffs)
    x = _rem(F, list(x.coeffs), hl)
    if not x:
        return 0
    table = _power_table(F, _powmod(F, [0, 1], F.q, hl), hl)
    prod, conj = [1], x
    for _ in range(p.degree):
        prod = _mulmod(F, prod, conj, hl)
        conj = _apply_table(F, conj, table)
    if len(prod) != 1:
        raise InconsistencyError("norm did not land in the base field")
    return prod[0]


@dataclass(frozen=True)
class TraceData:
    """Frobenius data of phi at the prime p: P(X) = X^2 - a X + eps p.

    For the Carlitz module (rank 1) the Frobenius satisfies X - p, reported
    as a = p, eps = 1.
    """

    p: Poly
    a: Poly
    eps: int
    chi: Poly
    rank: int = 2

    @property
    def charpoly_frob(self) -> tuple:
        """(b, -a, 1): coefficients of P(X) low degree first, in A."""
        F = self.p.field
        if self.rank == 1:
            return (-self.p, Poly.one(F))
        return (self.p * Poly.const(F, self.eps), -self.a, Poly.one(F))

    @property
    def discriminant(self) -> Poly:
        F = self.p.field
        return self.a * self.a - self.p * Poly.const(F, F.mul(F.from_int(4), self.eps))


def trace_data(p: Poly, phi: DrinfeldModule, ctx: DrinfeldContext | None = None) -> TraceData:
    """Frobenius trace a, eps = 1/((-1)^deg p N(delta)) and chi at a prime p."""
    F = p.field
    ctx = ctx or DrinfeldContext(p)
    c = chi(ctx, phi)
    if phi.rank == 1:
        if c != p - 1:
            raise InconsistencyError(f"Carlitz chi at {p} is {c}, expected p - 1")
        return TraceData(p, p, 1, c, rank=1)
    require_odd(F)
    d = p.degree
    nrm = norm_to_base(phi.delta, p)
    if not nrm:
        raise ValueError("delta vanishes modulo p: no good reduction")
    sign = F.neg(1) if d % 2 else 1
    eps = F.inv(F.mul(sign, nrm))
    a = 1 + (p - c) * Poly.const(F, eps)
    if a.degree > d // 2:
        raise InconsistencyError(f"deg a = {a.degree} exceeds deg p / 2 for p = {p}")
    if c != p - (a - 1) * Poly.const(F, F.inv(eps)):
        raise InconsistencyError("chi != p - (a - 1)/eps")
    return TraceData(p, a, eps, c)


def frobenius_identity_defect(td: TraceData, phi: DrinfeldModule, ctx: DrinfeldContext | None = None) -> list:
    """Basis vectors beta where tau^2d(beta) - phi_a(tau^d beta) + phi_{eps p}(beta) != 0."""
    p = td.p
    F = p.field
    ctx = ctx or DrinfeldContext(p)
    d, n = p.degree, ctx.n
    bad = []
    for j in range(n):
        beta = [0] * n
        beta[j] = 1
        td_beta = beta
        for _ in range(d):
            td_beta = _pad(ctx.tau(td_beta), n)
        t2d_beta = td_beta
        for _ in range(d):
            t2d_beta = _pad(ctx.tau(t2d_beta), n)
        lhs = ctx.vector(ctx.from_vector(t2d_beta))
        if td.rank == 1:
            rest = phi_a(ctx, phi, p, ctx.from_vector(beta))
            total = [F.sub(x, y) for x, y in zip(ctx.vector(ctx.from_vector(td_beta)), ctx.vector(rest))]
        else:
            mid = phi_a(ctx, phi, td.a, ctx.from_vector(td_beta))
            last = phi_a(ctx, phi, p * Poly.const(F, td.eps), ctx.from_vector(beta))
            total = [F.add(F.sub(x, y), z) for x, y, z in zip(lhs, ctx.vector(mid), ctx.vector(last))]
        if any(total):
            bad.append(j)
    return bad


@dataclass(frozen=True)
class ModuleStructure:
    """phi(F_p) = A/(m) + A/(m n); chi = m^2 n, Ann = m n.

    ``trace_m`` is gcd(largest square divisor of a^2 - 4 eps p, a - 2) when
    it was computed (odd q, rank 2). The true m always divides it; they
    differ when the endomorphism ring of phi mod p is larger than A[Frobenius].
    """

    m: Poly
    n: Poly
    ann: Poly
    chi: Poly
    trace_m: Poly | None = None

    @property
    def cyclic(self) -> bool:
        return self.m.is_one()

    @property
    def trace_consistent(self) -> bool | None:
        return None if self.trace_m is None else self.trace_m == self.m


def trace_structure_m(td: TraceData) -> Poly:
    """gcd(largest square divisor of a^2 - 4 eps p, a - 2)."""
    f = largest_square_divisor(td.discriminant)
    return gcd(f, td.a - 2)


def module_structure(p: Poly, phi: DrinfeldModule, check: bool = True) -> ModuleStructure:
    """Invariant factors of phi(F_p) from chi and the exact annihilator.

    With ``check`` (odd q, rank 2) the trace prediction for m is attached
    and m is verified to divide it.
    """
    ctx = DrinfeldContext(p)
    c = chi(ctx, phi)
    ann = annihilator(ctx, phi)
    try:
        m = c.exact_div(ann)
        n = ann.exact_div(m)
    except ArithmeticError as exc:
        raise InconsistencyError(f"annihilator/chi structure broken at {p}: {exc}") from None
    if m * m * n != c:
        raise InconsistencyError("chi != m^2 n")
    predicted = None
    if check and phi.rank == 2 and p.field.p != 2:
        predicted = trace_structure_m(trace_data(p, phi, ctx))
        if not m.divides(predicted):
            raise InconsistencyError(f"m = {m} does not divide the trace prediction {predicted}")
    return ModuleStructure(m, n, ann, c, predicted)
