"""Dense univariate polynomials over F_q and the quotient rings F_q[t]/(h).

Low-level routines (underscore prefixed) work on lists of element codes,
low degree first, with no trailing zeros. :class:`Poly` wraps such a list
together with its field. Prime fields take inlined integer fast paths.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import reduce

from .field import FieldElement, FieldMismatchError, FieldSpec, _prime_factors

__all__ = [
    "NEG_INF",
    "Poly",
    "Residue",
    "Factorization",
    "divrem",
    "gcd",
    "xgcd",
    "lcm",
    "powmod",
    "modcompose",
    "power_table",
    "frobenius_iterate",
    "squarefree_decomposition",
    "pth_root",
    "is_irreducible",
    "is_squarefree",
    "count_irreducibles",
    "random_monic",
    "random_poly",
    "random_monic_irreducible",
    "random_squarefree_with_known_factors",
    "largest_square_divisor",
]

NEG_INF = float("-inf")

# Kronecker substitution kicks in above this operand length (prime fields).
_KRONECKER_MIN = 24


# --------------------------------------------------------------------------
# raw list arithmetic
# --------------------------------------------------------------------------

def _strip(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _add(F: FieldSpec, a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    if F.is_prime:
        p = F.p
        out = [(x + y) % p for x, y in zip(a, b)]
    else:
        add = F.add
        out = [add(x, y) for x, y in zip(a, b)]
    out.extend(a[len(b):])
    return _strip(out)


def _neg(F: FieldSpec, a: list) -> list:
    if F.is_prime:
        p = F.p
        return [-x % p for x in a]
    return [F.neg(x) for x in a]


def _sub(F: FieldSpec, a: list, b: list) -> list:
    return _add(F, a, _neg(F, b))


def _scale(F: FieldSpec, a: list, c: int) -> list:
    if not c:
        return []
    if F.is_prime:
        p = F.p
        return [x * c % p for x in a]
    mul = F.mul
    return [mul(x, c) for x in a]


def _kronecker_mul(a: list, b: list, p: int) -> list:
    bits = 2 * p.bit_length() + min(len(a), len(b)).bit_length()
    nb = (bits + 7) // 8
    A = int.from_bytes(b"".join(x.to_bytes(nb, "little") for x in a), "little")
    B = int.from_bytes(b"".join(x.to_bytes(nb, "little") for x in b), "little")
    n = len(a) + len(b) - 1
    raw = (A * B).to_bytes(n * nb, "little")
    return [int.from_bytes(raw[i * nb:(i + 1) * nb], "little") % p for i in range(n)]


def _mul(F: FieldSpec, a: list, b: list) -> list:
    if not a or not b:
        return []
    if F.is_prime:
        p = F.p
        if len(a) >= _KRONECKER_MIN and len(b) >= _KRONECKER_MIN:
            return _kronecker_mul(a, b, p)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return [c % p for c in out]
    add, mul = F.add, F.mul
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return _strip(out)


def _divmod(F: FieldSpec, a: list, b: list) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) <= db:
        return [], list(a)
    if F.is_prime:
        p = F.p
        inv = pow(b[-1], -1, p)
        r = list(a)
        quo = [0] * (len(a) - db)
        for i in range(len(a) - 1, db - 1, -1):
            c = r[i] % p
            if c:
                c = c * inv % p
                quo[i - db] = c
                base = i - db
                for j in range(db):
                    r[base + j] -= c * b[j]
        return quo, _strip([x % p for x in r[:db]])
    add, mul = F.add, F.mul
    inv = F.inv(b[-1])
    nb = [F.neg(x) for x in b]
    r = list(a)
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i]
        if c:
            c = mul(c, inv)
            quo[i - db] = c
            base = i - db
            for j in range(db):
                if nb[j]:
                    r[base + j] = add(r[base + j], mul(c, nb[j]))
    return quo, _strip(r[:db])


def _rem(F: FieldSpec, a: list, b: list) -> list:
    return _divmod(F, a, b)[1]


def _monic(F: FieldSpec, a: list) -> list:
    if not a or a[-1] == 1:
        return list(a)
    return _scale(F, a, F.inv(a[-1]))


def _gcd(F: FieldSpec, a: list, b: list) -> list:
    while b:
        a, b = b, _rem(F, a, b)
    return _monic(F, a)


def _xgcd(F: FieldSpec, a: list, b: list):
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        quo, r = _divmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(F, s0, _mul(F, quo, s1))
        t0, t1 = t1, _sub(F, t0, _mul(F, quo, t1))
    if not r0:
        return [], [], []
    inv = F.inv(r0[-1])
    return _scale(F, r0, inv), _scale(F, s0, inv), _scale(F, t0, inv)


def _mulmod(F: FieldSpec, a: list, b: list, h: list) -> list:
    return _rem(F, _mul(F, a, b), h)


def _powmod(F: FieldSpec, base: list, e: int, h: list) -> list:
    result = _rem(F, [1], h)
    base = _rem(F, base, h)
    if e == 0:
        return result
    for bit in bin(e)[2:]:
        result = _mulmod(F, result, result, h)
        if bit == "1":
            result = _mulmod(F, result, base, h)
    return result


def _power_table(F: FieldSpec, g: list, h: list) -> list:
    """[g^0, g^1, ..., g^(n-1)] mod h, n = deg h."""
    n = len(h) - 1
    table = [_rem(F, [1], h)]
    g = _rem(F, g, h)
    for _ in range(n - 1):
        table.append(_mulmod(F, table[-1], g, h))
    return table


def _apply_table(F: FieldSpec, f: list, table: list) -> list:
    """sum f_j * table[j]; with a power table this is f(g) mod h."""
    if not f:
        return []
    if F.is_prime:
        p = F.p
        n = max(len(row) for row in table) if table else 0
        acc = [0] * n
        for c, row in zip(f, table):
            if c:
                for i, x in enumerate(row):
                    acc[i] += c * x
        return _strip([x % p for x in acc])
    add, mul = F.add, F.mul
    n = max(len(row) for row in table) if table else 0
    acc = [0] * n
    for c, row in zip(f, table):
        if c:
            for i, x in enumerate(row):
                if x:
                    acc[i] = add(acc[i], mul(c, x))
    return _strip(acc)


def _compose_horner(F: FieldSpec, f: list, g: list, h: list) -> list:
    acc: list = []
    for c in reversed(f):
        acc = _add(F, _mulmod(F, acc, g, h), [c] if c else [])
    return _rem(F, acc, h)


def _derivative(F: FieldSpec, a: list) -> list:
    p = F.p
    if F.is_prime:
        return _strip([(i * c) % p for i, c in enumerate(a)][1:])
    out = []
    for i in range(1, len(a)):
        m = i % p
        out.append(F.mul(F.from_int(m), a[i]) if m else 0)
    return _strip(out)


# --------------------------------------------------------------------------
# Poly
# --------------------------------------------------------------------------

class Poly:
    """Polynomial in F_q[t], dense, low degree first.

    Coefficients may be given as element codes, ints (reduced into F_p for
    prime fields) or :class:`FieldElement` instances.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs=()):
        self.field = field
        out = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.spec != field:
                    raise FieldMismatchError(f"{c.spec} vs {field}")
                out.append(c.value)
            elif field.is_prime:
                out.append(int(c) % field.p)
            else:
                c = int(c)
                if c < 0:
                    c = field.from_int(c)
                elif c >= field.q:
                    raise ValueError(f"element code {c} out of range for {field}")
                out.append(c)
        self.coeffs = tuple(_strip(out))

    @classmethod
    def _raw(cls, field: FieldSpec, coeffs) -> "Poly":
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = tuple(coeffs)
        return obj

    @classmethod
    def t(cls, field: FieldSpec) -> "Poly":
        return cls._raw(field, (0, 1))

    @classmethod
    def one(cls, field: FieldSpec) -> "Poly":
        return cls._raw(field, (1,))

    @classmethod
    def zero(cls, field: FieldSpec) -> "Poly":
        return cls._raw(field, ())

    @classmethod
    def const(cls, field: FieldSpec, c: int) -> "Poly":
        return cls._raw(field, (c,) if c else ())

    @classmethod
    def from_roots(cls, field: FieldSpec, roots) -> "Poly":
        out = cls.one(field)
        for r in roots:
            out = out * cls._raw(field, _strip([field.neg(r), 1]))
        return out

    # basic properties ------------------------------------------------------
    @property
    def degree(self):
        """Degree, or ``NEG_INF`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "Poly":
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no monic associate")
        return Poly._raw(self.field, _monic(self.field, list(self.coeffs)))

    def derivative(self) -> "Poly":
        return Poly._raw(self.field, _derivative(self.field, list(self.coeffs)))

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    # arithmetic --------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return list(other.coeffs)
        if isinstance(other, FieldElement):
            if other.spec != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.spec}")
            return [other.value] if other.value else []
        if isinstance(other, int):
            c = self.field.from_int(other)
            return [c] if c else []
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Poly._raw(self.field, _add(self.field, list(self.coeffs), b))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, _neg(self.field, list(self.coeffs)))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Poly._raw(self.field, _sub(self.field, list(self.coeffs), b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Poly._raw(self.field, _sub(self.field, b, list(self.coeffs)))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Poly._raw(self.field, _mul(self.field, list(self.coeffs), b))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        quo, rem = _divmod(self.field, list(self.coeffs), b)
        return Poly._raw(self.field, quo), Poly._raw(self.field, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        quo, rem = divmod(self, other)
        if not rem.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return quo

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    # comparison / hashing --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == tuple(_strip([self.field.from_int(other)]))
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def sort_key(self):
        return (len(self.coeffs), tuple(reversed(self.coeffs)))

    # printing ----------------------------------------------------------------
    def __str__(self):
        return self.format()

    def format(self, var: str = "t", field_var: str = "u") -> str:
        F = self.field
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            cs = F.format(c, field_var)
            if not F.is_prime and "+" in cs:
                cs = f"({cs})"
            if i == 0:
                terms.append(cs)
                continue
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if c == 1 else f"{cs}*{mono}")
        return "+".join(terms)

    def __repr__(self):
        return f"Poly({self.format()!r} over {self.field!r})"


class Residue:
    """Element of F_q[t]/(h), stored as its reduced representative."""

    __slots__ = ("modulus", "value")

    def __init__(self, modulus: Poly, value: Poly):
        if not modulus.is_monic() or modulus.degree < 1:
            raise ValueError("residue modulus must be monic of degree >= 1")
        self.modulus = modulus
        self.value = value % modulus

    @classmethod
    def from_vector(cls, modulus: Poly, vec) -> "Residue":
        return cls(modulus, Poly._raw(modulus.field, _strip(list(vec))))

    def vector(self) -> list[int]:
        n = self.modulus.degree
        return list(self.value.coeffs) + [0] * (n - len(self.value.coeffs))

    def lift(self) -> Poly:
        return self.value

    def _check(self, other):
        if not isinstance(other, Residue) or other.modulus != self.modulus:
            raise FieldMismatchError("residues modulo different polynomials")

    def __add__(self, other):
        self._check(other)
        return Residue(self.modulus, self.value + other.value)

    def __sub__(self, other):
        self._check(other)
        return Residue(self.modulus, self.value - other.value)

    def __mul__(self, other):
        self._check(other)
        return Residue(self.modulus, self.value * other.value)

    def __neg__(self):
        return Residue(self.modulus, -self.value)

    def __eq__(self, other):
        return isinstance(other, Residue) and self.modulus == other.modulus and self.value == other.value

    def __hash__(self):
        return hash((self.modulus, self.value))

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def __repr__(self):
        return f"Residue({self.value} mod {self.modulus})"


@dataclass
class Factorization:
    """Multiset of (monic irreducible, multiplicity) pairs plus a unit."""

    field: FieldSpec
    factors: list = dc_field(default_factory=list)
    unit: int = 1

    def __post_init__(self):
        merged: dict = {}
        for f, m in self.factors:
            merged[f] = merged.get(f, 0) + m
        self.factors = sorted(merged.items(), key=lambda fm: fm[0].sort_key())

    def expand(self) -> Poly:
        out = Poly.const(self.field, self.unit)
        for f, m in self.factors:
            out = out * f**m
        return out

    @property
    def degrees(self) -> list[int]:
        out = []
        for f, m in self.factors:
            out.extend([f.degree] * m)
        return sorted(out, reverse=True)

    def __eq__(self, other):
        if not isinstance(other, Factorization):
            return NotImplemented
        return self.field == other.field and self.unit == other.unit and self.factors == other.factors

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __str__(self):
        parts = []
        if self.unit != 1:
            parts.append(self.field.format(self.unit))
        for f, m in self.factors:
            s = f"({f})"
            parts.append(s if m == 1 else f"{s}^{m}")
        return "*".join(parts) if parts else "1"


# --------------------------------------------------------------------------
# ring operations
# --------------------------------------------------------------------------

def _same_field(*polys: Poly) -> FieldSpec:
    F = polys[0].field
    for f in polys[1:]:
        if f.field != F:
            raise FieldMismatchError(f"{F} vs {f.field}")
    return F


def divrem(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    return divmod(a, b)


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) is an error."""
    F = _same_field(a, b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    return Poly._raw(F, _gcd(F, list(a.coeffs), list(b.coeffs)))


def xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Returns (g, u, v) with g monic and u*a + v*b = g."""
    F = _same_field(a, b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    g, u, v = _xgcd(F, list(a.coeffs), list(b.coeffs))
    return Poly._raw(F, g), Poly._raw(F, u), Poly._raw(F, v)


def lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero(a.field)
    return (a * b).exact_div(gcd(a, b)).monic()


def _check_modulus(h: Poly):
    if not h.is_monic() or h.degree < 1:
        raise ValueError("modulus must be monic of degree >= 1")


def powmod(base: Poly, e: int, h: Poly) -> Poly:
    _check_modulus(h)
    F = _same_field(base, h)
    if e < 0:
        raise ValueError("negative exponent")
    return Poly._raw(F, _powmod(F, list(base.coeffs), e, list(h.coeffs)))


def power_table(g: Poly, h: Poly) -> list:
    """Raw table of g^j mod h, j < deg h, for repeated composition by g."""
    _check_modulus(h)
    F = _same_field(g, h)
    return _power_table(F, list(g.coeffs), list(h.coeffs))


def modcompose(f: Poly, g: Poly, h: Poly, table=None) -> Poly:
    """f(g) mod h.

    Without ``table`` this is Horner's rule (deg f modular products). A
    precomputed :func:`power_table` of g turns each call into one
    matrix-vector product.
    """
    _check_modulus(h)
    F = _same_field(f, g, h)
    fl = list((f % h).coeffs)
    if table is None:
        return Poly._raw(F, _compose_horner(F, fl, list(g.coeffs), list(h.coeffs)))
    return Poly._raw(F, _apply_table(F, fl, table))


def frobenius_iterate(h: Poly, s: int) -> Poly:
    """t^(q^s) mod h."""
    if s < 1:
        raise ValueError("s must be >= 1")
    _check_modulus(h)
    F = h.field
    hl = list(h.coeffs)
    x1 = _powmod(F, [0, 1], F.q, hl)
    if s == 1:
        return Poly._raw(F, x1)
    table = _power_table(F, x1, hl)
    x = x1
    for _ in range(s - 1):
        x = _apply_table(F, x, table)
    return Poly._raw(F, x)


def _frobenius_sequence(F: FieldSpec, hl: list, upto: int) -> list:
    """[t^(q^1), ..., t^(q^upto)] mod h as raw lists."""
    x1 = _powmod(F, [0, 1], F.q, hl)
    seq = [x1]
    if upto > 1:
        table = _power_table(F, x1, hl)
        for _ in range(upto - 1):
            seq.append(_apply_table(F, seq[-1], table))
    return seq


def pth_root(f: Poly) -> Poly:
    """g with g^p = f; requires f' = 0."""
    F = f.field
    p = F.p
    coeffs = f.coeffs
    if any(c for i, c in enumerate(coeffs) if i % p):
        raise ValueError("polynomial is not a p-th power")
    return Poly._raw(F, [F.pth_root(coeffs[i]) for i in range(0, len(coeffs), p)])


def squarefree_decomposition(h: Poly) -> list[tuple[Poly, int]]:
    """[(part, multiplicity)] with h = lc * prod part^mult, parts squarefree,
    monic and pairwise coprime, sorted by multiplicity."""
    if h.degree < 1:
        raise ValueError("squarefree decomposition needs a nonconstant polynomial")
    F = h.field
    f = h.monic()
    out: list = []
    c = gcd(f, f.derivative()) if not f.derivative().is_zero() else f
    w = f.exact_div(c)
    i = 1
    while not w.is_one():
        y = gcd(w, c)
        fac = w.exact_div(y)
        if not fac.is_one():
            out.append((fac, i))
        w = y
        c = c.exact_div(y)
        i += 1
    if not c.is_one():
        for part, m in squarefree_decomposition(pth_root(c)):
            out.append((part, m * F.p))
    return sorted(out, key=lambda pm: (pm[1], pm[0].sort_key()))


def is_squarefree(h: Poly) -> bool:
    if h.degree < 1:
        return True
    d = h.derivative()
    return not d.is_zero() and gcd(h, d).is_one()


def is_irreducible(f: Poly) -> bool:
    """Rabin's test using iterated Frobenius compositions."""
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    F = f.field
    fl = _monic(F, list(f.coeffs))
    seq = _frobenius_sequence(F, fl, d)
    if seq[-1] != [0, 1]:
        return False
    for ell in _prime_factors(d):
        x = seq[d // ell - 1]
        if len(_gcd(F, fl, _sub(F, x, [0, 1]))) != 1:
            return False
    return True


def _mobius(n: int) -> int:
    primes = _prime_factors(n)
    m = n
    for pr in primes:
        m //= pr
        if m % pr == 0:
            return 0
    return -1 if len(primes) % 2 else 1


def count_irreducibles(q: int, d: int) -> int:
    """Number of monic irreducibles of degree d over F_q."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(e) * q ** (d // e)
    return total // d


def random_poly(F: FieldSpec, d: int, rng: random.Random) -> Poly:
    """Uniform polynomial of degree < d (possibly zero)."""
    return Poly._raw(F, _strip([F.random(rng) for _ in range(d)]))


def random_monic(F: FieldSpec, d: int, rng: random.Random) -> Poly:
    if d < 0:
        raise ValueError("degree must be >= 0")
    return Poly._raw(F, [F.random(rng) for _ in range(d)] + [1])


def random_monic_irreducible(F: FieldSpec, d: int, rng: random.Random, stats: dict | None = None) -> Poly:
    if d < 1:
        raise ValueError("degree must be >= 1")
    trials = 0
    while True:
        trials += 1
        f = random_monic(F, d, rng)
        if is_irreducible(f):
            if stats is not None:
                stats["trials"] = stats.get("trials", 0) + trials
            return f


def _all_monic_irreducibles(F: FieldSpec, d: int) -> list:
    out = []
    for code in range(F.q**d):
        coeffs = []
        for _ in range(d):
            code, r = divmod(code, F.q)
            coeffs.append(r)
        f = Poly._raw(F, coeffs + [1])
        if is_irreducible(f):
            out.append(f)
    return out


def random_squarefree_with_known_factors(F: FieldSpec, profile, rng: random.Random):
    """Product of distinct random monic irreducibles with the given degrees.

    Returns (h, Factorization). Raises ValueError when some degree is asked
    for more often than there are monic irreducibles of that degree.
    """
    wanted: dict = {}
    for d in profile:
        if d < 1:
            raise ValueError("factor degrees must be >= 1")
        wanted[d] = wanted.get(d, 0) + 1
    factors = []
    for d in sorted(wanted):
        count = wanted[d]
        available = count_irreducibles(F.q, d)
        if count > available:
            raise ValueError(
                f"asked for {count} irreducibles of degree {d} over F_{F.q}, only {available} exist"
            )
        if F.q**d <= 4096 or 2 * count > available:
            pool = _all_monic_irreducibles(F, d)
            factors.extend(rng.sample(pool, count))
        else:
            chosen: set = set()
            while len(chosen) < count:
                chosen.add(random_monic_irreducible(F, d, rng))
            factors.extend(sorted(chosen, key=Poly.sort_key))
    h = reduce(lambda x, y: x * y, factors, Poly.one(F))
    return h, Factorization(F, [(f, 1) for f in factors])


def largest_square_divisor(D: Poly) -> Poly:
    """Largest monic f with f^2 | D."""
    if D.is_zero():
        raise ValueError("zero has no largest square divisor")
    F = D.field
    if D.degree == 0:
        return Poly.one(F)
    out = Poly.one(F)
    for part, m in squarefree_decomposition(D):
        if m >= 2:
            out = out * part ** (m // 2)
    return out
