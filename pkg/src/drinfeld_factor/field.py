"""Finite fields F_p and F_{p^k}.

Elements are passed around as plain ints ("codes"): an element of F_{p^k}
with coefficient vector (c_0, ..., c_{k-1}) over F_p, taken modulo the
extension modulus, is stored as sum c_i p^i. For k = 1 the code is the
residue itself. Polynomial and matrix routines work directly on codes;
:class:`FieldElement` is a thin value wrapper for the public API.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "FieldSpec",
    "FieldElement",
    "FieldMismatchError",
    "Embedding",
    "gf",
    "is_prime",
    "fe_norm_to_base",
    "fe_random",
]

# Extension fields up to this size get log/Zech tables.
TABLE_LIMIT = 1 << 18


class FieldMismatchError(ValueError):
    """Operands live in different fields."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldSpec:
    """The field F_q, q = p^k, with an explicit extension modulus.

    ``modulus`` is the monic irreducible defining polynomial over F_p as a
    tuple of ints, low degree first (length k + 1). It is ``None`` for k = 1.
    Use :func:`gf` to obtain cached instances.
    """

    __slots__ = ("p", "k", "q", "modulus", "is_prime", "_log", "_exp", "_zech", "_tabled")

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.k = k
        self.q = p**k
        self.is_prime = k == 1
        self._tabled = False
        if k == 1:
            self.modulus = None
            return
        if modulus is None:
            modulus = _default_modulus(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {k}")
        if not _irreducible_over_prime(p, modulus):
            raise ValueError("extension modulus is reducible over F_p")
        self.modulus = modulus
        if self.q <= TABLE_LIMIT:
            self._build_tables()

    # identity -------------------------------------------------------------
    def _key(self):
        return (self.p, self.k, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}, modulus={list(self.modulus)})"

    def __reduce__(self):
        return (gf, (self.p, self.k, self.modulus))

    # coefficient vectors ----------------------------------------------------
    def to_vector(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.k):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_vector(self, vec) -> int:
        p = self.p
        if len(vec) > self.k:
            raise ValueError("coefficient vector longer than extension degree")
        code = 0
        for c in reversed(list(vec)):
            code = code * p + (int(c) % p)
        return code

    def from_int(self, n: int) -> int:
        """Image of the integer n (i.e. of n * 1) in the field."""
        return n % self.p

    # arithmetic on codes ----------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.is_prime:
            return (a + b) % self.p
        if not a:
            return b
        if not b:
            return a
        if self._tabled:
            log = self._log
            qm1 = self.q - 1
            la = log[a]
            z = self._zech[(log[b] - la) % qm1]
            if z < 0:
                return 0
            return self._exp[(la + z) % qm1]
        va, vb = self.to_vector(a), self.to_vector(b)
        return self.from_vector([(x + y) % self.p for x, y in zip(va, vb)])

    def neg(self, a: int) -> int:
        if self.is_prime:
            return -a % self.p
        if not a:
            return 0
        return self.from_vector([-x % self.p for x in self.to_vector(a)])

    def sub(self, a: int, b: int) -> int:
        if self.is_prime:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.is_prime:
            return a * b % self.p
        if not a or not b:
            return 0
        if self._tabled:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self.from_vector(self._vec_mul(self.to_vector(a), self.to_vector(b)))

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.is_prime:
            return pow(a, -1, self.p)
        if self._tabled:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.is_prime:
            return pow(a, e, self.p)
        if not a:
            return 1 if e == 0 else 0
        if self._tabled:
            return self._exp[(self._log[a] * (e % (self.q - 1))) % (self.q - 1)]
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def pth_root(self, a: int) -> int:
        """The unique b with b^p = a (Frobenius is bijective on F_q)."""
        return self.pow(a, self.q // self.p)

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.q)

    def random_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, self.q)

    def is_square(self, a: int) -> bool:
        if not a or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def element(self, value) -> "FieldElement":
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.from_vector(value))
        return FieldElement(self, self.from_int(value))

    # printing ---------------------------------------------------------------
    def format(self, a: int, var: str = "u") -> str:
        if self.is_prime:
            return str(a)
        terms = []
        for i, c in enumerate(self.to_vector(a)):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = var if i == 1 else f"{var}^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    # internals --------------------------------------------------------------
    def _vec_mul(self, va, vb):
        p, k, mod = self.p, self.k, self.modulus
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(va):
            if x:
                for j, y in enumerate(vb):
                    prod[i + j] += x * y
        for i in range(len(prod) - 1, k - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(k):
                    prod[i - k + j] -= c * mod[j]
        return [c % p for c in prod[:k]]

    def _build_tables(self):
        q = self.q
        qm1 = q - 1
        factors = _prime_factors(qm1)
        gen = None
        for cand in range(2, q):
            if all(self._slow_pow(cand, qm1 // r) != 1 for r in factors):
                gen = cand
                break
        if gen is None:
            raise RuntimeError("no primitive element found")
        exp = [0] * qm1
        log = [0] * q
        vg = self.to_vector(gen)
        x = [1] + [0] * (self.k - 1)
        for i in range(qm1):
            code = self.from_vector(x)
            exp[i] = code
            log[code] = i
            x = self._vec_mul(x, vg)
        p = self.p
        zech = [0] * qm1
        for d in range(qm1):
            c = exp[d]
            one_plus = c - c % p + (c % p + 1) % p
            zech[d] = log[one_plus] if one_plus else -1
        self._exp, self._log, self._zech = exp, log, zech
        self._tabled = True

    def _slow_pow(self, a, e):
        result, base = [1] + [0] * (self.k - 1), self.to_vector(a)
        while e:
            if e & 1:
                result = self._vec_mul(result, base)
            base = self._vec_mul(base, base)
            e >>= 1
        return self.from_vector(result)


def _irreducible_over_prime(p: int, modulus) -> bool:
    from .poly import Poly, is_irreducible

    return is_irreducible(Poly(gf(p), list(modulus)))


def _default_modulus(p: int, k: int) -> tuple:
    from .poly import random_monic_irreducible

    rng = random.Random(f"modulus:{p}:{k}")
    return tuple(random_monic_irreducible(gf(p), k, rng).coeffs)


def gf(p: int, k: int = 1, modulus=None) -> FieldSpec:
    """Cached :class:`FieldSpec` constructor."""
    if modulus is not None:
        modulus = tuple(int(c) % p for c in modulus)
    return _gf(p, k, modulus)


@lru_cache(maxsize=None)
def _gf(p: int, k: int, modulus) -> FieldSpec:
    return FieldSpec(p, k, modulus)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.q:
            raise ValueError("element code out of range")

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatchError(f"{self.spec} vs {other.spec}")
            return other.value
        if isinstance(other, int):
            return self.spec.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.div(self.value, b))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.spec, self.spec.inv(self.value))

    def __bool__(self):
        return self.value != 0

    @property
    def vector(self) -> list[int]:
        return self.spec.to_vector(self.value)

    def __str__(self):
        return self.spec.format(self.value)


def fe_random(spec: FieldSpec, rng: random.Random) -> FieldElement:
    return FieldElement(spec, spec.random(rng))


class Embedding:
    """Field embedding F_{p^a} -> F_{p^b} for a | b.

    Found by locating a root of the small field's modulus inside the large
    field; the search is exhaustive, which is fine at desk scale.
    """

    def __init__(self, small: FieldSpec, big: FieldSpec):
        if small.p != big.p or big.k % small.k:
            raise FieldMismatchError(f"{small} does not embed in {big}")
        self.small, self.big = small, big
        if small.k == 1:
            self.image = list(range(small.p))
        else:
            root = self._find_root()
            powers = [1]
            for _ in range(small.k - 1):
                powers.append(big.mul(powers[-1], root))
            image = []
            for code in range(small.q):
                acc = 0
                for c, pw in zip(small.to_vector(code), powers):
                    if c:
                        acc = big.add(acc, big.mul(c, pw))
                image.append(acc)
            self.image = image
        self.preimage = {b: a for a, b in enumerate(self.image)}

    def _find_root(self) -> int:
        big, mod = self.big, self.small.modulus
        for x in range(big.q):
            acc = 0
            for c in reversed(mod):
                acc = big.add(big.mul(acc, x), c)
            if acc == 0:
                return x
        raise RuntimeError("modulus has no root in the larger field")

    def up(self, a: int) -> int:
        return self.image[a]

    def down(self, b: int) -> int:
        try:
            return self.preimage[b]
        except KeyError:
            raise ValueError("element does not lie in the subfield") from None

    def contains(self, b: int) -> bool:
        return b in self.preimage


def fe_norm_to_base(x: FieldElement, base: FieldSpec) -> FieldElement:
    """Norm from x's field down to the subfield ``base``.

    Computed as x^((Q-1)/(q-1)) with Q, q the two field sizes.
    """
    big = x.spec
    emb = Embedding(base, big)
    if x.value == 0:
        return FieldElement(base, 0)
    y = big.pow(x.value, (big.q - 1) // (base.q - 1))
    return FieldElement(base, emb.down(y))
