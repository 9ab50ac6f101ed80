"""Dense linear algebra over F_q and linear-recurrence tools."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .field import FieldMismatchError, FieldSpec
from .poly import Poly

__all__ = [
    "Matrix",
    "LinearFunctional",
    "charpoly",
    "berlekamp_massey",
    "krylov_order",
    "random_functional",
    "matvec",
    "poly_of_matrix",
]


class Matrix:
    """Square-or-rectangular dense matrix of element codes, row major."""

    __slots__ = ("field", "rows")

    def __init__(self, field: FieldSpec, rows):
        self.field = field
        self.rows = [list(r) for r in rows]
        if self.rows and any(len(r) != len(self.rows[0]) for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: FieldSpec, n: int, m: int | None = None) -> "Matrix":
        return cls(field, [[0] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def from_columns(cls, field: FieldSpec, cols) -> "Matrix":
        cols = [list(c) for c in cols]
        n = len(cols[0]) if cols else 0
        return cls(field, [[c[i] for c in cols] for i in range(n)])

    @classmethod
    def companion(cls, f: Poly) -> "Matrix":
        """Companion matrix of monic f: shifts e_j to e_{j+1}, last column -f_j."""
        if not f.is_monic() or f.degree < 1:
            raise ValueError("companion matrix needs a monic nonconstant polynomial")
        F, n = f.field, f.degree
        M = cls.zeros(F, n)
        for i in range(1, n):
            M.rows[i][i - 1] = 1
        for i in range(n):
            M.rows[i][n - 1] = F.neg(f.coeff(i))
        return M

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self.rows]

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if other.field != self.field:
                raise FieldMismatchError("matrices over different fields")
            cols = [matvec(self, other.column(j)) for j in range(other.shape[1])]
            return Matrix.from_columns(self.field, cols)
        return matvec(self, other)

    def __add__(self, other: "Matrix") -> "Matrix":
        F = self.field
        return Matrix(F, [[F.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c: int) -> "Matrix":
        F = self.field
        return Matrix(F, [[F.mul(a, c) for a in r] for r in self.rows])

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.field == other.field and self.rows == other.rows

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def __repr__(self):
        return f"Matrix({self.rows}, {self.field!r})"


def matvec(M: Matrix, v: Sequence[int]) -> list[int]:
    F = M.field
    if F.is_prime:
        p = F.p
        return [sum(a * b for a, b in zip(row, v)) % p for row in M.rows]
    add, mul = F.add, F.mul
    out = []
    for row in M.rows:
        acc = 0
        for a, b in zip(row, v):
            if a and b:
                acc = add(acc, mul(a, b))
        out.append(acc)
    return out


def charpoly(M: Matrix) -> Poly:
    """det(tI - M) via reduction to upper Hessenberg form, O(n^3)."""
    n, m = M.shape
    if n != m or n < 1:
        raise ValueError("charpoly needs a nonempty square matrix")
    F = M.field
    add, sub, mul, neg = F.add, F.sub, F.mul, F.neg
    H = [list(r) for r in M.rows]
    for col in range(n - 2):
        piv = next((i for i in range(col + 1, n) if H[i][col]), None)
        if piv is None:
            continue
        m1 = col + 1
        if piv != m1:
            H[piv], H[m1] = H[m1], H[piv]
            for r in H:
                r[piv], r[m1] = r[m1], r[piv]
        inv = F.inv(H[m1][col])
        for i in range(m1 + 1, n):
            u = mul(H[i][col], inv)
            if not u:
                continue
            ri, rm = H[i], H[m1]
            for j in range(n):
                if rm[j]:
                    ri[j] = sub(ri[j], mul(u, rm[j]))
            for r in H:
                if r[i]:
                    r[m1] = add(r[m1], mul(u, r[i]))
    # p_k = (t - H[k-1][k-1]) p_{k-1} - sum_i H[i-1][k-1] * prod(subdiag) * p_{i-1}
    T = Poly.t(F)
    polys = [Poly.one(F)]
    for k in range(1, n + 1):
        pk = (T - Poly.const(F, H[k - 1][k - 1])) * polys[k - 1]
        prod = 1
        for i in range(k - 1, 0, -1):
            prod = mul(prod, H[i][i - 1])
            if not prod:
                break
            c = mul(H[i - 1][k - 1], prod)
            if c:
                pk = pk - polys[i - 1] * Poly.const(F, c)
        polys.append(pk)
    return polys[n]


def berlekamp_massey(seq: Sequence[int], field: FieldSpec) -> Poly:
    """Monic minimal polynomial of the shortest linear recurrence for seq.

    A result m(t) = t^L + c_{L-1} t^{L-1} + ... + c_0 means
    s_{j+L} + c_{L-1} s_{j+L-1} + ... + c_0 s_j = 0 for all valid j.
    """
    F = field
    add, mul, sub = F.add, F.mul, F.sub
    C, B = [1], [1]
    L, shift, b = 0, 1, 1
    for i, s in enumerate(seq):
        d = s
        for j in range(1, L + 1):
            if j < len(C) and C[j]:
                d = add(d, mul(C[j], seq[i - j]))
        if not d:
            shift += 1
            continue
        coef = F.div(d, b)
        T = list(C)
        need = len(B) + shift
        if len(C) < need:
            C = C + [0] * (need - len(C))
        for j, x in enumerate(B):
            if x:
                C[j + shift] = sub(C[j + shift], mul(coef, x))
        if 2 * L <= i:
            L = i + 1 - L
            B, b, shift = T, d, 1
        else:
            shift += 1
    C = C + [0] * (L + 1 - len(C))
    return Poly(F, [C[L - i] for i in range(L + 1)])


def krylov_order(apply: Callable[[list], list], v: Sequence[int], field: FieldSpec) -> Poly:
    """Exact monic minimal polynomial of v under a linear operator.

    Gaussian elimination on v, Tv, T^2 v, ... until the first dependency.
    """
    F = field
    sub, mul = F.sub, F.mul
    rows: list = []
    w = list(v)
    k = 0
    while True:
        vec = list(w)
        comb = [0] * k + [1]
        for piv, bv, bc in rows:
            c = vec[piv]
            if c:
                for j, x in enumerate(bv):
                    if x:
                        vec[j] = sub(vec[j], mul(c, x))
                for j, x in enumerate(bc):
                    if x:
                        comb[j] = sub(comb[j], mul(c, x))
        piv = next((i for i, x in enumerate(vec) if x), None)
        if piv is None:
            return Poly(F, comb)
        inv = F.inv(vec[piv])
        rows.append((piv, [mul(x, inv) for x in vec], [mul(x, inv) for x in comb]))
        w = apply(w)
        k += 1


@dataclass(frozen=True)
class LinearFunctional:
    field: FieldSpec
    weights: tuple

    def __call__(self, vec: Sequence[int]) -> int:
        if len(vec) != len(self.weights):
            raise ValueError("functional and vector dimensions differ")
        F = self.field
        if F.is_prime:
            return sum(a * b for a, b in zip(self.weights, vec)) % F.p
        acc = 0
        for a, b in zip(self.weights, vec):
            if a and b:
                acc = F.add(acc, F.mul(a, b))
        return acc


def random_functional(n: int, field: FieldSpec, rng: random.Random) -> LinearFunctional:
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return LinearFunctional(field, tuple(field.random(rng) for _ in range(n)))


def poly_of_matrix(f: Poly, M: Matrix) -> Matrix:
    """f(M) by Horner's rule."""
    F = M.field
    n = M.shape[0]
    acc = Matrix.zeros(F, n)
    I = Matrix.identity(F, n)
    for c in reversed(f.coeffs):
        acc = acc @ M + I.scale(c)
    return acc
