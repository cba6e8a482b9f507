"""Exact rational matrices for operator work in the computational basis.

A ``RationalMatrix`` stores a dense numpy object array of Python integers
plus one shared positive denominator, so sums, products, traces and
idempotency checks are bit-exact.  ``SparseRational`` is the COO analogue
used for the symmetrizer-built states, whose nonzero pattern is tiny
compared to d^N x d^N.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np


def _as_object_int_array(arr) -> np.ndarray:
    out = np.array(arr, dtype=object)
    return out


def _gcd_reduce(values, seed: int) -> int:
    g = seed
    for v in values:
        if v:
            g = gcd(g, int(v))
            if g == 1:
                return 1
    return g


class RationalMatrix:
    """Dense exact rational matrix: integer numerators over a common denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: np.ndarray, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("denominator must be nonzero")
        if den < 0:
            num, den = -num, -den
        self.num = num
        self.den = int(den)

    # -- constructors -------------------------------------------------
    @staticmethod
    def zeros(n: int, m: int | None = None) -> "RationalMatrix":
        m = n if m is None else m
        return RationalMatrix(np.zeros((n, m), dtype=object), 1)

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        num = np.zeros((n, n), dtype=object)
        for i in range(n):
            num[i, i] = 1
        return RationalMatrix(num, 1)

    @staticmethod
    def from_fractions(rows) -> "RationalMatrix":
        fr = [[Fraction(v) for v in row] for row in rows]
        den = 1
        for row in fr:
            for v in row:
                den = den * v.denominator // gcd(den, v.denominator)
        num = np.array(
            [[v.numerator * (den // v.denominator) for v in row] for row in fr],
            dtype=object,
        )
        return RationalMatrix(num, den)

    # -- basic properties ----------------------------------------------
    @property
    def shape(self):
        return self.num.shape

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.num[i, j]), self.den)

    def copy(self) -> "RationalMatrix":
        return RationalMatrix(self.num.copy(), self.den)

    def reduce(self) -> "RationalMatrix":
        """Divide out the gcd of all numerators and the denominator, in place."""
        g = _gcd_reduce(self.num.reshape(-1), self.den)
        if g > 1:
            self.num = self.num // g
            self.den //= g
        return self

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        g = gcd(self.den, other.den)
        da, db = other.den // g, self.den // g
        return RationalMatrix(self.num * da + other.num * db, self.den * da)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        g = gcd(self.den, other.den)
        da, db = other.den // g, self.den // g
        return RationalMatrix(self.num * da - other.num * db, self.den * da)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(-self.num, self.den)

    def scale(self, c) -> "RationalMatrix":
        c = Fraction(c)
        return RationalMatrix(self.num * c.numerator, self.den * c.denominator)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix(np.dot(self.num, other.num), self.den * other.den)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.num.T.copy(), self.den)

    def permuted(self, action: np.ndarray) -> "RationalMatrix":
        """Conjugate by the basis relabeling j -> action[j]:
        result[action[i], action[j]] = self[i, j]."""
        inv = np.argsort(action)
        return RationalMatrix(self.num[np.ix_(inv, inv)], self.den)

    def trace(self) -> Fraction:
        return Fraction(int(np.trace(self.num)), self.den)

    def mul_trace(self, other: "RationalMatrix") -> Fraction:
        """tr(self @ other), computed elementwise."""
        return Fraction(int((self.num * other.num.T).sum()), self.den * other.den)

    # -- predicates -----------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return bool(np.array_equal(self.num * other.den, other.num * self.den))

    def __hash__(self):
        raise TypeError("RationalMatrix is mutable; not hashable")

    def is_zero(self) -> bool:
        return not self.num.any()

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.num, self.num.T))

    def is_idempotent(self) -> bool:
        return bool(np.array_equal(np.dot(self.num, self.num), self.num * self.den))

    # -- conversions ------------------------------------------------------
    def to_float(self) -> np.ndarray:
        return self.num.astype(np.float64) / float(self.den)

    def rank_exact(self) -> int:
        """Rank over the rationals by fraction-free Gaussian elimination."""
        m = [[int(v) for v in row] for row in self.num]
        nrows = len(m)
        ncols = len(m[0]) if nrows else 0
        rank = 0
        row = 0
        for col in range(ncols):
            pivot = None
            for r in range(row, nrows):
                if m[r][col]:
                    pivot = r
                    break
            if pivot is None:
                continue
            m[row], m[pivot] = m[pivot], m[row]
            pv = m[row][col]
            for r in range(row + 1, nrows):
                f = m[r][col]
                if f:
                    m[r] = [pv * a - f * b for a, b in zip(m[r], m[row])]
            rank += 1
            row += 1
            if row == nrows:
                break
        return rank

    def __repr__(self):
        return f"RationalMatrix(shape={self.shape}, den={self.den})"


class SparseRational:
    """COO exact rational matrix with a shared denominator."""

    __slots__ = ("rows", "cols", "vals", "den", "dim")

    def __init__(self, rows, cols, vals, den: int, dim: int):
        self.rows = np.asarray(rows, dtype=np.int64)
        self.cols = np.asarray(cols, dtype=np.int64)
        self.vals = _as_object_int_array(vals)
        if den <= 0:
            raise ValueError("denominator must be positive")
        self.den = int(den)
        self.dim = int(dim)

    @property
    def nnz(self) -> int:
        return len(self.vals)

    def permuted(self, action: np.ndarray) -> "SparseRational":
        """Basis relabeling j -> action[j] applied to both indices."""
        return SparseRational(action[self.rows], action[self.cols], self.vals, self.den, self.dim)

    def scale(self, c) -> "SparseRational":
        c = Fraction(c)
        return SparseRational(self.rows, self.cols, self.vals * c.numerator, self.den * c.denominator, self.dim)

    def transpose(self) -> "SparseRational":
        return SparseRational(self.cols, self.rows, self.vals, self.den, self.dim)

    def trace(self) -> Fraction:
        ondiag = self.rows == self.cols
        if not ondiag.any():
            return Fraction(0)
        return Fraction(int(self.vals[ondiag].sum()), self.den)

    def to_dense(self) -> RationalMatrix:
        num = np.zeros((self.dim, self.dim), dtype=object)
        num[self.rows, self.cols] = self.vals
        return RationalMatrix(num, self.den)

    def to_float_dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim))
        out[self.rows, self.cols] = self.vals.astype(np.float64)
        return out / float(self.den)

    def matmul_dense(self, other: RationalMatrix) -> RationalMatrix:
        """self @ other, accumulating one scaled row of ``other`` per nonzero."""
        num = np.zeros((self.dim, self.dim), dtype=object)
        onum = other.num
        for r, c, v in zip(self.rows, self.cols, self.vals):
            num[r, :] += int(v) * onum[c, :]
        return RationalMatrix(num, self.den * other.den)

    def trace_mul_dense(self, other: RationalMatrix) -> Fraction:
        """tr(self @ other)."""
        total = int(np.dot(self.vals, other.num[self.cols, self.rows]))
        return Fraction(total, self.den * other.den)

    def trace_mul_sparse(self, other: "SparseRational") -> Fraction:
        lookup = {(int(r), int(c)): int(v) for r, c, v in zip(other.rows, other.cols, other.vals)}
        total = 0
        for r, c, v in zip(self.rows, self.cols, self.vals):
            w = lookup.get((int(c), int(r)))
            if w:
                total += int(v) * w
        return Fraction(total, self.den * other.den)

    def add_into(self, acc: np.ndarray, acc_den: int, weight: Fraction) -> int:
        """acc += weight * self, where acc holds numerators over acc_den.

        Requires weight.denominator * self.den to divide acc_den; returns
        acc_den unchanged (kept for call-site symmetry).
        """
        w = Fraction(weight)
        scale_num = w.numerator * acc_den
        scale_den = w.denominator * self.den
        if scale_num % scale_den:
            raise ValueError("accumulator denominator incompatible with weight")
        mult = scale_num // scale_den
        acc[self.rows, self.cols] += self.vals * mult
        return acc_den

    def __eq__(self, other) -> bool:
        if isinstance(other, SparseRational):
            return self.to_dense() == other.to_dense()
        return NotImplemented

    def __hash__(self):
        raise TypeError("SparseRational is not hashable")


def kron_sparse(a: SparseRational, b: SparseRational) -> SparseRational:
    """Kronecker product with the first factor on the high-order digits."""
    rows = (a.rows[:, None] * b.dim + b.rows[None, :]).reshape(-1)
    cols = (a.cols[:, None] * b.dim + b.cols[None, :]).reshape(-1)
    vals = (a.vals[:, None] * b.vals[None, :]).reshape(-1)
    return SparseRational(rows, cols, vals, a.den * b.den, a.dim * b.dim)
