#!/usr/bin/env python3
"""
Exact Matrices - Dense square matrices over Q(sqrt(m))
Stored as (a + b*sqrt(m)) / den with integer numerator arrays and one shared denominator
"""

import math
from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np

from core.errors import RadicandMismatchError
from core.qnum import QuadScalar

# Every intermediate of an int64 sum stays below this; otherwise fall back to Python ints
INT64_LIMIT = 2 ** 62
# Integers up to this are exact in float64, so BLAS products below it are exact
FLOAT_EXACT_LIMIT = 2 ** 53


def _max_abs(array):
    return int(np.abs(array).max()) if array.size else 0


def _backend(array, bound):
    return array.astype(np.int64) if bound < INT64_LIMIT else array.astype(object)


def _is_prime(k):
    if k < 2:
        return False
    p = 2
    while p * p <= k:
        if k % p == 0:
            return False
        p += 1
    return True


@lru_cache(maxsize=None)
def _primes_below(limit, count):
    # limit = isqrt(2^53 / order) stays below 2^27, so trial division is enough
    primes, candidate = [], limit - 1
    while len(primes) < count:
        if _is_prime(candidate):
            primes.append(candidate)
        candidate -= 1
    return tuple(primes)


def _modular_product(x, y, bound):
    """
    Exact integer product through residues modulo word-sized primes and CRT

    Each residue product runs in float64 BLAS, exact while order * p^2 < 2^53.
    """
    order = x.shape[1]
    limit = math.isqrt(FLOAT_EXACT_LIMIT // max(order, 1))
    needed = (2 * bound + 1).bit_length() // (limit.bit_length() - 1) + 1
    primes = _primes_below(limit, needed)

    result, modulus = None, 1
    for p in primes:
        xp = (x % p).astype(np.int64).astype(float)
        yp = (y % p).astype(np.int64).astype(float)
        residue = np.remainder(np.rint(xp @ yp), p).astype(np.int64).astype(object)
        if result is None:
            result = residue
        else:
            # Garner step: lift result to agree with residue mod p
            step = ((residue - result % p) * pow(modulus % p, -1, p)) % p
            result = result + modulus * step
        modulus *= p
    half = modulus // 2
    return np.where(result > half, result - modulus, result)


def _exact_product(x, y):
    """x @ y for integer arrays, exact, using BLAS whenever the bound allows"""
    bound = x.shape[1] * _max_abs(x) * _max_abs(y)
    if bound < FLOAT_EXACT_LIMIT:
        return np.rint(x.astype(float) @ y.astype(float)).astype(np.int64)
    return _modular_product(x.astype(object), y.astype(object), bound)


def _array_gcd(array, start):
    if not array.size:
        return start
    if array.dtype == object:
        return reduce(math.gcd, (int(v) for v in array.flat), start)
    return math.gcd(start, int(np.gcd.reduce(array.ravel())))


def _split_scalar(value):
    """Integer (P, R, Q) with value = (P + R*sqrt(m)) / Q"""
    if isinstance(value, QuadScalar):
        a, b = value.a, value.b
    else:
        a, b = Fraction(value), Fraction(0)
    q = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return int(a * q), int(b * q), q


class ExactMatrix:
    """Square matrix (a + b*sqrt(m)) / den kept in lowest terms"""

    def __init__(self, a, b=None, den=1, m=1):
        a = np.asarray(a)
        b = np.zeros_like(a) if b is None else np.asarray(b)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
            raise ValueError(f"ExactMatrix needs matching square numerator arrays, got {a.shape} and {b.shape}")
        if den <= 0:
            raise ValueError(f"Denominator must be positive, got {den}")
        if m == 1:
            a, b = a + b, np.zeros_like(a)

        g = _array_gcd(b, _array_gcd(a, int(den)))
        if g > 1:
            a, b, den = a // g, b // g, int(den) // g

        bound = max(_max_abs(a), _max_abs(b))
        self.a = _backend(a, bound)
        self.b = _backend(b, bound)
        self.den = int(den)
        self.m = m
        self.order = a.shape[0]
        self.rational = not self.b.any()

    # -- constructors --------------------------------------------------

    @classmethod
    def zeros(cls, order, m=1):
        return cls(np.zeros((order, order), dtype=np.int64), m=m)

    @classmethod
    def identity(cls, order, m=1):
        return cls(np.eye(order, dtype=np.int64), m=m)

    @classmethod
    def from_integers(cls, array, m=1):
        return cls(np.asarray(array, dtype=np.int64), m=m)

    @classmethod
    def diagonal(cls, values, m=1):
        """Diagonal matrix from ints, Fractions or QuadScalars"""
        parts = [_split_scalar(v) for v in values]
        den = reduce(lambda x, y: x * y // math.gcd(x, y), (q for _, _, q in parts), 1)
        a = np.diag(np.array([p * (den // q) for p, _, q in parts], dtype=object))
        b = np.diag(np.array([r * (den // q) for _, r, q in parts], dtype=object))
        return cls(a, b, den, m)

    # -- arithmetic ----------------------------------------------------

    def _check_compatible(self, other):
        if not isinstance(other, ExactMatrix):
            raise TypeError(f"Expected ExactMatrix, got {type(other).__name__}")
        if other.m != self.m:
            raise RadicandMismatchError(self.m, other.m)
        if other.order != self.order:
            raise ValueError(f"Order mismatch: {self.order} vs {other.order}")

    def _combine(self, other, sign):
        self._check_compatible(other)
        den = self.den * other.den // math.gcd(self.den, other.den)
        f1, f2 = den // self.den, den // other.den
        bound = f1 * max(_max_abs(self.a), _max_abs(self.b)) + f2 * max(_max_abs(other.a), _max_abs(other.b))
        a1, b1 = _backend(self.a, bound), _backend(self.b, bound)
        a2, b2 = _backend(other.a, bound), _backend(other.b, bound)
        return ExactMatrix(a1 * f1 + sign * a2 * f2, b1 * f1 + sign * b2 * f2, den, self.m)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return ExactMatrix(-self.a, -self.b, self.den, self.m)

    def __matmul__(self, other):
        self._check_compatible(other)
        a = _exact_product(self.a, other.a)
        b = np.zeros_like(a)
        if not other.rational:
            b = b + _exact_product(self.a, other.b)
        if not self.rational:
            b = b + _exact_product(self.b, other.a)
        if not self.rational and not other.rational:
            a = a + self.m * _exact_product(self.b, other.b).astype(object)
        return ExactMatrix(a, b, self.den * other.den, self.m)

    def scale(self, value):
        """Multiply by a scalar (int, Fraction or QuadScalar of the same field)"""
        if isinstance(value, QuadScalar) and value.m != self.m and not value.is_rational():
            raise RadicandMismatchError(self.m, value.m)
        p, r, q = _split_scalar(value)
        bound = (abs(p) + self.m * abs(r)) * max(_max_abs(self.a), _max_abs(self.b))
        a, b = _backend(self.a, bound), _backend(self.b, bound)
        return ExactMatrix(p * a + self.m * r * b, p * b + r * a, self.den * q, self.m)

    def __mul__(self, value):
        if isinstance(value, ExactMatrix):
            return NotImplemented
        return self.scale(value)

    __rmul__ = __mul__

    @property
    def T(self):
        return ExactMatrix(self.a.T.copy(), self.b.T.copy(), self.den, self.m)

    def power(self, k):
        result = ExactMatrix.identity(self.order, self.m)
        for _ in range(k):
            result = result @ self
        return result

    def sandwich(self, left, right):
        """left @ self @ right for rational diagonal left/right, done by row and column scaling"""
        for factor in (left, right):
            self._check_compatible(factor)
            if not factor.rational or not factor.is_diagonal():
                raise ValueError("sandwich needs rational diagonal factors")
        row, col = np.diagonal(left.a), np.diagonal(right.a)
        bound = _max_abs(row) * _max_abs(col) * max(_max_abs(self.a), _max_abs(self.b))
        row = _backend(row, bound)[:, None]
        col = _backend(col, bound)[None, :]
        a, b = _backend(self.a, bound), _backend(self.b, bound)
        return ExactMatrix(row * a * col, row * b * col, self.den * left.den * right.den, self.m)

    # -- inspection ----------------------------------------------------

    def is_zero(self):
        return not self.a.any() and not self.b.any()

    def nonzero_mask(self):
        return (self.a != 0) | (self.b != 0)

    def nonzero_count(self):
        return int(self.nonzero_mask().sum())

    def is_diagonal(self):
        mask = self.nonzero_mask()
        np.fill_diagonal(mask, False)
        return not mask.any()

    def is_symmetric(self):
        return np.array_equal(self.a, self.a.T) and np.array_equal(self.b, self.b.T)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check_compatible(other)
        return self.den == other.den and np.array_equal(self.a, other.a) and np.array_equal(self.b, other.b)

    __hash__ = None

    def first_difference(self, other):
        """First (row, col) in row-major order where the two matrices differ, or None"""
        positions = np.argwhere((self - other).nonzero_mask())
        return tuple(int(v) for v in positions[0]) if len(positions) else None

    def first_nonzero(self):
        positions = np.argwhere(self.nonzero_mask())
        return tuple(int(v) for v in positions[0]) if len(positions) else None

    def entry(self, row, col):
        return QuadScalar(Fraction(int(self.a[row, col]), self.den), Fraction(int(self.b[row, col]), self.den), self.m)

    def diagonal_entries(self):
        return [self.entry(i, i) for i in range(self.order)]

    def trace(self):
        a = sum(int(v) for v in np.diagonal(self.a))
        b = sum(int(v) for v in np.diagonal(self.b))
        return QuadScalar(Fraction(a, self.den), Fraction(b, self.den), self.m)

    def to_float(self):
        return (self.a.astype(float) + math.sqrt(self.m) * self.b.astype(float)) / self.den

    def dump(self):
        """Text dump: header line then one space-separated row of scalars per line"""
        lines = [f"order {self.order}"]
        lines += [" ".join(str(self.entry(i, j)) for j in range(self.order)) for i in range(self.order)]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"ExactMatrix(order={self.order}, m={self.m}, den={self.den}, rational={self.rational})"


def exact_rank(matrix):
    """
    Rank of an integer matrix by fraction-free (Bareiss) elimination

    Args:
        matrix: 2D integer array-like, any shape

    Returns:
        int: rank over the rationals
    """
    work = np.array(matrix, dtype=object)
    if work.size == 0:
        return 0
    rows, cols = work.shape
    rank, previous = 0, 1
    for col in range(cols):
        candidates = [r for r in range(rank, rows) if work[r, col] != 0]
        if not candidates:
            continue
        pivot_row = candidates[0]
        if pivot_row != rank:
            work[[rank, pivot_row]] = work[[pivot_row, rank]]
        pivot = work[rank, col]
        below = work[rank + 1:, col].copy()
        work[rank + 1:, col + 1:] = (pivot * work[rank + 1:, col + 1:] - np.outer(below, work[rank, col + 1:])) // previous
        work[rank + 1:, col] = 0
        previous = pivot
        rank += 1
        if rank == rows:
            break
    return rank


def solve_rational(rows, rhs):
    """
    Solve a square rational system by Gauss-Jordan elimination

    Args:
        rows (list): coefficient rows (ints or Fractions)
        rhs (list): right-hand side

    Returns:
        list: Fractions, or None when the system is singular
    """
    size = len(rows)
    work = [[Fraction(v) for v in row] + [Fraction(t)] for row, t in zip(rows, rhs)]
    for col in range(size):
        pivot_row = next((r for r in range(col, size) if work[r][col] != 0), None)
        if pivot_row is None:
            return None
        work[col], work[pivot_row] = work[pivot_row], work[col]
        pivot = work[col][col]
        work[col] = [v / pivot for v in work[col]]
        for r in range(size):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [v - factor * p for v, p in zip(work[r], work[col])]
    return [row[-1] for row in work]
