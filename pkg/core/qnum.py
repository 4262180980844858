#!/usr/bin/env python3
"""
Quadratic Numbers - Exact arithmetic in Q(sqrt(m)) with rational coefficients
Scalars and dense polynomials used for every eigenvalue and characteristic polynomial check
"""

import math
import re
from fractions import Fraction
from functools import lru_cache

from core.errors import InvalidOperandError, RadicandMismatchError

# "a + b*sqrt(m)" with reduced rationals; a bare rational is accepted too
_RATIONAL = r"[+-]?\d+(?:/\d+)?"
_QUAD_PATTERN = re.compile(
    rf"^\s*({_RATIONAL})(?:\s*\+\s*({_RATIONAL})\s*\*\s*sqrt\(\s*(\d+)\s*\))?\s*$"
)


@lru_cache(maxsize=None)
def normalize_radicand(k):
    """
    Split a positive integer into a square part and a squarefree part

    Args:
        k (int): positive integer under the root

    Returns:
        tuple: (s, m) with k = s*s*m and m squarefree, so sqrt(k) = s*sqrt(m)
    """
    if k < 1:
        raise ValueError(f"Radicand must be a positive integer, got {k}")

    s, m, rest, p = 1, 1, k, 2
    while p * p <= rest:
        exponent = 0
        while rest % p == 0:
            rest //= p
            exponent += 1
        s *= p ** (exponent // 2)
        m *= p ** (exponent % 2)
        p += 1
    return s, m * rest


def is_squarefree(m):
    return m >= 1 and normalize_radicand(m)[0] == 1


def _format_rational(value):
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


class QuadScalar:
    """Immutable a + b*sqrt(m); m = 1 folds b into a so equality stays coefficient-wise"""

    __slots__ = ("a", "b", "m")

    def __init__(self, a=0, b=0, m=1):
        if not isinstance(m, int) or not is_squarefree(m):
            raise ValueError(f"Radicand must be a squarefree positive integer, got {m}")
        a, b = Fraction(a), Fraction(b)
        if m == 1:
            a, b = a + b, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", m)

    def __setattr__(self, name, value):
        raise AttributeError("QuadScalar is immutable")

    def __reduce__(self):
        return (QuadScalar, (self.a, self.b, self.m))

    @classmethod
    def sqrt_of(cls, k):
        """sqrt(k) for a positive integer k, expressed over its own squarefree radicand"""
        s, m = normalize_radicand(k)
        return cls(0, s, m) if m > 1 else cls(s, 0, 1)

    @classmethod
    def parse(cls, text, m=None):
        """
        Parse "a + b*sqrt(k)" or a bare rational

        Args:
            text (str): textual scalar, e.g. "3/2 + -1*sqrt(2)"
            m (int): radicand of the target context; a bare rational is placed there

        Returns:
            QuadScalar: parsed value
        """
        match = _QUAD_PATTERN.match(text)
        if not match:
            raise ValueError(f"Cannot parse scalar '{text}'; expected 'a + b*sqrt(m)' with rational a, b")

        try:
            a = Fraction(match.group(1))
            b = Fraction(match.group(2)) if match.group(2) is not None else None
        except ZeroDivisionError:
            raise ValueError(f"Cannot parse scalar '{text}': zero denominator")
        if b is None:
            return cls(a, 0, m or 1)

        s, radicand = normalize_radicand(int(match.group(3)))
        b = b * s
        if radicand == 1:
            a, b = a + b, Fraction(0)
        if m is None:
            return cls(a, b, radicand)
        if b == 0:
            return cls(a, 0, m)
        if radicand != m:
            raise RadicandMismatchError(radicand, m)
        return cls(a, b, m)

    def _coerce(self, other):
        if isinstance(other, QuadScalar):
            if other.m != self.m:
                raise RadicandMismatchError(self.m, other.m)
            return other
        if isinstance(other, (int, Fraction)):
            return QuadScalar(other, 0, self.m)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadScalar(self.a + other.a, self.b + other.b, self.m)

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.m)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadScalar(self.a - other.a, self.b - other.b, self.m)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadScalar(
            self.a * other.a + self.m * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.m,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return QuadScalar(self.a, -self.b, self.m)

    def norm(self):
        """Field norm a^2 - m*b^2; nonzero for every nonzero element since m is squarefree"""
        return self.a * self.a - self.m * self.b * self.b

    def inverse(self):
        if not self:
            raise InvalidOperandError("Cannot invert exact zero in Q(sqrt(%d))" % self.m)
        norm = self.norm()
        return QuadScalar(self.a / norm, -self.b / norm, self.m)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = QuadScalar(1, 0, self.m), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, QuadScalar):
            return NotImplemented
        if other.m != self.m:
            raise RadicandMismatchError(self.m, other.m)
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b, self.m))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def is_rational(self):
        return self.b == 0

    def is_integer(self):
        return self.b == 0 and self.a.denominator == 1

    def to_float(self):
        return float(self.a) + float(self.b) * math.sqrt(self.m)

    __float__ = to_float

    def __str__(self):
        return f"{_format_rational(self.a)} + {_format_rational(self.b)}*sqrt({self.m})"

    def __repr__(self):
        return f"QuadScalar({self})"


def quad_add(x, y):
    return x + y


def quad_mul(x, y):
    return x * y


def quad_inv(x):
    return x.inverse()


def quad_eq(x, y):
    return x == y


class QuadPolynomial:
    """Dense polynomial over Q(sqrt(m)), coefficients lowest degree first, trailing zeros trimmed"""

    def __init__(self, coeffs, m=1):
        scalars = [c if isinstance(c, QuadScalar) else QuadScalar(c, 0, m) for c in coeffs]
        for c in scalars:
            if c.m != m:
                raise RadicandMismatchError(m, c.m)
        while scalars and not scalars[-1]:
            scalars.pop()
        self.coeffs = tuple(scalars)
        self.m = m

    @classmethod
    def constant(cls, value, m=1):
        return cls([value], m)

    @classmethod
    def variable(cls, m=1):
        return cls([0, 1], m)

    @classmethod
    def from_roots(cls, roots, m=1):
        """Monic polynomial prod (t - root)"""
        result = cls.constant(1, m)
        for root in roots:
            result = result * cls([-root, 1], m)
        return result

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def coefficient(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else QuadScalar(0, 0, self.m)

    def _lift(self, other):
        if isinstance(other, QuadPolynomial):
            if other.m != self.m:
                raise RadicandMismatchError(self.m, other.m)
            return other
        if isinstance(other, (int, Fraction, QuadScalar)):
            return QuadPolynomial.constant(other, self.m)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        size = max(len(self.coeffs), len(other.coeffs))
        return QuadPolynomial([self.coefficient(k) + other.coefficient(k) for k in range(size)], self.m)

    __radd__ = __add__

    def __neg__(self):
        return QuadPolynomial([-c for c in self.coeffs], self.m)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return QuadPolynomial([], self.m)
        product = [QuadScalar(0, 0, self.m)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, left in enumerate(self.coeffs):
            for j, right in enumerate(other.coeffs):
                product[i + j] = product[i + j] + left * right
        return QuadPolynomial(product, self.m)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.m))

    def __call__(self, t):
        """Horner evaluation at a scalar"""
        result = QuadScalar(0, 0, self.m)
        for c in reversed(self.coeffs):
            result = result * t + c
        return result

    def shift_scale(self, alpha, beta):
        """q(t) = p(alpha*t + beta); degree preserved for alpha != 0"""
        alpha = alpha if isinstance(alpha, QuadScalar) else QuadScalar(alpha, 0, self.m)
        if not alpha:
            raise InvalidOperandError("shift_scale needs a nonzero scale factor")
        inner = QuadPolynomial([beta, alpha], self.m)
        result = QuadPolynomial([], self.m)
        for c in reversed(self.coeffs):
            result = result * inner + c
        return result

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = [f"({c})*t^{k}" for k, c in enumerate(self.coeffs) if c]
        return " + ".join(reversed(terms))

    def __repr__(self):
        return f"QuadPolynomial({self})"


def poly_eval(p, t):
    return p(t)


def poly_mul(p, q):
    return p * q


def poly_sub(p, q):
    return p - q


def poly_shift_scale(p, alpha, beta):
    return p.shift_scale(alpha, beta)
