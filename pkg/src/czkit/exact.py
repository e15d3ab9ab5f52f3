"""Exact arithmetic in the ring Q[sqrt(pi), i].

Every constant in the rest of the package -- Riesz multiplier constants,
fundamental-solution normalizations, the coefficients of the Bessel-type
power series -- is a rational number times an integer power of sqrt(pi)
times a power of i.  This module provides that number type (``SymScalar``),
finite formal sums of such numbers over distinct bases (``SymSum``), the
Gamma function at positive half-integers, and the generalized binomial
coefficient.

Floats appear only at the explicit ``to_complex``/``to_float`` boundary;
all other operations are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction

_I_POWERS = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)

RationalLike = Union[int, Fraction]


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


@dataclass(frozen=True)
class SymScalar:
    """Exact number of the form q * sqrt(pi)**h * i**k.

    q is rational, h is any integer (negative powers of sqrt(pi) are
    allowed), and k is a power of i taken mod 4.  Since i^2 = -1 is already
    rational, construction folds even i-powers into the sign of q, leaving
    the unique canonical form with k in {0, 1}; the zero element has
    h == k == 0.  Any k may be passed in.
    """

    q: Fraction
    h: int = 0
    k: int = 0

    def __post_init__(self) -> None:
        q = _as_fraction(self.q)
        if q == 0:
            object.__setattr__(self, "q", Fraction(0))
            object.__setattr__(self, "h", 0)
            object.__setattr__(self, "k", 0)
        else:
            k = self.k % 4
            if k >= 2:
                q = -q
                k -= 2
            object.__setattr__(self, "q", q)
            object.__setattr__(self, "k", k)

    @staticmethod
    def zero() -> "SymScalar":
        return SymScalar(Fraction(0))

    @staticmethod
    def one() -> "SymScalar":
        return SymScalar(Fraction(1))

    @staticmethod
    def imag_unit() -> "SymScalar":
        return SymScalar(Fraction(1), 0, 1)

    @staticmethod
    def from_rational(x: RationalLike) -> "SymScalar":
        return SymScalar(_as_fraction(x))

    def is_zero(self) -> bool:
        return self.q == 0

    def is_real(self) -> bool:
        return self.k == 0 or self.q == 0

    def __mul__(self, other: "SymScalar | RationalLike") -> "SymScalar":
        if isinstance(other, SymScalar):
            return SymScalar(self.q * other.q, self.h + other.h, self.k + other.k)
        return SymScalar(self.q * _as_fraction(other), self.h, self.k)

    __rmul__ = __mul__

    def __truediv__(self, other: "SymScalar | RationalLike") -> "SymScalar":
        if isinstance(other, SymScalar):
            if other.q == 0:
                raise ZeroDivisionError("division by zero SymScalar")
            return SymScalar(self.q / other.q, self.h - other.h, self.k - other.k)
        d = _as_fraction(other)
        if d == 0:
            raise ZeroDivisionError("division by zero")
        return SymScalar(self.q / d, self.h, self.k)

    def __neg__(self) -> "SymScalar":
        return SymScalar(-self.q, self.h, self.k)

    def __add__(self, other: "SymScalar") -> "SymScalar":
        # Defined only on a shared basis (or with a zero side); use SymSum
        # for general mixed-basis sums.
        if not isinstance(other, SymScalar):
            return NotImplemented
        if self.q == 0:
            return other
        if other.q == 0:
            return self
        if (self.h, self.k) != (other.h, other.k):
            raise ValueError(
                f"mixed-basis addition: ({self.h},{self.k}) vs ({other.h},{other.k}); "
                "use SymSum"
            )
        return SymScalar(self.q + other.q, self.h, self.k)

    def __sub__(self, other: "SymScalar") -> "SymScalar":
        return self + (-other)

    def __pow__(self, n: int) -> "SymScalar":
        if not isinstance(n, int):
            raise TypeError("integer powers only")
        if n < 0:
            return SymScalar.one() / (self ** (-n))
        out = SymScalar.one()
        for _ in range(n):
            out = out * self
        return out

    def to_sum(self) -> "SymSum":
        return SymSum.from_scalar(self)

    def to_complex(self) -> complex:
        if self.q == 0:
            return 0j
        return float(self.q) * math.pi ** (self.h / 2.0) * _I_POWERS[self.k]

    def to_float(self) -> float:
        z = self.to_complex()
        if z.imag != 0.0:
            raise ValueError(f"{self!r} is not real")
        return z.real

    def __repr__(self) -> str:
        if self.q == 0:
            return "SymScalar(0)"
        parts = [str(self.q)]
        if self.h:
            parts.append(f"sqrt(pi)^{self.h}")
        if self.k:
            parts.append(f"i^{self.k}")
        return "SymScalar(" + " * ".join(parts) + ")"


class SymSum:
    """Finite formal sum over distinct (h, k) bases with rational coefficients.

    Canonical form: no zero coefficients stored.  Equality is componentwise.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Fraction] | None = None):
        self.terms: dict[tuple[int, int], Fraction] = {}
        if terms:
            for (h, k), coef in terms.items():
                s = SymScalar(_as_fraction(coef), h, k)  # canonicalizes the basis
                if s.q != 0:
                    cur = self.terms.get((s.h, s.k), Fraction(0)) + s.q
                    if cur == 0:
                        self.terms.pop((s.h, s.k), None)
                    else:
                        self.terms[(s.h, s.k)] = cur

    @staticmethod
    def from_scalar(s: SymScalar) -> "SymSum":
        if s.q == 0:
            return SymSum()
        return SymSum({(s.h, s.k): s.q})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SymSum | SymScalar") -> "SymSum":
        if isinstance(other, SymScalar):
            other = other.to_sum()
        out = dict(self.terms)
        for basis, coef in other.terms.items():
            c = out.get(basis, Fraction(0)) + coef
            if c == 0:
                out.pop(basis, None)
            else:
                out[basis] = c
        res = SymSum()
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self) -> "SymSum":
        res = SymSum()
        res.terms = {b: -c for b, c in self.terms.items()}
        return res

    def __sub__(self, other: "SymSum | SymScalar") -> "SymSum":
        if isinstance(other, SymScalar):
            other = other.to_sum()
        return self + (-other)

    def __mul__(self, other: "SymScalar | RationalLike") -> "SymSum":
        res = SymSum()
        if isinstance(other, SymScalar):
            if other.q == 0:
                return res
            for (h, k), c in self.terms.items():
                s = SymScalar(c * other.q, h + other.h, k + other.k)
                res.terms[(s.h, s.k)] = s.q
            return res
        f = _as_fraction(other)
        if f == 0:
            return res
        res.terms = {b: c * f for b, c in self.terms.items()}
        return res

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SymScalar):
            other = other.to_sum()
        if not isinstance(other, SymSum):
            return NotImplemented
        return self.terms == other.terms

    def as_scalar(self) -> SymScalar:
        """Collapse to a SymScalar; requires at most one stored basis."""
        if not self.terms:
            return SymScalar.zero()
        if len(self.terms) > 1:
            raise ValueError(f"sum spans {len(self.terms)} bases, not scalar: {self!r}")
        (h, k), c = next(iter(self.terms.items()))
        return SymScalar(c, h, k)

    def to_complex(self) -> complex:
        return sum(
            (float(c) * math.pi ** (h / 2.0) * _I_POWERS[k] for (h, k), c in self.terms.items()),
            0j,
        )

    def __repr__(self) -> str:
        if not self.terms:
            return "SymSum(0)"
        bits = [repr(SymScalar(c, h, k)) for (h, k), c in sorted(self.terms.items())]
        return "SymSum[" + " + ".join(bits) + "]"


def gamma_half_integer(a: RationalLike) -> SymScalar:
    """Gamma(a) for a a positive integer or half-integer, exactly.

    Integer a gives (a-1)! with no sqrt(pi); half-integer a gives a rational
    multiple of sqrt(pi).  Anything else is rejected.
    """
    a = _as_fraction(a)
    if a <= 0:
        raise ValueError(f"Gamma argument must be positive, got {a}")
    twice = 2 * a
    if twice.denominator != 1:
        raise ValueError(f"Gamma argument must be a half-integer, got {a}")
    if a.denominator == 1:
        return SymScalar(Fraction(math.factorial(a.numerator - 1)))
    # a = m + 1/2 with m >= 0:  Gamma(m + 1/2) = (2m)! / (4^m m!) * sqrt(pi)
    m = (a.numerator - 1) // 2
    q = Fraction(math.factorial(2 * m), 4**m * math.factorial(m))
    return SymScalar(q, 1, 0)


def binomial(a: RationalLike, m: int) -> Fraction:
    """Generalized binomial coefficient C(a, m) = a(a-1)...(a-m+1)/m!.

    Works for any rational a and non-negative integer m; C(a, 0) = 1, and
    C(a, m) = 0 when a is a non-negative integer smaller than m.
    """
    if m < 0:
        raise ValueError("lower index must be non-negative")
    a = _as_fraction(a)
    num = Fraction(1)
    for t in range(m):
        num *= a - t
    return num / math.factorial(m)


def riesz_multiplier(degree: int, dim: int) -> SymScalar:
    """Fourier multiplier constant of the degree-d higher-order Riesz transform.

    For a homogeneous harmonic polynomial P of degree d >= 1 in dimension
    n >= 2, convolution with P(x)/|x|^(n+d) acts on the frequency side as
    multiplication by this constant times P(xi)/|xi|^d.  The value is

        i^(-d) * pi^(n/2) * Gamma(d/2) / Gamma((n+d)/2).
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if dim < 2:
        raise ValueError("dimension must be >= 2")
    ratio = gamma_half_integer(Fraction(degree, 2)) / gamma_half_integer(Fraction(dim + degree, 2))
    return SymScalar(ratio.q, ratio.h + dim, (ratio.k - degree) % 4)


def fundamental_normalization(dim: int) -> SymScalar:
    """Constant c with Fourier transform of c/|x|^(n-1) equal to 1/|xi|.

    Exactly Gamma((n-1)/2) / (2 pi^(n/2) Gamma(1/2)).
    """
    if dim < 2:
        raise ValueError("dimension must be >= 2")
    num = gamma_half_integer(Fraction(dim - 1, 2))
    half = SymScalar(Fraction(1, 2), -dim, 0)  # 1 / (2 pi^(n/2))
    return num * half / gamma_half_integer(Fraction(1, 2))
