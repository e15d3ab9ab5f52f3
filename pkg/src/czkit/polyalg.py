"""Sparse multivariate polynomial algebra over the rationals.

Polynomials are stored as a map from dense exponent tuples to Fraction
coefficients.  Everything here is exact: evaluation, differentiation,
the Laplacian, differential-operator application P(d)Q, decomposition of
a homogeneous polynomial into harmonic layers H_k * |x|^(2k), exact
single-divisor division, and closed-form monomial integrals over the
unit sphere (normalized surface measure).

The scale stays small (a handful of variables, degrees in the teens), so
exponent vectors are plain tuples and no term-order tricks beyond graded
lexicographic division are needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import SymScalar, gamma_half_integer

Monomial = tuple[int, ...]


def _as_coef(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficients must be rational, got {type(c).__name__}")


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables with Fraction coefficients.

    Instances are immutable by convention: no method mutates ``terms``
    after construction, so values may be shared freely.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[Monomial, Fraction] | None = None):
        if nvars < 1:
            raise ValueError("need at least one variable")
        self.nvars = nvars
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coef in terms.items():
                if len(mono) != nvars:
                    raise ValueError(f"exponent vector {mono} has wrong length")
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in {mono}")
                c = _as_coef(coef)
                if c != 0:
                    clean[tuple(mono)] = c
        self.terms = clean

    # ---------------------------------------------------------- constructors

    @staticmethod
    def zero(nvars: int) -> "MultiPoly":
        return MultiPoly(nvars)

    @staticmethod
    def constant(nvars: int, c) -> "MultiPoly":
        return MultiPoly(nvars, {(0,) * nvars: _as_coef(c)})

    @staticmethod
    def variable(nvars: int, i: int) -> "MultiPoly":
        mono = tuple(1 if j == i else 0 for j in range(nvars))
        return MultiPoly(nvars, {mono: Fraction(1)})

    @staticmethod
    def monomial(nvars: int, expo: Sequence[int], c=1) -> "MultiPoly":
        return MultiPoly(nvars, {tuple(expo): _as_coef(c)})

    @staticmethod
    def radius2(nvars: int) -> "MultiPoly":
        """|x|^2 = x_1^2 + ... + x_n^2."""
        terms = {}
        for i in range(nvars):
            mono = tuple(2 if j == i else 0 for j in range(nvars))
            terms[mono] = Fraction(1)
        return MultiPoly(nvars, terms)

    @staticmethod
    def radius_power(nvars: int, k: int) -> "MultiPoly":
        """|x|^(2k)."""
        out = MultiPoly.constant(nvars, 1)
        r2 = MultiPoly.radius2(nvars)
        for _ in range(k):
            out = out * r2
        return out

    # ------------------------------------------------------------- structure

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        degs = {sum(m) for m in self.terms}
        return len(degs) == 1

    def homogeneous_degree(self) -> int:
        if not self.is_homogeneous() or self.is_zero():
            raise ValueError("not a nonzero homogeneous polynomial")
        return self.total_degree()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # ------------------------------------------------------------ arithmetic

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable-count mismatch")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for mono, coef in other.terms.items():
            c = out.get(mono, Fraction(0)) + coef
            if c == 0:
                out.pop(mono, None)
            else:
                out[mono] = c
        res = MultiPoly(self.nvars)
        res.terms = out
        return res

    def __neg__(self) -> "MultiPoly":
        res = MultiPoly(self.nvars)
        res.terms = {m: -c for m, c in self.terms.items()}
        return res

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            out: dict[Monomial, Fraction] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    mono = tuple(a + b for a, b in zip(m1, m2))
                    c = out.get(mono, Fraction(0)) + c1 * c2
                    if c == 0:
                        out.pop(mono, None)
                    else:
                        out[mono] = c
            res = MultiPoly(self.nvars)
            res.terms = out
            return res
        c = _as_coef(other)
        if c == 0:
            return MultiPoly.zero(self.nvars)
        res = MultiPoly(self.nvars)
        res.terms = {m: v * c for m, v in self.terms.items()}
        return res

    __rmul__ = __mul__

    # -------------------------------------------------------------- calculus

    def partial(self, i: int) -> "MultiPoly":
        out: dict[Monomial, Fraction] = {}
        for mono, coef in self.terms.items():
            e = mono[i]
            if e == 0:
                continue
            new = list(mono)
            new[i] = e - 1
            key = tuple(new)
            c = out.get(key, Fraction(0)) + coef * e
            if c == 0:
                out.pop(key, None)
            else:
                out[key] = c
        res = MultiPoly(self.nvars)
        res.terms = out
        return res

    def differentiate(self, alpha: Sequence[int]) -> "MultiPoly":
        """Mixed partial d^alpha, computed termwise."""
        out: dict[Monomial, Fraction] = {}
        for mono, coef in self.terms.items():
            c = coef
            new = list(mono)
            ok = True
            for i, a in enumerate(alpha):
                e = mono[i]
                if e < a:
                    ok = False
                    break
                for t in range(a):
                    c *= e - t
                new[i] = e - a
            if not ok or c == 0:
                continue
            key = tuple(new)
            acc = out.get(key, Fraction(0)) + c
            if acc == 0:
                out.pop(key, None)
            else:
                out[key] = acc
        res = MultiPoly(self.nvars)
        res.terms = out
        return res

    # ------------------------------------------------------------ evaluation

    def eval_exact(self, point: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for mono, coef in self.terms.items():
            v = coef
            for x, e in zip(point, mono):
                if e:
                    v *= _as_coef(x) ** e
            total += v
        return total

    def float_evaluator(self):
        """Return a vectorized evaluator: (m, nvars) float array -> (m,) floats."""
        if not self.terms:
            return lambda pts: np.zeros(len(pts))
        monos = np.array(sorted(self.terms), dtype=np.int64)
        coefs = np.array([float(self.terms[tuple(m)]) for m in monos])

        def ev(pts: np.ndarray) -> np.ndarray:
            pts = np.asarray(pts, dtype=float)
            powers = pts[:, None, :] ** monos[None, :, :]
            return powers.prod(axis=2) @ coefs

        return ev

    def __repr__(self) -> str:
        if not self.terms:
            return "MultiPoly(0)"
        bits = []
        for mono in sorted(self.terms, key=lambda m: (sum(m), m), reverse=True):
            c = self.terms[mono]
            var = "*".join(f"x{i + 1}^{e}" for i, e in enumerate(mono) if e)
            bits.append(f"{c}" + (f"*{var}" if var else ""))
        return "MultiPoly(" + " + ".join(bits) + ")"


def laplacian(p: MultiPoly) -> MultiPoly:
    out = MultiPoly.zero(p.nvars)
    for i in range(p.nvars):
        out = out + p.partial(i).partial(i)
    return out


def apply_diffop(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """P(d) applied to Q: each monomial of P becomes the mixed partial."""
    p._check(q)
    out = MultiPoly.zero(p.nvars)
    for mono, coef in p.terms.items():
        out = out + q.differentiate(mono) * coef
    return out


@dataclass(frozen=True)
class HarmonicComponent:
    """Homogeneous harmonic polynomial of a stated degree."""

    degree: int
    poly: MultiPoly

    def __post_init__(self) -> None:
        if self.poly.is_zero():
            raise ValueError("component polynomial must be nonzero")
        if self.poly.homogeneous_degree() != self.degree:
            raise ValueError("stated degree does not match the polynomial")
        if not laplacian(self.poly).is_zero():
            raise ValueError("component polynomial is not harmonic")


def harmonic_decompose(p: MultiPoly) -> list[tuple[int, MultiPoly]]:
    """Write homogeneous P as sum over k of H_(d-2k) * |x|^(2k), H harmonic.

    Returns the list of (k, H) pairs with H nonzero, ordered by k.  Works by
    recursion on the Laplacian: if P = sum H_k |x|^(2k) then
    lap(P) = sum_k>=1 mu_k H_k |x|^(2k-2) with mu_k = 2k(2d - 2k + n - 2),
    which determines every H_k with k >= 1 from the decomposition of lap(P);
    the harmonic head is the remainder.
    """
    if p.is_zero():
        return []
    n = p.nvars
    d = p.homogeneous_degree()
    if d <= 1:
        return [(0, p)]
    lower = harmonic_decompose(laplacian(p))
    comps: dict[int, MultiPoly] = {}
    rest = MultiPoly.zero(n)
    for t, h in lower:
        k = t + 1
        mu = 2 * k * (2 * d - 2 * k + n - 2)
        hk = h * Fraction(1, mu)
        comps[k] = hk
        rest = rest + hk * MultiPoly.radius_power(n, k)
    head = p - rest
    if not head.is_zero():
        if not laplacian(head).is_zero():
            raise AssertionError("harmonic head failed the Laplacian check")
        comps[0] = head
    return sorted(comps.items())


def _grlex_leading(p: MultiPoly) -> Monomial:
    return max(p.terms, key=lambda m: (sum(m), m))


def divide_exact(p: MultiPoly, d: MultiPoly) -> MultiPoly | None:
    """Return Q with P = D*Q exactly, or None when no such Q exists.

    Single-divisor long division in graded-lexicographic order; the result
    is re-verified by exact multiplication before being returned.
    """
    p._check(d)
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return MultiPoly.zero(p.nvars)
    lead_d = _grlex_leading(d)
    cd = d.terms[lead_d]
    rem = p
    quot = MultiPoly.zero(p.nvars)
    while not rem.is_zero():
        lead_r = _grlex_leading(rem)
        diff = tuple(a - b for a, b in zip(lead_r, lead_d))
        if any(e < 0 for e in diff):
            return None
        qterm = MultiPoly.monomial(p.nvars, diff, rem.terms[lead_r] / cd)
        quot = quot + qterm
        rem = rem - qterm * d
    if not (quot * d - p).is_zero():
        raise AssertionError("division verification failed")
    return quot


def sphere_monomial_integral(alpha: Sequence[int], dim: int) -> SymScalar:
    """Integral of x^alpha over the unit sphere, normalized measure.

    Zero when any exponent is odd; otherwise
        Gamma(n/2) * prod Gamma((a_i+1)/2) / (Gamma((n+|a|)/2) * pi^(n/2)).
    The result is always rational (sqrt(pi) powers cancel).
    """
    alpha = tuple(alpha)
    if len(alpha) != dim:
        raise ValueError("exponent vector length must equal the dimension")
    if any(a < 0 for a in alpha):
        raise ValueError("negative exponent")
    if any(a % 2 for a in alpha):
        return SymScalar.zero()
    total = sum(alpha)
    num = gamma_half_integer(Fraction(dim, 2))
    for a in alpha:
        num = num * gamma_half_integer(Fraction(a + 1, 2))
    denom = gamma_half_integer(Fraction(dim + total, 2)) * SymScalar(Fraction(1), dim, 0)
    out = num / denom
    if out.h != 0 or out.k != 0:
        raise AssertionError("sphere integral did not reduce to a rational")
    return out


def sphere_mean(p: MultiPoly, dim: int | None = None) -> Fraction:
    """Exact mean of a polynomial over the unit sphere."""
    n = dim if dim is not None else p.nvars
    total = Fraction(0)
    for mono, coef in p.terms.items():
        total += coef * sphere_monomial_integral(mono, n).q
    return total


def sup_norm_on_sphere(p: MultiPoly, samples: int = 4096, seed: int = 7) -> float:
    """Estimate of sup |P| on the unit sphere by dense random sampling."""
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((samples, p.nvars))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    ev = p.float_evaluator()
    return float(np.max(np.abs(ev(pts)))) if samples else 0.0


# ------------------------------------------------------------- text format

def poly_to_text(p: MultiPoly) -> str:
    """One term per line: coefficient as num[/den], then the exponents."""
    lines = []
    for mono in sorted(p.terms, key=lambda m: (sum(m), m), reverse=True):
        c = p.terms[mono]
        coef = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        lines.append(" ".join([coef] + [str(e) for e in mono]))
    return "\n".join(lines)


def poly_from_text(text: str, nvars: int | None = None) -> MultiPoly:
    """Parse the one-term-per-line format; '#' comments and blanks ignored."""
    terms: dict[Monomial, Fraction] = {}
    seen_nvars = nvars
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        coef = Fraction(fields[0])
        expo = tuple(int(f) for f in fields[1:])
        if seen_nvars is None:
            seen_nvars = len(expo)
        if len(expo) != seen_nvars:
            raise ValueError(f"inconsistent variable count on line: {raw!r}")
        terms[expo] = terms.get(expo, Fraction(0)) + coef
    if seen_nvars is None:
        raise ValueError("no polynomial terms found")
    return MultiPoly(seen_nvars, terms)
