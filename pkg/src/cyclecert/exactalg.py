"""Exact rational univariate polynomials with Sturm-chain sign certification.

Every coefficient is a `fractions.Fraction`; nothing here ever rounds.
Root counts, root isolation and "negative on the positive axis" verdicts
are all backed by Sturm chains built on the square-free part, so each
answer is a certified integer or sign rather than an approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction


class ZeroPolynomial(ValueError):
    """The operation requires a polynomial that is not identically zero."""


def _rat(x) -> Rat:
    """Coerce ints, Fractions and 'num/den' strings; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) or isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact coefficient expected, got {type(x).__name__}")


def _sign(x: Rat) -> int:
    return (x > 0) - (x < 0)


class RatPoly:
    """Dense univariate polynomial over Q, coefficients indexed by degree.

    Immutable.  The zero polynomial has ``degree == -1`` (sentinel) and an
    empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("RatPoly is immutable")

    # -- basic queries ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading_coefficient(self) -> Rat:
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, i: int) -> Rat:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "RatPoly") -> "RatPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPoly(out)

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __neg__(self) -> "RatPoly":
        return RatPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, RatPoly):
            if self.is_zero or other.is_zero:
                return RatPoly()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        out[i + j] += a * b
            return RatPoly(out)
        c = _rat(other)
        return RatPoly([c * a for a in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RatPoly":
        if n < 0:
            raise ValueError("negative power")
        out = RatPoly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, RatPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # -- calculus & substitution -------------------------------------------

    def derivative(self) -> "RatPoly":
        return RatPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def substitute_square(self) -> "RatPoly":
        """p(s) -> p(r^2): spreads coefficient i to degree 2i."""
        out = [Fraction(0)] * (2 * len(self.coeffs))
        for i, c in enumerate(self.coeffs):
            out[2 * i] = c
        return RatPoly(out)

    def shift_up(self, m: int) -> "RatPoly":
        """Multiply by r^m."""
        if self.is_zero:
            return self
        return RatPoly([Fraction(0)] * m + list(self.coeffs))

    def factor_out_r(self) -> tuple[int, "RatPoly"]:
        """Write p = r^m * q with q(0) != 0; returns (m, q)."""
        if self.is_zero:
            raise ZeroPolynomial("cannot factor the zero polynomial")
        m = 0
        while self.coeffs[m] == 0:
            m += 1
        return m, RatPoly(self.coeffs[m:])

    # -- evaluation ----------------------------------------------------------

    def __call__(self, x) -> Rat:
        x = _rat(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_f64(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    # -- division, gcd, square-free -----------------------------------------

    def __divmod__(self, other: "RatPoly"):
        if other.is_zero:
            raise ZeroPolynomial("division by the zero polynomial")
        rem = list(self.coeffs)
        dd, dv = len(rem) - 1, other.degree
        lead = other.leading_coefficient
        quo = [Fraction(0)] * max(dd - dv + 1, 0)
        while len(rem) - 1 >= dv and rem:
            k = len(rem) - 1 - dv
            q = rem[-1] / lead
            quo[k] = q
            for i, c in enumerate(other.coeffs):
                rem[k + i] -= q * c
            while rem and rem[-1] == 0:
                rem.pop()
        return RatPoly(quo), RatPoly(rem)

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        q, _ = divmod(self, other)
        return q

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        _, r = divmod(self, other)
        return r

    def primitive(self) -> "RatPoly":
        """Divide out the positive rational content; sign pattern unchanged."""
        if self.is_zero:
            return self
        num = 0
        den = 1
        for c in self.coeffs:
            num = math.gcd(num, c.numerator)
            den = math.lcm(den, c.denominator)
        content = Fraction(num, den)
        return RatPoly([c / content for c in self.coeffs])

    def monic(self) -> "RatPoly":
        if self.is_zero:
            return self
        lead = self.leading_coefficient
        return RatPoly([c / lead for c in self.coeffs])

    def __repr__(self) -> str:
        return f"RatPoly({self.format()})"

    def format(self, var: str = "r") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                term = str(c)
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                term = f"{mag}{var}" + (f"^{i}" if i > 1 else "")
                term = ("-" if c < 0 else "") + term
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """Monic gcd over Q (Euclid with primitive renormalisation)."""
    while not b.is_zero:
        a, b = b, (a % b).primitive()
    return a.monic()


def square_free_part(p: RatPoly) -> RatPoly:
    if p.is_zero:
        raise ZeroPolynomial("square-free part of the zero polynomial")
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p
    return p // g


def _variations(values: Sequence[Rat]) -> int:
    signs = [_sign(v) for v in values if v != 0]
    return sum(1 for i in range(len(signs) - 1) if signs[i] != signs[i + 1])


@dataclass(frozen=True)
class SturmChain:
    """Signed remainder chain of the square-free part of ``source``.

    Chain elements are positive rational multiples of the classical negated
    remainders (each is renormalised to its primitive part, which leaves
    every sign evaluation unchanged but keeps coefficient growth tame).
    """

    source: RatPoly
    chain: tuple[RatPoly, ...]

    @staticmethod
    def build(p: RatPoly) -> "SturmChain":
        if p.is_zero:
            raise ZeroPolynomial("Sturm chain of the zero polynomial")
        f = square_free_part(p).primitive()
        seq = [f]
        if f.degree >= 1:
            seq.append(f.derivative().primitive())
            while seq[-1].degree >= 1:
                rem = seq[-2] % seq[-1]
                if rem.is_zero:
                    # cannot happen for a square-free head; guard anyway
                    break
                seq.append((-rem).primitive())
        return SturmChain(p, tuple(seq))

    @property
    def square_free(self) -> RatPoly:
        return self.chain[0]

    def variations_at(self, x: Rat) -> int:
        return _variations([q(x) for q in self.chain])

    def variations_at_pos_inf(self) -> int:
        return _variations([q.leading_coefficient for q in self.chain])

    def variations_at_neg_inf(self) -> int:
        return _variations(
            [q.leading_coefficient * (-1) ** q.degree for q in self.chain]
        )

    def count(self, a: Rat, b: Rat) -> int:
        """Distinct real roots of ``source`` in the half-open interval (a, b]."""
        if not a < b:
            raise ValueError("need a < b")
        return self.variations_at(a) - self.variations_at(b)

    def count_above(self, a: Rat) -> int:
        """Distinct real roots in (a, +oo)."""
        return self.variations_at(a) - self.variations_at_pos_inf()

    def count_all(self) -> int:
        return self.variations_at_neg_inf() - self.variations_at_pos_inf()


def count_roots(p: RatPoly, a, b) -> int:
    """Number of distinct real roots of p in (a, b]."""
    return SturmChain.build(p).count(_rat(a), _rat(b))


def count_positive_roots(p: RatPoly) -> int:
    """Number of distinct real roots of p in (0, +oo)."""
    return SturmChain.build(p).count_above(Fraction(0))


def count_nonnegative_roots(p: RatPoly) -> int:
    """Number of distinct real roots of p in [0, +oo); a root at 0 counts."""
    if p.is_zero:
        raise ZeroPolynomial("root count of the zero polynomial")
    at_zero = 1 if p(0) == 0 else 0
    return count_positive_roots(p) + at_zero


def count_real_roots(p: RatPoly) -> int:
    """Number of distinct real roots of p on the whole line."""
    return SturmChain.build(p).count_all()


def cauchy_root_bound(p: RatPoly) -> Rat:
    """B with every real root of p strictly inside (-B, B)."""
    if p.is_zero:
        raise ZeroPolynomial("root bound of the zero polynomial")
    if p.degree == 0:
        return Fraction(1)
    lead = abs(p.leading_coefficient)
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lead


@dataclass(frozen=True)
class NegativityWitness:
    """Audit record for an is-negative-on-(0, oo) decision."""

    negative: bool
    factored_power: int
    positive_root_count: int
    sample: Rat
    sample_value: Rat
    leading_coefficient: Rat

    def __bool__(self) -> bool:
        return self.negative


def is_negative_on_positive_axis(p: RatPoly) -> NegativityWitness:
    """Decide whether p(r) < 0 for every r > 0, with an audit witness.

    Procedure: factor out the maximal power r^m, require (a) zero distinct
    roots in (0, oo) by Sturm, (b) a negative value at one positive sample,
    (c) a negative leading coefficient.  (a) and (b) already force the
    conclusion; (c) is kept as a redundant audit check.
    """
    if p.is_zero:
        raise ZeroPolynomial("negativity test on the zero polynomial")
    m, q = p.factor_out_r()
    if q.degree == 0:
        n_pos = 0
    else:
        n_pos = count_positive_roots(q)
    sample = Fraction(1)
    value = p(sample)
    negative = n_pos == 0 and value < 0 and p.leading_coefficient < 0
    return NegativityWitness(
        negative=negative,
        factored_power=m,
        positive_root_count=n_pos,
        sample=sample,
        sample_value=value,
        leading_coefficient=p.leading_coefficient,
    )


@dataclass(frozen=True)
class RootInterval:
    """Half-open interval (lo, hi] containing exactly one distinct real root."""

    chain: SturmChain
    lo: Rat
    hi: Rat

    def refined(self, width) -> "RootInterval":
        """Shrink by Sturm bisection until hi - lo <= width."""
        width = _rat(width)
        lo, hi = self.lo, self.hi
        while hi - lo > width:
            mid = (lo + hi) / 2
            if self.chain.count(lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        return RootInterval(self.chain, lo, hi)

    @property
    def width(self) -> Rat:
        return self.hi - self.lo

    def midpoint(self) -> Rat:
        return (self.lo + self.hi) / 2

    def approx(self, width=Fraction(1, 10**12)) -> float:
        r = self.refined(width)
        return float(r.midpoint())


def real_roots_isolated(p: RatPoly) -> list[RootInterval]:
    """Disjoint ordered isolating intervals, one per distinct real root."""
    if p.is_zero:
        raise ZeroPolynomial("root isolation of the zero polynomial")
    chain = SturmChain.build(p)
    if chain.square_free.degree == 0:
        return []
    bound = cauchy_root_bound(chain.square_free)
    found: list[RootInterval] = []
    stack = [(-bound, bound, chain.count(-bound, bound))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            found.append(RootInterval(chain, lo, hi))
            continue
        mid = (lo + hi) / 2
        n_left = chain.count(lo, mid)
        stack.append((lo, mid, n_left))
        stack.append((mid, hi, n - n_left))
    found.sort(key=lambda iv: iv.lo)
    return found


def positive_root_intervals(p: RatPoly) -> list[RootInterval]:
    """Isolating intervals of the strictly positive roots, with lo >= 0."""
    out = []
    for iv in real_roots_isolated(p):
        if iv.hi <= 0:
            continue
        if iv.lo < 0:
            # Interval straddles the origin; keep it only if its single root
            # lies in (0, hi], and clamp (still isolating: a subinterval).
            if iv.chain.count(Fraction(0), iv.hi) != 1:
                continue
            iv = RootInterval(iv.chain, Fraction(0), iv.hi)
        out.append(iv)
    return out
