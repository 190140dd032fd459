"""Finite Fourier-radial expansions sum_i r^i (a0 + sum_j a_j cos j0 + b_j sin j0).

This is the exact polar-coordinate algebra: conversion from cartesian
polynomials, products via product-to-sum identities, formal derivatives,
theta-averaging, and the coefficient-sum majorant that turns a trig-radial
expansion into a univariate polynomial bound.

All coefficients are rational and every operation is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .bipoly import BiPoly
from .exactalg import Rat, RatPoly, _rat

HALF = Fraction(1, 2)


class NotDivisibleByR(ValueError):
    """div_r needs every stored radial power to be at least one."""


class FourierSlice:
    """One radial slice: a0 + sum_j a_j cos(j theta) + b_j sin(j theta).

    Harmonic maps never store zero coefficients; immutable.
    """

    __slots__ = ("a0", "cos", "sin")

    def __init__(self, a0=0, cos=None, sin=None):
        object.__setattr__(self, "a0", _rat(a0))
        object.__setattr__(
            self, "cos", {j: _rat(c) for j, c in (cos or {}).items() if c}
        )
        object.__setattr__(
            self, "sin", {j: _rat(c) for j, c in (sin or {}).items() if c}
        )

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("FourierSlice is immutable")

    @property
    def is_zero(self) -> bool:
        return not self.a0 and not self.cos and not self.sin

    def __add__(self, other: "FourierSlice") -> "FourierSlice":
        cos = dict(self.cos)
        sin = dict(self.sin)
        for j, c in other.cos.items():
            cos[j] = cos.get(j, Fraction(0)) + c
        for j, c in other.sin.items():
            sin[j] = sin.get(j, Fraction(0)) + c
        return FourierSlice(self.a0 + other.a0, cos, sin)

    def __neg__(self) -> "FourierSlice":
        return self.scale(-1)

    def scale(self, c) -> "FourierSlice":
        c = _rat(c)
        return FourierSlice(
            c * self.a0,
            {j: c * v for j, v in self.cos.items()},
            {j: c * v for j, v in self.sin.items()},
        )

    def __mul__(self, other: "FourierSlice") -> "FourierSlice":
        """Exact product via the cos/sin product-to-sum identities."""
        a0 = Fraction(0)
        cos: dict[int, Rat] = {}
        sin: dict[int, Rat] = {}

        def add_cos(j: int, c: Rat):
            nonlocal a0
            j = abs(j)
            if j == 0:
                a0 += c
            else:
                cos[j] = cos.get(j, Fraction(0)) + c

        def add_sin(j: int, c: Rat):
            if j == 0:
                return
            if j < 0:
                j, c = -j, -c
            sin[j] = sin.get(j, Fraction(0)) + c

        left = [("c", 0, self.a0)] if self.a0 else []
        left += [("c", j, c) for j, c in self.cos.items()]
        left += [("s", j, c) for j, c in self.sin.items()]
        right = [("c", 0, other.a0)] if other.a0 else []
        right += [("c", j, c) for j, c in other.cos.items()]
        right += [("s", j, c) for j, c in other.sin.items()]

        for t1, j1, c1 in left:
            for t2, j2, c2 in right:
                c = c1 * c2 * HALF
                if t1 == "c" and t2 == "c":
                    add_cos(j1 - j2, c)
                    add_cos(j1 + j2, c)
                elif t1 == "s" and t2 == "s":
                    add_cos(j1 - j2, c)
                    add_cos(j1 + j2, -c)
                elif t1 == "s" and t2 == "c":
                    add_sin(j1 + j2, c)
                    add_sin(j1 - j2, c)
                else:  # cos * sin
                    add_sin(j1 + j2, c)
                    add_sin(j1 - j2, -c)
        return FourierSlice(a0, cos, sin)

    def d_theta(self) -> "FourierSlice":
        return FourierSlice(
            0,
            {j: j * b for j, b in self.sin.items()},
            {j: -j * a for j, a in self.cos.items()},
        )

    def l1_bound(self) -> Rat:
        """a0 + sum_j (|a_j| + |b_j|): a pointwise upper bound in theta."""
        return (
            self.a0
            + sum(abs(c) for c in self.cos.values())
            + sum(abs(c) for c in self.sin.values())
        )

    def max_harmonic(self) -> int:
        return max([0, *self.cos.keys(), *self.sin.keys()])

    def eval_f64(self, theta: float) -> float:
        acc = float(self.a0)
        for j, c in self.cos.items():
            acc += float(c) * math.cos(j * theta)
        for j, c in self.sin.items():
            acc += float(c) * math.sin(j * theta)
        return acc

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FourierSlice)
            and self.a0 == other.a0
            and self.cos == other.cos
            and self.sin == other.sin
        )

    def __hash__(self):
        return hash(
            (self.a0, tuple(sorted(self.cos.items())), tuple(sorted(self.sin.items())))
        )

    def __repr__(self) -> str:
        bits = [str(self.a0)] if self.a0 else []
        bits += [f"{c}*cos{j}t" for j, c in sorted(self.cos.items())]
        bits += [f"{c}*sin{j}t" for j, c in sorted(self.sin.items())]
        return " + ".join(bits) if bits else "0"


_COS = FourierSlice(0, {1: 1})
_SIN = FourierSlice(0, sin={1: 1})


@lru_cache(maxsize=None)
def _cos_sin_power(i: int, j: int) -> FourierSlice:
    """Fourier expansion of cos^i(theta) sin^j(theta), memoised."""
    if i == 0 and j == 0:
        return FourierSlice(1)
    if i > 0:
        return _cos_sin_power(i - 1, j) * _COS
    return _cos_sin_power(i, j - 1) * _SIN


class TrigRadialPoly:
    """Map from radial power to FourierSlice; zero slices are never stored."""

    __slots__ = ("slices",)

    def __init__(self, slices: dict[int, FourierSlice] | None = None):
        clean = {
            int(i): s for i, s in (slices or {}).items() if not s.is_zero
        }
        object.__setattr__(self, "slices", dict(sorted(clean.items())))

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("TrigRadialPoly is immutable")

    @staticmethod
    def from_cartesian(p: BiPoly) -> "TrigRadialPoly":
        """Exact Fourier expansion of p(r cos theta, r sin theta).

        Monomial x^i y^j lands in radial power i + j with harmonics of
        parity (i + j) mod 2 only.
        """
        acc: dict[int, FourierSlice] = {}
        for (i, j), c in p.terms.items():
            power = i + j
            add = _cos_sin_power(i, j).scale(c)
            cur = acc.get(power)
            acc[power] = add if cur is None else cur + add
        return TrigRadialPoly(acc)

    @staticmethod
    def from_radial(p: RatPoly) -> "TrigRadialPoly":
        """Embed a theta-free radial polynomial."""
        return TrigRadialPoly(
            {i: FourierSlice(c) for i, c in enumerate(p.coeffs)}
        )

    @property
    def is_zero(self) -> bool:
        return not self.slices

    def max_radial_power(self) -> int:
        return max(self.slices) if self.slices else -1

    def min_radial_power(self) -> int:
        return min(self.slices) if self.slices else -1

    def __add__(self, other: "TrigRadialPoly") -> "TrigRadialPoly":
        out = dict(self.slices)
        for i, s in other.slices.items():
            out[i] = out[i] + s if i in out else s
        return TrigRadialPoly(out)

    def __sub__(self, other: "TrigRadialPoly") -> "TrigRadialPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "TrigRadialPoly":
        return TrigRadialPoly({i: s.scale(c) for i, s in self.slices.items()})

    def __mul__(self, other: "TrigRadialPoly") -> "TrigRadialPoly":
        out: dict[int, FourierSlice] = {}
        for i1, s1 in self.slices.items():
            for i2, s2 in other.slices.items():
                prod = s1 * s2
                key = i1 + i2
                out[key] = out[key] + prod if key in out else prod
        return TrigRadialPoly(out)

    def d_dr(self) -> "TrigRadialPoly":
        return TrigRadialPoly(
            {i - 1: s.scale(i) for i, s in self.slices.items() if i}
        )

    def d_dtheta(self) -> "TrigRadialPoly":
        return TrigRadialPoly({i: s.d_theta() for i, s in self.slices.items()})

    def div_r(self) -> "TrigRadialPoly":
        if self.slices and min(self.slices) < 1:
            raise NotDivisibleByR("a radial power 0 slice is present")
        return TrigRadialPoly({i - 1: s for i, s in self.slices.items()})

    def theta_mean(self) -> RatPoly:
        """(1/2pi) integral over theta: keeps the a0 of every slice."""
        if not self.slices:
            return RatPoly()
        coeffs = [Fraction(0)] * (self.max_radial_power() + 1)
        for i, s in self.slices.items():
            coeffs[i] = s.a0
        return RatPoly(coeffs)

    def l1_majorant(self) -> RatPoly:
        """Pointwise upper bound sum_i m_i r^i with m_i the slice L1 bound.

        Valid for every r >= 0 and every theta.
        """
        if not self.slices:
            return RatPoly()
        coeffs = [Fraction(0)] * (self.max_radial_power() + 1)
        for i, s in self.slices.items():
            coeffs[i] = s.l1_bound()
        return RatPoly(coeffs)

    def slice_bounds(self) -> dict[int, Rat]:
        return {i: s.l1_bound() for i, s in self.slices.items()}

    def eval_f64(self, r: float, theta: float) -> float:
        return sum(
            s.eval_f64(theta) * r**i for i, s in self.slices.items()
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, TrigRadialPoly) and self.slices == other.slices

    def __repr__(self) -> str:
        if not self.slices:
            return "TrigRadialPoly(0)"
        bits = [f"r^{i}*({s!r})" for i, s in self.slices.items()]
        return "TrigRadialPoly(" + " + ".join(bits) + ")"
