"""Polar form of a planar system and its theta-averaged radial polynomial.

For x' = P, y' = Q with P(0,0) = Q(0,0) = 0 the polar form is

    r'     = R(r, theta) = P cos(theta) + Q sin(theta)
    theta' = T(r, theta) = (Q cos(theta) - P sin(theta)) / r

with the substitution x = r cos(theta), y = r sin(theta).  Both expansions
are exact trig-radial polynomials; the 1/r division never truncates.
"""

from __future__ import annotations

from fractions import Fraction

from .bipoly import BiPoly, OriginNotSingular, SystemSpec
from .exactalg import RatPoly, _rat
from .trigpoly import FourierSlice, TrigRadialPoly

_COS = TrigRadialPoly({0: FourierSlice(0, {1: 1})})
_SIN = TrigRadialPoly({0: FourierSlice(0, sin={1: 1})})


class OddPowerResidue(ArithmeticError):
    """theta_mean(R)/r produced an odd radial power: internal parity bug."""


class PolarSystem:
    """Exact polar form (R, Theta) of a SystemSpec, plus the system degree."""

    __slots__ = ("R", "Theta", "n")

    def __init__(self, R: TrigRadialPoly, Theta: TrigRadialPoly, n: int):
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "Theta", Theta)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("PolarSystem is immutable")


def to_polar(sys: SystemSpec) -> PolarSystem:
    """Exact polar form; rechecks that the origin is a singular point."""
    if sys.P.terms.get((0, 0)) or sys.Q.terms.get((0, 0)):
        raise OriginNotSingular("origin must be a singular point")
    tp = TrigRadialPoly.from_cartesian(sys.P)
    tq = TrigRadialPoly.from_cartesian(sys.Q)
    R = tp * _COS + tq * _SIN
    Theta = (tq * _COS - tp * _SIN).div_r()
    return PolarSystem(R, Theta, sys.n)


def radial_average(ps: PolarSystem) -> RatPoly:
    """The polynomial p with p(r^2) = (theta-mean of R)/r, in the variable s = r^2."""
    mean = ps.R.theta_mean()
    if mean.is_zero:
        return RatPoly()
    if mean.coefficient(0) != 0:
        raise OddPowerResidue("R has a radial power 0 mean term")
    shifted = list(mean.coeffs[1:])
    if any(c for i, c in enumerate(shifted) if i % 2 == 1):
        raise OddPowerResidue("odd radial power survives the theta average")
    return RatPoly(shifted[::2])


def rotational_system(u: RatPoly, v: RatPoly) -> SystemSpec:
    """The cartesian system whose polar form is r' = r u(r^2), theta' = v(r^2).

    Explicitly: x' = x u(x^2+y^2) - y v(x^2+y^2),
                y' = x v(x^2+y^2) + y u(x^2+y^2).
    """
    s = BiPoly({(2, 0): 1, (0, 2): 1})
    powers = [BiPoly.constant(1)]
    for _ in range(max(u.degree, v.degree, 0)):
        powers.append(powers[-1] * s)

    def compose(p: RatPoly) -> BiPoly:
        acc = BiPoly()
        for i, c in enumerate(p.coeffs):
            if c:
                acc = acc + powers[i] * c
        return acc

    us, vs = compose(u), compose(v)
    X, Y = BiPoly.x(), BiPoly.y()
    return SystemSpec(X * us - Y * vs, X * vs + Y * us, name="rotational")
