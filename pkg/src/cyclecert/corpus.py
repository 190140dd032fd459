"""Built-in demonstration systems used by the test-suite, docs and CLI demos.

Each builder returns an exact ``SystemSpec``; the *_pair helpers return the
multiplier pair that certifies the default parameter choice.
"""

from __future__ import annotations

from fractions import Fraction

from .bipoly import BiPoly, SystemSpec
from .certify import DulacPair
from .exactalg import RatPoly, _rat

F = Fraction


def showcase_system() -> SystemSpec:
    """Degree-5 system with exactly two (hyperbolic) limit cycles."""
    P = BiPoly({
        (0, 1): -1, (1, 0): 4, (3, 0): F(-49, 10), (1, 2): F(-26, 5),
        (2, 2): F(1, 5), (5, 0): 1, (3, 2): 2, (1, 4): 1,
    })
    Q = BiPoly({
        (1, 0): 1, (0, 1): 4, (2, 1): F(-23, 5), (0, 3): -5,
        (1, 3): F(-1, 5), (0, 4): F(-2, 15), (4, 1): 1, (2, 3): 2, (0, 5): 1,
    })
    return SystemSpec(P, Q, name="showcase")


def showcase_pair() -> DulacPair:
    # k = 4/5, w(r) = r^2 (2 r^2 - 79/16)
    return DulacPair(F(4, 5), RatPoly([0, 0, F(-79, 16), 0, 2]))


def uniqueness_family(a, b, c, d) -> SystemSpec:
    """Cubic family with at most one limit cycle for small parameters."""
    a, b, c, d = map(_rat, (a, b, c, d))
    P = BiPoly({
        (1, 0): 1, (3, 0): -1, (1, 2): b - 1,
        (0, 1): -1, (2, 1): -2, (0, 3): -2, (1, 1): a,
    })
    Q = BiPoly({
        (1, 0): 1, (3, 0): 2 + d, (1, 2): 2,
        (0, 1): 1, (2, 1): -1, (0, 3): -1, (0, 2): c,
    })
    return SystemSpec(P, Q, name="uniqueness-family")


def uniqueness_pair(b) -> DulacPair:
    # k = 7/10, w(r) = (b - 8) r^2 / 8
    b = _rat(b)
    return DulacPair(F(7, 10), RatPoly([0, 0, (b - 8) / 8]))


def two_cycle_family(a, b, c) -> SystemSpec:
    """Quintic family with at most two cycles around a unique critical point."""
    a, b, c = map(_rat, (a, b, c))
    P = BiPoly({
        (1, 0): 2, (3, 0): -3, (1, 2): -3, (5, 0): 1, (3, 2): 2, (1, 4): 1,
        (0, 1): -1, (2, 1): a, (2, 2): b,
    })
    Q = BiPoly({
        (1, 0): 1,
        (0, 1): 2, (2, 1): -3, (0, 3): -3, (4, 1): 1, (2, 3): 2, (0, 5): 1,
        (1, 2): c,
    })
    return SystemSpec(P, Q, name="two-cycle-family")


def quadratic_pair() -> DulacPair:
    # k = 1, w(r) = r^2 (2 r^2 - 3); certifies both quintic families below
    return DulacPair(F(1), RatPoly([0, 0, -3, 0, 2]))


def multi_point_family(a, b) -> SystemSpec:
    """Quintic family whose outer cycle surrounds five critical points."""
    a, b = map(_rat, (a, b))
    P = BiPoly({
        (1, 0): 2, (3, 0): -3, (1, 2): -3, (5, 0): 1, (3, 2): 2, (1, 4): 1,
        (0, 1): -1, (2, 1): 1, (0, 3): 1,
        (4, 0): a, (2, 2): b,
    })
    Q = BiPoly({
        (1, 0): 1, (3, 0): -1, (1, 2): -1,
        (0, 1): 2, (2, 1): -3, (0, 3): -3, (4, 1): 1, (2, 3): 2, (0, 5): 1,
    })
    return SystemSpec(P, Q, name="multi-point-family")


def three_ring_family(a) -> SystemSpec:
    """Degree-7 family with upper bound three; cycles straddle a middle ring."""
    a = _rat(a)
    P = BiPoly({
        (1, 0): 6, (3, 0): -11, (1, 2): -11,
        (5, 0): 6, (3, 2): 12, (1, 4): 6,
        (7, 0): -1, (5, 2): -3, (3, 4): -3, (1, 6): -1,
        (0, 1): -2, (2, 1): 1, (0, 3): 1,
        (2, 3): a,
    })
    Q = BiPoly({
        (1, 0): 2, (3, 0): -1, (1, 2): -1,
        (0, 1): 6, (2, 1): -11, (0, 3): -11,
        (4, 1): 6, (2, 3): 12, (0, 5): 6,
        (6, 1): -1, (4, 3): -3, (2, 5): -3, (0, 7): -1,
    })
    return SystemSpec(P, Q, name="three-ring-family")


def three_ring_pair() -> DulacPair:
    # k = 1, w(r) = r^2 (-11 + 12 r^2 - 3 r^4)
    return DulacPair(F(1), RatPoly([0, 0, -11, 0, 12, 0, -3]))
