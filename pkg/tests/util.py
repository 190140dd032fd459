"""Shared test helpers: independent oracles and random generators.

The oracles here deliberately avoid the library's Sturm machinery; they are
sign-scan / bisection / closed-form computations used to cross-check it.
"""

from __future__ import annotations

import random
from fractions import Fraction

from cyclecert.bipoly import BiPoly
from cyclecert.exactalg import RatPoly
from cyclecert.trigpoly import FourierSlice, TrigRadialPoly


def rand_rat(rng: random.Random, max_num: int = 255, max_den: int = 255) -> Fraction:
    num = rng.randint(-max_num, max_num)
    den = rng.randint(1, max_den)
    return Fraction(num, den)


def rand_poly(rng: random.Random, max_deg: int = 10, max_num: int = 255,
              max_den: int = 255) -> RatPoly:
    deg = rng.randint(1, max_deg)
    coeffs = [rand_rat(rng, max_num, max_den) for _ in range(deg + 1)]
    if coeffs[-1] == 0:
        coeffs[-1] = Fraction(1)
    return RatPoly(coeffs)


def scan_count_roots(p: RatPoly, a: Fraction, b: Fraction, cells: int = 1200) -> int:
    """Distinct real roots of p in (a, b] by sign-change scan on a grid.

    Floating-point evaluation with an error-aware guard; values too close to
    zero are re-evaluated exactly.  Reliable for random polynomials whose
    roots are separated by more than (b - a)/cells.
    """
    fc = [float(c) for c in p.coeffs]
    fabs = [abs(c) for c in fc]

    def sign_at(x: Fraction) -> int:
        fx = float(x)
        val = 0.0
        scale = 0.0
        for c, ac in zip(reversed(fc), reversed(fabs)):
            val = val * fx + c
            scale = scale * abs(fx) + ac
        if abs(val) > 1e-12 * (1.0 + scale):
            return 1 if val > 0 else -1
        v = p(x)
        return (v > 0) - (v < 0)

    count = 0
    prev = sign_at(a)
    skip_next_compare = prev == 0
    for k in range(1, cells + 1):
        s = sign_at(a + (b - a) * Fraction(k, cells))
        if s == 0:
            count += 1          # root exactly on the grid, inside (a, b]
            skip_next_compare = True
            continue
        if not skip_next_compare and prev != s:
            count += 1
        prev = s
        skip_next_compare = False
    return count


def scan_count_positive_roots(p: RatPoly, cells: int = 1600) -> int:
    """Distinct roots in (0, oo) via the substitution x = t/(1-t), t in (0,1)."""
    fc = [float(c) for c in p.coeffs]
    fabs = [abs(c) for c in fc]

    def sign_at(x: Fraction) -> int:
        fx = float(x)
        val = 0.0
        scale = 0.0
        for c, ac in zip(reversed(fc), reversed(fabs)):
            val = val * fx + c
            scale = scale * abs(fx) + ac
        if abs(val) > 1e-12 * (1.0 + scale):
            return 1 if val > 0 else -1
        v = p(x)
        return (v > 0) - (v < 0)

    count = 0
    prev = None
    skip_next_compare = False
    for k in range(1, cells):
        t = Fraction(k, cells)
        x = t / (1 - t)
        s = sign_at(x)
        if s == 0:
            count += 1
            skip_next_compare = True
            continue
        if prev is not None and not skip_next_compare and prev != s:
            count += 1
        prev = s
        skip_next_compare = False
    return count


def rand_bipoly(rng: random.Random, max_deg: int = 4, max_terms: int = 6,
                bound: int = 9) -> BiPoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        i = rng.randint(0, max_deg)
        j = rng.randint(0, max_deg - i)
        terms[(i, j)] = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    if not any(c for c in terms.values()):
        terms[(1, 0)] = Fraction(1)
    return BiPoly(terms)


def rand_trig(rng: random.Random, max_power: int = 6, max_harmonic: int = 5,
              bound: int = 9) -> TrigRadialPoly:
    slices = {}
    for _ in range(rng.randint(1, 4)):
        i = rng.randint(0, max_power)
        a0 = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        cos = {}
        sin = {}
        for _ in range(rng.randint(0, 3)):
            j = rng.randint(1, max_harmonic)
            cos[j] = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        for _ in range(rng.randint(0, 3)):
            j = rng.randint(1, max_harmonic)
            sin[j] = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        new = FourierSlice(a0, cos, sin)
        slices[i] = slices[i] + new if i in slices else new
    return TrigRadialPoly(slices)


def rand_simple_rooted(rng: random.Random, max_deg: int = 5,
                       positive_only: bool = False) -> RatPoly:
    """Monic polynomial with distinct random rational roots."""
    deg = rng.randint(1, max_deg)
    roots: set[Fraction] = set()
    while len(roots) < deg:
        lo = 1 if positive_only else -60
        roots.add(Fraction(rng.randint(lo, 60), rng.randint(1, 12)))
    p = RatPoly([1])
    for root in roots:
        p = p * RatPoly([-root, 1])
    return p


def bisect_root(p: RatPoly, lo: float, hi: float, iters: int = 80) -> float:
    """Plain float bisection; requires a sign change on [lo, hi]."""
    flo = p.eval_f64(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = p.eval_f64(mid)
        if fm == 0.0:
            return mid
        if (flo > 0) != (fm > 0):
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)
