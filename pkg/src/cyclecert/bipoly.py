"""Exact bivariate polynomials in (x, y): system right-hand sides, partial
derivatives, and Sylvester resultants for critical-point x-coordinates.

Sparse term-map representation; the systems of interest have few monomials
relative to their degree.
"""

from __future__ import annotations

from fractions import Fraction

from .exactalg import Rat, RatPoly, _rat


class BothConstantInY(ValueError):
    """resultant_y needs at least one argument with positive degree in y."""


class OriginNotSingular(ValueError):
    """System right-hand sides must vanish at the origin."""


class BiPoly:
    """Polynomial in (x, y) over Q as a map (x-exponent, y-exponent) -> coeff.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("terms", "_f64")

    def __init__(self, terms=()):
        clean: dict[tuple[int, int], Rat] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for (i, j), c in items:
            c = _rat(c)
            if c:
                key = (int(i), int(j))
                clean[key] = clean.get(key, Fraction(0)) + c
                if not clean[key]:
                    del clean[key]
        object.__setattr__(self, "terms", dict(sorted(clean.items())))
        object.__setattr__(self, "_f64", None)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("BiPoly is immutable")

    @staticmethod
    def constant(c) -> "BiPoly":
        return BiPoly({(0, 0): c})

    @staticmethod
    def x() -> "BiPoly":
        return BiPoly({(1, 0): 1})

    @staticmethod
    def y() -> "BiPoly":
        return BiPoly({(0, 1): 1})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(i + j for i, j in self.terms)

    def degree_in(self, var: str) -> int:
        if not self.terms:
            return -1
        idx = 0 if var == "x" else 1
        return max(key[idx] for key in self.terms)

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return BiPoly(out)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, BiPoly):
            out: dict[tuple[int, int], Rat] = {}
            for (i1, j1), c1 in self.terms.items():
                for (i2, j2), c2 in other.terms.items():
                    key = (i1 + i2, j1 + j2)
                    out[key] = out.get(key, Fraction(0)) + c1 * c2
            return BiPoly(out)
        c = _rat(other)
        return BiPoly({k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        out = BiPoly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "BiPoly(0)"
        bits = []
        for (i, j), c in self.terms.items():
            mono = "".join(
                f"{v}^{e}" if e > 1 else v
                for v, e in (("x", i), ("y", j))
                if e
            )
            bits.append(f"{c}{'*' + mono if mono else ''}")
        return "BiPoly(" + " + ".join(bits) + ")"

    def partial(self, var: str) -> "BiPoly":
        """Exact formal partial derivative in 'x' or 'y'."""
        if var not in ("x", "y"):
            raise ValueError("var must be 'x' or 'y'")
        out = {}
        for (i, j), c in self.terms.items():
            if var == "x" and i:
                out[(i - 1, j)] = i * c
            elif var == "y" and j:
                out[(i, j - 1)] = j * c
        return BiPoly(out)

    def evaluate(self, x, y) -> Rat:
        x, y = _rat(x), _rat(y)
        acc = Fraction(0)
        for (i, j), c in self.terms.items():
            acc += c * x**i * y**j
        return acc

    def _float_grid(self) -> list[list[float]]:
        if self._f64 is None:
            dx, dy = max(self.degree_in("x"), 0), max(self.degree_in("y"), 0)
            grid = [[0.0] * (dy + 1) for _ in range(dx + 1)]
            for (i, j), c in self.terms.items():
                grid[i][j] = float(c)
            object.__setattr__(self, "_f64", grid)
        return self._f64

    def eval_f64(self, x: float, y: float) -> float:
        """Double-Horner evaluation on a cached dense float grid."""
        acc = 0.0
        for row in reversed(self._float_grid()):
            racc = 0.0
            for c in reversed(row):
                racc = racc * y + c
            acc = acc * x + racc
        return acc

    def coeffs_in_y(self) -> list[RatPoly]:
        """View as a polynomial in y with coefficients in Q[x], ascending."""
        dy = self.degree_in("y")
        buckets: list[dict[int, Rat]] = [dict() for _ in range(dy + 1)]
        for (i, j), c in self.terms.items():
            buckets[j][i] = c
        out = []
        for bucket in buckets:
            deg = max(bucket) if bucket else -1
            out.append(RatPoly([bucket.get(i, Fraction(0)) for i in range(deg + 1)]))
        return out

    def specialize_x(self, x0) -> RatPoly:
        """Exact substitution x = x0, returning a polynomial in y."""
        x0 = _rat(x0)
        return RatPoly(
            [c(x0) for c in self.coeffs_in_y()]
        )


def _bareiss_det(mat: list[list[RatPoly]]) -> RatPoly:
    """Determinant of a matrix over Q[x] by fraction-free elimination."""
    n = len(mat)
    if n == 0:
        return RatPoly([1])
    m = [row[:] for row in mat]
    sign = 1
    prev = RatPoly([1])
    for k in range(n - 1):
        piv, piv_deg = None, None
        for i in range(k, n):
            if not m[i][k].is_zero:
                if piv is None or m[i][k].degree < piv_deg:
                    piv, piv_deg = i, m[i][k].degree
        if piv is None:
            return RatPoly()
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                q, r = divmod(num, prev)
                if not r.is_zero:  # pragma: no cover - Bareiss guarantees this
                    raise ArithmeticError("fraction-free elimination broke down")
                m[i][j] = q
            m[i][k] = RatPoly()
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def resultant_y(p: BiPoly, q: BiPoly) -> RatPoly:
    """Resultant of p and q with respect to y, as a polynomial in x.

    Determinant of the Sylvester matrix over Q[x], computed fraction-free;
    it vanishes exactly at the x-coordinates of common roots (plus possible
    leading-coefficient degenerations).
    """
    if p.is_zero or q.is_zero:
        raise ValueError("resultant of a zero polynomial")
    dp, dq = p.degree_in("y"), q.degree_in("y")
    if dp <= 0 and dq <= 0:
        raise BothConstantInY("neither argument involves y")
    pc, qc = p.coeffs_in_y(), q.coeffs_in_y()
    if dp == 0:
        return pc[0] ** dq
    if dq == 0:
        return qc[0] ** dp
    size = dp + dq
    rows = []
    prow = list(reversed(pc))  # leading first
    qrow = list(reversed(qc))
    for k in range(dq):
        rows.append(
            [RatPoly()] * k + prow + [RatPoly()] * (size - dp - 1 - k)
        )
    for k in range(dp):
        rows.append(
            [RatPoly()] * k + qrow + [RatPoly()] * (size - dq - 1 - k)
        )
    return _bareiss_det(rows)


class SystemSpec:
    """A planar polynomial system x' = P(x,y), y' = Q(x,y) with P(0,0) = Q(0,0) = 0."""

    __slots__ = ("P", "Q", "n", "name")

    def __init__(self, P: BiPoly, Q: BiPoly, name: str | None = None):
        if P.terms.get((0, 0)) or Q.terms.get((0, 0)):
            raise OriginNotSingular(
                "P and Q must have no constant term (origin must be a singular point)"
            )
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "n", max(P.total_degree, Q.total_degree))
        object.__setattr__(self, "name", name)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("SystemSpec is immutable")

    def divergence(self) -> BiPoly:
        return self.P.partial("x") + self.Q.partial("y")

    def __repr__(self) -> str:
        label = self.name or "system"
        return f"SystemSpec({label}, degree {self.n})"
