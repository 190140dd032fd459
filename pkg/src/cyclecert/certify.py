"""Certified upper bounds on limit cycles via radial multiplier pairs.

A *multiplier pair* (k, w) for the averaged radial polynomial p consists of
a positive rational k and a polynomial w(r) whose defect

    defect(r) = r p(r^2) w'(r) - 2 k (p(r^2) + r^2 p'(r^2)) w(r)

is negative on (0, oo).  Such a pair encodes the Dulac function
|w(r)|^(-1/k).  When additionally the trig-radial expansion

    M(r, theta) = R w'(r) - k (dR/dr + dTheta/dtheta + R/r) w(r)

admits a majorant Phi(r) that is negative on (0, oo), the system has at
most m+ limit cycles, where m+ is the number of distinct non-negative
roots of w, all of them hyperbolic, one per ring of the plane minus
{w(r) = 0}, with stability given by the sign of w on the ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .bipoly import BiPoly, SystemSpec
from .exactalg import (
    NegativityWitness,
    Rat,
    RatPoly,
    _rat,
    count_nonnegative_roots,
    count_positive_roots,
    count_real_roots,
    is_negative_on_positive_axis,
    poly_gcd,
    positive_root_intervals,
)
from .polarize import PolarSystem, radial_average, rotational_system, to_polar
from .trigpoly import TrigRadialPoly

F = Fraction

_REPORT_WIDTH = F(1, 10**12)


class NoDulacPairFound(RuntimeError):
    """No candidate multiplier pair passed the defect stage."""

    def __init__(self, reason: str, impossible: bool = False, tried: int = 0):
        super().__init__(reason)
        self.reason = reason
        self.impossible = impossible
        self.tried = tried


class InvalidPerturbationDegrees(ValueError):
    """Perturbation monomials must have total degree in [2, 2j+1]."""


class DulacPair:
    """A candidate multiplier pair: positive rational k and nonzero w(r)."""

    __slots__ = ("k", "w")

    def __init__(self, k, w: RatPoly):
        k = _rat(k)
        if k <= 0:
            raise ValueError("k must be positive")
        if w.is_zero:
            raise ValueError("w must not be identically zero")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "w", w)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("DulacPair is immutable")

    @property
    def d(self) -> int:
        return self.w.degree

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DulacPair) and self.k == other.k and self.w == other.w
        )

    def __hash__(self):
        return hash((self.k, self.w))

    def __repr__(self) -> str:
        return f"DulacPair(k={self.k}, w={self.w.format()})"


def dulac_defect(p: RatPoly, k, w: RatPoly) -> RatPoly:
    """r p(r^2) w'(r) - 2k (p(r^2) + r^2 p'(r^2)) w(r), exactly, in r."""
    k = _rat(k)
    if k <= 0:
        raise ValueError("k must be positive")
    pr = p.substitute_square()
    pr2d = p.derivative().substitute_square().shift_up(2)  # r^2 p'(r^2)
    term1 = (pr * w.derivative()).shift_up(1)
    term2 = (pr + pr2d) * w * (2 * k)
    return term1 - term2


def gradient_pair_defect(p: RatPoly, k) -> RatPoly:
    """Closed form of the defect for the gradient pair w = r^2 p'(r^2):

    2 r^4 (p(r^2) p''(r^2) - k p'(r^2)^2) + 2 (1-k) r^2 p(r^2) p'(r^2).
    """
    k = _rat(k)
    pr = p.substitute_square()
    pd = p.derivative().substitute_square()
    pdd = p.derivative().derivative().substitute_square()
    return 2 * (pr * pdd - k * (pd * pd)).shift_up(4) + (
        2 * (1 - k)
    ) * (pr * pd).shift_up(2)


def gradient_pair_w(p: RatPoly) -> RatPoly:
    """w(r) = r^2 p'(r^2)."""
    return p.derivative().substitute_square().shift_up(2)


@dataclass(frozen=True)
class PairCheck:
    """Verdict of a defect-negativity test with its Sturm audit."""

    ok: bool
    defect: RatPoly
    witness: NegativityWitness | None

    def __bool__(self) -> bool:
        return self.ok


def is_dulac_pair(p: RatPoly, k, w: RatPoly) -> PairCheck:
    """True iff the defect of (k, w) is negative for every r > 0."""
    defect = dulac_defect(p, k, w)
    if defect.is_zero:
        return PairCheck(False, defect, None)
    wit = is_negative_on_positive_axis(defect)
    return PairCheck(wit.negative, defect, wit)


def _k_grid(max_denominator: int = 12) -> list[Rat]:
    """Rationals in (0, 2] with denominator <= max_denominator, by |k - 1|."""
    vals = {
        F(j, q)
        for q in range(1, max_denominator + 1)
        for j in range(1, 2 * q + 1)
    }
    return sorted(vals, key=lambda k: (abs(k - 1), k.denominator, k))


@dataclass(frozen=True)
class ProposalResult:
    pairs: list[DulacPair]
    impossible: bool = False
    reason: str | None = None


def propose_pairs(p: RatPoly, max_denominator: int = 12) -> ProposalResult:
    """Ordered candidate pairs for p; callers still verify each one.

    Strategy (a): the gradient pair w = r^2 p'(r^2) with k swept over a
    rational grid around 1.  Strategy (b): w = prod (r^2 - alpha_m) with
    the alpha_m chosen between consecutive positive roots of p (and one
    below the smallest), k in {1, 1/2, 2}.

    A multiple positive root of p rules out every pair; that case returns
    an empty impossible proposal.  Any other exhaustion is merely
    inconclusive.
    """
    g = poly_gcd(p, p.derivative())
    if g.degree >= 1 and count_positive_roots(g) > 0:
        return ProposalResult(
            [], impossible=True,
            reason="p has a multiple positive root; no multiplier pair exists",
        )
    pairs: list[DulacPair] = []
    w_grad = gradient_pair_w(p)
    if not w_grad.is_zero:
        pairs.extend(DulacPair(k, w_grad) for k in _k_grid(max_denominator))
    alphas = _gap_midpoints(p)
    if alphas:
        w_mid = RatPoly([1])
        for alpha in alphas:
            w_mid = w_mid * RatPoly([-alpha, 0, 1])
        for k in (F(1), F(1, 2), F(2)):
            candidate = DulacPair(k, w_mid)
            if candidate not in pairs:
                pairs.append(candidate)
    return ProposalResult(pairs)


def _gap_midpoints(p: RatPoly) -> list[Rat]:
    """Rational points between 0 and the consecutive positive roots of p."""
    ivs = positive_root_intervals(p)
    if not ivs:
        return []
    # Refine until the first interval sits away from 0 and the intervals are
    # strictly separated, so each midpoint is strictly inside its gap.
    refined = [iv.refined(F(1, 64)) for iv in ivs]
    while refined[0].lo == 0:
        refined[0] = refined[0].refined(refined[0].width / 2)
    changed = True
    while changed:
        changed = False
        for i in range(len(refined) - 1):
            if refined[i].hi >= refined[i + 1].lo:
                refined[i] = refined[i].refined(refined[i].width / 2)
                refined[i + 1] = refined[i + 1].refined(refined[i + 1].width / 2)
                changed = True
    while refined[0].width >= refined[0].lo:
        refined[0] = refined[0].refined(refined[0].width / 2)
    alphas = [(refined[0].lo + refined[0].hi) / 4]  # about half the first root
    for a, b in zip(refined, refined[1:]):
        alphas.append((a.hi + b.lo) / 2)
    return alphas


def dulac_form(ps: PolarSystem, pair: DulacPair) -> TrigRadialPoly:
    """The trig-radial expansion M = R w' - k (dR/dr + dT/dtheta + R/r) w."""
    w_t = TrigRadialPoly.from_radial(pair.w)
    dw_t = TrigRadialPoly.from_radial(pair.w.derivative())
    growth = ps.R.d_dr() + ps.Theta.d_dtheta() + ps.R.div_r()
    M = ps.R * dw_t - (growth * w_t).scale(pair.k)
    assert M.max_radial_power() <= ps.n + pair.d - 1
    if pair.w(0) == 0:
        assert M.is_zero or M.min_radial_power() >= 1
    return M


@dataclass
class RingReport:
    """One connected component of the plane minus {w(r) = 0}.

    Radii are exact rational enclosures: ``inner == (0, 0)`` means the exact
    origin boundary, ``outer is None`` means unbounded.  A ``cycle_prediction``
    of 'none' marks the simply-connected disc (w(0) != 0 only).
    """

    inner: tuple[Rat, Rat]
    outer: tuple[Rat, Rat] | None
    w_sign: int
    cycle_prediction: str  # 'at-most-one' | 'exactly-one-if-no-critical-points' | 'none'
    stability_if_exists: str | None  # 'stable' | 'unstable' | None for the disc
    contains_critical_points: str = "unknown"  # 'yes' | 'no' | 'unknown'

    @property
    def is_disc(self) -> bool:
        return self.cycle_prediction == "none"

    @property
    def bounded(self) -> bool:
        return self.outer is not None


def ring_decomposition(w: RatPoly, m_plus: int | None = None) -> list[RingReport]:
    """Rings bounded by consecutive distinct non-negative roots of w.

    With w(0) = 0 every component is a ring; otherwise the innermost
    component is a simply-connected disc and carries no cycle prediction.
    """
    mult0, reduced = w.factor_out_r()
    if m_plus is None:
        m_plus = count_nonnegative_roots(w)
    pos = [iv.refined(_REPORT_WIDTH) for iv in positive_root_intervals(reduced)]
    for i, iv in enumerate(pos):
        while iv.lo == 0 or (i > 0 and pos[i - 1].hi >= iv.lo):
            iv = iv.refined(iv.width / 2)
        pos[i] = iv
    has_zero_root = mult0 >= 1
    assert (1 if has_zero_root else 0) + len(pos) == m_plus

    boundaries: list[tuple[Rat, Rat]] = []
    if has_zero_root:
        boundaries.append((F(0), F(0)))
    boundaries.extend((iv.lo, iv.hi) for iv in pos)

    def report(inner, outer, sample, prediction) -> RingReport:
        value = w(sample)
        sign = 1 if value > 0 else -1
        stability = None
        if prediction != "none":
            stability = "stable" if sign < 0 else "unstable"
        return RingReport(inner, outer, sign, prediction, stability)

    rings: list[RingReport] = []
    if not has_zero_root:
        rings.append(report((F(0), F(0)), boundaries[0], F(0), "none"))
    for i in range(m_plus):
        inner = boundaries[i]
        outer = boundaries[i + 1] if i + 1 < m_plus else None
        if outer is None:
            sample = inner[1] + 1
        elif inner == (F(0), F(0)):
            sample = outer[0] / 2 if outer[0] > 0 else outer[0]
        else:
            sample = (inner[1] + outer[0]) / 2
        if i == 0 or outer is None:
            prediction = "at-most-one"
        else:
            prediction = "exactly-one-if-no-critical-points"
        rings.append(report(inner, outer, sample, prediction))
    return rings


@dataclass
class Certificate:
    """Full audit record of one certification run."""

    system: SystemSpec
    p: RatPoly
    pair: DulacPair | None
    defect: RatPoly | None
    M: TrigRadialPoly | None
    m_i: dict[int, Rat] | None
    phi: RatPoly | None
    m_plus: int | None
    rings: list[RingReport]
    certified: bool
    failure_stage: str | None = None
    failure_reason: str | None = None
    defect_witness: NegativityWitness | None = None
    phi_witness: NegativityWitness | None = None
    C: int | None = None
    lower_bound: int | None = None
    candidates_tried: int = 0

    @property
    def upper_bound(self) -> int | None:
        return self.m_plus

    @property
    def verdict(self) -> str:
        if self.certified:
            return "certified"
        return f"not-certified({self.failure_stage}: {self.failure_reason})"


def _finish(sys, p, pair, check, M, phi, phi_wit, certified, stage, reason, tried):
    m_plus = count_nonnegative_roots(pair.w) if pair else None
    rings = ring_decomposition(pair.w, m_plus) if pair else []
    return Certificate(
        system=sys,
        p=p,
        pair=pair,
        defect=check.defect if check else None,
        M=M,
        m_i=M.slice_bounds() if M is not None else None,
        phi=phi,
        m_plus=m_plus,
        rings=rings,
        certified=certified,
        failure_stage=stage,
        failure_reason=reason,
        defect_witness=check.witness if check else None,
        phi_witness=phi_wit,
        candidates_tried=tried,
    )


def certify(sys: SystemSpec, pair: DulacPair | None = None) -> Certificate:
    """Run the full certification pipeline on a system.

    With an explicit pair the pipeline is single-shot: defect check, then
    majorant check; the verdict carries the first failing stage.  Without a
    pair, candidates from propose_pairs are tried in priority order until
    one passes both stages.  NoDulacPairFound is raised only when no
    candidate at all survives the defect stage.
    """
    ps = to_polar(sys)
    p = radial_average(ps)
    if p.is_zero:
        raise NoDulacPairFound("the averaged radial polynomial is identically zero")

    if pair is not None:
        candidates, auto = [pair], False
    else:
        proposal = propose_pairs(p)
        if proposal.impossible:
            raise NoDulacPairFound(proposal.reason, impossible=True)
        if not proposal.pairs:
            raise NoDulacPairFound("no candidate pairs could be proposed")
        candidates, auto = proposal.pairs, True

    first_phi_failure = None
    tried = 0
    for cand in candidates:
        tried += 1
        check = is_dulac_pair(p, cand.k, cand.w)
        if not check.ok:
            if auto:
                continue
            return _finish(
                sys, p, cand, check, None, None, None, False,
                "defect", "defect polynomial is not negative on (0, oo)", tried,
            )
        M = dulac_form(ps, cand)
        phi = M.l1_majorant()
        phi_wit = is_negative_on_positive_axis(phi) if not phi.is_zero else None
        if phi_wit is not None and phi_wit.negative:
            return _finish(sys, p, cand, check, M, phi, phi_wit, True, None, None, tried)
        failure = _finish(
            sys, p, cand, check, M, phi, phi_wit, False,
            "phi", "majorant is not negative on (0, oo)", tried,
        )
        if not auto:
            return failure
        if first_phi_failure is None:
            first_phi_failure = failure
    if first_phi_failure is not None:
        first_phi_failure.candidates_tried = tried
        return first_phi_failure
    raise NoDulacPairFound(
        f"all {tried} candidate pairs failed the defect stage", tried=tried
    )


def lower_bound(cert: Certificate, critical_points: Sequence) -> int | None:
    """max(0, m+ - 2 - C) with C the number of bounded rings holding a
    supplied critical point; annotates every ring's membership flag.

    Points may be any objects with float ``x``/``y`` attributes.  Ring
    boundaries are certified enclosures; a point within 1e-8 of a boundary
    leaves that ring 'unknown' (and uncounted).
    """
    if not cert.rings or cert.m_plus is None:
        return None
    margin = 1e-8
    C = 0
    for ring in cert.rings:
        lo_in, hi_in = float(ring.inner[0]), float(ring.inner[1])
        lo_out = float(ring.outer[0]) if ring.outer else math.inf
        hi_out = float(ring.outer[1]) if ring.outer else math.inf
        inner_exact = ring.inner[0] == ring.inner[1]
        status = "no"
        for pt in critical_points:
            rho = math.hypot(pt.x, pt.y)
            if ring.is_disc:
                if rho < lo_out - margin:
                    status = "yes"
                    break
                if rho <= hi_out + margin:
                    status = "unknown"
                continue
            inner_clear = rho > hi_in if inner_exact else rho > hi_in + margin
            if inner_clear and rho < lo_out - margin:
                status = "yes"
                break
            near_inner = (not inner_exact) and lo_in - margin <= rho <= hi_in + margin
            near_outer = ring.outer is not None and lo_out - margin <= rho <= hi_out + margin
            if near_inner or near_outer:
                status = "unknown"
        ring.contains_critical_points = status
        if status == "yes" and ring.bounded and not ring.is_disc:
            C += 1
    cert.C = C
    cert.lower_bound = max(0, cert.m_plus - 2 - C)
    return cert.lower_bound


@dataclass(frozen=True)
class MarginEntry:
    eps: Rat
    certificate: Certificate

    @property
    def certified(self) -> bool:
        return self.certificate.certified


@dataclass(frozen=True)
class MarginReport:
    k: Rat
    entries: list[MarginEntry]
    margin: Rat | None  # largest certified epsilon in the grid

    @property
    def pass_set_is_prefix(self) -> bool:
        flags = [e.certified for e in self.entries]
        return all(flags[i] or not any(flags[i:]) for i in range(len(flags)))


def certification_margin(
    u: RatPoly, v: RatPoly, Pt: BiPoly, Qt: BiPoly, eps_grid: Sequence
) -> MarginReport:
    """Sweep eps over rotational-plus-perturbation systems and certify each.

    The base system is x' = x u - y v, y' = x v + y u in s = x^2 + y^2, the
    perturbation is eps (Pt, Qt) with monomial degrees restricted to
    [2, 2 deg(u) + 1].  k is fixed by the eps = 0 search; each eps then
    uses the pair (k, r^2 p_eps'(r^2)) built from its own radial average.
    """
    j = u.degree
    for tag, poly in (("Pt", Pt), ("Qt", Qt)):
        for (a, b) in poly.terms:
            if not 2 <= a + b <= 2 * j + 1:
                raise InvalidPerturbationDegrees(
                    f"{tag} monomial x^{a} y^{b} outside degrees [2, {2 * j + 1}]"
                )
    if poly_gcd(u, u.derivative()).degree > 0 or count_real_roots(u) != u.degree:
        raise ValueError("u must have simple real roots")

    base = rotational_system(u, v)
    w0 = gradient_pair_w(u)
    k = None
    for cand in _k_grid():
        if is_dulac_pair(u, cand, w0).ok:
            k = cand
            break
    if k is None:
        raise NoDulacPairFound("no k in the grid certifies the unperturbed system")

    entries = []
    for raw in eps_grid:
        eps = _rat(raw)
        sys_e = SystemSpec(
            base.P + Pt * eps, base.Q + Qt * eps, name=f"perturbed(eps={eps})"
        )
        p_eps = radial_average(to_polar(sys_e))
        w_eps = gradient_pair_w(p_eps)
        cert = certify(sys_e, pair=DulacPair(k, w_eps))
        entries.append(MarginEntry(eps, cert))
    certified_eps = [e.eps for e in entries if e.certified]
    margin = max(certified_eps) if certified_eps else None
    return MarginReport(k, entries, margin)
