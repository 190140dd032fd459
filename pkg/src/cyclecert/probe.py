"""Floating-point cross-validation of certificates.

Locates limit cycles through first-return maps on a ray section, classifies
their stability twice over (return-map derivative and divergence integral),
isolates critical points from the exact resultant, and checks the flow
direction on circles.  Everything here is deliberately non-rigorous: it is
a falsification harness, never an input to a certificate.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .bipoly import SystemSpec, resultant_y
from .exactalg import Rat, _rat, real_roots_isolated
from .polarize import to_polar
from .trigpoly import FourierSlice

log = logging.getLogger(__name__)

GOLDEN_ANGLE = 2 * math.pi * (1 - 1 / ((1 + math.sqrt(5)) / 2))


class ProbeError(RuntimeError):
    pass


class StepFailure(ProbeError):
    """The integrator could not keep its local error under control."""


class Escape(ProbeError):
    """Trajectory left the guard disc."""


class NoReturn(ProbeError):
    """No first return to the section was observed."""


class SectionTangency(ProbeError):
    """theta' vanished along the computed arc."""


class DegenerateResultant(ProbeError):
    """P and Q share a curve of singular points."""


@dataclass(frozen=True)
class CycleFinding:
    section_radius: float
    stability: str                # 'stable' | 'unstable'
    return_derivative: float
    divergence_integral: float
    period_estimate: float
    consistent: bool              # both stability estimates agree


@dataclass(frozen=True)
class CriticalPoint:
    x: float
    y: float
    residual: float
    status: str                   # 'origin-exact' | 'refined-numeric'


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    xy: np.ndarray                # shape (len(t), 2)
    dense: object                 # OdeSolution for event post-processing


@dataclass(frozen=True)
class TransversalityReport:
    verdict: str                  # 'inward' | 'outward' | 'mixed'
    rigorous: bool
    bound_low: Rat
    bound_high: Rat


class _FlowModel:
    """Callable right-hand sides for one system, with cached float grids.

    ``reverse=True`` integrates the time-reversed field; a strongly
    repelling cycle of the forward flow is then strongly attracting and
    can be located by the same displacement scan.
    """

    def __init__(self, sys: SystemSpec, reverse: bool = False):
        self.sys = sys
        self.P, self.Q = sys.P, sys.Q
        self.div = sys.divergence()
        self.Px = sys.P.partial("x")
        self.Py = sys.P.partial("y")
        self.Qx = sys.Q.partial("x")
        self.Qy = sys.Q.partial("y")
        self.sign = -1.0 if reverse else 1.0

    def plane_rhs(self, t, state):
        x, y = state
        return (
            self.sign * self.P.eval_f64(x, y),
            self.sign * self.Q.eval_f64(x, y),
        )

    def polar_rhs(self, t, state):
        # state: (x, y, unwrapped angle, accumulated divergence integral)
        x, y = state[0], state[1]
        p = self.sign * self.P.eval_f64(x, y)
        q = self.sign * self.Q.eval_f64(x, y)
        r2 = x * x + y * y
        dphi = (x * q - y * p) / r2 if r2 > 0 else 0.0
        return (p, q, dphi, self.sign * self.div.eval_f64(x, y))

    def theta_dot(self, x, y):
        r2 = x * x + y * y
        return (
            self.sign
            * (x * self.Q.eval_f64(x, y) - y * self.P.eval_f64(x, y))
            / r2
        )


def integrate(
    sys: SystemSpec,
    start: tuple[float, float],
    t_end: float,
    tol: float = 1e-9,
    r_max: float | None = None,
) -> Trajectory:
    """Adaptive embedded Runge-Kutta trajectory with dense output."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    model = _FlowModel(sys)
    events = []
    if r_max is not None:
        guard2 = r_max * r_max

        def escape(t, s):
            return s[0] * s[0] + s[1] * s[1] - guard2

        escape.terminal = True
        escape.direction = 1
        events.append(escape)
    sol = solve_ivp(
        model.plane_rhs,
        (0.0, t_end),
        np.asarray(start, dtype=float),
        method="RK45",
        rtol=tol,
        atol=tol * 1e-2,
        dense_output=True,
        events=events or None,
    )
    if sol.status == -1:
        raise StepFailure(sol.message)
    if r_max is not None and sol.t_events and len(sol.t_events[0]):
        raise Escape(f"trajectory left r < {r_max} at t = {sol.t_events[0][0]:.6g}")
    return Trajectory(sol.t, sol.y[:2].T, sol.sol)


def _first_return(
    model: _FlowModel,
    r0: float,
    tol: float,
    section_angle: float,
    t_cap: float,
    r_guard: float,
) -> tuple[float, float, float]:
    """(return radius, period, divergence integral) after a 2 pi sweep."""
    if r0 <= 0:
        raise ValueError("section radius must be positive")
    x0 = r0 * math.cos(section_angle)
    y0 = r0 * math.sin(section_angle)
    td = model.theta_dot(x0, y0)
    if abs(td) < 1e-12:
        raise SectionTangency(f"theta' ~ 0 at the section point r = {r0:.6g}")
    advance = 1.0 if td > 0 else -1.0
    target = section_angle + 2 * math.pi * advance

    # The unwrapped angle phi equals section_angle + 2 pi m exactly at the
    # m-th crossing of the section ray, so this event (with the matching
    # direction) is the first genuine return even when theta' wiggles
    # negative along interior arcs.
    def hit_section(t, s):
        return s[2] - target

    hit_section.terminal = True
    hit_section.direction = advance

    guard2 = r_guard * r_guard

    def escape(t, s):
        return s[0] * s[0] + s[1] * s[1] - guard2

    escape.terminal = True
    escape.direction = 1

    sol = solve_ivp(
        model.polar_rhs,
        (0.0, t_cap),
        np.array([x0, y0, section_angle, 0.0]),
        method="RK45",
        rtol=tol,
        atol=tol * 1e-2,
        dense_output=True,
        events=[hit_section, escape],
    )
    if sol.status == -1:
        raise StepFailure(sol.message)
    if len(sol.t_events[0]):
        t_ret = sol.t_events[0][0]
        state = sol.sol(t_ret)
        return math.hypot(state[0], state[1]), t_ret, state[3]
    if len(sol.t_events[1]):
        raise NoReturn(f"trajectory escaped r > {r_guard:.6g} from r0 = {r0:.6g}")
    raise NoReturn(f"no return within t = {t_cap:.6g} from r0 = {r0:.6g}")


def poincare_return(
    sys: SystemSpec,
    r0: float,
    tol: float = 1e-10,
    section_angle: float = 0.0,
    t_cap: float = 1000.0,
    r_guard: float | None = None,
) -> float:
    """Radius of the first return to the ray section after a full 2 pi sweep."""
    model = _FlowModel(sys)
    guard = r_guard if r_guard is not None else 50.0 * (1.0 + r0)
    r1, _, _ = _first_return(model, r0, tol, section_angle, t_cap, guard)
    return r1


def find_cycles(
    sys: SystemSpec,
    r_max: float,
    tol: float = 1e-8,
    n_grid: int = 400,
    critical_points: list[CriticalPoint] | None = None,
) -> list[CycleFinding]:
    """Scan the displacement map D(r) on a log grid, bracket its sign changes
    and polish each fixed point; every finding carries two independent
    stability estimates.

    The scan runs in both time directions: a strongly repelling cycle
    (one-period multiplier far above 1) cannot be bracketed forward because
    nearby trajectories escape within a single revolution, but it is
    strongly attracting for the reversed field.  All findings are reported
    in forward-time convention.
    """
    section = 0.0
    if critical_points:
        for _ in range(8):
            blocked = any(
                pt.status != "origin-exact"
                and abs(_angle_to(section, pt)) < 1e-3
                for pt in critical_points
            )
            if not blocked:
                break
            section += GOLDEN_ANGLE
    guard = 50.0 * (1.0 + r_max)

    found: list[CycleFinding] = []
    for reverse in (False, True):
        model = _FlowModel(sys, reverse=reverse)
        for radius in _displacement_roots(model, r_max, tol, n_grid, section, guard):
            finding = _classify(model, radius, tol, section, guard)
            twin = next(
                (
                    f for f in found
                    if abs(f.section_radius - radius) < 1e-5 * max(radius, 1e-9)
                ),
                None,
            )
            if twin is None:
                found.append(finding)
            elif (finding.stability == "unstable") == reverse:
                # keep the copy measured in its attracting direction
                found[found.index(twin)] = finding
    found.sort(key=lambda f: f.section_radius)
    return found


def _displacement_roots(
    model: _FlowModel,
    r_max: float,
    tol: float,
    n_grid: int,
    section: float,
    guard: float,
) -> list[float]:
    def displacement(r: float) -> float:
        r1, _, _ = _first_return(model, r, tol, section, 1000.0, guard)
        return r1 - r

    grid = np.geomspace(r_max * 1e-3, r_max, n_grid)
    samples: list[tuple[int, float, float]] = []
    for idx, r in enumerate(grid):
        try:
            samples.append((idx, float(r), displacement(float(r))))
        except ProbeError as exc:
            log.debug("displacement sample skipped at r = %.6g: %s", r, exc)

    roots: list[float] = []
    for (i1, r1, d1), (i2, r2, d2) in zip(samples, samples[1:]):
        if i2 - i1 != 1:
            continue  # only bracket between adjacent successful samples
        if d1 == 0.0:
            roots.append(r1)
        elif (d1 > 0) != (d2 > 0):
            try:
                roots.append(brentq(displacement, r1, r2, xtol=1e-11, rtol=1e-14))
            except ProbeError as exc:
                log.debug("bracket (%.6g, %.6g) refinement failed: %s", r1, r2, exc)
    if samples and samples[-1][2] == 0.0:
        roots.append(samples[-1][1])
    return roots


def _angle_to(section: float, pt) -> float:
    diff = math.atan2(pt.y, pt.x) - section
    return (diff + math.pi) % (2 * math.pi) - math.pi


_DERIV_FLOOR = 1e-12


def _classify(
    model: _FlowModel, radius: float, tol: float, section: float, guard: float
) -> CycleFinding:
    """Measure one cycle in the model's own time direction, then report it in
    forward-time convention (reversal flips the divergence sign and inverts
    the return-map multiplier)."""
    _, period, div_meas = _first_return(model, radius, tol, section, 1000.0, guard)
    h = 1e-5 * radius
    r_hi, _, _ = _first_return(model, radius + h, tol, section, 1000.0, guard)
    r_lo, _, _ = _first_return(model, radius - h, tol, section, 1000.0, guard)
    deriv_meas = (r_hi - r_lo) / (2 * h)
    if model.sign > 0:
        deriv, div_int = deriv_meas, div_meas
    else:
        deriv = 1.0 / max(deriv_meas, _DERIV_FLOOR)
        div_int = -div_meas
    stability = "stable" if div_int < 0 else "unstable"
    consistent = (deriv < 1.0) == (div_int < 0.0)
    return CycleFinding(radius, stability, deriv, div_int, period, consistent)


def critical_points(sys: SystemSpec, box: float = 10.0) -> list[CriticalPoint]:
    """All critical points inside [-box, box]^2.

    x-candidates come from exact isolation of the resultant's real roots;
    each is paired with the numerically refined y-roots of P(x0, y) (or of
    Q when P specialises to zero) and kept when the 2D Newton polish lands
    below the residual gate.
    """
    res = resultant_y(sys.P, sys.Q)
    if res.is_zero:
        raise DegenerateResultant("resultant vanishes identically")
    model = _FlowModel(sys)
    points: list[CriticalPoint] = [CriticalPoint(0.0, 0.0, 0.0, "origin-exact")]

    for iv in real_roots_isolated(res):
        coarse = iv.refined(Fraction(1, 2**12))
        if not (-box - 1 <= float(coarse.lo) <= box + 1):
            continue
        x0 = coarse.approx()
        if abs(x0) > box:
            continue
        x0_rat = coarse.refined(Fraction(1, 10**12)).midpoint()
        py = sys.P.specialize_x(x0_rat)
        if py.is_zero or py.degree < 1:
            py = sys.Q.specialize_x(x0_rat)
        if py.is_zero or py.degree < 1:
            continue
        coeffs = np.array([float(c) for c in reversed(py.coeffs)])
        lead = np.max(np.abs(coeffs))
        trim = 0
        while trim < len(coeffs) - 1 and abs(coeffs[trim]) < 1e-13 * lead:
            trim += 1
        for root in np.roots(coeffs[trim:]):
            if abs(root.imag) > 1e-6 or abs(root.real) > box:
                continue
            refined = _newton_polish(model, x0, float(root.real))
            if refined is None:
                continue
            x, y, residual = refined
            if abs(x - x0) > 1e-6 or abs(x) > box or abs(y) > box:
                continue
            if math.hypot(x, y) < 1e-8:
                continue  # the origin is already reported exactly
            if any(math.hypot(x - p.x, y - p.y) < 1e-8 for p in points):
                continue
            points.append(CriticalPoint(x, y, residual, "refined-numeric"))
    points.sort(key=lambda p: (round(p.x, 9), round(p.y, 9)))
    return points


def _newton_polish(model: _FlowModel, x: float, y: float):
    for _ in range(60):
        p = model.P.eval_f64(x, y)
        q = model.Q.eval_f64(x, y)
        if max(abs(p), abs(q)) < 1e-13:
            break
        a = model.Px.eval_f64(x, y)
        b = model.Py.eval_f64(x, y)
        c = model.Qx.eval_f64(x, y)
        d = model.Qy.eval_f64(x, y)
        det = a * d - b * c
        if abs(det) < 1e-14:
            return None
        x -= (d * p - b * q) / det
        y -= (a * q - c * p) / det
    residual = max(abs(model.P.eval_f64(x, y)), abs(model.Q.eval_f64(x, y)))
    if residual > 1e-10:
        return None
    return x, y, residual


def circle_transversality(sys: SystemSpec, r) -> TransversalityReport:
    """Flow direction across the circle of exact rational radius r.

    The radial component R(r, theta) collapses to a single trigonometric
    polynomial in theta; its coefficient-sum bound gives a rigorous verdict
    whenever it is conclusive, otherwise 4096-point sampling decides
    without rigor.
    """
    r = _rat(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    ps = to_polar(sys)
    combined = FourierSlice(0)
    for i, s in ps.R.slices.items():
        combined = combined + s.scale(r**i)
    spread = combined.l1_bound() - combined.a0  # sum of |harmonics|
    hi = combined.a0 + spread
    lo = combined.a0 - spread
    if hi < 0:
        return TransversalityReport("inward", True, lo, hi)
    if lo > 0:
        return TransversalityReport("outward", True, lo, hi)
    vals = [combined.eval_f64(2 * math.pi * k / 4096) for k in range(4096)]
    if max(vals) < 0:
        verdict = "inward"
    elif min(vals) > 0:
        verdict = "outward"
    else:
        verdict = "mixed"
    return TransversalityReport(verdict, False, lo, hi)


# -- CSV emission (fixed headers; columns are part of the interface) --------


def write_trajectory_csv(path: Path | str, traj: Trajectory) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x", "y"])
        for t, (x, y) in zip(traj.t, traj.xy):
            writer.writerow([f"{t!r}", f"{x!r}", f"{y!r}"])


def write_displacement_csv(
    path: Path | str, samples: list[tuple[float, float]]
) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["r", "displacement"])
        for r, d in samples:
            writer.writerow([f"{r!r}", f"{d!r}"])


def write_findings_csv(path: Path | str, findings: list[CycleFinding]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["radius", "stability", "return_derivative", "divergence_integral"]
        )
        for f in findings:
            writer.writerow(
                [f"{f.section_radius!r}", f.stability,
                 f"{f.return_derivative!r}", f"{f.divergence_integral!r}"]
            )


def displacement_samples(
    sys: SystemSpec,
    r_max: float,
    tol: float = 1e-8,
    n_grid: int = 400,
    section_angle: float = 0.0,
) -> list[tuple[float, float]]:
    """Raw (r, D(r)) samples for external plotting; failures are skipped."""
    model = _FlowModel(sys)
    guard = 50.0 * (1.0 + r_max)
    out = []
    for r in np.geomspace(r_max * 1e-3, r_max, n_grid):
        try:
            r1, _, _ = _first_return(model, float(r), tol, section_angle, 1000.0, guard)
            out.append((float(r), r1 - float(r)))
        except ProbeError:
            continue
    return out
