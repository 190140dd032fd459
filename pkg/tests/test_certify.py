import math
import random
from fractions import Fraction

import pytest

from cyclecert import corpus
from cyclecert.bipoly import BiPoly
from cyclecert.certify import (
    Certificate,
    DulacPair,
    InvalidPerturbationDegrees,
    NoDulacPairFound,
    certification_margin,
    certify,
    dulac_defect,
    dulac_form,
    gradient_pair_defect,
    gradient_pair_w,
    is_dulac_pair,
    lower_bound,
    propose_pairs,
    ring_decomposition,
)
from cyclecert.exactalg import RatPoly, count_real_roots, is_negative_on_positive_axis
from cyclecert.polarize import radial_average, rotational_system, to_polar
from cyclecert.trigpoly import TrigRadialPoly

from util import rand_simple_rooted

F = Fraction

P_SHOWCASE = RatPoly([4, F(-79, 16), 1])
DEFECT_SHOWCASE = RatPoly(
    [0, 0, F(-79, 10), 0, F(-1287, 128), 0, F(237, 40), 0, F(-8, 5)]
)
PHI_SHOWCASE = RatPoly(
    [0, 0, F(-79, 10), 0, F(-3459, 400), F(869, 600), F(1269, 200), F(46, 75), F(-8, 5)]
)


class TestDefect:
    def test_showcase_value(self):
        pair = corpus.showcase_pair()
        assert dulac_defect(P_SHOWCASE, pair.k, pair.w) == DEFECT_SHOWCASE

    def test_zero_w(self):
        assert dulac_defect(P_SHOWCASE, 1, RatPoly()) == RatPoly()

    def test_gradient_pair_identity(self):
        # defect of w = r^2 p'(r^2) equals its quoted closed form, exactly
        rng = random.Random(61)
        for _ in range(200):
            p = RatPoly(
                [F(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(rng.randint(2, 6))]
            )
            if p.degree < 1:
                continue
            k = F(rng.randint(1, 40), rng.randint(1, 20))
            assert dulac_defect(p, k, gradient_pair_w(p)) == gradient_pair_defect(p, k)

    def test_scaling(self):
        rng = random.Random(67)
        for _ in range(200):
            p = rand_simple_rooted(rng, 4)
            w = rand_simple_rooted(rng, 3)
            c = F(rng.randint(1, 50), rng.randint(1, 10)) * rng.choice((1, -1))
            k = F(rng.randint(1, 20), rng.randint(1, 10))
            assert dulac_defect(p, k, c * w) == c * dulac_defect(p, k, w)


class TestPairVerification:
    def test_mixed_roots_product_pair(self):
        # p with a complex pair and a negative root still admits pairs
        p = RatPoly([-2, 1]) * RatPoly([-4, 1]) * RatPoly([4, 0, 1]) * RatPoly([3, 1])
        w = RatPoly([-1, 0, 1]) * RatPoly([-3, 0, 1])  # (r^2-1)(r^2-3)
        for k in (F(1, 2), F(1), F(2)):
            assert is_dulac_pair(p, k, w).ok

    def test_single_positive_root_window(self):
        p = RatPoly([-35, -36, F(49, 2), F(-14, 3), F(1, 4)])
        for alpha in (F(11, 2), F(8), F(11)):
            assert is_dulac_pair(p, 1, RatPoly([-alpha, 0, 1])).ok

    def test_double_positive_root_never_verifies(self):
        p = RatPoly([-1, 1]) ** 2
        check = is_dulac_pair(p, 1, RatPoly([F(-1, 2), 0, 1]))
        assert not check.ok
        # the defect vanishes at r = 1 regardless of the pair
        assert check.defect(1) == 0


class TestProposals:
    def test_showcase_contains_quoted_pair(self):
        proposal = propose_pairs(P_SHOWCASE)
        quoted = corpus.showcase_pair()
        assert quoted in proposal.pairs
        assert is_dulac_pair(P_SHOWCASE, quoted.k, quoted.w).ok

    def test_multiple_positive_root_is_impossible(self):
        rng = random.Random(71)
        for _ in range(200):
            root = F(rng.randint(1, 40), rng.randint(1, 8))
            extra = rand_simple_rooted(rng, 2)
            p = RatPoly([-root, 1]) ** 2 * extra
            proposal = propose_pairs(p)
            assert proposal.impossible
            assert proposal.pairs == []

    def test_grid_succeeds_on_simple_real_rooted(self):
        rng = random.Random(73)
        for _ in range(20):
            p = rand_simple_rooted(rng, 4)
            proposal = propose_pairs(p)
            assert not proposal.impossible
            w = gradient_pair_w(p)
            verified = [
                c for c in proposal.pairs
                if c.w == w and is_dulac_pair(p, c.k, c.w).ok
            ]
            assert verified, f"no grid k verified for {p!r}"

    def test_midpoint_strategy_covers_complex_root_case(self):
        p = RatPoly([-2, 1]) * RatPoly([-4, 1]) * RatPoly([4, 0, 1]) * RatPoly([3, 1])
        proposal = propose_pairs(p)
        midpoint_pairs = [c for c in proposal.pairs if c.w.degree == 4]
        assert midpoint_pairs
        assert any(is_dulac_pair(p, c.k, c.w).ok for c in midpoint_pairs)

    def test_negativity_of_curvature_expression(self):
        # p p'' - (p')^2 stays negative for simple-real-rooted p
        rng = random.Random(79)
        for _ in range(200):
            p = rand_simple_rooted(rng)
            expr = p * p.derivative().derivative() - p.derivative() * p.derivative()
            assert expr.leading_coefficient < 0
            assert count_real_roots(expr) == 0


class TestDulacForm:
    def test_showcase_slices(self):
        ps = to_polar(corpus.showcase_system())
        M = dulac_form(ps, corpus.showcase_pair())
        s4 = M.slices[4]
        assert s4.a0 == F(-25740, 2560)
        assert s4.cos == {2: F(16432, 12800), 4: F(316, 2560)}
        assert s4.sin == {}
        assert M.l1_majorant() == PHI_SHOWCASE
        assert M.max_radial_power() == ps.n + corpus.showcase_pair().d - 1

    def test_rotational_closed_form(self):
        # with k = 1, w = r^2 u'(r^2): M = 2 r^4 (u u'' - (u')^2)(r^2), theta-free
        rng = random.Random(83)
        for _ in range(25):
            u = rand_simple_rooted(rng, 4)
            v = RatPoly([F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3)])
            sys = rotational_system(u, v)
            ps = to_polar(sys)
            w = gradient_pair_w(u)
            if w.is_zero:
                continue
            M = dulac_form(ps, DulacPair(1, w))
            expr = u * u.derivative().derivative() - u.derivative() * u.derivative()
            expected = (2 * expr.substitute_square()).shift_up(4)
            assert M == TrigRadialPoly.from_radial(expected)

    def test_two_cycle_top_slice(self):
        sys = corpus.two_cycle_family(F(1, 8), F(1, 15), F(1, 20))
        M = dulac_form(to_polar(sys), corpus.quadratic_pair())
        top = M.slices[8]
        assert top.a0 == -4 and not top.cos and not top.sin


class TestCertify:
    def test_showcase_with_quoted_pair(self):
        cert = certify(corpus.showcase_system(), pair=corpus.showcase_pair())
        assert cert.certified
        assert cert.verdict == "certified"
        assert cert.upper_bound == 2
        assert cert.p == P_SHOWCASE
        assert cert.defect == DEFECT_SHOWCASE
        assert cert.phi == PHI_SHOWCASE
        assert cert.defect_witness.negative and cert.phi_witness.negative

    def test_showcase_auto_search(self):
        cert = certify(corpus.showcase_system())
        assert cert.certified
        assert cert.upper_bound == 2

    def test_three_ring_family(self):
        cert = certify(corpus.three_ring_family(F(1, 34)))
        assert cert.certified
        assert cert.pair == corpus.three_ring_pair()
        assert cert.upper_bound == 3
        # ring boundaries at r^2 = 2 -/+ sqrt(3)/3, as interval enclosures
        mids = [
            float(sum(ring.inner) / 2) for ring in cert.rings if ring.inner[1] > 0
        ]
        expected = [math.sqrt(2 - math.sqrt(3) / 3), math.sqrt(2 + math.sqrt(3) / 3)]
        assert len(mids) == 2
        for mid, want in zip(mids, expected):
            assert abs(mid - want) < 1e-9

    def test_invariant_circle_bound_is_sharp(self):
        # u = 1 - s^2 keeps only the root 0 in w = -2 r^4: bound 1, cycle at r = 1
        cert = certify(rotational_system(RatPoly([1, 0, -1]), RatPoly([1])))
        assert cert.certified
        assert cert.pair.w == RatPoly([0, 0, 0, 0, -2])
        assert cert.upper_bound == 1

    def test_sharpness_on_nested_circles(self):
        # u with m* simple positive roots and interlacing u': bound equals m*
        configs = [
            [F(1)], [F(2)], [F(1, 2)],
            [F(1), F(2)], [F(1), F(3)], [F(1, 2), F(3, 2)],
            [F(1), F(2), F(3)], [F(1), F(4), F(9)], [F(1, 2), F(2), F(5)],
            [F(2, 3), F(5, 3), F(3)],
        ]
        for roots in configs:
            u = RatPoly([1])
            for root in roots:
                u = u * RatPoly([-root, 1])
            cert = certify(rotational_system(u, RatPoly([1])))
            assert cert.certified
            assert cert.upper_bound == len(roots)

    def test_phi_failure_reported_with_witness(self):
        # huge perturbation term defeats the majorant but not the defect
        sys = corpus.three_ring_family(1000)
        cert = certify(sys, pair=corpus.three_ring_pair())
        assert not cert.certified
        assert cert.failure_stage == "phi"
        assert "not-certified" in cert.verdict
        assert cert.phi_witness is not None and not cert.phi_witness.negative

    def test_impossible_raises(self):
        # radial average (s-1)^2 has a double positive root
        u = RatPoly([-1, 1]) ** 2
        with pytest.raises(NoDulacPairFound) as exc:
            certify(rotational_system(u, RatPoly([1])))
        assert exc.value.impossible


class TestRings:
    def test_showcase_rings(self):
        w = corpus.showcase_pair().w
        rings = ring_decomposition(w)
        assert len(rings) == 2
        inner, outer = rings
        assert inner.inner == (F(0), F(0))
        assert inner.w_sign == -1 and inner.stability_if_exists == "stable"
        assert outer.outer is None
        assert outer.w_sign == 1 and outer.stability_if_exists == "unstable"
        boundary = float(sum(inner.outer) / 2)
        assert abs(boundary - math.sqrt(79 / 32)) < 1e-9
        # consecutive rings share the boundary enclosure
        assert inner.outer == outer.inner

    def test_three_rings(self):
        rings = ring_decomposition(corpus.three_ring_pair().w)
        assert len(rings) == 3
        assert [r.stability_if_exists for r in rings] == [
            "stable", "unstable", "stable"
        ]
        assert rings[1].cycle_prediction == "exactly-one-if-no-critical-points"
        assert rings[0].cycle_prediction == "at-most-one"
        assert rings[2].cycle_prediction == "at-most-one"

    def test_disc_when_w_nonzero_at_origin(self):
        rings = ring_decomposition(RatPoly([-1, 0, 1]))  # r^2 - 1
        assert len(rings) == 2
        assert rings[0].is_disc and rings[0].cycle_prediction == "none"
        assert rings[0].stability_if_exists is None
        assert rings[1].outer is None


class _Point:
    def __init__(self, x, y):
        self.x, self.y = x, y


class TestLowerBound:
    def test_showcase_origin_only(self):
        cert = certify(corpus.showcase_system(), pair=corpus.showcase_pair())
        got = lower_bound(cert, [_Point(0.0, 0.0)])
        assert got == 0
        assert cert.C == 0
        assert all(r.contains_critical_points == "no" for r in cert.rings)

    def test_points_in_middle_ring_counted(self):
        cert = certify(corpus.three_ring_family(F(1, 34)))
        pts = [_Point(0.0, 0.0), _Point(0.0, 1.4), _Point(-1.4, 0.0)]
        got = lower_bound(cert, pts)
        # middle ring spans sqrt(2 -/+ sqrt(3)/3) ~ (1.193, 1.605): C = 1
        assert cert.C == 1
        assert got == max(0, 3 - 2 - 1)
        assert cert.rings[1].contains_critical_points == "yes"

    def test_fresh_certificate_has_unknown_lower_bound(self):
        cert = certify(corpus.showcase_system(), pair=corpus.showcase_pair())
        assert cert.C is None and cert.lower_bound is None


class TestMargin:
    def test_explicit_perturbation(self):
        u = RatPoly([2, -3, 1])
        rep = certification_margin(
            u, RatPoly([1]), BiPoly({(2, 1): 1}), BiPoly({(1, 2): 1}),
            [F(0), F(1, 100), F(1, 10), F(1, 5), F(1, 2), F(1000)],
        )
        assert rep.k == 1
        assert rep.entries[0].certified            # eps = 0 always certifies
        assert rep.entries[-1].eps == 1000 and not rep.entries[-1].certified
        assert rep.margin == F(1, 5)               # pinned regression value
        assert rep.pass_set_is_prefix

    def test_degree_window_enforced(self):
        u = RatPoly([2, -3, 1])
        with pytest.raises(InvalidPerturbationDegrees):
            certification_margin(
                u, RatPoly([1]), BiPoly({(1, 0): 1}), BiPoly({(1, 2): 1}), [F(0)]
            )
        with pytest.raises(InvalidPerturbationDegrees):
            certification_margin(
                u, RatPoly([1]), BiPoly({(2, 1): 1}), BiPoly({(6, 0): 1}), [F(0)]
            )

    def test_multiple_root_u_rejected(self):
        u = RatPoly([-1, 1]) ** 2
        with pytest.raises(ValueError):
            certification_margin(
                u, RatPoly([1]), BiPoly({(2, 1): 1}), BiPoly({(2, 1): 1}), [F(0)]
            )
