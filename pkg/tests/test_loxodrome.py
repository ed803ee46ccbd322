import cmath
import math

import pytest

import moeblox as mx
from moeblox.errors import (
    DegenerateTriple,
    DomainError,
    InvalidInput,
    NotDisjoint,
    NotFinite,
    NotOrthogonal,
    PointNotOnBoth,
    PointNotOnCurve,
    ZeroRadiusCandidate,
)

from conftest import (
    assert_projectively_equal,
    on_curve_point,
    projective_residual,
    random_moebius,
)

TWO_PI = 2 * math.pi
UNIT = mx.Cycle(1, 0, 0, -1)
REAL_AXIS = mx.Cycle(0, 0, 1, 0)
IMAG_AXIS = mx.Cycle(0, 1, 0, 0)
E_CIRCLE = mx.Cycle(1, 0, 0, -math.e**2)
pt = mx.ExtendedPoint.from_complex
INF = mx.ExtendedPoint.infinity()


def std(lt):
    return mx.standard_triple(mx.SlsParameter.finite(lt))


class TestSlsParameter:
    def test_classify(self):
        assert mx.classify_sls(1 + TWO_PI * 1j) == mx.SlsClass.POSITIVE
        assert mx.classify_sls(1 - TWO_PI * 1j) == mx.SlsClass.NEGATIVE
        assert mx.classify_sls(TWO_PI * 1j) == mx.SlsClass.DEGENERATE

    def test_lambda_tilde(self):
        param = mx.lambda_tilde(1 + TWO_PI * 1j)
        assert param.kind == mx.SlsKind.FINITE
        assert param.lambda_tilde == pytest.approx(1.0)
        assert mx.lambda_tilde(5).kind == mx.SlsKind.INFINITE
        assert mx.lambda_tilde(0).kind == mx.SlsKind.POINT

    def test_turn_modulus(self):
        assert mx.SlsParameter.finite(1).a == pytest.approx(math.e)
        assert mx.SlsParameter.infinite().a == math.inf
        with pytest.raises(NotFinite):
            mx.SlsParameter.point().a

    def test_rate(self):
        assert mx.SlsParameter.finite(1).rate == complex(1, TWO_PI)
        with pytest.raises(NotFinite):
            mx.SlsParameter.infinite().rate


class TestDiagonalFlow:
    def test_identity_at_zero(self):
        M = mx.diagonal_flow(1 + TWO_PI * 1j, 0.0)
        assert (M.a, M.b, M.c, M.d) == (1, 0, 0, 1)

    def test_action_scales_by_e(self):
        M = mx.diagonal_flow(1 + TWO_PI * 1j, 1.0)
        z = mx.apply_to_point(M, pt(1)).as_complex()
        assert z == pytest.approx(math.e, abs=1e-12)

    def test_negative_branch_is_swap_composed(self):
        minus = mx.diagonal_flow(1 + TWO_PI * 1j, 0.0, branch=-1)
        assert mx.apply_to_point(minus, pt(1)).as_complex() == pytest.approx(-1)
        assert mx.apply_to_point(mx.BRANCH_SWAP, pt(1)).as_complex() == -1


class TestSampleSls:
    def test_orbit_of_one(self):
        plus, minus = mx.sample_sls(mx.SlsParameter.finite(0.7), 0.0)
        assert plus.as_complex() == pytest.approx(1)
        assert minus.as_complex() == pytest.approx(-1)

    def test_quarter_turn(self):
        plus, minus = mx.sample_sls(mx.SlsParameter.finite(0.0), 0.25)
        assert plus.as_complex() == pytest.approx(1j, abs=1e-12)
        assert minus.as_complex() == pytest.approx(-1j, abs=1e-12)

    def test_growth(self):
        plus, _ = mx.sample_sls(mx.SlsParameter.finite(1.0), 1.0)
        assert plus.as_complex() == pytest.approx(math.e, abs=1e-12)

    def test_not_finite(self):
        with pytest.raises(NotFinite):
            mx.sample_sls(mx.SlsParameter.infinite(), 0.0)


class TestStandardTriple:
    def test_generic(self):
        T = std(1.0)
        assert T.c1 == REAL_AXIS and T.c2 == UNIT
        assert T.c3.m == pytest.approx(-math.e**2)
        assert T.sign == 1
        assert std(-1.0).sign == -1

    def test_circle_degenerate(self):
        T = std(0.0)
        assert T.c2 == T.c3 == UNIT

    def test_line_degenerate(self):
        T = mx.standard_triple(mx.SlsParameter.infinite())
        assert T.c3 == mx.Cycle(0, 0, 0, 1)

    def test_point_rejected(self):
        with pytest.raises(DegenerateTriple):
            mx.standard_triple(mx.SlsParameter.point())


class TestValidateTriple:
    def test_standard_is_valid(self):
        T = mx.validate_triple(REAL_AXIS, UNIT, E_CIRCLE, 1)
        assert isinstance(T, mx.LoxodromeTriple)

    def test_other_elliptic_member_is_valid(self):
        mx.validate_triple(IMAG_AXIS, UNIT, E_CIRCLE, 1)

    def test_non_orthogonal_first_cycle(self):
        with pytest.raises(NotOrthogonal):
            mx.validate_triple(UNIT, UNIT, E_CIRCLE, 1)

    def test_crossing_pair_rejected(self):
        with pytest.raises(NotDisjoint):
            mx.validate_triple(REAL_AXIS, UNIT, mx.from_circle(1, 1), 1)

    def test_degenerate_kinds_validate(self):
        for param in (mx.SlsParameter.finite(0.0), mx.SlsParameter.infinite()):
            T = mx.standard_triple(param)
            mx.validate_triple(T.c1, T.c2, T.c3, T.sign)

    def test_bad_sign(self):
        with pytest.raises(InvalidInput):
            mx.validate_triple(REAL_AXIS, UNIT, E_CIRCLE, 2)

    def test_violation_report_carries_residual(self):
        violations = mx.triple_violations(UNIT, UNIT, E_CIRCLE, 1)
        assert violations and violations[0].residual == pytest.approx(2.0)


class TestLambdaFromTriple:
    def test_standard(self):
        param = mx.lambda_from_triple(std(1.0))
        assert param.lambda_tilde == pytest.approx(1.0, abs=1e-12)

    def test_sign_channel(self):
        assert mx.lambda_from_triple(std(-2.0)).lambda_tilde == pytest.approx(-2.0)

    def test_coincident_gives_zero(self):
        assert mx.lambda_from_triple(std(0.0)).lambda_tilde == 0.0

    def test_point_third_gives_infinite(self):
        T = mx.standard_triple(mx.SlsParameter.infinite())
        assert mx.lambda_from_triple(T).kind == mx.SlsKind.INFINITE

    def test_invariant_under_transforms(self, rng):
        T0 = std(1.0)
        for _ in range(100):
            T = mx.apply_map(random_moebius(rng), T0)
            assert abs(mx.lambda_from_triple(T).lambda_tilde) == pytest.approx(
                1.0, abs=1e-8
            )

    def test_crossing_pair_raises_domain_error(self):
        T = mx.LoxodromeTriple(REAL_AXIS, UNIT, mx.from_circle(1, 1), 1)
        with pytest.raises(DomainError):
            mx.lambda_from_triple(T)


class TestStandardMap:
    def test_standard_is_identity(self):
        M = mx.standard_map(std(1.0))
        for z in (0.5, 2 + 1j, -3j):
            assert mx.apply_to_point(M, pt(z)).as_complex() == pytest.approx(
                z, abs=1e-12
            )

    def test_translated_standard(self):
        shift = mx.MoebiusMap(1, 2, 0, 1)
        T = mx.apply_map(shift, std(1.0))
        M = mx.standard_map(T)
        for z in (2, 3, 2 + 1j):
            assert mx.apply_to_point(M, pt(z)).as_complex() == pytest.approx(
                z - 2, abs=1e-10
            )

    def test_negative_sign_swaps_labels(self):
        T = mx.LoxodromeTriple(REAL_AXIS, UNIT, E_CIRCLE, -1)
        M = mx.standard_map(T)
        assert mx.apply_to_point(M, pt(1)).as_complex() == pytest.approx(1, abs=1e-12)
        assert mx.apply_to_point(M, pt(0)).is_infinity
        img3 = mx.apply_to_cycle(M, T.c3)
        _, r = mx.center_radius(mx.canonicalize(img3))
        assert r == pytest.approx(math.exp(-1), abs=1e-12)

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateTriple):
            mx.standard_map(std(0.0))
        with pytest.raises(DegenerateTriple):
            mx.standard_map(mx.standard_triple(mx.SlsParameter.infinite()))

    def test_roundtrip_random(self, rng):
        for lt in (0.5, 1.0, 2.0):
            for sign in (1, -1):
                T0 = std(sign * lt)
                for _ in range(20):
                    T = mx.apply_map(random_moebius(rng), T0)
                    M = mx.standard_map(T)
                    back = mx.apply_map(M, T)
                    ref = mx.standard_triple(mx.lambda_from_triple(T))
                    for a, b in ((back.c1, ref.c1), (back.c2, ref.c2), (back.c3, ref.c3)):
                        assert projective_residual(a, b) <= 1e-8


class TestLoxodromePair:
    def test_roundtrip(self, rng):
        T = mx.apply_map(random_moebius(rng), std(1.3))
        lox = mx.Loxodrome.from_triple(T)
        again = lox.to_triple()
        assert mx.equivalent(T, again)

    def test_degenerate_roundtrip(self):
        T = std(0.0)
        lox = mx.Loxodrome.from_triple(T)
        back = lox.to_triple()
        assert mx.projectively_equal(back.c2, T.c2)


class TestEquivalence:
    def test_flow_shift_accepted(self, rng):
        T0 = std(1.0)
        for _ in range(30):
            t = rng.uniform(-2, 2)
            eps = int(rng.integers(0, 2))
            stab = mx.diagonal_flow(1 + TWO_PI * 1j, t)
            if eps:
                stab = stab @ mx.BRANCH_SWAP
            G = random_moebius(rng)
            A = mx.apply_map(G, T0)
            B = mx.apply_map(G @ stab, T0)
            assert mx.equivalent(A, B)

    def test_lambda_mismatch_rejected(self):
        assert not mx.equivalent(std(1.0), std(2.0))

    def test_elliptic_only_shift_rejected(self):
        rot = mx.MoebiusMap(cmath.exp(1j * math.pi / 3), 0, 0, 1)
        T = mx.LoxodromeTriple(
            mx.apply_to_cycle(rot, REAL_AXIS), UNIT, E_CIRCLE, 1
        )
        assert not mx.equivalent(std(1.0), T)

    def test_half_turn_of_line_accepted(self):
        rot = mx.MoebiusMap(cmath.exp(1j * math.pi), 0, 0, 1)
        T = mx.LoxodromeTriple(
            mx.apply_to_cycle(rot, REAL_AXIS), UNIT, E_CIRCLE, 1
        )
        assert mx.equivalent(std(1.0), T)

    def test_mirror_sign_rejected(self):
        T = std(1.0)
        mirror = mx.LoxodromeTriple(T.c1, T.c2, T.c3, -1)
        assert not mx.equivalent(T, mirror)

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateTriple):
            mx.equivalent(std(0.0), std(0.0))


class TestMembership:
    def test_point_one(self):
        rep = mx.contains_point(std(1.0), pt(1))
        assert rep.member and rep.t_coeff == pytest.approx(1.0)
        assert rep.lhs == pytest.approx(0.0, abs=1e-9)
        assert rep.rhs == pytest.approx(0.0, abs=1e-9)

    def test_point_on_minus_branch(self):
        rep = mx.contains_point(std(1.0), pt(-math.exp(0.5)))
        assert rep.member
        assert rep.t_coeff == pytest.approx(math.e / (math.e + 1), abs=1e-12)
        assert rep.lhs == pytest.approx(0.5, abs=1e-9)
        assert rep.rhs in (pytest.approx(0.0, abs=1e-9), pytest.approx(0.5, abs=1e-9))

    def test_off_curve_point(self):
        rep = mx.contains_point(std(1.0), pt(math.exp(0.1) * 1j))
        assert not rep.member
        assert rep.lhs == pytest.approx(0.1, abs=1e-6)
        assert rep.rhs == pytest.approx(0.25, abs=1e-9)

    def test_strict_mode_rejects_known_counterexample(self):
        p = pt(cmath.exp(0.75 * (1 + TWO_PI * 1j)))
        folded = mx.contains_point(std(1.0), p)
        strict = mx.contains_point(std(1.0), p, strict_mod1=True)
        assert folded.member and not strict.member
        assert folded.lhs == pytest.approx(0.75, abs=1e-9)
        assert folded.rhs == pytest.approx(0.25, abs=1e-9)

    def test_limit_points_flagged(self):
        for p in (pt(0), INF):
            rep = mx.contains_point(std(1.0), p)
            assert not rep.member and "limit_point" in rep.flags

    def test_circle_degenerate_incidence(self):
        T = std(0.0)
        assert mx.contains_point(T, pt(1j)).member
        assert not mx.contains_point(T, pt(2j)).member

    def test_line_degenerate_incidence(self):
        T = mx.standard_triple(mx.SlsParameter.infinite())
        rep = mx.contains_point(T, pt(3))
        assert rep.member and "degenerate_arc_unchecked" in rep.flags
        assert not mx.contains_point(T, pt(1j)).member
        assert "limit_point" in mx.contains_point(T, pt(0)).flags

    def test_report_json_shape(self):
        rep = mx.contains_point(std(1.0), pt(1))
        assert set(rep.to_json()) == {"member", "t_coeff", "lhs", "rhs", "flags"}


class TestMembershipOracle:
    def test_plus_branch(self):
        p = pt(math.exp(0.75) * cmath.exp(1.5j * math.pi))
        assert mx.contains_point_oracle(std(1.0), p)

    def test_minus_branch(self):
        p = pt(math.exp(0.75) * cmath.exp(0.5j * math.pi))
        assert mx.contains_point_oracle(std(1.0), p)

    def test_off_curve(self):
        p = pt(math.exp(0.1) * cmath.exp(0.5j * math.pi))
        assert not mx.contains_point_oracle(std(1.0), p)

    def test_degenerate_kinds(self):
        assert mx.contains_point_oracle(std(0.0), pt(1j))
        assert not mx.contains_point_oracle(std(0.0), pt(2j))
        inf_triple = mx.standard_triple(mx.SlsParameter.infinite())
        assert mx.contains_point_oracle(inf_triple, pt(-4))
        assert not mx.contains_point_oracle(inf_triple, pt(1j))

    def test_agreement_with_procedure(self, rng):
        for _ in range(300):
            lt = rng.uniform(0.25, 2.5) * (1 if rng.uniform() < 0.5 else -1)
            M = random_moebius(rng)
            T = mx.apply_map(M, std(lt))
            p, _, _ = on_curve_point(rng, lt, M)
            assert mx.contains_point(T, p).member
            assert mx.contains_point_oracle(T, p)


class TestIntersectionAngle:
    def test_documented_value(self):
        angle = mx.intersection_angle(std(0.0), std(1.0), pt(1))
        assert angle == pytest.approx(math.atan(1 / TWO_PI), abs=1e-9)
        assert angle == pytest.approx(0.1578312, abs=1e-6)

    def test_self_angle_zero(self):
        assert mx.intersection_angle(std(1.0), std(1.0), pt(1)) == pytest.approx(
            0.0, abs=1e-9
        )

    def test_not_on_both(self):
        with pytest.raises(PointNotOnBoth):
            mx.intersection_angle(std(1.0), std(2.0), pt(math.exp(0.1) * 1j))

    def test_constant_angle_against_pencil_members(self, rng):
        # the curve crosses every cycle of its own disjoint family at the
        # fixed angle arctan(lambda_tilde / 2 pi)
        checked = 0
        while checked < 100:
            lt = rng.uniform(0.3, 2.0) * (1 if rng.uniform() < 0.5 else -1)
            M = random_moebius(rng)
            T = mx.apply_map(M, std(lt))
            p, _, _ = on_curve_point(rng, lt, M, t_range=(-1, 1))
            if p.is_infinity:
                continue
            ch, _ = mx.hyperbolic_member_through(
                T.c2, T.c3, mx.zero_radius_at(p)
            )[:2]
            z = p.as_complex()
            if mx.classify(ch) == mx.CycleKind.LINE:
                u = complex(-ch.n, ch.l)
            else:
                c, _ = mx.center_radius(ch)
                u = 1j * (z - c)
            v = _fd_tangent(T, p)
            crossing = abs(math.remainder(cmath.phase(v) - cmath.phase(u), math.pi))
            assert abs(crossing - abs(math.atan(lt / TWO_PI))) <= 1e-5
            checked += 1

    def test_matches_finite_difference_tangents(self, rng):
        worst = 0.0
        for _ in range(60):
            lt1 = rng.uniform(0.3, 2.0) * (1 if rng.uniform() < 0.5 else -1)
            lt2 = rng.uniform(0.3, 2.0) * (1 if rng.uniform() < 0.5 else -1)
            M1 = random_moebius(rng)
            p, _, _ = on_curve_point(rng, lt1, M1, t_range=(-1, 1))
            if p.is_infinity:
                continue
            T1 = mx.apply_map(M1, std(lt1))
            t2 = rng.uniform(-1, 1)
            b2 = 1 if rng.uniform() < 0.5 else -1
            w2 = b2 * cmath.exp((lt2 + TWO_PI * 1j) * t2)
            N2 = random_moebius(rng)
            q = mx.apply_to_point(N2.inverse(), p).as_complex()
            M2 = N2 @ mx.MoebiusMap(1, q - w2, 0, 1)
            T2 = mx.apply_map(M2, std(lt2))
            analytic = mx.intersection_angle(T1, T2, p)
            v1 = _fd_tangent(T1, p)
            v2 = _fd_tangent(T2, p)
            numeric = math.remainder(cmath.phase(v2) - cmath.phase(v1), math.pi)
            worst = max(worst, abs(abs(analytic) - abs(numeric)))
        assert worst <= 1e-5


def _fd_tangent(T, p, h=1e-6):
    """Finite-difference curve direction through p, independent of the
    tangent construction under test."""
    S = mx.standard_map(T)
    w = mx.apply_to_point(S, p).as_complex()
    lam = mx.lambda_from_triple(T).rate
    t0 = math.log(abs(w)) / lam.real
    # branch sign that reproduces w at parameter t0
    sgn = 1.0 if abs(cmath.exp(lam * t0) - w) <= abs(cmath.exp(lam * t0) + w) else -1.0
    Si = S.inverse()
    before = mx.apply_to_point(Si, pt(sgn * cmath.exp(lam * (t0 - h)))).as_complex()
    after = mx.apply_to_point(Si, pt(sgn * cmath.exp(lam * (t0 + h)))).as_complex()
    return (after - before) / (2 * h)


class TestTangency:
    def test_documented_line(self):
        line = mx.Cycle(0, -math.pi, 0.5, -TWO_PI)
        assert mx.product(line, mx.zero_radius_at(pt(1))) == pytest.approx(0, abs=1e-12)
        assert mx.tangent_check(std(1.0), line, pt(1))

    def test_unit_circle_not_tangent(self):
        assert not mx.tangent_check(std(1.0), UNIT, pt(1))

    def test_line_missing_point_fails_first_condition(self):
        assert not mx.tangent_check(std(1.0), mx.from_line(2j, 1 + 2j), pt(1))

    def test_point_candidate_rejected(self):
        with pytest.raises(ZeroRadiusCandidate):
            mx.tangent_check(std(1.0), mx.Cycle(1, 1, 0, 1), pt(1))

    def test_off_curve_point_rejected(self):
        with pytest.raises(PointNotOnCurve):
            mx.tangent_check(std(1.0), UNIT, pt(math.exp(0.1) * 1j))

    def test_tangent_line_at_one(self):
        line = mx.tangent_line_at(std(1.0), pt(1))
        assert_projectively_equal(line, mx.Cycle(0, -math.pi, 0.5, -TWO_PI), tol=1e-9)

    def test_tangent_line_circle_degenerate(self):
        line = mx.tangent_line_at(std(0.0), pt(1))
        assert_projectively_equal(line, mx.Cycle(0, 1, 0, 2), tol=1e-12)

    def test_tangent_line_translates(self):
        shift = mx.MoebiusMap(1, 2, 0, 1)
        moved = mx.apply_map(shift, std(1.0))
        line = mx.tangent_line_at(moved, pt(3))
        expected = mx.apply_to_cycle(shift, mx.tangent_line_at(std(1.0), pt(1)))
        assert_projectively_equal(line, expected, tol=1e-9)

    def test_duality_random(self, rng):
        checked = 0
        while checked < 200:
            lt = rng.uniform(0.3, 2.0) * (1 if rng.uniform() < 0.5 else -1)
            M = random_moebius(rng)
            T = mx.apply_map(M, std(lt))
            p, _, _ = on_curve_point(rng, lt, M, t_range=(-1, 1))
            if p.is_infinity:
                continue
            line = mx.tangent_line_at(T, p)
            assert mx.tangent_check(T, line, p)
            z = p.as_complex()
            rotated = mx.from_line(z, z + complex(-line.n, line.l) * cmath.exp(0.01j))
            assert not mx.tangent_check(T, rotated, p)
            checked += 1


class TestSampleCurve:
    def test_two_point_grid(self):
        points = mx.sample_curve(std(1.0), 0, 1, 2, "+")
        assert points[0].as_complex() == pytest.approx(1, abs=1e-12)
        assert points[1].as_complex() == pytest.approx(math.e, abs=1e-9)

    def test_circle_degenerate_arc(self):
        points = mx.sample_curve(std(0.0), 0, 0.5, 3, "+")
        values = [p.as_complex() for p in points]
        assert values[0] == pytest.approx(1, abs=1e-9)
        assert values[1] == pytest.approx(1j, abs=1e-9)
        assert values[2] == pytest.approx(-1, abs=1e-9)

    def test_count_validation(self):
        with pytest.raises(InvalidInput):
            mx.sample_curve(std(1.0), 0, 1, 1, "+")

    def test_both_branches(self):
        points = mx.sample_curve(std(1.0), 0, 1, 3, "both")
        assert len(points) == 6

    def test_samples_lie_on_curve(self, rng):
        T = mx.apply_map(random_moebius(rng), std(0.8))
        for p in mx.sample_curve(T, -1, 1, 9, "both"):
            if p.is_infinity:
                continue
            assert mx.contains_point_oracle(T, p)

    def test_line_degenerate_samples_cover_both_half_lines(self):
        T = mx.standard_triple(mx.SlsParameter.infinite())
        plus = [p.as_complex() for p in mx.sample_curve(T, -1, 1, 5, "+")]
        minus = [p.as_complex() for p in mx.sample_curve(T, -1, 1, 5, "-")]
        assert all(z.real > 0 and abs(z.imag) < 1e-9 for z in plus)
        assert all(z.real < 0 and abs(z.imag) < 1e-9 for z in minus)


class TestApplyMap:
    def test_identity(self):
        T = std(1.0)
        same = mx.apply_map(mx.MoebiusMap.identity(), T)
        for a, b in ((same.c1, T.c1), (same.c2, T.c2), (same.c3, T.c3)):
            assert_projectively_equal(a, b, tol=1e-12)

    def test_translation(self):
        moved = mx.apply_map(mx.MoebiusMap(1, 1, 0, 1), std(1.0))
        assert_projectively_equal(moved.c1, REAL_AXIS, tol=1e-12)
        assert_projectively_equal(moved.c2, mx.from_circle(1, 1), tol=1e-12)
        assert_projectively_equal(moved.c3, mx.from_circle(1, math.e), tol=1e-9)

    def test_composition(self, rng):
        T = std(1.0)
        M1, M2 = random_moebius(rng), random_moebius(rng)
        a = mx.apply_map(M2, mx.apply_map(M1, T))
        b = mx.apply_map(M2 @ M1, T)
        for x, y in ((a.c1, b.c1), (a.c2, b.c2), (a.c3, b.c3)):
            assert_projectively_equal(x, y, tol=1e-8)

    def test_sign_preserved(self, rng):
        T = std(-1.5)
        assert mx.apply_map(random_moebius(rng), T).sign == -1


class TestTripleJson:
    def test_roundtrip(self):
        T = std(1.0)
        again = mx.LoxodromeTriple.from_json(T.to_json())
        assert again == T

    def test_missing_field(self):
        with pytest.raises(InvalidInput):
            mx.LoxodromeTriple.from_json({"c1": [0, 0, 1, 0]})
