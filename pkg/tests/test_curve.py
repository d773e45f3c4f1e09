import math
import random
from fractions import Fraction

import numpy as np
import pytest

from tansurf.curve import (
    CurveSpecError,
    CurveType,
    NotFrontalError,
    TypeUndeterminedError,
    builtin_curve,
    curve_from_components,
    curve_from_polynomials,
    curve_from_spec,
    detect_primitive_type,
    detect_type,
    find_inflections,
    type_shift_check,
    wronskian,
)
from tansurf.jets import RationalPoly


def _rank_oracle(columns):
    """Independent exact rank via Gaussian elimination on a full matrix."""
    rows = [list(col) for col in zip(*[list(c) for c in columns])]
    rank = 0
    ncols = len(columns)
    col = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _profile_oracle(column_lists, dim):
    """Type profile straight from the definition, using the rank oracle."""
    profile = []
    for k in range(1, len(column_lists) + 1):
        r = _rank_oracle(column_lists[:k])
        while len(profile) < r:
            profile.append(k)
        if r == dim:
            break
    return tuple(profile)


def _derivative_columns(coeff_vectors, kmax, start=1):
    """Columns (f^(start), ..., f^(kmax)) at t=0 of the polynomial curve
    whose components have the given coefficient lists."""
    cols = []
    for k in range(start, kmax + 1):
        col = []
        for coeffs in coeff_vectors:
            c = coeffs[k] if k < len(coeffs) else Fraction(0)
            col.append(c * math.factorial(k))
        cols.append(col)
    return cols


class TestConstruction:
    def test_mond_factorization(self):
        curve = builtin_curve("mond")
        assert curve.is_polynomial
        # velocity (1, t^2/2, t^3/6) has trivial content, so a = |velocity|
        assert curve.scale_poly() == RationalPoly.from_coeffs([1], "t")
        assert curve.a(0.0) == pytest.approx(1.0)
        assert curve.tau(0.0) == pytest.approx((1.0, 0.0, 0.0))

    def test_even_quartic_extracts_content(self):
        curve = curve_from_components(["t^2", "t^3", "t^4", "t^6"], (-1, 1))
        t = RationalPoly.var("t", ("t",))
        assert curve.scale_poly() == t
        assert curve.tau(0.0) == pytest.approx((1.0, 0.0, 0.0, 0.0))
        # a(t) ~ 2t near 0
        assert curve.a(1e-3) / 1e-3 == pytest.approx(2.0, rel=1e-5)

    def test_straight_line(self):
        curve = curve_from_components(["t", "0", "0"], (-1, 1))
        for t in (-0.5, 0.0, 0.7):
            assert curve.a(t) == pytest.approx(1.0)
            assert curve.tau(t) == pytest.approx((1.0, 0.0, 0.0))

    def test_velocity_matches_a_times_tau(self):
        curve = curve_from_components(["t^2", "t^3", "t^4"], (-1, 1))
        for t in np.linspace(-0.9, 0.9, 7):
            v = curve.velocity(t)
            a = curve.a(t)
            tau = curve.tau(t)
            assert v == pytest.approx(tuple(a * x for x in tau), abs=1e-12)

    def test_analytic_curve_with_vanishing_velocity_rejected(self):
        # f' = (-sin t, cos t - 1, 0) vanishes at 0 and there is no
        # polynomial factorization to fall back on
        with pytest.raises(NotFrontalError):
            curve_from_components(["cos(t)", "sin(t) - t", "1"], (-1.0, 1.0))

    def test_constant_curve_rejected(self):
        with pytest.raises(NotFrontalError):
            curve_from_components(["1", "2", "3"], (-1, 1))


class TestWronskian:
    def test_moment_curve_ranks(self):
        curve = builtin_curve("moment-r3")
        cols = wronskian(curve, 0, 3, mode="exact")
        assert _rank_oracle(cols[:1]) == 1
        assert _rank_oracle(cols[:2]) == 2
        assert _rank_oracle(cols[:3]) == 3

    def test_mond_rank_sequence(self):
        curve = builtin_curve("mond")
        cols = wronskian(curve, 0, 4, mode="exact")
        ranks = [_rank_oracle(cols[:k]) for k in range(1, 5)]
        assert ranks == [1, 1, 2, 3]

    def test_quartic_cusp_rank_reaches_four_at_six(self):
        curve = builtin_curve("csw-directrix")
        cols = wronskian(curve, 0, 6, mode="exact")
        assert _rank_oracle(cols[:5]) == 3
        assert _rank_oracle(cols[:6]) == 4

    def test_numeric_matrix_matches_exact(self):
        curve = builtin_curve("moment-r4")
        mat = wronskian(curve, 0.5, 4, mode="numeric")
        cols = wronskian(curve, Fraction(1, 2), 4, mode="exact")
        for j in range(4):
            for i in range(4):
                assert mat[i, j] == pytest.approx(float(cols[j][i]), rel=1e-12)


class TestDetectType:
    @pytest.mark.parametrize(
        "components,expected",
        [
            (["t", "t^3/6", "t^4/24"], (1, 3, 4)),
            (["t^2", "t^3", "t^4", "t^6"], (2, 3, 4, 6)),
            (["t^2", "t^3", "t^4", "t^6 + t^7"], (2, 3, 4, 6)),
            (["t^3", "t^4", "t^5", "t^6"], (3, 4, 5, 6)),
            (["t", "t^2", "t^3"], (1, 2, 3)),
            (["t", "t^2", "t^3", "t^4"], (1, 2, 3, 4)),
        ],
    )
    def test_exact_types(self, components, expected):
        curve = curve_from_components(components, (-1, 1))
        assert detect_type(curve, 0).entries == expected
        # and via the definition-level oracle on the coefficient matrix
        cols = _derivative_columns(
            [p.coeff_list() for p in curve.component_polys()], 8
        )
        assert _profile_oracle(cols, curve.dim) == expected

    @pytest.mark.parametrize("eps", [1e-10, 1e-8, 1e-6])
    def test_numeric_agrees_with_exact_across_eps_band(self, eps):
        fixtures = [
            ["t", "t^3/6", "t^4/24"],
            ["t^2", "t^3", "t^4", "t^6 + t^7"],
            ["t^3", "t^4", "t^5", "t^6"],
            ["t", "t^2", "t^3"],
        ]
        for components in fixtures:
            curve = curve_from_components(components, (-1, 1))
            for t in (Fraction(0), Fraction(1, 2), Fraction(-3, 4)):
                exact = detect_type(curve, t, "exact").entries
                numeric = detect_type(curve, float(t), "numeric", rank_eps=eps).entries
                assert numeric == exact, (components, t, eps)

    def test_generic_point_of_mond_is_ordinary(self):
        curve = builtin_curve("mond")
        assert detect_type(curve, Fraction(1, 2)).entries == (1, 2, 3)

    def test_type_undetermined_for_planar_curve_in_space(self):
        curve = curve_from_components(["t", "t^2", "0"], (-1, 1))
        with pytest.raises(TypeUndeterminedError):
            detect_type(curve, 0)

    def test_rank_invariant_under_affine_maps(self):
        rng = random.Random(5)
        curve = builtin_curve("usw-directrix")
        base = detect_type(curve, 0).entries
        polys = curve.component_polys()
        for _ in range(5):
            while True:
                m = [[Fraction(rng.randint(-3, 3)) for _ in range(4)] for _ in range(4)]
                det = _rank_oracle([tuple(row) for row in m])
                if det == 4:
                    break
            shift = [Fraction(rng.randint(-2, 2)) for _ in range(4)]
            mapped = []
            for i in range(4):
                comp = RationalPoly.const(shift[i], ("t",))
                for j in range(4):
                    comp = comp + polys[j] * m[i][j]
                mapped.append(comp)
            image = curve_from_polynomials(mapped, (-1, 1))
            assert detect_type(image, 0).entries == base

    def test_curve_type_validation(self):
        with pytest.raises(ValueError):
            CurveType((2, 2, 3), 0.0, 0.0, "exact")
        with pytest.raises(ValueError):
            CurveType((0, 1, 2), 0.0, 0.0, "exact")


class TestPrimitiveType:
    def test_mond_frame_type(self):
        # frame direction (1, t^2/2, t^3/6); ranks of (w, w', w'', w''')
        # at 0 from the coefficient oracle
        coeffs = [[1], [0, 0, Fraction(1, 2)], [0, 0, 0, Fraction(1, 6)]]
        cols = _derivative_columns(coeffs, 4, start=0)
        assert _profile_oracle(cols, 3) == (1, 3, 4)
        curve = builtin_curve("mond")
        assert detect_primitive_type(curve, 0).entries == (1, 3, 4)
        assert detect_primitive_type(curve, 0, "numeric").entries == (1, 3, 4)

    def test_circle_frame_type(self):
        curve = curve_from_components(["cos(t)", "sin(t)"], (0.0, 6.3))
        assert detect_primitive_type(curve, 0.0, "numeric").entries == (1, 2)

    def test_full_rank_frame(self):
        coeffs = [[1], [0, 1], [0, 0, Fraction(1, 2)], [0, 0, 0, Fraction(1, 6)]]
        cols = _derivative_columns(coeffs, 4, start=0)
        assert _profile_oracle(cols, 4) == (1, 2, 3, 4)
        curve = curve_from_components(["t", "t^2/2", "t^3/6", "t^4/24"], (-1, 1))
        assert detect_primitive_type(curve, 0).entries == (1, 2, 3, 4)


class TestTypeShift:
    def test_shift_by_one(self):
        curve = curve_from_components(["t^2", "t^3", "t^4"], (-1, 1))
        rep = type_shift_check(curve, 0)
        assert rep.vanishing_order == 1
        assert rep.primitive_type.entries == (1, 2, 3)
        assert rep.detected_type.entries == (2, 3, 4)
        assert rep.holds

    def test_no_shift_for_regular_curve(self):
        curve = builtin_curve("moment-r3")
        rep = type_shift_check(curve, 0)
        assert rep.vanishing_order == 0
        assert rep.detected_type.entries == rep.primitive_type.entries

    def test_shift_by_two(self):
        curve = builtin_curve("csw-directrix")
        rep = type_shift_check(curve, 0)
        assert rep.vanishing_order == 2
        assert rep.primitive_type.entries == (1, 2, 3, 4)
        assert rep.detected_type.entries == (3, 4, 5, 6)
        assert rep.holds

    def test_numeric_mode_on_analytic_curve(self):
        rep = type_shift_check(builtin_curve("helix"), 1.0, mode="numeric")
        assert rep.vanishing_order == 0
        assert rep.holds


class TestInflections:
    def test_mond_inflects_at_zero(self):
        hits = find_inflections(builtin_curve("mond"))
        assert len(hits) == 1
        assert abs(hits[0]) < 1e-12

    def test_helix_has_none(self):
        assert find_inflections(builtin_curve("helix")) == []

    def test_cubic_has_none(self):
        # |tau'| > 0 follows from the never-vanishing cross product
        # (t^2/2, -t, 1) of velocity and acceleration
        curve = builtin_curve("cubic")
        for t in np.linspace(-1, 1, 9):
            v = np.array([1.0, t, t * t / 2.0])
            acc = np.array([0.0, 1.0, t])
            assert np.linalg.norm(np.cross(v, acc)) > 0.9
        assert find_inflections(curve) == []


class TestSpecJson:
    def test_components_spec(self):
        curve = curve_from_spec(
            {"dim": 4, "components": ["t^2", "t^3", "t^4", "t^6 + 0.3*t^7"], "domain": [-1, 1]}
        )
        assert curve.dim == 4
        assert detect_type(curve, 0).entries == (2, 3, 4, 6)

    def test_builtin_spec_with_domain(self):
        curve = curve_from_spec({"builtin": "helix", "domain": [0, 3]})
        assert curve.domain == (0.0, 3.0)

    @pytest.mark.parametrize(
        "spec",
        [
            {"builtin": "no-such-curve"},
            {"components": "t"},
            {"components": ["t", "t^2"], "domain": [0]},
            {"dim": 3, "components": ["t", "t^2"], "domain": [0, 1]},
            {},
        ],
    )
    def test_bad_specs_rejected(self, spec):
        with pytest.raises(CurveSpecError):
            curve_from_spec(spec)
