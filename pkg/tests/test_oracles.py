import math

import numpy as np
import pytest

from charlift import CoveredTorusPoint, PoleOnContourError, RangeError, SingularityError
from charlift.oracles import (
    FREE,
    FROM_INSIDE,
    FROM_OUTSIDE,
    QuadratureParams,
    chamber_sign_scan,
    contour_unit_circle_moment,
    directional_limit,
    enumerate_chambers,
    limit_direction,
    moment_closed_form,
    random_regular_point,
    reference_point,
    richardson,
    verify_theta_lift,
    verify_theta_upq,
)


@pytest.mark.parametrize("k,a,expected", [(2, 0.5, 0.25), (-1, 2.0, -0.5), (3, 2.0, 0.0)])
def test_moment_examples(k, a, expected):
    assert abs(contour_unit_circle_moment(k, a) - expected) < 1e-12


def test_moment_pole_on_contour():
    with pytest.raises(PoleOnContourError):
        contour_unit_circle_moment(0, 1j)
    with pytest.raises(PoleOnContourError):
        contour_unit_circle_moment(0, 0)


@pytest.mark.parametrize("a", [0.99, 1.01, 0.99j, -1.01])
def test_moment_geometric_convergence(a):
    errs = [abs(contour_unit_circle_moment(1, a, QuadratureParams(nodes=N, guard=0.0)) - moment_closed_form(1, a))
            for N in (256, 512, 1024, 2048)]
    for e0, e1 in zip(errs, errs[1:]):
        assert e1 <= 0.5 * e0


def test_params_validation():
    with pytest.raises(RangeError):
        QuadratureParams(nodes=100)
    with pytest.raises(RangeError):
        QuadratureParams(r_sequence=(0.5, 1.5))


def test_richardson_recovers_polynomial():
    xs = [2.0 ** -k for k in range(3, 7)]
    ys = [3 - 2 * x + x ** 3 for x in xs]
    val, err = richardson(xs, ys)
    assert abs(val - 3) < 1e-12


def test_directional_limit_sides():
    h = np.exp(0.7j)
    p = QuadratureParams()
    inside, _ = directional_limit(2, h, FROM_INSIDE, p)
    outside, _ = directional_limit(2, h, FROM_OUTSIDE, p)
    assert abs(inside - h ** 3) < 1e-10 and abs(outside) < 1e-10
    inside, _ = directional_limit(-2, h, FROM_INSIDE, p)
    outside, _ = directional_limit(-2, h, FROM_OUTSIDE, p)
    assert abs(inside) < 1e-10 and abs(outside + h ** -1) < 1e-10


def test_limit_direction_examples():
    pt = CoveredTorusPoint.upq(1, 1, 0, (0.3, 1.7))
    assert limit_direction(1, pt) == FROM_INSIDE
    assert limit_direction(2, pt) == FROM_OUTSIDE
    lift = CoveredTorusPoint.unn1(2, 1, (0.1, 0.9, 2.0, 3.0, 0.5))
    assert limit_direction(1, lift) == FREE
    assert limit_direction(5, lift) == FREE
    assert limit_direction(2, lift) == FROM_INSIDE
    assert limit_direction(3, lift) == FROM_OUTSIDE
    with pytest.raises(SingularityError):
        limit_direction(1, CoveredTorusPoint.upq(1, 1, 0, (0.3, 0.3)))


def test_verify_upq_reference_point_is_exact():
    rep = verify_theta_upq(1, 1, 0, 0, reference_point(1, 1, 0))
    assert rep.relative_error <= 1e-15 and rep.passed


def test_verify_upq_random_points(rng):
    for _ in range(3):
        rep = verify_theta_upq(1, 1, 0, 0, random_regular_point(1, 1, 0, rng))
        assert rep.relative_error < 1e-5
    rep = verify_theta_upq(1, 2, -3, 1, random_regular_point(1, 2, 1, rng))
    assert rep.passed


def test_flipping_direction_changes_value(rng):
    pt = random_regular_point(1, 2, 0, rng)
    good = verify_theta_upq(1, 2, 0, 0, pt)
    bad = verify_theta_upq(1, 2, 0, 0, pt, directions={3: FROM_INSIDE})
    assert good.passed and bad.relative_error > 1e-2


def test_disjoint_radius_tails_agree(rng):
    pt = random_regular_point(2, 2, 1, rng)
    a = QuadratureParams(nodes=16384, r_sequence=tuple(2.0 ** -k for k in (4, 5, 6)))
    b = QuadratureParams(nodes=16384, r_sequence=tuple(2.0 ** -k for k in (7, 8, 9)))
    ra = verify_theta_upq(2, 2, 2, 1, pt, a, calibration_point=reference_point(2, 2, 1))
    rb = verify_theta_upq(2, 2, 2, 1, pt, b, calibration_point=reference_point(2, 2, 1))
    assert abs(ra.numeric - rb.numeric) <= 1e-5 * abs(ra.numeric)


def test_reports_are_deterministic():
    pt = random_regular_point(2, 2, 1, np.random.default_rng(5))
    a = verify_theta_upq(2, 2, -3, 1, pt)
    b = verify_theta_upq(2, 2, -3, 1, pt)
    assert a.to_dict() == b.to_dict()


def test_verify_upq_size_limit():
    with pytest.raises(RangeError):
        verify_theta_upq(2, 3, 0, 0, random_regular_point(2, 3, 0, np.random.default_rng(0)))


def test_verify_lift_examples(rng):
    rep = verify_theta_lift(1, 1, 0, random_regular_point(1, 2, 0, rng, "mirrored"))
    assert rep.passed
    rep = verify_theta_lift(1, 0, 0, CoveredTorusPoint.unn1(1, 0, (0.5, 1.7, 2.9)))
    assert rep.passed
    rep = verify_theta_lift(2, -2, 1, random_regular_point(2, 3, 1, rng, "mirrored"))
    assert rep.passed and rep.relative_error < 1e-4


def test_verify_lift_detects_wrong_side(rng):
    pt = random_regular_point(2, 3, 0, rng, "mirrored")
    rep = verify_theta_lift(2, -2, 0, pt, directions={3: FROM_INSIDE})
    assert not rep.passed


def test_lift_calibration_is_global():
    # one constant (1/(2n-1)!) fits every chamber; the boundary constant is 1
    rng = np.random.default_rng(3)
    for n, t in [(2, 1), (2, 2)]:
        reps = [verify_theta_lift(n, -2, t, random_regular_point(n, n + 1, t, rng, "mirrored")) for _ in range(4)]
        assert all(r.passed for r in reps)
        assert abs(reps[0].calibration - 1 / math.factorial(2 * n - 1)) < 1e-6
        assert abs(reps[0].extras["boundary_calibration"] - 1) < 1e-6


def test_chamber_scan_small():
    reps = chamber_sign_scan(1, 1, 200, seed=1)
    assert len(reps) == 2 and all(r.passed for r in reps)
    reps = chamber_sign_scan(2, 2, 200, seed=1)
    assert len(reps) == 4 and all(r.passed for r in reps)
    assert chamber_sign_scan(2, 0, 10) == []


def test_chamber_scan_deterministic():
    a = [r.to_dict() for r in chamber_sign_scan(2, 1, 50, seed=9)]
    b = [r.to_dict() for r in chamber_sign_scan(2, 1, 50, seed=9)]
    assert a == b


def test_chamber_count():
    assert len(enumerate_chambers(3, 1)) == 2 * math.factorial(4)
    assert len(enumerate_chambers(3, 3)) == 8
