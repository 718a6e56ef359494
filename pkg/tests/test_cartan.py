import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charlift import (
    CoveredTorusPoint,
    DomainError,
    RangeError,
    RegularityError,
    SingularityError,
    cayley_generator,
    cayley_transform,
    chamber_id,
    embed_in_group,
    index_sets,
    is_regular,
    torus_matrix,
)
from charlift.cartan import contour_sides, signature_matrix
from charlift.oracles import random_regular_point


def test_u11_generator():
    c = cayley_generator((1, 2), 2, 1)
    assert np.allclose(c, np.array([[1, -1], [1, 1]]) / math.sqrt(2), atol=1e-15)


def test_generator_rejects_compact_and_bad_dim():
    with pytest.raises(DomainError):
        cayley_generator((1, 2), 3, 2)
    with pytest.raises(RangeError):
        cayley_generator((1, 4), 3, 1)


def test_generator_block_locality():
    c = cayley_generator((2, 4), 4, 2)
    mask = np.ones((4, 4), bool)
    mask[np.ix_([1, 3], [1, 3])] = False
    assert np.array_equal(c[mask], np.eye(4)[mask])


def test_cayley_transform_cases():
    assert np.array_equal(cayley_transform([], 3, 1), np.eye(3))
    assert np.array_equal(cayley_transform([(1, 2)], 2, 1), cayley_generator((1, 2), 2, 1))
    S = [(1, 3), (2, 4)]
    a = cayley_transform(S, 5, 2)
    b = cayley_transform(S[::-1], 5, 2)
    assert np.max(np.abs(a - b)) <= 1e-15
    with pytest.raises(DomainError):
        cayley_transform([(1, 3), (1, 4)], 5, 2)


def test_torus_matrix_examples():
    assert np.allclose(torus_matrix(CoveredTorusPoint.upq(2, 1, 0, (0, 0, 0))), np.eye(3))
    m = torus_matrix(CoveredTorusPoint.upq(1, 1, 1, (0.0, 1.0)))
    assert np.allclose(np.diag(m), [math.exp(-1), math.exp(1)], atol=1e-15)
    # standard placement: the root (1, 2) carries angle X1 and hyperbolic X2
    m = torus_matrix(CoveredTorusPoint.upq(1, 2, 1, (math.pi, 2.0, 0.5)))
    expected = np.exp([1j * math.pi - 2, 1j * math.pi + 2, 0.5j])
    assert np.allclose(np.diag(m), expected, rtol=1e-15)


def test_mirrored_placement():
    m = torus_matrix(CoveredTorusPoint.unn1(1, 1, (math.pi, 2.0, 0.5)))
    expected = np.exp([1j * math.pi - 0.5, 2j, 1j * math.pi + 0.5])
    assert np.allclose(np.diag(m), expected, rtol=1e-15)


def test_embed_compact_is_torus():
    pt = CoveredTorusPoint.upq(2, 1, 0, (0.1, 0.7, 2.0))
    assert np.array_equal(embed_in_group(pt), torus_matrix(pt))


def test_embed_u11():
    X, theta = 0.8, 0.3
    g = embed_in_group(CoveredTorusPoint.upq(1, 1, 1, (theta, X)))
    expected = np.exp(1j * theta) * np.array([[math.cosh(X), -math.sinh(X)], [-math.sinh(X), math.cosh(X)]])
    assert np.allclose(g, expected, atol=1e-14)


def test_gl_of_polarization_line():
    for theta, X in [(0.0, 0.4), (1.3, -0.9), (5.0, 2.0)]:
        g = embed_in_group(CoveredTorusPoint.upq(1, 1, 1, (theta, X)))
        v = g @ np.array([1.0, 1.0])
        assert abs(v[0] - v[1]) < 1e-12 * abs(v[0])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_diagonalization_and_isometry(p, q, seed):
    rng = np.random.default_rng(seed)
    t = int(rng.integers(0, min(p, q) + 1))
    pt = random_regular_point(p, q, t, rng, min_gap=0.0, hyper_range=(0.05, 2.0))
    c = cayley_transform(pt.pairs(), pt.dim, p)
    g = embed_in_group(pt)
    assert np.linalg.norm(np.linalg.inv(c) @ g @ c - torus_matrix(pt)) < 1e-12
    J = signature_matrix(p, q)
    assert np.linalg.norm(g.conj().T @ J @ g - J) < 1e-12


def test_is_regular_examples():
    assert not is_regular(CoveredTorusPoint.upq(1, 1, 0, (0, 0)))
    assert is_regular(CoveredTorusPoint.upq(1, 1, 1, (0.3, 1.0)))
    assert not is_regular(CoveredTorusPoint.upq(1, 1, 1, (0.3, 0.0)))


def test_index_sets_examples():
    s = index_sets(CoveredTorusPoint.unn1(2, 0, (0.1, 0.2, 0.3, 0.4, 0.5)))
    assert (s.J, s.K, s.A, s.B) == (set(), set(), {1, 2}, {3, 4, 5})
    s = index_sets(CoveredTorusPoint.unn1(2, 2, (0.1, 0.9, 0.3, -0.4, 0.5)))
    assert (s.J, s.K, s.A, s.B) == ({1}, {2}, set(), {3})
    s = index_sets(CoveredTorusPoint.unn1(2, 2, (0.1, 0.9, 0.3, -0.4, -0.5)))
    assert s.J == set() and s.K == {1, 2}


def test_index_sets_zero_sign():
    with pytest.raises(RegularityError):
        index_sets(CoveredTorusPoint.unn1(1, 1, (0.1, 0.9, 0.0)))


def test_index_sets_partition(rng):
    for n in (1, 2, 3):
        for t in range(n + 1):
            pt = random_regular_point(n, n + 1, t, rng, "mirrored")
            s = index_sets(pt)
            assert s.J | s.K == set(range(1, t + 1)) and not s.J & s.K


def test_chamber_examples():
    assert chamber_id(CoveredTorusPoint.upq(1, 1, 1, (0.3, 1.0))) == ("+", ())
    assert chamber_id(CoveredTorusPoint.upq(1, 1, 1, (0.3, -1.0))) == ("-", ())
    a = chamber_id(CoveredTorusPoint.unn1(2, 1, (0.1, 1.0, 2.0, 3.0, 0.5)))
    b = chamber_id(CoveredTorusPoint.unn1(2, 1, (0.1, 3.0, 2.0, 1.0, 0.5)))
    assert a == ("+", (2, 3, 4)) and b == ("+", (2, 4, 3))
    # rotating all angles by a full turn or cyclically keeps the chamber
    c = chamber_id(CoveredTorusPoint.unn1(2, 1, (0.1, 1.0 + 2 * math.pi, 2.0, 3.0 - 2 * math.pi, 0.5)))
    assert c == a


def test_chamber_singular():
    with pytest.raises(SingularityError):
        chamber_id(CoveredTorusPoint.unn1(1, 0, (0.5, 0.5, 1.0)))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_same_chamber_same_index_sets(n, seed):
    rng = np.random.default_rng(seed)
    t = int(rng.integers(0, n + 1))
    pt = random_regular_point(n, n + 1, t, rng, "mirrored")
    nudged = pt.with_coords(np.array(pt.coords) + rng.uniform(-1e-3, 1e-3, 2 * n + 1))
    if chamber_id(nudged) == chamber_id(pt):
        assert index_sets(nudged) == index_sets(pt)


def test_contour_sides_cover_everything(rng):
    for p, q in [(1, 1), (2, 3), (3, 3)]:
        for t in range(min(p, q) + 1):
            pt = random_regular_point(p, q, t, rng)
            inner, outer = contour_sides(pt)
            assert inner | outer == set(range(1, p + q + 1)) and not inner & outer
            h = pt.entries()
            assert all(abs(h[i - 1]) < 1 for i in inner if i not in pt.compact_positions())


def test_swapped_point_is_same_element():
    pt = CoveredTorusPoint.upq(3, 2, 2, (0.1, 0.2, 0.3, 0.7, -0.4))
    sw = pt.swapped()
    assert (sw.p, sw.q) == (2, 3)
    assert sorted(np.round(sw.entries(), 12), key=lambda z: (z.real, z.imag)) == \
        sorted(np.round(pt.entries(), 12), key=lambda z: (z.real, z.imag))


def test_point_validation():
    with pytest.raises(RangeError):
        CoveredTorusPoint.upq(1, 1, 0, (0.1,))
    with pytest.raises(RangeError):
        CoveredTorusPoint.upq(1, 1, 2, (0.1, 0.2))
