"""Conjugate, associated, motion, homothety, and chart transport."""

import numpy as np
import pytest

from dnsurf import canon, family, geom
from dnsurf.dnum import DNum
from dnsurf.errors import MotionError
from dnsurf.family import Motion, apply_motion, associated_surface, conjugate_surface, homothety, transport_chart
from dnsurf.geom import grid_quantities


def _E(S, box=None, n=33):
    return grid_quantities(S, n, n, richardson=False, box=box)["E"]


def test_motion_validation():
    Motion.identity(4)
    Motion.boost(3, 0, 2, 0.3)
    with pytest.raises(MotionError, match="not a Minkowski motion"):
        Motion(np.eye(3) * 2.0, np.zeros(3))
    with pytest.raises(MotionError, match="inconsistent"):
        Motion(np.eye(3), np.zeros(4))


def test_improper_motion_allowed():
    A = np.diag([1.0, -1.0, 1.0])
    m = Motion(A, np.zeros(3))
    assert np.linalg.det(m.A) < 0


def test_conjugate_surface_components(s1):
    """Second component of Re(j Psi) is cos u sin v at matching points."""
    S = conjugate_surface(s1)
    u, v = 0.25, 1.0
    t = DNum(u, v)
    # the stored conjugate patch is parametrized by s with t = j s
    s = DNum.from_null(-t.p, t.m)
    y = np.array(S.psi.eval_unchecked(s).re())
    np.testing.assert_allclose(y[1], np.cos(u) * np.sin(v), atol=1e-12)


def test_conjugate_anti_isometry(s1):
    """E^(j t) = E(t) on the re-oriented patch, i.e. |E^ + E| = 0 as the
    same-orientation energies have opposite signs."""
    S = conjugate_surface(s1)
    box = s1.domain
    refl = geom.Box(-box.a1, -box.a0, box.b0, box.b1)
    diff = _E(S, refl)[:, ::-1] - _E(s1, box)
    assert np.max(np.abs(diff)) <= 1e-10


def test_double_conjugation_restores(s1):
    S = conjugate_surface(conjugate_surface(s1))
    assert S.domain == s1.domain
    rng = np.random.default_rng(41)
    for _ in range(20):
        t = DNum.from_null(
            rng.uniform(s1.domain.a0, s1.domain.a1),
            rng.uniform(s1.domain.b0, s1.domain.b1),
        )
        a = s1.psi.eval_unchecked(t)
        b = S.psi.eval_unchecked(t)
        for ca, cb in zip(a.components, b.components):
            np.testing.assert_allclose([cb.re, cb.im], [ca.re, ca.im], atol=1e-12)


def test_associated_isometry(s1):
    for theta in (-1.0, -0.5, 0.5, 1.0):
        S = associated_surface(s1, theta)
        assert np.max(np.abs(_E(S) - _E(s1))) <= 1e-12


def test_associated_theta_zero_is_identity(s1):
    S = associated_surface(s1, 0.0)
    t = DNum(-0.2, 0.8)
    a, b = s1.psi.eval_unchecked(t), S.psi.eval_unchecked(t)
    for ca, cb in zip(a.components, b.components):
        np.testing.assert_allclose([cb.re, cb.im], [ca.re, ca.im], atol=1e-14)


def test_conjugate_not_in_associated_family():
    """No theta reaches the conjugate: |exp_j(theta)|^2 = 1 but |j|^2 = -1."""
    from dnsurf.dnum import J, exp_j

    for theta in np.linspace(-3, 3, 11):
        assert abs(exp_j(theta).modsq() - 1.0) <= 1e-12 * np.cosh(theta) ** 2
    assert J.modsq() == -1.0


def test_motion_preserves_invariants(s1, s2, boost):
    M = Motion.boost(3, 0, 1, 0.3)
    S = apply_motion(s1, M)
    g1 = grid_quantities(s1, 17, 17, richardson=False)
    g2 = grid_quantities(S, 17, 17, richardson=False)
    np.testing.assert_allclose(g2["K_biv"], g1["K_biv"], atol=1e-10)
    np.testing.assert_allclose(g2["E"], g1["E"], atol=1e-10)
    # nu vanishes on S1; compare the squares, which carry the invariant
    # content without amplifying roundoff through the square root
    np.testing.assert_allclose(g2["nu"] ** 2, g1["nu"] ** 2, atol=1e-9)
    np.testing.assert_allclose(g2["mu"] ** 2, g1["mu"] ** 2, atol=1e-9)
    S2b = apply_motion(s2, boost)
    g1 = grid_quantities(s2, 17, 17, richardson=False)
    g2 = grid_quantities(S2b, 17, 17, richardson=False)
    np.testing.assert_allclose(g2["K_biv"], g1["K_biv"], atol=1e-9)


def test_motion_dimension_mismatch(s1, boost):
    with pytest.raises(MotionError, match="dimension"):
        apply_motion(s1, boost)


def test_homothety_scaling(s1):
    """k = 4: E^ = 16 E, Phi^'^2 = 16, and canonization gives t = s/2."""
    S = homothety(s1, 4.0)
    np.testing.assert_allclose(_E(S), 16.0 * _E(s1), rtol=1e-12)
    P, Q = canon.axis_squares(S)
    np.testing.assert_allclose(P.f(-0.5), 16.0, rtol=1e-12)
    chart = canon.canonize(S, DNum.from_null(-1.0, 1.2))
    # t - base = s / 2
    for x in (-1.5, -0.5):
        np.testing.assert_allclose(chart.sminus.inv(chart.sminus.fwd(x)), x, atol=1e-10)
        np.testing.assert_allclose(chart.sminus.fwd(x), 2.0 * (x + 1.0), atol=1e-10)


def test_homothety_rejects_nonpositive(s1):
    with pytest.raises(ValueError):
        homothety(s1, -1.0)


def test_degeneracy_transport(s3, s4):
    """Point classes survive every construction."""
    t3 = DNum(0.1, 0.2)
    for S in (
        conjugate_surface(s3),
        associated_surface(s3, 0.4),
        homothety(s3, 2.0),
        apply_motion(s3, Motion.boost(3, 0, 1, 0.2)),
    ):
        box = S.domain
        t = DNum.from_null(
            np.clip(t3.p, box.a0, box.a1), np.clip(t3.m, box.b0, box.b1)
        )
        assert geom.classify_point(S, t) is geom.PointClass.DEGENERATE
    t4 = DNum.from_null(1.5, 0.0)
    S = homothety(s4, 3.0)
    assert geom.classify_point(S, t4) is geom.PointClass.DEGENERATE


def test_transport_chart_all_constructions(s2, boost):
    chart = canon.canonize(s2)
    cases = [
        ("conjugate", None, family.conjugate_surface(s2)),
        ("associated", 0.7, family.associated_surface(s2, 0.7)),
        ("homothety", 3.0, family.homothety(s2, 3.0)),
        ("motion", None, family.apply_motion(s2, boost)),
    ]
    for name, param, S in cases:
        moved = transport_chart(chart, name, param)
        assert canon.verify_canonical(S, moved) <= 1e-8


def test_transport_chart_motion_is_identity(s2):
    chart = canon.canonize(s2)
    assert transport_chart(chart, "motion") is chart
