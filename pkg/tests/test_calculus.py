"""Differential, graded bracket, and the dual-structure compatibility check."""

import random

import pytest

from albv.algebroid import (
    PoissonStructure,
    cotangent_algebroid,
    lie_algebra,
    tangent_algebroid,
)
from albv.calculus import (
    bialgebroid_check,
    differential,
    dual_differential,
    lichnerowicz,
    lie_derivative,
    schouten,
    schouten_oracle,
)
from albv.exterior import A_SIDE, DUAL_SIDE, graded_sum, wedge
from albv.randgen import random_elem
from conftest import aff1, heisenberg, sl2


def test_differential_of_functions_uses_the_anchor():
    a = tangent_algebroid(("x", "y"))
    f = a.scalar("x*y", DUAL_SIDE)
    df = differential(a, f)
    assert df == a.poly("y") * a.coframe(0) + a.poly("x") * a.coframe(1)


def test_differential_of_coframe_sections():
    a = aff1()
    assert differential(a, a.coframe(0)).is_zero
    assert differential(a, a.coframe(1)) == -wedge(a.coframe(0), a.coframe(1))

    s = sl2()
    e1, e2, e3 = s.coframe(0), s.coframe(1), s.coframe(2)
    assert differential(s, e1) == -wedge(e2, e3)
    assert differential(s, e2) == -2 * wedge(e1, e2)
    assert differential(s, e3) == 2 * wedge(e1, e3)

    h = heisenberg()
    assert differential(h, h.coframe(2)) == -wedge(h.coframe(0), h.coframe(1))


def test_differential_rejects_multivectors():
    a = tangent_algebroid(("x",))
    with pytest.raises(ValueError, match="side A\\*"):
        differential(a, a.frame(0))


def test_differential_squares_to_zero():
    rng = random.Random(11)
    for a in (tangent_algebroid(("x", "y")), sl2(), heisenberg()):
        for degree in range(a.rank):
            for _ in range(5):
                w = random_elem(rng, a, DUAL_SIDE, degree)
                assert differential(a, differential(a, w)).is_zero


def test_schouten_small_frozen_values():
    a = tangent_algebroid(("x", "y"))
    x = a.poly("x")
    dx, dy = a.frame(0), a.frame(1)
    assert schouten(a, x * dx, dx) == -dx
    assert schouten(a, dx, x * dy) == dy
    assert schouten(a, wedge(dx, dy), a.scalar(x)) == -dy


def test_schouten_graded_laws_on_samples():
    rng = random.Random(23)
    for a in (tangent_algebroid(("x", "y")), sl2()):
        for _ in range(8):
            du = rng.randrange(0, a.rank + 1)
            dv = rng.randrange(0, a.rank + 1)
            dw = rng.randrange(1, a.rank + 1)
            u = random_elem(rng, a, A_SIDE, du)
            v = random_elem(rng, a, A_SIDE, dv)
            w = random_elem(rng, a, A_SIDE, dw)
            sign = -1 if ((du - 1) * (dv - 1)) % 2 else 1
            assert graded_sum(schouten(a, u, v), sign * schouten(a, v, u)).is_zero
            jacobi = graded_sum(
                schouten(a, u, schouten(a, v, w)),
                -schouten(a, schouten(a, u, v), w),
                (-sign) * schouten(a, v, schouten(a, u, w)),
            )
            assert jacobi.is_zero
            dsign = -1 if ((du - 1) * dv) % 2 else 1
            leibniz = graded_sum(
                schouten(a, u, wedge(v, w)),
                -wedge(schouten(a, u, v), w),
                (-dsign) * wedge(v, schouten(a, u, w)),
            )
            assert leibniz.is_zero


def test_schouten_agrees_with_pairing_route():
    rng = random.Random(5)
    for a in (tangent_algebroid(("x", "y")), sl2(), aff1()):
        for _ in range(10):
            u = random_elem(rng, a, A_SIDE, rng.randrange(0, a.rank + 1))
            v = random_elem(rng, a, A_SIDE, rng.randrange(0, a.rank + 1))
            assert graded_sum(
                schouten(a, u, v), -schouten_oracle(a, u, v)
            ).is_zero


def test_lie_derivative_on_forms():
    a = tangent_algebroid(("x", "y"))
    x = a.poly("x")
    w = x * a.coframe(0)
    assert lie_derivative(a, a.frame(0), w) == a.coframe(0)
    assert lie_derivative(a, a.frame(1), w).is_zero


def test_lie_derivative_commutes_with_differential():
    rng = random.Random(31)
    a = sl2()
    for _ in range(6):
        x = random_elem(rng, a, A_SIDE, 1)
        w = random_elem(rng, a, DUAL_SIDE, rng.randrange(0, a.rank))
        assert lie_derivative(a, x, differential(a, w)) == differential(
            a, lie_derivative(a, x, w)
        )


def test_lichnerowicz_operator():
    pi = PoissonStructure(("x", "y"), {(0, 1): "1"})
    a = pi.tangent()
    assert lichnerowicz(pi, a.scalar("x")) == -a.frame(1)
    rng = random.Random(7)
    curved = PoissonStructure(("x", "y"), {(0, 1): "y"})
    b = curved.tangent()
    for degree in range(3):
        for _ in range(4):
            u = random_elem(rng, b, A_SIDE, degree)
            assert lichnerowicz(curved, lichnerowicz(curved, u)).is_zero


def test_dual_differential_retags_sides():
    a_star = lie_algebra(3, {(0, 1): {1: 1}})
    a = sl2()
    image = dual_differential(a_star, a.frame(1))
    assert image.side == A_SIDE
    assert image == -wedge(a.frame(0), a.frame(1))
    assert dual_differential(a_star, a.frame(0)).is_zero


def test_bialgebroid_check_passes_for_bivector_dual():
    pi = PoissonStructure(("x", "y"), {(0, 1): "y"})
    a = pi.tangent()
    result = bialgebroid_check(a, cotangent_algebroid(pi))
    assert result["ok"], result["failures"]


def test_bialgebroid_check_finds_incompatible_pairings():
    a = sl2()
    a_star = lie_algebra(3, {(0, 1): {1: 1}})
    result = bialgebroid_check(a, a_star)
    assert not result["ok"]
    assert [rec["pair"] for rec in result["failures"]] == ["frame (2, 3)"]
