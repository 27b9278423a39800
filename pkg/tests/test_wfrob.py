import numpy as np
import pytest

from redgreen import wfrob
from redgreen.phase import ZERO, Color
from redgreen.qtensor import bra, compose, identity, ket, proportional_eq, tensor_product


@pytest.mark.parametrize("reading", ["top_down", "bottom_up"])
def test_w_algebra_is_frobenius_but_not_special(reading):
    rep = wfrob.verify_frobenius(wfrob.build_w_algebra(reading))
    assert rep.axioms_hold
    assert not rep.dagger_compatible
    assert not rep.specialness
    assert rep.specialness_gap > 0.1


def test_mixed_polarity_fails_unit_laws():
    rep = wfrob.verify_frobenius(wfrob.build_w_algebra("mixed_polarity"))
    assert not rep.unit_law and not rep.counit_law
    assert rep.associativity and rep.frobenius_law


def test_unknown_reading():
    with pytest.raises(ValueError):
        wfrob.presentation_diagrams("sideways")


def test_top_down_multiplication_is_truncated_polynomials():
    m = wfrob.build_w_algebra("top_down").mult
    lam = proportional_eq(compose(m, tensor_product(ket("0"), ket("0"))), ket("0"))
    assert lam is not None
    for a, b, out in (("0", "1", "1"), ("1", "0", "1")):
        got = compose(m, tensor_product(ket(a), ket(b)))
        assert proportional_eq(got, lam * ket(out), 1e-12) == pytest.approx(1)
    assert compose(m, tensor_product(ket("1"), ket("1"))).norm() < 1e-12


@pytest.mark.parametrize("color", [Color.Z, Color.X])
def test_basis_structures_are_special(color):
    p = wfrob.basis_presentation(color)
    rep = wfrob.verify_frobenius(p)
    assert rep.axioms_hold and rep.specialness
    assert rep.specialness_gap < 1e-12
    assert wfrob.loop_value(p).classification == "identity-like"


@pytest.mark.parametrize("reading", ["top_down", "bottom_up"])
def test_loop_is_rank_one(reading):
    lv = wfrob.loop_value(wfrob.build_w_algebra(reading))
    assert lv.rank == 1
    assert lv.classification == "rank-one"


@pytest.mark.parametrize("reading", wfrob.READINGS)
def test_fixtures_match_builders(reading):
    built = wfrob.build_w_algebra(reading)
    shipped = wfrob.load_fixture_presentation(reading)
    for part in ("mult", "unit", "comult", "counit"):
        assert getattr(built, part).allclose(getattr(shipped, part), atol=0)


def test_pi_loops_vanish():
    for color in (Color.Z, Color.X):
        assert abs(wfrob.pi_loop_scalar(color)) < 1e-14
        assert abs(wfrob.pi_loop_scalar(color, ZERO) - 2) < 1e-14


def test_orthogonality():
    with_pi, with_zero = wfrob.orthogonality_scalars()
    assert abs(with_pi) < 1e-14
    assert abs(with_zero - (-1.5)) < 1e-12
    assert wfrob.verify_orthogonality()


def test_presentation_arity_checked():
    with pytest.raises(ValueError):
        wfrob.FrobeniusPresentation(identity(1), ket("0"), identity(1), ket("0"))


def test_triangle_ports():
    d = wfrob.triangle([(0, "in"), (0, None), (0, "out")])
    assert d.arity == (1, 1)
    flipped = wfrob.flip(d)
    assert flipped.arity == (1, 1)
    assert np.allclose(
        wfrob.evaluate(flipped).matrix, wfrob.evaluate(d).matrix.T
    )


def test_unit_is_zero_ket_and_counit_reads_the_nilpotent():
    # the counit law pins the counit to <1|, so it kills the unit |0>
    p = wfrob.build_w_algebra()
    assert proportional_eq(p.unit, ket("0"), 1e-12) is not None
    assert proportional_eq(p.counit, bra("1"), 1e-12) is not None
    assert abs(compose(p.counit, p.unit).scalar()) < 1e-15


def test_random_presentation_fails():
    from redgreen.sampling import gaussian_tensor, rng

    g = rng(4)
    p = wfrob.FrobeniusPresentation(
        gaussian_tensor(g, 2, 1), gaussian_tensor(g, 0, 1), gaussian_tensor(g, 1, 2), gaussian_tensor(g, 1, 0)
    )
    assert not wfrob.verify_frobenius(p).axioms_hold


def test_pi_point_is_not_orthogonal_to_itself():
    from redgreen.generators import phase_point
    from redgreen.phase import PI
    from redgreen.qtensor import transpose

    pt = phase_point(Color.X, PI)
    assert abs(compose(transpose(pt), pt).scalar()) > 0.1
