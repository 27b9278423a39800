from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from redgreen.generators import (
    basis_element_index,
    basis_vector,
    cap,
    copy,
    counit,
    cup,
    hadamard,
    lambda_map,
    mult,
    phase_point,
    point_mult,
    point_mult_composite,
    spider,
    unit,
)
from redgreen.phase import PI, ZERO, Color, Phase
from redgreen.qtensor import compose, dagger, identity, ket, state, tensor_product

colors = st.sampled_from([Color.Z, Color.X])
phases = st.builds(lambda p, q: Phase(Fraction(p, q)), st.integers(0, 47), st.integers(1, 24))
legs = st.integers(0, 3)


def test_z_spider_convention():
    s = spider(Color.Z, 1, 2, Fraction(1, 2))
    assert np.allclose(s.matrix, [[1, 0], [0, 0], [0, 0], [0, 1j]])


def test_x_spider_leg_formula():
    s = spider(Color.X, 0, 3, PI)
    for x in range(8):
        parity = bin(x).count("1") % 2
        assert abs(s.data[x] - (1 - (-1) ** parity) / 2**1.5) < 1e-15


@given(colors, legs, legs, legs, phases, phases)
def test_spider_fusion(color, a, b, c, p1, p2):
    # any number of parallel wires fuses with no scalar under this normalization
    lhs = compose(spider(color, b + 1, c, p2), spider(color, a, b + 1, p1))
    assert lhs.allclose(spider(color, a, c, p1 + p2), atol=1e-12)


@given(colors, phases, phases)
def test_single_wire_fusion_is_exact(color, p1, p2):
    lhs = compose(spider(color, 1, 2, p2), spider(color, 2, 1, p1))
    assert lhs.allclose(spider(color, 2, 2, p1 + p2), atol=1e-12)


@pytest.mark.parametrize("color", [Color.Z, Color.X])
def test_basis_structure_is_special_and_dagger(color):
    assert compose(mult(color), copy(color)).allclose(identity(1), atol=1e-12)
    assert dagger(copy(color)).allclose(mult(color), atol=1e-12)
    assert compose(tensor_product(counit(color), identity(1)), copy(color)).allclose(identity(1), atol=1e-12)


@pytest.mark.parametrize("color", [Color.Z, Color.X])
def test_snake_equation(color):
    lhs = compose(tensor_product(identity(1), cap(color)), tensor_product(cup(color), identity(1)))
    assert lhs.allclose(identity(1), atol=1e-12)


@pytest.mark.parametrize("color", [Color.Z, Color.X])
def test_basis_vectors_are_copied(color):
    for i in (0, 1):
        e = basis_vector(color, i)
        assert compose(copy(color), e).allclose(tensor_product(e, e), atol=1e-12)


def test_bases_are_unbiased():
    for i in (0, 1):
        for j in (0, 1):
            ov = compose(dagger(basis_vector(Color.Z, i)), basis_vector(Color.X, j)).scalar()
            assert abs(abs(ov) ** 2 - 0.5) < 1e-12


@given(colors, phases)
def test_phase_points_are_unbiased(color, a):
    p = phase_point(color, a)
    amps = [abs(compose(dagger(basis_vector(color, i)), p).scalar()) for i in (0, 1)]
    assert abs(amps[0] - amps[1]) < 1e-12


@given(phases, phases)
def test_lambda_is_a_group_homomorphism(a, b):
    la, lb = lambda_map(Color.Z, phase_point(Color.Z, a)), lambda_map(Color.Z, phase_point(Color.Z, b))
    assert compose(la, lb).allclose(lambda_map(Color.Z, phase_point(Color.Z, a + b)), atol=1e-12)


def test_lambda_of_unit_is_identity():
    for color in (Color.Z, Color.X):
        assert lambda_map(color, unit(color)).allclose(identity(1), atol=1e-12)


@given(phases, phases)
def test_point_mult_closed_form_matches_composite(xi, zeta):
    comp = point_mult_composite(xi, zeta)
    assert comp.allclose(point_mult(xi, zeta) * (1 / np.sqrt(2)), atol=1e-12)


def test_point_mult_vanishes_only_at_zero_pi():
    assert point_mult(ZERO, PI).norm() < 1e-15
    assert point_mult(PI, ZERO).norm() < 1e-15
    assert point_mult(ZERO, ZERO).norm() > 1


def test_basis_element_index():
    assert basis_element_index(ket("1") * 3j, Color.Z) == 1
    assert basis_element_index(state([1, 1]), Color.Z) is None
    assert basis_element_index(state([1, -1]), Color.X) == 1


def test_hadamard_exchanges_colours():
    h = hadamard()
    z = spider(Color.Z, 1, 2, Fraction(1, 3))
    x = spider(Color.X, 1, 2, Fraction(1, 3))
    assert compose(tensor_product(h, h), compose(z, h)).allclose(x, atol=1e-12)


def test_spider_arrays_are_shared_read_only():
    from redgreen.generators import spider_legs

    t = spider_legs(Color.Z, 3, Fraction(1, 3))
    assert t is spider_legs(Color.Z, 3, Phase(Fraction(1, 3)))
    with pytest.raises(ValueError):
        t[0, 0, 0] = 2
