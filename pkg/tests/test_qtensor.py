import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from redgreen.errors import ArgumentError, DimensionError, ParseError
from redgreen.qtensor import (
    QTensor,
    bipartition_rank,
    bra,
    compose,
    dagger,
    deviation,
    from_matrix,
    identity,
    ket,
    matrix_rank,
    projective_distance,
    proportional_eq,
    reduced_density,
    state,
    swap,
    tensor_all,
    tensor_product,
    transpose,
)
from redgreen.sampling import gaussian_state, gaussian_tensor, rng

seeds = st.integers(0, 2**32 - 1)
arity = st.integers(0, 2)


def test_shape_and_flat_order():
    t = ket("01")
    assert t.matrix.shape == (4, 1)
    assert t.data[1] == 1
    assert bra("1").matrix.shape == (1, 2)


def test_state_rejects_odd_lengths():
    with pytest.raises(DimensionError):
        state([1, 0, 0])
    with pytest.raises(DimensionError):
        from_matrix(np.ones((3, 2)))


def test_immutable():
    t = identity(1)
    with pytest.raises(ValueError):
        t.matrix[0, 0] = 5


def test_nonfinite_rejected():
    with pytest.raises(ValueError):
        QTensor(0, 1, [np.nan, 0])


@given(seeds, arity, arity, arity)
def test_composition_associative(seed, a, b, c):
    g = rng(seed)
    f1, f2, f3 = gaussian_tensor(g, c, 1), gaussian_tensor(g, b, c), gaussian_tensor(g, a, b)
    assert compose(compose(f1, f2), f3).allclose(compose(f1, compose(f2, f3)), atol=1e-9)


@given(seeds, arity, arity)
def test_identity_is_neutral(seed, n_in, n_out):
    f = gaussian_tensor(rng(seed), n_in, n_out)
    assert compose(identity(n_out), f).allclose(f)
    assert compose(f, identity(n_in)).allclose(f)


@given(seeds)
def test_interchange_law(seed):
    g = rng(seed)
    f1, f2 = gaussian_tensor(g, 2, 1), gaussian_tensor(g, 1, 2)
    g1, g2 = gaussian_tensor(g, 1, 2), gaussian_tensor(g, 2, 1)
    lhs = compose(tensor_product(f1, g1), tensor_product(f2, g2))
    rhs = tensor_product(compose(f1, f2), compose(g1, g2))
    assert lhs.allclose(rhs, atol=1e-9)


@given(seeds, arity, arity)
def test_dagger_involutive_and_contravariant(seed, a, b):
    g = rng(seed)
    f, h = gaussian_tensor(g, a, b), gaussian_tensor(g, b, a)
    assert dagger(dagger(f)).allclose(f)
    assert dagger(compose(h, f)).allclose(compose(dagger(f), dagger(h)), atol=1e-9)


def test_transpose_swaps_arity():
    f = gaussian_tensor(rng(1), 1, 2)
    t = transpose(f)
    assert (t.n_in, t.n_out) == (2, 1)
    assert transpose(t).allclose(f)


def test_swap_exchanges_factors():
    a, b = ket("0"), ket("1")
    assert compose(swap(), tensor_product(a, b)).allclose(tensor_product(b, a))


def test_tensor_all_empty_is_unit_scalar():
    assert tensor_all([]).scalar() == 1


@given(seeds, st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False))
def test_proportional_eq_recovers_scalar(seed, lam):
    f = gaussian_tensor(rng(seed), 1, 2)
    got = proportional_eq(lam * f, f)
    assert got is not None and abs(got - lam) <= 1e-9 * abs(lam)
    assert deviation(lam * f, f) < 1e-12


def test_proportional_eq_zero_cases():
    z = QTensor(0, 1, [0, 0])
    assert proportional_eq(z, z) == 1
    assert proportional_eq(z, ket("0")) is None
    assert proportional_eq(ket("0"), ket("1")) is None


def test_proportional_eq_arity_mismatch():
    with pytest.raises(DimensionError):
        proportional_eq(ket("0"), ket("00"))


def test_projective_distance_ignores_global_phase():
    f = gaussian_tensor(rng(3), 1, 1)
    assert projective_distance(np.exp(0.7j) * 3 * f, f) < 1e-12
    assert projective_distance(identity(1), identity(1)) == 0.0
    assert abs(projective_distance(ket("0"), ket("1")) - np.sqrt(2)) < 1e-12


@given(seeds)
def test_reduced_density_is_a_density_matrix(seed):
    psi = gaussian_state(rng(seed), 3)
    for keep in ([0], [1, 2], [0, 2]):
        rho = reduced_density(psi, keep).matrix
        assert np.allclose(rho, rho.conj().T)
        assert abs(np.trace(rho) - 1) < 1e-12
        assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_reduced_density_rejects_bad_input():
    with pytest.raises(ArgumentError):
        reduced_density(ket("000"), [3])
    with pytest.raises(DimensionError):
        reduced_density(identity(1), [0])


def test_ranks():
    ghz = state([1, 0, 0, 0, 0, 0, 0, 1])
    assert bipartition_rank(ghz, [0]) == 2
    assert bipartition_rank(ket("010"), [1]) == 1
    assert matrix_rank(identity(2)) == 4
    assert matrix_rank(QTensor(1, 1, np.zeros((2, 2)))) == 0


def test_file_round_trip():
    f = gaussian_tensor(rng(5), 1, 2)
    assert QTensor.loads(f.dumps()).allclose(f, atol=0)


@pytest.mark.parametrize(
    "text",
    ["{", "[]", '{"n_in": 0, "n_out": 1, "data": [[1, 0]]}', '{"n_in": 0, "data": []}'],
)
def test_bad_tensor_files(text):
    with pytest.raises(ParseError):
        QTensor.loads(text)
