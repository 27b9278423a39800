"""Concrete Z (green) and X (red) spiders on one qubit.

Convention: a Z spider maps |0..0> to |0..0> and |1..1> to e^{i phase}|1..1>;
an X spider does the same in the normalized |+>, |-> basis. With every leg
treated as an output, the X spider's amplitude on bit string x is
``2**(-n/2) * (1 + e^{i phase} * (-1)**|x|)``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional

import numpy as np

from redgreen.phase import Color, Phase, PhaseLike, ZERO
from redgreen.qtensor import (
    DEFAULT_TOL,
    QTensor,
    compose,
    dagger,
    identity,
    proportional_eq,
    state,
    tensor_product,
)

SQRT2 = np.sqrt(2.0)


def spider_legs(color: Color, n_legs: int, phase: PhaseLike = ZERO) -> np.ndarray:
    """Spider as a rank-``n_legs`` array, legs unordered (the tensor is symmetric).

    The returned array is shared and read-only.
    """
    return _spider_legs(color, n_legs, Phase.coerce(phase))


@lru_cache(maxsize=4096)
def _spider_legs(color: Color, n_legs: int, phase: Phase) -> np.ndarray:
    t = _build_legs(color, n_legs, phase)
    t.flags.writeable = False
    return t


def _build_legs(color: Color, n_legs: int, phase: Phase) -> np.ndarray:
    u = phase.unit()
    if n_legs == 0:
        return np.array(1 + u)
    t = np.zeros((2,) * n_legs, dtype=complex)
    if color is Color.Z:
        t[(0,) * n_legs] = 1
        t[(1,) * n_legs] = u
        return t
    parity = np.zeros((2,) * n_legs, dtype=int)
    for axis in range(n_legs):
        shape = [1] * n_legs
        shape[axis] = 2
        parity = parity + np.arange(2).reshape(shape)
    sign = np.where(parity % 2 == 0, 1.0, -1.0)
    return (1 + u * sign) / SQRT2**n_legs


def spider(color: Color, n_in: int, n_out: int, phase: PhaseLike = ZERO) -> QTensor:
    if n_in < 0 or n_out < 0:
        raise ValueError("negative arity")
    return QTensor(n_in, n_out, spider_legs(color, n_in + n_out, phase))


def basis_vector(color: Color, i: int) -> QTensor:
    """|0>,|1> for Z; |+>,|-> for X."""
    if color is Color.Z:
        v = [1, 0] if i == 0 else [0, 1]
    else:
        v = np.array([1, 1 if i == 0 else -1]) / SQRT2
    return state(v)


def phase_point(color: Color, alpha: PhaseLike) -> QTensor:
    """The unbiased state e_0 + e^{i alpha} e_1 (unnormalized)."""
    return spider(color, 0, 1, alpha)


def copy(color: Color) -> QTensor:
    return spider(color, 1, 2)


def mult(color: Color) -> QTensor:
    return spider(color, 2, 1)


def unit(color: Color) -> QTensor:
    return spider(color, 0, 1)


def counit(color: Color) -> QTensor:
    return spider(color, 1, 0)


def cup(color: Color) -> QTensor:
    return spider(color, 0, 2)


def cap(color: Color) -> QTensor:
    return spider(color, 2, 0)


def lambda_map(color: Color, psi: QTensor) -> QTensor:
    """Endomorphism induced by a point: multiplication of ``color`` applied to psi (x) id."""
    return compose(dagger(copy(color)), tensor_product(psi, identity(1)))


def point_mult(xi: PhaseLike, zeta: PhaseLike) -> QTensor:
    """Closed form of the X-multiplication of two Z phase points.

    Returns (1 + e^{i(xi+zeta)})|0> + (e^{i xi} + e^{i zeta})|1>. The composite
    ``dagger(copy(X)) @ (phase_point(Z, xi) (x) phase_point(Z, zeta))`` equals
    this vector divided by sqrt(2). Both entries vanish exactly when
    {xi, zeta} = {0, pi}.
    """
    xi, zeta = Phase.coerce(xi), Phase.coerce(zeta)
    return state([1 + (xi + zeta).unit(), xi.unit() + zeta.unit()])


def point_mult_composite(xi: PhaseLike, zeta: PhaseLike) -> QTensor:
    return compose(dagger(copy(Color.X)), tensor_product(phase_point(Color.Z, xi), phase_point(Color.Z, zeta)))


def basis_element_index(psi: QTensor, color: Color, tol: float = DEFAULT_TOL) -> Optional[int]:
    if psi.n_in != 0 or psi.n_out != 1:
        raise ValueError("expected a one-qubit state")
    for i in (0, 1):
        lam = proportional_eq(psi, basis_vector(color, i), tol)
        if lam is not None and psi.norm() > 0:
            return i
    return None


def hadamard() -> QTensor:
    return QTensor(1, 1, np.array([[1, 1], [1, -1]]) / SQRT2)
