"""Dense linear maps between qubit spaces.

A ``QTensor`` is a ``2**n_out x 2**n_in`` complex matrix. Qubit order is
big-endian: qubit 0 is the most significant bit of a basis index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from redgreen.errors import ArgumentError, DimensionError, ParseError

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class QTensor:
    n_in: int
    n_out: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.n_in < 0 or self.n_out < 0:
            raise DimensionError("negative qubit count")
        m = np.array(self.matrix, dtype=complex).reshape(2**self.n_out, 2**self.n_in)
        if not np.all(np.isfinite(m)):
            raise ValueError("QTensor entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def data(self) -> np.ndarray:
        """Flat amplitudes, output index major."""
        return self.matrix.ravel()

    @property
    def is_state(self) -> bool:
        return self.n_in == 0

    @property
    def is_scalar(self) -> bool:
        return self.n_in == 0 and self.n_out == 0

    def scalar(self) -> complex:
        if not self.is_scalar:
            raise DimensionError(f"not a scalar: {self.n_in}->{self.n_out}")
        return complex(self.matrix[0, 0])

    def legs(self) -> np.ndarray:
        """Rank-(n_out + n_in) view with one axis per qubit leg, outputs first."""
        return self.matrix.reshape((2,) * (self.n_out + self.n_in))

    def __matmul__(self, other: "QTensor") -> "QTensor":
        return compose(self, other)

    def __mul__(self, c) -> "QTensor":
        return QTensor(self.n_in, self.n_out, self.matrix * complex(c))

    __rmul__ = __mul__

    def __add__(self, other: "QTensor") -> "QTensor":
        _same_arity(self, other)
        return QTensor(self.n_in, self.n_out, self.matrix + other.matrix)

    def __sub__(self, other: "QTensor") -> "QTensor":
        _same_arity(self, other)
        return QTensor(self.n_in, self.n_out, self.matrix - other.matrix)

    def allclose(self, other: "QTensor", atol: float = 1e-12) -> bool:
        return (self.n_in, self.n_out) == (other.n_in, other.n_out) and bool(
            np.allclose(self.matrix, other.matrix, rtol=0, atol=atol)
        )

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    def __repr__(self) -> str:
        return f"QTensor({self.n_in}->{self.n_out}, {np.round(self.data, 6).tolist()})"

    # file format -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n_in": self.n_in,
            "n_out": self.n_out,
            "data": [[float(z.real), float(z.imag)] for z in self.data],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict()) + "\n"

    @classmethod
    def from_dict(cls, obj: dict) -> "QTensor":
        try:
            n_in, n_out = int(obj["n_in"]), int(obj["n_out"])
            data = [complex(float(re), float(im)) for re, im in obj["data"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed tensor document: {exc}") from None
        if len(data) != 2 ** (n_in + n_out):
            raise ParseError(f"expected {2 ** (n_in + n_out)} amplitudes, got {len(data)}")
        return cls(n_in, n_out, np.array(data))

    @classmethod
    def loads(cls, text: str) -> "QTensor":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from None


def _same_arity(f: QTensor, g: QTensor):
    if (f.n_in, f.n_out) != (g.n_in, g.n_out):
        raise DimensionError(f"arity mismatch: {f.n_in}->{f.n_out} vs {g.n_in}->{g.n_out}")


# constructors ----------------------------------------------------------


def identity(n: int = 1) -> QTensor:
    return QTensor(n, n, np.eye(2**n))


def scalar(c: complex) -> QTensor:
    return QTensor(0, 0, np.array([[c]]))


def state(amplitudes: Sequence[complex]) -> QTensor:
    amps = np.asarray(amplitudes, dtype=complex).ravel()
    n = len(amps).bit_length() - 1
    if len(amps) == 0 or 2**n != len(amps):
        raise DimensionError(f"{len(amps)} amplitudes is not a power of two")
    return QTensor(0, n, amps)


def ket(bits: str) -> QTensor:
    """Computational basis state, e.g. ``ket("011")``."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2) if bits else 0] = 1
    return QTensor(0, len(bits), v)


def bra(bits: str) -> QTensor:
    return dagger(ket(bits))


def from_matrix(m) -> QTensor:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    n_out, n_in = (k.bit_length() - 1 for k in m.shape)
    if m.shape != (2**n_out, 2**n_in):
        raise DimensionError(f"shape {m.shape} is not a power of two on both sides")
    return QTensor(n_in, n_out, m)


# operations --------------------------------------------------------------


def compose(f: QTensor, g: QTensor) -> QTensor:
    """f after g."""
    if f.n_in != g.n_out:
        raise DimensionError(f"cannot compose {f.n_in}->{f.n_out} after {g.n_in}->{g.n_out}")
    return QTensor(g.n_in, f.n_out, f.matrix @ g.matrix)


def tensor_product(f: QTensor, g: QTensor) -> QTensor:
    return QTensor(f.n_in + g.n_in, f.n_out + g.n_out, np.kron(f.matrix, g.matrix))


def tensor_all(fs: Iterable[QTensor]) -> QTensor:
    out = scalar(1)
    for f in fs:
        out = tensor_product(out, f)
    return out


def dagger(f: QTensor) -> QTensor:
    return QTensor(f.n_out, f.n_in, f.matrix.conj().T)


def conjugate(f: QTensor) -> QTensor:
    return QTensor(f.n_in, f.n_out, f.matrix.conj())


def transpose(f: QTensor) -> QTensor:
    """Swap inputs and outputs using the computational-basis cups."""
    return QTensor(f.n_out, f.n_in, f.matrix.T)


def proportional_eq(f: QTensor, g: QTensor, tol: float = DEFAULT_TOL) -> Optional[complex]:
    """Return ``lam`` with ``f == lam * g`` up to relative deviation ``tol``, else None.

    ``lam`` is the least-squares fit <g, f> / <g, g>. Two zero tensors are
    proportional with ``lam = 1``; a zero tensor is never proportional to a
    nonzero one.
    """
    _same_arity(f, g)
    a, b = f.data, g.data
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    scale = max(na, nb)
    if scale == 0:
        return 1 + 0j
    if na <= tol * scale or nb <= tol * scale:
        return None
    lam = np.vdot(b, a) / np.vdot(b, b)
    if np.linalg.norm(a - lam * b) / scale > tol:
        return None
    return complex(lam)


def deviation(f: QTensor, g: QTensor) -> float:
    """Relative residual of the best fit f ~ lam * g (0 for two zero tensors)."""
    _same_arity(f, g)
    a, b = f.data, g.data
    scale = max(np.linalg.norm(a), np.linalg.norm(b))
    if scale == 0:
        return 0.0
    nb2 = np.vdot(b, b).real
    if nb2 == 0:
        return 1.0
    lam = np.vdot(b, a) / nb2
    return float(np.linalg.norm(a - lam * b) / scale)


def projective_distance(f: QTensor, g: QTensor) -> float:
    """Distance between the rays of f and g: min over phases of |f^ - e^{it} g^|."""
    _same_arity(f, g)
    a, b = f.data, g.data
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return float("inf")
    a, b = a / na, b / nb
    ov = np.vdot(b, a)
    phase = ov / abs(ov) if ov != 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


def reduced_density(psi: QTensor, keep: Iterable[int]) -> QTensor:
    """Partial trace of |psi><psi| onto the ``keep`` qubits (in ascending order)."""
    if not psi.is_state:
        raise DimensionError("reduced_density needs a state")
    keep = sorted(set(keep))
    n = psi.n_out
    if not keep:
        raise ArgumentError("keep set must be non-empty")
    if keep[0] < 0 or keep[-1] >= n:
        raise ArgumentError(f"qubit index out of range for {n} qubits")
    rest = [q for q in range(n) if q not in keep]
    t = psi.data.reshape((2,) * n).transpose(keep + rest).reshape(2 ** len(keep), 2 ** len(rest))
    rho = t @ t.conj().T
    return QTensor(len(keep), len(keep), rho)


def matrix_rank(f: QTensor, tol: float = DEFAULT_TOL) -> int:
    """Singular values above ``tol`` times the largest one."""
    return _rank(f.matrix, tol)


def _rank(m: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def bipartition_rank(f: QTensor, side: Iterable[int], tol: float = DEFAULT_TOL) -> int:
    """Rank of f reshaped so that legs in ``side`` index rows.

    Legs are numbered outputs first (0..n_out-1), then inputs.
    """
    side = sorted(set(side))
    k = f.n_out + f.n_in
    other = [i for i in range(k) if i not in side]
    m = f.legs().transpose(side + other).reshape(2 ** len(side), 2 ** len(other))
    return _rank(m, tol)


def swap() -> QTensor:
    m = np.zeros((4, 4))
    for a in range(2):
        for b in range(2):
            m[2 * b + a, 2 * a + b] = 1
    return QTensor(2, 2, m)
