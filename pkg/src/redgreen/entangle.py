"""Three-qubit entanglement: tangles, SLOCC classes, the phase family of the
triangle diagram, supplementary phases and the corner/square plugging analyses.

Qubits are numbered 0, 1, 2 (A, B, C). All tangles are computed on the
normalized state.
"""

from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from redgreen.diagram import plug, point_diagram, square4_diagram, w_family_diagram
from redgreen.errors import ArgumentError, DegenerateInputError, NoWitnessError
from redgreen.evaluator import evaluate
from redgreen.generators import point_mult
from redgreen.phase import PI, Color, Phase, PhaseLike
from redgreen.qtensor import (
    DEFAULT_TOL,
    QTensor,
    bipartition_rank,
    matrix_rank,
    proportional_eq,
    reduced_density,
    state,
    tensor_all,
)

NORM_TOL = 1e-9

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
_YY = np.kron(SIGMA_Y, SIGMA_Y)


class SloccClass(enum.Enum):
    GHZ = "GHZ"
    W = "W"
    BiSepA_BC = "BiSepA_BC"
    BiSepB_CA = "BiSepB_CA"
    BiSepC_AB = "BiSepC_AB"
    Product = "Product"


class FamilyVerdict(enum.Enum):
    GHZclass = "GHZclass"
    Wclass = "Wclass"
    Degenerate = "Degenerate"
    BiSepOrLess = "BiSepOrLess"


class SupplementarityVerdict(enum.Enum):
    NotSupplementary = "NotSupplementary"
    Supp0 = "Supp0"
    Supp1 = "Supp1"
    Degenerate = "Degenerate"

    @property
    def expected_rank(self) -> int:
        """Schmidt rank of a two-qubit state a|00> + b|11> whose (a, b) is the product point."""
        return {"Degenerate": 0, "Supp0": 1, "Supp1": 1, "NotSupplementary": 2}[self.value]


# states ---------------------------------------------------------------------


def _amplitudes(psi) -> np.ndarray:
    if isinstance(psi, QTensor):
        if not psi.is_state or psi.n_out != 3:
            raise ArgumentError(f"expected a 3-qubit state, got {psi.n_in}->{psi.n_out}")
        return psi.data
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if v.size != 8:
        raise ArgumentError(f"expected 8 amplitudes, got {v.size}")
    return v


def _normalized(psi) -> np.ndarray:
    v = _amplitudes(psi)
    if abs(np.linalg.norm(v) - 1) > NORM_TOL:
        raise ArgumentError(f"state is not normalized (norm {np.linalg.norm(v):.12g})")
    return v


def normalize(psi) -> QTensor:
    v = _amplitudes(psi)
    n = np.linalg.norm(v)
    if n == 0:
        raise DegenerateInputError("the zero vector has no normalization")
    return QTensor(0, 3, v / n)


def _check_qubit(k: int):
    if k not in (0, 1, 2):
        raise ArgumentError(f"qubit index {k} not in 0..2")


# tangles ---------------------------------------------------------------------


def tangle_one_vs_rest(psi, k: int) -> float:
    """4 det of the one-qubit reduced density: the tangle between qubit k and the other two."""
    _check_qubit(k)
    v = _normalized(psi)
    rho = reduced_density(QTensor(0, 3, v), [k]).matrix
    return float(np.clip(4 * np.linalg.det(rho).real, 0.0, 1.0))


def _lambdas(vectors: np.ndarray) -> np.ndarray:
    """Decreasing singular values of V^T (Y x Y) V for a decomposition rho = V V^dagger.

    These are the square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y),
    padded with zeros to length 4; they do not depend on which decomposition
    V is used.
    """
    tau = vectors.T @ _YY @ vectors
    sv = np.linalg.svd(tau, compute_uv=False)
    return np.concatenate([sv, np.zeros(4 - sv.size)])


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    p, u = np.linalg.eigh((rho + rho.conj().T) / 2)
    lam = _lambdas(u * np.sqrt(np.clip(p, 0, None)))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def pairwise_tangle(psi, i: int, j: int) -> float:
    """Squared concurrence of the two-qubit marginal on qubits i and j.

    The marginal of a pure state is rho = a a^dagger + b b^dagger, with a and b
    the slices of psi at the traced qubit set to 0 and 1; that decomposition
    is used directly.
    """
    _check_qubit(i)
    _check_qubit(j)
    if i == j:
        raise ArgumentError("pairwise tangle needs two different qubits")
    v = _normalized(psi)
    i, j = sorted((i, j))
    (k,) = {0, 1, 2} - {i, j}
    t = v.reshape(2, 2, 2).transpose(i, j, k).reshape(4, 2)
    lam = _lambdas(t)
    c = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
    return float(min(1.0, c * c))


def three_tangle(psi, tol: float = DEFAULT_TOL) -> float:
    """Residual tangle tau_A(BC) - tau_AB - tau_AC; values below ``tol`` are clamped to 0."""
    t = tangle_one_vs_rest(psi, 0) - pairwise_tangle(psi, 0, 1) - pairwise_tangle(psi, 0, 2)
    return 0.0 if t < tol else float(t)


def hyperdeterminant(psi) -> complex:
    """Cayley's hyperdeterminant of the 2x2x2 amplitude array (no normalization)."""
    a = _amplitudes(psi).reshape(2, 2, 2)
    d1 = (
        a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2
        + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
        + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2
        + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2
    )
    d2 = (
        a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
        + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
        + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
        + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1]
    )
    d3 = a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1] + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0]
    return complex(d1 - 2 * d2 + 4 * d3)


def hyperdeterminant_tangle(psi) -> float:
    """4 |Det| of the normalized state; an independent route to the 3-tangle."""
    v = _normalized(psi)
    return 4 * abs(hyperdeterminant(v))


@dataclass(frozen=True)
class TangleReport:
    tau_A_BC: float
    tau_B_CA: float
    tau_C_AB: float
    tau_AB: float
    tau_AC: float
    tau_BC: float
    tau_ABC: float

    @property
    def residuals(self) -> Tuple[float, float, float]:
        return (
            self.tau_A_BC - self.tau_AB - self.tau_AC,
            self.tau_B_CA - self.tau_AB - self.tau_BC,
            self.tau_C_AB - self.tau_AC - self.tau_BC,
        )

    def as_dict(self) -> Dict[str, float]:
        return dict(self.__dict__)


def tangle_report(psi, tol: float = DEFAULT_TOL) -> TangleReport:
    v = _normalized(psi)
    return TangleReport(
        tau_A_BC=tangle_one_vs_rest(v, 0),
        tau_B_CA=tangle_one_vs_rest(v, 1),
        tau_C_AB=tangle_one_vs_rest(v, 2),
        tau_AB=pairwise_tangle(v, 0, 1),
        tau_AC=pairwise_tangle(v, 0, 2),
        tau_BC=pairwise_tangle(v, 1, 2),
        tau_ABC=three_tangle(v, tol),
    )


# classification -------------------------------------------------------------------

_BISEP = {0: SloccClass.BiSepA_BC, 1: SloccClass.BiSepB_CA, 2: SloccClass.BiSepC_AB}


def classify_slocc(psi, tol: float = DEFAULT_TOL) -> SloccClass:
    v = _amplitudes(psi)
    if np.linalg.norm(v) == 0:
        raise DegenerateInputError("the zero vector has no SLOCC class")
    v = normalize(v)
    ranks = [matrix_rank(reduced_density(v, [k]), tol) for k in range(3)]
    ones = [k for k, r in enumerate(ranks) if r == 1]
    if len(ones) == 3:
        return SloccClass.Product
    if len(ones) == 1:
        return _BISEP[ones[0]]
    if ones:  # two rank-1 marginals force the third; only reachable through round-off
        return SloccClass.Product
    return SloccClass.GHZ if three_tangle(v, tol) > tol else SloccClass.W


# the phase family -------------------------------------------------------------------


# evaluate(w_family_diagram(a, b, c)) == TRIANGLE_SCALE * family_amplitudes(a, b, c).state()
TRIANGLE_SCALE = 2**-1.5


@dataclass(frozen=True)
class FamilyAmplitudes:
    """Coefficients of |000>, |110>, |011>, |101>."""

    a: complex
    b: complex
    c: complex
    d: complex

    def state(self) -> QTensor:
        v = np.zeros(8, dtype=complex)
        v[0b000], v[0b110], v[0b011], v[0b101] = self.a, self.b, self.c, self.d
        return QTensor(0, 3, v)

    @property
    def norm_sq(self) -> float:
        return float(sum(abs(x) ** 2 for x in (self.a, self.b, self.c, self.d)))


def _phases(*ps: PhaseLike) -> List[Phase]:
    return [Phase.coerce(p) for p in ps]


def family_amplitudes(alpha: PhaseLike, beta: PhaseLike, gamma: PhaseLike) -> FamilyAmplitudes:
    al, be, ga = _phases(alpha, beta, gamma)
    return FamilyAmplitudes(
        a=1 + (al + be + ga).unit(),
        b=ga.unit() + (al + be).unit(),
        c=al.unit() + (be + ga).unit(),
        d=be.unit() + (al + ga).unit(),
    )


def family_conditions(alpha: PhaseLike, beta: PhaseLike, gamma: PhaseLike) -> Tuple[bool, bool, bool, bool]:
    """Which of a, b, c, d vanish, decided on the phases (exactly for rational phases)."""
    al, be, ga = _phases(alpha, beta, gamma)
    return (
        (al + be + ga).congruent(PI),
        (ga - al - be).congruent(PI),
        (al - be - ga).congruent(PI),
        (be - al - ga).congruent(PI),
    )


def family_three_tangle(alpha: PhaseLike, beta: PhaseLike, gamma: PhaseLike) -> float:
    """16|abcd| / |psi|^4 for the family state."""
    if all(family_conditions(alpha, beta, gamma)):
        raise DegenerateInputError(f"family state at ({alpha}, {beta}, {gamma}) is the zero vector")
    amp = family_amplitudes(alpha, beta, gamma)
    return float(16 * abs(amp.a * amp.b * amp.c * amp.d) / amp.norm_sq**2)


def family_is_w_class(
    alpha: PhaseLike, beta: PhaseLike, gamma: PhaseLike, tol: float = DEFAULT_TOL
) -> FamilyVerdict:
    conds = family_conditions(alpha, beta, gamma)
    n = sum(conds)
    if n == 0:
        return FamilyVerdict.GHZclass
    if n == 1:
        # exactly one coefficient vanishes; the other three are nonzero
        return FamilyVerdict.Wclass
    if n == 4:
        return FamilyVerdict.Degenerate
    cls = classify_slocc(family_amplitudes(alpha, beta, gamma).state(), tol)
    if cls is SloccClass.GHZ:
        return FamilyVerdict.GHZclass
    if cls is SloccClass.W:
        return FamilyVerdict.Wclass
    return FamilyVerdict.BiSepOrLess


# GHZ-class witness ------------------------------------------------------------------


@dataclass(frozen=True)
class SloccWitness:
    """Local maps with (A1 x A2 x A3)(|000> + |111>) proportional to the target state."""

    A1: QTensor
    A2: QTensor
    A3: QTensor

    def reconstruct(self) -> QTensor:
        ghz = state([1, 0, 0, 0, 0, 0, 0, 1])
        return tensor_all([self.A1, self.A2, self.A3]) @ ghz


def _pencil_roots(t0: np.ndarray, t1: np.ndarray, scale: float) -> List[Tuple[complex, complex]]:
    """Projective roots (s, t) of det(s T0 + t T1) = 0."""
    qa = np.linalg.det(t0)
    qc = np.linalg.det(t1)
    qm = t0[0, 0] * t1[1, 1] + t1[0, 0] * t0[1, 1] - t0[0, 1] * t1[1, 0] - t1[0, 1] * t0[1, 0]
    disc = qm * qm - 4 * qa * qc
    if abs(disc) < NORM_TOL * scale**4:
        raise NoWitnessError(f"pencil discriminant {abs(disc):.3e} vanishes; the state is not GHZ-class")
    r = np.sqrt(disc)
    if abs(qa) >= abs(qc) and abs(qa) > 0:
        return [((-qm + r) / (2 * qa), 1), ((-qm - r) / (2 * qa), 1)]
    if abs(qc) > 0:
        return [(1, (-qm + r) / (2 * qc)), (1, (-qm - r) / (2 * qc))]
    return [(1, 0), (0, 1)]


def ghz_witness(psi, tol: float = 1e-8) -> SloccWitness:
    """Split psi into two product terms u_k (x) v_k (x) w_k; the factors are the columns of A1, A2, A3."""
    v = _amplitudes(psi)
    scale = np.linalg.norm(v)
    if scale == 0:
        raise DegenerateInputError("the zero vector has no witness")
    t = v.reshape(2, 2, 2)
    t0, t1 = t[0], t[1]
    vs, ws = [], []
    for s, u in _pencil_roots(t0, t1, scale):
        m = s * t0 + u * t1
        left, sv, right = np.linalg.svd(m)
        vs.append(left[:, 0] * sv[0])
        ws.append(right[0, :])
    basis = np.stack([np.outer(vs[k], ws[k]).reshape(-1) for k in range(2)], axis=1)
    coeffs, *_ = np.linalg.lstsq(basis, t.reshape(2, 4).T, rcond=None)
    # coeffs[k, i] is the i-th entry of u_k
    wit = SloccWitness(
        A1=QTensor(1, 1, coeffs.T),
        A2=QTensor(1, 1, np.stack(vs, axis=1)),
        A3=QTensor(1, 1, np.stack(ws, axis=1)),
    )
    if proportional_eq(wit.reconstruct(), QTensor(0, 3, v), tol) is None:
        raise NoWitnessError("decomposition did not reproduce the state")
    return wit


# supplementarity and plugging -------------------------------------------------------


def supplementarity(xi: PhaseLike, zeta: PhaseLike) -> SupplementarityVerdict:
    """Classify the product point of two Z phases: |1> when xi + zeta = pi, |0> when zeta = xi + pi."""
    xi, zeta = _phases(xi, zeta)
    one = (xi + zeta).congruent(PI)
    zero = zeta.congruent(xi + PI)
    if one and zero:
        return SupplementarityVerdict.Degenerate
    if one:
        return SupplementarityVerdict.Supp1
    if zero:
        return SupplementarityVerdict.Supp0
    return SupplementarityVerdict.NotSupplementary


def schmidt_rank(psi: QTensor, side: Sequence[int], tol: float = DEFAULT_TOL) -> int:
    """Rank across a bipartition; a state with norm below ``tol`` has rank 0."""
    if psi.norm() < tol:
        return 0
    return bipartition_rank(psi, side, tol)


@dataclass(frozen=True)
class CornerReport:
    corner: int
    combined: Tuple[Phase, Phase]
    verdict: SupplementarityVerdict
    bipartite_rank: int

    @property
    def point(self) -> QTensor:
        """Closed-form product point of the two path phases."""
        return point_mult(*self.combined)

    @property
    def agrees(self) -> bool:
        return self.verdict.expected_rank == self.bipartite_rank


def corner_phases(alpha: PhaseLike, beta: PhaseLike, gamma: PhaseLike, corner: int) -> Tuple[Phase, Phase]:
    """Phases left on the two paths between the other corners once ``corner`` is erased.

    The side opposite the erased corner keeps its own phase; the two sides
    meeting at it fuse into one path carrying their sum.
    """
    ph = _phases(alpha, beta, gamma)
    if corner not in (0, 1, 2):
        raise ArgumentError(f"corner {corner} not in 0..2")
    others = [ph[k] for k in range(3) if k != corner]
    return others[0] + others[1], ph[corner]


def plug_corner_analysis(
    alpha: PhaseLike, beta: PhaseLike, gamma: PhaseLike, corner: int, tol: float = DEFAULT_TOL
) -> CornerReport:
    return _corner_report(w_family_diagram(alpha, beta, gamma), corner, tol)


_X_ZERO_POINT = point_diagram(Color.X, 0)


def _corner_report(d, corner: int, tol: float) -> CornerReport:
    """``d`` is the triangle diagram; its side phases are read back from the Z nodes."""
    alpha, beta, gamma = (d.node(z).phase for z in ("z1", "z2", "z0"))
    xi, zeta = corner_phases(alpha, beta, gamma, corner)
    plugged = evaluate(plug(d, d.outputs[corner], _X_ZERO_POINT))
    return CornerReport(
        corner=corner,
        combined=(xi, zeta),
        verdict=supplementarity(xi, zeta),
        bipartite_rank=schmidt_rank(plugged, [0], tol),
    )


SQUARE_CORNERS = ("TL", "TR", "BL", "BR")
# square sides as (corner, corner, phase slot): top delta, right gamma, bottom beta, left alpha
_SQUARE_SIDES = ((0, 1, 3), (1, 3, 2), (2, 3, 1), (0, 2, 0))


@dataclass(frozen=True)
class PairReport:
    plugged: Tuple[str, str]
    pattern: str  # "adjacent" (single vs triple) or "opposite" (pair vs pair)
    combined: Tuple[Phase, Phase]
    verdict: SupplementarityVerdict
    bipartite_rank: int

    @property
    def agrees(self) -> bool:
        return self.verdict.expected_rank == self.bipartite_rank


def _square_paths(ph: Sequence[Phase], pair: Tuple[int, int]) -> Tuple[Phase, Phase]:
    """Summed phases on the two paths joining the unplugged corners."""
    rest = [k for k in range(4) if k not in pair]
    # walk the square cycle TL -> TR -> BR -> BL from one free corner to the other, both ways
    cycle = [0, 1, 3, 2]
    side_phase = {frozenset((a, b)): ph[slot] for a, b, slot in _SQUARE_SIDES}
    i, j = cycle.index(rest[0]), cycle.index(rest[1])
    sums = []
    for step in (1, -1):
        total, k = Phase(Fraction(0)), i
        while k != j:
            nxt = (k + step) % 4
            total = total + side_phase[frozenset((cycle[k], cycle[nxt]))]
            k = nxt
        sums.append(total)
    return sums[0], sums[1]


def square4_analysis(
    alpha: PhaseLike, beta: PhaseLike, gamma: PhaseLike, delta: PhaseLike, tol: float = DEFAULT_TOL
) -> List[PairReport]:
    """Plug the X(0) point into each pair of corners and compare exact verdicts with Schmidt ranks."""
    ph = _phases(alpha, beta, gamma, delta)
    d = square4_diagram(*ph)
    reports = []
    for pair in itertools.combinations(range(4), 2):
        xi, zeta = _square_paths(ph, pair)
        dd = d
        for k in pair:
            dd = plug(dd, d.outputs[k], point_diagram(Color.X, 0))
        st = evaluate(dd)
        adjacent = frozenset(pair) in {frozenset((a, b)) for a, b, _ in _SQUARE_SIDES}
        reports.append(
            PairReport(
                plugged=(SQUARE_CORNERS[pair[0]], SQUARE_CORNERS[pair[1]]),
                pattern="adjacent" if adjacent else "opposite",
                combined=(xi, zeta),
                verdict=supplementarity(xi, zeta),
                bipartite_rank=schmidt_rank(st, [0], tol),
            )
        )
    return reports


# grid scan -------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    numerators: Tuple[int, int, int]
    verdict: FamilyVerdict
    on_plane: bool  # some coefficient vanishes exactly
    tangle: Optional[float]  # None for the zero state
    slocc: Optional[SloccClass]  # class of the evaluated diagram; None when skipped or zero
    flagged: bool  # two or more conditions hold but the state is nonzero

    def phases(self, q: int) -> Tuple[Phase, Phase, Phase]:
        return tuple(Phase(Fraction(p, q)) for p in self.numerators)


@dataclass
class ScanReport:
    q: int
    tol: float
    rows: List[ScanRow] = field(default_factory=list)

    @property
    def degenerate(self) -> List[ScanRow]:
        return [r for r in self.rows if r.verdict is FamilyVerdict.Degenerate]

    @property
    def mismatches(self) -> List[ScanRow]:
        """Nondegenerate points where the numeric zero-tangle test and exact plane membership disagree."""
        return [r for r in self.rows if r.tangle is not None and (r.tangle < self.tol) != r.on_plane]

    @property
    def consistent(self) -> bool:
        return not self.mismatches

    def counts(self) -> Dict[str, int]:
        out = {v.value: 0 for v in FamilyVerdict}
        for r in self.rows:
            out[r.verdict.value] += 1
        return out


def _scan_point(args) -> ScanRow:
    q, nums, tol, classify = args
    ph = [Phase(Fraction(p, q)) for p in nums]
    conds = family_conditions(*ph)
    verdict = family_is_w_class(*ph, tol=tol)
    if verdict is FamilyVerdict.Degenerate:
        return ScanRow(nums, verdict, True, None, None, False)
    slocc = None
    if classify:
        slocc = classify_slocc(evaluate(w_family_diagram(*ph)), tol)
    return ScanRow(nums, verdict, any(conds), family_three_tangle(*ph), slocc, sum(conds) >= 2)


def scan_family(q: int, tol: float = DEFAULT_TOL, classify: bool = True, workers: int = 1) -> ScanReport:
    """Every triple (p1, p2, p3) * pi / q with 0 <= p_i < 2q."""
    if not 1 <= q <= 64:
        raise ArgumentError("denominator must be in 1..64")
    grid = [(q, nums, tol, classify) for nums in itertools.product(range(2 * q), repeat=3)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_point, grid, chunksize=256))
    else:
        rows = [_scan_point(g) for g in grid]
    return ScanReport(q, tol, rows)


def _corner_point(args) -> List[CornerReport]:
    q, nums, tol = args
    d = w_family_diagram(*(Phase(Fraction(p, q)) for p in nums))
    return [_corner_report(d, k, tol) for k in range(3)]


def corner_scan(q: int, tol: float = DEFAULT_TOL, workers: int = 1) -> List[Tuple[Tuple[int, int, int], List[CornerReport]]]:
    if not 1 <= q <= 64:
        raise ArgumentError("denominator must be in 1..64")
    grid = [(q, nums, tol) for nums in itertools.product(range(2 * q), repeat=3)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            res = list(pool.map(_corner_point, grid, chunksize=256))
    else:
        res = [_corner_point(g) for g in grid]
    return [(g[1], r) for g, r in zip(grid, res)]
