"""The commutative Frobenius algebra carried by the W state.

Its multiplication and comultiplication are triangles of X spiders with
Z(pi/3) on every side, the same shape as the W-state triangle. Two readings of
how those triangles attach to inputs and outputs are provided:

* ``top_down``: multiplication has X(pi) at its two input corners, unit is the
  X(0) point and counit the X(pi) effect. This is C[x]/x^2 with x = |1>.
* ``bottom_up``: every diagram of ``top_down`` turned upside down (transposed),
  so multiplication is the comultiplication triangle read backwards, the unit
  is the X(pi) point and the counit the X(0) effect.

Both pass the Frobenius axioms; ``DEFAULT_READING`` is used by the CLI and the
acceptance suite. ``mixed_polarity`` keeps the top-down triangles but swaps in
the bottom-up points and serves as a known-bad candidate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Dict, Optional, Sequence, Tuple


from redgreen import diagram as dg
from redgreen.diagram import Diagram, Node
from redgreen.evaluator import evaluate, evaluate_scalar
from redgreen.generators import copy, counit, unit
from redgreen.phase import PI, ZERO, Color, Phase, PhaseLike
from redgreen.qtensor import (
    DEFAULT_TOL,
    QTensor,
    compose,
    dagger,
    identity,
    matrix_rank,
    projective_distance,
    proportional_eq,
    swap,
    tensor_product,
)

THIRD = Phase(Fraction(1, 3))
READINGS = ("top_down", "bottom_up", "mixed_polarity")
DEFAULT_READING = "top_down"


@dataclass(frozen=True)
class FrobeniusPresentation:
    mult: QTensor  # 2 -> 1
    unit: QTensor  # 0 -> 1
    comult: QTensor  # 1 -> 2
    counit: QTensor  # 1 -> 0
    name: str = ""

    def __post_init__(self):
        arities = {"mult": (2, 1), "unit": (0, 1), "comult": (1, 2), "counit": (1, 0)}
        for part, (n_in, n_out) in arities.items():
            t = getattr(self, part)
            if (t.n_in, t.n_out) != (n_in, n_out):
                raise ValueError(f"{part} must be {n_in}->{n_out}, got {t.n_in}->{t.n_out}")


# diagrams ----------------------------------------------------------------------


def triangle(corners: Sequence[Tuple[PhaseLike, Optional[str]]], side: PhaseLike = THIRD) -> Diagram:
    """Three X corners c0, c1, c2 with Z(side) on every side.

    Each corner is (X phase, port kind) with kind "in", "out" or None for a
    corner with no boundary leg.
    """
    nodes, edges, ins, outs = [], [], [], []
    for j, (ph, kind) in enumerate(corners):
        nodes.append(Node(f"c{j}", Color.X, Phase.coerce(ph)))
        if kind == "in":
            ins.append(f"i{len(ins)}")
            edges.append((ins[-1], f"c{j}"))
        elif kind == "out":
            outs.append(f"o{len(outs)}")
            edges.append((f"c{j}", outs[-1]))
    for j in range(3):
        nodes.append(Node(f"z{j}", Color.Z, Phase.coerce(side)))
        edges += [(f"c{j}", f"z{j}"), (f"z{j}", f"c{(j + 1) % 3}")]
    return Diagram(tuple(ins), tuple(outs), tuple(nodes), tuple(edges))


def flip(d: Diagram) -> Diagram:
    """Read a diagram upside down: inputs become outputs and vice versa."""
    return dg.canonical_names(Diagram(d.outputs, d.inputs, d.nodes, d.edges))


def _top_down() -> Dict[str, Diagram]:
    return {
        "mult": triangle([(PI, "in"), (PI, "in"), (ZERO, "out")]),
        "comult": triangle([(PI, "in"), (ZERO, "out"), (ZERO, "out")]),
        "unit": dg.point_diagram(Color.X, ZERO),
        "counit": dg.copoint_diagram(Color.X, PI),
    }


def presentation_diagrams(reading: str = DEFAULT_READING) -> Dict[str, Diagram]:
    if reading not in READINGS:
        raise ValueError(f"unknown reading {reading!r}; expected one of {READINGS}")
    td = _top_down()
    if reading == "top_down":
        return td
    bu = {"mult": flip(td["comult"]), "comult": flip(td["mult"]), "unit": flip(td["counit"]), "counit": flip(td["unit"])}
    if reading == "bottom_up":
        return bu
    return {"mult": td["mult"], "comult": td["comult"], "unit": bu["unit"], "counit": bu["counit"]}


def presentation_from_diagrams(ds: Dict[str, Diagram], name: str = "") -> FrobeniusPresentation:
    return FrobeniusPresentation(
        mult=evaluate(ds["mult"]),
        unit=evaluate(ds["unit"]),
        comult=evaluate(ds["comult"]),
        counit=evaluate(ds["counit"]),
        name=name,
    )


def build_w_algebra(reading: str = DEFAULT_READING) -> FrobeniusPresentation:
    return presentation_from_diagrams(presentation_diagrams(reading), name=f"W/{reading}")


def load_fixture_presentation(reading: str) -> FrobeniusPresentation:
    """Evaluate the diagrams shipped in fixtures/wfrob_<reading>.json."""
    text = resources.files("redgreen").joinpath("fixtures", f"wfrob_{reading}.json").read_text()
    obj = json.loads(text)
    return presentation_from_diagrams({k: dg.from_dict(v) for k, v in obj.items()}, name=f"W/{reading}")


def basis_presentation(color: Color) -> FrobeniusPresentation:
    """The copy/erase structure of the Z or X basis."""
    return FrobeniusPresentation(
        mult=dagger(copy(color)), unit=unit(color), comult=copy(color), counit=counit(color), name=color.value
    )


# axiom checks -----------------------------------------------------------------------


@dataclass(frozen=True)
class FrobeniusReport:
    associativity: bool
    commutativity: bool
    unit_law: bool
    coassociativity: bool
    cocommutativity: bool
    counit_law: bool
    frobenius_law: bool
    specialness: bool
    dagger_compatible: bool
    specialness_gap: float  # distance between the rays of mult . comult and the identity

    AXIOMS = (
        "associativity",
        "commutativity",
        "unit_law",
        "coassociativity",
        "cocommutativity",
        "counit_law",
        "frobenius_law",
    )

    @property
    def axioms_hold(self) -> bool:
        return all(getattr(self, a) for a in self.AXIOMS)

    def as_dict(self) -> Dict[str, object]:
        return dict(self.__dict__)


def _prop(f: QTensor, g: QTensor, tol: float) -> bool:
    return proportional_eq(f, g, tol) is not None


def verify_frobenius(p: FrobeniusPresentation, tol: float = DEFAULT_TOL) -> FrobeniusReport:
    """Each law is checked up to a nonzero scalar."""
    i1 = identity(1)
    m, u, d, e = p.mult, p.unit, p.comult, p.counit
    mm = lambda f, g: compose(m, tensor_product(f, g))  # noqa: E731
    unit_ok = all(
        _prop(lhs, i1, tol) for lhs in (mm(u, i1), mm(i1, u))
    )
    counit_ok = all(
        _prop(lhs, i1, tol)
        for lhs in (compose(tensor_product(e, i1), d), compose(tensor_product(i1, e), d))
    )
    dm = compose(d, m)
    frob = _prop(compose(tensor_product(i1, m), tensor_product(d, i1)), dm, tol) and _prop(
        compose(tensor_product(m, i1), tensor_product(i1, d)), dm, tol
    )
    loop = compose(m, d)
    return FrobeniusReport(
        associativity=_prop(compose(m, tensor_product(m, i1)), compose(m, tensor_product(i1, m)), tol),
        commutativity=_prop(compose(m, swap()), m, tol),
        unit_law=unit_ok,
        coassociativity=_prop(compose(tensor_product(d, i1), d), compose(tensor_product(i1, d), d), tol),
        cocommutativity=_prop(compose(swap(), d), d, tol),
        counit_law=counit_ok,
        frobenius_law=frob,
        specialness=_prop(loop, i1, tol),
        dagger_compatible=_prop(d, dagger(m), tol),
        specialness_gap=projective_distance(loop, i1),
    )


@dataclass(frozen=True)
class LoopValue:
    loop_map: QTensor
    classification: str  # "identity-like", "rank-one" or "other"
    rank: int


def loop_value(p: FrobeniusPresentation, tol: float = DEFAULT_TOL) -> LoopValue:
    """mult . comult, classified; rank-one also requires the point-with-loop times copoint-with-loop factorization."""
    loop = compose(p.mult, p.comult)
    rank = matrix_rank(loop, tol) if loop.norm() > 0 else 0
    if _prop(loop, identity(1), tol):
        return LoopValue(loop, "identity-like", rank)
    if rank == 1:
        point = compose(loop, p.unit)
        copoint = compose(p.counit, loop)
        if point.norm() > 0 and copoint.norm() > 0 and _prop(loop, compose(point, copoint), tol):
            return LoopValue(loop, "rank-one", rank)
    return LoopValue(loop, "other", rank)


# the pi loop and the orthogonality step ----------------------------------------------


def pi_loop_diagram(loop_color: Color, phase: PhaseLike = PI) -> Diagram:
    """A ``loop_color`` spider whose self-loop runs through a degree-2 spider of the other colour."""
    nodes = (Node("s", loop_color, ZERO), Node("g", loop_color.other, Phase.coerce(phase)))
    return Diagram((), (), nodes, (("s", "g"), ("g", "s")))


def pi_loop_scalar(loop_color: Color, phase: PhaseLike = PI) -> complex:
    return evaluate_scalar(pi_loop_diagram(loop_color, phase))


def orthogonality_composite() -> Diagram:
    """Two stacked W triangles, closed off by an X(pi) point, leaving one output.

    The lower triangle has X(pi) corners l0, l1 and a corner l2 carrying an X(pi)
    point; the upper one has an X(pi) corner u0 with the output and plain
    corners u1, u2, wired to l0 and l1.
    """
    nodes = [
        Node("l0", Color.X, PI),
        Node("l1", Color.X, PI),
        Node("l2", Color.X, ZERO),
        Node("p", Color.X, PI),
        Node("u0", Color.X, PI),
        Node("u1", Color.X, ZERO),
        Node("u2", Color.X, ZERO),
    ]
    edges = [("l2", "p"), ("u1", "l0"), ("u2", "l1"), ("u0", "o0")]
    for tri in ("l", "u"):
        for j in range(3):
            z = f"{tri}z{j}"
            nodes.append(Node(z, Color.Z, THIRD))
            edges += [(f"{tri}{j}", z), (z, f"{tri}{(j + 1) % 3}")]
    return Diagram((), ("o0",), tuple(nodes), tuple(edges))


def orthogonality_scalars() -> Tuple[complex, complex]:
    """Pairings of the composite with the X(pi) and the X(0) copoints."""
    d = orthogonality_composite()
    return (
        evaluate_scalar(dg.compose_diagrams(dg.copoint_diagram(Color.X, PI), d)),
        evaluate_scalar(dg.compose_diagrams(dg.copoint_diagram(Color.X, ZERO), d)),
    )


def verify_orthogonality(tol: float = DEFAULT_TOL) -> bool:
    """The composite is killed by the X(pi) copoint but not by the X(0) copoint."""
    with_pi, with_zero = orthogonality_scalars()
    scale = evaluate(orthogonality_composite()).norm()
    return abs(with_pi) <= tol * scale and abs(with_zero) > tol * scale


def fixture_payloads() -> Dict[str, str]:
    """File name -> JSON text for every diagram fixture this module ships."""
    out = {}
    for reading in READINGS:
        ds = presentation_diagrams(reading)
        obj = {k: dg.to_dict(ds[k]) for k in ("mult", "unit", "comult", "counit")}
        out[f"wfrob_{reading}.json"] = json.dumps(obj, indent=2) + "\n"
    out["orthogonality_composite.json"] = dg.dumps(orthogonality_composite())
    return out
