"""Site-directed rewrite rules, a numerical soundness checker and spider-fusion normalization.

Every rule application records the scalar ``lam`` with
``evaluate(before) == lam * evaluate(after)`` under the spider convention of
:mod:`redgreen.generators`, so rewriting never silently drops a scalar.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from redgreen.diagram import Diagram, Edge, Node, check
from redgreen.errors import MatchError, SoundnessError
from redgreen.evaluator import evaluate
from redgreen.phase import Color, Phase, PhaseLike, ZERO
from redgreen.qtensor import DEFAULT_TOL, QTensor, bipartition_rank, deviation, proportional_eq

SQRT2 = math.sqrt(2.0)


class RuleId(enum.Enum):
    SpiderFusion = "SpiderFusion"
    IdentityRemoval = "IdentityRemoval"
    SelfLoopRemoval = "SelfLoopRemoval"
    CopyC1 = "CopyC1"
    EraseC2 = "EraseC2"
    HopfH = "HopfH"
    BialgebraB1 = "BialgebraB1"
    BialgebraB2 = "BialgebraB2"
    BialgebraB3 = "BialgebraB3"


@dataclass(frozen=True)
class RuleApplication:
    rule: RuleId
    site: Tuple[str, ...]
    before: Diagram
    after: Diagram
    scalar: complex  # evaluate(before) == scalar * evaluate(after)


# small graph surgery helpers ------------------------------------------------


def _other_end(edge: Edge, x: str) -> str:
    return edge[1] if edge[0] == x else edge[0]


def _fresh(d: Diagram, taken: set, stem: str = "r") -> str:
    k = 0
    while f"{stem}{k}" in taken or d.has_node(f"{stem}{k}") or d.is_port(f"{stem}{k}"):
        k += 1
    taken.add(f"{stem}{k}")
    return f"{stem}{k}"


def _require(cond: bool, msg: str):
    if not cond:
        raise MatchError(msg)


def _spider(d: Diagram, node_id: str) -> Node:
    _require(d.has_node(node_id), f"no node {node_id!r}")
    return d.node(node_id)


def _basis_index(p: Node) -> Optional[int]:
    if p.phase.is_zero():
        return 0
    if p.phase.is_pi():
        return 1
    return None


def _replace_nodes(d: Diagram, drop: Sequence[str], add: Sequence[Node], edges: List[Edge]) -> Diagram:
    nodes = tuple(n for n in d.nodes if n.id not in drop) + tuple(add)
    return Diagram(d.inputs, d.outputs, nodes, tuple(edges))


def _explode(d: Diagram, victim: str, skip: Sequence[int], color: Color, phase: Phase, taken: set):
    """Give each remaining leg of ``victim`` its own new degree-1 spider."""
    new_nodes, edges = [], []
    for k, e in enumerate(d.edges):
        if k in skip:
            continue
        if victim in e:
            nid = _fresh(d, taken)
            new_nodes.append(Node(nid, color, phase))
            edges.append((nid, _other_end(e, victim)))
        else:
            edges.append(e)
    return new_nodes, edges


# the rules ----------------------------------------------------------------------


def _fusion(d: Diagram, site) -> Tuple[Diagram, complex]:
    u, v = site
    nu, nv = _spider(d, u), _spider(d, v)
    _require(u != v, "fusion needs two distinct spiders")
    _require(nu.color == nv.color, "fusion needs spiders of one colour")
    between = d.edges_between(u, v)
    _require(bool(between), f"{u} and {v} are not adjacent")
    edges = []
    for k, (a, b) in enumerate(d.edges):
        if k == between[0]:
            continue
        edges.append((u if a == v else a, u if b == v else b))
    merged = Node(u, nu.color, nu.phase + nv.phase)
    nodes = tuple(merged if n.id == u else n for n in d.nodes if n.id != v)
    return Diagram(d.inputs, d.outputs, nodes, tuple(edges)), 1.0


def _identity(d: Diagram, site) -> Tuple[Diagram, complex]:
    (u,) = site
    n = _spider(d, u)
    _require(n.phase.is_zero(), f"{u} has a nonzero phase")
    _require(d.degree(u) == 2 and d.self_loops(u) == 0, f"{u} is not a plain degree-2 spider")
    k1, k2 = d.incident(u)
    x, y = _other_end(d.edges[k1], u), _other_end(d.edges[k2], u)
    if d.is_port(x) and d.is_port(y):
        _require((x in d.inputs) != (y in d.inputs), "removal would join two ports of one kind")
    edges = [e for k, e in enumerate(d.edges) if k not in (k1, k2)]
    edges.insert(min(k1, len(edges)), (x, y))
    return _replace_nodes(d, [u], [], edges), 1.0


def _self_loop(d: Diagram, site) -> Tuple[Diagram, complex]:
    (u,) = site
    _spider(d, u)
    loops = [k for k, (a, b) in enumerate(d.edges) if a == b == u]
    _require(bool(loops), f"{u} has no self-loop")
    edges = [e for k, e in enumerate(d.edges) if k != loops[0]]
    return Diagram(d.inputs, d.outputs, d.nodes, tuple(edges)), 1.0


def _copy_point(d: Diagram, site, max_other: Optional[int]) -> Tuple[Diagram, complex, int]:
    p, s = site
    np_, ns = _spider(d, p), _spider(d, s)
    _require(np_.color != ns.color, "point and spider must have different colours")
    _require(d.degree(p) == 1, f"{p} is not a point")
    k = _basis_index(np_)
    _require(k is not None, f"{p} is not a basis element (phase must be 0 or pi)")
    links = d.edges_between(p, s)
    _require(len(links) == 1, f"{p} is not attached to {s}")
    _require(d.self_loops(s) == 0, f"{s} has a self-loop")
    n_other = d.degree(s) - 1
    if max_other is not None:
        _require(n_other == max_other, f"{s} must have exactly {max_other} other legs")
    taken: set = set()
    new_nodes, edges = _explode(d, s, links, np_.color, np_.phase, taken)
    after = _replace_nodes(d, [p, s], new_nodes, edges)
    lam = SQRT2 ** (1 - n_other) * (ns.phase.unit() if k == 1 else 1.0)
    return after, lam, n_other


def _copy(d, site):
    after, lam, n_other = _copy_point(d, site, None)
    _require(n_other >= 1, "copy needs at least one other leg; use EraseC2")
    return after, lam


def _erase(d, site):
    after, lam, _ = _copy_point(d, site, 0)
    return after, lam


def _hopf(d: Diagram, site) -> Tuple[Diagram, complex]:
    u, v = site
    nu, nv = _spider(d, u), _spider(d, v)
    _require(nu.color != nv.color, "Hopf law needs spiders of different colours")
    between = d.edges_between(u, v)
    _require(len(between) >= 2, f"{u} and {v} are not joined by a doubled edge")
    drop = set(between[:2])
    edges = [e for k, e in enumerate(d.edges) if k not in drop]
    return Diagram(d.inputs, d.outputs, d.nodes, tuple(edges)), 0.5


def _plain_degree3(d: Diagram, x: str):
    n = _spider(d, x)
    _require(n.phase.is_zero(), f"{x} must have phase 0")
    _require(d.degree(x) == 3 and d.self_loops(x) == 0, f"{x} must be a plain degree-3 spider")
    return n


def _bialgebra1(d: Diagram, site) -> Tuple[Diagram, complex]:
    g1, g2, r1, r2 = site
    ng = [_plain_degree3(d, x) for x in (g1, g2)]
    nr = [_plain_degree3(d, x) for x in (r1, r2)]
    _require(ng[0].color == ng[1].color, "g1, g2 must share a colour")
    _require(nr[0].color == nr[1].color == ng[0].color.other, "r1, r2 must have the other colour")
    _require(len({g1, g2, r1, r2}) == 4, "site nodes must be distinct")
    for g in (g1, g2):
        for r in (r1, r2):
            _require(len(d.edges_between(g, r)) == 1, f"{g} and {r} must share exactly one edge")
    _require(not d.edges_between(g1, g2) and not d.edges_between(r1, r2), "site is not bipartite")
    taken: set = set()
    top = _fresh(d, taken)  # takes over the outer legs of g1, g2
    bottom = _fresh(d, taken)  # takes over the outer legs of r1, r2
    inner = {k for g in (g1, g2) for r in (r1, r2) for k in d.edges_between(g, r)}
    edges = []
    for k, e in enumerate(d.edges):
        if k in inner:
            continue
        a, b = e
        m = {g1: top, g2: top, r1: bottom, r2: bottom}
        edges.append((m.get(a, a), m.get(b, b)))
    edges.append((top, bottom))
    new = [Node(top, ng[0].color.other, ZERO), Node(bottom, ng[0].color, ZERO)]
    return _replace_nodes(d, [g1, g2, r1, r2], new, edges), 1 / SQRT2


def _bialgebra2(d: Diagram, site) -> Tuple[Diagram, complex]:
    r, g = site
    nr = _plain_degree3(d, r)
    ng = _spider(d, g)
    _require(ng.color == nr.color.other, "counit must have the other colour")
    _require(ng.phase.is_zero() and d.degree(g) == 1, f"{g} must be a plain counit")
    links = d.edges_between(r, g)
    _require(len(links) == 1, f"{g} is not attached to {r}")
    taken: set = set()
    new_nodes, edges = _explode(d, r, links, ng.color, ZERO, taken)
    return _replace_nodes(d, [r, g], new_nodes, edges), 1 / SQRT2


def _bialgebra3(d: Diagram, site) -> Tuple[Diagram, complex]:
    p, g = site
    np_ = _spider(d, p)
    ng = _plain_degree3(d, g)
    _require(np_.color == ng.color.other, "unit must have the other colour")
    _require(np_.phase.is_zero() and d.degree(p) == 1, f"{p} must be a plain unit")
    links = d.edges_between(p, g)
    _require(len(links) == 1, f"{p} is not attached to {g}")
    taken: set = set()
    new_nodes, edges = _explode(d, g, links, np_.color, ZERO, taken)
    return _replace_nodes(d, [p, g], new_nodes, edges), 1 / SQRT2


_RULES = {
    RuleId.SpiderFusion: _fusion,
    RuleId.IdentityRemoval: _identity,
    RuleId.SelfLoopRemoval: _self_loop,
    RuleId.CopyC1: _copy,
    RuleId.EraseC2: _erase,
    RuleId.HopfH: _hopf,
    RuleId.BialgebraB1: _bialgebra1,
    RuleId.BialgebraB2: _bialgebra2,
    RuleId.BialgebraB3: _bialgebra3,
}

# Scalars of the phase-free laws, measured once and kept as regression constants.
LAW_SCALARS = {
    RuleId.HopfH: 0.5,
    RuleId.BialgebraB1: 1 / SQRT2,
    RuleId.BialgebraB2: 1 / SQRT2,
    RuleId.BialgebraB3: 1 / SQRT2,
}


def apply_rule(d: Diagram, rule: RuleId, site: Sequence[str]) -> RuleApplication:
    check(d)
    rule = RuleId(rule)
    after, lam = _RULES[rule](d, tuple(site))
    check(after)
    return RuleApplication(rule, tuple(site), d, after, complex(lam))


def check_soundness(app: RuleApplication, tol: float = DEFAULT_TOL) -> complex:
    """Numerical ``lam`` with evaluate(before) = lam * evaluate(after); raises if none exists."""
    lhs, rhs = evaluate(app.before), evaluate(app.after)
    lam = proportional_eq(lhs, rhs, tol)
    if lam is None:
        raise SoundnessError(
            f"{app.rule.value} at {app.site}: sides not proportional (deviation {deviation(lhs, rhs):.3e})"
        )
    return lam


# normalization -------------------------------------------------------------------


@dataclass
class Normalized:
    diagram: Diagram
    scalar: complex  # evaluate(original) == scalar * evaluate(diagram)
    steps: List[RuleApplication] = field(default_factory=list)


def _find_site(d: Diagram) -> Optional[Tuple[RuleId, Tuple[str, ...]]]:
    for n in d.nodes:
        if d.self_loops(n.id):
            return RuleId.SelfLoopRemoval, (n.id,)
    for a, b in d.edges:
        if a != b and d.has_node(a) and d.has_node(b) and d.node(a).color == d.node(b).color:
            return RuleId.SpiderFusion, (a, b)
    for n in d.nodes:
        if n.phase.is_zero() and d.degree(n.id) == 2:
            x, y = d.neighbours(n.id)
            if d.is_port(x) and d.is_port(y) and (x in d.inputs) == (y in d.inputs):
                continue
            return RuleId.IdentityRemoval, (n.id,)
    return None


def fuse_normalize(d: Diagram) -> Normalized:
    """Apply self-loop removal, spider fusion and identity removal until none applies.

    Each step lowers (node count, self-loop count) lexicographically, so this
    terminates.
    """
    check(d)
    result = Normalized(d, 1 + 0j)
    while True:
        found = _find_site(result.diagram)
        if found is None:
            return result
        app = apply_rule(result.diagram, *found)
        result.steps.append(app)
        result.scalar *= app.scalar
        result.diagram = app.after


# the doubled-edge endomorphism and disconnection --------------------------------


def doubled_edge_diagram(xi: PhaseLike, zeta: PhaseLike) -> Diagram:
    """X split, Z phases xi and zeta on the two branches, X merge."""
    nodes = (
        Node("split", Color.X),
        Node("a", Color.Z, Phase.coerce(xi)),
        Node("b", Color.Z, Phase.coerce(zeta)),
        Node("merge", Color.X),
    )
    edges = (("i0", "split"), ("split", "a"), ("split", "b"), ("a", "merge"), ("b", "merge"), ("merge", "o0"))
    return Diagram(("i0",), ("o0",), nodes, edges)


def doubled_edge_endomorphism(xi: PhaseLike, zeta: PhaseLike) -> QTensor:
    """Equals (1/2) diag(1 + e^{i(xi+zeta)}, e^{i xi} + e^{i zeta})."""
    return evaluate(doubled_edge_diagram(xi, zeta))


def is_disconnected(f: QTensor, tol: float = DEFAULT_TOL, side: Optional[Sequence[int]] = None) -> bool:
    """Rank at most one across a bipartition of legs (default: outputs | inputs).

    A tensor with norm below ``tol`` counts as the zero map (rank 0); the rank
    test itself is relative to the largest singular value and would read
    round-off as full rank.
    """
    if f.norm() <= tol:
        return True
    if side is None:
        side = range(f.n_out)
    return bipartition_rank(f, side, tol) <= 1
