"""Open graphs of coloured, phased spiders with ordered boundary ports.

Phases drawn on wires are explicit degree-2 spiders. Edges are unordered
endpoint pairs; an endpoint is a node id or a port name. Multiple edges between
the same pair and node self-loops are allowed.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Sequence, Tuple

from redgreen.errors import DiagramError, ParseError
from redgreen.phase import Color, Phase, PhaseLike, ZERO

Edge = Tuple[str, str]


@dataclass(frozen=True)
class Node:
    id: str
    color: Color
    phase: Phase = ZERO


@dataclass(frozen=True)
class Diagram:
    inputs: Tuple[str, ...] = ()
    outputs: Tuple[str, ...] = ()
    nodes: Tuple[Node, ...] = ()
    edges: Tuple[Edge, ...] = ()
    _index: Dict[str, Node] = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "_index", {n.id: n for n in self.nodes})

    # queries -------------------------------------------------------------

    @property
    def ports(self) -> Tuple[str, ...]:
        return self.inputs + self.outputs

    def node(self, node_id: str) -> Node:
        try:
            return self._index[node_id]
        except KeyError:
            raise DiagramError(f"no node {node_id!r}") from None

    def has_node(self, node_id: str) -> bool:
        return node_id in self._index

    def is_port(self, name: str) -> bool:
        return name in self.inputs or name in self.outputs

    def degree(self, endpoint: str) -> int:
        return sum((a == endpoint) + (b == endpoint) for a, b in self.edges)

    def incident(self, endpoint: str) -> List[int]:
        """Indices of edges touching ``endpoint`` (self-loops listed once)."""
        return [k for k, (a, b) in enumerate(self.edges) if endpoint in (a, b)]

    def neighbours(self, endpoint: str) -> List[str]:
        """Opposite endpoints, one per leg (a self-loop contributes the node twice)."""
        out = []
        for a, b in self.edges:
            if a == endpoint:
                out.append(b)
            if b == endpoint:
                out.append(a)
        return out

    def port_neighbour(self, port: str) -> str:
        nb = self.neighbours(port)
        if len(nb) != 1:
            raise DiagramError(f"port {port!r} has degree {len(nb)}")
        return nb[0]

    def self_loops(self, node_id: str) -> int:
        return sum(a == b == node_id for a, b in self.edges)

    def edges_between(self, u: str, v: str) -> List[int]:
        return [k for k, (a, b) in enumerate(self.edges) if {a, b} == {u, v} and a != b]

    @property
    def arity(self) -> Tuple[int, int]:
        return len(self.inputs), len(self.outputs)

    # functional updates -----------------------------------------------

    def with_nodes(self, nodes: Iterable[Node]) -> "Diagram":
        return replace(self, nodes=tuple(nodes))

    def fresh_id(self, stem: str = "n") -> str:
        used = set(self._index) | set(self.ports)
        k = len(self.nodes)
        while f"{stem}{k}" in used:
            k += 1
        return f"{stem}{k}"

    def dumps(self) -> str:
        return dumps(self)


# validation ------------------------------------------------------------


def validate(d: Diagram) -> List[str]:
    """All invariant violations of ``d``; empty iff ``d`` is well formed."""
    problems = []
    ids = [n.id for n in d.nodes]
    for name, count in Counter(ids).items():
        if count > 1:
            problems.append(f"duplicate node id {name!r}")
    for name, count in Counter(d.ports).items():
        if count > 1:
            problems.append(f"duplicate port name {name!r}")
    for name in set(ids) & set(d.ports):
        problems.append(f"name {name!r} used for both a node and a port")
    known = set(ids) | set(d.ports)
    for a, b in d.edges:
        for end in (a, b):
            if end not in known:
                problems.append(f"edge ({a!r}, {b!r}) references unknown endpoint {end!r}")
        if d.is_port(a) and d.is_port(b):
            if not ((a in d.inputs) != (b in d.inputs)):
                problems.append(f"edge ({a!r}, {b!r}) joins two ports of the same kind")
    for p in d.ports:
        deg = d.degree(p)
        if deg != 1:
            problems.append(f"port {p!r}: port degree {deg} != 1")
    return problems


def check(d: Diagram) -> Diagram:
    problems = validate(d)
    if problems:
        raise DiagramError("invalid diagram: " + "; ".join(problems), problems)
    return d


# builders --------------------------------------------------------------


def empty() -> Diagram:
    return Diagram()


def wire() -> Diagram:
    return Diagram(("i0",), ("o0",), (), (("i0", "o0"),))


def spider_diagram(color: Color, n_in: int, n_out: int, phase: PhaseLike = ZERO) -> Diagram:
    ins = tuple(f"i{k}" for k in range(n_in))
    outs = tuple(f"o{k}" for k in range(n_out))
    node = Node("n0", color, Phase.coerce(phase))
    return Diagram(ins, outs, (node,), tuple((p, "n0") for p in ins + outs))


def point_diagram(color: Color, phase: PhaseLike = ZERO) -> Diagram:
    return spider_diagram(color, 0, 1, phase)


def copoint_diagram(color: Color, phase: PhaseLike = ZERO) -> Diagram:
    return spider_diagram(color, 1, 0, phase)


def ghz_diagram(color: Color = Color.Z) -> Diagram:
    return spider_diagram(color, 0, 3)


def _cycle_with_phases(phases: Sequence[Phase], corner_phases: Sequence[Phase] = None) -> Diagram:
    """X corners c0..c{k-1}, each with one output; edge (c_j, c_{j+1}) carries phases[j]."""
    k = len(phases)
    corner_phases = corner_phases or [ZERO] * k
    nodes, edges = [], []
    outputs = tuple(f"o{j}" for j in range(k))
    for j in range(k):
        nodes.append(Node(f"c{j}", Color.X, corner_phases[j]))
        edges.append((f"c{j}", outputs[j]))
    for j in range(k):
        z = f"z{j}"
        nodes.append(Node(z, Color.Z, Phase.coerce(phases[j])))
        edges.append((f"c{j}", z))
        edges.append((z, f"c{(j + 1) % k}"))
    return Diagram((), outputs, tuple(nodes), tuple(edges))


def w_family_diagram(alpha: PhaseLike, beta: PhaseLike, gamma: PhaseLike) -> Diagram:
    """Triangle of X spiders with Z phases on its sides.

    The side opposite corner k carries the k-th phase, so the |000> amplitude
    is proportional to 1 + e^{i(alpha+beta+gamma)} and |011> to
    e^{i alpha} + e^{i(beta+gamma)}.
    """
    a, b, g = (Phase.coerce(p) for p in (alpha, beta, gamma))
    # sides in cycle order: (c0,c1) is opposite c2, (c1,c2) opposite c0, (c2,c0) opposite c1
    return _cycle_with_phases([g, a, b])


def square4_diagram(alpha: PhaseLike, beta: PhaseLike, gamma: PhaseLike, delta: PhaseLike) -> Diagram:
    """Four X corners in a square; outputs ordered top-left, top-right, bottom-left, bottom-right.

    Top side carries delta, right side gamma, bottom side beta, left side alpha.
    """
    a, b, g, d = (Phase.coerce(p) for p in (alpha, beta, gamma, delta))
    # cycle order TL -> TR -> BR -> BL; relabel outputs afterwards
    cyc = _cycle_with_phases([d, g, b, a])
    tl, tr, br, bl = cyc.outputs
    return replace(cyc, outputs=(tl, tr, bl, br))


# composition -----------------------------------------------------------


def relabel(d: Diagram, mapping: Dict[str, str]) -> Diagram:
    m = lambda x: mapping.get(x, x)  # noqa: E731
    return Diagram(
        tuple(m(p) for p in d.inputs),
        tuple(m(p) for p in d.outputs),
        tuple(replace(n, id=m(n.id)) for n in d.nodes),
        tuple((m(a), m(b)) for a, b in d.edges),
    )


def canonical_names(d: Diagram) -> Diagram:
    """Rename nodes to n0.., inputs to i0.., outputs to o0.. in their current order."""
    mapping = {n.id: f"n{k}" for k, n in enumerate(d.nodes)}
    mapping.update({p: f"i{k}" for k, p in enumerate(d.inputs)})
    mapping.update({p: f"o{k}" for k, p in enumerate(d.outputs)})
    tmp = relabel(d, {k: f"\0{v}" for k, v in mapping.items()})
    return relabel(tmp, {f"\0{v}": v for v in mapping.values()})


def _disjoint(d1: Diagram, d2: Diagram) -> Tuple[Diagram, Diagram]:
    a = relabel(d1, {x: f"a.{x}" for x in [n.id for n in d1.nodes] + list(d1.ports)})
    b = relabel(d2, {x: f"b.{x}" for x in [n.id for n in d2.nodes] + list(d2.ports)})
    return a, b


def _glue(edges: List[Edge], p: str, q: str) -> List[Edge]:
    """Remove the edges at ports p and q and join their far endpoints."""
    (kp,) = [k for k, e in enumerate(edges) if p in e]
    x = edges[kp][1] if edges[kp][0] == p else edges[kp][0]
    rest = [e for k, e in enumerate(edges) if k != kp]
    (kq,) = [k for k, e in enumerate(rest) if q in e]
    y = rest[kq][1] if rest[kq][0] == q else rest[kq][0]
    rest = [e for k, e in enumerate(rest) if k != kq]
    return rest + [(x, y)]


def compose_diagrams(d1: Diagram, d2: Diagram) -> Diagram:
    """d1 after d2: outputs of d2 are wired to inputs of d1 in order. Names are renumbered."""
    if len(d2.outputs) != len(d1.inputs):
        raise DiagramError(f"cannot compose: {len(d2.outputs)} outputs into {len(d1.inputs)} inputs")
    check(d1)
    check(d2)
    a, b = _disjoint(d1, d2)
    edges = list(b.edges) + list(a.edges)
    for p, q in zip(b.outputs, a.inputs):
        edges = _glue(edges, p, q)
    out = Diagram(b.inputs, a.outputs, b.nodes + a.nodes, tuple(edges))
    return canonical_names(out)


def tensor_diagrams(d1: Diagram, d2: Diagram) -> Diagram:
    a, b = _disjoint(d1, d2)
    out = Diagram(a.inputs + b.inputs, a.outputs + b.outputs, a.nodes + b.nodes, a.edges + b.edges)
    return canonical_names(out)


def plug(d: Diagram, port: str, psi: Diagram) -> Diagram:
    """Attach the one-port diagram ``psi`` at ``port`` of ``d``.

    An output port may take a state or an effect (roles are exchanged through
    the compact structure, so plugging a point into an output pairs it with the
    transposed point); an input port needs a state. Remaining ports of ``d``
    keep their names and order; nodes of ``psi`` are renamed to avoid clashes.
    """
    if not d.is_port(port):
        raise DiagramError(f"port {port!r} not found")
    if len(psi.ports) != 1:
        raise DiagramError(f"plugged diagram must have exactly one port, has {len(psi.ports)}")
    if port in d.inputs and psi.inputs:
        raise DiagramError(f"polarity mismatch: cannot plug an effect into input {port!r}")
    used = {n.id for n in d.nodes} | set(d.ports)
    mapping, k = {}, 0
    for n in psi.nodes:
        while f"p{k}" in used:
            k += 1
        mapping[n.id] = f"p{k}"
        used.add(f"p{k}")
    (pp,) = psi.ports
    mapping[pp] = "\0plug"
    s = relabel(psi, mapping)
    edges = _glue(list(d.edges) + list(s.edges), port, "\0plug")
    return Diagram(
        tuple(p for p in d.inputs if p != port),
        tuple(p for p in d.outputs if p != port),
        d.nodes + s.nodes,
        tuple(edges),
    )


def swap_colors(d: Diagram) -> Diagram:
    return d.with_nodes(replace(n, color=n.color.other) for n in d.nodes)


# file format -------------------------------------------------------------


def to_dict(d: Diagram) -> dict:
    return {
        "inputs": list(d.inputs),
        "outputs": list(d.outputs),
        "nodes": [{"id": n.id, "color": n.color.value, "phase": str(n.phase)} for n in d.nodes],
        "edges": [[a, b] for a, b in d.edges],
    }


def dumps(d: Diagram) -> str:
    return json.dumps(to_dict(d), indent=2) + "\n"


def from_dict(obj: dict) -> Diagram:
    try:
        nodes = tuple(
            Node(str(n["id"]), Color.parse(n["color"]), Phase.parse(str(n.get("phase", "0"))))
            for n in obj["nodes"]
        )
        edges = []
        for e in obj["edges"]:
            if len(e) != 2:
                raise ParseError(f"edge {e!r} must have two endpoints")
            edges.append((str(e[0]), str(e[1])))
        return Diagram(
            tuple(str(p) for p in obj.get("inputs", [])),
            tuple(str(p) for p in obj.get("outputs", [])),
            nodes,
            tuple(edges),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed diagram document: {exc!r}") from None


def loads(text: str) -> Diagram:
    try:
        return from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from None


def isomorphic(d1: Diagram, d2: Diagram) -> bool:
    """Same ports in order, same nodes and edges up to renaming of node ids.

    Brute force over colour/phase-preserving bijections; meant for small diagrams.
    """
    from itertools import permutations

    if d1.inputs != d2.inputs or d1.outputs != d2.outputs or len(d1.nodes) != len(d2.nodes):
        return False
    if Counter((n.color, n.phase) for n in d1.nodes) != Counter((n.color, n.phase) for n in d2.nodes):
        return False
    target = Counter(frozenset(e) if e[0] != e[1] else (e[0],) for e in d2.edges)
    ids2 = [n.id for n in d2.nodes]
    for perm in permutations(ids2):
        mapping = dict(zip([n.id for n in d1.nodes], perm))
        if any((d1.node(a).color, d1.node(a).phase) != (d2.node(b).color, d2.node(b).phase) for a, b in mapping.items()):
            continue
        m = lambda x: mapping.get(x, x)  # noqa: E731
        got = Counter(frozenset((m(a), m(b))) if a != b else (m(a),) for a, b in d1.edges)
        if got == target:
            return True
    return False
