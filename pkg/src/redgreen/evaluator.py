"""Contract a diagram to the linear map it denotes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from redgreen.diagram import Diagram, check
from redgreen.errors import DimensionError
from redgreen.generators import _spider_legs, spider_legs
from redgreen.phase import Phase
from redgreen.qtensor import QTensor

Labelled = Tuple[np.ndarray, List[str]]

_EYE = np.eye(2, dtype=complex)
_EYE.flags.writeable = False


def _trace_repeats(arr: np.ndarray, labels: List[str]) -> Labelled:
    """Contract every label that occurs twice on the same tensor."""
    while True:
        seen = {}
        pair = None
        for k, lab in enumerate(labels):
            if lab in seen:
                pair = (seen[lab], k)
                break
            seen[lab] = k
        if pair is None:
            return arr, labels
        i, j = pair
        arr = np.trace(arr, axis1=i, axis2=j)
        labels = [lab for k, lab in enumerate(labels) if k not in pair]


def _contract(a: Labelled, b: Labelled) -> Labelled:
    (ta, la), (tb, lb) = a, b
    shared = [lab for lab in la if lab in lb]
    ia = [la.index(s) for s in shared]
    ib = [lb.index(s) for s in shared]
    t = np.tensordot(ta, tb, axes=(ia, ib))
    labels = [x for x in la if x not in shared] + [x for x in lb if x not in shared]
    return t, labels


def _leg_labels(d: Diagram) -> Tuple[List[List[str]], List[List[str]]]:
    """Leg labels per node (in node order) and per bare wire. Open labels are port names."""
    labels = {n.id: [] for n in d.nodes}
    wires = []
    for k, (a, b) in enumerate(d.edges):
        a_port, b_port = d.is_port(a), d.is_port(b)
        if a_port and b_port:
            wires.append([a, b])
            continue
        if a_port or b_port:
            port, node = (a, b) if a_port else (b, a)
            labels[node].append(port)
            continue
        lab = f"#{k}"
        labels[a].append(lab)
        labels[b].append(lab)
    return [labels[n.id] for n in d.nodes], wires


def _network(d: Diagram) -> Tuple[List[str], List[Labelled]]:
    """One labelled tensor per node, then one identity per bare wire."""
    node_labels, wires = _leg_labels(d)
    tensors = [
        _trace_repeats(spider_legs(n.color, len(legs), n.phase), list(legs))
        for n, legs in zip(d.nodes, node_labels)
    ]
    return [n.id for n in d.nodes], tensors + [(_EYE, w) for w in wires]


@dataclass(frozen=True)
class _Plan:
    """Contraction schedule shared by every diagram of one shape (phases aside)."""

    degrees: Tuple[int, ...]
    traced: Tuple[Optional[List[str]], ...]  # leg labels of nodes with self-loops, else None
    n_wires: int
    # (k, j, perm moving k's contracted axes last, perm moving j's first (None when
    # already in place), rows, inner, cols, result rank)
    steps: Tuple[tuple, ...]
    perm: Tuple[int, ...]
    n_in: int
    n_out: int

    def run(self, d: Diagram) -> QTensor:
        pool = []
        for n, deg, legs in zip(d.nodes, self.degrees, self.traced):
            ph = n.phase if type(n.phase) is Phase else Phase.coerce(n.phase)
            t = _spider_legs(n.color, deg, ph)
            if legs is not None:
                t = _trace_repeats(t, list(legs))[0]
            pool.append(t)
        pool += [_EYE] * self.n_wires
        for k, j, pa, pb, rows, inner, cols, rank in self.steps:
            a = (pool[k] if pa is None else pool[k].transpose(pa)).reshape(rows, inner)
            b = (pool[j] if pb is None else pool[j].transpose(pb)).reshape(inner, cols)
            new = (a @ b).reshape((2,) * rank)
            pool = [t for i, t in enumerate(pool) if i != k and i != j]
            pool.append(new)
        arr = pool[0] if pool else np.array(1 + 0j)
        if self.perm:
            arr = np.transpose(arr, self.perm)
        return QTensor(self.n_in, self.n_out, arr.reshape(2**self.n_out, 2**self.n_in))


def _make_plan(d: Diagram) -> _Plan:
    """Greedy schedule: repeatedly merge the smallest tensor into its smallest neighbour."""
    node_labels, wires = _leg_labels(d)
    pool: List[List[str]] = []
    traced = []
    for legs in node_labels:
        after = _trace_repeats(np.zeros((1,) * len(legs)), list(legs))[1]
        traced.append(list(legs) if len(after) != len(legs) else None)
        pool.append(after)
    pool += [list(w) for w in wires]
    steps = []
    while len(pool) > 1:
        order = sorted(range(len(pool)), key=lambda k: (len(pool[k]), k))
        pick = None
        for k in order:
            lk = set(pool[k])
            nbrs = [j for j in range(len(pool)) if j != k and lk & set(pool[j])]
            if nbrs:
                pick = (k, min(nbrs, key=lambda j: (len(pool[j]), j)))
                break
        if pick is None:
            # disconnected components: outer product
            pick = (0, 1)
        k, j = pick
        la, lb = pool[k], pool[j]
        shared = [lab for lab in la if lab in lb]
        ia = [la.index(s) for s in shared]
        ib = [lb.index(s) for s in shared]
        free_a = [i for i in range(len(la)) if i not in ia]
        free_b = [i for i in range(len(lb)) if i not in ib]
        new = [la[i] for i in free_a] + [lb[i] for i in free_b]
        pa, pb = free_a + ia, ib + free_b
        steps.append(
            (
                k,
                j,
                None if pa == sorted(pa) else tuple(pa),
                None if pb == sorted(pb) else tuple(pb),
                2 ** len(free_a),
                2 ** len(shared),
                2 ** len(free_b),
                len(new),
            )
        )
        pool = [p for i, p in enumerate(pool) if i != k and i != j] + [new]
    labels = pool[0] if pool else []
    want = list(d.outputs) + list(d.inputs)
    if sorted(labels) != sorted(want):
        raise AssertionError(f"open legs {labels} do not match ports {want}")
    return _Plan(
        degrees=tuple(len(legs) for legs in node_labels),
        traced=tuple(traced),
        n_wires=len(wires),
        steps=tuple(steps),
        perm=tuple(labels.index(p) for p in want),
        n_in=len(d.inputs),
        n_out=len(d.outputs),
    )


_PLANS: Dict[tuple, _Plan] = {}
_MAX_PLANS = 4096


def _shape_key(d: Diagram) -> tuple:
    return (d.inputs, d.outputs, tuple((n.id, n.color) for n in d.nodes), d.edges)


def evaluate(d: Diagram, order: Optional[Sequence[str]] = None) -> QTensor:
    """Tensor semantics of ``d`` (outputs index rows, inputs index columns).

    By default nodes are eliminated greedily, smallest tensor first, each merged
    into its smallest neighbour; the schedule is cached per diagram shape so a
    phase sweep over one shape only pays for the contractions. ``order``
    instead absorbs the nodes one after another in the given sequence; the
    result does not depend on the order.
    """
    if order is not None:
        return _evaluate_in_order(d, order)
    key = _shape_key(d)
    plan = _PLANS.get(key)
    if plan is None:
        check(d)
        plan = _make_plan(d)
        if len(_PLANS) >= _MAX_PLANS:
            _PLANS.clear()
        _PLANS[key] = plan
    return plan.run(d)


def _evaluate_in_order(d: Diagram, order: Sequence[str]) -> QTensor:
    check(d)
    ids, pool = _network(d)
    if sorted(order) != sorted(ids):
        raise ValueError("order must be a permutation of the node ids")
    by_id = dict(zip(ids, pool))
    acc = (np.array(1 + 0j), [])
    for item in [by_id[i] for i in order] + pool[len(ids):]:
        acc = _trace_repeats(*_contract(acc, item))
    arr, labels = acc
    want = list(d.outputs) + list(d.inputs)
    if sorted(labels) != sorted(want):
        raise AssertionError(f"open legs {labels} do not match ports {want}")
    arr = np.transpose(arr, [labels.index(p) for p in want]) if want else arr
    return QTensor(len(d.inputs), len(d.outputs), arr.reshape(2 ** len(d.outputs), 2 ** len(d.inputs)))


def evaluate_scalar(d: Diagram) -> complex:
    if d.ports:
        raise DimensionError(f"diagram has {len(d.ports)} boundary ports; a scalar needs none")
    return evaluate(d).scalar()
