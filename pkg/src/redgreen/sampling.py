"""Seeded randomness for the property suites and fuzzers.

All streams come from numpy's Philox (a counter-based generator, 4x64 rounds)
keyed through a SeedSequence, so a seed plus any sub-keys determines every
sample on every platform.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from redgreen.diagram import Diagram, Node
from redgreen.phase import Color, Phase
from redgreen.qtensor import QTensor


def rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, keys)])))


def random_state(seed: int, n_qubits: int) -> QTensor:
    """Normalized state with i.i.d. complex Gaussian amplitudes."""
    if not 0 <= n_qubits <= 8:
        raise ValueError("n_qubits must be in 0..8")
    return gaussian_state(rng(seed), n_qubits)


def gaussian_state(g: np.random.Generator, n_qubits: int) -> QTensor:
    z = g.standard_normal(2**n_qubits) + 1j * g.standard_normal(2**n_qubits)
    return QTensor(0, n_qubits, z / np.linalg.norm(z))


def gaussian_tensor(g: np.random.Generator, n_in: int, n_out: int) -> QTensor:
    shape = (2**n_out, 2**n_in)
    return QTensor(n_in, n_out, g.standard_normal(shape) + 1j * g.standard_normal(shape))


def random_rational_phase(g: np.random.Generator, max_den: int = 12) -> Phase:
    q = int(g.integers(1, max_den + 1))
    return Phase(Fraction(int(g.integers(0, 2 * q)), q))


def random_invertible(g: np.random.Generator, max_cond: float = 1e3) -> np.ndarray:
    while True:
        m = g.standard_normal((2, 2)) + 1j * g.standard_normal((2, 2))
        if np.linalg.cond(m) <= max_cond:
            return m


def random_diagram(
    g: np.random.Generator,
    n_in: int,
    n_out: int,
    n_nodes: int = 4,
    n_edges: int = 5,
    max_den: int = 6,
) -> Diagram:
    """A random valid diagram; ports hang off random nodes (or form a wire when there are none)."""
    nodes = [
        Node(f"n{k}", Color.Z if g.random() < 0.5 else Color.X, random_rational_phase(g, max_den))
        for k in range(n_nodes)
    ]
    ins = [f"i{k}" for k in range(n_in)]
    outs = [f"o{k}" for k in range(n_out)]
    edges = []
    if n_nodes == 0:
        if n_in != n_out:
            raise ValueError("a node-free diagram must be a bundle of wires")
        return Diagram(ins, outs, (), tuple(zip(ins, outs)))
    for _ in range(n_edges):
        a, b = g.integers(0, n_nodes, size=2)
        edges.append((nodes[a].id, nodes[b].id))
    for p in ins + outs:
        edges.append((p, nodes[int(g.integers(0, n_nodes))].id))
    order = g.permutation(len(edges))
    return Diagram(ins, outs, tuple(nodes), tuple(edges[k] for k in order))


def pick(g: np.random.Generator, items: Sequence):
    return items[int(g.integers(0, len(items)))]
