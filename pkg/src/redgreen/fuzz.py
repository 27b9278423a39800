"""Random rule instances and the soundness fuzzer behind ``verify-rules``.

An instance is a rule's left-hand side with random admissible phases, whose
open legs run either straight to a boundary port or through a random
degree-2 spider first. Degree-2 spiders are invertible, so the surrounding
context never hides a wrong rule behind a zero tensor.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from redgreen.diagram import Diagram, Node
from redgreen.errors import SoundnessError
from redgreen.evaluator import evaluate
from redgreen.phase import Color, Phase, PI, ZERO
from redgreen.qtensor import deviation
from redgreen.rewrite import RuleId, apply_rule, check_soundness
from redgreen.sampling import random_rational_phase, rng

RULE_ORDER = list(RuleId)


class _Builder:
    def __init__(self, g: np.random.Generator):
        self.g = g
        self.nodes: List[Node] = []
        self.edges: List[Tuple[str, str]] = []
        self.inputs: List[str] = []
        self.outputs: List[str] = []

    def node(self, color: Color, phase: Phase = ZERO) -> str:
        nid = f"n{len(self.nodes)}"
        self.nodes.append(Node(nid, color, phase))
        return nid

    def edge(self, a: str, b: str):
        self.edges.append((a, b))

    def color(self) -> Color:
        return Color.Z if self.g.random() < 0.5 else Color.X

    def phase(self) -> Phase:
        return random_rational_phase(self.g)

    def stub(self, owner: str, is_input: Optional[bool] = None):
        """Route one open leg of ``owner`` to a fresh port, maybe through a context spider."""
        end = owner
        if self.g.random() < 0.5:
            mid = self.node(self.color(), self.phase())
            self.edge(end, mid)
            end = mid
        if is_input is None:
            is_input = self.g.random() < 0.5
        if is_input:
            port = f"i{len(self.inputs)}"
            self.inputs.append(port)
        else:
            port = f"o{len(self.outputs)}"
            self.outputs.append(port)
        self.edge(end, port)

    def stubs(self, owner: str, k: int):
        for _ in range(k):
            self.stub(owner)

    def diagram(self) -> Diagram:
        perm = self.g.permutation(len(self.edges))
        return Diagram(self.inputs, self.outputs, self.nodes, [self.edges[k] for k in perm])


def random_instance(rule: RuleId, g: np.random.Generator) -> Tuple[Diagram, Tuple[str, ...]]:
    b = _Builder(g)
    c = b.color()
    if rule is RuleId.SpiderFusion:
        u, v = b.node(c, b.phase()), b.node(c, b.phase())
        for _ in range(int(g.integers(1, 3))):
            b.edge(u, v)
        if g.random() < 0.25:
            b.edge(u, u)
        b.stubs(u, int(g.integers(1, 3)))
        b.stubs(v, int(g.integers(0, 3)))
        site = (u, v)
    elif rule is RuleId.IdentityRemoval:
        u = b.node(c, ZERO)
        # one input and one output, so removal never joins two ports of one kind
        b.stub(u, True)
        b.stub(u, False)
        site = (u,)
    elif rule is RuleId.SelfLoopRemoval:
        u = b.node(c, b.phase())
        for _ in range(int(g.integers(1, 3))):
            b.edge(u, u)
        b.stubs(u, int(g.integers(1, 4)))
        site = (u,)
    elif rule in (RuleId.CopyC1, RuleId.EraseC2):
        p = b.node(c.other, PI if g.random() < 0.5 else ZERO)
        s = b.node(c, b.phase())
        b.edge(p, s)
        if rule is RuleId.CopyC1:
            b.stubs(s, int(g.integers(1, 4)))
        else:
            # keep something else in the picture
            w = b.node(b.color(), b.phase())
            b.stubs(w, int(g.integers(1, 3)))
        site = (p, s)
    elif rule is RuleId.HopfH:
        u, v = b.node(c, b.phase()), b.node(c.other, b.phase())
        b.edge(u, v)
        b.edge(u, v)
        b.stubs(u, int(g.integers(1, 3)))
        b.stubs(v, int(g.integers(1, 3)))
        site = (u, v)
    elif rule is RuleId.BialgebraB1:
        g1, g2 = b.node(c), b.node(c)
        r1, r2 = b.node(c.other), b.node(c.other)
        for x in (g1, g2):
            for y in (r1, r2):
                b.edge(x, y)
        for x in (g1, g2, r1, r2):
            b.stub(x)
        site = (g1, g2, r1, r2)
    elif rule is RuleId.BialgebraB2:
        r, e = b.node(c), b.node(c.other)
        b.edge(r, e)
        b.stubs(r, 2)
        site = (r, e)
    elif rule is RuleId.BialgebraB3:
        p, s = b.node(c.other), b.node(c)
        b.edge(p, s)
        b.stubs(s, 2)
        site = (p, s)
    else:  # pragma: no cover
        raise ValueError(rule)
    return b.diagram(), site


@dataclass
class RuleReport:
    rule: RuleId
    instances: int
    passed: int
    max_deviation: float
    max_scalar_error: float  # |numeric lam - recorded lam| / |recorded lam|
    first_failure: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.passed == self.instances


def _run_instance(args) -> Tuple[float, float, Optional[str]]:
    seed, r_index, i, tol = args
    rule = RULE_ORDER[r_index]
    d, site = random_instance(rule, rng(seed, r_index, i))
    app = apply_rule(d, rule, site)
    dev = deviation(evaluate(app.before), evaluate(app.after))
    try:
        lam = check_soundness(app, tol)
    except SoundnessError as exc:
        return dev, float("inf"), str(exc)
    err = abs(lam - app.scalar) / abs(app.scalar)
    if err > tol:
        return dev, err, f"{rule.value} instance {i}: scalar {lam} differs from recorded {app.scalar}"
    return dev, err, None


def verify_rules(
    seed: int = 0,
    instances: int = 100,
    tol: float = 1e-9,
    rules: Optional[List[RuleId]] = None,
    workers: int = 1,
) -> List[RuleReport]:
    """Fuzz every rule; results are keyed by (rule, instance index) so they do not depend on ``workers``."""
    rules = rules or RULE_ORDER
    jobs = [(seed, RULE_ORDER.index(r), i, tol) for r in rules for i in range(instances)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_instance, jobs, chunksize=16))
    else:
        results = [_run_instance(j) for j in jobs]
    reports = []
    for k, r in enumerate(rules):
        chunk = results[k * instances:(k + 1) * instances]
        fails = [msg for _, _, msg in chunk if msg]
        reports.append(
            RuleReport(
                rule=r,
                instances=instances,
                passed=instances - len(fails),
                max_deviation=max((dev for dev, _, _ in chunk), default=0.0),
                max_scalar_error=max((err for _, err, _ in chunk), default=0.0),
                first_failure=fails[0] if fails else None,
            )
        )
    return reports
