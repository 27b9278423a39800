from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from redgreen import diagram as dg
from redgreen.diagram import Diagram, Node
from redgreen.errors import MatchError, SoundnessError
from redgreen.evaluator import evaluate
from redgreen.fuzz import random_instance
from redgreen.generators import lambda_map, point_mult
from redgreen.phase import PI, ZERO, Color, Phase
from redgreen.qtensor import QTensor, proportional_eq
from redgreen.rewrite import (
    LAW_SCALARS,
    RuleApplication,
    RuleId,
    apply_rule,
    check_soundness,
    doubled_edge_diagram,
    doubled_edge_endomorphism,
    fuse_normalize,
    is_disconnected,
)
from redgreen.sampling import random_diagram, rng

seeds = st.integers(0, 2**32 - 1)
phases = st.builds(lambda p: Phase(Fraction(p, 12)), st.integers(0, 23))


def _exact(app: RuleApplication):
    lhs, rhs = evaluate(app.before), evaluate(app.after)
    assert lhs.allclose(app.scalar * rhs, atol=1e-12)


def test_fusion_adds_phases():
    d = Diagram(
        ("i0",), ("o0",),
        (Node("a", Color.Z, Phase(Fraction(1, 3))), Node("b", Color.Z, Phase(Fraction(1, 2)))),
        (("i0", "a"), ("a", "b"), ("b", "o0")),
    )
    app = apply_rule(d, RuleId.SpiderFusion, ("a", "b"))
    assert [n.phase for n in app.after.nodes] == [Phase(Fraction(5, 6))]
    _exact(app)


def test_fusion_keeps_parallel_edges_as_loops():
    d = Diagram(
        (), ("o0",), (Node("a", Color.X), Node("b", Color.X, PI)), (("a", "b"), ("a", "b"), ("b", "o0"))
    )
    app = apply_rule(d, RuleId.SpiderFusion, ("a", "b"))
    assert app.after.self_loops("a") == 1
    _exact(app)


@pytest.mark.parametrize(
    "site,rule",
    [(("a", "c"), RuleId.SpiderFusion), (("a", "a"), RuleId.SpiderFusion), (("a",), RuleId.SelfLoopRemoval), (("c",), RuleId.IdentityRemoval)],
)
def test_non_matches_raise(site, rule):
    d = Diagram(
        (), ("o0", "o1"),
        (Node("a", Color.Z), Node("c", Color.X, PI)),
        (("a", "c"), ("a", "o0"), ("c", "o1")),
    )
    with pytest.raises(MatchError):
        apply_rule(d, rule, site)


def test_copy_scalar():
    for k, ph in ((0, ZERO), (1, PI)):
        d = Diagram(
            (), ("o0", "o1", "o2"),
            (Node("p", Color.X, ph), Node("s", Color.Z, Phase(Fraction(1, 4)))),
            (("p", "s"), ("s", "o0"), ("s", "o1"), ("s", "o2")),
        )
        app = apply_rule(d, RuleId.CopyC1, ("p", "s"))
        expected = np.sqrt(2) ** -2 * (np.exp(1j * np.pi / 4) if k else 1)
        assert abs(app.scalar - expected) < 1e-15
        _exact(app)


def test_copy_refuses_non_basis_point():
    d = Diagram((), ("o0",), (Node("p", Color.X, Phase(Fraction(1, 2))), Node("s", Color.Z)), (("p", "s"), ("s", "o0")))
    with pytest.raises(MatchError):
        apply_rule(d, RuleId.CopyC1, ("p", "s"))


def test_law_scalars_are_exact():
    for rule, lam in LAW_SCALARS.items():
        d, site = random_instance(rule, rng(7, 1))
        app = apply_rule(d, rule, site)
        assert app.scalar == pytest.approx(lam, abs=1e-15)
        _exact(app)


def test_check_soundness_detects_a_wrong_rewrite():
    before = dg.spider_diagram(Color.Z, 0, 1, ZERO)
    after = dg.spider_diagram(Color.X, 0, 1, ZERO)
    with pytest.raises(SoundnessError):
        check_soundness(RuleApplication(RuleId.SpiderFusion, (), before, after, 1.0))


@given(seeds, st.integers(0, 2), st.integers(0, 2))
def test_normalization_preserves_semantics(seed, n_in, n_out):
    d = random_diagram(rng(seed), n_in, n_out, 5, 7)
    res = fuse_normalize(d)
    lhs, rhs = evaluate(d), evaluate(res.diagram)
    assert lhs.allclose(res.scalar * rhs, atol=1e-9 * max(1.0, lhs.norm()))


@given(seeds)
def test_normal_form_is_stuck(seed):
    res = fuse_normalize(random_diagram(rng(seed), 1, 2, 5, 7))
    d = res.diagram
    for a, b in d.edges:
        if a != b and d.has_node(a) and d.has_node(b):
            assert d.node(a).color != d.node(b).color
    assert all(d.self_loops(n.id) == 0 for n in d.nodes)
    assert fuse_normalize(d).steps == []


def test_ghz_pair_normalizes_to_one_spider():
    # two GHZ-style spiders joined by a wire fuse into one
    d = dg.compose_diagrams(dg.spider_diagram(Color.Z, 1, 2), dg.spider_diagram(Color.Z, 0, 1))
    res = fuse_normalize(d)
    assert len(res.diagram.nodes) == 1
    assert res.scalar == 1


@given(phases, phases)
def test_doubled_edge_endomorphism_closed_form(xi, zeta):
    e = doubled_edge_endomorphism(xi, zeta)
    assert e.allclose(0.5 * lambda_map(Color.Z, point_mult(xi, zeta)), atol=1e-12)
    expected = 0.5 * np.diag([1 + (xi + zeta).unit(), xi.unit() + zeta.unit()])
    assert np.allclose(e.matrix, expected, atol=1e-12)


def test_doubled_edge_diagram_shape():
    d = doubled_edge_diagram(ZERO, PI)
    assert d.arity == (1, 1)
    assert len(d.edges_between("split", "a")) == 1


def test_is_disconnected():
    assert is_disconnected(QTensor(1, 1, [[1, 0], [0, 0]]))
    assert not is_disconnected(QTensor(1, 1, np.eye(2)))
    ghz = evaluate(dg.ghz_diagram())
    assert not is_disconnected(ghz, side=[0])
    assert proportional_eq(ghz, ghz) == 1


def test_vanishing_endomorphism_counts_as_disconnected():
    e = doubled_edge_endomorphism(ZERO, PI)
    assert e.norm() < 1e-15
    assert is_disconnected(e)
