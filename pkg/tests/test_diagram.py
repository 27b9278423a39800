from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from redgreen import diagram as dg
from redgreen.diagram import Diagram, Node
from redgreen.errors import DiagramError, ParseError
from redgreen.evaluator import evaluate
from redgreen.phase import PI, Color, Phase
from redgreen.qtensor import compose, tensor_product
from redgreen.sampling import random_diagram, rng

seeds = st.integers(0, 2**32 - 1)


def test_validate_reports_every_problem():
    d = Diagram(
        ("i0",),
        ("o0", "o0"),
        (Node("n", Color.Z), Node("n", Color.X)),
        (("i0", "n"), ("n", "ghost")),
    )
    problems = dg.validate(d)
    text = " ".join(problems)
    assert "duplicate node id" in text
    assert "duplicate port name" in text
    assert "unknown endpoint" in text
    assert "port degree" in text


def test_same_kind_port_edge_rejected():
    d = Diagram((), ("o0", "o1"), (), (("o0", "o1"),))
    with pytest.raises(DiagramError):
        dg.check(d)


def test_builders_are_valid():
    for d in (
        dg.empty(),
        dg.wire(),
        dg.ghz_diagram(Color.X),
        dg.w_family_diagram(0, Fraction(1, 3), 1),
        dg.square4_diagram(0, 1, Fraction(1, 2), 0),
    ):
        assert dg.validate(d) == []


def test_family_diagram_side_phases():
    d = dg.w_family_diagram(Fraction(1, 6), Fraction(1, 3), Fraction(1, 2))
    # the side opposite corner k carries the k-th phase
    assert d.node("z1").phase == Phase(Fraction(1, 6))
    assert set(d.neighbours("z1")) == {"c1", "c2"}
    assert d.node("z2").phase == Phase(Fraction(1, 3))
    assert set(d.neighbours("z2")) == {"c2", "c0"}
    assert d.node("z0").phase == Phase(Fraction(1, 2))


def test_square_output_order():
    d = dg.square4_diagram(0, 0, 0, 0)
    assert [d.port_neighbour(o) for o in d.outputs] == ["c0", "c1", "c3", "c2"]


@given(seeds, st.integers(0, 2), st.integers(0, 2))
def test_file_round_trip(seed, n_in, n_out):
    d = random_diagram(rng(seed), n_in, n_out)
    assert dg.loads(dg.dumps(d)) == d


def test_file_format_is_stable_text():
    text = dg.dumps(dg.w_family_diagram(Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)))
    assert '"phase": "1/3"' in text
    assert dg.dumps(dg.loads(text)) == text


@pytest.mark.parametrize("text", ["{", '{"edges": []}', '{"nodes": [{"id": "a", "color": "Q"}], "edges": []}', '{"nodes": [], "edges": [["a"]]}'])
def test_bad_diagram_files(text):
    with pytest.raises(ParseError):
        dg.loads(text)


@given(seeds)
def test_composition_is_semantic(seed):
    g = rng(seed)
    d1, d2 = random_diagram(g, 1, 2), random_diagram(g, 2, 1)
    assert evaluate(dg.compose_diagrams(d1, d2)).allclose(compose(evaluate(d1), evaluate(d2)), atol=1e-9)


@given(seeds)
def test_tensor_is_semantic(seed):
    g = rng(seed)
    d1, d2 = random_diagram(g, 1, 1, 3, 3), random_diagram(g, 0, 1, 2, 2)
    assert evaluate(dg.tensor_diagrams(d1, d2)).allclose(tensor_product(evaluate(d1), evaluate(d2)), atol=1e-9)


def test_compose_arity_mismatch():
    with pytest.raises(DiagramError):
        dg.compose_diagrams(dg.wire(), dg.ghz_diagram())


def test_plug_point_into_output():
    d = dg.ghz_diagram(Color.Z)
    plugged = dg.plug(d, "o1", dg.point_diagram(Color.X, PI))
    assert plugged.outputs == ("o0", "o2")
    assert dg.validate(plugged) == []


def test_plug_rejects_effect_into_input():
    d = dg.spider_diagram(Color.Z, 1, 1)
    with pytest.raises(DiagramError):
        dg.plug(d, "i0", dg.copoint_diagram(Color.X))
    with pytest.raises(DiagramError):
        dg.plug(d, "nope", dg.point_diagram(Color.X))


def test_canonical_names_and_isomorphism():
    d = dg.w_family_diagram(0, Fraction(1, 2), 1)
    c = dg.canonical_names(d)
    assert [n.id for n in c.nodes] == [f"n{k}" for k in range(len(d.nodes))]
    assert dg.isomorphic(d, dg.relabel(d, {"c0": "q", "z1": "r"}))
    assert not dg.isomorphic(d, dg.w_family_diagram(0, 0, 1))


def test_swap_colors_involutive():
    d = dg.w_family_diagram(0, Fraction(1, 2), 1)
    assert dg.swap_colors(dg.swap_colors(d)) == d
