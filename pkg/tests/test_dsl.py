import pytest
from hypothesis import given, settings, strategies as st

from qpi1 import ParseError, export_dot, load_fixture, parse, serialize
from qpi1.catalog import FIXTURES, load_json_fixture
from qpi1.covering import QuiverMorphism
from qpi1.dot import cover_fibers
from qpi1.dsl import tokenize
from qpi1.quiver import Arrow, Quiver
from qpi1.relations import BoundQuiver

HEADER = "quiver q {\n  vertices: a b c\n  arrow x: a -> b\n  arrow y: b -> c\n"


def first_error(text):
    with pytest.raises(ParseError) as info:
        parse(text, "t.qv")
    return info.value.diagnostics[0]


def test_f19_source():
    B = load_fixture("f19")
    assert (len(B.quiver.vertices), len(B.quiver.arrows), len(B.generators)) == (5, 6, 2)


def test_unknown_vertex_has_span():
    d = first_error("quiver q {\n  vertices: a b\n  arrow x: a -> q\n}\n")
    assert "unknown vertex 'q'" in d.message
    assert (d.span.file, d.span.line, d.span.column) == ("t.qv", 3, 17)
    assert d.span.end_column == 18
    assert d.hint


def test_length_one_relation_is_not_admissible():
    d = first_error("quiver q {\n  vertices: a b\n  arrow x: a -> b\n  arrow y: a -> b\n"
                    "  relation x - y\n}\n")
    assert "length 1" in d.message
    assert d.span.line == 5


def test_duplicate_label():
    d = first_error(HEADER + "  arrow x: a -> c\n}\n")
    assert "duplicate" in d.message and d.span.line == 5
    assert "3:" in d.hint


def test_non_parallel_terms():
    d = first_error("quiver q {\n  vertices: a b c d\n  arrow x: a -> b\n  arrow y: b -> c\n"
                    "  arrow z: b -> d\n  arrow w: a -> b\n  relation x.y - w.z\n}\n")
    assert d.span.line == 7


def test_syntax_error():
    d = first_error("quiver q {\n  vertices a b\n}\n")
    assert d.span.line == 2 and "expected ':'" in d.message


def test_unknown_arrow_in_relation():
    d = first_error(HEADER + "  relation x.z - x.y\n}\n")
    assert "z" in d.message and d.span.line == 5


def test_rational_coefficients_and_comments():
    B = parse("# comment\nquiver q {\n  vertices: a b c d\n  arrow x: a -> b\n"
              "  arrow y: b -> d\n  arrow s: a -> c\n  arrow t: c -> d\n"
              "  relation 3/2*x.y - s.t  # trailing\n}\n")
    (rho,) = B.generators
    assert str(rho) == "3/2*x.y - s.t"


def test_tokens_have_nested_spans():
    toks = tokenize("quiver q {\n  arrow x: a -> b\n}\n")
    for t in toks:
        assert t.span.column <= t.span.end_column


@pytest.mark.parametrize("name", FIXTURES)
def test_serialize_round_trip(name):
    B = load_fixture(name)
    text = serialize(B)
    again = parse(text)
    assert again.quiver == B.quiver
    assert serialize(again) == text
    for a, b in B.vertex_pairs():
        assert again.ideal_space(a, b) == B.ideal_space(a, b)


@st.composite
def random_bound_quiver(draw):
    n = draw(st.integers(2, 5))
    vs = [f"v{i}" for i in range(n)]
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                          .filter(lambda p: p[0] < p[1]), min_size=1, max_size=7))
    Q = Quiver(tuple(vs), tuple(Arrow(f"a{k}", vs[i], vs[j]) for k, (i, j) in enumerate(pairs)))
    return BoundQuiver(Q, (), "rnd")


@settings(max_examples=60, deadline=None)
@given(random_bound_quiver())
def test_serialize_round_trip_random(B):
    assert parse(serialize(B)).quiver == B.quiver


def test_dot_counts():
    dot = export_dot(load_fixture("a3line"))
    assert dot.count("->") == 2 and dot.count(";\n") == 3 + 2 + 1
    dot = export_dot(load_fixture("f19"))
    lines = dot.splitlines()
    assert sum(1 for l in lines if "->" in l and "dashed" not in l) == 6
    assert sum(1 for l in lines if "dashed" in l) == 2
    assert sum(1 for l in lines if l.strip().startswith('"') and "->" not in l) == 5


def test_dot_fibers():
    crown, kron = load_fixture("crown"), load_fixture("kron")
    F = QuiverMorphism.from_json(crown, kron, load_json_fixture("crown-to-kron.json"))
    dot = export_dot(crown, cover_fibers(F))
    assert dot.count("subgraph") == 2 and dot.count("rank=same") == 2
    assert export_dot(crown, cover_fibers(F)) == dot
