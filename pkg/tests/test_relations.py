import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import ideal_dimension_by_closure

from qpi1 import (BoundQuiver, LinearCombo, check_presentation, ideal_space,
                  induce_on_convex, load_fixture, membership, minimal_relations, parse)
from qpi1.catalog import FIXTURES
from qpi1.quiver import convex_subsets
from qpi1.relations import RelationError, verify_minimal


def _as_dicts(B):
    return [{"start": g.start, "end": g.end,
             "terms": [(p.labels(), c) for p, c in g.terms]} for g in B.generators]


def combo(B, *terms):
    return LinearCombo.build([(B.quiver.path(*p.split(".")), c) for p, c in terms])


@pytest.mark.parametrize("name", FIXTURES)
def test_ideal_dimension_against_closure(name):
    B = load_fixture(name)
    gens = _as_dicts(B)
    for a, b in B.vertex_pairs():
        assert B.ideal_dimension(a, b) == ideal_dimension_by_closure(B.quiver, gens, a, b)


@pytest.mark.parametrize("name", FIXTURES)
def test_rank_nullity(name):
    B = load_fixture(name)
    for a, b in B.vertex_pairs():
        assert B.ideal_dimension(a, b) + B.hom_dimension(a, b) == len(B.paths(a, b))


def test_f19_ideal_at_a_e():
    B = load_fixture("f19")
    assert len(ideal_space(B, "a", "e")) == 3
    assert B.hom_dimension("a", "e") == 1
    assert membership(B, combo(B, ("gamma.delta.mu", 1), ("alpha.beta.lambda", -1)))
    assert not membership(B, combo(B, ("gamma.delta.mu", 1), ("alpha.beta.lambda", 1)))


def test_f19_minimal_relations():
    B = load_fixture("f19")
    rels = minimal_relations(B)
    assert not rels.partial
    by_pair = {}
    for m in rels.relations:
        by_pair.setdefault((m.relation.start, m.relation.end), []).append(m.relation)
    assert len(by_pair[("a", "c")]) == 1
    # every pair of the four a -> e paths differs by an ideal element
    ae = by_pair[("a", "e")]
    assert len(ae) == 6
    assert all(len(r.terms) == 2 and {c for _, c in r.terms} == {1, -1} for r in ae)


@pytest.mark.parametrize("name", FIXTURES)
def test_minimal_relations_verify(name):
    B = load_fixture(name)
    for m in minimal_relations(B).relations:
        assert verify_minimal(B, m)
        # witnesses are non-zero residues of proper sub-sums
        assert all(any(x != 0 for x in res) for _, res in m.witnesses)


def test_minimal_relation_with_coefficient():
    B = load_fixture("f19-prime")
    rhos = [m.relation for m in minimal_relations(B).relations]
    assert combo(B, ("alpha.beta.mu", 1), ("alpha.beta.lambda", -2)) in rhos
    assert combo(B, ("alpha.beta.lambda", 1), ("gamma.delta.mu", Fraction(-1, 2))) in rhos


def test_sum_of_minimal_relations_is_not_minimal():
    B = load_fixture("f19")
    rho = combo(B, ("alpha.beta.mu", 1), ("alpha.beta.lambda", -1),
                ("gamma.delta.mu", 1), ("gamma.delta.lambda", -1))
    assert membership(B, rho)
    assert rho not in [m.relation for m in minimal_relations(B).relations]


def test_non_parallel_terms_rejected():
    B = load_fixture("f19")
    with pytest.raises(RelationError):
        combo(B, ("alpha.beta", 1), ("gamma", -1))


def test_check_presentation_reports():
    rep = check_presentation(load_fixture("f19"))
    assert rep.ok and rep.connected and rep.triangular
    assert rep.hom_dimensions[("a", "e")] == 1


@pytest.mark.parametrize("name", ["f19", "f17a", "square"])
def test_induced_ideal_is_restriction(name):
    B = load_fixture(name)
    for V in convex_subsets(B.quiver, connected=True).subsets:
        sub = induce_on_convex(B, V)
        for a, b in sub.vertex_pairs():
            assert sub.ideal_dimension(a, b) == B.ideal_dimension(a, b)


def test_induce_is_functorial():
    """Inducing in two steps agrees with inducing once."""
    B = load_fixture("f17a")
    V = [v for v in B.quiver.vertices if v != "a"]
    mid = induce_on_convex(B, V)
    small = induce_on_convex(mid, V[1:])
    direct = induce_on_convex(B, V[1:])
    assert small.generators
    assert small.quiver == direct.quiver
    for a, b in direct.vertex_pairs():
        assert small.ideal_space(a, b) == direct.ideal_space(a, b)


def test_induce_double_arrow_has_zero_ideal():
    sub = induce_on_convex(load_fixture("f19"), ["c", "e"])
    assert len(sub.quiver.arrows) == 2 and not sub.generators


def test_induce_requires_convex():
    with pytest.raises(RelationError):
        induce_on_convex(load_fixture("f19"), ["a", "c"])


def test_parsed_and_built_agree():
    B = load_fixture("square")
    built = BoundQuiver(B.quiver, [combo(B, ("alpha.beta", 1), ("gamma.delta", -1))], "sq")
    for a, b in B.vertex_pairs():
        assert built.ideal_space(a, b) == B.ideal_space(a, b)
    text = "quiver s {\n vertices: a b c d\n arrow alpha: a -> b\n arrow beta: b -> d\n" \
           " arrow gamma: a -> c\n arrow delta: c -> d\n relation gamma.delta - alpha.beta\n}\n"
    assert parse(text).ideal_dimension("a", "d") == 1
