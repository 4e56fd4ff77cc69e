import random

import pytest
from hypothesis import given, settings, strategies as st

from qpi1.groups import (Budget, BudgetExhausted, Presentation, abelian_invariants,
                         acts_trivially, apply_word, free_reduce, free_separator, invert,
                         tietze, todd_coxeter)
from qpi1.homotopy import decide_word, freeness
from qpi1.linalg import invariant_factors, nullspace, rank

S3 = Presentation(("x", "y"), ((1, 1, 1), (2, 2), (1, 2, 1, 2)))
Z2xZ2 = Presentation(("x", "y"), ((1, 1), (2, 2), (1, 2, -1, -2)))

words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=14).map(tuple)


@given(words)
def test_free_reduce_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert all(r[i] != -r[i + 1] for i in range(len(r) - 1))
    assert free_reduce(w + invert(w)) == ()


@settings(max_examples=150, deadline=None)
@given(words)
def test_free_separator_detects_nontrivial_words(w):
    r = free_reduce(w)
    if not r:
        return
    perms = free_separator(r, 3)
    assert not acts_trivially(perms, r)


def test_coset_enumeration_orders():
    assert todd_coxeter(S3, (), Budget(10 ** 5)).index == 6
    assert todd_coxeter(Z2xZ2, (), Budget(10 ** 5)).index == 4
    # cosets of <x> in S3
    assert todd_coxeter(S3, ((1,),), Budget(10 ** 5)).index == 2


def test_coset_enumeration_respects_budget():
    with pytest.raises(BudgetExhausted):
        todd_coxeter(S3, (), Budget(3))


def test_abelian_invariants():
    assert abelian_invariants(S3) == ([2], 0)
    assert abelian_invariants(Z2xZ2) == ([2, 2], 0)
    assert abelian_invariants(Presentation(("x", "y"), ())) == ([], 2)


def test_invariant_factors():
    assert invariant_factors([[2, 0], [0, 3]], 2) == ([6], 0)
    assert invariant_factors([[4, 6]], 2) == ([2], 1)


def test_linear_algebra():
    assert rank([[1, 2], [2, 4]], 2) == 1
    ns = nullspace([[1, 2, 3]], 3)
    assert len(ns) == 2
    assert all(sum(a * b for a, b in zip([1, 2, 3], v)) == 0 for v in ns)


@pytest.mark.parametrize("w,trivial", [
    ((1,), False), ((1, 1, 1), True), ((1, 2, 1, 2), True), ((1, 2), False),
    ((2, 1, 2, -1), False), ((1, -1), True),
])
def test_decide_word_in_s3(w, trivial):
    v = decide_word(S3, w, Budget(10 ** 6))
    assert v.proven == trivial and v.refuted != trivial
    if v.proven:
        assert v.certificate.replay(S3, w)
    else:
        assert v.certificate.verify(S3, w)


def test_certificates_do_not_verify_other_words():
    v = decide_word(S3, (1,), Budget(10 ** 6))
    assert not v.certificate.verify(S3, (1, 1, 1))


def test_decide_word_unknown_under_tiny_budget():
    assert decide_word(S3, (1, 2, 1, 2), Budget(3)).unknown


def test_tietze_replays():
    P = Presentation(("a", "b", "c"), ((1, -2), (2, 3, -1)))
    T = tietze(P)
    assert T.replay()
    assert T.is_free and T.rank == 1


def test_freeness_claims():
    assert str(freeness(Presentation(("x", "y"), ()))) == "Free(2)"
    assert freeness(S3).verdict == "not-free"
    assert freeness(Z2xZ2).certificate["kind"] == "abelian-torsion"
    # Z^2 is not free, but no torsion certificate exists: no claim is made
    assert freeness(Presentation(("x", "y"), ((1, 2, -1, -2),))).verdict == "unknown"


def test_apply_word_is_an_action():
    rng = random.Random(5)
    perms = [rng.sample(range(5), 5) for _ in range(2)]
    for _ in range(20):
        w = tuple(rng.choice([1, -1, 2, -2]) for _ in range(6))
        for p in range(5):
            assert apply_word(perms, w + invert(w), p) == p
