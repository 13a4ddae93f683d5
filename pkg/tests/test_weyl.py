"""Extended affine symmetric group and the relative (fixed-subgroup) layer."""

import pytest
from hypothesis import given, settings, strategies as st

from iqsym import weyl
from iqsym.cartan import build_satake
from iqsym.weyl import (
    AffinePerm,
    check_varpi_factorizations,
    coxeter_order,
    identity_perm,
    rel_generator,
    rel_length,
    rel_reduced_word,
    rel_word_to_perm,
    relword_format,
    relword_parse,
    simple_reflection,
    t_omega,
    translation,
    varpi,
)

N = 5  # window size used by the random-word tests


def word_to_perm(word):
    w = identity_perm(N)
    for i in word:
        w = w * simple_reflection(N, i)
    return w


words = st.lists(st.integers(0, N - 1), min_size=0, max_size=8)


@given(a=words, b=words)
@settings(max_examples=60, deadline=None)
def test_group_axioms(a, b):
    wa, wb = word_to_perm(a), word_to_perm(b)
    assert (wa * wb) * wa.inv() * wa == wa * wb
    assert wa * wa.inv() == identity_perm(N)
    assert wa.inv().inv() == wa


@given(a=words)
@settings(max_examples=60, deadline=None)
def test_length_counts_inversions(a):
    w = word_to_perm(a)
    # length is subadditive in the word and has the parity of the word
    assert w.length() <= len(a)
    assert (w.length() - len(a)) % 2 == 0


@given(a=words, i=st.integers(0, N - 1))
@settings(max_examples=40, deadline=None)
def test_action_on_roots_is_consistent(a, i):
    w = word_to_perm(a)
    root = w.act_on_simple(i)
    # acting with w^-1 brings the root back
    assert w.inv().act_on_root(root).coords == tuple(
        1 if t == i else 0 for t in range(N)
    )


def test_simple_reflection_basics():
    s1 = simple_reflection(N, 1)
    assert s1 * s1 == identity_perm(N)
    assert s1.length() == 1
    assert s1.act_on_simple(1).coords == (0, -1, 0, 0, 0)


def test_translations_commute():
    for i in range(1, N):
        for j in range(1, N):
            assert t_omega(N, i) * t_omega(N, j) == t_omega(N, j) * t_omega(N, i)
    # translations are taken modulo the all-ones class
    assert translation([1] * N) == identity_perm(N)


def test_rel_generators_are_tau_invariant_involutions():
    for r in (1, 2, 3):
        sd = build_satake(r)
        for i in sd.itau_reps:
            g = rel_generator(sd, i)
            assert g.is_tau_invariant()
            assert g * g == identity_perm(sd.n)


@pytest.mark.parametrize("r", [2, 3])
def test_coxeter_orders_match_relative_cartan(r):
    # order of r_i r_j determined by c_ij c_ji: 0->2, 1->3, 2->4, 3->6
    sd = build_satake(r)
    rel = sd.relative_cartan()
    table = {0: 2, 1: 3, 2: 4, 3: 6}
    for i in sd.itau_reps:
        for j in sd.itau_reps:
            if i >= j:
                continue
            prod = rel[i][j] * rel[j][i]
            want = table.get(prod)
            assert coxeter_order(sd, i, j) == want


def test_rank_one_pair_has_infinite_order():
    sd = build_satake(1)
    assert coxeter_order(sd, 0, 1) is None


@pytest.mark.parametrize("r", [1, 2, 3])
def test_rel_reduced_word_roundtrip(r):
    sd = build_satake(r)
    for i in range(1, r + 1):
        w = varpi(sd, i)
        word = rel_reduced_word(sd, w)
        assert rel_word_to_perm(sd, word) == w
        assert rel_length(sd, w) == len(word)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_varpi_factorizations(r):
    report = check_varpi_factorizations(r)
    assert report, "empty report"
    assert all(report.values()), {k: v for k, v in report.items() if not v}


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_varpi_w_lengths(r):
    sd = build_satake(r)
    for k in range(1, r + 1):
        assert varpi(sd, k).length() == 2 * k * (2 * r + 1 - k)


def test_relword_text_roundtrip():
    word = (0, 2, 1, 1, 0)
    assert relword_parse(relword_format(word)) == word


def test_nonrelative_element_rejected():
    sd = build_satake(2)
    with pytest.raises(ValueError):
        rel_reduced_word(sd, simple_reflection(sd.n, 1))
