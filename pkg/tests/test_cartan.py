"""Satake datum and graded dimension oracle."""

import itertools

import pytest

from iqsym.cartan import RootVec, build_satake, pbw_dim_oracle, positive_roots_up_to_height


@pytest.mark.parametrize("r", [1, 2, 3, 4])
@pytest.mark.parametrize("flip", [False, True])
def test_satake_structure(r, flip):
    sd = build_satake(r, sign_flip=flip)
    n = 2 * r + 1
    assert sd.n == n
    # cycle Cartan matrix
    for i in range(n):
        assert sd.cartan[i][i] == 2
        assert sum(sd.cartan[i]) == 0
    # tau is the involution fixing 0 and flipping the cycle
    assert sd.tau[0] == 0
    for i in range(n):
        assert sd.tau[sd.tau[i]] == i
        assert sd.tau[i] == (0 if i == 0 else n - i)
    # fixed node 0 and the central orbit {r, r+1} are the only special ones
    assert [i for i in range(n) if sd.tau[i] == i] == [0]
    assert sd.cartan[r][sd.tau[r]] == -1
    for i in range(1, n):
        if i not in (r, r + 1):
            assert sd.cartan[i][sd.tau[i]] == 0
    # sign function: o(i)o(j) = -1 across finite edges, o(i)o(tau i) = -1
    for i in range(1, n):
        assert sd.sign_o[i] * sd.sign_o[sd.tau[i]] == -1
    assert sd.rep(sd.tau[1]) == 1
    assert list(sd.itau_reps) == list(range(r + 1))


def test_sign_conventions_differ_everywhere():
    a = build_satake(2, sign_flip=False).sign_o
    b = build_satake(2, sign_flip=True).sign_o
    assert all(x == -y for x, y in zip(a[1:], b[1:]))


def test_khalf_pairing_examples():
    sd = build_satake(2)
    # K_ell B_i = v^(c[tau ell][i] - c[ell][i]) B_i K_ell
    for ell in range(sd.n):
        for i in range(sd.n):
            assert sd.khalf_pairing(ell, i) == sd.cartan[sd.tau[ell]][i] - sd.cartan[ell][i]
    # the pairing vanishes on the tau-fixed node against itself
    assert sd.khalf_pairing(0, 0) == 0


def _brute_force_dim(r, d):
    """Independent count: monomials in the positive roots, graded by height."""
    roots = []
    for root, mult in positive_roots_up_to_height(r, d):
        roots.extend([root.height()] * mult)
    # coefficient of x^d in prod (1-x^h)^-1 by explicit multiset counting
    counts = [1] + [0] * d
    for h in roots:
        for k in range(h, d + 1):
            counts[k] += counts[k - h]
    return counts[d]


@pytest.mark.parametrize("r", [1, 2])
def test_oracle_matches_brute_force(r):
    assert pbw_dim_oracle(r, 0) == 1
    for d in range(1, 9):
        assert pbw_dim_oracle(r, d) == _brute_force_dim(r, d)


def test_oracle_small_values_by_hand():
    # r=1: degree 1 -> 3 simple roots; degree 2 -> pairs with repetition
    # among heights {1,1,1,2,2,2}: 6 monomials of two height-1 roots
    # plus 3 height-2 roots = 9
    assert pbw_dim_oracle(1, 1) == 3
    assert pbw_dim_oracle(1, 2) == 9
    assert pbw_dim_oracle(1, 3) == 21
    assert pbw_dim_oracle(2, 1) == 5


def test_root_multiplicities():
    roots = positive_roots_up_to_height(1, 6)
    # imaginary roots m*delta carry multiplicity 2r
    imag = [(rt, m) for rt, m in roots if len(set(rt.coords)) == 1]
    assert [(rt.height(), m) for rt, m in imag] == [(3, 2), (6, 2)]
    # real roots are multiplicity-free
    assert all(m == 1 for rt, m in roots if len(set(rt.coords)) > 1)


def test_rootvec_arithmetic():
    a = RootVec((1, 0, 2))
    b = RootVec((0, 1, 1))
    assert (a + b).coords == (1, 1, 3)
    assert (a - b).coords == (1, -1, 1)
    assert (-a).coords == (-1, 0, -2)
    assert a.height() == 3


def test_build_satake_rejects_bad_rank():
    with pytest.raises(ValueError):
        build_satake(0)
