import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vilenkin.errors import NotApplicableError
from vilenkin.mask import haar_mask, mask_from_coeffs, mask_from_values, read_mask
from vilenkin.mra import (CosetSet, blocked_set, index_tuple, mra_verdict, t_p_children, verify_blocked,
                          zero_cosets)

BLOCKED = (1, 0, 0, 1)


def test_zero_cosets_examples():
    assert zero_cosets(haar_mask(2)).members == {(1,)}
    assert zero_cosets(mask_from_values(2, 2, BLOCKED)).members == {(1, 0), (0, 1)}
    assert len(zero_cosets(mask_from_values(3, 1, [1, 0.5, 0.2]))) == 0


def test_t_p_children_examples():
    assert t_p_children((1,), 2) == [(0, 1), (1, 1)]
    assert t_p_children((0,), 3) == [(0, 0), (1, 0), (2, 0)]
    assert t_p_children((0, 1), 2) == [(0, 0, 1), (1, 0, 1)]


def test_blocked_set_examples():
    assert blocked_set(haar_mask(2).with_order(2)) is None
    M = blocked_set(mask_from_values(2, 2, BLOCKED))
    assert M.members == {(1,)}
    assert verify_blocked(M, mask_from_values(2, 2, BLOCKED)) == (True, "ok")
    assert blocked_set(mask_from_values(2, 2, [1, 0.5, 0.3, 0.2])) is None


def test_order_one_has_no_candidates():
    assert blocked_set(haar_mask(3)) is None


def test_verify_rejects_each_clause():
    m = mask_from_values(2, 2, BLOCKED)
    assert verify_blocked(CosetSet(2, 1, frozenset()), m)[0] is False
    assert verify_blocked(CosetSet(2, 1, frozenset({(0,), (1,)})), m)[1] == "contains the zero coset"
    assert verify_blocked(CosetSet(2, 2, frozenset({(1, 1)})), m)[0] is False
    # (1) with a nonzero child whose prefix leaves the set
    m2 = mask_from_values(2, 2, [1, 0, 1, 1])
    ok, why = verify_blocked(CosetSet(2, 1, frozenset({(1,)})), m2)
    assert not ok and "escapes" in why


def random_mask_with_zeros(seed, p=2, n=3):
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(p ** n) + 1j * rng.standard_normal(p ** n)
    vals[rng.random(p ** n) < 0.5] = 0
    vals[0] = 1
    return mask_from_values(p, n, vals)


@given(st.integers(0, 10 ** 6), st.sampled_from([(2, 3), (2, 4), (3, 2), (3, 3)]))
def test_maximality(seed, pn):
    m = random_mask_with_zeros(seed, *pn)
    M = blocked_set(m)
    members = set() if M is None else set(M.members)
    if M is not None:
        assert verify_blocked(M, m)[0]
    r = m.n - 1
    for s in range(1, m.p ** r):
        c = index_tuple(s, m.p, r)
        if c not in members:
            assert not verify_blocked(CosetSet(m.p, r, frozenset(members | {c})), m)[0]


@given(st.integers(0, 10 ** 6))
def test_monotone_in_tol(seed):
    rng = np.random.default_rng(seed)
    vals = rng.random(16) * np.where(rng.random(16) < 0.5, 1e-3, 1.0)
    vals[0] = 1
    m = mask_from_values(2, 4, vals)
    tight = blocked_set(m, tol=1e-4)
    loose = blocked_set(m, tol=1e-2)
    tight = set() if tight is None else tight.members
    loose = set() if loose is None else loose.members
    assert tight <= loose


@pytest.mark.parametrize("p", [2, 3])
def test_haar_verdict(p):
    v = mra_verdict(haar_mask(p))
    assert v.verdict == "MRA" and v.blocked is None and v.cross_check_consistent


def test_blocked_verdict():
    v = mra_verdict(mask_from_values(2, 2, BLOCKED))
    assert v.verdict == "not-MRA" and v.blocked.members == {(1,)}
    assert v.ortho_residual > 0.4 and v.cross_check_consistent
    assert "blocked=(1)" in v.to_text()


def test_hypotheses_are_checked():
    with pytest.raises(NotApplicableError, match="theta"):
        mra_verdict(mask_from_values(2, 1, [0.9, 0.1]))
    with pytest.raises(NotApplicableError, match="residual"):
        mra_verdict(mask_from_values(2, 2, [1, 0.5, 0.5, 0.5]))


def qmf_corpus():
    out = [haar_mask(2), haar_mask(3), haar_mask(2).with_order(3), mask_from_values(2, 2, BLOCKED),
           mask_from_values(2, 3, [1, 0, 0, 1, 0, 1, 1, 0]), mask_from_values(3, 2, [1, 0, 0, 0, 1, 0, 0, 0, 1])]
    out.append(mask_from_values(2, 2, [1, 0, 1j, 0]))
    return out


@pytest.mark.parametrize("m", qmf_corpus(), ids=lambda m: f"p{m.p}n{m.n}")
def test_blocked_sets_agree_with_orthonormality(m):
    v = mra_verdict(m, K=5)
    assert v.cross_check_consistent
    assert (v.blocked is None) == (v.ortho_residual <= 1e-8)


def test_corpus_files(data_dir):
    assert mra_verdict(read_mask(data_dir / "haar.mask")).is_mra
    assert not mra_verdict(read_mask(data_dir / "blocked.mask")).is_mra
