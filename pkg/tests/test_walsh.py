import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vilenkin.errors import InvalidLengthError
from vilenkin.group import DUAL, PRIMAL, DigitSequence, from_digits
from vilenkin.walsh import (FAST, FORWARD, INVERSE, NAIVE, bench, chrestenson, index_digits, log_p, walsh_eval,
                            walsh_gram, walsh_matrix)


def rand_vec(rng, N, batch=()):
    return rng.standard_normal((N,) + batch) + 1j * rng.standard_normal((N,) + batch)


def test_walsh_eval_examples():
    x = from_digits(2, {1: 1, -3: 1})
    assert walsh_eval(0, x) == 1
    assert walsh_eval(1, from_digits(2, {1: 1})) == pytest.approx(-1)
    assert walsh_eval(1, from_digits(2, {1: 1}, DUAL)) == pytest.approx(-1)


@given(st.integers(0, 500), st.sampled_from([2, 3, 5]), st.lists(st.integers(0, 4), min_size=1, max_size=6))
def test_walsh_eval_unimodular(alpha, p, digs):
    x = DigitSequence.make(p, -2, [d % p for d in digs])
    assert abs(abs(walsh_eval(alpha, x)) - 1) <= 1e-12


@pytest.mark.parametrize("algorithm", [FAST, NAIVE])
def test_transform_examples(algorithm):
    assert np.allclose(chrestenson([1, 0, 0, 0, 0, 0, 0, 0, 0], 3, algorithm=algorithm), np.ones(9))
    assert np.allclose(chrestenson([0.5, 0.5], 2, algorithm=algorithm), [1, 0], atol=1e-15)
    assert np.allclose(chrestenson(np.full(3, 1 / 3), 3, algorithm=algorithm), [1, 0, 0], atol=1e-15)


def test_transform_rejects_bad_length():
    with pytest.raises(InvalidLengthError):
        chrestenson(np.ones(6), 3)
    with pytest.raises(InvalidLengthError):
        log_p(0, 2)


def test_length_one_is_identity():
    assert np.allclose(chrestenson([2 + 1j], 5), [2 + 1j])


def test_forward_matches_definition():
    # out[s] = sum_a v[a] conj(eps^<a,s>)
    p, n = 3, 3
    rng = np.random.default_rng(0)
    v = rand_vec(rng, p ** n)
    dig = index_digits(p ** n, p)
    eps = np.exp(2j * np.pi / p)
    ref = np.array([np.sum(v * np.conj(eps ** ((dig @ dig[s]) % p))) for s in range(p ** n)])
    assert np.allclose(chrestenson(v, p), ref, atol=1e-12)


def test_p2_is_walsh_hadamard():
    H = np.array([[1.0]])
    for _ in range(4):
        H = np.block([[H, H], [H, -H]])
    rng = np.random.default_rng(1)
    v = rand_vec(rng, 16)
    # natural ordering pairs digit t of the index with digit t of the output
    assert np.allclose(chrestenson(v, 2), H @ v, atol=1e-12)


@given(st.sampled_from([(2, 5), (3, 3), (5, 2), (7, 2)]), st.integers(0, 2 ** 32 - 1))
def test_fast_equals_naive_and_round_trips(pn, seed):
    p, n = pn
    rng = np.random.default_rng(seed)
    v = rand_vec(rng, p ** n)
    fast = chrestenson(v, p, FORWARD, FAST)
    assert np.allclose(fast, chrestenson(v, p, FORWARD, NAIVE), atol=1e-10)
    assert np.allclose(chrestenson(fast, p, INVERSE), v, atol=1e-10)
    # unnormalized Parseval
    assert np.isclose(np.sum(np.abs(fast) ** 2), p ** n * np.sum(np.abs(v) ** 2), rtol=1e-10)


def test_batched_axis_zero():
    rng = np.random.default_rng(2)
    v = rand_vec(rng, 27, (4,))
    out = chrestenson(v, 3)
    for k in range(4):
        assert np.allclose(out[:, k], chrestenson(v[:, k], 3))


@pytest.mark.parametrize("p,n", [(2, 4), (3, 3), (5, 2)])
def test_gram_is_identity(p, n):
    assert np.abs(walsh_gram(p, n) - np.eye(p ** n)).max() <= 1e-12


def test_walsh_matrix_matches_pointwise_eval():
    p, n = 3, 2
    W = walsh_matrix(p, n)
    for alpha in range(p ** n):
        for c in range(p ** n):
            x = from_digits(p, {t + 1: (c // p ** t) % p for t in range(n)})
            assert abs(W[alpha, c] - walsh_eval(alpha, x, PRIMAL)) < 1e-12


def test_bench_rows():
    rows = bench([9, 27], p=3, repeats=1)
    assert [(N, alg) for N, alg, _ in rows] == [(9, NAIVE), (9, FAST), (27, NAIVE), (27, FAST)]
    assert all(ns > 0 for *_, ns in rows)
