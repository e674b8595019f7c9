"""Generalized Walsh functions and the radix-p Chrestenson transform.

Index convention: a coefficient index ``alpha = sum_t alpha_t p^t`` pairs its
digit ``alpha_t`` with the coset digit ``omega_{t+1}``, and a coset index
``s = sum_t s_t p^t`` is read as the tuple ``(omega_1, ..., omega_n)`` with
``omega_{t+1} = s_t``.  The forward transform is unnormalized,

    out[s] = sum_alpha v[alpha] * conj(eps ** <alpha, s>),   eps = exp(2 pi i / p),

and the inverse is its conjugate scaled by ``1/N``.
"""
from __future__ import annotations

import time

import numpy as np

from .errors import InvalidLengthError
from .group import DUAL, PRIMAL, DigitSequence, character, check_modulus, from_integer

FORWARD = "forward"
INVERSE = "inverse"
NAIVE = "naive"
FAST = "fast"


def log_p(N: int, p: int) -> int:
    """Exact ``n`` with ``p**n == N``, else :class:`InvalidLengthError`."""
    n, m = 0, 1
    while m < N:
        m *= p
        n += 1
    if m != N or N < 1:
        raise InvalidLengthError(f"length {N} is not a power of {p}")
    return n


def index_digits(N: int, p: int) -> np.ndarray:
    """``(N, n)`` array; row ``s`` holds the base-p digits of ``s``, least significant first."""
    n = log_p(N, p)
    s = np.arange(N, dtype=np.int64)
    out = np.empty((N, n), dtype=np.int64)
    for t in range(n):
        out[:, t] = s % p
        s //= p
    return out


def walsh_eval(alpha: int, point: DigitSequence, side: str | None = None) -> complex:
    """``W_alpha(x) = chi(x, omega_[alpha])`` or ``W*_alpha(w) = chi(h_[alpha], w)``."""
    side = point.side if side is None else side
    if side == PRIMAL:
        return character(point, from_integer(alpha, point.p, DUAL))
    return character(from_integer(alpha, point.p, PRIMAL), point)


def _roots(p: int, sign: int) -> np.ndarray:
    """``exp(sign 2 pi i k / p)`` for ``k < p``, exact on the axes."""
    z = np.exp(sign * 2j * np.pi * np.arange(p) / p)
    z.real[np.abs(z.real) < 1e-15] = 0.0
    z.imag[np.abs(z.imag) < 1e-15] = 0.0
    return z


def _kernel(p: int, sign: int) -> np.ndarray:
    return _roots(p, sign)[np.outer(np.arange(p), np.arange(p)) % p]


def _naive(v: np.ndarray, p: int, sign: int, chunk: int = 512) -> np.ndarray:
    N = v.shape[0]
    dig = index_digits(N, p)
    out = np.empty(v.shape, dtype=complex)
    roots = _roots(p, sign)
    for start in range(0, N, chunk):
        phase = (dig[start:start + chunk] @ dig.T) % p
        out[start:start + chunk] = roots[phase] @ v
    return out


def _fast(v: np.ndarray, p: int, sign: int) -> np.ndarray:
    N = v.shape[0]
    n = log_p(N, p)
    F = _kernel(p, sign)
    tail = v.shape[1:]
    out = np.array(v, dtype=complex)
    # one radix-p butterfly stage per digit; stage t mixes indices differing in digit t
    for t in range(n):
        blk = out.reshape((N // p ** (t + 1), p, p ** t) + tail)
        out = np.einsum("ij,ajb...->aib...", F, blk).reshape((N,) + tail)
    return out


def chrestenson(v, p: int, direction: str = FORWARD, algorithm: str = FAST) -> np.ndarray:
    """Vilenkin-Chrestenson transform along axis 0 of ``v`` (length ``p**n``)."""
    check_modulus(p)
    v = np.asarray(v, dtype=complex)
    log_p(v.shape[0], p)
    if direction not in (FORWARD, INVERSE):
        raise ValueError(f"unknown direction {direction!r}")
    sign = -1 if direction == FORWARD else 1
    if algorithm == FAST:
        out = _fast(v, p, sign)
    elif algorithm == NAIVE:
        out = _naive(v, p, sign)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if direction == INVERSE:
        out /= v.shape[0]
    return out


def walsh_matrix(p: int, n: int) -> np.ndarray:
    """``W_alpha(x)`` for ``alpha < p**n`` (rows) on the ``p**n`` cells of U (columns).

    Cell ``c = sum_t c_t p^t`` has ``x_{t+1} = c_t``; the pairing of ``x_{1+t}``
    with the digit of ``omega_[alpha]`` at index ``-t`` is ``alpha_t * c_t``.
    """
    N = p ** n
    dig = index_digits(N, p)
    return _roots(p, 1)[(dig @ dig.T) % p]


def walsh_gram(p: int, n: int) -> np.ndarray:
    """Cell-sum Gram matrix ``p^{-n} sum_cells W_alpha conj(W_beta)`` on U."""
    W = walsh_matrix(p, n)
    return (W @ W.conj().T) / p ** n


def bench(sizes, p: int = 3, repeats: int = 3, seed: int = 0):
    """Time both algorithms; rows are ``(N, algorithm, nanoseconds)`` (best of ``repeats``)."""
    rng = np.random.default_rng(seed)
    rows = []
    for N in sizes:
        v = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        for alg in (NAIVE, FAST):
            best = None
            for _ in range(repeats):
                t0 = time.perf_counter_ns()
                chrestenson(v, p, FORWARD, alg)
                dt = time.perf_counter_ns() - t0
                best = dt if best is None else min(best, dt)
            rows.append((N, alg, best))
    return rows
