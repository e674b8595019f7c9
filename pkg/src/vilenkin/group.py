"""Exact arithmetic on the Vilenkin group G and its dual G*.

Elements are finitely supported digit sequences ``(x_j)`` over ``{0..p-1}``
indexed by integers.  The group law is digitwise addition mod ``p`` with no
carries.  Positions follow the usual convention: the lattice ``H`` (and
``H^perp`` on the dual side) lives on positions ``j <= 0`` and the compact
subgroup ``U`` (``U*``) on positions ``j >= 1``.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Tuple

import numpy as np

from .errors import InvalidOperandError, ParseError

PRIMAL = "primal"
DUAL = "dual"
MAX_P = 31

_PRIMES = frozenset(q for q in range(2, MAX_P + 1)
                    if all(q % r for r in range(2, int(q ** 0.5) + 1)))


def check_modulus(p: int) -> int:
    if p not in _PRIMES:
        raise InvalidOperandError(f"modulus must be a prime <= {MAX_P}, got {p!r}")
    return p


def _check_side(side: str) -> str:
    if side not in (PRIMAL, DUAL):
        raise InvalidOperandError(f"side must be 'primal' or 'dual', got {side!r}")
    return side


@dataclass(frozen=True)
class DigitSequence:
    """A finitely supported digit vector, stored as ``digits`` from index ``lo``.

    Always canonical: the first and last stored digits are nonzero, and the
    identity ``theta`` is the unique sequence with no digits (``lo == 0``).
    Build instances with :meth:`make` or :func:`from_digits` unless the digits
    are already canonical.
    """

    p: int
    lo: int
    digits: Tuple[int, ...]
    side: str = PRIMAL

    def __post_init__(self):
        check_modulus(self.p)
        _check_side(self.side)
        d = self.digits
        if any(not 0 <= v < self.p for v in d):
            raise InvalidOperandError(f"digits out of range for p={self.p}: {d}")
        if d and (d[0] == 0 or d[-1] == 0):
            raise InvalidOperandError("non-canonical digit vector (zero at an end)")
        if not d and self.lo != 0:
            raise InvalidOperandError("theta must have lo == 0")

    @classmethod
    def make(cls, p: int, lo: int, digits: Iterable[int], side: str = PRIMAL) -> "DigitSequence":
        """Canonicalize (trim zeros at both ends) and construct."""
        d = [int(v) for v in digits]
        start = 0
        while start < len(d) and d[start] == 0:
            start += 1
        stop = len(d)
        while stop > start and d[stop - 1] == 0:
            stop -= 1
        if start == stop:
            return cls(p, 0, (), side)
        return cls(p, lo + start, tuple(d[start:stop]), side)

    @classmethod
    def theta(cls, p: int, side: str = PRIMAL) -> "DigitSequence":
        return cls(p, 0, (), side)

    @property
    def hi(self) -> int:
        """Largest index with a stored digit (``lo - 1`` for theta)."""
        return self.lo + len(self.digits) - 1

    @property
    def is_theta(self) -> bool:
        return not self.digits

    def digit(self, j: int) -> int:
        k = j - self.lo
        if 0 <= k < len(self.digits):
            return self.digits[k]
        return 0

    def window(self, lo: int, hi: int) -> Tuple[int, ...]:
        """Digits at positions ``lo..hi`` (inclusive)."""
        return tuple(self.digit(j) for j in range(lo, hi + 1))

    def items(self):
        """``(index, digit)`` pairs for the nonzero digits."""
        return [(self.lo + k, v) for k, v in enumerate(self.digits) if v]

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return negate(self)

    def __sub__(self, other):
        return add(self, negate(other))

    def __str__(self):
        return to_text(self)


def from_digits(p: int, mapping: Mapping[int, int], side: str = PRIMAL) -> DigitSequence:
    """Sequence with ``mapping[j]`` at index ``j`` and zeros elsewhere."""
    if not mapping:
        return DigitSequence.theta(p, side)
    lo, hi = min(mapping), max(mapping)
    d = [0] * (hi - lo + 1)
    for j, v in mapping.items():
        d[j - lo] = v
    return DigitSequence.make(p, lo, d, side)


def _same_group(x: DigitSequence, y: DigitSequence) -> None:
    if x.p != y.p:
        raise InvalidOperandError(f"modulus mismatch: {x.p} vs {y.p}")
    if x.side != y.side:
        raise InvalidOperandError(f"side mismatch: {x.side} vs {y.side}")


def add(x: DigitSequence, y: DigitSequence) -> DigitSequence:
    """Digitwise sum mod p (the group operation, no carries)."""
    _same_group(x, y)
    if x.is_theta:
        return y
    if y.is_theta:
        return x
    lo = min(x.lo, y.lo)
    hi = max(x.hi, y.hi)
    p = x.p
    d = [(x.digit(j) + y.digit(j)) % p for j in range(lo, hi + 1)]
    return DigitSequence.make(p, lo, d, x.side)


def negate(x: DigitSequence) -> DigitSequence:
    p = x.p
    return DigitSequence(p, x.lo, tuple((p - v) % p for v in x.digits), x.side)


def dilate(x: DigitSequence, k: int) -> DigitSequence:
    """Apply ``A^k`` (primal) or ``B^k`` (dual): the digit at ``j + k`` moves to ``j``."""
    if x.is_theta:
        return x
    return DigitSequence(x.p, x.lo - k, x.digits, x.side)


def lambda_value(x: DigitSequence) -> Fraction:
    """Exact ``sum_j x_j p^{-j}``; a nonnegative integer whenever x lies in H."""
    if x.is_theta:
        return Fraction(0)
    p = x.p
    num = 0
    for v in x.digits:
        num = num * p + v
    # num reads the digits with index hi as the units place
    if x.hi <= 0:
        return Fraction(num * p ** (-x.hi))
    return Fraction(num, p ** x.hi)


def from_integer(alpha: int, p: int, side: str = PRIMAL) -> DigitSequence:
    """``h_[alpha]`` (or ``omega_[alpha]`` on the dual side): base-p digits at 0, -1, -2, ..."""
    if alpha < 0:
        raise InvalidOperandError(f"alpha must be nonnegative, got {alpha}")
    check_modulus(p)
    if alpha == 0:
        return DigitSequence(p, 0, (), side)
    d = []
    while alpha:
        alpha, r = divmod(alpha, p)
        d.append(r)
    # d[t] is the coefficient of p^t and sits at index -t; store lowest index first
    d.reverse()
    return DigitSequence.make(p, 1 - len(d), d, side)


def integer_digits(alphas, p: int, width: int | None = None) -> np.ndarray:
    """Vectorized ``from_integer``: row ``k`` holds the digits of ``alphas[k]`` at indices ``0, -1, ...``."""
    check_modulus(p)
    a = np.asarray(alphas, dtype=np.int64)
    if np.any(a < 0):
        raise InvalidOperandError("alphas must be nonnegative")
    if width is None:
        width, top = 1, int(a.max(initial=0))
        while p ** width <= top:
            width += 1
    out = np.empty(a.shape + (width,), dtype=np.int64)
    for t in range(width):
        out[..., t] = a % p
        a = a // p
    if np.any(a):
        raise InvalidOperandError(f"width {width} too small for the largest alpha")
    return out


def lambda_of_integer_digits(digits: np.ndarray, p: int) -> np.ndarray:
    """Vectorized ``lambda_value`` for elements of H stored as by :func:`integer_digits`."""
    d = np.asarray(digits, dtype=np.int64)
    out = np.zeros(d.shape[:-1], dtype=np.int64)
    for t in range(d.shape[-1] - 1, -1, -1):
        out = out * p + d[..., t]
    return out


def delta(l: int, p: int) -> DigitSequence:
    """Dual sequence with the single digit ``l`` at index 1."""
    if not 0 <= l < p:
        raise InvalidOperandError(f"delta index must be in 0..{p - 1}")
    return DigitSequence.make(p, 1, [l], DUAL)


def pairing(x: DigitSequence, w: DigitSequence) -> int:
    """Exact ``sum_j x_j w_{1-j} mod p``."""
    if x.p != w.p:
        raise InvalidOperandError(f"modulus mismatch: {x.p} vs {w.p}")
    if x.side != PRIMAL or w.side != DUAL:
        raise InvalidOperandError("pairing needs a primal and a dual element")
    s = 0
    for j, v in x.items():
        s += v * w.digit(1 - j)
    return s % x.p


def root_of_unity(k: int, p: int) -> complex:
    """``exp(2 pi i k / p)`` with exact values on the real and imaginary axes."""
    k %= p
    if k == 0:
        return 1 + 0j
    if 2 * k == p:
        return -1 + 0j
    z = cmath.exp(2j * math.pi * k / p)
    return z


def character(x: DigitSequence, w: DigitSequence) -> complex:
    """``chi(x, w) = exp(2 pi i / p * sum_j x_j w_{1-j})``."""
    return root_of_unity(pairing(x, w), x.p)


_TEXT_RE = re.compile(r"^\s*p=(\d+)\s+side=(primal|dual)\s+lo=(-?\d+)\s+digits=([\d,]*)\s*$")


def to_text(x: DigitSequence) -> str:
    return f"p={x.p} side={x.side} lo={x.lo} digits={','.join(map(str, x.digits))}"


def from_text(line: str) -> DigitSequence:
    m = _TEXT_RE.match(line)
    if not m:
        raise ParseError(f"not a digit sequence: {line!r}")
    p, side, lo, digits = m.groups()
    d = [int(v) for v in digits.split(",")] if digits else []
    try:
        return DigitSequence.make(int(p), int(lo), d, side)
    except InvalidOperandError as exc:
        raise ParseError(str(exc)) from exc
