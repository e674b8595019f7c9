"""Finite-resolution carriers for functions on G and G*, and the digit-window
machinery used to evaluate coset tables at arbitrary finitely supported points.

A window ``[lo..hi]`` of digit positions carries ``p**(hi-lo+1)`` tuples.  The
flat index of a tuple is ``sum_k d_{lo+k} p^k`` (position ``lo`` least
significant), which agrees with the coset index used by the transform for the
window ``[1..n]``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import ResolutionError

# rows per block when evaluating products on large point batches
_CHUNK = 1 << 16


def window_digits(p: int, lo: int, hi: int) -> np.ndarray:
    """``(p**L, L)`` int array of the digits of every tuple on ``[lo..hi]``."""
    L = hi - lo + 1
    if L < 0:
        raise ResolutionError(f"empty window [{lo}..{hi}]")
    s = np.arange(p ** L, dtype=np.int64)
    out = np.empty((p ** L, L), dtype=np.int64)
    for k in range(L):
        out[:, k] = s % p
        s //= p
    return out


def digits_to_index(digits: np.ndarray, p: int) -> np.ndarray:
    w = p ** np.arange(digits.shape[-1], dtype=np.int64)
    return digits @ w


def embed(digits: np.ndarray, lo: int, new_lo: int, new_hi: int) -> np.ndarray:
    """Re-express points given on ``[lo..]`` on the window ``[new_lo..new_hi]``.

    Positions outside the source window are zero.  Raises if a nonzero digit
    would be dropped.
    """
    n, L = digits.shape
    hi = lo + L - 1
    out = np.zeros((n, new_hi - new_lo + 1), dtype=digits.dtype)
    a, b = max(lo, new_lo), min(hi, new_hi)
    if a <= b:
        out[:, a - new_lo:b - new_lo + 1] = digits[:, a - lo:b - lo + 1]
    dropped = np.zeros(n, dtype=bool)
    if lo < new_lo:
        dropped |= digits[:, :min(new_lo, hi + 1) - lo].any(axis=1)
    if hi > new_hi:
        dropped |= digits[:, max(new_hi + 1, lo) - lo:].any(axis=1)
    if dropped.any():
        raise ResolutionError(f"points on [{lo}..{hi}] do not fit the window [{new_lo}..{new_hi}]")
    return out


def table_at(table: np.ndarray, p: int, R: int, digits: np.ndarray, lo: int, first: int = 1) -> np.ndarray:
    """Evaluate a resolution-R coset table at points, reading positions ``first..first+R-1``."""
    L = digits.shape[1]
    idx = np.zeros(digits.shape[0], dtype=np.int64)
    for t in range(R):
        k = first + t - lo
        if 0 <= k < L:
            idx += digits[:, k] * p ** t
    return table[idx]


def sliding_product(table: np.ndarray, p: int, R: int, digits: np.ndarray, lo: int) -> np.ndarray:
    """``prod_{j>=1} table(B^{-j} w)`` at finitely supported points ``w``.

    Factor ``j`` reads the digits at positions ``1-j .. R-j``.  Once the read
    window lies entirely below the lowest stored position every remaining factor
    is ``table[0]``, which callers guarantee equals 1, so the product stops there.
    """
    n, L = digits.shape
    hi = lo + L - 1
    a = min(lo, 1) - R + 1
    b = max(hi, R)
    width = b - a + 1
    # window starts s = 1 - j for j = 1 .. 1 - a, as columns of the padded block
    cols = np.arange(-a, -1, -1)
    nwin = width - R + 1
    out = np.empty(n, dtype=table.dtype if np.iscomplexobj(table) else float)
    for c0 in range(0, n, _CHUNK):
        blk = digits[c0:c0 + _CHUNK]
        pad = np.zeros((blk.shape[0], width), dtype=np.int64)
        pad[:, lo - a:lo - a + L] = blk
        idx = pad[:, :nwin].copy()
        for t in range(1, R):
            idx += pad[:, t:t + nwin] * p ** t
        out[c0:c0 + _CHUNK] = np.prod(table[idx[:, cols]], axis=1)
    return out


@dataclass
class GridFunction:
    """Complex samples of a function on G* at the tuples of the window ``[lo..hi]``.

    Each sample is the value at the finitely supported point whose digits
    outside the window are zero.  ``source``, when present, evaluates the same
    function exactly at points off the grid: ``source(digits, lo) -> values``.
    """

    p: int
    lo: int
    hi: int
    values: np.ndarray
    source: Optional[Callable[[np.ndarray, int], np.ndarray]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).ravel()
        # an empty value vector stands for the empty grid
        if self.values.size and self.values.shape != (self.p ** self.length,):
            raise ResolutionError(f"expected {self.p ** self.length} values on [{self.lo}..{self.hi}]")

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1

    @property
    def size(self) -> int:
        return self.values.size

    def digits(self) -> np.ndarray:
        return window_digits(self.p, self.lo, self.hi)

    def array(self) -> np.ndarray:
        """Values as an array with one axis per position, axis 0 = position ``lo``."""
        return self.values.reshape((self.p,) * self.length, order="F")

    def at(self, digits: np.ndarray, lo: int) -> np.ndarray:
        """Values at arbitrary points, exactly if a source is attached, else by grid lookup."""
        if self.source is not None:
            return self.source(digits, lo)
        return self.lookup(digits, lo)

    def lookup(self, digits: np.ndarray, lo: int) -> np.ndarray:
        d = embed(digits, lo, self.lo, self.hi)
        return self.values[digits_to_index(d, self.p)]

    def shifted(self, k: int):
        """``(values, valid)`` of ``f(B^k w)`` on the grid.

        ``B^k`` moves every digit down by ``k``.  A grid point is valid when its
        image still fits the window (no digit pushed past ``lo`` or ``hi``).
        """
        d = self.digits()
        L = self.length
        valid = ~d[:, :k].any(axis=1) if k >= 0 else ~d[:, L + k:].any(axis=1)
        src = d[valid]
        image = np.zeros_like(src)
        if k >= 0:
            image[:, :L - k] = src[:, k:]
        else:
            image[:, -k:] = src[:, :L + k]
        out = np.zeros(self.size, dtype=complex)
        out[valid] = self.values[digits_to_index(image, self.p)]
        return out, valid

    def scaled(self, c: complex) -> "GridFunction":
        src = self.source
        new_src = None if src is None else (lambda d, lo, _s=src: c * _s(d, lo))
        return replace(self, values=c * self.values, source=new_src)


@dataclass
class StepFunction:
    """A function on G constant on the cells of positions ``[lo..hi]``.

    Zero outside ``{x : x_j = 0 for j < lo}``; ``hi`` is the resolution.  Flat
    layout matches :class:`GridFunction`.
    """

    p: int
    lo: int
    hi: int
    values: np.ndarray
    iterations: int = 0
    converged: bool = True

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.p ** (self.hi - self.lo + 1),):
            raise ResolutionError(f"expected {self.p ** (self.hi - self.lo + 1)} cells on [{self.lo}..{self.hi}]")

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1

    def array(self) -> np.ndarray:
        return self.values.reshape((self.p,) * self.length, order="F")

    def digits(self) -> np.ndarray:
        return window_digits(self.p, self.lo, self.hi)

    def norm(self) -> float:
        """L2 norm with Haar measure normalized by ``mu(U) = 1``."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * float(self.p) ** (-self.hi)))


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _tuple_rows(p: int, lo: int, hi: int):
    """Flat indices in lexicographic order of the tuple written ``d_lo d_lo+1 ... d_hi``."""
    L = hi - lo + 1
    d = window_digits(p, lo, hi)
    order = np.lexsort(d.T[::-1]) if L else np.arange(1)
    return order, d


def write_csv(obj, path) -> None:
    """Write a GridFunction, StepFunction or MultiwaveletSpectrum as CSV."""
    spectra = getattr(obj, "spectra", None)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if spectra is not None:
            w.writerow(["filter_index", "tuple_digits", "re", "im"])
            for i, g in enumerate(spectra, start=1):
                for tup, z in _rows(g):
                    w.writerow([i, tup, _fmt(z.real), _fmt(z.imag)])
            return
        w.writerow(["tuple_digits", "re", "im"])
        for tup, z in _rows(obj):
            w.writerow([tup, _fmt(z.real), _fmt(z.imag)])


def _rows(g):
    if g.values.size == 0:
        return
    order, d = _tuple_rows(g.p, g.lo, g.hi)
    for k in order:
        yield " ".join(str(int(v)) for v in d[k]), g.values[k]
