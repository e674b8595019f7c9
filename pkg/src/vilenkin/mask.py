"""Masks of refinement equations and the refinable functions they define.

A mask of order ``n`` is the Walsh polynomial ``m(w) = sum_{alpha < p^n} a_alpha
conj(W*_alpha(w))``.  It depends only on the digits ``w_1..w_n``, so it is
stored as its table of values on the ``p**n`` resolution-n cosets (the forward
Chrestenson transform of the coefficients).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._report import KeyValueReport
from .errors import (CascadeDivergenceError, InvalidMaskError, NonconvergentProductError,
                     ParseError, ResolutionError)
from .grid import GridFunction, StepFunction, embed, sliding_product, table_at, window_digits
from .group import DUAL, DigitSequence, check_modulus
from .walsh import FORWARD, INVERSE, chrestenson, log_p

THETA_TOL = 1e-12


@dataclass
class Mask:
    p: int
    n: int
    coeffs: np.ndarray
    values: np.ndarray

    @property
    def coeff_sum(self) -> complex:
        return complex(np.sum(self.coeffs))

    @property
    def theta_value(self) -> complex:
        return complex(self.values[0])

    def at(self, digits: np.ndarray, lo: int) -> np.ndarray:
        """Mask values at a batch of points given as digit rows starting at ``lo``."""
        return table_at(self.values, self.p, self.n, digits, lo)

    def with_order(self, n: int) -> "Mask":
        """The same Walsh polynomial viewed as a mask of order ``n >= self.n``."""
        if n < self.n:
            raise ResolutionError(f"cannot lower mask order {self.n} to {n}")
        coeffs = np.zeros(self.p ** n, dtype=complex)
        coeffs[:self.coeffs.size] = self.coeffs
        return mask_from_coeffs(self.p, n, coeffs)


def mask_from_coeffs(p: int, n: int, coeffs) -> Mask:
    check_modulus(p)
    coeffs = np.asarray(coeffs, dtype=complex).ravel()
    if coeffs.size != p ** n:
        raise InvalidMaskError(f"expected {p ** n} coefficients for p={p}, n={n}, got {coeffs.size}")
    return Mask(p, n, coeffs, chrestenson(coeffs, p, FORWARD))


def mask_from_values(p: int, n: int, values) -> Mask:
    check_modulus(p)
    values = np.asarray(values, dtype=complex).ravel()
    if values.size != p ** n:
        raise InvalidMaskError(f"expected {p ** n} values for p={p}, n={n}, got {values.size}")
    return Mask(p, n, chrestenson(values, p, INVERSE), values.copy())


def haar_mask(p: int) -> Mask:
    return mask_from_coeffs(p, 1, np.full(p, 1.0 / p))


def coset_index(w: DigitSequence, n: int) -> int:
    """Index of the resolution-n coset containing ``w`` (digits ``w_1..w_n``)."""
    return sum(w.digit(t + 1) * w.p ** t for t in range(n))


def mask_eval(m: Mask, w: DigitSequence) -> complex:
    if w.p != m.p or w.side != DUAL:
        raise InvalidMaskError("mask_eval needs a dual sequence with the mask's modulus")
    return complex(m.values[coset_index(w, m.n)])


def orbit_energy(values: np.ndarray, p: int) -> np.ndarray:
    """``sum_l |t(w + delta_l)|^2`` per orbit of cosets differing only in ``w_1``."""
    return np.sum(np.abs(values.reshape(-1, p)) ** 2, axis=1)


@dataclass
class MaskDiagnostics(KeyValueReport):
    coeff_sum: complex
    theta_value: complex
    qmf_residual: float


def mask_diagnostics(m: Mask) -> MaskDiagnostics:
    qmf = float(np.max(np.abs(orbit_energy(m.values, m.p) - 1.0)))
    return MaskDiagnostics(m.coeff_sum, m.theta_value, qmf)


class ProductSpectrum:
    """Exact evaluator of ``scale * prod_{j>=1} prod_k t_k(B^{-j} w)`` for coset tables ``t_k``.

    Every table must equal 1 on the zero coset, which makes the product finite
    at finitely supported points.
    """

    def __init__(self, p: int, tables, scale: complex = 1.0):
        self.p = p
        self.tables = []
        for table, R in tables:
            table = np.array(table)
            if abs(table[0] - 1.0) > THETA_TOL:
                raise NonconvergentProductError(
                    f"table value at the zero coset is {complex(table[0])}, not 1")
            table[0] = 1.0
            self.tables.append((table, R))
        self.scale = scale

    def __call__(self, digits: np.ndarray, lo: int) -> np.ndarray:
        out = np.full(digits.shape[0], self.scale, dtype=complex)
        for table, R in self.tables:
            out *= sliding_product(table, self.p, R, digits, lo)
        return out

    def sample(self, lo: int, hi: int) -> GridFunction:
        return GridFunction(self.p, lo, hi, self(window_digits(self.p, lo, hi), lo), source=self)


def refinable_spectrum(m: Mask, K: int) -> GridFunction:
    """``phi^(w) = prod_{j>=1} m(B^{-j} w)`` on the window ``[1-K..n]``.

    On this window factor ``j`` reads positions ``1-j..n-j``, all zero once
    ``j >= n + K``, so the product has exactly ``n + K - 1`` nontrivial factors.
    """
    if K < 0:
        raise ResolutionError("depth K must be nonnegative")
    if abs(m.theta_value - 1.0) > THETA_TOL:
        raise NonconvergentProductError(f"m(theta) = {m.theta_value}, product does not converge to a nonzero limit")
    return ProductSpectrum(m.p, [(m.values, m.n)]).sample(1 - K, m.n)


def _refine_step(arr: np.ndarray, coeffs: np.ndarray, p: int, n: int) -> np.ndarray:
    """One application of ``f -> p sum_alpha a_alpha f(Ax - h_[alpha])``.

    ``arr`` holds f on the cells of positions ``[2-n..D]`` (axis 0 = position
    ``2-n``); f vanishes off ``U_{1-n}``.  The image is projected back onto
    resolution ``D`` by averaging over the digit that ``A`` pulls in from
    position ``D+1``.
    """
    L = arr.ndim
    coarse = arr.mean(axis=L - 1)
    out = np.zeros_like(arr)
    for alpha in range(p ** n):
        a = coeffs[alpha]
        if a == 0:
            continue
        d = [(alpha // p ** t) % p for t in range(n)]
        rolled = coarse
        # axis k of coarse is position 2-n+k; positions 2-n..0 are shifted by the h_[alpha] digits
        for k in range(n - 1):
            if d[n - 2 - k]:
                rolled = np.roll(rolled, d[n - 2 - k], axis=k)
        out[d[n - 1]] += p * a * rolled
    return out


def cascade(m: Mask, D: int, max_iters: int = 64, tol: float = 1e-12) -> StepFunction:
    """Cascade iteration for the refinement equation, seeded with ``1_U``.

    Works on the cells of resolution ``D`` inside ``U_{1-n}``; stops once the
    discrete L2 change is at most ``tol``.
    """
    p, n = m.p, m.n
    if D < n:
        raise ResolutionError(f"cascade resolution D={D} must be at least n={n}")
    lo, L = 2 - n, D + n - 1
    shape = (p,) * L
    arr = np.zeros(shape, dtype=complex)
    # 1_U: digits at positions 2-n..0 vanish
    arr[(0,) * (n - 1)] = 1.0
    cell = float(p) ** (-D)
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        new = _refine_step(arr, m.coeffs, p, n)
        norm = np.sqrt(np.sum(np.abs(new) ** 2) * cell)
        if not np.isfinite(norm) or norm > 1e6:
            raise CascadeDivergenceError(f"cascade L2 norm {norm:.3g} after {it} iterations")
        change = np.sqrt(np.sum(np.abs(new - arr) ** 2) * cell)
        arr = new
        if change <= tol:
            converged = True
            break
    return StepFunction(p, lo, D, arr.reshape(-1, order="F"), iterations=it, converged=converged)


def inverse_spectrum(g: GridFunction) -> StepFunction:
    """Time-domain function whose spectrum is ``g``.

    ``g`` is read as supported on digits ``>= g.lo`` and independent of the
    digits above ``g.hi``; the result lives on the cells of positions
    ``[1-g.hi .. 1-g.lo]``.
    """
    p, L = g.p, g.length
    N = p ** L
    t = chrestenson(g.values, p, INVERSE) * N * float(p) ** (-g.hi)
    # output digit k pairs with spectral position lo+k, i.e. time position 1-lo-k
    arr = t.reshape((p,) * L, order="F")
    arr = np.transpose(arr, axes=range(L - 1, -1, -1))
    return StepFunction(p, 1 - g.hi, 1 - g.lo, arr.reshape(-1, order="F"))


def sample_step(f: StepFunction, lo: int, hi: int) -> np.ndarray:
    """Values of ``f`` at the representatives of the cells of ``[lo..hi]``.

    A representative has zero digits outside the window; ``f`` vanishes at
    points with a nonzero digit below ``f.lo``.
    """
    d = window_digits(f.p, lo, hi)
    below = np.zeros(d.shape[0], dtype=bool)
    if lo < f.lo:
        below = d[:, :min(f.lo, hi + 1) - lo].any(axis=1)
    fd = np.zeros((d.shape[0], f.length), dtype=np.int64)
    a, b = max(lo, f.lo), min(hi, f.hi)
    if a <= b:
        fd[:, a - f.lo:b - f.lo + 1] = d[:, a - lo:b - lo + 1]
    out = f.values[fd @ (f.p ** np.arange(f.length, dtype=np.int64))]
    out[below] = 0.0
    return out


@dataclass
class ScalingChecks(KeyValueReport):
    strang_fix_residual: float
    partition_residual: float
    two_scale_residual: float
    ortho_residual: float
    lowpass_limit_ok: bool
    cascade_converged: bool
    cascade_iterations: int


def scaling_checks(m: Mask, K: int, D: Optional[int] = None) -> ScalingChecks:
    p, n = m.p, m.n
    if K < n - 1:
        raise ResolutionError(f"translate sums need depth K >= n-1 = {n - 1}; window [{2 - n}..{n}] required")
    g = refinable_spectrum(m, K)

    # modified Strang-Fix: phi^ at omega_[alpha], 0 < alpha <= p^K (digits at -K..0)
    alphas = np.arange(1, p ** K + 1, dtype=np.int64)
    pts = np.empty((alphas.size, K + 1), dtype=np.int64)
    a = alphas.copy()
    for t in range(K + 1):
        pts[:, K - t] = a % p
        a //= p
    strang = float(np.max(np.abs(g.source(pts, -K)))) if alphas.size else 0.0

    D = n + K if D is None else D
    phi = cascade(m, D)
    # sum over h in H with lambda(h) < p^K; phi vanishes off U_{1-n} and K >= n-1
    part = phi.array().sum(axis=tuple(range(n - 1))) if n > 1 else phi.array()
    partition = float(np.max(np.abs(part - 1.0)))

    shifted, valid = g.shifted(1)
    two = np.abs(shifted - m.at(g.digits(), g.lo) * g.values)[valid]
    two_scale = float(two.max(initial=0.0))

    # sum over h in H^perp with lambda*(h) < p^K: positions 1-K..0 of the grid
    energy = np.sum(np.abs(g.array()) ** 2, axis=tuple(range(K)))
    ortho = float(np.max(np.abs(energy - 1.0)))

    d = g.digits()
    lim_ok = True
    for j in range(n + K - 1, n + K + 2):
        lim_ok &= bool(np.all(np.abs(np.abs(g.source(d, g.lo + j)) - 1.0) <= 1e-12))

    return ScalingChecks(strang, partition, two_scale, ortho, lim_ok, phi.converged, phi.iterations)


# ----------------------------------------------------------------- mask files

def read_mask(path) -> Mask:
    """Parse a mask file: header ``p <p> n <n> mode <coeffs|values>`` then ``<index> <re> <im>`` rows."""
    with open(path) as fh:
        lines = fh.readlines()
    return parse_mask(lines)


def _data_lines(lines):
    for no, raw in enumerate(lines, start=1):
        s = raw.split("#", 1)[0].strip()
        if s:
            yield no, s


def parse_mask(lines) -> Mask:
    rows = list(_data_lines(lines))
    if not rows:
        raise ParseError("empty mask file")
    no, head = rows[0]
    tok = head.split()
    if len(tok) != 6 or tok[0] != "p" or tok[2] != "n" or tok[4] != "mode" or tok[5] not in ("coeffs", "values"):
        raise ParseError("header must read 'p <p> n <n> mode <coeffs|values>'", no)
    try:
        p, n = int(tok[1]), int(tok[3])
        check_modulus(p)
    except ValueError as exc:
        raise ParseError(str(exc), no) from exc
    N = p ** n
    vals = np.zeros(N, dtype=complex)
    seen = set()
    for no, s in rows[1:]:
        parts = s.split()
        if len(parts) != 3:
            raise ParseError("expected '<index> <re> <im>'", no)
        try:
            k, re_, im_ = int(parts[0]), float(parts[1]), float(parts[2])
        except ValueError as exc:
            raise ParseError(str(exc), no) from exc
        if not 0 <= k < N:
            raise InvalidMaskError(f"line {no}: index {k} outside 0..{N - 1}")
        if k in seen:
            raise ParseError(f"duplicate index {k}", no)
        seen.add(k)
        vals[k] = complex(re_, im_)
    if len(seen) != N:
        raise InvalidMaskError(f"expected {N} entries for p={p}, n={n}, got {len(rows) - 1}")
    if tok[5] == "coeffs":
        return mask_from_coeffs(p, n, vals)
    return mask_from_values(p, n, vals)


def format_mask(m: Mask, mode: str = "values") -> str:
    data = m.values if mode == "values" else m.coeffs
    out = [f"p {m.p} n {m.n} mode {mode}"]
    out += [f"{k} {z.real:.17g} {z.imag:.17g}" for k, z in enumerate(data)]
    return "\n".join(out) + "\n"


def write_mask(m: Mask, path, mode: str = "values") -> None:
    with open(path, "w") as fh:
        fh.write(format_mask(m, mode))
