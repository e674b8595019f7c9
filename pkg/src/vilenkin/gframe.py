"""Generalized filters, pseudo-scaling functions and MRA Parseval frame multiwavelets.

A generalized filter is a ``p``-tuple of coset tables ``m_0..m_{p-1}`` at a
common resolution ``R`` (functions of the digits ``w_1..w_R``).  From it we
build the pseudo-scaling function

    phi^(w) = v(w) * prod_{j>=1} |m_0|(B^{-j} w),    v(w) = prod_{j>=1} mu(B^{-j} w),

with ``mu`` the signum of ``m_0``, and the multiwavelet spectra

    psi^_i(B w) = W*_alpha(w) s_i(B w) m_i(w) phi^(w),   i = 1..p-1.

Every product and frame sum here is exactly finite at finitely supported
points, so the Parseval conditions are checked as identities, not estimates.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ._report import KeyValueReport
from .errors import DegenerateFilterError, NotApplicableError, ParseError, ResolutionError
from .grid import GridFunction, table_at, window_digits
from .group import check_modulus
from .mask import THETA_TOL, ProductSpectrum
from .walsh import index_digits, log_p

PAPER = "paper"
CLASSICAL = "classical"


@dataclass
class GeneralizedFilter:
    """Tables ``m_0..m_{p-1}``; ``tables[i, s]`` is ``m_i`` on the coset with index ``s``."""

    p: int
    R: int
    tables: np.ndarray

    def __post_init__(self):
        check_modulus(self.p)
        self.tables = np.asarray(self.tables, dtype=complex)
        if self.tables.shape != (self.p, self.p ** self.R):
            raise ValueError(f"filter tables must have shape {(self.p, self.p ** self.R)}, got {self.tables.shape}")

    @property
    def m0(self) -> np.ndarray:
        return self.tables[0]

    def at(self, i: int, digits: np.ndarray, lo: int) -> np.ndarray:
        return table_at(self.tables[i], self.p, self.R, digits, lo)

    def with_modulus_lowpass(self) -> "GeneralizedFilter":
        """``{|m_0|, m_1, ..., m_{p-1}}``."""
        t = self.tables.copy()
        t[0] = np.abs(t[0])
        return GeneralizedFilter(self.p, self.R, t)


def haar_filter(p: int) -> GeneralizedFilter:
    """Haar-type filter: ``m_i`` is the indicator of ``w_1 = i``."""
    return GeneralizedFilter(p, 1, np.eye(p, dtype=complex))


def _partners(p: int, R: int, l: int) -> np.ndarray:
    """Index of the coset ``w + delta_l`` for every resolution-R coset index."""
    s = np.arange(p ** R)
    return (s - s % p) + (s % p + l) % p


@dataclass
class FilterValidationReport(KeyValueReport):
    mode: str
    sum_residual: float
    cross_residual_paper: float
    cross_residual_classical: float
    theta_modulus: float
    passed: bool


def validate_filter(F: GeneralizedFilter, mode: str = PAPER, tol: float = 1e-10) -> FilterValidationReport:
    """Check the unit-sum and cross-term conditions on every resolution-R coset.

    The cross-term shift ``beta = B^{-1} gamma`` reduces, by ``H^perp``
    periodicity of the tables, to the classes ``delta_l`` with ``l != 0``.
    ``paper`` mode uses ``m_0 conj(m_0') - sum_{i>=1} m_i conj(m_i')``,
    ``classical`` mode the all-plus sum.
    """
    if mode not in (PAPER, CLASSICAL):
        raise ValueError(f"unknown mode {mode!r}")
    p, R, T = F.p, F.R, F.tables
    if R < 1:
        raise ResolutionError("filter resolution R must be at least 1")
    sum_res = float(np.max(np.abs(np.sum(np.abs(T) ** 2, axis=0) - 1.0)))
    paper = classical = 0.0
    for l in range(1, p):
        other = T[:, _partners(p, R, l)]
        prod = T * other.conj()
        paper = max(paper, float(np.max(np.abs(prod[0] - prod[1:].sum(axis=0)))))
        classical = max(classical, float(np.max(np.abs(prod.sum(axis=0)))))
    cross = paper if mode == PAPER else classical
    ok = sum_res <= tol and cross <= tol
    return FilterValidationReport(mode, sum_res, paper, classical, float(abs(T[0, 0])), ok)


def _check_theta(F: GeneralizedFilter, tol: float):
    th = abs(F.m0[0])
    if abs(th - 1.0) > tol:
        raise DegenerateFilterError(f"|m_0| at the zero coset is {th:.6g}; the product tends to 0 everywhere")


def pseudo_spectrum(F: GeneralizedFilter, K: int, tol: float = THETA_TOL) -> GridFunction:
    """``phi^_{|m_0|} = prod_j |m_0|(B^{-j} w)`` on the window ``[1-K..R]``."""
    _check_theta(F, tol)
    return ProductSpectrum(F.p, [(np.abs(F.m0), F.R)]).sample(1 - K, F.R)


def signum(F: GeneralizedFilter, zero_tol: float = 0.0) -> np.ndarray:
    """``mu = m_0 / |m_0|`` where ``|m_0| > zero_tol``, else 1."""
    m0 = F.m0
    mod = np.abs(m0)
    out = np.ones_like(m0)
    nz = mod > zero_tol
    out[nz] = m0[nz] / mod[nz]
    return out


def cocycle_residual(mu: np.ndarray, R: int, v: GridFunction) -> float:
    """``max |mu(w) - v(B w) conj(v(w))|`` over grid points whose image ``B w`` is on the grid."""
    vb, valid = v.shifted(1)
    m = table_at(mu, v.p, R, v.digits(), v.lo)
    r = np.abs(m - vb * v.values.conj())[valid]
    return float(r.max(initial=0.0))


def solve_v(mu: np.ndarray, p: int, K: int, tol: float = 1e-10) -> GridFunction:
    """Unimodular ``v`` with ``mu(w) = v(B w) conj(v(w))``: ``v = prod_{j>=1} mu(B^{-j} w)``.

    Needs ``mu = 1`` on the zero coset; otherwise no terminating product exists
    at this resolution and the table is rejected.
    """
    mu = np.asarray(mu, dtype=complex)
    R = log_p(mu.size, p)
    if abs(mu[0] - 1.0) > THETA_TOL:
        raise DegenerateFilterError(f"mu at the zero coset is {complex(mu[0])}, not 1")
    v = ProductSpectrum(p, [(mu, R)]).sample(1 - K, R)
    res = cocycle_residual(mu, R, v)
    if res > tol:
        raise ArithmeticError(f"cocycle residual {res:.3g} exceeds {tol:g}")
    return v


def two_scale_residual(F: GeneralizedFilter, phi: GridFunction, table: Optional[np.ndarray] = None) -> float:
    """``max |phi^(B w) - m_0(w) phi^(w)|`` on the resolvable part of the grid."""
    t = F.m0 if table is None else table
    pb, valid = phi.shifted(1)
    m = table_at(t, F.p, F.R, phi.digits(), phi.lo)
    return float(np.abs(pb - m * phi.values)[valid].max(initial=0.0))


@dataclass
class LowPassReport(KeyValueReport):
    theta_modulus: float
    passed: bool
    note: str
    limit_table: np.ndarray = field(repr=False)


def low_pass_check(F: GeneralizedFilter, K: int, tol: float = 1e-10) -> LowPassReport:
    """Generalized low-pass test at finite resolution.

    ``lim_j phi^_{|m_0|}(B^{-j} w)`` is the product of the factors that read
    nonzero digits (empty once the digits of ``B^{-j} w`` sit above ``R-1``)
    times the limit of ``|m_0(theta)|^k``; the vanishing-limit set is therefore
    null exactly when ``|m_0(theta)| = 1``.
    """
    th = float(abs(F.m0[0]))
    if abs(th - 1.0) <= tol:
        theta_lim = 1.0
    elif th < 1.0:
        theta_lim = 0.0
    else:
        theta_lim = np.inf
    mod = np.abs(F.m0).astype(complex)
    mod[0] = 1.0
    d = window_digits(F.p, 1 - K, F.R)
    j = F.R + K - 1
    finite = ProductSpectrum(F.p, [(mod, F.R)])(d, 1 - K + j).real
    limits = finite * theta_lim
    ok = abs(th - 1.0) <= tol
    note = "vanishing-limit set is empty at finite resolution iff |m_0(theta)| = 1"
    return LowPassReport(th, ok, note, limits)


def build_pseudo_scaling(F: GeneralizedFilter, K: int, mode: str = PAPER, tol: float = 1e-10) -> GridFunction:
    """``phi^ = v * phi^_{|m_0|}`` on ``[1-K..R]``; satisfies ``phi^(B w) = m_0(w) phi^(w)``."""
    rep = validate_filter(F, mode, tol)
    if not rep.passed:
        raise NotApplicableError(f"not a generalized filter in {mode} mode:\n{rep.to_text()}")
    if not low_pass_check(F, K, tol).passed:
        raise DegenerateFilterError("filter is not a generalized low-pass filter")
    mu = signum(F)
    v = solve_v(mu, F.p, K)
    mod = pseudo_spectrum(F, K)
    # v * phi^_{|m_0|} = prod mu |m_0| = prod m_0, so one table evaluates both
    src = ProductSpectrum(F.p, [(F.m0, F.R)])
    return GridFunction(F.p, 1 - K, F.R, v.values * mod.values, source=src)


def walsh_table(alpha: int, p: int) -> Tuple[np.ndarray, int]:
    """``W*_alpha`` as a coset table: ``(table, resolution)``."""
    nd = 1
    while p ** nd <= alpha:
        nd += 1
    a = np.array([(alpha // p ** t) % p for t in range(nd)], dtype=np.int64)
    phase = (index_digits(p ** nd, p) @ a) % p
    return np.exp(2j * np.pi * phase / p), nd


@dataclass
class MultiwaveletSpectrum:
    """Spectra ``psi^_1..psi^_{p-1}`` on a common window, plus what built them."""

    p: int
    lo: int
    hi: int
    spectra: List[GridFunction]
    alpha: int
    s_desc: str
    filter: GeneralizedFilter = field(repr=False)
    phi: GridFunction = field(repr=False)
    s_tables: List[Tuple[np.ndarray, int]] = field(repr=False)
    scale: complex = 1.0
    conjugate: bool = False

    def evaluate(self, digits: np.ndarray, lo: int) -> np.ndarray:
        """``psi^_i`` at arbitrary points: array of shape ``(p-1, npoints)``."""
        F, p = self.filter, self.p
        # zeta = B^{-1} eta has the same digits one position higher
        zlo = lo + 1
        base = self.scale * self.phi.at(digits, zlo)
        if self.alpha:
            wt, nd = walsh_table(self.alpha, p)
            base = base * table_at(wt, p, nd, digits, zlo)
        out = np.empty((p - 1, digits.shape[0]), dtype=complex)
        for i in range(1, p):
            s_tab, Rs = self.s_tables[i - 1]
            m = F.at(i, digits, zlo)
            out[i - 1] = base * table_at(s_tab, p, Rs, digits, lo) * (m.conj() if self.conjugate else m)
        return out

    def scaled(self, c: complex) -> "MultiwaveletSpectrum":
        return replace(self, spectra=[g.scaled(c) for g in self.spectra], scale=self.scale * c)


def pfmw_build(F: GeneralizedFilter, phi_hat: GridFunction, alpha: int = 0, s="identity",
               conjugate: bool = False) -> MultiwaveletSpectrum:
    """Multiwavelet spectra from a filter and a pseudo-scaling spectrum.

    ``s`` is ``"identity"`` or a sequence of ``p-1`` unimodular coset tables.
    By default ``psi^_i(B w)`` carries ``m_i(w)`` itself, which is what makes
    the cross terms cancel against ``m_0 conj(m_0')`` for complex ``m_0``;
    ``conjugate=True`` uses ``conj(m_i(w))`` instead, which yields a Parseval
    frame only when ``m_0`` is real.
    """
    p = F.p
    if phi_hat.p != p:
        raise ResolutionError("phi_hat and filter disagree on p")
    if isinstance(s, str):
        if s != "identity":
            raise ValueError(f"unknown s descriptor {s!r}")
        s_tables = [(np.ones(p, dtype=complex), 1) for _ in range(p - 1)]
        desc = "identity"
    else:
        if len(s) != p - 1:
            raise ValueError(f"need {p - 1} s tables, got {len(s)}")
        s_tables = []
        for t in s:
            t = np.asarray(t, dtype=complex)
            if np.max(np.abs(np.abs(t) - 1.0)) > 1e-12:
                raise ValueError("s tables must be unimodular")
            s_tables.append((t, log_p(t.size, p)))
        desc = "tables(" + ",".join(str(r) for _, r in s_tables) + ")"
    nd = walsh_table(alpha, p)[1] if alpha else 1
    lo = phi_hat.lo
    hi = max(phi_hat.hi - (phi_hat.source is None), max(r for _, r in s_tables), nd - 1, 1)
    Psi = MultiwaveletSpectrum(p, lo, hi, [], alpha, desc, F, phi_hat, s_tables, 1.0, conjugate)
    vals = Psi.evaluate(window_digits(p, lo, hi), lo)
    Psi.spectra = [GridFunction(p, lo, hi, vals[i]) for i in range(p - 1)]
    return Psi


@dataclass
class ParsevalReport(KeyValueReport):
    cond1_residual: float
    cond2_residual: float
    tail_max: float
    J: int
    J_required: int
    n_gamma: int
    passed: bool


def _required_shift(Psi: MultiwaveletSpectrum) -> int:
    R = max(Psi.filter.R, max(r for _, r in Psi.s_tables))
    # upper tail: B^{j-1} w lands in H^perp once j > hi, where phi^ vanishes;
    # lower tail: m_i reads the zero coset once j < lo - R + 1
    return max(Psi.hi, R - 1 - Psi.lo, 0)


def _gamma_points(p: int, A_max: int):
    alphas = [a for a in range(1, A_max + 1) if a % p]
    nd = 1
    while p ** nd <= max(alphas, default=0):
        nd += 1
    g = np.zeros((len(alphas), nd), dtype=np.int64)
    for k, a in enumerate(alphas):
        for t in range(nd):
            g[k, nd - 1 - t] = (a // p ** t) % p
    # omega_[a] has digit a_t at position -t, i.e. positions 1-nd..0
    return alphas, g, 1 - nd


def parseval_check(Psi: MultiwaveletSpectrum, A_max: int = 32, J: int = 8, tol: float = 1e-9) -> ParsevalReport:
    """Both Parseval-frame conditions at every grid point of ``Psi``.

    Condition 1 sums ``|psi^_i(B^j w)|^2`` over ``|j| <= J`` (``w != theta``);
    condition 2 sums ``psi^_i(B^j w) conj(psi^_i(B^j (w + gamma)))`` over
    ``0 <= j <= J`` for ``gamma = omega_[a]``, ``1 <= a <= A_max``, ``a`` not
    divisible by ``p``.  Terms outside ``[-J, J]`` vanish identically when
    ``J >= J_required``; ``tail_max`` reports the largest such term actually
    evaluated just past the cut.
    """
    p, lo, hi = Psi.p, Psi.lo, Psi.hi
    need = _required_shift(Psi)
    if J < need:
        raise ResolutionError(f"J={J} too small for the window [{lo}..{hi}]; need J >= {need}")
    d = window_digits(p, lo, hi)
    nonzero = d.any(axis=1)

    vals = {j: Psi.evaluate(d, lo - j) for j in range(-J, J + 1)}
    energy = sum(np.sum(np.abs(v) ** 2, axis=0) for v in vals.values())
    cond1 = float(np.abs(energy - 1.0)[nonzero].max(initial=0.0))

    tail = 0.0
    for j in list(range(J + 1, J + 3)) + list(range(-J - 2, -J)):
        tail = max(tail, float(np.abs(Psi.evaluate(d, lo - j)).max(initial=0.0)))

    alphas, g, glo = _gamma_points(p, A_max)
    cond2 = 0.0
    if alphas:
        plo = min(lo, glo)
        base = np.zeros((d.shape[0], hi - plo + 1), dtype=np.int64)
        base[:, lo - plo:] = d
        gpad = np.zeros((g.shape[0], hi - plo + 1), dtype=np.int64)
        gpad[:, glo - plo:glo - plo + g.shape[1]] = g
        pts = ((base[:, None, :] + gpad[None, :, :]) % p).reshape(-1, base.shape[1])
        acc = np.zeros(pts.shape[0], dtype=complex)
        for j in range(0, J + 1):
            here = np.repeat(vals[j], len(alphas), axis=1)
            there = Psi.evaluate(pts, plo - j)
            acc += np.sum(here * there.conj(), axis=0)
        for j in range(J + 1, J + 3):
            tail = max(tail, float(np.abs(Psi.evaluate(pts, plo - j)).max(initial=0.0))
                       * float(np.abs(Psi.evaluate(d, lo - j)).max(initial=0.0)))
        cond2 = float(np.abs(acc).max())
    ok = cond1 <= tol and cond2 <= tol
    return ParsevalReport(cond1, cond2, tail, J, need, len(alphas), ok)


def telescoping_residual(F: GeneralizedFilter, phi: GridFunction, N: int) -> float:
    """Per-point gap between the two sides of the telescoping identity.

    ``sum_{j=-N}^{N} (1 - |m_0(B^{j-1} w)|^2) |phi^(B^{j-1} w)|^2``
    against ``|phi^(B^{-N-1} w)|^2 - |phi^(B^N w)|^2``, maximized over the grid.
    """
    d = phi.digits()
    lhs = np.zeros(d.shape[0])
    for j in range(-N, N + 1):
        lo = phi.lo - (j - 1)
        lhs += (1.0 - np.abs(F.at(0, d, lo)) ** 2) * np.abs(phi.at(d, lo)) ** 2
    rhs = np.abs(phi.at(d, phi.lo + N + 1)) ** 2 - np.abs(phi.at(d, phi.lo - N)) ** 2
    return float(np.abs(lhs - rhs).max())


def _random_unitary(k: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_filter(p: int, R: int, seed: int) -> GeneralizedFilter:
    """Random filter satisfying the classical conditions exactly up to rounding.

    Each orbit ``{w + delta_l : l}`` of cosets gets its own random unitary
    ``U`` with ``m_i(w + delta_l) = U[i, l]``; the zero orbit uses
    ``diag(1, V)`` so that ``m_0 = 1`` and ``m_i = 0`` at the zero coset.
    """
    check_modulus(p)
    rng = np.random.default_rng(seed)
    tables = np.empty((p, p ** R), dtype=complex)
    for r in range(p ** (R - 1)):
        if r == 0:
            U = np.zeros((p, p), dtype=complex)
            U[0, 0] = 1.0
            U[1:, 1:] = _random_unitary(p - 1, rng)
        else:
            U = _random_unitary(p, rng)
        tables[:, r * p:(r + 1) * p] = U
    return GeneralizedFilter(p, R, tables)


# --------------------------------------------------------------- filter files

def parse_filter(lines) -> GeneralizedFilter:
    """Parse ``p <p> R <R>`` followed by ``p`` blocks ``filter <i>`` + ``<index> <re> <im>`` rows."""
    rows = []
    for no, raw in enumerate(lines, start=1):
        s = raw.split("#", 1)[0].strip()
        if s:
            rows.append((no, s))
    if not rows:
        raise ParseError("empty filter file")
    no, head = rows[0]
    tok = head.split()
    if len(tok) != 4 or tok[0] != "p" or tok[2] != "R":
        raise ParseError("header must read 'p <p> R <R>'", no)
    try:
        p, R = int(tok[1]), int(tok[3])
        check_modulus(p)
    except ValueError as exc:
        raise ParseError(str(exc), no) from exc
    N = p ** R
    tables = np.zeros((p, N), dtype=complex)
    seen = [set() for _ in range(p)]
    cur = None
    for no, s in rows[1:]:
        parts = s.split()
        if parts[0] == "filter":
            if len(parts) != 2 or not parts[1].isdigit() or not 0 <= int(parts[1]) < p:
                raise ParseError(f"bad block header {s!r}", no)
            cur = int(parts[1])
            continue
        if cur is None:
            raise ParseError("data row before any 'filter <i>' block", no)
        if len(parts) != 3:
            raise ParseError("expected '<tuple-index> <re> <im>'", no)
        try:
            k, re_, im_ = int(parts[0]), float(parts[1]), float(parts[2])
        except ValueError as exc:
            raise ParseError(str(exc), no) from exc
        if not 0 <= k < N or k in seen[cur]:
            raise ParseError(f"bad or duplicate index {k} in filter {cur}", no)
        seen[cur].add(k)
        tables[cur, k] = complex(re_, im_)
    for i in range(p):
        if len(seen[i]) != N:
            raise ParseError(f"filter {i} has {len(seen[i])} rows, expected {N}")
    return GeneralizedFilter(p, R, tables)


def read_filter(path) -> GeneralizedFilter:
    with open(path) as fh:
        return parse_filter(fh.readlines())


def format_filter(F: GeneralizedFilter) -> str:
    out = [f"p {F.p} R {F.R}"]
    for i in range(F.p):
        out.append(f"filter {i}")
        out += [f"{k} {z.real:.17g} {z.imag:.17g}" for k, z in enumerate(F.tables[i])]
    return "\n".join(out) + "\n"


def write_filter(F: GeneralizedFilter, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_filter(F))
