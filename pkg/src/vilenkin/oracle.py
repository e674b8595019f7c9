"""Brute-force frame operator check in the time domain.

The affine system ``psi_{l,j,h}(x) = p^{j/2} psi_l(A^j x - h)`` is realized on
the cells of resolution ``D`` inside the compact subgroup
``U_{-M} = {x : x_i = 0 for i <= -M}``.  ``M`` is chosen so that every member
with ``|j| <= J_inner`` that meets the region lies inside it, so restricted
inner products are exact.  Coefficients are computed scale by scale: the
translates ``h`` act by cyclic rolls of the digit axes, which keeps the cost
proportional to the region size times ``p^{hi}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from ._report import KeyValueReport
from .errors import ResolutionError
from .gframe import MultiwaveletSpectrum
from .grid import GridFunction, StepFunction, window_digits
from .mask import inverse_spectrum

Key = Tuple[int, int]  # (l, j)


def _psi_step(Psi: MultiwaveletSpectrum, l: int, Dpsi: int) -> Tuple[StepFunction, bool]:
    """``psi_l`` at time resolution ``Dpsi`` and whether that resolution is exact."""
    lo, hi = 1 - Dpsi, Psi.hi
    d = window_digits(Psi.p, lo, hi)
    g = GridFunction(Psi.p, lo, hi, Psi.evaluate(d, lo)[l - 1])
    # exact iff the spectrum vanishes once a digit below the window is nonzero
    dd = window_digits(Psi.p, lo - 1, hi)
    probe = dd[dd[:, 0] != 0]
    exact = not np.any(np.abs(Psi.evaluate(probe, lo - 1)[l - 1]) > 1e-12)
    return inverse_spectrum(g), exact


@dataclass
class AffineSystem:
    """Members ``(l, j, h)`` with ``|j| <= J_inner`` meeting ``U_{-M}``, on resolution-``D`` cells."""

    p: int
    D: int
    J_inner: int
    M: int
    psis: List[StepFunction]
    exact: bool

    @property
    def region(self) -> Tuple[int, int]:
        return 1 - self.M, self.D

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.p,) * (self.D + self.M)

    def keys(self) -> List[Key]:
        return [(l, j) for l in range(1, self.p) for j in range(-self.J_inner, self.J_inner + 1)]

    def _layout(self, l: int, j: int):
        psi = self.psis[l - 1]
        a, Dpsi = psi.lo, psi.hi
        base = 1 - self.M
        n_low = a + j - base            # positions pinned by h_k, k < a
        n_mid = 1 - a                   # positions shifted by h_k, a <= k <= 0
        n_keep = Dpsi - a + 1           # positions read by psi
        n_drop = self.D - (Dpsi + j)    # positions above the member's resolution
        return psi, n_low, n_mid, n_keep, n_drop

    def coeff_shape(self, l: int, j: int) -> Tuple[int, ...]:
        _, n_low, n_mid, _, _ = self._layout(l, j)
        return (self.p,) * (n_low + n_mid)

    def norm2(self, f: np.ndarray) -> np.ndarray:
        """Squared L2 norms of ``f`` (leading axis = batch)."""
        return np.sum(np.abs(f.reshape(f.shape[0], -1)) ** 2, axis=1) * float(self.p) ** (-self.D)

    def _kernels(self, psi: StepFunction, n_mid: int) -> np.ndarray:
        """Row ``h`` holds ``psi`` rolled by ``h`` on its first ``n_mid`` axes, flattened."""
        ker = psi.array()
        axes = tuple(range(n_mid))
        rows = [np.roll(ker, h, axis=axes).reshape(-1) if n_mid else ker.reshape(-1)
                for h in np.ndindex(*(self.p,) * n_mid)]
        return np.array(rows)

    def analysis(self, f: np.ndarray) -> Dict[Key, np.ndarray]:
        """``<f, psi_{l,j,h}>`` for every member; ``f`` has shape ``(batch,) + self.shape``."""
        p, b = self.p, f.shape[0]
        out = {}
        F = f
        # finest scale first; each coarser scale sums out one more position
        for j in range(self.J_inner, -self.J_inner - 1, -1):
            if j < self.J_inner:
                F = F.sum(axis=-1)
            for l in range(1, p):
                psi, n_low, n_mid, n_keep, _ = self._layout(l, j)
                K = self._kernels(psi, n_mid)
                # sum_z f[low, z] conj(psi(z - h))
                c = F.reshape(b, p ** n_low, p ** n_keep) @ K.conj().T
                out[(l, j)] = c.reshape((b,) + (p,) * (n_low + n_mid)) * (float(p) ** (j / 2 - self.D))
        return {k: out[k] for k in self.keys()}

    def synthesis(self, coeffs: Dict[Key, np.ndarray]) -> np.ndarray:
        """``sum c_{l,j,h} psi_{l,j,h}``; each coefficient array carries a leading batch axis."""
        p = self.p
        b = next(iter(coeffs.values())).shape[0]
        g = None
        # coarsest scale first; refining adds one constant position per step
        for j in range(-self.J_inner, self.J_inner + 1):
            if g is not None:
                g = np.broadcast_to(g[..., None], g.shape + (p,))
            for l in range(1, p):
                c = coeffs.get((l, j))
                if c is None:
                    continue
                psi, n_low, n_mid, n_keep, _ = self._layout(l, j)
                acc = c.reshape(b, p ** n_low, p ** n_mid) @ self._kernels(psi, n_mid)
                acc = acc.reshape((b,) + (p,) * (n_low + n_keep))
                acc *= float(p) ** (j / 2)
                g = acc if g is None else g + acc
            if g is None:
                _, n_low, _, n_keep, _ = self._layout(1, j)
                g = np.zeros((b,) + (p,) * (n_low + n_keep), dtype=complex)
        return np.ascontiguousarray(g)


def affine_system(Psi: MultiwaveletSpectrum, D: int, J_inner: int) -> AffineSystem:
    """Materialize the inner-scale affine system of ``Psi`` at cell resolution ``D``."""
    Dpsi = D - J_inner
    if Dpsi < 1:
        raise ResolutionError(f"D={D} too small for J_inner={J_inner}; need D > J_inner")
    psis, exact = [], True
    for l in range(1, Psi.p):
        s, ok = _psi_step(Psi, l, Dpsi)
        psis.append(s)
        exact &= ok
    M = J_inner + Psi.hi
    return AffineSystem(Psi.p, D, J_inner, M, psis, exact)


@dataclass
class OracleReport(KeyValueReport):
    statistic: float
    trials: int
    members: int
    cells: int
    exact_resolution: bool
    degenerate: bool


def frame_statistic(S: AffineSystem, f: np.ndarray):
    """``|sum |<f, psi>|^2 / ||f||^2 - 1|`` per batch row; NaN where ``f = 0``."""
    energy = sum(np.sum(np.abs(c.reshape(c.shape[0], -1)) ** 2, axis=1) for c in S.analysis(f).values())
    n2 = S.norm2(f)
    with np.errstate(invalid="ignore", divide="ignore"):
        dev = np.abs(energy / n2 - 1.0)
    return np.where(n2 > 0, dev, np.nan)


def frame_oracle(Psi: MultiwaveletSpectrum, D: int = 8, J_inner: int = 3, trials: int = 100,
                 seed: int = 0, batch: int = 8) -> OracleReport:
    """Largest Parseval deviation over ``trials`` random vectors in the span of inner members.

    A zero system yields ``statistic = 1`` with ``degenerate = true``.
    """
    S = affine_system(Psi, D, J_inner)
    rng = np.random.default_rng(seed)
    worst, degenerate = 0.0, False
    members = sum(int(np.prod(S.coeff_shape(l, j))) for l, j in S.keys())
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        coeffs = {}
        for key in S.keys():
            shp = (b,) + S.coeff_shape(*key)
            coeffs[key] = rng.standard_normal(shp) + 1j * rng.standard_normal(shp)
        stat = frame_statistic(S, S.synthesis(coeffs))
        if np.any(np.isnan(stat)):
            degenerate = True
            stat = np.where(np.isnan(stat), 1.0, stat)
        worst = max(worst, float(stat.max()))
        done += b
    return OracleReport(worst, trials, members, int(np.prod(S.shape)), S.exact, degenerate)
