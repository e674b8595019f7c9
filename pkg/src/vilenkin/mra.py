"""Blocked sets of a mask and the resulting MRA verdict.

Candidate blocked sets are unions of the resolution-(n-1) cosets of ``U*``,
each identified by its digit tuple ``(w_1, ..., w_{n-1})``.  The subdivision
map sends the coset ``c`` to the resolution-n cosets ``(l, c_1, ..., c_{n-1})``,
``l = 0..p-1``: the dual point ``B^{-1}(w + omega_[l])`` gets digit ``l`` at
position 1 and the digits of ``w`` shifted up by one.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from ._report import KeyValueReport
from .errors import NotApplicableError
from .mask import Mask, mask_diagnostics, scaling_checks

Tuple_ = Tuple[int, ...]


def tuple_index(c: Tuple_, p: int) -> int:
    return sum(d * p ** t for t, d in enumerate(c))


def index_tuple(s: int, p: int, r: int) -> Tuple_:
    return tuple((s // p ** t) % p for t in range(r))


@dataclass(frozen=True)
class CosetSet:
    """A set of resolution-``r`` cosets of ``U*``, as digit tuples ``(w_1..w_r)``."""

    p: int
    r: int
    members: FrozenSet[Tuple_]

    def __contains__(self, c) -> bool:
        return tuple(c) in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members, key=lambda c: tuple_index(c, self.p)))

    def bitset(self) -> np.ndarray:
        out = np.zeros(self.p ** self.r, dtype=bool)
        for c in self.members:
            out[tuple_index(c, self.p)] = True
        return out

    def __str__(self):
        if not self.members:
            return "{}"
        return ";".join("(" + ",".join(map(str, c)) + ")" for c in self)


def default_zero_tol(m: Mask) -> float:
    return 1e-12 * float(np.max(np.abs(m.values)))


def zero_cosets(m: Mask, tol: Optional[float] = None) -> CosetSet:
    """Resolution-n cosets where ``|m| <= tol`` (default: 1e-12 of the largest table entry)."""
    tol = default_zero_tol(m) if tol is None else tol
    idx = np.flatnonzero(np.abs(m.values) <= tol)
    return CosetSet(m.p, m.n, frozenset(index_tuple(int(s), m.p, m.n) for s in idx))


def t_p_children(c: Tuple_, p: int) -> List[Tuple_]:
    return [(l,) + tuple(c) for l in range(p)]


def _violations(members, m: Mask, tol: float):
    """Cosets of ``members`` whose subdivision leaves ``members`` outside the zero set of m."""
    p, n = m.p, m.n
    bad = set()
    for c in members:
        for child in t_p_children(c, p):
            if abs(m.values[tuple_index(child, p)]) > tol and child[:n - 1] not in members:
                bad.add(c)
                break
    return bad


def blocked_set(m: Mask, tol: Optional[float] = None) -> Optional[CosetSet]:
    """The largest blocked set of ``m``, or ``None`` when the mask has none.

    Blocked sets are closed under union, so the greatest fixed point of the
    pruning map contains every blocked set.
    """
    p, n = m.p, m.n
    if n < 2:
        return None
    tol = default_zero_tol(m) if tol is None else tol
    zero = (0,) * (n - 1)
    M = {index_tuple(s, p, n - 1) for s in range(p ** (n - 1))} - {zero}
    while True:
        bad = _violations(M, m, tol)
        if not bad:
            break
        M -= bad
    if not M:
        return None
    out = CosetSet(p, n - 1, frozenset(M))
    ok, why = verify_blocked(out, m, tol)
    if not ok:  # pragma: no cover - the fixed point satisfies every clause by construction
        raise AssertionError(f"pruning produced an invalid blocked set: {why}")
    return out


def verify_blocked(M: CosetSet, m: Mask, tol: Optional[float] = None):
    """Check each clause of the blocked-set definition; returns ``(ok, reason)``."""
    tol = default_zero_tol(m) if tol is None else tol
    if M.p != m.p or M.r != m.n - 1:
        return False, "not a union of resolution-(n-1) cosets"
    if not M.members:
        return False, "empty"
    if any(len(c) != M.r or any(not 0 <= d < M.p for d in c) for c in M.members):
        return False, "malformed coset tuple"
    if (0,) * M.r in M.members:
        return False, "contains the zero coset"
    bad = _violations(M.members, m, tol)
    if bad:
        return False, f"subdivision escapes at {sorted(bad)}"
    return True, "ok"


@dataclass
class MRAVerdict(KeyValueReport):
    verdict: str
    blocked: Optional[CosetSet]
    ortho_residual: float
    cross_check_consistent: bool
    theta_value: complex
    qmf_residual: float

    @property
    def is_mra(self) -> bool:
        return self.blocked is None


def mra_verdict(m: Mask, K: int = 4, tol: float = 1e-10) -> MRAVerdict:
    """Decide MRA generation by the absence of blocked sets.

    The translate-orthonormality residual of the refinable function is computed
    independently and must agree with the verdict (``cross_check_consistent``).
    """
    diag = mask_diagnostics(m)
    if abs(diag.theta_value - 1.0) > tol:
        raise NotApplicableError(f"hypothesis m(theta) = 1 fails: m(theta) = {diag.theta_value}")
    if diag.qmf_residual > tol:
        raise NotApplicableError(f"hypothesis sum_l |m(w + delta_l)|^2 = 1 fails: residual {diag.qmf_residual:.3g}")
    blocked = blocked_set(m)
    checks = scaling_checks(m, max(K, m.n - 1))
    consistent = (blocked is None) != (checks.ortho_residual > 10 * tol)
    return MRAVerdict("MRA" if blocked is None else "not-MRA", blocked, checks.ortho_residual,
                      consistent, diag.theta_value, diag.qmf_residual)
