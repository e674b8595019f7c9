"""Command-line entry point.

Exit status: 0 when the requested check passes, 1 when it fails, 2 on usage
or input errors.  Reports go to stdout as ``key=value`` lines; CSV artifacts
go to ``--output``.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

import numpy as np
from threadpoolctl import threadpool_limits

from . import gframe, mask, mra, oracle, walsh
from .errors import (CascadeDivergenceError, DegenerateFilterError, InvalidLengthError, InvalidMaskError,
                     NonconvergentProductError, NotApplicableError, ParseError, ResolutionError)
from .grid import write_csv

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_input(path: str, kind: str):
    """Load a mask or filter file."""
    if kind == "mask":
        return mask.read_mask(path)
    if kind == "filter":
        return gframe.read_filter(path)
    raise ValueError(f"unknown input kind {kind!r}")


def _emit(*reports) -> None:
    for r in reports:
        print(r.to_text() if hasattr(r, "to_text") else r)


def _cmd_mask_check(a) -> int:
    m = parse_input(a.input, "mask")
    diag = mask.mask_diagnostics(m)
    checks = mask.scaling_checks(m, max(a.K, m.n - 1))
    _emit(diag, checks)
    ok = (abs(diag.theta_value - 1) <= a.tol and diag.qmf_residual <= a.tol
          and max(checks.strang_fix_residual, checks.partition_residual,
                  checks.two_scale_residual) <= a.tol)
    print(f"passed={'true' if ok else 'false'}")
    return OK if ok else FAIL


def _cmd_mra_check(a) -> int:
    m = parse_input(a.input, "mask")
    try:
        v = mra.mra_verdict(m, a.K, a.tol)
    except NotApplicableError as exc:
        print("verdict=not-applicable")
        print(f"reason={exc}")
        return FAIL
    _emit(v)
    return OK if v.is_mra and v.cross_check_consistent else FAIL


def _cmd_refine(a) -> int:
    m = parse_input(a.input, "mask")
    if a.spectrum:
        g = mask.refinable_spectrum(m, a.K)
        print(f"window=[{g.lo}..{g.hi}]")
        print(f"points={g.size}")
        obj, ok = g, True
    else:
        phi = mask.cascade(m, a.D)
        print(f"window=[{phi.lo}..{phi.hi}]")
        print(f"iterations={phi.iterations}")
        print(f"converged={'true' if phi.converged else 'false'}")
        print(f"norm={phi.norm():.6g}")
        obj, ok = phi, phi.converged
    if a.output:
        write_csv(obj, a.output)
    return OK if ok else FAIL


def _cmd_filter_check(a) -> int:
    F = parse_input(a.input, "filter")
    rep = gframe.validate_filter(F, a.mode, a.tol)
    low = gframe.low_pass_check(F, a.K, a.tol)
    _emit(rep)
    print(f"low_pass={'true' if low.passed else 'false'}")
    return OK if rep.passed and low.passed else FAIL


def _build(a):
    F = parse_input(a.input, "filter")
    phi = gframe.build_pseudo_scaling(F, a.K, a.mode, a.tol)
    return F, phi, gframe.pfmw_build(F, phi, alpha=a.alpha)


def _cmd_pfmw_build(a) -> int:
    F, phi, Psi = _build(a)
    print(f"window=[{Psi.lo}..{Psi.hi}]")
    print(f"wavelets={len(Psi.spectra)}")
    print(f"alpha={Psi.alpha}")
    print(f"s={Psi.s_desc}")
    print(f"two_scale_residual={gframe.two_scale_residual(F, phi):.6g}")
    if a.output:
        write_csv(Psi, a.output)
    return OK


def _cmd_pfmw_verify(a) -> int:
    F, phi, Psi = _build(a)
    rep = gframe.parseval_check(Psi, a.A_max, a.J, a.tol)
    _emit(rep)
    ok = rep.passed
    if a.oracle:
        orc = oracle.frame_oracle(Psi, a.D, a.J_inner, a.trials, a.seed)
        print("\n".join("oracle_" + line for line in orc.to_text().splitlines()))
        ok &= orc.statistic <= a.oracle_tol
    if a.output:
        write_csv(Psi, a.output)
    return OK if ok else FAIL


def _read_vector(path: str) -> np.ndarray:
    vals = []
    with open(path) as fh:
        for no, raw in enumerate(fh, start=1):
            s = raw.split("#", 1)[0].strip()
            if not s:
                continue
            parts = s.replace(",", " ").split()
            try:
                nums = [float(x) for x in parts]
            except ValueError as exc:
                raise ParseError(str(exc), no) from exc
            if len(nums) not in (1, 2):
                raise ParseError("expected '<re>' or '<re> <im>'", no)
            vals.append(complex(nums[0], nums[1] if len(nums) == 2 else 0.0))
    return np.array(vals, dtype=complex)


def _cmd_transform(a) -> int:
    v = _read_vector(a.input)
    out = walsh.chrestenson(v, a.p, a.direction, a.algorithm)
    lines = ["index,re,im"] + [f"{k},{z.real:.17g},{z.imag:.17g}" for k, z in enumerate(out)]
    text = "\n".join(lines) + "\n"
    if a.output:
        with open(a.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return OK


def _cmd_bench(a) -> int:
    sizes = [a.p ** n for n in range(1, a.max_n + 1)]
    rows = walsh.bench(sizes, a.p, a.repeats, a.seed)
    text = "N,algorithm,nanoseconds\n" + "".join(f"{N},{alg},{ns}\n" for N, alg, ns in rows)
    if a.output:
        with open(a.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return OK


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vilenkin", description="Wavelet tools on the Vilenkin group.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, K=4):
        sp.add_argument("input")
        sp.add_argument("--K", type=int, default=K, help="grid depth below position 1")
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("-o", "--output")

    def filter_opts(sp):
        sp.add_argument("--mode", choices=[gframe.PAPER, gframe.CLASSICAL], default=gframe.CLASSICAL)
        sp.add_argument("--alpha", type=int, default=0)

    sp = sub.add_parser("mask-check", help="mask diagnostics and scaling-function checks")
    common(sp)
    sp.set_defaults(func=_cmd_mask_check)

    sp = sub.add_parser("mra-check", help="blocked-set MRA verdict")
    common(sp)
    sp.set_defaults(func=_cmd_mra_check, tol=1e-10)

    sp = sub.add_parser("refine", help="cascade refinement or spectral samples to CSV")
    common(sp)
    sp.add_argument("--D", type=int, default=8, help="time resolution")
    sp.add_argument("--spectrum", action="store_true", help="write spectral samples instead")
    sp.set_defaults(func=_cmd_refine)

    sp = sub.add_parser("filter-check", help="generalized filter conditions")
    common(sp, K=2)
    filter_opts(sp)
    sp.set_defaults(func=_cmd_filter_check)

    sp = sub.add_parser("pfmw-build", help="build multiwavelet spectra")
    common(sp, K=2)
    filter_opts(sp)
    sp.set_defaults(func=_cmd_pfmw_build)

    sp = sub.add_parser("pfmw-verify", help="check both Parseval frame conditions")
    common(sp, K=2)
    filter_opts(sp)
    sp.add_argument("--J", type=int, default=8)
    sp.add_argument("--A-max", "--A_max", dest="A_max", type=int, default=32)
    sp.add_argument("--oracle", action="store_true", help="also run the time-domain frame oracle")
    sp.add_argument("--D", type=int, default=8)
    sp.add_argument("--J-inner", "--J_inner", dest="J_inner", type=int, default=3)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--oracle-tol", dest="oracle_tol", type=float, default=1e-6)
    sp.set_defaults(func=_cmd_pfmw_verify)

    sp = sub.add_parser("transform", help="Chrestenson transform of a vector file")
    sp.add_argument("input")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--direction", choices=[walsh.FORWARD, walsh.INVERSE], default=walsh.FORWARD)
    sp.add_argument("--algorithm", choices=[walsh.FAST, walsh.NAIVE], default=walsh.FAST)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=_cmd_transform)

    sp = sub.add_parser("bench", help="time naive against fast transform")
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--max-n", dest="max_n", type=int, default=8)
    sp.add_argument("--repeats", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=_cmd_bench)
    return ap


def _threads() -> Optional[int]:
    raw = os.environ.get("VW_THREADS")
    if raw is None or raw == "":
        return None
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"VW_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise UsageError(f"VW_THREADS must be a positive integer, got {raw!r}")
    return n


def main(argv: Optional[List[str]] = None) -> int:
    ap = _parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        n = _threads()
        with threadpool_limits(limits=n):
            return a.func(a)
    except (UsageError, ParseError, InvalidMaskError, InvalidLengthError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (NotApplicableError, DegenerateFilterError, NonconvergentProductError,
            CascadeDivergenceError, ResolutionError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
