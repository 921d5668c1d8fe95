"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or input error, 3 resource guard.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .algebra import jacobi_check, restrictedness_check, simplicity_check
from .cohomology import DEFAULT_MAX_TRIPLES, delta_map, delta_map_table, h2_basis, is_cocycle
from .constructors import DEFAULT_MAX_DIM, FAMILIES, ConstructionError, ResourceGuardError, construct
from .extensions import ExtensionError, build_extension, corollary_extension
from .io import FormatError, parse_cocycles, read_algebra, save_algebra, write_algebra, write_cocycles
from .restricted import h2star_basis
from .tables import formula_rows, reference_values, report_instances

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

CHECKS = {
    "jacobi": lambda alg, a: jacobi_check(alg),
    "restricted": lambda alg, a: restrictedness_check(alg, samples=a.samples, seed=a.seed),
    "simple": lambda alg, a: simplicity_check(alg, seed=a.seed),
}


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_construct(a) -> int:
    alg = construct(a.family, a.n, a.p, max_dim=a.max_dim)
    _emit(write_algebra(alg, [f"{a.family} n={a.n} p={a.p}"]), a.out)
    if a.out:
        print(f"wrote {alg.name} (dim {alg.dim}) to {a.out}")
    return EXIT_OK


def cmd_verify(a) -> int:
    alg = read_algebra(a.file)
    names = [c.strip() for c in a.checks.split(",") if c.strip()]
    bad = [c for c in names if c not in CHECKS]
    if bad:
        raise UsageError(f"unknown check(s) {', '.join(bad)}; choose from {', '.join(CHECKS)}")
    ok = True
    for name in names:
        rep = CHECKS[name](alg, a)
        print(f"{name}: {rep.status} ({rep.message})")
        ok &= rep.passed
    return EXIT_OK if ok else EXIT_FAIL


def cmd_h2(a) -> int:
    alg = read_algebra(a.file)
    rep = h2_basis(alg, max_triples=a.max_triples, workers=a.workers)
    print(f"dim g = {alg.dim}")
    print(f"dim H1 = {rep.h1_dim}")
    print(f"dim H2 = {rep.h2_dim}")
    if a.cocycles_out:
        Path(a.cocycles_out).write_text(write_cocycles(rep.h2_reps, [f"H2 representatives of {alg.name or a.file}"]))
    return EXIT_OK


def cmd_h2star(a) -> int:
    alg = read_algebra(a.file)
    rep = h2star_basis(alg, check=True, samples=a.samples, seed=a.seed)
    print(f"dim g = {alg.dim}")
    print(f"dim H2 = {rep.h2_dim}")
    print(f"dim H2* = {rep.h2star_dim}")
    if a.basis_out:
        d = Path(a.basis_out)
        d.mkdir(parents=True, exist_ok=True)
        width = len(str(max(rep.h2star_dim - 1, 0)))
        for k, rc in enumerate(rep.basis):
            kind = "frobenius" if k < alg.dim else "lifted"
            (d / f"rc_{k:0{width}d}.txt").write_text(write_cocycles([rc], [f"restricted cocycle {k} ({kind})"]))
    return EXIT_OK


def _load_one_cocycle(path: str, alg):
    recs = parse_cocycles(Path(path).read_text())
    if len(recs) != 1:
        raise UsageError(f"{path}: expected one cocycle record, found {len(recs)}")
    return recs[0].restricted(alg)


def cmd_extend(a) -> int:
    alg = read_algebra(a.file)
    try:
        if a.frobenius is not None:
            ext = corollary_extension(alg, a.frobenius, samples=a.samples, seed=a.seed)
        else:
            ext = build_extension(alg, _load_one_cocycle(a.cocycle, alg), samples=a.samples, seed=a.seed)
    except IndexError as e:
        raise UsageError(str(e)) from None
    except ExtensionError as e:
        print(f"extension failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    comments = [f"source: {alg.name or a.file} (dim {alg.dim})", f"provenance: {ext.provenance}", "central element: last basis vector"]
    if a.cocycle:
        comments.append(f"cocycle file: {a.cocycle}")
    save_algebra(ext.algebra, a.out, comments)
    print(f"wrote extension of dim {ext.algebra.dim} to {a.out}")
    return EXIT_OK


def cmd_delta_map(a) -> int:
    alg = read_algebra(a.file)
    recs = parse_cocycles(Path(a.cocycle).read_text())
    rng = np.random.default_rng(a.seed)
    status = EXIT_OK
    for r, rec in enumerate(recs):
        phi = rec.restricted(alg).phi
        if not is_cocycle(alg, phi):
            print(f"record {r}: not a cocycle; Delta is only defined on cocycles")
            status = EXIT_FAIL
            continue
        table = delta_map_table(alg, phi)
        nz = np.argwhere(table)
        rand_bad = 0
        for _ in range(a.samples):
            g, h = rng.integers(0, alg.p, (2, alg.dim))
            rand_bad += bool(delta_map(alg, phi, g, h))
        if len(nz) == 0 and rand_bad == 0:
            print(f"record {r}: Delta = 0 on all {alg.dim * alg.dim} basis pairs and {a.samples} random pairs")
        else:
            status = EXIT_FAIL
            print(f"record {r}: Delta nonzero on {len(nz)} basis pairs and {rand_bad} random pairs")
            for i, j in nz[:20].tolist():
                print(f"  Delta(x_{i}, x_{j}) = {table[i, j]}")
    return status


def _report_row(name, dim, h2, h2s, note=""):
    return f"{name:<12} {dim:>10} {h2:>4} {h2s:>10}  {note}".rstrip()


def report_lines(p: int, max_dim: int, samples: int = 5, seed: int = 0, timings: bool = False) -> list[str]:
    zero, nonzero = [], []
    for inst in report_instances(p):
        d, h2_ref, hs_ref = reference_values(inst.family, inst.n, p)
        target = zero if h2_ref == 0 else nonzero
        if d > max_dim:
            target.append(_report_row(inst.name, d, "-", "-", f"skipped (dim {d} > budget)"))
            continue
        t0 = time.perf_counter()
        alg = construct(inst.family, inst.n, p, max_dim=max_dim)
        rep = h2star_basis(alg, check=True, samples=samples, seed=seed)
        same = (alg.dim, rep.h2_dim, rep.h2star_dim) == (d, h2_ref, hs_ref)
        note = "computed, matches closed form" if same else f"computed, closed form gives ({d}, {h2_ref}, {hs_ref})"
        if timings:
            note += f" [{time.perf_counter() - t0:.1f}s]"
        target.append(_report_row(inst.name, alg.dim, rep.h2_dim, rep.h2star_dim, note))
    for f in formula_rows(p):
        note = "formula" + (f", {f.note}" if f.note else "")
        (zero if f.h2 == "0" else nonzero).append(_report_row(f.name, f.dim, f.h2, f.h2star, note))
    head = _report_row("algebra", "dim", "H2", "H2*", "source")
    return [
        f"# restricted simple Lie algebras over GF({p}), dimension budget {max_dim}",
        "",
        "## algebras with H2 = 0 (dim H2* = dim g)",
        head,
        *zero,
        "",
        "## algebras with H2 != 0",
        head,
        *nonzero,
    ]


def cmd_report(a) -> int:
    print("\n".join(report_lines(a.p, a.max_dim, samples=a.samples, seed=a.seed, timings=a.timings)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="reslie", description="Restricted simple Lie algebras over GF(p) and their second cohomology.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, seed=True, samples=50):
        if seed:
            sp.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
        sp.add_argument("--samples", type=int, default=samples, help=f"random samples per check (default {samples})")

    s = sub.add_parser("construct", help="build an algebra and write its structure constants")
    s.add_argument("--family", required=True, choices=FAMILIES)
    s.add_argument("--n", type=int, required=True, help="rank parameter (matrix size for sl/psl)")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--out", help="output file (default stdout)")
    s.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", help="run structural gates on an algebra file")
    s.add_argument("file")
    s.add_argument("--checks", default="jacobi,restricted", help="comma list from jacobi,restricted,simple (default jacobi,restricted)")
    common(s)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("h2", help="dim H1, dim H2 and representatives")
    s.add_argument("file")
    s.add_argument("--cocycles-out")
    s.add_argument("--max-triples", type=int, default=DEFAULT_MAX_TRIPLES)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_h2)

    s = sub.add_parser("h2star", help="restricted H2 basis")
    s.add_argument("file")
    s.add_argument("--basis-out", help="directory for one cocycle file per basis element")
    common(s, samples=10)
    s.set_defaults(func=cmd_h2star)

    s = sub.add_parser("extend", help="build a restricted central extension")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--frobenius", type=int, metavar="I", help="0-based basis index i for (0, omega_i)")
    g.add_argument("--cocycle", metavar="FILE")
    s.add_argument("--out", required=True)
    common(s)
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("delta-map", help="evaluate the Delta obstruction on a cocycle file")
    s.add_argument("file")
    s.add_argument("--cocycle", required=True)
    common(s, samples=100)
    s.set_defaults(func=cmd_delta_map)

    s = sub.add_parser("report", help="table of dim g, dim H2, dim H2* over the implemented families")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--max-dim", type=int, required=True)
    s.add_argument("--timings", action="store_true", help="append wall-clock time per computed row")
    common(s, samples=5)
    s.set_defaults(func=cmd_report)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return a.func(a)
    except ResourceGuardError as e:
        print(f"resource guard: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, FormatError, ConstructionError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
