"""Command-line interface.

Four entry points share this module: `sring` (construction and analysis of
single S-rings), `ci` (CI tests), `catalog` (named constructions and the
classification), and `verify` (property suites).

Exit codes: 0 pass/success, 1 property failure, 2 usage or input error,
3 timeout or size limit.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Optional

from . import analysis, build, catalog, gfp, perms, serial, sring as sr, suites
from .errors import InputError, PropertyFailure, SizeLimitError, TimeoutExceeded
from .gfp import GroupContext

EXIT_PASS = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_USAGE = 2
EXIT_TIMEOUT = 3


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")


def _write_text(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_set(ctx: GroupContext, spec: str) -> list[int]:
    """Parse 'a,b,c' or 'a,b,c;d,e,f' of coordinates into element indices."""
    out = []
    spec = spec.strip()
    if not spec:
        return out
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        coords = [int(tok) for tok in part.split(",") if tok.strip() != ""]
        if len(coords) == ctx.n:
            out.append(ctx.index([c % ctx.p for c in coords]))
        elif len(coords) == 1:
            out.append(coords[0])
        else:
            raise InputError(
                f"set entry {part!r} has {len(coords)} coordinates, expected {ctx.n}"
            )
    return out


def _parse_matrices(ctx: GroupContext, text: str) -> list[gfp.Matrix]:
    """Matrix file: n rows of n entries per matrix, blank line separated."""
    blocks = [b for b in text.strip().split("\n\n") if b.strip()]
    mats = []
    for block in blocks:
        rows = []
        for line in block.strip().splitlines():
            rows.append(tuple(int(tok) % ctx.p for tok in line.split()))
        if len(rows) != ctx.n or any(len(r) != ctx.n for r in rows):
            raise InputError(f"matrix block is not {ctx.n}x{ctx.n}: {block!r}")
        mats.append(tuple(rows))
    return mats


def _deadline(seconds: Optional[float]) -> Optional[float]:
    return None if seconds is None else time.monotonic() + seconds


# ---------------------------------------------------------------------------
# sring group
# ---------------------------------------------------------------------------


def _build_sring_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sring", description="S-ring operations")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p_verify = sub.add_parser("verify", help="check the S-ring axioms of a file")
    p_verify.add_argument("file")

    p_gen = sub.add_parser("gen", help="generated S-ring of a subset")
    p_gen.add_argument("--p", type=int, required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--set", required=True, help="'a,b,c' coords or indices, ';'-separated")
    p_gen.add_argument("--out")

    p_mat = sub.add_parser("from-matrices", help="transitivity module of matrix generators")
    p_mat.add_argument("--p", type=int, required=True)
    p_mat.add_argument("--n", type=int, required=True)
    p_mat.add_argument("matrix_file")
    p_mat.add_argument("--out")

    p_aut = sub.add_parser("aut", help="automorphism group of an S-ring file")
    p_aut.add_argument("file")
    p_aut.add_argument("--timeout", type=float, default=None)
    p_aut.add_argument("--out")

    p_dec = sub.add_parser("decompose", help="wedge decomposability witness")
    p_dec.add_argument("file")

    p_quot = sub.add_parser("quotient", help="quotient by an A-subgroup")
    p_quot.add_argument("file")
    p_quot.add_argument("--by", required=True, help="basis vectors 'a,b,c;d,e,f'")
    p_quot.add_argument("--out")
    return ap


def main_sring(argv: Optional[list[str]] = None) -> int:
    ap = _build_sring_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return _run_sring(args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TimeoutExceeded, SizeLimitError) as exc:
        print(f"exceeded: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT


def _run_sring(args) -> int:
    if args.cmd == "verify":
        text = _read_text(args.file)
        try:
            ring = serial.parse_sring(text)
        except InputError as exc:
            print(f"invalid: {exc}")
            return EXIT_PROPERTY_FAILURE
        print(f"valid: rank {ring.rank} over p={ring.ctx.p} n={ring.ctx.n}")
        return EXIT_PASS
    if args.cmd == "gen":
        ctx = GroupContext(args.p, args.n)
        elems = _parse_set(ctx, args.set)
        ring = build.generated_sring(ctx, elems)
        _write_text(args.out, serial.serialize_sring(ring))
        return EXIT_PASS
    if args.cmd == "from-matrices":
        ctx = GroupContext(args.p, args.n)
        mats = _parse_matrices(ctx, _read_text(args.matrix_file))
        for m in mats:
            if not gfp.is_invertible(ctx.p, m):
                raise InputError("matrix generator is singular")
        ring = build.transitivity_module(ctx, mats)
        _write_text(args.out, serial.serialize_sring(ring))
        return EXIT_PASS
    if args.cmd == "aut":
        ring = serial.parse_sring(_read_text(args.file))
        group = analysis.aut_group(ring, deadline=_deadline(args.timeout))
        text = serial.report_text(
            [("degree", group.degree), ("order", group.order)]
        ) + serial.serialize_permgroup(group)
        _write_text(args.out, text)
        return EXIT_PASS
    if args.cmd == "decompose":
        ring = serial.parse_sring(_read_text(args.file))
        witness = analysis.decomposability_witness(ring)
        if witness is None:
            print("indecomposable")
        else:
            e, f = witness
            print(f"decomposable: E basis {list(e.basis)}, F basis {list(f.basis)}")
        return EXIT_PASS
    if args.cmd == "quotient":
        ring = serial.parse_sring(_read_text(args.file))
        vectors = []
        for part in args.by.split(";"):
            coords = [int(tok) % ring.ctx.p for tok in part.split(",")]
            vectors.append(coords)
        sub = gfp.rref_span(ring.ctx, vectors)
        out = build.quotient_sring(ring, sub)
        _write_text(args.out, serial.serialize_sring(out))
        return EXIT_PASS
    raise InputError(f"unknown command {args.cmd}")


# ---------------------------------------------------------------------------
# ci group
# ---------------------------------------------------------------------------


def _build_ci_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ci", description="Cayley isomorphism tests")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p_sub = sub.add_parser("subset", help="CI test for a subset")
    p_sub.add_argument("--p", type=int, required=True)
    p_sub.add_argument("--n", type=int, required=True)
    p_sub.add_argument("--set", required=True)
    p_sub.add_argument("--timeout", type=float, default=None)

    p_ring = sub.add_parser("sring", help="CI test for an S-ring file")
    p_ring.add_argument("file")
    p_ring.add_argument("--timeout", type=float, default=None)
    return ap


def main_ci(argv: Optional[list[str]] = None) -> int:
    ap = _build_ci_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        if args.cmd == "subset":
            ctx = GroupContext(args.p, args.n)
            elems = _parse_set(ctx, args.set)
            verdict = analysis.is_ci_subset(ctx, elems, deadline=_deadline(args.timeout))
            print("CI" if verdict else "not CI")
            return EXIT_PASS if verdict else EXIT_PROPERTY_FAILURE
        if args.cmd == "sring":
            ring = serial.parse_sring(_read_text(args.file))
            verdict = analysis.is_ci_sring(ring, deadline=_deadline(args.timeout))
            print(
                f"{'CI' if verdict.is_ci else 'not CI'}"
                + (
                    f" (regular subgroups: {verdict.regular_count})"
                    if verdict.regular_count is not None
                    else f" ({verdict.note})"
                )
            )
            return EXIT_PASS if verdict.is_ci else EXIT_PROPERTY_FAILURE
        raise InputError(f"unknown command {args.cmd}")
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TimeoutExceeded, SizeLimitError) as exc:
        print(f"exceeded: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT


# ---------------------------------------------------------------------------
# catalog group
# ---------------------------------------------------------------------------


def _build_catalog_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="catalog", description="named constructions")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p_t1 = sub.add_parser("table1", help="classification of unitriangular modules on Z_p^3")
    p_t1.add_argument("--p", type=int, required=True)
    p_t1.add_argument("--out")
    p_t1.add_argument("--json", action="store_true")

    p_exc = sub.add_parser("exceptional", help="the indecomposable Jordan-block S-ring")
    p_exc.add_argument("--p", type=int, required=True)
    p_exc.add_argument("--out")

    p_ll2 = sub.add_parser("ll2", help="the rank-3 fixed-space pair construction on Z_p^5")
    p_ll2.add_argument("--p", type=int, required=True)
    p_ll2.add_argument("--out")
    return ap


def main_catalog(argv: Optional[list[str]] = None) -> int:
    ap = _build_catalog_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        if args.cmd == "table1":
            report = catalog.build_table1(args.p)
            if args.json:
                _write_text(args.out, serial.report_json(report.to_json_dict()))
            else:
                _write_text(args.out, "\n".join(report.summary_lines()) + "\n")
            return EXIT_PASS
        if args.cmd == "exceptional":
            ring = catalog.exceptional_sring(args.p)
            _write_text(args.out, serial.serialize_sring(ring))
            return EXIT_PASS
        if args.cmd == "ll2":
            ring, _ = catalog.ll2_sring(args.p)
            _write_text(args.out, serial.serialize_sring(ring))
            return EXIT_PASS
        raise InputError(f"unknown command {args.cmd}")
    except PropertyFailure as exc:
        print(f"property failure: {exc}", file=sys.stderr)
        return EXIT_PROPERTY_FAILURE
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TimeoutExceeded, SizeLimitError) as exc:
        print(f"exceeded: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT


# ---------------------------------------------------------------------------
# verify group
# ---------------------------------------------------------------------------


def _build_verify_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verify", description="property suites")
    sub = ap.add_subparsers(dest="cmd", required=True)
    p_suite = sub.add_parser("suite", help="run a registered property suite")
    p_suite.add_argument("--name", required=True)
    p_suite.add_argument("--p", type=int, required=True)
    p_suite.add_argument("--seed", type=int, default=0)
    p_suite.add_argument("--trials", type=int, default=None)
    p_suite.add_argument("--json", action="store_true")
    p_suite.add_argument("--out")
    return ap


def main_verify(argv: Optional[list[str]] = None) -> int:
    ap = _build_verify_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        if args.cmd == "suite":
            rep = suites.run_suite(args.name, args.p, seed=args.seed, trials=args.trials)
            if args.json:
                _write_text(args.out, serial.report_json(rep.to_json_dict()))
            else:
                _write_text(args.out, "\n".join(rep.summary_lines()) + "\n")
            return EXIT_PASS if rep.passed else EXIT_PROPERTY_FAILURE
        raise InputError(f"unknown command {args.cmd}")
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TimeoutExceeded, SizeLimitError) as exc:
        print(f"exceeded: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT


def main(argv: Optional[list[str]] = None) -> int:
    """Dispatcher: first token picks the command group."""
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        print("usage: srings {sring|ci|catalog|verify} ...", file=sys.stderr)
        return EXIT_USAGE
    group, rest = argv[0], argv[1:]
    mains = {
        "sring": main_sring,
        "ci": main_ci,
        "catalog": main_catalog,
        "verify": main_verify,
    }
    if group not in mains:
        print(f"unknown command group {group!r}", file=sys.stderr)
        return EXIT_USAGE
    return mains[group](rest)


if __name__ == "__main__":
    sys.exit(main())
