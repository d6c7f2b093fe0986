"""Command-line front end: ``btn gen|build|eval|verify|bounds|export``.

Exit codes: 0 success, 1 a verified contract was violated, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

from .approx import build_approx_decoder
from .bounds import bounds_report
from .codes import MAX_B, VectorSet
from .core import BitVec, eval_net
from .netlist import FormatError, format_manifest, format_vectors, parse_manifest, parse_vectors
from .perfect import build_perfect_decoder, optimal_B
from .verify import InstanceSpec, gen_random_set, measure_error, oracle_equivalence, verify_perfect


class UsageError(Exception):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")


def _read(path: str) -> str:
    try:
        with open(path, encoding="ascii") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError("--in", f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".btn-")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_manifest(path: str):
    try:
        return parse_manifest(_read(path))
    except FormatError as exc:
        raise UsageError("--in", str(exc)) from None


def _load_vectors(path: str, flag: str) -> VectorSet:
    try:
        with open(path, encoding="ascii") as fh:
            return parse_vectors(fh.read())
    except OSError as exc:
        raise UsageError(flag, f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(flag, str(exc)) from None


def cmd_gen(args) -> int:
    if args.n is None or args.D is None:
        raise UsageError("--n/--D", "both are required")
    try:
        if args.pattern:
            spec = InstanceSpec(args.n, args.D, args.seed, "adversarial", args.pattern)
        else:
            spec = InstanceSpec(args.n, args.D, args.seed)
    except ValueError as exc:
        raise UsageError("--n", str(exc)) from None
    X = gen_random_set(spec)
    _write(args.out, format_vectors(X))
    return 0


def _choose_B(args, X: VectorSet) -> int:
    if args.B is not None:
        B = args.B
    elif X.n > X.D:
        B = optimal_B(X.n, X.D)
    else:
        B = 2
    if args.B is None and args.mode != "perfect":
        B = max(B, 3)
    minimum = 2 if args.mode == "perfect" else 3
    if B < minimum:
        raise UsageError("--B", f"mode {args.mode} needs B >= {minimum}, got {B}")
    if B > MAX_B:
        raise UsageError("--B", f"B={B} exceeds the capacity limit {MAX_B}")
    if B > X.n and X.n > 1:
        raise UsageError("--B", f"B={B} exceeds n={X.n}")
    return B


def cmd_build(args) -> int:
    if args.input is None:
        raise UsageError("--in", "a vector-set file is required")
    X = _load_vectors(args.input, "--in")
    B = _choose_B(args, X)
    if args.mode == "perfect":
        bundle = build_perfect_decoder(X, B)
    else:
        bundle = build_approx_decoder(X, B, corrected=args.mode == "approx")
    _write(args.out, format_manifest(bundle))
    return 0


def cmd_eval(args) -> int:
    if args.input is None:
        raise UsageError("--in", "a manifest is required")
    bundle = _load_manifest(args.input)
    if (args.code is None) == (args.vector is None):
        raise UsageError("--code/--vector", "give exactly one")
    lines = []
    try:
        if args.vector is not None:
            x = BitVec.from_str(args.vector)
            if bundle.encoder is None:
                raise UsageError("--vector", "codec has a lookup-table encoder; pass --code")
            if x.dim != bundle.D:
                raise UsageError("--vector", f"expected {bundle.D} bits, got {x.dim}")
            code, enc_trace = eval_net(bundle.encoder, x, trace=True)
            lines += [f"encoder.{i + 1} {v}" for i, v in enumerate(enc_trace)]
        else:
            code = BitVec.from_str(args.code)
            if code.dim != bundle.d:
                raise UsageError("--code", f"expected {bundle.d} bits, got {code.dim}")
    except ValueError as exc:
        raise UsageError("--code/--vector", str(exc)) from None
    y, dec_trace = eval_net(bundle.decoder, code, trace=True)
    lines += [f"decoder.{i + 1} {v}" for i, v in enumerate(dec_trace)]
    if args.trace:
        sys.stdout.write("".join(line + "\n" for line in lines))
    sys.stdout.write(f"{y}\n")
    return 0


def cmd_verify(args) -> int:
    if args.input is None or args.vectors is None:
        raise UsageError("--in/--vectors", "a manifest and its vector set are required")
    bundle = _load_manifest(args.input)
    X = _load_vectors(args.vectors, "--vectors")
    if (X.n, X.D) != (bundle.n, bundle.D):
        raise UsageError("--vectors", f"expected n={bundle.n}, D={bundle.D}; got n={X.n}, D={X.D}")
    if bundle.mode == "perfect":
        report = verify_perfect(bundle, X)
        ok = report.satisfied
        extra = ""
    else:
        report = measure_error(bundle, X)
        same, where = oracle_equivalence(bundle, X)
        ok = report.satisfied and same
        extra = "" if same else f"oracle mismatch k {where[0]} j {where[1]}\n"
    _write(args.out, report.text() + extra)
    return 0 if ok else 1


def cmd_bounds(args) -> int:
    if args.n is None or args.D is None:
        raise UsageError("--n/--D", "both are required")
    if args.n < 1 or args.D < 2:
        raise UsageError("--n/--D", "need n >= 1 and D >= 2")
    if args.d is not None and args.d < 1:
        raise UsageError("--d", "must be positive")
    if args.B is not None and args.B < 2:
        raise UsageError("--B", "must be at least 2")
    report = bounds_report(args.n, args.D, args.d, args.B)
    sys.stdout.write("".join(line + "\n" for line in report.lines()))
    return 0


def cmd_export(args) -> int:
    if args.input is None:
        raise UsageError("--in", "a manifest is required")
    bundle = _load_manifest(args.input)
    _write(args.out, format_manifest(bundle))
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "build": cmd_build,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "bounds": cmd_bounds,
    "export": cmd_export,
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="btn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--in", dest="input")
        p.add_argument("--out")
        return p

    p = add("gen", "generate a vector set")
    p.add_argument("--n", type=int)
    p.add_argument("--D", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pattern", help="tile this block pattern down every column")

    p = add("build", "compile a vector set into a codec manifest")
    p.add_argument("--mode", choices=["perfect", "approx", "approx-uncorrected"], default="perfect")
    p.add_argument("--B", type=int)

    p = add("eval", "run a code or vector through a codec")
    p.add_argument("--code")
    p.add_argument("--vector")
    p.add_argument("--trace", action="store_true")

    p = add("verify", "check a codec against its vector set")
    p.add_argument("--vectors")

    p = add("bounds", "print size and width bounds")
    p.add_argument("--n", type=int)
    p.add_argument("--D", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--B", type=int)

    add("export", "re-serialize a manifest")
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
