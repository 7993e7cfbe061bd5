"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data or format error, 3 ``verify``
found a failing claim (the report is still printed).
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .algebra import audit
from .bitmatrix import DimensionError
from .codec import ContainerError, DegenerateKeyError, EncompressedContainer, Key, compression_ratio, dencompress, encompress
from .formats import FormatError, PbmImage, key_parse, key_write, pbm_read, pbm_write
from .maca import build_std, find_maca, maca_profile
from .rules import BOUNDARIES, RuleSpec, rule_matrix
from .verify import run_verification

DEFAULT_SEED = 20240101

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class CommandResult:
    code: int
    output: str


def _fmt_ratio(frac) -> str:
    return f"{frac.numerator}/{frac.denominator}"


def _dims(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--dims", nargs=2, type=int, metavar=("M", "N"), required=required)


def _boundary(p: argparse.ArgumentParser) -> None:
    p.add_argument("--boundary", choices=BOUNDARIES, default="null")


def _load_key(path: str) -> Key:
    return key_parse(Path(path).read_text(encoding="ascii"))


def cmd_rule_matrix(args) -> str:
    return rule_matrix(RuleSpec(args.rule, args.boundary, *args.dims)).dump()


def cmd_std(args) -> str:
    std = build_std(RuleSpec(args.rule, args.boundary, *args.dims))
    lines = ["attractors=" + ",".join(map(str, std.attractors))]
    lines += [f"depth {d}: {c} states" for d, c in sorted(std.depth_counts().items())]
    lines.append("non_reachable=" + ",".join(map(str, std.non_reachable)))
    return "\n".join(lines) + "\n"


def _profile_line(profile) -> str:
    if not profile.is_maca:
        return f"maca=false rank={profile.rank}"
    pef = ",".join(f"({i},{j})" for i, j in profile.pef_cells) or "-"
    ratio = _fmt_ratio(Fraction(profile.pef_bits, profile.spec.cells))
    return f"depth={profile.depth} k={profile.k} rank={profile.rank} pef={pef} ratio={ratio}"


def cmd_profile(args) -> str:
    if args.key:
        spec = _load_key(args.key).spec
    elif args.rule is not None and args.dims:
        spec = RuleSpec(args.rule, args.boundary, *args.dims)
    else:
        raise UsageError("profile needs -k KEY or --rule with --dims")
    return _profile_line(maca_profile(spec)) + "\n"


def cmd_find_maca(args) -> str:
    m, n = args.dims
    lines = ["rule k depth rank ratio"]
    for rule, prof in find_maca(args.boundary, m, n, args.min_k):
        lines.append(f"{rule} {prof.k} {prof.depth} {prof.rank} {_fmt_ratio(Fraction(prof.pef_bits, m * n))}")
    return "\n".join(lines) + "\n"


def cmd_algebra(args) -> str:
    closure, report = audit(args.boundary, *args.dims)
    lines = report.lines()
    if args.table:
        lines.append("table:")
        lines += [" ".join(map(str, row)) for row in closure.product_table.tolist()]
    return "\n".join(lines) + "\n"


def cmd_keygen(args) -> str:
    rng = random.Random(args.seed)
    bm, bn = args.block
    rule = args.rule
    if rule is None:
        usable = [r for r, p in find_maca(args.boundary, bm, bn, 2) if p.k < 1 << (bm * bn)]
        if not usable:
            raise DegenerateKeyError(f"no compressing MACA rule on {bm}x{bn} blocks ({args.boundary})")
        rule = rng.choice(usable)
    enc = args.enc if args.enc is not None else [rng.randrange(256), rng.randrange(256)]
    key = Key(bm, bn, args.boundary, rule, *enc)
    text = key_write(key)
    key_parse(text)
    if args.output:
        Path(args.output).write_text(text, encoding="ascii")
        return f"wrote {args.output}\n"
    return text


def cmd_encompress(args) -> str:
    key = _load_key(args.key)
    image = pbm_read(Path(args.input).read_bytes())
    container = encompress(image.to_state(), key)
    Path(args.output).write_bytes(container.to_bytes())
    return f"{image.m}x{image.n} -> {container.pef_len} PEF bits in a {container.p}x{container.q} payload, ratio {_fmt_ratio(compression_ratio(key))}\n"


def cmd_dencompress(args) -> str:
    key = _load_key(args.key)
    container = EncompressedContainer.from_bytes(Path(args.input).read_bytes())
    state = dencompress(container, key)
    Path(args.output).write_bytes(pbm_write(PbmImage.from_state(state), args.format))
    return f"wrote {state.m}x{state.n} image to {args.output}\n"


def cmd_verify(args) -> str:
    result = run_verification(*args.max_dims, maca_cells=args.maca_cells)
    text = "\n".join(result.lines) + "\n"
    if result.failures:
        text += "failing claims:\n" + "".join(f"  {f}\n" for f in result.failures)
    args._failed = not result.ok
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="caencompress", description="2-D CA rule algebra, MACA analysis and binary-image encompression.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rule-matrix", help="print a rule matrix")
    p.add_argument("--rule", type=int, required=True)
    _dims(p)
    _boundary(p)
    p.set_defaults(func=cmd_rule_matrix)

    p = sub.add_parser("std", help="enumerate the state-transition diagram")
    p.add_argument("--rule", type=int, required=True)
    _dims(p)
    _boundary(p)
    p.set_defaults(func=cmd_std)

    p = sub.add_parser("profile", help="depth, attractors, rank and PEF of a rule")
    p.add_argument("-k", "--key")
    p.add_argument("--rule", type=int)
    _dims(p, required=False)
    _boundary(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("find-maca", help="list MACA rules for a grid")
    _dims(p)
    _boundary(p)
    p.add_argument("--min-k", type=int, default=2)
    p.set_defaults(func=cmd_find_maca)

    p = sub.add_parser("algebra", help="close the basic rule matrices and audit the structure")
    _dims(p)
    _boundary(p)
    p.add_argument("--table", action="store_true")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("keygen", help="write a key file")
    p.add_argument("--block", nargs=2, type=int, metavar=("M", "N"), default=[2, 2])
    _boundary(p)
    p.add_argument("--rule", type=int)
    p.add_argument("--enc", nargs=2, type=int, metavar=("A", "B"))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encompress", help="compress and encrypt a PBM image")
    p.add_argument("-k", "--key", required=True)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_encompress)

    p = sub.add_parser("dencompress", help="decrypt and decompress a container to PBM")
    p.add_argument("-k", "--key", required=True)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--format", choices=("P1", "P4"), default="P1")
    p.set_defaults(func=cmd_dencompress)

    p = sub.add_parser("verify", help="audit the algebraic and MACA claims")
    p.add_argument("--max-dims", nargs=2, type=int, metavar=("M", "N"), default=[3, 3])
    p.add_argument("--maca-cells", type=int, default=6)
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: list[str] | None = None) -> CommandResult:
    try:
        args = build_parser().parse_args(argv)
        args._failed = False
        output = args.func(args)
    except UsageError as exc:
        return CommandResult(EXIT_USAGE, f"{exc}\n")
    except SystemExit as exc:
        # argparse --help
        return CommandResult(EXIT_OK if not exc.code else EXIT_USAGE, "")
    except (FormatError, ContainerError, DegenerateKeyError, DimensionError, ValueError, OSError) as exc:
        return CommandResult(EXIT_DATA, f"error: {exc}\n")
    return CommandResult(EXIT_VERIFY if args._failed else EXIT_OK, output)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    result = run(argv)
    stream = sys.stdout if result.code in (EXIT_OK, EXIT_VERIFY) else sys.stderr
    stream.write(result.output)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
