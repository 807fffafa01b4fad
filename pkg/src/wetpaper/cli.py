"""Command-line interface: ``wetpaper embed|extract|analyze|wetsolve|simulate``.

Exit status is 0 on success, 2 when a wet system has no solution and 1 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, experiments, stego
from .codes import Code, CodeError, hamming_code, load_code, nadler_code, nadler_code_from_sigma
from .gf2 import BitVector
from .pgm import PGMError, lsb_extract, lsb_inject, read_pgm, write_pgm

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def code_from_spec(spec: str) -> Code:
    """``hamming:s``, ``nadler``, ``nadler-sigma`` or ``file:PATH``."""
    if spec == "nadler":
        return nadler_code()
    if spec == "nadler-sigma":
        return nadler_code_from_sigma()
    kind, _, arg = spec.partition(":")
    if kind == "hamming":
        try:
            return hamming_code(int(arg))
        except ValueError as exc:
            raise UsageError(f"bad code spec {spec!r}: {exc}") from None
    if kind == "file":
        try:
            return load_code(arg)
        except OSError as exc:
            raise UsageError(f"cannot read code file {arg!r}: {exc.strerror}") from None
    raise UsageError(f"unknown code spec {spec!r}; use hamming:s, nadler, nadler-sigma or file:PATH")


def parse_message(text: str, length: int) -> BitVector:
    """A 0/1 string, or ``hex:DIGITS:BITS`` read most-significant bit first."""
    if text.startswith("hex:"):
        try:
            _, digits, bits = text.split(":")
            nbits = int(bits)
            value = int(digits, 16)
        except ValueError:
            raise UsageError(f"bad hex message {text!r}; expected hex:DIGITS:BITS") from None
        total = 4 * len(digits)
        if not 0 <= nbits <= total:
            raise UsageError(f"hex message {text!r} has only {total} bits")
        vec = BitVector(nbits, value >> (total - nbits))
    else:
        try:
            vec = BitVector.from_string(text)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if vec.length != length:
        raise UsageError(f"message has {vec.length} bits; the code carries {length}")
    return vec


def parse_wet(spec: str | None, n: int) -> frozenset[int]:
    if not spec:
        return frozenset()
    if spec.startswith("file:"):
        try:
            spec = Path(spec[5:]).read_text().strip()
        except OSError as exc:
            raise UsageError(f"cannot read mask file: {exc}") from None
    try:
        return stego.parse_mask(spec, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def load_instance(path: str | Path) -> stego.WetInstance:
    """Instance file: ``key: value`` lines for code, cover, message and wet."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read instance file {path}: {exc.strerror}") from None
    fields = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        key, sep, value = ln.partition(":")
        if not sep:
            raise UsageError(f"bad instance line {ln!r}; expected 'key: value'")
        fields[key.strip()] = value.strip()
    missing = {"code", "cover", "message"} - fields.keys()
    if missing:
        raise UsageError(f"instance file lacks {', '.join(sorted(missing))}")
    code = code_from_spec(fields["code"])
    try:
        cover = BitVector.from_string(fields["cover"])
    except ValueError as exc:
        raise UsageError(f"bad cover: {exc}") from None
    message = parse_message(fields["message"], code.redundancy)
    wet = parse_wet(fields.get("wet", ""), code.n)
    try:
        return stego.WetInstance(code, cover, message, wet)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, data: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(data, sort_keys=True))
    else:
        for k, v in data.items():
            print(f"{k}: {v}")


def cmd_embed(args) -> int:
    code = code_from_spec(args.code)
    img = _read_image(args.image)
    cover = _lsb(img, code.n)
    message = parse_message(args.message, code.redundancy)
    wet = parse_wet(args.wet, code.n)
    if wet:
        res = stego.solve_wet(stego.WetInstance(code, cover, message, wet))
        if not res.feasible:
            print(f"infeasible: no stego vector keeps the {len(wet)} wet positions and carries the message", file=sys.stderr)
            _emit(args, {"feasible": False, "changed": 0})
            return EXIT_INFEASIBLE
        x, extra = res.stego, {"solutions": res.solution_count}
    else:
        x, extra = stego.embed(code, cover, message), {}
    write_pgm(lsb_inject(img, x), args.out)
    _emit(args, {"feasible": True, "changed": x.distance(cover), **extra})
    return EXIT_OK


def cmd_extract(args) -> int:
    code = code_from_spec(args.code)
    img = _read_image(args.image)
    print(stego.rec(code, _lsb(img, code.n)).to_string())
    return EXIT_OK


def cmd_analyze(args) -> int:
    code = code_from_spec(args.code)
    prof = analysis.profile(code)
    if args.json:
        print(json.dumps(prof.to_dict(), sort_keys=True))
    else:
        sys.stdout.write(prof.to_text())
    if args.figure:
        from .plotting import plot_profile

        plot_profile(prof, args.figure)
    return EXIT_OK


def cmd_wetsolve(args) -> int:
    inst = load_instance(args.instance)
    res = stego.solve_wet(inst)
    data = {
        "feasible": res.feasible,
        "solutions": res.solution_count,
        "changes": res.changes if res.feasible else None,
        "stego": res.stego.to_string() if res.feasible else None,
    }
    _emit(args, data)
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


_SIM_PARAMS = {
    "rank": {"t": 30, "m": 0},
    "overhead": {"t": 30},
    "dry-overhead": {"r": 20, "n": 60},
    "feasibility": {"n": 16, "r": 6, "delta": 8},
}


def _parse_params(kind: str, text: str | None) -> dict[str, int]:
    params = dict(_SIM_PARAMS[kind])
    for item in filter(None, (text or "").split(",")):
        key, sep, value = item.partition("=")
        if not sep or key.strip() not in params:
            raise UsageError(f"bad parameter {item!r} for {kind}; known: {', '.join(params)}")
        try:
            params[key.strip()] = int(value)
        except ValueError:
            raise UsageError(f"parameter {key} needs an integer, got {value!r}") from None
    return params


def cmd_simulate(args) -> int:
    p = _parse_params(args.kind, args.params)
    try:
        if args.kind == "rank":
            report = experiments.monte_carlo_rank(p["t"], p["m"], args.trials, args.seed)
        elif args.kind == "overhead":
            report = experiments.monte_carlo_overhead(p["t"], args.trials, args.seed)
        elif args.kind == "dry-overhead":
            report = experiments.monte_carlo_dry_overhead(p["r"], p["n"], args.trials, args.seed)
        else:
            report = experiments.monte_carlo_wet_feasibility(p["n"], p["r"], p["delta"], args.trials, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    csv_text = report.to_csv()
    if args.csv:
        Path(args.csv).write_text(csv_text)
        if not args.no_figure:
            from .plotting import plot_report

            plot_report(report, Path(args.csv).with_suffix(".png"))
    else:
        sys.stdout.write(csv_text)
    print(report.summary_line())
    return EXIT_OK


def _read_image(path):
    try:
        return read_pgm(path)
    except OSError as exc:
        raise UsageError(f"cannot read image {path}: {exc.strerror}") from None


def _lsb(img, n):
    try:
        return lsb_extract(img, n)
    except PGMError as exc:
        raise UsageError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wetpaper", description="Syndrome steganography with locked positions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("embed", help="hide a message in the LSBs of a PGM image")
    p.add_argument("--image", required=True)
    p.add_argument("--code", required=True, help="hamming:s, nadler, nadler-sigma or file:PATH")
    p.add_argument("--message", required=True, help="0/1 string or hex:DIGITS:BITS")
    p.add_argument("--wet", help="0/1 mask string (1 = locked), 1-based indices, or file:PATH")
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover the message from a stego image")
    p.add_argument("--image", required=True)
    p.add_argument("--code", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("analyze", help="print the parameters of a code")
    p.add_argument("--code", required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--figure", help="write distribution plots to this file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("wetsolve", help="solve a textual wet-paper instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_wetsolve)

    p = sub.add_parser("simulate", help="Monte Carlo experiments against the rank law")
    p.add_argument("kind", choices=sorted(_SIM_PARAMS))
    p.add_argument("--params", help="comma-separated key=value overrides, e.g. t=30,m=2")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="write the CSV here (and a .png figure beside it)")
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CodeError, PGMError) as exc:
        print(f"wetpaper {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
