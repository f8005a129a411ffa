"""Command-line front end for AWGN sweeps.

Single-variant runs emit the sweep CSV; ``--compare`` takes a
semicolon-separated variant list (the same syntax the CSV metadata prints,
e.g. ``"grandab(ab=3);stepgrand(a=2,b=6,p=6)"``) and emits the paired
comparison CSV instead.
"""

from __future__ import annotations

import argparse
import re
import sys

from .codes import build_bch, build_ca_polar, load_alist, load_dense_generator
from .decoder import DecoderSpec, GrandabSpec, OrbgrandSpec, StepGrandSpec
from .sim import SweepConfig, compare_decoders, run_sweep


def resolve_code(token: str):
    if token == "bch127":
        return build_bch(7, 3)
    if token == "capolar128":
        return build_ca_polar(128, 105)
    if token.startswith("alist:"):
        return load_alist(token[len("alist:"):])
    if token.startswith("dense:"):
        return load_dense_generator(token[len("dense:"):])
    raise ValueError(
        f"unknown code {token!r}; expected bch127, capolar128,"
        " alist:<path> or dense:<path>"
    )


def parse_ebn0(text: str) -> tuple[float, ...]:
    """Accept 'start:step:stop' (inclusive) or a comma list of dB values."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad ebn0 range {text!r}; expected start:step:stop")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("ebn0 step must be positive")
        if stop < start:
            raise ValueError("ebn0 stop must not be below start")
        count = int((stop - start) / step + 1e-9) + 1
        return tuple(round(start + i * step, 9) for i in range(count))
    values = tuple(float(p) for p in text.split(",") if p.strip())
    if not values:
        raise ValueError("ebn0 list must not be empty")
    return values


def parse_variant(text: str) -> DecoderSpec:
    """Parse 'name' or 'name(key=value,...)' into a decoder spec."""
    m = re.fullmatch(r"\s*([a-z]+)\s*(?:\((.*)\))?\s*", text)
    if not m:
        raise ValueError(f"bad variant {text!r}")
    name, body = m.group(1), m.group(2)
    kwargs: dict[str, int] = {}
    if body:
        for item in body.split(","):
            if not item.strip():
                continue
            key, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"bad variant parameter {item!r} in {text!r}")
            try:
                kwargs[key.strip()] = int(value)
            except ValueError:
                raise ValueError(
                    f"variant parameter {key.strip()!r} needs an integer,"
                    f" got {value.strip()!r}"
                ) from None
    if name == "grandab":
        return GrandabSpec(max_weight=kwargs.pop("ab", 3), **_none(kwargs, text))
    if name == "orbgrand":
        return OrbgrandSpec(
            lw_max=kwargs.pop("lw", 64), p_max=kwargs.pop("p", 6),
            **_none(kwargs, text),
        )
    if name == "stepgrand":
        return StepGrandSpec(
            alpha=kwargs.pop("a", 2), beta=kwargs.pop("b", 6),
            p_max=kwargs.pop("p", 6), **_none(kwargs, text),
        )
    raise ValueError(f"unknown decoder {name!r} in {text!r}")


def _none(leftover: dict, text: str) -> dict:
    if leftover:
        raise ValueError(f"unknown variant parameters {sorted(leftover)} in {text!r}")
    return {}


def _variant_from_flags(args: argparse.Namespace) -> DecoderSpec:
    if args.decoder == "grandab":
        return GrandabSpec(max_weight=args.ab if args.ab is not None else 3)
    if args.decoder == "orbgrand":
        return OrbgrandSpec(
            lw_max=args.lwmax if args.lwmax is not None else 64,
            p_max=args.pmax if args.pmax is not None else 6,
        )
    return StepGrandSpec(
        alpha=args.alpha if args.alpha is not None else 2,
        beta=args.beta if args.beta is not None else 6,
        p_max=args.pmax if args.pmax is not None else 6,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stepgrand",
        description="Monte-Carlo AWGN sweeps for guess-and-check decoders",
    )
    parser.add_argument("--code", required=True,
                        help="bch127 | capolar128 | alist:<path> | dense:<path>")
    parser.add_argument("--decoder", choices=("grandab", "orbgrand", "stepgrand"),
                        default="stepgrand")
    parser.add_argument("--alpha", type=int, help="step schedule segments")
    parser.add_argument("--beta", type=int, help="step schedule decrement unit")
    parser.add_argument("--pmax", type=int,
                        help="max flips (stepgrand/orbgrand)")
    parser.add_argument("--ab", type=int, help="grandab max weight")
    parser.add_argument("--lwmax", type=int, help="orbgrand max logistic weight")
    parser.add_argument("--ebn0", required=True,
                        help="dB points: start:step:stop or comma list")
    parser.add_argument("--min-frame-errors", type=int, default=100)
    parser.add_argument("--max-frames", type=int, default=100_000_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--quantize", action="store_true",
                        help="pass LLRs through the 5-bit quantizer")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    parser.add_argument("--compare",
                        help="semicolon-separated variant list; at least two")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = resolve_code(args.code)
        ebn0 = parse_ebn0(args.ebn0)
        if args.compare is not None:
            variants = tuple(
                parse_variant(t) for t in args.compare.split(";") if t.strip()
            )
            if len(variants) < 2:
                raise ValueError("--compare needs at least two variants"
                                 " separated by ';'")
        else:
            variants = (_variant_from_flags(args),)
        cfg = SweepConfig(
            code=code, variants=variants, ebn0_db=ebn0,
            min_frame_errors=args.min_frame_errors, max_frames=args.max_frames,
            seed=args.seed, quantize=args.quantize, workers=args.workers,
        )
        if len(variants) == 1:
            run_sweep(cfg, out=args.out)
        else:
            compare_decoders(cfg, out=args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
