"""Command line interface.

    brickwords {balance|code|infer|verify|certify|pipeline|render} [flags] CONFIG

CONFIG is a path to a config file or an inline config string (it is
treated as inline when it contains "->").  Flags override config
options.  Exit codes: 0 pass, 1 verdict fail, 2 input error, 3 cap or
bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .balance import balanced_pair_algorithm, find_initial_balanced_pair
from .bricks import SimultaneousCoding, render_diagram, simultaneous_coding
from .config import ALL_STAGES, RunConfig, parse_run_config
from .errors import BrickwordsError, OffsetBoundExceeded, ParseError
from .inference import (
    CandidateSubstitution,
    derive_correction_maps,
    verify_joins,
    verify_projection,
)
from .pipeline import EXIT_CODES, brick_json, mu_json, pipeline
from .words import (
    Alphabet,
    Morphism,
    Word,
    fixed_point_prefix,
    power,
    prolongable_seeds,
)

__all__ = ["main"]


def _load_config(arg: str, overrides: argparse.Namespace) -> RunConfig:
    if "->" in arg:
        text = arg
    elif os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    else:
        raise ParseError(f"config file {arg!r} does not exist")
    config = parse_run_config(text)
    for key in (
        "order", "length", "offset_bound", "power", "bound", "max_image_len",
        "horizon", "letter", "derived", "scan_length", "node_budget",
    ):
        value = getattr(overrides, key, None)
        if value is not None:
            setattr(config, key, value)
    if getattr(overrides, "seeds", None) is not None:
        parts = overrides.seeds.split(",")
        if len(parts) != 2:
            raise ParseError("--seeds needs two comma-separated letters")
        config.seeds = (parts[0], parts[1])
    if getattr(overrides, "windows", None) is not None:
        parts = overrides.windows.split(",")
        if len(parts) != 2:
            raise ParseError("--windows needs back,fwd")
        config.windows = (int(parts[0]), int(parts[1]))
    if getattr(overrides, "stages", None) is not None:
        config.stages = tuple(overrides.stages.split(","))
    return config.validate()


def _emit(payload: dict, args: argparse.Namespace) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    path = getattr(args, "json", None)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("config", help="config file path or inline config string")
    p.add_argument("--json", metavar="PATH", help="also write the JSON output here")
    p.add_argument("--seeds", help="seed letters, e.g. a,c")
    p.add_argument("--power", type=int, help="use the m-th powers of both morphisms")
    p.add_argument("--order", type=int, help="brick order h")
    p.add_argument("--length", type=int, help="coding length n")
    p.add_argument("--offset-bound", dest="offset_bound", type=int)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brickwords",
        description="simultaneous coding of two substitution fixed points",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("balance", help="initial balanced pair and the balanced pair algorithm")
    _add_common(p)
    p.add_argument("--bound", type=int, help="initial-pair search bound N")

    p = sub.add_parser("code", help="construct the simultaneous coding")
    _add_common(p)
    p.add_argument("--render", action="store_true", help="also print a diagram")

    p = sub.add_parser("infer", help="infer the substitution fixing the index word")
    _add_common(p)
    p.add_argument("--max-image-len", dest="max_image_len", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--node-budget", dest="node_budget", type=int)
    p.add_argument("--derived", metavar="FACTOR", help="retry on the derived sequence of FACTOR")

    p = sub.add_parser("verify", help="check a {mu, pi, s0?, s1?} bundle")
    _add_common(p)
    p.add_argument("--bundle", required=True, metavar="PATH", help="JSON bundle file")
    p.add_argument("--horizon", type=int)

    p = sub.add_parser("certify", help="letter dominance certificates")
    _add_common(p)
    p.add_argument("--letter", help="certify only this letter")
    p.add_argument("--windows", help="back,fwd window columns (default 1,1 then wider)")
    p.add_argument("--max-image-len", dest="max_image_len", type=int)
    p.add_argument("--horizon", type=int)

    p = sub.add_parser("pipeline", help="run code, infer, verify, certify and scan")
    _add_common(p)
    p.add_argument("--letter")
    p.add_argument("--windows")
    p.add_argument("--stages", help="comma-separated subset of " + ",".join(ALL_STAGES))
    p.add_argument("--max-image-len", dest="max_image_len", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--scan-length", dest="scan_length", type=int)
    p.add_argument("--derived", metavar="FACTOR")

    p = sub.add_parser("render", help="print the brick table and a prefix diagram")
    _add_common(p)
    p.add_argument("--count", type=int, default=12, help="bricks to draw (default 12)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config, args)
    except (ParseError, BrickwordsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CODES["input"]
    try:
        return _dispatch(args, config)
    except OffsetBoundExceeded as exc:
        _emit({"error": "offset-bound-exceeded", "position": exc.position,
               "offset": exc.offset, "bound": exc.bound}, args)
        return EXIT_CODES["caps"]
    except BrickwordsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CODES["input"]


def _dispatch(args: argparse.Namespace, config: RunConfig) -> int:
    if args.command == "balance":
        return _cmd_balance(args, config)
    if args.command == "code":
        return _cmd_code(args, config)
    if args.command == "infer":
        return _cmd_infer(args, config)
    if args.command == "verify":
        return _cmd_verify(args, config)
    if args.command == "certify":
        return _cmd_certify(args, config)
    if args.command == "pipeline":
        return _cmd_pipeline(args, config)
    if args.command == "render":
        return _cmd_render(args, config)
    raise AssertionError(f"unhandled command {args.command}")


def _cmd_balance(args, config: RunConfig) -> int:
    n = find_initial_balanced_pair(config.phi0, config.phi1, config.seeds, config.bound)
    outcome = balanced_pair_algorithm(
        config.phi0,
        config.phi1,
        m=config.power,
        seeds=config.seeds,
        initial_bound=config.bound,
        max_pairs=config.max_pairs,
        max_iterations=config.max_iterations,
    )
    payload = {
        "status": outcome.status,
        "iterations": outcome.iterations,
    }
    if n is not None:
        payload["n"] = n
    if outcome.status == "closed":
        payload["pairs"] = [[str(p.u), str(p.v)] for p in outcome.minimal_pairs]
    _emit(payload, args)
    return 0 if outcome.status == "closed" else EXIT_CODES["caps"]


def _coding_for(config: RunConfig) -> SimultaneousCoding:
    phi0 = power(config.phi0, config.power)
    phi1 = power(config.phi1, config.power)
    return simultaneous_coding(
        phi0, phi1, config.seeds, config.length, config.order, config.offset_bound
    )


def _cmd_code(args, config: RunConfig) -> int:
    coding = _coding_for(config)
    payload = {
        "bricks": [brick_json(b) for b in coding.brick_alphabet],
        "word": list(coding.index_word.codes),
    }
    _emit(payload, args)
    if args.render:
        count = min(12, len(coding.index_word))
        bricks = coding.bricks_of(coding.index_word[:count])
        print(render_diagram(bricks, coding.phi0, coding.phi1))
    return 0


def _cmd_infer(args, config: RunConfig) -> int:
    config.stages = ("code", "infer")
    report = pipeline(config)
    _emit(report, args)
    return report["exit_code"]


def _cmd_certify(args, config: RunConfig) -> int:
    config.stages = ("code", "infer", "verify", "certify")
    report = pipeline(config)
    _emit(report, args)
    return report["exit_code"]


def _cmd_pipeline(args, config: RunConfig) -> int:
    report = pipeline(config)
    _emit(report, args)
    return report["exit_code"]


def _cmd_render(args, config: RunConfig) -> int:
    coding = _coding_for(config)
    lines = ["pi:"]
    for letter in coding.index_alphabet.letters:
        lines.append(f"  {letter} -> {coding.pi[letter]}")
    print("\n".join(lines))
    count = min(args.count, len(coding.index_word))
    bricks = coding.bricks_of(coding.index_word[:count])
    print(render_diagram(bricks, coding.phi0, coding.phi1))
    return 0


def _cmd_verify(args, config: RunConfig) -> int:
    with open(args.bundle, encoding="utf-8") as fh:
        bundle = json.load(fh)
    coding, cand = _coding_from_bundle(bundle, config)
    from .inference import CorrectionMaps, factor_closure

    try:
        if "s0" in bundle and "s1" in bundle:
            maps = CorrectionMaps(
                s0={x: coding.phi0.source.parse(w) if w else Word(coding.phi0.source)
                    for x, w in bundle["s0"].items()},
                s1={x: coding.phi0.source.parse(w) if w else Word(coding.phi0.source)
                    for x, w in bundle["s1"].items()},
            )
        else:
            maps = derive_correction_maps(cand, coding)
        L2 = factor_closure(cand.mu, cand.seed, 2)
        projection = verify_projection(cand, maps, L2, coding)
        joins = verify_joins(cand, coding, L2)
    except BrickwordsError as exc:
        _emit({"verified": False, "failures": [str(exc)]}, args)
        return EXIT_CODES["verdict"]
    failures = projection.failures + joins.failures
    _emit({"verified": not failures, "failures": failures}, args)
    return 0 if not failures else EXIT_CODES["verdict"]


def _coding_from_bundle(bundle: dict, config: RunConfig):
    """Rebuild a coding object from a {mu, pi} bundle: the index word is
    a prefix of mu's fixed point and pi gives the brick for each index
    letter."""
    from .bricks import Brick

    mu = Morphism.from_rules(bundle["mu"])
    base = config.phi0.source
    pi_raw = bundle["pi"]
    missing = [a for a in mu.source.letters if a not in pi_raw]
    if missing:
        raise ParseError(f"bundle pi lacks letters {missing}")
    bricks = []
    for a in mu.source.letters:
        entry = pi_raw[a]
        bricks.append(
            Brick(base.parse(entry["row0"]), base.parse(entry["row1"]), int(entry["offset"]))
        )
    seed = bundle.get("seed")
    if seed is None:
        seeds = prolongable_seeds(mu)
        if not seeds:
            raise ParseError("bundle mu has no prolongable seed")
        seed = seeds[0]
    horizon = config.horizon
    w = fixed_point_prefix(mu, seed, horizon)
    order = bricks[0].order
    first = bricks[mu.source.index(seed)]
    coding = SimultaneousCoding(
        power(config.phi0, config.power),
        power(config.phi1, config.power),
        (first.row0[0], first.row1[0]),
        bricks,
        w,
        order,
    )
    cand = CandidateSubstitution(mu=mu, horizon=horizon, coding=coding)
    return coding, cand


if __name__ == "__main__":
    sys.exit(main())
