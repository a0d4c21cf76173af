"""Command-line entry point.

Exit codes: 0 success, 1 mathematical violation or failed check, 2 bad
configuration, 3 resource guard exceeded (a partial report is still written).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field

from . import witnesses as wit
from .constants import SearchStrategy
from .errors import ConfigError, SizeGuardError
from .pipeline import EXAMPLES, header, reproduce, run_constants, run_verify
from .report import Check, Report
from .spaces import space_from_config

log = logging.getLogger("greedylab")

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG, EXIT_GUARD = 0, 1, 2, 3


@dataclass
class RunConfig:
    space: dict | None
    orders: list[int] = field(default_factory=list)
    suites: tuple = ("constants",)
    budget: int = 10_000
    seed: int = 0
    fmt: str = "json"
    out: str | None = None
    quick: bool = False


def parse_range(text: str | None) -> list[int]:
    """'1..3' -> [1, 2, 3]; '2' -> [2]; '1,3' -> [1, 3]; '' -> []."""
    if text is None or text.strip() == "":
        return []
    out: list[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                a, b = part.split("..", 1)
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise ConfigError(f"bad order range {text!r}; use a..b") from None
    return sorted(set(out))


def load_space_config(text: str) -> dict:
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"space config is neither a file nor valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("space config must be a JSON object")
    return cfg


def _emit(rep: Report, cfg: RunConfig):
    text = rep.render(cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _space_and_orders(cfg: RunConfig):
    if cfg.space is None:
        raise ConfigError("--space is required")
    space = space_from_config(cfg.space)
    bad = [N for N in cfg.orders if not 1 <= N <= space.dim]
    if bad:
        raise ConfigError(f"orders {bad} outside 1..{space.dim}")
    return space


def _strategy(cfg: RunConfig) -> SearchStrategy:
    return SearchStrategy.quick(cfg.seed) if cfg.quick else SearchStrategy(seed=cfg.seed)


def cmd_constants(cfg: RunConfig) -> Report:
    space = _space_and_orders(cfg)
    return run_constants(space, cfg.orders, cfg.seed, _strategy(cfg))


def cmd_verify(cfg: RunConfig) -> Report:
    space = _space_and_orders(cfg)
    return run_verify(space, cfg.orders, cfg.seed, cfg.budget, _strategy(cfg))


def cmd_reproduce(example: str, cfg: RunConfig) -> Report:
    if example not in EXAMPLES:
        raise ConfigError(f"unknown example {example!r}; choose from {', '.join(EXAMPLES)}")
    return reproduce(example, cfg.seed, min(cfg.budget, 2000))


def cmd_witnesses(name: str | None) -> Report:
    rep = Report(header(None, 0, title="witness registry"))
    specs = wit.registry() if name is None else [wit.find_spec(name)]
    for spec in specs:
        for w in spec.generate():
            try:
                got = wit.check_expected(w, None if w.role in ("kernel", "lacunary_nu") else wit.witness_space(w))
            except ValueError as exc:
                rep.notes.append(f"{w.name}: {exc}")
                continue
            for key, (m, val, _) in sorted(got.items()):
                rep.checks.append(Check(f"{w.name}: {key}", m, expected=val, citation=w.expected[key][1]))
    return rep


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="greedylab", description=__doc__.splitlines()[0])
    p.add_argument("--log-level", default="WARNING")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, space=True):
        if space:
            sp.add_argument("--space", help="JSON file or inline JSON object")
            sp.add_argument("--N", dest="orders", default="", help="orders, e.g. 1..3")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget", type=int, default=10_000, help="random samples for the inequality suite")
        sp.add_argument("--format", dest="fmt", choices=("csv", "json", "md"), default="json")
        sp.add_argument("--out", help="write the report here instead of stdout")

    c = sub.add_parser("constants", help="compute the constant table")
    common(c)
    c.add_argument("--quick", action="store_true", help="smaller search (faster, looser lowers)")
    v = sub.add_parser("verify", help="constants, Lebesgue bounds and the inequality suite")
    common(v)
    v.add_argument("--quick", action="store_true")
    v.add_argument("--suite", default="constants,lebesgue,lemmas",
                   help="comma-separated suites (all run together; kept for config compatibility)")
    r = sub.add_parser("reproduce", help="run one worked example and compare with its closed forms")
    r.add_argument("example", nargs="?", help=f"one of {', '.join(EXAMPLES)}")
    r.add_argument("--example", dest="example_flag")
    common(r, space=False)
    w = sub.add_parser("witnesses", help="evaluate the registered witnesses")
    w.add_argument("--name")
    w.add_argument("--format", dest="fmt", choices=("csv", "json", "md"), default="json")
    w.add_argument("--out")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING))
    cfg = RunConfig(space=None, fmt=args.fmt, out=args.out, seed=getattr(args, "seed", 0),
                    budget=getattr(args, "budget", 10_000), quick=getattr(args, "quick", False))
    rep = None
    try:
        if getattr(args, "space", None):
            cfg.space = load_space_config(args.space)
        cfg.orders = parse_range(getattr(args, "orders", ""))
        if args.command == "constants":
            rep = cmd_constants(cfg)
        elif args.command == "verify":
            rep = cmd_verify(cfg)
        elif args.command == "reproduce":
            example = args.example_flag or args.example
            if example is None:
                raise ConfigError("reproduce needs an example id")
            rep = cmd_reproduce(example, cfg)
        else:
            rep = cmd_witnesses(args.name)
    except ConfigError as exc:
        print(f"greedylab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyError as exc:
        print(f"greedylab: configuration error: unknown name {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SizeGuardError as exc:
        print(f"greedylab: resource guard: {exc}", file=sys.stderr)
        partial = Report(header(None, cfg.seed, title="partial report"), notes=[str(exc)], partial=True)
        _emit(partial, cfg)
        return EXIT_GUARD
    _emit(rep, cfg)
    if rep.failed:
        for c in rep.certificates:
            if not c.holds:
                print(f"violated: {c.name}: {c.lhs!r} > {c.rhs!r} witness={json.dumps(c.witness, default=str)}",
                      file=sys.stderr)
        for c in rep.checks:
            if not c.ok:
                print(f"failed check: {c.name}: {c.computed!r}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
