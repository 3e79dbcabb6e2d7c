"""Command-line frontend.

Commands: mul, annihilate-check, recover, extract, enumerate, scan,
search-direct, make-instance, selftest.  Machine output goes to stdout as
JSON lines (sorted keys, fixed separators); diagnostics go to stderr only,
so identical inputs produce byte-identical stdout for any worker count.

Exit codes: 0 success / nothing found, 2 input error, 3 not annihilating,
4 precondition failure, 10 witness found.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from random import Random

from .algebra import as_support_triple, parse_algebra
from .cancellation import recover_structure, relation_report
from .errors import (
    InputError,
    NotAnnihilating,
    PreconditionError,
    ZerodivError,
)
from .groups import GroupSpec, is_torsion_free, parse_group_spec
from .scalars import Field, field_from_text
from .search import (
    EnumerationPlan,
    enumerate_structures,
    scan_small_supports,
    search_annihilator_direct,
    make_torsion_instance,
    random_algebra_element,
)
from .selftest import run_all

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_ANNIHILATING = 3
EXIT_PRECONDITION = 4
EXIT_WITNESS = 10

CONFIG_KEYS = ("group", "field", "alphas", "seed", "workers", "output")
DEFAULTS = {
    "group": "free:2",
    "field": "Q",
    "alphas": None,
    "seed": "0",
    "workers": "1",
    "output": "json",
}


@dataclass
class RunConfig:
    spec: GroupSpec
    field: Field
    alphas: list[tuple[str, str]] | None
    seed: int
    workers: int
    output: str


def _load_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise InputError(f"{path}:{lineno}: expected 'key = value'")
                key, _, val = line.partition("=")
                key = key.strip()
                if key not in CONFIG_KEYS:
                    raise InputError(f"{path}:{lineno}: unknown config key {key!r}")
                values[key] = val.strip()
    except OSError as exc:
        raise InputError(f"cannot read config file {path}: {exc}") from exc
    return values


def _parse_alphas(text: str) -> list[tuple[str, str]]:
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 2:
            raise InputError(f"alphas entry {chunk!r} must be 'a1,a2'")
        pairs.append((parts[0], parts[1]))
    if not pairs:
        raise InputError("empty alphas list")
    return pairs


def build_config(args: argparse.Namespace) -> RunConfig:
    values = dict(DEFAULTS)
    if args.config:
        values.update(_load_config_file(args.config))
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if values["output"] not in ("json", "text"):
        raise InputError(f"output must be 'json' or 'text', got {values['output']!r}")
    try:
        seed = int(values["seed"])
        workers = int(values["workers"])
    except ValueError as exc:
        raise InputError(f"seed and workers must be integers: {exc}") from exc
    if workers < 1:
        raise InputError("workers must be >= 1")
    alphas = _parse_alphas(values["alphas"]) if values["alphas"] else None
    return RunConfig(
        spec=parse_group_spec(values["group"]),
        field=field_from_text(values["field"]),
        alphas=alphas,
        seed=seed,
        workers=workers,
        output=values["output"],
    )


def emit(cfg: RunConfig, obj: dict, text_fn=None) -> None:
    if cfg.output == "json":
        sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        sys.stdout.write((text_fn(obj) if text_fn else json.dumps(obj, sort_keys=True)) + "\n")


def note(msg: str) -> None:
    sys.stderr.write(msg + "\n")


# ---------------------------------------------------------------------------
# Commands


def cmd_mul(cfg: RunConfig, args) -> int:
    x = parse_algebra(cfg.spec, cfg.field, args.lhs)
    y = parse_algebra(cfg.spec, cfg.field, args.rhs)
    prod = x * y
    emit(
        cfg,
        {"product": prod.render(), "supp": prod.support_size()},
        lambda o: f"{o['product']}  (supp {o['supp']})",
    )
    return EXIT_OK


def cmd_annihilate_check(cfg: RunConfig, args) -> int:
    x = parse_algebra(cfg.spec, cfg.field, args.a)
    y = parse_algebra(cfg.spec, cfg.field, args.b)
    prod = x * y
    ok = prod.is_zero()
    emit(
        cfg,
        {"annihilates": ok, "product": prod.render()},
        lambda o: "a*b = 0" if o["annihilates"] else f"a*b = {o['product']}",
    )
    return EXIT_OK if ok else EXIT_NOT_ANNIHILATING


def _triple_and_b(cfg: RunConfig, args):
    a = parse_algebra(cfg.spec, cfg.field, args.a)
    b = parse_algebra(cfg.spec, cfg.field, args.b)
    if b.is_zero():
        raise PreconditionError("b must be nonzero")
    return as_support_triple(a), b


def cmd_recover(cfg: RunConfig, args) -> int:
    triple, b = _triple_and_b(cfg, args)
    inst = recover_structure(triple, b)
    emit(cfg, inst.to_json())
    return EXIT_OK


def cmd_extract(cfg: RunConfig, args) -> int:
    triple, b = _triple_and_b(cfg, args)
    report = relation_report(triple, b, trace=args.trace)
    emit(cfg, report)
    return EXIT_OK


def cmd_enumerate(cfg: RunConfig, args) -> int:
    symmetry = "full" if args.full else "fix_f"
    count = 0
    for cs in enumerate_structures(EnumerationPlan(args.n, symmetry)):
        emit(cfg, cs.to_json())
        count += 1
    note(f"{count} valid structures at n = {args.n} ({symmetry})")
    return EXIT_OK


def _scan_triples(cfg: RunConfig, a_text: str):
    a = parse_algebra(cfg.spec, cfg.field, a_text)
    base = as_support_triple(a)
    if cfg.alphas is None:
        return [base]
    return [
        base.with_alphas(cfg.field.parse(a1), cfg.field.parse(a2))
        for a1, a2 in cfg.alphas
    ]


def cmd_scan(cfg: RunConfig, args) -> int:
    if not is_torsion_free(cfg.spec):
        note(f"warning: {cfg.spec.text()} is not torsion-free; witnesses are expected")
    found = False
    for triple in _scan_triples(cfg, args.a):
        reports = scan_small_supports(
            triple,
            args.n_max,
            n_min=args.n_min,
            workers=cfg.workers,
            per_structure=args.verbose,
            seed=cfg.seed,
        )
        for rep in reports:
            obj = rep.to_json(include_verdicts=args.verbose)
            obj["a"] = triple.to_element().render()
            emit(cfg, obj)
            note(f"n={rep.n}: {rep.structures_valid} structures in {rep.wall_time:.3f}s")
            if rep.feasible_count > 0:
                found = True
    return EXIT_WITNESS if found else EXIT_OK


def cmd_search_direct(cfg: RunConfig, args) -> int:
    a = parse_algebra(cfg.spec, cfg.field, args.a)
    witness = search_annihilator_direct(a, args.n_max, args.radius, seed=cfg.seed)
    if witness is None:
        emit(cfg, {"found": False}, lambda o: "no annihilator found")
        return EXIT_OK
    emit(
        cfg,
        {"found": True, "witness": witness.to_json(), "witness_text": witness.render()},
        lambda o: f"witness: {o['witness_text']}",
    )
    return EXIT_WITNESS


def cmd_make_instance(cfg: RunConfig, args) -> int:
    rng = Random(cfg.seed)
    c = random_algebra_element(cfg.spec, cfg.field, rng, support=args.c_support)
    a, b = make_torsion_instance(cfg.spec, cfg.field, c)
    emit(
        cfg,
        {
            "a": a.render(),
            "b": b.render(),
            "n": b.support_size(),
            "group": cfg.spec.text(),
            "field": cfg.field.text(),
        },
    )
    return EXIT_OK


def cmd_selftest(cfg: RunConfig, args) -> int:
    results = run_all(cfg.seed, cases=args.cases)
    ok = True
    for res in results:
        emit(
            cfg,
            res.to_json(),
            lambda o: f"suite {o['suite']}: {'PASS' if o['pass'] else 'FAIL'}",
        )
        ok = ok and res.passed
    return EXIT_OK if ok else 1


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zerodiv",
        description="Exact search and relation extraction for small-support "
        "annihilators in group algebras.",
    )
    parser.add_argument("--config", help="config file of 'key = value' lines")
    parser.add_argument("--group", help="group spec, e.g. free:2, cyclic:3, heisenberg")
    parser.add_argument("--field", help="field spec: Q or GF:p")
    parser.add_argument("--alphas", help="coefficient pairs 'a1,a2[;a1,a2...]' for scans")
    parser.add_argument("--seed", help="seed for randomized suites and sampling")
    parser.add_argument("--workers", help="parallel workers for scans")
    parser.add_argument("--output", choices=("json", "text"), help="output format")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mul", help="multiply two algebra expressions")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.set_defaults(func=cmd_mul)

    p = sub.add_parser("annihilate-check", help="check whether a*b = 0")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_annihilate_check)

    p = sub.add_parser("recover", help="recover the cancellation structure of a*b = 0")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("extract", help="recover structure and extract relation words")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--trace", action="store_true", help="include chain traces")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("enumerate", help="stream valid cancellation structures")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--full", action="store_true", help="do not fix f = id")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("scan", help="decide every structure for 2 <= n <= n-max")
    p.add_argument("a", help="support-3 expression with identity term")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--verbose", action="store_true", help="per-structure verdicts")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("search-direct", help="exhaustive annihilator search in a ball")
    p.add_argument("a")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=cmd_search_direct)

    p = sub.add_parser("make-instance", help="random torsion oracle instance (a, b)")
    p.add_argument("--c-support", type=int, default=3)
    p.set_defaults(func=cmd_make_instance)

    p = sub.add_parser("selftest", help="run the randomized invariant suites")
    p.add_argument("--cases", type=int, default=1000)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        cfg = build_config(args)
        return args.func(cfg, args)
    except NotAnnihilating as exc:
        note(f"error: {exc}")
        return EXIT_NOT_ANNIHILATING
    except PreconditionError as exc:
        note(f"error: {exc}")
        return EXIT_PRECONDITION
    except InputError as exc:
        note(f"error: {exc}")
        return EXIT_INPUT
    except ZerodivError as exc:
        note(f"internal error: {exc}")
        return 1


def entry() -> None:
    sys.exit(main())
