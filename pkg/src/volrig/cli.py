"""Command-line front end.

    volrig rank  --builtin delta:5:2 --matrix B --d 3
    volrig check --claim theorem1 --d 3 --k 2 --n 5
    volrig grid  --dmax 4 --nmax 8 --jobs 4
    volrig dump  --builtin example41 [--matrix B --d 3]

JSON goes to stdout; ``--pretty`` adds a human table on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .complex import SimplicialComplex, build_example_41, complete_complex, complete_graph, parse_complex
from .generic_rank import RankConfig, generic_rank_B, generic_rank_C, generic_rank_R, max_rank, trial_seed
from .geometry import random_rational_embedding, squared_edge_lengths
from .inclusion import scaled_C_reduction_check
from .matching import check_conjecture_41, check_conjecture_43
from .matrices import build_B, build_C, build_L_D_P, build_R_complex
from . import verifiers

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PARAM, EXIT_UNCERTIFIED = 0, 1, 2, 3, 4

CLAIMS = ("theorem1", "prop33", "kd", "lemma21", "lemma22", "example41", "chain", "lee",
          "conj41", "conj42", "conj43", "gottlieb")


class InputError(Exception):
    pass


def builtin_complex(spec: str) -> SimplicialComplex:
    parts = spec.split(":")
    try:
        if parts[0] == "delta" and len(parts) == 3:
            return complete_complex(int(parts[1]), int(parts[2]))
        if parts[0] == "complete-graph" and len(parts) == 2:
            return complete_graph(int(parts[1]))
        if parts[0] == "example41" and len(parts) == 1:
            return build_example_41()[0]
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError(f"unknown builtin {spec!r}; use delta:n:k, complete-graph:n or example41")


def load_complex(args) -> SimplicialComplex:
    if getattr(args, "builtin", None):
        return builtin_complex(args.builtin)
    if getattr(args, "input", None):
        try:
            with open(args.input) as fh:
                return parse_complex(fh.read())
        except (OSError, ValueError) as exc:
            raise InputError(str(exc)) from exc
    raise InputError("give --builtin or --input")


def _config(args) -> RankConfig:
    return RankConfig(trials=args.trials, seed=args.seed, mode=args.mode)


def _emit(payload, pretty_lines=None, pretty=False) -> None:
    print(json.dumps(payload, default=str))
    if pretty and pretty_lines:
        for line in pretty_lines:
            print(line, file=sys.stderr)


def cmd_rank(args) -> int:
    X = load_complex(args)
    cfg = _config(args)
    m = args.matrix
    if m == "B":
        rep = generic_rank_B(X, args.d, cfg)
    elif m == "R":
        rep = generic_rank_R(X.vertices, X.edges, args.d, cfg)
    elif m == "C":
        if args.free_lengths:
            rep = generic_rank_C(X, cfg, "free")
        else:
            rep = generic_rank_C(X, cfg, "embedding", d=args.d)
    else:
        def build(s):
            return build_L_D_P(X, random_rational_embedding(X.n_vertices, args.d, s, cfg.bits))[0].matrix
        L0 = build(trial_seed(cfg.seed, 0))
        rep = max_rank(build, min(L0.shape), cfg)
    out = rep.to_json()
    out["matrix"] = m
    _emit(out, [f"rank {m} = {rep.value} (upper bound {rep.upper_bound}, "
                f"certified={rep.certified_equal})"], args.pretty)
    return EXIT_OK


def _run_claim(args):
    cfg = _config(args)
    c = args.claim
    need = lambda *names: [_require(args, n) for n in names]
    if c == "theorem1":
        d, k, n = need("d", "k", "n")
        return verifiers.check_theorem1(d, k, n, cfg)
    if c == "prop33":
        return verifiers.check_prop33(*need("d"), cfg)
    if c == "kd":
        d, n = need("d", "n")
        return verifiers.check_k_equals_d(d, n, cfg)
    if c == "lemma21":
        X = load_complex(args)
        return verifiers.check_vertex_addition(X, args.v if args.v is not None else X.vertices[0],
                                               *need("d"), cfg)
    if c == "lemma22":
        return verifiers.check_lemma22(*need("k"), stretch=args.stretch)
    if c == "example41":
        return verifiers.check_example41(cfg)
    if c == "chain":
        return verifiers.check_chain_rule(load_complex(args), *need("d"), args.seed)
    if c == "lee":
        return verifiers.check_lee_factorization(load_complex(args), *need("d"), args.seed)
    if c == "conj41":
        return check_conjecture_41(load_complex(args), *need("d"), cfg)
    if c == "conj42":
        return verifiers.check_conjecture_42(load_complex(args), *need("d"), cfg, budget=args.budget)
    if c == "conj43":
        return check_conjecture_43(load_complex(args), cfg)
    if c == "gottlieb":
        return scaled_C_reduction_check(*need("d"))
    raise InputError(f"unknown claim {c!r}")


def _require(args, name):
    val = getattr(args, name)
    if val is None:
        raise ValueError(f"--{name} is required for claim {args.claim}")
    return val


def cmd_check(args) -> int:
    v = _run_claim(args)
    _emit(v.to_json(), [repr(v)], args.pretty)
    if not v.passed:
        return EXIT_FAIL
    return EXIT_OK if v.certified else EXIT_UNCERTIFIED


def cmd_grid(args) -> int:
    if not args.force and (args.dmax > 6 or args.nmax > 10):
        raise ValueError("grid limited to dmax <= 6, nmax <= 10 (use --force)")
    verdicts = verifiers.run_grid(args.dmax, args.nmax, _config(args), jobs=args.jobs)
    cells = [v.to_json() for v in verdicts]
    summary = {
        "cells": len(cells),
        "pass": sum(v.status == "pass" for v in verdicts),
        "uncertified": sum(v.status == "uncertified" for v in verdicts),
        "fail": sum(v.status == "fail" for v in verdicts),
    }
    lines = [f"{v.claim:9s} {json.dumps(v.params):36s} rank={v.computed['rank']:<4} "
             f"expected={v.expected['rank']:<4} {v.status}" for v in verdicts]
    _emit({"summary": summary, "cells": cells}, lines + [json.dumps(summary)], args.pretty)
    return EXIT_FAIL if summary["fail"] else EXIT_OK


def cmd_dump(args) -> int:
    X = load_complex(args)
    if not args.matrix:
        _emit(X.to_json())
        return EXIT_OK
    d = _require(args, "d")
    p = random_rational_embedding(X.n_vertices, d, trial_seed(args.seed, 0))
    if args.matrix == "B":
        M = build_B(X, p)
    elif args.matrix == "R":
        M = build_R_complex(X, p)
    elif args.matrix == "C":
        M = build_C(X, squared_edge_lengths(X, p))
    else:
        M = build_L_D_P(X, p)[0]
    _emit({"complex": X.to_json(), "embedding": p.to_json(), "matrix": args.matrix, **M.to_json()})
    return EXIT_OK


def _default_seed() -> int:
    try:
        return int(os.environ.get("VOLRIG_SEED", "0"))
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="volrig", description="volume rigidity workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, rank_opts=True):
        p.add_argument("--builtin", help="delta:n:k, complete-graph:n or example41")
        p.add_argument("--input", help="complex JSON file")
        p.add_argument("--d", type=int)
        p.add_argument("--seed", type=int, default=_default_seed())
        p.add_argument("--pretty", action="store_true")
        if rank_opts:
            p.add_argument("--trials", type=int, default=3)
            p.add_argument("--mode", choices=("modp", "exact"), default="modp")

    p = sub.add_parser("rank", help="generic rank report")
    common(p)
    p.add_argument("--matrix", choices=("B", "C", "R", "L"), default="B")
    p.add_argument("--free-lengths", action="store_true")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("check", help="run one verifier")
    common(p)
    p.add_argument("--claim", choices=CLAIMS, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--v", type=int)
    p.add_argument("--budget", type=int, default=1 << 16)
    p.add_argument("--stretch", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("grid", help="theorem grid")
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--mode", choices=("modp", "exact"), default="modp")
    p.add_argument("--force", action="store_true")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("dump", help="print a complex, or a labelled matrix")
    common(p, rank_opts=False)
    p.add_argument("--matrix", choices=("B", "C", "R", "L"))
    p.set_defaults(func=cmd_dump)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
