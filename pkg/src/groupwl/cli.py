"""Command-line entry point: ``groupwl <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import corpus, crosscheck, groups, structure
from .adversaries import KINDS, make_adversary
from .errors import BudgetExceeded, GroupWLError, SizeLimitExceeded, TooLarge
from .game import GameSpec, solve_game
from .spoiler import R_MAX, spoiler_play
from .wl import run_wl

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_DISAGREE = 0, 2, 3, 4
BRUTE_FORCE_LIMIT = 120
FAMILIES = ("cyclic", "dihedral", "symmetric", "alternating", "quaternion8",
            "product", "wreath-swap", "relabel")


def load(spec: str) -> groups.FiniteGroup:
    """A group file path, or a corpus name (optionally prefixed ``corpus:``)."""
    if spec.startswith("corpus:"):
        return corpus.group(spec[7:])
    if os.path.exists(spec):
        return groups.read_group(spec)
    if spec in corpus.MANIFEST:
        return corpus.group(spec)
    raise FileNotFoundError(f"no such group file or corpus name: {spec}")


# -- subcommands -------------------------------------------------------------

def cmd_gen(args) -> dict:
    fam = args.family
    if fam in ("cyclic", "dihedral", "symmetric", "alternating") and args.n is None:
        raise ValueError(f"--n is required for {fam}")
    if fam == "cyclic":
        G = groups.cyclic(args.n)
    elif fam == "dihedral":
        G = groups.dihedral(args.n)
    elif fam == "symmetric":
        G = groups.symmetric(args.n)
    elif fam == "alternating":
        G = groups.alternating(args.n)
    elif fam == "quaternion8":
        G = groups.quaternion8()
    else:
        if not args.of:
            raise ValueError(f"--of is required for {fam}")
        base = [load(p) for p in args.of]
        if fam == "product":
            if len(base) != 2:
                raise ValueError("product needs two --of groups")
            G = groups.direct_product(base[0], base[1])
        elif fam == "wreath-swap":
            G = groups.wreath_swap(base[0])
        else:
            G = groups.relabel(base[0], seed=args.seed)
    out = args.group_out or args.out
    if out:
        try:
            groups.write_group(G, out)
        except SizeLimitExceeded as exc:
            raise SizeLimitExceeded(f"{exc}; write a .perm file instead") from None
    return {"family": fam, "order": G.order, "backend": G.backend,
            "validation": G.validation, "out": out}


def cmd_info(args) -> dict:
    return structure.info(load(args.group))


def cmd_wl(args) -> dict:
    G, H = load(args.G), load(args.H)
    rep = run_wl(G, H, args.k, args.version, args.arity, args.max_rounds,
                 ordered=args.ordered, threads=args.threads)
    d = rep.to_dict()
    split = next((r for r, info in enumerate(rep.rounds) if info.identity_split), None)
    d["split_round"] = split
    return d


def cmd_game(args) -> dict:
    if args.arity != 2:
        raise ValueError("the game oracle is the 2-ary game; use --arity 2")
    G, H = load(args.G), load(args.H)
    spec = GameSpec(args.k, args.r, args.q, args.version)
    return solve_game(G, H, spec, transcript=args.transcript,
                      override_size_guard=args.override_size_guard).to_dict()


def cmd_spoiler(args) -> dict:
    G, H = load(args.G), load(args.H)
    adv = make_adversary(args.adversary, G, H, args.seed)
    tr = spoiler_play(G, H, adv, args.seed, pair_names=[args.G, args.H],
                      max_rounds=args.max_rounds)
    return tr.to_dict()


def cmd_iso(args) -> dict:
    G, H = load(args.G), load(args.H)
    if G.order != H.order:
        return {"isomorphic": False, "method": "order", "map": None}
    if structure.is_semisimple(G) and structure.is_semisimple(H):
        iso = structure.semisimple_isomorphism(G, H)
        return {"isomorphic": iso is not None, "method": "socle", "map": iso}
    if structure.is_semisimple(G) != structure.is_semisimple(H):
        return {"isomorphic": False, "method": "semisimplicity", "map": None}
    if G.order > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"brute-force isomorphism search is limited to order {BRUTE_FORCE_LIMIT}")
    phi = structure.brute_force_isomorphism(G, H)
    return {"isomorphic": phi is not None, "method": "brute-force",
            "map": None if phi is None else [phi[g] for g in range(G.order)]}


def cmd_crosscheck(args) -> dict:
    lo, hi = corpus.parse_orders(args.orders)
    return crosscheck.run_suite(args.suite, lo, hi)


# -- output ------------------------------------------------------------------

def _text(cmd: str, d: dict) -> str:
    if cmd == "wl":
        if d["verdict"] == "distinguished":
            return f"distinguished at round {d['split_round']}"
        return "not distinguished"
    if cmd == "game":
        return d["winner"]
    if cmd == "iso":
        return "isomorphic" if d["isomorphic"] else "non-isomorphic"
    if cmd == "spoiler":
        return (f"Spoiler wins: {d['final_violation']} "
                f"(pebbles {d['pebbles_used']}, rounds {d['rounds_used']})")
    if cmd == "crosscheck":
        return f"{d['suite']}: {d['checks']} checks, {d['disagreements']} disagreements"
    return "\n".join(f"{k}: {v}" for k, v in d.items())


def _csv(cmd: str, d: dict) -> str:
    buf = io.StringIO()
    if cmd == "crosscheck":
        rows = d["records"]
    elif cmd == "wl":
        rows = [{"round": r, **info} for r, info in enumerate(d["rounds"])]
    elif cmd == "spoiler":
        rows = [{"round": i + 1, "lifted": " ".join(map(str, r["lifted"])),
                 "placed": " ".join(f"{g}:{h}" for g, h in r["placed"]),
                 "lemma": r["lemma"], "f_digest": r["f_digest"]}
                for i, r in enumerate(d["rounds"])]
    else:
        rows = [{k: v for k, v in d.items() if not isinstance(v, (list, dict))}]
    if rows:
        cols = list(rows[0])
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v)
                        for k, v in r.items()})
    return buf.getvalue()


def render(cmd: str, d: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(d, sort_keys=True) + "\n"
    if fmt == "csv":
        return _csv(cmd, d)
    return _text(cmd, d) + "\n"


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--override-size-guard", action="store_true")

    p = argparse.ArgumentParser(prog="groupwl", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("gen", parents=[common], help="generate a group file")
    s.add_argument("--family", choices=FAMILIES, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--of", action="append", help="input group (repeat for product)")
    s.add_argument("--group-out", "-o", help="group file to write (.cay, .cayb or .perm); "
                   "for gen, --out means the same")

    s = sub.add_parser("info", parents=[common], help="structure report")
    s.add_argument("group")

    def pair(sp):
        sp.add_argument("G")
        sp.add_argument("H")

    s = sub.add_parser("wl", parents=[common], help="run the WL coloring")
    pair(s)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--version", choices=("I", "II"), default="II")
    s.add_argument("--arity", type=int, choices=(1, 2), default=2)
    s.add_argument("--max-rounds", type=int)
    s.add_argument("--ordered", action="store_true", help="refine over ordered index pairs")

    s = sub.add_parser("game", parents=[common], help="solve the pebble game exactly")
    pair(s)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--arity", type=int, default=2)
    s.add_argument("--version", choices=("I", "II"), default="I")
    s.add_argument("--transcript", action="store_true")

    s = sub.add_parser("spoiler", parents=[common], help="play the Spoiler strategy")
    pair(s)
    s.add_argument("--adversary", choices=KINDS, default="greedy")
    s.add_argument("--max-rounds", type=int, default=R_MAX)

    s = sub.add_parser("iso", parents=[common], help="decide isomorphism")
    pair(s)

    s = sub.add_parser("crosscheck", parents=[common], help="run a cross-check suite")
    s.add_argument("--suite", choices=crosscheck.SUITES, required=True)
    s.add_argument("--orders", default="4..8")
    return p


COMMANDS = {"gen": cmd_gen, "info": cmd_info, "wl": cmd_wl, "game": cmd_game,
            "spoiler": cmd_spoiler, "iso": cmd_iso, "crosscheck": cmd_crosscheck}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_INVALID
    try:
        result = COMMANDS[args.cmd](args)
    except (BudgetExceeded, TooLarge, SizeLimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GroupWLError, ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = render(args.cmd, result, args.format)
    if args.out and args.cmd != "gen":
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.cmd == "crosscheck" and result["disagreements"]:
        return EXIT_DISAGREE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
