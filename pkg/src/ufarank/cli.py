"""Command-line interface: ``python -m ufarank <command> ...``.

Automata are read from a file, from stdin (``-``) or from a generator spec
``gen:FAMILY[:N]`` such as ``gen:ex44`` or ``gen:cerny:6``.  States are
1-indexed in every report.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from . import generators
from .automaton import (
    Automaton,
    check_unambiguous,
    format_word,
    parse_automaton,
    scc_decompose,
    states_of,
)
from .errors import AmbiguityError, InputError, InvariantError
from .linalg import format_vector
from .oracle import (
    criterion_report,
    enumerate_columns,
    enumerate_monoid,
    format_checks,
    min_rank_brute,
)
from .rank import analyse_component, completeness_check, mer_map, rank, u_basis
from .slp import eval_slp_word, expanded_length
from .witness import dfa_min_rank_word, min_rank_word

EXPAND_LIMIT = 10 ** 6


def _states(mask_or_states) -> str:
    items = states_of(mask_or_states) if isinstance(mask_or_states, int) else mask_or_states
    return "{" + ",".join(str(s + 1) for s in items) + "}"


def load_automaton(spec: str) -> Automaton:
    if spec.startswith("gen:"):
        parts = spec[4:].split(":")
        params = {"n": int(parts[1])} if len(parts) > 1 else {}
        return generators.generate(parts[0], **params)
    if spec == "-":
        return parse_automaton(sys.stdin.read())
    try:
        text = Path(spec).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {spec}: {exc.strerror}") from None
    return parse_automaton(text)


def _require_unambiguous(aut: Automaton) -> None:
    diamond = check_unambiguous(aut)
    if diamond is not None:
        raise AmbiguityError(diamond)


# commands; each returns (json-able dict, text lines)


def cmd_check(aut: Automaton, args) -> tuple[dict, list[str]]:
    diamond = check_unambiguous(aut)
    doc = {
        "states": aut.n,
        "alphabet": list(aut.alphabet),
        "unambiguous": diamond is None,
        "total_dfa": aut.is_total_dfa,
    }
    lines = [f"states: {aut.n}", f"alphabet: {' '.join(aut.alphabet)}"]
    if diamond is not None:
        doc["counterexample"] = {"word": format_word(diamond.word), "detail": diamond.describe()}
        lines.append(f"unambiguous: no ({diamond.describe()})")
    else:
        lines.append("unambiguous: yes")
    comps = []
    for comp in scc_decompose(aut).components:
        complete = completeness_check(aut.restrict(comp)) if diamond is None else None
        comps.append({"states": [s + 1 for s in comp], "complete": complete})
        flag = "n/a" if complete is None else ("complete" if complete else "not complete")
        lines.append(f"component {_states(comp)}: {flag}")
    doc["components"] = comps
    if diamond is None:
        doc["complete"] = len(comps) == 1 and comps[0]["complete"]
    lines.append(f"total DFA: {'yes' if aut.is_total_dfa else 'no'}")
    return doc, lines


def cmd_rank(aut: Automaton, args) -> tuple[dict, list[str]]:
    report = rank(aut)
    lines = [f"rank: {report.total}"]
    for c in report.components:
        if c.complete:
            lines.append(
                f"component {_states(c.states)}: rank {c.rank} "
                f"(mcw {c.to_dict()['mcw']}, mrw {c.to_dict()['mrw']})"
            )
        else:
            lines.append(f"component {_states(c.states)}: not complete, contributes 0")
    return report.to_dict(), lines


def cmd_weights(aut: Automaton, args) -> tuple[dict, list[str]]:
    _require_unambiguous(aut)
    comps, lines = [], []
    for comp in scc_decompose(aut).components:
        sub = aut.restrict(comp)
        report = analyse_component(sub, comp)
        d = report.to_dict()
        lines.append(f"component {_states(comp)}:")
        if report.complete:
            basis = u_basis(sub, report.weights.alpha)
            d["u_basis"] = [format_vector(v) for v in basis]
            for key in ("alpha", "beta"):
                lines.append(f"  {key}: ({', '.join(d[key])})")
            lines.append(f"  mcw: {d['mcw']}  mrw: {d['mrw']}  rank: {report.rank}")
            lines.append(f"  U basis ({len(basis)}):")
            lines.extend(f"    ({', '.join(v)})" for v in d["u_basis"])
        else:
            lines.append("  not complete")
        comps.append(d)
    return {"components": comps}, lines


def cmd_mer(aut: Automaton, args) -> tuple[dict, list[str]]:
    _require_unambiguous(aut)
    mer = mer_map(aut)
    doc = {str(q + 1): [s + 1 for s in states_of(m)] for q, m in enumerate(mer)}
    return {"mer": doc}, [f"Mer({q + 1}) = {_states(m)}" for q, m in enumerate(mer)]


def cmd_witness(aut: Automaton, args) -> tuple[dict, list[str]]:
    p = args.state - 1
    if not 0 <= p < aut.n:
        raise InputError(f"state {args.state} out of range")
    if args.dfa:
        slp, image = dfa_min_rank_word(aut, p, expected_rank=rank(aut).total)
        top = slp.initial
        doc = {
            "slp": slp.to_dict(),
            "image": sorted({s + 1 for s in image}),
            "transformation": [s + 1 for s in image],
            "rank": len(set(image)),
        }
        lines = [f"rank: {doc['rank']}", f"image: {_states(sorted(set(image)))}"]
    else:
        wit = min_rank_word(aut, p)
        slp, top = wit.slp, wit.slp.initial
        doc = {
            "slp": slp.to_dict(),
            "matrix": wit.matrix.to_lists(),
            "cesari": wit.cesari.to_list(),
            "rank": wit.rank,
        }
        lines = [f"rank: {wit.rank}", "matrix:"]
        lines.extend("  " + line for line in str(wit.matrix).splitlines())
        lines.append("rectangles:")
        lines.extend(
            f"  {_states(c)} x {_states(r)}" for c, r in wit.cesari.rectangles
        )
    size = expanded_length(slp, top)
    doc["slp_length"] = slp.length
    doc["expanded_length"] = size
    lines.append(f"SLP ({slp.length} symbols, expands to {size} letters):")
    lines.extend(f"  {lhs} -> {' '.join(rhs) or 'ε'}" for lhs, rhs in slp.rules)
    if args.expand:
        if size > EXPAND_LIMIT:
            raise InputError(f"expanded word has {size} letters, above the limit {EXPAND_LIMIT}")
        word = eval_slp_word(slp, top)
        doc["word"] = list(word)
        lines.append(f"word: {format_word(word)}")
    return doc, lines


def cmd_oracle(aut: Automaton, args) -> tuple[dict, list[str]]:
    _require_unambiguous(aut)
    table = enumerate_monoid(aut, args.max_monoid)
    cols = enumerate_columns(aut)
    doc = {
        "monoid_size": len(table),
        "truncated": table.truncated,
        "has_zero": table.has_zero,
        "mcol": [[s + 1 for s in states_of(c)] for c in cols.mcol],
    }
    lines = [
        f"monoid size: {len(table)}{' (cap reached, inconclusive)' if table.truncated else ''}",
        f"zero matrix: {'present' if table.has_zero else 'absent'}",
    ]
    if not table.truncated:
        real, distinct = min_rank_brute(table)
        doc["min_real_rank"] = real
        doc["min_distinct_columns"] = distinct
        lines.append(f"min real rank: {real}  min distinct nonzero columns: {distinct}")
    lines.append(f"|MCol|: {len(cols.mcol)}  " + " ".join(_states(c) for c in cols.mcol))
    if len(scc_decompose(aut)) == 1 and completeness_check(aut):
        report = criterion_report(aut, None)
        d = report.to_dict()
        for key in ("dim_V", "dim_W", "dim_span_MCol", "dim_U_perp", "rank"):
            doc[key] = d[key]
        doc["checks"] = d["checks"]
        doc["inconclusive"] = d["inconclusive"] or table.truncated
        lines.append(
            f"dim V: {d['dim_V']}  dim W: {d['dim_W']}  dim span MCol: {d['dim_span_MCol']}"
            f"  dim U^⊥: {d['dim_U_perp']}  rank: {d['rank']}"
        )
        if not table.truncated:
            ok = doc["min_real_rank"] == report.rank == doc["min_distinct_columns"]
            doc["checks"]["brute-force rank agrees"] = ok
        lines.extend(format_checks(doc["checks"]))
    else:
        lines.append("criteria: skipped (needs a complete, strongly connected automaton)")
    return doc, lines


def cmd_criterion(aut: Automaton, args) -> tuple[dict, list[str]]:
    _require_unambiguous(aut)
    report = criterion_report(aut, args.max_monoid)
    d = report.to_dict()
    lines = [
        f"rank: {d['rank']}",
        f"MCol: {' '.join(_states(c) for c in report.mcol)}",
        f"MRow: {' '.join(_states(c) for c in report.mrow)}",
        f"dim V: {d['dim_V']}  dim W: {d['dim_W']}",
        f"dim span MCol: {d['dim_span_MCol']}  dim span MRow: {d['dim_span_MRow']}",
        f"dim U: {d['dim_U']}  dim U^⊥: {d['dim_U_perp']}",
    ]
    lines.extend(format_checks(report.checks))
    if report.inconclusive:
        lines.append("inconclusive: enumeration cap reached")
    return d, lines


def cmd_gen(args) -> str:
    params = {"n": args.n, "m": args.m, "density": args.density, "seed": args.seed, "kind": args.kind}
    if args.code:
        params["code"] = args.code.split(",")
    params = {k: v for k, v in params.items() if v is not None}
    aut = generators.generate(args.family, **params)
    return aut.to_json() + "\n" if args.format == "json" else aut.to_text()


def cmd_bench(args) -> str:
    sizes = [int(x) for x in args.sizes.split(",")]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["family", "n", "m", "seed", "rank", "rank_s", "witness_s", "dfa_s"])
    for n in sizes:
        for k in range(args.repeat):
            seed = args.seed + k
            if args.family == "cerny":
                aut = generators.cerny(n)
            else:
                aut = generators.random_automaton(n, args.m, args.density, seed, args.kind)
            t0 = time.perf_counter()
            r = rank(aut).total
            t1 = time.perf_counter()
            min_rank_word(aut)
            t2 = time.perf_counter()
            dfa_s = ""
            if aut.is_total_dfa:
                dfa_min_rank_word(aut)
                dfa_s = f"{time.perf_counter() - t2:.6f}"
            writer.writerow([args.family, aut.n, aut.m, seed, r, f"{t1 - t0:.6f}", f"{t2 - t1:.6f}", dfa_s])
    return out.getvalue()


COMMANDS = {
    "check": cmd_check,
    "rank": cmd_rank,
    "weights": cmd_weights,
    "mer": cmd_mer,
    "witness": cmd_witness,
    "oracle": cmd_oracle,
    "criterion": cmd_criterion,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="ufarank", description="Minimum rank of unambiguous finite automata."
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "check": "unambiguity, components, completeness",
        "rank": "minimum rank via the linear-algebraic engine",
        "weights": "weight vectors, mcw, mrw and U basis per component",
        "mer": "mergeability sets Mer(q)",
        "witness": "SLP for a minimum-rank word",
        "oracle": "brute-force monoid enumeration and criteria",
        "criterion": "span criteria relating V, W, MCol and the rank",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("input", help="automaton file, '-' for stdin, or gen:FAMILY[:N]")
        if name == "witness":
            p.add_argument("--expand", action="store_true", help="also print the expanded word")
            p.add_argument("--state", type=int, default=1, help="pivot state p (default 1)")
            p.add_argument("--dfa", action="store_true", help="use the total-DFA construction")
        if name in ("oracle", "criterion"):
            p.add_argument("--max-monoid", type=int, default=20000)

    g = sub.add_parser("gen", parents=[common], help="emit a fixture or random automaton")
    g.add_argument("family", choices=generators.FAMILIES)
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--density", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--kind", choices=("ufa", "dfa", "codfa", "split"))
    g.add_argument("--code", help="comma-separated codewords for the flower family")

    b = sub.add_parser("bench", parents=[common], help="CSV timing table")
    b.add_argument("--family", choices=("random", "cerny"), default="random")
    b.add_argument("--sizes", default="4,8,16")
    b.add_argument("--m", type=int, default=2)
    b.add_argument("--density", type=float, default=0.3)
    b.add_argument("--kind", choices=("ufa", "dfa", "codfa", "split"), default="dfa")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--repeat", type=int, default=1)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            text = cmd_gen(args)
        elif args.command == "bench":
            text = cmd_bench(args)
        else:
            aut = load_automaton(args.input)
            doc, lines = COMMANDS[args.command](aut, args)
            if args.format == "json":
                text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
            else:
                text = "\n".join(lines) + "\n"
        _emit(text, args.out)
    except InputError as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return 1
    except InvariantError as exc:
        print(f"internal error [{args.command}]: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())
