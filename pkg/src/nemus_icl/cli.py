"""Command-line front door: learn, check, dump-nemus, enumerate.

Config resolution: file directives < flags; the effective values are echoed
in every output.  Exit codes: 0 = success with a result, 1 = no hypothesis /
verification fails, 2 = input errors (located message on stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from .engine import LearnTask, learn
from .kb import (
    KbError,
    parse_hypothesis,
    parse_kb,
    render_clause,
    render_clause_atoms,
    render_ground_atom,
)
from .nemus import compile_kb, dump
from .oracle import EnumCaps, RangeRestrictionFault, enumerate_hypotheses, verify

PROG = "nemus-icl"


def _color_on(stream) -> bool:
    if os.environ.get("NEMUS_ICL_COLOR") == "0":
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _paint(text: str, code: str, enabled: bool) -> str:
    return f"\x1b[{code}m{text}\x1b[0m" if enabled else text


def _fail(message: str, path: str = "", line=None, col=None) -> int:
    loc = ""
    if line is not None:
        loc = f"{path or '<kb>'}:{line}:{col if col is not None else 0}: "
    print(f"{PROG}: error: {loc}{message}", file=sys.stderr)
    return 2


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _effective_task(kb, args) -> LearnTask:
    task = kb.task
    if task is None:
        raise KbError("the KB file declares no learning task (missing target directive)")
    if getattr(args, "max_body", None) is not None:
        task = replace(task, max_body=args.max_body)
    if getattr(args, "tau", None) is not None:
        task = replace(task, tau=args.tau)
    return task


def _config_dict(command: str, kb_path: str, kb, task, args) -> dict:
    cfg = {"command": command, "kb": kb_path}
    if task is not None:
        cfg["target"] = kb.symbols.render_sig(task.target)
        cfg["max_body"] = task.max_body
        cfg["tau"] = task.tau
    cfg["seed"] = getattr(args, "seed", None)  # reserved; the search is deterministic
    cfg["output"] = "json" if getattr(args, "json", False) else "text"
    cfg["trace"] = bool(getattr(args, "trace", False))
    return cfg


def _config_line(cfg: dict) -> str:
    shown = [f"{k}={v}" for k, v in cfg.items() if k not in ("command", "kb", "output") and v is not None]
    return "config: " + " ".join(shown)


def _clause_json(clause, symbols) -> dict:
    head, body = render_clause_atoms(clause.head, clause.body, symbols)
    return {"head": head, "body": body}


def _print_json(doc: dict):
    print(json.dumps(doc, indent=2))


# --- subcommands -------------------------------------------------------------


def _cmd_learn(args) -> int:
    kb = parse_kb(_read(args.kb))
    task = _effective_task(kb, args)
    nemus = compile_kb(kb)

    trace = None
    if args.trace:
        trace = lambda rec: print(json.dumps(rec), file=sys.stderr)

    result = learn(nemus, task, trace=trace)
    sym = kb.symbols
    cfg = _config_dict("learn", args.kb, kb, task, args)

    if args.json:
        doc = {
            "hypotheses": [
                {"clauses": [_clause_json(c, sym) for c in clauses]}
                for clauses in result.hypotheses
            ],
            "invented": [sym.render_sig(p) for p in result.invented],
            "stats": {
                "candidates": result.stats.candidates,
                "pruned": result.stats.pruned,
                "dropped": result.stats.dropped,
                "frontier_peak": result.stats.frontier_peak,
            },
            "config": cfg,
        }
        _print_json(doc)
    else:
        color = _color_on(sys.stdout)
        if result.hypotheses:
            for n, clauses in enumerate(result.hypotheses, 1):
                print(_paint(f"hypothesis {n}:", "1", color))
                for c in clauses:
                    print("  " + render_clause(c.head, c.body, sym))
        else:
            print(_paint("no hypothesis.", "31", color))
        if result.invented:
            print("invented: " + ", ".join(sym.render_sig(p) for p in result.invented))
        s = result.stats
        print(f"stats: candidates={s.candidates} pruned={s.pruned} "
              f"dropped={s.dropped} frontier_peak={s.frontier_peak}")
        print(_config_line(cfg))
    return 0 if result.hypotheses else 1


def _cmd_check(args) -> int:
    kb = parse_kb(_read(args.kb))
    task = _effective_task(kb, args)
    clauses = parse_hypothesis(_read(args.hypothesis), kb.symbols)
    verdict = verify(kb.facts, clauses, task.positives, task.negatives)
    sym = kb.symbols
    cfg = _config_dict("check", args.kb, kb, task, args)
    cfg["hypothesis"] = args.hypothesis

    failed = None if verdict.ok else render_ground_atom(verdict.failed, sym)
    if args.json:
        _print_json({"verdict": str(verdict), "failed": failed, "config": cfg})
    else:
        color = _color_on(sys.stdout)
        if verdict.ok:
            print(_paint("Verified", "32", color))
        else:
            print(_paint(f"Fails({failed})", "31", color))
        print(_config_line(cfg))
    return 0 if verdict.ok else 1


def _cmd_dump_nemus(args) -> int:
    kb = parse_kb(_read(args.kb))
    _print_json(dump(compile_kb(kb)))
    return 0


def _cmd_enumerate(args) -> int:
    kb = parse_kb(_read(args.kb))
    task = _effective_task(kb, args)
    caps = EnumCaps(
        max_body=args.max_body if args.max_body is not None else task.max_body,
        max_clauses=args.max_clauses,
        max_vars=args.max_vars,
    )
    sym = kb.symbols
    cfg = _config_dict("enumerate", args.kb, kb, task, args)
    cfg["max_body"] = caps.max_body
    cfg["max_clauses"] = caps.max_clauses
    cfg["max_vars"] = caps.max_vars
    cfg["limit"] = args.limit

    found = False
    color = _color_on(sys.stdout)
    rows = []
    for n, (clauses, verdict) in enumerate(enumerate_hypotheses(kb.facts, task, caps, sym), 1):
        failed = None if verdict.ok else render_ground_atom(verdict.failed, sym)
        if verdict.ok:
            found = True
        if args.json:
            rows.append(
                {
                    "clauses": [_clause_json(c, sym) for c in clauses],
                    "verdict": str(verdict),
                    "failed": failed,
                }
            )
        else:
            tag = _paint("Verified", "32", color) if verdict.ok else _paint(f"Fails({failed})", "31", color)
            text = " ".join(render_clause(c.head, c.body, sym) for c in clauses)
            print(f"{tag}  {text}")
        if args.limit is not None and n >= args.limit:
            break
    if args.json:
        _print_json({"candidates": rows, "config": cfg})
    else:
        print(_config_line(cfg))
    return 0 if found else 1


# --- argument parsing --------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog=PROG,
        description="Inductive clause learning over a shared multi-space index.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tau_flag=True):
        sp.add_argument("kb", help="knowledge-base file (facts + directives)")
        sp.add_argument("--max-body", type=int, default=None, metavar="N",
                        help="body-literal cap; overrides the file directive")
        if tau_flag:
            sp.add_argument("--tau", type=float, default=None, metavar="R",
                            help="region-similarity threshold; overrides the file directive")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("learn", help="search for verified clause sets")
    common(sp)
    sp.add_argument("--trace", action="store_true",
                    help="stream one JSON object per search event to stderr")
    sp.add_argument("--seed", type=int, default=None,
                    help="reserved; the search is deterministic and ignores it")
    sp.set_defaults(func=_cmd_learn)

    sp = sub.add_parser("check", help="verify a clause file against the KB's examples")
    common(sp)
    sp.add_argument("--hypothesis", required=True, metavar="PATH",
                    help="clause file to verify")
    sp.set_defaults(func=_cmd_check)

    sp = sub.add_parser("dump-nemus", help="print the compiled index as JSON")
    sp.add_argument("kb", help="knowledge-base file")
    sp.set_defaults(func=_cmd_dump_nemus)

    sp = sub.add_parser("enumerate", help="brute-force candidate stream with verdicts")
    common(sp, tau_flag=False)
    sp.add_argument("--max-clauses", type=int, default=EnumCaps().max_clauses, metavar="N")
    sp.add_argument("--max-vars", type=int, default=EnumCaps().max_vars, metavar="N")
    sp.add_argument("--limit", type=int, default=None, metavar="N",
                    help="stop after N candidate sets")
    sp.set_defaults(func=_cmd_enumerate)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    kb_path = getattr(args, "kb", "")
    try:
        return args.func(args)
    except KbError as exc:
        return _fail(exc.msg, kb_path, exc.line, exc.col)
    except RangeRestrictionFault as exc:
        return _fail(str(exc), kb_path)
    except FileNotFoundError as exc:
        return _fail(f"cannot read {exc.filename}")
    except OSError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
