"""Bottom-up Herbrand oracle: least models, hypothesis verification, and a
brute-force hypothesis enumerator for equivalence testing.

The language is function-free, so the least Herbrand model is the finite
fixpoint of forward chaining.  A hypothesis set passes iff every positive
example lands in the model of BK plus the set and no negative does.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

from .kb import Atom, Clause, GroundAtom, Var, is_ground


class RangeRestrictionFault(Exception):
    """A rule head variable that never occurs in the body."""


@dataclass
class Program:
    facts: list  # GroundAtom
    rules: list  # Clause; every head variable must occur in the body


class Verdict(NamedTuple):
    ok: bool
    failed: Optional[GroundAtom]  # the example that broke verification

    def __str__(self):
        return "Verified" if self.ok else "Fails"


VERIFIED = Verdict(True, None)


def _atom_vars(atom) -> set:
    return {t.code for t in atom.args if isinstance(t, Var)}


def _check_range_restricted(rule: Clause):
    body_vars = set()
    for b in rule.body:
        body_vars |= _atom_vars(b)
    missing = _atom_vars(rule.head) - body_vars
    if missing:
        raise RangeRestrictionFault(rule)


def _match(atom, args, subst):
    """Extend subst so atom's terms equal the ground args, or return None."""
    out = subst
    for term, value in zip(atom.args, args):
        if isinstance(term, Var):
            bound = out.get(term.code)
            if bound is None:
                if out is subst:
                    out = dict(subst)
                out[term.code] = value
            elif bound != value:
                return None
        elif term != value:
            return None
    return out


def _eval_rule(rule: Clause, full, delta, required: int):
    """All ground heads derivable with body atom `required` matched in delta."""
    derived = []

    def walk(i: int, subst):
        if i == len(rule.body):
            head_args = tuple(subst[t.code] if isinstance(t, Var) else t for t in rule.head.args)
            derived.append(GroundAtom(rule.head.pred, head_args))
            return
        atom = rule.body[i]
        pool = delta if i == required else full
        for args in pool.get(atom.pred, ()):
            ext = _match(atom, args, subst)
            if ext is not None:
                walk(i + 1, ext)

    walk(0, {})
    return derived


def least_model(prog: Program) -> frozenset:
    """Least fixpoint of the immediate-consequence step, semi-naive (delta-driven)."""
    for rule in prog.rules:
        _check_range_restricted(rule)

    full: dict = {}
    for f in prog.facts:
        full.setdefault(f.pred, set()).add(f.args)

    # finite Herbrand base bounds the rounds; the cap is a tripwire, not a knob
    constants = {c for f in prog.facts for c in f.args}
    for rule in prog.rules:
        for atom in [rule.head] + list(rule.body):
            constants.update(t for t in atom.args if not isinstance(t, Var))
    arities = {}
    for f in prog.facts:
        arities[f.pred] = len(f.args)
    for rule in prog.rules:
        for atom in [rule.head] + list(rule.body):
            arities[atom.pred] = len(atom.args)
    hb_size = sum(max(1, len(constants)) ** a for a in arities.values())

    delta = {p: set(xs) for p, xs in full.items()}
    rounds = 0
    while delta:
        rounds += 1
        if rounds > hb_size + 1:
            raise RuntimeError("fixpoint exceeded the Herbrand-base bound")
        fresh: dict = {}
        for rule in prog.rules:
            for i in range(len(rule.body)):
                for atom in _eval_rule(rule, full, delta, i):
                    if atom.args not in full.get(atom.pred, ()) and atom.args not in fresh.get(atom.pred, set()):
                        fresh.setdefault(atom.pred, set()).add(atom.args)
        for p, xs in fresh.items():
            full.setdefault(p, set()).update(xs)
        delta = fresh

    return frozenset(GroundAtom(p, args) for p, xs in full.items() for args in xs)


def verify(bk, hypothesis, positives, negatives) -> Verdict:
    """Verified iff every positive is in least_model(bk + hypothesis) and no
    negative is.  Ground unit clauses in the hypothesis count as facts."""
    facts = list(bk)
    rules = []
    for clause in hypothesis:
        if clause.body:
            rules.append(clause)
        elif is_ground(clause.head):
            facts.append(GroundAtom(clause.head.pred, clause.head.args))
        else:
            raise RangeRestrictionFault(clause)
    model = least_model(Program(facts, rules))
    for e in positives:
        if e not in model:
            return Verdict(False, e)
    for e in negatives:
        if e in model:
            return Verdict(False, e)
    return VERIFIED


# --- brute-force enumeration ------------------------------------------------


class EnumCaps(NamedTuple):
    max_body: int = 2
    max_clauses: int = 2
    max_vars: int = 4


def _normalize(atoms) -> tuple:
    """Rename variables in first-use order; the renaming-invariant shape."""
    names: dict = {}
    shape = []
    for atom in atoms:
        terms = []
        for t in atom.args:
            if isinstance(t, Var):
                if t.code not in names:
                    names[t.code] = len(names)
                terms.append(("v", names[t.code]))
            else:
                terms.append(("c", t))
        shape.append((atom.pred, tuple(terms)))
    return tuple(shape)


def _connected(head, body) -> bool:
    """Every body atom reachable from the head through shared variables."""
    remaining = list(body)
    reached = _atom_vars(head)
    while remaining:
        for atom in remaining:
            if _atom_vars(atom) & reached:
                reached |= _atom_vars(atom)
                remaining.remove(atom)
                break
        else:
            return False
    return True


def _body_pool(preds_with_arity, variables):
    for pred, arity in preds_with_arity:
        for args in itertools.product(variables, repeat=arity):
            yield Atom(pred, args)


def enumerate_hypotheses(bk, task, caps: EnumCaps, symbols) -> Iterator:
    """Exhaustive, deterministic stream of (clause set, verdict) within caps.

    The clause language is the anti-unified one the learner emits: target-head
    clauses with variable-only connected, range-restricted bodies, plus ground
    unit target clauses as the body-0 stratum (positives excluded: the example
    itself is a vacuous hypothesis).  Bias definition clauses, when present,
    are a fixed prelude counted against the clause cap.
    """
    _, target_arity = symbols.predicate_sig(task.target)
    head = Atom(task.target, tuple(Var(i) for i in range(target_arity)))
    variables = [Var(i) for i in range(caps.max_vars)]

    prelude = []
    for bias in task.biases:
        _, barity = symbols.predicate_sig(bias.invented)
        bhead = Atom(bias.invented, tuple(Var(i) for i in range(barity)))
        for src in bias.sources:
            prelude.append(Clause(bhead, (Atom(src, bhead.args),)))
    budget = caps.max_clauses - len(prelude)
    if budget <= 0:
        return

    fact_preds = sorted({f.pred for f in bk})
    body_preds = list(fact_preds)
    for bias in task.biases:
        if bias.invented not in body_preds:
            body_preds.append(bias.invented)
    # a target atom in a body is satisfiable only with target facts around or
    # a second clause to bottom the recursion out
    if task.target not in body_preds and (task.target in {f.pred for f in bk} or budget >= 2):
        body_preds.append(task.target)
    preds_with_arity = [(p, symbols.predicate_sig(p)[1]) for p in body_preds]

    pool = []
    positives = set(task.positives)
    for args in itertools.product(range(symbols.n_constants), repeat=target_arity):
        unit = GroundAtom(task.target, args)
        if unit not in positives:
            pool.append(Clause(Atom(task.target, args), ()))

    atoms = list(_body_pool(preds_with_arity, variables))
    head_vars = _atom_vars(head)
    seen = set()
    for size in range(1, caps.max_body + 1):
        for body in itertools.product(atoms, repeat=size):
            canon = min(_normalize([head] + list(p)) for p in itertools.permutations(body))
            if canon in seen:
                continue
            seen.add(canon)
            body_vars = set()
            for b in body:
                body_vars |= _atom_vars(b)
            if not head_vars <= body_vars:
                continue
            if not _connected(head, body):
                continue
            pool.append(Clause(head, tuple(body)))

    for size in range(1, budget + 1):
        for combo in itertools.combinations(pool, size):
            clauses = tuple(prelude) + combo
            yield clauses, verify(bk, clauses, task.positives, task.negatives)
