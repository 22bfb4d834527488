"""The learner: a breadth-first walk over constant bindings from the positive
example, pruned by inductive momentum against the negative example's walk,
generalized by anti-unification, and closed directly, by recursion, or by
predicate invention.

Search discipline, per state (one open hypothesis branch):
  * candidates come from beta(c) for each frontier constant c, in binding
    order (file order of facts);
  * a candidate already used on this branch is skipped (theta_inv is
    injective, so ground identity is the right duplicate test);
  * inductive momentum collides the candidate against every binding of the
    paired negative-walk constants; candidates hooked directly at a head
    example constant are exempt (the momentum pairing starts at the mates);
  * survivors are bias-rewritten, anti-unified, then closed or extended.

A second exhaustive pass over connected ground witnesses runs only when the
narrow walk emits nothing; it guarantees that any single connected
range-restricted clause solution within the body cap is found.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Optional

from .kb import Atom, Clause, GroundAtom, Var, render_clause
from .nemus import SharedNeMuS, atom_of, beta, region_similarity
from .oracle import verify

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"
NOT_APPLIED = "n/a"

OPEN = "open"
CLOSED = "closed"


class PreconditionFault(Exception):
    pass


class InventionBias(NamedTuple):
    invented: int
    sources: tuple  # predicate codes sharing the invented predicate's arity


@dataclass(frozen=True)
class LearnTask:
    target: int
    positives: tuple
    negatives: tuple = ()
    biases: tuple = ()
    max_body: int = 3
    tau: float = 0.2


class AntiSubstitution:
    """Injective constant->variable map (theta inverse), injective both ways."""

    def __init__(self, mapping: Optional[dict] = None):
        self.mapping = dict(mapping) if mapping else {}
        self._vars = {v.code for v in self.mapping.values()}

    def get(self, const: int) -> Optional[Var]:
        return self.mapping.get(const)

    def const_of(self, var: Var) -> Optional[int]:
        for c, v in self.mapping.items():
            if v == var:
                return c
        return None

    def bind(self, const: int, var: Var):
        if const in self.mapping or var.code in self._vars:
            raise PreconditionFault(f"binding {const}->{var} breaks injectivity")
        self.mapping[const] = var
        self._vars.add(var.code)

    def copy(self) -> "AntiSubstitution":
        return AntiSubstitution(self.mapping)

    def __contains__(self, const: int) -> bool:
        return const in self.mapping

    def __len__(self):
        return len(self.mapping)


@dataclass
class Hypothesis:
    """An open or closed hypothesis branch with its walk bookkeeping."""

    head: Atom
    body: tuple
    theta_inv: AntiSubstitution
    status: str = OPEN
    frontier: tuple = ()  # constants whose bindings extend this branch next
    pairs: dict = field(default_factory=dict)  # positive const -> negative counterparts
    used: frozenset = frozenset()  # ground atoms consumed on this branch
    fresh: int = 0  # next variable code

    def body_vars(self) -> set:
        out = set()
        for atom in self.body:
            out |= {t.code for t in atom.args if isinstance(t, Var)}
        return out


@dataclass
class Stats:
    candidates: int = 0
    pruned: int = 0
    dropped: int = 0
    frontier_peak: int = 0


@dataclass
class LearnResult:
    hypotheses: tuple  # of clause tuples; every set is oracle-verified
    invented: tuple  # predicate codes created and used by the hypotheses
    stats: Stats
    rejected: tuple = ()  # (clause tuple, failing example) for dropped emissions


# --- walk primitives: hooks, mates, momentum, generalization ------------------


def rho(p, q) -> set:
    """Hook-terms: constants occurring in both atoms."""
    return set(p.args) & set(q.args)


def attribute_mates(p, q, of: int = 0) -> set:
    """Non-shared constants of the chosen atom (0 = p, 1 = q)."""
    chosen = (p, q)[of]
    return set(chosen.args) - rho(p, q)


def inductive_momentum(l_plus, l_minus, k: int, m: int) -> str:
    """Inconsistent exactly when both atoms carry the same predicate and the
    walk constants k and m sit at the same (first) argument index."""
    if k not in l_plus.args:
        raise PreconditionFault(f"constant {k} does not occur in the positive atom")
    if m not in l_minus.args:
        raise PreconditionFault(f"constant {m} does not occur in the negative atom")
    if l_plus.pred == l_minus.pred and l_plus.args.index(k) == l_minus.args.index(m):
        return INCONSISTENT
    return CONSISTENT


def anti_unify(atom, theta_inv: AntiSubstitution, fresh: int):
    """Replace constants by their mapped variables, minting fresh ones for
    unseen constants.  Returns (generalized atom, extended theta, next fresh);
    the input theta is never mutated."""
    out = theta_inv
    terms = []
    for c in atom.args:
        v = out.get(c)
        if v is None:
            if out is theta_inv:
                out = theta_inv.copy()
            v = Var(fresh)
            fresh += 1
            out.bind(c, v)
        terms.append(v)
    return Atom(atom.pred, tuple(terms)), out, fresh


def apply_bias(atom, biases, emitted: set):
    """Rewrite the atom's predicate to its bias-invented one, emitting the
    definition clauses (one per source) the first time the bias triggers."""
    for bias in biases:
        if atom.pred in bias.sources:
            defs = []
            if bias.invented not in emitted:
                emitted.add(bias.invented)
                head = Atom(bias.invented, tuple(Var(i) for i in range(len(atom.args))))
                defs = [Clause(head, (Atom(src, head.args),)) for src in bias.sources]
            return type(atom)(bias.invented, atom.args), defs
    return atom, []


def invent_auto(open_hyp: Hypothesis, fresh_pred: Callable[[], int]):
    """Close an at-cap open hypothesis with a fresh predicate bridging its
    frontier to Y, returning (closed hypothesis, new open hypothesis)."""
    if open_hyp.status != OPEN:
        raise PreconditionFault("hypothesis already closed")
    if len(open_hyp.head.args) != 2:
        raise PreconditionFault("invention bridges binary targets only")
    y = open_hyp.head.args[1]
    if y.code in open_hyp.body_vars():
        raise PreconditionFault("head argument Y already linked")
    if not open_hyp.frontier:
        raise PreconditionFault("no frontier constant to bridge from")
    stalled = open_hyp.frontier[0]
    z_last = open_hyp.theta_inv.get(stalled)
    pred = fresh_pred()
    closed = replace(
        open_hyp,
        body=open_hyp.body + (Atom(pred, (z_last, y)),),
        status=CLOSED,
    )
    y_const = open_hyp.theta_inv.const_of(y)
    theta = AntiSubstitution()
    theta.bind(stalled, Var(0))
    if y_const is not None and y_const != stalled:
        theta.bind(y_const, Var(1))
    new_open = Hypothesis(
        head=Atom(pred, (Var(0), Var(1))),
        body=(),
        theta_inv=theta,
        status=OPEN,
        frontier=open_hyp.frontier,
        fresh=2,
    )
    return closed, new_open


def try_recursion(open_hyp: Hypothesis, next_atom, nemus: SharedNeMuS, tau: float,
                  hook: Optional[int] = None, sources_of: Optional[dict] = None):
    """When the walk meets the last body atom's predicate again and that
    predicate's argument regions overlap (similarity >= tau), return the
    (base, recursive) clause pair; None means keep chaining."""
    if not open_hyp.body:
        raise PreconditionFault("recursion needs a nonempty body")
    pred = next_atom.pred
    if pred != open_hyp.body[-1].pred:
        raise PreconditionFault("candidate is not in the same concept region")
    if len(open_hyp.head.args) != 2 or len(next_atom.args) != 2:
        return None
    sources = (sources_of or {}).get(pred)
    if region_similarity(nemus, pred, sources) < tau:
        return None
    y = open_hyp.head.args[1]
    anchor = hook if hook is not None else open_hyp.frontier[0]
    z_last = open_hyp.theta_inv.get(anchor)
    if z_last is None or z_last in open_hyp.head.args:
        return None  # the walk looped back onto a head constant; no chain tip to close
    base_body = tuple(
        Atom(a.pred, tuple(y if t == z_last else t for t in a.args)) for a in open_hyp.body
    )
    base = Clause(open_hyp.head, base_body)
    recursive = Clause(open_hyp.head, open_hyp.body + (Atom(open_hyp.head.pred, (z_last, y)),))
    return base, recursive


# --- the learner -------------------------------------------------------------


def _vars_of(atom) -> set:
    return {t.code for t in atom.args if isinstance(t, Var)}


def _clause_preds(clauses) -> set:
    out = set()
    for cl in clauses:
        out.add(cl.head.pred)
        out.update(a.pred for a in cl.body)
    return out


class _Walk:
    """Search state shared across one learn() call."""

    def __init__(self, nemus: SharedNeMuS, task: LearnTask, trace, include_pruned: bool):
        self.nemus = nemus
        self.task = task
        self.sym = nemus.symbols
        self.trace = trace
        self.include_pruned = include_pruned
        self.stats = Stats()
        self.rejected = []
        self.bias_emitted: set = set()
        self.bias_defs: dict = {}  # invented pred -> tuple of definition clauses
        self.sources_of = {b.invented: b.sources for b in task.biases}
        # codes an auto-invented predicate must not collide with; re-running
        # learn on the same symbol table reuses inv_N names deterministically
        self.inv_taken = {p for p in range(len(nemus.P.positive)) if nemus.P.positive[p]}
        self.inv_taken.add(task.target)
        for b in task.biases:
            self.inv_taken.add(b.invented)
            self.inv_taken.update(b.sources)

    # -- plumbing --

    def emit_trace(self, frontier, candidate, imu, action, phase=1):
        if self.trace is not None:
            rec = {
                "phase": phase,
                "frontier": None if frontier is None else self.sym.constant_name(frontier),
                "candidate": candidate,
                "imu": imu,
                "action": action,
            }
            self.trace(rec)

    def fresh_pred(self) -> int:
        i = 0
        while True:
            code = self.sym.intern_predicate(f"inv_{i}", 2)
            i += 1
            if code not in self.inv_taken:
                self.inv_taken.add(code)
                return code

    def rewrite(self, ground_atom):
        atom, defs = apply_bias(ground_atom, self.task.biases, self.bias_emitted)
        if defs:
            self.bias_defs[atom.pred] = tuple(defs)
        return atom

    def attach_defs(self, clauses) -> tuple:
        used = _clause_preds(clauses)
        defs = []
        for bias in self.task.biases:
            if bias.invented in used:
                defs.extend(self.bias_defs.get(bias.invented, ()))
        return tuple(defs) + tuple(clauses)

    def momentum_verdict(self, cand, hook: int, state: Hypothesis, head_consts) -> str:
        if hook in head_consts:
            return NOT_APPLIED  # seeds are exempt; pairing starts at the mates
        verdict = CONSISTENT
        for m in state.pairs.get(hook, ()):
            for nb in beta(self.nemus, m):
                l_minus = atom_of(self.nemus, nb.target.c, nb.target.i)
                if inductive_momentum(cand, l_minus, hook, m) == INCONSISTENT:
                    return INCONSISTENT
        return verdict

    def extended_pairs(self, pairs: dict, cand, hook: int) -> dict:
        """Lockstep the negative walk: mates of same-predicate, same-position
        colliders become the counterparts of the candidate's mates."""
        out = None
        k_pos = cand.args.index(hook)
        for m in pairs.get(hook, ()):
            for nb in beta(self.nemus, m):
                l_minus = atom_of(self.nemus, nb.target.c, nb.target.i)
                if l_minus.pred != cand.pred or l_minus.args.index(m) != k_pos:
                    continue
                for cp, cm in zip(cand.args, l_minus.args):
                    if cp == hook:
                        continue
                    if out is None:
                        out = {c: tuple(v) for c, v in pairs.items()}
                    if cm not in out.get(cp, ()):
                        out[cp] = out.get(cp, ()) + (cm,)
        return out if out is not None else pairs

    # -- one positive example --

    def learn_positive(self, e_pos: GroundAtom, allow_invention=True):
        """Narrow walk for one positive example; returns ordered verified sets."""
        results: dict = {}  # rendered frozenset -> clause tuple

        theta = AntiSubstitution()
        head_terms = []
        for c in e_pos.args:
            v = theta.get(c)
            if v is None:
                v = Var(len(theta))
                theta.bind(c, v)
            head_terms.append(v)
        head = Atom(self.task.target, tuple(head_terms))
        head_consts = set(e_pos.args)
        binary = len(e_pos.args) == 2

        pairs: dict = {}
        for neg in self.task.negatives:
            for pos_c, neg_c in zip(e_pos.args, neg.args):
                if neg_c not in pairs.get(pos_c, ()):
                    pairs[pos_c] = pairs.get(pos_c, ()) + (neg_c,)

        root = Hypothesis(
            head=head,
            body=(),
            theta_inv=theta,
            frontier=(e_pos.args[0],),
            pairs=pairs,
            fresh=len(theta),
        )

        def record(clauses, label):
            full = tuple(dict.fromkeys(self.attach_defs(clauses)))
            verdict = verify(self._facts(), full, (e_pos,), self.task.negatives)
            key = frozenset(render_clause(c.head, c.body, self.sym) for c in full)
            if verdict.ok:
                results.setdefault(key, full)
            else:
                self.stats.dropped += 1
                self.rejected.append((full, verdict.failed))
            self.emit_trace(None, label, NOT_APPLIED, "verified" if verdict.ok else "dropped")

        queue = deque([root])
        while queue:
            self.stats.frontier_peak = max(self.stats.frontier_peak, len(queue))
            state = queue.popleft()
            emitted_here = False
            extensions = []

            for hook in state.frontier:
                for binding in beta(self.nemus, hook):
                    cand = atom_of(self.nemus, binding.target.c, binding.target.i)
                    self.stats.candidates += 1
                    shown = self._show_ground(cand)
                    if cand in state.used:
                        self.emit_trace(hook, shown, NOT_APPLIED, "duplicate")
                        continue
                    verdict = self.momentum_verdict(cand, hook, state, head_consts)
                    if verdict == INCONSISTENT:
                        self.stats.pruned += 1
                        if not self.include_pruned:
                            self.emit_trace(hook, shown, verdict, "prune")
                            continue
                    rewritten = self.rewrite(cand)
                    gen, theta2, fresh2 = anti_unify(rewritten, state.theta_inv, state.fresh)

                    closes = _vars_of(head) <= (state.body_vars() | _vars_of(gen)) if binary \
                        else (not self._mates(rewritten, hook) or len(state.body) + 1 >= self.task.max_body)
                    recursion = None
                    if (
                        binary
                        and state.body
                        and rewritten.pred == state.body[-1].pred
                        and len(rewritten.args) == 2
                    ):
                        recursion = try_recursion(
                            state, gen, self.nemus, self.task.tau, hook=hook, sources_of=self.sources_of
                        )

                    if closes:
                        emitted_here = True
                        self.emit_trace(hook, shown, verdict, "close")
                        record((Clause(head, state.body + (gen,)),), render_clause(head, state.body + (gen,), self.sym))
                    if recursion is not None:
                        emitted_here = True
                        self.emit_trace(hook, shown, verdict, "recurse")
                        record(recursion, render_clause(recursion[1].head, recursion[1].body, self.sym))
                    if closes or recursion is not None:
                        continue

                    mates = self._mates(rewritten, hook)
                    if len(state.body) + 1 >= self.task.max_body or not mates:
                        self.emit_trace(hook, shown, verdict, "dead-end")
                        continue
                    self.emit_trace(hook, shown, verdict, "extend")
                    extensions.append(
                        replace(
                            state,
                            body=state.body + (gen,),
                            theta_inv=theta2,
                            fresh=fresh2,
                            frontier=mates,
                            pairs=self.extended_pairs(state.pairs, cand, hook),
                            used=state.used | {cand},
                        )
                    )

            if not binary and not emitted_here and not extensions and state.body:
                # frontier exhausted: a monadic chain closes as-is
                record((Clause(head, state.body),), render_clause(head, state.body, self.sym))
                emitted_here = True

            if (
                binary
                and allow_invention
                and not emitted_here
                and len(state.body) == self.task.max_body - 1
                and state.frontier
                and head.args[1].code not in state.body_vars()
            ):
                self._invent(state, head, e_pos, record)

            queue.extend(extensions)

        return results

    def _invent(self, state: Hypothesis, head, e_pos, record):
        closed, new_open = invent_auto(state, self.fresh_pred)
        inv_pred = new_open.head.pred
        self.emit_trace(state.frontier[0], self.sym.render_sig(inv_pred), NOT_APPLIED, "invent")
        y_const = e_pos.args[1]
        sub_task = replace(
            self.task, target=inv_pred, positives=(GroundAtom(inv_pred, (state.frontier[0], y_const)),),
            negatives=(),
        )
        sub = _Walk(self.nemus, sub_task, self.trace, self.include_pruned)
        sub.stats = self.stats  # shared counters
        sub.rejected = self.rejected
        sub.bias_emitted = self.bias_emitted
        sub.bias_defs = self.bias_defs
        sub.inv_taken = self.inv_taken
        sub_sets = sub.learn_positive(sub_task.positives[0], allow_invention=False)
        main = Clause(head, closed.body)
        for sub_clauses in sub_sets.values():
            record((main,) + tuple(sub_clauses), render_clause(main.head, main.body, self.sym))

    # -- phase 2: exhaustive connected-witness fallback --

    def witness_walk(self, e_pos: GroundAtom):
        """Grow connected ground witnesses and anti-unify them; complete for
        single-clause solutions within max_body.  Stops at the first verified
        set.  No momentum, no bias, no invention here."""
        facts = self._facts()
        head_consts = list(dict.fromkeys(e_pos.args))
        binary = len(e_pos.args) == 2

        theta0 = {}
        head_terms = []
        for c in e_pos.args:
            if c not in theta0:
                theta0[c] = Var(len(theta0))
            head_terms.append(theta0[c])
        head = Atom(self.task.target, tuple(head_terms))

        seeds = []
        for idx, f in enumerate(facts):
            if set(f.args) & set(head_consts):
                seeds.append((idx,))
        queue = deque(seeds)
        seen = {frozenset(s) for s in seeds}

        while queue:
            self.stats.frontier_peak = max(self.stats.frontier_peak, len(queue))
            state = queue.popleft()
            consts = set()
            for i in state:
                consts.update(facts[i].args)

            if set(head_consts) <= consts:
                theta = dict(theta0)
                body = []
                for i in state:
                    terms = []
                    for c in facts[i].args:
                        if c not in theta:
                            theta[c] = Var(len(theta))
                        terms.append(theta[c])
                    body.append(Atom(facts[i].pred, tuple(terms)))
                clause = Clause(head, tuple(body))
                verdict = verify(facts, (clause,), (e_pos,), self.task.negatives)
                shown = render_clause(clause.head, clause.body, self.sym)
                self.emit_trace(None, shown, NOT_APPLIED, "verified" if verdict.ok else "dropped", phase=2)
                if verdict.ok:
                    key = frozenset({shown})
                    return {key: (clause,)}
                self.stats.dropped += 1
                self.rejected.append(((clause,), verdict.failed))

            if len(state) >= self.task.max_body:
                continue
            reach = consts | set(head_consts)
            for j, f in enumerate(facts):
                if j in state or not (set(f.args) & reach):
                    continue
                self.stats.candidates += 1
                nxt = state + (j,)
                fs = frozenset(nxt)
                if fs in seen:
                    continue
                seen.add(fs)
                queue.append(nxt)
        return {}

    # -- helpers --

    def _facts(self):
        if not hasattr(self, "_fact_cache"):
            out = []
            for cspace in self.nemus.C:
                t = cspace[0].args[0]
                out.append(atom_of(self.nemus, t.c, t.i))
            self._fact_cache = out
        return self._fact_cache

    def _mates(self, atom, hook: int) -> tuple:
        return tuple(dict.fromkeys(c for c in atom.args if c != hook))

    def _show_ground(self, atom) -> str:
        name, _ = self.sym.predicate_sig(atom.pred)
        return f"{name}({','.join(self.sym.constant_name(c) for c in atom.args)})"


def learn(nemus: SharedNeMuS, task: LearnTask, *, trace=None, include_pruned: bool = False) -> LearnResult:
    """Run the full search for every positive example and merge the results.

    Every returned clause set is oracle-verified; an unreachable target yields
    an empty result with stats rather than an error.
    """
    walk = _Walk(nemus, task, trace, include_pruned)
    per_example = []
    for e_pos in task.positives:
        sets = walk.learn_positive(e_pos)
        if not sets:
            sets = walk.witness_walk(e_pos)
        per_example.append(sets)

    nonempty = [list(r.values()) for r in per_example if r]
    hypotheses: dict = {}
    if nonempty:
        if len(nonempty) == 1:
            for clauses in nonempty[0]:
                key = frozenset(render_clause(c.head, c.body, walk.sym) for c in clauses)
                hypotheses.setdefault(key, clauses)
        else:
            # one choice per example, union, re-verify the merged set
            for combo in itertools.product(*nonempty):
                merged = []
                for clauses in combo:
                    for c in clauses:
                        if c not in merged:
                            merged.append(c)
                merged = tuple(merged)
                verdict = verify(walk._facts(), merged, task.positives, task.negatives)
                if not verdict.ok:
                    walk.stats.dropped += 1
                    walk.rejected.append((merged, verdict.failed))
                    continue
                key = frozenset(render_clause(c.head, c.body, walk.sym) for c in merged)
                hypotheses.setdefault(key, merged)

    bk_preds = {i for i, insts in enumerate(nemus.P.positive) if insts}
    creatable = {b.invented for b in task.biases}
    invented = []
    for clauses in hypotheses.values():
        for p in sorted(_clause_preds(clauses)):
            if p in bk_preds or p == task.target or p in invented:
                continue
            if p in creatable or walk.sym.predicate_sig(p)[0].startswith("inv_"):
                invented.append(p)

    return LearnResult(
        hypotheses=tuple(hypotheses.values()),
        invented=tuple(invented),
        stats=walk.stats,
        rejected=tuple(walk.rejected),
    )
