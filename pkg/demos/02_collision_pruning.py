"""Watch inductive momentum prune a branch that the negative example poisons.

The positive walk from p(a) and the negative walk from p(b) both reach the
qj region.  When the same predicate binds the positive and negative chains
at the same argument position, the branch can never separate the examples,
so the learner drops it before ever generalizing it.  The surviving route
goes through pk/r1/s1.

Forcing the pruned candidates back in (include_pruned=True) shows the
verifier rejecting every qj hypothesis with Fails(p(b)) — the momentum
check just reached the same verdict without the model computation.
"""

from nemus_icl import compile_kb, learn, parse_kb, render_clause, render_ground_atom

KB = """\
p1(a, a1).
p1(b, b1).
qj(bj, a1).
qj(bj, b1).
pk(ak, a).
r1(c1, ak).
s1(c1).

#target p/1.
#positive p(a).
#negative p(b).
#max_body 3.
"""

kb = parse_kb(KB)
nemus = compile_kb(kb)

trace = []
result = learn(nemus, kb.task, trace=trace.append)

print("== normal walk ==")
for clauses in result.hypotheses:
    for clause in clauses:
        print("  " + render_clause(clause.head, clause.body, kb.symbols))
print(f"pruned {result.stats.pruned}, dropped {result.stats.dropped}")
for record in trace:
    if record["action"] == "prune":
        print("prune record:", record)

print("\n== with pruning disabled ==")
forced = learn(nemus, kb.task, include_pruned=True)
assert forced.hypotheses == result.hypotheses  # pruning lost nothing sound
for clauses, failing in forced.rejected:
    rendered = [render_clause(c.head, c.body, kb.symbols) for c in clauses]
    print(f"  rejected {rendered} -> Fails({render_ground_atom(failing, kb.symbols)})")
