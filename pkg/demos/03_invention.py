"""Automated predicate invention when the body budget runs out mid-chain.

t(a, b) needs three hops (q1, r, u) but max_body is 2, so no flat clause
can close the gap.  When a walk stalls one literal short of the cap with
the second head constant still unreached, the learner mints a fresh
predicate for the remaining stretch and learns its definition in a
sub-walk.
"""

from nemus_icl import compile_kb, learn, parse_kb, render_clause

KB = """\
q1(a, c).
r(c, d).
u(d, b).

#target t/2.
#positive t(a, b).
#max_body 2.
"""

kb = parse_kb(KB)
result = learn(compile_kb(kb), kb.task)

for i, clauses in enumerate(result.hypotheses):
    print(f"hypothesis {i}:")
    for clause in clauses:
        print("  " + render_clause(clause.head, clause.body, kb.symbols))
print("invented:", ", ".join(kb.symbols.render_sig(p) for p in result.invented))
