"""Learn a recursive definition of ancestor/2 from four ground facts.

The knowledge base supplies father/mother facts, a single positive example
ancestor(jake, bob), and a bias directive telling the learner it may fold
father/2 and mother/2 into a fresh parent/2 predicate.  One walk over the
index produces the textbook four-clause program, recursion included.

Run:  python3 demos/01_family_tree.py
"""

from nemus_icl import compile_kb, learn, parse_kb, render_clause

KB = """\
father(jake, alice).
mother(alice, ted).
father(ted, bob).
mother(matilda, alice).

#target ancestor/2.
#positive ancestor(jake, bob).
#invent parent/2 from father/2, mother/2.
#max_body 2.
"""


def main() -> None:
    kb = parse_kb(KB)
    nemus = compile_kb(kb)
    result = learn(nemus, kb.task)

    for i, clauses in enumerate(result.hypotheses):
        print(f"hypothesis {i}:")
        for clause in clauses:
            print("  " + render_clause(clause.head, clause.body, kb.symbols))
    print("invented:", ", ".join(kb.symbols.render_sig(p) for p in result.invented))
    print("stats:", result.stats)


if __name__ == "__main__":
    main()
