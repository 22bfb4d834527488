"""Poke at the shared multi-space index that the learner walks.

Constants, predicates, and clauses each live in their own space, tied
together by typed nodes.  beta(c) answers "where does this constant occur
as a fact argument" in file order — that one query drives the whole
chain-building walk.  region_similarity compares a binary predicate's two
argument columns (used to gate recursive hypotheses).
"""

import json

from nemus_icl import beta, compile_kb, dump, iota, parse_kb, region_similarity

KB = """\
father(jake, alice).
mother(alice, ted).
father(ted, bob).
mother(matilda, alice).

#target ancestor/2.
#positive ancestor(jake, bob).
#invent parent/2 from father/2, mother/2.
"""

kb = parse_kb(KB)
nemus = compile_kb(kb)
sym = kb.symbols

alice = sym.constant_code("alice")
print(f"beta(alice):  # code {alice}")
for b in beta(nemus, alice):
    name, _ = sym.predicate_sig(b.target.c)
    print(f"  {name} instance {b.target.i}, argument {b.target.a} (w={b.w}, k={b.k})")

# iota: zero-based position of the first occurrence in an argument vector
args = nemus.P.positive[sym.predicate_code("father", 2)][0].args
print("iota(alice, father#1 args):", iota(alice, args))

father = sym.predicate_code("father", 2)
mother = sym.predicate_code("mother", 2)
print("region_similarity(father):", region_similarity(nemus, father))
print("region_similarity(father+mother):", region_similarity(nemus, father, sources=(father, mother)))

print("\nfull dump:")
print(json.dumps(dump(nemus), indent=2)[:400] + " ...")
