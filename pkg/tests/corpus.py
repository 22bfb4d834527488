"""Randomized KB corpus shared by the property and acceptance suites.

Shape per KB: up to 30 facts over at most 8 constants, 5 binary and 3 unary
predicates; one positive example (constants biased toward ones that occur in
facts) and 0-2 negatives; no facts for the target predicate; max_body mostly 2.
"""

import random


def random_kb(seed: int) -> str:
    rng = random.Random(seed)
    consts = [f"c{i}" for i in range(rng.randint(2, 8))]
    binary = [f"b{i}" for i in range(rng.randint(1, 5))]
    unary = [f"u{i}" for i in range(rng.randint(0, 3))]

    lines = [f"% corpus kb seed={seed}"]
    fact_consts = []
    for _ in range(rng.randint(1, 30)):
        if unary and rng.random() < 0.3:
            pred, args = rng.choice(unary), (rng.choice(consts),)
        else:
            pred, args = rng.choice(binary), (rng.choice(consts), rng.choice(consts))
        fact_consts.extend(args)
        lines.append(f"{pred}({', '.join(args)}).")

    def example_const():
        # usually a constant that actually occurs somewhere
        if fact_consts and rng.random() < 0.9:
            return rng.choice(fact_consts)
        return rng.choice(consts)

    arity = rng.choice([1, 2])
    e_pos = tuple(example_const() for _ in range(arity))
    lines.append(f"#target tgt/{arity}.")
    lines.append(f"#positive tgt({', '.join(e_pos)}).")
    for _ in range(rng.randint(0, 2)):
        e_neg = tuple(example_const() for _ in range(arity))
        if e_neg != e_pos:
            lines.append(f"#negative tgt({', '.join(e_neg)}).")
    max_body = 2 if rng.random() < 0.85 else 3
    lines.append(f"#max_body {max_body}.")
    return "\n".join(lines) + "\n"


CORPUS_SIZE = 500


def corpus():
    return [random_kb(seed) for seed in range(CORPUS_SIZE)]
