"""Inductive clause learning over a shared multi-space index.

The package splits into four layers:

* :mod:`nemus_icl.kb` — the KB file language: interning, parsing, rendering;
* :mod:`nemus_icl.nemus` — the compiled index (spaces, bindings, beta/iota);
* :mod:`nemus_icl.engine` — the learner (momentum pruning, anti-unification,
  recursion, predicate invention);
* :mod:`nemus_icl.oracle` — least-Herbrand-model verification and the
  brute-force enumerator used to cross-check the learner.
"""

from .engine import (
    AntiSubstitution,
    Hypothesis,
    InventionBias,
    LearnResult,
    LearnTask,
    PreconditionFault,
    Stats,
    anti_unify,
    apply_bias,
    attribute_mates,
    inductive_momentum,
    invent_auto,
    learn,
    rho,
    try_recursion,
)
from .kb import (
    Atom,
    Clause,
    Directive,
    GroundAtom,
    KbError,
    KnowledgeBase,
    ParseError,
    SymbolTable,
    UnknownCode,
    ValidationError,
    Var,
    parse_hypothesis,
    parse_kb,
    render_clause,
    render_ground_atom,
    render_kb,
)
from .nemus import (
    ArityError,
    Binding,
    ISpace,
    PredicateSpace,
    SharedNeMuS,
    TNode,
    UnknownInstance,
    atom_of,
    beta,
    compile_kb,
    dump,
    iota,
    region_similarity,
)
from .oracle import (
    EnumCaps,
    Program,
    RangeRestrictionFault,
    Verdict,
    enumerate_hypotheses,
    least_model,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "AntiSubstitution", "ArityError", "Atom", "Binding", "Clause", "Directive", "EnumCaps",
    "GroundAtom", "Hypothesis", "ISpace", "InventionBias", "KbError",
    "KnowledgeBase", "LearnResult", "LearnTask", "ParseError",
    "PreconditionFault", "PredicateSpace", "Program", "RangeRestrictionFault",
    "SharedNeMuS", "Stats", "SymbolTable", "TNode", "UnknownCode",
    "UnknownInstance", "ValidationError", "Var",
    "Verdict", "anti_unify", "apply_bias", "atom_of", "attribute_mates",
    "beta", "compile_kb", "dump", "enumerate_hypotheses",
    "inductive_momentum", "invent_auto", "iota", "learn", "least_model",
    "parse_hypothesis", "parse_kb", "region_similarity", "render_clause",
    "render_ground_atom", "render_kb", "rho", "try_recursion", "verify",
]
