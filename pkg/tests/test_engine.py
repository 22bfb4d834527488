"""The learner's primitives and full walks on the worked scenarios."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BRIDGE, COLLISION, FAMILY, FAMILY_SOLUTION, render_set
from corpus import random_kb
from nemus_icl import (
    AntiSubstitution,
    Atom,
    Clause,
    GroundAtom,
    Hypothesis,
    InventionBias,
    LearnTask,
    PreconditionFault,
    Var,
    anti_unify,
    apply_bias,
    attribute_mates,
    compile_kb,
    inductive_momentum,
    invent_auto,
    learn,
    parse_kb,
    render_clause,
    rho,
    try_recursion,
    verify,
)


def test_rho_and_mates():
    p = GroundAtom(0, (5, 6))   # pk(ak, c1)
    q = GroundAtom(0, (6, 7))   # pk(c1, ak1)
    assert rho(p, q) == {6}
    assert attribute_mates(p, q) == {5}
    assert attribute_mates(p, q, of=1) == {7}
    assert rho(GroundAtom(0, (1, 2)), GroundAtom(1, (3, 4))) == set()


def test_inductive_momentum_table():
    l_plus = GroundAtom(1, (4, 1))   # qj(bj, a1)
    l_minus = GroundAtom(1, (4, 3))  # qj(bj, b1)
    assert inductive_momentum(l_plus, l_minus, 1, 3) == "inconsistent"
    # same predicate, different positions: consistent
    assert inductive_momentum(GroundAtom(1, (1, 4)), l_minus, 1, 3) == "consistent"
    # different predicates: always consistent
    assert inductive_momentum(GroundAtom(0, (1, 9)), l_minus, 1, 3) == "consistent"


def test_inductive_momentum_preconditions():
    l_plus = GroundAtom(1, (4, 1))
    l_minus = GroundAtom(1, (4, 3))
    with pytest.raises(PreconditionFault):
        inductive_momentum(l_plus, l_minus, 9, 3)
    with pytest.raises(PreconditionFault):
        inductive_momentum(l_plus, l_minus, 1, 9)


def test_anti_unify_extends_theta():
    theta = AntiSubstitution()
    atom, theta2, fresh = anti_unify(GroundAtom(0, (0, 1)), theta, 0)
    assert atom == Atom(0, (Var(0), Var(1)))
    assert fresh == 2
    assert len(theta) == 0  # input untouched
    # second atom through the extended map reuses the binding for constant 1
    atom2, theta3, fresh2 = anti_unify(GroundAtom(1, (1, 5)), theta2, fresh)
    assert atom2 == Atom(1, (Var(1), Var(2)))
    assert fresh2 == 3
    assert theta3.get(5) == Var(2)


def test_anti_unify_repeated_constant():
    atom, theta, fresh = anti_unify(GroundAtom(0, (7, 7)), AntiSubstitution(), 0)
    assert atom == Atom(0, (Var(0), Var(0)))
    assert fresh == 1


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 9), st.integers(0, 9)), max_size=8))
@settings(max_examples=200)
def test_anti_substitution_stays_injective(chain):
    theta = AntiSubstitution()
    fresh = 0
    for pred, a, b in chain:
        _, theta, fresh = anti_unify(GroundAtom(pred, (a, b)), theta, fresh)
    vals = list(theta.mapping.values())
    assert len(vals) == len(set(vals))


def test_anti_substitution_bind_guards():
    theta = AntiSubstitution()
    theta.bind(3, Var(0))
    with pytest.raises(PreconditionFault):
        theta.bind(3, Var(1))  # constant already mapped
    with pytest.raises(PreconditionFault):
        theta.bind(4, Var(0))  # variable already used


def test_apply_bias_rewrites_and_emits_defs_once():
    biases = (InventionBias(3, (0, 1)),)
    emitted = set()
    atom, defs = apply_bias(GroundAtom(0, (0, 1)), biases, emitted)
    assert atom == GroundAtom(3, (0, 1))
    assert [d.head.pred for d in defs] == [3, 3]
    assert [d.body[0].pred for d in defs] == [0, 1]
    # second trigger (other source) rewrites but emits nothing new
    atom2, defs2 = apply_bias(GroundAtom(1, (4, 1)), biases, emitted)
    assert atom2 == GroundAtom(3, (4, 1))
    assert defs2 == []
    # unrelated predicate passes through
    atom3, defs3 = apply_bias(GroundAtom(2, (0, 1)), biases, emitted)
    assert atom3 == GroundAtom(2, (0, 1)) and defs3 == []


def _open_hyp():
    theta = AntiSubstitution({10: Var(0), 11: Var(1), 12: Var(2)})
    return Hypothesis(
        head=Atom(5, (Var(0), Var(1))),
        body=(Atom(0, (Var(0), Var(2))),),
        theta_inv=theta,
        frontier=(12,),
    )


def test_invent_auto_bridges_frontier_to_y():
    hyp = _open_hyp()
    closed, fresh = invent_auto(hyp, lambda: 9)
    assert closed.status == "closed"
    assert closed.body[-1] == Atom(9, (Var(2), Var(1)))
    assert fresh.head == Atom(9, (Var(0), Var(1)))
    assert fresh.body == () and fresh.status == "open"
    assert fresh.frontier == (12,)
    # the new walk's seed maps the stalled constant to X and the old Y constant to Y
    assert fresh.theta_inv.get(12) == Var(0)
    assert fresh.theta_inv.get(11) == Var(1)


def test_invent_auto_preconditions():
    hyp = _open_hyp()
    closed, _ = invent_auto(hyp, lambda: 9)
    with pytest.raises(PreconditionFault):
        invent_auto(closed, lambda: 9)
    linked = Hypothesis(
        head=hyp.head,
        body=(Atom(0, (Var(0), Var(1))),),  # Y already reached
        theta_inv=hyp.theta_inv,
        frontier=(12,),
    )
    with pytest.raises(PreconditionFault):
        invent_auto(linked, lambda: 9)
    with pytest.raises(PreconditionFault):
        invent_auto(
            Hypothesis(hyp.head, hyp.body, hyp.theta_inv, frontier=()), lambda: 9
        )


def test_try_recursion_family_pair(family_kb, family_nemus):
    sym = family_kb.symbols
    parent = sym.predicate_code("parent", 2)
    alice = sym.constant_code("alice")
    theta = AntiSubstitution({0: Var(0), 3: Var(1), alice: Var(2)})  # jake, bob, alice
    state = Hypothesis(
        head=Atom(sym.predicate_code("ancestor", 2), (Var(0), Var(1))),
        body=(Atom(parent, (Var(0), Var(2))),),
        theta_inv=theta,
        frontier=(alice,),
    )
    pair = try_recursion(
        state, Atom(parent, (Var(2), Var(3))), family_nemus, 0.2,
        hook=alice, sources_of={parent: (0, 1)},
    )
    assert pair is not None
    base, rec = pair
    assert render_clause(base.head, base.body, sym) == "ancestor(X,Y) :- parent(X,Y)."
    assert render_clause(rec.head, rec.body, sym) == "ancestor(X,Y) :- parent(X,Z0), ancestor(Z0,Y)."
    # a stricter threshold refuses (similarity is exactly 0.4)
    assert try_recursion(
        state, Atom(parent, (Var(2), Var(3))), family_nemus, 0.5,
        hook=alice, sources_of={parent: (0, 1)},
    ) is None


def test_try_recursion_guards(family_kb, family_nemus):
    sym = family_kb.symbols
    parent = sym.predicate_code("parent", 2)
    state = _open_hyp()
    with pytest.raises(PreconditionFault):
        try_recursion(
            Hypothesis(state.head, (), state.theta_inv), Atom(0, (Var(0), Var(1))),
            family_nemus, 0.2,
        )
    with pytest.raises(PreconditionFault):
        # candidate predicate differs from the last body atom's
        try_recursion(state, Atom(7, (Var(2), Var(3))), family_nemus, 0.2, hook=12)
    # the walk looped back to a head constant: no chain tip, not an error
    loop = Hypothesis(
        head=Atom(parent, (Var(0), Var(1))),
        body=(Atom(0, (Var(0), Var(2))), Atom(0, (Var(2), Var(0))),),
        theta_inv=AntiSubstitution({20: Var(0), 21: Var(1), 22: Var(2)}),
        frontier=(20,),
    )
    assert try_recursion(
        loop, Atom(0, (Var(0), Var(3))), family_nemus, 0.0, hook=20,
        sources_of={0: (0,)},
    ) is None


# --- full walks ---------------------------------------------------------------


def test_learn_family_exact(family_kb, family_nemus):
    result = learn(family_nemus, family_kb.task)
    assert len(result.hypotheses) == 1
    assert render_set(result.hypotheses[0], family_kb.symbols) == FAMILY_SOLUTION
    assert result.invented == (family_kb.symbols.predicate_code("parent", 2),)
    assert result.stats.candidates == 4
    assert result.stats.pruned == 0
    assert result.rejected == ()


def test_learn_collision(collision_kb, collision_nemus):
    trace = []
    result = learn(collision_nemus, collision_kb.task, trace=trace.append)
    sym = collision_kb.symbols
    assert [render_set(h, sym) for h in result.hypotheses] == [
        {"p(X) :- pk(Y,X), r1(Z0,Y), s1(Z0)."}
    ]
    assert result.stats.pruned == 1
    pruned = [r for r in trace if r["action"] == "prune"]
    assert pruned == [
        {"phase": 1, "frontier": "a1", "candidate": "qj(bj,a1)",
         "imu": "inconsistent", "action": "prune"}
    ]
    # the over-general 1-literal branch was emitted, failed the oracle, recorded
    b = sym.constant_code("b")
    assert [(render_set(cs, sym), failed) for cs, failed in result.rejected] == [
        ({"p(X) :- p1(X,Y)."}, GroundAtom(collision_kb.task.target, (b,)))
    ]


def test_learn_collision_force_include(collision_kb, collision_nemus):
    """With pruning bypassed, the qj branch closes and the oracle rejects it."""
    result = learn(collision_nemus, collision_kb.task, include_pruned=True)
    sym = collision_kb.symbols
    assert [render_set(h, sym) for h in result.hypotheses] == [
        {"p(X) :- pk(Y,X), r1(Z0,Y), s1(Z0)."}
    ]
    b = sym.constant_code("b")
    qj_sets = [
        (cs, failed) for cs, failed in result.rejected
        if any("qj" in render_clause(c.head, c.body, sym) for c in cs)
    ]
    assert qj_sets, "bypassed branch never reached the oracle"
    assert all(failed == GroundAtom(collision_kb.task.target, (b,)) for _, failed in qj_sets)


def test_learn_bridge_invents():
    kb = parse_kb(BRIDGE)
    result = learn(compile_kb(kb), kb.task)
    sym = kb.symbols
    assert [render_set(h, sym) for h in result.hypotheses] == [
        {"t(X,Y) :- q1(X,Z0), inv_0(Z0,Y).", "inv_0(X,Y) :- r(X,Z0), u(Z0,Y)."}
    ]
    assert [sym.render_sig(p) for p in result.invented] == ["inv_0/2"]


def test_learn_unreachable_example_is_empty_with_zero_candidates():
    kb = parse_kb("q(a, b).\n#target t/2.\n#positive t(c, d).\n")
    result = learn(compile_kb(kb), kb.task)
    assert result.hypotheses == ()
    assert result.stats.candidates == 0


def test_learn_single_fact_link():
    kb = parse_kb("f(a, b).\nf(c, d).\n#target t/2.\n#positive t(a, b).\n")
    result = learn(compile_kb(kb), kb.task)
    assert {"t(X,Y) :- f(X,Y)."} in [render_set(h, kb.symbols) for h in result.hypotheses]


def test_learn_monadic_closure_narrative():
    # s(X) closes immediately on the unary fact at its example constant
    kb = parse_kb(COLLISION.replace("#target p/1.", "#target s/1.")
                  .replace("#positive p(a).", "#positive s(c1).")
                  .replace("#negative p(b).", ""))
    result = learn(compile_kb(kb), kb.task)
    sets = [render_set(h, kb.symbols) for h in result.hypotheses]
    assert {"s(X) :- s1(X)."} in sets


def test_learn_two_positives_merge():
    kb = parse_kb(
        "f(a, b).\nf(c, d).\n#target t/2.\n#positive t(a, b).\n#positive t(c, d).\n"
    )
    result = learn(compile_kb(kb), kb.task)
    assert result.hypotheses, "no merged hypothesis"
    merged = [render_set(h, kb.symbols) for h in result.hypotheses]
    assert {"t(X,Y) :- f(X,Y)."} in merged
    for clauses in result.hypotheses:
        assert verify(kb.facts, clauses, kb.task.positives, kb.task.negatives).ok


def test_learn_momentum_overprune_recovered_by_witness_pass():
    """Same-predicate same-position collision prunes the only narrow route;
    the exhaustive pass still finds the sound specific clause."""
    kb = parse_kb(
        "q(a, c).\nq(b, d).\nu(c, e).\nu(d, e2).\nm(e).\n"
        "#target p/1.\n#positive p(a).\n#negative p(b).\n#max_body 3.\n"
    )
    trace = []
    result = learn(compile_kb(kb), kb.task, trace=trace.append)
    assert [render_set(h, kb.symbols) for h in result.hypotheses] == [
        {"p(X) :- q(X,Y), u(Y,Z0), m(Z0)."}
    ]
    assert any(r["phase"] == 2 for r in trace)
    assert result.stats.pruned >= 1


def test_learn_trace_records_are_well_formed(collision_kb, collision_nemus):
    trace = []
    learn(collision_nemus, collision_kb.task, trace=trace.append)
    assert trace
    for rec in trace:
        assert set(rec) == {"phase", "frontier", "candidate", "imu", "action"}
        assert rec["imu"] in ("consistent", "inconsistent", "n/a")
        assert rec["action"] in (
            "extend", "prune", "close", "recurse", "invent",
            "duplicate", "dead-end", "verified", "dropped",
        )


def test_learn_deterministic_across_fresh_parses():
    for seed in (3, 30, 77):
        text = random_kb(seed)
        runs = []
        for _ in range(2):
            kb = parse_kb(text)
            res = learn(compile_kb(kb), kb.task)
            runs.append([
                sorted(render_set(h, kb.symbols)) for h in res.hypotheses
            ])
        assert runs[0] == runs[1]


@given(st.integers(0, 499))
@settings(max_examples=60, deadline=None)
def test_learn_emissions_are_verified_connected_clauses(seed):
    kb = parse_kb(random_kb(seed))
    result = learn(compile_kb(kb), kb.task)
    for clauses in result.hypotheses:
        assert verify(kb.facts, clauses, kb.task.positives, kb.task.negatives).ok
        for cl in clauses:
            head_vars = {t.code for t in cl.head.args if isinstance(t, Var)}
            body_vars = {t.code for a in cl.body for t in a.args if isinstance(t, Var)}
            if cl.body:
                assert head_vars <= body_vars
            reached = set(head_vars)
            moved = True
            while moved:
                moved = False
                for a in cl.body:
                    vs = {t.code for t in a.args if isinstance(t, Var)}
                    if vs & reached and not vs <= reached:
                        reached |= vs
                        moved = True
            assert body_vars <= reached
