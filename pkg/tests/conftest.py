import pytest

from nemus_icl import compile_kb, parse_kb, render_clause

FAMILY = """\
father(jake, alice).
mother(alice, ted).
father(ted, bob).
mother(matilda, alice).

#target ancestor/2.
#positive ancestor(jake, bob).
#invent parent/2 from father/2, mother/2.
#max_body 2.
"""

# one positive chain a ->p1 a1, a dead qj region shared with the negative's
# chain, and the sound pk/r1/s1 route
COLLISION = """\
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

# closable only by inventing a bridge predicate within max_body 2
BRIDGE = """\
q1(a, c).
r(c, d).
u(d, b).

#target t/2.
#positive t(a, b).
#max_body 2.
"""

FAMILY_SOLUTION = {
    "parent(X,Y) :- father(X,Y).",
    "parent(X,Y) :- mother(X,Y).",
    "ancestor(X,Y) :- parent(X,Y).",
    "ancestor(X,Y) :- parent(X,Z0), ancestor(Z0,Y).",
}


def render_set(clauses, symbols):
    return {render_clause(c.head, c.body, symbols) for c in clauses}


@pytest.fixture
def family_kb():
    return parse_kb(FAMILY)


@pytest.fixture
def family_nemus(family_kb):
    return compile_kb(family_kb)


@pytest.fixture
def collision_kb():
    return parse_kb(COLLISION)


@pytest.fixture
def collision_nemus(collision_kb):
    return compile_kb(collision_kb)
