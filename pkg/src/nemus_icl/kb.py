"""Knowledge-base language: symbol interning, parsing, validation, rendering.

A KB file holds ground facts plus ``#`` directives describing a learning task:

    father(jake, alice).
    #target ancestor/2.
    #positive ancestor(jake, bob).
    #invent parent/2 from father/2, mother/2.

Identifiers starting lowercase are constants/predicates, uppercase are
variables (legal only in hypothesis files).  ``%`` comments to end of line.
Only arities 1 and 2 are accepted.  The long English form
``consider induction on T knowing E assuming P1 or P2 defines NewP.`` is
parsed as the equivalent of the ``#`` directives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union


class KbError(Exception):
    """Base for located KB-file errors."""

    def __init__(self, msg: str, line: Optional[int] = None, col: Optional[int] = None):
        self.msg = msg
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + msg)


class ParseError(KbError):
    """Syntax fault; always carries line/col."""


class ValidationError(KbError):
    """Well-formed syntax with bad semantics (arity clash, missing target, ...)."""


class UnknownCode(Exception):
    """A symbol code with no entry in the table."""


class _Interner:
    # names list + reverse dict; add() returns the existing id for a known key
    def __init__(self):
        self.names: list = []
        self.ids: dict = {}

    def add(self, key) -> int:
        code = self.ids.get(key)
        if code is None:
            code = len(self.names)
            self.ids[key] = code
            self.names.append(key)
        return code

    def get(self, key) -> Optional[int]:
        return self.ids.get(key)

    def name(self, code: int):
        if not 0 <= code < len(self.names):
            raise UnknownCode(code)
        return self.names[code]

    def __len__(self) -> int:
        return len(self.names)


class SymbolTable:
    """Bijective name<->code registries for constants, predicates and variables.

    Predicate identity includes arity: p/1 and p/2 intern to distinct codes.
    """

    def __init__(self):
        self._constants = _Interner()
        self._predicates = _Interner()  # keyed by (name, arity)
        self._variables = _Interner()

    def intern_constant(self, name: str) -> int:
        return self._constants.add(name)

    def intern_predicate(self, name: str, arity: int) -> int:
        return self._predicates.add((name, arity))

    def intern_variable(self, name: str) -> int:
        return self._variables.add(name)

    def constant_code(self, name: str) -> Optional[int]:
        return self._constants.get(name)

    def predicate_code(self, name: str, arity: int) -> Optional[int]:
        return self._predicates.get((name, arity))

    def constant_name(self, code: int) -> str:
        return self._constants.name(code)

    def predicate_sig(self, code: int) -> tuple:
        return self._predicates.name(code)

    def variable_name(self, code: int) -> str:
        return self._variables.name(code)

    @property
    def n_constants(self) -> int:
        return len(self._constants)

    @property
    def n_predicates(self) -> int:
        return len(self._predicates)

    def predicate_codes(self) -> range:
        return range(len(self._predicates))

    def render_sig(self, code: int) -> str:
        name, arity = self.predicate_sig(code)
        return f"{name}/{arity}"


class Var(NamedTuple):
    """A clause-local variable; codes are meaningful only within one clause."""

    code: int


Term = Union[int, Var]  # int = constant code


class GroundAtom(NamedTuple):
    pred: int
    args: tuple  # constant codes


class Atom(NamedTuple):
    """Possibly-generalized atom; args mix constant codes and Vars."""

    pred: int
    args: tuple


class Clause(NamedTuple):
    head: Atom
    body: tuple  # of Atom


def is_ground(atom) -> bool:
    return not any(isinstance(t, Var) for t in atom.args)


@dataclass
class Directive:
    kind: str  # target | positive | negative | invent | max_body | tau
    payload: object
    line: int = 0


@dataclass
class KnowledgeBase:
    facts: list
    task: object  # engine.LearnTask or None for task-less (facts-only) files
    symbols: SymbolTable
    directives: list = field(default_factory=list)


# --- tokenizer -------------------------------------------------------------

_PUNCT = {"(", ")", ",", ".", "/", "#"}
_DIGITS = "0123456789"


class _Tok(NamedTuple):
    kind: str  # name | var | int | real | punct | eof
    value: object
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch == ":":
            if text[i : i + 2] == ":-":
                toks.append(_Tok("punct", ":-", line, start_col))
                i += 2
                col += 2
                continue
            raise ParseError("expected ':-'", line, start_col)
        if ch in _PUNCT:
            toks.append(_Tok("punct", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch in _DIGITS:  # ASCII only; int() chokes on e.g. superscripts
            j = i
            while j < n and text[j] in _DIGITS:
                j += 1
            # a real only when digits follow the dot; a bare dot ends the statement
            if j < n - 1 and text[j] == "." and text[j + 1] in _DIGITS:
                j += 1
                while j < n and text[j] in _DIGITS:
                    j += 1
                toks.append(_Tok("real", float(text[i:j]), line, start_col))
            else:
                toks.append(_Tok("int", int(text[i:j]), line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "name" if ch.islower() else "var"
            toks.append(_Tok(kind, word, line, start_col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    toks.append(_Tok("eof", None, line, col))
    return toks


# --- parser ----------------------------------------------------------------

_ENGLISH_KEYWORDS = {"consider", "induction", "on", "knowing", "assuming", "or", "defines", "and", "not", "from"}


class _Parser:
    def __init__(self, text: str, symbols: Optional[SymbolTable] = None):
        self.toks = _tokenize(text)
        self.pos = 0
        self.symbols = symbols if symbols is not None else SymbolTable()

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, kind: str, value=None) -> _Tok:
        t = self.peek()
        if t.kind != kind or (value is not None and t.value != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, found {self._show(t)}", t.line, t.col)
        return self.next()

    @staticmethod
    def _show(t: _Tok) -> str:
        return "end of input" if t.kind == "eof" else repr(t.value)

    def keyword(self, word: str) -> bool:
        t = self.peek()
        if t.kind in ("name", "var") and str(t.value).lower() == word:
            self.next()
            return True
        return False

    def expect_keyword(self, word: str):
        t = self.peek()
        if not self.keyword(word):
            raise ParseError(f"expected {word!r}, found {self._show(t)}", t.line, t.col)

    # -- atoms and signatures --

    def parse_signature(self) -> tuple:
        """name/arity, or a shaped atom like ancestor(X,Y) (arity from arg count)."""
        t = self.expect("name")
        name = t.value
        if self.peek().kind == "punct" and self.peek().value == "/":
            self.next()
            a = self.expect("int")
            arity = a.value
        else:
            self.expect("punct", "(")
            arity = 0
            while True:
                a = self.peek()
                if a.kind not in ("name", "var"):
                    raise ParseError(f"expected a term, found {self._show(a)}", a.line, a.col)
                self.next()  # shape only; arity is all that matters here
                arity += 1
                if self.peek().value == ",":
                    self.next()
                    continue
                break
            self.expect("punct", ")")
        if arity not in (1, 2):
            raise ParseError(f"arity {arity} not supported (only 1 and 2)", t.line, t.col)
        return name, arity, t.line, t.col

    def parse_atom(self, allow_vars: bool, varmap: Optional[dict] = None):
        """Parse name(term, ...) and intern it; returns (Atom, line, col)."""
        t = self.expect("name")
        self.expect("punct", "(")
        args = []
        while True:
            a = self.peek()
            if a.kind == "name":
                self.next()
                args.append(self.symbols.intern_constant(a.value))
            elif a.kind == "var":
                if not allow_vars:
                    raise ValidationError(f"variable {a.value!r} in a ground context", a.line, a.col)
                self.next()
                code = self.symbols.intern_variable(a.value)
                if varmap is not None:
                    varmap.setdefault(a.value, Var(code))
                args.append(Var(code))
            else:
                raise ParseError(f"expected a term, found {self._show(a)}", a.line, a.col)
            if self.peek().value == ",":
                self.next()
                continue
            break
        self.expect("punct", ")")
        if len(args) not in (1, 2):
            raise ParseError(f"arity {len(args)} not supported (only 1 and 2)", t.line, t.col)
        pred = self.symbols.intern_predicate(t.value, len(args))
        return Atom(pred, tuple(args)), t.line, t.col

    def parse_ground_atom(self):
        atom, line, col = self.parse_atom(allow_vars=False)
        return GroundAtom(atom.pred, atom.args), line, col

    # -- statements --

    def parse_kb_statements(self):
        facts, directives = [], []
        while self.peek().kind != "eof":
            t = self.peek()
            if t.kind == "punct" and t.value == "#":
                self.next()
                directives.append(self.parse_directive())
            elif t.kind in ("name", "var") and str(t.value).lower() == "consider":
                directives.extend(self.parse_english_directive())
            elif t.kind == "name":
                atom, line, col = self.parse_atom(allow_vars=True)
                if not is_ground(atom):
                    raise ValidationError("facts must be ground", line, col)
                self.expect("punct", ".")
                facts.append(GroundAtom(atom.pred, atom.args))
            else:
                raise ParseError(f"expected a fact or directive, found {self._show(t)}", t.line, t.col)
        return facts, directives

    def parse_directive(self) -> Directive:
        t = self.expect("name")
        kind = t.value
        if kind == "target":
            name, arity, _, _ = self.parse_signature()
            payload = self.symbols.intern_predicate(name, arity)
        elif kind in ("positive", "negative"):
            payload, _, _ = self.parse_ground_atom()
        elif kind == "invent":
            name, arity, _, _ = self.parse_signature()
            invented = self.symbols.intern_predicate(name, arity)
            self.expect_keyword("from")
            sources = [self._source_pred()]
            while self.peek().value == "," or (
                self.peek().kind == "name" and self.peek().value == "or"
            ):
                self.next()
                sources.append(self._source_pred())
            payload = (invented, tuple(sources))
        elif kind == "max_body":
            n = self.expect("int")
            if n.value < 1:
                raise ValidationError("max_body must be >= 1", n.line, n.col)
            payload = n.value
        elif kind == "tau":
            v = self.peek()
            if v.kind not in ("real", "int"):
                raise ParseError(f"expected a number, found {self._show(v)}", v.line, v.col)
            self.next()
            payload = float(v.value)
            if not 0.0 <= payload <= 1.0:
                raise ValidationError("tau must be in [0, 1]", v.line, v.col)
        else:
            raise ParseError(f"unknown directive #{kind}", t.line, t.col)
        self.expect("punct", ".")
        return Directive(kind, payload, t.line)

    def _source_pred(self) -> tuple:
        name, arity, line, col = self.parse_signature()
        return name, arity, line, col

    def parse_english_directive(self) -> list:
        """consider induction on T knowing E [and [not] E'...]
        [assuming P1 [or P2...] defines NewP]."""
        t = self.peek()
        self.expect_keyword("consider")
        self.expect_keyword("induction")
        self.expect_keyword("on")
        name, arity, _, _ = self.parse_signature()
        out = [Directive("target", self.symbols.intern_predicate(name, arity), t.line)]
        self.expect_keyword("knowing")
        while True:
            neg = self.keyword("not")
            atom, _, _ = self.parse_ground_atom()
            out.append(Directive("negative" if neg else "positive", atom, t.line))
            if not self.keyword("and"):
                break
        if self.keyword("assuming"):
            sources = [self._source_pred()]
            while self.keyword("or"):
                sources.append(self._source_pred())
            self.expect_keyword("defines")
            iname, iarity, _, _ = self.parse_signature()
            invented = self.symbols.intern_predicate(iname, iarity)
            out.append(Directive("invent", (invented, tuple(sources)), t.line))
        self.expect("punct", ".")
        return out

    def parse_clauses(self):
        """Hypothesis-file syntax: `h(X,Y) :- b1(...), b2(...).` or bare facts."""
        clauses = []
        while self.peek().kind != "eof":
            head, _, _ = self.parse_atom(allow_vars=True)
            body = []
            if self.peek().value == ":-":
                self.next()
                while True:
                    atom, _, _ = self.parse_atom(allow_vars=True)
                    body.append(atom)
                    if self.peek().value == ",":
                        self.next()
                        continue
                    break
            self.expect("punct", ".")
            clauses.append(Clause(head, tuple(body)))
        return tuple(clauses)


# --- validation ------------------------------------------------------------


def _validate(facts, directives, symbols: SymbolTable):
    from .engine import InventionBias, LearnTask  # deferred: engine imports kb

    targets = [d for d in directives if d.kind == "target"]
    if len(targets) > 1:
        raise ValidationError("more than one #target", targets[1].line)
    if not targets:
        if directives:
            d = directives[0]
            raise ValidationError("task directives without a #target", d.line)
        return None  # facts-only file: fine for indexing/dumping

    target = targets[0].payload
    tname, tarity = symbols.predicate_sig(target)

    fact_preds = {f.pred for f in facts}
    positives, negatives, biases = [], [], []
    max_body, tau = 3, 0.2
    invented_codes = set()
    for d in directives:
        if d.kind in ("positive", "negative"):
            atom = d.payload
            if atom.pred != target:
                raise ValidationError(
                    f"example predicate {symbols.render_sig(atom.pred)} does not match "
                    f"target {tname}/{tarity}",
                    d.line,
                )
            (positives if d.kind == "positive" else negatives).append(atom)
        elif d.kind == "invent":
            invented, source_sigs = d.payload
            iname, iarity = symbols.predicate_sig(invented)
            if invented in fact_preds:
                raise ValidationError(f"invented predicate {iname}/{iarity} already defined by facts", d.line)
            if invented == target or invented in invented_codes:
                raise ValidationError(f"invented predicate {iname}/{iarity} is not new", d.line)
            sources = []
            for sname, sarity, line, col in source_sigs:
                code = symbols.predicate_code(sname, sarity)
                if code is None or (code not in fact_preds and code not in invented_codes):
                    raise ValidationError(f"unknown predicate {sname}/{sarity} in #invent", line, col)
                if sarity != iarity:
                    raise ValidationError(
                        f"source {sname}/{sarity} does not share arity with {iname}/{iarity}", line, col
                    )
                sources.append(code)
            invented_codes.add(invented)
            biases.append(InventionBias(invented, tuple(sources)))
        elif d.kind == "max_body":
            max_body = d.payload
        elif d.kind == "tau":
            tau = d.payload

    if not positives:
        raise ValidationError("no #positive example for the target", targets[0].line)
    fact_set = set(facts)
    for atom in positives:
        if atom in fact_set:
            raise ValidationError(
                f"positive example {render_ground_atom(atom, symbols)} already appears as a fact"
            )
    return LearnTask(
        target=target,
        positives=tuple(positives),
        negatives=tuple(negatives),
        biases=tuple(biases),
        max_body=max_body,
        tau=tau,
    )


def parse_kb(text: str) -> KnowledgeBase:
    """Parse and validate a KB file; facts keep file order (occurrence indices
    in the compiled index depend on it)."""
    p = _Parser(text)
    facts, directives = p.parse_kb_statements()
    task = _validate(facts, directives, p.symbols)
    return KnowledgeBase(facts=facts, task=task, symbols=p.symbols, directives=directives)


def parse_hypothesis(text: str, symbols: SymbolTable):
    """Parse a clause file against an existing symbol table (new names intern)."""
    return _Parser(text, symbols).parse_clauses()


# --- rendering -------------------------------------------------------------


def _display_name(index: int) -> str:
    return ("X", "Y")[index] if index < 2 else f"Z{index - 2}"


def render_clause_atoms(head, body, symbols: SymbolTable):
    """Per-atom strings sharing one first-use variable naming (X, Y, Z0, ...)."""
    names: dict = {}

    def term(t) -> str:
        if isinstance(t, Var):
            if t.code not in names:
                names[t.code] = _display_name(len(names))
            return names[t.code]
        return symbols.constant_name(t)

    def atom(a) -> str:
        name, _ = symbols.predicate_sig(a.pred)
        return f"{name}({','.join(term(t) for t in a.args)})"

    return atom(head), [atom(b) for b in body]


def render_clause(head, body, symbols: SymbolTable) -> str:
    """Deterministic text; variables become X, Y, Z0, Z1... in first-use order."""
    h, bs = render_clause_atoms(head, body, symbols)
    if not bs:
        return h + "."
    return f"{h} :- {', '.join(bs)}."


def render_ground_atom(atom, symbols: SymbolTable) -> str:
    name, _ = symbols.predicate_sig(atom.pred)
    return f"{name}({','.join(symbols.constant_name(c) for c in atom.args)})"


def render_kb(kb: KnowledgeBase) -> str:
    """Serialize facts and directives back out; parse(render(kb)) preserves
    fact multiset and directives by name."""
    sym = kb.symbols
    lines = [render_ground_atom(f, sym) + "." for f in kb.facts]
    for d in kb.directives:
        if d.kind == "target":
            lines.append(f"#target {sym.render_sig(d.payload)}.")
        elif d.kind in ("positive", "negative"):
            lines.append(f"#{d.kind} {render_ground_atom(d.payload, sym)}.")
        elif d.kind == "invent":
            invented, sources = d.payload
            srcs = ", ".join(f"{n}/{a}" for n, a, _, _ in sources)
            lines.append(f"#invent {sym.render_sig(invented)} from {srcs}.")
        elif d.kind == "max_body":
            lines.append(f"#max_body {d.payload}.")
        elif d.kind == "tau":
            lines.append(f"#tau {d.payload}.")
    return "\n".join(lines) + "\n"
