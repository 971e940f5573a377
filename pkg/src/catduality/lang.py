"""Regular expressions to syntactic monoids.

Pipeline: parse -> Thompson NFA -> subset construction -> Moore
minimization -> transition monoid of the minimal complete DFA.

Syntax: ASCII letters, ``|``, ``*``, parentheses, ``∅`` (empty language)
and ``ε`` (empty word).  Words act on states left to right, so the monoid
product ``s t`` means "read s, then t".
"""
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import CatDualityError
from .monoid import FiniteMonoid, opposite, transformation_monoid
from .mset import validate_mset

EMPTY = "∅"
EPSILON = "ε"


class RegexSyntaxError(CatDualityError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


# --- syntax tree -------------------------------------------------------------

@dataclass(frozen=True)
class Empty:
    def __str__(self):
        return "empty"


@dataclass(frozen=True)
class Epsilon:
    def __str__(self):
        return "epsilon"


@dataclass(frozen=True)
class Literal:
    symbol: str

    def __str__(self):
        return self.symbol


@dataclass(frozen=True)
class Concat:
    left: object
    right: object

    def __str__(self):
        return f"concat({self.left},{self.right})"


@dataclass(frozen=True)
class Union:
    left: object
    right: object

    def __str__(self):
        return f"union({self.left},{self.right})"


@dataclass(frozen=True)
class Star:
    inner: object

    def __str__(self):
        return f"star({self.inner})"


def alphabet_of(ast):
    if isinstance(ast, Literal):
        return {ast.symbol}
    if isinstance(ast, (Concat, Union)):
        return alphabet_of(ast.left) | alphabet_of(ast.right)
    if isinstance(ast, Star):
        return alphabet_of(ast.inner)
    return set()


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else None

    def fail(self, msg):
        raise RegexSyntaxError(msg, self.pos)

    def parse(self):
        node = self.union()
        if self.peek() is not None:
            self.fail("unbalanced ')'" if self.peek() == ")" else f"unexpected {self.peek()!r}")
        return node

    def union(self):
        node = self.concat()
        while self.peek() == "|":
            self.pos += 1
            node = Union(node, self.concat())
        return node

    def concat(self):
        if self.peek() in (None, "|", ")"):
            self.fail("expected an operand")
        node = self.star()
        while self.peek() not in (None, "|", ")"):
            node = Concat(node, self.star())
        return node

    def star(self):
        node = self.atom()
        while self.peek() == "*":
            self.pos += 1
            node = Star(node)
        return node

    def atom(self):
        c = self.peek()
        if c == "(":
            start = self.pos
            self.pos += 1
            node = self.union()
            if self.peek() != ")":
                raise RegexSyntaxError("unbalanced '('", start)
            self.pos += 1
            return node
        if c == EMPTY:
            self.pos += 1
            return Empty()
        if c == EPSILON:
            self.pos += 1
            return Epsilon()
        if c is not None and c.isascii() and c.isalpha():
            self.pos += 1
            return Literal(c)
        if c == "*":
            self.fail("dangling '*'")
        self.fail(f"unexpected {c!r}")


def parse_regex(text):
    return _Parser(text).parse()


# --- automata --------------------------------------------------------------

class _Nfa:
    def __init__(self):
        self.eps = []
        self.moves = []

    def state(self):
        self.eps.append([])
        self.moves.append([])
        return len(self.eps) - 1

    def build(self, ast):
        """Thompson fragment (start, accept) for ast."""
        s, t = self.state(), self.state()
        if isinstance(ast, Epsilon):
            self.eps[s].append(t)
        elif isinstance(ast, Literal):
            self.moves[s].append((ast.symbol, t))
        elif isinstance(ast, Concat):
            a, b = self.build(ast.left)
            c, d = self.build(ast.right)
            self.eps[s].append(a)
            self.eps[b].append(c)
            self.eps[d].append(t)
        elif isinstance(ast, Union):
            for part in (ast.left, ast.right):
                a, b = self.build(part)
                self.eps[s].append(a)
                self.eps[b].append(t)
        elif isinstance(ast, Star):
            a, b = self.build(ast.inner)
            self.eps[s] += [a, t]
            self.eps[b] += [a, t]
        return s, t

    def closure(self, states):
        seen = set(states)
        stack = list(states)
        while stack:
            for r in self.eps[stack.pop()]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)


@dataclass(frozen=True, eq=False)
class Dfa:
    alphabet: tuple
    delta: np.ndarray           # states x symbols
    start: int
    accepting: frozenset

    @property
    def states(self):
        return range(self.delta.shape[0])

    @property
    def size(self):
        return int(self.delta.shape[0])

    def run(self, word, state=None):
        q = self.start if state is None else state
        col = {a: i for i, a in enumerate(self.alphabet)}
        for c in word:
            q = int(self.delta[q, col[c]])
        return q

    def accepts(self, word):
        return self.run(word) in self.accepting


def subset_construction(ast, alphabet=None):
    sigma = tuple(sorted(alphabet_of(ast) if alphabet is None else set(alphabet)))
    nfa = _Nfa()
    s0, acc = nfa.build(ast)
    start = nfa.closure([s0])
    index = {start: 0}
    todo = [start]
    rows = []
    while len(rows) < len(todo):
        S = todo[len(rows)]
        row = []
        for a in sigma:
            T = nfa.closure([t for q in S for (b, t) in nfa.moves[q] if b == a])
            if T not in index:
                index[T] = len(todo)
                todo.append(T)
            row.append(index[T])
        rows.append(row)
    delta = np.array(rows, dtype=np.int64).reshape(len(rows), len(sigma))
    return Dfa(sigma, delta, 0, frozenset(i for S, i in index.items() if acc in S))


def _renumber(alphabet, delta, start, accepting):
    """Relabel states in BFS order from the start, dropping unreachable ones."""
    order = [start]
    pos = {start: 0}
    for q in order:
        for r in delta[q]:
            if int(r) not in pos:
                pos[int(r)] = len(order)
                order.append(int(r))
    new = np.array([[pos[int(r)] for r in delta[q]] for q in order],
                   dtype=np.int64).reshape(len(order), len(alphabet))
    return Dfa(tuple(alphabet), new, 0, frozenset(pos[q] for q in accepting if q in pos))


def minimize(d):
    """Moore partition refinement, then BFS renumbering."""
    d = _renumber(d.alphabet, d.delta, d.start, d.accepting)
    block = np.array([1 if q in d.accepting else 0 for q in d.states], dtype=np.int64)
    while True:
        sig = [(int(block[q]),) + tuple(int(block[r]) for r in d.delta[q]) for q in d.states]
        ids = {}
        new = np.array([ids.setdefault(s, len(ids)) for s in sig], dtype=np.int64)
        done = len(ids) == len(set(block.tolist()))
        block = new
        if done:
            break
    reps = {}
    for q in d.states:
        reps.setdefault(int(block[q]), q)
    k = len(reps)
    delta = np.array([[block[r] for r in d.delta[reps[b]]] for b in range(k)],
                     dtype=np.int64).reshape(k, len(d.alphabet))
    acc = frozenset(int(block[q]) for q in d.accepting)
    return _renumber(d.alphabet, delta, int(block[d.start]), acc)


def compile_min_dfa(ast, alphabet=None):
    if isinstance(ast, str):
        ast = parse_regex(ast)
    return minimize(subset_construction(ast, alphabet))


# --- transition monoid -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SyntacticMonoid:
    monoid: object
    generators: dict            # symbol -> element
    transformations: list       # element -> tuple of target states
    dfa: Dfa

    def image(self, word):
        m = self.monoid.identity
        for c in word:
            m = int(self.monoid.table[m, self.generators[c]])
        return m

    def accepts(self, word):
        return self.transformations[self.image(word)][self.dfa.start] in self.dfa.accepting


def transition_monoid(d):
    """(monoid, generator map) of the minimal DFA equivalent to d.

    Elements are listed in shortlex order of their shortest words, which
    become the labels; the identity is labelled ``ε``.
    """
    d = minimize(d)
    gens = [tuple(int(r) for r in d.delta[:, i]) for i in range(len(d.alphabet))]
    M, elems = transformation_monoid(gens, d.size)
    index = {t: i for i, t in enumerate(elems)}
    genmap = {a: index[g] for a, g in zip(d.alphabet, gens)}
    words = [None] * M.order
    words[M.identity] = ""
    for j in range(M.order):
        for a in d.alphabet:
            k = int(M.table[j, genmap[a]])
            if words[k] is None:
                words[k] = words[j] + a
    labels = tuple(w or EPSILON for w in words)
    M = FiniteMonoid(M.table, M.identity, labels)
    return SyntacticMonoid(M, genmap, elems, d)


def syntactic_monoid(text, alphabet=None):
    return transition_monoid(compile_min_dfa(parse_regex(text), alphabet))


def state_mset(S):
    """The DFA states as a left M^op-set: q |-> m(q)."""
    Mop = opposite(S.monoid)
    act = np.array([list(t) for t in S.transformations], dtype=np.int64)
    return validate_mset(Mop, S.dfa.size, act.reshape(S.monoid.order, S.dfa.size))


def words(alphabet, max_len):
    for n in range(max_len + 1):
        for w in product(sorted(alphabet), repeat=n):
            yield "".join(w)


def nerode_classes(accepts, alphabet, max_len, suffix_len):
    """Classes of words up to max_len under agreement on suffixes up to suffix_len.

    A brute-force Myhill-Nerode approximation used to cross-check
    minimization; ``accepts`` is any membership oracle.
    """
    sufs = list(words(alphabet, suffix_len))
    sigs = {}
    for w in words(alphabet, max_len):
        sigs.setdefault(tuple(accepts(w + s) for s in sufs), w)
    return len(sigs)


def to_python_regex(ast):
    """The same language as a pattern for the re module."""
    if isinstance(ast, Empty):
        return "(?!)"
    if isinstance(ast, Epsilon):
        return ""
    if isinstance(ast, Literal):
        return ast.symbol
    if isinstance(ast, Concat):
        return f"(?:{to_python_regex(ast.left)})(?:{to_python_regex(ast.right)})"
    if isinstance(ast, Union):
        return f"(?:{to_python_regex(ast.left)}|{to_python_regex(ast.right)})"
    return f"(?:{to_python_regex(ast.inner)})*"


def dfa_to_dot(d, name="dfa"):
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  init [shape=point];']
    for q in d.states:
        shape = "doublecircle" if q in d.accepting else "circle"
        lines.append(f"  q{q} [shape={shape}];")
    lines.append(f"  init -> q{d.start};")
    for q in d.states:
        edges = {}
        for i, a in enumerate(d.alphabet):
            edges.setdefault(int(d.delta[q, i]), []).append(a)
        for r, syms in sorted(edges.items()):
            lines.append(f'  q{q} -> q{r} [label="{",".join(syms)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
