"""Finite trace maps and trace equivalence.

``tr(aut, n)`` assigns to every state a weighting over words of length
``< n``.  Words are tuples of action names; the empty tuple is the empty
word, which is also how the termination step is represented, so that a
step ``*`` read at nesting depth ``k`` becomes the word spelled so far.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .automaton import STOP, Automaton, dist_law, step_map
from .branching import Weighting, empty, fmap, kleisli_compose
from .semiring import BOOLEAN, RATIONAL, fold_product

__all__ = [
    "Word",
    "TraceTable",
    "tr",
    "trace_layers",
    "project",
    "embed",
    "brute_force_tr",
    "word_key",
    "format_word",
    "first_difference",
    "equiv_bounded",
    "boolean_witness",
    "equiv_exact_boolean",
    "RationalSpan",
    "rational_span",
    "equiv_exact_rational",
    "trace_report",
]

Word = tuple


@dataclass(frozen=True, eq=False)
class TraceTable:
    automaton: Automaton
    depth: int
    table: dict

    def __getitem__(self, x: str) -> Weighting:
        try:
            return self.table[x]
        except KeyError:
            raise KeyError(f"unknown state {x!r}") from None

    def __eq__(self, other):
        if not isinstance(other, TraceTable):
            return NotImplemented
        return self.depth == other.depth and self.table == other.table

    def __str__(self):
        return trace_report_table(self)


def _spell(step) -> Word:
    # STOP is the empty tuple, i.e. already the empty word.
    return step if step == STOP else (step[0], *step[1])


def _next_layer(aut: Automaton, prev: dict) -> dict:
    """One unfolding ``tr_{k+1} = T̄(tr_k) ∘ γ`` as a Kleisli composite."""
    s = aut.semiring

    def lifted(step):
        return fmap(_spell, dist_law(s, step_map(prev.__getitem__, step)))

    step = kleisli_compose(aut.gamma, lifted)
    return {x: step(x) for x in aut.states}


def trace_layers(aut: Automaton, n: int) -> list[dict]:
    """All of ``tr_0 .. tr_n`` as state-indexed dicts."""
    if n < 0:
        raise ValueError("depth must be nonnegative")
    layer = {x: empty(aut.semiring) for x in aut.states}
    layers = [layer]
    for _ in range(n):
        layer = _next_layer(aut, layer)
        layers.append(layer)
    return layers


def tr(aut: Automaton, n: int) -> TraceTable:
    return TraceTable(aut, n, trace_layers(aut, n)[n])


def project(t: TraceTable) -> TraceTable:
    """Drop the words of maximal length ``depth - 1``."""
    if t.depth < 1:
        raise ValueError("cannot project a depth-0 table")
    cut = t.depth - 1
    table = {x: w.restrict(lambda word: len(word) < cut) for x, w in t.table.items()}
    return TraceTable(t.automaton, cut, table)


def embed(t: TraceTable) -> TraceTable:
    return TraceTable(t.automaton, t.depth + 1, dict(t.table))


def brute_force_tr(aut: Automaton, n: int) -> TraceTable:
    """Reference trace table by enumerating every path of length ``< n``."""
    s = aut.semiring
    table = {}
    for x in aut.states:
        found = []
        stack = [(x, (), [])] if n > 0 else []
        while stack:
            q, word, weights = stack.pop()
            stop = aut.termination(q)
            if not s.is_zero(stop):
                found.append((word, fold_product(s, [*weights, stop])))
            if len(word) + 1 < n:
                for a, y, w in aut.edges(q):
                    stack.append((y, (*word, a), [*weights, w]))
        table[x] = Weighting(s, found)
    return TraceTable(aut, n, table)


def word_key(alphabet: Sequence[str]):
    """Length-then-lexicographic order with letters ranked by ``alphabet``."""
    rank = {a: i for i, a in enumerate(alphabet)}
    return lambda word: (len(word), [rank[a] for a in word])


def format_word(word: Word, alphabet: Sequence[str] = ()) -> str:
    if not word:
        return "ε"
    sep = "" if all(len(a) == 1 for a in alphabet or word) else "."
    return sep.join(word)


def format_traces(w: Weighting, alphabet: Sequence[str]) -> str:
    return w.format(lambda word: format_word(word, alphabet), word_key(alphabet))


def first_difference(aut: Automaton, x: str, y: str, n: int) -> Word | None:
    """Least word of length ``< n`` on which the traces of ``x`` and ``y`` differ."""
    aut.check_state(x)
    aut.check_state(y)
    t = tr(aut, n)
    tx, ty = t[x], t[y]
    eq = aut.semiring.eq
    words = set(tx.support()) | set(ty.support())
    differing = [w for w in words if not eq(tx[w], ty[w])]
    if not differing:
        return None
    return min(differing, key=word_key(aut.alphabet))


def equiv_bounded(aut: Automaton, x: str, y: str, n: int, method: str = "auto") -> bool:
    """Whether ``tr_n(x) == tr_n(y)``, i.e. agreement on all words shorter than ``n``.

    ``method="tables"`` compares the trace tables themselves.  The default
    picks a search that never materializes them: reachable subset pairs
    for boolean weights, a level-bounded linear span over the rationals
    for ``nat`` and ``rational``.  Min-plus always uses the tables.
    """
    aut.check_state(x)
    aut.check_state(y)
    if n < 0:
        raise ValueError("depth must be nonnegative")
    name = aut.semiring.name
    if method == "auto" and name == "boolean":
        return _subset_pairs_witness(aut, x, y, n) is None
    if method == "auto" and name in ("rational", "nat"):
        return _span_search(aut, x, y, n).witness is None
    if method not in ("auto", "tables"):
        raise ValueError(f"unknown method {method!r}")
    layers = trace_layers(aut, n)
    same = layers[n][x] == layers[n][y]
    # equality at depth n implies equality at every smaller depth
    assert not same or all(layer[x] == layer[y] for layer in layers)
    return same


def _require(aut: Automaton, semiring, x: str, y: str) -> None:
    if aut.semiring != semiring:
        raise ValueError(f"exact equivalence here needs the {semiring.name} semiring, "
                         f"not {aut.semiring.name}")
    aut.check_state(x)
    aut.check_state(y)


def _successors(aut: Automaton) -> dict:
    succ = {q: {a: [] for a in aut.alphabet} for q in aut.states}
    for q in aut.states:
        for a, r, _ in aut.edges(q):
            succ[q][a].append(r)
    return succ


def _subset_pairs_witness(aut: Automaton, x: str, y: str, n: int) -> Word | None:
    """Breadth-first search over pairs of reachable subsets, words shorter than ``n``."""
    succ = _successors(aut)
    accepting = {q for q in aut.states if aut.termination(q)}
    start = (frozenset([x]), frozenset([y]))
    seen = {start}
    level = [(start, ())]
    for _ in range(n):
        following = []
        for (p, q), word in level:
            if bool(p & accepting) != bool(q & accepting):
                return word
            for a in aut.alphabet:
                pair = (frozenset(r for s in p for r in succ[s][a]),
                        frozenset(r for s in q for r in succ[s][a]))
                if pair not in seen:
                    seen.add(pair)
                    following.append((pair, (*word, a)))
        level = following
    return None


def boolean_witness(aut: Automaton, x: str, y: str) -> Word | None:
    """Distinguishing word for two NFA states, or ``None`` if language-equal.

    Runs the subset construction lazily from ``{x}`` and ``{y}`` and merges
    DFA states with union-find (Hopcroft-Karp).
    """
    _require(aut, BOOLEAN, x, y)
    succ = _successors(aut)
    accepting = {q for q in aut.states if aut.termination(q)}

    def delta(subset, a):
        return frozenset(r for q in subset for r in succ[q][a])

    parent: dict = {}

    def find(p):
        parent.setdefault(p, p)
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    start = (frozenset([x]), frozenset([y]))
    parent[find(start[0])] = find(start[1])
    queue = [(start[0], start[1], ())]
    while queue:
        p, q, word = queue.pop(0)
        if bool(p & accepting) != bool(q & accepting):
            return word
        for a in aut.alphabet:
            p2, q2 = delta(p, a), delta(q, a)
            rp, rq = find(p2), find(q2)
            if rp != rq:
                parent[rp] = rq
                queue.append((p2, q2, (*word, a)))
    return None


def equiv_exact_boolean(aut: Automaton, x: str, y: str) -> bool:
    return boolean_witness(aut, x, y) is None


@dataclass(frozen=True)
class RationalSpan:
    """Basis of the span reachable from ``e_x - e_y``; ``witness`` if inequivalent."""

    basis: list
    words: list
    witness: Word | None

    @property
    def iterations(self) -> int:
        return len(self.basis)


def _span_search(aut: Automaton, x: str, y: str, max_len: int | None = None) -> RationalSpan:
    pos = {q: i for i, q in enumerate(aut.states)}
    n = len(aut.states)
    final = [Fraction(aut.termination(q)) for q in aut.states]
    step = {a: [[] for _ in range(n)] for a in aut.alphabet}
    for q in aut.states:
        for a, r, w in aut.edges(q):
            step[a][pos[q]].append((pos[r], Fraction(w)))

    def apply(v, a):
        out = [Fraction(0)] * n
        for i, vi in enumerate(v):
            if vi:
                for j, w in step[a][i]:
                    out[j] += vi * w
        return out

    pivots: list[tuple[int, list]] = []  # echelon form for membership tests

    def reduce(v):
        for p, row in pivots:
            if v[p]:
                c = v[p] / row[p]
                v = [vi - c * ri for vi, ri in zip(v, row)]
        return v

    basis, words = [], []
    start = [Fraction(0)] * n
    start[pos[x]] += 1
    start[pos[y]] -= 1
    queue = [(start, ())] if max_len is None or max_len > 0 else []
    while queue:
        v, word = queue.pop(0)
        r = reduce(v)
        nz = next((i for i, ri in enumerate(r) if ri), None)
        if nz is None:
            continue
        pivots.append((nz, r))
        basis.append(v)
        words.append(word)
        if sum(vi * fi for vi, fi in zip(v, final)) != 0:
            return RationalSpan(basis, words, word)
        if max_len is None or len(word) + 1 < max_len:
            queue.extend((apply(v, a), (*word, a)) for a in aut.alphabet)
    return RationalSpan(basis, words, None)


def rational_span(aut: Automaton, x: str, y: str) -> RationalSpan:
    """Linear-span equivalence check for rational weights.

    Grows a basis of ``(e_x - e_y)·M_w`` over words ``w`` in breadth-first
    order; ``x`` and ``y`` are equivalent iff the termination vector is
    orthogonal to every basis vector.  At most ``len(states)`` vectors
    are ever added.
    """
    _require(aut, RATIONAL, x, y)
    return _span_search(aut, x, y)


def equiv_exact_rational(aut: Automaton, x: str, y: str) -> bool:
    return rational_span(aut, x, y).witness is None


def trace_report_table(t: TraceTable, state: str | None = None) -> str:
    aut = t.automaton
    states = aut.states if state is None else (state,)
    return "\n".join(f"{x}: {format_traces(t[x], aut.alphabet)}" for x in states) + "\n"


def trace_report(aut: Automaton, n: int, state: str | None = None) -> str:
    if state is not None:
        aut.check_state(state)
    return trace_report_table(tr(aut, n), state)
