"""Trace logic: formulas, semantics, normal forms and axiom rewriting.

Grammar (``+`` binds loosest, ``s *`` and ``<a>`` are prefix operators)::

    φ ::= 0 | end | <a> φ | s * φ | φ + φ | ( φ )

``end`` is the termination modality and ``+`` is interpreted by the
semiring's addition, so a formula denotes a semiring-valued predicate
on states.  Every formula is equal under the axioms to a finite linear
combination of trace atoms ``<a1>...<ak>end``; that combination is its
normal form, a weighting over words.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, Union

from .automaton import STOP, Automaton
from .branching import ProbabilityMode, Weighting, empty, fmap, unit
from .semiring import INF, Semiring, fold_sum
from .trace import Word, first_difference, format_word, word_key

__all__ = [
    "Formula",
    "Zero",
    "Tick",
    "Join",
    "Diam",
    "Scale",
    "FormulaSyntaxError",
    "parse_formula",
    "format_formula",
    "depth",
    "actions",
    "evaluate",
    "predicate",
    "normal_form",
    "format_normal_form",
    "pairing",
    "word_formula",
    "axiom_redexes",
    "apply_axiom_once",
    "distinguish",
    "refute",
    "chain_automaton",
    "random_formula",
]


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Tick:
    pass


@dataclass(frozen=True)
class Join:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Diam:
    action: str
    body: "Formula"


@dataclass(frozen=True)
class Scale:
    scalar: object
    body: "Formula"


Formula = Union[Zero, Tick, Join, Diam, Scale]

ZERO = Zero()
TICK = Tick()


# -- syntax -----------------------------------------------------------------

class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        self.pos = pos
        super().__init__(f"at position {pos}: {message}")


_TOKEN = re.compile(r"""
    \s*(?:
      (?P<diam><\s*(?P<act>[A-Za-z0-9_]+)\s*>)
    | (?P<lit>-?\d+(?:\.\d+)?(?:/\d+)?|inf\b|true\b|false\b)
    | (?P<end>end\b)
    | (?P<op>[+*()])
    | (?P<bad>¬|~|!|&|∧|\|\||not\b|and\b)
    | (?P<junk>\S)
    )""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        if kind == "act":
            kind = "diam"
        if kind == "bad":
            raise FormulaSyntaxError(
                f"{m.group('bad')!r}: negation and conjunction are not part of the logic", start)
        if kind == "junk":
            raise FormulaSyntaxError(f"unexpected character {m.group('junk')!r}", start)
        value = m.group("act") if kind == "diam" else m.group(kind)
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


def parse_formula(text: str, semiring: Semiring | None = None) -> Formula:
    """Parse ``text``; scalar literals need ``semiring`` to be interpreted."""
    tokens = _tokenize(text)
    i = 0

    def peek(offset=0):
        return tokens[min(i + offset, len(tokens) - 1)]

    def advance():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expect(value):
        kind, v, pos = advance()
        if v != value or kind != "op":
            got = "end of input" if kind == "eof" else repr(v)
            raise FormulaSyntaxError(f"expected {value!r}, got {got}", pos)

    def join():
        f = term()
        while peek()[:2] == ("op", "+"):
            advance()
            f = Join(f, term())
        return f

    def term():
        kind, value, pos = peek()
        if kind == "lit" and peek(1)[:2] == ("op", "*"):
            advance()
            advance()
            if semiring is None:
                raise FormulaSyntaxError("scalar needs a semiring to be interpreted", pos)
            try:
                scalar = semiring.parse(value)
            except ValueError as exc:
                raise FormulaSyntaxError(str(exc), pos) from None
            return Scale(scalar, term())
        if kind == "diam":
            advance()
            return Diam(value, term())
        return atom()

    def atom():
        kind, value, pos = advance()
        if kind == "end":
            return TICK
        if kind == "lit" and value == "0":
            return ZERO
        if kind == "op" and value == "(":
            f = join()
            expect(")")
            return f
        if kind == "eof":
            raise FormulaSyntaxError("unexpected end of input", pos)
        if kind == "lit":
            raise FormulaSyntaxError(f"scalar {value!r} must be followed by '*'", pos)
        raise FormulaSyntaxError(f"unexpected {value!r}", pos)

    f = join()
    kind, value, pos = peek()
    if kind != "eof":
        raise FormulaSyntaxError(f"unexpected {value!r}", pos)
    return f


def _format_scalar(c, semiring: Semiring | None) -> str:
    if semiring is not None:
        return semiring.format(c)
    if isinstance(c, bool):
        return "true" if c else "false"
    if c == INF:
        return "inf"
    return str(c)


def format_formula(f: Formula, semiring: Semiring | None = None) -> str:
    """Canonical text with minimal parentheses; ``parse_formula`` inverts it."""

    def body(g):
        return f"({go(g)})" if isinstance(g, Join) else go(g)

    def go(g):
        if isinstance(g, Zero):
            return "0"
        if isinstance(g, Tick):
            return "end"
        if isinstance(g, Join):
            return f"{go(g.left)} + {body(g.right)}"
        if isinstance(g, Diam):
            return f"<{g.action}>{body(g.body)}"
        if isinstance(g, Scale):
            return f"{_format_scalar(g.scalar, semiring)} * {body(g.body)}"
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


def depth(f: Formula) -> int:
    if isinstance(f, Diam):
        return 1 + depth(f.body)
    if isinstance(f, Join):
        return max(depth(f.left), depth(f.right))
    if isinstance(f, Scale):
        return depth(f.body)
    return 0


def actions(f: Formula) -> set[str]:
    if isinstance(f, Diam):
        return {f.action} | actions(f.body)
    if isinstance(f, Join):
        return actions(f.left) | actions(f.right)
    if isinstance(f, Scale):
        return actions(f.body)
    return set()


def _check_scalars(f: Formula, s: Semiring) -> None:
    if isinstance(f, Scale):
        if not s.contains(f.scalar):
            raise ValueError(f"scalar {f.scalar!r} is not an element of {s.name}")
        _check_scalars(f.body, s)
    elif isinstance(f, Join):
        _check_scalars(f.left, s)
        _check_scalars(f.right, s)
    elif isinstance(f, Diam):
        _check_scalars(f.body, s)


# -- semantics --------------------------------------------------------------

def lift_tick(s: Semiring, out: Weighting):
    """Predicate lifting for ``end``: the weight of termination."""
    return out[STOP]


def lift_diam(s: Semiring, action: str, pred: dict, out: Weighting):
    """Predicate lifting for ``<a>``: weighted sum of ``pred`` over a-successors."""
    return fold_sum(s, (s.mul(w, pred[step[1]]) for step, w in out.entries()
                        if step != STOP and step[0] == action))


def predicate(aut: Automaton, f: Formula) -> dict:
    """The semiring-valued predicate ``state ↦ ⟦f⟧(state)``."""
    s = aut.semiring
    alphabet = set(aut.alphabet)
    unknown = actions(f) - alphabet
    if unknown:
        raise ValueError(f"unknown action(s) {', '.join(sorted(unknown))}")
    _check_scalars(f, s)
    memo: dict = {}

    def go(g):
        if g in memo:
            return memo[g]
        if isinstance(g, Zero):
            p = {x: s.zero for x in aut.states}
        elif isinstance(g, Tick):
            p = {x: lift_tick(s, aut.gamma(x)) for x in aut.states}
        elif isinstance(g, Join):
            left, right = go(g.left), go(g.right)
            p = {x: s.add(left[x], right[x]) for x in aut.states}
        elif isinstance(g, Scale):
            inner = go(g.body)
            p = {x: s.mul(g.scalar, inner[x]) for x in aut.states}
        elif isinstance(g, Diam):
            inner = go(g.body)
            p = {x: lift_diam(s, g.action, inner, aut.gamma(x)) for x in aut.states}
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = p
        return p

    return go(f)


def evaluate(aut: Automaton, f: Formula, x: str):
    aut.check_state(x)
    return predicate(aut, f)[x]


# -- normal forms -----------------------------------------------------------

def normal_form(f: Formula, s: Semiring) -> Weighting:
    """Coefficients of the trace atoms ``<w>end`` that ``f`` is equal to."""
    if isinstance(f, Zero):
        return empty(s)
    if isinstance(f, Tick):
        return unit(s, ())
    if isinstance(f, Join):
        return normal_form(f.left, s).plus(normal_form(f.right, s))
    if isinstance(f, Scale):
        if not s.contains(f.scalar):
            raise ValueError(f"scalar {f.scalar!r} is not an element of {s.name}")
        return normal_form(f.body, s).scale(f.scalar)
    if isinstance(f, Diam):
        a = f.action
        return fmap(lambda word: (a, *word), normal_form(f.body, s))
    raise TypeError(f"not a formula: {f!r}")


def format_normal_form(nf: Weighting, alphabet: Sequence[str]) -> str:
    return nf.format(lambda word: format_word(word, alphabet), word_key(alphabet))


def pairing(nf: Weighting, traces: Weighting):
    s = nf.semiring
    return fold_sum(s, (s.mul(c, traces[w]) for w, c in nf.entries()))


def word_formula(word: Word) -> Formula:
    f: Formula = TICK
    for a in reversed(word):
        f = Diam(a, f)
    return f


# -- axioms -----------------------------------------------------------------

Rewrite = tuple[tuple[int, ...], str, Formula]


def _children(f: Formula) -> list[Formula]:
    if isinstance(f, Join):
        return [f.left, f.right]
    if isinstance(f, (Diam, Scale)):
        return [f.body]
    return []


def _replace(f: Formula, path: tuple[int, ...], new: Formula) -> Formula:
    if not path:
        return new
    head, rest = path[0], path[1:]
    if isinstance(f, Join):
        if head == 0:
            return Join(_replace(f.left, rest, new), f.right)
        return Join(f.left, _replace(f.right, rest, new))
    if isinstance(f, Diam):
        return Diam(f.action, _replace(f.body, rest, new))
    if isinstance(f, Scale):
        return Scale(f.scalar, _replace(f.body, rest, new))
    raise ValueError("path leads below a leaf")


def _subterms(f: Formula, path=()) -> Iterator[tuple[tuple[int, ...], Formula]]:
    yield path, f
    for i, child in enumerate(_children(f)):
        yield from _subterms(child, (*path, i))


def _local_rewrites(t: Formula, s: Semiring, acts: Sequence[str],
                    pick: Callable[[Sequence], object]) -> list[tuple[str, Formula]]:
    out: list[tuple[str, Formula]] = []
    # right-to-left instances that can fire at any subterm
    out.append(("join-unit⁻¹", Join(t, ZERO)))
    out.append(("scale-unit⁻¹", Scale(s.one, t)))
    if s.idempotent:
        out.append(("join-idempotent⁻¹", Join(t, t)))
    if isinstance(t, Zero):
        out.append(("diam-zero⁻¹", Diam(pick(acts), ZERO)))
        out.append(("scale-zero⁻¹", Scale(pick(_scalars(s)), ZERO)))
    if isinstance(t, Diam):
        if isinstance(t.body, Zero):
            out.append(("diam-zero", ZERO))
        if isinstance(t.body, Join):
            out.append(("diam-join", Join(Diam(t.action, t.body.left), Diam(t.action, t.body.right))))
        if isinstance(t.body, Scale):
            out.append(("scale-diam⁻¹", Scale(t.body.scalar, Diam(t.action, t.body.body))))
    if isinstance(t, Join):
        l, r = t.left, t.right
        out.append(("join-commutative", Join(r, l)))
        if isinstance(r, Zero):
            out.append(("join-unit-right", l))
        if isinstance(l, Zero):
            out.append(("join-unit-left", r))
        if isinstance(l, Join):
            out.append(("join-associative", Join(l.left, Join(l.right, r))))
        if isinstance(r, Join):
            out.append(("join-associative⁻¹", Join(Join(l, r.left), r.right)))
        if isinstance(l, Diam) and isinstance(r, Diam) and l.action == r.action:
            out.append(("diam-join⁻¹", Diam(l.action, Join(l.body, r.body))))
        if (isinstance(l, Scale) and isinstance(r, Scale)
                and s.eq(l.scalar, r.scalar)):
            out.append(("scale-join⁻¹", Scale(l.scalar, Join(l.body, r.body))))
        if s.idempotent and l == r:
            out.append(("join-idempotent", l))
    if isinstance(t, Scale):
        c, b = t.scalar, t.body
        if s.is_zero(c):
            out.append(("scale-by-zero", ZERO))
        if s.eq(c, s.one):
            out.append(("scale-unit", b))
        if isinstance(b, Zero):
            out.append(("scale-zero", ZERO))
        if isinstance(b, Join):
            out.append(("scale-join", Join(Scale(c, b.left), Scale(c, b.right))))
        if isinstance(b, Scale):
            out.append(("scale-compose", Scale(s.mul(c, b.scalar), b.body)))
        if isinstance(b, Diam):
            out.append(("scale-diam", Diam(b.action, Scale(c, b.body))))
    return out


def _scalars(s: Semiring) -> list:
    rng = random.Random(0)
    values = {s.sample(rng) for _ in range(20)}
    return sorted(values, key=lambda v: (v == INF, v))


def axiom_redexes(f: Formula, s: Semiring, alphabet: Sequence[str] = (),
                  rng: random.Random | None = None) -> list[Rewrite]:
    """Every single-step axiom instance applicable somewhere in ``f``.

    Right-to-left instances that introduce fresh material (an action for
    ``0 = <a>0``, a scalar for ``0 = s * 0``) draw it from ``rng``.
    """
    rng = rng or random.Random(0)
    acts = sorted(set(alphabet) | actions(f)) or ["a"]
    out = []
    for path, t in _subterms(f):
        for name, new in _local_rewrites(t, s, acts, rng.choice):
            out.append((path, name, new))
    return out


def apply_axiom_once(f: Formula, seed: int | random.Random, s: Semiring,
                     alphabet: Sequence[str] = ()) -> Formula:
    """Rewrite ``f`` by one axiom instance at a seeded-random position."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    redexes = axiom_redexes(f, s, alphabet, rng)
    if not redexes:
        return f
    path, _, new = rng.choice(redexes)
    return _replace(f, path, new)


# -- expressiveness and completeness -----------------------------------------

def distinguish(aut: Automaton, x: str, y: str, max_depth: int) -> Formula | None:
    """Trace atom separating ``x`` from ``y``, or ``None`` up to ``max_depth``."""
    word = first_difference(aut, x, y, max_depth + 1)
    return None if word is None else word_formula(word)


def chain_automaton(s: Semiring, alphabet: Sequence[str], word: Word) -> Automaton:
    """Linear automaton ``s0 -w1-> s1 ... -wk-> sk`` accepting exactly ``word``."""
    states = tuple(f"s{i}" for i in range(len(word) + 1))
    out = {x: Weighting(s) for x in states}
    for i, a in enumerate(word):
        out[states[i]] = unit(s, (a, states[i + 1]))
    out[states[-1]] = unit(s, STOP)
    return Automaton(s, tuple(alphabet), states, out, ProbabilityMode.NONE)


def refute(s: Semiring, alphabet: Sequence[str], phi: Formula, psi: Formula
           ) -> tuple[Automaton, str] | None:
    """A model and state where ``phi`` and ``psi`` evaluate differently.

    Returns ``None`` exactly when the two normal forms agree, i.e. when
    ``phi = psi`` follows from the axioms.
    """
    unknown = (actions(phi) | actions(psi)) - set(alphabet)
    if unknown:
        raise ValueError(f"unknown action(s) {', '.join(sorted(unknown))}")
    left, right = normal_form(phi, s), normal_form(psi, s)
    differing = [w for w in set(left.support()) | set(right.support())
                 if not s.eq(left[w], right[w])]
    if not differing:
        return None
    word = min(differing, key=word_key(alphabet))
    return chain_automaton(s, alphabet, word), "s0"


def random_formula(rng: random.Random, s: Semiring, alphabet: Sequence[str],
                   max_depth: int, size: int = 4) -> Formula:
    """Seeded random formula with at most ``max_depth`` nested modalities."""

    def go(d, budget):
        kinds, weights = ["zero", "tick"], [1, 2]
        if budget > 0:
            kinds += ["join", "scale"]
            weights += [3, 1]
        if d > 0:
            kinds.append("diam")
            weights.append(5)
        kind = rng.choices(kinds, weights)[0]
        if kind == "zero":
            return ZERO
        if kind == "tick":
            return TICK
        if kind == "join":
            return Join(go(d, budget - 1), go(d, budget - 1))
        if kind == "scale":
            return Scale(s.sample(rng), go(d, budget - 1))
        return Diam(rng.choice(list(alphabet)), go(d - 1, budget))

    return go(max_depth, size)
