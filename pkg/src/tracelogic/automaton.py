"""Weighted automata as coalgebras ``X -> B({*} + Act × X)``.

A step is either the termination marker :data:`STOP` (the empty tuple)
or a pair ``(action, successor)``.  Each state carries one weighting over
steps; the weight of :data:`STOP` is its termination weight.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Sequence

from .branching import (
    ProbabilityMode,
    Weighting,
    empty,
    flatten,
    fmap,
    random_weighting,
    unit,
    validate_probability,
)
from .semiring import BOOLEAN, RATIONAL, LawResult, Semiring, get_semiring, run_law

__all__ = [
    "STOP",
    "Automaton",
    "AutomatonError",
    "parse_automaton",
    "format_automaton",
    "gamma",
    "step_map",
    "dist_law",
    "check_dist_law_axioms",
    "random_automaton",
]

STOP = ()

_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")
_EDGE = re.compile(r"edge\s+(\S+)\s+-(\S+?)->\s+([^\s:]+)\s*(?::\s*(\S+))?\Z")
_ACCEPT = re.compile(r"accept\s+([^\s:]+)\s*(?::\s*(\S+))?\Z")


class AutomatonError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Automaton:
    semiring: Semiring
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    out: dict = field(hash=False)
    mode: ProbabilityMode = ProbabilityMode.NONE

    def __post_init__(self):
        object.__setattr__(self, "out", dict(self.out))
        if not self.states:
            raise AutomatonError("no states")
        if not self.alphabet:
            raise AutomatonError("empty alphabet")
        for names, what in ((self.alphabet, "action"), (self.states, "state")):
            if len(set(names)) != len(names):
                raise AutomatonError(f"duplicate {what} declaration")
            for name in names:
                if not _IDENT.match(name):
                    raise AutomatonError(f"invalid {what} name {name!r}")
        actions, states = set(self.alphabet), set(self.states)
        for x in self.states:
            w = self.out.get(x)
            if w is None:
                self.out[x] = w = empty(self.semiring)
            if w.semiring != self.semiring:
                raise AutomatonError(f"state {x}: weighting over {w.semiring.name}")
            for step in w:
                if step != STOP and (step[0] not in actions or step[1] not in states):
                    raise AutomatonError(f"state {x}: undeclared step {step!r}")
            if self.mode is not ProbabilityMode.NONE:
                violation = validate_probability(w, self.mode)
                if violation is not None:
                    raise AutomatonError(f"state {x}: {violation}")
        if set(self.out) - states:
            raise AutomatonError("transitions from undeclared states")

    def termination(self, x: str):
        return self.gamma(x)[STOP]

    def edges(self, x: str) -> list[tuple[str, str, object]]:
        """``(action, target, weight)`` triples in alphabet/state order."""
        rank = {a: i for i, a in enumerate(self.alphabet)}
        pos = {q: i for i, q in enumerate(self.states)}
        steps = [(k, w) for k, w in self.gamma(x).items() if k != STOP]
        steps.sort(key=lambda kw: (rank[kw[0][0]], pos[kw[0][1]]))
        return [(a, y, w) for (a, y), w in steps]

    def gamma(self, x: str) -> Weighting:
        try:
            return self.out[x]
        except KeyError:
            raise KeyError(f"unknown state {x!r}") from None

    def check_state(self, x: str) -> None:
        if x not in self.out:
            raise KeyError(f"unknown state {x!r}")

    def __str__(self):
        return format_automaton(self)


def gamma(aut: Automaton, x: str) -> Weighting:
    return aut.gamma(x)


def parse_automaton(text: str) -> Automaton:
    s: Semiring | None = None
    mode = ProbabilityMode.NONE
    alphabet: tuple[str, ...] | None = None
    states: tuple[str, ...] | None = None
    entries: dict[str, dict] = {}

    def weight(lit, lineno):
        if lit is None:
            if s is BOOLEAN:
                return True
            raise AutomatonError(f"weight required for semiring {s.name}", lineno)
        try:
            value = s.parse(lit)
        except ValueError as exc:
            raise AutomatonError(str(exc), lineno) from None
        if s.is_zero(value):
            raise AutomatonError("zero weight (omit the clause instead)", lineno)
        return value

    def need(lineno, *what):
        if s is None:
            raise AutomatonError("'semiring' must come first", lineno)
        if "alphabet" in what and alphabet is None:
            raise AutomatonError("'alphabet' not declared yet", lineno)
        if "states" in what and states is None:
            raise AutomatonError("'states' not declared yet", lineno)

    def state(name, lineno):
        if name not in entries:
            raise AutomatonError(f"undeclared state {name!r}", lineno)
        return name

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, *tail = line.split(None, 1)
        rest = tail[0].strip() if tail else ""
        if keyword == "semiring":
            if s is not None:
                raise AutomatonError("semiring declared twice", lineno)
            try:
                s = get_semiring(rest)
            except ValueError as exc:
                raise AutomatonError(str(exc), lineno) from None
        elif keyword == "mode":
            try:
                mode = ProbabilityMode(rest)
            except ValueError:
                raise AutomatonError(f"unknown mode {rest!r}", lineno) from None
        elif keyword in ("alphabet", "states"):
            need(lineno)
            names = tuple(rest.split())
            what = "action" if keyword == "alphabet" else "state"
            for name in names:
                if not _IDENT.match(name):
                    raise AutomatonError(f"invalid {what} name {name!r}", lineno)
            if len(set(names)) != len(names):
                raise AutomatonError(f"duplicate {what} name", lineno)
            if keyword == "alphabet":
                if alphabet is not None:
                    raise AutomatonError("alphabet declared twice", lineno)
                alphabet = names
            else:
                if states is not None:
                    raise AutomatonError("states declared twice", lineno)
                if not names:
                    raise AutomatonError("no states", lineno)
                states = names
                entries = {x: {} for x in names}
        elif keyword == "accept":
            need(lineno, "states")
            m = _ACCEPT.match(line)
            if not m:
                raise AutomatonError(f"malformed accept clause: {line!r}", lineno)
            x = state(m.group(1), lineno)
            if STOP in entries[x]:
                raise AutomatonError(f"duplicate accept clause for {x}", lineno)
            entries[x][STOP] = weight(m.group(2), lineno)
        elif keyword == "edge":
            need(lineno, "alphabet", "states")
            m = _EDGE.match(line)
            if not m:
                raise AutomatonError(f"malformed edge clause: {line!r}", lineno)
            src, action, tgt, lit = m.groups()
            state(src, lineno)
            state(tgt, lineno)
            if action not in alphabet:
                raise AutomatonError(f"undeclared action {action!r}", lineno)
            if (action, tgt) in entries[src]:
                raise AutomatonError(f"duplicate edge {src} -{action}-> {tgt}", lineno)
            entries[src][(action, tgt)] = weight(lit, lineno)
        else:
            raise AutomatonError(f"unknown clause {keyword!r}", lineno)

    if s is None:
        raise AutomatonError("missing 'semiring' declaration")
    if states is None:
        raise AutomatonError("no states")
    if alphabet is None:
        raise AutomatonError("missing 'alphabet' declaration")
    if mode is not ProbabilityMode.NONE and s != RATIONAL:
        raise AutomatonError(f"mode {mode.value} requires the rational semiring")
    out = {x: Weighting(s, entries[x]) for x in states}
    return Automaton(s, alphabet, states, out, mode)


def format_automaton(aut: Automaton) -> str:
    """Canonical text; ``parse_automaton`` inverts it exactly."""
    s = aut.semiring

    def suffix(w):
        return "" if s is BOOLEAN else f" : {s.format(w)}"

    lines = [f"semiring {s.name}"]
    if aut.mode is not ProbabilityMode.NONE:
        lines.append(f"mode {aut.mode.value}")
    lines.append("alphabet " + " ".join(aut.alphabet))
    lines.append("states " + " ".join(aut.states))
    for x in aut.states:
        if STOP in aut.gamma(x):
            lines.append(f"accept {x}{suffix(aut.termination(x))}")
    for x in aut.states:
        for a, y, w in aut.edges(x):
            lines.append(f"edge {x} -{a}-> {y}{suffix(w)}")
    return "\n".join(lines) + "\n"


def step_map(f, step):
    """Action of the step functor on a map."""
    if step == STOP:
        return STOP
    a, x = step
    return (a, f(x))


def dist_law(s: Semiring, step) -> Weighting:
    """Distribute a step over its weighting: ``(a, u) ↦ (a, x) ↦ u(x)``."""
    if step == STOP:
        return unit(s, STOP)
    a, u = step
    return Weighting(s, [((a, x), w) for x, w in u.entries()])


def check_dist_law_axioms(s: Semiring, sample_count: int, seed: int) -> list[LawResult]:
    rng = random.Random(seed)
    actions = ["a", "b"]
    xs = ["x0", "x1", "x2"]
    ys = ["y0", "y1"]

    def step(payload):
        return STOP if rng.random() < 0.2 else (rng.choice(actions), payload())

    def w1():
        return random_weighting(s, rng, xs)

    def w2():
        return random_weighting(s, rng, [w1() for _ in range(3)])

    plain = [(step(lambda: rng.choice(xs)),) for _ in range(sample_count)]
    doubled = [(step(w2),) for _ in range(sample_count)]
    mapped = []
    for _ in range(sample_count):
        table = {x: rng.choice(ys) for x in xs}
        mapped.append((step(w1), table.__getitem__))

    def pi(t):
        return dist_law(s, t)

    def unit_axiom(t):
        return pi(step_map(lambda x: unit(s, x), t)) == unit(s, t)

    def mult_axiom(t):
        return pi(step_map(flatten, t)) == flatten(fmap(pi, pi(t)))

    def naturality(t, f):
        lhs = pi(step_map(lambda w: fmap(f, w), t))
        return lhs == fmap(lambda st: step_map(f, st), pi(t))

    return [
        run_law("distributive/unit", plain, unit_axiom),
        run_law("distributive/multiplication", doubled, mult_axiom),
        run_law("distributive/naturality", mapped, naturality),
    ]


def random_automaton(s: Semiring, n_states: int, alphabet: Sequence[str], density,
                     seed: int, mode: ProbabilityMode = ProbabilityMode.NONE) -> Automaton:
    """Seeded random automaton; ``density`` is the chance of each possible edge."""
    if mode is not ProbabilityMode.NONE and s != RATIONAL:
        raise ValueError("probability modes require the rational semiring")
    rng = random.Random(seed)
    states = tuple(f"q{i}" for i in range(n_states))
    alphabet = tuple(alphabet)
    density = Fraction(density)
    out = {}
    for x in states:
        row: dict[Hashable, object] = {STOP: s.sample(rng)}
        for a in alphabet:
            for y in states:
                if rng.random() < density:
                    row[(a, y)] = s.sample(rng)
        if mode is not ProbabilityMode.NONE:
            row = {k: abs(w) for k, w in row.items() if w != 0}
            mass = sum(row.values(), Fraction(0))
            if mass == 0:
                if mode is ProbabilityMode.DISTRIBUTION:
                    row = {STOP: Fraction(1)}
            elif mode is ProbabilityMode.DISTRIBUTION or mass > 1:
                row = {k: w / mass for k, w in row.items()}
        out[x] = Weighting(s, row)
    return Automaton(s, alphabet, states, out, mode)
