import random
from pathlib import Path

import pytest

from tracelogic import RATIONAL, Automaton, Weighting, parse_automaton, random_automaton
from tracelogic.branching import ProbabilityMode
from tracelogic.semiring import SEMIRINGS

FIXTURES = Path(__file__).parent / "fixtures"
ALL_SEMIRINGS = list(SEMIRINGS.values())


@pytest.fixture
def a1():
    return parse_automaton((FIXTURES / "A1.aut").read_text())


@pytest.fixture
def a2():
    return parse_automaton((FIXTURES / "A2.aut").read_text())


def corpus(s, count, seed=0, max_states=6, max_actions=3):
    """Seeded random automata: ≤ max_states states, ≤ max_actions actions."""
    out = []
    for i in range(count):
        rng = random.Random(f"{s.name}-{seed}-{i}")
        n_states = rng.randint(1, max_states)
        alphabet = "abc"[: rng.randint(1, max_actions)]
        density = rng.choice(["0", "1/8", "1/4", "2/5"])
        mode = ProbabilityMode.NONE
        if s is RATIONAL and rng.random() < 0.3:
            mode = rng.choice([ProbabilityMode.DISTRIBUTION, ProbabilityMode.SUBDISTRIBUTION])
        out.append(random_automaton(s, n_states, alphabet, density, rng.randrange(2**31), mode))
    return out


def with_copy(aut: Automaton) -> Automaton:
    """Disjoint union of ``aut`` with a renamed copy (``q`` ↦ ``q_c``)."""
    rename = {q: f"{q}_c" for q in aut.states}
    out = dict(aut.out)
    for q in aut.states:
        w = aut.gamma(q)
        out[rename[q]] = Weighting(aut.semiring, [
            (step if step == () else (step[0], rename[step[1]]), v) for step, v in w.items()])
    states = aut.states + tuple(rename[q] for q in aut.states)
    return Automaton(aut.semiring, aut.alphabet, states, out, aut.mode)
