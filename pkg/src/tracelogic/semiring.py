"""Semirings used as weight domains for branching.

Each instance induces a branching monad of finite-support weightings
(see :mod:`tracelogic.branching`).  Values are plain Python objects:
``bool`` for the boolean semiring, ``int`` for the naturals,
:class:`fractions.Fraction` for the rationals and ``int``/``math.inf``
for min-plus.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Any, Callable, Iterable, Sequence

__all__ = [
    "Semiring",
    "BooleanSemiring",
    "NaturalSemiring",
    "RationalSemiring",
    "MinPlusSemiring",
    "BOOLEAN",
    "NAT",
    "RATIONAL",
    "MINPLUS",
    "SEMIRINGS",
    "get_semiring",
    "fold_sum",
    "fold_product",
    "LawResult",
    "check_semiring_laws",
]

INF = math.inf


class Semiring:
    """Base class for a commutative semiring with decidable equality.

    Subclasses set ``name``, ``zero`` and ``one`` and implement ``add``,
    ``mul``, ``sample``, ``parse`` and ``format``.
    """

    name: str = "abstract"
    zero: Any = None
    one: Any = None
    # add(a, a) == a for every a; enables the idempotence axiom for joins.
    idempotent: bool = False

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero)

    def contains(self, value) -> bool:
        """Whether ``value`` belongs to the carrier."""
        raise NotImplementedError

    def sample(self, rng: random.Random):
        """Draw a test value; zero must be reachable."""
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, value) -> str:
        return str(value)

    def __repr__(self):
        return f"<semiring {self.name}>"

    # Instances are stateless singletons per class.
    def __eq__(self, other):
        return type(self) is type(other) and self.name == other.name

    def __hash__(self):
        return hash((type(self).__name__, self.name))


class BooleanSemiring(Semiring):
    name = "boolean"
    zero = False
    one = True
    idempotent = True

    def add(self, a, b):
        return a or b

    def mul(self, a, b):
        return a and b

    def is_zero(self, a):
        return not a

    def contains(self, value):
        return isinstance(value, bool)

    def sample(self, rng):
        return rng.random() < 0.5

    def parse(self, text):
        t = text.strip()
        if t in ("1", "true", "⊤"):
            return True
        if t in ("0", "false", "⊥"):
            return False
        raise ValueError(f"not a boolean weight: {text!r}")

    def format(self, value):
        return "true" if value else "false"


class NaturalSemiring(Semiring):
    name = "nat"
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def contains(self, value):
        return isinstance(value, int) and not isinstance(value, bool) and value >= 0

    def sample(self, rng):
        return rng.choice((0, 0, 1, 1, 2, 3, 5, 7))

    def parse(self, text):
        t = text.strip()
        if not t.isdigit():
            raise ValueError(f"not a natural number: {text!r}")
        return int(t)


class RationalSemiring(Semiring):
    """Exact rationals; decimal literals are converted without rounding."""

    name = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return not a

    def contains(self, value):
        return isinstance(value, (int, Fraction)) and not isinstance(value, bool)

    def sample(self, rng):
        num = rng.choice((0, 0, 1, 1, 2, 3, -1, -2))
        return Fraction(num, rng.choice((1, 2, 3, 4, 6)))

    def parse(self, text):
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {text!r}") from exc
        return value

    def format(self, value):
        return str(Fraction(value))


class MinPlusSemiring(Semiring):
    """Tropical semiring (N ∪ {inf}, min, +, inf, 0)."""

    name = "minplus"
    zero = INF
    one = 0
    idempotent = True

    def add(self, a, b):
        return min(a, b)

    def mul(self, a, b):
        if a == INF or b == INF:
            return INF
        return a + b

    def contains(self, value):
        if value == INF:
            return True
        return isinstance(value, int) and not isinstance(value, bool) and value >= 0

    def sample(self, rng):
        if rng.random() < 0.15:
            return INF
        return rng.randrange(0, 10)

    def parse(self, text):
        t = text.strip()
        if t == "inf":
            return INF
        if not t.isdigit():
            raise ValueError(f"not a min-plus weight: {text!r}")
        return int(t)

    def format(self, value):
        return "inf" if value == INF else str(value)


BOOLEAN = BooleanSemiring()
NAT = NaturalSemiring()
RATIONAL = RationalSemiring()
MINPLUS = MinPlusSemiring()

SEMIRINGS = {s.name: s for s in (BOOLEAN, NAT, RATIONAL, MINPLUS)}


def get_semiring(name: str) -> Semiring:
    try:
        return SEMIRINGS[name]
    except KeyError:
        raise ValueError(
            f"unknown semiring {name!r} (expected one of {', '.join(SEMIRINGS)})"
        ) from None


def fold_sum(s: Semiring, xs: Iterable) -> Any:
    return reduce(s.add, xs, s.zero)


def fold_product(s: Semiring, xs: Iterable) -> Any:
    return reduce(s.mul, xs, s.one)


@dataclass(frozen=True)
class LawResult:
    """Outcome of one sampled law; ``counterexample`` is set on failure."""

    law: str
    samples: int
    failures: int
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def __str__(self):
        status = "pass" if self.passed else f"FAIL ({self.failures} failures)"
        line = f"{self.law}: {status} [{self.samples} samples]"
        if self.counterexample is not None:
            line += f" counterexample: {self.counterexample}"
        return line


def run_law(name: str, samples: Sequence, holds: Callable[..., bool],
            show: Callable[..., str] = repr) -> LawResult:
    """Evaluate ``holds`` on every sample; keep the first counterexample."""
    failures = 0
    witness = None
    for args in samples:
        if not holds(*args):
            failures += 1
            if witness is None:
                witness = show(args)
    return LawResult(name, len(samples), failures, witness)


def check_semiring_laws(s: Semiring, sample_count: int, seed: int) -> list[LawResult]:
    rng = random.Random(seed)
    triples = [(s.sample(rng), s.sample(rng), s.sample(rng)) for _ in range(sample_count)]
    add, mul, eq = s.add, s.mul, s.eq

    def show(args):
        return "(" + ", ".join(s.format(v) for v in args) + ")"

    laws = [
        ("add-associative", lambda a, b, c: eq(add(add(a, b), c), add(a, add(b, c)))),
        ("add-commutative", lambda a, b, c: eq(add(a, b), add(b, a))),
        ("add-unit", lambda a, b, c: eq(add(a, s.zero), a) and eq(add(s.zero, a), a)),
        ("mul-associative", lambda a, b, c: eq(mul(mul(a, b), c), mul(a, mul(b, c)))),
        ("mul-commutative", lambda a, b, c: eq(mul(a, b), mul(b, a))),
        ("mul-unit", lambda a, b, c: eq(mul(a, s.one), a) and eq(mul(s.one, a), a)),
        ("left-distributive",
         lambda a, b, c: eq(mul(a, add(b, c)), add(mul(a, b), mul(a, c)))),
        ("right-distributive",
         lambda a, b, c: eq(mul(add(a, b), c), add(mul(a, c), mul(b, c)))),
        ("zero-absorbing",
         lambda a, b, c: eq(mul(a, s.zero), s.zero) and eq(mul(s.zero, a), s.zero)),
        ("eq-reflexive", lambda a, b, c: eq(a, a)),
        ("eq-symmetric", lambda a, b, c: eq(a, b) == eq(b, a)),
    ]
    if s.idempotent:
        laws.append(("add-idempotent", lambda a, b, c: eq(add(a, a), a)))
    return [run_law(f"semiring/{name}", triples, law, show) for name, law in laws]
