"""Finite-support weightings: the branching monad ``X -> S_ω(X)``.

A :class:`Weighting` is an immutable map from keys to nonzero semiring
weights.  Over the boolean semiring it is a finite set, over the
naturals a multiset, over the rationals a (sub)distribution when its
mass is at most one.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

from .semiring import RATIONAL, LawResult, Semiring, fold_sum, run_law

__all__ = [
    "Weighting",
    "ProbabilityMode",
    "ProbabilityViolation",
    "order_key",
    "empty",
    "unit",
    "flatten",
    "fmap",
    "kleisli_compose",
    "strength",
    "costrength",
    "double_strength",
    "validate_probability",
    "random_weighting",
    "check_monad_and_strength_laws",
]


def order_key(k: Any):
    """Total order on the keys that occur in practice.

    Numbers < strings < tuples < weightings; tuples compare elementwise,
    so the termination step ``()`` sorts before every ``(action, state)``.
    """
    if isinstance(k, Weighting):
        return (4, tuple((order_key(key), w) for key, w in k.items()))
    if isinstance(k, tuple):
        return (3, tuple(order_key(e) for e in k))
    if isinstance(k, str):
        return (2, k)
    if isinstance(k, (int, float, Fraction)):
        return (1, k)
    return (5, repr(k))


class Weighting:
    """Immutable finite-support map ``key -> nonzero weight``.

    Duplicate keys in the constructor are combined with ``add``; zero
    weights are dropped so the representation is canonical.
    """

    __slots__ = ("semiring", "_data", "_hash")

    def __init__(self, semiring: Semiring, entries: Mapping | Iterable = ()):
        data: dict = {}
        pairs = entries.items() if isinstance(entries, Mapping) else entries
        for key, weight in pairs:
            if key in data:
                data[key] = semiring.add(data[key], weight)
            else:
                data[key] = weight
        self.semiring = semiring
        self._data = {k: w for k, w in data.items() if not semiring.is_zero(w)}
        self._hash = None

    def __getitem__(self, key):
        return self._data.get(key, self.semiring.zero)

    def __contains__(self, key):
        return key in self._data

    def __len__(self):
        return len(self._data)

    def __iter__(self) -> Iterator:
        return iter(self.support())

    def __bool__(self):
        return bool(self._data)

    def support(self) -> list:
        return sorted(self._data, key=order_key)

    def items(self) -> list[tuple[Any, Any]]:
        return [(k, self._data[k]) for k in self.support()]

    def entries(self):
        """Unordered ``(key, weight)`` view; cheaper than :meth:`items`."""
        return self._data.items()

    def weights(self) -> Iterable:
        return self._data.values()

    def mass(self):
        return fold_sum(self.semiring, self._data.values())

    def plus(self, other: "Weighting") -> "Weighting":
        return Weighting(self.semiring, [*self._data.items(), *other._data.items()])

    def scale(self, scalar) -> "Weighting":
        mul = self.semiring.mul
        return Weighting(self.semiring, {k: mul(scalar, w) for k, w in self._data.items()})

    def restrict(self, keep: Callable[[Any], bool]) -> "Weighting":
        return Weighting(self.semiring, {k: w for k, w in self._data.items() if keep(k)})

    def __eq__(self, other):
        if not isinstance(other, Weighting):
            return NotImplemented
        if self.semiring != other.semiring or self._data.keys() != other._data.keys():
            return False
        eq = self.semiring.eq
        return all(eq(w, other._data[k]) for k, w in self._data.items())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def format(self, key_format: Callable[[Any], str] = str,
               sort_key: Callable[[Any], Any] = order_key) -> str:
        """Render as ``{k:w, ...}``; boolean weights are omitted."""
        s = self.semiring
        keys = sorted(self._data, key=sort_key)
        if s.name == "boolean":
            parts = [key_format(k) for k in keys]
        else:
            parts = [f"{key_format(k)}:{s.format(self._data[k])}" for k in keys]
        return "{" + ", ".join(parts) + "}"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Weighting({self.semiring.name}, {self.format(repr)})"


def empty(s: Semiring) -> Weighting:
    return Weighting(s)


def unit(s: Semiring, x: Hashable) -> Weighting:
    return Weighting(s, {x: s.one})


def flatten(ww: Weighting) -> Weighting:
    """Monad multiplication: ``x ↦ Σ_d ww(d)·d(x)``."""
    s = ww.semiring
    mul = s.mul
    return Weighting(s, [(x, mul(wd, wx)) for d, wd in ww._data.items()
                         for x, wx in d._data.items()])


def fmap(f: Callable[[Any], Hashable], w: Weighting) -> Weighting:
    """Pushforward along ``f``; colliding images are added."""
    return Weighting(w.semiring, [(f(x), wx) for x, wx in w._data.items()])


def kleisli_compose(f: Callable[[Any], Weighting], g: Callable[[Any], Weighting]
                    ) -> Callable[[Any], Weighting]:
    """Return ``x ↦ flatten(fmap(g, f(x)))`` (first ``f``, then ``g``)."""

    def composite(x):
        fx = f(x)
        s = fx.semiring
        mul = s.mul
        return Weighting(s, [(z, mul(wy, wz)) for y, wy in fx._data.items()
                             for z, wz in g(y)._data.items()])

    return composite


def strength(w: Weighting, y: Hashable) -> Weighting:
    """``(w, y) ↦ (x, y) ↦ w(x)``."""
    return Weighting(w.semiring, [((x, y), wx) for x, wx in w._data.items()])


def costrength(x: Hashable, w: Weighting) -> Weighting:
    """Left-handed strength: ``(x, w) ↦ (x, y) ↦ w(y)``."""
    return Weighting(w.semiring, [((x, y), wy) for y, wy in w._data.items()])


def double_strength(u: Weighting, v: Weighting) -> Weighting:
    s = u.semiring
    mul = s.mul
    return Weighting(s, [((x, y), mul(wx, wy)) for x, wx in u._data.items()
                         for y, wy in v._data.items()])


class ProbabilityMode(enum.Enum):
    NONE = "none"
    SUBDISTRIBUTION = "subdistribution"
    DISTRIBUTION = "distribution"


@dataclass(frozen=True)
class ProbabilityViolation:
    mode: ProbabilityMode
    mass: Fraction

    def __str__(self):
        bound = "= 1" if self.mode is ProbabilityMode.DISTRIBUTION else "<= 1"
        return f"total mass {self.mass} violates {self.mode.value} (mass {bound})"


def validate_probability(w: Weighting, mode: ProbabilityMode) -> ProbabilityViolation | None:
    """Return ``None`` if ``w`` satisfies ``mode``, otherwise the violation."""
    if mode is ProbabilityMode.NONE:
        return None
    if w.semiring != RATIONAL:
        raise ValueError(f"probability modes need the rational semiring, not {w.semiring.name}")
    mass = w.mass()
    negative = any(x < 0 for x in w.weights())
    if mode is ProbabilityMode.DISTRIBUTION:
        ok = mass == 1 and not negative
    else:
        ok = mass <= 1 and not negative
    return None if ok else ProbabilityViolation(mode, mass)


def random_weighting(s: Semiring, rng: random.Random, keys: list, max_size: int = 3) -> Weighting:
    size = rng.randint(0, min(max_size, len(keys)))
    chosen = rng.sample(keys, size)
    return Weighting(s, [(k, s.sample(rng)) for k in chosen])


def check_monad_and_strength_laws(s: Semiring, sample_count: int, seed: int) -> list[LawResult]:
    """Sample the monad, Kleisli, strength and double-strength laws."""
    rng = random.Random(seed)
    xs = ["x0", "x1", "x2", "x3"]
    ys = ["y0", "y1", "y2"]

    def w1():
        return random_weighting(s, rng, xs)

    def w2():
        return random_weighting(s, rng, [w1() for _ in range(3)])

    def w3():
        return random_weighting(s, rng, [w2() for _ in range(3)])

    def arrow(dom, cod):
        table = {d: random_weighting(s, rng, cod) for d in dom}
        return table.__getitem__

    def function(dom, cod):
        table = {d: rng.choice(cod) for d in dom}
        return table.__getitem__

    singles, nested, triples, pairs, with_points = [], [], [], [], []
    funcs, arrows = [], []
    for _ in range(sample_count):
        singles.append((w1(),))
        nested.append((w2(), rng.choice(ys)))
        triples.append((w3(),))
        pairs.append((w1(), random_weighting(s, rng, ys)))
        with_points.append((rng.choice(xs), rng.choice(ys), w1()))
        funcs.append((w1(), function(xs, ys), function(ys, xs)))
        arrows.append((rng.choice(xs), arrow(xs, ys), arrow(ys, xs), arrow(xs, ys)))

    def u(x):
        return unit(s, x)

    def st_mult(ww, y):
        lhs = flatten(fmap(lambda p: strength(p[0], p[1]), strength(ww, y)))
        return lhs == strength(flatten(ww), y)

    def dst_consistent(u_, v_):
        via_left = flatten(fmap(lambda p: costrength(p[0], p[1]), strength(u_, v_)))
        via_right = flatten(fmap(lambda p: strength(p[1], p[0]), strength(v_, u_)))
        return via_left == via_right == double_strength(u_, v_)

    def kl_assoc(x, f, g, h):
        return (kleisli_compose(kleisli_compose(f, g), h)(x)
                == kleisli_compose(f, kleisli_compose(g, h))(x))

    def kl_unit(x, f, g, h):
        return kleisli_compose(u, f)(x) == f(x) == kleisli_compose(f, u)(x)

    prefix = "monad"
    return [
        run_law(f"{prefix}/left-unit", singles, lambda w: flatten(u(w)) == w),
        run_law(f"{prefix}/right-unit", singles, lambda w: flatten(fmap(u, w)) == w),
        run_law(f"{prefix}/associativity", triples,
                lambda W: flatten(flatten(W)) == flatten(fmap(flatten, W))),
        run_law(f"{prefix}/functor-identity", singles, lambda w: fmap(lambda x: x, w) == w),
        run_law(f"{prefix}/functor-composition", funcs,
                lambda w, f, g: fmap(lambda x: g(f(x)), w) == fmap(g, fmap(f, w))),
        run_law("kleisli/identity", arrows, kl_unit),
        run_law("kleisli/associativity", arrows, kl_assoc),
        run_law("strength/unit", with_points,
                lambda x, y, w: strength(u(x), y) == u((x, y))),
        run_law("strength/multiplication", nested, st_mult),
        run_law("strength/naturality", funcs,
                lambda w, f, g: strength(fmap(f, w), "p")
                == fmap(lambda p: (f(p[0]), p[1]), strength(w, "p"))),
        run_law("double-strength/consistency", pairs, dst_consistent),
    ]
