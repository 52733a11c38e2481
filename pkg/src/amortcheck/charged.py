"""Cost-instrumented values and the finite-distribution layer.

`Charged` pairs a value with accumulated cost; `bind` sequences two charged
steps, combining their costs left to right in the ambient monoid. `tensor`
combines independent charged values and therefore demands commutativity.

For randomized structures, `expect` collapses a finite weighted family of
charged outcomes into an `ExpectedCharged`: the exact expected cost next to
a canonicalized outcome distribution. Weights are exact rationals; there is
no sampling anywhere, which keeps every verdict reproducible.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence, Tuple

from .cost import CostMonoid
from .encoding import encode
from .errors import BadWeights, NonCommutativeTensor


@dataclass(frozen=True)
class Charged:
    """A value of type A together with the cost spent producing it."""

    cost: Any
    value: Any


def charge(cost: Any, value: Any) -> Charged:
    """Instrument `value` with `cost` units of abstract cost."""
    return Charged(cost, value)


def unit(monoid: CostMonoid, value: Any) -> Charged:
    """The free (zero-cost) charged value."""
    return Charged(monoid.identity, value)


def bind(monoid: CostMonoid, a: Charged, f: Callable[[Any], Charged]) -> Charged:
    """Sequence `a` then `f`, accumulating cost left to right."""
    b = f(a.value)
    return Charged(monoid.combine(a.cost, b.cost), b.value)


def tensor(monoid: CostMonoid, a: Charged, b: Charged) -> Charged:
    """Combine two independent charged values into a charged pair.

    Only meaningful when cost order does not matter, so non-commutative
    monoids are rejected.
    """
    if not monoid.is_commutative:
        raise NonCommutativeTensor(
            f"tensor needs a commutative cost monoid, got {monoid.name}"
        )
    return Charged(monoid.combine(a.cost, b.cost), (a.value, b.value))


@dataclass(frozen=True)
class Dist:
    """A finitely-supported distribution in canonical form.

    Branches are (weight, outcome) pairs with exact positive weights that
    sum to 1. Equal outcomes are merged and branches are sorted by the
    deterministic serialization of their outcome, so distribution equality
    is structural equality.
    """

    branches: Tuple[Tuple[Fraction, Any], ...]

    @staticmethod
    def from_branches(branches: Iterable[Tuple[Any, Any]]) -> "Dist":
        merged = {}
        outcomes = {}
        for w, x in branches:
            w = Fraction(w)
            if w <= 0:
                raise BadWeights(f"non-positive weight {w}")
            key = encode(x)
            merged[key] = merged.get(key, Fraction(0)) + w
            outcomes[key] = x
        if sum(merged.values(), Fraction(0)) != 1:
            raise BadWeights("weights must sum exactly to 1")
        ordered = tuple((merged[k], outcomes[k]) for k in sorted(merged))
        return Dist(ordered)

    @staticmethod
    def point(x: Any) -> "Dist":
        return Dist(((Fraction(1), x),))

    def map(self, f: Callable[[Any], Any]) -> "Dist":
        return Dist.from_branches((w, f(x)) for w, x in self.branches)

    @property
    def support(self) -> Tuple[Any, ...]:
        return tuple(x for _, x in self.branches)

    def is_point(self) -> bool:
        return len(self.branches) == 1


@dataclass(frozen=True)
class ExpectedCharged:
    """The expected-cost view of a randomized charged computation."""

    expected_cost: Fraction
    dist: Dist


def expect(branches: Sequence[Tuple[Any, Charged]]) -> ExpectedCharged:
    """Collapse weighted charged branches to expected cost and outcome law.

    This realizes the pass from a distribution of (cost, outcome) pairs to
    an expected cost alongside a distribution of outcomes. Costs must live
    in the rational cost model so the expectation is exact.
    """
    if not branches:
        raise BadWeights("expect needs at least one branch")
    weights = [Fraction(w) for w, _ in branches]
    if any(w <= 0 for w in weights):
        raise BadWeights("weights must be positive")
    if sum(weights) != 1:
        raise BadWeights("weights must sum exactly to 1")
    expected = Fraction(0)
    for w, ch in zip(weights, branches):
        expected += w * Fraction(ch[1].cost)
    dist = Dist.from_branches((w, ch.value) for w, ch in branches)
    return ExpectedCharged(expected, dist)
