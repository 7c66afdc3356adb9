"""
Seeded random field elements and points (distribution ``sampler-v1``).

Every draw uses its own ``random.Random`` seeded with
``"{seed}:{label}:{trial}"``, so a trial's point does not depend on how many
trials ran before it, or in which order.

An element is drawn as follows:

* with probability 1/8 it is 0, with probability 1/8 a pool value;
* with probability 1/8 (prime characteristic) the pth power of a random
  element, or (characteristic 0) a random element in the transcendentals
  other than the differentiated one, so constants show up regularly;
* otherwise numerator / denominator, each a polynomial of total degree at
  most ``max_degree`` with coefficients from ``pool``; the denominator is 1
  half of the time.
"""
import itertools
import random
from typing import Iterable, List, Sequence, Tuple

from src.algebra.fields import FieldDescriptor, FieldElement
from src.oracles.points import Point
from src.utils import config


class PointSampler:
    def __init__(self, descriptor: FieldDescriptor, seed: int = config.DEFAULT_SEED,
                 pool: Sequence[int] = config.SAMPLE_POOL, max_degree: int = config.SAMPLE_MAX_DEGREE):
        self.descriptor = descriptor
        self.seed = seed
        self.pool = tuple(pool)
        self.max_degree = max_degree
        self.version = config.SAMPLER_VERSION

    def rng(self, label: str, trial: int) -> random.Random:
        return random.Random(f"{self.seed}:{label}:{trial}")

    def _monomials(self, names: Sequence[str], degree: int) -> List[Tuple[int, ...]]:
        return [m for m in itertools.product(range(degree + 1), repeat=len(names)) if sum(m) <= degree]

    def _polynomial(self, rng: random.Random, names: Sequence[str]) -> FieldElement:
        degree = rng.randint(0, self.max_degree)
        total = self.descriptor.zero
        for monom in self._monomials(names, degree):
            coeff = rng.choice(self.pool)
            if not coeff:
                continue
            term = self.descriptor.element(coeff)
            for name, exponent in zip(names, monom):
                if exponent:
                    term = term * self.descriptor.gen(name) ** exponent
            total = total + term
        return total

    def _quotient(self, rng: random.Random, names: Sequence[str]) -> FieldElement:
        numerator = self._polynomial(rng, names)
        if rng.random() < 0.5:
            return numerator
        denominator = self._polynomial(rng, names)
        return numerator if not denominator else numerator / denominator

    def draw(self, rng: random.Random) -> FieldElement:
        names = self.descriptor.transcendentals
        roll = rng.random()
        if roll < 0.125:
            return self.descriptor.zero
        if roll < 0.25:
            return self.descriptor.element(rng.choice(self.pool))
        if roll < 0.375:
            if self.descriptor.characteristic:
                return self._quotient(rng, names) ** self.descriptor.characteristic
            return self._quotient(rng, names[1:])
        return self._quotient(rng, names)

    def element(self, label: str, trial: int) -> FieldElement:
        return self.draw(self.rng(label, trial))

    def point(self, names: Iterable[str], label: str, trial: int) -> Point:
        """One value per name, drawn in sorted name order from a single trial stream."""
        rng = self.rng(label, trial)
        return Point(self.descriptor, {name: self.draw(rng) for name in sorted(set(names))})

    def elements(self, count: int, label: str) -> List[FieldElement]:
        return [self.element(label, trial) for trial in range(count)]
