"""Seeded random generation of profiles and orders.

Randomness comes from :class:`random.Random` (Mersenne Twister) seeded with a
64-bit integer; every artifact derived from sampling records its seed.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, List

from .model import AgentOrder, Profile


@dataclass
class ProfileSampler:
    """Deterministic stream of uniform profiles: each agent's order is drawn
    i.i.d. uniform over the n! permutations."""

    n: int
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")
        self._rng = random.Random(self.seed)

    def sample(self) -> Profile:
        prefs = []
        for _ in range(self.n):
            p = list(range(self.n))
            self._rng.shuffle(p)
            prefs.append(tuple(p))
        return Profile(tuple(prefs))

    def sample_order(self) -> AgentOrder:
        p = list(range(self.n))
        self._rng.shuffle(p)
        return AgentOrder(tuple(p))

    def stream(self, count: int) -> Iterator[Profile]:
        for _ in range(count):
            yield self.sample()


def all_profiles(n: int) -> Iterator[Profile]:
    """Every one-sided profile on n agents (n!^n of them); lexicographic."""
    perms = list(itertools.permutations(range(n)))
    for combo in itertools.product(perms, repeat=n):
        yield Profile(tuple(combo))


def all_orders(n: int) -> List[AgentOrder]:
    return [AgentOrder(p) for p in itertools.permutations(range(n))]
