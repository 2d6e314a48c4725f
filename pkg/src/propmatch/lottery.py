"""Randomized mechanisms: exact expectation over all n! initial orders, seeded
Monte Carlo estimation, and equivalence testing between mechanisms.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Tuple

from .model import AgentOrder, FractionalAssignment, Matching, Profile

MatchingMechanism = Callable[[Profile, AgentOrder], Matching]

ENUMERATION_LIMIT = 8  # 8! = 40320 runs


class EnumerationLimitError(ValueError):
    """The instance is too large for exhaustive order enumeration."""


@dataclass(frozen=True)
class SampleConfig:
    sample_count: int
    seed: int

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")


@dataclass(frozen=True)
class LotteryResult:
    """Exact uniform-order lottery: the average assignment and its support.

    ``support`` pairs each distinct matching with its exact probability;
    weights sum to 1 and their weighted permutation matrices sum to
    ``assignment``.
    """

    assignment: FractionalAssignment
    support: Tuple[Tuple[Matching, Fraction], ...]
    order_count: int


def exact_lottery(
    mechanism: MatchingMechanism, profile: Profile, limit: int = ENUMERATION_LIMIT
) -> LotteryResult:
    """Run ``mechanism`` under every initial order (lexicographic enumeration)
    and average with weight 1/n!.
    """
    n = profile.n
    if n > limit:
        raise EnumerationLimitError(
            f"n={n} exceeds the enumeration limit {limit}; use sampled_lottery"
        )
    counts: dict[Tuple[int, ...], int] = {}
    total = 0
    for perm in itertools.permutations(range(n)):
        m = mechanism(profile, AgentOrder(perm))
        counts[m.item_of] = counts.get(m.item_of, 0) + 1
        total += 1
    p = [[Fraction(0)] * n for _ in range(n)]
    support = []
    for item_of, c in sorted(counts.items()):
        w = Fraction(c, total)
        support.append((Matching(item_of), w))
        for a, o in enumerate(item_of):
            p[a][o] += w
    return LotteryResult(
        FractionalAssignment(tuple(tuple(row) for row in p)), tuple(support), total
    )


def sampled_lottery(
    mechanism: MatchingMechanism, profile: Profile, cfg: SampleConfig
) -> FractionalAssignment:
    """Estimate the lottery by item-receipt frequencies over sampled uniform
    orders.  Deterministic for a given seed; rows sum to exactly 1 but columns
    generally do not, so the result is returned as raw frequency rows.
    """
    n = profile.n
    rng = random.Random(cfg.seed)
    counts = [[0] * n for _ in range(n)]
    for _ in range(cfg.sample_count):
        perm = list(range(n))
        rng.shuffle(perm)
        m = mechanism(profile, AgentOrder(tuple(perm)))
        for a, o in enumerate(m.item_of):
            counts[a][o] += 1
    return _frequency_rows(counts, cfg.sample_count)


def _frequency_rows(counts: Sequence[Sequence[int]], total: int):
    return tuple(tuple(Fraction(c, total) for c in row) for row in counts)


@dataclass(frozen=True)
class EquivalenceVerdict:
    equal: bool
    profile: Optional[Profile] = None
    order: Optional[AgentOrder] = None

    def __bool__(self) -> bool:
        return self.equal


def equivalent_on(
    mech_a: MatchingMechanism,
    mech_b: MatchingMechanism,
    profiles: Iterable[Profile],
    orders: str | int = "all",
    seed: int = 0,
) -> EquivalenceVerdict:
    """Compare two matching mechanisms over a profile set.

    ``orders`` is ``"all"`` (every permutation per profile) or an integer count
    of seeded random orders per profile.  Returns the first (profile, order)
    where the outputs differ, if any.
    """
    rng = random.Random(seed)
    for profile in profiles:
        n = profile.n
        if orders == "all":
            order_iter: Iterable[Tuple[int, ...]] = itertools.permutations(range(n))
        else:
            def draws():
                for _ in range(int(orders)):
                    perm = list(range(n))
                    rng.shuffle(perm)
                    yield tuple(perm)
            order_iter = draws()
        for perm in order_iter:
            order = AgentOrder(perm)
            if mech_a(profile, order) != mech_b(profile, order):
                return EquivalenceVerdict(False, profile, order)
    return EquivalenceVerdict(True)


def randomized_equivalent_on(
    mech_a: MatchingMechanism,
    mech_b: MatchingMechanism,
    profiles: Iterable[Profile],
) -> EquivalenceVerdict:
    """Compare randomized versions by exact lottery matrices (never samples)."""
    for profile in profiles:
        if exact_lottery(mech_a, profile).assignment != exact_lottery(mech_b, profile).assignment:
            return EquivalenceVerdict(False, profile)
    return EquivalenceVerdict(True)
