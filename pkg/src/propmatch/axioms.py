"""Decidable checkers for efficiency, stochastic dominance, strategyproofness,
and the conditional worst-off guarantee.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .lottery import ENUMERATION_LIMIT, EnumerationLimitError, MatchingMechanism, exact_lottery
from .mechanisms import top_trading_cycles
from .model import AgentOrder, FractionalAssignment, Matching, Profile


class Dominance(enum.Enum):
    STRICTLY_DOMINATES = "strict"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"
    DOMINATED_BY = "dominated"


def sd_dominates(
    p: Sequence[Fraction], q: Sequence[Fraction], pref: Sequence[int]
) -> Dominance:
    """First-order stochastic dominance of row ``p`` over ``q`` under ``pref``.

    ``p`` weakly dominates ``q`` iff every preference-prefix cumulative
    probability of ``p`` is at least that of ``q``; strictly iff some prefix is
    strictly greater.
    """
    if len(p) != len(q) or len(p) != len(pref):
        raise ValueError("row/preference length mismatch")
    cp = cq = Fraction(0)
    ge = le = True
    for o in pref:
        cp += p[o]
        cq += q[o]
        if cp < cq:
            ge = False
        if cp > cq:
            le = False
    if ge and le:
        return Dominance.EQUAL
    if ge:
        return Dominance.STRICTLY_DOMINATES
    if le:
        return Dominance.DOMINATED_BY
    return Dominance.INCOMPARABLE


def is_pareto_efficient(m: Matching, profile: Profile) -> bool:
    """True iff no trading cycle improves some agents without hurting any:
    equivalently, the matching is a fixed point of top trading cycles run on
    itself as the endowment."""
    return top_trading_cycles(profile, m) == m


def is_ordinally_efficient(assignment: FractionalAssignment, profile: Profile) -> bool:
    """True iff no other random assignment stochastically dominates this one.

    Characterization: build the relation "x is wanted over y" that holds when
    some agent with positive probability of y ranks x above y; the assignment
    is ordinally efficient iff this relation is acyclic.
    """
    n = profile.n
    edges: List[set] = [set() for _ in range(n)]
    for i in range(n):
        row = assignment.row(i)
        for y in range(n):
            if row[y] > 0:
                for x in profile.agent_prefs[i]:
                    if x == y:
                        break
                    edges[x].add(y)
    # cycle detection over the item graph
    color = [0] * n  # 0 unseen, 1 on stack, 2 done
    def dfs(u: int) -> bool:
        color[u] = 1
        for v in edges[u]:
            if color[v] == 1 or (color[v] == 0 and dfs(v)):
                return True
        color[u] = 2
        return False
    return not any(color[u] == 0 and dfs(u) for u in range(n))


class SPVerdict(enum.Enum):
    STRATEGYPROOF = "strategyproof"
    WEAKLY_SP_ONLY = "weakly-sp-only"
    NOT_WEAKLY_SP = "not-weakly-sp"


@dataclass(frozen=True)
class SPReport:
    """Deviation analysis for one agent: the truthful exact-lottery row against
    the row under every possible misreport, others held truthful."""

    agent: int
    truthful_row: Tuple[Fraction, ...]
    misreports: Tuple[Tuple[Tuple[int, ...], Tuple[Fraction, ...], Dominance], ...]
    overall: SPVerdict

    def best_deviation(self) -> Optional[Tuple[int, ...]]:
        for report, _, verdict in self.misreports:
            if verdict is Dominance.STRICTLY_DOMINATES:
                return report
        return None


def check_strategyproofness(
    mechanism: MatchingMechanism, profile: Profile, agent: int
) -> SPReport:
    """Compare the agent's exact randomized outcome under truth against every
    misreport.  Dominance verdicts are relative to the *true* preferences.
    """
    n = profile.n
    truth = profile.agent_prefs[agent]
    truthful_row = exact_lottery(mechanism, profile).assignment.row(agent)
    rows = []
    strict_gain = False
    all_weakly_dominated = True
    for report in itertools.permutations(range(n)):
        if report == truth:
            continue
        prefs = list(profile.agent_prefs)
        prefs[agent] = report
        row = exact_lottery(mechanism, Profile(tuple(prefs))).assignment.row(agent)
        verdict = sd_dominates(row, truthful_row, truth)
        rows.append((report, row, verdict))
        if verdict is Dominance.STRICTLY_DOMINATES:
            strict_gain = True
        if verdict not in (Dominance.DOMINATED_BY, Dominance.EQUAL):
            all_weakly_dominated = False
    if strict_gain:
        overall = SPVerdict.NOT_WEAKLY_SP
    elif all_weakly_dominated:
        overall = SPVerdict.STRATEGYPROOF
    else:
        overall = SPVerdict.WEAKLY_SP_ONLY
    return SPReport(agent, truthful_row, tuple(rows), overall)


def feasible_top_k(profile: Profile, k: int) -> bool:
    """Can every agent simultaneously receive one of its top k choices?
    Decided by augmenting-path search on the agent/top-k-item graph."""
    n = profile.n
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    choices = [set(profile.agent_prefs[j][:k]) for j in range(n)]
    match_of_item: List[Optional[int]] = [None] * n

    def augment(j: int, visited: set) -> bool:
        for o in choices[j]:
            if o in visited:
                continue
            visited.add(o)
            if match_of_item[o] is None or augment(match_of_item[o], visited):
                match_of_item[o] = j
                return True
        return False

    return all(augment(j, set()) for j in range(n))


def satisfies_conditional_bound(
    mechanism: MatchingMechanism, profile: Profile, k: int
) -> bool:
    """Whenever some matching gives everyone a top-k item, the mechanism must
    do so for *every* initial order (the randomized version then succeeds with
    probability 1).  Vacuously true when no such matching exists."""
    n = profile.n
    if n > ENUMERATION_LIMIT:
        raise EnumerationLimitError(f"n={n} exceeds the order-enumeration limit {ENUMERATION_LIMIT}")
    if not feasible_top_k(profile, k):
        return True
    for perm in itertools.permutations(range(n)):
        m = mechanism(profile, AgentOrder(perm))
        if any(profile.rank(j, m.item_of[j]) >= k for j in range(n)):
            return False
    return True
