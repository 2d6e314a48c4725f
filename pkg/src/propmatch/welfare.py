"""Borda-utility welfare: utilitarian sums, the assignment optimum, normalized
egalitarian welfare, and sampling campaigns for welfare loss and order bias.

Utilities are common Borda values: an agent's rank-r item (1-indexed) is worth
n - r, so the top choice is worth n - 1 and the last 0.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from .lottery import SampleConfig, exact_lottery
from .model import AgentOrder, FractionalAssignment, Matching, Profile
from .sampling import ProfileSampler


def borda_utilities(profile: Profile) -> Tuple[Tuple[int, ...], ...]:
    """``u[i][o]`` = Borda utility of item ``o`` for agent ``i``."""
    n = profile.n
    out = []
    for prefs in profile.agent_prefs:
        u = [0] * n
        for r, o in enumerate(prefs):
            u[o] = n - 1 - r
        out.append(tuple(u))
    return tuple(out)


def agent_utility(
    outcome: Union[Matching, FractionalAssignment], profile: Profile, agent: int
) -> Fraction:
    u = borda_utilities(profile)[agent]
    if isinstance(outcome, Matching):
        return Fraction(u[outcome.item_of[agent]])
    return sum((p * u[o] for o, p in enumerate(outcome.row(agent))), Fraction(0))


def utilitarian_welfare(
    outcome: Union[Matching, FractionalAssignment], profile: Profile
) -> Fraction:
    """Sum over agents of the (expected) Borda utility of their allocation."""
    return sum((agent_utility(outcome, profile, i) for i in range(profile.n)), Fraction(0))


def egalitarian_welfare(
    outcome: Union[Matching, FractionalAssignment], profile: Profile
) -> Fraction:
    """(Expected) Borda utility of the worst-off agent, scaled by n."""
    return min(agent_utility(outcome, profile, i) for i in range(profile.n)) / profile.n


def _hungarian_max(weight: Sequence[Sequence[int]]) -> Tuple[int, Tuple[int, ...]]:
    """Maximum-weight perfect matching on an integer matrix, O(n^3).

    Potentials-based shortest-augmenting-path formulation on the negated
    matrix; all arithmetic stays in exact integers.
    """
    n = len(weight)
    INF = 1 << 60
    cost = [[-weight[i][j] for j in range(n)] for i in range(n)]
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)  # p[j] = row matched to column j (1-indexed; 0 = free)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    item_of = [0] * n
    for j in range(1, n + 1):
        item_of[p[j] - 1] = j - 1
    total = sum(weight[i][item_of[i]] for i in range(n))
    return total, tuple(item_of)


def optimal_utilitarian(profile: Profile) -> Tuple[Fraction, Matching]:
    """The maximum utilitarian welfare over all matchings, with a witness."""
    value, item_of = _hungarian_max(borda_utilities(profile))
    return Fraction(value), Matching(item_of)


@dataclass(frozen=True)
class WelfareStats:
    mean: Fraction
    stderr: float
    sample_count: int
    seed: int


def _stats(values: List[Fraction], seed: int) -> WelfareStats:
    n = len(values)
    mean = sum(values, Fraction(0)) / n
    if n < 2:
        return WelfareStats(mean, 0.0, n, seed)
    var = sum((float(x - mean)) ** 2 for x in values) / (n - 1)
    return WelfareStats(mean, math.sqrt(var / n), n, seed)


def _expected_assignment(mechanism, profile: Profile, order_samples: int, rng) -> FractionalAssignment:
    """Expected outcome rows of a randomized matching mechanism on one profile.

    ``order_samples`` = 0 means exact enumeration of all n! orders; otherwise
    that many orders are drawn from ``rng`` (rows then sum to 1 but columns
    need not, so the sampled result is returned as raw frequency rows).
    """
    if mechanism.kind == "fractional":
        return mechanism.assignment(profile)
    n = profile.n
    if order_samples == 0:
        return exact_lottery(mechanism.run, profile).assignment
    counts = [[0] * n for _ in range(n)]
    for _ in range(order_samples):
        perm = list(range(n))
        rng.shuffle(perm)
        m = mechanism.run(profile, AgentOrder(tuple(perm)))
        for a, o in enumerate(m.item_of):
            counts[a][o] += 1
    return tuple(tuple(Fraction(c, order_samples) for c in row) for row in counts)


def _expected_utility_rows(assignment, profile: Profile) -> List[Fraction]:
    u = borda_utilities(profile)
    rows = assignment.p if isinstance(assignment, FractionalAssignment) else assignment
    return [
        sum((p * u[i][o] for o, p in enumerate(row)), Fraction(0))
        for i, row in enumerate(rows)
    ]


def utilitarian_loss(
    mechanism,
    n: int,
    cfg: SampleConfig,
    order_samples: int = 1,
    ratio_of_means: bool = False,
) -> WelfareStats:
    """Average fraction of the optimal utilitarian welfare lost over uniform
    random profiles.

    Per profile the loss is (OPT - W)/OPT with W the mechanism's expected
    welfare over initial orders (exact when ``order_samples`` is 0, otherwise
    estimated from that many sampled orders).  ``ratio_of_means`` switches to
    the alternative aggregate sum(OPT - W)/sum(OPT).
    """
    sampler = ProfileSampler(n, cfg.seed)
    rng = random.Random(cfg.seed ^ 0x9E3779B97F4A7C15)
    losses: List[Fraction] = []
    tot_opt = Fraction(0)
    tot_gap = Fraction(0)
    for profile in sampler.stream(cfg.sample_count):
        opt, _ = optimal_utilitarian(profile)
        assignment = _expected_assignment(mechanism, profile, order_samples, rng)
        w = sum(_expected_utility_rows(assignment, profile), Fraction(0))
        losses.append((opt - w) / opt)
        tot_opt += opt
        tot_gap += opt - w
    stats = _stats(losses, cfg.seed)
    if ratio_of_means:
        return WelfareStats(tot_gap / tot_opt, stats.stderr, stats.sample_count, stats.seed)
    return stats


def expected_egalitarian(
    mechanism, n: int, cfg: SampleConfig, order_samples: int = 1, realized_min: bool = False
) -> WelfareStats:
    """Mean n-normalized egalitarian welfare over uniform random profiles.

    Default: the minimum over agents of expected Borda utility.  With
    ``realized_min`` the expectation and minimum swap: the (estimated) expected
    value of the worst-off agent's realized utility.
    """
    sampler = ProfileSampler(n, cfg.seed)
    rng = random.Random(cfg.seed ^ 0x9E3779B97F4A7C15)
    values: List[Fraction] = []
    for profile in sampler.stream(cfg.sample_count):
        if realized_min and mechanism.kind != "fractional":
            if order_samples == 0:
                lot = exact_lottery(mechanism.run, profile)
                val = sum(
                    (w * min(_expected_utility_rows_matching(m, profile)) for m, w in lot.support),
                    Fraction(0),
                )
            else:
                acc = Fraction(0)
                for _ in range(order_samples):
                    perm = list(range(n))
                    rng.shuffle(perm)
                    m = mechanism.run(profile, AgentOrder(tuple(perm)))
                    acc += min(_expected_utility_rows_matching(m, profile))
                val = acc / order_samples
            values.append(val / n)
        else:
            assignment = _expected_assignment(mechanism, profile, order_samples, rng)
            values.append(min(_expected_utility_rows(assignment, profile)) / n)
    return _stats(values, cfg.seed)


def _expected_utility_rows_matching(m: Matching, profile: Profile) -> List[Fraction]:
    u = borda_utilities(profile)
    return [Fraction(u[i][m.item_of[i]]) for i in range(profile.n)]


def order_bias(mechanism, n: int, cfg: SampleConfig) -> WelfareStats:
    """Normalized spread of expected Borda welfare across initial positions.

    The mechanism runs with the fixed order 1..n on uniform random profiles;
    the bias is (max over positions - min over positions) of mean welfare,
    divided by n.  Mechanisms that never read the order have zero bias by
    definition, returned exactly.
    """
    if not mechanism.uses_order:
        return WelfareStats(Fraction(0), 0.0, cfg.sample_count, cfg.seed)
    sampler = ProfileSampler(n, cfg.seed)
    order = AgentOrder.identity(n)
    sums = [Fraction(0)] * n
    sumsq = [0.0] * n
    for profile in sampler.stream(cfg.sample_count):
        m = mechanism.run(profile, order)
        u = borda_utilities(profile)
        for pos in range(n):  # position i holds agent i under the identity order
            w = u[pos][m.item_of[pos]]
            sums[pos] += w
            sumsq[pos] += float(w) * w
    N = cfg.sample_count
    means = [s / N for s in sums]
    hi = max(range(n), key=lambda i: means[i])
    lo = min(range(n), key=lambda i: means[i])
    bias = (means[hi] - means[lo]) / n
    def se(i: int) -> float:
        if N < 2:
            return 0.0
        var = (sumsq[i] - N * float(means[i]) ** 2) / (N - 1)
        return math.sqrt(max(var, 0.0) / N)
    stderr = math.sqrt(se(hi) ** 2 + se(lo) ** 2) / n
    return WelfareStats(bias, stderr, N, cfg.seed)
