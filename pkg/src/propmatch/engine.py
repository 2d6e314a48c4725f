"""The unified proposal engine.

One machine covers two-sided deferred acceptance (Gale-Shapley), two-sided
immediate acceptance (Boston), and the eight one-sided algorithms obtained by
letting items build fictitious preferences dynamically.  The one-sided family
is parameterized by three independent switches:

* memory: PERMANENT (items keep their preference record for the whole run) or
  TEMPORARY (every time an unmatched item becomes matched, all items lose their
  memory and all agents forget which items they have already approached);
* acceptance: ACCEPT_FIRST (an item with any recorded preference rejects every
  proposer) or ACCEPT_LAST (an item always switches to a proposer it has not
  recorded yet, and rejects proposers it has);
* discipline: STACK (a rejected or displaced agent proposes again immediately)
  or QUEUE (it waits behind all other pending agents).

An agent always proposes to its most-preferred item it has not approached since
the last memory reset.  An item holding an agent but without any recorded
preference prefers the proposer and switches (both acceptance policies).  Each
(agent, item) pair can be proposed at most once between resets, so permanent
runs make at most n^2 proposals and temporary runs at most n^3 (at most one
reset per newly matched item).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .model import AgentOrder, InvalidInstanceError, Matching, Profile
from .textio import agent_name, item_name


class Memory(enum.Enum):
    PERMANENT = "P"
    TEMPORARY = "T"


class Acceptance(enum.Enum):
    ACCEPT_FIRST = "F"
    ACCEPT_LAST = "L"


class Discipline(enum.Enum):
    STACK = "S"
    QUEUE = "Q"


class ModeError(ValueError):
    """A mechanism was invoked on a profile missing required preference data."""


@dataclass(frozen=True)
class EngineConfig:
    """One of the eight (memory, acceptance, discipline) policy triples."""

    memory: Memory
    acceptance: Acceptance
    discipline: Discipline

    @property
    def code(self) -> str:
        return self.memory.value + self.acceptance.value + self.discipline.value

    @staticmethod
    def from_code(code: str) -> "EngineConfig":
        if len(code) != 3:
            raise ValueError(f"unknown engine code {code!r}")
        try:
            return EngineConfig(Memory(code[0]), Acceptance(code[1]), Discipline(code[2]))
        except ValueError:
            raise ValueError(f"unknown engine code {code!r}") from None


ALL_ENGINE_CODES = tuple(
    m.value + a.value + d.value for m in Memory for a in Acceptance for d in Discipline
)


class Outcome(enum.Enum):
    MATCHED_UNASSIGNED = "matched"
    DISPLACED_HOLDER = "displaced"
    REJECTED = "rejected"


@dataclass(frozen=True)
class TraceEvent:
    """One proposal: who approached what, and what happened.

    ``displaced`` is the previous holder when ``outcome`` is DISPLACED_HOLDER.
    ``reset_occurred`` is True only for a MATCHED_UNASSIGNED event under
    temporary memory.
    """

    proposer: int
    item: int
    outcome: Outcome
    displaced: Optional[int] = None
    reset_occurred: bool = False


@dataclass(frozen=True)
class EngineResult:
    matching: Matching
    proposal_count: int
    trace: Tuple[TraceEvent, ...]


def run_engine(profile: Profile, order: AgentOrder, config: EngineConfig) -> EngineResult:
    """Run one deterministic proposal sequence and return the final matching.

    Only the agent side of ``profile`` is used; item preferences are built
    dynamically per ``config``.
    """
    n = profile.n
    if len(order.order) != n:
        raise InvalidInstanceError("order length must equal agent count")
    prefs = profile.agent_prefs
    temporary = config.memory is Memory.TEMPORARY
    accept_last = config.acceptance is Acceptance.ACCEPT_LAST
    stack = config.discipline is Discipline.STACK
    bound = n**3 if temporary else n**2

    pending: List[int] = list(order.order)
    approached = [set() for _ in range(n)]  # items proposed to since last reset
    memory: List[List[int]] = [[] for _ in range(n)]  # most-preferred first
    holder: List[Optional[int]] = [None] * n
    item_of: List[Optional[int]] = [None] * n
    trace: List[TraceEvent] = []

    def reenter(agent: int) -> None:
        if stack:
            pending.insert(0, agent)
        else:
            pending.append(agent)

    while pending:
        j = pending.pop(0)
        o = next(x for x in prefs[j] if x not in approached[j])
        approached[j].add(o)
        assert len(trace) < bound, "proposal bound exceeded; engine semantics broken"
        h = holder[o]
        if h is None:
            holder[o] = j
            item_of[j] = o
            if temporary:
                # Global reset: every item loses its memory and every agent may
                # approach items that rejected it before.
                for mem in memory:
                    mem.clear()
                for ap in approached:
                    ap.clear()
            else:
                memory[o] = [j]
            trace.append(TraceEvent(j, o, Outcome.MATCHED_UNASSIGNED, reset_occurred=temporary))
        elif not memory[o]:
            # No recorded preference: the item prefers the proposer (both policies).
            memory[o] = [j, h]
            holder[o] = j
            item_of[j] = o
            item_of[h] = None
            reenter(h)
            trace.append(TraceEvent(j, o, Outcome.DISPLACED_HOLDER, displaced=h))
        elif accept_last and j not in memory[o]:
            memory[o].insert(0, j)
            holder[o] = j
            item_of[j] = o
            item_of[h] = None
            reenter(h)
            trace.append(TraceEvent(j, o, Outcome.DISPLACED_HOLDER, displaced=h))
        else:
            # Accept-First rejects every proposer; Accept-Last rejects recorded ones.
            if not accept_last and j not in memory[o]:
                memory[o].append(j)
            reenter(j)
            trace.append(TraceEvent(j, o, Outcome.REJECTED))

    matching = Matching(tuple(item_of))  # complete by construction
    return EngineResult(matching, len(trace), tuple(trace))


def run_gale_shapley(profile: Profile, order: AgentOrder) -> EngineResult:
    """Agent-proposing deferred acceptance with the profile's item preferences.

    The output matching is stable and does not depend on ``order``; the trace
    and proposal count do.
    """
    if profile.item_prefs is None:
        raise ModeError("Gale-Shapley needs item-side preferences")
    n = profile.n
    prefs = profile.agent_prefs
    rank_of = [{a: r for r, a in enumerate(p)} for p in profile.item_prefs]
    pending: List[int] = list(order.order)
    approached = [set() for _ in range(n)]
    holder: List[Optional[int]] = [None] * n
    item_of: List[Optional[int]] = [None] * n
    trace: List[TraceEvent] = []

    while pending:
        j = pending.pop(0)
        o = next(x for x in prefs[j] if x not in approached[j])
        approached[j].add(o)
        h = holder[o]
        if h is None:
            holder[o] = j
            item_of[j] = o
            trace.append(TraceEvent(j, o, Outcome.MATCHED_UNASSIGNED))
        elif rank_of[o][j] < rank_of[o][h]:
            holder[o] = j
            item_of[j] = o
            item_of[h] = None
            pending.append(h)
            trace.append(TraceEvent(j, o, Outcome.DISPLACED_HOLDER, displaced=h))
        else:
            pending.append(j)
            trace.append(TraceEvent(j, o, Outcome.REJECTED))
    assert len(trace) <= n**2
    return EngineResult(Matching(tuple(item_of)), len(trace), tuple(trace))


class BostonMode(enum.Enum):
    SEQUENTIAL = "sequential"
    SIMULTANEOUS = "simultaneous"


def run_boston_two_sided(profile: Profile, order: AgentOrder, mode: BostonMode) -> Matching:
    """Immediate acceptance with the profile's item preferences.

    Sequential: agents commit one at a time in ``order``, each walking down its
    list until it finds a free item; engagements are never broken.
    Simultaneous: in round r every unmatched agent applies to its rank-r item;
    a free item keeps the applicant its own preferences rank highest and
    permanently rejects the rest.
    """
    if profile.item_prefs is None:
        raise ModeError("two-sided Boston needs item-side preferences")
    n = profile.n
    item_of: List[Optional[int]] = [None] * n
    taken = [False] * n
    if mode is BostonMode.SEQUENTIAL:
        for j in order.order:
            o = next(x for x in profile.agent_prefs[j] if not taken[x])
            taken[o] = True
            item_of[j] = o
    else:
        rank_of = [{a: r for r, a in enumerate(p)} for p in profile.item_prefs]
        for r in range(n):
            applicants: dict[int, List[int]] = {}
            for j in range(n):
                if item_of[j] is None:
                    applicants.setdefault(profile.agent_prefs[j][r], []).append(j)
            for o, js in applicants.items():
                if taken[o]:
                    continue
                winner = min(js, key=lambda j: rank_of[o][j])
                taken[o] = True
                item_of[winner] = o
    return Matching(tuple(item_of))


def replay_trace(profile: Profile, order: AgentOrder, trace: Tuple[TraceEvent, ...]) -> Matching:
    """Re-apply a recorded trace to a fresh state and return the final matching.

    Raises if the events are not applicable in sequence (internal consistency
    check for recorded runs).
    """
    n = profile.n
    item_of: List[Optional[int]] = [None] * n
    for e in trace:
        if e.outcome is Outcome.MATCHED_UNASSIGNED:
            item_of[e.proposer] = e.item
        elif e.outcome is Outcome.DISPLACED_HOLDER:
            if item_of[e.displaced] != e.item:
                raise InvalidInstanceError("trace displaces a non-holder")
            item_of[e.displaced] = None
            item_of[e.proposer] = e.item
    return Matching(tuple(item_of))


def format_trace_table(
    order: AgentOrder, result: EngineResult, config: Optional[EngineConfig] = None
) -> str:
    """Render a run in the tabular trace format.

    One line per proposal:
    ``index | proposer -> item | outcome | pending-after | partial-matching | item-memories``.
    ``config`` is the engine configuration the run used; pass None for a
    fixed-preference run (queue discipline, no memory column).
    """
    n = len(order.order)
    stack = config is not None and config.discipline is Discipline.STACK
    pending = list(order.order)
    memory: List[List[int]] = [[] for _ in range(n)]
    item_of: List[Optional[int]] = [None] * n
    out = []
    for idx, e in enumerate(result.trace, start=1):
        pending.pop(0)
        if e.outcome is Outcome.MATCHED_UNASSIGNED:
            item_of[e.proposer] = e.item
            if e.reset_occurred:
                for mem in memory:
                    mem.clear()
            else:
                memory[e.item] = [e.proposer]
            outcome = "matched"
        elif e.outcome is Outcome.DISPLACED_HOLDER:
            if memory[e.item]:
                memory[e.item].insert(0, e.proposer)
            else:
                memory[e.item] = [e.proposer, e.displaced]
            item_of[e.displaced] = None
            item_of[e.proposer] = e.item
            if stack:
                pending.insert(0, e.displaced)
            else:
                pending.append(e.displaced)
            outcome = f"{agent_name(e.displaced)} displaced"
        else:
            if (
                config is not None
                and config.acceptance is Acceptance.ACCEPT_FIRST
                and e.proposer not in memory[e.item]
            ):
                memory[e.item].append(e.proposer)
            if stack:
                pending.insert(0, e.proposer)
            else:
                pending.append(e.proposer)
            outcome = "rejected"
        pending_s = ",".join(agent_name(a) for a in pending) or "-"
        matching_s = (
            " ".join(
                f"{agent_name(a)}:{item_name(o, n)}" for a, o in enumerate(item_of) if o is not None
            )
            or "-"
        )
        if config is None:
            mem_s = "-"
        else:
            mems = [
                f"{item_name(o, n)}:" + ">".join(agent_name(a) for a in memory[o])
                for o in range(n)
                if memory[o]
            ]
            mem_s = " ".join(mems) if mems else "none"
        out.append(
            f"{idx} | {agent_name(e.proposer)} -> {item_name(e.item, n)} | {outcome}"
            f" | {pending_s} | {matching_s} | {mem_s}"
        )
    return "\n".join(out) + "\n"
