"""Deterministic partial-transition automata with marked states.

Value types (events, alphabets, automata) are immutable; every operation
returns a fresh automaton.  Structural operations renumber states
canonically (breadth-first from the initial state, exploring events in
ascending id order) so results are bit-for-bit reproducible.
"""

from __future__ import annotations

import dataclasses
import enum
from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Sequence

# Cap on bounded-language enumeration; above this the string sets explode.
MAX_HORIZON = 12


class HorizonTooLarge(ValueError):
    """Requested bounded-language horizon exceeds MAX_HORIZON."""


class UnknownEvent(KeyError):
    """Event id outside the alphabet in use."""

    def __init__(self, event_id: int):
        super().__init__(event_id)
        self.event_id = event_id

    def __str__(self) -> str:
        return f"unknown event id {self.event_id}"


def parity_controllable(event_id: int) -> bool:
    """Default controllability convention: odd ids controllable, even not."""
    return event_id % 2 == 1


@dataclass(frozen=True)
class Event:
    """Alphabet symbol: integer id, controllability flag, optional label."""

    id: int
    controllable: bool
    label: Optional[str] = None

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError(f"event id must be non-negative, got {self.id}")

    @classmethod
    def from_id(cls, event_id: int, label: Optional[str] = None,
                controllable: Optional[bool] = None) -> "Event":
        """Build an event, taking controllability from id parity unless overridden."""
        if controllable is None:
            controllable = parity_controllable(event_id)
        return cls(event_id, controllable, label)


@dataclass(frozen=True)
class Alphabet:
    """Finite set of events, indexed by id, kept in ascending id order."""

    events: tuple[Event, ...]
    _by_id: Mapping[int, Event] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_id: dict[int, Event] = {}
        for ev in self.events:
            if ev.id in by_id:
                raise ValueError(f"duplicate event id {ev.id} in alphabet")
            by_id[ev.id] = ev
        object.__setattr__(self, "events",
                           tuple(sorted(self.events, key=lambda e: e.id)))
        object.__setattr__(self, "_by_id", by_id)

    @classmethod
    def of(cls, events: Iterable[Event]) -> "Alphabet":
        return cls(tuple(events))

    @classmethod
    def from_ids(cls, ids: Iterable[int],
                 labels: Optional[Mapping[int, str]] = None) -> "Alphabet":
        """Alphabet over the given ids with parity controllability."""
        labels = labels or {}
        return cls(tuple(Event.from_id(i, labels.get(i)) for i in ids))

    def __contains__(self, event_id: int) -> bool:
        return event_id in self._by_id

    def __getitem__(self, event_id: int) -> Event:
        try:
            return self._by_id[event_id]
        except KeyError:
            raise UnknownEvent(event_id) from None

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    @property
    def ids(self) -> frozenset[int]:
        return frozenset(self._by_id)

    @property
    def controllable_ids(self) -> frozenset[int]:
        return frozenset(e.id for e in self.events if e.controllable)

    @property
    def uncontrollable_ids(self) -> frozenset[int]:
        return frozenset(e.id for e in self.events if not e.controllable)

    def same_events(self, other: "Alphabet") -> bool:
        """True when both alphabets share the same ids and controllability flags."""
        if self.ids != other.ids:
            return False
        return all(self[i].controllable == other[i].controllable for i in self.ids)

    def merged(self, extra: Iterable[Event]) -> "Alphabet":
        """Union with extra events.  Shared ids must agree on controllability;
        labels are kept from self when present."""
        by_id = dict(self._by_id)
        for ev in extra:
            have = by_id.get(ev.id)
            if have is None:
                by_id[ev.id] = ev
            else:
                if have.controllable != ev.controllable:
                    raise ValueError(
                        f"conflicting controllability for event {ev.id}")
                if have.label is None and ev.label is not None:
                    by_id[ev.id] = dataclasses.replace(have, label=ev.label)
        return Alphabet(tuple(by_id.values()))


@dataclass(frozen=True)
class Automaton:
    """Deterministic automaton with a partial transition map.

    States are 0..state_count-1.  ``transitions`` maps (state, event id) to
    the target state; absence of a key means the event is not defined there.
    The ``empty`` flag marks the canonical recognizer of the empty language
    (one unmarked state, no transitions).
    """

    name: str
    alphabet: Alphabet
    state_count: int
    initial: int
    marked: frozenset[int]
    transitions: Mapping[tuple[int, int], int]
    empty: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "marked", frozenset(self.marked))
        object.__setattr__(self, "transitions",
                           MappingProxyType(dict(self.transitions)))
        if self.state_count < 1:
            raise ValueError("state_count must be positive")
        if not 0 <= self.initial < self.state_count:
            raise ValueError(f"initial state {self.initial} out of range")
        for s in self.marked:
            if not 0 <= s < self.state_count:
                raise ValueError(f"marked state {s} out of range")
        for (src, eid), dst in self.transitions.items():
            if eid not in self.alphabet:
                raise UnknownEvent(eid)
            if not 0 <= src < self.state_count:
                raise ValueError(f"transition source {src} out of range")
            if not 0 <= dst < self.state_count:
                raise ValueError(f"transition target {dst} out of range")
        if self.empty and (self.state_count != 1 or self.marked
                           or self.transitions):
            raise ValueError("empty automaton must have one bare state")

    @property
    def transition_count(self) -> int:
        return len(self.transitions)

    @property
    def states(self) -> range:
        return range(self.state_count)

    def step(self, state: int, event_id: int) -> Optional[int]:
        """Target of the transition, or None when undefined."""
        return self.transitions.get((state, event_id))

    def defined_events(self, state: int) -> list[int]:
        """Event ids defined at a state, ascending."""
        return sorted(e for (s, e) in self.transitions if s == state)

    def is_marked(self, state: int) -> bool:
        return state in self.marked

    def renamed(self, name: str) -> "Automaton":
        return dataclasses.replace(self, name=name)


def empty_automaton(alphabet: Alphabet, name: str = "empty") -> Automaton:
    """Canonical recognizer of the empty language over the given alphabet."""
    return Automaton(name, alphabet, 1, 0, frozenset(), {}, empty=True)


class Acceptance(enum.Enum):
    """Verdict of running a string: outside L, in L only, or in Lm."""

    NOT_IN_L = "not-in-L"
    IN_L = "in-L"
    IN_LM = "in-Lm"


@dataclass(frozen=True)
class BoundedLanguage:
    """All strings of length <= horizon, with the marked subset."""

    horizon: int
    strings: frozenset[tuple[int, ...]]
    marked_strings: frozenset[tuple[int, ...]]

    def __contains__(self, s: Sequence[int]) -> bool:
        return tuple(s) in self.strings


@dataclass(frozen=True)
class NonblockingResult:
    """Outcome of a nonblocking check; witness is an accessible state that
    cannot reach any marked state (None when nonblocking)."""

    nonblocking: bool
    witness: Optional[int] = None

    def __bool__(self) -> bool:
        return self.nonblocking


def adjacency(g: Automaton) -> list[list[tuple[int, int]]]:
    """Per-state outgoing (event id, target) lists, events ascending."""
    out: list[list[tuple[int, int]]] = [[] for _ in range(g.state_count)]
    for (src, eid), dst in g.transitions.items():
        out[src].append((eid, dst))
    for lst in out:
        lst.sort()
    return out


def _reachable(g: Automaton) -> set[int]:
    adj = adjacency(g)
    seen = {g.initial}
    queue = deque([g.initial])
    while queue:
        s = queue.popleft()
        for _, t in adj[s]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def _coreachable(g: Automaton) -> set[int]:
    back: list[list[int]] = [[] for _ in range(g.state_count)]
    for (src, _), dst in g.transitions.items():
        back[dst].append(src)
    seen = set(g.marked)
    queue = deque(seen)
    while queue:
        s = queue.popleft()
        for p in back[s]:
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return seen


def _rebuild(g: Automaton, keep: Optional[set[int]]) -> Automaton:
    """Canonical renumbering of the part of g reachable through ``keep``.

    BFS from the initial state over transitions whose endpoints both lie in
    ``keep`` (all states when None).  Returns the canonical empty automaton
    when the initial state itself is excluded.
    """
    if g.empty:
        return g
    if keep is not None and g.initial not in keep:
        return empty_automaton(g.alphabet, g.name)
    adj = adjacency(g)
    index = {g.initial: 0}
    order = [g.initial]
    queue = deque([g.initial])
    while queue:
        s = queue.popleft()
        for _, t in adj[s]:
            if (keep is None or t in keep) and t not in index:
                index[t] = len(order)
                order.append(t)
                queue.append(t)
    transitions = {}
    for s in order:
        for eid, t in adj[s]:
            if keep is None or t in keep:
                transitions[(index[s], eid)] = index[t]
    marked = frozenset(index[s] for s in g.marked if s in index)
    return Automaton(g.name, g.alphabet, len(order), 0, marked, transitions)


def accessible(g: Automaton) -> Automaton:
    """Restriction to states reachable from the initial state, renumbered
    canonically."""
    return _rebuild(g, None)


def coaccessible(g: Automaton) -> Automaton:
    """Restriction to states from which a marked state is reachable.

    The result is renumbered canonically; when the initial state is not
    coreachable the canonical empty automaton is returned.
    """
    if g.empty:
        return g
    return _rebuild(g, _coreachable(g))


def trim(g: Automaton) -> Automaton:
    """accessible(coaccessible(g)); both accessible and coaccessible."""
    return accessible(coaccessible(g))


def is_nonblocking(g: Automaton) -> NonblockingResult:
    """True iff every accessible state is coaccessible.

    When false, the witness is the smallest-id accessible state with no path
    to a marked state.
    """
    if g.empty:
        return NonblockingResult(True)
    bad = _reachable(g) - _coreachable(g)
    if bad:
        return NonblockingResult(False, min(bad))
    return NonblockingResult(True)


def bounded_language(g: Automaton, k: int) -> BoundedLanguage:
    """Enumerate every event string of length <= k traceable from the
    initial state; marked strings are those ending in a marked state."""
    if k < 1:
        raise ValueError("horizon must be a positive integer")
    if k > MAX_HORIZON:
        raise HorizonTooLarge(f"horizon {k} exceeds cap {MAX_HORIZON}")
    if g.empty:
        return BoundedLanguage(k, frozenset(), frozenset())
    adj = adjacency(g)
    strings: list[tuple[int, ...]] = [()]
    marked: list[tuple[int, ...]] = [()] if g.is_marked(g.initial) else []
    frontier: list[tuple[tuple[int, ...], int]] = [((), g.initial)]
    for _ in range(k):
        nxt: list[tuple[tuple[int, ...], int]] = []
        for s, state in frontier:
            for eid, t in adj[state]:
                s2 = s + (eid,)
                strings.append(s2)
                if g.is_marked(t):
                    marked.append(s2)
                nxt.append((s2, t))
        frontier = nxt
        if not frontier:
            break
    return BoundedLanguage(k, frozenset(strings), frozenset(marked))


def accepts(g: Automaton, s: Sequence[int]) -> Acceptance:
    """Run a string: NOT_IN_L when a step is undefined, IN_LM when it ends
    marked, IN_L otherwise.  Raises UnknownEvent for ids outside the
    alphabet."""
    for eid in s:
        if eid not in g.alphabet:
            raise UnknownEvent(eid)
    if g.empty:
        return Acceptance.NOT_IN_L
    state = g.initial
    for eid in s:
        nxt = g.step(state, eid)
        if nxt is None:
            return Acceptance.NOT_IN_L
        state = nxt
    return Acceptance.IN_LM if g.is_marked(state) else Acceptance.IN_L
