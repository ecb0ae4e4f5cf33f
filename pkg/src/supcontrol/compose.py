"""Composition operators: self-loop lifting, language meet, synchronous product."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .automaton import (
    Alphabet,
    Automaton,
    Event,
    accessible,
    empty_automaton,
    trim,
)


class AlphabetOverlap(ValueError):
    """Self-loop events already present in the automaton's alphabet."""

    def __init__(self, ids: Iterable[int]):
        self.ids = tuple(sorted(ids))
        super().__init__(f"events already in alphabet: {self.ids}")


class AlphabetMismatch(ValueError):
    """Operands must share one alphabet (same ids, same flags)."""

    def __init__(self, ids: Iterable[int]):
        self.ids = tuple(sorted(ids))
        super().__init__(f"alphabets differ on event ids: {self.ids}")


class ControllabilityConflict(ValueError):
    """A shared event id carries different controllability flags."""

    def __init__(self, ids: Iterable[int]):
        self.ids = tuple(sorted(ids))
        super().__init__(f"conflicting controllability for event ids: {self.ids}")


def require_same_alphabet(a: Alphabet, b: Alphabet) -> None:
    if a.same_events(b):
        return
    diff = set(a.ids ^ b.ids)
    diff.update(i for i in a.ids & b.ids
                if a[i].controllable != b[i].controllable)
    raise AlphabetMismatch(diff)


def selfloop(g: Automaton, extra: Iterable[Event]) -> Automaton:
    """Lift g to a larger alphabet by self-looping every extra event at
    every state.  The language projected back onto the original alphabet is
    unchanged."""
    extra = tuple(extra)
    overlap = [e.id for e in extra if e.id in g.alphabet]
    if overlap:
        raise AlphabetOverlap(overlap)
    if not extra:
        return g
    alphabet = g.alphabet.merged(extra)
    if g.empty:
        return empty_automaton(alphabet, g.name)
    transitions = dict(g.transitions)
    for s in g.states:
        for e in extra:
            transitions[(s, e.id)] = s
    return Automaton(g.name, alphabet, g.state_count, g.initial, g.marked,
                     transitions)


def meet(g1: Automaton, g2: Automaton) -> Automaton:
    """Language-intersection product over one common alphabet.

    A transition exists iff defined in both operands; a pair is marked iff
    both components are.  The result is trimmed and canonically renumbered.
    """
    require_same_alphabet(g1.alphabet, g2.alphabet)
    name = f"meet({g1.name},{g2.name})"
    if g1.empty or g2.empty:
        return empty_automaton(g1.alphabet, name)
    raw = _pair_product(g1, g2, shared_only=True, name=name)
    return trim(raw)


def sync(g1: Automaton, g2: Automaton) -> Automaton:
    """Synchronous composition: shared events move both machines, private
    events move one.  For disjoint alphabets this is the shuffle product.
    Reachable part only, canonically renumbered."""
    shared = g1.alphabet.ids & g2.alphabet.ids
    conflicts = [i for i in shared
                 if g1.alphabet[i].controllable != g2.alphabet[i].controllable]
    if conflicts:
        raise ControllabilityConflict(conflicts)
    alphabet = g1.alphabet.merged(g2.alphabet)
    name = f"sync({g1.name},{g2.name})"
    if g1.empty or g2.empty:
        return empty_automaton(alphabet, name)
    raw = _pair_product(g1, g2, shared_only=False, name=name,
                        alphabet=alphabet)
    return accessible(raw)


def sync_all(machines: Sequence[Automaton]) -> Automaton:
    """Left fold of sync over a non-empty list of automata."""
    if not machines:
        raise ValueError("sync_all needs at least one automaton")
    result = machines[0]
    for g in machines[1:]:
        result = sync(result, g)
    return result


def _pair_product(g1: Automaton, g2: Automaton, shared_only: bool, name: str,
                  alphabet: Alphabet | None = None) -> Automaton:
    """Reachable pair automaton.  With shared_only, every event needs both
    operands (meet); otherwise private events move their owner only (sync)."""
    if alphabet is None:
        alphabet = g1.alphabet
    ids1, ids2 = g1.alphabet.ids, g2.alphabet.ids
    event_ids = sorted(e.id for e in alphabet)
    init = (g1.initial, g2.initial)
    index = {init: 0}
    order = [init]
    queue = deque([init])
    transitions: dict[tuple[int, int], int] = {}
    while queue:
        pair = queue.popleft()
        p, q = pair
        src = index[pair]
        for eid in event_ids:
            in1, in2 = eid in ids1, eid in ids2
            if shared_only or (in1 and in2):
                t1, t2 = g1.step(p, eid), g2.step(q, eid)
                if t1 is None or t2 is None:
                    continue
                target = (t1, t2)
            elif in1:
                t1 = g1.step(p, eid)
                if t1 is None:
                    continue
                target = (t1, q)
            else:
                t2 = g2.step(q, eid)
                if t2 is None:
                    continue
                target = (p, t2)
            if target not in index:
                index[target] = len(order)
                order.append(target)
                queue.append(target)
            transitions[(src, eid)] = index[target]
    marked = frozenset(index[(p, q)] for (p, q) in order
                       if g1.is_marked(p) and g2.is_marked(q))
    return Automaton(name, alphabet, len(order), 0, marked, transitions)
