"""Controllability checking, supremal-controllable synthesis, control data.

``supcon`` runs the standard state-deletion fixpoint over the plant/spec
product: delete product states where the plant enables an uncontrollable
event the product does not, re-trim, repeat.  ``verify_supremal`` recomputes
the same fixpoint with naive from-scratch set iteration and compares bounded
languages; it exists purely as a test oracle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Optional

from .automaton import Automaton, bounded_language, empty_automaton
from .compose import require_same_alphabet


class NotControllable(ValueError):
    """An uncontrollable event would have to be disabled."""

    def __init__(self, event_id: int, state: int):
        self.event_id = event_id
        self.state = state
        super().__init__(
            f"uncontrollable event {event_id} undefined at supervisor "
            f"state {state} but enabled by the plant")


class InstanceTooLarge(ValueError):
    """verify_supremal is restricted to small instances."""


@dataclass(frozen=True)
class ControllabilityVerdict:
    """Result of a controllability check.

    The counterexample, present iff not controllable, is a pair (s, u):
    s is in both languages, s.u is in the plant's but not the candidate's.
    """

    controllable: bool
    counterexample: Optional[tuple[tuple[int, ...], int]] = None

    def __bool__(self) -> bool:
        return self.controllable


@dataclass(frozen=True)
class ControlData:
    """Per-supervisor-state set of disabled controllable event ids."""

    disabled: Mapping[int, frozenset[int]]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "disabled",
            MappingProxyType({s: frozenset(v)
                              for s, v in self.disabled.items()}))

    def disabled_at(self, state: int) -> frozenset[int]:
        return self.disabled.get(state, frozenset())


def check_controllability(plant: Automaton,
                          candidate: Automaton) -> ControllabilityVerdict:
    """Walk the plant/candidate product looking for an uncontrollable event
    the plant enables and the candidate does not.  The witness is the
    shortest such string (BFS order, events ascending)."""
    require_same_alphabet(plant.alphabet, candidate.alphabet)
    if plant.empty or candidate.empty:
        return ControllabilityVerdict(True)
    event_ids = sorted(plant.alphabet.ids)
    unc = sorted(plant.alphabet.uncontrollable_ids)
    start = (plant.initial, candidate.initial)
    seen = {start}
    queue: deque[tuple[tuple[int, int], tuple[int, ...]]] = deque(
        [(start, ())])
    while queue:
        (p, c), s = queue.popleft()
        for u in unc:
            if plant.step(p, u) is not None and candidate.step(c, u) is None:
                return ControllabilityVerdict(False, (s, u))
        for eid in event_ids:
            tp, tc = plant.step(p, eid), candidate.step(c, eid)
            if tp is None or tc is None:
                continue
            pair = (tp, tc)
            if pair not in seen:
                seen.add(pair)
                queue.append((pair, s + (eid,)))
    return ControllabilityVerdict(True)


def _product(plant: Automaton, spec: Automaton):
    """Reachable plant/spec pairs with joint transitions and joint marking."""
    event_ids = sorted(plant.alphabet.ids)
    init = (plant.initial, spec.initial)
    pairs = {init}
    trans: dict[tuple[tuple[int, int], int], tuple[int, int]] = {}
    queue = deque([init])
    while queue:
        pair = queue.popleft()
        p, q = pair
        for eid in event_ids:
            tp, tq = plant.step(p, eid), spec.step(q, eid)
            if tp is None or tq is None:
                continue
            target = (tp, tq)
            trans[(pair, eid)] = target
            if target not in pairs:
                pairs.add(target)
                queue.append(target)
    marked = {x for x in pairs
              if plant.is_marked(x[0]) and spec.is_marked(x[1])}
    return init, pairs, trans, marked


def _trim_within(init, alive, trans, marked):
    """Pairs reachable from init and coreachable to a marked pair, with both
    endpoints restricted to ``alive``."""
    if init not in alive:
        return set()
    forward: dict = {}
    backward: dict = {}
    for (src, _), dst in trans.items():
        if src in alive and dst in alive:
            forward.setdefault(src, []).append(dst)
            backward.setdefault(dst, []).append(src)
    reach = {init}
    queue = deque([init])
    while queue:
        x = queue.popleft()
        for t in forward.get(x, ()):
            if t not in reach:
                reach.add(t)
                queue.append(t)
    co = set(marked) & alive
    queue = deque(co)
    while queue:
        x = queue.popleft()
        for t in backward.get(x, ()):
            if t not in co:
                co.add(t)
                queue.append(t)
    return reach & co


def supcon(plant: Automaton, spec: Automaton) -> Automaton:
    """Synthesize the supremal controllable sublanguage supervisor.

    The result is a trim, canonically numbered automaton whose marked
    language is the largest controllable, nonblocking sublanguage of
    Lm(spec) intersected with Lm(plant).  Returns the canonical empty
    automaton when that language is empty.
    """
    require_same_alphabet(plant.alphabet, spec.alphabet)
    name = f"supcon({plant.name},{spec.name})"
    if plant.empty or spec.empty:
        return empty_automaton(plant.alphabet, name)
    unc = sorted(plant.alphabet.uncontrollable_ids)
    init, pairs, trans, marked = _product(plant, spec)
    alive = _trim_within(init, pairs, trans, marked)
    while alive:
        bad = set()
        for x in alive:
            p = x[0]
            for u in unc:
                if plant.step(p, u) is None:
                    continue
                target = trans.get((x, u))
                if target is None or target not in alive:
                    bad.add(x)
                    break
        if not bad:
            break
        alive -= bad
        alive = _trim_within(init, alive, trans, marked)
    if not alive:
        return empty_automaton(plant.alphabet, name)
    return _pairs_to_automaton(name, plant, init, alive, trans, marked)


def _pairs_to_automaton(name, plant, init, alive, trans, marked) -> Automaton:
    """Canonical automaton over a set of product pairs (BFS numbering)."""
    event_ids = sorted(plant.alphabet.ids)
    index = {init: 0}
    order = [init]
    queue = deque([init])
    while queue:
        x = queue.popleft()
        for eid in event_ids:
            t = trans.get((x, eid))
            if t is not None and t in alive and t not in index:
                index[t] = len(order)
                order.append(t)
                queue.append(t)
    transitions = {}
    for x in order:
        for eid in event_ids:
            t = trans.get((x, eid))
            if t is not None and t in alive:
                transitions[(index[x], eid)] = index[t]
    marked_ids = frozenset(index[x] for x in marked if x in index)
    return Automaton(name, plant.alphabet, len(order), 0, marked_ids,
                     transitions)


def condat(plant: Automaton, supervisor: Automaton) -> ControlData:
    """Control data for runtime enforcement: at each supervisor state, the
    controllable plant-enabled events the supervisor leaves undefined.

    Raises NotControllable if an uncontrollable event would need disabling
    (the supervisor is not controllable w.r.t. the plant).
    """
    require_same_alphabet(plant.alphabet, supervisor.alphabet)
    controllable = plant.alphabet.controllable_ids
    disabled: dict[int, frozenset[int]] = {
        s: frozenset() for s in supervisor.states}
    if supervisor.empty:
        pairing = {supervisor.initial: plant.initial}
    else:
        pairing = {}
        queue = deque([(plant.initial, supervisor.initial)])
        seen = {(plant.initial, supervisor.initial)}
        while queue:
            p, s = queue.popleft()
            prior = pairing.get(s)
            if prior is not None and prior != p:
                raise ValueError(
                    f"supervisor state {s} pairs with plant states "
                    f"{prior} and {p}; not a synthesized supervisor")
            pairing[s] = p
            for eid in supervisor.defined_events(s):
                tp = plant.step(p, eid)
                ts = supervisor.step(s, eid)
                if tp is None:
                    raise ValueError(
                        f"supervisor fires event {eid} outside the plant "
                        f"language at state {s}")
                if (tp, ts) not in seen:
                    seen.add((tp, ts))
                    queue.append((tp, ts))
    for s, p in pairing.items():
        off = set()
        for eid in plant.defined_events(p):
            if supervisor.step(s, eid) is not None:
                continue
            if eid in controllable:
                off.add(eid)
            else:
                raise NotControllable(eid, s)
        disabled[s] = frozenset(off)
    return ControlData(disabled)


def verify_supremal(plant: Automaton, spec: Automaton, result: Automaton,
                    k: int) -> bool:
    """Test oracle: recompute the supremal controllable nonblocking language
    by naive whole-set iteration over the full product state space, then
    compare bounded languages with ``result`` at horizon k.

    Restricted to small instances; raises InstanceTooLarge otherwise.
    """
    if plant.state_count > 8 or spec.state_count > 6:
        raise InstanceTooLarge("plant <= 8 and spec <= 6 states required")
    if len(plant.alphabet) > 6:
        raise InstanceTooLarge("at most 6 events supported")
    if k > 8:
        raise InstanceTooLarge("horizon capped at 8")
    require_same_alphabet(plant.alphabet, spec.alphabet)
    require_same_alphabet(plant.alphabet, result.alphabet)
    event_ids = sorted(plant.alphabet.ids)
    unc = sorted(plant.alphabet.uncontrollable_ids)

    if plant.empty or spec.empty:
        good: set[tuple[int, int]] = set()
    else:
        def prod_step(x, eid):
            tp = plant.step(x[0], eid)
            tq = spec.step(x[1], eid)
            if tp is None or tq is None:
                return None
            return (tp, tq)

        init = (plant.initial, spec.initial)
        good = {(p, q) for p in plant.states for q in spec.states}
        while True:
            ctrl_ok = {
                x for x in good
                if all(plant.step(x[0], u) is None
                       or prod_step(x, u) in good for u in unc)}
            reach = {init} if init in ctrl_ok else set()
            while True:
                grown = reach | {
                    t for x in reach for e in event_ids
                    if (t := prod_step(x, e)) is not None and t in ctrl_ok}
                if grown == reach:
                    break
                reach = grown
            co = {x for x in ctrl_ok
                  if plant.is_marked(x[0]) and spec.is_marked(x[1])}
            while True:
                grown = co | {
                    x for x in ctrl_ok for e in event_ids
                    if (t := prod_step(x, e)) is not None and t in co}
                if grown == co:
                    break
                co = grown
            new_good = reach & co
            if new_good == good:
                break
            good = new_good

    if not good:
        reference = empty_automaton(plant.alphabet, "reference")
    else:
        states = sorted(good)
        index = {x: i for i, x in enumerate(states)}
        transitions = {}
        for x in states:
            for eid in event_ids:
                t = prod_step(x, eid)
                if t is not None and t in good:
                    transitions[(index[x], eid)] = index[t]
        marked = frozenset(index[x] for x in states
                           if plant.is_marked(x[0]) and spec.is_marked(x[1]))
        reference = Automaton("reference", plant.alphabet, len(states),
                              index[init], marked, transitions)
    ref = bounded_language(reference, k)
    got = bounded_language(result, k)
    return (ref.strings == got.strings
            and ref.marked_strings == got.marked_strings)
