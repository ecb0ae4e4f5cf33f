"""The robot/conveyor package-delivery scenario.

Three machines cooperate: a first-task robot walks to a conveyor and docks,
the conveyor moves a box onto the robot, and a second-task robot carries the
box upstairs.  Eight ordering rules chain the machines into a pipeline; each
rule becomes a two-state enablement automaton (follower events disabled
until the trigger fires, trigger blocked until a follower discharges it).

Controllability follows event-id parity: odd ids are commanded (controllable),
even ids are failures the supervisor can never prevent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .automaton import Alphabet, Automaton, Event, UnknownEvent
from .compose import meet, selfloop, sync_all
from .synthesis import ControlData, condat, supcon

EVENT_LABELS = {
    0: "Robot failed",
    1: "First goal started",
    2: "Box dropped",
    3: "First goal reached",
    4: "Robot failed",
    5: "Docking finished",
    7: "Stopping box",
    9: "Second goal started",
    11: "Second goal reached",
    13: "Success flag",
    15: "Spawn box",
    17: "Error flag",
    19: "Moving box",
    21: "Box is on the robot",
    23: "Error flag",
}

# Event id that completes a delivery and returns machine 3 to idle.
SUCCESS_EVENT = 13

MACHINE1_STATES = ("Idle", "Walking", "Docking", "Fail")
MACHINE2_STATES = ("Idle", "Working", "Fail")
MACHINE3_STATES = ("Idle", "Walking", "StandUp", "Fail", "Success")

# Ordering rules: rule number -> [(name suffix, trigger, followers)].
# Rule 7 covers both robots' failures and is split per machine so each
# failure discharges through its own machine's error flag.
_SPEC_RULES: dict[int, list[tuple[str, int, tuple[int, ...]]]] = {
    1: [("", 5, (19,))],
    2: [("", 19, (7, 2))],
    3: [("", 7, (21,))],
    4: [("", 21, (9, 4))],
    5: [("", 9, (11, 4))],
    6: [("", 11, (13,))],
    7: [("a", 0, (17,)), ("b", 4, (23,))],
    8: [("", 2, (15,))],
}


@dataclass(frozen=True)
class ScenarioCatalog:
    """Everything the pipeline and the simulator need: the three machine
    automata, the ordering-spec automata (unlifted), and the full alphabet."""

    machines: tuple[Automaton, Automaton, Automaton]
    specs: tuple[Automaton, ...]
    full_alphabet: Alphabet

    def machine_index(self, event_id: int) -> int:
        for i, m in enumerate(self.machines):
            if event_id in m.alphabet:
                return i
        raise UnknownEvent(event_id)


class SpecificationUnenforceable(RuntimeError):
    """Synthesis produced an empty supervisor for the scenario."""


def _alphabet(ids: Iterator[int] | tuple[int, ...]) -> Alphabet:
    return Alphabet.of(Event.from_id(i, EVENT_LABELS[i]) for i in ids)


def full_alphabet() -> Alphabet:
    return _alphabet(tuple(sorted(EVENT_LABELS)))


def build_machine1() -> Automaton:
    """First-task robot: idle, walk to the conveyor, dock; may fail while
    moving and recover through its error flag."""
    transitions = {
        (0, 1): 1,   # first goal started
        (1, 3): 2,   # first goal reached
        (1, 0): 3,   # robot failed while walking
        (2, 5): 0,   # docking finished
        (2, 0): 3,   # robot failed while docking
        (3, 17): 0,  # error flag
    }
    return Automaton("machine1", _alphabet((0, 1, 3, 5, 17)), 4, 0,
                     frozenset({0}), transitions)


def build_machine2() -> Automaton:
    """Conveyor belt: move the box onto the robot; may drop it and respawn."""
    transitions = {
        (0, 19): 1,  # moving box
        (1, 7): 0,   # stopping box
        (1, 2): 2,   # box dropped
        (2, 15): 0,  # spawn box
    }
    return Automaton("machine2", _alphabet((2, 7, 15, 19)), 3, 0,
                     frozenset({0}), transitions)


def build_machine3() -> Automaton:
    """Second-task robot: stand up with the box, climb to the second goal,
    flag success; may fail while standing or walking."""
    transitions = {
        (0, 21): 2,  # box is on the robot
        (2, 9): 1,   # second goal started
        (2, 4): 3,   # robot failed while standing up
        (1, 11): 4,  # second goal reached
        (1, 4): 3,   # robot failed while walking
        (4, 13): 0,  # success flag
        (3, 23): 0,  # error flag
    }
    return Automaton("machine3", _alphabet((4, 9, 11, 13, 21, 23)), 5, 0,
                     frozenset({0}), transitions)


def _enablement(name: str, trigger: int, followers: tuple[int, ...]) -> Automaton:
    """Two-state ordering automaton over {trigger} | followers.

    Controllable followers are only defined after the trigger, and the
    trigger cannot re-fire until a follower discharges it.  Uncontrollable
    followers are additionally self-looped at the non-pending state: a rule
    may never block a failure the supervisor cannot prevent, it only uses
    one to discharge a pending stage.
    """
    alphabet = _alphabet(tuple(sorted({trigger, *followers})))
    transitions = {(0, trigger): 1}
    for f in followers:
        transitions[(1, f)] = 0
        if not alphabet[f].controllable:
            transitions[(0, f)] = 0
    return Automaton(name, alphabet, 2, 0, frozenset({0}), transitions)


def build_spec(i: int) -> list[Automaton]:
    """Ordering-spec automata for rule i (1..8); rule 7 yields two."""
    if i not in _SPEC_RULES:
        raise IndexError(f"specification index {i} out of range 1..8")
    return [_enablement(f"spec{i}{suffix}", trigger, followers)
            for suffix, trigger, followers in _SPEC_RULES[i]]


def build_catalog() -> ScenarioCatalog:
    machines = (build_machine1(), build_machine2(), build_machine3())
    ids: set[int] = set()
    for m in machines:
        assert not (ids & m.alphabet.ids), "machine alphabets must be disjoint"
        ids |= m.alphabet.ids
    specs = tuple(s for i in sorted(_SPEC_RULES) for s in build_spec(i))
    alphabet = full_alphabet()
    assert ids == alphabet.ids
    return ScenarioCatalog(machines, specs, alphabet)


def build_plant(catalog: ScenarioCatalog | None = None) -> Automaton:
    """Free behavior: synchronous composition of the three machines."""
    catalog = catalog or build_catalog()
    return sync_all(catalog.machines).renamed("plant")


def lift_spec(spec: Automaton, alphabet: Alphabet) -> Automaton:
    """Self-loop a spec up to the scenario alphabet."""
    extra = [ev for ev in alphabet if ev.id not in spec.alphabet]
    return selfloop(spec, extra)


def build_composite_spec(catalog: ScenarioCatalog | None = None) -> Automaton:
    """Meet of all ordering specs, each lifted to the full alphabet."""
    catalog = catalog or build_catalog()
    lifted = [lift_spec(s, catalog.full_alphabet) for s in catalog.specs]
    composite = lifted[0]
    for s in lifted[1:]:
        composite = meet(composite, s)
    return composite.renamed("espec")


def build_supervisor(
        catalog: ScenarioCatalog | None = None) -> tuple[Automaton, ControlData]:
    """Full pipeline: plant, composite spec, synthesis, control data."""
    catalog = catalog or build_catalog()
    plant = build_plant(catalog)
    spec = build_composite_spec(catalog)
    supervisor = supcon(plant, spec).renamed("supervisor")
    if supervisor.empty:
        raise SpecificationUnenforceable(
            "synthesis returned the empty supervisor")
    return supervisor, condat(plant, supervisor)
