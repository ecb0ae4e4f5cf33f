"""Execute a synthesized supervisor over a simulated delivery scenario.

The event loop is strictly serialized.  Each step first offers the
environment a chance to inject an uncontrollable failure (seeded Bernoulli
draw per eligible event, ascending id order); otherwise the executor fires
the controllable event picked by the pipeline policy.  Synthesis only ever
*permits* events, so the "must start" half of every ordering rule lives
here, in the policy's preference for the follower most recently unlocked by
its trigger.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

from .automaton import Automaton
from .scenario import SUCCESS_EVENT, ScenarioCatalog
from .synthesis import ControlData


class DisabledEvent(RuntimeError):
    """A controllable event in the supervisor's disabled set was fired."""

    def __init__(self, event_id: int, state: int):
        self.event_id = event_id
        self.state = state
        super().__init__(f"event {event_id} is disabled at supervisor "
                         f"state {state}")


class UndefinedEvent(RuntimeError):
    """No supervisor transition for the event; for uncontrollables this
    means the plant and supervisor diverged."""

    def __init__(self, event_id: int, state: int):
        self.event_id = event_id
        self.state = state
        super().__init__(f"event {event_id} undefined at supervisor "
                         f"state {state}")


@dataclass(frozen=True)
class ScenarioState:
    """Joint machine configuration after a step."""

    m1: int
    m2: int
    m3: int
    package_delivered: bool = False
    step_count: int = 0


@dataclass(frozen=True)
class TraceRecord:
    step: int
    event_id: int
    label: str
    controllable: bool
    sup_before: int
    sup_after: int
    state: ScenarioState


@dataclass(frozen=True)
class FailureProfile:
    """Per-uncontrollable-event firing probability plus the rng seed.

    ``max_fires`` optionally caps how often each event may fire over a whole
    run (a box that drops once, say); missing entries mean no cap.
    """

    probabilities: Mapping[int, float]
    seed: int
    max_fires: Optional[Mapping[int, int]] = None

    def __post_init__(self) -> None:
        for eid, p in self.probabilities.items():
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability for event {eid} not in [0,1]")
        object.__setattr__(self, "probabilities",
                           MappingProxyType(dict(self.probabilities)))
        if self.max_fires is not None:
            object.__setattr__(self, "max_fires",
                               MappingProxyType(dict(self.max_fires)))


@dataclass(frozen=True)
class EventTrace:
    """Ordered record of a run plus its summary."""

    records: tuple[TraceRecord, ...]
    delivered: bool
    failures_recovered: int
    blocked: bool
    steps: int
    profile: FailureProfile
    max_steps: int

    @property
    def events(self) -> tuple[int, ...]:
        return tuple(r.event_id for r in self.records)

    def serialize(self) -> str:
        """Canonical text form, one record per line:

        step event_id "label" c|u sup_before sup_after m1 m2 m3

        followed by a summary footer.  Byte-identical for identical inputs.
        """
        lines = ["# supcontrol trace v1"]
        parts = [f"seed={self.profile.seed}", f"max_steps={self.max_steps}"]
        for eid in sorted(self.profile.probabilities):
            parts.append(f"fail{eid}={self.profile.probabilities[eid]!r}")
        if self.profile.max_fires:
            for eid in sorted(self.profile.max_fires):
                parts.append(f"cap{eid}={self.profile.max_fires[eid]}")
        lines.append("# " + " ".join(parts))
        for r in self.records:
            flag = "c" if r.controllable else "u"
            lines.append(
                f'{r.step} {r.event_id} "{r.label}" {flag} '
                f"{r.sup_before} {r.sup_after} "
                f"{r.state.m1} {r.state.m2} {r.state.m3}")
        lines.append(
            f"# delivered={'true' if self.delivered else 'false'} "
            f"failures_recovered={self.failures_recovered} "
            f"blocked={'true' if self.blocked else 'false'} "
            f"steps={self.steps}")
        return "\n".join(lines) + "\n"


def executor_step(supervisor: Automaton, control_data: ControlData,
                  state: int, event_id: int) -> int:
    """Advance the supervisor by one event.

    DisabledEvent flags a buggy caller firing an explicitly disabled
    controllable; UndefinedEvent flags any other undefined transition.
    """
    ev = supervisor.alphabet[event_id]
    nxt = supervisor.step(state, event_id)
    if nxt is None:
        if ev.controllable and event_id in control_data.disabled_at(state):
            raise DisabledEvent(event_id, state)
        raise UndefinedEvent(event_id, state)
    return nxt


class PipelinePolicy:
    """Chooses controllable events by delivery-pipeline urgency.

    Tracks each two-state ordering spec; a spec whose trigger fired and has
    not been discharged is *pending*.  Among enabled events, a follower of
    the most recently pending spec wins; ties and idle choices fall back to
    the lowest event id.
    """

    def __init__(self, specs: Sequence[Automaton]):
        self._specs = list(specs)
        self._state = [s.initial for s in specs]
        self._followers = [frozenset(s.defined_events(1)) for s in specs]
        self._pending: list[int] = []

    def observe(self, event_id: int) -> None:
        for i, sp in enumerate(self._specs):
            if event_id not in sp.alphabet:
                continue
            nxt = sp.step(self._state[i], event_id)
            if nxt is None:
                raise RuntimeError(
                    f"event {event_id} violates ordering spec {sp.name}")
            was, self._state[i] = self._state[i], nxt
            if was == 0 and nxt == 1:
                self._pending.append(i)
            elif was == 1 and nxt == 0:
                self._pending.remove(i)

    def choose(self, enabled: Iterable[int]) -> Optional[int]:
        ordered = sorted(set(enabled))
        if not ordered:
            return None
        for i in reversed(self._pending):
            hits = [e for e in ordered if e in self._followers[i]]
            if hits:
                return hits[0]
        return ordered[0]


def choose_controllable(enabled: Iterable[int],
                        policy: Optional[PipelinePolicy] = None) -> Optional[int]:
    """Pick the next controllable event to fire, or None when none is
    enabled.  Without a policy the lowest event id wins."""
    if policy is not None:
        return policy.choose(enabled)
    return min(enabled, default=None)


def _recovery_events(specs: Sequence[Automaton]) -> frozenset[int]:
    """Discharge events of specs triggered by an uncontrollable failure:
    firing one completes a recovery."""
    out: set[int] = set()
    for sp in specs:
        triggers = [e for e in sp.defined_events(0) if sp.step(0, e) == 1]
        if triggers and not sp.alphabet[triggers[0]].controllable:
            out.update(e for e in sp.defined_events(1) if sp.step(1, e) == 0)
    return frozenset(out)


def simulate(catalog: ScenarioCatalog, supervisor: Automaton,
             control_data: ControlData, profile: FailureProfile,
             max_steps: int = 500) -> EventTrace:
    """Run the supervised scenario until delivery, the step budget, or a
    dead supervisor state (blocked; a synthesis defect).

    Identical (seed, profile, max_steps) inputs produce identical traces.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    rng = random.Random(profile.seed)
    machines = catalog.machines
    mstate = [m.initial for m in machines]
    sup = supervisor.initial
    policy = PipelinePolicy(catalog.specs)
    recovery = _recovery_events(catalog.specs)
    unc_ids = sorted(catalog.full_alphabet.uncontrollable_ids)
    fires_left = dict(profile.max_fires) if profile.max_fires else {}

    records: list[TraceRecord] = []
    delivered = False
    blocked = False
    recovered = 0
    steps = 0
    while steps < max_steps:
        steps += 1
        fired: Optional[int] = None
        for u in unc_ids:
            k = catalog.machine_index(u)
            if machines[k].step(mstate[k], u) is None:
                continue
            if u in fires_left and fires_left[u] <= 0:
                continue
            p = profile.probabilities.get(u, 0.0)
            if p > 0.0 and rng.random() < p:
                if u in fires_left:
                    fires_left[u] -= 1
                fired = u
                break
        if fired is None:
            enabled = [e for e in supervisor.defined_events(sup)
                       if supervisor.alphabet[e].controllable]
            fired = choose_controllable(enabled, policy)
        if fired is None:
            if not supervisor.defined_events(sup):
                blocked = True
                break
            continue  # only uncontrollables enabled; wait a step
        before = sup
        sup = executor_step(supervisor, control_data, sup, fired)
        k = catalog.machine_index(fired)
        nxt = machines[k].step(mstate[k], fired)
        if nxt is None:
            raise UndefinedEvent(fired, before)
        mstate[k] = nxt
        policy.observe(fired)
        if fired == SUCCESS_EVENT:
            delivered = True
        if fired in recovery:
            recovered += 1
        ev = supervisor.alphabet[fired]
        records.append(TraceRecord(
            step=len(records),
            event_id=fired,
            label=ev.label or "",
            controllable=ev.controllable,
            sup_before=before,
            sup_after=sup,
            state=ScenarioState(mstate[0], mstate[1], mstate[2],
                                delivered, len(records) + 1),
        ))
        if delivered:
            break
    return EventTrace(tuple(records), delivered, recovered, blocked, steps,
                      profile, max_steps)
