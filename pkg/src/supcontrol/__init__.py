"""Supervisory control toolkit for discrete-event systems.

Model plants and specifications as finite automata, synthesize nonblocking
minimally restrictive supervisors, and execute them in a seeded
discrete-event simulation of a robot/conveyor package-delivery scenario.
"""

from .automaton import (
    Acceptance,
    Alphabet,
    Automaton,
    BoundedLanguage,
    Event,
    HorizonTooLarge,
    MAX_HORIZON,
    NonblockingResult,
    UnknownEvent,
    accepts,
    accessible,
    bounded_language,
    coaccessible,
    empty_automaton,
    is_nonblocking,
    parity_controllable,
    trim,
)
from .compose import (
    AlphabetMismatch,
    AlphabetOverlap,
    ControllabilityConflict,
    meet,
    selfloop,
    sync,
    sync_all,
)
from .synthesis import (
    ControlData,
    ControllabilityVerdict,
    InstanceTooLarge,
    NotControllable,
    check_controllability,
    condat,
    supcon,
    verify_supremal,
)
from .scenario import (
    EVENT_LABELS,
    ScenarioCatalog,
    SpecificationUnenforceable,
    SUCCESS_EVENT,
    build_catalog,
    build_composite_spec,
    build_machine1,
    build_machine2,
    build_machine3,
    build_plant,
    build_spec,
    build_supervisor,
    lift_spec,
)
from .runtime import (
    DisabledEvent,
    EventTrace,
    FailureProfile,
    PipelinePolicy,
    ScenarioState,
    TraceRecord,
    UndefinedEvent,
    choose_controllable,
    executor_step,
    simulate,
)
from .autfile import parse, parse_control_data, serialize, serialize_control_data, to_dot

__all__ = [
    "Acceptance",
    "Alphabet",
    "AlphabetMismatch",
    "AlphabetOverlap",
    "Automaton",
    "BoundedLanguage",
    "ControlData",
    "ControllabilityConflict",
    "ControllabilityVerdict",
    "DisabledEvent",
    "EVENT_LABELS",
    "Event",
    "EventTrace",
    "FailureProfile",
    "HorizonTooLarge",
    "InstanceTooLarge",
    "MAX_HORIZON",
    "NonblockingResult",
    "NotControllable",
    "PipelinePolicy",
    "ScenarioCatalog",
    "ScenarioState",
    "SpecificationUnenforceable",
    "SUCCESS_EVENT",
    "TraceRecord",
    "UndefinedEvent",
    "UnknownEvent",
    "accepts",
    "accessible",
    "bounded_language",
    "build_catalog",
    "build_composite_spec",
    "build_machine1",
    "build_machine2",
    "build_machine3",
    "build_plant",
    "build_spec",
    "build_supervisor",
    "check_controllability",
    "choose_controllable",
    "coaccessible",
    "condat",
    "empty_automaton",
    "executor_step",
    "is_nonblocking",
    "lift_spec",
    "meet",
    "parity_controllable",
    "parse",
    "parse_control_data",
    "selfloop",
    "serialize",
    "serialize_control_data",
    "simulate",
    "supcon",
    "sync",
    "sync_all",
    "to_dot",
    "trim",
    "verify_supremal",
]
