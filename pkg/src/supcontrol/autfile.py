"""Plain-text automaton files (.aut), control-data files, and DOT export.

The .aut grammar, one directive per line, sections in this order:

    automaton <name>
    states <N>
    initial <id>
    marked [<id> ...]
    event <id> [c|u] ["label"]     # flag defaults to id parity
    trans <src> <event> <dst>

Lines starting with ``#`` and blank lines are ignored.  ``serialize`` emits
the canonical form (events ascending, transitions sorted by (src, event),
flags always explicit), so serialize(parse(serialize(g))) is a fixpoint.
"""

from __future__ import annotations

import re
from typing import Optional

from .automaton import Alphabet, Automaton, Event, parity_controllable
from .synthesis import ControlData


class ParseError(ValueError):
    """Malformed document; carries the offending 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class AutSyntaxError(ParseError):
    pass


class DuplicateTransition(ParseError):
    pass


class IdOutOfRange(ParseError):
    pass


class UnknownEventInTrans(ParseError):
    pass


_EVENT_RE = re.compile(
    r"^(?P<id>\d+)(?:\s+(?P<flag>[cu])\b)?(?:\s+\"(?P<label>(?:[^\"\\]|\\.)*)\")?\s*$")


def _escape(label: str) -> str:
    return label.replace("\\", "\\\\").replace('"', '\\"')


def _unescape(label: str) -> str:
    return label.replace('\\"', '"').replace("\\\\", "\\")


def serialize(g: Automaton) -> str:
    """Canonical text form of an automaton; byte-stable across platforms."""
    lines = [f"automaton {g.name}", f"states {g.state_count}",
             f"initial {g.initial}"]
    lines.append(("marked " + " ".join(str(s) for s in sorted(g.marked))).rstrip())
    for ev in g.alphabet:
        flag = "c" if ev.controllable else "u"
        if ev.label is None:
            lines.append(f"event {ev.id} {flag}")
        else:
            lines.append(f'event {ev.id} {flag} "{_escape(ev.label)}"')
    for (src, eid), dst in sorted(g.transitions.items()):
        lines.append(f"trans {src} {eid} {dst}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> Automaton:
    """Parse a .aut document; raises a ParseError subclass with the line
    number on any defect."""
    name: Optional[str] = None
    state_count: Optional[int] = None
    initial: Optional[int] = None
    marked: Optional[list[int]] = None
    events: list[Event] = []
    event_ids: set[int] = set()
    transitions: dict[tuple[int, int], int] = {}

    def want_int(token: str, line_no: int, what: str) -> int:
        if not token.isdigit():
            raise AutSyntaxError(line_no, f"{what} must be a non-negative "
                                          f"integer, got {token!r}")
        return int(token)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "automaton":
            if name is not None:
                raise AutSyntaxError(line_no, "duplicate automaton header")
            if not rest:
                raise AutSyntaxError(line_no, "automaton needs a name")
            name = rest
            continue
        if name is None:
            raise AutSyntaxError(line_no, "expected 'automaton <name>' first")
        if keyword == "states":
            if state_count is not None:
                raise AutSyntaxError(line_no, "duplicate states line")
            state_count = want_int(rest, line_no, "state count")
            if state_count < 1:
                raise AutSyntaxError(line_no, "state count must be positive")
        elif keyword == "initial":
            if state_count is None:
                raise AutSyntaxError(line_no, "states must precede initial")
            if initial is not None:
                raise AutSyntaxError(line_no, "duplicate initial line")
            initial = want_int(rest, line_no, "initial state")
            if initial >= state_count:
                raise IdOutOfRange(line_no, f"initial state {initial} not in "
                                            f"0..{state_count - 1}")
        elif keyword == "marked":
            if initial is None:
                raise AutSyntaxError(line_no, "initial must precede marked")
            if marked is not None:
                raise AutSyntaxError(line_no, "duplicate marked line")
            marked = []
            for tok in rest.split():
                s = want_int(tok, line_no, "marked state")
                if s >= state_count:
                    raise IdOutOfRange(line_no, f"marked state {s} not in "
                                                f"0..{state_count - 1}")
                marked.append(s)
        elif keyword == "event":
            if marked is None:
                raise AutSyntaxError(line_no, "marked must precede events")
            m = _EVENT_RE.match(rest)
            if m is None:
                raise AutSyntaxError(line_no, f"bad event line: {raw.strip()!r}")
            eid = int(m.group("id"))
            if eid in event_ids:
                raise AutSyntaxError(line_no, f"duplicate event id {eid}")
            event_ids.add(eid)
            flag = m.group("flag")
            controllable = (parity_controllable(eid) if flag is None
                            else flag == "c")
            label = m.group("label")
            events.append(Event(eid, controllable,
                                _unescape(label) if label is not None else None))
        elif keyword == "trans":
            if marked is None:
                raise AutSyntaxError(line_no, "marked must precede transitions")
            toks = rest.split()
            if len(toks) != 3:
                raise AutSyntaxError(line_no, "trans needs: src event dst")
            src = want_int(toks[0], line_no, "source state")
            eid = want_int(toks[1], line_no, "event id")
            dst = want_int(toks[2], line_no, "target state")
            if src >= state_count or dst >= state_count:
                raise IdOutOfRange(line_no, f"transition state out of "
                                            f"0..{state_count - 1}")
            if eid not in event_ids:
                raise UnknownEventInTrans(line_no, f"event {eid} has no "
                                                   f"event line")
            if (src, eid) in transitions:
                raise DuplicateTransition(line_no, f"duplicate transition "
                                                   f"({src}, {eid})")
            transitions[(src, eid)] = dst
        else:
            raise AutSyntaxError(line_no, f"unknown directive {keyword!r}")

    last = len(text.splitlines())
    if name is None:
        raise AutSyntaxError(max(last, 1), "missing automaton header")
    if state_count is None or initial is None or marked is None:
        raise AutSyntaxError(max(last, 1),
                             "missing states/initial/marked line")
    empty = state_count == 1 and not marked and not transitions
    return Automaton(name, Alphabet.of(events), state_count, initial,
                     frozenset(marked), transitions, empty=empty)


def serialize_control_data(cd: ControlData, name: str,
                           state_count: int) -> str:
    """Canonical control-data table: one line per supervisor state."""
    lines = [f"condat {name}", f"states {state_count}"]
    for s in range(state_count):
        ids = " ".join(str(e) for e in sorted(cd.disabled_at(s)))
        lines.append(f"state {s} disable {ids}".rstrip())
    return "\n".join(lines) + "\n"


def parse_control_data(text: str) -> ControlData:
    disabled: dict[int, frozenset[int]] = {}
    state_count: Optional[int] = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if toks[0] == "condat":
            continue
        if toks[0] == "states" and len(toks) == 2 and toks[1].isdigit():
            state_count = int(toks[1])
            continue
        if toks[0] != "state" or len(toks) < 3 or toks[2] != "disable":
            raise AutSyntaxError(line_no, f"bad condat line: {line!r}")
        if not toks[1].isdigit() or not all(t.isdigit() for t in toks[3:]):
            raise AutSyntaxError(line_no, "condat ids must be integers")
        state = int(toks[1])
        if state_count is not None and state >= state_count:
            raise IdOutOfRange(line_no, f"state {state} not in "
                                        f"0..{state_count - 1}")
        disabled[state] = frozenset(int(t) for t in toks[3:])
    return ControlData(disabled)


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Automaton) -> str:
    """Graphviz form: doubled circles for marked states, an arrow into the
    initial state, red controllable and green uncontrollable edges."""
    lines = [f"digraph {_dot_quote(g.name)} {{", "  rankdir=LR;",
             "  __start [shape=point, width=0.0, label=\"\"];",
             f"  __start -> q{g.initial};"]
    for s in g.states:
        shape = "doublecircle" if g.is_marked(s) else "circle"
        lines.append(f'  q{s} [shape={shape}, label="{s}"];')
    for (src, eid), dst in sorted(g.transitions.items()):
        ev = g.alphabet[eid]
        text = f"{eid}:{ev.label}" if ev.label else str(eid)
        color = "red" if ev.controllable else "green"
        lines.append(f"  q{src} -> q{dst} [label={_dot_quote(text)}, "
                     f"color={color}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
