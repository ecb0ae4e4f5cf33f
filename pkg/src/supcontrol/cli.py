"""Command-line interface over the toolkit.

Exit codes: 0 success, 1 domain verdicts (not controllable, blocking,
blocked simulation), 2 usage or parse errors.  Diagnostics go to stderr,
results to files or stdout.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import autfile, scenario
from .automaton import Automaton, Event, is_nonblocking, parity_controllable
from .compose import meet, selfloop, sync_all
from .runtime import FailureProfile, simulate
from .synthesis import NotControllable, check_controllability, condat, supcon
from .autfile import ParseError


def _load(path: str) -> Automaton:
    return autfile.parse(Path(path).read_text(encoding="utf-8"))


def _emit(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _cmd_info(args) -> int:
    g = _load(args.file)
    verdict = is_nonblocking(g)
    print(f"name: {g.name}")
    print(f"states: {g.state_count}")
    print(f"transitions: {g.transition_count}")
    print(f"marked: {len(g.marked)}")
    print(f"events: {len(g.alphabet)}")
    if g.empty:
        print("empty: yes")
    if verdict:
        print("nonblocking: yes")
        return 0
    print(f"nonblocking: no (witness state {verdict.witness})")
    return 1


def _cmd_trim(args) -> int:
    from .automaton import trim
    _emit(autfile.serialize(trim(_load(args.file))), args.output)
    return 0


def _cmd_meet(args) -> int:
    _emit(autfile.serialize(meet(_load(args.a), _load(args.b))), args.output)
    return 0


def _cmd_sync(args) -> int:
    machines = [_load(f) for f in args.files]
    _emit(autfile.serialize(sync_all(machines)), args.output)
    return 0


def _parse_event_spec(item: str) -> Event:
    """'6' (parity flag), '6u' or '7c' (explicit flag)."""
    item = item.strip()
    flag: Optional[bool] = None
    if item and item[-1] in "cu":
        flag = item[-1] == "c"
        item = item[:-1]
    if not item.isdigit():
        raise argparse.ArgumentTypeError(f"bad event spec {item!r}")
    eid = int(item)
    return Event(eid, parity_controllable(eid) if flag is None else flag)


def _cmd_selfloop(args) -> int:
    extra = [_parse_event_spec(tok) for tok in args.events.split(",") if tok]
    _emit(autfile.serialize(selfloop(_load(args.file), extra)), args.output)
    return 0


def _cmd_supcon(args) -> int:
    plant = _load(args.plant)
    spec = _load(args.spec)
    supervisor = supcon(plant, spec)
    _emit(autfile.serialize(supervisor), args.output)
    if supervisor.empty:
        print("note: supremal controllable sublanguage is empty",
              file=sys.stderr)
    if args.condat:
        try:
            cd = condat(plant, supervisor)
        except NotControllable as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        Path(args.condat).write_text(
            autfile.serialize_control_data(cd, supervisor.name,
                                           supervisor.state_count),
            encoding="utf-8")
    return 0


def _cmd_controllable(args) -> int:
    verdict = check_controllability(_load(args.plant), _load(args.candidate))
    if verdict:
        print("controllable: yes")
        return 0
    s, u = verdict.counterexample
    print("controllable: no")
    print(f"witness: string {'.'.join(map(str, s)) or '(empty)'} "
          f"then uncontrollable {u}")
    return 1


def _cmd_dot(args) -> int:
    _emit(autfile.to_dot(_load(args.file)), args.output)
    return 0


def _cmd_scenario_emit(args) -> int:
    outdir = Path(args.dir)
    outdir.mkdir(parents=True, exist_ok=True)
    catalog = scenario.build_catalog()
    written = []
    for m in catalog.machines:
        written.append((f"{m.name}.aut", autfile.serialize(m)))
    for sp in catalog.specs:
        written.append((f"{sp.name}.aut", autfile.serialize(sp)))
    plant = scenario.build_plant(catalog)
    espec = scenario.build_composite_spec(catalog)
    supervisor, cd = scenario.build_supervisor(catalog)
    written.append(("plant.aut", autfile.serialize(plant)))
    written.append(("espec.aut", autfile.serialize(espec)))
    written.append(("supervisor.aut", autfile.serialize(supervisor)))
    written.append(("supervisor.condat",
                    autfile.serialize_control_data(cd, supervisor.name,
                                                   supervisor.state_count)))
    for fname, text in written:
        (outdir / fname).write_text(text, encoding="utf-8")
    print(f"wrote {len(written)} files to {outdir}")
    return 0


def _cmd_simulate(args) -> int:
    supervisor = _load(args.supervisor)
    cd = autfile.parse_control_data(
        Path(args.condat).read_text(encoding="utf-8"))
    caps = {}
    for eid, cap in ((0, args.cap_0), (2, args.cap_2), (4, args.cap_4)):
        if cap is not None:
            caps[eid] = cap
    profile = FailureProfile(
        probabilities={0: args.fail_0, 2: args.fail_2, 4: args.fail_4},
        seed=args.seed,
        max_fires=caps or None)
    catalog = scenario.build_catalog()
    trace = simulate(catalog, supervisor, cd, profile,
                     max_steps=args.max_steps)
    if args.trace:
        Path(args.trace).write_text(trace.serialize(), encoding="utf-8")
    print(f"delivered={'true' if trace.delivered else 'false'} "
          f"failures_recovered={trace.failures_recovered} "
          f"blocked={'true' if trace.blocked else 'false'} "
          f"steps={trace.steps}")
    return 1 if trace.blocked else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="supcontrol",
        description="Supervisory control toolkit for discrete-event systems")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="report size and nonblocking status")
    p.add_argument("file")
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser("trim", help="accessible and coaccessible part")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_trim)

    p = sub.add_parser("meet", help="language-intersection product")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_meet)

    p = sub.add_parser("sync", help="synchronous composition")
    p.add_argument("files", nargs="+")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_sync)

    p = sub.add_parser("selfloop", help="lift alphabet with self-loops")
    p.add_argument("file")
    p.add_argument("--events", required=True,
                   help="comma-separated ids, optional c/u suffix (e.g. 6,7c)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_selfloop)

    p = sub.add_parser("supcon", help="synthesize the supremal supervisor")
    p.add_argument("plant")
    p.add_argument("spec")
    p.add_argument("-o", "--output")
    p.add_argument("--condat", help="also write the control-data table")
    p.set_defaults(func=_cmd_supcon)

    p = sub.add_parser("controllable",
                       help="check a candidate against a plant")
    p.add_argument("plant")
    p.add_argument("candidate")
    p.set_defaults(func=_cmd_controllable)

    p = sub.add_parser("dot", help="Graphviz export")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_dot)

    p = sub.add_parser("scenario", help="delivery-scenario artifacts")
    scen_sub = p.add_subparsers(dest="scenario_command", required=True)
    pe = scen_sub.add_parser("emit", help="write all scenario automata")
    pe.add_argument("--dir", required=True)
    pe.set_defaults(func=_cmd_scenario_emit)

    p = sub.add_parser("simulate", help="run the supervised delivery scenario")
    p.add_argument("--supervisor", required=True)
    p.add_argument("--condat", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fail-0", type=float, default=0.0)
    p.add_argument("--fail-2", type=float, default=0.0)
    p.add_argument("--fail-4", type=float, default=0.0)
    p.add_argument("--cap-0", type=int, default=None)
    p.add_argument("--cap-2", type=int, default=None)
    p.add_argument("--cap-4", type=int, default=None)
    p.add_argument("--max-steps", type=int, default=500)
    p.add_argument("--trace", help="write the trace file here")
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
