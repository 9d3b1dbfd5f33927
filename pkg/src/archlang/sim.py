"""Deterministic execution of an elaborated architecture.

One global FIFO run queue holds a dispatch ticket per buffered message.
Each step pops one ticket, runs the bound handler (or drops the message)
and routes the handler's sends immediately, in program order.
"""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Union

from archlang.arch import Destination, ElaboratedArchitecture, Endpoint, RoutingTable
from archlang.behavior import (
    EnumValue,
    RuntimeFault,
    RuntimeValue,
    conforms,
    default_value,
    exec_handler,
    literal_value,
)
from archlang.sema import ComponentKind
from archlang.syntax import Stimulus
from archlang.syntax.ast import Direction

Router = Callable[[Endpoint], "tuple[Destination, ...]"]


class EventKind(enum.Enum):
    INJECT = "INJECT"
    DELIVER = "DELIVER"
    FIRE = "FIRE"
    EMIT = "EMIT"
    SYSTEM_OUT = "SYSTEM_OUT"
    DROP = "DROP"


BOUNDARY_KINDS = frozenset({EventKind.INJECT, EventKind.SYSTEM_OUT})


class Verbosity(enum.Enum):
    BOUNDARY = "boundary"
    FULL = "full"


@dataclass(frozen=True)
class TraceEvent:
    kind: EventKind
    instance: tuple[str, ...]
    port: str
    value: RuntimeValue
    step: int

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "kind": self.kind.value,
            "instance": list(self.instance),
            "port": self.port,
            "value": value_json(self.value),
        }


@dataclass(frozen=True)
class RunConfig:
    max_steps: int = 10000
    verbosity: Verbosity = Verbosity.FULL

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


class UsageError(Exception):
    """Bad stimulus: unknown root port or a value of the wrong type."""


class RunError(Exception):
    DIVERGENCE = "DIVERGENCE"
    FAULT = "FAULT"

    def __init__(self, kind: str, message: str, trace: list[TraceEvent],
                 fault: RuntimeFault | None = None):
        super().__init__(message)
        self.kind = kind
        self.trace = trace
        self.fault = fault


def value_json(v: RuntimeValue) -> Union[bool, int, str, dict]:
    if isinstance(v, EnumValue):
        return {"enum": v.type_name, "member": v.member}
    return v


def serialize_trace(events: Iterable[TraceEvent], verbosity: Verbosity = Verbosity.FULL) -> str:
    lines = [
        json.dumps(e.to_json(), ensure_ascii=False)
        for e in events
        if verbosity is Verbosity.FULL or e.kind in BOUNDARY_KINDS
    ]
    return "".join(line + "\n" for line in lines)


class SystemState:
    """Instance states, per-in-port FIFOs and the global run queue."""

    def __init__(self, ea: ElaboratedArchitecture, routing: Union[RoutingTable, Router]):
        self.ea = ea
        self.route: Router = routing.destinations if isinstance(routing, RoutingTable) else routing
        self.states: dict[tuple[str, ...], dict[str, RuntimeValue]] = {}
        self.queues: dict[tuple[tuple[str, ...], str], deque] = {}
        self.run_queue: deque[tuple[tuple[str, ...], str]] = deque()
        self.step_count = 0
        self.trace: list[TraceEvent] = []

        for node in ea.nodes():
            if node.kind is not ComponentKind.BEHAVIORAL:
                continue
            rc = ea.components[node.type_name]
            state = {}
            for v in rc.decl.state_vars:
                if v.initializer is not None:
                    state[v.name] = literal_value(v.initializer)
                else:
                    state[v.name] = default_value(rc.state_types[v.name])
            self.states[node.path] = state
            for p in rc.ports:
                if p.direction is Direction.IN:
                    self.queues[(node.path, p.name)] = deque()

    @property
    def quiescent(self) -> bool:
        return not self.run_queue

    def _record(self, kind: EventKind, path, port: str, value) -> TraceEvent:
        ev = TraceEvent(kind, tuple(path), port, value, self.step_count)
        self.trace.append(ev)
        return ev

    def _deliver(self, origin: Endpoint, value: RuntimeValue) -> None:
        for dest in self.route(origin):
            if dest.boundary:
                self._record(EventKind.SYSTEM_OUT, dest.path, dest.port, value)
            else:
                self.queues[(dest.path, dest.port)].append(value)
                self.run_queue.append((dest.path, dest.port))
                self._record(EventKind.DELIVER, dest.path, dest.port, value)

    def inject(self, port: str, value: RuntimeValue) -> list[TraceEvent]:
        """Feed ``value`` into root in-port ``port``."""
        root = self.ea.components[self.ea.root_type]
        rp = root.port(port)
        if rp is None or rp.direction is not Direction.IN:
            raise UsageError(f"'{port}' is not an incoming port of {self.ea.root_type}")
        if not conforms(value, rp.type) or not self._valid_enum(value):
            raise UsageError(f"value {value_json(value)!r} does not fit port '{port}' of type {rp.type}")
        start = len(self.trace)
        self._record(EventKind.INJECT, (), port, value)
        self._deliver(Endpoint((), port), value)
        return self.trace[start:]

    def _valid_enum(self, value: RuntimeValue) -> bool:
        if not isinstance(value, EnumValue):
            return True
        for rc in self.ea.components.values():
            for en in rc.decl.enums:
                if en.name == value.type_name:
                    return value.member in en.members
        return False

    def step(self) -> list[TraceEvent]:
        """Process the message behind the front dispatch ticket."""
        path, port = self.run_queue.popleft()
        msg = self.queues[(path, port)].popleft()
        self.step_count += 1
        start = len(self.trace)
        rc = self.ea.component_at(path)
        handler = rc.handlers.get(port)
        if handler is None:
            self._record(EventKind.DROP, path, port, msg)
            return self.trace[start:]
        self._record(EventKind.FIRE, path, port, msg)
        try:
            new_state, emissions = exec_handler(handler, msg, self.states[path])
        except RuntimeFault as fault:
            fault.path = path
            raise
        self.states[path] = new_state
        for em in emissions:
            self._record(EventKind.EMIT, path, em.port, em.value)
            self._deliver(Endpoint(path, em.port), em.value)
        return self.trace[start:]


def instantiate(ea: ElaboratedArchitecture, routing: Union[RoutingTable, Router]) -> SystemState:
    return SystemState(ea, routing)


def stimulus_values(stimuli: Iterable[Stimulus]) -> list[tuple[str, RuntimeValue]]:
    return [(s.port, literal_value(s.literal)) for s in stimuli]


@dataclass
class RunResult:
    trace: list[TraceEvent]
    states: dict[tuple[str, ...], dict[str, RuntimeValue]] = field(default_factory=dict)
    steps: int = 0
    pending: int = 0


def run(ea: ElaboratedArchitecture, routing: Union[RoutingTable, Router],
        stimuli: Iterable[tuple[str, RuntimeValue]], cfg: RunConfig = RunConfig()) -> RunResult:
    """Inject each stimulus in turn and run to quiescence before the next one.

    Raises :class:`RunError` on divergence (more than ``cfg.max_steps`` steps)
    or on a runtime fault; the partial trace travels with the error.
    """
    st = SystemState(ea, routing)
    for port, value in stimuli:
        st.inject(port, value)
        while st.run_queue:
            if st.step_count >= cfg.max_steps:
                raise RunError(
                    RunError.DIVERGENCE,
                    f"no quiescence after {cfg.max_steps} steps", st.trace)
            try:
                st.step()
            except RuntimeFault as fault:
                where = "/".join(fault.path) or ea.root_type
                raise RunError(
                    RunError.FAULT,
                    f"{fault.message} in {where}.{fault.handler}", st.trace, fault) from fault
    return RunResult(st.trace, st.states, st.step_count, len(st.run_queue))
