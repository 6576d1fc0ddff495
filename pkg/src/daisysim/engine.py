"""Minimal stock-and-flow simulation core.

Fixed-step explicit Euler integration with a game-mode stepping contract:
advance one step at a time, read any variable between steps, and inject
values into declared exogenous variables before the next step. Every value
is a double-precision float; determinism is bit-exact for identical models
and injection sequences.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

__all__ = [
    "ModelError",
    "SimulationError",
    "VariableDef",
    "StockFlowModel",
    "SimState",
    "stock",
    "flow",
    "aux",
    "const",
    "exogenous",
    "build_model",
    "init_state",
    "inject",
    "step",
    "get_value",
    "set_stock",
    "refresh",
]

# Reserved identifier readable by every expression and via get_value.
TIME = "time"

KINDS = ("stock", "flow", "auxiliary", "constant", "exogenous")


class ModelError(ValueError):
    """Raised when a model definition is structurally invalid."""


class SimulationError(RuntimeError):
    """Raised when a simulation step or read cannot proceed."""


Expression = Callable[[Mapping[str, float]], float]


@dataclass(frozen=True)
class VariableDef:
    """One named element of a stock-and-flow model.

    ``expression`` receives a mapping of variable name -> current value
    (plus the reserved key ``"time"``) and must be a pure function of it.
    ``depends_on`` lists the variable names the expression reads; this is
    what drives validation and evaluation ordering.
    """

    name: str
    kind: str
    init: float | None = None
    expression: Expression | None = None
    depends_on: tuple[str, ...] = ()
    inflows: tuple[str, ...] = ()
    outflows: tuple[str, ...] = ()


def stock(name, init, inflows=(), outflows=()):
    return VariableDef(name, "stock", init=float(init),
                       inflows=tuple(inflows), outflows=tuple(outflows))


def flow(name, expression, depends_on=()):
    return VariableDef(name, "flow", expression=expression,
                       depends_on=tuple(depends_on))


def aux(name, expression, depends_on=()):
    return VariableDef(name, "auxiliary", expression=expression,
                       depends_on=tuple(depends_on))


def const(name, value):
    return VariableDef(name, "constant", init=float(value))


def exogenous(name):
    return VariableDef(name, "exogenous")


@dataclass(frozen=True)
class StockFlowModel:
    """A validated model with a fixed evaluation order for non-stock variables."""

    variables: dict[str, VariableDef]
    dt: float
    eval_order: tuple[str, ...]  # flows and auxiliaries, dependency-ordered

    @property
    def stocks(self) -> tuple[VariableDef, ...]:
        return tuple(v for v in self.variables.values() if v.kind == "stock")

    @property
    def flow_names(self) -> tuple[str, ...]:
        return tuple(n for n, v in self.variables.items() if v.kind == "flow")

    @property
    def exogenous_names(self) -> tuple[str, ...]:
        return tuple(n for n, v in self.variables.items() if v.kind == "exogenous")


@dataclass
class SimState:
    """Current time and values of one simulation instance.

    ``last_flows`` holds the flow values that drove the most recent Euler
    update (empty right after init); stocks satisfy
    S(t+dt) = S(t) + dt * (sum of inflows - sum of outflows) with exactly
    those values.
    """

    model: StockFlowModel
    time: float
    values: dict[str, float]
    last_flows: dict[str, float] = field(default_factory=dict)


class _Values(dict):
    """Value lookup handed to expressions; missing keys raise explicitly."""

    def __missing__(self, key):
        raise SimulationError(
            f"exogenous variable '{key}' read before any value was injected"
        )


def build_model(defs: Iterable[VariableDef], dt: float) -> StockFlowModel:
    """Validate definitions and fix a topological evaluation order.

    Rejects duplicate names, dangling references, kind/field mismatches,
    and dependency cycles that do not pass through a stock.
    """
    defs = list(defs)
    if not defs:
        raise ModelError("model has no variables")
    if dt <= 0:
        raise ModelError(f"dt must be positive, got {dt}")

    variables: dict[str, VariableDef] = {}
    for v in defs:
        if v.name == TIME:
            raise ModelError(f"'{TIME}' is a reserved identifier")
        if not v.name:
            raise ModelError("variable name must be non-empty")
        if v.name in variables:
            raise ModelError(f"duplicate variable '{v.name}'")
        if v.kind not in KINDS:
            raise ModelError(f"'{v.name}': unknown kind '{v.kind}'")
        variables[v.name] = v

    for v in variables.values():
        if v.kind in ("stock", "constant"):
            if v.init is None:
                raise ModelError(f"{v.kind} '{v.name}' needs an init value")
            if v.expression is not None:
                raise ModelError(f"{v.kind} '{v.name}' must not have an expression")
        elif v.kind in ("flow", "auxiliary"):
            if v.expression is None:
                raise ModelError(f"{v.kind} '{v.name}' needs an expression")
            if v.init is not None:
                raise ModelError(f"{v.kind} '{v.name}' must not have an init value")
        else:  # exogenous
            if v.expression is not None or v.init is not None:
                raise ModelError(
                    f"exogenous '{v.name}' must have neither expression nor init"
                )
        if v.kind != "stock" and (v.inflows or v.outflows):
            raise ModelError(f"'{v.name}': only stocks have inflows/outflows")

        for dep in v.depends_on:
            if dep != TIME and dep not in variables:
                raise ModelError(f"'{v.name}' references unknown variable '{dep}'")
        for f in v.inflows + v.outflows:
            if f not in variables:
                raise ModelError(f"stock '{v.name}' references unknown flow '{f}'")
            if variables[f].kind != "flow":
                raise ModelError(
                    f"stock '{v.name}': '{f}' is a {variables[f].kind}, not a flow"
                )

    eval_order = _topological_order(variables)
    return StockFlowModel(variables=variables, dt=float(dt), eval_order=eval_order)


def _topological_order(variables: dict[str, VariableDef]) -> tuple[str, ...]:
    """Kahn's algorithm over flows/auxiliaries, lexicographic tie-break."""
    nodes = sorted(n for n, v in variables.items() if v.kind in ("flow", "auxiliary"))
    users: dict[str, list[str]] = {n: [] for n in nodes}  # edge dep -> user
    indeg = {n: 0 for n in nodes}
    for n in nodes:
        for dep in variables[n].depends_on:
            if dep in users:
                users[dep].append(n)
                indeg[n] += 1
    ready = [n for n in nodes if indeg[n] == 0]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        n = heapq.heappop(ready)
        order.append(n)
        for u in users[n]:
            indeg[u] -= 1
            if indeg[u] == 0:
                heapq.heappush(ready, u)
    if len(order) != len(nodes):
        cycle = _find_cycle(variables, [n for n in nodes if indeg[n] > 0])
        raise ModelError(
            "dependency cycle without a stock: " + " -> ".join(cycle)
        )
    return tuple(order)


def _find_cycle(variables, candidates) -> list[str]:
    """Walk dependencies among the leftover nodes until one repeats."""
    remaining = set(candidates)
    node = min(remaining)
    seen: list[str] = []
    while node not in seen:
        seen.append(node)
        node = next(d for d in sorted(variables[node].depends_on) if d in remaining)
    i = seen.index(node)
    return seen[i:] + [node]


def _evaluate(model: StockFlowModel, values: dict[str, float], t: float) -> dict[str, float]:
    """Evaluate flows/auxiliaries in dependency order into a fresh dict."""
    v = _Values(values)
    v[TIME] = t
    for name in model.eval_order:
        result = float(model.variables[name].expression(v))
        if not math.isfinite(result):
            raise SimulationError(f"variable '{name}' produced a non-finite value ({result})")
        v[name] = result
    out = dict(v)
    del out[TIME]
    return out


def init_state(model: StockFlowModel,
               injections: Mapping[str, float] | None = None) -> SimState:
    """Create the t=0 state: stocks/constants at init, expressions evaluated.

    Exogenous values may be supplied via ``injections``; an expression that
    reads an uninjected exogenous variable raises rather than defaulting.
    """
    values: dict[str, float] = {}
    for name, v in model.variables.items():
        if v.kind in ("stock", "constant"):
            values[name] = v.init
    if injections:
        for name, value in injections.items():
            _check_exogenous(model, name)
            values[name] = float(value)
    values = _evaluate(model, values, 0.0)
    return SimState(model=model, time=0.0, values=values)


def inject(state: SimState, name: str, value: float) -> None:
    """Set an exogenous variable; visible to all expressions from the next
    evaluation onward. Last write wins; the value persists across steps."""
    _check_exogenous(state.model, name)
    state.values[name] = float(value)


def _check_exogenous(model: StockFlowModel, name: str) -> None:
    if name not in model.variables:
        raise SimulationError(f"unknown variable '{name}'")
    kind = model.variables[name].kind
    if kind != "exogenous":
        raise SimulationError(f"cannot inject into '{name}': kind is {kind}, not exogenous")


def step(model: StockFlowModel, state: SimState) -> SimState:
    """Advance one explicit Euler step; returns a new state.

    Flows are evaluated from the pre-step state (including any values
    injected since the last step), stocks are updated with those flow
    values, then everything is re-evaluated at the new time.
    """
    pre = _evaluate(model, state.values, state.time)
    new_values = dict(pre)
    for s in model.stocks:
        delta = (math.fsum(pre[f] for f in s.inflows)
                 - math.fsum(pre[f] for f in s.outflows))
        updated = pre[s.name] + model.dt * delta
        if not math.isfinite(updated):
            raise SimulationError(f"stock '{s.name}' produced a non-finite value ({updated})")
        new_values[s.name] = updated
    new_time = state.time + model.dt
    new_values = _evaluate(model, new_values, new_time)
    flows_used = {f: pre[f] for f in model.flow_names}
    return SimState(model=model, time=new_time, values=new_values, last_flows=flows_used)


def get_value(state: SimState, name: str) -> float:
    """Read a variable (or ``"time"``) from the state; pure."""
    if name == TIME:
        return state.time
    if name not in state.model.variables:
        raise SimulationError(f"unknown variable '{name}'")
    if name not in state.values:
        raise SimulationError(
            f"exogenous variable '{name}' read before any value was injected"
        )
    return state.values[name]


def set_stock(state: SimState, name: str, value: float) -> None:
    """Overwrite a stock in place (coupling-layer reconciliation hook)."""
    v = state.model.variables.get(name)
    if v is None:
        raise SimulationError(f"unknown variable '{name}'")
    if v.kind != "stock":
        raise SimulationError(f"cannot overwrite '{name}': kind is {v.kind}, not stock")
    state.values[name] = float(value)


def refresh(state: SimState) -> None:
    """Re-evaluate flows/auxiliaries at the current time, in place.

    Used after external stock adjustments so that derived variables
    (and the next record) reflect the adjusted stocks.
    """
    state.values = _evaluate(state.model, state.values, state.time)
