"""Per-topic dialogue state graphs with ordered, condition-guarded transitions.

A graph is a map of states; each state carries a prompt template and an
ordered transition list. Advancing evaluates the current state's conditions
against the latest understanding result, follows the first match, and renders
the target state's prompt. A state with no matching transition and no default
exhausts the flow, handing control back to the dialogue manager.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from string import Formatter
from typing import TYPE_CHECKING, Callable, Mapping

from .nlu import IntentKind, NluResult
from .text import contains_phrase
from .turns import Expects

if TYPE_CHECKING:  # pragma: no cover
    from .engine import DialogueContext

# Predicate names a graph may reference; callables are bound by the engine.
KNOWN_PREDICATES = frozenset({"has_unused_trivia"})

PredicateTable = Mapping[str, Callable[[NluResult, "DialogueContext | None"], bool]]
Renderer = Callable[[str, "FlowState"], "str | None"]


class FlowError(ValueError):
    """A graph failed validation or was advanced from an invalid position."""


class ConditionKind(str, Enum):
    KEYWORD_MATCH = "keywords"
    INTENT_IS = "intent"
    ENTITY_PRESENT = "entity_present"
    CALLABLE_RESULT = "predicate"
    DEFAULT = "default"


@dataclass(frozen=True)
class Condition:
    kind: ConditionKind
    keywords: frozenset[str] = frozenset()
    intent_kind: IntentKind | None = None
    predicate: str = ""

    @classmethod
    def parse(cls, spec: str) -> "Condition":
        """Parse the compact pack encoding.

        Forms: "default" | "entity_present" | "intent:<kind>" |
        "keywords:a,b,c" | "predicate:<name>".
        """
        head, _, rest = spec.partition(":")
        head = head.strip()
        if head == "default":
            return cls(ConditionKind.DEFAULT)
        if head == "entity_present":
            return cls(ConditionKind.ENTITY_PRESENT)
        if head == "intent":
            return cls(ConditionKind.INTENT_IS, intent_kind=IntentKind(rest.strip()))
        if head == "keywords":
            words = frozenset(w.strip().lower() for w in rest.split(",") if w.strip())
            if not words:
                raise FlowError("keyword condition needs at least one keyword")
            return cls(ConditionKind.KEYWORD_MATCH, keywords=words)
        if head == "predicate":
            name = rest.strip()
            if not name:
                raise FlowError("predicate condition needs a name")
            return cls(ConditionKind.CALLABLE_RESULT, predicate=name)
        raise FlowError(f"unknown condition {spec!r}")

    def encode(self) -> str:
        if self.kind is ConditionKind.KEYWORD_MATCH:
            return f"keywords:{','.join(sorted(self.keywords))}"
        if self.kind is ConditionKind.INTENT_IS:
            return f"intent:{self.intent_kind.value}"  # type: ignore[union-attr]
        if self.kind is ConditionKind.CALLABLE_RESULT:
            return f"predicate:{self.predicate}"
        return self.kind.value

    def matches(
        self,
        nlu: NluResult,
        context: "DialogueContext | None" = None,
        predicates: PredicateTable | None = None,
    ) -> bool:
        if self.kind is ConditionKind.DEFAULT:
            return True
        if self.kind is ConditionKind.KEYWORD_MATCH:
            return any(contains_phrase(nlu.normalized_text, kw) for kw in self.keywords)
        if self.kind is ConditionKind.INTENT_IS:
            return nlu.intent.kind is self.intent_kind
        if self.kind is ConditionKind.ENTITY_PRESENT:
            return bool(nlu.entities)
        fn = (predicates or {}).get(self.predicate)
        return bool(fn(nlu, context)) if fn else False


@dataclass(frozen=True)
class FlowState:
    state_id: str
    prompt_template: str
    expects: Expects = Expects.OPEN
    transitions: tuple[tuple[Condition, str], ...] = ()

    @property
    def default_target(self) -> str | None:
        for cond, target in self.transitions:
            if cond.kind is ConditionKind.DEFAULT:
                return target
        return None


@dataclass(frozen=True)
class FlowGraph:
    topic: str
    start_state_id: str
    states: Mapping[str, FlowState]


@dataclass(frozen=True)
class NextState:
    state: FlowState
    prompt: str


def parse_flow(record: Mapping) -> FlowGraph:
    topic = record.get("topic", "")
    if not topic:
        raise FlowError("flow record is missing a topic")
    states: dict[str, FlowState] = {}
    for raw in record.get("states", ()):
        state_id = raw.get("id", "")
        if not state_id:
            raise FlowError(f"flow {topic!r} has a state without an id")
        if state_id in states:
            raise FlowError(f"flow {topic!r} repeats state id {state_id!r}")
        transitions = tuple(
            (Condition.parse(tr["cond"]), tr["target"]) for tr in raw.get("transitions", ())
        )
        states[state_id] = FlowState(
            state_id=state_id,
            prompt_template=raw.get("prompt", ""),
            expects=Expects(raw.get("expects", "open")),
            transitions=transitions,
        )
    graph = FlowGraph(topic=topic, start_state_id=record.get("start", ""), states=states)
    validate_graph(graph)
    return graph


def encode_flow(graph: FlowGraph) -> dict:
    return {
        "kind": "flow",
        "topic": graph.topic,
        "start": graph.start_state_id,
        "states": [
            {
                "id": s.state_id,
                "prompt": s.prompt_template,
                "expects": s.expects.value,
                "transitions": [{"cond": c.encode(), "target": t} for c, t in s.transitions],
            }
            for s in graph.states.values()
        ],
    }


def validate_graph(graph: FlowGraph, predicate_names: frozenset[str] = KNOWN_PREDICATES) -> None:
    """Reject dangling targets, unreachable states, bad defaults, and an
    inescapable graph (one with no reachable state that can exhaust)."""
    if graph.start_state_id not in graph.states:
        raise FlowError(f"flow {graph.topic!r}: start state {graph.start_state_id!r} missing")
    for state in graph.states.values():
        default_positions = []
        for idx, (cond, target) in enumerate(state.transitions):
            if target not in graph.states:
                raise FlowError(
                    f"flow {graph.topic!r}: state {state.state_id!r} targets missing state {target!r}"
                )
            if cond.kind is ConditionKind.CALLABLE_RESULT and cond.predicate not in predicate_names:
                raise FlowError(
                    f"flow {graph.topic!r}: state {state.state_id!r} uses unknown predicate "
                    f"{cond.predicate!r}"
                )
            if cond.kind is ConditionKind.DEFAULT:
                default_positions.append(idx)
        if len(default_positions) > 1:
            raise FlowError(
                f"flow {graph.topic!r}: state {state.state_id!r} has two default transitions"
            )
        if default_positions and default_positions[0] != len(state.transitions) - 1:
            raise FlowError(
                f"flow {graph.topic!r}: default transition of {state.state_id!r} must be last"
            )

    reachable = _reachable_states(graph)
    unreachable = set(graph.states) - reachable
    if unreachable:
        raise FlowError(
            f"flow {graph.topic!r}: unreachable states {sorted(unreachable)!r}"
        )
    if not any(graph.states[sid].default_target is None for sid in reachable):
        raise FlowError(f"flow {graph.topic!r}: no reachable state can exhaust the flow")


def _reachable_states(graph: FlowGraph) -> set[str]:
    seen = {graph.start_state_id}
    frontier = [graph.start_state_id]
    while frontier:
        state = graph.states[frontier.pop()]
        for _, target in state.transitions:
            if target not in seen:
                seen.add(target)
                frontier.append(target)
    return seen


def template_fields(template: str) -> set[str]:
    return {name for _, name, _, _ in Formatter().parse(template) if name}


def advance(
    graph: FlowGraph,
    position: str,
    nlu: NluResult,
    context: "DialogueContext | None" = None,
    predicates: PredicateTable | None = None,
    renderer: Renderer | None = None,
) -> NextState | None:
    """Follow the first matching transition out of `position`.

    Returns the entered state with its rendered prompt, or None when the flow
    is exhausted (no matching transition, or every renderable successor is
    unresolvable). A target whose prompt cannot be rendered is skipped via its
    own default transition rather than surfacing an error.
    """
    state = graph.states.get(position)
    if state is None:
        raise FlowError(f"flow {graph.topic!r}: position {position!r} is not a state")

    target_id: str | None = None
    for cond, target in state.transitions:
        if cond.matches(nlu, context, predicates):
            target_id = target
            break
    if target_id is None:
        return None

    visited: set[str] = set()
    while target_id is not None and target_id not in visited:
        visited.add(target_id)
        target = graph.states[target_id]
        prompt = _render(target, renderer)
        if prompt is not None:
            return NextState(state=target, prompt=prompt)
        target_id = target.default_target
    return None


def enter(
    graph: FlowGraph,
    state_id: str | None = None,
    renderer: Renderer | None = None,
) -> NextState | None:
    """Render a state directly (the start state by default), skipping
    unresolvable states through their defaults, as `advance` does."""
    target_id: str | None = state_id or graph.start_state_id
    visited: set[str] = set()
    while target_id is not None and target_id not in visited:
        visited.add(target_id)
        target = graph.states.get(target_id)
        if target is None:
            raise FlowError(f"flow {graph.topic!r}: position {target_id!r} is not a state")
        prompt = _render(target, renderer)
        if prompt is not None:
            return NextState(state=target, prompt=prompt)
        target_id = target.default_target
    return None


def _render(state: FlowState, renderer: Renderer | None) -> str | None:
    if renderer is None:
        return state.prompt_template
    return renderer(state.prompt_template, state)
