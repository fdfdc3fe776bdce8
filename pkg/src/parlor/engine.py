"""The dialogue manager: arbitration, candidate ranking, and turn production.

Either side can redirect the conversation. User intents (topic, story, game,
stop requests) preempt the active activity in a single turn; the system
switches only when the active module reports exhaustion, walking a fixed
ladder: a topic-related game, then a story, then trivia and opinion prompts,
then the search module's last-resort ladder. Every system turn carries a
signature naming its content source and activity, and no internal failure is
ever surfaced to the user; everything degrades to the fallback ladder.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Sequence

from . import chitchat, flows, games, search, stories
from .content import ContentItem, ContentStore, Genre
from .nlu import Gazetteer, IntentKind, Lexicon, NluResult, UserUtterance, analyze
from .search import KnowledgeProvider
from .text import normalize, overlap_ratio, word_count
from .turns import Activity, Candidate, Expects, Signature, SystemTurn, Tier

logger = logging.getLogger(__name__)

FLOW_DONE = "__exhausted__"
RESTATE_PROMPT = "Sorry, I didn't catch that. Could you say that again?"
_REDIRECT = " What would you like to talk about instead?"

_GAME_GENRES = (Genre.WOULD_YOU_RATHER, Genre.HYPOTHETICAL, Genre.RIDDLE, Genre.JOKE)
_CHAT_GENRES = (Genre.TRIVIA, Genre.FACT, Genre.PROMPT)


@dataclass(frozen=True)
class EngineConfig:
    """Tunable weights and thresholds; defaults favor novelty."""

    w_salience: float = 1.0
    w_novelty: float = 2.0
    w_redundancy: float = 1.0
    w_verbosity: float = 0.5
    verbosity_cap: int = 80
    restate_threshold: float = 0.45
    max_consecutive_restates: int = 2
    seed: int = 0
    bot_name: str = "Parlor"
    max_sessions: int = 64


@dataclass
class DialogueContext:
    """Everything one session knows about its own conversation."""

    session_id: str
    active_activity: Activity | None = None
    topic_stack: list[str] = field(default_factory=list)
    focus_entities: list[str] = field(default_factory=list)
    used_content_ids: set[str] = field(default_factory=set)
    flow_positions: dict[str, str] = field(default_factory=dict)
    turn_index: int = 0
    started_at: float = 0.0
    last_turn_at: float = 0.0
    # Plumbing beyond the core fields:
    consecutive_restates: int = 0
    recent_system_texts: list[str] = field(default_factory=list)
    pending_offer: str | None = None
    topic_offer_history: list[str] = field(default_factory=list)
    followed_up_keywords: set[str] = field(default_factory=set)
    opinions_given: set[str] = field(default_factory=set)
    game_state: games.GameState | None = None
    story_state: stories.StoryState | None = None


class DecisionKind(Enum):
    CONTINUE = "continue_active"
    SWITCH = "switch_to"
    ANSWER = "answer_query"
    STOP = "stop_active"
    FALLBACK = "fallback"


@dataclass(frozen=True)
class Decision:
    kind: DecisionKind
    activity: Activity | None = None
    topic: str | None = None


def arbitrate(context: DialogueContext, nlu: NluResult) -> Decision:
    """Decide who serves this turn.

    User switch intents preempt whatever is active. An entity query routes to
    search without abandoning the active activity, except during a story,
    where it interrupts (the story module wraps up, then the query is
    answered). With nothing active, an affirmative consumes a pending topic
    offer, a mentioned topic opens chit-chat, and anything else falls back.
    """
    kind = nlu.intent.kind
    head = context.topic_stack[0] if context.topic_stack else None

    if kind is IntentKind.STOP_REQUEST:
        return Decision(DecisionKind.STOP)
    if kind is IntentKind.ENTITY_QUERY:
        if context.active_activity is Activity.STORYTELLING and context.story_state:
            return Decision(DecisionKind.CONTINUE)
        return Decision(DecisionKind.ANSWER)
    if kind is IntentKind.TOPIC_REQUEST:
        return Decision(DecisionKind.SWITCH, Activity.CHITCHAT, nlu.intent.topic)
    if kind is IntentKind.STORY_REQUEST:
        return Decision(DecisionKind.SWITCH, Activity.STORYTELLING, nlu.intent.topic or head)
    if kind is IntentKind.GAME_REQUEST:
        return Decision(DecisionKind.SWITCH, Activity.GAMES, nlu.intent.topic or head)
    if context.active_activity is None and context.pending_offer and kind is IntentKind.AFFIRM:
        return Decision(DecisionKind.SWITCH, Activity.CHITCHAT, context.pending_offer)
    if context.active_activity is not None:
        return Decision(DecisionKind.CONTINUE)
    if nlu.topics:
        return Decision(DecisionKind.SWITCH, Activity.CHITCHAT, nlu.topics[0])
    return Decision(DecisionKind.FALLBACK)


def rank_candidates(candidates: Sequence[Candidate], config: EngineConfig | None = None) -> list[Candidate]:
    """Order candidates by tier, then weighted score, then source id.

    Within a tier the total is w_s*salience + w_n*novelty - w_r*redundancy -
    w_v*verbosity, descending; ties break on ascending source id. Scaling all
    four weights by a positive constant cannot change the order.
    """
    if not candidates:
        raise ValueError("rank requires at least one candidate")
    cfg = config or EngineConfig()

    def key(c: Candidate) -> tuple:
        total = (
            cfg.w_salience * c.salience
            + cfg.w_novelty * c.novelty
            - cfg.w_redundancy * c.redundancy_penalty
            - cfg.w_verbosity * c.verbosity_penalty
        )
        return (int(c.tier), -total, c.signature.source_id)

    return sorted(candidates, key=key)


def make_candidate(
    text: str,
    source_id: str,
    activity: Activity,
    tier: Tier,
    context: DialogueContext,
    config: EngineConfig,
    topics: Iterable[str] = (),
    entity_forms: Iterable[str] = (),
) -> Candidate:
    """Compute the score components for one potential turn."""
    stack = set(context.topic_stack)
    focus = {normalize(e) for e in context.focus_entities}
    salience = float(len(stack & set(topics)) + len(focus & set(entity_forms)))
    novelty = 0.0 if source_id in context.used_content_ids else 1.0
    redundancy = overlap_ratio(text, context.recent_system_texts[-3:])
    over = word_count(text) - config.verbosity_cap
    verbosity_penalty = max(0.0, over / config.verbosity_cap)
    return Candidate(
        text=text,
        signature=Signature(source_id, activity),
        tier=tier,
        salience=salience,
        novelty=novelty,
        redundancy_penalty=redundancy,
        verbosity_penalty=verbosity_penalty,
    )


class Engine:
    """One engine serves many sessions; all shared state is immutable.

    A DialogueContext belongs to exactly one session and calls into
    `next_turn` for that context must be externally serialized.
    """

    def __init__(
        self,
        store: ContentStore,
        config: EngineConfig | None = None,
        providers: Sequence[KnowledgeProvider] | None = None,
        lexicon: Lexicon | None = None,
    ):
        self.store = store
        self.config = config or EngineConfig()
        self.providers: tuple[KnowledgeProvider, ...] = (
            tuple(providers) if providers is not None else (store.kb,)
        )
        self.lexicon = lexicon or Lexicon.default()
        self.gazetteer: Gazetteer = store.gazetteer()
        self.suggestions = search.suggest_topics(store.registry, self.config.seed)
        self._predicates: flows.PredicateTable = {
            "has_unused_trivia": self._has_unused_trivia,
        }

    # ------------------------------------------------------------- sessions

    def new_context(self, session_id: str, now: float | None = None) -> DialogueContext:
        now = time.time() if now is None else now
        return DialogueContext(session_id=session_id, started_at=now, last_turn_at=now)

    def greeting(self, context: DialogueContext) -> SystemTurn:
        """Introduce the engine and offer three seed-deterministic topics."""
        a, b, c = (t.lower() for t in self.suggestions)
        text = (
            f"Hi! This is {self.config.bot_name}. I can talk to you about things "
            f"you are interested in. Such as {a}, {b}, or {c}. "
            f"Want to talk about {a}?"
        )
        context.pending_offer = self.suggestions[0]
        context.topic_offer_history.extend(self.suggestions)
        turn = SystemTurn(
            text=text,
            signature=Signature("session_greeting", Activity.SEARCH),
            expects=Expects.YES_NO,
            suggested_topics=tuple(self.suggestions),
        )
        self._remember(context, turn)
        return turn

    def analyze(self, utterance: UserUtterance) -> NluResult:
        return analyze(
            utterance,
            self.store.registry,
            self.gazetteer,
            self.lexicon,
            self.config.restate_threshold,
        )

    # ------------------------------------------------------------ main loop

    def next_turn(self, context: DialogueContext, nlu: NluResult) -> tuple[SystemTurn, DialogueContext]:
        """Produce exactly one system turn and update the context."""
        now = time.time()
        context.turn_index += 1

        if nlu.needs_restate:
            turn = self._restate(context, nlu)
            self._remember(context, turn)
            context.last_turn_at = now
            return turn, context

        context.consecutive_restates = 0
        decision = arbitrate(context, nlu)
        context.pending_offer = None
        self._absorb(context, nlu)
        try:
            turn = self._dispatch(decision, context, nlu)
        except Exception:
            logger.exception("turn production failed; degrading to fallback")
            turn = self._fallback(context, nlu)
        self._remember(context, turn)
        context.last_turn_at = now
        return turn, context

    # ----------------------------------------------------------- dispatch

    def _dispatch(self, decision: Decision, context: DialogueContext, nlu: NluResult) -> SystemTurn:
        if decision.kind is DecisionKind.STOP:
            return self._stop_active(context, nlu)
        if decision.kind is DecisionKind.ANSWER:
            return self._answer(context, nlu)
        if decision.kind is DecisionKind.SWITCH:
            prefix = self._leave_active(context)
            turn = self._enter(decision.activity, decision.topic, context, nlu)
            if prefix:
                turn.text = f"{prefix}{turn.text}"
            return turn
        if decision.kind is DecisionKind.CONTINUE:
            return self._continue_active(context, nlu)
        return self._fallback(context, nlu)

    def _absorb(self, context: DialogueContext, nlu: NluResult) -> None:
        for topic in reversed(nlu.topics):
            if topic in context.topic_stack:
                context.topic_stack.remove(topic)
            context.topic_stack.insert(0, topic)
        for entity in reversed(nlu.entities):
            if entity in context.focus_entities:
                context.focus_entities.remove(entity)
            context.focus_entities.insert(0, entity)
        del context.focus_entities[8:]

    def _remember(self, context: DialogueContext, turn: SystemTurn) -> None:
        context.recent_system_texts.append(turn.text)
        del context.recent_system_texts[:-3]

    def _consume(self, context: DialogueContext, source_id: str) -> None:
        context.used_content_ids.add(source_id)

    # ----------------------------------------------------------- restate

    def _restate(self, context: DialogueContext, nlu: NluResult) -> SystemTurn:
        context.consecutive_restates += 1
        if context.consecutive_restates > self.config.max_consecutive_restates:
            context.consecutive_restates = 0
            context.active_activity = None
            context.game_state = None
            context.story_state = None
            return search.fallback_turn(
                context, nlu, self.store.kb, self.store.registry, self.providers, "topic_menu"
            )
        activity = context.active_activity or Activity.SEARCH
        return SystemTurn(
            text=RESTATE_PROMPT,
            signature=Signature("restate_prompt", activity),
            expects=Expects.OPEN,
        )

    # ------------------------------------------------------------ answer

    def _answer(self, context: DialogueContext, nlu: NluResult) -> SystemTurn:
        query = nlu.intent.query or nlu.normalized_text
        answer = search.answer_query(query, self.providers, nlu.entities)
        if answer is not None:
            self._consume(context, answer.source_id)
            return SystemTurn(
                text=answer.answer_text,
                signature=Signature(answer.source_id, Activity.SEARCH),
            )
        return self._fallback(context, nlu, rung_hint="article_first_sentence", clear_active=False)

    def _fallback(
        self,
        context: DialogueContext,
        nlu: NluResult,
        rung_hint: str | None = None,
        clear_active: bool = True,
    ) -> SystemTurn:
        if clear_active:
            context.active_activity = None
            context.game_state = None
            context.story_state = None
        return search.fallback_turn(
            context, nlu, self.store.kb, self.store.registry, self.providers, rung_hint
        )

    # -------------------------------------------------------------- stop

    def _stop_active(self, context: DialogueContext, nlu: NluResult) -> SystemTurn:
        active = context.active_activity
        context.active_activity = None
        if active is Activity.STORYTELLING and context.story_state is not None:
            source = context.story_state.story_id
            context.story_state = None
            return SystemTurn(
                text=stories.WRAP_UP + _REDIRECT,
                signature=Signature(source, Activity.STORYTELLING),
            )
        if active is Activity.GAMES and context.game_state is not None:
            source = context.game_state.item_id
            context.game_state = None
            return SystemTurn(
                text="Alright, game over for now." + _REDIRECT,
                signature=Signature(source, Activity.GAMES),
            )
        if active is Activity.CHITCHAT:
            return SystemTurn(
                text="Okay, we can set that aside." + _REDIRECT,
                signature=Signature("chitchat_exit", Activity.CHITCHAT),
            )
        return self._fallback(context, nlu)

    # ------------------------------------------------------------ switch

    def _leave_active(self, context: DialogueContext) -> str:
        """Clear the active activity; a story in flight earns a wrap-up prefix."""
        prefix = ""
        if (
            context.active_activity is Activity.STORYTELLING
            and context.story_state is not None
            and context.story_state.active
        ):
            prefix = stories.WRAP_UP + " "
        context.active_activity = None
        context.game_state = None
        context.story_state = None
        return prefix

    def _enter(
        self,
        activity: Activity | None,
        topic: str | None,
        context: DialogueContext,
        nlu: NluResult,
    ) -> SystemTurn:
        if activity is Activity.CHITCHAT:
            return self._enter_chitchat(context, nlu, topic)
        if activity is Activity.STORYTELLING:
            return self._enter_storytelling(context, nlu, topic)
        if activity is Activity.GAMES:
            return self._enter_games(context, nlu, topic)
        return self._fallback(context, nlu)

    def _push_topic(self, context: DialogueContext, topic: str) -> None:
        if topic in context.topic_stack:
            context.topic_stack.remove(topic)
        context.topic_stack.insert(0, topic)

    def _enter_chitchat(self, context: DialogueContext, nlu: NluResult, topic: str | None) -> SystemTurn:
        topic = topic or (context.topic_stack[0] if context.topic_stack else None)
        if topic is None:
            return self._fallback(context, nlu)
        self._push_topic(context, topic)
        graph = self.store.flows.get(topic)
        position = context.flow_positions.get(topic)
        if graph is not None and position != FLOW_DONE:
            if position is None:
                step = flows.enter(graph, renderer=self._renderer(context, topic))
            else:
                step = flows.advance(
                    graph, position, nlu, context, self._predicates, self._renderer(context, topic)
                )
            if step is not None:
                return self._flow_turn(context, topic, step)
            context.flow_positions[topic] = FLOW_DONE
        turn = self._chitchat_content(context, topic)
        if turn is not None:
            return turn
        return self._exhaustion_switch(context, nlu, exclude={Activity.CHITCHAT})

    def _flow_turn(self, context: DialogueContext, topic: str, step: flows.NextState) -> SystemTurn:
        context.flow_positions[topic] = step.state.state_id
        context.active_activity = Activity.CHITCHAT
        return SystemTurn(
            text=step.prompt,
            signature=Signature(f"flow:{topic}:{step.state.state_id}", Activity.CHITCHAT),
            expects=step.state.expects,
        )

    def _enter_storytelling(self, context: DialogueContext, nlu: NluResult, topic: str | None) -> SystemTurn:
        topics = (topic,) if topic else tuple(context.topic_stack)
        pool = self.store.stories_for(topics, exclude=context.used_content_ids)
        if not pool:
            turn = self._fallback(context, nlu)
            turn.text = f"I am all out of new stories right now. {turn.text}"
            return turn
        story = pool[0]
        turn, state = stories.begin_story(story, context.used_content_ids)
        self._consume(context, story.id)
        context.story_state = state
        context.active_activity = Activity.STORYTELLING
        if topic:
            self._push_topic(context, topic)
        return turn

    def _enter_games(self, context: DialogueContext, nlu: NluResult, topic: str | None) -> SystemTurn:
        topics = (topic,) if topic else tuple(context.topic_stack)
        pick = self._pick_game(context, topics, require_overlap=False)
        if pick is None:
            turn = self._fallback(context, nlu)
            turn.text = f"I am out of fresh games right now. {turn.text}"
            return turn
        if topic:
            self._push_topic(context, topic)
        return self._pose_game(context, pick)

    # ---------------------------------------------------------- continue

    def _continue_active(self, context: DialogueContext, nlu: NluResult) -> SystemTurn:
        active = context.active_activity
        if active is Activity.CHITCHAT:
            return self._continue_chitchat(context, nlu)
        if active is Activity.GAMES and context.game_state is not None:
            return self._continue_games(context, nlu)
        if active is Activity.STORYTELLING and context.story_state is not None:
            return self._continue_story(context, nlu)
        return self._fallback(context, nlu)

    def _continue_chitchat(self, context: DialogueContext, nlu: NluResult) -> SystemTurn:
        topic = context.topic_stack[0] if context.topic_stack else None
        if topic is None:
            return self._fallback(context, nlu)
        graph = self.store.flows.get(topic)
        position = context.flow_positions.get(topic)
        if graph is not None and position not in (None, FLOW_DONE):
            step = flows.advance(
                graph, position, nlu, context, self._predicates, self._renderer(context, topic)
            )
            if step is not None:
                return self._flow_turn(context, topic, step)
            context.flow_positions[topic] = FLOW_DONE
            return self._exhaustion_switch(context, nlu)
        if nlu.intent.kind is IntentKind.DENY:
            return self._exhaustion_switch(context, nlu, exclude={Activity.CHITCHAT})
        turn = self._chitchat_content(context, topic)
        if turn is not None:
            return turn
        return self._exhaustion_switch(context, nlu, exclude={Activity.CHITCHAT})

    def _continue_games(self, context: DialogueContext, nlu: NluResult) -> SystemTurn:
        state = context.game_state
        assert state is not None
        if state.phase is games.GamePhase.ASKED:
            turn, new_state = self._play_current(context, state, nlu)
            context.game_state = new_state
            return turn
        # offered_more
        if nlu.intent.kind is IntentKind.AFFIRM:
            pick = self._pick_game(
                context, tuple(context.topic_stack), require_overlap=False, kinds=(state.kind,)
            )
            if pick is not None:
                return self._pose_game(context, pick, previous=state)
            return self._exhaustion_switch(context, nlu, exclude={Activity.GAMES})
        context.active_activity = None
        context.game_state = None
        turn = self._fallback(context, nlu)
        turn.text = f"Alright. {turn.text}"
        return turn

    def _play_current(
        self, context: DialogueContext, state: games.GameState, nlu: NluResult
    ) -> tuple[SystemTurn, games.GameState]:
        if state.kind is games.GameKind.WOULD_YOU_RATHER:
            return games.play_wyr(self.store.wyr_items[state.item_id], state, nlu)
        if state.kind is games.GameKind.HYPOTHETICAL:
            return games.play_hypothetical(self.store.hypothetical_items[state.item_id], state, nlu)
        if state.kind is games.GameKind.RIDDLE:
            return games.play_riddle(self.store.riddle_items[state.item_id], state, nlu)
        return games.play_joke(self.store.joke_items[state.item_id], state, nlu)

    def _continue_story(self, context: DialogueContext, nlu: NluResult) -> SystemTurn:
        state = context.story_state
        assert state is not None
        story = self.store.stories[state.story_id]
        result = stories.continue_story(story, state, nlu)
        if result.outcome is stories.StoryOutcome.CONTINUED:
            context.story_state = result.state
            return result.turn
        context.story_state = None
        context.active_activity = None
        if result.outcome is stories.StoryOutcome.FINISHED:
            return result.turn
        if result.interrupted:
            follow = self._dispatch(arbitrate(context, nlu), context, nlu)
            follow.text = f"{result.turn.text} {follow.text}"
            return follow
        return result.turn

    # ------------------------------------------------- system-initiated switch

    def _exhaustion_switch(
        self,
        context: DialogueContext,
        nlu: NluResult,
        exclude: set[Activity] | None = None,
    ) -> SystemTurn:
        """The fixed ladder the system walks when the active module runs dry:
        topic-related game, then story, then trivia and prompts, then fallback."""
        excluded = exclude or set()
        topics = tuple(context.topic_stack)
        if Activity.GAMES not in excluded:
            pick = self._pick_game(context, topics, require_overlap=bool(topics))
            if pick is not None:
                return self._pose_game(context, pick)
        if Activity.STORYTELLING not in excluded:
            pool = self.store.stories_for(topics, exclude=context.used_content_ids)
            if topics:
                pool = [s for s in pool if set(s.topics) & set(topics)]
            if pool:
                story = pool[0]
                turn, state = stories.begin_story(story, context.used_content_ids)
                self._consume(context, story.id)
                context.story_state = state
                context.active_activity = Activity.STORYTELLING
                return turn
        if Activity.CHITCHAT not in excluded and topics:
            turn = self._chitchat_content(context, topics[0])
            if turn is not None:
                return turn
        return self._fallback(context, nlu)

    def _pick_game(
        self,
        context: DialogueContext,
        topics: tuple[str, ...],
        require_overlap: bool,
        kinds: tuple[games.GameKind, ...] | None = None,
    ) -> object | None:
        """Best unused game item as a ranked candidate pick, or None."""
        typed_pools: list[tuple[games.GameKind, dict]] = [
            (games.GameKind.WOULD_YOU_RATHER, self.store.wyr_items),
            (games.GameKind.HYPOTHETICAL, self.store.hypothetical_items),
            (games.GameKind.RIDDLE, self.store.riddle_items),
            (games.GameKind.JOKE, self.store.joke_items),
        ]
        candidates: list[Candidate] = []
        by_id: dict[str, object] = {}
        for kind, pool in typed_pools:
            if kinds is not None and kind not in kinds:
                continue
            for item_id, typed in pool.items():
                if item_id in context.used_content_ids:
                    continue
                content = self.store.items[item_id]
                if require_overlap and not (set(content.topics) & set(topics)):
                    continue
                tier = (
                    Tier.HANDCRAFTED_ACTIVE
                    if content.handcrafted_for is Activity.GAMES
                    else Tier.SCORED_CONTENT
                )
                candidates.append(
                    make_candidate(
                        content.text,
                        item_id,
                        Activity.GAMES,
                        tier,
                        context,
                        self.config,
                        topics=content.topics,
                        entity_forms=content.entity_forms(),
                    )
                )
                by_id[item_id] = typed
        if not candidates:
            return None
        best = rank_candidates(candidates, self.config)[0]
        return by_id[best.signature.source_id]

    def _pose_game(
        self,
        context: DialogueContext,
        item: object,
        previous: games.GameState | None = None,
    ) -> SystemTurn:
        if isinstance(item, games.WyrItem):
            turn, state = games.pose_wyr(item)
        elif isinstance(item, games.HypotheticalItem):
            turn, state = games.pose_hypothetical(item)
        elif isinstance(item, games.RiddleItem):
            turn, state = games.pose_riddle(item)
        elif isinstance(item, games.JokeItem):
            turn, state = games.pose_joke(item)
        else:  # pragma: no cover - guarded by _pick_game
            raise TypeError(f"not a game item: {item!r}")
        if previous is not None:
            state = previous.next_item(state.item_id)
        self._consume(context, state.item_id)
        context.game_state = state
        context.active_activity = Activity.GAMES
        return turn

    def _chitchat_content(self, context: DialogueContext, topic: str) -> SystemTurn | None:
        """Ranked pick over the topic's unused prompts, trivia, and facts."""
        pool = self.store.find(
            topics=(topic,), genres=_CHAT_GENRES, exclude=context.used_content_ids
        )
        if pool:
            candidates = []
            for item in pool:
                tier = (
                    Tier.HANDCRAFTED_ACTIVE
                    if item.handcrafted_for is Activity.CHITCHAT
                    else Tier.SCORED_CONTENT
                )
                candidates.append(
                    make_candidate(
                        item.text,
                        item.id,
                        Activity.CHITCHAT,
                        tier,
                        context,
                        self.config,
                        topics=item.topics,
                        entity_forms=item.entity_forms(),
                    )
                )
            best = rank_candidates(candidates, self.config)[0]
            item = self.store.items[best.signature.source_id]
            self._consume(context, item.id)
            context.active_activity = Activity.CHITCHAT
            if item.genre is Genre.PROMPT:
                return SystemTurn(
                    text=item.text,
                    signature=Signature(item.id, Activity.CHITCHAT),
                    expects=Expects.OPEN,
                )
            return chitchat.render_trivia(item)
        result = chitchat.elicit_opinion(topic, self.store, context.used_content_ids)
        if result is not None:
            turn, consumed = result
            self._consume(context, consumed)
            context.active_activity = Activity.CHITCHAT
            return turn
        return None

    # ----------------------------------------------------------- renderer

    def _renderer(self, context: DialogueContext, topic: str) -> flows.Renderer:
        def render(template: str, state: flows.FlowState) -> str | None:
            names = flows.template_fields(template)
            if not names:
                return template
            values: dict[str, str] = {}
            for name in names:
                if name == "topic":
                    values["topic"] = topic.lower()
                elif name == "trivia":
                    item = self._pick_trivia(context, topic)
                    if item is None:
                        return None
                    values["trivia"] = chitchat.render_trivia(item).text
                    self._consume(context, item.id)
                elif name == "entity":
                    if not context.focus_entities:
                        return None
                    values["entity"] = context.focus_entities[0]
                else:
                    return None
            return template.format(**values)

        return render

    def _pick_trivia(self, context: DialogueContext, topic: str) -> ContentItem | None:
        pool = self.store.find(
            topics=(topic,), genres=(Genre.TRIVIA, Genre.FACT), exclude=context.used_content_ids
        )
        if not pool:
            return None
        candidates = [
            make_candidate(
                item.text,
                item.id,
                Activity.CHITCHAT,
                Tier.SCORED_CONTENT,
                context,
                self.config,
                topics=item.topics,
                entity_forms=item.entity_forms(),
            )
            for item in pool
        ]
        best = rank_candidates(candidates, self.config)[0]
        return self.store.items[best.signature.source_id]

    def _has_unused_trivia(self, nlu: NluResult, context: DialogueContext | None) -> bool:
        if context is None or not context.topic_stack:
            return False
        return bool(
            self.store.find(
                topics=(context.topic_stack[0],),
                genres=(Genre.TRIVIA, Genre.FACT),
                exclude=context.used_content_ids,
            )
        )


def engine_with_seed(engine: Engine, seed: int) -> Engine:
    """A sibling engine sharing the store but greeting with a different seed."""
    if seed == engine.config.seed:
        return engine
    return Engine(
        engine.store,
        replace(engine.config, seed=seed),
        engine.providers,
        engine.lexicon,
    )
