import random

from helpers import nlu_of
from parlor.engine import (
    Decision,
    DecisionKind,
    DialogueContext,
    Engine,
    EngineConfig,
    FLOW_DONE,
    arbitrate,
)
from parlor.nlu import IntentKind, UserUtterance
from parlor.turns import Activity, Expects

AFFIRM = nlu_of("yes", IntentKind.AFFIRM)
DENY = nlu_of("no", IntentKind.DENY)
UNKNOWN = nlu_of("hmm well")


def fresh(engine: Engine) -> DialogueContext:
    return engine.new_context("test-session")


def run(engine, context, text, confidence=0.95):
    nlu = engine.analyze(UserUtterance(text, confidence))
    turn, _ = engine.next_turn(context, nlu)
    return turn


# ----------------------------------------------------------------- arbitrate


def test_arbitrate_entity_query_keeps_active_chitchat():
    ctx = DialogueContext(session_id="s", active_activity=Activity.CHITCHAT,
                          topic_stack=["Music"])
    decision = arbitrate(ctx, nlu_of("when was x born", IntentKind.ENTITY_QUERY,
                                     query="when was x born"))
    assert decision == Decision(DecisionKind.ANSWER)
    assert ctx.active_activity is Activity.CHITCHAT


def test_arbitrate_topic_request_switches():
    ctx = DialogueContext(session_id="s")
    decision = arbitrate(ctx, nlu_of("dinosaurs", IntentKind.TOPIC_REQUEST,
                                     topic="Dinosaurs", topics=("Dinosaurs",)))
    assert decision == Decision(DecisionKind.SWITCH, Activity.CHITCHAT, "Dinosaurs")


def test_arbitrate_nothing_to_continue_falls_back():
    ctx = DialogueContext(session_id="s")
    assert arbitrate(ctx, UNKNOWN).kind is DecisionKind.FALLBACK


def test_arbitrate_affirm_consumes_pending_offer():
    ctx = DialogueContext(session_id="s", pending_offer="Music")
    decision = arbitrate(ctx, AFFIRM)
    assert decision == Decision(DecisionKind.SWITCH, Activity.CHITCHAT, "Music")


def test_arbitrate_active_continues():
    ctx = DialogueContext(session_id="s", active_activity=Activity.GAMES)
    assert arbitrate(ctx, UNKNOWN).kind is DecisionKind.CONTINUE


def test_arbitrate_story_request_uses_topic_stack_head():
    ctx = DialogueContext(session_id="s", topic_stack=["Science Fiction"])
    decision = arbitrate(ctx, nlu_of("tell me a story", IntentKind.STORY_REQUEST))
    assert decision == Decision(DecisionKind.SWITCH, Activity.STORYTELLING, "Science Fiction")


# ------------------------------------------------------------------ next_turn


def test_restate_prompt_leaves_context_unchanged_except_turn_index(engine):
    ctx = fresh(engine)
    before_topics = list(ctx.topic_stack)
    turn = run(engine, ctx, "mumble mumble", confidence=0.2)
    assert "again" in turn.text.lower()
    assert ctx.turn_index == 1
    assert ctx.topic_stack == before_topics
    assert ctx.used_content_ids == set()


def test_third_consecutive_restate_routes_to_topic_menu(engine):
    ctx = fresh(engine)
    first = run(engine, ctx, "blur", confidence=0.1)
    second = run(engine, ctx, "blur", confidence=0.1)
    third = run(engine, ctx, "blur", confidence=0.1)
    assert first.signature.source_id == "restate_prompt"
    assert second.signature.source_id == "restate_prompt"
    assert third.signature.source_id == "topic_menu"
    assert len(third.suggested_topics) == 3


def test_restate_counter_resets_on_confident_turn(engine):
    ctx = fresh(engine)
    run(engine, ctx, "blur", confidence=0.1)
    run(engine, ctx, "dinosaurs")
    run(engine, ctx, "blur", confidence=0.1)
    turn = run(engine, ctx, "blur", confidence=0.1)
    assert turn.signature.source_id == "restate_prompt"


def test_exhausted_flow_plus_unknown_switches_to_topical_game(engine):
    ctx = fresh(engine)
    ctx.topic_stack = ["Dinosaurs"]
    ctx.active_activity = Activity.CHITCHAT
    ctx.flow_positions["Dinosaurs"] = "more_offer"  # state with no default
    turn, _ = engine.next_turn(ctx, UNKNOWN)
    assert turn.signature.activity is Activity.GAMES
    assert ctx.flow_positions["Dinosaurs"] == FLOW_DONE
    item = engine.store.items[turn.signature.source_id]
    assert "Dinosaurs" in item.topics


def test_stop_request_during_story_wraps_and_clears(engine):
    ctx = fresh(engine)
    run(engine, ctx, "tell me a story")
    assert ctx.active_activity is Activity.STORYTELLING
    story_id = ctx.story_state.story_id
    turn = run(engine, ctx, "stop")
    assert ctx.active_activity is None
    assert ctx.story_state is None
    assert turn.signature.source_id == story_id
    assert turn.signature.activity is Activity.STORYTELLING


def test_user_switch_changes_activity_in_one_turn(engine):
    ctx = fresh(engine)
    run(engine, ctx, "tell me a story")
    assert ctx.active_activity is Activity.STORYTELLING
    turn = run(engine, ctx, "lets talk about dinosaurs")
    assert ctx.active_activity is Activity.CHITCHAT
    assert turn.signature.activity is Activity.CHITCHAT
    # the in-flight story earns a wrap-up prefix in the same turn
    assert turn.text.startswith("Okay, I'll save the rest of the story")


def test_entity_query_answered_then_activity_resumes(engine):
    ctx = fresh(engine)
    run(engine, ctx, "music")
    assert ctx.active_activity is Activity.CHITCHAT
    position = ctx.flow_positions["Music"]
    answer = run(engine, ctx, "when was pablo casals born")
    assert answer.text == "Pau Casals was born on December 29, 1876."
    assert answer.signature.activity is Activity.SEARCH
    assert ctx.active_activity is Activity.CHITCHAT
    assert ctx.flow_positions["Music"] == position  # flow did not move
    follow = run(engine, ctx, "i like classical cello music")
    assert follow.signature.activity is Activity.CHITCHAT


def test_entity_query_mid_story_wraps_then_answers(engine):
    ctx = fresh(engine)
    run(engine, ctx, "tell me a story")
    run(engine, ctx, "yes")
    turn = run(engine, ctx, "when was pablo casals born")
    assert "save the rest of the story" in turn.text
    assert "Pau Casals was born on December 29, 1876." in turn.text
    assert ctx.active_activity is None or ctx.active_activity is not Activity.STORYTELLING


def test_greeting_names_three_topics_and_offers_first(engine):
    ctx = fresh(engine)
    greeting = engine.greeting(ctx)
    assert len(greeting.suggested_topics) == 3
    assert greeting.expects is Expects.YES_NO
    assert ctx.pending_offer == greeting.suggested_topics[0]
    assert greeting.text.startswith("Hi! This is")
    for topic in greeting.suggested_topics:
        assert topic.lower() in greeting.text.lower()


def test_greeting_deterministic_given_seed(starter_store):
    a = Engine(starter_store, EngineConfig(seed=11))
    b = Engine(starter_store, EngineConfig(seed=11))
    assert a.suggestions == b.suggestions


def test_games_affirm_at_offer_fetches_next_unused_item(engine):
    ctx = fresh(engine)
    ctx.topic_stack = ["Dinosaurs"]
    ctx.active_activity = Activity.CHITCHAT
    ctx.flow_positions["Dinosaurs"] = "more_offer"
    first = run(engine, ctx, "let's talk about ourselves")  # exhaust -> game
    assert first.signature.activity is Activity.GAMES
    first_item = ctx.game_state.item_id
    run(engine, ctx, "a brontosaurus")  # answer
    follow = run(engine, ctx, "yes")  # accept offer
    assert follow.signature.activity is Activity.GAMES
    assert ctx.game_state.item_id != first_item


def test_games_deny_at_offer_exits_quietly(engine):
    ctx = fresh(engine)
    run(engine, ctx, "lets play a game")
    assert ctx.active_activity is Activity.GAMES
    run(engine, ctx, "the first one")
    turn = run(engine, ctx, "no thanks")
    assert ctx.active_activity is None
    assert turn.text.startswith("Alright.")


def test_scored_content_never_repeats_in_session(engine):
    # Single-turn content (trivia, facts, prompts) may be served once, ever.
    # Game items sign both their ask and answer turns, and stories sign every
    # installment, so those are checked as never re-posed / never re-begun.
    ctx = fresh(engine)
    game_ids = (
        set(engine.store.wyr_items) | set(engine.store.hypothetical_items)
        | set(engine.store.riddle_items) | set(engine.store.joke_items)
    )
    single_serve_ids = set(engine.store.items) - game_ids
    seen_single: list[str] = []
    posed_games: list[str] = []
    begun_stories: list[str] = []
    rng = random.Random(42)
    texts = ["yes", "no", "dinosaurs", "music", "tell me a story", "lets play a game",
             "what about pirates", "i like loud guitars", "hmm", "star wars"]
    for _ in range(60):
        turn = run(engine, ctx, rng.choice(texts))
        source = turn.signature.source_id
        if source in single_serve_ids:
            seen_single.append(source)
        if source in game_ids and ctx.game_state and ctx.game_state.item_id == source:
            if turn.text == engine.store.items[source].text:  # the pose turn
                posed_games.append(source)
        if source in engine.store.stories and turn.text.startswith("Alright, I'll tell you"):
            begun_stories.append(source)
    assert len(seen_single) == len(set(seen_single))
    assert len(posed_games) == len(set(posed_games))
    assert len(begun_stories) == len(set(begun_stories))


def test_next_turn_increments_turn_index_once_per_exchange(engine):
    ctx = fresh(engine)
    for expected, text in enumerate(["hi", "yes", "dinosaurs"], start=1):
        run(engine, ctx, text)
        assert ctx.turn_index == expected


def test_used_content_ids_only_grow(engine):
    ctx = fresh(engine)
    snapshots = []
    for text in ["dinosaurs", "yes", "yes", "trex", "because teeth", "yes"]:
        run(engine, ctx, text)
        snapshots.append(set(ctx.used_content_ids))
    for before, after in zip(snapshots, snapshots[1:]):
        assert before <= after


def test_affirm_after_trivia_offer_serves_trivia(engine):
    # walk the music flow to its trivia offer, then accept
    ctx = fresh(engine)
    run(engine, ctx, "music")                       # ask_kind
    run(engine, ctx, "i like classical cello music")  # classical_ack
    run(engine, ctx, "nobody you would know")       # wish_knew
    offer = run(engine, ctx, "mostly piano stuff")  # check_out: trivia offer
    assert "music trivia" in offer.text
    trivia = run(engine, ctx, "yes")
    assert trivia.text.startswith("Did you know that")
    assert trivia.signature.source_id == "flow:Music:trivia_loop"
    # the served item was consumed, so the next accept serves a different one
    first_body = trivia.text
    second = run(engine, ctx, "yes")
    assert second.text != first_body


def test_game_exhaustion_signal_switches_content(engine):
    ctx = fresh(engine)
    ctx.topic_stack = ["Harry Potter"]
    ctx.active_activity = Activity.CHITCHAT
    ctx.flow_positions["Harry Potter"] = FLOW_DONE
    first = run(engine, ctx, "lets play a game")
    assert first.signature.activity is Activity.GAMES
    run(engine, ctx, "slytherin")
    # only one would-you-rather ships for this topic; accepting the offer
    # must exhaust the kind and hand control onward without going quiet
    follow = run(engine, ctx, "yes")
    assert follow.text.strip()
    assert follow.signature.source_id != first.signature.source_id


def test_topic_slot_renders_in_flow_prompt(engine):
    ctx = fresh(engine)
    run(engine, ctx, "astronomy")            # intro
    run(engine, ctx, "yes")                  # follow_ack
    run(engine, ctx, "saturn obviously")     # object_ack
    turn = run(engine, ctx, "yes")           # ask_telescope
    assert "telescope" in turn.text
    rendered = run(engine, ctx, "yes")       # telescope_yes uses the topic slot
    assert "astronomy does that to people" in rendered.text.lower()


def test_signature_totality_over_random_walk(engine):
    ctx = fresh(engine)
    rng = random.Random(9)
    texts = ["yes", "no", "stop", "music", "why", "tell me a story", "", "ok then", "what"]
    for _ in range(40):
        turn = run(engine, ctx, rng.choice(texts), confidence=rng.choice([0.95, 0.3]))
        assert turn.text
        assert turn.signature.source_id
        assert turn.signature.activity in Activity
