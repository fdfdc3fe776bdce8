"""Mixed-initiative social chat engine.

Topic-indexed content retrieval, rule-based understanding, flow-graph
chit-chat, verbal games, installment storytelling, a search/fallback ladder,
signature-stamped telemetry with an analytics pipeline, and a chat gateway.
"""

from .content import ContentItem, ContentStore, Genre, PackError, load_pack
from .engine import DialogueContext, Engine, EngineConfig, arbitrate, rank_candidates
from .gateway import Gateway, GatewayError, create_app
from .nlu import Intent, IntentKind, NluResult, UserUtterance, analyze
from .registry import DEFAULT_TOPICS, TopicRegistry
from .stats import CorrelationResult, UTestResult, mann_whitney, pearson
from .turns import Activity, Candidate, Expects, Signature, SystemTurn, Tier

__version__ = "0.1.0"

__all__ = [
    "Activity",
    "Candidate",
    "ContentItem",
    "ContentStore",
    "CorrelationResult",
    "DEFAULT_TOPICS",
    "DialogueContext",
    "Engine",
    "EngineConfig",
    "Expects",
    "Gateway",
    "GatewayError",
    "Genre",
    "Intent",
    "IntentKind",
    "NluResult",
    "PackError",
    "Signature",
    "SystemTurn",
    "Tier",
    "TopicRegistry",
    "UTestResult",
    "UserUtterance",
    "analyze",
    "arbitrate",
    "create_app",
    "load_pack",
    "mann_whitney",
    "pearson",
    "rank_candidates",
    "__version__",
]
