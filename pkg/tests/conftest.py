from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from parlor.content import ContentStore, load_pack
from parlor.engine import Engine, EngineConfig
from parlor.registry import TopicRegistry


def starter_pack_text() -> str:
    return resources.files("parlor.data").joinpath("starter.pack.jsonl").read_text("utf-8")


def transcript(name: str) -> dict:
    import json

    raw = resources.files("parlor.data").joinpath(f"transcript_{name}.json").read_text("utf-8")
    return json.loads(raw)


@pytest.fixture(scope="session")
def registry() -> TopicRegistry:
    return TopicRegistry.default()


@pytest.fixture(scope="session")
def starter_store() -> ContentStore:
    return load_pack(starter_pack_text())


@pytest.fixture()
def engine(starter_store) -> Engine:
    return Engine(starter_store, EngineConfig(seed=0))


@pytest.fixture()
def engine_factory(starter_store):
    def make(seed: int = 0, **overrides) -> Engine:
        return Engine(starter_store, EngineConfig(seed=seed, **overrides))

    return make
