"""Canonical topic registry with case-insensitive alias lookup.

The default build registers the 42 content topics the engine ships flows and
content for; deployments can extend the set through the constructor.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .text import normalize

DEFAULT_TOPICS: tuple[str, ...] = (
    "Animals",
    "Astronomy",
    "Board Games",
    "Books",
    "Box Office",
    "Cartoons",
    "Comic Books",
    "Dinosaurs",
    "Favorite Food",
    "Fictional Characters",
    "Fun Facts",
    "Gossip",
    "Harry Potter",
    "Health",
    "History",
    "Hobbies",
    "Holidays",
    "Horoscope",
    "Weather",
    "Language",
    "Marvel Cinematic Universe",
    "Monsters",
    "Music",
    "News Headlines",
    "Nutrition",
    "Pirates",
    "Poems",
    "Pokemon",
    "Famous Quotes",
    "Recipe",
    "Science Fiction",
    "Shopping",
    "Sports",
    "Star Wars",
    "Star Trek",
    "Fashion",
    "Technology",
    "Tolkien",
    "Travel",
    "Trivia",
    "TV",
    "Video Games",
)

# Aliases beyond the lowercased topic name itself.
_DEFAULT_ALIASES: dict[str, str] = {
    "animal": "Animals",
    "pet": "Animals",
    "pets": "Animals",
    "space": "Astronomy",
    "stars": "Astronomy",
    "planets": "Astronomy",
    "board game": "Board Games",
    "book": "Books",
    "novels": "Books",
    "reading": "Books",
    "movie": "Box Office",
    "movies": "Box Office",
    "film": "Box Office",
    "films": "Box Office",
    "cartoon": "Cartoons",
    "anime": "Cartoons",
    "comics": "Comic Books",
    "comic book": "Comic Books",
    "dinosaur": "Dinosaurs",
    "dino": "Dinosaurs",
    "dinos": "Dinosaurs",
    "food": "Favorite Food",
    "foods": "Favorite Food",
    "fictional character": "Fictional Characters",
    "fun fact": "Fun Facts",
    "facts": "Fun Facts",
    "celebrity": "Gossip",
    "celebrities": "Gossip",
    "hogwarts": "Harry Potter",
    "fitness": "Health",
    "hobby": "Hobbies",
    "holiday": "Holidays",
    "zodiac": "Horoscope",
    "astrology": "Horoscope",
    "languages": "Language",
    "marvel": "Marvel Cinematic Universe",
    "marvel c u": "Marvel Cinematic Universe",
    "mcu": "Marvel Cinematic Universe",
    "monster": "Monsters",
    "song": "Music",
    "songs": "Music",
    "musician": "Music",
    "musicians": "Music",
    "band": "Music",
    "news": "News Headlines",
    "headlines": "News Headlines",
    "diet": "Nutrition",
    "pirate": "Pirates",
    "poem": "Poems",
    "poetry": "Poems",
    "quote": "Famous Quotes",
    "quotes": "Famous Quotes",
    "recipes": "Recipe",
    "cooking": "Recipe",
    "sci fi": "Science Fiction",
    "scifi": "Science Fiction",
    "sport": "Sports",
    "starwars": "Star Wars",
    "startrek": "Star Trek",
    "clothes": "Fashion",
    "style": "Fashion",
    "tech": "Technology",
    "computers": "Technology",
    "lord of the rings": "Tolkien",
    "lotr": "Tolkien",
    "the hobbit": "Tolkien",
    "hobbit": "Tolkien",
    "middle earth": "Tolkien",
    "vacation": "Travel",
    "television": "TV",
    "tv show": "TV",
    "tv shows": "TV",
    "video game": "Video Games",
    "videogames": "Video Games",
    "gaming": "Video Games",
}


class UnknownTopicError(KeyError):
    """Raised when an alias points at a topic that is not registered."""


class TopicRegistry:
    """Ordered set of canonical topic names plus an alias table.

    Lookup is case- and punctuation-insensitive. Every alias must resolve to
    a registered topic; construction fails otherwise.
    """

    def __init__(self, topics: Iterable[str], aliases: Mapping[str, str] | None = None):
        self._topics = tuple(dict.fromkeys(topics))
        self._order = {t: i for i, t in enumerate(self._topics)}
        self._aliases: dict[str, str] = {}
        for topic in self._topics:
            self._aliases[normalize(topic)] = topic
        for alias, canonical in (aliases or {}).items():
            if canonical not in self._order:
                raise UnknownTopicError(f"alias {alias!r} points at unregistered topic {canonical!r}")
            self._aliases[normalize(alias)] = canonical

    @classmethod
    def default(
        cls,
        extra_topics: Iterable[str] = (),
        extra_aliases: Mapping[str, str] | None = None,
    ) -> "TopicRegistry":
        aliases = dict(_DEFAULT_ALIASES)
        aliases.update(extra_aliases or {})
        return cls((*DEFAULT_TOPICS, *extra_topics), aliases)

    @property
    def topics(self) -> tuple[str, ...]:
        return self._topics

    def __len__(self) -> int:
        return len(self._topics)

    def __contains__(self, name: object) -> bool:
        return isinstance(name, str) and self.resolve(name) is not None

    def resolve(self, name: str) -> str | None:
        """Canonical topic for a name or alias, or None."""
        return self._aliases.get(normalize(name))

    def order_key(self, topic: str) -> int:
        """Registration order of a canonical topic (for stable sorts)."""
        return self._order[topic]

    def alias_table(self) -> dict[str, str]:
        """Alias -> canonical pairs, excluding the topic names themselves."""
        self_names = {normalize(t) for t in self._topics}
        return {a: c for a, c in self._aliases.items() if a not in self_names}

    def topics_in_text(self, text: str) -> list[str]:
        """Canonical topics mentioned in the text, in order of first mention."""
        hay = f" {normalize(text)} "
        found: dict[str, int] = {}
        for alias, canonical in self._aliases.items():
            pos = hay.find(f" {alias} ")
            if pos < 0:
                continue
            if canonical not in found or pos < found[canonical]:
                found[canonical] = pos
        return sorted(found, key=lambda t: (found[t], self._order[t]))

    def canonicalize_all(self, names: Iterable[str]) -> list[str]:
        """Resolve each name, raising UnknownTopicError on a miss."""
        out = []
        for name in names:
            canonical = self.resolve(name)
            if canonical is None:
                raise UnknownTopicError(f"unknown topic {name!r}")
            out.append(canonical)
        return out


__all__ = [
    "DEFAULT_TOPICS",
    "TopicRegistry",
    "UnknownTopicError",
]
