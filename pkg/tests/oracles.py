"""Independent reference implementations the tests check the package against.

These deliberately avoid the package's own code paths: retrieval is a linear
scan, the rank statistic is a pairwise count, and correlation is the textbook
definition with p-values delegated to scipy.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from scipy import stats as scipy_stats


def normalize_text(text: str) -> str:
    # Kept deliberately separate from parlor.text.normalize; mirrors the
    # documented rule: lowercase, strip accents/punctuation, collapse spaces.
    import unicodedata

    text = unicodedata.normalize("NFKD", text)
    text = "".join(c for c in text if not unicodedata.combining(c))
    text = text.lower()
    for ch in "‘’'`":
        text = text.replace(ch, "")
    out = []
    for ch in text:
        out.append(ch if ch.isalnum() else " ")
    return " ".join("".join(out).split())


def scan_query(
    items: Iterable,
    topics: Sequence[str],
    entities: Sequence[str],
    genre=None,
    activity=None,
    resolve_topic=None,
):
    """Brute-force retrieval: linear scan, overlap scoring, same ordering."""
    topic_set = set()
    for t in topics:
        canonical = resolve_topic(t) if resolve_topic else t
        if canonical is not None:
            topic_set.add(canonical)
    forms = {normalize_text(e) for e in entities}
    forms.discard("")

    results = []
    for item in items:
        if genre is not None and item.genre is not genre:
            continue
        if activity is not None and item.handcrafted_for is not activity:
            continue
        topic_hits = len(topic_set & set(item.topics))
        entity_hits = 0
        for ref in item.entities:
            ref_forms = {normalize_text(ref.canonical)} | {normalize_text(a) for a in ref.aliases}
            ref_forms.discard("")
            if ref_forms & forms:
                entity_hits += 1
        score = float(topic_hits + entity_hits)
        if score > 0:
            results.append((item, score))
    results.sort(key=lambda pair: (-pair[1], pair[0].id))
    return results


def pairwise_u(a: Sequence[float], b: Sequence[float]) -> float:
    """Exhaustive pairwise count: wins for `a` plus half credit for ties."""
    u = 0.0
    for x in a:
        for y in b:
            if x > y:
                u += 1.0
            elif x == y:
                u += 0.5
    return u


def definitional_pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    num = sum((a - mx) * (b - my) for a, b in zip(x, y))
    den = math.sqrt(sum((a - mx) ** 2 for a in x)) * math.sqrt(sum((b - my) ** 2 for b in y))
    return num / den


def pearson_reference(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Definitional r; p from scipy's t distribution (independent route)."""
    r = definitional_pearson_r(x, y)
    n = len(x)
    if abs(r) >= 1.0:
        return r, 0.0
    t = r * math.sqrt((n - 2) / (1 - r * r))
    p = 2.0 * float(scipy_stats.t.sf(abs(t), n - 2))
    return r, p
