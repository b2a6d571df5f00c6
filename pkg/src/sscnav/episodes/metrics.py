"""Success rate and SPL."""

from __future__ import annotations

from collections import defaultdict

from .types import EpisodeResult, EpisodeSpec


def spl_term(result: EpisodeResult, spec: EpisodeSpec, min_length: float = 0.0) -> float:
    if not result.success:
        return 0.0
    l = max(spec.shortest_path, min_length)
    p = result.path_length
    return l / max(p, l) if l > 0 else 1.0


def _summary(pairs, min_length):
    k = len(pairs)
    if k == 0:
        return {"episodes": 0, "success_rate": float("nan"), "spl": float("nan")}
    succ = sum(r.success for r, _ in pairs)
    spl = sum(spl_term(r, s, min_length) for r, s in pairs)
    return {"episodes": k, "success_rate": succ / k, "spl": spl / k}


def compute_metrics(pairs, min_length: float = 0.0625, category_names=None) -> dict:
    """Success rate, SPL, and both per goal category.

    ``pairs`` holds ``(EpisodeResult, EpisodeSpec)``. Shortest paths below
    ``min_length`` (one cell by default) are raised to it.
    """
    pairs = list(pairs)
    out = _summary(pairs, min_length)
    by = defaultdict(list)
    for r, s in pairs:
        by[s.goal].append((r, s))
    name = (lambda g: category_names[g]) if category_names is not None else (lambda g: g)
    out["per_category"] = {name(g): _summary(v, min_length) for g, v in sorted(by.items())}
    return out
