"""Threshold completion via chromatic coding.

Per coloring: every color class must induce a split graph; the cross product
of per-class split partitions yields global (C, I) candidates, each finished
by making C a clique and nesting the I-to-C neighborhoods with the exact
chain-completion DP.  Exhaustive coloring mode is exact; randomized mode is
exact whenever some sampled coloring properly colors an optimal solution.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .graph import CompletionSet, Graph, bits, non_edges_within
from .oracles import exact_chain_completion
from .recognition import SplitPartition, is_threshold, split_partitions_within
from .tp_subexp import sqrt_budgets

EXHAUSTIVE_GUARD = 10 ** 6
DEFAULT_ASSEMBLY_CAP = 5_000_000


class ColoringGuardError(ValueError):
    """Exhaustive family would exceed the guard; suggests randomized mode."""


@dataclass(frozen=True)
class ColoringFamily:
    t: int
    mode: str
    colorings: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class PartitionAssembly:
    """Per-class split partitions plus the assembled global (C, I)."""

    per_class: tuple[SplitPartition, ...]
    clique: int
    independent: int


def default_color_count(k: int, mode: str = "exhaustive") -> int:
    t = max(1, sqrt_budgets(k)[1])
    if mode == "randomized":
        t = max(2, t)
    return t


def default_trials(k: int, t: int) -> int:
    """Trials so a fixed k-edge solution is properly colored w.p. >= 0.99.

    A graph with k edges is d-degenerate for d = floor((sqrt(8k+1)-1)/2);
    coloring vertices in degeneracy order, each of the <= k vertices with a
    colored back-neighbor survives with probability >= 1 - d/t, so one
    uniform coloring is proper with probability >= (1 - d/t)^k.
    """
    if k <= 0:
        return 1
    d = int((math.isqrt(8 * k + 1) - 1) // 2)
    if d >= t:
        raise ValueError("color count too small for the budget")
    p = (1.0 - d / t) ** k
    return max(1, math.ceil(math.log(0.01) / math.log(1.0 - p)))


def build_coloring_family(n: int, k: int, t: Optional[int] = None,
                          mode: str = "exhaustive", trials: Optional[int] = None,
                          seed: int = 0) -> ColoringFamily:
    """Exhaustive (all t^n colorings) or seeded-random coloring family."""
    if mode not in ("exhaustive", "randomized"):
        raise ValueError(f"bad mode {mode!r}")
    if t is None:
        t = default_color_count(k, mode)
    if mode == "exhaustive":
        if t ** n > EXHAUSTIVE_GUARD:
            raise ColoringGuardError(
                f"{t}^{n} colorings exceed the exhaustive guard; "
                "use randomized mode")
        colorings = []
        cur = [0] * n
        while True:
            colorings.append(tuple(cur))
            i = n - 1
            while i >= 0 and cur[i] == t - 1:
                cur[i] = 0
                i -= 1
            if i < 0:
                break
            cur[i] += 1
        if n == 0:
            colorings = [()]
        return ColoringFamily(t, mode, tuple(colorings))
    if t < 2:
        raise ValueError("randomized mode needs at least two colors")
    if trials is None:
        trials = default_trials(k, t)
    rng = random.Random(seed)
    colorings = tuple(tuple(rng.randrange(t) for _ in range(n))
                      for _ in range(trials))
    return ColoringFamily(t, mode, colorings)


def _class_masks(coloring: tuple[int, ...]) -> tuple[int, ...]:
    classes: dict[int, int] = {}
    for v, c in enumerate(coloring):
        classes[c] = classes.get(c, 0) | (1 << v)
    return tuple(classes[c] for c in sorted(classes))


def assemble_partitions(g: Graph, coloring: tuple[int, ...]) -> list[PartitionAssembly]:
    """Cross product of per-class split partitions, filtered to independent I.

    Returns [] when some color class does not induce a split graph.
    """
    masks = _class_masks(coloring)
    per_class: list[list[SplitPartition]] = []
    for mask in masks:
        parts = split_partitions_within(g, mask)
        if parts is None:
            return []
        per_class.append(parts)
    out: list[PartitionAssembly] = []

    def expand(i: int, chosen: list[SplitPartition], c_acc: int, i_acc: int) -> None:
        if i == len(per_class):
            out.append(PartitionAssembly(tuple(chosen), c_acc, i_acc))
            return
        for p in per_class[i]:
            ni = i_acc | p.independent
            if _has_internal_edge(g, ni):
                continue
            chosen.append(p)
            expand(i + 1, chosen, c_acc | p.clique, ni)
            chosen.pop()

    expand(0, [], 0, 0)
    return out


def _has_internal_edge(g: Graph, mask: int) -> bool:
    for v in bits(mask):
        if g.adj[v] & mask:
            return True
    return False


def _partition_keys(colorings: Iterable[tuple[int, ...]]) -> Iterator[tuple[int, ...]]:
    """Deduplicate colorings that induce the same class partition."""
    seen = set()
    for coloring in colorings:
        key = tuple(sorted(_class_masks(coloring)))
        if key not in seen:
            seen.add(key)
            yield key


def _set_partitions_upto(n: int, t: int) -> Iterator[tuple[int, ...]]:
    """Set partitions of 0..n-1 into at most t blocks, as mask tuples.

    These are exactly the class partitions induced by the t^n exhaustive
    colorings, enumerated once each (restricted growth strings).
    """
    if n == 0:
        yield ()
        return
    rgs = [0] * n

    def rec(i: int, used: int):
        if i == n:
            masks = [0] * used
            for v, c in enumerate(rgs):
                masks[c] |= 1 << v
            yield tuple(sorted(masks))
            return
        for c in range(min(used + 1, t)):
            rgs[i] = c
            yield from rec(i + 1, max(used, c + 1))

    yield from rec(1, 1)


def threshold_complete(g: Graph, k: int, mode: str = "exhaustive",
                       t: Optional[int] = None, trials: Optional[int] = None,
                       seed: int = 0, assembly_cap: int = DEFAULT_ASSEMBLY_CAP,
                       stats: Optional[dict] = None) -> Optional[CompletionSet]:
    """Minimum threshold completion of size <= k found through the colorings.

    Exact in exhaustive mode; in randomized mode exact when lucky (the
    ``exact`` stats flag records which guarantee applies).  Additions go
    inside C and from I to C only.
    """
    if k < 0:
        raise ValueError("budget must be non-negative")
    t0 = time.perf_counter()
    if stats is not None:
        stats.update({"colorings": 0, "assemblies": 0, "pairs_tested": 0,
                      "exact": mode == "exhaustive", "best_trace": []})
    if is_threshold(g):
        if stats is not None:
            stats["elapsed"] = time.perf_counter() - t0
        return CompletionSet((), "addition")
    if mode == "exhaustive":
        tt = t if t is not None else default_color_count(k, mode)
        if tt ** g.n > EXHAUSTIVE_GUARD:
            raise ColoringGuardError(
                f"{tt}^{g.n} colorings exceed the exhaustive guard; "
                "use randomized mode")
        keys = _set_partitions_upto(g.n, tt)
    else:
        family = build_coloring_family(g.n, k, t, mode, trials, seed)
        keys = _partition_keys(family.colorings)
    best: Optional[tuple[int, CompletionSet]] = None
    seen_pairs: set[int] = set()
    split_cache: dict[int, Optional[list[SplitPartition]]] = {}
    budget_left = assembly_cap
    for class_masks in keys:
        if stats is not None:
            stats["colorings"] += 1
        per_class = []
        ok = True
        for mask in class_masks:
            parts = split_cache.get(mask, False)
            if parts is False:
                parts = split_partitions_within(g, mask)
                split_cache[mask] = parts
            if parts is None:
                ok = False
                break
            per_class.append(parts)
        if not ok:
            continue
        budget_left -= 1
        assembled: list[int] = []

        # Cross product with early pruning on the independent side.
        def expand(i: int, c_acc: int, i_acc: int) -> None:
            nonlocal budget_left
            if budget_left <= 0:
                raise ColoringGuardError("assembly cross product exceeded cap")
            if i == len(per_class):
                assembled.append(c_acc)
                return
            for p in per_class[i]:
                ni = i_acc | p.independent
                if _has_internal_edge(g, ni):
                    continue
                budget_left -= 1
                expand(i + 1, c_acc | p.clique, ni)

        expand(0, 0, 0)
        for c_mask in assembled:
            if stats is not None:
                stats["assemblies"] += 1
            if c_mask in seen_pairs:
                continue
            seen_pairs.add(c_mask)
            i_mask = g.vertices & ~c_mask
            clique_cost = non_edges_within(g, c_mask)
            cap = k if best is None else best[0] - 1
            if clique_cost > cap:
                continue
            if stats is not None:
                stats["pairs_tested"] += 1
            chain = exact_chain_completion(i_mask, c_mask,
                                           _cross_subgraph(g, i_mask, c_mask),
                                           cap - clique_cost)
            if chain is None:
                continue
            pairs = list(chain.pairs)
            for u, v in _missing_within(g, c_mask):
                pairs.append((u, v))
            cand = CompletionSet(tuple(pairs), "addition")
            assert cand.size == clique_cost + chain.size
            if best is None or cand.size < best[0]:
                best = (cand.size, cand)
                if stats is not None:
                    stats["best_trace"].append(cand.size)
                if cand.size == 0:
                    break
    if best is None:
        if stats is not None:
            stats["elapsed"] = time.perf_counter() - t0
        return None
    result = best[1]
    assert result.size <= k
    assert is_threshold(result.apply(g))
    if stats is not None:
        stats["elapsed"] = time.perf_counter() - t0
    return result


def _cross_subgraph(g: Graph, i_mask: int, c_mask: int) -> Graph:
    """Bipartite subgraph keeping only the I-to-C edges."""
    adj = [0] * g.n
    for v in bits(i_mask):
        adj[v] = g.adj[v] & c_mask
    for v in bits(c_mask):
        adj[v] = g.adj[v] & i_mask
    return Graph(g.n, adj)


def _missing_within(g: Graph, mask: int):
    vs = list(bits(mask))
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            if not g.has_edge(u, v):
                yield (u, v)
